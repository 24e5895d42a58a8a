// Profile likelihood elbows of a scree plot.

use graphstats::embed::select_dimension;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let values = [10.0, 9.8, 1.0, 0.9, 0.8];
    let sel = select_dimension(&values, 1)?;
    println!("elbows for {values:?}: {:?}", sel.elbows);

    let mut scree: Vec<f64> = vec![40.0, 35.0, 30.0];
    scree.extend((0..20).map(|k| 5.0 - 0.1 * k as f64));
    scree.extend((0..20).map(|k| 1.0 - 0.01 * k as f64));
    let sel = select_dimension(&scree, 2)?;
    println!(
        "two elbows: {:?}, default dimension {}",
        sel.elbows,
        sel.default_dimension()
    );
    Ok(())
}

fn main() {
    run_example().unwrap();
}
