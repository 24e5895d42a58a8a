// Joint embeddings of several graphs: omnibus and MASE.

use graphstats::embed::{mase, omnibus_embed};
use graphstats::sims::{sample_sbm, SbmParams};
use graphstats::Graph;

fn unlabeled(g: Graph) -> Graph {
    Graph::new(g.into_adjacency(), false).expect("sampled graphs are valid")
}

fn mean_row_distance(a: &nalgebra::DMatrix<f64>, b: &nalgebra::DMatrix<f64>) -> f64 {
    (0..a.nrows())
        .map(|i| (a.row(i) - b.row(i)).norm())
        .sum::<f64>()
        / a.nrows() as f64
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let same = SbmParams::new(vec![60, 60], vec![vec![0.6, 0.1], vec![0.1, 0.5]]);
    let other = SbmParams::new(vec![60, 60], vec![vec![0.3, 0.3], vec![0.3, 0.6]]);
    let gs = vec![
        unlabeled(sample_sbm(&same, None, 1)?),
        unlabeled(sample_sbm(&same, None, 2)?),
        unlabeled(sample_sbm(&other, None, 3)?),
    ];
    let omni = omnibus_embed(&gs, Some(2), 2)?;
    println!(
        "omnibus: same-model distance {:.3}",
        mean_row_distance(&omni[0].x, &omni[1].x)
    );
    println!(
        "omnibus: other-model distance {:.3}",
        mean_row_distance(&omni[0].x, &omni[2].x)
    );

    let m = mase(&gs, Some(2), 2)?;
    println!("MASE basis {}x{}", m.v.nrows(), m.v.ncols());
    for (i, r) in m.scores.iter().enumerate() {
        println!("R_{i} = {:.2?}", r.as_slice());
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
