// Vertex-matched two-graph test on latent positions.

use graphstats::inference::latent_position_test;
use graphstats::sims::{sample_er_np, sample_rdpg};
use nalgebra::DMatrix;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let x = DMatrix::from_fn(100, 1, |i, _| 0.3 + 0.4 * (i as f64 / 99.0));
    let g1 = sample_rdpg(&x, None, false, None, 1)?;
    let g2 = sample_rdpg(&x, None, false, None, 2)?;
    let same = latent_position_test(&g1, &g2, Some(1), 50, 0)?;
    println!(
        "same positions: T = {:.3}, p = {:.3}",
        same.statistic, same.p_value
    );

    let sparse = sample_er_np(100, 0.1, false, false, None, 3)?;
    let dense = sample_er_np(100, 0.7, false, false, None, 4)?;
    let diff = latent_position_test(&sparse, &dense, Some(1), 50, 0)?;
    println!(
        "ER 0.1 vs 0.7: T = {:.3}, p = {:.4}",
        diff.statistic, diff.p_value
    );
    Ok(())
}

fn main() {
    run_example().unwrap();
}
