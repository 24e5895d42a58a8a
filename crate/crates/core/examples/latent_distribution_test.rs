// Unmatched two-graph test comparing latent position distributions, here
// on graphs of different sizes.

use graphstats::inference::latent_distribution_test;
use graphstats::sims::{sample_sbm, SbmParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let b = vec![vec![0.5, 0.1], vec![0.1, 0.5]];
    let g1 = sample_sbm(&SbmParams::new(vec![50, 50], b.clone()), None, 1)?;
    let g2 = sample_sbm(&SbmParams::new(vec![45, 45], b), None, 2)?;
    let same = latent_distribution_test(&g1, &g2, Some(2), 100, 0)?;
    println!(
        "same model: MMD = {:.4}, p = {:.3}",
        same.statistic, same.p_value
    );

    let g3 = sample_sbm(
        &SbmParams::new(vec![45, 45], vec![vec![0.8, 0.1], vec![0.1, 0.2]]),
        None,
        3,
    )?;
    let diff = latent_distribution_test(&g1, &g3, Some(2), 100, 0)?;
    println!(
        "different B: MMD = {:.4}, p = {:.3}",
        diff.statistic, diff.p_value
    );
    Ok(())
}

fn main() {
    run_example().unwrap();
}
