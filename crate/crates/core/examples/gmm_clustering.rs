// Gaussian mixture sweep over k and covariance structure, chosen by BIC.

use graphstats::cluster::{adjusted_rand_index, gmm_sweep, CovarianceType};
use graphstats::embed::ase;
use graphstats::sims::{sample_sbm, SbmParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = SbmParams::new(
        vec![80, 80, 80],
        vec![
            vec![0.6, 0.1, 0.1],
            vec![0.1, 0.5, 0.1],
            vec![0.1, 0.1, 0.4],
        ],
    );
    let g = sample_sbm(&params, None, 5)?;
    let x = ase(&g, Some(3), 2)?.x;
    let sweep = gmm_sweep(&x, &[2, 3, 4, 5], &CovarianceType::ALL, 5)?;
    println!(
        "best: k = {}, {:?} covariance, BIC {:.1}",
        sweep.best.k, sweep.best.covariance_type, sweep.best.bic
    );
    println!(
        "ARI against blocks: {:.3}",
        adjusted_rand_index(&sweep.best.labels, &params.memberships())?
    );
    for entry in sweep.table.iter().filter(|e| e.k == sweep.best.k) {
        println!(
            "  k = {} {:?}: {:.1}",
            entry.k, entry.covariance_type, entry.score
        );
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
