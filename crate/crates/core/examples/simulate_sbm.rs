// Sample a two-block stochastic block model and compare block densities
// with the generating probabilities.

use graphstats::sims::{sample_sbm, SbmParams, WeightDistribution};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = SbmParams::new(vec![50, 50], vec![vec![0.5, 0.05], vec![0.05, 0.4]]);
    let g = sample_sbm(&params, None, 7)?;
    let z = params.memberships();
    let mut within = [0.0; 2];
    let mut between = 0.0;
    for i in 0..g.n() {
        for j in (i + 1)..g.n() {
            let a = g.adjacency()[(i, j)];
            if z[i] == z[j] {
                within[z[i]] += a;
            } else {
                between += a;
            }
        }
    }
    let pairs = 50.0 * 49.0 / 2.0;
    println!("block 0 density {:.3} (p = 0.5)", within[0] / pairs);
    println!("block 1 density {:.3} (p = 0.4)", within[1] / pairs);
    println!("between density {:.3} (p = 0.05)", between / 2500.0);

    // Same support, Poisson weights on the edges.
    let weighted = sample_sbm(&params, Some(&WeightDistribution::Poisson { rate: 3.0 }), 7)?;
    let same_support = g
        .adjacency()
        .iter()
        .zip(weighted.adjacency().iter())
        .all(|(a, w)| (*a != 0.0) == (*w != 0.0));
    println!("weighted sample keeps the edge support: {same_support}");
    Ok(())
}

fn main() {
    run_example().unwrap();
}
