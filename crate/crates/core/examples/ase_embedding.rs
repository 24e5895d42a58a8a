// Adjacency and Laplacian spectral embeddings of an SBM sample, clustered
// with k-means.

use graphstats::cluster::{adjusted_rand_index, kmeans_fit};
use graphstats::embed::{ase, lse};
use graphstats::sims::{sample_sbm, SbmParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = SbmParams::new(vec![100, 100], vec![vec![0.5, 0.1], vec![0.1, 0.5]]);
    let g = sample_sbm(&params, None, 1)?;
    let truth = params.memberships();

    let x = ase(&g, Some(2), 2)?;
    let km = kmeans_fit(&x.x, 2, 10, 1)?;
    println!("ASE singular values {:?}", x.singular_values);
    println!(
        "ASE + k-means ARI {:.3}",
        adjusted_rand_index(&km.labels, &truth)?
    );

    let l = lse(&g, Some(2), None, 2)?;
    let km = kmeans_fit(&l.x, 2, 10, 1)?;
    println!(
        "LSE + k-means ARI {:.3}",
        adjusted_rand_index(&km.labels, &truth)?
    );

    // Second elbow by default; the first elbow is usually the model rank.
    println!("automatic dimension: {}", ase(&g, None, 2)?.d);
    println!("first elbow: {}", ase(&g, None, 1)?.d);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
