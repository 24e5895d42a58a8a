// k-means with k chosen by the silhouette score.

use graphstats::cluster::{kmeans_sweep, silhouette_score};
use nalgebra::DMatrix;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let centers = [(0.0, 0.0), (5.0, 0.0), (0.0, 5.0), (5.0, 5.0)];
    let data = DMatrix::from_fn(80, 2, |i, j| {
        let (cx, cy) = centers[i % 4];
        let jitter = ((i * 37 + j * 11) % 17) as f64 / 17.0 - 0.5;
        if j == 0 {
            cx + jitter
        } else {
            cy + jitter
        }
    });
    let sweep = kmeans_sweep(&data, &[2, 3, 4, 5, 6], 0)?;
    for e in &sweep.table {
        println!("k = {}: silhouette {:.3}", e.k, e.score);
    }
    println!(
        "chosen k = {}, inertia {:.2}",
        sweep.best.k, sweep.best.inertia
    );
    println!("check: {:.3}", silhouette_score(&data, &sweep.best.labels)?);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
