// Pairplot of a three-dimensional embedding coloured by block.

use graphstats::embed::ase;
use graphstats::sims::{sample_sbm, SbmParams};
use graphstats::viz::pairplot_svg;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = SbmParams::new(
        vec![40, 40, 40],
        vec![
            vec![0.6, 0.1, 0.1],
            vec![0.1, 0.5, 0.1],
            vec![0.1, 0.1, 0.4],
        ],
    );
    let g = sample_sbm(&params, None, 4)?;
    let x = ase(&g, Some(3), 2)?.x;
    let svg = pairplot_svg(&x, g.labels(), None, Some("ASE, d = 3"))?;
    let path = std::env::temp_dir().join("graphstats-pairplot.svg");
    std::fs::write(&path, &svg)?;
    println!(
        "{} scatter panels, {} histograms -> {}",
        svg.matches("panel scatter").count(),
        svg.matches("panel hist").count(),
        path.display()
    );
    Ok(())
}

fn main() {
    run_example().unwrap();
}
