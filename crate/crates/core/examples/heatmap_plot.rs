// Heatmap and gridplot SVGs with block-then-degree sorting.

use graphstats::sims::{sample_sbm, SbmParams};
use graphstats::viz::{gridplot_svg, heatmap_svg, HeatmapOptions, SortMode, SortSpec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = SbmParams::new(vec![20, 30], vec![vec![0.6, 0.1], vec![0.1, 0.4]]);
    let g = sample_sbm(&params, None, 2)?;
    let h = sample_sbm(&params, None, 3)?;
    let spec = SortSpec::new(
        SortMode::BlockThenDegree,
        g.labels().map(<[String]>::to_vec),
    );
    let opts = HeatmapOptions {
        title: Some("SBM sample".into()),
        ..Default::default()
    };
    let heat = heatmap_svg(g.adjacency(), &spec, &opts)?;
    let grid = gridplot_svg(
        &[g, h],
        &["first".into(), "second".into()],
        &spec,
        Some("two samples"),
    )?;
    let dir = std::env::temp_dir().join("graphstats-heatmap-plot");
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("heatmap.svg"), &heat)?;
    std::fs::write(dir.join("gridplot.svg"), &grid)?;
    println!(
        "heatmap: {} cells, gridplot: {} markers",
        heat.matches("<rect").count(),
        grid.matches("class=\"marker").count()
    );
    println!("written to {}", dir.display());
    Ok(())
}

fn main() {
    run_example().unwrap();
}
