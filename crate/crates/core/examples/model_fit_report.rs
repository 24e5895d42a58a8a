// Fit the model hierarchy to a degree-corrected SBM sample and write the
// goodness-of-fit report with one heatmap per fitted probability matrix.

use graphstats::cli::{pipeline_fit_report, Outputs, ReportOptions};
use graphstats::models::{BlockFitOptions, ModelKind};
use graphstats::sims::{sample_sbm, SbmParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let theta: Vec<f64> = (0..120)
        .map(|i| 1.0 / (1.0 + (i % 40) as f64 / 8.0))
        .collect();
    let params = SbmParams::new(
        vec![40, 40, 40],
        vec![
            vec![0.7, 0.1, 0.05],
            vec![0.1, 0.6, 0.1],
            vec![0.05, 0.1, 0.5],
        ],
    )
    .with_degree_corrections(theta);
    let g = sample_sbm(&params, None, 3)?;
    let dir = std::env::temp_dir().join("graphstats-model-fit-report");
    let options = ReportOptions {
        block: BlockFitOptions {
            labels: g.labels().map(<[String]>::to_vec),
            ..Default::default()
        },
        d: Some(3),
        ..Default::default()
    };
    let mut outputs = Outputs::default();
    let report = pipeline_fit_report(
        &g,
        &ModelKind::ALL,
        &options,
        &dir.join("report.json"),
        &mut outputs,
    )
    .map_err(|e| format!("{e:?}"))?;
    for row in &report.table {
        println!(
            "{:<6} mse {:>9.2}  loglik {:>10.2}  params {:>5}  bic {:>10.2}",
            row.model, row.mse, row.log_likelihood, row.n_params, row.bic
        );
    }
    println!(
        "lowest BIC: {}; wrote {} files under {}",
        report.best_bic,
        outputs.files().len(),
        dir.display()
    );
    Ok(())
}

fn main() {
    run_example().unwrap();
}
