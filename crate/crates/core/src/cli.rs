//! Command-line front end.
//!
//! `run` parses the argument vector, executes one subcommand and writes its
//! outputs plus a `<output>.manifest.json` run record. Exit codes: 0 on
//! success, 1 on usage errors, 2 on data or parameter errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cluster::{gmm_sweep, kmeans_sweep, CovarianceType};
use crate::embed::{
    ase, from_rows, lse, mase, omnibus_embed, Embedding, EmbeddingJson, DEFAULT_ELBOWS,
};
use crate::error::{Error, Result};
use crate::graph::{
    export_edge_list_with_nodes, graph_from_json, graph_to_json, import_adjacency_csv,
    import_edge_list, largest_connected_component, matrix_to_csv, multigraph_lcc_intersection,
    symmetrize, Graph, SymmetrizeMethod,
};
use crate::inference::{latent_distribution_test, latent_position_test};
use crate::json::to_canonical_string;
use crate::models::{fit, goodness_of_fit, BlockFitOptions, ModelFit, ModelKind, ModelParams};
use crate::sims::{
    sample_er_nm, sample_er_np, sample_rdpg, sample_sbm, SbmParams, WeightDistribution,
};
use crate::viz::{
    gridplot_svg, heatmap_svg, pairplot_svg, sort_indices, Colormap, HeatmapOptions, SortMode,
    SortSpec,
};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "graphstats", version, about = "Statistical analysis of graphs")]
struct Cli {
    /// Random seed; generated and recorded in the manifest when omitted.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample random graphs.
    #[command(subcommand)]
    Simulate(Simulate),
    /// Clean up observed graphs.
    #[command(subcommand)]
    Preprocess(Preprocess),
    /// Spectral embeddings.
    #[command(subcommand)]
    Embed(Embed),
    /// Fit random graph models.
    #[command(subcommand)]
    Fit(Fit),
    /// Two-graph hypothesis tests.
    #[command(subcommand)]
    Test(TestCmd),
    /// Cluster embedded points.
    #[command(subcommand)]
    Cluster(ClusterCmd),
    /// SVG figures.
    #[command(subcommand)]
    Plot(Plot),
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Output path; `.json` selects graph JSON for graph outputs.
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
}

#[derive(Args, Debug, Clone)]
struct InputOptions {
    /// Treat edge lists as directed (adjacency CSVs are directed when asymmetric).
    #[arg(long)]
    directed: bool,
    #[arg(long, value_enum, default_value_t = InputFormat::Edgelist)]
    format: InputFormat,
    /// Node labels, one per line.
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum InputFormat {
    Edgelist,
    Adjacency,
}

#[derive(Args, Debug, Clone)]
struct SampleOptions {
    #[arg(long)]
    directed: bool,
    #[arg(long)]
    loops: bool,
    /// Edge weights: `constant:V`, `uniform:LO:HI`, `normal:MEAN:SD` or `poisson:RATE`.
    #[arg(long, value_parser = parse_weights)]
    weights: Option<WeightDistribution>,
}

#[derive(Subcommand, Debug)]
enum Simulate {
    /// G(n, p).
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        sample: SampleOptions,
        #[command(flatten)]
        out: Output,
    },
    /// G(n, m).
    ErNm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        directed: bool,
        #[arg(long)]
        loops: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Stochastic block model, optionally degree corrected.
    Sbm {
        /// Block sizes, e.g. `100,100`.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Block probability rows separated by `;`, e.g. `0.5,0.1;0.1,0.5`.
        #[arg(long, value_parser = parse_matrix)]
        probs: Matrix,
        /// Degree corrections, one per line.
        #[arg(long)]
        theta: Option<PathBuf>,
        #[command(flatten)]
        sample: SampleOptions,
        #[command(flatten)]
        out: Output,
    },
    /// Random dot product graph from latent position CSVs.
    Rdpg {
        #[arg(long)]
        x: PathBuf,
        /// Right latent positions; makes the graph directed.
        #[arg(long)]
        y: Option<PathBuf>,
        #[arg(long)]
        loops: bool,
        #[arg(long, value_parser = parse_weights)]
        weights: Option<WeightDistribution>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand, Debug)]
enum Preprocess {
    /// Largest connected component; kept node indices go to stdout.
    Lcc {
        input: PathBuf,
        #[command(flatten)]
        opts: InputOptions,
        #[command(flatten)]
        out: Output,
    },
    Symmetrize {
        input: PathBuf,
        #[arg(long, default_value = "avg")]
        method: String,
        #[command(flatten)]
        opts: InputOptions,
        #[command(flatten)]
        out: Output,
    },
    /// Nodes in the largest component of every graph; writes `<stem>.<i>.<ext>`.
    Intersect {
        #[arg(required = true, num_args = 2..)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        opts: InputOptions,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Debug, Clone)]
struct DimOptions {
    /// Embedding dimension or `auto`.
    #[arg(long = "d", default_value = "auto", value_parser = parse_dim)]
    d: Dim,
    /// Elbow used by automatic dimension selection.
    #[arg(long, default_value_t = DEFAULT_ELBOWS)]
    elbows: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Dim(Option<usize>);

#[derive(Subcommand, Debug)]
enum Embed {
    Ase {
        input: PathBuf,
        #[command(flatten)]
        dim: DimOptions,
        #[command(flatten)]
        opts: InputOptions,
        #[command(flatten)]
        out: Output,
    },
    Lse {
        input: PathBuf,
        #[command(flatten)]
        dim: DimOptions,
        /// Degree regularization (default: mean degree).
        #[arg(long)]
        tau: Option<f64>,
        #[command(flatten)]
        opts: InputOptions,
        #[command(flatten)]
        out: Output,
    },
    Omnibus {
        #[arg(required = true, num_args = 2..)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        dim: DimOptions,
        #[command(flatten)]
        opts: InputOptions,
        #[command(flatten)]
        out: Output,
    },
    Mase {
        #[arg(required = true, num_args = 2..)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        dim: DimOptions,
        #[command(flatten)]
        opts: InputOptions,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Debug, Clone)]
struct FitOptions {
    /// Number of blocks when labels are estimated.
    #[arg(long)]
    k: Option<usize>,
    /// RDPG dimension or `auto`.
    #[arg(long = "d", default_value = "auto", value_parser = parse_dim)]
    d: Dim,
    #[command(flatten)]
    opts: InputOptions,
}

#[derive(Subcommand, Debug)]
enum Fit {
    Er(FitOne),
    Sbm(FitOne),
    Dcer(FitOne),
    Dcsbm(FitOne),
    Rdpg(FitOne),
    Ier(FitOne),
    /// Fit several models, tabulate goodness of fit and draw each P matrix.
    Report {
        input: PathBuf,
        /// Models to fit, e.g. `ier,rdpg,dcsbm,dcer,sbm,er`.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "ier,rdpg,dcsbm,dcer,sbm,er"
        )]
        models: Vec<String>,
        #[command(flatten)]
        fit: FitOptions,
        #[arg(long, value_enum, default_value_t = ColormapArg::Sequential)]
        colormap: ColormapArg,
        /// `panel` scales each heatmap separately; `global` shares one range.
        #[arg(long, value_enum, default_value_t = Scale::Panel)]
        scale: Scale,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Debug)]
struct FitOne {
    input: PathBuf,
    #[command(flatten)]
    fit: FitOptions,
    /// Also write the probability matrix as CSV.
    #[arg(long = "p-mat")]
    p_mat: Option<PathBuf>,
    #[command(flatten)]
    out: Output,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Scale {
    Panel,
    Global,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ColormapArg {
    Sequential,
    Diverging,
}

impl From<ColormapArg> for Colormap {
    fn from(c: ColormapArg) -> Self {
        match c {
            ColormapArg::Sequential => Colormap::Sequential,
            ColormapArg::Diverging => Colormap::Diverging,
        }
    }
}

#[derive(Args, Debug)]
struct TestArgs {
    first: PathBuf,
    second: PathBuf,
    #[arg(long = "d", default_value = "auto", value_parser = parse_dim)]
    d: Dim,
    #[arg(long, default_value_t = 200)]
    bootstraps: usize,
    #[command(flatten)]
    opts: InputOptions,
    #[command(flatten)]
    out: Output,
}

#[derive(Subcommand, Debug)]
enum TestCmd {
    LatentPosition(TestArgs),
    LatentDistribution(TestArgs),
}

#[derive(Args, Debug)]
struct ClusterArgs {
    /// Embedding JSON or a numeric CSV with one point per row.
    input: PathBuf,
    #[arg(long, default_value_t = 2)]
    k_min: usize,
    #[arg(long, default_value_t = 10)]
    k_max: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Subcommand, Debug)]
enum ClusterCmd {
    Gmm {
        #[command(flatten)]
        args: ClusterArgs,
        /// Covariance structures to sweep, or `all`.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        covariance: Vec<String>,
    },
    Kmeans {
        #[command(flatten)]
        args: ClusterArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct PlotOptions {
    #[arg(long, value_enum, default_value_t = SortArg::None)]
    sort: SortArg,
    #[arg(long, value_enum, default_value_t = ColormapArg::Sequential)]
    colormap: ColormapArg,
    #[arg(long)]
    title: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum SortArg {
    None,
    Degree,
    Block,
}

impl From<SortArg> for SortMode {
    fn from(s: SortArg) -> Self {
        match s {
            SortArg::None => SortMode::None,
            SortArg::Degree => SortMode::Degree,
            SortArg::Block => SortMode::BlockThenDegree,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Plot {
    Heatmap {
        input: PathBuf,
        #[command(flatten)]
        plot: PlotOptions,
        #[command(flatten)]
        opts: InputOptions,
        #[command(flatten)]
        out: Output,
    },
    Gridplot {
        #[arg(required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        /// Legend names (default: file names).
        #[arg(long, value_delimiter = ',')]
        names: Option<Vec<String>>,
        #[command(flatten)]
        plot: PlotOptions,
        #[command(flatten)]
        opts: InputOptions,
        #[command(flatten)]
        out: Output,
    },
    Pairplot {
        /// Embedding JSON or numeric CSV.
        input: PathBuf,
        /// Point labels, one per line.
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long)]
        title: Option<String>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Clone)]
struct Matrix(Vec<Vec<f64>>);

fn parse_matrix(s: &str) -> std::result::Result<Matrix, String> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|e| format!("bad number `{v}`: {e}"))
                })
                .collect()
        })
        .collect::<std::result::Result<_, _>>()
        .map(Matrix)
}

fn parse_dim(s: &str) -> std::result::Result<Dim, String> {
    if s == "auto" {
        return Ok(Dim(None));
    }
    match s.parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("expected a positive integer or `auto`, got `{s}`")),
        Ok(d) => Ok(Dim(Some(d))),
    }
}

fn parse_weights(s: &str) -> std::result::Result<WeightDistribution, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |k: usize| -> std::result::Result<f64, String> {
        parts
            .get(k)
            .ok_or_else(|| format!("missing parameter in `{s}`"))?
            .parse::<f64>()
            .map_err(|e| format!("bad number in `{s}`: {e}"))
    };
    let (dist, arity) = match parts[0] {
        "constant" => (WeightDistribution::Constant { value: num(1)? }, 2),
        "uniform" => (
            WeightDistribution::Uniform {
                lo: num(1)?,
                hi: num(2)?,
            },
            3,
        ),
        "normal" => (
            WeightDistribution::Normal {
                mean: num(1)?,
                sd: num(2)?,
            },
            3,
        ),
        "poisson" => (WeightDistribution::Poisson { rate: num(1)? }, 2),
        other => return Err(format!("unknown weight distribution `{other}`")),
    };
    if parts.len() != arity {
        return Err(format!("wrong number of parameters in `{s}`"));
    }
    dist.validate().map_err(|e| e.to_string())?;
    Ok(dist)
}

/// Failure split by exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Data(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Files written by a run, in order; listed in the manifest.
#[derive(Debug, Default)]
pub struct Outputs {
    files: Vec<String>,
}

impl Outputs {
    pub fn files(&self) -> &[String] {
        &self.files
    }

    pub fn write(&mut self, path: &Path, contents: &str) -> CliResult<()> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent).map_err(Error::from)?;
        }
        std::fs::write(path, contents).map_err(Error::from)?;
        self.files.push(path.display().to_string());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, path: &Path, value: &T) -> CliResult<()> {
        self.write(path, &to_canonical_string(value)?)
    }
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    arguments: BTreeMap<String, Value>,
    seed: u64,
    tool_version: String,
    outputs: Vec<String>,
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// `dir/stem.<suffix>` next to `path`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn extension(path: &Path) -> String {
    path.extension()
        .map(|e| e.to_string_lossy().to_ascii_lowercase())
        .unwrap_or_default()
}

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| {
        CliError::Data(Error::InvalidParameter(format!(
            "cannot read {}: {e}",
            path.display()
        )))
    })
}

fn read_lines(path: &Path) -> CliResult<Vec<String>> {
    Ok(read_text(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect())
}

fn read_graph(path: &Path, opts: &InputOptions) -> CliResult<Graph> {
    let text = read_text(path)?;
    let g = if extension(path) == "json" {
        graph_from_json(&text)?
    } else {
        match opts.format {
            InputFormat::Edgelist => import_edge_list(&text, opts.directed)?,
            InputFormat::Adjacency => import_adjacency_csv(&text, opts.directed.then_some(true))?,
        }
    };
    Ok(match &opts.labels {
        Some(p) => g.with_labels(read_lines(p)?)?,
        None => g,
    })
}

/// Writes a graph as JSON or as an edge list with a node header; labels of
/// edge-list outputs go to `<stem>.labels.txt`.
fn write_graph(outputs: &mut Outputs, path: &Path, g: &Graph) -> CliResult<()> {
    if extension(path) == "json" {
        return outputs.write(path, &graph_to_json(g)?);
    }
    outputs.write(path, &export_edge_list_with_nodes(g)?)?;
    if let Some(labels) = g.labels() {
        let mut text = labels.join("\n");
        text.push('\n');
        outputs.write(&sibling(path, "labels.txt"), &text)?;
    }
    Ok(())
}

fn read_matrix_csv(path: &Path) -> CliResult<DMatrix<f64>> {
    let rows: Vec<Vec<f64>> = read_text(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .enumerate()
        .map(|(k, l)| {
            l.split(',')
                .map(|v| {
                    v.trim().parse::<f64>().map_err(|_| Error::Parse {
                        line: k + 1,
                        message: format!("non-numeric entry `{}`", v.trim()),
                    })
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    Ok(from_rows(&rows)?)
}

/// Points from an embedding JSON (`X` with `Y` appended) or a numeric CSV.
fn read_points(path: &Path) -> CliResult<DMatrix<f64>> {
    if extension(path) != "json" {
        return read_matrix_csv(path);
    }
    let j: EmbeddingJson = serde_json::from_str(&read_text(path)?).map_err(Error::from)?;
    let e = Embedding::from_json(&j)?;
    Ok(match &e.y {
        Some(y) => {
            let d = e.x.ncols();
            DMatrix::from_fn(e.x.nrows(), d + y.ncols(), |i, k| {
                if k < d {
                    e.x[(i, k)]
                } else {
                    y[(i, k - d)]
                }
            })
        }
        None => e.x,
    })
}

fn write_embedding(outputs: &mut Outputs, path: &Path, e: &Embedding) -> CliResult<()> {
    if extension(path) == "csv" {
        outputs.write(path, &e.to_csv())
    } else {
        outputs.write_json(path, &e.to_json())
    }
}

/// Parses and runs one command line (including the program name).
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match Cli::command().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return EXIT_USAGE;
        }
    };
    let seed = cli.seed.unwrap_or_else(rand::random::<u64>);
    let (command, arguments) = describe(&matches);
    let result = match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| execute(&cli.command, seed)),
            Err(e) => Err(CliError::Usage(format!("cannot start thread pool: {e}"))),
        },
        None => execute(&cli.command, seed),
    };
    match result.and_then(|(primary, outputs)| {
        let manifest = RunManifest {
            command,
            arguments,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: outputs.files,
        };
        let path = manifest_path(&primary);
        let text = to_canonical_string(&manifest)?;
        std::fs::write(&path, text).map_err(Error::from)?;
        Ok(())
    }) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Data(e)) => {
            eprintln!("error: {e}");
            EXIT_DATA
        }
    }
}

/// Subcommand path and its normalized arguments, excluding `--seed` and
/// `--threads`.
fn describe(matches: &ArgMatches) -> (String, BTreeMap<String, Value>) {
    let mut names = Vec::new();
    let mut m = matches;
    let mut cmd = Cli::command();
    while let Some((name, sub)) = m.subcommand() {
        names.push(name.to_string());
        cmd = cmd
            .find_subcommand(name)
            .cloned()
            .expect("parsed subcommand exists");
        m = sub;
    }
    let mut args = BTreeMap::new();
    for arg in cmd.get_arguments() {
        let id = arg.get_id().as_str();
        if id == "seed" || id == "threads" {
            continue;
        }
        let Some(raw) = m.get_raw(id) else { continue };
        let values: Vec<Value> = raw
            .map(|v| Value::String(v.to_string_lossy().into_owned()))
            .collect();
        let value = if values.len() == 1 {
            values.into_iter().next().expect("one value")
        } else {
            Value::Array(values)
        };
        args.insert(id.to_string(), value);
    }
    (names.join(" "), args)
}

fn execute(command: &Command, seed: u64) -> CliResult<(PathBuf, Outputs)> {
    let mut outputs = Outputs::default();
    let primary = match command {
        Command::Simulate(s) => simulate(s, seed, &mut outputs)?,
        Command::Preprocess(p) => preprocess(p, &mut outputs)?,
        Command::Embed(e) => embed(e, &mut outputs)?,
        Command::Fit(f) => fit_command(f, seed, &mut outputs)?,
        Command::Test(t) => test_command(t, seed, &mut outputs)?,
        Command::Cluster(c) => cluster_command(c, seed, &mut outputs)?,
        Command::Plot(p) => plot_command(p, &mut outputs)?,
    };
    Ok((primary, outputs))
}

fn simulate(cmd: &Simulate, seed: u64, outputs: &mut Outputs) -> CliResult<PathBuf> {
    let (g, out) = match cmd {
        Simulate::Er { n, p, sample, out } => (
            sample_er_np(
                *n,
                *p,
                sample.directed,
                sample.loops,
                sample.weights.as_ref(),
                seed,
            )?,
            out,
        ),
        Simulate::ErNm {
            n,
            m,
            directed,
            loops,
            out,
        } => (sample_er_nm(*n, *m, *directed, *loops, seed)?, out),
        Simulate::Sbm {
            sizes,
            probs,
            theta,
            sample,
            out,
        } => {
            let mut params =
                SbmParams::new(sizes.clone(), probs.0.clone()).directed(sample.directed);
            params.loops = sample.loops;
            if let Some(path) = theta {
                let values = read_lines(path)?
                    .iter()
                    .map(|l| {
                        l.parse::<f64>()
                            .map_err(|_| Error::InvalidParameter(format!("bad theta `{l}`")))
                    })
                    .collect::<Result<Vec<f64>>>()?;
                params = params.with_degree_corrections(values);
            }
            (sample_sbm(&params, sample.weights.as_ref(), seed)?, out)
        }
        Simulate::Rdpg {
            x,
            y,
            loops,
            weights,
            out,
        } => {
            let xm = read_matrix_csv(x)?;
            let ym = y.as_deref().map(read_matrix_csv).transpose()?;
            (
                sample_rdpg(&xm, ym.as_ref(), *loops, weights.as_ref(), seed)?,
                out,
            )
        }
    };
    write_graph(outputs, &out.output, &g)?;
    Ok(out.output.clone())
}

fn preprocess(cmd: &Preprocess, outputs: &mut Outputs) -> CliResult<PathBuf> {
    match cmd {
        Preprocess::Lcc { input, opts, out } => {
            let g = read_graph(input, opts)?;
            let (lcc, kept) = largest_connected_component(&g)?;
            write_graph(outputs, &out.output, &lcc)?;
            println!("{}", json!(kept));
            Ok(out.output.clone())
        }
        Preprocess::Symmetrize {
            input,
            method,
            opts,
            out,
        } => {
            let method: SymmetrizeMethod = method
                .parse()
                .map_err(|e: Error| CliError::Usage(e.to_string()))?;
            let g = read_graph(input, opts)?;
            write_graph(outputs, &out.output, &symmetrize(&g, method))?;
            Ok(out.output.clone())
        }
        Preprocess::Intersect { inputs, opts, out } => {
            let gs = inputs
                .iter()
                .map(|p| read_graph(p, opts))
                .collect::<CliResult<Vec<_>>>()?;
            let (kept_graphs, kept) = multigraph_lcc_intersection(&gs)?;
            let ext = match extension(&out.output).as_str() {
                "" => "csv".to_string(),
                e => e.to_string(),
            };
            for (i, g) in kept_graphs.iter().enumerate() {
                write_graph(outputs, &sibling(&out.output, &format!("{i}.{ext}")), g)?;
            }
            outputs.write_json(
                &out.output,
                &json!({ "kept": kept, "graphs": outputs.files.clone() }),
            )?;
            println!("{}", json!(kept));
            Ok(out.output.clone())
        }
    }
}

fn embed(cmd: &Embed, outputs: &mut Outputs) -> CliResult<PathBuf> {
    match cmd {
        Embed::Ase {
            input,
            dim,
            opts,
            out,
        } => {
            let g = read_graph(input, opts)?;
            write_embedding(outputs, &out.output, &ase(&g, dim.d.0, dim.elbows)?)?;
            Ok(out.output.clone())
        }
        Embed::Lse {
            input,
            dim,
            tau,
            opts,
            out,
        } => {
            let g = read_graph(input, opts)?;
            write_embedding(outputs, &out.output, &lse(&g, dim.d.0, *tau, dim.elbows)?)?;
            Ok(out.output.clone())
        }
        Embed::Omnibus {
            inputs,
            dim,
            opts,
            out,
        } => {
            let gs = inputs
                .iter()
                .map(|p| read_graph(p, opts))
                .collect::<CliResult<Vec<_>>>()?;
            let es = omnibus_embed(&gs, dim.d.0, dim.elbows)?;
            let list: Vec<EmbeddingJson> = es.iter().map(Embedding::to_json).collect();
            outputs.write_json(&out.output, &json!({ "embeddings": list }))?;
            Ok(out.output.clone())
        }
        Embed::Mase {
            inputs,
            dim,
            opts,
            out,
        } => {
            let gs = inputs
                .iter()
                .map(|p| read_graph(p, opts))
                .collect::<CliResult<Vec<_>>>()?;
            outputs.write_json(&out.output, &mase(&gs, dim.d.0, dim.elbows)?.to_json())?;
            Ok(out.output.clone())
        }
    }
}

fn block_options(g: &Graph, f: &FitOptions, seed: u64) -> BlockFitOptions {
    BlockFitOptions {
        labels: g.labels().map(<[String]>::to_vec),
        k: f.k,
        seed,
    }
}

fn fit_json(fit: &ModelFit, g: &Graph, p_mat_file: Option<&str>) -> CliResult<Value> {
    let mut j = fit.to_json(p_mat_file);
    j["goodness_of_fit"] = serde_json::to_value(goodness_of_fit(fit, g)?).map_err(Error::from)?;
    Ok(j)
}

fn fit_command(cmd: &Fit, seed: u64, outputs: &mut Outputs) -> CliResult<PathBuf> {
    let (kind, one) = match cmd {
        Fit::Er(a) => (ModelKind::Er, a),
        Fit::Sbm(a) => (ModelKind::Sbm, a),
        Fit::Dcer(a) => (ModelKind::Dcer, a),
        Fit::Dcsbm(a) => (ModelKind::Dcsbm, a),
        Fit::Rdpg(a) => (ModelKind::Rdpg, a),
        Fit::Ier(a) => (ModelKind::Ier, a),
        Fit::Report {
            input,
            models,
            fit,
            colormap,
            scale,
            out,
        } => {
            let kinds = models
                .iter()
                .filter(|m| !m.is_empty())
                .map(|m| m.parse::<ModelKind>())
                .collect::<Result<Vec<_>>>()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            if kinds.is_empty() {
                return Err(CliError::Usage("--models needs at least one model".into()));
            }
            let g = read_graph(input, &fit.opts)?;
            let options = ReportOptions {
                block: block_options(&g, fit, seed),
                d: fit.d.0,
                colormap: (*colormap).into(),
                global_scale: matches!(scale, Scale::Global),
            };
            pipeline_fit_report(&g, &kinds, &options, &out.output, outputs)?;
            return Ok(out.output.clone());
        }
    };
    let g = read_graph(&one.input, &one.fit.opts)?;
    let model = fit(kind, &g, &block_options(&g, &one.fit, seed), one.fit.d.0)?;
    let p_file = one.p_mat.as_ref().map(|p| p.display().to_string());
    if let Some(p) = &one.p_mat {
        outputs.write(p, &matrix_to_csv(&model.p_mat))?;
    }
    let j = fit_json(&model, &g, p_file.as_deref())?;
    outputs.write_json(&one.out.output, &j)?;
    Ok(one.out.output.clone())
}

#[derive(Debug, Clone, Default)]
pub struct ReportOptions {
    pub block: BlockFitOptions,
    pub d: Option<usize>,
    pub colormap: Colormap,
    pub global_scale: bool,
}

/// Row of the report's goodness-of-fit table.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub model: &'static str,
    pub mse: f64,
    pub log_likelihood: f64,
    pub n_params: usize,
    pub bic: f64,
    pub heatmap: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub table: Vec<ReportRow>,
    pub best_bic: &'static str,
    pub n: usize,
    pub directed: bool,
}

/// Fits every model in `kinds`, writes one heatmap per `p_mat` as
/// `<stem>.<model>.svg` next to `output`, and the report JSON at `output`.
/// Heatmaps share a node order: blocks by size, then degree in the
/// observed graph.
pub fn pipeline_fit_report(
    g: &Graph,
    kinds: &[ModelKind],
    options: &ReportOptions,
    output: &Path,
    outputs: &mut Outputs,
) -> CliResult<FitReport> {
    if kinds.is_empty() {
        return Err(CliError::Usage("no models requested".into()));
    }
    let fits = kinds
        .iter()
        .map(|&k| fit(k, g, &options.block, options.d))
        .collect::<Result<Vec<_>>>()?;
    let labels: Option<Vec<String>> = options.block.labels.clone().or_else(|| {
        fits.iter().find_map(|f| match &f.params {
            ModelParams::Sbm { blocks, .. } | ModelParams::Dcsbm { blocks, .. }
                if blocks.k() > 1 =>
            {
                Some(
                    blocks
                        .assignment
                        .iter()
                        .map(|&b| blocks.names[b].clone())
                        .collect(),
                )
            }
            _ => None,
        })
    });
    let spec = match &labels {
        Some(l) => SortSpec::new(SortMode::BlockThenDegree, Some(l.clone())),
        None => SortSpec::new(SortMode::Degree, None),
    };
    let order = sort_indices(g, &spec)?;
    let range = options.global_scale.then(|| {
        let lo = fits
            .iter()
            .flat_map(|f| f.p_mat.iter())
            .copied()
            .fold(f64::INFINITY, f64::min);
        let hi = fits
            .iter()
            .flat_map(|f| f.p_mat.iter())
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    });
    let mut table = Vec::new();
    for f in &fits {
        let gof = goodness_of_fit(f, g)?;
        let path = sibling(
            output,
            &format!("{}.svg", f.kind.name().to_ascii_lowercase()),
        );
        let svg = heatmap_svg(
            &f.p_mat,
            &spec,
            &HeatmapOptions {
                title: Some(format!("{} (n_params = {})", f.kind.name(), f.n_params)),
                colormap: options.colormap,
                range,
                order: Some(order.clone()),
            },
        )?;
        outputs.write(&path, &svg)?;
        table.push(ReportRow {
            model: f.kind.name(),
            mse: gof.mse,
            log_likelihood: gof.log_likelihood,
            n_params: gof.n_params,
            bic: gof.bic,
            heatmap: path.display().to_string(),
        });
    }
    let best = table
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.bic.total_cmp(&b.1.bic).then(a.0.cmp(&b.0)))
        .map(|(_, r)| r.model)
        .expect("at least one model");
    let report = FitReport {
        table,
        best_bic: best,
        n: g.n(),
        directed: g.is_directed(),
    };
    outputs.write_json(output, &report)?;
    Ok(report)
}

fn test_command(cmd: &TestCmd, seed: u64, outputs: &mut Outputs) -> CliResult<PathBuf> {
    let (args, position) = match cmd {
        TestCmd::LatentPosition(a) => (a, true),
        TestCmd::LatentDistribution(a) => (a, false),
    };
    let g1 = read_graph(&args.first, &args.opts)?;
    let g2 = read_graph(&args.second, &args.opts)?;
    let result = if position {
        latent_position_test(&g1, &g2, args.d.0, args.bootstraps, seed)?
    } else {
        latent_distribution_test(&g1, &g2, args.d.0, args.bootstraps, seed)?
    };
    outputs.write_json(&args.out.output, &result)?;
    Ok(args.out.output.clone())
}

fn k_range(args: &ClusterArgs) -> CliResult<Vec<usize>> {
    if args.k_min == 0 || args.k_min > args.k_max {
        return Err(CliError::Usage(format!(
            "invalid k range {}..={}",
            args.k_min, args.k_max
        )));
    }
    Ok((args.k_min..=args.k_max).collect())
}

fn cluster_command(cmd: &ClusterCmd, seed: u64, outputs: &mut Outputs) -> CliResult<PathBuf> {
    match cmd {
        ClusterCmd::Gmm { args, covariance } => {
            let types = if covariance.iter().any(|c| c == "all") {
                CovarianceType::ALL.to_vec()
            } else {
                covariance
                    .iter()
                    .map(|c| c.parse::<CovarianceType>())
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| CliError::Usage(e.to_string()))?
            };
            let points = read_points(&args.input)?;
            let ks = k_range(args)?;
            let sweep = gmm_sweep(&points, &ks, &types, seed)?;
            outputs.write_json(&args.out.output, &sweep)?;
            Ok(args.out.output.clone())
        }
        ClusterCmd::Kmeans { args } => {
            let points = read_points(&args.input)?;
            let ks = k_range(args)?;
            let sweep = kmeans_sweep(&points, &ks, seed)?;
            outputs.write_json(&args.out.output, &sweep)?;
            Ok(args.out.output.clone())
        }
    }
}

fn plot_command(cmd: &Plot, outputs: &mut Outputs) -> CliResult<PathBuf> {
    match cmd {
        Plot::Heatmap {
            input,
            plot,
            opts,
            out,
        } => {
            let g = read_graph(input, opts)?;
            let spec = SortSpec::new(plot.sort.into(), g.labels().map(<[String]>::to_vec));
            let svg = heatmap_svg(
                g.adjacency(),
                &spec,
                &HeatmapOptions {
                    title: plot.title.clone(),
                    colormap: plot.colormap.into(),
                    ..Default::default()
                },
            )?;
            outputs.write(&out.output, &svg)?;
            Ok(out.output.clone())
        }
        Plot::Gridplot {
            inputs,
            names,
            plot,
            opts,
            out,
        } => {
            let gs = inputs
                .iter()
                .map(|p| read_graph(p, opts))
                .collect::<CliResult<Vec<_>>>()?;
            let names = names.clone().unwrap_or_else(|| {
                inputs
                    .iter()
                    .map(|p| {
                        p.file_stem()
                            .map(|s| s.to_string_lossy().into_owned())
                            .unwrap_or_default()
                    })
                    .collect()
            });
            let labels = gs.first().and_then(|g| g.labels()).map(<[String]>::to_vec);
            let spec = SortSpec::new(plot.sort.into(), labels);
            let svg = gridplot_svg(&gs, &names, &spec, plot.title.as_deref())?;
            outputs.write(&out.output, &svg)?;
            Ok(out.output.clone())
        }
        Plot::Pairplot {
            input,
            labels,
            dims,
            title,
            out,
        } => {
            let points = read_points(input)?;
            let labels = labels.as_deref().map(read_lines).transpose()?;
            let svg = pairplot_svg(
                &points,
                labels.as_deref(),
                dims.as_deref(),
                title.as_deref(),
            )?;
            outputs.write(&out.output, &svg)?;
            Ok(out.output.clone())
        }
    }
}
