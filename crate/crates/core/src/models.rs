//! Fitting random graph models to an observed graph.
//!
//! Every fit produces an edge-probability matrix `p_mat` that respects the
//! input's direction and self-loop conventions, a parameter count, and the
//! fitted parameters themselves. [`goodness_of_fit`] scores a fit against a
//! graph and [`sample_from_fit`] draws new graphs from it.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cluster::{gmm_sweep, CovarianceType};
use crate::embed::{ase, rows, DEFAULT_ELBOWS};
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::sims::sample_ier;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ModelKind {
    #[serde(rename = "ER")]
    Er,
    #[serde(rename = "SBM")]
    Sbm,
    #[serde(rename = "DCER")]
    Dcer,
    #[serde(rename = "DCSBM")]
    Dcsbm,
    #[serde(rename = "RDPG")]
    Rdpg,
    #[serde(rename = "IER")]
    Ier,
}

impl ModelKind {
    pub const ALL: [ModelKind; 6] = [
        Self::Ier,
        Self::Rdpg,
        Self::Dcsbm,
        Self::Dcer,
        Self::Sbm,
        Self::Er,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Er => "ER",
            Self::Sbm => "SBM",
            Self::Dcer => "DCER",
            Self::Dcsbm => "DCSBM",
            Self::Rdpg => "RDPG",
            Self::Ier => "IER",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "er" => Ok(Self::Er),
            "sbm" => Ok(Self::Sbm),
            "dcer" => Ok(Self::Dcer),
            "dcsbm" => Ok(Self::Dcsbm),
            "rdpg" => Ok(Self::Rdpg),
            "ier" => Ok(Self::Ier),
            other => Err(invalid(format!("unknown model `{other}`"))),
        }
    }
}

/// Block assignment shared by the block-model fits.
#[derive(Debug, Clone, PartialEq)]
pub struct Blocks {
    /// Block index of every node.
    pub assignment: Vec<usize>,
    /// Name of each block, sorted.
    pub names: Vec<String>,
}

impl Blocks {
    pub fn from_labels(labels: &[String]) -> Self {
        let mut names: Vec<String> = labels.to_vec();
        names.sort();
        names.dedup();
        let assignment = labels
            .iter()
            .map(|l| names.binary_search(l).expect("name collected above"))
            .collect();
        Self { assignment, names }
    }

    pub fn k(&self) -> usize {
        self.names.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k()];
        for &b in &self.assignment {
            sizes[b] += 1;
        }
        sizes
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams {
    Er {
        p: f64,
    },
    Sbm {
        blocks: Blocks,
        b: Vec<Vec<f64>>,
    },
    /// `block_edges[a][b]` is the total weight from block `a` to block `b`;
    /// `theta` sums to 1 within each block.
    Dcsbm {
        blocks: Blocks,
        block_edges: Vec<Vec<f64>>,
        theta: Vec<f64>,
    },
    Rdpg {
        x: DMatrix<f64>,
        y: Option<DMatrix<f64>>,
    },
    Ier,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelFit {
    pub kind: ModelKind,
    pub p_mat: DMatrix<f64>,
    pub params: ModelParams,
    pub n_params: usize,
    pub directed: bool,
    pub loops: bool,
    pub metadata: BTreeMap<String, Value>,
}

/// Options for fits that may estimate block labels from the graph.
#[derive(Debug, Clone, Default)]
pub struct BlockFitOptions {
    /// Known labels; falls back to the graph's own labels, then estimation.
    pub labels: Option<Vec<String>>,
    /// Fixed number of blocks when estimating labels.
    pub k: Option<usize>,
    pub seed: u64,
}

fn require_binary(g: &Graph, what: &str) -> Result<()> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_binary() {
        return Err(Error::Weighted(format!(
            "{what} models binary adjacency matrices"
        )));
    }
    Ok(())
}

fn modeled(i: usize, j: usize, loops: bool) -> bool {
    loops || i != j
}

/// Number of independent Bernoulli entries: unordered pairs for undirected
/// graphs, ordered pairs otherwise, with the diagonal only when loops are
/// modeled.
pub fn likelihood_entries(n: usize, directed: bool, loops: bool) -> usize {
    crate::sims::potential_edges(n, directed, loops)
}

fn finish(
    kind: ModelKind,
    g: &Graph,
    mut p_mat: DMatrix<f64>,
    params: ModelParams,
    n_params: usize,
    metadata: BTreeMap<String, Value>,
) -> ModelFit {
    let loops = g.has_loops();
    let n = g.n();
    for j in 0..n {
        for i in 0..n {
            let v = p_mat[(i, j)].clamp(0.0, 1.0);
            p_mat[(i, j)] = if modeled(i, j, loops) { v } else { 0.0 };
        }
    }
    if !g.is_directed() {
        for j in 0..n {
            for i in 0..j {
                p_mat[(j, i)] = p_mat[(i, j)];
            }
        }
    }
    ModelFit {
        kind,
        p_mat,
        params,
        n_params,
        directed: g.is_directed(),
        loops,
        metadata,
    }
}

/// Erdős–Rényi: a single edge probability.
pub fn fit_er(g: &Graph) -> Result<ModelFit> {
    require_binary(g, "ER")?;
    let loops = g.has_loops();
    let potential = likelihood_entries(g.n(), g.is_directed(), loops);
    let p = if potential == 0 {
        0.0
    } else {
        g.edge_count() as f64 / potential as f64
    };
    let n = g.n();
    Ok(finish(
        ModelKind::Er,
        g,
        DMatrix::from_element(n, n, p),
        ModelParams::Er { p },
        1,
        BTreeMap::new(),
    ))
}

/// Blocks from explicit labels, the graph's labels, or a GMM-on-ASE estimate.
fn resolve_blocks(g: &Graph, opts: &BlockFitOptions) -> Result<(Blocks, BTreeMap<String, Value>)> {
    let mut meta = BTreeMap::new();
    if let Some(labels) = opts.labels.as_deref().or(g.labels()) {
        if labels.len() != g.n() {
            return Err(Error::ShapeMismatch(format!(
                "{} labels for {} nodes",
                labels.len(),
                g.n()
            )));
        }
        meta.insert("labels".into(), json!("given"));
        return Ok((Blocks::from_labels(labels), meta));
    }
    let n = g.n();
    let k_range: Vec<usize> = match opts.k {
        Some(0) => return Err(invalid("number of blocks must be at least 1")),
        Some(k) => vec![k],
        None => (2..=(n / 5).clamp(2, 10)).collect(),
    };
    let embedding = ase(g, None, DEFAULT_ELBOWS)?;
    let data = match &embedding.y {
        Some(y) => {
            let d = embedding.d;
            DMatrix::from_fn(n, 2 * d, |i, j| {
                if j < d {
                    embedding.x[(i, j)]
                } else {
                    y[(i, j - d)]
                }
            })
        }
        None => embedding.x.clone(),
    };
    let sweep = gmm_sweep(&data, &k_range, &CovarianceType::ALL, opts.seed)?;
    meta.insert("labels".into(), json!("estimated"));
    meta.insert("k_range".into(), json!(k_range));
    meta.insert("embedding_dimension".into(), json!(embedding.d));
    meta.insert("covariance_type".into(), json!(sweep.best.covariance_type));
    let labels: Vec<String> = sweep.best.labels.iter().map(|l| l.to_string()).collect();
    Ok((Blocks::from_labels(&labels), meta))
}

/// Per block pair: total adjacency weight and number of modeled ordered pairs.
fn block_totals(g: &Graph, blocks: &Blocks, loops: bool) -> (Vec<Vec<f64>>, Vec<Vec<usize>>) {
    let k = blocks.k();
    let a = g.adjacency();
    let z = &blocks.assignment;
    let mut edges = vec![vec![0.0; k]; k];
    let mut pairs = vec![vec![0usize; k]; k];
    for j in 0..g.n() {
        for i in 0..g.n() {
            if modeled(i, j, loops) {
                edges[z[i]][z[j]] += a[(i, j)];
                pairs[z[i]][z[j]] += 1;
            }
        }
    }
    (edges, pairs)
}

fn block_parameter_count(k: usize, directed: bool) -> usize {
    if directed {
        k * k
    } else {
        k * (k + 1) / 2
    }
}

fn empty_pairs_metadata(pairs: &[Vec<usize>], meta: &mut BTreeMap<String, Value>) {
    let empty: Vec<(usize, usize)> = pairs
        .iter()
        .enumerate()
        .flat_map(|(a, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &c)| c == 0)
                .map(move |(b, _)| (a, b))
        })
        .collect();
    if !empty.is_empty() {
        meta.insert("zero_potential_block_pairs".into(), json!(empty));
    }
}

/// Stochastic block model: block-pair edge densities.
pub fn fit_sbm(g: &Graph, opts: &BlockFitOptions) -> Result<ModelFit> {
    require_binary(g, "SBM")?;
    let (blocks, mut meta) = resolve_blocks(g, opts)?;
    let loops = g.has_loops();
    let (edges, pairs) = block_totals(g, &blocks, loops);
    let k = blocks.k();
    let b: Vec<Vec<f64>> = (0..k)
        .map(|x| {
            (0..k)
                .map(|y| {
                    if pairs[x][y] == 0 {
                        0.0
                    } else {
                        edges[x][y] / pairs[x][y] as f64
                    }
                })
                .collect()
        })
        .collect();
    empty_pairs_metadata(&pairs, &mut meta);
    let z = &blocks.assignment;
    let n = g.n();
    let p = DMatrix::from_fn(n, n, |i, j| b[z[i]][z[j]]);
    let n_params = block_parameter_count(k, g.is_directed());
    Ok(finish(
        ModelKind::Sbm,
        g,
        p,
        ModelParams::Sbm { blocks, b },
        n_params,
        meta,
    ))
}

/// Degree-corrected SBM. Each node gets a propensity `theta_i` proportional
/// to its degree (summing to 1 within its block) and
/// `p_ij = theta_i theta_j m_ab n_a n_b / pairs_ab`, where `m_ab` is the
/// total block-pair weight. With equal degrees inside every block this is
/// exactly the SBM estimate.
pub fn fit_dcsbm(g: &Graph, opts: &BlockFitOptions) -> Result<ModelFit> {
    require_binary(g, "DCSBM")?;
    let (blocks, mut meta) = resolve_blocks(g, opts)?;
    Ok(dcsbm_with_blocks(g, blocks, &mut meta, ModelKind::Dcsbm))
}

fn dcsbm_with_blocks(
    g: &Graph,
    blocks: Blocks,
    meta: &mut BTreeMap<String, Value>,
    kind: ModelKind,
) -> ModelFit {
    let loops = g.has_loops();
    let n = g.n();
    let a = g.adjacency();
    let k = blocks.k();
    let z = blocks.assignment.clone();
    let sizes = blocks.sizes();
    let degree: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| modeled(i, j, loops))
                .map(|j| {
                    if g.is_directed() {
                        a[(i, j)] + a[(j, i)]
                    } else {
                        a[(i, j)]
                    }
                })
                .sum()
        })
        .collect();
    let mut block_degree = vec![0.0; k];
    for i in 0..n {
        block_degree[z[i]] += degree[i];
    }
    let theta: Vec<f64> = (0..n)
        .map(|i| {
            if block_degree[z[i]] > 0.0 {
                degree[i] / block_degree[z[i]]
            } else {
                1.0 / sizes[z[i]] as f64
            }
        })
        .collect();
    let (edges, pairs) = block_totals(g, &blocks, loops);
    empty_pairs_metadata(&pairs, meta);
    let scale: Vec<Vec<f64>> = (0..k)
        .map(|x| {
            (0..k)
                .map(|y| {
                    if pairs[x][y] == 0 {
                        0.0
                    } else {
                        edges[x][y] * (sizes[x] * sizes[y]) as f64 / pairs[x][y] as f64
                    }
                })
                .collect()
        })
        .collect();
    let p = DMatrix::from_fn(n, n, |i, j| theta[i] * theta[j] * scale[z[i]][z[j]]);
    let n_params = block_parameter_count(k, g.is_directed()) + (n - k);
    finish(
        kind,
        g,
        p,
        ModelParams::Dcsbm {
            blocks,
            block_edges: edges,
            theta,
        },
        n_params,
        meta.clone(),
    )
}

/// Degree-corrected Erdős–Rényi: the one-block DCSBM.
pub fn fit_dcer(g: &Graph) -> Result<ModelFit> {
    require_binary(g, "DCER")?;
    let blocks = Blocks {
        assignment: vec![0; g.n()],
        names: vec!["0".into()],
    };
    let mut meta = BTreeMap::new();
    Ok(dcsbm_with_blocks(g, blocks, &mut meta, ModelKind::Dcer))
}

/// Random dot product graph from the adjacency spectral embedding.
pub fn fit_rdpg(g: &Graph, d: Option<usize>) -> Result<ModelFit> {
    require_binary(g, "RDPG")?;
    let e = ase(g, d, DEFAULT_ELBOWS)?;
    let p = match &e.y {
        Some(y) => &e.x * y.transpose(),
        None => &e.x * e.x.transpose(),
    };
    let n = g.n();
    let n_params = if g.is_directed() {
        2 * n * e.d
    } else {
        n * e.d
    };
    let mut meta = BTreeMap::new();
    meta.insert("embedding_dimension".into(), json!(e.d));
    Ok(finish(
        ModelKind::Rdpg,
        g,
        p,
        ModelParams::Rdpg { x: e.x, y: e.y },
        n_params,
        meta,
    ))
}

/// Saturated inhomogeneous ER model: `p_mat` is the adjacency matrix.
pub fn fit_ier(g: &Graph) -> Result<ModelFit> {
    require_binary(g, "IER")?;
    let n_params = likelihood_entries(g.n(), g.is_directed(), g.has_loops());
    Ok(finish(
        ModelKind::Ier,
        g,
        g.adjacency().clone(),
        ModelParams::Ier,
        n_params,
        BTreeMap::new(),
    ))
}

/// Fits the requested model kind; block models use `opts` for labels.
pub fn fit(
    kind: ModelKind,
    g: &Graph,
    opts: &BlockFitOptions,
    d: Option<usize>,
) -> Result<ModelFit> {
    match kind {
        ModelKind::Er => fit_er(g),
        ModelKind::Sbm => fit_sbm(g, opts),
        ModelKind::Dcer => fit_dcer(g),
        ModelKind::Dcsbm => fit_dcsbm(g, opts),
        ModelKind::Rdpg => fit_rdpg(g, d),
        ModelKind::Ier => fit_ier(g),
    }
}

pub const LIKELIHOOD_CLIP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GoodnessOfFit {
    /// Squared error summed over every modeled entry, both triangles.
    pub mse: f64,
    /// Bernoulli log-likelihood over independent entries, with probabilities
    /// clipped to `[1e-6, 1 - 1e-6]`.
    pub log_likelihood: f64,
    pub n_params: usize,
    pub bic: f64,
}

pub fn goodness_of_fit(fit: &ModelFit, g: &Graph) -> Result<GoodnessOfFit> {
    let n = g.n();
    if fit.p_mat.shape() != (n, n) {
        return Err(Error::ShapeMismatch(format!(
            "fit is {:?} but graph has {n} nodes",
            fit.p_mat.shape()
        )));
    }
    if !g.is_binary() {
        return Err(Error::Weighted("likelihood needs a binary graph".into()));
    }
    let a = g.adjacency();
    let mut mse = 0.0;
    let mut ll = 0.0;
    for j in 0..n {
        for i in 0..n {
            if !modeled(i, j, fit.loops) {
                continue;
            }
            let p = fit.p_mat[(i, j)];
            mse += (a[(i, j)] - p).powi(2);
            if fit.directed || i <= j {
                let q = p.clamp(LIKELIHOOD_CLIP, 1.0 - LIKELIHOOD_CLIP);
                ll += if a[(i, j)] != 0.0 {
                    q.ln()
                } else {
                    (1.0 - q).ln()
                };
            }
        }
    }
    let entries = likelihood_entries(n, fit.directed, fit.loops).max(1);
    Ok(GoodnessOfFit {
        mse,
        log_likelihood: ll,
        n_params: fit.n_params,
        bic: -2.0 * ll + fit.n_params as f64 * (entries as f64).ln(),
    })
}

pub fn sample_from_fit(fit: &ModelFit, seed: u64) -> Result<Graph> {
    sample_ier(&fit.p_mat, fit.directed, fit.loops, None, seed)
}

impl ModelFit {
    /// `{"kind","n_params","params",...}` with `p_mat_file` when the matrix
    /// was written separately.
    pub fn to_json(&self, p_mat_file: Option<&str>) -> Value {
        let blocks_json = |b: &Blocks| json!({"assignment": b.assignment, "names": b.names});
        let params = match &self.params {
            ModelParams::Er { p } => json!({ "p": p }),
            ModelParams::Sbm { blocks, b } => json!({"blocks": blocks_json(blocks), "B": b}),
            ModelParams::Dcsbm {
                blocks,
                block_edges,
                theta,
            } => json!({"blocks": blocks_json(blocks), "B": block_edges, "theta": theta}),
            ModelParams::Rdpg { x, y } => json!({"X": rows(x), "Y": y.as_ref().map(rows)}),
            ModelParams::Ier => json!({}),
        };
        let mut out = json!({
            "kind": self.kind.name(),
            "n_params": self.n_params,
            "params": params,
            "directed": self.directed,
            "loops": self.loops,
            "metadata": self.metadata,
        });
        if let Some(path) = p_mat_file {
            out["p_mat_file"] = json!(path);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sims::{sample_sbm, SbmParams};

    fn undirected(n: usize, edges: &[(usize, usize)]) -> Graph {
        let mut a = DMatrix::zeros(n, n);
        for &(i, j) in edges {
            a[(i, j)] = 1.0;
            a[(j, i)] = 1.0;
        }
        Graph::new(a, false).unwrap()
    }

    fn labels(names: &[&str]) -> BlockFitOptions {
        BlockFitOptions {
            labels: Some(names.iter().map(|s| s.to_string()).collect()),
            ..Default::default()
        }
    }

    #[test]
    fn er_examples() {
        let fit = fit_er(&undirected(3, &[(0, 1), (0, 2)])).unwrap();
        assert_eq!(fit.params, ModelParams::Er { p: 2.0 / 3.0 });
        assert_eq!(fit.n_params, 1);
        assert_eq!(fit.p_mat[(0, 0)], 0.0);
        assert_eq!(
            fit_er(&undirected(3, &[])).unwrap().params,
            ModelParams::Er { p: 0.0 }
        );
        let complete = Graph::new(
            DMatrix::from_fn(4, 4, |i, j| if i == j { 0.0 } else { 1.0 }),
            true,
        )
        .unwrap();
        assert_eq!(
            fit_er(&complete).unwrap().params,
            ModelParams::Er { p: 1.0 }
        );
        let weighted = Graph::new(DMatrix::from_element(2, 2, 0.5), false).unwrap();
        assert!(matches!(fit_er(&weighted), Err(Error::Weighted(_))));
    }

    #[test]
    fn sbm_with_labels() {
        let g = undirected(4, &[(0, 1), (0, 2)]);
        let fit = fit_sbm(&g, &labels(&["a", "a", "b", "b"])).unwrap();
        match &fit.params {
            ModelParams::Sbm { b, .. } => assert_eq!(b, &vec![vec![1.0, 0.25], vec![0.25, 0.0]]),
            other => panic!("{other:?}"),
        }
        assert_eq!(fit.n_params, 3);

        let one = fit_sbm(&g, &labels(&["x"; 4])).unwrap();
        assert_eq!(one.p_mat, fit_er(&g).unwrap().p_mat);
    }

    #[test]
    fn sbm_flags_empty_block_pairs() {
        let g = undirected(3, &[(0, 1)]);
        let fit = fit_sbm(&g, &labels(&["a", "a", "b"])).unwrap();
        assert!(fit.metadata.contains_key("zero_potential_block_pairs"));
    }

    #[test]
    fn sbm_recovers_block_probabilities() {
        let params = SbmParams::new(vec![150, 150], vec![vec![0.5, 0.1], vec![0.1, 0.5]]);
        let g = sample_sbm(&params, None, 17).unwrap();
        let fit = fit_sbm(&g, &BlockFitOptions::default()).unwrap();
        let ModelParams::Sbm { b, .. } = &fit.params else {
            panic!()
        };
        for (x, row) in b.iter().enumerate() {
            for (y, v) in row.iter().enumerate() {
                assert!((v - params.b[x][y]).abs() <= 0.05);
            }
        }
    }

    #[test]
    fn sbm_estimates_labels_without_them() {
        let params = SbmParams::new(vec![100, 100], vec![vec![0.6, 0.05], vec![0.05, 0.6]]);
        let g = sample_sbm(&params, None, 2).unwrap();
        let unlabeled = Graph::new(g.adjacency().clone(), false).unwrap();
        let fit = fit_sbm(
            &unlabeled,
            &BlockFitOptions {
                k: Some(2),
                ..Default::default()
            },
        )
        .unwrap();
        let ModelParams::Sbm { blocks, .. } = &fit.params else {
            panic!()
        };
        let ari =
            crate::cluster::adjusted_rand_index(&blocks.assignment, &params.memberships()).unwrap();
        assert!(ari > 0.95, "{ari}");
        assert_eq!(fit.metadata["labels"], json!("estimated"));
    }

    #[test]
    fn dcsbm_theta_is_degree_ratio() {
        // Block a = {0, 1} with degrees (2, 1); node 2 is in block b.
        let g = undirected(3, &[(0, 1), (0, 2)]);
        let fit = fit_dcsbm(&g, &labels(&["a", "a", "b"])).unwrap();
        let ModelParams::Dcsbm { theta, .. } = &fit.params else {
            panic!()
        };
        assert!((theta[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((theta[1] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(fit.n_params, 3 + 1);
    }

    #[test]
    fn regular_blocks_make_dcsbm_equal_sbm() {
        // Two 4-cycles joined by a perfect matching: every node has degree 3.
        let g = undirected(
            8,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 0),
                (4, 5),
                (5, 6),
                (6, 7),
                (7, 4),
                (0, 4),
                (1, 5),
                (2, 6),
                (3, 7),
            ],
        );
        let opts = labels(&["a", "a", "a", "a", "b", "b", "b", "b"]);
        let dc = fit_dcsbm(&g, &opts).unwrap();
        let sbm = fit_sbm(&g, &opts).unwrap();
        assert!((dc.p_mat - sbm.p_mat).abs().max() < 1e-12);
    }

    #[test]
    fn rdpg_of_complete_graph() {
        let g = undirected(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let fit = fit_rdpg(&g, Some(1)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!((fit.p_mat[(i, j)] - 1.0).abs() < 1e-6);
                }
            }
            assert_eq!(fit.p_mat[(i, i)], 0.0);
        }
        assert_eq!(fit.n_params, 4);
        assert!(fit.p_mat.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn ier_is_saturated() {
        let g = undirected(10, &[(0, 1), (2, 3), (4, 9)]);
        let fit = fit_ier(&g).unwrap();
        assert_eq!(fit.n_params, 45);
        let gof = goodness_of_fit(&fit, &g).unwrap();
        assert_eq!(gof.mse, 0.0);
        let expected = 45.0 * (1.0 - LIKELIHOOD_CLIP).ln();
        assert!((gof.log_likelihood - expected).abs() < 1e-12);
        assert_eq!(
            sample_from_fit(&fit, 99).unwrap().adjacency(),
            g.adjacency()
        );
    }

    #[test]
    fn goodness_of_fit_conventions() {
        let g = undirected(2, &[(0, 1)]);
        let mut fit = fit_er(&g).unwrap();
        fit.p_mat = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        let gof = goodness_of_fit(&fit, &g).unwrap();
        assert!((gof.log_likelihood - 0.5_f64.ln()).abs() < 1e-15);
        assert_eq!(gof.mse, 0.5);
        assert!((gof.bic - (-2.0 * 0.5_f64.ln())).abs() < 1e-15);
        assert!(goodness_of_fit(&fit, &undirected(3, &[])).is_err());
    }

    #[test]
    fn dcsbm_beats_er_on_bic() {
        let theta: Vec<f64> = (0..400)
            .map(|i| if i % 2 == 0 { 1.0 } else { 0.2 })
            .collect();
        let params = SbmParams::new(vec![200, 200], vec![vec![0.9, 0.1], vec![0.1, 0.9]])
            .with_degree_corrections(theta);
        let g = sample_sbm(&params, None, 4).unwrap();
        let dc = goodness_of_fit(&fit_dcsbm(&g, &BlockFitOptions::default()).unwrap(), &g).unwrap();
        let er = goodness_of_fit(&fit_er(&g).unwrap(), &g).unwrap();
        assert!(dc.bic < er.bic, "{dc:?} {er:?}");
        let sbm = goodness_of_fit(&fit_sbm(&g, &BlockFitOptions::default()).unwrap(), &g).unwrap();
        assert!(dc.mse < sbm.mse);
    }

    #[test]
    fn samples_from_fits() {
        assert_eq!(
            sample_from_fit(&fit_er(&undirected(5, &[])).unwrap(), 1)
                .unwrap()
                .edge_count(),
            0
        );
        let params = SbmParams::new(vec![80, 80], vec![vec![0.4, 0.1], vec![0.1, 0.4]]);
        let g = sample_sbm(&params, None, 8).unwrap();
        let fit = fit_sbm(&g, &BlockFitOptions::default()).unwrap();
        let s = sample_from_fit(&fit, 3).unwrap();
        let ModelParams::Sbm { b, .. } = &fit.params else {
            panic!()
        };
        let within: f64 = (0..80)
            .flat_map(|i| (0..80).map(move |j| (i, j)))
            .filter(|(i, j)| i < j)
            .map(|(i, j)| s.adjacency()[(i, j)])
            .sum();
        let pairs = 80.0 * 79.0 / 2.0;
        let sd = (b[0][0] * (1.0 - b[0][0]) / pairs).sqrt();
        assert!((within / pairs - b[0][0]).abs() <= 3.0 * sd);
    }
}
