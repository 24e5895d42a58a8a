//! Spectral embeddings of one or several graphs, and automatic choice of the
//! embedding dimension from a singular value scree.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::linalg::{singular_values, svd_top, Svd};

/// Result of profile-likelihood elbow detection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElbowSelection {
    /// Cumulative number of retained values at each elbow, 1-based.
    pub elbows: Vec<usize>,
    /// Profile log-likelihood of every split point of the segment searched
    /// for each elbow.
    pub likelihood_profiles: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

impl ElbowSelection {
    /// Second elbow when there is one, otherwise the first.
    pub fn default_dimension(&self) -> usize {
        self.elbows.get(1).copied().unwrap_or(self.elbows[0])
    }
}

const VARIANCE_FLOOR: f64 = 1e-12;

fn gaussian_log_density(x: f64, mean: f64, variance: f64) -> f64 {
    -0.5 * (2.0 * std::f64::consts::PI * variance).ln() - (x - mean).powi(2) / (2.0 * variance)
}

/// Profile log-likelihood of splitting `values` after the first `q` entries,
/// for `q = 1..=len`, under two Gaussians with a shared variance.
pub fn profile_likelihood(values: &[f64]) -> Vec<f64> {
    let len = values.len();
    (1..=len)
        .map(|q| {
            let (head, tail) = values.split_at(q);
            let mean = |s: &[f64]| {
                if s.is_empty() {
                    0.0
                } else {
                    s.iter().sum::<f64>() / s.len() as f64
                }
            };
            let (mu1, mu2) = (mean(head), mean(tail));
            let ss: f64 = head.iter().map(|v| (v - mu1).powi(2)).sum::<f64>()
                + tail.iter().map(|v| (v - mu2).powi(2)).sum::<f64>();
            let variance = (ss / len as f64).max(VARIANCE_FLOOR);
            head.iter()
                .map(|&v| gaussian_log_density(v, mu1, variance))
                .sum::<f64>()
                + tail
                    .iter()
                    .map(|&v| gaussian_log_density(v, mu2, variance))
                    .sum::<f64>()
        })
        .collect()
}

/// Finds up to `n_elbows` elbows in a positive nonincreasing sequence by
/// repeatedly splitting the remaining tail at its profile-likelihood maximum.
pub fn select_dimension(values: &[f64], n_elbows: usize) -> Result<ElbowSelection> {
    if values.is_empty() {
        return Err(invalid("no values to select a dimension from"));
    }
    if n_elbows == 0 {
        return Err(invalid("n_elbows must be at least 1"));
    }
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(invalid(format!("values must be positive, found {v}")));
    }
    if values.windows(2).any(|w| w[1] > w[0]) {
        return Err(invalid("values must be sorted in nonincreasing order"));
    }

    let mut elbows = Vec::new();
    let mut profiles = Vec::new();
    let mut offset = 0;
    while elbows.len() < n_elbows && offset < values.len() {
        let profile = profile_likelihood(&values[offset..]);
        let mut best = 0;
        for (q, &ll) in profile.iter().enumerate() {
            if ll > profile[best] {
                best = q;
            }
        }
        offset += best + 1;
        elbows.push(offset);
        profiles.push(profile);
    }
    Ok(ElbowSelection {
        elbows,
        likelihood_profiles: profiles,
        values: values.to_vec(),
    })
}

/// Latent positions of the vertices of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub x: DMatrix<f64>,
    /// Right (incoming) latent positions; present for directed graphs.
    pub y: Option<DMatrix<f64>>,
    pub singular_values: Vec<f64>,
    pub d: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingJson {
    pub d: usize,
    pub singular_values: Vec<f64>,
    #[serde(rename = "X")]
    pub x: Vec<Vec<f64>>,
    #[serde(rename = "Y")]
    pub y: Option<Vec<Vec<f64>>>,
}

pub(crate) fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

pub(crate) fn from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::ShapeMismatch("ragged rows".into()));
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

impl Embedding {
    pub fn to_json(&self) -> EmbeddingJson {
        EmbeddingJson {
            d: self.d,
            singular_values: self.singular_values.clone(),
            x: rows(&self.x),
            y: self.y.as_ref().map(rows),
        }
    }

    pub fn from_json(j: &EmbeddingJson) -> Result<Self> {
        let x = from_rows(&j.x)?;
        let y = j.y.as_deref().map(from_rows).transpose()?;
        if x.ncols() != j.d || j.singular_values.len() != j.d {
            return Err(Error::ShapeMismatch(format!(
                "embedding declares d = {} but has {} columns",
                j.d,
                x.ncols()
            )));
        }
        Ok(Self {
            x,
            y,
            singular_values: j.singular_values.clone(),
            d: j.d,
        })
    }

    /// One row per node: `x_1..x_d` followed by `y_1..y_d` when present.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.x.nrows() {
            let mut fields: Vec<String> = self.x.row(i).iter().map(|v| format!("{v}")).collect();
            if let Some(y) = &self.y {
                fields.extend(y.row(i).iter().map(|v| format!("{v}")));
            }
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

/// Adjacency matrix with the diagonal replaced by `degree_i / (n - 1)`, using
/// the mean of in- and out-degree for directed graphs.
pub fn augment_diagonal(g: &Graph) -> DMatrix<f64> {
    augment_matrix(g.adjacency(), g.is_directed())
}

fn augment_matrix(a: &DMatrix<f64>, directed: bool) -> DMatrix<f64> {
    let n = a.nrows();
    let mut out = a.clone();
    if n < 2 {
        return out;
    }
    for i in 0..n {
        let out_deg: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)]).sum();
        let degree = if directed {
            let in_deg: f64 = (0..n).filter(|&j| j != i).map(|j| a[(j, i)]).sum();
            (out_deg + in_deg) / 2.0
        } else {
            out_deg
        };
        out[(i, i)] = degree / (n - 1) as f64;
    }
    out
}

/// Relative threshold below which a singular value counts as zero.
const RANK_TOL: f64 = 1e-10;

/// Leading singular triplets of `m`, with `d` fixed or chosen by elbow
/// selection on the full spectrum.
fn spectral_decomposition(m: &DMatrix<f64>, d: Option<usize>, n_elbows: usize) -> Result<Svd> {
    let n = m.nrows();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let svd = match d {
        Some(0) => return Err(invalid("embedding dimension must be at least 1")),
        Some(d) if d > n.min(m.ncols()) => {
            return Err(invalid(format!(
                "embedding dimension {d} exceeds matrix size {n}"
            )))
        }
        Some(d) => svd_top(m, d),
        None => {
            let values = singular_values(m);
            let top = values.first().copied().unwrap_or(0.0);
            let positive: Vec<f64> = values
                .iter()
                .copied()
                .take_while(|&s| s > RANK_TOL * top)
                .collect();
            if positive.is_empty() {
                return Err(Error::Degenerate(
                    "matrix has no positive singular values".into(),
                ));
            }
            let d = select_dimension(&positive, n_elbows)?.default_dimension();
            svd_top(m, d)
        }
    };
    let top = svd.s.first().copied().unwrap_or(0.0);
    if top <= 0.0 || !top.is_finite() {
        return Err(Error::Degenerate(
            "matrix has no positive singular values".into(),
        ));
    }
    if let Some(k) = svd.s.iter().position(|&s| s <= RANK_TOL * top) {
        return Err(Error::Degenerate(format!(
            "requested dimension {} exceeds the numerical rank {k}",
            svd.s.len()
        )));
    }
    Ok(svd)
}

fn scale_columns(m: &DMatrix<f64>, s: &[f64]) -> DMatrix<f64> {
    let mut out = m.clone();
    for (k, sv) in s.iter().enumerate() {
        out.column_mut(k).scale_mut(sv.sqrt());
    }
    out
}

fn embedding_from_svd(svd: Svd, directed: bool) -> Embedding {
    let x = scale_columns(&svd.u, &svd.s);
    let y = directed.then(|| scale_columns(&svd.v, &svd.s));
    Embedding {
        x,
        y,
        d: svd.s.len(),
        singular_values: svd.s,
    }
}

/// Default number of elbows examined when choosing the dimension.
pub const DEFAULT_ELBOWS: usize = 2;

/// Adjacency spectral embedding of the diagonally augmented adjacency matrix.
pub fn ase(g: &Graph, d: Option<usize>, n_elbows: usize) -> Result<Embedding> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let svd = spectral_decomposition(&augment_diagonal(g), d, n_elbows)?;
    Ok(embedding_from_svd(svd, g.is_directed()))
}

/// Regularized normalized Laplacian `D^{-1/2} A D^{-1/2}`, with out-degrees
/// on the left and in-degrees on the right for directed graphs.
pub fn regularized_laplacian(g: &Graph, tau: f64) -> Result<DMatrix<f64>> {
    if tau < 0.0 || !tau.is_finite() {
        return Err(invalid("regularizer must be finite and nonnegative"));
    }
    let a = g.adjacency();
    let n = g.n();
    let row: Vec<f64> = (0..n).map(|i| a.row(i).sum() + tau).collect();
    let col: Vec<f64> = if g.is_directed() {
        (0..n).map(|j| a.column(j).sum() + tau).collect()
    } else {
        row.clone()
    };
    if let Some(i) = row.iter().chain(&col).position(|&d| d <= 0.0) {
        return Err(Error::Degenerate(format!(
            "node {} has zero degree; restrict to the largest connected component or use a positive regularizer",
            i % n
        )));
    }
    let mut l = DMatrix::from_fn(n, n, |i, j| a[(i, j)] / (row[i].sqrt() * col[j].sqrt()));
    if !g.is_directed() {
        for j in 0..n {
            for i in 0..j {
                l[(j, i)] = l[(i, j)];
            }
        }
    }
    Ok(l)
}

/// Laplacian spectral embedding.
pub fn lse(g: &Graph, d: Option<usize>, tau: Option<f64>, n_elbows: usize) -> Result<Embedding> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let l = regularized_laplacian(g, tau.unwrap_or(0.0))?;
    let svd = spectral_decomposition(&l, d, n_elbows)?;
    Ok(embedding_from_svd(svd, g.is_directed()))
}

fn check_population(gs: &[Graph]) -> Result<usize> {
    if gs.len() < 2 {
        return Err(invalid("joint embedding needs at least two graphs"));
    }
    let n = gs[0].n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    for g in gs {
        if g.n() != n {
            return Err(Error::ShapeMismatch(format!(
                "graphs have {n} and {} nodes",
                g.n()
            )));
        }
        if g.is_directed() {
            return Err(invalid(
                "joint embedding requires undirected graphs; symmetrize first",
            ));
        }
    }
    Ok(n)
}

/// The `mn x mn` matrix whose `(i, j)` block is `(A_i + A_j) / 2`.
pub fn omnibus_matrix(gs: &[Graph]) -> Result<DMatrix<f64>> {
    let n = check_population(gs)?;
    let m = gs.len();
    let mut out = DMatrix::zeros(m * n, m * n);
    for bi in 0..m {
        for bj in 0..m {
            let (ai, aj) = (gs[bi].adjacency(), gs[bj].adjacency());
            for c in 0..n {
                for r in 0..n {
                    out[(bi * n + r, bj * n + c)] = (ai[(r, c)] + aj[(r, c)]) / 2.0;
                }
            }
        }
    }
    Ok(out)
}

/// Omnibus embedding: one embedding per graph, all in a shared coordinate
/// system.
pub fn omnibus_embed(gs: &[Graph], d: Option<usize>, n_elbows: usize) -> Result<Vec<Embedding>> {
    let omni = omnibus_matrix(gs)?;
    let n = gs[0].n();
    let joint = embedding_from_svd(
        spectral_decomposition(&augment_matrix(&omni, false), d, n_elbows)?,
        false,
    );
    Ok((0..gs.len())
        .map(|i| Embedding {
            x: joint.x.rows(i * n, n).into_owned(),
            y: None,
            singular_values: joint.singular_values.clone(),
            d: joint.d,
        })
        .collect())
}

/// Shared basis and per-graph score matrices of a multiple adjacency spectral
/// embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct Mase {
    pub v: DMatrix<f64>,
    pub scores: Vec<DMatrix<f64>>,
    pub singular_values: Vec<f64>,
    pub d: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MaseJson {
    pub d: usize,
    pub singular_values: Vec<f64>,
    #[serde(rename = "V")]
    pub v: Vec<Vec<f64>>,
    #[serde(rename = "R")]
    pub scores: Vec<Vec<Vec<f64>>>,
}

impl Mase {
    pub fn to_json(&self) -> MaseJson {
        MaseJson {
            d: self.d,
            singular_values: self.singular_values.clone(),
            v: rows(&self.v),
            scores: self.scores.iter().map(rows).collect(),
        }
    }
}

/// Multiple adjacency spectral embedding: concatenate per-graph singular
/// vectors, take their leading left singular vectors `V`, and score each
/// graph as `Vᵀ A_i V`.
pub fn mase(gs: &[Graph], d: Option<usize>, n_elbows: usize) -> Result<Mase> {
    let n = check_population(gs)?;
    let bases: Vec<DMatrix<f64>> = gs
        .par_iter()
        .map(|g| spectral_decomposition(&augment_diagonal(g), d, n_elbows).map(|s| s.u))
        .collect::<Result<_>>()?;
    let total: usize = bases.iter().map(|b| b.ncols()).sum();
    let mut concat = DMatrix::zeros(n, total);
    let mut col = 0;
    for b in &bases {
        concat.columns_mut(col, b.ncols()).copy_from(b);
        col += b.ncols();
    }
    let shared = spectral_decomposition(&concat, d.map(|d| d.min(total)), n_elbows)?;
    let v = shared.u;
    let scores = gs
        .iter()
        .map(|g| v.transpose() * g.adjacency() * &v)
        .collect();
    Ok(Mase {
        d: v.ncols(),
        v,
        scores,
        singular_values: shared.s,
    })
}
