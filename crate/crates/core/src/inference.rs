//! Two-sample tests on pairs of graphs.
//!
//! The latent position test needs matched vertices and compares Procrustes
//! aligned spectral embeddings against a parametric bootstrap. The latent
//! distribution test only compares the distributions of embedded points,
//! using an unbiased MMD statistic and a permutation null.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::embed::{ase, Embedding, DEFAULT_ELBOWS};
use crate::error::{invalid, Error, Result};
use crate::graph::{symmetrize, Graph, SymmetrizeMethod};
use crate::rng::{derive_seed, stream_rng};
use crate::sims::sample_ier;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TestMethod {
    LatentPosition,
    LatentDistribution,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    pub method: TestMethod,
    pub statistic: f64,
    pub p_value: f64,
    pub d_used: usize,
    pub n_bootstraps: usize,
    pub seed: u64,
    pub null_stats: Vec<f64>,
}

/// `(1 + #{null >= statistic}) / (1 + B)`.
pub fn empirical_p_value(statistic: f64, null_stats: &[f64]) -> f64 {
    let exceed = null_stats.iter().filter(|&&s| s >= statistic).count();
    (1 + exceed) as f64 / (1 + null_stats.len()) as f64
}

/// Orthogonal `W` minimising `||X1 - X2 W||_F`, and that minimum.
pub fn procrustes_align(x1: &DMatrix<f64>, x2: &DMatrix<f64>) -> Result<(DMatrix<f64>, f64)> {
    if x1.shape() != x2.shape() {
        return Err(Error::ShapeMismatch(format!(
            "cannot align {:?} with {:?}",
            x1.shape(),
            x2.shape()
        )));
    }
    let d = x1.ncols();
    if x1 == x2 {
        return Ok((DMatrix::identity(d, d), 0.0));
    }
    let svd = (x2.transpose() * x1).svd(true, true);
    let (Some(u), Some(v_t)) = (svd.u, svd.v_t) else {
        return Err(Error::Degenerate("Procrustes SVD failed".into()));
    };
    let w = u * v_t;
    let distance = (x1 - x2 * &w).norm();
    Ok((w, distance))
}

fn check_unweighted(g: &Graph) -> Result<()> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_binary() {
        return Err(Error::Weighted("tests model binary graphs".into()));
    }
    Ok(())
}

/// Embeds both graphs with a common dimension: the given one, or the larger
/// of the two automatic choices.
fn shared_embeddings(
    g1: &Graph,
    g2: &Graph,
    d: Option<usize>,
) -> Result<(Embedding, Embedding, usize)> {
    match d {
        Some(d) => Ok((
            ase(g1, Some(d), DEFAULT_ELBOWS)?,
            ase(g2, Some(d), DEFAULT_ELBOWS)?,
            d,
        )),
        None => {
            let e1 = ase(g1, None, DEFAULT_ELBOWS)?;
            let e2 = ase(g2, None, DEFAULT_ELBOWS)?;
            let d = e1.d.max(e2.d);
            let e1 = if e1.d == d {
                e1
            } else {
                ase(g1, Some(d), DEFAULT_ELBOWS)?
            };
            let e2 = if e2.d == d {
                e2
            } else {
                ase(g2, Some(d), DEFAULT_ELBOWS)?
            };
            Ok((e1, e2, d))
        }
    }
}

/// `clip(X Xᵀ, 0, 1)`, exactly symmetric. Estimated positions can give
/// dot products slightly outside the unit interval.
fn clipped_gram(x: &DMatrix<f64>) -> DMatrix<f64> {
    let mut p = x * x.transpose();
    let n = p.nrows();
    for j in 0..n {
        for i in 0..=j {
            let v = p[(i, j)].clamp(0.0, 1.0);
            p[(i, j)] = v;
            p[(j, i)] = v;
        }
    }
    p
}

/// Null statistics from pairs of graphs drawn from the RDPG at `x`.
fn position_null(x: &DMatrix<f64>, d: usize, n_bootstraps: usize, seed: u64) -> Result<Vec<f64>> {
    let p = clipped_gram(x);
    (0..n_bootstraps)
        .into_par_iter()
        .map(|b| {
            let s = derive_seed(seed, b as u64);
            let a = sample_ier(&p, false, false, None, derive_seed(s, 0))?;
            let c = sample_ier(&p, false, false, None, derive_seed(s, 1))?;
            let xa = ase(&a, Some(d), DEFAULT_ELBOWS)?.x;
            let xc = ase(&c, Some(d), DEFAULT_ELBOWS)?.x;
            Ok(procrustes_align(&xa, &xc)?.1)
        })
        .collect()
}

/// Semiparametric test that two vertex-matched undirected graphs share
/// latent positions. The bootstrap runs under both fitted models and the
/// larger p-value is reported with the null statistics that produced it.
pub fn latent_position_test(
    g1: &Graph,
    g2: &Graph,
    d: Option<usize>,
    n_bootstraps: usize,
    seed: u64,
) -> Result<TestResult> {
    check_unweighted(g1)?;
    check_unweighted(g2)?;
    if g1.n() != g2.n() {
        return Err(Error::ShapeMismatch(format!(
            "latent position test needs matched vertices, got {} and {}",
            g1.n(),
            g2.n()
        )));
    }
    if g1.is_directed() || g2.is_directed() {
        return Err(invalid("latent position test needs undirected graphs"));
    }
    if n_bootstraps == 0 {
        return Err(invalid("n_bootstraps must be at least 1"));
    }
    let (e1, e2, d) = shared_embeddings(g1, g2, d)?;
    let statistic = procrustes_align(&e1.x, &e2.x)?.1;
    let null1 = position_null(&e1.x, d, n_bootstraps, derive_seed(seed, 1))?;
    let null2 = position_null(&e2.x, d, n_bootstraps, derive_seed(seed, 2))?;
    let p1 = empirical_p_value(statistic, &null1);
    let p2 = empirical_p_value(statistic, &null2);
    let (p_value, null_stats) = if p2 > p1 { (p2, null2) } else { (p1, null1) };
    Ok(TestResult {
        method: TestMethod::LatentPosition,
        statistic,
        p_value,
        d_used: d,
        n_bootstraps,
        seed,
        null_stats,
    })
}

fn sq_dist(a: &DMatrix<f64>, i: usize, b: &DMatrix<f64>, j: usize) -> f64 {
    a.row(i)
        .iter()
        .zip(b.row(j).iter())
        .map(|(x, y)| (x - y).powi(2))
        .sum()
}

/// Median of pooled pairwise distances, or 1 when that is zero.
pub fn median_bandwidth(z1: &DMatrix<f64>, z2: &DMatrix<f64>) -> f64 {
    let pooled = stack(z1, z2);
    let n = pooled.nrows();
    let mut d: Vec<f64> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| sq_dist(&pooled, i, &pooled, j).sqrt())
        .collect();
    if d.is_empty() {
        return 1.0;
    }
    d.sort_by(f64::total_cmp);
    let m = d.len();
    let median = if m % 2 == 1 {
        d[m / 2]
    } else {
        0.5 * (d[m / 2 - 1] + d[m / 2])
    };
    if median > 0.0 {
        median
    } else {
        1.0
    }
}

fn stack(z1: &DMatrix<f64>, z2: &DMatrix<f64>) -> DMatrix<f64> {
    let (n1, n2) = (z1.nrows(), z2.nrows());
    DMatrix::from_fn(n1 + n2, z1.ncols(), |i, j| {
        if i < n1 {
            z1[(i, j)]
        } else {
            z2[(i - n1, j)]
        }
    })
}

fn check_samples(z1: &DMatrix<f64>, z2: &DMatrix<f64>) -> Result<()> {
    if z1.nrows() < 2 || z2.nrows() < 2 {
        return Err(invalid("each sample needs at least 2 points"));
    }
    if z1.ncols() != z2.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "samples have dimensions {} and {}",
            z1.ncols(),
            z2.ncols()
        )));
    }
    Ok(())
}

/// Unbiased MMD² with a Gaussian kernel of bandwidth `sigma` (median
/// heuristic by default).
pub fn mmd_ustat(z1: &DMatrix<f64>, z2: &DMatrix<f64>, bandwidth: Option<f64>) -> Result<f64> {
    check_samples(z1, z2)?;
    let sigma = match bandwidth {
        Some(s) if s > 0.0 && s.is_finite() => s,
        Some(s) => return Err(invalid(format!("bandwidth must be positive, got {s}"))),
        None => median_bandwidth(z1, z2),
    };
    let k = |a: &DMatrix<f64>, i: usize, b: &DMatrix<f64>, j: usize| {
        (-sq_dist(a, i, b, j) / (2.0 * sigma * sigma)).exp()
    };
    let within = |z: &DMatrix<f64>| {
        let n = z.nrows();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += k(z, i, z, j);
                }
            }
        }
        s / (n * (n - 1)) as f64
    };
    let mut cross = 0.0;
    for i in 0..z1.nrows() {
        for j in 0..z2.nrows() {
            cross += k(z1, i, z2, j);
        }
    }
    Ok(within(z1) + within(z2) - 2.0 * cross / (z1.nrows() * z2.nrows()) as f64)
}

/// Pooled kernel matrix; permutation statistics only need group sums.
struct PooledKernel {
    k: DMatrix<f64>,
    off_diagonal_total: f64,
}

impl PooledKernel {
    fn new(pooled: &DMatrix<f64>, sigma: f64) -> Self {
        let n = pooled.nrows();
        let mut k = DMatrix::zeros(n, n);
        let mut total = 0.0;
        for j in 0..n {
            for i in 0..n {
                if i != j {
                    let v = (-sq_dist(pooled, i, pooled, j) / (2.0 * sigma * sigma)).exp();
                    k[(i, j)] = v;
                    total += v;
                }
            }
        }
        Self {
            k,
            off_diagonal_total: total,
        }
    }

    fn within(&self, idx: &[usize]) -> f64 {
        let mut s = 0.0;
        for &j in idx {
            let col = self.k.column(j);
            for &i in idx {
                s += col[i];
            }
        }
        s
    }

    /// Statistic when `order[..n1]` is the first sample.
    fn statistic(&self, order: &[usize], n1: usize) -> f64 {
        let (a, b) = order.split_at(n1);
        let (n1, n2) = (a.len() as f64, b.len() as f64);
        let s11 = self.within(a);
        let s22 = self.within(b);
        let cross = self.off_diagonal_total - s11 - s22;
        s11 / (n1 * (n1 - 1.0)) + s22 / (n2 * (n2 - 1.0)) - cross / (n1 * n2)
    }
}

/// Flips columns of `x2` whose median sign disagrees with `x1`'s.
pub fn median_sign_flip(x1: &DMatrix<f64>, x2: &mut DMatrix<f64>) {
    let median = |v: Vec<f64>| {
        let mut v = v;
        v.sort_by(f64::total_cmp);
        let m = v.len();
        if m == 0 {
            0.0
        } else if m % 2 == 1 {
            v[m / 2]
        } else {
            0.5 * (v[m / 2 - 1] + v[m / 2])
        }
    };
    for c in 0..x1.ncols().min(x2.ncols()) {
        let m1 = median(x1.column(c).iter().copied().collect());
        let m2 = median(x2.column(c).iter().copied().collect());
        if (m1 + m2).abs() < (m1 - m2).abs() {
            x2.column_mut(c).neg_mut();
        }
    }
}

fn as_undirected(g: &Graph) -> Graph {
    if g.is_directed() {
        symmetrize(g, SymmetrizeMethod::Average)
    } else {
        g.clone()
    }
}

/// Nonparametric test that two graphs, not necessarily vertex matched or of
/// equal size, have the same latent position distribution.
pub fn latent_distribution_test(
    g1: &Graph,
    g2: &Graph,
    d: Option<usize>,
    n_bootstraps: usize,
    seed: u64,
) -> Result<TestResult> {
    check_unweighted(g1)?;
    check_unweighted(g2)?;
    if n_bootstraps == 0 {
        return Err(invalid("n_bootstraps must be at least 1"));
    }
    let (g1, g2) = (as_undirected(g1), as_undirected(g2));
    if g1.n() < 2 || g2.n() < 2 {
        return Err(invalid("each graph needs at least 2 vertices"));
    }
    let (e1, e2, d) = shared_embeddings(&g1, &g2, d)?;
    let x1 = e1.x;
    let mut x2 = e2.x;
    median_sign_flip(&x1, &mut x2);
    let sigma = median_bandwidth(&x1, &x2);
    let kernel = PooledKernel::new(&stack(&x1, &x2), sigma);
    let (n1, n) = (x1.nrows(), x1.nrows() + x2.nrows());
    let identity: Vec<usize> = (0..n).collect();
    let statistic = kernel.statistic(&identity, n1);
    let null_stats: Vec<f64> = (0..n_bootstraps)
        .into_par_iter()
        .map(|b| {
            let mut order = identity.clone();
            order.shuffle(&mut stream_rng(seed, b as u64));
            kernel.statistic(&order, n1)
        })
        .collect();
    let p_value = empirical_p_value(statistic, &null_stats);
    Ok(TestResult {
        method: TestMethod::LatentDistribution,
        statistic,
        p_value,
        d_used: d,
        n_bootstraps,
        seed,
        null_stats,
    })
}
