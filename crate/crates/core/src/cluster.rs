//! Parameter-swept clustering: Gaussian mixtures chosen by BIC and k-means
//! chosen by silhouette score.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::RngExt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rng::{derive_seed, stream_rng, StreamRng};

fn check_data(data: &DMatrix<f64>, k: usize) -> Result<()> {
    if data.ncols() == 0 {
        return Err(invalid("data must have at least one column"));
    }
    if data.iter().any(|v| !v.is_finite()) {
        return Err(invalid("data contains non-finite values"));
    }
    if k == 0 {
        return Err(invalid("number of clusters must be at least 1"));
    }
    if data.nrows() < k {
        return Err(invalid(format!(
            "{} points cannot form {k} clusters",
            data.nrows()
        )));
    }
    Ok(())
}

fn sq_dist(data: &DMatrix<f64>, i: usize, center: &DMatrix<f64>, c: usize) -> f64 {
    (0..data.ncols())
        .map(|j| (data[(i, j)] - center[(c, j)]).powi(2))
        .sum()
}

/// k-means++ seeding: first center uniform, the rest drawn with probability
/// proportional to squared distance from the nearest chosen center.
fn kmeans_plus_plus(data: &DMatrix<f64>, k: usize, rng: &mut StreamRng) -> DMatrix<f64> {
    let (m, d) = data.shape();
    let mut centers = DMatrix::zeros(k, d);
    let first = rng.random_range(0..m);
    centers.set_row(0, &data.row(first));
    let mut nearest: Vec<f64> = (0..m).map(|i| sq_dist(data, i, &centers, 0)).collect();
    for c in 1..k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = m - 1;
            for (i, w) in nearest.iter().enumerate() {
                acc += w;
                if acc > target {
                    pick = i;
                    break;
                }
            }
            pick
        } else {
            rng.random_range(0..m)
        };
        centers.set_row(c, &data.row(pick));
        for (i, best) in nearest.iter_mut().enumerate() {
            *best = best.min(sq_dist(data, i, &centers, c));
        }
    }
    centers
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KMeansFit {
    pub k: usize,
    pub centers: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub inertia: f64,
}

fn lloyd(
    data: &DMatrix<f64>,
    mut centers: DMatrix<f64>,
    max_iter: usize,
) -> (DMatrix<f64>, Vec<usize>, f64) {
    let (m, d) = data.shape();
    let k = centers.nrows();
    let mut labels = vec![usize::MAX; m];
    for _ in 0..max_iter {
        let mut changed = false;
        for (i, label) in labels.iter_mut().enumerate() {
            let mut best = (f64::INFINITY, 0);
            for c in 0..k {
                let dist = sq_dist(data, i, &centers, c);
                if dist < best.0 {
                    best = (dist, c);
                }
            }
            if *label != best.1 {
                *label = best.1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let mut sums = DMatrix::<f64>::zeros(k, d);
        let mut counts = vec![0usize; k];
        for (i, &c) in labels.iter().enumerate() {
            counts[c] += 1;
            for j in 0..d {
                sums[(c, j)] += data[(i, j)];
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                for j in 0..d {
                    centers[(c, j)] = sums[(c, j)] / counts[c] as f64;
                }
            } else {
                // Reseed an empty cluster at the point farthest from its center.
                let far = (0..m)
                    .max_by(|&a, &b| {
                        sq_dist(data, a, &centers, labels[a])
                            .total_cmp(&sq_dist(data, b, &centers, labels[b]))
                            .then(b.cmp(&a))
                    })
                    .expect("m >= k >= 1");
                centers.set_row(c, &data.row(far));
                labels[far] = c;
            }
        }
    }
    let inertia = (0..m).map(|i| sq_dist(data, i, &centers, labels[i])).sum();
    (centers, labels, inertia)
}

pub const KMEANS_RESTARTS: usize = 10;

/// Lloyd's algorithm from k-means++ seeds, keeping the restart with the
/// lowest inertia.
pub fn kmeans_fit(data: &DMatrix<f64>, k: usize, restarts: usize, seed: u64) -> Result<KMeansFit> {
    check_data(data, k)?;
    let mut best: Option<(DMatrix<f64>, Vec<usize>, f64)> = None;
    for r in 0..restarts.max(1) {
        let mut rng = stream_rng(derive_seed(seed, r as u64), 0);
        let seeds = kmeans_plus_plus(data, k, &mut rng);
        let run = lloyd(data, seeds, 300);
        if best.as_ref().map_or(true, |b| run.2 < b.2) {
            best = Some(run);
        }
    }
    let (centers, labels, inertia) = best.expect("at least one restart");
    Ok(KMeansFit {
        k,
        centers: crate::embed::rows(&centers),
        labels,
        inertia,
    })
}

/// Mean silhouette coefficient. Points alone in their cluster score 0.
pub fn silhouette_score(data: &DMatrix<f64>, labels: &[usize]) -> Result<f64> {
    let m = data.nrows();
    if labels.len() != m {
        return Err(Error::ShapeMismatch(format!(
            "{} labels for {m} points",
            labels.len()
        )));
    }
    let mut ids: Vec<usize> = labels.to_vec();
    ids.sort_unstable();
    ids.dedup();
    if ids.len() < 2 {
        return Err(invalid("silhouette score needs at least two clusters"));
    }
    let index: std::collections::HashMap<usize, usize> =
        ids.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let z: Vec<usize> = labels.iter().map(|l| index[l]).collect();
    let k = ids.len();
    let mut sizes = vec![0usize; k];
    for &c in &z {
        sizes[c] += 1;
    }
    let total: f64 = (0..m)
        .into_par_iter()
        .map(|i| {
            if sizes[z[i]] == 1 {
                return 0.0;
            }
            let mut sums = vec![0.0; k];
            for j in 0..m {
                if j != i {
                    let dist: f64 = (0..data.ncols())
                        .map(|c| (data[(i, c)] - data[(j, c)]).powi(2))
                        .sum::<f64>()
                        .sqrt();
                    sums[z[j]] += dist;
                }
            }
            let a = sums[z[i]] / (sizes[z[i]] - 1) as f64;
            let b = (0..k)
                .filter(|&c| c != z[i])
                .map(|c| sums[c] / sizes[c] as f64)
                .fold(f64::INFINITY, f64::min);
            let denom = a.max(b);
            if denom > 0.0 {
                (b - a) / denom
            } else {
                0.0
            }
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    Ok(total / m as f64)
}

/// Adjusted Rand index between two partitions.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch(
            "partitions have different lengths".into(),
        ));
    }
    let n = a.len() as f64;
    let mut table: std::collections::BTreeMap<(usize, usize), f64> = Default::default();
    let mut rows: std::collections::BTreeMap<usize, f64> = Default::default();
    let mut cols: std::collections::BTreeMap<usize, f64> = Default::default();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1.0;
        *rows.entry(x).or_default() += 1.0;
        *cols.entry(y).or_default() += 1.0;
    }
    let pairs = |c: f64| c * (c - 1.0) / 2.0;
    let index: f64 = table.values().copied().map(pairs).sum();
    let sum_a: f64 = rows.values().copied().map(pairs).sum();
    let sum_b: f64 = cols.values().copied().map(pairs).sum();
    let expected = sum_a * sum_b / pairs(n).max(f64::MIN_POSITIVE);
    let max = (sum_a + sum_b) / 2.0;
    if (max - expected).abs() < 1e-15 {
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CovarianceType {
    Full,
    Tied,
    Diag,
    Spherical,
}

impl CovarianceType {
    pub const ALL: [CovarianceType; 4] = [Self::Full, Self::Tied, Self::Diag, Self::Spherical];

    /// Free covariance parameters for `k` components in `d` dimensions.
    pub fn n_parameters(self, k: usize, d: usize) -> usize {
        match self {
            Self::Full => k * d * (d + 1) / 2,
            Self::Tied => d * (d + 1) / 2,
            Self::Diag => k * d,
            Self::Spherical => k,
        }
    }
}

impl std::str::FromStr for CovarianceType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Self::Full),
            "tied" => Ok(Self::Tied),
            "diag" => Ok(Self::Diag),
            "spherical" => Ok(Self::Spherical),
            other => Err(invalid(format!("unknown covariance type `{other}`"))),
        }
    }
}

pub const COVARIANCE_REG: f64 = 1e-6;
pub const EM_TOLERANCE: f64 = 1e-3;
pub const EM_MAX_ITER: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GmmFit {
    pub k: usize,
    pub covariance_type: CovarianceType,
    pub weights: Vec<f64>,
    pub means: Vec<Vec<f64>>,
    /// One `d x d` matrix per component (tied components share a value).
    pub covariances: Vec<Vec<Vec<f64>>>,
    pub log_likelihood: f64,
    pub bic: f64,
    pub n_params: usize,
    pub labels: Vec<usize>,
    pub converged: bool,
    pub n_iter: usize,
    /// Total log-likelihood after each E-step.
    #[serde(skip)]
    pub log_likelihood_trace: Vec<f64>,
}

struct Params {
    weights: Vec<f64>,
    means: DMatrix<f64>,
    covs: Vec<DMatrix<f64>>,
}

fn m_step(data: &DMatrix<f64>, resp: &DMatrix<f64>, kind: CovarianceType) -> Params {
    let (m, d) = data.shape();
    let k = resp.ncols();
    let nk: Vec<f64> = (0..k)
        .map(|c| resp.column(c).sum() + 10.0 * f64::EPSILON)
        .collect();
    let means = DMatrix::from_fn(k, d, |c, j| {
        (0..m).map(|i| resp[(i, c)] * data[(i, j)]).sum::<f64>() / nk[c]
    });
    let scatter = |c: usize| -> DMatrix<f64> {
        let mut s = DMatrix::zeros(d, d);
        for i in 0..m {
            let r = resp[(i, c)];
            if r == 0.0 {
                continue;
            }
            let diff = DVector::from_fn(d, |j, _| data[(i, j)] - means[(c, j)]);
            s.ger(r, &diff, &diff, 1.0);
        }
        s
    };
    let reg = DMatrix::identity(d, d) * COVARIANCE_REG;
    let covs = match kind {
        CovarianceType::Full => (0..k).map(|c| scatter(c) / nk[c] + &reg).collect(),
        CovarianceType::Tied => {
            let mut s = DMatrix::zeros(d, d);
            for c in 0..k {
                s += scatter(c);
            }
            let tied = s / m as f64 + &reg;
            vec![tied; k]
        }
        CovarianceType::Diag | CovarianceType::Spherical => (0..k)
            .map(|c| {
                let var = DVector::from_fn(d, |j, _| {
                    (0..m)
                        .map(|i| resp[(i, c)] * (data[(i, j)] - means[(c, j)]).powi(2))
                        .sum::<f64>()
                        / nk[c]
                        + COVARIANCE_REG
                });
                if kind == CovarianceType::Spherical {
                    DMatrix::identity(d, d) * var.mean()
                } else {
                    DMatrix::from_diagonal(&var)
                }
            })
            .collect(),
    };
    Params {
        weights: nk.iter().map(|v| v / m as f64).collect(),
        means,
        covs,
    }
}

/// Per-point log densities `log w_c + log N(x_i; mu_c, Sigma_c)`.
fn weighted_log_densities(data: &DMatrix<f64>, p: &Params) -> Result<DMatrix<f64>> {
    let (m, d) = data.shape();
    let k = p.weights.len();
    let mut out = DMatrix::zeros(m, k);
    for c in 0..k {
        let chol = Cholesky::<f64, Dyn>::new(p.covs[c].clone())
            .ok_or_else(|| Error::Degenerate("covariance is not positive definite".into()))?;
        let l = chol.l();
        let log_det: f64 = 2.0 * (0..d).map(|j| l[(j, j)].ln()).sum::<f64>();
        let constant =
            -0.5 * (d as f64 * (2.0 * std::f64::consts::PI).ln() + log_det) + p.weights[c].ln();
        for i in 0..m {
            let diff = DVector::from_fn(d, |j, _| data[(i, j)] - p.means[(c, j)]);
            let z = l
                .solve_lower_triangular(&diff)
                .ok_or_else(|| Error::Degenerate("singular covariance".into()))?;
            out[(i, c)] = constant - 0.5 * z.norm_squared();
        }
    }
    Ok(out)
}

/// E-step: responsibilities and the total log-likelihood.
fn e_step(data: &DMatrix<f64>, p: &Params) -> Result<(DMatrix<f64>, f64)> {
    let mut logp = weighted_log_densities(data, p)?;
    let (m, k) = logp.shape();
    let mut total = 0.0;
    for i in 0..m {
        let max = (0..k)
            .map(|c| logp[(i, c)])
            .fold(f64::NEG_INFINITY, f64::max);
        let lse = max + (0..k).map(|c| (logp[(i, c)] - max).exp()).sum::<f64>().ln();
        total += lse;
        for c in 0..k {
            logp[(i, c)] = (logp[(i, c)] - lse).exp();
        }
    }
    Ok((logp, total))
}

fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    crate::embed::rows(m)
}

/// Fits a `k`-component Gaussian mixture by EM, initialized from a k-means++
/// seeded k-means partition.
pub fn gmm_fit(
    data: &DMatrix<f64>,
    k: usize,
    covariance_type: CovarianceType,
    seed: u64,
) -> Result<GmmFit> {
    check_data(data, k)?;
    let (m, d) = data.shape();
    let init = kmeans_fit(data, k, 1, seed)?;
    let mut resp = DMatrix::zeros(m, k);
    for (i, &c) in init.labels.iter().enumerate() {
        resp[(i, c)] = 1.0;
    }
    let mut params = m_step(data, &resp, covariance_type);
    let mut trace: Vec<f64> = Vec::new();
    let mut converged = false;
    let mut n_iter = 0;
    let final_ll;
    loop {
        let (r, ll) = e_step(data, &params)?;
        if let Some(&prev) = trace.last() {
            if (ll - prev) / (m as f64) < EM_TOLERANCE {
                trace.push(ll);
                converged = true;
                resp = r;
                final_ll = ll;
                break;
            }
        }
        trace.push(ll);
        if n_iter == EM_MAX_ITER {
            resp = r;
            final_ll = ll;
            break;
        }
        params = m_step(data, &r, covariance_type);
        n_iter += 1;
    }

    let labels = (0..m)
        .map(|i| {
            (0..k)
                .max_by(|&a, &b| resp[(i, a)].total_cmp(&resp[(i, b)]).then(b.cmp(&a)))
                .expect("k >= 1")
        })
        .collect();
    let n_params = (k - 1) + k * d + covariance_type.n_parameters(k, d);
    Ok(GmmFit {
        k,
        covariance_type,
        weights: params.weights,
        means: to_rows(&params.means),
        covariances: params.covs.iter().map(to_rows).collect(),
        log_likelihood: final_ll,
        bic: -2.0 * final_ll + n_params as f64 * (m as f64).ln(),
        n_params,
        labels,
        converged,
        n_iter,
        log_likelihood_trace: trace,
    })
}

/// One swept configuration and its score.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covariance_type: Option<CovarianceType>,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult<F> {
    pub best: F,
    pub table: Vec<SweepEntry>,
}

/// Fits every `(k, covariance type)` pair and keeps the lowest BIC; ties go
/// to the smaller `k`, then to the earlier covariance type.
pub fn gmm_sweep(
    data: &DMatrix<f64>,
    k_range: &[usize],
    covariance_types: &[CovarianceType],
    seed: u64,
) -> Result<SweepResult<GmmFit>> {
    if k_range.is_empty() || covariance_types.is_empty() {
        return Err(invalid("sweep ranges must be nonempty"));
    }
    let mut configs: Vec<(usize, CovarianceType)> = Vec::new();
    let mut ks = k_range.to_vec();
    ks.sort_unstable();
    ks.dedup();
    let mut types = covariance_types.to_vec();
    types.sort();
    types.dedup();
    for &k in &ks {
        for &t in &types {
            configs.push((k, t));
        }
    }
    let fits: Vec<GmmFit> = configs
        .par_iter()
        .map(|&(k, t)| gmm_fit(data, k, t, derive_seed(seed, k as u64)))
        .collect::<Result<_>>()?;
    let table = fits
        .iter()
        .map(|f| SweepEntry {
            k: f.k,
            covariance_type: Some(f.covariance_type),
            score: f.bic,
        })
        .collect();
    let mut best = 0;
    for (i, f) in fits.iter().enumerate() {
        if f.bic < fits[best].bic {
            best = i;
        }
    }
    Ok(SweepResult {
        best: fits[best].clone(),
        table,
    })
}

/// k-means over `k_range`, choosing the `k` with the highest silhouette
/// score (smaller `k` on ties).
pub fn kmeans_sweep(
    data: &DMatrix<f64>,
    k_range: &[usize],
    seed: u64,
) -> Result<SweepResult<KMeansFit>> {
    if k_range.is_empty() {
        return Err(invalid("sweep range must be nonempty"));
    }
    let m = data.nrows();
    let mut ks = k_range.to_vec();
    ks.sort_unstable();
    ks.dedup();
    if let Some(&k) = ks.iter().find(|&&k| k < 2 || k + 1 > m) {
        return Err(invalid(format!(
            "silhouette needs 2 <= k <= {}; got k = {k}",
            m.saturating_sub(1)
        )));
    }
    let scored: Vec<(KMeansFit, f64)> = ks
        .par_iter()
        .map(|&k| {
            let fit = kmeans_fit(data, k, KMEANS_RESTARTS, derive_seed(seed, k as u64))?;
            let score = silhouette_score(data, &fit.labels)?;
            Ok((fit, score))
        })
        .collect::<Result<_>>()?;
    let table = scored
        .iter()
        .map(|(f, s)| SweepEntry {
            k: f.k,
            covariance_type: None,
            score: *s,
        })
        .collect();
    let mut best = 0;
    for (i, (_, s)) in scored.iter().enumerate() {
        if *s > scored[best].1 {
            best = i;
        }
    }
    Ok(SweepResult {
        best: scored[best].0.clone(),
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, Normal};

    fn two_clusters(per: usize, sd: f64, seed: u64) -> (DMatrix<f64>, Vec<usize>) {
        let mut rng = stream_rng(seed, 0);
        let noise = Normal::new(0.0, sd).unwrap();
        let mut data = DMatrix::zeros(2 * per, 2);
        let mut truth = Vec::new();
        for i in 0..2 * per {
            let c = i / per;
            let center = if c == 0 { 0.0 } else { 10.0 };
            data[(i, 0)] = center + noise.sample(&mut rng);
            data[(i, 1)] = center + noise.sample(&mut rng);
            truth.push(c);
        }
        (data, truth)
    }

    fn same_partition(a: &[usize], b: &[usize]) -> bool {
        adjusted_rand_index(a, b).unwrap() == 1.0
    }

    #[test]
    fn single_component_is_closed_form() {
        let (data, _) = two_clusters(20, 1.0, 3);
        for t in CovarianceType::ALL {
            let fit = gmm_fit(&data, 1, t, 0).unwrap();
            let mean_x = data.column(0).mean();
            let mean_y = data.column(1).mean();
            assert!((fit.means[0][0] - mean_x).abs() < 1e-12);
            assert!((fit.means[0][1] - mean_y).abs() < 1e-12);
            assert!(fit.labels.iter().all(|&l| l == 0));
            assert!((fit.weights[0] - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn separated_clusters_are_recovered() {
        let (data, truth) = two_clusters(50, 0.1, 5);
        for t in CovarianceType::ALL {
            let fit = gmm_fit(&data, 2, t, 1).unwrap();
            assert!(same_partition(&fit.labels, &truth), "{t:?}");
            assert!((fit.weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn em_log_likelihood_never_decreases() {
        let (data, _) = two_clusters(60, 2.5, 8);
        for t in CovarianceType::ALL {
            for k in 1..=4 {
                let fit = gmm_fit(&data, k, t, 2).unwrap();
                for w in fit.log_likelihood_trace.windows(2) {
                    assert!(w[1] >= w[0] - 1e-9, "{t:?} k={k}: {} -> {}", w[0], w[1]);
                }
            }
        }
    }

    #[test]
    fn gmm_errors() {
        let data = DMatrix::from_element(3, 2, 1.0);
        assert!(gmm_fit(&data, 4, CovarianceType::Full, 0).is_err());
        let mut bad = data.clone();
        bad[(0, 0)] = f64::NAN;
        assert!(gmm_fit(&bad, 1, CovarianceType::Full, 0).is_err());
    }

    #[test]
    fn duplicate_points_survive_regularization() {
        let data = DMatrix::from_row_slice(4, 1, &[1.0, 1.0, 5.0, 5.0]);
        let fit = gmm_fit(&data, 2, CovarianceType::Full, 0).unwrap();
        assert!(fit.log_likelihood.is_finite());
        assert!(same_partition(&fit.labels, &[0, 0, 1, 1]));
    }

    #[test]
    fn sweep_selects_two_components() {
        let (data, _) = two_clusters(50, 0.1, 5);
        let sweep = gmm_sweep(&data, &[1, 2, 3, 4], &CovarianceType::ALL, 4).unwrap();
        assert_eq!(sweep.best.k, 2);
        assert_eq!(sweep.table.len(), 16);
        let min = sweep
            .table
            .iter()
            .map(|e| e.score)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(sweep.best.bic, min);
    }

    #[test]
    fn sweep_on_one_cloud_selects_one() {
        let mut rng = stream_rng(12, 0);
        let noise = Normal::new(0.0, 0.5).unwrap();
        let data = DMatrix::from_fn(120, 2, |_, _| noise.sample(&mut rng));
        let sweep = gmm_sweep(&data, &[1, 2, 3], &CovarianceType::ALL, 4).unwrap();
        assert_eq!(sweep.best.k, 1);
    }

    #[test]
    fn silhouette_examples() {
        let data = DMatrix::from_row_slice(2, 1, &[0.0, 1.0]);
        assert_eq!(silhouette_score(&data, &[0, 1]).unwrap(), 0.0);

        let data = DMatrix::from_row_slice(4, 1, &[0.0, 0.1, 10.0, 10.1]);
        let s = silhouette_score(&data, &[0, 0, 1, 1]).unwrap();
        // Hand evaluation: a = 0.1; b = 10.05 for the outer points and 9.95
        // for the inner ones.
        let expected = 0.5 * ((1.0 - 0.1 / 10.05) + (1.0 - 0.1 / 9.95));
        assert!((s - expected).abs() < 1e-12);
        assert!(s >= 0.98);
        assert_eq!(silhouette_score(&data, &[7, 7, 3, 3]).unwrap(), s);
        assert!(silhouette_score(&data, &[0, 0, 0, 0]).is_err());
    }

    #[test]
    fn kmeans_sweep_selects_two() {
        let (data, truth) = two_clusters(30, 0.3, 6);
        let sweep = kmeans_sweep(&data, &[2, 3, 4], 1).unwrap();
        assert_eq!(sweep.best.k, 2);
        assert!(same_partition(&sweep.best.labels, &truth));

        let doubled = DMatrix::from_fn(120, 2, |i, j| data[(i % 60, j)]);
        assert_eq!(kmeans_sweep(&doubled, &[2, 3, 4], 1).unwrap().best.k, 2);
    }

    #[test]
    fn kmeans_sweep_preconditions() {
        let (data, _) = two_clusters(3, 0.3, 6);
        assert!(kmeans_sweep(&data, &[1, 2], 0).is_err());
        assert!(kmeans_sweep(&data, &[6], 0).is_err());
        assert!(kmeans_sweep(&data, &[5], 0).is_ok());
    }

    #[test]
    fn ari_values() {
        assert_eq!(
            adjusted_rand_index(&[0, 0, 1, 1], &[1, 1, 0, 0]).unwrap(),
            1.0
        );
        let v = adjusted_rand_index(&[0, 0, 1, 1], &[0, 1, 0, 1]).unwrap();
        assert!(v < 0.0);
    }
}
