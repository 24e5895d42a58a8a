//! Random graph samplers: inhomogeneous Erdős–Rényi, ER (G(n,p) and G(n,m)),
//! stochastic block models with optional degree correction, and random dot
//! product graphs.
//!
//! Row `i` of the Bernoulli layer always comes from substream `i` of the seed,
//! and edge weights come from a separately derived seed, so samples are
//! identical under any thread count and the edge support never depends on the
//! weight distribution.

use nalgebra::DMatrix;
use rand::RngExt;
use rand_distr::{Distribution, Normal, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{is_symmetric, Graph};
use crate::rng::{derive_seed, stream_rng, StreamRng};

const WEIGHT_STREAM: u64 = 0x5745_4947_4854;
const EDGE_SET_STREAM: u64 = 0x4544_4745_5345;

/// Distribution of the weight given to each sampled edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WeightDistribution {
    Constant {
        value: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
    Normal {
        mean: f64,
        sd: f64,
    },
    /// Zero-truncated: a present edge never draws weight 0.
    Poisson {
        rate: f64,
    },
}

impl WeightDistribution {
    pub fn validate(&self) -> Result<()> {
        let ok = |cond: bool, msg: &str| {
            if cond {
                Ok(())
            } else {
                Err(invalid(msg.to_string()))
            }
        };
        match *self {
            Self::Constant { value } => ok(
                value.is_finite() && value > 0.0,
                "constant weight must be positive",
            ),
            Self::Uniform { lo, hi } => ok(
                lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi && hi > 0.0,
                "uniform weights require 0 <= lo <= hi with hi > 0",
            ),
            Self::Normal { mean, sd } => ok(
                mean.is_finite()
                    && sd.is_finite()
                    && sd >= 0.0
                    && mean > 0.0
                    && mean - 6.0 * sd >= 0.0,
                "normal weights require sd >= 0 and mean - 6 sd >= 0",
            ),
            Self::Poisson { rate } => ok(
                rate.is_finite() && rate > 0.0,
                "poisson weights require a positive rate",
            ),
        }
    }

    fn draw(&self, rng: &mut StreamRng) -> f64 {
        match *self {
            Self::Constant { value } => value,
            Self::Uniform { lo, hi } => {
                if lo == hi {
                    lo
                } else {
                    rng.random_range(lo..hi)
                }
            }
            Self::Normal { mean, sd } => {
                let dist = Normal::new(mean, sd).expect("validated");
                loop {
                    let w = dist.sample(rng);
                    if w > 0.0 {
                        return w;
                    }
                }
            }
            Self::Poisson { rate } => {
                let dist = Poisson::new(rate).expect("validated");
                loop {
                    let w: f64 = dist.sample(rng);
                    if w > 0.0 {
                        return w;
                    }
                }
            }
        }
    }
}

fn check_probability_matrix(p: &DMatrix<f64>, directed: bool) -> Result<()> {
    if p.nrows() != p.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "probability matrix is {}x{}",
            p.nrows(),
            p.ncols()
        )));
    }
    for j in 0..p.ncols() {
        for i in 0..p.nrows() {
            let v = p[(i, j)];
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid(format!(
                    "probability P[{i}][{j}] = {v} is outside [0, 1]"
                )));
            }
        }
    }
    if !directed && !is_symmetric(p) {
        return Err(invalid(
            "undirected sampling requires a symmetric probability matrix",
        ));
    }
    Ok(())
}

/// Samples every potential edge independently with probability `p[(i, j)]`.
pub fn sample_ier(
    p: &DMatrix<f64>,
    directed: bool,
    loops: bool,
    weights: Option<&WeightDistribution>,
    seed: u64,
) -> Result<Graph> {
    check_probability_matrix(p, directed)?;
    if let Some(w) = weights {
        w.validate()?;
    }
    let n = p.nrows();
    let weight_seed = derive_seed(seed, WEIGHT_STREAM);

    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut bern = stream_rng(seed, i as u64);
            let mut wrng = weights.map(|_| stream_rng(weight_seed, i as u64));
            let start = if directed { 0 } else { i };
            let mut row = Vec::new();
            for j in start..n {
                if i == j && !loops {
                    continue;
                }
                if bern.random::<f64>() < p[(i, j)] {
                    let w = match (weights, wrng.as_mut()) {
                        (Some(dist), Some(r)) => dist.draw(r),
                        _ => 1.0,
                    };
                    row.push((j, w));
                }
            }
            row
        })
        .collect();

    let mut a = DMatrix::zeros(n, n);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, w) in row {
            a[(i, j)] = w;
            if !directed {
                a[(j, i)] = w;
            }
        }
    }
    Graph::new(a, directed)
}

/// G(n, p).
pub fn sample_er_np(
    n: usize,
    p: f64,
    directed: bool,
    loops: bool,
    weights: Option<&WeightDistribution>,
    seed: u64,
) -> Result<Graph> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("p = {p} is outside [0, 1]")));
    }
    sample_ier(
        &DMatrix::from_element(n, n, p),
        directed,
        loops,
        weights,
        seed,
    )
}

/// Number of potential edges for the given flags.
pub fn potential_edges(n: usize, directed: bool, loops: bool) -> usize {
    match (directed, loops) {
        (true, true) => n * n,
        (true, false) => n * n.saturating_sub(1),
        (false, true) => n * (n + 1) / 2,
        (false, false) => n * n.saturating_sub(1) / 2,
    }
}

/// Maps a potential-edge index to its `(i, j)` pair (upper triangle for
/// undirected graphs).
struct EdgeIndexer {
    n: usize,
    directed: bool,
    loops: bool,
    row_start: Vec<usize>,
}

impl EdgeIndexer {
    fn new(n: usize, directed: bool, loops: bool) -> Self {
        let mut row_start = Vec::with_capacity(n + 1);
        let mut acc = 0;
        for i in 0..n {
            row_start.push(acc);
            acc += if loops { n - i } else { n - i - 1 };
        }
        row_start.push(acc);
        Self {
            n,
            directed,
            loops,
            row_start,
        }
    }

    fn pair(&self, k: usize) -> (usize, usize) {
        let n = self.n;
        match (self.directed, self.loops) {
            (true, true) => (k / n, k % n),
            (true, false) => {
                let i = k / (n - 1);
                let c = k % (n - 1);
                (i, if c >= i { c + 1 } else { c })
            }
            (false, _) => {
                let i = self.row_start.partition_point(|&s| s <= k) - 1;
                let offset = k - self.row_start[i];
                (
                    i,
                    if self.loops {
                        i + offset
                    } else {
                        i + 1 + offset
                    },
                )
            }
        }
    }
}

/// G(n, m): exactly `m` distinct potential edges chosen uniformly.
pub fn sample_er_nm(n: usize, m: usize, directed: bool, loops: bool, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let capacity = potential_edges(n, directed, loops);
    if m > capacity {
        return Err(invalid(format!(
            "m = {m} exceeds the {capacity} potential edges"
        )));
    }
    let indexer = EdgeIndexer::new(n, directed, loops);
    let mut rng = stream_rng(derive_seed(seed, EDGE_SET_STREAM), 0);
    let mut a = DMatrix::zeros(n, n);
    for k in rand::seq::index::sample(&mut rng, capacity, m) {
        let (i, j) = indexer.pair(k);
        a[(i, j)] = 1.0;
        if !directed {
            a[(j, i)] = 1.0;
        }
    }
    Graph::new(a, directed)
}

/// Parameters of a (degree-corrected) stochastic block model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SbmParams {
    pub block_sizes: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    #[serde(default)]
    pub degree_corrections: Option<Vec<f64>>,
    #[serde(default)]
    pub directed: bool,
    #[serde(default)]
    pub loops: bool,
}

impl SbmParams {
    pub fn new(block_sizes: Vec<usize>, b: Vec<Vec<f64>>) -> Self {
        Self {
            block_sizes,
            b,
            degree_corrections: None,
            directed: false,
            loops: false,
        }
    }

    pub fn with_degree_corrections(mut self, theta: Vec<f64>) -> Self {
        self.degree_corrections = Some(theta);
        self
    }

    pub fn directed(mut self, directed: bool) -> Self {
        self.directed = directed;
        self
    }

    pub fn n(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    /// Block index of every node, in block order.
    pub fn memberships(&self) -> Vec<usize> {
        self.block_sizes
            .iter()
            .enumerate()
            .flat_map(|(k, &s)| std::iter::repeat(k).take(s))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.block_sizes.len();
        if k == 0 || self.block_sizes.contains(&0) {
            return Err(invalid(
                "block sizes must be a nonempty list of positive counts",
            ));
        }
        if self.b.len() != k || self.b.iter().any(|r| r.len() != k) {
            return Err(Error::ShapeMismatch(format!("B must be {k}x{k}")));
        }
        for (a, row) in self.b.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&v) {
                    return Err(invalid(format!("B[{a}][{c}] = {v} is outside [0, 1]")));
                }
                if !self.directed && v != self.b[c][a] {
                    return Err(invalid("undirected SBM requires a symmetric B"));
                }
            }
        }
        if let Some(theta) = &self.degree_corrections {
            if theta.len() != self.n() {
                return Err(Error::ShapeMismatch(format!(
                    "{} degree corrections for {} nodes",
                    theta.len(),
                    self.n()
                )));
            }
            if theta.iter().any(|t| !t.is_finite() || *t <= 0.0) {
                return Err(invalid("degree corrections must be positive"));
            }
        }
        Ok(())
    }

    /// Degree corrections rescaled so each block's maximum is 1.
    pub fn normalized_degree_corrections(&self) -> Option<Vec<f64>> {
        let theta = self.degree_corrections.as_ref()?;
        let z = self.memberships();
        let mut block_max = vec![0.0_f64; self.block_sizes.len()];
        for (t, &b) in theta.iter().zip(&z) {
            block_max[b] = block_max[b].max(*t);
        }
        Some(
            theta
                .iter()
                .zip(&z)
                .map(|(t, &b)| t / block_max[b])
                .collect(),
        )
    }

    /// Edge probability matrix implied by the parameters.
    pub fn probability_matrix(&self) -> Result<DMatrix<f64>> {
        self.validate()?;
        let z = self.memberships();
        let n = z.len();
        let theta = self.normalized_degree_corrections();
        let mut p = DMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                let mut v = self.b[z[i]][z[j]];
                if let Some(t) = &theta {
                    v *= t[i] * t[j];
                    if v > 1.0 {
                        return Err(invalid(format!(
                            "theta[{i}] * theta[{j}] * B[{}][{}] = {v} exceeds 1",
                            z[i], z[j]
                        )));
                    }
                }
                p[(i, j)] = v;
            }
        }
        Ok(p)
    }
}

/// Samples an SBM (DCSBM when degree corrections are present; DCER is the
/// one-block case). Block labels are attached to the returned graph.
pub fn sample_sbm(
    params: &SbmParams,
    weights: Option<&WeightDistribution>,
    seed: u64,
) -> Result<Graph> {
    let p = params.probability_matrix()?;
    let labels = params.memberships().iter().map(|b| b.to_string()).collect();
    sample_ier(&p, params.directed, params.loops, weights, seed)?.with_labels(labels)
}

const DOT_TOLERANCE: f64 = 1e-12;

/// Edge probabilities `X Yᵀ` (or `X Xᵀ`), with tiny roundoff outside `[0, 1]`
/// clamped.
pub fn rdpg_probabilities(x: &DMatrix<f64>, y: Option<&DMatrix<f64>>) -> Result<DMatrix<f64>> {
    let right = y.unwrap_or(x);
    if right.shape() != x.shape() {
        return Err(Error::ShapeMismatch(format!(
            "X is {:?} but Y is {:?}",
            x.shape(),
            right.shape()
        )));
    }
    let mut p = x * right.transpose();
    let n = p.nrows();
    for j in 0..n {
        for i in 0..n {
            let v = p[(i, j)];
            if !(-DOT_TOLERANCE..=1.0 + DOT_TOLERANCE).contains(&v) {
                return Err(invalid(format!(
                    "dot product of rows {i} and {j} is {v}, outside [0, 1]"
                )));
            }
            p[(i, j)] = v.clamp(0.0, 1.0);
        }
    }
    if y.is_none() {
        // x * xᵀ is symmetric up to roundoff; make it exact.
        for j in 0..n {
            for i in 0..j {
                p[(j, i)] = p[(i, j)];
            }
        }
    }
    Ok(p)
}

/// Random dot product graph; directed exactly when `y` is given.
pub fn sample_rdpg(
    x: &DMatrix<f64>,
    y: Option<&DMatrix<f64>>,
    loops: bool,
    weights: Option<&WeightDistribution>,
    seed: u64,
) -> Result<Graph> {
    let p = rdpg_probabilities(x, y)?;
    sample_ier(&p, y.is_some(), loops, weights, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn density(g: &Graph, loops: bool) -> f64 {
        let n = g.n();
        g.edge_count() as f64 / potential_edges(n, g.is_directed(), loops) as f64
    }

    #[test]
    fn degenerate_probabilities() {
        let g = sample_ier(&DMatrix::from_element(3, 3, 1.0), false, false, None, 1).unwrap();
        assert_eq!(
            g.adjacency(),
            &DMatrix::from_fn(3, 3, |i, j| if i == j { 0.0 } else { 1.0 })
        );
        let g = sample_ier(&DMatrix::zeros(4, 4), true, true, None, 1).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn ier_density_within_binomial_band() {
        let n = 1000;
        let g = sample_ier(&DMatrix::from_element(n, n, 0.1), false, false, None, 11).unwrap();
        let m = potential_edges(n, false, false) as f64;
        let band = 3.0 * (0.1 * 0.9 / m).sqrt();
        assert!((density(&g, false) - 0.1).abs() <= band);
    }

    #[test]
    fn ier_rejects_bad_matrices() {
        assert!(sample_ier(&DMatrix::from_element(2, 2, 1.5), true, false, None, 0).is_err());
        let p = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.2, 0.0]);
        assert!(sample_ier(&p, false, false, None, 0).is_err());
        assert!(sample_ier(&p, true, false, None, 0).is_ok());
    }

    #[test]
    fn er_np_examples() {
        let g = sample_er_np(2, 1.0, false, false, None, 3).unwrap();
        assert_eq!(
            g.adjacency(),
            &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])
        );
        assert_eq!(
            sample_er_np(5, 0.0, false, false, None, 3)
                .unwrap()
                .edge_count(),
            0
        );

        let (n, p) = (500, 0.3);
        let g = sample_er_np(n, p, true, false, None, 5).unwrap();
        let m = (n * (n - 1)) as f64;
        let sd = (m * p * (1.0 - p)).sqrt();
        assert!((g.edge_count() as f64 - p * m).abs() <= 3.0 * sd);
        assert!(!g.has_loops());
        assert!(sample_er_np(0, 0.5, false, false, None, 0).is_err());
        assert!(sample_er_np(3, -0.1, false, false, None, 0).is_err());
    }

    #[test]
    fn er_nm_examples() {
        let g = sample_er_nm(4, 6, false, false, 1).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.adjacency().sum(), 12.0);
        assert_eq!(sample_er_nm(4, 0, false, false, 1).unwrap().edge_count(), 0);
        assert!(sample_er_nm(4, 7, false, false, 1).is_err());
        assert_eq!(sample_er_nm(3, 9, true, true, 1).unwrap().edge_count(), 9);
        assert_eq!(sample_er_nm(3, 6, true, false, 1).unwrap().edge_count(), 6);
        assert_eq!(sample_er_nm(3, 6, false, true, 1).unwrap().edge_count(), 6);
    }

    #[test]
    fn er_nm_pairs_are_uniform() {
        // Each of the 15 pairs of 6 nodes is selected with probability 3/15.
        let trials = 2000;
        let mut freq = DMatrix::<f64>::zeros(6, 6);
        for seed in 0..trials {
            let g = sample_er_nm(6, 3, false, false, seed).unwrap();
            assert_eq!(g.edge_count(), 3);
            freq += g.adjacency();
        }
        for j in 0..6 {
            for i in 0..j {
                let f = freq[(i, j)] / trials as f64;
                assert!((f - 0.2).abs() <= 0.03, "pair ({i},{j}) frequency {f}");
            }
        }
    }

    #[test]
    fn sbm_examples() {
        let params = SbmParams::new(vec![2, 2], vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let g = sample_sbm(&params, None, 0).unwrap();
        let expected = DMatrix::from_row_slice(
            4,
            4,
            &[
                0., 1., 0., 0., 1., 0., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.,
            ],
        );
        assert_eq!(g.adjacency(), &expected);
        assert_eq!(g.labels().unwrap(), ["0", "0", "1", "1"]);

        let one = SbmParams::new(vec![30], vec![vec![0.4]]);
        let a = sample_sbm(&one, None, 9).unwrap();
        let b = sample_er_np(30, 0.4, false, false, None, 9).unwrap();
        assert_eq!(a.adjacency(), b.adjacency());
    }

    #[test]
    fn sbm_block_densities() {
        let params = SbmParams::new(vec![100, 100], vec![vec![0.3, 0.05], vec![0.05, 0.3]]);
        let g = sample_sbm(&params, None, 21).unwrap();
        let a = g.adjacency();
        let mut within = 0.0;
        let mut between = 0.0;
        for i in 0..200 {
            for j in 0..200 {
                if i == j {
                    continue;
                }
                if (i < 100) == (j < 100) {
                    within += a[(i, j)];
                } else {
                    between += a[(i, j)];
                }
            }
        }
        // Unordered pairs: within 2 * C(100, 2), between 100 * 100.
        let (mw, mb) = (2.0 * 4950.0, 10000.0);
        let pw = within / 2.0 / mw;
        let pb = between / 2.0 / mb;
        assert!((pw - 0.3).abs() <= 3.0 * (0.3 * 0.7 / mw).sqrt(), "{pw}");
        assert!((pb - 0.05).abs() <= 3.0 * (0.05 * 0.95 / mb).sqrt(), "{pb}");
    }

    #[test]
    fn sbm_parameter_errors() {
        let asym = SbmParams::new(vec![2, 2], vec![vec![0.5, 0.1], vec![0.2, 0.5]]);
        assert!(sample_sbm(&asym, None, 0).is_err());
        assert!(sample_sbm(&asym.clone().directed(true), None, 0).is_ok());
        let bad = SbmParams::new(vec![2, 0], vec![vec![0.5, 0.1], vec![0.1, 0.5]]);
        assert!(bad.validate().is_err());
        let theta =
            SbmParams::new(vec![2], vec![vec![0.5]]).with_degree_corrections(vec![1.0, -1.0]);
        assert!(theta.validate().is_err());
    }

    #[test]
    fn degree_corrections_are_max_normalized() {
        let params = SbmParams::new(vec![2, 2], vec![vec![0.8, 0.2], vec![0.2, 0.8]])
            .with_degree_corrections(vec![2.0, 1.0, 3.0, 3.0]);
        assert_eq!(
            params.normalized_degree_corrections().unwrap(),
            vec![1.0, 0.5, 1.0, 1.0]
        );
        let p = params.probability_matrix().unwrap();
        assert_eq!(p[(0, 1)], 0.8 * 0.5);
        assert_eq!(p[(1, 2)], 0.2 * 0.5);
    }

    #[test]
    fn rdpg_examples() {
        let x = DMatrix::from_fn(5, 2, |_, c| if c == 0 { 1.0 } else { 0.0 });
        let g = sample_rdpg(&x, None, false, None, 0).unwrap();
        assert_eq!(g.edge_count(), 10);

        let x = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        assert_eq!(
            sample_rdpg(&x, None, false, None, 0).unwrap().edge_count(),
            0
        );

        let n = 400;
        let x = DMatrix::from_element(n, 2, 0.2_f64.sqrt());
        let g = sample_rdpg(&x, None, false, None, 4).unwrap();
        let m = potential_edges(n, false, false) as f64;
        assert!((density(&g, false) - 0.4).abs() <= 3.0 * (0.4 * 0.6 / m).sqrt());

        let bad = DMatrix::from_element(3, 1, 1.5);
        assert!(sample_rdpg(&bad, None, false, None, 0).is_err());
        let y = DMatrix::from_element(3, 1, 0.5);
        let g = sample_rdpg(&DMatrix::from_element(3, 1, 1.0), Some(&y), false, None, 0).unwrap();
        assert!(g.is_directed());
    }

    #[test]
    fn weight_validation() {
        assert!(WeightDistribution::Uniform { lo: 2.0, hi: 1.0 }
            .validate()
            .is_err());
        assert!(WeightDistribution::Normal { mean: 1.0, sd: 0.5 }
            .validate()
            .is_err());
        assert!(WeightDistribution::Normal { mean: 6.0, sd: 1.0 }
            .validate()
            .is_ok());
        assert!(WeightDistribution::Poisson { rate: 0.0 }
            .validate()
            .is_err());
        assert!(WeightDistribution::Constant { value: 0.0 }
            .validate()
            .is_err());
    }

    #[test]
    fn weights_keep_the_support() {
        let p = DMatrix::from_element(40, 40, 0.3);
        let plain = sample_ier(&p, false, false, None, 77).unwrap();
        for w in [
            WeightDistribution::Constant { value: 2.0 },
            WeightDistribution::Uniform { lo: 0.5, hi: 4.0 },
            WeightDistribution::Normal {
                mean: 10.0,
                sd: 1.0,
            },
            WeightDistribution::Poisson { rate: 0.5 },
        ] {
            let g = sample_ier(&p, false, false, Some(&w), 77).unwrap();
            for (a, b) in plain.adjacency().iter().zip(g.adjacency().iter()) {
                assert_eq!(*a != 0.0, *b != 0.0);
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = DMatrix::from_fn(30, 30, |i, j| ((i + j) % 7) as f64 / 7.0);
        let a = sample_ier(&p, true, true, None, 5).unwrap();
        let b = sample_ier(&p, true, true, None, 5).unwrap();
        let c = sample_ier(&p, true, true, None, 6).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
