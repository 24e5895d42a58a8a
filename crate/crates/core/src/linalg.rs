//! Dense and truncated singular value decompositions.
//!
//! Symmetric inputs go through a symmetric eigendecomposition (singular values
//! are the absolute eigenvalues). When only the leading triplets are needed a
//! Lanczos iteration with full reorthogonalization is used; at Krylov
//! dimension `n` it is exact, so there is no separate fallback.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::is_symmetric;

/// Singular triplets sorted by nonincreasing singular value.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DMatrix<f64>,
    pub s: Vec<f64>,
    pub v: DMatrix<f64>,
}

impl Svd {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// Keeps the first `k` triplets.
    pub fn truncate(mut self, k: usize) -> Svd {
        let k = k.min(self.s.len());
        self.s.truncate(k);
        self.u = self.u.columns(0, k).into_owned();
        self.v = self.v.columns(0, k).into_owned();
        self
    }

    /// Flips each `(u_k, v_k)` pair so the largest-magnitude entry of `u_k`
    /// (first one on ties) is positive.
    pub fn normalize_signs(&mut self) {
        for k in 0..self.s.len() {
            let col = self.u.column(k);
            let mut best = 0;
            for i in 1..col.len() {
                if col[i].abs() > col[best].abs() {
                    best = i;
                }
            }
            if col.len() > 0 && col[best] < 0.0 {
                self.u.column_mut(k).neg_mut();
                self.v.column_mut(k).neg_mut();
            }
        }
    }
}

fn order_by_magnitude(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].abs().total_cmp(&values[a].abs()).then(a.cmp(&b)));
    idx
}

fn svd_from_eigen(values: &[f64], vectors: &DMatrix<f64>, take: usize) -> Svd {
    let order = order_by_magnitude(values);
    let order = &order[..take.min(order.len())];
    let n = vectors.nrows();
    let mut u = DMatrix::zeros(n, order.len());
    let mut v = DMatrix::zeros(n, order.len());
    let mut s = Vec::with_capacity(order.len());
    for (k, &idx) in order.iter().enumerate() {
        let lambda = values[idx];
        u.set_column(k, &vectors.column(idx));
        if lambda < 0.0 {
            v.set_column(k, &(-vectors.column(idx)));
        } else {
            v.set_column(k, &vectors.column(idx));
        }
        s.push(lambda.abs());
    }
    Svd { u, s, v }
}

/// Every singular triplet of `m` (thin for rectangular input).
pub fn svd_full(m: &DMatrix<f64>) -> Svd {
    let mut out = if is_symmetric(m) {
        let eig = SymmetricEigen::new(m.clone());
        svd_from_eigen(eig.eigenvalues.as_slice(), &eig.eigenvectors, m.nrows())
    } else {
        let svd = m.clone().svd(true, true);
        let u = svd.u.expect("requested u");
        let vt = svd.v_t.expect("requested v_t");
        let values: Vec<f64> = svd.singular_values.iter().copied().collect();
        let mut idx: Vec<usize> = (0..values.len()).collect();
        idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
        let mut uu = DMatrix::zeros(u.nrows(), idx.len());
        let mut vv = DMatrix::zeros(vt.ncols(), idx.len());
        for (k, &i) in idx.iter().enumerate() {
            uu.set_column(k, &u.column(i));
            vv.set_column(k, &vt.row(i).transpose());
        }
        Svd {
            u: uu,
            s: idx.iter().map(|&i| values[i]).collect(),
            v: vv,
        }
    };
    out.normalize_signs();
    out
}

/// Singular values only, nonincreasing.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut values: Vec<f64> = if m.is_square() && is_symmetric(m) {
        m.clone()
            .symmetric_eigenvalues()
            .iter()
            .map(|v| v.abs())
            .collect()
    } else {
        m.clone().singular_values().iter().copied().collect()
    };
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Leading `k` singular triplets.
pub fn svd_top(m: &DMatrix<f64>, k: usize) -> Svd {
    let mut out = if m.is_square() && is_symmetric(m) {
        let (values, vectors) = lanczos_top(m, k);
        svd_from_eigen(&values, &vectors, k)
    } else {
        svd_full(m).truncate(k)
    };
    out.normalize_signs();
    out
}

fn dot(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    a.dot(b)
}

const START_SEED: u64 = 0x6c61_6e63_7a6f_7321;
const RESIDUAL_TOL: f64 = 1e-11;

/// Eigenpairs of the symmetric matrix `m` whose eigenvalues have the largest
/// magnitudes, computed in a Krylov space started from `offdiag(m) r` for a fixed
/// pseudo-random `r`.
pub fn lanczos_top(m: &DMatrix<f64>, k: usize) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let k = k.min(n);
    if n == 0 || k == 0 {
        return (Vec::new(), DMatrix::zeros(n, 0));
    }
    let scale = m.norm().max(f64::MIN_POSITIVE);
    // The product is split into off-diagonal part plus diagonal so that rows
    // with identical off-diagonal entries and equal diagonals produce
    // bit-identical outputs; the start vectors use the off-diagonal part only.
    let mut off = m.clone();
    off.fill_diagonal(0.0);
    let diag = m.diagonal();
    let apply = |x: &DVector<f64>| -> DVector<f64> {
        let mut y = &off * x;
        for i in 0..n {
            y[i] += diag[i] * x[i];
        }
        y
    };
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);

    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    // beta[j] couples basis[j] and basis[j + 1]; zero marks a restart.
    let mut beta: Vec<f64> = Vec::new();

    let orthogonalize = |w: &mut DVector<f64>, basis: &[DVector<f64>]| {
        for _ in 0..2 {
            for q in basis {
                let c = dot(q, w);
                w.axpy(-c, q, 1.0);
            }
        }
    };

    // Starts a new Krylov block orthogonal to the current basis. Returns false
    // when the basis already spans the whole space.
    let restart = |basis: &mut Vec<DVector<f64>>, rng: &mut ChaCha8Rng| -> bool {
        for attempt in 0..4 {
            let r = DVector::from_fn(n, |_, _| rng.random::<f64>() - 0.5);
            let mut w = if attempt < 2 { &off * &r } else { r };
            let before = w.norm();
            orthogonalize(&mut w, basis);
            let after = w.norm();
            if before > 0.0 && after > 1e-8 * before {
                basis.push(w / after);
                return true;
            }
        }
        false
    };

    if !restart(&mut basis, &mut rng) {
        return (vec![0.0; k], DMatrix::identity(n, k));
    }

    let check_every = 4;
    loop {
        let j = basis.len() - 1;
        let mut w = apply(&basis[j]);
        let a = dot(&basis[j], &w);
        w.axpy(-a, &basis[j], 1.0);
        if j > 0 && beta[j - 1] != 0.0 {
            w.axpy(-beta[j - 1], &basis[j - 1], 1.0);
        }
        orthogonalize(&mut w, &basis);
        alpha.push(a);
        let b = w.norm();
        let steps = basis.len();

        // A breakdown only proves the current Krylov space is invariant; the
        // complement may still hold larger eigenvalues, so keep going.
        if b <= 1e-13 * scale || steps == n {
            beta.push(0.0);
            if steps < n && restart(&mut basis, &mut rng) {
                continue;
            }
            return ritz_pairs(&basis, &alpha, &beta, k).0;
        }

        if steps >= k && (steps - k) % check_every == 0 {
            let ((values, vectors), converged) = ritz_pairs_checked(&basis, &alpha, &beta, b, k);
            if converged {
                return (values, vectors);
            }
        }
        beta.push(b);
        basis.push(w / b);
    }
}

fn ritz_pairs(
    basis: &[DVector<f64>],
    alpha: &[f64],
    beta: &[f64],
    k: usize,
) -> ((Vec<f64>, DMatrix<f64>), bool) {
    ritz_pairs_checked(basis, alpha, beta, 0.0, k)
}

/// Ritz pairs of the current Lanczos factorization and whether the leading
/// `k` have residual `|b * s_last|` within tolerance.
fn ritz_pairs_checked(
    basis: &[DVector<f64>],
    alpha: &[f64],
    beta: &[f64],
    b: f64,
    k: usize,
) -> ((Vec<f64>, DMatrix<f64>), bool) {
    let steps = alpha.len();
    let eig = SymmetricEigen::new(tridiagonal(alpha, beta));
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let order = order_by_magnitude(&values);
    let top = &order[..k.min(order.len())];
    let lead = values[order[0]].abs().max(f64::MIN_POSITIVE);
    let converged = top.len() == k
        && top
            .iter()
            .all(|&i| (b * eig.eigenvectors[(steps - 1, i)]).abs() <= RESIDUAL_TOL * lead);
    if !converged && b != 0.0 {
        return ((Vec::new(), DMatrix::zeros(0, 0)), false);
    }
    let q = DMatrix::from_columns(basis);
    let n = q.nrows();
    let mut vectors = DMatrix::zeros(n, top.len());
    for (c, &i) in top.iter().enumerate() {
        vectors.set_column(c, &(&q * eig.eigenvectors.column(i)));
    }
    (
        pad(top.iter().map(|&i| values[i]).collect(), vectors, k),
        true,
    )
}

/// Pads with zero eigenvalues when fewer than `k` pairs could be formed.
fn pad(mut values: Vec<f64>, vectors: DMatrix<f64>, k: usize) -> (Vec<f64>, DMatrix<f64>) {
    if values.len() >= k {
        return (values, vectors);
    }
    let n = vectors.nrows();
    let have = values.len();
    let mut out = DMatrix::zeros(n, k);
    out.columns_mut(0, have).copy_from(&vectors);
    values.resize(k, 0.0);
    (values, out)
}

fn tridiagonal(alpha: &[f64], beta: &[f64]) -> DMatrix<f64> {
    let m = alpha.len();
    let mut t = DMatrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    t
}
