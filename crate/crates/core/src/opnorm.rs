//! Largest singular values of matrix-free linear maps.
//!
//! Small problems are materialized and handed to a dense SVD. Larger ones
//! use Golub–Kahan–Lanczos bidiagonalization with full reorthogonalization;
//! the Ritz value `σ_max(B_k)` increases monotonically to `σ_max(A)` and is
//! never larger, so the estimate is always a lower bound.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::C64;

/// Maps with `ncols` inputs and `nrows` outputs, plus the Euclidean adjoint.
pub trait LinearMap {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn apply(&self, x: &[C64]) -> Vec<C64>;
    fn apply_adjoint(&self, y: &[C64]) -> Vec<C64>;
}

/// Problems with at most this many columns go through the dense SVD.
pub const DENSE_LIMIT: usize = 64;

const LANCZOS_MAX_STEPS: usize = 400;
const LANCZOS_CHECK_EVERY: usize = 8;
const LANCZOS_REL_TOL: f64 = 1e-13;
const START_SEED: u64 = 0x5eed_cafe;

pub fn to_dense<M: LinearMap + ?Sized>(map: &M) -> DMatrix<C64> {
    let (m, n) = (map.nrows(), map.ncols());
    let mut out = DMatrix::<C64>::zeros(m, n);
    let mut e = vec![C64::new(0.0, 0.0); n];
    for j in 0..n {
        e[j] = C64::new(1.0, 0.0);
        let col = map.apply(&e);
        for (i, v) in col.into_iter().enumerate() {
            out[(i, j)] = v;
        }
        e[j] = C64::new(0.0, 0.0);
    }
    out
}

/// All singular values of a dense matrix, descending.
pub fn singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `(σ_min, σ_max)` over the column space, by dense SVD.
pub fn extreme_singular_values<M: LinearMap + ?Sized>(map: &M) -> (f64, f64) {
    let s = singular_values(&to_dense(map));
    let n = map.ncols().min(map.nrows());
    if n == 0 {
        return (0.0, 0.0);
    }
    (s[n - 1], s[0])
}

pub fn sigma_max<M: LinearMap + ?Sized>(map: &M) -> f64 {
    if map.ncols() == 0 || map.nrows() == 0 {
        return 0.0;
    }
    if map.ncols() <= DENSE_LIMIT {
        return singular_values(&to_dense(map))[0];
    }
    lanczos_sigma_max(map)
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn orthogonalize(v: &mut [C64], basis: &[Vec<C64>]) {
    // two passes of classical Gram–Schmidt
    for _ in 0..2 {
        for q in basis {
            let h: C64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= h * qi;
            }
        }
    }
}

fn scaled(v: &[C64], s: f64) -> Vec<C64> {
    v.iter().map(|c| c * s).collect()
}

fn bidiagonal_sigma_max(alpha: &[f64], beta: &[f64]) -> f64 {
    let k = alpha.len();
    let mut b = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        b[(i, i)] = alpha[i];
        if i + 1 < k {
            b[(i + 1, i)] = beta[i];
        }
    }
    b.singular_values().max()
}

/// Golub–Kahan–Lanczos estimate of `σ_max` from a fixed seeded start vector.
pub fn lanczos_sigma_max<M: LinearMap + ?Sized>(map: &M) -> f64 {
    let n = map.ncols();
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut v: Vec<C64> = (0..n)
        .map(|_| C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
        .collect();
    let nv = norm(&v);
    v = scaled(&v, 1.0 / nv);

    let mut vs: Vec<Vec<C64>> = Vec::new();
    let mut us: Vec<Vec<C64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let max_steps = LANCZOS_MAX_STEPS.min(n.min(map.nrows()));
    let mut last = 0.0;

    for step in 0..max_steps {
        let mut u = map.apply(&v);
        if let Some(prev) = us.last() {
            let b = *beta.last().expect("beta accompanies every u after the first");
            for (ui, pi) in u.iter_mut().zip(prev) {
                *ui -= b * pi;
            }
        }
        orthogonalize(&mut u, &us);
        let a = norm(&u);
        vs.push(v.clone());
        alpha.push(a);
        if a <= f64::EPSILON * 64.0 * alpha[0].max(1.0) {
            alpha.pop();
            alpha.push(0.0);
            break;
        }
        let u = scaled(&u, 1.0 / a);

        let mut w = map.apply_adjoint(&u);
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi -= a * vi;
        }
        orthogonalize(&mut w, &vs);
        let b = norm(&w);
        us.push(u);
        if b <= f64::EPSILON * 64.0 * alpha[0].max(1.0) {
            break;
        }
        beta.push(b);
        v = scaled(&w, 1.0 / b);

        if (step + 1) % LANCZOS_CHECK_EVERY == 0 {
            let s = bidiagonal_sigma_max(&alpha, &beta[..alpha.len() - 1]);
            if (s - last).abs() <= LANCZOS_REL_TOL * s {
                return s;
            }
            last = s;
        }
    }
    let k = alpha.len();
    bidiagonal_sigma_max(&alpha, &beta[..k.saturating_sub(1).min(beta.len())])
}

/// A dense matrix viewed as a [`LinearMap`]; handy in tests.
pub struct DenseMap(pub DMatrix<C64>);

impl LinearMap for DenseMap {
    fn nrows(&self) -> usize {
        self.0.nrows()
    }
    fn ncols(&self) -> usize {
        self.0.ncols()
    }
    fn apply(&self, x: &[C64]) -> Vec<C64> {
        (&self.0 * DVector::from_column_slice(x)).iter().copied().collect()
    }
    fn apply_adjoint(&self, y: &[C64]) -> Vec<C64> {
        (self.0.adjoint() * DVector::from_column_slice(y))
            .iter()
            .copied()
            .collect()
    }
}
