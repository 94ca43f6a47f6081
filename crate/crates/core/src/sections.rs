//! Finite sections of `T_ā`, exact preimages, range norms and reproducing
//! kernels.
//!
//! For a polynomial `a` of degree `N` the matrix of `T_ā` in the monomial
//! basis is upper triangular with `N + 1` nonzero diagonals: entry `(j, k)`
//! is `conj(â(k − j))`. It maps `𝒫_d` onto itself, so a polynomial `f` has
//! a polynomial preimage of the same degree, found by back-substitution
//! from the top coefficient down.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symbols::{CircleZeroPolynomial, CoefficientSeries};
use crate::C64;

/// Default target accuracy for automatic kernel truncation.
pub const DEFAULT_KERNEL_EPS: f64 = 1e-8;

/// The `(n+1) × (n+1)` section of `T_ā`, stored as its diagonals.
#[derive(Clone, Debug)]
pub struct FiniteSection {
    symbol: CircleZeroPolynomial,
    n: usize,
    /// `band[d] = conj(â_d)`, the entries on the d-th superdiagonal.
    band: Vec<C64>,
}

impl FiniteSection {
    pub fn new(a: &CircleZeroPolynomial, n: usize) -> Self {
        Self {
            symbol: a.clone(),
            n,
            band: conj_band(a),
        }
    }

    pub fn symbol(&self) -> &CircleZeroPolynomial {
        &self.symbol
    }

    /// Matrix dimension `n + 1`.
    pub fn size(&self) -> usize {
        self.n + 1
    }

    pub fn bandwidth(&self) -> usize {
        self.band.len() - 1
    }

    pub fn entry(&self, j: usize, k: usize) -> C64 {
        if k >= j && k - j < self.band.len() && k <= self.n {
            self.band[k - j]
        } else {
            C64::new(0.0, 0.0)
        }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.size(), self.size(), |j, k| self.entry(j, k))
    }

    /// Section times `x`; `x` is zero-padded or truncated to `n + 1` entries.
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let x = padded(x, self.size());
        band_apply(&self.band, &x)
    }

    /// Back-substitution for `section · g = f`.
    pub fn solve(&self, f: &[C64]) -> Vec<C64> {
        let f = padded(f, self.size());
        band_solve(&self.band, &f)
    }

    /// Conjugate transpose times `y` (lower triangular, entries `â(j − k)`).
    pub fn apply_adjoint(&self, y: &[C64]) -> Vec<C64> {
        let y = padded(y, self.size());
        let m = self.size();
        (0..m)
            .map(|k| {
                (0..self.band.len().min(k + 1))
                    .map(|d| self.band[d].conj() * y[k - d])
                    .sum()
            })
            .collect()
    }
}

fn padded(x: &[C64], len: usize) -> Vec<C64> {
    let mut v = x[..x.len().min(len)].to_vec();
    v.resize(len, C64::new(0.0, 0.0));
    v
}

fn conj_band(a: &CircleZeroPolynomial) -> Vec<C64> {
    a.expand().padded(a.degree() + 1).iter().map(|c| c.conj()).collect()
}

fn band_apply(band: &[C64], x: &[C64]) -> Vec<C64> {
    let m = x.len();
    (0..m)
        .map(|j| {
            band.iter()
                .enumerate()
                .take(m - j)
                .map(|(d, b)| b * x[j + d])
                .sum()
        })
        .collect()
}

fn band_solve(band: &[C64], f: &[C64]) -> Vec<C64> {
    let m = f.len();
    let diag = band[0];
    let mut g = vec![C64::new(0.0, 0.0); m];
    for j in (0..m).rev() {
        let mut s = f[j];
        for (d, b) in band.iter().enumerate().skip(1).take(m - 1 - j) {
            s -= b * g[j + d];
        }
        g[j] = s / diag;
    }
    g
}

/// `T_ā f = P₊(ā f)`, exact on polynomials; the degree does not increase.
pub fn apply_t_abar(a: &CircleZeroPolynomial, f: &CoefficientSeries) -> CoefficientSeries {
    CoefficientSeries::new(band_apply(&conj_band(a), f.coeffs()))
}

/// The unique `g` with `T_ā g = f`.
pub fn preimage(a: &CircleZeroPolynomial, f: &CoefficientSeries) -> CoefficientSeries {
    if f.is_zero() {
        return CoefficientSeries::zero();
    }
    CoefficientSeries::new(band_solve(&conj_band(a), f.coeffs()))
}

/// `‖f‖_ā = ‖preimage f‖_{H²}`.
pub fn range_norm(a: &CircleZeroPolynomial, f: &CoefficientSeries) -> f64 {
    preimage(a, f).h2_norm()
}

/// `⟨f1, f2⟩_ā = ⟨g1, g2⟩_{H²}`.
pub fn abar_inner(a: &CircleZeroPolynomial, f1: &CoefficientSeries, f2: &CoefficientSeries) -> C64 {
    preimage(a, f1).inner(&preimage(a, f2))
}

/// A polynomial in `M(ā)` together with its preimage.
#[derive(Clone, Debug, Serialize)]
pub struct RangeElement {
    pub f: CoefficientSeries,
    pub g: CoefficientSeries,
    pub norm: f64,
    #[serde(skip)]
    symbol: CircleZeroPolynomial,
}

impl RangeElement {
    pub fn new(a: &CircleZeroPolynomial, f: CoefficientSeries) -> Self {
        let g = preimage(a, &f);
        Self {
            norm: g.h2_norm(),
            f,
            g,
            symbol: a.clone(),
        }
    }

    pub fn from_preimage(a: &CircleZeroPolynomial, g: CoefficientSeries) -> Self {
        Self {
            f: apply_t_abar(a, &g),
            norm: g.h2_norm(),
            g,
            symbol: a.clone(),
        }
    }

    pub fn symbol(&self) -> &CircleZeroPolynomial {
        &self.symbol
    }

    /// `max |T_ā g − f|` relative to `max |f|`.
    pub fn residual(&self) -> f64 {
        let back = apply_t_abar(&self.symbol, &self.g);
        let scale = self.f.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        back.max_abs_diff(&self.f) / scale.max(f64::MIN_POSITIVE)
    }
}

fn check_disk(lambda: C64) -> Result<()> {
    if lambda.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::OutsideDisk(format!("{lambda}")))
    }
}

/// Coefficients `0..=n` of `a · k_λ`, `k_λ = Σ conj(λ)^m z^m`.
fn a_times_szego(a: &CircleZeroPolynomial, lambda: C64, n: usize) -> CoefficientSeries {
    let ah = a.expand();
    let lb = lambda.conj();
    let mut powers = Vec::with_capacity(n + 1);
    let mut p = C64::new(1.0, 0.0);
    for _ in 0..=n {
        powers.push(p);
        p *= lb;
    }
    CoefficientSeries::new(
        (0..=n)
            .map(|m| {
                ah.coeffs()
                    .iter()
                    .enumerate()
                    .take(m + 1)
                    .map(|(k, c)| c * powers[m - k])
                    .sum()
            })
            .collect(),
    )
}

/// `T_ā` applied to the degree-`n` truncation of `a k_λ`.
pub fn kernel(a: &CircleZeroPolynomial, lambda: C64, n: usize) -> Result<CoefficientSeries> {
    check_disk(lambda)?;
    Ok(apply_t_abar(a, &a_times_szego(a, lambda, n)))
}

/// Bound on `‖k_λ − kernel(a, λ, n)‖_ā`, valid for `n ≥ N`:
/// the discarded preimage coefficients satisfy `|(a k_λ)_m| ≤ ‖a‖_W |λ|^{m−N}`,
/// so their ℓ² mass is at most `‖a‖_W |λ|^{n+1−N} / √(1 − |λ|²)`.
pub fn kernel_tail_bound(a: &CircleZeroPolynomial, lambda: C64, n: usize) -> f64 {
    let big_n = a.degree();
    if n < big_n {
        return f64::INFINITY;
    }
    let r = lambda.norm();
    a.expand().wiener_norm() * r.powi((n + 1 - big_n) as i32) / (1.0 - r * r).sqrt()
}

/// Smallest `n ≥ min_degree.max(N)` with `kernel_tail_bound ≤ eps`.
pub fn kernel_degree_for(a: &CircleZeroPolynomial, lambda: C64, eps: f64, min_degree: usize) -> Result<usize> {
    check_disk(lambda)?;
    let mut n = min_degree.max(a.degree());
    while kernel_tail_bound(a, lambda, n) > eps {
        n += 1;
    }
    Ok(n)
}

/// `|⟨f, k_λ⟩_ā − f(λ)|` with the kernel truncated at degree `n`.
///
/// The truncation error is at most `‖f‖_ā · kernel_tail_bound`, and it is
/// exactly zero once `n ≥ deg f` since the preimage of `f` has no higher
/// coefficients to pair with.
pub fn reproducing_residual(
    a: &CircleZeroPolynomial,
    f: &CoefficientSeries,
    lambda: C64,
    n: usize,
) -> Result<f64> {
    let k = kernel(a, lambda, n)?;
    Ok((abar_inner(a, f, &k) - f.eval(lambda)).norm())
}
