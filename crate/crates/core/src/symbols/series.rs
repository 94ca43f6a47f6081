//! Finite Taylor-coefficient sequences: polynomials and truncated H² elements.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Coefficients `c₀ … c_d` of `Σ cₖ zᵏ`.
///
/// Exact trailing zeros are dropped on construction so the last stored
/// coefficient is nonzero; the zero series has no coefficients at all.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoefficientSeries {
    coeffs: Vec<C64>,
}

impl CoefficientSeries {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == C64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// `zᵏ`
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); k + 1];
        coeffs[k] = C64::new(1.0, 0.0);
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    /// Coefficient of `zᵏ`; zero beyond the stored degree.
    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero series.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Number of stored coefficients (`degree + 1`, or 0).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn h2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Wiener norm `Σ|cₖ|`, an upper bound for the sup norm on the circle.
    pub fn wiener_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// `⟨self, other⟩_{H²} = Σ selfₖ · conj(otherₖ)`
    pub fn inner(&self, other: &Self) -> C64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Multiplication by `zᵏ`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C64::new(0.0, 0.0); k];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// Backward shift `(f − f(0))/z`.
    pub fn backward_shift(&self) -> Self {
        Self::new(self.coeffs.iter().skip(1).copied().collect())
    }

    /// Keep coefficients of degree `≤ n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::new(self.coeffs.iter().take(n + 1).copied().collect())
    }

    /// Zero-padded coefficient vector of exactly `len` entries (truncating if longer).
    pub fn padded(&self, len: usize) -> Vec<C64> {
        let mut v = self.coeffs.clone();
        v.resize(len, C64::new(0.0, 0.0));
        v
    }

    /// Drop trailing coefficients with modulus `≤ tol`.
    pub fn trim(&self, tol: f64) -> Self {
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= tol) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.len().max(other.len());
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    /// The first `order` Taylor coefficients of the polynomial about `z0`,
    /// i.e. `f⁽ʳ⁾(z0)/r!` for `r < order`, by repeated synthetic division.
    pub fn taylor_at(&self, z0: C64, order: usize) -> Vec<C64> {
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(order);
        for _ in 0..order {
            if work.is_empty() {
                out.push(C64::new(0.0, 0.0));
                continue;
            }
            // Horner in place: work becomes the quotient, the remainder is the value.
            let mut carry = C64::new(0.0, 0.0);
            for c in work.iter_mut().rev() {
                let next = *c + carry * z0;
                *c = carry;
                carry = next;
            }
            out.push(carry);
            work.pop();
        }
        out
    }

    /// Polynomial long division `self = q·divisor + r`, `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::InvalidSymbol("division by the zero polynomial".into()))?;
        let lead = divisor.coeffs[dd];
        let Some(nd) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if nd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![C64::new(0.0, 0.0); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let q = rem[k + dd] / lead;
            quot[k] = q;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= q * d;
            }
            rem[k + dd] = C64::new(0.0, 0.0);
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Division that must be exact: the remainder norm is checked against
    /// `rel_tol · ‖self‖₂`.
    pub fn div_exact(&self, divisor: &Self, rel_tol: f64) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        let allowed = rel_tol * self.h2_norm().max(f64::MIN_POSITIVE);
        let remainder = r.h2_norm();
        if remainder > allowed {
            return Err(Error::InexactDivision { remainder, allowed });
        }
        Ok(q)
    }

    /// Power-series quotient `self / den` truncated to degree `n`; requires `den(0) ≠ 0`.
    pub fn series_div(&self, den: &Self, n: usize) -> Result<Self> {
        let d0 = den.coeff(0);
        if d0.norm() == 0.0 {
            return Err(Error::InvalidSymbol(
                "power-series division needs a nonzero constant term".into(),
            ));
        }
        let mut out = vec![C64::new(0.0, 0.0); n + 1];
        for k in 0..=n {
            let mut s = self.coeff(k);
            for j in 1..=k.min(den.len().saturating_sub(1)) {
                s -= den.coeffs[j] * out[k - j];
            }
            out[k] = s / d0;
        }
        Ok(Self::new(out))
    }

    /// Product truncated to degree `n`.
    pub fn mul_truncated(&self, other: &Self, n: usize) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let len = (self.len() + other.len() - 1).min(n + 1);
        let mut out = vec![C64::new(0.0, 0.0); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Coefficientwise complex conjugate, i.e. the series of `conj(f(conj z))`.
    pub fn conj_coeffs(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }
}

impl From<Vec<C64>> for CoefficientSeries {
    fn from(v: Vec<C64>) -> Self {
        Self::new(v)
    }
}

impl Add for &CoefficientSeries {
    type Output = CoefficientSeries;
    fn add(self, rhs: Self) -> CoefficientSeries {
        let n = self.len().max(rhs.len());
        CoefficientSeries::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &CoefficientSeries {
    type Output = CoefficientSeries;
    fn sub(self, rhs: Self) -> CoefficientSeries {
        let n = self.len().max(rhs.len());
        CoefficientSeries::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &CoefficientSeries {
    type Output = CoefficientSeries;
    fn neg(self) -> CoefficientSeries {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for &CoefficientSeries {
    type Output = CoefficientSeries;
    fn mul(self, rhs: Self) -> CoefficientSeries {
        if self.is_zero() || rhs.is_zero() {
            return CoefficientSeries::zero();
        }
        let n = self.len() + rhs.len() - 2;
        self.mul_truncated(rhs, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn trailing_zeros_dropped() {
        let s = CoefficientSeries::new(vec![c(1.0), c(0.0), c(0.0)]);
        assert_eq!(s.degree(), Some(0));
        assert!(CoefficientSeries::new(vec![c(0.0)]).is_zero());
    }

    #[test]
    fn div_rem_matches_hand_division() {
        // z² − 1 = (z − 1)(z + 1)
        let num = CoefficientSeries::from_real(&[-1.0, 0.0, 1.0]);
        let den = CoefficientSeries::from_real(&[-1.0, 1.0]);
        let (q, r) = num.div_rem(&den).unwrap();
        assert_eq!(q, CoefficientSeries::from_real(&[1.0, 1.0]));
        assert!(r.is_zero());
        let (q, r) = CoefficientSeries::from_real(&[2.0, 0.0, 1.0])
            .div_rem(&den)
            .unwrap();
        assert_eq!(q, CoefficientSeries::from_real(&[1.0, 1.0]));
        assert_eq!(r, CoefficientSeries::from_real(&[3.0]));
    }

    #[test]
    fn inexact_division_is_reported() {
        let num = CoefficientSeries::from_real(&[2.0, 0.0, 1.0]);
        let den = CoefficientSeries::from_real(&[-1.0, 1.0]);
        assert!(matches!(
            num.div_exact(&den, 1e-10),
            Err(Error::InexactDivision { .. })
        ));
    }

    #[test]
    fn taylor_at_recovers_derivatives() {
        // f = z³ at z0 = 2: f = 8, f' = 12, f''/2 = 6, f'''/6 = 1
        let f = CoefficientSeries::monomial(3);
        let t = f.taylor_at(c(2.0), 5);
        let want = [8.0, 12.0, 6.0, 1.0, 0.0];
        for (got, w) in t.iter().zip(want) {
            assert!((got - c(w)).norm() < 1e-12);
        }
    }

    #[test]
    fn series_division_of_geometric() {
        // 1/(1 − z/2) = Σ 2⁻ᵏ zᵏ
        let den = CoefficientSeries::from_real(&[1.0, -0.5]);
        let q = CoefficientSeries::one().series_div(&den, 10).unwrap();
        for k in 0..=10 {
            assert!((q.coeff(k) - c(0.5f64.powi(k as i32))).norm() < 1e-15);
        }
    }

    #[test]
    fn backward_shift_drops_constant() {
        let f = CoefficientSeries::from_real(&[3.0, 1.0, 2.0]);
        assert_eq!(f.backward_shift(), CoefficientSeries::from_real(&[1.0, 2.0]));
        assert_eq!(f.backward_shift().shift_up(1), &f - &CoefficientSeries::from_real(&[3.0]));
    }
}
