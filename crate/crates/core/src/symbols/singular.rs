use serde::{Deserialize, Serialize};

use super::roots::{circle_roots, DEFAULT_CLUSTER_RADIUS};
use super::{
    angle_distance, normalize_angle, unit, CircleZeroPolynomial, CoefficientSeries,
    RationalSymbol, ANGLE_TOL, CIRCLE_TOL,
};
use crate::error::{Error, Result};
use crate::C64;

/// Exponents within this distance of an integer are snapped to it.
const EXPONENT_SNAP: f64 = 1e-9;

/// A factor `(z − e^{iθ})^α`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleFactor {
    pub theta: f64,
    pub alpha: f64,
}

impl CircleFactor {
    /// `α ∈ {0, 1, 2, …}`: the factor is a polynomial.
    pub fn is_analytic(&self) -> bool {
        is_nonneg_integer(self.alpha)
    }
}

pub(crate) fn is_nonneg_integer(alpha: f64) -> bool {
    alpha >= 0.0 && alpha.fract() == 0.0
}

/// `r(z) · ∏ (z − e^{iθᵢ})^{αᵢ}` with `r` rational, analytic on the closed
/// disk and zero-free on the circle.
///
/// All boundary behavior is carried by the circle factors, so membership
/// questions reduce to exponent arithmetic. The branch of `(z − ζ)^α` is
/// `(−ζ)^α (1 − ζ̄z)^α` with principal powers, which is analytic on the
/// whole disk; only moduli are ever used for decisions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSingular")]
pub struct SingularFactorFunction {
    rational: RationalSymbol,
    factors: Vec<CircleFactor>,
}

#[derive(Deserialize)]
struct RawSingular {
    rational: RationalSymbol,
    #[serde(default)]
    factors: Vec<CircleFactor>,
}

impl TryFrom<RawSingular> for SingularFactorFunction {
    type Error = Error;
    fn try_from(raw: RawSingular) -> Result<Self> {
        Self::new(raw.rational, raw.factors)
    }
}

impl SingularFactorFunction {
    /// Circle zeros of the rational numerator are divided out and folded into
    /// the factor list as integer exponents; duplicate angles are merged.
    pub fn new(rational: RationalSymbol, factors: Vec<CircleFactor>) -> Result<Self> {
        let mut all = factors;
        let mut num = rational.num().clone();
        for root in circle_roots(&num, CIRCLE_TOL, DEFAULT_CLUSTER_RADIUS)? {
            let theta = root.value.arg();
            let lin = CoefficientSeries::new(vec![-unit(theta), C64::new(1.0, 0.0)]);
            for _ in 0..root.multiplicity {
                num = num.div_exact(&lin, 1e-7)?;
            }
            all.push(CircleFactor {
                theta,
                alpha: root.multiplicity as f64,
            });
        }
        let mut merged: Vec<CircleFactor> = Vec::new();
        for f in all {
            if !f.theta.is_finite() || !f.alpha.is_finite() {
                return Err(Error::InvalidSymbol(format!(
                    "non-finite circle factor ({}, {})",
                    f.theta, f.alpha
                )));
            }
            let theta = normalize_angle(f.theta);
            match merged
                .iter_mut()
                .find(|m| angle_distance(m.theta, theta) <= ANGLE_TOL)
            {
                Some(m) => m.alpha += f.alpha,
                None => merged.push(CircleFactor {
                    theta,
                    alpha: f.alpha,
                }),
            }
        }
        for f in &mut merged {
            if (f.alpha - f.alpha.round()).abs() <= EXPONENT_SNAP {
                f.alpha = f.alpha.round();
            }
        }
        merged.retain(|f| f.alpha != 0.0);
        merged.sort_by(|a, b| a.theta.total_cmp(&b.theta));
        Ok(Self {
            rational: rational.with_num(num),
            factors: merged,
        })
    }

    pub fn from_factors(factors: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            RationalSymbol::one(),
            factors
                .iter()
                .map(|&(theta, alpha)| CircleFactor { theta, alpha })
                .collect(),
        )
    }

    pub fn from_polynomial(p: &CoefficientSeries) -> Result<Self> {
        Self::new(RationalSymbol::polynomial(p.clone())?, Vec::new())
    }

    pub fn from_class_a(a: &CircleZeroPolynomial) -> Self {
        Self {
            rational: RationalSymbol::one(),
            factors: a
                .zeros()
                .iter()
                .map(|z| CircleFactor {
                    theta: z.theta,
                    alpha: z.mult as f64,
                })
                .collect(),
        }
    }

    pub fn rational(&self) -> &RationalSymbol {
        &self.rational
    }

    pub fn factors(&self) -> &[CircleFactor] {
        &self.factors
    }

    /// Exponent at `theta` (0 when there is no factor there).
    pub fn exponent_at(&self, theta: f64, tol: f64) -> f64 {
        self.factors
            .iter()
            .find(|f| angle_distance(f.theta, theta) <= tol)
            .map_or(0.0, |f| f.alpha)
    }

    /// Bounded on the disk: every circle exponent is nonnegative.
    pub fn hinf_membership(&self) -> bool {
        self.factors.iter().all(|f| f.alpha >= 0.0)
    }

    /// In H²: `∫|1 − e^{iθ}|^{2α} dθ < ∞` iff `α > −1/2`, factor by factor.
    pub fn h2_membership(&self) -> bool {
        self.factors.iter().all(|f| f.alpha > -0.5)
    }

    /// No fractional or negative exponent anywhere, i.e. `φ` is rational and
    /// analytic on a neighborhood of the closed disk.
    pub fn is_analytic(&self) -> bool {
        self.factors.iter().all(CircleFactor::is_analytic)
    }

    fn combine(&self, a: &CircleZeroPolynomial, sign: f64) -> Self {
        let extra = a.zeros().iter().map(|z| CircleFactor {
            theta: z.theta,
            alpha: sign * z.mult as f64,
        });
        Self::new(
            self.rational.clone(),
            self.factors.iter().copied().chain(extra).collect(),
        )
        .expect("rational part already free of circle zeros")
    }

    /// `φ · a`
    pub fn mul_class_a(&self, a: &CircleZeroPolynomial) -> Self {
        self.combine(a, 1.0)
    }

    /// `φ / a`
    pub fn div_class_a(&self, a: &CircleZeroPolynomial) -> Self {
        self.combine(a, -1.0)
    }

    /// `φ = num/den` as polynomials, available only when [`is_analytic`](Self::is_analytic).
    pub fn analytic_parts(&self) -> Option<(CoefficientSeries, CoefficientSeries)> {
        if !self.is_analytic() {
            return None;
        }
        let mut num = self.rational.num().clone();
        for f in &self.factors {
            let lin = CoefficientSeries::new(vec![-unit(f.theta), C64::new(1.0, 0.0)]);
            for _ in 0..f.alpha as usize {
                num = &num * &lin;
            }
        }
        Some((num, self.rational.den().clone()))
    }

    /// `φ` as a polynomial when the denominator is constant and every factor is analytic.
    pub fn as_polynomial(&self) -> Option<CoefficientSeries> {
        let (num, den) = self.analytic_parts()?;
        (den.degree() == Some(0)).then(|| num.scale(C64::new(1.0, 0.0) / den.coeff(0)))
    }

    /// First `order` Taylor coefficients about `z0` in the analytic case.
    pub fn taylor_at(&self, z0: C64, order: usize) -> Option<Vec<C64>> {
        let (num, den) = self.analytic_parts()?;
        let n = CoefficientSeries::new(num.taylor_at(z0, order));
        let d = CoefficientSeries::new(den.taylor_at(z0, order));
        let q = n.series_div(&d, order.saturating_sub(1)).ok()?;
        Some(q.padded(order))
    }

    /// Taylor coefficients at the origin up to degree `n`.
    pub fn taylor_coefficients(&self, n: usize) -> CoefficientSeries {
        let mut out = self.rational.taylor(n);
        for f in &self.factors {
            out = out.mul_truncated(&binomial_series(f.theta, f.alpha, n), n);
        }
        out
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.factors.iter().fold(self.rational.eval(z), |acc, f| {
            let zeta = unit(f.theta);
            acc * (-zeta).powf(f.alpha) * (C64::new(1.0, 0.0) - zeta.conj() * z).powf(f.alpha)
        })
    }
}

/// Taylor coefficients of `(−ζ)^α (1 − ζ̄z)^α` up to degree `n`.
fn binomial_series(theta: f64, alpha: f64, n: usize) -> CoefficientSeries {
    let zeta = unit(theta);
    let lead = if is_nonneg_integer(alpha) {
        (-zeta).powi(alpha as i32)
    } else {
        (-zeta).powf(alpha)
    };
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut c = C64::new(1.0, 0.0);
    let step = -zeta.conj();
    for k in 0..=n {
        coeffs.push(lead * c);
        c = c * step * ((alpha - k as f64) / (k as f64 + 1.0));
    }
    CoefficientSeries::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const EPS: f64 = 0.1;

    fn example_phi() -> SingularFactorFunction {
        // (1 + z)^{1/2+ε} (1 − z)^{−1/2+ε}
        SingularFactorFunction::from_factors(&[(PI, 0.5 + EPS), (0.0, -0.5 + EPS)]).unwrap()
    }

    #[test]
    fn hinf_examples() {
        let bounded =
            SingularFactorFunction::from_factors(&[(PI, 0.5 + EPS), (0.0, 0.5 + EPS)]).unwrap();
        assert!(bounded.hinf_membership());
        let unbounded = SingularFactorFunction::from_factors(&[(0.0, -0.5 + EPS)]).unwrap();
        assert!(!unbounded.hinf_membership());
        assert!(SingularFactorFunction::from_factors(&[]).unwrap().hinf_membership());
    }

    /// Midpoint quadrature of ∫_{δ}^{π} |1 − e^{iθ}|^{2α} dθ for shrinking δ:
    /// converges for α > −1/2, grows like log(1/δ) at α = −1/2.
    fn truncated_integral(alpha: f64, delta: f64) -> f64 {
        let n = 200_000;
        // substitute θ = δ·(π/δ)^t so the endpoint singularity is resolved
        let (lo, hi) = (delta.ln(), PI.ln());
        let h = (hi - lo) / n as f64;
        (0..n)
            .map(|i| {
                let s = lo + (i as f64 + 0.5) * h;
                let theta = s.exp();
                (2.0 * (theta / 2.0).sin()).powf(2.0 * alpha) * theta * h
            })
            .sum()
    }

    #[test]
    fn h2_rule_matches_quadrature() {
        // increments over successive pairs of decades: geometric decay
        // (ratio 10^{-0.4}) for α = −0.4, constant log(100) for α = −0.5
        let inc = |alpha: f64, hi: f64| truncated_integral(alpha, hi * 1e-2) - truncated_integral(alpha, hi);
        let conv = inc(-0.4, 1e-6) / inc(-0.4, 1e-4);
        let div = inc(-0.5, 1e-6) / inc(-0.5, 1e-4);
        assert!(conv < 0.5, "α = −0.4 increment ratio {conv}");
        assert!((div - 1.0).abs() < 1e-3, "α = −0.5 increment ratio {div}");
        assert!((inc(-0.5, 1e-6) - 100f64.ln()).abs() < 1e-3);
        assert!(SingularFactorFunction::from_factors(&[(0.0, -0.4)])
            .unwrap()
            .h2_membership());
        assert!(!SingularFactorFunction::from_factors(&[(0.0, -0.5)])
            .unwrap()
            .h2_membership());
        let p = CoefficientSeries::from_real(&[1.0, 2.0, 3.0]);
        assert!(SingularFactorFunction::from_polynomial(&p)
            .unwrap()
            .h2_membership());
    }

    #[test]
    fn polynomial_circle_zeros_are_folded() {
        // (z − 1)(z + 1)(z − 3)
        let p = &CoefficientSeries::from_real(&[-1.0, 0.0, 1.0])
            * &CoefficientSeries::from_real(&[-3.0, 1.0]);
        let phi = SingularFactorFunction::from_polynomial(&p).unwrap();
        assert_eq!(phi.factors().len(), 2);
        assert_eq!(phi.exponent_at(0.0, ANGLE_TOL), 1.0);
        assert_eq!(phi.exponent_at(PI, ANGLE_TOL), 1.0);
        assert_eq!(phi.rational().num().degree(), Some(1));
        let back = phi.as_polynomial().unwrap();
        assert!(back.max_abs_diff(&p) < 1e-12);
    }

    #[test]
    fn exponent_calculus() {
        let a1 = CircleZeroPolynomial::from_pairs(&[(PI, 1), (0.0, 1)]).unwrap();
        let a2 = CircleZeroPolynomial::from_pairs(&[(PI, 1)]).unwrap();
        let h = crate::symbols::circle_divides(&a1, &a2, ANGLE_TOL).unwrap();
        let h_phi = example_phi().mul_class_a(&h);
        assert!(h_phi.hinf_membership());
        assert!((h_phi.exponent_at(0.0, ANGLE_TOL) - (0.5 + EPS)).abs() < 1e-15);
        let back = h_phi.div_class_a(&h);
        assert_eq!(back, example_phi());
    }

    #[test]
    fn hinf_implies_h2() {
        for alpha in [-1.5, -0.5, -0.3, 0.0, 0.2, 1.0, 2.5] {
            let f = SingularFactorFunction::from_factors(&[(1.0, alpha)]).unwrap();
            assert!(!f.hinf_membership() || f.h2_membership());
        }
    }

    #[test]
    fn taylor_series_matches_evaluation() {
        let phi = example_phi();
        let series = phi.taylor_coefficients(200);
        let z = C64::new(0.2, -0.3);
        assert!((series.eval(z) - phi.eval(z)).norm() < 1e-12);
    }

    #[test]
    fn local_taylor_data_of_rational() {
        // φ = (z − 1)² / (2 − z) at z0 = −1: compare with polynomial expansion route
        let num = CoefficientSeries::from_real(&[1.0, -2.0, 1.0]);
        let den = CoefficientSeries::from_real(&[2.0, -1.0]);
        let phi =
            SingularFactorFunction::new(RationalSymbol::new(num.clone(), den.clone()).unwrap(), vec![])
                .unwrap();
        let z0 = C64::new(-1.0, 0.0);
        let t = phi.taylor_at(z0, 3).unwrap();
        // value 4/3, derivative: [(2(z−1))(2−z) + (z−1)²]/(2−z)² at −1 = (−12 + 4)/9
        assert!((t[0] - C64::new(4.0 / 3.0, 0.0)).norm() < 1e-12);
        assert!((t[1] - C64::new(-8.0 / 9.0, 0.0)).norm() < 1e-12);
    }
}
