//! Symbols: monic polynomials with all zeros on the unit circle, rational
//! H^∞ symbols, and the branch-singularity class used for multiplier
//! candidates.

mod rational;
pub mod roots;
mod series;
mod singular;

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

pub use rational::{reduce, reduce_with, RationalSymbol, ReduceOptions};
pub use series::CoefficientSeries;
pub use singular::{CircleFactor, SingularFactorFunction};

/// Default tolerance (radians) for matching zero angles in multiset operations.
pub const ANGLE_TOL: f64 = 1e-9;

/// Default relative modulus tolerance for deciding a root lies on the circle.
pub const CIRCLE_TOL: f64 = 1e-8;

/// `e^{iθ}`, exact at multiples of π/2.
pub fn unit(theta: f64) -> C64 {
    let q = theta / FRAC_PI_2;
    if (q - q.round()).abs() < 1e-15 {
        return match (q.round() as i64).rem_euclid(4) {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    C64::from_polar(1.0, theta)
}

/// Angle in `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = normalize_angle(a - b);
    d.min(TAU - d)
}

/// A zero `e^{iθ}` of multiplicity `mult`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleZero {
    pub theta: f64,
    pub mult: u32,
}

/// `ǎ(z) = ∏ (z − e^{iθⱼ})^{mⱼ}`, stored by angle so every zero is exactly
/// unimodular.
///
/// Zeros are kept sorted by angle in `[0, 2π)`; angles within
/// [`ANGLE_TOL`] of each other are merged on construction. The empty zero
/// list encodes `a ≡ 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<CircleZero>", into = "Vec<CircleZero>")]
pub struct CircleZeroPolynomial {
    zeros: Vec<CircleZero>,
    coeffs: CoefficientSeries,
}

impl CircleZeroPolynomial {
    pub fn new(zeros: impl IntoIterator<Item = CircleZero>) -> Result<Self> {
        let mut merged: Vec<CircleZero> = Vec::new();
        for z in zeros {
            if !z.theta.is_finite() {
                return Err(Error::InvalidSymbol(format!("non-finite angle {}", z.theta)));
            }
            if z.mult == 0 {
                return Err(Error::InvalidSymbol("zero multiplicity".into()));
            }
            let theta = normalize_angle(z.theta);
            match merged
                .iter_mut()
                .find(|m| angle_distance(m.theta, theta) <= ANGLE_TOL)
            {
                Some(m) => m.mult += z.mult,
                None => merged.push(CircleZero { theta, mult: z.mult }),
            }
        }
        merged.sort_by(|a, b| a.theta.total_cmp(&b.theta));
        let coeffs = expand_zeros(&merged);
        Ok(Self {
            zeros: merged,
            coeffs,
        })
    }

    /// Convenience constructor from `(θ, m)` pairs.
    pub fn from_pairs(pairs: &[(f64, u32)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(theta, mult)| CircleZero { theta, mult }))
    }

    /// `a ≡ 1`.
    pub fn one() -> Self {
        Self {
            zeros: Vec::new(),
            coeffs: CoefficientSeries::one(),
        }
    }

    pub fn zeros(&self) -> &[CircleZero] {
        &self.zeros
    }

    /// `N = Σ mⱼ`.
    pub fn degree(&self) -> usize {
        self.zeros.iter().map(|z| z.mult as usize).sum()
    }

    /// The zeros as unit complex numbers, repeated by multiplicity, in angle order.
    pub fn points(&self) -> Vec<C64> {
        self.zeros
            .iter()
            .flat_map(|z| std::iter::repeat_n(unit(z.theta), z.mult as usize))
            .collect()
    }

    /// The monomial expansion; degree `N`, leading coefficient 1.
    pub fn expand(&self) -> &CoefficientSeries {
        &self.coeffs
    }

    /// `a(0) = (−1)^N e^{iΣ mⱼθⱼ}`, computed in angle form so `|a(0)| = 1` exactly
    /// up to the evaluation of one complex exponential.
    pub fn value_at_zero(&self) -> C64 {
        let phase: f64 = self.zeros.iter().map(|z| z.mult as f64 * z.theta).sum();
        let sign = if self.degree() % 2 == 0 { 1.0 } else { -1.0 };
        unit(normalize_angle(phase)) * sign
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.points().iter().map(|&zeta| z - zeta).product()
    }

    /// Multiplicity of the zero at `theta` (0 if absent).
    pub fn multiplicity_at(&self, theta: f64, tol: f64) -> u32 {
        self.zeros
            .iter()
            .find(|z| angle_distance(z.theta, theta) <= tol)
            .map_or(0, |z| z.mult)
    }

    /// Multiset equality of zeros up to `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.zeros.len() == other.zeros.len()
            && self
                .zeros
                .iter()
                .all(|z| other.multiplicity_at(z.theta, tol) == z.mult)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.zeros.iter().chain(&other.zeros).copied())
            .expect("zeros of valid symbols stay valid")
    }
}

impl TryFrom<Vec<CircleZero>> for CircleZeroPolynomial {
    type Error = Error;
    fn try_from(zeros: Vec<CircleZero>) -> Result<Self> {
        Self::new(zeros)
    }
}

impl From<CircleZeroPolynomial> for Vec<CircleZero> {
    fn from(a: CircleZeroPolynomial) -> Self {
        a.zeros
    }
}

fn expand_zeros(zeros: &[CircleZero]) -> CoefficientSeries {
    let mut coeffs = vec![C64::new(1.0, 0.0)];
    for z in zeros {
        let zeta = unit(z.theta);
        for _ in 0..z.mult {
            let mut next = vec![C64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * zeta;
            }
            coeffs = next;
        }
    }
    CoefficientSeries::new(coeffs)
}

/// `a1/a2` as a class symbol when the zero multiset of `a2` is contained in
/// that of `a1` (angles matched within `tol`); `None` otherwise.
pub fn circle_divides(
    a1: &CircleZeroPolynomial,
    a2: &CircleZeroPolynomial,
    tol: f64,
) -> Option<CircleZeroPolynomial> {
    let mut quotient = Vec::new();
    for z in &a2.zeros {
        if a1.multiplicity_at(z.theta, tol) < z.mult {
            return None;
        }
    }
    for z in &a1.zeros {
        let m2 = a2.multiplicity_at(z.theta, tol);
        if z.mult > m2 {
            quotient.push(CircleZero {
                theta: z.theta,
                mult: z.mult - m2,
            });
        }
    }
    Some(CircleZeroPolynomial::new(quotient).expect("sub-multiset of a valid symbol"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn re(v: &[f64]) -> CoefficientSeries {
        CoefficientSeries::from_real(v)
    }

    #[test]
    fn expand_single_factor() {
        let a = CircleZeroPolynomial::from_pairs(&[(0.0, 1)]).unwrap();
        assert_eq!(a.expand(), &re(&[-1.0, 1.0]));
    }

    #[test]
    fn expand_conjugate_pair() {
        let a = CircleZeroPolynomial::from_pairs(&[(0.0, 1), (PI, 1)]).unwrap();
        assert!(a.expand().max_abs_diff(&re(&[-1.0, 0.0, 1.0])) < 1e-15);
    }

    #[test]
    fn expand_double_zero_matches_binomial() {
        // binomial oracle: (z − 1)² = Σ C(2,k)(−1)^{2−k} zᵏ
        let binom = [1.0, 2.0, 1.0];
        let oracle: Vec<f64> = (0..3)
            .map(|k| binom[k] * if (2 - k) % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let a = CircleZeroPolynomial::from_pairs(&[(0.0, 2)]).unwrap();
        assert_eq!(a.expand(), &re(&oracle));
    }

    #[test]
    fn trivial_symbol_is_one() {
        let a = CircleZeroPolynomial::from_pairs(&[]).unwrap();
        assert_eq!(a.degree(), 0);
        assert_eq!(a.expand(), &CoefficientSeries::one());
        assert_eq!(a.value_at_zero(), C64::new(1.0, 0.0));
    }

    #[test]
    fn value_at_zero_matches_expansion() {
        let a = CircleZeroPolynomial::from_pairs(&[(0.3, 2), (2.0, 1), (4.5, 1)]).unwrap();
        assert!((a.value_at_zero() - a.expand().coeff(0)).norm() < 1e-14);
        assert_eq!(a.value_at_zero().norm(), 1.0);
    }

    #[test]
    fn nearby_angles_merge() {
        let a = CircleZeroPolynomial::from_pairs(&[(0.0, 1), (TAU - 1e-12, 1)]).unwrap();
        assert_eq!(a.zeros().len(), 1);
        assert_eq!(a.degree(), 2);
    }

    #[test]
    fn divides_examples() {
        let zm1 = CircleZeroPolynomial::from_pairs(&[(0.0, 1)]).unwrap();
        let zp1 = CircleZeroPolynomial::from_pairs(&[(PI, 1)]).unwrap();
        let both = zm1.mul(&zp1);
        let q = circle_divides(&both, &zp1, ANGLE_TOL).unwrap();
        assert!(q.approx_eq(&zm1, ANGLE_TOL));
        assert!(circle_divides(&zm1, &zp1, ANGLE_TOL).is_none());
        let sq = CircleZeroPolynomial::from_pairs(&[(0.0, 2)]).unwrap();
        let q = circle_divides(&sq, &zm1, ANGLE_TOL).unwrap();
        assert!(q.approx_eq(&zm1, ANGLE_TOL));
    }

    #[test]
    fn zero_multiplicity_rejected() {
        assert!(CircleZeroPolynomial::from_pairs(&[(0.0, 0)]).is_err());
        assert!(CircleZeroPolynomial::from_pairs(&[(f64::NAN, 1)]).is_err());
    }
}
