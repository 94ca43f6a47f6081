use serde::{Deserialize, Serialize};

use super::roots::{circle_roots, polynomial_roots, DEFAULT_CLUSTER_RADIUS};
use super::{CircleZero, CircleZeroPolynomial, CoefficientSeries, CIRCLE_TOL};
use crate::error::{Error, Result};
use crate::C64;

/// `num/den`, analytic on a neighborhood of the closed disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRational")]
pub struct RationalSymbol {
    num: CoefficientSeries,
    den: CoefficientSeries,
}

#[derive(Deserialize)]
struct RawRational {
    num: CoefficientSeries,
    den: CoefficientSeries,
}

impl TryFrom<RawRational> for RationalSymbol {
    type Error = Error;
    fn try_from(raw: RawRational) -> Result<Self> {
        Self::new(raw.num, raw.den)
    }
}

impl RationalSymbol {
    /// Validates that `num ≢ 0` and that `den` has no roots in `|z| ≤ 1`.
    pub fn new(num: CoefficientSeries, den: CoefficientSeries) -> Result<Self> {
        if num.is_zero() {
            return Err(Error::InvalidSymbol("numerator is identically zero".into()));
        }
        if den.is_zero() {
            return Err(Error::InvalidSymbol("denominator is identically zero".into()));
        }
        if let Some(r) = polynomial_roots(&den)?
            .into_iter()
            .find(|r| r.norm() <= 1.0 + CIRCLE_TOL)
        {
            return Err(Error::InvalidSymbol(format!(
                "denominator vanishes at {r} in the closed disk"
            )));
        }
        Ok(Self { num, den })
    }

    pub fn polynomial(num: CoefficientSeries) -> Result<Self> {
        Self::new(num, CoefficientSeries::one())
    }

    pub fn one() -> Self {
        Self {
            num: CoefficientSeries::one(),
            den: CoefficientSeries::one(),
        }
    }

    pub fn num(&self) -> &CoefficientSeries {
        &self.num
    }

    pub fn den(&self) -> &CoefficientSeries {
        &self.den
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// The denominator is a nonzero constant.
    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    /// Taylor coefficients up to degree `n`.
    pub fn taylor(&self, n: usize) -> CoefficientSeries {
        self.num
            .series_div(&self.den, n)
            .expect("denominator is nonzero at the origin")
    }

    /// Replace the numerator, keeping the (already validated) denominator.
    pub(crate) fn with_num(&self, num: CoefficientSeries) -> Self {
        Self {
            num,
            den: self.den.clone(),
        }
    }
}

/// Tolerances for [`reduce_with`].
#[derive(Clone, Copy, Debug)]
pub struct ReduceOptions {
    /// Relative modulus tolerance: a root ζ is on the circle when `||ζ| − 1| ≤ tol`.
    pub tol: f64,
    /// Roots within this distance are merged into one multiple root.
    pub cluster_radius: f64,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        Self {
            tol: CIRCLE_TOL,
            cluster_radius: DEFAULT_CLUSTER_RADIUS,
        }
    }
}

/// `ǎ`: the monic polynomial carrying exactly the circle zeros of `a`,
/// multiplicities preserved. Inner zeros, exterior zeros and the
/// denominator do not change the range space and are discarded.
pub fn reduce(a: &RationalSymbol, tol: f64) -> Result<CircleZeroPolynomial> {
    reduce_with(
        a,
        ReduceOptions {
            tol,
            ..ReduceOptions::default()
        },
    )
}

pub fn reduce_with(a: &RationalSymbol, opts: ReduceOptions) -> Result<CircleZeroPolynomial> {
    let zeros = circle_roots(&a.num, opts.tol, opts.cluster_radius)?;
    CircleZeroPolynomial::new(zeros.into_iter().map(|r| CircleZero {
        theta: snap_quarter_turn(r.value.arg()),
        mult: r.multiplicity,
    }))
}

/// Root finders return angles like 1e-17 for the point 1; snap those to the
/// nearest multiple of π/2 so exact symbols round-trip.
fn snap_quarter_turn(theta: f64) -> f64 {
    let q = theta / std::f64::consts::FRAC_PI_2;
    if (q - q.round()).abs() < 1e-12 {
        super::normalize_angle(q.round() * std::f64::consts::FRAC_PI_2)
    } else {
        theta
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::ANGLE_TOL;

    fn re(v: &[f64]) -> CoefficientSeries {
        CoefficientSeries::from_real(v)
    }

    #[test]
    fn reduce_keeps_circle_zero() {
        // (1 − z)/2
        let a = RationalSymbol::polynomial(re(&[0.5, -0.5])).unwrap();
        let r = reduce(&a, CIRCLE_TOL).unwrap();
        let want = CircleZeroPolynomial::from_pairs(&[(0.0, 1)]).unwrap();
        assert!(r.approx_eq(&want, ANGLE_TOL));
    }

    #[test]
    fn reduce_without_circle_zeros_is_one() {
        // 1/(2 − z)
        let a = RationalSymbol::new(re(&[1.0]), re(&[2.0, -1.0])).unwrap();
        assert_eq!(reduce(&a, CIRCLE_TOL).unwrap().degree(), 0);
    }

    #[test]
    fn reduce_drops_exterior_zero() {
        // (2 − z)(1 − z) = 2 − 3z + z²
        let a = RationalSymbol::polynomial(re(&[2.0, -3.0, 1.0])).unwrap();
        let r = reduce(&a, CIRCLE_TOL).unwrap();
        assert_eq!(r.degree(), 1);
        assert!(crate::symbols::angle_distance(r.zeros()[0].theta, 0.0) < 1e-12);
    }

    #[test]
    fn reduce_keeps_multiplicity() {
        // (1 − z)²(z − 1/2)
        let sq = re(&[1.0, -2.0, 1.0]);
        let num = &sq * &re(&[-0.5, 1.0]);
        let a = RationalSymbol::polynomial(num).unwrap();
        let r = reduce(&a, CIRCLE_TOL).unwrap();
        assert_eq!(r.zeros(), &[CircleZero { theta: r.zeros()[0].theta, mult: 2 }]);
        assert!(crate::symbols::angle_distance(r.zeros()[0].theta, 0.0) < 1e-9);
    }

    #[test]
    fn pole_in_disk_rejected() {
        assert!(RationalSymbol::new(re(&[1.0]), re(&[0.5, -1.0])).is_err());
        assert!(RationalSymbol::new(re(&[1.0]), re(&[1.0, -1.0])).is_err());
        assert!(RationalSymbol::new(CoefficientSeries::zero(), re(&[1.0])).is_err());
    }
}
