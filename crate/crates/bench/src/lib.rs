//! Deterministic fixtures shared by the benchmarks.

use std::f64::consts::PI;

use coanalytic_core::{CircleZeroPolynomial, CoefficientSeries, RationalSymbol, C64};

/// `z − 1`, `z² − 1`, `(z − 1)²` and a symbol with five distinct zeros.
pub fn symbols() -> Vec<(&'static str, CircleZeroPolynomial)> {
    [
        ("z-1", vec![(0.0, 1)]),
        ("z2-1", vec![(0.0, 1), (PI, 1)]),
        ("(z-1)2", vec![(0.0, 2)]),
        ("five", (0..5).map(|k| (0.3 + 1.2 * k as f64, 1)).collect()),
    ]
    .into_iter()
    .map(|(name, z)| (name, CircleZeroPolynomial::from_pairs(&z).expect("valid")))
    .collect()
}

/// Degree-`d` polynomial with slowly varying complex coefficients.
pub fn polynomial(d: usize) -> CoefficientSeries {
    CoefficientSeries::new(
        (0..=d)
            .map(|k| C64::from_polar(1.0 / (1.0 + k as f64).sqrt(), 0.7 * k as f64))
            .collect(),
    )
}

/// `(1 − z)/2 · (1 − z/2)/(1 − z/3)`, inside the unit ball.
pub fn rational() -> RationalSymbol {
    let num = &CoefficientSeries::from_real(&[0.5, -0.5]) * &CoefficientSeries::from_real(&[1.0, -0.5]);
    RationalSymbol::new(num, CoefficientSeries::from_real(&[1.0, -1.0 / 3.0])).expect("valid")
}
