//! Seeded generators for test and benchmark corpora.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::symbols::{CircleZero, CircleZeroPolynomial, CoefficientSeries};
use crate::C64;

/// Complex Gaussian coefficients, degree exactly `degree`.
pub fn random_polynomial<R: Rng + ?Sized>(rng: &mut R, degree: usize) -> CoefficientSeries {
    let mut c: Vec<C64> = (0..=degree)
        .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    if c[degree] == C64::new(0.0, 0.0) {
        c[degree] = C64::new(1.0, 0.0);
    }
    CoefficientSeries::new(c)
}

/// `N` zeros at uniform angles with unit multiplicities, merged if they
/// happen to coincide.
pub fn random_class_a<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CircleZeroPolynomial {
    CircleZeroPolynomial::new((0..n).map(|_| CircleZero {
        theta: rng.random::<f64>() * TAU,
        mult: 1,
    }))
    .expect("finite angles")
}

/// Random zero set of total degree `n` with random multiplicities up to 3.
pub fn random_class_a_with_multiplicity<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CircleZeroPolynomial {
    let mut zeros = Vec::new();
    let mut left = n;
    while left > 0 {
        let m = rng.random_range(1..=left.min(3));
        zeros.push(CircleZero {
            theta: rng.random::<f64>() * TAU,
            mult: m as u32,
        });
        left -= m;
    }
    CircleZeroPolynomial::new(zeros).expect("finite angles")
}

/// `z − 1`, `z² − 1`, `(z − 1)²` and one random symbol with `N = 3`.
pub fn standard_symbols<R: Rng + ?Sized>(rng: &mut R) -> Vec<CircleZeroPolynomial> {
    vec![
        CircleZeroPolynomial::from_pairs(&[(0.0, 1)]).expect("valid"),
        CircleZeroPolynomial::from_pairs(&[(0.0, 1), (PI, 1)]).expect("valid"),
        CircleZeroPolynomial::from_pairs(&[(0.0, 2)]).expect("valid"),
        random_class_a(rng, 3),
    ]
}

/// The standard symbols plus random symbols up to `N = 6`, some with repeated zeros.
pub fn symbol_corpus<R: Rng + ?Sized>(rng: &mut R) -> Vec<CircleZeroPolynomial> {
    let mut out = standard_symbols(rng);
    out.push(CircleZeroPolynomial::one());
    for n in [2, 4, 5, 6] {
        out.push(random_class_a(rng, n));
        out.push(random_class_a_with_multiplicity(rng, n));
    }
    out
}
