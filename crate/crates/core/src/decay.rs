//! Coefficient decay `|ψ̂(n)| ≈ C e^{−c√n}`: fitting, synthetic samples, and
//! probes of multiplication by such functions across many range spaces.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multipliers::{numeric_mult_norm, GROWTH_THRESHOLD};
use crate::symbols::{CircleZeroPolynomial, CoefficientSeries};

/// Fewer nonzero coefficients than this in the window is an error.
pub const MIN_FIT_POINTS: usize = 8;

/// Decision rule for the decay class: slope and fit quality thresholds.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ClassRule {
    pub min_c: f64,
    pub max_residual: f64,
    pub window_start: usize,
}

impl Default for ClassRule {
    fn default() -> Self {
        Self {
            min_c: 0.05,
            max_residual: 0.5,
            window_start: 64,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayFit {
    /// `max(0, −slope)` of `log|ψ̂(n)|` against `√n`.
    pub c: f64,
    #[serde(rename = "logC")]
    pub log_c: f64,
    /// Root-mean-square deviation of the `√n` fit.
    pub residual: f64,
    pub window: (usize, usize),
    /// Rate `r` of the companion fit `log|ψ̂(n)| ≈ a − r n`.
    #[serde(rename = "geometricRate")]
    pub geometric_rate: f64,
    #[serde(rename = "geometricResidual")]
    pub geometric_residual: f64,
    /// The linear-in-`n` fit is good and strictly decaying: faster than any `e^{−c√n}`.
    pub geometric: bool,
}

impl DecayFit {
    pub fn in_class(&self, rule: &ClassRule) -> bool {
        self.geometric || (self.c >= rule.min_c && self.residual <= rule.max_residual)
    }
}

/// Least squares `y ≈ α + β x`, returning `(α, β, rms)`.
fn line_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let beta = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let alpha = my - beta * mx;
    let rms = (x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - alpha - beta * a).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    (alpha, beta, rms)
}

const GEOMETRIC_MAX_RESIDUAL: f64 = 1e-3;
const GEOMETRIC_MIN_RATE: f64 = 1e-3;

/// Fit over the inclusive window `[n0, n1]`, skipping zero coefficients
/// (including those past the stored degree).
pub fn decay_fit(coeffs: &CoefficientSeries, window: (usize, usize)) -> Result<DecayFit> {
    let (n0, n1) = window;
    if n0 > n1 {
        return Err(Error::Precondition(format!("empty window [{n0}, {n1}]")));
    }
    let (mut sq, mut lin, mut y) = (Vec::new(), Vec::new(), Vec::new());
    for k in n0..=n1 {
        let m = coeffs.coeff(k).norm();
        if m > 0.0 {
            sq.push((k as f64).sqrt());
            lin.push(k as f64);
            y.push(m.ln());
        }
    }
    if y.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewCoefficients {
            found: y.len(),
            required: MIN_FIT_POINTS,
        });
    }
    let (log_c, slope, residual) = line_fit(&sq, &y);
    let (_, gslope, gres) = line_fit(&lin, &y);
    Ok(DecayFit {
        c: (-slope).max(0.0),
        log_c,
        residual,
        window,
        geometric_rate: -gslope,
        geometric_residual: gres,
        geometric: gres <= GEOMETRIC_MAX_RESIDUAL && -gslope >= GEOMETRIC_MIN_RATE,
    })
}

/// `e^{−c√k}` for `k = 0..=n`.
pub fn sample_class_f(c: f64, n: usize) -> Result<CoefficientSeries> {
    if !(c > 0.0) || n == 0 {
        return Err(Error::Precondition("need c > 0 and n ≥ 1".into()));
    }
    Ok(CoefficientSeries::from_real(
        &(0..=n).map(|k| (-c * (k as f64).sqrt()).exp()).collect::<Vec<_>>(),
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeRow {
    pub symbol: usize,
    pub n: usize,
    pub sigma_max: f64,
    /// Ratio to the previous level for the same symbol (1 at the first level).
    pub growth_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeTable {
    pub rows: Vec<ProbeRow>,
    pub bounded: bool,
}

/// Section norms of multiplication by `ψ` on each `M(ā)` at each level.
/// Bounded tables are evidence that `ψ` multiplies every space; growth is
/// never read as a proof of the opposite.
pub fn universal_mult_probe(
    psi: &CoefficientSeries,
    symbols: &[CircleZeroPolynomial],
    levels: &[usize],
) -> Result<ProbeTable> {
    if symbols.is_empty() || levels.is_empty() {
        return Err(Error::Precondition("need at least one symbol and one level".into()));
    }
    let jobs: Vec<(usize, usize)> = (0..symbols.len())
        .flat_map(|s| levels.iter().map(move |&n| (s, n)))
        .collect();
    let values: Vec<f64> = jobs
        .par_iter()
        .map(|&(s, n)| numeric_mult_norm(&symbols[s], &symbols[s], psi, n))
        .collect();
    let mut rows = Vec::with_capacity(jobs.len());
    for (i, (&(symbol, n), &sigma_max)) in jobs.iter().zip(&values).enumerate() {
        let growth_ratio = if i > 0 && jobs[i - 1].0 == symbol {
            sigma_max / values[i - 1]
        } else {
            1.0
        };
        rows.push(ProbeRow {
            symbol,
            n,
            sigma_max,
            growth_ratio,
        });
    }
    let bounded = rows.iter().all(|r| r.growth_ratio < GROWTH_THRESHOLD);
    Ok(ProbeTable { rows, bounded })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_formula() {
        let s = sample_class_f(1.0, 3).unwrap();
        let want = [1.0, (-1f64).exp(), (-(2f64.sqrt())).exp(), (-(3f64.sqrt())).exp()];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(s.coeff(k).re, *w);
        }
        let steep = sample_class_f(800.0, 5).unwrap();
        assert_eq!(steep.coeff(0).re, 1.0);
        assert!(steep.coeffs()[1..].iter().all(|c| c.norm() < 1e-300));
    }

    #[test]
    fn roundtrip_recovers_rate() {
        for c in [0.5, 1.0, 2.0] {
            let fit = decay_fit(&sample_class_f(c, 4096).unwrap(), (64, 4096)).unwrap();
            assert!((fit.c - c).abs() <= 0.02 * c, "c = {c}: fit {}", fit.c);
            assert!(fit.residual < 1e-9);
            assert!(fit.in_class(&ClassRule::default()));
            assert!(!fit.geometric);
        }
    }

    #[test]
    fn geometric_decay_is_tagged() {
        let s = CoefficientSeries::from_real(&(0..=4096).map(|k| 0.5f64.powi(k)).collect::<Vec<_>>());
        let fit = decay_fit(&s, (0, 4096)).unwrap();
        assert!(fit.geometric);
        assert!((fit.geometric_rate - 2f64.ln()).abs() < 1e-9);
        assert!(fit.residual > 1.0);
    }

    #[test]
    fn polynomial_decay_has_vanishing_rate_far_out() {
        let n1 = 1 << 20;
        let s = CoefficientSeries::from_real(
            &(0..=n1).map(|k| 1.0 / ((k * k) as f64 + 1.0)).collect::<Vec<_>>(),
        );
        let far = decay_fit(&s, (1 << 16, n1)).unwrap();
        assert!(far.c < 0.01, "c = {}", far.c);
        assert!(!far.in_class(&ClassRule::default()));
    }

    #[test]
    fn too_few_points() {
        let s = CoefficientSeries::from_real(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5]);
        assert!(matches!(
            decay_fit(&s, (0, 9)),
            Err(Error::TooFewCoefficients { found: 2, .. })
        ));
    }

    #[test]
    fn constant_multiplier_probe() {
        let syms = vec![CircleZeroPolynomial::from_pairs(&[(0.0, 1)]).unwrap()];
        let t = universal_mult_probe(&CoefficientSeries::one(), &syms, &[8, 16]).unwrap();
        assert!(t.bounded);
        assert!(t.rows.iter().all(|r| (r.sigma_max - 1.0).abs() < 1e-12));
    }
}
