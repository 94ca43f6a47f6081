//! Sup norms on the circle, the non-extreme normalization, and Pythagorean
//! mates: the outer `b` with `b(0) > 0` and `|a|² + |b|² = 1` on the circle.
//!
//! The mate is a spectral factor of `1 − |a|²`. Boundary zeros of that
//! weight are located exactly from the polynomial
//!
//! ```text
//!   W(z) = z^D (Q(z) Q̄(1/z) − P(z) P̄(1/z)),   a = P/Q,
//! ```
//!
//! and factored out as a polynomial `g` with those zeros at half
//! multiplicity. What remains is smooth and strictly positive, so its
//! logarithm has a rapidly converging Fourier series and the outer factor
//! follows from the discrete analytic completion.

use std::f64::consts::TAU;

use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symbols::roots::circle_roots;
use crate::symbols::{CoefficientSeries, RationalSymbol};
use crate::C64;

pub const DEFAULT_GRID: usize = 4096;

/// Boundary zeros of `1 − |a|²` are accepted this far off the circle.
const WEIGHT_CIRCLE_TOL: f64 = 1e-6;
const WEIGHT_CLUSTER_RADIUS: f64 = 1e-3;

fn check_grid(m: usize, degree: usize) -> Result<()> {
    if !m.is_power_of_two() || m < 8 {
        return Err(Error::Precondition(format!("grid size {m} must be a power of two ≥ 8")));
    }
    if m < 4 * degree {
        return Err(Error::Precondition(format!(
            "grid size {m} must be at least 4·degree = {}",
            4 * degree
        )));
    }
    Ok(())
}

fn golden_max(h: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (h(x1), h(x2));
    for _ in 0..100 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = h(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = h(x1);
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    f1.max(f2)
}

/// `max_θ h(θ)`: the grid maximum, refined by golden-section search around
/// every grid-local maximum that comes close to it.
pub fn sup_on_circle(h: impl Fn(f64) -> f64, m: usize) -> f64 {
    let step = TAU / m as f64;
    let vals: Vec<f64> = (0..m).map(|j| h(j as f64 * step)).collect();
    let grid_max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut best = grid_max;
    for j in 0..m {
        let (prev, next) = (vals[(j + m - 1) % m], vals[(j + 1) % m]);
        if vals[j] >= prev && vals[j] >= next && vals[j] >= 0.9 * grid_max {
            let t = j as f64 * step;
            best = best.max(golden_max(&h, t - step, t + step));
        }
    }
    best
}

pub fn sup_norm_on_circle(a: &RationalSymbol, m: usize) -> Result<f64> {
    check_grid(m, a.num().len().max(a.den().len()).saturating_sub(1))?;
    Ok(sup_on_circle(|t| a.eval(C64::from_polar(1.0, t)).norm(), m))
}

/// `a / (2‖a‖∞)` together with the scale `λ = 2‖a‖∞`. Range spaces are
/// unchanged and `‖f‖_{ā/λ} = λ ‖f‖_ā`.
pub fn normalize_nonextreme(a: &RationalSymbol, m: usize) -> Result<(RationalSymbol, f64)> {
    let lambda = 2.0 * sup_norm_on_circle(a, m)?;
    Ok((a.scale(C64::new(1.0 / lambda, 0.0)), lambda))
}

/// `z^deg · conj(p)(1/z)`: conjugated coefficients in reverse order.
fn reflect(p: &CoefficientSeries) -> CoefficientSeries {
    CoefficientSeries::new(p.coeffs().iter().rev().map(|c| c.conj()).collect())
}

fn degree(p: &CoefficientSeries) -> usize {
    p.degree().unwrap_or(0)
}

/// `p(ω^j)` for `j < m`, `ω = e^{2πi/m}`, by one inverse FFT.
fn grid_values(p: &CoefficientSeries, m: usize, planner: &mut FftPlanner<f64>) -> Vec<C64> {
    let mut buf = vec![C64::new(0.0, 0.0); m];
    for (k, c) in p.coeffs().iter().enumerate() {
        buf[k % m] += c;
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    buf
}

#[derive(Clone, Debug, Serialize)]
pub struct Mate {
    pub b: CoefficientSeries,
    pub b0: C64,
    pub residual: f64,
    /// Energy of the discarded upper half of the spectrum of the smooth factor.
    #[serde(rename = "tailEnergy")]
    pub tail_energy: f64,
    pub grid: usize,
}

pub fn pythagorean_mate(a: &RationalSymbol, m: usize) -> Result<Mate> {
    let (p, q) = (a.num(), a.den());
    let big_d = degree(p).max(degree(q));
    check_grid(m, 2 * big_d)?;
    let sup = sup_norm_on_circle(a, m)?;
    if sup > 1.0 + 1e-12 {
        return Err(Error::Precondition(format!("‖a‖∞ = {sup} exceeds 1")));
    }
    let qq = (q * &reflect(q)).shift_up(big_d - degree(q));
    let pp = (p * &reflect(p)).shift_up(big_d - degree(p));
    let w = &qq - &pp;
    let scale = qq.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    if w.trim(1e-13 * scale).is_zero() {
        return Err(Error::NonExtremeViolation("|a| ≡ 1 on the circle".into()));
    }
    let w = w.trim(1e-15 * scale);

    // boundary zeros of the weight, at half multiplicity
    let mut g = CoefficientSeries::one();
    if degree(&w) > 0 {
        for root in circle_roots(&w, WEIGHT_CIRCLE_TOL, WEIGHT_CLUSTER_RADIUS)? {
            if root.multiplicity % 2 == 1 {
                return Err(Error::LinearAlgebra(format!(
                    "boundary zero of 1 − |a|² at {} has odd multiplicity",
                    root.value
                )));
            }
            let zeta = root.value / root.value.norm();
            let lin = CoefficientSeries::new(vec![-zeta, C64::new(1.0, 0.0)]);
            for _ in 0..root.multiplicity / 2 {
                g = &g * &lin;
            }
        }
    }
    let d = degree(&g);
    let w0 = w.div_exact(&(&g * &reflect(&g)), 1e-8)?;

    // smooth positive weight w0 = (1 − |a|²)/|g|² on the grid
    let mut planner = FftPlanner::<f64>::new();
    let w0_vals = grid_values(&w0, m, &mut planner);
    let q_vals = grid_values(q, m, &mut planner);
    let mut logw = Vec::with_capacity(m);
    for j in 0..m {
        let z = C64::from_polar(1.0, TAU * j as f64 / m as f64);
        let shift = (d as i64 - big_d as i64) as i32;
        let v = (z.powi(shift) * w0_vals[j]).re / q_vals[j].norm_sqr();
        if !(v > 0.0) {
            return Err(Error::NonExtremeViolation(format!(
                "weight 1 − |a|² is not positive after removing boundary zeros (value {v:e})"
            )));
        }
        logw.push(C64::new(v.ln(), 0.0));
    }

    // analytic completion F with Re F = log w0, then b0 = exp(F/2)
    planner.plan_fft_forward(m).process(&mut logw);
    let inv_m = 1.0 / m as f64;
    let mut f_hat = vec![C64::new(0.0, 0.0); m];
    f_hat[0] = logw[0] * inv_m;
    for k in 1..m / 2 {
        f_hat[k] = logw[k] * (2.0 * inv_m);
    }
    f_hat[m / 2] = logw[m / 2] * inv_m;
    planner.plan_fft_inverse(m).process(&mut f_hat);
    let mut b0_vals: Vec<C64> = f_hat.iter().map(|f| (f * 0.5).exp()).collect();
    planner.plan_fft_forward(m).process(&mut b0_vals);
    let b0_hat: Vec<C64> = b0_vals.iter().map(|c| c * inv_m).collect();
    let tail_energy: f64 = b0_hat[m / 2..].iter().map(|c| c.norm_sqr()).sum();
    let b0_series = CoefficientSeries::new(b0_hat[..m / 2].to_vec());

    let g0 = g.coeff(0);
    let phase = g0.conj() / g0.norm();
    let b = (&g * &b0_series).truncate(m / 2 - 1).scale(phase);
    let residual = mate_residual(a, &b, m);
    Ok(Mate {
        b0: b.coeff(0),
        b,
        residual,
        tail_energy,
        grid: m,
    })
}

/// `max_j | |a(ω^j)|² + |b(ω^j)|² − 1 |`.
pub fn mate_residual(a: &RationalSymbol, b: &CoefficientSeries, m: usize) -> f64 {
    let mut planner = FftPlanner::<f64>::new();
    let bv = grid_values(b, m, &mut planner);
    (0..m)
        .map(|j| {
            let z = C64::from_polar(1.0, TAU * j as f64 / m as f64);
            (a.eval(z).norm_sqr() + bv[j].norm_sqr() - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

/// Winding number of `b` around 0 on the circle of radius `r`, i.e. the
/// number of zeros of `b` in `|z| < r`.
pub fn winding_number(b: &CoefficientSeries, r: f64, m: usize) -> i64 {
    let mut rk = 1.0;
    let scaled = CoefficientSeries::new(
        b.coeffs()
            .iter()
            .map(|c| {
                let v = c * rk;
                rk *= r;
                v
            })
            .collect(),
    );
    let mut planner = FftPlanner::<f64>::new();
    let vals = grid_values(&scaled, m, &mut planner);
    let total: f64 = (0..m)
        .map(|j| (vals[(j + 1) % m] / vals[j]).arg())
        .sum();
    (total / TAU).round() as i64
}

/// Largest coefficient change between the mates computed on grids `m` and `2m`.
pub fn mate_stability(a: &RationalSymbol, m: usize) -> Result<f64> {
    let coarse = pythagorean_mate(a, m)?;
    let fine = pythagorean_mate(a, 2 * m)?;
    Ok(coarse.b.max_abs_diff(&fine.b.truncate(m / 2 - 1)))
}
