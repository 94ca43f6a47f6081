//! The shift `S_ā: f ↦ zf` on `M(ā)` and the backward shift `X_ā`.
//!
//! In preimage coordinates (`f = T_ā g`) the range norm is Euclidean and
//!
//! ```text
//!   preimage(z f) = z g − ⟨g, Ba⟩ · e₀ / conj(a(0)),
//! ```
//!
//! a rank-one perturbation of the forward shift. Consequently
//! `‖S_ā‖² = 1 + ‖Ba‖²/|a(0)|² = ‖a‖²₂/|a(0)|²`, the sections reach that
//! value as soon as `n ≥ N − 1`, and the maximizer is `T_ā Ba`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::opnorm::{sigma_max, LinearMap};
use crate::sections::{abar_inner, apply_t_abar, preimage, range_norm};
use crate::symbols::{CircleZeroPolynomial, CoefficientSeries};
use crate::C64;

/// `‖a‖_{H²} / |a(0)|`.
pub fn shift_norm_closed(a: &CircleZeroPolynomial) -> f64 {
    a.expand().h2_norm() / a.value_at_zero().norm()
}

/// `S_ā` restricted to `𝒫ₙ`, in preimage coordinates: `ℂ^{n+1} → ℂ^{n+2}`.
pub struct ShiftSection {
    n: usize,
    /// `Ba` truncated to degree `n`.
    ba: Vec<C64>,
    a0_conj: C64,
}

impl ShiftSection {
    pub fn new(a: &CircleZeroPolynomial, n: usize) -> Self {
        Self {
            n,
            ba: a.expand().backward_shift().padded(n + 1),
            a0_conj: a.value_at_zero().conj(),
        }
    }
}

impl LinearMap for ShiftSection {
    fn nrows(&self) -> usize {
        self.n + 2
    }
    fn ncols(&self) -> usize {
        self.n + 1
    }
    fn apply(&self, g: &[C64]) -> Vec<C64> {
        let c: C64 = g.iter().zip(&self.ba).map(|(x, b)| x * b.conj()).sum();
        let mut out = Vec::with_capacity(self.n + 2);
        out.push(-c / self.a0_conj);
        out.extend_from_slice(g);
        out
    }
    fn apply_adjoint(&self, y: &[C64]) -> Vec<C64> {
        let t = -y[0] / self.a0_conj.conj();
        y[1..]
            .iter()
            .zip(&self.ba)
            .map(|(v, b)| v + t * b)
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftReport {
    #[serde(rename = "closedForm")]
    pub closed_form: f64,
    #[serde(rename = "sectionValues")]
    pub section_values: Vec<(usize, f64)>,
    /// `| ‖S f*‖/‖f*‖ − closed form |` at `f* = T_ā Ba`.
    #[serde(rename = "maximizerResidual")]
    pub maximizer_residual: f64,
}

pub fn shift_section_norm(a: &CircleZeroPolynomial, n: usize) -> f64 {
    sigma_max(&ShiftSection::new(a, n))
}

pub fn shift_norm_sections(a: &CircleZeroPolynomial, ns: &[usize]) -> Result<ShiftReport> {
    if ns.is_empty() || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition(
            "section sizes must be nonempty and strictly increasing".into(),
        ));
    }
    let section_values = ns.iter().map(|&n| (n, shift_section_norm(a, n))).collect();
    Ok(ShiftReport {
        closed_form: shift_norm_closed(a),
        section_values,
        maximizer_residual: maximizer_residual(a),
    })
}

/// `T_ā Ba`, the extremal vector.
pub fn maximizer(a: &CircleZeroPolynomial) -> CoefficientSeries {
    apply_t_abar(a, &a.expand().backward_shift())
}

pub fn maximizer_residual(a: &CircleZeroPolynomial) -> f64 {
    let f = maximizer(a);
    if f.is_zero() {
        // a constant: every f is extremal
        return (shift_norm_closed(a) - 1.0).abs();
    }
    let ratio = range_norm(a, &f.shift_up(1)) / range_norm(a, &f);
    (ratio - shift_norm_closed(a)).abs()
}

/// Residuals of the scalar identities `‖1‖_ā = 1/|a(0)|` and
/// `‖T_ā Ba‖²_ā = ‖a‖²₂ − |a(0)|²`.
pub fn scalar_identity_residuals(a: &CircleZeroPolynomial) -> (f64, f64) {
    let a0 = a.value_at_zero().norm();
    let one = (range_norm(a, &CoefficientSeries::one()) - 1.0 / a0).abs();
    let tba = range_norm(a, &maximizer(a)).powi(2);
    let want = a.expand().h2_norm().powi(2) - a0 * a0;
    (one, (tba - want).abs())
}

/// `| ‖zf‖²_ā − ‖f‖²_ā − ‖1‖²_ā |⟨f, T_ā Ba⟩_ā|² |`, every term computed from
/// exact preimages.
pub fn shift_identity_residual(a: &CircleZeroPolynomial, f: &CoefficientSeries) -> f64 {
    let lhs = range_norm(a, &f.shift_up(1)).powi(2);
    let one = range_norm(a, &CoefficientSeries::one()).powi(2);
    let rhs = range_norm(a, f).powi(2) + one * abar_inner(a, f, &maximizer(a)).norm_sqr();
    (lhs - rhs).abs()
}

/// Largest entrywise deviation between `X_ā*` and `S_ā + 1 ⊗_ā T_ā Ba`
/// on the interior block, both assembled column by column in preimage
/// coordinates of `𝒫ₙ`.
///
/// `X_ā` is built as `g ↦ preimage(B T_ā g)` and transposed; the right side
/// uses `preimage(z T_ā g)` plus `⟨T_ā g, T_ā Ba⟩_ā · preimage(1)`. Columns
/// of degree above `n − N − 1` are boundary artifacts of the section.
pub fn adjoint_residual(a: &CircleZeroPolynomial, n: usize) -> Result<f64> {
    let big_n = a.degree();
    if n < big_n + 2 {
        return Err(Error::Precondition(format!(
            "adjoint check needs n ≥ N + 2 = {}",
            big_n + 2
        )));
    }
    let size = n + 1;
    let column = |j: usize| apply_t_abar(a, &CoefficientSeries::monomial(j));
    // X_ā matrix on 𝒫ₙ: column j = preimage(B T_ā e_j)
    let mut x = vec![vec![C64::new(0.0, 0.0); size]; size];
    for j in 0..size {
        let f = column(j);
        let col = preimage(a, &f.backward_shift()).padded(size);
        for i in 0..size {
            x[i][j] = col[i];
        }
    }
    let tba = maximizer(a);
    let one_pre = preimage(a, &CoefficientSeries::one());
    let interior = n - big_n - 1;
    let mut worst: f64 = 0.0;
    for j in 0..=interior {
        let f = column(j);
        let s_col = preimage(a, &f.shift_up(1));
        let coeff = abar_inner(a, &f, &tba);
        let rhs = &s_col + &one_pre.scale(coeff);
        for i in 0..size {
            // (X*)_{ij} = conj(X_{ji})
            let lhs = x[j][i].conj();
            worst = worst.max((lhs - rhs.coeff(i)).norm());
        }
    }
    Ok(worst)
}
