//! The splitting `M(ā) = aH² ∔ 𝒫_{N−1}`: Hermite interpolation at the
//! circle zeros of `a`, membership of branch-singular functions, and the
//! norm-equivalence constants of `f ↦ af`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::opnorm::{extreme_singular_values, singular_values, LinearMap};
use crate::sections::preimage;
use crate::symbols::{unit, CircleZeroPolynomial, CoefficientSeries, SingularFactorFunction, ANGLE_TOL};
use crate::C64;

/// Allowed remainder in `(f − p)/a`, relative to `‖f‖₂`, before it is
/// folded back into `p`.
pub const DIVISION_TOL: f64 = 1e-6;

/// `f = a·f_tilde + p` with `deg p ≤ N − 1`.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    #[serde(rename = "fTilde")]
    pub f_tilde: CoefficientSeries,
    pub p: CoefficientSeries,
    /// 2-norm condition number of the confluent Vandermonde system at the zeros.
    pub condition: f64,
}

/// Nodes with multiplicities and the Taylor data `f⁽ʳ⁾(ζ)/r!, r < m` at each.
pub type HermiteData = Vec<(C64, Vec<C64>)>;

fn taylor_data(a: &CircleZeroPolynomial, f: &CoefficientSeries) -> HermiteData {
    a.zeros()
        .iter()
        .map(|z| {
            let zeta = unit(z.theta);
            (zeta, f.taylor_at(zeta, z.mult as usize))
        })
        .collect()
}

/// Hermite interpolant through confluent divided differences. Groups are
/// taken in the given (angle-sorted) order and the Newton form is expanded
/// to monomials at the end.
pub fn hermite_from_data(data: &HermiteData) -> CoefficientSeries {
    let nodes: Vec<(usize, usize)> = data
        .iter()
        .enumerate()
        .flat_map(|(g, (_, t))| (0..t.len()).map(move |r| (g, r)))
        .collect();
    let n = nodes.len();
    if n == 0 {
        return CoefficientSeries::zero();
    }
    let x = |i: usize| data[nodes[i].0].0;
    // table[i] holds f[x_i, …, x_{i+level}] for the current level
    let mut table: Vec<C64> = (0..n).map(|i| data[nodes[i].0].1[0]).collect();
    let mut newton = vec![table[0]];
    for level in 1..n {
        for i in 0..n - level {
            let j = i + level;
            table[i] = if nodes[i].0 == nodes[j].0 {
                data[nodes[i].0].1[level]
            } else {
                (table[i + 1] - table[i]) / (x(j) - x(i))
            };
        }
        newton.push(table[0]);
    }
    let mut p = vec![newton[n - 1]];
    for k in (0..n - 1).rev() {
        // p ← p·(z − x_k) + newton[k]
        let mut next = vec![C64::new(0.0, 0.0); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * x(k);
        }
        next[0] += newton[k];
        p = next;
    }
    CoefficientSeries::new(p)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Confluent Vandermonde matrix: the row for `(ζ, r)` holds
/// `binom(j, r) ζ^{j−r}`, the r-th Taylor coefficient of `z^j` at `ζ`.
fn confluent_vandermonde(data: &HermiteData) -> DMatrix<C64> {
    let rows: Vec<(C64, usize)> = data
        .iter()
        .flat_map(|(zeta, t)| (0..t.len()).map(move |r| (*zeta, r)))
        .collect();
    let n = rows.len();
    DMatrix::from_fn(n, n, |i, j| {
        let (zeta, r) = rows[i];
        if j < r {
            C64::new(0.0, 0.0)
        } else {
            zeta.powi((j - r) as i32) * binomial(j, r)
        }
    })
}

fn condition_number(m: &DMatrix<C64>) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(hi), Some(lo)) if *lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}

/// The remainder of `f` mod `a` by solving `f = a·q + p` (`deg p < N`) as
/// one dense linear system in the coefficients of `p` and `q`, with its
/// condition number.
pub fn interpolant_by_solve(a: &CircleZeroPolynomial, f: &CoefficientSeries) -> Result<(CoefficientSeries, f64)> {
    let big_n = a.degree();
    if big_n == 0 {
        return Ok((CoefficientSeries::zero(), 1.0));
    }
    let poly = a.expand();
    let len = (f.len()).max(big_n);
    // columns 0..N are e_i, column N + k is z^k a
    let m = DMatrix::from_fn(len, len, |i, j| {
        if j < big_n {
            C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)
        } else if i >= j - big_n {
            poly.coeff(i - (j - big_n))
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let rhs = DVector::from_iterator(len, (0..len).map(|k| f.coeff(k)));
    let cond = condition_number(&m);
    let sol = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::LinearAlgebra("singular division system".into()))?;
    Ok((CoefficientSeries::new(sol.iter().take(big_n).copied().collect()), cond))
}

pub fn hermite_interpolant(a: &CircleZeroPolynomial, f: &CoefficientSeries) -> CoefficientSeries {
    hermite_from_data(&taylor_data(a, f))
}

pub fn decompose(a: &CircleZeroPolynomial, f: &CoefficientSeries) -> Result<Decomposition> {
    if a.degree() == 0 || f.is_zero() {
        return Ok(Decomposition {
            f_tilde: f.clone(),
            p: CoefficientSeries::zero(),
            condition: 1.0,
        });
    }
    let hermite = hermite_interpolant(a, f);
    let condition = condition_number(&confluent_vandermonde(&taylor_data(a, f)));
    let (f_tilde, rem) = (f - &hermite).div_rem(a.expand())?;
    let allowed = DIVISION_TOL * f.h2_norm();
    let remainder = rem.h2_norm();
    if remainder > allowed {
        return Err(Error::InexactDivision { remainder, allowed });
    }
    // One refinement step: the division remainder has degree < N.
    let p = &hermite + &rem;
    Ok(Decomposition {
        f_tilde,
        p,
        condition,
    })
}

/// One row of the exponent table behind a membership verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentRow {
    pub theta: f64,
    pub alpha: f64,
    /// Multiplicity of the zero of `a` at `theta` (0 if `a` does not vanish there).
    pub zero_multiplicity: u32,
    pub analytic: bool,
    /// The strict lower bound on `alpha` when the factor is not analytic.
    pub threshold: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipVerdict {
    pub member: bool,
    pub exponent_table: Vec<ExponentRow>,
    /// The interpolant `p` when `φ` is analytic on the closed disk.
    pub interpolant: Option<CoefficientSeries>,
}

/// Exponent rule for `φ ∈ M(ā)`: at a zero of `a` of multiplicity `m` the
/// factor must be analytic or have `α > m − 1/2` (so that `φ ∈ (z−ζ)^m H²`
/// locally); at every other circle point it must be analytic or have
/// `α > −1/2` (so that `φ ∈ H²`).
pub fn membership(a: &CircleZeroPolynomial, phi: &SingularFactorFunction) -> MembershipVerdict {
    let mut table: Vec<ExponentRow> = phi
        .factors()
        .iter()
        .map(|f| {
            let m = a.multiplicity_at(f.theta, ANGLE_TOL);
            let threshold = m as f64 - 0.5;
            let analytic = f.is_analytic();
            ExponentRow {
                theta: f.theta,
                alpha: f.alpha,
                zero_multiplicity: m,
                analytic,
                threshold,
                ok: analytic || f.alpha > threshold,
            }
        })
        .collect();
    for z in a.zeros() {
        if phi.exponent_at(z.theta, ANGLE_TOL) == 0.0 {
            table.push(ExponentRow {
                theta: z.theta,
                alpha: 0.0,
                zero_multiplicity: z.mult,
                analytic: true,
                threshold: z.mult as f64 - 0.5,
                ok: true,
            });
        }
    }
    table.sort_by(|x, y| x.theta.total_cmp(&y.theta));
    let member = table.iter().all(|r| r.ok);
    let interpolant = phi.is_analytic().then(|| {
        let data: HermiteData = a
            .zeros()
            .iter()
            .map(|z| {
                let zeta = unit(z.theta);
                let t = phi
                    .taylor_at(zeta, z.mult as usize)
                    .expect("analytic φ has local Taylor data");
                (zeta, t)
            })
            .collect();
        hermite_from_data(&data)
    });
    MembershipVerdict {
        member,
        exponent_table: table,
        interpolant,
    }
}

/// `g ↦ preimage(a·g)` from `𝒫ₙ` with the H² norm into `M(ā)`.
struct TwistMap<'a> {
    a: &'a CircleZeroPolynomial,
    n: usize,
}

impl LinearMap for TwistMap<'_> {
    fn nrows(&self) -> usize {
        self.n + self.a.degree() + 1
    }
    fn ncols(&self) -> usize {
        self.n + 1
    }
    fn apply(&self, x: &[C64]) -> Vec<C64> {
        let g = CoefficientSeries::new(x.to_vec());
        preimage(self.a, &(self.a.expand() * &g)).padded(self.nrows())
    }
    fn apply_adjoint(&self, _y: &[C64]) -> Vec<C64> {
        unreachable!("only materialized densely")
    }
}

/// `(σ_min, σ_max)` of `f ↦ af` from `(𝒫ₙ, ‖·‖₂)` to `(M(ā), ‖·‖_ā)`.
pub fn equivalence_bounds(a: &CircleZeroPolynomial, n: usize) -> (f64, f64) {
    extreme_singular_values(&TwistMap { a, n })
}

/// Largest `|⟨a z^k, z^j⟩_ā| / (‖a z^k‖_ā ‖z^j‖_ā)` over `k ≤ n`, `j < N`:
/// the cosine of the angle between `a𝒫ₙ` and `𝒫_{N−1}` in `M(ā)`.
pub fn splitting_cosine(a: &CircleZeroPolynomial, n: usize) -> f64 {
    let lows: Vec<CoefficientSeries> = (0..a.degree())
        .map(|j| preimage(a, &CoefficientSeries::monomial(j)))
        .collect();
    let mut worst: f64 = 0.0;
    for k in 0..=n {
        let high = preimage(a, &a.expand().shift_up(k));
        for low in &lows {
            let c = high.inner(low).norm() / (high.h2_norm() * low.h2_norm());
            worst = worst.max(c);
        }
    }
    worst
}
