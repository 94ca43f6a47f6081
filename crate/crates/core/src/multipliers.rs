//! Multiplier verdicts between range spaces, onto-multiplier results, the
//! Crofoot family `1/(1 − λ̄a)`, and a finite-section norm oracle.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::random_polynomial;
use crate::error::{Error, Result};
use crate::mate::{sup_norm_on_circle, DEFAULT_GRID};
use crate::opnorm::{sigma_max, LinearMap};
use crate::rangespace::{membership, ExponentRow};
use crate::sections::range_norm;
use crate::symbols::{
    circle_divides, CircleZeroPolynomial, CoefficientSeries, RationalSymbol,
    SingularFactorFunction, ANGLE_TOL,
};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Yes,
    No,
    Unknown,
}

/// Which characterization decided the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    /// `a1 = h·a2`: `𝔐 = {φ ∈ M(ā2) : hφ ∈ H∞}`.
    #[serde(rename = "thm1.1")]
    Divides,
    /// `a2 = k·a1`: `𝔐 = k (M(ā1) ∩ H∞)`.
    #[serde(rename = "thm1.2")]
    DividedBy,
    /// `a1 = a2`: `𝔐(ā) = M(ā) ∩ H∞`.
    #[serde(rename = "prop3.1")]
    Same,
    /// `a2 = 1`: `𝔐(ā, 1) = {φ ∈ H² : aφ ∈ H∞}`.
    #[serde(rename = "cor-M(a,1)")]
    IntoHardy,
    /// `a1 = 1`: `𝔐(1, ā) = aH∞`.
    #[serde(rename = "cor-M(1,a)")]
    FromHardy,
    /// Incomparable zero sets; only `a2 H∞ ⊂ 𝔐` is checked.
    #[serde(rename = "sufficient-a2Hinf")]
    Sufficient,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::Divides => "thm1.1",
            Rule::DividedBy => "thm1.2",
            Rule::Same => "prop3.1",
            Rule::IntoHardy => "cor-M(a,1)",
            Rule::FromHardy => "cor-M(1,a)",
            Rule::Sufficient => "sufficient-a2Hinf",
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Witnesses {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<CircleZeroPolynomial>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<CircleZeroPolynomial>,
    /// `φ/k` in the reverse case, or `φ/a2` for the sufficient test.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<SingularFactorFunction>,
    pub exponent_table: Vec<ExponentRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interpolant: Option<CoefficientSeries>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplierVerdict {
    pub decision: Decision,
    pub rule: Rule,
    pub witnesses: Witnesses,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<String>,
}

fn failed_rows(rows: &[ExponentRow]) -> String {
    rows.iter()
        .filter(|r| !r.ok)
        .map(|r| {
            format!(
                "exponent {} at θ = {} needs > {} (zero of multiplicity {})",
                r.alpha, r.theta, r.threshold, r.zero_multiplicity
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn unbounded_factors(phi: &SingularFactorFunction) -> String {
    phi.factors()
        .iter()
        .filter(|f| f.alpha < 0.0)
        .map(|f| format!("exponent {} at θ = {}", f.alpha, f.theta))
        .collect::<Vec<_>>()
        .join("; ")
}

fn verdict(
    ok_member: bool,
    ok_bounded: bool,
    rule: Rule,
    witnesses: Witnesses,
    bounded_what: &str,
    bounded_fn: &SingularFactorFunction,
) -> MultiplierVerdict {
    let obstruction = match (ok_member, ok_bounded) {
        (true, true) => None,
        (false, _) => Some(format!(
            "membership fails: {}",
            failed_rows(&witnesses.exponent_table)
        )),
        (true, false) => Some(format!(
            "{bounded_what} is unbounded: {}",
            unbounded_factors(bounded_fn)
        )),
    };
    MultiplierVerdict {
        decision: if ok_member && ok_bounded {
            Decision::Yes
        } else {
            Decision::No
        },
        rule,
        witnesses,
        obstruction,
    }
}

/// Decide `φ ∈ 𝔐(ā1, ā2)`.
pub fn mult_check(
    a1: &CircleZeroPolynomial,
    a2: &CircleZeroPolynomial,
    phi: &SingularFactorFunction,
) -> MultiplierVerdict {
    if a1.approx_eq(a2, ANGLE_TOL) {
        let m = membership(a1, phi);
        let w = Witnesses {
            exponent_table: m.exponent_table,
            interpolant: m.interpolant,
            ..Default::default()
        };
        return verdict(m.member, phi.hinf_membership(), Rule::Same, w, "φ", phi);
    }
    if let Some(h) = circle_divides(a1, a2, ANGLE_TOL) {
        let m = membership(a2, phi);
        let h_phi = phi.mul_class_a(&h);
        let rule = if a2.degree() == 0 {
            Rule::IntoHardy
        } else {
            Rule::Divides
        };
        let ok = h_phi.hinf_membership();
        let w = Witnesses {
            h: Some(h),
            exponent_table: m.exponent_table,
            interpolant: m.interpolant,
            ..Default::default()
        };
        return verdict(m.member, ok, rule, w, "hφ", &h_phi);
    }
    if let Some(k) = circle_divides(a2, a1, ANGLE_TOL) {
        let psi = phi.div_class_a(&k);
        let m = membership(a1, &psi);
        let rule = if a1.degree() == 0 {
            Rule::FromHardy
        } else {
            Rule::DividedBy
        };
        let ok = psi.hinf_membership();
        let w = Witnesses {
            k: Some(k.clone()),
            psi: Some(psi.clone()),
            exponent_table: m.exponent_table,
            interpolant: m.interpolant,
            ..Default::default()
        };
        let v = verdict(m.member, ok, rule, w, "φ/k", &psi);
        return v;
    }
    let psi = phi.div_class_a(a2);
    let yes = psi.hinf_membership();
    MultiplierVerdict {
        decision: if yes { Decision::Yes } else { Decision::Unknown },
        rule: Rule::Sufficient,
        witnesses: Witnesses {
            psi: Some(psi),
            ..Default::default()
        },
        obstruction: None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OntoDecision {
    Exist,
    None,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct OntoVerdict {
    pub decision: OntoDecision,
    pub certificate: String,
    /// For `a1 = a2`: the family `1/(1 − λ̄a)` is valid for `|λ| < lambda_bound`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_bound: Option<f64>,
}

fn pole_certificate(q: &CircleZeroPolynomial, which: &str) -> String {
    let z = q.zeros()[0];
    format!(
        "{which} is a nonconstant class symbol vanishing to order {} at θ = {}; an onto \
         multiplier would force 1/{which} ∈ H², but 1/{which} has a pole on the circle there",
        z.mult, z.theta
    )
}

pub fn onto_check(a1: &CircleZeroPolynomial, a2: &CircleZeroPolynomial) -> Result<OntoVerdict> {
    if a1.approx_eq(a2, ANGLE_TOL) {
        let sup = sup_norm_on_circle(
            &RationalSymbol::polynomial(a1.expand().clone())?,
            DEFAULT_GRID.max((4 * a1.degree()).next_power_of_two()),
        )?;
        return Ok(OntoVerdict {
            decision: OntoDecision::Exist,
            certificate: "1/(1 − λ̄a) maps M(ā) onto itself for |λ| < 1/‖a‖∞".into(),
            lambda_bound: Some(1.0 / sup),
        });
    }
    for (num, den, name) in [(a1, a2, "h = a1/a2"), (a2, a1, "k = a2/a1")] {
        if let Some(q) = circle_divides(num, den, ANGLE_TOL) {
            return Ok(OntoVerdict {
                decision: OntoDecision::None,
                certificate: pole_certificate(&q, name),
                lambda_bound: None,
            });
        }
    }
    Ok(OntoVerdict {
        decision: OntoDecision::Unknown,
        certificate: "zero sets are incomparable".into(),
        lambda_bound: None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CrofootReport {
    pub lambda: C64,
    #[serde(rename = "supNorm")]
    pub sup_norm: f64,
    /// Terms kept in `Σ (λ̄a)^k f`.
    pub terms: usize,
    /// Largest relative truncation bound over the trials.
    #[serde(rename = "tailBound")]
    pub tail_bound: f64,
    /// `‖(1 − λ̄a) f‖_ā / ‖f‖_ā` over the trials.
    #[serde(rename = "forwardMax")]
    pub forward_max: f64,
    #[serde(rename = "forwardMin")]
    pub forward_min: f64,
    /// `‖f/(1 − λ̄a)‖_ā / ‖f‖_ā` over the trials.
    #[serde(rename = "inverseMax")]
    pub inverse_max: f64,
    #[serde(rename = "inverseMin")]
    pub inverse_min: f64,
}

/// Relative truncation target for the geometric expansion.
const CROFOOT_TAIL: f64 = 1e-13;

/// Checks both directions of `1/(1 − λ̄a) M(ā) = M(ā)` on random polynomials.
///
/// The inverse multiplier is expanded as `Σ_{k≤K} (λ̄a)^k f`. Writing the
/// tail as `a·(…)` and using `‖a h‖_ā = ‖h‖₂` bounds its range norm by
/// `|λ|^{K+1} ‖a‖∞^K ‖f‖₂ / (1 − |λ|‖a‖∞)`.
pub fn crofoot_verify(
    a: &CircleZeroPolynomial,
    lambda: C64,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<CrofootReport> {
    if n == 0 || trials == 0 {
        return Err(Error::Precondition("n and trials must be at least 1".into()));
    }
    let sup = sup_norm_on_circle(
        &RationalSymbol::polynomial(a.expand().clone())?,
        DEFAULT_GRID.max((4 * a.degree()).next_power_of_two()),
    )?;
    let rho = lambda.norm() * sup;
    if rho >= 1.0 {
        return Err(Error::Precondition(format!(
            "|λ| = {} must be below 1/‖a‖∞ = {}",
            lambda.norm(),
            1.0 / sup
        )));
    }
    let la = a.expand().scale(lambda.conj());
    let one_minus = &CoefficientSeries::one() - &la;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CrofootReport {
        lambda,
        sup_norm: sup,
        terms: 0,
        tail_bound: 0.0,
        forward_max: f64::NEG_INFINITY,
        forward_min: f64::INFINITY,
        inverse_max: f64::NEG_INFINITY,
        inverse_min: f64::INFINITY,
    };
    for _ in 0..trials {
        let f = random_polynomial(&mut rng, n);
        let nf = range_norm(a, &f);
        let fwd = range_norm(a, &(&one_minus * &f)) / nf;

        let l2 = f.h2_norm();
        let mut k = 0usize;
        let tail = |k: usize| {
            if lambda.norm() == 0.0 {
                0.0
            } else {
                lambda.norm().powi(k as i32 + 1) * sup.powi(k as i32) * l2 / (1.0 - rho) / nf
            }
        };
        while tail(k) > CROFOOT_TAIL {
            k += 1;
        }
        let mut term = f.clone();
        let mut sum = f.clone();
        for _ in 0..k {
            term = &term * &la;
            sum = &sum + &term;
        }
        let inv = range_norm(a, &sum) / nf;

        report.terms = report.terms.max(k + 1);
        report.tail_bound = report.tail_bound.max(tail(k));
        report.forward_max = report.forward_max.max(fwd);
        report.forward_min = report.forward_min.min(fwd);
        report.inverse_max = report.inverse_max.max(inv);
        report.inverse_min = report.inverse_min.min(inv);
    }
    Ok(report)
}

/// `g ↦ preimage_{a2}(φ · T_{ā1} g)` on `𝒫ₙ`, the multiplication operator
/// `M(ā1) → M(ā2)` in preimage coordinates.
pub struct MultiplierSection {
    n: usize,
    a1: Vec<C64>,
    a2: Vec<C64>,
    phi: Vec<C64>,
}

impl MultiplierSection {
    pub fn new(
        a1: &CircleZeroPolynomial,
        a2: &CircleZeroPolynomial,
        phi: &CoefficientSeries,
        n: usize,
    ) -> Self {
        Self {
            n,
            a1: a1.expand().coeffs().to_vec(),
            a2: a2.expand().coeffs().to_vec(),
            phi: if phi.is_zero() {
                vec![C64::new(0.0, 0.0)]
            } else {
                phi.coeffs().to_vec()
            },
        }
    }

    fn out_len(&self) -> usize {
        self.n + self.phi.len()
    }
}

impl LinearMap for MultiplierSection {
    fn nrows(&self) -> usize {
        self.out_len()
    }
    fn ncols(&self) -> usize {
        self.n + 1
    }
    fn apply(&self, g: &[C64]) -> Vec<C64> {
        let m = self.n + 1;
        // T_{ā1} g
        let f: Vec<C64> = (0..m)
            .map(|j| {
                self.a1
                    .iter()
                    .enumerate()
                    .take(m - j)
                    .map(|(d, c)| c.conj() * g[j + d])
                    .sum()
            })
            .collect();
        // φ f
        let mut h = vec![C64::new(0.0, 0.0); self.out_len()];
        for (i, p) in self.phi.iter().enumerate() {
            for (j, v) in f.iter().enumerate() {
                h[i + j] += p * v;
            }
        }
        // preimage under T_{ā2}
        let len = h.len();
        let d0 = self.a2[0].conj();
        let mut out = vec![C64::new(0.0, 0.0); len];
        for j in (0..len).rev() {
            let mut s = h[j];
            for (d, c) in self.a2.iter().enumerate().skip(1).take(len - 1 - j) {
                s -= c.conj() * out[j + d];
            }
            out[j] = s / d0;
        }
        out
    }
    fn apply_adjoint(&self, y: &[C64]) -> Vec<C64> {
        let len = self.out_len();
        // U2^{-*}: forward substitution with the lower-triangular adjoint
        let mut z = vec![C64::new(0.0, 0.0); len];
        for k in 0..len {
            let mut s = y[k];
            for (d, c) in self.a2.iter().enumerate().skip(1).take(k) {
                s -= c * z[k - d];
            }
            z[k] = s / self.a2[0];
        }
        // M_φ*: correlation with φ
        let m = self.n + 1;
        let w: Vec<C64> = (0..m)
            .map(|j| {
                self.phi
                    .iter()
                    .enumerate()
                    .map(|(i, p)| p.conj() * z[i + j])
                    .sum()
            })
            .collect();
        // U1*: multiplication by a1, truncated to degree n
        (0..m)
            .map(|k| {
                self.a1
                    .iter()
                    .enumerate()
                    .take(k + 1)
                    .map(|(d, c)| c * w[k - d])
                    .sum()
            })
            .collect()
    }
}

/// `σ_max` of [`MultiplierSection`]: a lower bound for the multiplier norm,
/// nondecreasing in `n`.
pub fn numeric_mult_norm(
    a1: &CircleZeroPolynomial,
    a2: &CircleZeroPolynomial,
    phi: &CoefficientSeries,
    n: usize,
) -> f64 {
    sigma_max(&MultiplierSection::new(a1, a2, phi, n))
}

/// As [`numeric_mult_norm`] with `φ` replaced by its Taylor polynomial of
/// degree `n`; used for branch-singular candidates.
pub fn numeric_mult_norm_singular(
    a1: &CircleZeroPolynomial,
    a2: &CircleZeroPolynomial,
    phi: &SingularFactorFunction,
    n: usize,
) -> f64 {
    numeric_mult_norm(a1, a2, &phi.taylor_coefficients(n), n)
}

/// Ratio threshold between consecutive levels separating bounded from
/// growing section norms. Heuristic evidence only.
pub const GROWTH_THRESHOLD: f64 = 1.05;

pub const GROWTH_LEVELS: [usize; 3] = [64, 256, 1024];

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub levels: Vec<(usize, f64)>,
    #[serde(rename = "maxRatio")]
    pub max_ratio: f64,
    pub bounded: bool,
}

pub fn growth_report(norm_at: impl Fn(usize) -> f64, levels: &[usize]) -> GrowthReport {
    let levels: Vec<(usize, f64)> = levels.iter().map(|&n| (n, norm_at(n))).collect();
    let max_ratio = levels
        .windows(2)
        .map(|w| w[1].1 / w[0].1)
        .fold(1.0, f64::max);
    GrowthReport {
        levels,
        max_ratio,
        bounded: max_ratio < GROWTH_THRESHOLD,
    }
}
