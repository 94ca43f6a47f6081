use std::f64::consts::TAU;

use proptest::prelude::*;

use coanalytic_core::decay::sample_class_f;
use coanalytic_core::mate::{mate_stability, pythagorean_mate, winding_number};
use coanalytic_core::multipliers::{mult_check, numeric_mult_norm, onto_check, Decision, OntoDecision, Rule};
use coanalytic_core::opnorm::LinearMap;
use coanalytic_core::rangespace::{decompose, equivalence_bounds, interpolant_by_solve, membership};
use coanalytic_core::sections::{apply_t_abar, preimage, range_norm};
use coanalytic_core::shiftop::{maximizer_residual, ShiftSection};
use coanalytic_core::symbols::{circle_divides, reduce, ANGLE_TOL};
use coanalytic_core::{
    CircleZeroPolynomial, CoefficientSeries, RationalSymbol, SingularFactorFunction, C64,
};

fn class_a(max_zeros: usize, max_mult: u32) -> impl Strategy<Value = CircleZeroPolynomial> {
    prop::collection::vec((0.0..TAU, 1..=max_mult), 0..=max_zeros)
        .prop_map(|z| CircleZeroPolynomial::from_pairs(&z).unwrap())
}

fn nonconstant_class_a() -> impl Strategy<Value = CircleZeroPolynomial> {
    prop::collection::vec((0.0..TAU, 1..=2u32), 1..=3)
        .prop_map(|z| CircleZeroPolynomial::from_pairs(&z).unwrap())
}

fn polynomial(max_degree: usize) -> impl Strategy<Value = CoefficientSeries> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..=max_degree + 1).prop_map(|c| {
        let mut c: Vec<C64> = c.into_iter().map(|(re, im)| C64::new(re, im)).collect();
        let last = c.len() - 1;
        if c[last].norm() < 1e-3 {
            c[last] = C64::new(1.0, 0.0);
        }
        CoefficientSeries::new(c)
    })
}

fn factors(alpha: std::ops::Range<f64>) -> impl Strategy<Value = SingularFactorFunction> {
    prop::collection::vec((0.0..TAU, alpha), 0..=3)
        .prop_map(|f| SingularFactorFunction::from_factors(&f).unwrap())
}

fn sup(p: &CoefficientSeries) -> f64 {
    p.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn unit_constant_term(a in class_a(6, 3)) {
        prop_assert!((a.value_at_zero().norm() - 1.0).abs() <= 1e-15);
        prop_assert!((a.expand().coeff(0).norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn preimage_is_exact(a in class_a(4, 2), f in polynomial(12)) {
        let back = apply_t_abar(&a, &preimage(&a, &f));
        prop_assert!(back.max_abs_diff(&f) <= 1e-12 * sup(&f) * (1.0 + sup(&preimage(&a, &f))));
    }

    #[test]
    fn range_norm_is_isometric(a in class_a(4, 2), g in polynomial(12)) {
        let f = apply_t_abar(&a, &g);
        prop_assert!((range_norm(&a, &f) - g.h2_norm()).abs() <= 1e-12 * g.h2_norm());
    }

    #[test]
    fn twist_identity(a in class_a(4, 2), f in polynomial(10)) {
        let lhs = preimage(&a, &(a.expand() * &f));
        let rhs = f.shift_up(a.degree()).scale(a.value_at_zero());
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * sup(&f) * a.expand().wiener_norm());
        let af = range_norm(&a, &(a.expand() * &f));
        prop_assert!((af - f.h2_norm()).abs() <= 1e-12 * f.h2_norm() * a.expand().wiener_norm());
    }

    #[test]
    fn backward_shift_contracts(a in class_a(4, 2), f in polynomial(12)) {
        let bf = f.backward_shift();
        let g = preimage(&a, &f);
        prop_assert!(preimage(&a, &bf).max_abs_diff(&g.backward_shift()) <= 1e-12 * (1.0 + sup(&g)));
        prop_assert!(range_norm(&a, &bf) <= range_norm(&a, &f) * (1.0 + 1e-12));
    }

    #[test]
    fn mutual_division_means_equal(a in class_a(3, 2), h in class_a(2, 2), flip in any::<bool>()) {
        let a1 = a.mul(&h);
        let (x, y) = if flip { (&a1, &a) } else { (&a, &a1) };
        if let (Some(_), Some(_)) = (circle_divides(x, y, ANGLE_TOL), circle_divides(y, x, ANGLE_TOL)) {
            prop_assert!(x.approx_eq(y, ANGLE_TOL));
        }
        let q = circle_divides(&a1, &a, ANGLE_TOL).expect("a divides a·h");
        prop_assert!(q.approx_eq(&h, ANGLE_TOL));
    }

    #[test]
    fn bounded_implies_square_integrable(phi in factors(-1.0..2.0)) {
        prop_assert!(!phi.hinf_membership() || phi.h2_membership());
    }

    #[test]
    fn decomposition_is_idempotent(a in nonconstant_class_a(), f in polynomial(16)) {
        let d = decompose(&a, &f).unwrap();
        let again = decompose(&a, &d.p).unwrap();
        prop_assert!(again.p.max_abs_diff(&d.p) <= 1e-10 * (1.0 + sup(&d.p)));
        prop_assert!(sup(&again.f_tilde) <= 1e-10 * (1.0 + sup(&d.p)));
        let rebuilt = &(a.expand() * &d.f_tilde) + &d.p;
        let twice = decompose(&a, &rebuilt).unwrap();
        prop_assert!(twice.f_tilde.max_abs_diff(&d.f_tilde) <= 1e-10 * (1.0 + sup(&d.f_tilde)));
        let (p2, _) = interpolant_by_solve(&a, &f).unwrap();
        prop_assert!(p2.max_abs_diff(&d.p) <= 1e-10 * sup(&f));
    }

    #[test]
    fn polynomials_are_members(a in class_a(4, 3), p in polynomial(6)) {
        let phi = SingularFactorFunction::from_polynomial(&p).unwrap();
        prop_assert!(membership(&a, &phi).member);
    }

    #[test]
    fn multiples_of_the_symbol_are_members(a in class_a(3, 3), psi in factors(-0.49..1.5)) {
        prop_assume!(psi.h2_membership());
        prop_assert!(membership(&a, &psi.mul_class_a(&a)).member);
    }

    #[test]
    fn membership_requires_square_integrability(a in class_a(3, 2), phi in factors(-1.0..2.0)) {
        prop_assert!(!membership(&a, &phi).member || phi.h2_membership());
    }

    #[test]
    fn into_hardy_rule(a in nonconstant_class_a(), phi in factors(-1.5..1.5)) {
        let v = mult_check(&a, &CircleZeroPolynomial::one(), &phi);
        prop_assert_eq!(v.rule, Rule::IntoHardy);
        let expected = phi.h2_membership() && phi.mul_class_a(&a).hinf_membership();
        prop_assert_eq!(v.decision == Decision::Yes, expected);
    }

    #[test]
    fn reverse_case_witnesses(a1 in class_a(2, 2), k in nonconstant_class_a(), phi in factors(-0.5..2.5)) {
        let a2 = a1.mul(&k);
        let phi = phi.mul_class_a(&k);
        let v = mult_check(&a1, &a2, &phi);
        prop_assert!(matches!(v.rule, Rule::DividedBy | Rule::FromHardy));
        if v.decision == Decision::Yes {
            let psi = v.witnesses.psi.as_ref().expect("ψ witness");
            prop_assert!(psi.hinf_membership());
            prop_assert!(membership(&a1, psi).member);
        }
    }

    #[test]
    fn strict_divisors_have_no_onto_multipliers(a in class_a(3, 2), h in nonconstant_class_a(), flip in any::<bool>()) {
        let big = a.mul(&h);
        let v = if flip { onto_check(&big, &a) } else { onto_check(&a, &big) }.unwrap();
        prop_assert_eq!(v.decision, OntoDecision::None);
    }

    #[test]
    fn shift_commutes_with_polynomial_multipliers(a in class_a(3, 2), phi in polynomial(4), f in polynomial(8)) {
        let pf = &phi * &f;
        let g = preimage(&a, &pf);
        let n = g.len() - 1;
        let shifted = CoefficientSeries::new(ShiftSection::new(&a, n).apply(&g.padded(n + 1)));
        let direct = preimage(&a, &(&phi * &f.shift_up(1)));
        prop_assert!(shifted.max_abs_diff(&direct) <= 1e-11 * (1.0 + sup(&direct)));
    }

    #[test]
    fn reduction_ignores_positive_scaling(a in class_a(3, 2), s in 0.1..10.0f64) {
        let r = RationalSymbol::polynomial(a.expand().clone()).unwrap();
        let scaled = reduce(&r.scale(C64::new(s, 0.0)), 1e-8).unwrap();
        prop_assert!(scaled.approx_eq(&reduce(&r, 1e-8).unwrap(), 1e-6));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn class_isometry(a in class_a(4, 2), n in 0usize..=16) {
        let (lo, hi) = equivalence_bounds(&a, n);
        prop_assert!((lo - 1.0).abs() <= 1e-10 && (hi - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn maximizer_attains_the_closed_form(a in nonconstant_class_a()) {
        prop_assert!(maximizer_residual(&a) <= 1e-10);
    }

    #[test]
    fn faster_decay_never_increases_section_norms(a in nonconstant_class_a(), c in 0.3..2.0f64, dc in 0.1..1.0f64, n in 8usize..=48) {
        let slow = numeric_mult_norm(&a, &a, &sample_class_f(c, 64).unwrap(), n);
        let fast = numeric_mult_norm(&a, &a, &sample_class_f(c + dc, 64).unwrap(), n);
        prop_assert!(fast <= slow * (1.0 + 1e-12), "c = {c}: {fast} > {slow}");
    }

    #[test]
    fn mates_are_stable_and_outer(
        zeros in prop::collection::vec((0.0..TAU, 1.2..3.0f64), 0..=2),
        poles in prop::collection::vec((0.0..TAU, 1.5..3.0f64), 0..=2),
    ) {
        let build = |roots: &[(f64, f64)]| {
            roots.iter().fold(CoefficientSeries::one(), |acc, &(t, r)| {
                &acc * &CoefficientSeries::new(vec![-C64::from_polar(r, t), C64::new(1.0, 0.0)])
            })
        };
        let a = RationalSymbol::new(build(&zeros), build(&poles)).unwrap();
        let (a, _) = coanalytic_core::mate::normalize_nonextreme(&a, 1024).unwrap();
        let m = pythagorean_mate(&a, 1024).unwrap();
        prop_assert!(m.b0.re > 0.0 && m.b0.im.abs() <= 1e-12);
        prop_assert!(m.residual <= 1e-8);
        prop_assert!(mate_stability(&a, 1024).unwrap() <= 1e-6);
        prop_assert_eq!(winding_number(&m.b, 1.0 - 1e-3, 4096), 0);
    }
}
