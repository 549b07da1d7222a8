use proptest::prelude::*;
use qrtw::algebra::identity::rf_equal;
use qrtw::algebra::linsolve::solve_linear;
use qrtw::algebra::rational::{format_rational, frac, int, parse_rational};
use qrtw::algebra::{Mode, Rational, RationalFunction, Ring, Verdict};
use qrtw::calculus::symmetry_basis;
use qrtw::expr::parse_expr;
use qrtw::registry::{instantiate, ParameterAssignment};
use qrtw::Error;

fn ring() -> Ring {
    Ring::new(&["x", "y"], &["a"])
}

fn rf(r: &Ring, s: &str) -> RationalFunction {
    parse_expr(s).unwrap().to_rational_function(r).unwrap()
}

fn expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (-4i64..=4).prop_map(|n| format!("({n})")),
        Just("x".to_string()),
        Just("y".to_string()),
        Just("a".to_string()),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            (inner.clone(), 1u32..=2).prop_map(|(a, n)| format!("({a})^{n}")),
        ]
    })
}

/// Polynomial or quotient of polynomials, skipping zero denominators.
fn function() -> impl Strategy<Value = RationalFunction> {
    (expr(), expr(), any::<bool>()).prop_filter_map("zero denominator", |(n, d, quotient)| {
        let r = ring();
        let num = rf(&r, &n);
        if !quotient {
            return Some(num);
        }
        num.try_div(&rf(&r, &d)).ok()
    })
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec((-20i64..=20, 1i64..=7).prop_map(|(p, q)| frac(p, q)), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(f in function(), g in function(), h in function()) {
        prop_assert!((&(&f + &g) - &g).equals_exact(&f));
        prop_assert!((&f * &g).equals_exact(&(&g * &f)));
        let lhs = &f * &(&g + &h);
        let rhs = &(&f * &g) + &(&f * &h);
        prop_assert!(lhs.equals_exact(&rhs));
        prop_assert!((&f - &f).is_zero());
        if !g.is_zero() {
            prop_assert!((&f.try_div(&g).unwrap() * &g).equals_exact(&f));
        }
    }

    #[test]
    fn normalization_is_idempotent(f in function()) {
        let n = f.normalize();
        prop_assert_eq!(n.to_string(), n.normalize().to_string());
        prop_assert!(n.equals_exact(&f));
    }

    #[test]
    fn display_parses_back(f in function()) {
        let r = ring();
        prop_assert!(rf(&r, &f.to_string()).equals_exact(&f));
    }

    #[test]
    fn evaluation_is_a_homomorphism(f in function(), g in function(), p in point()) {
        if let (Ok(fv), Ok(gv)) = (f.eval(&p), g.eval(&p)) {
            prop_assert_eq!((&f * &g).eval(&p).unwrap(), &fv * &gv);
            prop_assert_eq!((&f + &g).eval(&p).unwrap(), &fv + &gv);
        }
    }

    #[test]
    fn product_rule(f in function(), g in function()) {
        let lhs = (&f * &g).derivative(0);
        let rhs = &(&f.derivative(0) * &g) + &(&f * &g.derivative(0));
        prop_assert!(lhs.equals_exact(&rhs));
    }

    #[test]
    fn composing_with_the_identity_is_trivial(f in function()) {
        let r = ring();
        let args: Vec<_> = (0..r.len()).map(|i| RationalFunction::var(&r, i)).collect();
        prop_assert!(f.compose(&args).unwrap().equals_exact(&f));
    }

    #[test]
    fn randomized_agrees_with_exact(f in function(), g in function(), seed in any::<u64>()) {
        let exact = f.equals_exact(&g);
        let verdict = rf_equal(&f, &g, Mode::randomized(20, seed)).unwrap();
        prop_assert_eq!(verdict.is_equal(), exact);
        if let Verdict::Unequal(w) = verdict {
            prop_assert_ne!(&w.lhs, &w.rhs);
            let p: Vec<Rational> = w.point.iter().map(|(_, v)| v.clone()).collect();
            prop_assert_eq!(f.eval(&p).unwrap(), w.lhs);
            prop_assert_eq!(g.eval(&p).unwrap(), w.rhs);
        }
    }

    #[test]
    fn rationals_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let r = frac(p, q);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
}

fn mcm4d(a: i64) -> qrtw::registry::ExampleBundle {
    instantiate("mcm4d", &ParameterAssignment::symbolic().with("a", int(a))).unwrap()
}

#[test]
fn invariants_at_the_sample_point() {
    let b = mcm4d(1);
    let p = [int(1), int(2), int(3), frac(1, 2), int(1)];
    assert_eq!(b.scalar("h1").unwrap().eval(&p).unwrap(), frac(-11, 2));
    assert_eq!(b.scalar("h2").unwrap().eval(&p).unwrap(), int(2));
}

#[test]
fn vanishing_denominator_is_an_error() {
    let r = ring();
    let f = rf(&r, "1/(1 - x*y)");
    match f.eval(&[int(2), frac(1, 2), int(0)]) {
        Err(Error::DenominatorVanishes { locus }) => assert!(locus.contains('x')),
        other => panic!("{other:?}"),
    }
}

#[test]
fn gamma_relations_hold() {
    for name in ["mcm4d", "mcm4d-alt-gamma"] {
        let b = instantiate(name, &ParameterAssignment::symbolic()).unwrap();
        let (l, r) = b.pair("gamma_rel").unwrap();
        for mode in [Mode::Exact, Mode::randomized(50, 3)] {
            assert!(rf_equal(&l, &r, mode).unwrap().is_equal(), "{name}");
        }
    }
}

#[test]
fn off_by_one_is_caught_with_a_witness() {
    let r = ring();
    let f = rf(&r, "x^2*y/(a + y)");
    let g = &f + &RationalFunction::one(&r);
    for mode in [Mode::Exact, Mode::randomized(5, 0)] {
        let w = rf_equal(&f, &g, mode).unwrap().witness().cloned().unwrap();
        assert_eq!(&w.rhs - &w.lhs, int(1));
    }
}

#[test]
fn identity_system_returns_its_right_hand_side() {
    let r = ring();
    let one = RationalFunction::one(&r);
    let zero = RationalFunction::zero(&r);
    let m = vec![vec![one.clone(), zero.clone()], vec![zero, one]];
    let rhs = vec![rf(&r, "x/y"), rf(&r, "a - 1")];
    let sol = solve_linear(&m, &rhs).unwrap();
    assert!(sol[0].equals_exact(&rhs[0]) && sol[1].equals_exact(&rhs[1]));
}

#[test]
fn coordinate_invariants_give_the_coordinate_basis() {
    let r = Ring::new(&["x1", "x2", "y1", "y2"], &[] as &[&str]);
    let h = [rf(&r, "y1"), rf(&r, "y2")];
    let basis = symmetry_basis(&h, &[0, 1]).unwrap();
    let shown: Vec<String> = basis.iter().map(|f| f.to_string()).collect();
    assert_eq!(shown, ["(1, 0, 0, 0)", "(0, 1, 0, 0)"]);
}

// Values from Cramer's rule on hand-written gradients of h1, h2 at
// (x1, x2, y1, y2) = (1, 2, 3, 1/3), a = 1.
#[test]
fn solved_symmetry_slots_match_elimination() {
    let b = mcm4d(1);
    let h = [b.scalar("h1").unwrap().clone(), b.scalar("h2").unwrap().clone()];
    let basis = symmetry_basis(&h, &[0, 1]).unwrap();
    let p = [int(1), int(2), int(3), frac(1, 3), int(1)];
    let got: Vec<Vec<Rational>> = basis.iter().map(|f| f.eval(&p).unwrap()).collect();
    assert_eq!(got[0], [int(1), int(0), int(-9), int(-3)]);
    assert_eq!(got[1], [int(0), int(1), int(-3), frac(-5, 3)]);
}

// At (1, 2, 3, 1/2) the determinant (1 - x1x2)(x1y1 + x2y2) + 2a·x1x2 of the
// solved block vanishes.
#[test]
fn solved_symmetry_slots_are_singular_at_the_degenerate_point() {
    let b = mcm4d(1);
    let h = [b.scalar("h1").unwrap().clone(), b.scalar("h2").unwrap().clone()];
    let basis = symmetry_basis(&h, &[0, 1]).unwrap();
    let p = [int(1), int(2), int(3), frac(1, 2), int(1)];
    assert!(matches!(basis[0].eval(&p), Err(Error::DenominatorVanishes { .. })));
}
