use qrtw::algebra::rational::{int, to_f64};
use qrtw::algebra::{Mode, RationalFunction};
use qrtw::calculus::{
    basis_one_form, contract, determinant, differential, divergence, jacobian, lie_bracket, partial,
    symmetry_basis, symplectic_check_2d, volume_sign, wedge, Form, VectorField,
};
use qrtw::maps::RationalMap;
use qrtw::registry::{instantiate, ExampleBundle, ParameterAssignment};

fn load(name: &str) -> ExampleBundle {
    instantiate(name, &ParameterAssignment::symbolic()).unwrap()
}

fn wedge_all(forms: &[Form]) -> Form {
    forms[1..].iter().fold(forms[0].clone(), |acc, f| wedge(&acc, f).unwrap())
}

#[test]
fn derivatives_of_displayed_functions() {
    let b = load("mcm4d");
    let phi = b.map("phi_red").unwrap();
    let ring = phi.domain().clone();
    let u = ring.var("u1").unwrap();
    let first = &phi.components()[0];
    let manual = -&first.try_div(&RationalFunction::var(&ring, u)).unwrap();
    assert!(partial(first, u).equals_exact(&manual));

    let h2 = b.scalar("h2").unwrap();
    let r = h2.ring();
    assert!(partial(h2, r.var("x1").unwrap()).equals_exact(&RationalFunction::var(r, r.var("y1").unwrap())));
}

#[test]
fn derivative_matches_central_difference() {
    let b = instantiate("mcm4d", &ParameterAssignment::symbolic().with("a", int(1)).with("k", int(2))).unwrap();
    let h = b.scalar("h").unwrap();
    let v = h.ring().var("v1").unwrap();
    let p = [int(1), int(3), int(1), int(2)];
    let exact = to_f64(&partial(h, v).eval(&p).unwrap());
    let step = 1e-5;
    let at = |dv: f64| h.eval_f64(&[1.0, 3.0 + dv, 1.0, 2.0]);
    let fd = (at(step) - at(-step)) / (2.0 * step);
    assert!(((fd - exact) / exact).abs() < 1e-6, "{fd} vs {exact}");
}

#[test]
fn swap_has_unit_determinant() {
    let b = load("mcm4d");
    let det = determinant(&jacobian(&b.map("iota_xy").unwrap())).unwrap();
    assert_eq!(det.constant_value(), Some(int(1)));
}

#[test]
fn ambient_volume_signs() {
    let b = load("mcm4d");
    let det = determinant(&jacobian(&b.map("phi").unwrap())).unwrap();
    assert_eq!(det.constant_value(), Some(int(-1)));

    let b = load("adler-yamilov");
    let det = determinant(&jacobian(&b.map("phi").unwrap())).unwrap();
    assert_eq!(det.constant_value(), Some(int(1)));

    let b = load("mcm6d");
    let phi = b.map("phi").unwrap();
    let det = determinant(&jacobian(&phi)).unwrap();
    assert!(det.equals_exact(b.scalar("jac_phi").unwrap()));
    let out = volume_sign(&phi, b.scalar("sigma").unwrap(), Mode::Exact).unwrap();
    assert_eq!(out.sign, Some(1));
}

#[test]
fn divergence_examples() {
    let b = load("mcm4d");
    let ring = b.ambient_ring().unwrap().clone();
    let one = RationalFunction::one(&ring);
    assert!(divergence(&b.field("X").unwrap(), &one).unwrap().is_zero());
    let x1 = VectorField::new(
        &ring,
        vec![
            RationalFunction::var(&ring, 0),
            RationalFunction::zero(&ring),
            RationalFunction::zero(&ring),
            RationalFunction::zero(&ring),
        ],
    )
    .unwrap();
    assert_eq!(divergence(&x1, &one).unwrap().constant_value(), Some(int(1)));

    let b = load("mcm6d");
    let sigma = b.scalar("sigma").unwrap();
    for f in ["X", "X1", "X_hat"] {
        assert!(divergence(&b.field(f).unwrap(), sigma).unwrap().is_zero(), "{f}");
    }
}

#[test]
fn four_dimensional_contraction() {
    let b = load("mcm4d");
    let ring = b.ring_of("X_uv").unwrap().clone();
    let u1 = RationalFunction::var(&ring, 0);
    let v2 = RationalFunction::var(&ring, 3);
    let omega4 = Form::volume(&ring, &(&u1 * &v2)).unwrap();
    let x = b.field("X_uv").unwrap();
    let omega3 = contract(&x, &omega4).unwrap();
    let expected = Form::from_terms(&ring, 3, vec![(vec![0, 1, 2], -&u1.inv().unwrap())]).unwrap();
    assert!(omega3.equals_exact(&expected), "{omega3}");
    assert!(contract(&x, &omega3).unwrap().is_zero());
}

#[test]
fn six_dimensional_contraction_in_r() {
    let b = load("mcm6d");
    let ring = b.ring_of("X_uv").unwrap().clone();
    let coef = b.scalar("Omega6").unwrap().clone();
    let omega6 = Form::from_terms(&ring, 6, vec![((0..6).collect(), coef)]).unwrap();
    let omega5 = contract(&b.field("X_uv").unwrap(), &omega6).unwrap();
    let omega4 = contract(&b.field("X1_uv").unwrap(), &omega5).unwrap();
    let d = |name: &str| basis_one_form(&ring, ring.var(name).unwrap());
    let dr = differential(b.scalar("r").unwrap());
    let expected = wedge_all(&[dr, d("u2"), d("v2"), d("u3")]).neg();
    assert!(omega4.equals_exact(&expected), "{omega4}");
}

#[test]
fn reduced_maps_are_symplectic() {
    let b = load("mcm4d");
    let phi = b.map("phi_red").unwrap();
    let sigma = b.scalar("omega_den").unwrap();
    assert_eq!(symplectic_check_2d(&phi, sigma, Mode::Exact).unwrap().sign, Some(1));
    let id = RationalMap::identity(phi.domain());
    assert_eq!(symplectic_check_2d(&id, sigma, Mode::Exact).unwrap().sign, Some(1));

    let b = load("mcm4d-alt-gamma");
    let sigma = b.scalar("omega_den").unwrap();
    for m in ["phi1_red", "phi2_red", "q"] {
        let out = symplectic_check_2d(&b.map(m).unwrap(), sigma, Mode::Exact).unwrap();
        assert_eq!(out.sign, Some(1), "{m}");
    }
}

#[test]
fn six_dimensional_symmetry_basis() {
    let b = load("mcm6d");
    let h: Vec<RationalFunction> = ["h1", "h2", "h3"].iter().map(|n| b.scalar(n).unwrap().clone()).collect();
    let ring = h[0].ring().clone();
    let free = ring.vars(&["x1", "x2", "x3"]).unwrap();
    let basis = symmetry_basis(&h, &free).unwrap();
    assert_eq!(basis.len(), 3);
    for (k, s) in basis.iter().enumerate() {
        for (j, &f) in free.iter().enumerate() {
            let want = if j == k { 1 } else { 0 };
            assert_eq!(s.components()[f].constant_value(), Some(int(want)));
        }
        for f in &h {
            assert!(s.apply_to(f).is_zero());
        }
    }
    for i in 0..3 {
        for j in i + 1..3 {
            assert!(lie_bracket(&basis[i], &basis[j]).is_zero(), "[{i}, {j}]");
        }
    }
}

#[test]
fn four_dimensional_basis_recovers_the_field() {
    let b = load("mcm4d");
    let h = [b.scalar("h1").unwrap().clone(), b.scalar("h2").unwrap().clone()];
    let basis = symmetry_basis(&h, &[0, 1]).unwrap();
    let x = b.field("X").unwrap();
    let ring = x.ring().clone();
    let combo = basis[0]
        .scale(&RationalFunction::var(&ring, 0))
        .add(&basis[1].scale(&-&RationalFunction::var(&ring, 1)));
    for (l, r) in combo.components().iter().zip(x.components()) {
        assert!(l.equals_exact(r));
    }
}
