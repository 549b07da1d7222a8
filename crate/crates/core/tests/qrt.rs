use qrtw::algebra::{Mode, RationalFunction, Ring};
use qrtw::expr::parse_expr;
use qrtw::maps::{check_commutativity, check_maps_equal, RationalMap};
use qrtw::qrt::{build_qrt, switch, validate_biquadratic};
use qrtw::registry::{instantiate, ExampleBundle, ParameterAssignment};
use qrtw::Error;

fn load(name: &str) -> ExampleBundle {
    instantiate(name, &ParameterAssignment::symbolic()).unwrap()
}

fn reduced_h(name: &str) -> (ExampleBundle, qrtw::qrt::BiquadraticInvariant) {
    let b = load(name);
    let r = &b.spec().reduced;
    let h = validate_biquadratic(b.scalar(r.h).unwrap(), r.u, r.v).unwrap();
    (b, h)
}

#[test]
fn validation() {
    let (_, h) = reduced_h("mcm4d");
    let u = h.u();
    assert_eq!(h.switch_polynomial(u).len(), 3);
    reduced_h("adler-yamilov");

    let r = Ring::new(&["u", "v"], &[] as &[&str]);
    let cubic = parse_expr("u^3 + v").unwrap().to_rational_function(&r).unwrap();
    assert_eq!(
        validate_biquadratic(&cubic, "u", "v").unwrap_err(),
        Error::NotBiquadratic { var: "u".into(), degree: 3 }
    );
}

#[test]
fn switch_matches_the_displayed_involution() {
    let (b, h) = reduced_h("mcm4d");
    let s = switch(&h, "u1").unwrap();
    let phi = b.map("phi_red").unwrap();
    assert!(s.components()[0].equals_exact(&phi.components()[0]));
    let v1 = RationalFunction::symbol(phi.domain(), "v1").unwrap();
    assert!(s.components()[1].equals_exact(&v1));
    assert!(qrtw::maps::check_involution(&s, Mode::Exact).unwrap().holds());
}

#[test]
fn qrt_reproduces_the_reduced_maps() {
    for name in ["mcm4d", "adler-yamilov", "yb38"] {
        let (b, h) = reduced_h(name);
        let q = build_qrt(&h).unwrap();
        let out = check_maps_equal(&q, &b.map("phi_red").unwrap(), Mode::Exact).unwrap();
        assert!(out.holds(), "{name}");
    }
    let (b, h) = reduced_h("mcm4d-alt-h2");
    let q = build_qrt(&h).unwrap();
    assert!(check_maps_equal(&q, &b.map("phi1_red").unwrap(), Mode::Exact).unwrap().holds());
}

#[test]
fn composed_switches_give_q() {
    let (b, h) = reduced_h("mcm4d-alt-gamma");
    let hz = switch(&h, "u1").unwrap();
    let vt = switch(&h, "v1").unwrap();
    let q = RationalMap::compose(&vt, &hz).unwrap();
    assert!(check_maps_equal(&q, &b.map("q").unwrap(), Mode::Exact).unwrap().holds());
    assert!(check_maps_equal(&build_qrt(&h).unwrap(), &q, Mode::Exact).unwrap().holds());

    let phi1 = b.map("phi1_red").unwrap();
    assert!(!check_maps_equal(&q, &phi1, Mode::Exact).unwrap().holds());
    assert!(check_commutativity(&q, &phi1, Mode::Exact).unwrap().holds());
}

#[test]
fn six_dimensional_reduction_is_qrt() {
    let b = load("mcm6d");
    let h = validate_biquadratic(b.scalar("h2_rs").unwrap(), "r", "s").unwrap();
    let q = build_qrt(&h).unwrap();
    assert!(check_maps_equal(&q, &b.map("phi_red").unwrap(), Mode::Exact).unwrap().holds());
}
