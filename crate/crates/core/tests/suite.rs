use qrtw::algebra::Mode;
use qrtw::registry::{example_spec, list_examples, script, ExampleBundle, ParameterAssignment};
use qrtw::verify::{run_bundle, run_suite, ModePolicy, Status};
use qrtw::Error;

fn symbolic() -> ParameterAssignment {
    ParameterAssignment::symbolic()
}

#[test]
fn catalogue_lists_six_examples() {
    let names: Vec<&str> = list_examples().iter().map(|e| e.name).collect();
    assert_eq!(
        names,
        ["mcm4d", "mcm4d-alt-gamma", "mcm4d-alt-h2", "adler-yamilov", "yb38", "mcm6d"]
    );
    assert!(matches!(run_suite("mcm5d", &symbolic(), &ModePolicy::default()), Err(Error::UnknownExample(_))));
}

#[test]
fn exact_suite_for_the_first_example() {
    let r = run_suite("mcm4d", &symbolic(), &ModePolicy::exact()).unwrap();
    assert!(r.passed(), "{}", r.to_json());
    assert!(r.checks.len() >= 15);
    assert!(r.checks.iter().all(|c| c.mode == Mode::Exact && c.bound.is_none()));
    let ids: Vec<&str> = r.checks.iter().map(|c| c.check_id.as_str()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert_eq!(r.params["a"], "symbolic");
}

#[test]
fn every_four_dimensional_suite_passes() {
    for name in ["mcm4d-alt-gamma", "mcm4d-alt-h2", "adler-yamilov", "yb38"] {
        let r = run_suite(name, &symbolic(), &ModePolicy::default()).unwrap();
        assert!(r.passed(), "{name}: {:?}", r.failures().map(|c| &c.check_id).collect::<Vec<_>>());
    }
}

#[test]
fn six_dimensional_suite_reports_bounds() {
    let r = run_suite("mcm6d", &symbolic(), &ModePolicy::default()).unwrap();
    assert!(r.passed(), "{:?}", r.failures().map(|c| &c.check_id).collect::<Vec<_>>());
    let randomized: Vec<_> = r.checks.iter().filter(|c| c.bound.is_some()).collect();
    assert!(!randomized.is_empty());
    for c in randomized {
        assert!(matches!(c.mode, Mode::Randomized { trials: 200, .. }));
        assert!(c.bound.as_ref().unwrap().total_bound_log10 < -6.0, "{}", c.check_id);
    }
}

#[test]
fn perturbed_component_fails_with_a_witness() {
    let s = script("mcm4d").unwrap();
    let c = s
        .components()
        .into_iter()
        .find(|&c| s.component_name(c) == "phi[0]")
        .expect("phi has a first component");
    let b = ExampleBundle::from_script(example_spec("mcm4d").unwrap(), &s.perturbed(c), &symbolic()).unwrap();
    let r = run_bundle(&b, &ModePolicy::default());
    assert!(!r.passed());
    let failed = r.failures().find(|c| c.witness.is_some()).expect("a failure carries a witness");
    let w = failed.witness.as_ref().unwrap();
    assert_ne!(w["lhs"], w["rhs"]);
    assert_eq!(w["point"].as_object().unwrap().len(), 5);
}

#[test]
fn reports_are_deterministic_per_seed() {
    let policy = ModePolicy::randomized(20, 11);
    let a = run_suite("mcm4d-alt-h2", &symbolic(), &policy).unwrap().to_json();
    let b = run_suite("mcm4d-alt-h2", &symbolic(), &policy).unwrap().to_json();
    assert_eq!(a, b);
    let c = run_suite("mcm4d-alt-h2", &symbolic(), &ModePolicy::randomized(20, 12)).unwrap().to_json();
    assert_ne!(a, c);
    assert!(!a.contains("wall_time"));
}

#[test]
fn randomized_and_exact_verdicts_agree() {
    let exact = run_suite("mcm4d", &symbolic(), &ModePolicy::exact()).unwrap();
    let random = run_suite("mcm4d", &symbolic(), &ModePolicy::randomized(30, 5)).unwrap();
    assert_eq!(exact.checks.len(), random.checks.len());
    for (e, r) in exact.checks.iter().zip(&random.checks) {
        assert_eq!(e.check_id, r.check_id);
        assert_eq!(e.outcome, r.outcome, "{}", e.check_id);
        assert_eq!(e.sign, r.sign, "{}", e.check_id);
    }
}

#[test]
fn overrides_apply_per_check() {
    let mut policy = ModePolicy::exact();
    let first = run_suite("mcm4d", &symbolic(), &policy).unwrap();
    let target = first
        .checks
        .iter()
        .find(|c| c.stage == "invariance")
        .unwrap()
        .check_id
        .clone();
    policy.overrides.insert(target.clone(), Mode::randomized(10, 2));
    let r = run_suite("mcm4d", &symbolic(), &policy).unwrap();
    let c = r.checks.iter().find(|c| c.check_id == target).unwrap();
    assert!(matches!(c.mode, Mode::Randomized { trials: 10, .. }));
    assert_eq!(c.outcome, Status::Pass);
}

#[test]
fn fixed_parameters_skip_lifted_checks() {
    let params: ParameterAssignment = "a=1,k=2".parse().unwrap();
    let r = run_suite("mcm4d", &params, &ModePolicy::default()).unwrap();
    assert!(r.passed());
    assert_eq!(r.params["k"], "2");
    let symbolic_count = run_suite("mcm4d", &symbolic(), &ModePolicy::default()).unwrap().checks.len();
    assert!(r.checks.len() < symbolic_count);
}

#[test]
fn timings_are_opt_in() {
    let policy = ModePolicy {
        timings: true,
        ..ModePolicy::default()
    };
    let r = run_suite("mcm4d-alt-h2", &symbolic(), &policy).unwrap();
    assert!(r.checks.iter().all(|c| c.wall_time.is_some()));
}
