//! Runs every asserted check of an example and reports the outcomes.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::identity::{Evidence, Mode};
use crate::algebra::rational::format_rational;
use crate::algebra::{RationalFunction, Ring};
use crate::calculus::{self, VectorField};
use crate::check::{self, ComponentWitness, Outcome};
use crate::error::{Error, Result};
use crate::maps::{self, RationalMap};
use crate::qrt;
use crate::registry::{self, ExampleBundle, Expect, ParameterAssignment, STAGES};

pub const REPORT_VERSION: &str = "1";

/// How identities are decided. Checks that involve derivatives, forms or
/// planar maps are always exact; the rest follow `ambient`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ModePolicy {
    /// `None` means exact in dimension 4 and randomized(200, seed 0) in
    /// dimension 6.
    pub ambient: Option<Mode>,
    /// Per-check modes keyed by check id.
    pub overrides: BTreeMap<String, Mode>,
    /// Record wall times; reports then differ between runs.
    pub timings: bool,
}

impl ModePolicy {
    pub fn exact() -> Self {
        ModePolicy {
            ambient: Some(Mode::Exact),
            ..Self::default()
        }
    }

    pub fn randomized(trials: usize, seed: u64) -> Self {
        ModePolicy {
            ambient: Some(Mode::randomized(trials, seed)),
            ..Self::default()
        }
    }

    pub fn ambient_mode(&self, dim: usize) -> Mode {
        self.ambient.unwrap_or(if dim >= 6 {
            Mode::randomized(200, 0)
        } else {
            Mode::Exact
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bound {
    pub degree_bound: u64,
    pub per_trial_bound: f64,
    pub total_bound_log10: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub stage: &'static str,
    pub target: String,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<Bound>,
    pub outcome: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_sign: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.outcome == Status::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Overall {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub version: &'static str,
    pub example: String,
    pub params: BTreeMap<String, String>,
    pub overall: Overall,
    pub checks: Vec<CheckRecord>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.overall == Overall::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// A scheduled check: its id, assertion and the mode it runs in.
#[derive(Debug, Clone)]
pub struct PlannedCheck {
    pub id: String,
    pub expect: Expect,
    pub mode: Mode,
}

fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn uses_ambient_mode(e: &Expect, b: &ExampleBundle) -> bool {
    match e {
        Expect::Invariant { .. }
        | Expect::Involution { .. }
        | Expect::Composition { .. }
        | Expect::Pushforward { .. }
        | Expect::Square { .. }
        | Expect::LiftedSquare { .. }
        | Expect::LiftedInvariant { .. } => true,
        Expect::Commute { f, .. } => b.tuple(f).map(|t| t.len() > 2).unwrap_or(false),
        _ => false,
    }
}

/// The checks of a bundle in report order. Checks that need symbolic levels
/// are left out when a level has a value.
pub fn plan(b: &ExampleBundle, policy: &ModePolicy) -> Vec<PlannedCheck> {
    let mut counts = [0usize; STAGES.len()];
    let mut entries: Vec<(usize, usize, Expect)> = Vec::new();
    for e in b.expected() {
        let skip = match e {
            Expect::LiftedSquare { lift, .. } | Expect::LiftedInvariant { lift, .. } => !b.levels_symbolic(lift.levels),
            _ => false,
        };
        if skip {
            continue;
        }
        let s = e.stage();
        counts[s] += 1;
        entries.push((s, counts[s], e.clone()));
    }
    entries.sort_by_key(|(s, n, _)| (*s, *n));
    let ambient = policy.ambient_mode(b.ambient_dim());
    entries
        .into_iter()
        .map(|(s, n, e)| {
            let id = format!("{:02}-{}-{:02}", s + 1, STAGES[s], n);
            let base = if uses_ambient_mode(&e, b) { ambient } else { Mode::Exact };
            let mode = policy.overrides.get(&id).copied().unwrap_or(base);
            let mode = match mode {
                Mode::Randomized { seed, .. } => mode.with_seed(seed ^ fnv1a(&id)),
                Mode::Exact => Mode::Exact,
            };
            PlannedCheck { id, expect: e, mode }
        })
        .collect()
}

struct Verdict {
    pass: bool,
    sign: Option<i32>,
    expected_sign: Option<i32>,
    evidence: Evidence,
    witness: Option<ComponentWitness>,
    detail: Option<String>,
}

impl Verdict {
    fn from_outcome(o: Outcome) -> Verdict {
        Verdict {
            pass: o.holds(),
            sign: None,
            expected_sign: None,
            evidence: o.evidence,
            witness: o.witness,
            detail: None,
        }
    }

    fn signed(o: Outcome, expected: i32) -> Verdict {
        let pass = o.holds() && o.sign == Some(expected);
        let detail = match o.sign {
            Some(s) if s != expected => Some(format!("identity holds with sign {s}")),
            _ => None,
        };
        Verdict {
            pass,
            sign: o.sign,
            expected_sign: Some(expected),
            evidence: o.evidence,
            witness: o.witness,
            detail,
        }
    }
}

/// Combines outcomes that must all hold; the first failure is kept and its
/// witness component is offset by the preceding tuple lengths.
fn all_of(parts: Vec<(usize, Outcome)>) -> Outcome {
    let mut offset = 0;
    let mut worst: Option<Evidence> = None;
    for (len, o) in parts {
        if !o.holds() {
            let mut o = o;
            if let Some(w) = &mut o.witness {
                w.component += offset;
            }
            return o;
        }
        let replace = match (&worst, o.evidence.degree_bound) {
            (None, _) => true,
            (Some(w), Some(d)) => w.degree_bound.is_none_or(|x| d > x),
            _ => false,
        };
        if replace {
            worst = Some(o.evidence.clone());
        }
        offset += len;
    }
    Outcome::passed(worst.unwrap_or_else(Evidence::exact), 1)
}

fn field_annihilates(b: &ExampleBundle, field: &str, fns: &[&str]) -> Result<Outcome> {
    let x = b.field(field)?;
    let lhs: Vec<RationalFunction> = fns
        .iter()
        .map(|f| Ok(x.apply_to(b.scalar(f)?)))
        .collect::<Result<_>>()?;
    check::vanishes(x.ring(), &lhs, Mode::Exact)
}

fn stored_map_into(b: &ExampleBundle, name: &str, target_of: &str) -> Result<RationalMap> {
    let target = b.ring_of(target_of)?.clone();
    b.map_into(name, &target)
}

fn symmetry_basis_check(b: &ExampleBundle, fns: &[&str], free: &[&str], recover: &[&str]) -> Result<Outcome> {
    let hs: Vec<RationalFunction> = fns.iter().map(|f| b.scalar(f).cloned()).collect::<Result<_>>()?;
    let ring = hs[0].ring().clone();
    let free_idx = ring.vars(free)?;
    let basis = calculus::symmetry_basis(&hs, &free_idx)?;
    let mut parts = Vec::new();
    let annihilated: Vec<RationalFunction> = basis
        .iter()
        .flat_map(|s| hs.iter().map(move |h| s.apply_to(h)))
        .collect();
    parts.push((annihilated.len(), check::vanishes(&ring, &annihilated, Mode::Exact)?));
    let mut brackets = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            brackets.extend(calculus::lie_bracket(&basis[i], &basis[j]).components().iter().cloned());
        }
    }
    parts.push((brackets.len(), check::vanishes(&ring, &brackets, Mode::Exact)?));
    for name in recover {
        let x = b.field(name)?;
        let coeffs = calculus::basis_coefficients(&x, &free_idx);
        let y = calculus::combine(&basis, &coeffs).ok_or_else(|| Error::Shape("empty basis".into()))?;
        parts.push((x.dim(), check::compare(&ring, y.components(), x.components(), &[1], Mode::Exact)?));
    }
    Ok(all_of(parts))
}

fn restriction_check(b: &ExampleBundle, psi: &str, reduced: &str, var: &str, level: &str) -> Result<Outcome> {
    let full = b.map(psi)?;
    let red = b.map(reduced)?;
    let rr = red.domain().clone();
    let fr = full.domain().clone();
    let mut args = Vec::with_capacity(fr.len());
    for (i, n) in fr.names().iter().enumerate() {
        let a = if n == var {
            match b.params().get(level) {
                Some(v) => RationalFunction::constant(&rr, v.clone()),
                None => RationalFunction::var(&rr, rr.var(level)?),
            }
        } else if let Some(j) = rr.index(n) {
            RationalFunction::var(&rr, j)
        } else {
            // A coordinate dropped by the reduction; the components kept
            // must not depend on it.
            for k in 0..rr.phase_count() {
                let c = &full.components()[fr.var(rr.name(k))?];
                if c.depends_on(i) {
                    return Err(Error::Shape(format!("`{psi}` component `{}` depends on `{n}`", rr.name(k))));
                }
            }
            RationalFunction::one(&rr)
        };
        args.push(a);
    }
    let restricted: Vec<RationalFunction> = (0..rr.phase_count())
        .map(|k| full.components()[fr.var(rr.name(k))?].compose(&args))
        .collect::<Result<_>>()?;
    check::compare(&rr, &restricted, red.components(), &[1], Mode::Exact)
}

fn qrt_check(b: &ExampleBundle, h: &str, u: &str, v: &str, map: &str, inverse: bool) -> Result<Outcome> {
    let inv = qrt::validate_biquadratic(b.scalar(h)?, u, v)?;
    let q = qrt::build_qrt(&inv)?;
    let m = b.map(map)?;
    if inverse {
        let c = RationalMap::compose(&m, &q)?;
        maps::check_maps_equal(&c, &RationalMap::identity(m.domain()), Mode::Exact)
    } else {
        maps::check_maps_equal(&q, &m, Mode::Exact)
    }
}

fn contraction_check(b: &ExampleBundle, top: &registry::FormSpec, steps: &[(&str, registry::FormSpec)]) -> Result<Outcome> {
    let mut omega = b.form(top)?;
    let mut parts = Vec::new();
    for (field, expected) in steps {
        let x: VectorField = b.field(field)?;
        omega = calculus::contract(&x, &omega)?;
        let o = omega.compare(&b.form(expected)?)?;
        let failed = !o.holds();
        parts.push((1, o));
        if failed {
            break;
        }
    }
    Ok(all_of(parts))
}

fn evaluate(b: &ExampleBundle, e: &Expect, mode: Mode) -> Result<Verdict> {
    use Expect::*;
    let v = Verdict::from_outcome;
    Ok(match e {
        Gamma { pair } | Identity { pair } => {
            let (l, r) = b.pair(pair)?;
            v(check::compare(&l.ring().clone(), &[l], &[r], &[1], Mode::Exact)?)
        }
        FieldInvariants { field, fns } | Symmetry { field, fns } => v(field_annihilates(b, field, fns)?),
        Invariant { map, fns } => {
            let m = b.map(map)?;
            let parts = fns
                .iter()
                .map(|f| Ok((1, maps::check_invariant(&m, b.scalar(f)?, mode)?)))
                .collect::<Result<_>>()?;
            v(all_of(parts))
        }
        Involution { map } => v(maps::check_involution(&b.map(map)?, mode)?),
        Composition { map, outer, inner } => {
            let i = stored_map_into(b, inner, outer)?;
            let rhs: Vec<RationalFunction> = b
                .tuple(outer)?
                .iter()
                .map(|c| i.pullback(c))
                .collect::<Result<_>>()?;
            v(check::compare(i.domain(), b.tuple(map)?, &rhs, &[1], mode)?)
        }
        Inverse { map, inverse } => {
            let m = stored_map_into(b, map, inverse)?;
            let n = stored_map_into(b, inverse, map)?;
            let there = RationalMap::compose(&n, &m)?;
            let back = RationalMap::compose(&m, &n)?;
            v(all_of(vec![
                (m.dim_in(), maps::check_maps_equal(&there, &RationalMap::identity(m.domain()), Mode::Exact)?),
                (n.dim_in(), maps::check_maps_equal(&back, &RationalMap::identity(n.domain()), Mode::Exact)?),
            ]))
        }
        Volume { map, sigma, sign } => Verdict::signed(
            calculus::volume_sign(&b.map(map)?, b.scalar(sigma)?, Mode::Exact)?,
            *sign,
        ),
        Jacobian { map, det } => {
            let m = b.map(map)?;
            let d = calculus::determinant(&calculus::jacobian(&m))?;
            v(check::compare(m.domain(), &[d], &[b.scalar(det)?.clone()], &[1], Mode::Exact)?)
        }
        Pushforward { map, field, sign } => Verdict::signed(
            maps::check_pushforward_sign(&b.map(map)?, &b.field(field)?, mode)?,
            *sign,
        ),
        Divergence { field, sigma } => {
            let x = b.field(field)?;
            let d = calculus::divergence(&x, b.scalar(sigma)?)?;
            v(check::vanishes(x.ring(), &[d], Mode::Exact)?)
        }
        ProjectionJacobian { pi, det } => {
            let p = stored_map_into(b, pi, det)?;
            let d = calculus::determinant(&calculus::jacobian(&p))?;
            let rhs = p.pullback(b.scalar(det)?)?;
            v(check::compare(p.domain(), &[d], &[rhs], &[1], Mode::Exact)?)
        }
        Related { field, image, pi } => {
            let p = stored_map_into(b, pi, image)?;
            v(calculus::check_related_fields(&b.field(field)?, &b.field(image)?, &p)?)
        }
        Pullback { f, pi, g } => {
            let p = stored_map_into(b, pi, f)?;
            v(maps::check_pullback(&p, b.scalar(f)?, b.scalar(g)?, Mode::Exact)?)
        }
        Contraction { top, steps } => v(contraction_check(b, top, steps)?),
        FormEq { lhs, rhs } => v(b.form(lhs)?.compare(&b.form(rhs)?)?),
        FormPullback { form, map, expected } => {
            let m = stored_map_into(b, map, form.ring)?;
            let pulled = calculus::pullback(&b.form(form)?, &m)?;
            v(pulled.compare(&b.form(expected)?)?)
        }
        Square { phi, psi, pi } => {
            let p = stored_map_into(b, pi, psi)?;
            v(maps::check_commuting_square(&b.map(phi)?, &b.map(psi)?, &p, mode)?)
        }
        LiftedSquare { phi, psi, lift } => {
            let (psi_l, pi_l) = b.lifted(psi, lift)?;
            v(maps::check_commuting_square(&b.map(phi)?, &psi_l, &pi_l, mode)?)
        }
        LiftedInvariant { h, lift, ambient } => {
            let h_l = b.lift_function(h, lift.levels)?;
            let pi_l = b.lifted_projection(lift, h_l.ring())?;
            v(maps::check_pullback(&pi_l, &h_l, b.scalar(ambient)?, mode)?)
        }
        Restriction { psi, reduced, var, level } => v(restriction_check(b, psi, reduced, var, level)?),
        Fiber { map, var, sign } => {
            let m = b.map(map)?;
            let i = m.domain().var(var)?;
            let mut verdict = v(maps::fiber_structure_check(&m, i, *sign)?);
            verdict.expected_sign = Some(*sign);
            verdict
        }
        ReducedInvariant { map, h } => v(maps::check_invariant(&b.map(map)?, b.scalar(h)?, Mode::Exact)?),
        Symplectic { map, omega } => Verdict::signed(
            calculus::symplectic_check_2d(&b.map(map)?, b.scalar(omega)?, Mode::Exact)?,
            1,
        ),
        Qrt { h, u, v: vv, map, inverse } => v(qrt_check(b, h, u, vv, map, *inverse)?),
        Distinct { f, g } => {
            let o = maps::check_maps_equal(&b.map(f)?, &b.map(g)?, Mode::Exact)?;
            Verdict {
                pass: !o.holds(),
                sign: None,
                expected_sign: None,
                evidence: o.evidence,
                witness: o.witness,
                detail: (o.sign.is_some()).then(|| "maps coincide".to_string()),
            }
        }
        Commute { f, g } => v(maps::check_commutativity(&b.map(f)?, &b.map(g)?, mode)?),
        LieBracket { a, b: c } => {
            let br = calculus::lie_bracket(&b.field(a)?, &b.field(c)?);
            let ring: Ring = br.ring().clone();
            v(check::vanishes(&ring, br.components(), Mode::Exact)?)
        }
        SymmetryBasis { fns, free, recover } => v(symmetry_basis_check(b, fns, free, recover)?),
    })
}

fn witness_json(w: &ComponentWitness) -> serde_json::Value {
    let mut j = w.witness.to_json();
    if let serde_json::Value::Object(m) = &mut j {
        m.insert("component".into(), serde_json::Value::from(w.component));
    }
    j
}

fn bound_of(e: &Evidence) -> Option<Bound> {
    Some(Bound {
        degree_bound: e.degree_bound?,
        per_trial_bound: e.per_trial_bound?,
        total_bound_log10: e.total_bound_log10?,
    })
}

/// Runs one planned check; errors become `error` outcomes.
pub fn run_check(b: &ExampleBundle, c: &PlannedCheck, timings: bool) -> CheckRecord {
    let start = Instant::now();
    let result = evaluate(b, &c.expect, c.mode);
    let wall_time = timings.then(|| start.elapsed().as_secs_f64());
    let mut rec = CheckRecord {
        check_id: c.id.clone(),
        stage: STAGES[c.expect.stage()],
        target: c.expect.target(),
        mode: c.mode,
        bound: None,
        outcome: Status::Error,
        sign: None,
        expected_sign: None,
        witness: None,
        detail: None,
        wall_time,
    };
    match result {
        Ok(v) => {
            rec.outcome = if v.pass { Status::Pass } else { Status::Fail };
            rec.bound = bound_of(&v.evidence);
            rec.sign = v.sign;
            rec.expected_sign = v.expected_sign;
            rec.witness = v.witness.as_ref().filter(|_| !v.pass).map(witness_json);
            rec.detail = v.detail;
        }
        Err(e) => rec.detail = Some(e.to_string()),
    }
    rec
}

fn params_table(b: &ExampleBundle) -> BTreeMap<String, String> {
    b.document()
        .params
        .iter()
        .map(|p| {
            let v = b
                .params()
                .get(p)
                .map(format_rational)
                .unwrap_or_else(|| "symbolic".to_string());
            (p.clone(), v)
        })
        .collect()
}

/// Runs every check of the bundle, in parallel, and assembles the report in
/// check-id order.
pub fn run_bundle(b: &ExampleBundle, policy: &ModePolicy) -> CheckReport {
    let planned = plan(b, policy);
    let checks: Vec<CheckRecord> = planned
        .par_iter()
        .map(|c| run_check(b, c, policy.timings))
        .collect();
    let overall = if checks.iter().all(CheckRecord::passed) {
        Overall::Pass
    } else {
        Overall::Fail
    };
    CheckReport {
        version: REPORT_VERSION,
        example: b.name().to_string(),
        params: params_table(b),
        overall,
        checks,
    }
}

pub fn run_suite(name: &str, params: &ParameterAssignment, policy: &ModePolicy) -> Result<CheckReport> {
    let b = registry::instantiate(name, params)?;
    Ok(run_bundle(&b, policy))
}

/// Runs checks in order and stops at the first one that does not pass.
pub fn first_failure(b: &ExampleBundle, policy: &ModePolicy) -> Option<CheckRecord> {
    plan(b, policy)
        .iter()
        .map(|c| run_check(b, c, false))
        .find(|r| !r.passed())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_orders_by_stage_and_skips_fixed_levels() {
        let b = registry::instantiate("mcm4d", &ParameterAssignment::symbolic()).unwrap();
        let ids: Vec<String> = plan(&b, &ModePolicy::default()).into_iter().map(|c| c.id).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
        assert!(ids[0].starts_with("01-gamma-"));
        let fixed = registry::instantiate("mcm4d", &"k=2".parse().unwrap()).unwrap();
        let n = plan(&fixed, &ModePolicy::default()).len();
        assert_eq!(n + 4, ids.len());
    }

    #[test]
    fn seeds_differ_per_check() {
        let b = registry::instantiate("mcm6d", &ParameterAssignment::symbolic()).unwrap();
        let seeds: Vec<u64> = plan(&b, &ModePolicy::default())
            .into_iter()
            .filter_map(|c| match c.mode {
                Mode::Randomized { seed, .. } => Some(seed),
                Mode::Exact => None,
            })
            .collect();
        assert!(seeds.len() > 3);
        let mut u = seeds.clone();
        u.sort();
        u.dedup();
        assert_eq!(u.len(), seeds.len());
    }
}
