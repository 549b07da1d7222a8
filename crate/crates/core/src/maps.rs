//! Rational maps, their identity checks, and orbit iteration.

use std::fmt;
use std::io::Write;

use crate::algebra::identity::Mode;
use crate::algebra::rational::{bits, format_rational, to_f64};
use crate::algebra::{Rational, RationalFunction, Ring};
use crate::calculus::{self, VectorField};
use crate::check::{decide, DegBound, Outcome};
use crate::error::{Error, Result};

/// A map from the phase space of `domain` to the phase space of `codomain`.
///
/// Components live over `domain`; parameters of `codomain` are identified
/// with the parameters of `domain` by name.
#[derive(Clone)]
pub struct RationalMap {
    name: String,
    domain: Ring,
    codomain: Ring,
    components: Vec<RationalFunction>,
}

impl fmt::Debug for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?} -> {:?} (", self.name, self.domain, self.codomain)?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            writeln!(f, "{} -> {}", self.codomain.name(i), c)?;
        }
        Ok(())
    }
}

impl RationalMap {
    pub fn new(name: &str, domain: &Ring, codomain: &Ring, components: Vec<RationalFunction>) -> Result<Self> {
        if components.len() != codomain.phase_count() {
            return Err(Error::Shape(format!(
                "map `{name}` has {} components for {} target variables",
                components.len(),
                codomain.phase_count()
            )));
        }
        if components.iter().any(|c| !c.ring().same(domain)) {
            return Err(Error::RingMismatch);
        }
        for p in codomain.phase_count()..codomain.len() {
            domain.var(codomain.name(p))?;
        }
        Ok(RationalMap {
            name: name.to_string(),
            domain: domain.clone(),
            codomain: codomain.clone(),
            components,
        })
    }

    /// A map from a phase space to itself.
    pub fn endo(name: &str, ring: &Ring, components: Vec<RationalFunction>) -> Result<Self> {
        Self::new(name, ring, ring, components)
    }

    pub fn identity(ring: &Ring) -> Self {
        let comps = (0..ring.phase_count())
            .map(|i| RationalFunction::var(ring, i))
            .collect();
        RationalMap {
            name: "id".into(),
            domain: ring.clone(),
            codomain: ring.clone(),
            components: comps,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(&self, name: &str) -> Self {
        let mut m = self.clone();
        m.name = name.to_string();
        m
    }

    pub fn domain(&self) -> &Ring {
        &self.domain
    }

    pub fn codomain(&self) -> &Ring {
        &self.codomain
    }

    pub fn components(&self) -> &[RationalFunction] {
        &self.components
    }

    pub fn dim_in(&self) -> usize {
        self.domain.phase_count()
    }

    pub fn dim_out(&self) -> usize {
        self.components.len()
    }

    pub fn is_endo(&self) -> bool {
        self.domain.same(&self.codomain)
    }

    /// Same components with one entry replaced.
    pub fn with_component(&self, i: usize, f: RationalFunction) -> Self {
        let mut m = self.clone();
        m.components[i] = f;
        m
    }

    /// Substitution arguments for a function over `target`, whose phase
    /// variables stand for this map's components.
    fn args_for(&self, target: &Ring) -> Result<Vec<RationalFunction>> {
        if target.phase_count() != self.dim_out() {
            return Err(Error::Shape(format!(
                "`{}` has {} components but the target has {} variables",
                self.name,
                self.dim_out(),
                target.phase_count()
            )));
        }
        let mut args = self.components.clone();
        for p in target.phase_count()..target.len() {
            let i = self.domain.var(target.name(p))?;
            args.push(RationalFunction::var(&self.domain, i));
        }
        Ok(args)
    }

    fn arg_bounds(&self, target: &Ring) -> Vec<DegBound> {
        let mut b: Vec<DegBound> = self.components.iter().map(DegBound::of).collect();
        b.resize(target.len(), DegBound { num: 1, den: 0 });
        b
    }

    /// `h ∘ self` for a function `h` over the codomain (or any ring with the
    /// same number of phase variables).
    pub fn pullback(&self, h: &RationalFunction) -> Result<RationalFunction> {
        h.compose(&self.args_for(h.ring())?)
    }

    pub fn pullback_bound(&self, h: &RationalFunction) -> DegBound {
        DegBound::compose(h, &self.arg_bounds(h.ring()))
    }

    /// `f ∘ g`: apply `g` first.
    pub fn compose(f: &RationalMap, g: &RationalMap) -> Result<RationalMap> {
        let args = g.args_for(&f.domain)?;
        let comps = f
            .components
            .iter()
            .map(|c| c.compose(&args))
            .collect::<Result<_>>()?;
        RationalMap::new(
            &format!("{}∘{}", f.name, g.name),
            &g.domain,
            &f.codomain,
            comps,
        )
    }

    /// Image phase coordinates of a point assigning every domain symbol.
    pub fn apply(&self, p: &[Rational]) -> Result<Vec<Rational>> {
        self.components.iter().map(|c| c.eval(p)).collect()
    }

    /// Completes image coordinates to a point of `target` by copying
    /// parameters from the source point.
    pub fn lift_point(&self, target: &Ring, p: &[Rational], image: Vec<Rational>) -> Result<Vec<Rational>> {
        let mut out = image;
        for i in target.phase_count()..target.len() {
            out.push(p[self.domain.var(target.name(i))?].clone());
        }
        Ok(out)
    }

    /// Full image point over the codomain ring.
    pub fn apply_full(&self, p: &[Rational]) -> Result<Vec<Rational>> {
        let img = self.apply(p)?;
        self.lift_point(&self.codomain, p, img)
    }

    fn apply_into(&self, target: &Ring, p: &[Rational]) -> Result<Vec<Rational>> {
        let img = self.apply(p)?;
        self.lift_point(target, p, img)
    }

    /// Fixes parameters to values; the ring keeps the symbols, which simply
    /// no longer occur.
    pub fn substitute_params(&self, values: &[(String, Rational)]) -> Result<RationalMap> {
        let args = param_args(&self.domain, values)?;
        let comps = self
            .components
            .iter()
            .map(|c| c.compose(&args))
            .collect::<Result<_>>()?;
        RationalMap::new(&self.name, &self.domain, &self.codomain, comps)
    }
}

/// Substitution arguments that replace the named parameters by constants.
pub fn param_args(ring: &Ring, values: &[(String, Rational)]) -> Result<Vec<RationalFunction>> {
    let mut args: Vec<RationalFunction> = (0..ring.len()).map(|i| RationalFunction::var(ring, i)).collect();
    for (name, v) in values {
        if let Some(i) = ring.index(name) {
            args[i] = RationalFunction::constant(ring, v.clone());
        }
    }
    Ok(args)
}

fn require_endo(m: &RationalMap) -> Result<()> {
    if m.dim_in() != m.dim_out() {
        return Err(Error::Shape(format!("`{}` is not a self-map", m.name)));
    }
    Ok(())
}

/// `m ∘ m ≡ id`.
pub fn check_involution(m: &RationalMap, mode: Mode) -> Result<Outcome> {
    require_endo(m)?;
    let ring = m.domain.clone();
    decide(
        &ring,
        mode,
        &[1],
        || {
            let mm = RationalMap::compose(m, m)?;
            let id = RationalMap::identity(&ring);
            Ok((mm.components, id.components))
        },
        |p| {
            let q = m.apply_into(&m.domain, p)?;
            let r = m.apply(&q)?;
            Ok(r.into_iter().zip(p.iter().cloned()).collect())
        },
        || {
            let b = m.arg_bounds(&m.domain);
            m.components
                .iter()
                .map(|c| DegBound::compose(c, &b).difference(DegBound { num: 1, den: 0 }))
                .max()
                .unwrap_or(0)
        },
    )
}

/// `h ∘ m ≡ h`.
pub fn check_invariant(m: &RationalMap, h: &RationalFunction, mode: Mode) -> Result<Outcome> {
    if !h.ring().same(m.codomain()) || !h.ring().same(m.domain()) {
        return Err(Error::RingMismatch);
    }
    decide(
        m.domain(),
        mode,
        &[1],
        || Ok((vec![m.pullback(h)?], vec![h.clone()])),
        |p| {
            let q = m.apply_into(h.ring(), p)?;
            Ok(vec![(h.eval(&q)?, h.eval(p)?)])
        },
        || m.pullback_bound(h).difference(DegBound::of(h)),
    )
}

/// `J_m · X ≡ ε (X ∘ m)`, reporting ε.
pub fn check_pushforward_sign(m: &RationalMap, x: &VectorField, mode: Mode) -> Result<Outcome> {
    require_endo(m)?;
    if !x.ring().same(m.domain()) {
        return Err(Error::RingMismatch);
    }
    let jac = calculus::jacobian(m);
    let n = m.dim_in();
    decide(
        m.domain(),
        mode,
        &[1, -1],
        || {
            let lhs: Vec<RationalFunction> = (0..n)
                .map(|i| {
                    let mut acc = RationalFunction::zero(m.domain());
                    for j in 0..n {
                        if !jac[i][j].is_zero() && !x.components()[j].is_zero() {
                            acc = &acc + &(&jac[i][j] * &x.components()[j]);
                        }
                    }
                    acc
                })
                .collect();
            let rhs = x
                .components()
                .iter()
                .map(|c| m.pullback(c))
                .collect::<Result<_>>()?;
            Ok((lhs, rhs))
        },
        |p| {
            let q = m.apply_into(m.domain(), p)?;
            let xv = x.eval(p)?;
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                let mut acc = Rational::from_integer(0.into());
                for j in 0..n {
                    if !jac[i][j].is_zero() {
                        acc += jac[i][j].eval(p)? * &xv[j];
                    }
                }
                out.push((acc, x.components()[i].eval(&q)?));
            }
            Ok(out)
        },
        || {
            let xb: Vec<DegBound> = x.components().iter().map(DegBound::of).collect();
            (0..n)
                .map(|i| {
                    let lhs = DegBound::sum((0..n).map(|j| DegBound::of(&jac[i][j]).mul(xb[j])));
                    lhs.difference(m.pullback_bound(&x.components()[i]))
                })
                .max()
                .unwrap_or(0)
        },
    )
}

/// `π ∘ φ ≡ ψ ∘ π`.
pub fn check_commuting_square(phi: &RationalMap, psi: &RationalMap, pi: &RationalMap, mode: Mode) -> Result<Outcome> {
    if pi.dim_out() != psi.dim_in() || pi.dim_in() != phi.dim_out() {
        return Err(Error::Shape(format!(
            "`{}` does not map the space of `{}` to the space of `{}`",
            pi.name, phi.name, psi.name
        )));
    }
    decide(
        phi.domain(),
        mode,
        &[1],
        || {
            let lhs = RationalMap::compose(pi, phi)?;
            let rhs = RationalMap::compose(psi, pi)?;
            Ok((lhs.components, rhs.components))
        },
        |p| {
            let q = phi.apply_into(pi.domain(), p)?;
            let left = pi.apply(&q)?;
            let r = pi.apply_into(psi.domain(), p)?;
            let right = psi.apply(&r)?;
            Ok(left.into_iter().zip(right).collect())
        },
        || {
            let pb = phi.arg_bounds(pi.domain());
            let lhs: Vec<DegBound> = pi.components.iter().map(|c| DegBound::compose(c, &pb)).collect();
            let qb = pi.arg_bounds(psi.domain());
            psi.components
                .iter()
                .zip(lhs)
                .map(|(c, l)| l.difference(DegBound::compose(c, &qb)))
                .max()
                .unwrap_or(0)
        },
    )
}

/// `f ∘ pi ≡ g` for `f` over the codomain of `pi` and `g` over its domain.
pub fn check_pullback(pi: &RationalMap, f: &RationalFunction, g: &RationalFunction, mode: Mode) -> Result<Outcome> {
    if !g.ring().same(pi.domain()) {
        return Err(Error::RingMismatch);
    }
    decide(
        pi.domain(),
        mode,
        &[1],
        || Ok((vec![pi.pullback(f)?], vec![g.clone()])),
        |p| {
            let q = pi.apply_into(f.ring(), p)?;
            Ok(vec![(f.eval(&q)?, g.eval(p)?)])
        },
        || pi.pullback_bound(f).difference(DegBound::of(g)),
    )
}

/// `f ≡ g` componentwise.
pub fn check_maps_equal(f: &RationalMap, g: &RationalMap, mode: Mode) -> Result<Outcome> {
    if !f.domain().same(g.domain()) || f.dim_out() != g.dim_out() {
        return Err(Error::RingMismatch);
    }
    crate::check::compare(f.domain(), &f.components, &g.components, &[1], mode)
}

/// `f ∘ g ≡ g ∘ f`.
pub fn check_commutativity(f: &RationalMap, g: &RationalMap, mode: Mode) -> Result<Outcome> {
    require_endo(f)?;
    require_endo(g)?;
    if !f.domain().same(g.domain()) {
        return Err(Error::RingMismatch);
    }
    decide(
        f.domain(),
        mode,
        &[1],
        || {
            let fg = RationalMap::compose(f, g)?;
            let gf = RationalMap::compose(g, f)?;
            Ok((fg.components, gf.components))
        },
        |p| {
            let a = f.apply(&g.apply_into(f.domain(), p)?)?;
            let b = g.apply(&f.apply_into(g.domain(), p)?)?;
            Ok(a.into_iter().zip(b).collect())
        },
        || {
            let gb = g.arg_bounds(f.domain());
            let fb = f.arg_bounds(g.domain());
            f.components
                .iter()
                .zip(&g.components)
                .map(|(fc, gc)| DegBound::compose(fc, &gb).difference(DegBound::compose(gc, &fb)))
                .max()
                .unwrap_or(0)
        },
    )
}

/// The fiber component has the form `α · v^sign` with `α` free of `v`.
pub fn fiber_structure_check(m: &RationalMap, fiber_var: usize, sign: i32) -> Result<Outcome> {
    require_endo(m)?;
    let ring = m.domain().clone();
    let v = RationalFunction::var(&ring, fiber_var);
    let comp = &m.components[fiber_var];
    let alpha = if sign > 0 {
        comp.try_div(&v)?
    } else {
        comp * &v
    };
    let d = alpha.derivative(fiber_var);
    decide(
        &ring,
        Mode::Exact,
        &[1],
        || Ok((vec![d.clone()], vec![RationalFunction::zero(&ring)])),
        |p| Ok(vec![(d.eval(p)?, Rational::from_integer(0.into()))]),
        || 0,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Arithmetic {
    Exact { bitcap: u64 },
    Float { tol: f64 },
}

pub const DEFAULT_BITCAP: u64 = 1 << 16;
pub const DEFAULT_TOL: f64 = 1e-9;

impl Default for Arithmetic {
    fn default() -> Self {
        Arithmetic::Exact {
            bitcap: DEFAULT_BITCAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Num {
    Exact(Rational),
    Float(f64),
}

impl Num {
    pub fn to_f64(&self) -> f64 {
        match self {
            Num::Exact(r) => to_f64(r),
            Num::Float(x) => *x,
        }
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Exact(r) => write!(f, "{}", format_rational(r)),
            Num::Float(x) => write!(f, "{x:e}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OrbitRecord {
    pub variables: Vec<String>,
    pub invariant_names: Vec<String>,
    pub arithmetic: Arithmetic,
    /// Row `s` is the point after `s` steps; row 0 is the start.
    pub points: Vec<Vec<Num>>,
    /// Invariant values on every row.
    pub invariant_values: Vec<Vec<Num>>,
    /// Steps whose invariants drifted beyond the float tolerance.
    pub flagged: Vec<usize>,
}

impl OrbitRecord {
    pub fn start(&self) -> &[Num] {
        &self.points[0]
    }

    pub fn steps(&self) -> &[Vec<Num>] {
        &self.points[1..]
    }

    /// In exact mode: every invariant has the same value on every row.
    pub fn invariants_constant(&self) -> bool {
        match self.arithmetic {
            Arithmetic::Exact { .. } => self.invariant_values.windows(2).all(|w| w[0] == w[1]),
            Arithmetic::Float { .. } => self.flagged.is_empty(),
        }
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let mut header = vec!["step".to_string()];
        header.extend(self.variables.iter().cloned());
        header.extend(self.invariant_names.iter().cloned());
        writeln!(w, "{}", header.join(","))?;
        for (s, (p, h)) in self.points.iter().zip(&self.invariant_values).enumerate() {
            let mut row = vec![s.to_string()];
            row.extend(p.iter().map(|x| x.to_string()));
            row.extend(h.iter().map(|x| x.to_string()));
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

/// Iterates a self-map from `start`, which assigns every ring symbol.
pub fn iterate_orbit(
    m: &RationalMap,
    start: &[Rational],
    steps: usize,
    h: &[(String, RationalFunction)],
    arithmetic: Arithmetic,
) -> Result<OrbitRecord> {
    require_endo(m)?;
    let ring = m.domain();
    if start.len() != ring.len() {
        return Err(Error::Shape(format!(
            "start point needs {} values, got {}",
            ring.len(),
            start.len()
        )));
    }
    let n = m.dim_in();
    let mut rec = OrbitRecord {
        variables: ring.names()[..n].to_vec(),
        invariant_names: h.iter().map(|(k, _)| k.clone()).collect(),
        arithmetic,
        points: Vec::with_capacity(steps + 1),
        invariant_values: Vec::with_capacity(steps + 1),
        flagged: Vec::new(),
    };
    let at_step = |s: usize| {
        move |e: Error| match e {
            e @ (Error::DenominatorVanishes { .. } | Error::DivisionByZero) => Error::OrbitSingular {
                step: s,
                detail: e.to_string(),
            },
            other => other,
        }
    };
    match arithmetic {
        Arithmetic::Exact { bitcap } => {
            let mut cur = start.to_vec();
            for s in 0..=steps {
                if s > 0 {
                    let img = m.apply(&cur).map_err(at_step(s))?;
                    if img.iter().any(|x| bits(x) > bitcap) {
                        return Err(Error::BitCapExceeded { step: s, cap: bitcap });
                    }
                    cur[..n].clone_from_slice(&img);
                }
                rec.points.push(cur[..n].iter().cloned().map(Num::Exact).collect());
                rec.invariant_values.push(
                    h.iter()
                        .map(|(_, f)| f.eval(&cur).map(Num::Exact))
                        .collect::<Result<_>>()
                        .map_err(at_step(s))?,
                );
            }
        }
        Arithmetic::Float { tol } => {
            let mut cur: Vec<f64> = start.iter().map(to_f64).collect();
            let mut h0: Vec<f64> = Vec::new();
            for s in 0..=steps {
                if s > 0 {
                    let img: Vec<f64> = m.components.iter().map(|c| c.eval_f64(&cur)).collect();
                    if img.iter().any(|x| !x.is_finite()) {
                        return Err(Error::OrbitSingular {
                            step: s,
                            detail: "floating image is not finite".into(),
                        });
                    }
                    cur[..n].copy_from_slice(&img);
                }
                let hv: Vec<f64> = h.iter().map(|(_, f)| f.eval_f64(&cur)).collect();
                if s == 0 {
                    h0 = hv.clone();
                } else if hv
                    .iter()
                    .zip(&h0)
                    .any(|(a, b)| (a - b).abs() > tol * b.abs().max(1.0) || !a.is_finite())
                {
                    rec.flagged.push(s);
                }
                rec.points.push(cur[..n].iter().map(|&x| Num::Float(x)).collect());
                rec.invariant_values.push(hv.into_iter().map(Num::Float).collect());
            }
        }
    }
    Ok(rec)
}

/// Largest relative gap between a float orbit and an exact orbit over their
/// common prefix.
pub fn max_relative_gap(exact: &OrbitRecord, float: &OrbitRecord) -> f64 {
    let mut worst: f64 = 0.0;
    for (a, b) in exact.points.iter().zip(&float.points) {
        for (x, y) in a.iter().zip(b) {
            let (x, y) = (x.to_f64(), y.to_f64());
            worst = worst.max((x - y).abs() / x.abs().max(1.0));
        }
    }
    worst
}
