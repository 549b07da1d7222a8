//! The worked examples: their formulas, parameter instantiation and the
//! level-set reductions.

mod catalogue;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub use catalogue::{Coef, ExampleSpec, Expect, Factor, FormSpec, Lift, ReducedSpec, NAMES, STAGES};

use crate::algebra::rational::{format_rational, parse_rational};
use crate::algebra::{Rational, RationalFunction, Ring};
use crate::calculus::{self, Form, VectorField};
use crate::error::{Error, Result};
use crate::expr::{Document, Script, Value};
use crate::maps::{param_args, RationalMap};

/// Values for some of the parameters; the rest stay symbolic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParameterAssignment {
    values: BTreeMap<String, Rational>,
}

impl ParameterAssignment {
    pub fn symbolic() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: Rational) -> Self {
        self.values.insert(name.to_string(), value);
        self
    }

    pub fn set(&mut self, name: &str, value: Rational) {
        self.values.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<&Rational> {
        self.values.get(name)
    }

    pub fn is_symbolic(&self, name: &str) -> bool {
        !self.values.contains_key(name)
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn pairs(&self) -> Vec<(String, Rational)> {
        self.values.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rational)> {
        self.values.iter()
    }
}

impl FromStr for ParameterAssignment {
    type Err = Error;

    /// Parses `name=value` pairs separated by commas, e.g. `a=1,k=2`.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = Self::default();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (name, value) = item.split_once('=').ok_or_else(|| Error::Parse {
                line: 0,
                msg: format!("expected name=value, got `{item}`"),
            })?;
            let value = value.trim();
            if value != "symbolic" {
                out.set(name.trim(), parse_rational(value)?);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for ParameterAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .values
            .iter()
            .map(|(k, v)| format!("{k}={}", format_rational(v)))
            .collect();
        write!(f, "{}", items.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExampleInfo {
    pub name: &'static str,
    pub ambient_dim: usize,
    pub summary: &'static str,
}

pub fn list_examples() -> Vec<ExampleInfo> {
    NAMES
        .iter()
        .filter_map(|n| catalogue::spec(n))
        .map(|s| ExampleInfo {
            name: s.name,
            ambient_dim: s.ambient_dim,
            summary: s.summary,
        })
        .collect()
}

pub fn example_spec(name: &str) -> Result<ExampleSpec> {
    catalogue::spec(name).ok_or_else(|| Error::UnknownExample(name.to_string()))
}

/// Planar data on a level set.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub maps: Vec<RationalMap>,
    pub h: RationalFunction,
    /// `ω = du∧dv / omega_den`.
    pub omega_den: RationalFunction,
    pub u: &'static str,
    pub v: &'static str,
    pub levels: Vec<String>,
}

/// One example with every stored formula evaluated and parameters applied.
#[derive(Debug, Clone)]
pub struct ExampleBundle {
    spec: ExampleSpec,
    params: ParameterAssignment,
    doc: Document,
}

/// Parses and evaluates the example, applies `params` and re-verifies the
/// constraint identities of its invariants.
pub fn instantiate(name: &str, params: &ParameterAssignment) -> Result<ExampleBundle> {
    let b = instantiate_unchecked(name, params)?;
    for e in &b.spec.expected {
        if let Expect::Gamma { pair } = e {
            let (l, r) = b.pair(pair)?;
            if !l.equals_exact(&r) {
                return Err(Error::Shape(format!("constraint `{pair}` does not hold")));
            }
        }
    }
    Ok(b)
}

fn instantiate_unchecked(name: &str, params: &ParameterAssignment) -> Result<ExampleBundle> {
    let spec = example_spec(name)?;
    let script = Script::parse(spec.source)?;
    ExampleBundle::from_script(spec, &script, params)
}

/// The stored script of an example, for callers that perturb formulas.
pub fn script(name: &str) -> Result<Script> {
    Script::parse(example_spec(name)?.source)
}

/// Planar maps, invariant and symplectic density of the example's
/// reduction, with the given level values substituted.
pub fn reduced(name: &str, level: &ParameterAssignment) -> Result<Reduction> {
    instantiate(name, level)?.reduction()
}

impl ExampleBundle {
    /// Builds a bundle from an arbitrary script with the example's roles; the
    /// constraint identities are not checked here.
    pub fn from_script(spec: ExampleSpec, script: &Script, params: &ParameterAssignment) -> Result<ExampleBundle> {
        let mut doc = script.evaluate()?;
        for (p, _) in params.iter() {
            if !doc.params.contains(p) {
                return Err(Error::UnknownSymbol(p.clone()));
            }
        }
        if !params.is_empty() {
            let pairs = params.pairs();
            for def in doc.defs.values_mut() {
                let args = param_args(&def.ring, &pairs)?;
                def.value = match &def.value {
                    Value::Scalar(f) => Value::Scalar(f.compose(&args)?),
                    Value::Tuple(fs) => Value::Tuple(fs.iter().map(|f| f.compose(&args)).collect::<Result<_>>()?),
                };
            }
        }
        Ok(ExampleBundle {
            spec,
            params: params.clone(),
            doc,
        })
    }

    pub fn name(&self) -> &'static str {
        self.spec.name
    }

    pub fn spec(&self) -> &ExampleSpec {
        &self.spec
    }

    pub fn ambient_dim(&self) -> usize {
        self.spec.ambient_dim
    }

    pub fn params(&self) -> &ParameterAssignment {
        &self.params
    }

    pub fn document(&self) -> &Document {
        &self.doc
    }

    pub fn expected(&self) -> &[Expect] {
        &self.spec.expected
    }

    pub fn ring_of(&self, name: &str) -> Result<&Ring> {
        self.doc.ring_of(name)
    }

    pub fn scalar(&self, name: &str) -> Result<&RationalFunction> {
        self.doc.scalar(name)
    }

    pub fn tuple(&self, name: &str) -> Result<&[RationalFunction]> {
        self.doc.tuple(name)
    }

    /// The two entries of a stored pair.
    pub fn pair(&self, name: &str) -> Result<(RationalFunction, RationalFunction)> {
        match self.tuple(name)? {
            [l, r] => Ok((l.clone(), r.clone())),
            other => Err(Error::Shape(format!("`{name}` has {} entries, expected 2", other.len()))),
        }
    }

    /// A stored tuple read as a self-map of its block's phase space.
    pub fn map(&self, name: &str) -> Result<RationalMap> {
        RationalMap::endo(name, self.ring_of(name)?, self.tuple(name)?.to_vec())
    }

    /// A stored tuple read as a map into `codomain`.
    pub fn map_into(&self, name: &str, codomain: &Ring) -> Result<RationalMap> {
        RationalMap::new(name, self.ring_of(name)?, codomain, self.tuple(name)?.to_vec())
    }

    pub fn field(&self, name: &str) -> Result<VectorField> {
        VectorField::new(self.ring_of(name)?, self.tuple(name)?.to_vec())
    }

    pub fn ambient_ring(&self) -> Result<&Ring> {
        self.ring_of(self.spec.invariants[0])
    }

    pub fn form(&self, spec: &FormSpec) -> Result<Form> {
        let ring = self.ring_of(spec.ring)?.clone();
        let mut total: Option<Form> = None;
        for (coef, factors) in &spec.terms {
            let c = match coef {
                Coef::Def(n) => {
                    let f = self.scalar(n)?;
                    if !f.ring().same(&ring) {
                        return Err(Error::RingMismatch);
                    }
                    f.clone()
                }
                Coef::Int(n) => RationalFunction::from_int(&ring, *n),
            };
            let mut term = Form::function(&c);
            for x in factors {
                let one = match x {
                    Factor::D(v) => calculus::basis_one_form(&ring, ring.var(v)?),
                    Factor::Df(n) => {
                        let f = self.scalar(n)?;
                        if !f.ring().same(&ring) {
                            return Err(Error::RingMismatch);
                        }
                        calculus::differential(f)
                    }
                };
                term = calculus::wedge(&term, &one)?;
            }
            total = Some(match total {
                None => term,
                Some(t) => t.add(&term)?,
            });
        }
        total.ok_or_else(|| Error::Shape("empty form".into()))
    }

    /// True when every level of the lift is still symbolic.
    pub fn levels_symbolic(&self, levels: &[&str]) -> bool {
        levels.iter().all(|l| self.params.is_symbolic(l))
    }

    /// The reduced map `psi` on the lifted ring where the levels are
    /// coordinates, and the ambient projection onto that ring.
    pub fn lifted(&self, psi: &str, lift: &Lift) -> Result<(RationalMap, RationalMap)> {
        let reduced = self.ring_of(psi)?.clone();
        let lifted = lifted_ring(&reduced, lift.levels)?;
        let args = rename_args(&reduced, &lifted)?;
        let mut comps: Vec<RationalFunction> = self
            .tuple(psi)?
            .iter()
            .map(|c| c.compose(&args))
            .collect::<Result<_>>()?;
        for l in lift.levels {
            comps.push(RationalFunction::var(&lifted, lifted.var(l)?));
        }
        let psi_l = RationalMap::endo(psi, &lifted, comps)?;
        let pi_l = self.lifted_projection(lift, &lifted)?;
        Ok((psi_l, pi_l))
    }

    /// The ambient map onto `lifted` given by a lift's projection tuple.
    pub fn lifted_projection(&self, lift: &Lift, lifted: &Ring) -> Result<RationalMap> {
        let proj = self.tuple(lift.proj)?;
        let comps = match lift.via {
            None => proj.to_vec(),
            Some(via) => {
                let target = self.ring_of(lift.proj)?;
                let v = self.map_into(via, target)?;
                proj.iter().map(|c| v.pullback(c)).collect::<Result<_>>()?
            }
        };
        let domain = comps
            .first()
            .map(|c| c.ring().clone())
            .ok_or_else(|| Error::Shape("empty projection".into()))?;
        let name = match lift.via {
            Some(v) => format!("{}∘{}", lift.proj, v),
            None => lift.proj.to_string(),
        };
        RationalMap::new(&name, &domain, lifted, comps)
    }

    /// A reduced function re-expressed over the lifted ring.
    pub fn lift_function(&self, h: &str, levels: &[&str]) -> Result<RationalFunction> {
        let f = self.scalar(h)?;
        let lifted = lifted_ring(f.ring(), levels)?;
        f.compose(&rename_args(f.ring(), &lifted)?)
    }

    pub fn reduction(&self) -> Result<Reduction> {
        let r = &self.spec.reduced;
        Ok(Reduction {
            maps: r.maps.iter().map(|m| self.map(m)).collect::<Result<_>>()?,
            h: self.scalar(r.h)?.clone(),
            omega_den: self.scalar(r.omega)?.clone(),
            u: r.u,
            v: r.v,
            levels: r.levels.iter().map(|s| s.to_string()).collect(),
        })
    }
}

/// The reduced ring with `levels` moved from the parameters to the end of
/// the phase variables.
pub fn lifted_ring(reduced: &Ring, levels: &[&str]) -> Result<Ring> {
    let mut phase: Vec<String> = reduced.names()[..reduced.phase_count()].to_vec();
    for l in levels {
        let i = reduced.var(l)?;
        if !reduced.is_param(i) {
            return Err(Error::Shape(format!("level `{l}` is not a parameter")));
        }
        phase.push(l.to_string());
    }
    let params: Vec<String> = reduced.names()[reduced.phase_count()..]
        .iter()
        .filter(|p| !levels.contains(&p.as_str()))
        .cloned()
        .collect();
    Ok(Ring::new(&phase, &params))
}

/// Arguments sending each symbol of `from` to the symbol of `to` with the
/// same name.
fn rename_args(from: &Ring, to: &Ring) -> Result<Vec<RationalFunction>> {
    from.names()
        .iter()
        .map(|n| Ok(RationalFunction::var(to, to.var(n)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{frac, int};

    #[test]
    fn six_examples_load_with_their_constraints() {
        let list = list_examples();
        assert_eq!(list.len(), 6);
        let six: Vec<_> = list.iter().filter(|e| e.ambient_dim == 6).map(|e| e.name).collect();
        assert_eq!(six, vec!["mcm6d"]);
        for e in &list {
            instantiate(e.name, &ParameterAssignment::symbolic()).unwrap();
        }
    }

    #[test]
    fn every_referenced_name_exists() {
        for name in NAMES {
            let b = instantiate(name, &ParameterAssignment::symbolic()).unwrap();
            let s = b.spec().clone();
            for n in s.invariants.iter().chain(s.maps).chain(s.fields) {
                b.document().get(n).unwrap();
            }
            b.reduction().unwrap();
        }
    }

    #[test]
    fn mcm4d_phi_at_a_point() {
        let b = instantiate("mcm4d", &ParameterAssignment::symbolic().with("a", int(1))).unwrap();
        let phi = b.map("phi").unwrap();
        let p = [int(1), int(2), int(3), frac(1, 2), int(1)];
        assert_eq!(phi.apply(&p).unwrap(), vec![int(3), frac(1, 2), frac(5, 3), int(6)]);
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(matches!(
            instantiate("nope", &ParameterAssignment::symbolic()),
            Err(Error::UnknownExample(_))
        ));
        let p: ParameterAssignment = "z=1".parse().unwrap();
        assert!(matches!(instantiate("mcm4d", &p), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn parameter_strings_round_trip() {
        let p: ParameterAssignment = "a=1, k=-3/2, b=symbolic".parse().unwrap();
        assert_eq!(p.to_string(), "a=1,k=-3/2");
        assert!(p.is_symbolic("b"));
    }

    #[test]
    fn yb38_phi_bar_is_stored_verbatim() {
        let b = instantiate("yb38", &ParameterAssignment::symbolic()).unwrap();
        let r = b.ring_of("phi_bar").unwrap().clone();
        let expected = crate::expr::parse_expr("y2 + b/y1 - a/x2")
            .unwrap()
            .to_rational_function(&r)
            .unwrap();
        assert!(b.tuple("phi_bar").unwrap()[1].equals_exact(&expected));
    }

    #[test]
    fn lifted_ring_moves_levels() {
        let r = Ring::new(&["r", "s"], &["a", "k1", "k3"]);
        let l = lifted_ring(&r, &["k1", "k3"]).unwrap();
        assert_eq!(l.names(), &["r", "s", "k1", "k3", "a"]);
        assert_eq!(l.phase_count(), 4);
    }
}
