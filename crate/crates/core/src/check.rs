//! Shared machinery for tuple identities `lhs ≡ ε·rhs`.

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::identity::{sample_trial, sample_trials, Evidence, Mode, Witness};
use crate::algebra::{Rational, RationalFunction, Ring};
use crate::error::{Error, Result};

const WITNESS_TRIALS: u64 = 256;

/// Upper bounds on the total degrees of a numerator and a denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct DegBound {
    pub num: u64,
    pub den: u64,
}

impl DegBound {
    pub fn of(f: &RationalFunction) -> DegBound {
        let (n, d) = f.degrees();
        DegBound {
            num: n as u64,
            den: d as u64,
        }
    }

    pub fn constant() -> DegBound {
        DegBound::default()
    }

    pub fn mul(self, o: DegBound) -> DegBound {
        DegBound {
            num: self.num + o.num,
            den: self.den + o.den,
        }
    }

    pub fn div(self, o: DegBound) -> DegBound {
        DegBound {
            num: self.num + o.den,
            den: self.den + o.num,
        }
    }

    pub fn add(self, o: DegBound) -> DegBound {
        DegBound {
            num: (self.num + o.den).max(o.num + self.den),
            den: self.den + o.den,
        }
    }

    pub fn sum<I: IntoIterator<Item = DegBound>>(it: I) -> DegBound {
        it.into_iter()
            .reduce(DegBound::add)
            .unwrap_or_default()
    }

    pub fn partial(self) -> DegBound {
        DegBound {
            num: self.num + self.den,
            den: 2 * self.den,
        }
    }

    /// Degree of the numerator of `self - o`.
    pub fn difference(self, o: DegBound) -> u64 {
        (self.num + o.den).max(o.num + self.den)
    }

    /// Bound for `f ∘ g` where argument `j` has bound `args[j]`.
    pub fn compose(f: &RationalFunction, args: &[DegBound]) -> DegBound {
        let mut total = 0u64;
        for (j, a) in args.iter().enumerate() {
            let (dn, dd) = f.degree_in(j);
            let k = dn.max(dd) as u64;
            if k > 0 {
                total += k * a.num.max(a.den).max(1);
            }
        }
        DegBound {
            num: total,
            den: total,
        }
    }

    /// Bound for the determinant of a matrix with entry bounds `m`.
    pub fn determinant(m: &[Vec<DegBound>]) -> DegBound {
        let mut num = 0;
        let mut den = 0;
        for row in m {
            let row_den: u64 = row.iter().map(|b| b.den).sum();
            let row_num = row.iter().map(|b| b.num).max().unwrap_or(0);
            num += row_num + row_den;
            den += row_den;
        }
        DegBound { num, den }
    }
}

/// A witness attached to the failing component.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentWitness {
    pub component: usize,
    pub witness: Witness,
}

/// Result of a tuple identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// The sign ε for which `lhs ≡ ε·rhs` holds.
    pub sign: Option<i32>,
    pub evidence: Evidence,
    pub witness: Option<ComponentWitness>,
}

impl Outcome {
    pub fn holds(&self) -> bool {
        self.witness.is_none() && self.sign.is_some()
    }

    pub fn passed(evidence: Evidence, sign: i32) -> Outcome {
        Outcome {
            sign: Some(sign),
            evidence,
            witness: None,
        }
    }

    pub fn failed(evidence: Evidence, w: ComponentWitness) -> Outcome {
        Outcome {
            sign: None,
            evidence,
            witness: Some(w),
        }
    }
}

type Pairs = Vec<(Rational, Rational)>;

fn pick_witness(ring: &Ring, signs: &[i32], p: &[Rational], vals: &Pairs) -> Option<ComponentWitness> {
    let bad = |l: &Rational, r: &Rational, s: i32| {
        if s > 0 {
            l != r
        } else {
            *l != -r.clone()
        }
    };
    let mk = |i: usize| {
        let (l, r) = &vals[i];
        ComponentWitness {
            component: i,
            witness: Witness::new(ring, p, l.clone(), r.clone()),
        }
    };
    if let Some(i) = (0..vals.len()).find(|&i| signs.iter().all(|&s| bad(&vals[i].0, &vals[i].1, s))) {
        return Some(mk(i));
    }
    (0..vals.len()).find(|&i| bad(&vals[i].0, &vals[i].1, signs[0])).map(mk)
}

fn consistent(vals: &Pairs, s: i32) -> bool {
    vals.iter().all(|(l, r)| {
        if s > 0 {
            l == r
        } else {
            (l + r).is_zero()
        }
    })
}

/// Decides `lhs ≡ ε·rhs` for some ε in `signs` (tried in order).
///
/// In exact mode `exact` builds both tuples symbolically. In randomized mode
/// only `lazy` is used, which evaluates both tuples at a point; `degree`
/// must bound the degree of every component difference numerator.
pub fn decide<E, L>(ring: &Ring, mode: Mode, signs: &[i32], exact: E, lazy: L, degree: impl FnOnce() -> u64) -> Result<Outcome>
where
    E: FnOnce() -> Result<(Vec<RationalFunction>, Vec<RationalFunction>)>,
    L: Fn(&[Rational]) -> Result<Pairs> + Sync,
{
    match mode {
        Mode::Exact => {
            let (lhs, rhs) = exact()?;
            for &s in signs {
                let ok = lhs.iter().zip(&rhs).all(|(l, r)| {
                    if s > 0 {
                        l.equals_exact(r)
                    } else {
                        l.equals_exact(&-r)
                    }
                });
                if ok {
                    return Ok(Outcome::passed(Evidence::exact(), s));
                }
            }
            // Locate a point where the failure is visible.
            for t in 0..WITNESS_TRIALS {
                let (p, vals) = sample_trial(ring.len(), 0, t, &lazy)?;
                if let Some(w) = pick_witness(ring, signs, &p, &vals) {
                    return Ok(Outcome::failed(Evidence::exact(), w));
                }
            }
            Err(Error::SamplingExhausted {
                attempts: WITNESS_TRIALS as usize,
            })
        }
        Mode::Randomized { trials, seed } => {
            let samples = sample_trials(ring.len(), trials, seed, &lazy)?;
            let evidence = Evidence::randomized(trials, seed, degree());
            for &s in signs {
                if samples.iter().all(|(_, v)| consistent(v, s)) {
                    return Ok(Outcome::passed(evidence, s));
                }
            }
            for (p, v) in &samples {
                if let Some(w) = pick_witness(ring, signs, p, v) {
                    return Ok(Outcome::failed(evidence, w));
                }
            }
            // Each sample matches some sign but no single sign fits them all.
            let w = signs
                .iter()
                .flat_map(|s| samples.iter().map(move |(p, v)| (s, p, v)))
                .find_map(|(s, p, v)| pick_witness(ring, std::slice::from_ref(s), p, v))
                .expect("inconsistent signs leave a mismatch");
            Ok(Outcome::failed(evidence, w))
        }
    }
}

/// Decides `lhs ≡ ε·rhs` componentwise for tuples that are already built.
pub fn compare(ring: &Ring, lhs: &[RationalFunction], rhs: &[RationalFunction], signs: &[i32], mode: Mode) -> Result<Outcome> {
    if lhs.len() != rhs.len() {
        return Err(Error::Shape(format!("comparing {} components with {}", lhs.len(), rhs.len())));
    }
    if lhs.iter().chain(rhs).any(|f| !f.ring().same(ring)) {
        return Err(Error::RingMismatch);
    }
    decide(
        ring,
        mode,
        signs,
        || Ok((lhs.to_vec(), rhs.to_vec())),
        |p| {
            lhs.iter()
                .zip(rhs)
                .map(|(l, r)| Ok((l.eval(p)?, r.eval(p)?)))
                .collect()
        },
        || {
            lhs.iter()
                .zip(rhs)
                .map(|(l, r)| DegBound::of(l).difference(DegBound::of(r)))
                .max()
                .unwrap_or(0)
        },
    )
}

/// Decides `fs ≡ 0` componentwise.
pub fn vanishes(ring: &Ring, fs: &[RationalFunction], mode: Mode) -> Result<Outcome> {
    let zeros = vec![RationalFunction::zero(ring); fs.len()];
    compare(ring, fs, &zeros, &[1], mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decide_reports_sign_and_witness() {
        let r = Ring::new(&["x"], &[] as &[&str]);
        let x = RationalFunction::var(&r, 0);
        let lazy = |p: &[Rational]| Ok(vec![(-p[0].clone(), p[0].clone())]);
        for mode in [Mode::Exact, Mode::randomized(10, 1)] {
            let o = decide(&r, mode, &[1, -1], || Ok((vec![-&x], vec![x.clone()])), lazy, || 1).unwrap();
            assert_eq!(o.sign, Some(-1));
            assert!(o.holds());
            let o = decide(&r, mode, &[1], || Ok((vec![-&x], vec![x.clone()])), lazy, || 1).unwrap();
            assert!(!o.holds());
            let w = o.witness.unwrap();
            assert_eq!(w.component, 0);
            assert_eq!(w.witness.lhs, -w.witness.rhs.clone());
        }
    }

    #[test]
    fn degree_bounds_compose() {
        let a = DegBound { num: 2, den: 1 };
        let b = DegBound { num: 1, den: 3 };
        assert_eq!(a.add(b), DegBound { num: 5, den: 4 });
        assert_eq!(a.mul(b), DegBound { num: 3, den: 4 });
        assert_eq!(a.div(b), DegBound { num: 5, den: 2 });
        assert_eq!(a.difference(b), 5);
    }
}
