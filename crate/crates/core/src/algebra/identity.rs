//! Exact and randomized identity testing for rational functions.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::ratfun::RationalFunction;
use super::rational::{format_rational, Rational};
use super::ring::Ring;
use crate::error::{Error, Result};

/// Sample numerators and denominators are drawn from `[1, 2^SAMPLE_BITS]`.
pub const SAMPLE_BITS: u32 = 32;

/// Rejection attempts per trial before giving up on a point.
const MAX_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Randomized { trials: usize, seed: u64 },
}

impl Mode {
    pub fn randomized(trials: usize, seed: u64) -> Mode {
        Mode::Randomized { trials, seed }
    }

    /// Same mode with a different seed; exact mode is unchanged.
    pub fn with_seed(self, seed: u64) -> Mode {
        match self {
            Mode::Exact => Mode::Exact,
            Mode::Randomized { trials, .. } => Mode::Randomized { trials, seed },
        }
    }
}

/// How an equality verdict was reached.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub mode: Mode,
    /// Upper bound on the total degree of the difference numerator.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<u64>,
    /// Schwartz–Zippel bound for one trial: `degree_bound / 2^32`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_trial_bound: Option<f64>,
    /// `log10` of the bound for all trials together.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_bound_log10: Option<f64>,
}

impl Evidence {
    pub fn exact() -> Evidence {
        Evidence {
            mode: Mode::Exact,
            degree_bound: None,
            per_trial_bound: None,
            total_bound_log10: None,
        }
    }

    pub fn randomized(trials: usize, seed: u64, degree: u64) -> Evidence {
        let per = degree as f64 / 2f64.powi(SAMPLE_BITS as i32);
        let total = if per <= 0.0 {
            f64::NEG_INFINITY
        } else {
            per.log10() * trials as f64
        };
        Evidence {
            mode: Mode::Randomized { trials, seed },
            degree_bound: Some(degree),
            per_trial_bound: Some(per),
            total_bound_log10: Some(total),
        }
    }
}

/// A point where two sides differ, with both values.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub point: Vec<(String, Rational)>,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl Witness {
    pub fn new(ring: &Ring, point: &[Rational], lhs: Rational, rhs: Rational) -> Witness {
        Witness {
            point: ring
                .names()
                .iter()
                .cloned()
                .zip(point.iter().cloned())
                .collect(),
            lhs,
            rhs,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let point: serde_json::Map<String, serde_json::Value> = self
            .point
            .iter()
            .map(|(n, v)| (n.clone(), serde_json::Value::String(format_rational(v))))
            .collect();
        serde_json::json!({
            "point": point,
            "lhs": format_rational(&self.lhs),
            "rhs": format_rational(&self.rhs),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Equal(Evidence),
    Unequal(Witness),
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Unequal(w) => Some(w),
            Verdict::Equal(_) => None,
        }
    }
}

fn sample_value<R: Rng>(rng: &mut R) -> Rational {
    let hi = 1u64 << SAMPLE_BITS;
    let n = rng.gen_range(1..=hi);
    let d = rng.gen_range(1..=hi);
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Deterministic random point generator: trial `i` of seed `s` always sees
/// the same candidate sequence.
pub struct Sampler {
    rng: ChaCha8Rng,
    width: usize,
}

impl Sampler {
    pub fn new(width: usize, seed: u64, stream: u64) -> Sampler {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Sampler { rng, width }
    }

    pub fn point(&mut self) -> Vec<Rational> {
        (0..self.width).map(|_| sample_value(&mut self.rng)).collect()
    }
}

/// Evaluates at one point of a trial stream, skipping points that hit a
/// denominator locus.
pub fn sample_trial<T, F>(width: usize, seed: u64, trial: u64, eval: &F) -> Result<(Vec<Rational>, T)>
where
    F: Fn(&[Rational]) -> Result<T>,
{
    let mut sampler = Sampler::new(width, seed, trial);
    for _ in 0..MAX_ATTEMPTS {
        let p = sampler.point();
        match eval(&p) {
            Ok(v) => return Ok((p, v)),
            Err(Error::DenominatorVanishes { .. }) | Err(Error::DivisionByZero) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::SamplingExhausted {
        attempts: MAX_ATTEMPTS,
    })
}

/// Runs `trials` independent samples in parallel; results are in trial order.
pub fn sample_trials<T, F>(width: usize, trials: usize, seed: u64, eval: &F) -> Result<Vec<(Vec<Rational>, T)>>
where
    T: Send,
    F: Fn(&[Rational]) -> Result<T> + Sync,
{
    (0..trials as u64)
        .into_par_iter()
        .map(|t| sample_trial(width, seed, t, eval))
        .collect()
}

/// Randomized identity test of two sides given only by evaluation.
///
/// `degree_bound` must bound the total degree of the numerator of
/// `lhs - rhs` for the reported probability bound to be valid.
pub fn test_lazy<F>(ring: &Ring, degree_bound: u64, trials: usize, seed: u64, eval: F) -> Result<Verdict>
where
    F: Fn(&[Rational]) -> Result<(Rational, Rational)> + Sync,
{
    for (p, (l, r)) in sample_trials(ring.len(), trials, seed, &eval)? {
        if l != r {
            return Ok(Verdict::Unequal(Witness::new(ring, &p, l, r)));
        }
    }
    Ok(Verdict::Equal(Evidence::randomized(trials, seed, degree_bound)))
}

/// Looks for a witness of a known inequality.
pub fn find_witness<F>(ring: &Ring, seed: u64, eval: F) -> Result<Witness>
where
    F: Fn(&[Rational]) -> Result<(Rational, Rational)>,
{
    // A nonzero numerator vanishes on a vanishingly small fraction of the
    // sample space, so a handful of trials suffices.
    for t in 0..256u64 {
        let (p, (l, r)) = sample_trial(ring.len(), seed, t, &eval)?;
        if l != r {
            return Ok(Witness::new(ring, &p, l, r));
        }
    }
    Err(Error::SamplingExhausted { attempts: 256 })
}

/// Degree bound on the numerator of `f - g`.
pub fn difference_degree(f: &RationalFunction, g: &RationalFunction) -> u64 {
    let (nf, df) = f.degrees();
    let (ng, dg) = g.degrees();
    (nf + dg).max(ng + df) as u64
}

pub fn rf_equal(f: &RationalFunction, g: &RationalFunction, mode: Mode) -> Result<Verdict> {
    if !f.ring().same(g.ring()) {
        return Err(Error::RingMismatch);
    }
    let eval = |p: &[Rational]| Ok((f.eval(p)?, g.eval(p)?));
    match mode {
        Mode::Exact => {
            if f.equals_exact(g) {
                Ok(Verdict::Equal(Evidence::exact()))
            } else {
                Ok(Verdict::Unequal(find_witness(f.ring(), 0, eval)?))
            }
        }
        Mode::Randomized { trials, seed } => {
            test_lazy(f.ring(), difference_degree(f, g), trials, seed, eval)
        }
    }
}
