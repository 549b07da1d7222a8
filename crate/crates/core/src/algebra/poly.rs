//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept sorted in descending graded-lexicographic order with no zero
//! coefficients, so structurally equal polynomials compare equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::rational::Rational;
use super::ring::Ring;

pub type Exponents = SmallVec<[u16; 16]>;

/// Graded lexicographic comparison; earlier variables rank higher.
pub fn grlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

fn divides(d: &[u16], n: &[u16]) -> bool {
    d.iter().zip(n).all(|(a, b)| a <= b)
}

#[derive(Clone, PartialEq, Eq)]
struct GrKey(Exponents);

impl Ord for GrKey {
    fn cmp(&self, other: &Self) -> Ordering {
        grlex(&self.0, &other.0)
    }
}

impl PartialOrd for GrKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Products with more term pairs than this are split across threads.
const PAR_MUL_THRESHOLD: usize = 1 << 16;

#[derive(Clone)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<(Exponents, Rational)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same(&other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Ring, c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero(ring);
        }
        Polynomial {
            ring: ring.clone(),
            terms: vec![(SmallVec::from_elem(0, ring.len()), c)],
        }
    }

    pub fn from_int(ring: &Ring, c: i64) -> Self {
        Self::constant(ring, Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(ring: &Ring, i: usize) -> Self {
        let mut e: Exponents = SmallVec::from_elem(0, ring.len());
        e[i] = 1;
        Polynomial {
            ring: ring.clone(),
            terms: vec![(e, Rational::one())],
        }
    }

    pub fn monomial(ring: &Ring, exps: Exponents, c: Rational) -> Self {
        assert_eq!(exps.len(), ring.len());
        if c.is_zero() {
            return Self::zero(ring);
        }
        Polynomial {
            ring: ring.clone(),
            terms: vec![(exps, c)],
        }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms<I>(ring: &Ring, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, Rational)>,
    {
        let mut acc: FxHashMap<Exponents, Rational> = FxHashMap::default();
        for (e, c) in terms {
            assert_eq!(e.len(), ring.len(), "exponent arity must match the ring");
            *acc.entry(e).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Ring, acc: FxHashMap<Exponents, Rational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| grlex(&b.0, &a.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    fn from_int_map(ring: &Ring, acc: FxHashMap<Exponents, BigInt>) -> Self {
        let mut terms: Vec<_> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, Rational::from_integer(c)))
            .collect();
        terms.sort_unstable_by(|a, b| grlex(&b.0, &a.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[(Exponents, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0))
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            Some(Rational::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn leading(&self) -> Option<&(Exponents, Rational)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.terms
            .first()
            .map(|t| t.1.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .first()
            .map(|(e, _)| e.iter().map(|&x| x as usize).sum())
            .unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> usize {
        self.terms.iter().map(|(e, _)| e[var] as usize).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, var: usize) -> usize {
        self.terms.iter().map(|(e, _)| e[var] as usize).min().unwrap_or(0)
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.iter().any(|(e, _)| e[var] > 0)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.clone(), x * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, exps: &[u16]) -> Self {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (add_exps(e, exps), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one(&self.ring);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[var] -= 1;
            terms.push((ne, c * Rational::from_integer(BigInt::from(e[var]))));
        }
        // Lowering one exponent preserves relative grlex order among the
        // surviving terms, so no resort is needed.
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Exact evaluation; `point` assigns a value to every ring symbol.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.ring.len());
        if self.terms.is_empty() {
            return Rational::zero();
        }
        let n = self.ring.len();
        // Work over a common denominator per variable so the inner loop only
        // multiplies integers.
        let max_deg: Vec<u16> = (0..n)
            .map(|i| self.terms.iter().map(|(e, _)| e[i]).max().unwrap_or(0))
            .collect();
        let mut num_pows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        let mut den_pows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let d = max_deg[i] as usize;
            num_pows.push(powers(point[i].numer(), d));
            den_pows.push(powers(point[i].denom(), d));
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = BigInt::one();
            for i in 0..n {
                if max_deg[i] == 0 {
                    continue;
                }
                let k = e[i] as usize;
                if k > 0 {
                    t *= &num_pows[i][k];
                }
                let rest = max_deg[i] as usize - k;
                if rest > 0 {
                    t *= &den_pows[i][rest];
                }
            }
            acc += c * Rational::from_integer(t);
        }
        let mut common = BigInt::one();
        for i in 0..n {
            let d = max_deg[i] as usize;
            if d > 0 {
                common *= &den_pows[i][d];
            }
        }
        acc / Rational::from_integer(common)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut t = c.to_f64().unwrap_or(f64::NAN);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= point[i].powi(k as i32);
                }
            }
            acc += t;
        }
        acc
    }

    /// Writes `self = c * p` with `p` integral, primitive, and with a positive
    /// leading coefficient. Returns `(c, p)`; the zero polynomial gives `(0, 0)`.
    pub fn integer_normalize(&self) -> (Rational, Polynomial) {
        if self.is_zero() {
            return (Rational::zero(), self.clone());
        }
        let mut den_lcm = BigInt::one();
        for (_, c) in &self.terms {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for (_, c) in &self.terms {
            let v = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&v);
        }
        let mut content = Rational::new(num_gcd, den_lcm);
        if self.terms[0].1.is_negative() {
            content = -content;
        }
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    /// Componentwise minimum exponent over all terms.
    pub fn monomial_gcd(&self) -> Exponents {
        let n = self.ring.len();
        let mut g: Exponents = SmallVec::from_elem(0, n);
        if let Some((first, _)) = self.terms.first() {
            g.clone_from(first);
            for (e, _) in &self.terms[1..] {
                for i in 0..n {
                    g[i] = g[i].min(e[i]);
                }
            }
        }
        g
    }

    pub fn div_monomial(&self, exps: &[u16]) -> Self {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let ne: Exponents = e.iter().zip(exps).map(|(a, b)| a - b).collect();
                    (ne, c.clone())
                })
                .collect(),
        }
    }

    /// Exact division: `Some(q)` with `self = q * d`, or `None` when `d` does
    /// not divide `self`.
    pub fn exact_div(&self, d: &Polynomial) -> Option<Polynomial> {
        assert!(!d.is_zero(), "exact division by zero polynomial");
        if self.is_zero() {
            return Some(self.clone());
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (d_lt, d_lc) = d.leading().unwrap();
        let (n_lt, _) = self.leading().unwrap();
        if !divides(d_lt, n_lt) {
            return None;
        }
        let d_tt = &d.terms.last().unwrap().0;
        let n_tt = &self.terms.last().unwrap().0;
        if !divides(d_tt, n_tt) {
            return None;
        }
        let n = self.ring.len();
        for v in 0..n {
            if d.degree_in(v) > self.degree_in(v) || d.min_degree_in(v) > self.min_degree_in(v) {
                return None;
            }
        }
        let mut rem: BTreeMap<GrKey, Rational> = self
            .terms
            .iter()
            .map(|(e, c)| (GrKey(e.clone()), c.clone()))
            .collect();
        let mut quot: Vec<(Exponents, Rational)> = Vec::new();
        while let Some((GrKey(lt), lc)) = rem.pop_last() {
            if !divides(d_lt, &lt) {
                return None;
            }
            let qe: Exponents = lt.iter().zip(d_lt).map(|(a, b)| a - b).collect();
            let qc = &lc / d_lc;
            for (e, c) in &d.terms[1..] {
                let key = GrKey(add_exps(e, &qe));
                let delta = c * &qc;
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() -= delta;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(-delta);
                    }
                }
            }
            quot.push((qe, qc));
        }
        Some(Polynomial {
            ring: self.ring.clone(),
            terms: quot,
        })
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `var`:
    /// entry `k` multiplies `var^k` and is free of `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Polynomial> {
        let deg = self.degree_in(var);
        let mut buckets: Vec<Vec<(Exponents, Rational)>> = vec![Vec::new(); deg + 1];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut ne = e.clone();
            ne[var] = 0;
            buckets[k].push((ne, c.clone()));
        }
        buckets
            .into_iter()
            .map(|ts| Polynomial::from_terms(&self.ring, ts))
            .collect()
    }

    /// Total order used to sort factor lists canonically.
    pub fn canonical_cmp(&self, other: &Polynomial) -> Ordering {
        self.terms.len().cmp(&other.terms.len()).then_with(|| {
            for ((ea, ca), (eb, cb)) in self.terms.iter().zip(&other.terms) {
                let o = grlex(ea, eb).then_with(|| ca.cmp(cb));
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
    }

    /// Rebuilds the polynomial over a larger ring whose symbol list is a
    /// superset of this one.
    pub fn embed(&self, target: &Ring) -> crate::error::Result<Polynomial> {
        let map: Vec<usize> = self
            .ring
            .names()
            .iter()
            .map(|n| target.var(n))
            .collect::<crate::error::Result<_>>()?;
        Ok(Polynomial::from_terms(
            target,
            self.terms.iter().map(|(e, c)| {
                let mut ne: Exponents = SmallVec::from_elem(0, target.len());
                for (i, &k) in e.iter().enumerate() {
                    ne[map[i]] = k;
                }
                (ne, c.clone())
            }),
        ))
    }

    fn check_ring(&self, other: &Polynomial) {
        assert!(
            self.ring.same(&other.ring),
            "polynomials over different rings: {:?} vs {:?}",
            self.ring,
            other.ring
        );
    }

    fn add_impl(&self, other: &Polynomial, negate: bool) -> Polynomial {
        self.check_ring(other);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match grlex(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    fn mul_impl(&self, other: &Polynomial) -> Polynomial {
        self.check_ring(other);
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return other.mul_monomial(e).scale(c);
        }
        if other.terms.len() == 1 {
            let (e, c) = &other.terms[0];
            return self.mul_monomial(e).scale(c);
        }
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let work = big.terms.len() * small.terms.len();
        if big.is_integral() && small.is_integral() {
            let bi: Vec<(&Exponents, BigInt)> = big
                .terms
                .iter()
                .map(|(e, c)| (e, c.numer().clone()))
                .collect();
            let si: Vec<(&Exponents, BigInt)> = small
                .terms
                .iter()
                .map(|(e, c)| (e, c.numer().clone()))
                .collect();
            let partial = |chunk: &[(&Exponents, BigInt)]| {
                let mut acc: FxHashMap<Exponents, BigInt> = FxHashMap::default();
                acc.reserve(chunk.len() * si.len());
                for (ea, ca) in chunk {
                    for (eb, cb) in &si {
                        let e = add_exps(ea, eb);
                        let p = ca * cb;
                        match acc.get_mut(&e) {
                            Some(v) => *v += p,
                            None => {
                                acc.insert(e, p);
                            }
                        }
                    }
                }
                acc
            };
            let acc = if work > PAR_MUL_THRESHOLD {
                let chunk = (bi.len() / rayon::current_num_threads().max(1)).max(1);
                bi.par_chunks(chunk)
                    .map(partial)
                    .reduce(FxHashMap::default, merge_int_maps)
            } else {
                partial(&bi)
            };
            return Polynomial::from_int_map(&self.ring, acc);
        }
        let mut acc: FxHashMap<Exponents, Rational> = FxHashMap::default();
        for (ea, ca) in &big.terms {
            for (eb, cb) in &small.terms {
                *acc.entry(add_exps(ea, eb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Polynomial::from_map(&self.ring, acc)
    }
}

fn merge_int_maps(
    mut a: FxHashMap<Exponents, BigInt>,
    b: FxHashMap<Exponents, BigInt>,
) -> FxHashMap<Exponents, BigInt> {
    if a.len() < b.len() {
        return merge_int_maps(b, a);
    }
    for (e, c) in b {
        match a.get_mut(&e) {
            Some(v) => *v += c,
            None => {
                a.insert(e, c);
            }
        }
    }
    a
}

fn add_exps(a: &[u16], b: &[u16]) -> Exponents {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_add(*y).expect("exponent overflow"))
        .collect()
}

fn powers(base: &BigInt, max: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(BigInt::one());
    for k in 1..=max {
        let next = &out[k - 1] * base;
        out.push(next);
    }
    out
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.add_impl(rhs, false)
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.add_impl(rhs, true)
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.mul_impl(rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(self.ring.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.ring.name(i), k)),
                }
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Ring {
        Ring::new(&["x", "y"], &["a"])
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn grlex_orders_by_degree_then_lex() {
        assert_eq!(grlex(&[1, 0], &[0, 2]), Ordering::Less);
        assert_eq!(grlex(&[1, 1], &[0, 2]), Ordering::Greater);
        assert_eq!(grlex(&[2, 0], &[2, 0]), Ordering::Equal);
    }

    #[test]
    fn arithmetic_and_display() {
        let r = ring();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let one = Polynomial::one(&r);
        let p = &(&x + &y) * &(&x - &y);
        assert_eq!(p.to_string(), "x^2 - y^2");
        let s = &(&x + &one).pow(2) - &(&(&x * &x) + &one);
        assert_eq!(s.to_string(), "2*x");
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn exact_division_detects_divisibility() {
        let r = ring();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let a = Polynomial::var(&r, 2);
        let f = &(&x * &y) - &a;
        let g = &(&x + &y) + &Polynomial::one(&r);
        let prod = &f * &g;
        assert_eq!(prod.exact_div(&f).unwrap(), g);
        assert_eq!(prod.exact_div(&g).unwrap(), f);
        assert!(prod.exact_div(&(&x - &a)).is_none());
        assert!((&prod + &Polynomial::one(&r)).exact_div(&f).is_none());
    }

    #[test]
    fn eval_matches_substitution() {
        let r = ring();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let p = &(&x * &x).scale(&q(1, 2)) - &(&y * &Polynomial::var(&r, 2));
        let v = p.eval(&[q(3, 2), q(-2, 5), q(7, 1)]);
        assert_eq!(v, q(9, 8) + q(14, 5));
    }

    #[test]
    fn integer_normalize_extracts_signed_content() {
        let r = ring();
        let x = Polynomial::var(&r, 0);
        let p = (&x.scale(&q(-2, 3)) + &Polynomial::constant(&r, q(4, 9))).clone();
        let (c, prim) = p.integer_normalize();
        assert_eq!(c, q(-2, 9));
        assert_eq!(prim.to_string(), "3*x - 2");
    }

    #[test]
    fn coefficients_in_splits_by_power() {
        let r = ring();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let p = &(&(&x * &x) * &y) + &(&y + &Polynomial::one(&r));
        let cs = p.coefficients_in(0);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[0].to_string(), "y + 1");
        assert!(cs[1].is_zero());
        assert_eq!(cs[2].to_string(), "y");
    }
}
