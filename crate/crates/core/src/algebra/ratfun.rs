//! Rational functions with a factored denominator.
//!
//! A value is `num / (scale * f_1^e_1 * ... * f_m^e_m)` where
//! - `num` has integer coefficients and `gcd(content(num), scale) = 1`,
//! - `scale` is a positive integer,
//! - every `f_i` is a non-constant, primitive integer polynomial with positive
//!   leading coefficient, the `f_i` are pairwise distinct and sorted
//!   canonically, and every `e_i > 0`,
//! - zero is stored as `0 / 1` with no factors.
//!
//! There is no multivariate gcd. Common factors are cancelled only when a
//! stored denominator factor divides the numerator exactly, so two equal
//! functions may have different representations; equality goes through the
//! numerator of the difference.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::poly::{Exponents, Polynomial};
use super::rational::Rational;
use super::ring::Ring;
use crate::error::{Error, Result};

type Factors = Vec<(Polynomial, u32)>;

#[derive(Clone)]
pub struct RationalFunction {
    ring: Ring,
    num: Polynomial,
    scale: BigInt,
    factors: Factors,
}

fn is_single_var(p: &Polynomial) -> Option<usize> {
    if p.len() != 1 || !p.terms()[0].1.is_one() {
        return None;
    }
    let e = &p.terms()[0].0;
    let mut hit = None;
    for (i, &k) in e.iter().enumerate() {
        match (k, hit) {
            (0, _) => {}
            (1, None) => hit = Some(i),
            _ => return None,
        }
    }
    hit
}

/// Adds `p^e` to a factor list while keeping the product of the list
/// multiplied by exactly `p^e`. `p` must be primitive with positive leading
/// coefficient. Exponent zero is allowed and only refines the basis.
fn insert_factor(list: &mut Factors, p: Polynomial, e: u32) {
    let mut work = vec![(p, e)];
    'outer: while let Some((p, e)) = work.pop() {
        if p.is_constant() {
            continue;
        }
        let mut i = 0;
        while i < list.len() {
            let f = &list[i].0;
            if *f == p {
                list[i].1 += e;
                continue 'outer;
            }
            let (dp, df) = (p.total_degree(), f.total_degree());
            if dp > df {
                if let Some(q) = p.exact_div(f) {
                    list[i].1 += e;
                    work.push((q.integer_normalize().1, e));
                    continue 'outer;
                }
            } else if df > dp {
                if let Some(q) = f.exact_div(&p) {
                    let (_, ef) = list.swap_remove(i);
                    work.push((q.integer_normalize().1, ef));
                    work.push((p, e + ef));
                    continue 'outer;
                }
            }
            i += 1;
        }
        list.push((p, e));
    }
}

fn sort_factors(list: &mut Factors) {
    list.retain(|(_, e)| *e > 0);
    list.sort_by(|a, b| a.0.canonical_cmp(&b.0));
}

/// Splits a nonzero polynomial into a rational constant and primitive
/// factors: single variables for the monomial content plus one remaining
/// factor.
fn split_poly(p: &Polynomial) -> (Rational, Vec<(Polynomial, u32)>) {
    let ring = p.ring();
    let (c, prim) = p.integer_normalize();
    let m = prim.monomial_gcd();
    let mut out = Vec::new();
    for (i, &k) in m.iter().enumerate() {
        if k > 0 {
            out.push((Polynomial::var(ring, i), k as u32));
        }
    }
    let rest = if m.iter().any(|&k| k > 0) {
        prim.div_monomial(&m)
    } else {
        prim
    };
    if !rest.is_constant() {
        out.push((rest, 1));
    }
    (c, out)
}

fn poly_pow_cached(
    cache: &mut HashMap<(usize, u32), Polynomial>,
    key: usize,
    base: &Polynomial,
    k: u32,
) -> Polynomial {
    if k == 0 {
        return Polynomial::one(base.ring());
    }
    if k == 1 {
        return base.clone();
    }
    if let Some(p) = cache.get(&(key, k)) {
        return p.clone();
    }
    let half = poly_pow_cached(cache, key, base, k / 2);
    let mut p = &half * &half;
    if k % 2 == 1 {
        p = &p * base;
    }
    cache.insert((key, k), p.clone());
    p
}

impl RationalFunction {
    pub fn zero(ring: &Ring) -> Self {
        RationalFunction {
            ring: ring.clone(),
            num: Polynomial::zero(ring),
            scale: BigInt::one(),
            factors: Vec::new(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Ring, c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(ring, c))
    }

    pub fn from_int(ring: &Ring, c: i64) -> Self {
        Self::constant(ring, Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(ring: &Ring, i: usize) -> Self {
        Self::from_poly(Polynomial::var(ring, i))
    }

    pub fn symbol(ring: &Ring, name: &str) -> Result<Self> {
        Ok(Self::var(ring, ring.var(name)?))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let ring = p.ring().clone();
        Self::assemble(&ring, p, Rational::one(), Vec::new())
    }

    /// `num / den`; fails when `den` is the zero polynomial.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ring = num.ring().clone();
        let (c, fs) = split_poly(&den);
        Ok(Self::assemble(&ring, num, c, fs))
    }

    /// Builds `num / (c * Π f^e)` from arbitrary nonzero polynomial factors
    /// and restores every representation invariant.
    fn assemble(ring: &Ring, num: Polynomial, c: Rational, raw: Factors) -> Self {
        if num.is_zero() {
            return Self::zero(ring);
        }
        let mut konst = c;
        let mut list: Factors = Vec::new();
        for (f, e) in raw {
            if e == 0 {
                continue;
            }
            let (fc, parts) = split_poly(&f);
            konst *= pow_rational(&fc, e);
            for (p, k) in parts {
                insert_factor(&mut list, p, k * e);
            }
        }
        Self::finish(ring, num, konst, list)
    }

    /// Like `assemble` but `list` already satisfies the factor invariants
    /// except possibly ordering and zero exponents.
    fn finish(ring: &Ring, num: Polynomial, konst: Rational, mut list: Factors) -> Self {
        if num.is_zero() {
            return Self::zero(ring);
        }
        let mut num = num;
        for (f, e) in list.iter_mut() {
            if let Some(v) = is_single_var(f) {
                let k = (*e).min(num.min_degree_in(v) as u32);
                if k > 0 {
                    let mut m: Exponents = smallvec::SmallVec::from_elem(0, ring.len());
                    m[v] = k as u16;
                    num = num.div_monomial(&m);
                    *e -= k;
                }
                continue;
            }
            while *e > 0 {
                match num.exact_div(f) {
                    Some(q) => {
                        num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        sort_factors(&mut list);
        let (nc, prim) = num.integer_normalize();
        let k = nc / konst;
        let num = prim.scale(&Rational::from_integer(k.numer().clone()));
        RationalFunction {
            ring: ring.clone(),
            num,
            scale: k.denom().clone(),
            factors: list,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Integer numerator.
    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    /// Expanded denominator `scale * Π f^e`.
    pub fn den(&self) -> Polynomial {
        let mut d = Polynomial::constant(&self.ring, Rational::from_integer(self.scale.clone()));
        for (f, e) in &self.factors {
            d = &d * &f.pow(*e);
        }
        d
    }

    pub fn den_scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn den_factors(&self) -> &[(Polynomial, u32)] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if !self.factors.is_empty() {
            return None;
        }
        self.num
            .constant_value()
            .map(|c| c / Rational::from_integer(self.scale.clone()))
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// Polynomial part when the denominator is a constant.
    pub fn as_polynomial(&self) -> Option<Polynomial> {
        if !self.factors.is_empty() {
            return None;
        }
        let inv = Rational::new(BigInt::one(), self.scale.clone());
        Some(self.num.scale(&inv))
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.num.depends_on(var) || self.factors.iter().any(|(f, _)| f.depends_on(var))
    }

    /// Total degrees of the numerator and of the expanded denominator.
    pub fn degrees(&self) -> (usize, usize) {
        let d = self
            .factors
            .iter()
            .map(|(f, e)| f.total_degree() * *e as usize)
            .sum();
        (self.num.total_degree(), d)
    }

    /// Degrees in one variable of the numerator and expanded denominator.
    pub fn degree_in(&self, var: usize) -> (usize, usize) {
        let d = self
            .factors
            .iter()
            .map(|(f, e)| f.degree_in(var) * *e as usize)
            .sum();
        (self.num.degree_in(var), d)
    }

    /// Rebuilds the representation from scratch; a no-op on valid values.
    pub fn normalize(&self) -> Self {
        Self::assemble(
            &self.ring,
            self.num.clone(),
            Rational::from_integer(self.scale.clone()),
            self.factors.clone(),
        )
    }

    fn check_ring(&self, other: &Self) {
        assert!(
            self.ring.same(&other.ring),
            "rational functions over different rings: {:?} vs {:?}",
            self.ring,
            other.ring
        );
    }

    /// Refines two factor lists against each other without changing either
    /// product, then returns the lcm list.
    fn common_denominator(&self, other: &Self) -> (Factors, Factors, Factors) {
        let mut a = self.factors.clone();
        for (p, _) in &other.factors {
            insert_factor(&mut a, p.clone(), 0);
        }
        let mut b = other.factors.clone();
        for (p, _) in &a {
            insert_factor(&mut b, p.clone(), 0);
        }
        sort_factors(&mut a);
        sort_factors(&mut b);
        let mut l = a.clone();
        for (p, e) in &b {
            match l.iter_mut().find(|(f, _)| f == p) {
                Some(slot) => slot.1 = slot.1.max(*e),
                None => l.push((p.clone(), *e)),
            }
        }
        (a, b, l)
    }

    fn cofactor(l: &Factors, part: &Factors, ring: &Ring) -> Polynomial {
        let mut out = Polynomial::one(ring);
        for (f, e) in l {
            let have = part.iter().find(|(g, _)| g == f).map(|x| x.1).unwrap_or(0);
            if *e > have {
                out = &out * &f.pow(e - have);
            }
        }
        out
    }

    /// Numerators of `self` and `other` brought over a common denominator:
    /// returns `(n1, n2, scale, factors)` with
    /// `self = n1 / (scale Π f^e)` and `other = n2 / (scale Π f^e)`.
    fn over_common(&self, other: &Self) -> (Polynomial, Polynomial, BigInt, Factors) {
        self.check_ring(other);
        let (a, b, l) = self.common_denominator(other);
        let s = self.scale.lcm(&other.scale);
        let ca = Self::cofactor(&l, &a, &self.ring)
            .scale(&Rational::from_integer(&s / &self.scale));
        let cb = Self::cofactor(&l, &b, &self.ring)
            .scale(&Rational::from_integer(&s / &other.scale));
        (&self.num * &ca, &other.num * &cb, s, l)
    }

    /// Numerator of `self - other` over the lcm of the two denominators; it
    /// is the zero polynomial exactly when the functions are equal.
    pub fn numerator_of_difference(&self, other: &Self) -> Polynomial {
        let (n1, n2, _, _) = self.over_common(other);
        &n1 - &n2
    }

    pub fn equals_exact(&self, other: &Self) -> bool {
        if self.factors == other.factors && self.scale == other.scale {
            return self.num == other.num;
        }
        self.numerator_of_difference(other).is_zero()
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other } else { other.clone() };
        }
        let (n1, n2, s, l) = self.over_common(other);
        let n = if negate { &n1 - &n2 } else { &n1 + &n2 };
        Self::finish(&self.ring, n, Rational::from_integer(s), l)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        self.check_ring(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring);
        }
        // Cancel each numerator against the other's denominator first so the
        // product stays small.
        let left = Self::finish(
            &self.ring,
            self.num.clone(),
            Rational::one(),
            other.factors.clone(),
        );
        let right = Self::finish(
            &self.ring,
            other.num.clone(),
            Rational::one(),
            self.factors.clone(),
        );
        let mut list = left.factors.clone();
        for (p, e) in &right.factors {
            insert_factor(&mut list, p.clone(), *e);
        }
        let konst = Rational::new(left.scale * right.scale, BigInt::one())
            * Rational::from_integer(&self.scale * &other.scale);
        let num = &left.num * &right.num;
        Self::finish(&self.ring, num, konst, list)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut num = Polynomial::constant(&self.ring, Rational::from_integer(self.scale.clone()));
        for (f, e) in &self.factors {
            num = &num * &f.pow(*e);
        }
        let (c, parts) = split_poly(&self.num);
        let mut list = Vec::new();
        for (p, k) in parts {
            insert_factor(&mut list, p, k);
        }
        Ok(Self::finish(&self.ring, num, c, list))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_impl(&other.inv()?))
    }

    pub fn pow(&self, n: i32) -> Result<Self> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        let n = n as u32;
        if n == 0 {
            return Ok(Self::one(&self.ring));
        }
        Ok(RationalFunction {
            ring: self.ring.clone(),
            num: self.num.pow(n),
            scale: num_traits::pow(self.scale.clone(), n as usize),
            factors: self.factors.iter().map(|(f, e)| (f.clone(), e * n)).collect(),
        })
    }

    pub fn scale_by(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let k = c / Rational::from_integer(self.scale.clone());
        let num = self.num.scale(&Rational::from_integer(k.numer().clone()));
        let (nc, prim) = num.integer_normalize();
        let k2 = nc / Rational::from_integer(k.denom().clone());
        RationalFunction {
            ring: self.ring.clone(),
            num: prim.scale(&Rational::from_integer(k2.numer().clone())),
            scale: k2.denom().clone(),
            factors: self.factors.clone(),
        }
    }

    /// Exact value; the first vanishing denominator factor is reported.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        let mut den = Rational::from_integer(self.scale.clone());
        for (f, e) in &self.factors {
            let v = f.eval(point);
            if v.is_zero() {
                return Err(Error::DenominatorVanishes {
                    locus: f.to_string(),
                });
            }
            den *= pow_rational(&v, *e);
        }
        Ok(self.num.eval(point) / den)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let mut den = super::rational::to_f64(&Rational::from_integer(self.scale.clone()));
        for (f, e) in &self.factors {
            den *= f.eval_f64(point).powi(*e as i32);
        }
        self.num.eval_f64(point) / den
    }

    pub fn derivative(&self, var: usize) -> Self {
        let dn = self.num.derivative(var);
        let active: Vec<usize> = (0..self.factors.len())
            .filter(|&i| self.factors[i].0.depends_on(var))
            .collect();
        if active.is_empty() {
            return Self::finish(
                &self.ring,
                dn,
                Rational::from_integer(self.scale.clone()),
                self.factors.clone(),
            );
        }
        // d(n/(sΠf^e)) = (n'R - n Σ e_k f_k' R/f_k) / (sΠf^e R) with R the
        // product of the factors that depend on `var`.
        let mut r = Polynomial::one(&self.ring);
        for &i in &active {
            r = &r * &self.factors[i].0;
        }
        let mut sum = Polynomial::zero(&self.ring);
        for &i in &active {
            let (f, e) = &self.factors[i];
            let mut rest = Polynomial::one(&self.ring);
            for &j in &active {
                if j != i {
                    rest = &rest * &self.factors[j].0;
                }
            }
            let term = (&f.derivative(var) * &rest)
                .scale(&Rational::from_integer(BigInt::from(*e)));
            sum = &sum + &term;
        }
        let num = &(&dn * &r) - &(&self.num * &sum);
        let mut list = self.factors.clone();
        for &i in &active {
            list[i].1 += 1;
        }
        Self::finish(
            &self.ring,
            num,
            Rational::from_integer(self.scale.clone()),
            list,
        )
    }

    /// Substitutes `args[i]` for ring symbol `i`. Arguments may live over a
    /// different ring; the result lives over theirs.
    pub fn compose(&self, args: &[RationalFunction]) -> Result<Self> {
        if args.len() != self.ring.len() {
            return Err(Error::Shape(format!(
                "composition needs {} arguments, got {}",
                self.ring.len(),
                args.len()
            )));
        }
        let target = args
            .first()
            .map(|a| a.ring.clone())
            .unwrap_or_else(|| self.ring.clone());
        if args.iter().any(|a| !a.ring.same(&target)) {
            return Err(Error::RingMismatch);
        }
        let mut ctx = Substitution::new(&target, args);
        let num = ctx.poly(&self.num);
        let mut den = RationalFunction::constant(&target, Rational::from_integer(self.scale.clone()));
        for (f, e) in &self.factors {
            let fg = ctx.poly(f);
            if fg.is_zero() {
                return Err(Error::IdenticallySingular {
                    detail: format!("denominator factor {f} vanishes after substitution"),
                });
            }
            den = &den * &fg.pow(*e as i32)?;
        }
        num.try_div(&den)
    }

    /// Re-expresses the function over a ring whose symbols include this one's.
    pub fn embed(&self, target: &Ring) -> Result<Self> {
        let num = self.num.embed(target)?;
        let mut list = Vec::with_capacity(self.factors.len());
        for (f, e) in &self.factors {
            list.push((f.embed(target)?, *e));
        }
        Ok(Self::finish(
            target,
            num,
            Rational::from_integer(self.scale.clone()),
            list,
        ))
    }
}

fn pow_rational(r: &Rational, e: u32) -> Rational {
    num_traits::pow(r.clone(), e as usize)
}

/// Shared state for substituting one argument tuple into several
/// polynomials: split denominators and cached powers.
struct Substitution<'a> {
    ring: Ring,
    args: &'a [RationalFunction],
    basis: Factors,
    /// Per argument: exponent of each basis factor in its denominator.
    den_exps: Vec<Vec<u32>>,
    num_pows: HashMap<(usize, u32), Polynomial>,
    basis_pows: HashMap<(usize, u32), Polynomial>,
}

impl<'a> Substitution<'a> {
    fn new(ring: &Ring, args: &'a [RationalFunction]) -> Self {
        let mut basis: Factors = Vec::new();
        for a in args {
            for (p, _) in &a.factors {
                insert_factor(&mut basis, p.clone(), 0);
            }
        }
        // Express every argument's factors over the refined basis.
        let mut den_exps = Vec::with_capacity(args.len());
        for a in args {
            let mut exps = vec![0u32; basis.len()];
            for (p, e) in &a.factors {
                let mut rest = p.clone();
                for (bi, (b, _)) in basis.iter().enumerate() {
                    while !rest.is_constant() {
                        match rest.exact_div(b) {
                            Some(q) => {
                                rest = q;
                                exps[bi] += e;
                            }
                            None => break,
                        }
                    }
                }
                debug_assert!(rest.is_constant());
            }
            den_exps.push(exps);
        }
        Substitution {
            ring: ring.clone(),
            args,
            basis,
            den_exps,
            num_pows: HashMap::new(),
            basis_pows: HashMap::new(),
        }
    }

    fn poly(&mut self, p: &Polynomial) -> RationalFunction {
        let nb = self.basis.len();
        let n = self.args.len();
        if p.is_zero() {
            return RationalFunction::zero(&self.ring);
        }
        // Denominator exponent of every term, then the common maximum.
        let mut term_exps: Vec<Vec<u32>> = Vec::with_capacity(p.len());
        let mut l = vec![0u32; nb];
        let mut scale_l = BigInt::one();
        for (m, _) in p.terms() {
            let mut e = vec![0u32; nb];
            for j in 0..n {
                if m[j] > 0 {
                    for (b, slot) in e.iter_mut().enumerate() {
                        *slot += self.den_exps[j][b] * m[j] as u32;
                    }
                }
            }
            for b in 0..nb {
                l[b] = l[b].max(e[b]);
            }
            scale_l = scale_l.lcm(&self.term_scale(m));
            term_exps.push(e);
        }
        let mut acc = Polynomial::zero(&self.ring);
        for ((m, c), e) in p.terms().iter().zip(&term_exps) {
            let mut t = Polynomial::constant(
                &self.ring,
                c * Rational::from_integer(&scale_l / self.term_scale(m)),
            );
            for j in 0..n {
                if m[j] > 0 {
                    let pw = poly_pow_cached(&mut self.num_pows, j, &self.args[j].num, m[j] as u32);
                    t = &t * &pw;
                }
            }
            for b in 0..nb {
                let k = l[b] - e[b];
                if k > 0 {
                    let base = self.basis[b].0.clone();
                    let pw = poly_pow_cached(&mut self.basis_pows, b, &base, k);
                    t = &t * &pw;
                }
            }
            acc = &acc + &t;
        }
        let list: Factors = self
            .basis
            .iter()
            .zip(&l)
            .map(|((f, _), &k)| (f.clone(), k))
            .collect();
        RationalFunction::finish(&self.ring, acc, Rational::from_integer(scale_l), list)
    }

    fn term_scale(&self, m: &[u16]) -> BigInt {
        let mut s = BigInt::one();
        for (j, &k) in m.iter().enumerate() {
            if k > 0 && !self.args[j].scale.is_one() {
                s *= num_traits::pow(self.args[j].scale.clone(), k as usize);
            }
        }
        s
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same(&other.ring) && self.equals_exact(other)
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &'a RationalFunction) -> RationalFunction {
        self.add_impl(rhs, false)
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &'a RationalFunction) -> RationalFunction {
        self.add_impl(rhs, true)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &'a RationalFunction) -> RationalFunction {
        self.mul_impl(rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            ring: self.ring.clone(),
            num: -&self.num,
            scale: self.scale.clone(),
            factors: self.factors.clone(),
        }
    }
}

impl Add for RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: RationalFunction) -> RationalFunction {
        &self + &rhs
    }
}

impl Sub for RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: RationalFunction) -> RationalFunction {
        &self - &rhs
    }
}

impl Mul for RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: RationalFunction) -> RationalFunction {
        &self * &rhs
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

fn paren_if_sum(p: &Polynomial) -> String {
    if p.len() > 1 {
        format!("({p})")
    } else {
        p.to_string()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() && self.scale.is_one() {
            return write!(f, "{}", self.num);
        }
        let mut parts: Vec<String> = Vec::new();
        if !self.scale.is_one() {
            parts.push(self.scale.to_string());
        }
        for (p, e) in &self.factors {
            let base = paren_if_sum(p);
            if *e == 1 {
                parts.push(base);
            } else {
                parts.push(format!("{base}^{e}"));
            }
        }
        let den = parts.join("*");
        let den = if parts.len() > 1 { format!("({den})") } else { den };
        write!(f, "{}/{}", paren_if_sum(&self.num), den)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::frac;

    fn ring() -> Ring {
        Ring::new(&["x", "y"], &["a"])
    }

    fn v(r: &Ring, i: usize) -> RationalFunction {
        RationalFunction::var(r, i)
    }

    #[test]
    fn cancels_exact_factors() {
        let r = ring();
        let (x, y) = (v(&r, 0), v(&r, 1));
        let f = &x - &y;
        let g = (&(&x * &x) - &(&y * &y)).try_div(&f).unwrap();
        assert!(g.is_polynomial());
        assert_eq!(g.to_string(), "x + y");
        let h = (&x * &y).try_div(&(&x * &x)).unwrap();
        assert_eq!(h.to_string(), "y/x");
    }

    #[test]
    fn sign_and_content_normalization() {
        let r = ring();
        let (x, y) = (v(&r, 0), v(&r, 1));
        let two = RationalFunction::from_int(&r, 2);
        let f = (&x * &two).try_div(&(&(-&y) * &RationalFunction::from_int(&r, 6))).unwrap();
        assert_eq!(f.to_string(), "-x/(3*y)");
        assert!(f.den().leading_coeff() > Rational::zero());
        let g = x.try_div(&(&y - &x)).unwrap();
        assert_eq!(g.den_factors()[0].0.to_string(), "x - y");
        assert_eq!(g.num().to_string(), "-x");
    }

    #[test]
    fn addition_over_shared_factors() {
        let r = ring();
        let (x, y) = (v(&r, 0), v(&r, 1));
        let one = RationalFunction::one(&r);
        let f = one.try_div(&(&x + &one)).unwrap();
        let g = y.try_div(&(&x + &one)).unwrap();
        let s = &f + &g;
        assert_eq!(s.to_string(), "(y + 1)/(x + 1)");
        let back = &s - &g;
        assert!(back.equals_exact(&f));
        assert!((&s - &s).is_zero());
    }

    #[test]
    fn eval_reports_vanishing_locus() {
        let r = ring();
        let (x, y) = (v(&r, 0), v(&r, 1));
        let f = x.try_div(&(&(&x * &y) - &RationalFunction::one(&r))).unwrap();
        assert_eq!(
            f.eval(&[frac(2, 1), frac(1, 3), frac(0, 1)]).unwrap(),
            frac(-6, 1)
        );
        match f.eval(&[frac(2, 1), frac(1, 2), frac(0, 1)]) {
            Err(Error::DenominatorVanishes { locus }) => assert_eq!(locus, "x*y - 1"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn derivative_quotient_rule() {
        let r = Ring::new(&["u", "v"], &["k"]);
        let (u, vv, k) = (v(&r, 0), v(&r, 1), v(&r, 2));
        let f = (&vv * &(&vv - &k)).try_div(&u).unwrap();
        let d = f.derivative(0);
        let expected = -&(&vv * &(&vv - &k)).try_div(&(&u * &u)).unwrap();
        assert!(d.equals_exact(&expected));
    }

    #[test]
    fn composition_substitutes_rational_arguments() {
        let r = ring();
        let (x, y, a) = (v(&r, 0), v(&r, 1), v(&r, 2));
        let one = RationalFunction::one(&r);
        let f = (&x + &a).try_div(&(&y - &one)).unwrap();
        let args = vec![
            y.try_div(&x).unwrap(),
            &x + &one,
            a.clone(),
        ];
        let g = f.compose(&args).unwrap();
        let expected = (&y + &(&a * &x)).try_div(&(&x * &x)).unwrap();
        assert!(g.equals_exact(&expected), "{g}");
        let bad = vec![x.clone(), one.clone(), a.clone()];
        assert!(matches!(
            f.compose(&bad),
            Err(Error::IdenticallySingular { .. })
        ));
    }

    #[test]
    fn inverse_and_power() {
        let r = ring();
        let (x, y) = (v(&r, 0), v(&r, 1));
        let f = (&x + &y).try_div(&(&x * &y)).unwrap();
        let g = f.pow(-2).unwrap();
        assert!((&g * &f.pow(2).unwrap()).equals_exact(&RationalFunction::one(&r)));
        assert_eq!(RationalFunction::zero(&r).inv(), Err(Error::DivisionByZero));
    }
}
