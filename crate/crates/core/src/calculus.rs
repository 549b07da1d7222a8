//! Exact differential operations on rational functions, vector fields and
//! sparse differential forms.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::identity::Mode;
use crate::algebra::linsolve::solve_linear;
use crate::algebra::{Rational, RationalFunction, Ring};
use crate::check::{decide, DegBound, Outcome};
use crate::error::{Error, Result};
use crate::maps::RationalMap;

/// One component per phase variable of the ring.
#[derive(Clone, Debug)]
pub struct VectorField {
    ring: Ring,
    components: Vec<RationalFunction>,
}

impl VectorField {
    pub fn new(ring: &Ring, components: Vec<RationalFunction>) -> Result<Self> {
        if components.len() != ring.phase_count() {
            return Err(Error::Shape(format!(
                "vector field has {} components on a {}-dimensional space",
                components.len(),
                ring.phase_count()
            )));
        }
        if components.iter().any(|c| !c.ring().same(ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(VectorField {
            ring: ring.clone(),
            components,
        })
    }

    pub fn zero(ring: &Ring) -> Self {
        VectorField {
            ring: ring.clone(),
            components: vec![RationalFunction::zero(ring); ring.phase_count()],
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn components(&self) -> &[RationalFunction] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// Derivative of `f` along the field.
    pub fn apply_to(&self, f: &RationalFunction) -> RationalFunction {
        let mut acc = RationalFunction::zero(&self.ring);
        for (i, c) in self.components.iter().enumerate() {
            if !c.is_zero() && f.depends_on(i) {
                acc = &acc + &(c * &f.derivative(i));
            }
        }
        acc
    }

    pub fn scale(&self, f: &RationalFunction) -> Self {
        VectorField {
            ring: self.ring.clone(),
            components: self.components.iter().map(|c| c * f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        VectorField {
            ring: self.ring.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn eval(&self, p: &[Rational]) -> Result<Vec<Rational>> {
        self.components.iter().map(|c| c.eval(p)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub fn partial(f: &RationalFunction, var: usize) -> RationalFunction {
    f.derivative(var)
}

/// Entry `(i, j)` is the derivative of component `i` in phase variable `j`.
pub fn jacobian(m: &RationalMap) -> Vec<Vec<RationalFunction>> {
    m.components()
        .iter()
        .map(|c| (0..m.dim_in()).map(|j| c.derivative(j)).collect())
        .collect()
}

/// Determinant by expansion over column subsets; zero entries are skipped.
pub fn determinant(a: &[Vec<RationalFunction>]) -> Result<RationalFunction> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Err(Error::Shape("determinant of an empty matrix".into()));
    }
    let ring = a[0][0].ring().clone();
    if n > 20 {
        return Err(Error::Shape("matrix too large for subset expansion".into()));
    }
    // dp[mask] sums the signed products of the first popcount(mask) rows over
    // the columns in mask.
    let mut dp: Vec<Option<RationalFunction>> = vec![None; 1 << n];
    dp[0] = Some(RationalFunction::one(&ring));
    for mask in 0usize..(1 << n) {
        let Some(cur) = dp[mask].take() else { continue };
        let row = mask.count_ones() as usize;
        if row == n {
            dp[mask] = Some(cur);
            continue;
        }
        for (c, entry) in a[row].iter().enumerate() {
            if mask & (1 << c) != 0 || entry.is_zero() {
                continue;
            }
            let above = (mask >> (c + 1)).count_ones();
            let mut t = &cur * entry;
            if above % 2 == 1 {
                t = -t;
            }
            let next = mask | (1 << c);
            dp[next] = Some(match dp[next].take() {
                Some(acc) => &acc + &t,
                None => t,
            });
        }
    }
    Ok(dp[(1 << n) - 1].take().unwrap_or_else(|| RationalFunction::zero(&ring)))
}

/// Determinant of a rational matrix by elimination.
pub fn determinant_q(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for j in col..n {
                let t = &f * &a[col][j];
                a[r][j] -= t;
            }
        }
    }
    det
}

/// `Σ ∂(X^i/σ)/∂x_i`; zero exactly when `X ⌟ (dx/σ)` is closed.
pub fn divergence(x: &VectorField, sigma: &RationalFunction) -> Result<RationalFunction> {
    let inv = sigma.inv()?;
    let mut acc = RationalFunction::zero(x.ring());
    for (i, c) in x.components.iter().enumerate() {
        if !c.is_zero() {
            acc = &acc + &(c * &inv).derivative(i);
        }
    }
    Ok(acc)
}

/// `[X, Y]^i = X·∇Y^i − Y·∇X^i`.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> VectorField {
    let comps = (0..x.dim())
        .map(|i| &x.apply_to(&y.components[i]) - &y.apply_to(&x.components[i]))
        .collect();
    VectorField {
        ring: x.ring.clone(),
        components: comps,
    }
}

/// `det J · σ / (σ ∘ m) ≡ ε`: the form `dx/σ` is preserved (ε = 1) or
/// reversed (ε = −1).
pub fn volume_sign(m: &RationalMap, sigma: &RationalFunction, mode: Mode) -> Result<Outcome> {
    if m.dim_in() != m.dim_out() {
        return Err(Error::Shape(format!("`{}` is not a self-map", m.name())));
    }
    let jac = jacobian(m);
    let ring = m.domain().clone();
    let one = RationalFunction::one(&ring);
    decide(
        &ring,
        mode,
        &[1, -1],
        || {
            let det = determinant(&jac)?;
            let w = (&det * sigma).try_div(&m.pullback(sigma)?)?;
            Ok((vec![w], vec![one.clone()]))
        },
        |p| {
            let num: Vec<Vec<Rational>> = jac
                .iter()
                .map(|row| row.iter().map(|e| e.eval(p)).collect::<Result<_>>())
                .collect::<Result<_>>()?;
            let det = determinant_q(num);
            let q = m.apply_full(p)?;
            let s_img = sigma.eval(&q)?;
            if s_img.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(vec![(det * sigma.eval(p)? / s_img, Rational::one())])
        },
        || {
            let b: Vec<Vec<DegBound>> = jac.iter().map(|r| r.iter().map(DegBound::of).collect()).collect();
            DegBound::determinant(&b)
                .mul(DegBound::of(sigma))
                .div(m.pullback_bound(sigma))
                .difference(DegBound::constant())
        },
    )
}

/// Planar version of `volume_sign` for `ω = du∧dv/σ`.
pub fn symplectic_check_2d(m: &RationalMap, sigma: &RationalFunction, mode: Mode) -> Result<Outcome> {
    if m.dim_in() != 2 {
        return Err(Error::Shape(format!("`{}` is not a planar map", m.name())));
    }
    volume_sign(m, sigma, mode)
}

/// Fields `X` on the domain and `Y` on the codomain are `π`-related:
/// `X·∇π_i ≡ Y_i ∘ π`.
pub fn check_related_fields(x: &VectorField, y: &VectorField, pi: &RationalMap) -> Result<Outcome> {
    let lhs: Vec<RationalFunction> = pi.components().iter().map(|c| x.apply_to(c)).collect();
    let rhs: Vec<RationalFunction> = y
        .components
        .iter()
        .map(|c| pi.pullback(c))
        .collect::<Result<_>>()?;
    crate::check::compare(pi.domain(), &lhs, &rhs, &[1], Mode::Exact)
}

/// Solves `σ·∇h_j = 0` for the non-free slots, once per free variable.
///
/// Field `k` is one in slot `free_vars[k]`, zero in the other free slots.
pub fn symmetry_basis(h: &[RationalFunction], free_vars: &[usize]) -> Result<Vec<VectorField>> {
    let Some(first) = h.first() else {
        return Err(Error::Shape("symmetry basis needs at least one function".into()));
    };
    let ring = first.ring().clone();
    let n = ring.phase_count();
    let solved: Vec<usize> = (0..n).filter(|i| !free_vars.contains(i)).collect();
    if solved.len() != h.len() {
        return Err(Error::Shape(format!(
            "{} functions cannot fix {} non-free slots",
            h.len(),
            solved.len()
        )));
    }
    let grads: Vec<Vec<RationalFunction>> = h
        .iter()
        .map(|f| (0..n).map(|i| f.derivative(i)).collect())
        .collect();
    let matrix: Vec<Vec<RationalFunction>> = grads
        .iter()
        .map(|g| solved.iter().map(|&s| g[s].clone()).collect())
        .collect();
    let mut out = Vec::with_capacity(free_vars.len());
    for &f in free_vars {
        let rhs: Vec<RationalFunction> = grads.iter().map(|g| -&g[f]).collect();
        let sol = solve_linear(&matrix, &rhs)?;
        let mut comps = vec![RationalFunction::zero(&ring); n];
        comps[f] = RationalFunction::one(&ring);
        for (k, &s) in solved.iter().enumerate() {
            comps[s] = sol[k].clone();
        }
        out.push(VectorField {
            ring: ring.clone(),
            components: comps,
        });
    }
    Ok(out)
}

/// Coefficients of `x` in a symmetry basis: its components in the free slots.
pub fn basis_coefficients(x: &VectorField, free_vars: &[usize]) -> Vec<RationalFunction> {
    free_vars.iter().map(|&f| x.components[f].clone()).collect()
}

pub fn combine(basis: &[VectorField], coeffs: &[RationalFunction]) -> Option<VectorField> {
    let first = basis.first()?;
    let mut acc = VectorField::zero(first.ring());
    for (b, c) in basis.iter().zip(coeffs) {
        acc = acc.add(&b.scale(c));
    }
    Some(acc)
}

/// A differential form with coefficients over strictly increasing index
/// subsets of the phase variables.
#[derive(Clone, Debug)]
pub struct Form {
    ring: Ring,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, RationalFunction>,
}

/// Sorts `idx` and returns the sign of the sorting permutation, or zero when
/// an index repeats.
fn sort_sign(idx: &mut [usize]) -> i32 {
    let mut sign = 1;
    for i in 0..idx.len() {
        for j in 0..idx.len() - 1 - i {
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                sign = -sign;
            } else if idx[j] == idx[j + 1] {
                return 0;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return 0;
    }
    sign
}

impl Form {
    pub fn zero(ring: &Ring, degree: usize) -> Self {
        Form {
            ring: ring.clone(),
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// `dx_1∧…∧dx_n / σ`.
    pub fn volume(ring: &Ring, sigma: &RationalFunction) -> Result<Self> {
        let n = ring.phase_count();
        Self::from_terms(ring, n, vec![((0..n).collect(), sigma.inv()?)])
    }

    pub fn function(f: &RationalFunction) -> Self {
        let mut coeffs = BTreeMap::new();
        if !f.is_zero() {
            coeffs.insert(Vec::new(), f.clone());
        }
        Form {
            ring: f.ring().clone(),
            degree: 0,
            coeffs,
        }
    }

    /// Builds a form from `coefficient · dx_{i_1}∧…∧dx_{i_k}` terms in any
    /// index order.
    pub fn from_terms(ring: &Ring, degree: usize, terms: Vec<(Vec<usize>, RationalFunction)>) -> Result<Self> {
        let mut f = Form::zero(ring, degree);
        for (mut idx, c) in terms {
            if idx.len() != degree || idx.iter().any(|&i| i >= ring.phase_count()) {
                return Err(Error::Shape(format!("bad wedge index {idx:?} for a {degree}-form")));
            }
            let s = sort_sign(&mut idx);
            if s == 0 {
                continue;
            }
            let c = if s < 0 { -&c } else { c };
            f.add_term(idx, c);
        }
        Ok(f)
    }

    fn add_term(&mut self, idx: Vec<usize>, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        let v = match self.coeffs.remove(&idx) {
            Some(old) => &old + &c,
            None => c,
        };
        if !v.is_zero() {
            self.coeffs.insert(idx, v);
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &RationalFunction)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, idx: &[usize]) -> RationalFunction {
        self.coeffs
            .get(idx)
            .cloned()
            .unwrap_or_else(|| RationalFunction::zero(&self.ring))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        if self.degree != other.degree {
            return Err(Error::Shape("adding forms of different degrees".into()));
        }
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Form {
        self.scale(&RationalFunction::from_int(&self.ring, -1))
    }

    pub fn scale(&self, f: &RationalFunction) -> Form {
        let mut out = Form::zero(&self.ring, self.degree);
        for (k, c) in &self.coeffs {
            out.add_term(k.clone(), c * f);
        }
        out
    }

    /// Compares coefficientwise; a mismatch carries a witness.
    pub fn compare(&self, other: &Form) -> Result<Outcome> {
        if self.degree != other.degree || !self.ring.same(&other.ring) {
            return Err(Error::Shape("comparing incompatible forms".into()));
        }
        let mut keys: Vec<&Vec<usize>> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.sort();
        keys.dedup();
        let lhs: Vec<RationalFunction> = keys.iter().map(|k| self.coefficient(k)).collect();
        let rhs: Vec<RationalFunction> = keys.iter().map(|k| other.coefficient(k)).collect();
        let (l2, r2) = (lhs.clone(), rhs.clone());
        decide(
            &self.ring,
            Mode::Exact,
            &[1],
            move || Ok((lhs, rhs)),
            move |p| {
                l2.iter()
                    .zip(&r2)
                    .map(|(a, b)| Ok((a.eval(p)?, b.eval(p)?)))
                    .collect()
            },
            || 0,
        )
    }

    pub fn equals_exact(&self, other: &Form) -> bool {
        self.degree == other.degree
            && self
                .coeffs
                .keys()
                .chain(other.coeffs.keys())
                .all(|k| self.coefficient(k).equals_exact(&other.coefficient(k)))
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.coeffs.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if !k.is_empty() {
                let basis: Vec<String> = k.iter().map(|&i| format!("d{}", self.ring.name(i))).collect();
                write!(f, " {}", basis.join("∧"))?;
            }
        }
        Ok(())
    }
}

/// Interior product in the first slot:
/// `X ⌟ (c dx_{s_1}∧…∧dx_{s_k}) = Σ_j (−1)^(j−1) c X^{s_j} dx_{s_1}∧…∧(omit s_j)∧…∧dx_{s_k}`.
pub fn contract(x: &VectorField, omega: &Form) -> Result<Form> {
    if !x.ring.same(&omega.ring) {
        return Err(Error::RingMismatch);
    }
    if omega.degree == 0 {
        return Err(Error::Shape("cannot contract a function".into()));
    }
    let mut out = Form::zero(&omega.ring, omega.degree - 1);
    for (idx, c) in &omega.coeffs {
        for (j, &s) in idx.iter().enumerate() {
            let xs = &x.components[s];
            if xs.is_zero() {
                continue;
            }
            let mut rest = idx.clone();
            rest.remove(j);
            let mut t = c * xs;
            if j % 2 == 1 {
                t = -t;
            }
            out.add_term(rest, t);
        }
    }
    Ok(out)
}

pub fn wedge(a: &Form, b: &Form) -> Result<Form> {
    if !a.ring.same(&b.ring) {
        return Err(Error::RingMismatch);
    }
    let mut out = Form::zero(&a.ring, a.degree + b.degree);
    for (ka, ca) in &a.coeffs {
        for (kb, cb) in &b.coeffs {
            let mut idx: Vec<usize> = ka.iter().chain(kb).copied().collect();
            let s = sort_sign(&mut idx);
            if s == 0 {
                continue;
            }
            let mut t = ca * cb;
            if s < 0 {
                t = -t;
            }
            out.add_term(idx, t);
        }
    }
    Ok(out)
}

/// `df` of a function.
pub fn differential(f: &RationalFunction) -> Form {
    let ring = f.ring();
    let mut out = Form::zero(ring, 1);
    for i in 0..ring.phase_count() {
        if f.depends_on(i) {
            out.add_term(vec![i], f.derivative(i));
        }
    }
    out
}

/// `dx_i` as a 1-form.
pub fn basis_one_form(ring: &Ring, i: usize) -> Form {
    let mut out = Form::zero(ring, 1);
    out.add_term(vec![i], RationalFunction::one(ring));
    out
}

/// Pulls a form on the codomain of `m` back to its domain.
pub fn pullback(omega: &Form, m: &RationalMap) -> Result<Form> {
    if omega.ring.phase_count() != m.dim_out() {
        return Err(Error::Shape("form and map dimensions differ".into()));
    }
    let diffs: Vec<Form> = m.components().iter().map(differential).collect();
    let mut out = Form::zero(m.domain(), omega.degree);
    for (idx, c) in &omega.coeffs {
        let mut acc = Form::function(&m.pullback(c)?);
        for &i in idx {
            acc = wedge(&acc, &diffs[i])?;
        }
        out = out.add(&acc)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    fn ring4() -> Ring {
        Ring::new(&["u1", "v1", "u2", "v2"], &[] as &[&str])
    }

    #[test]
    fn contraction_sign_convention() {
        let r = ring4();
        let u1 = RationalFunction::var(&r, 0);
        let v2 = RationalFunction::var(&r, 3);
        let omega = Form::volume(&r, &(&u1 * &v2)).unwrap();
        let mut comps = vec![RationalFunction::zero(&r); 4];
        comps[3] = v2.clone();
        let x = VectorField::new(&r, comps).unwrap();
        let o3 = contract(&x, &omega).unwrap();
        let expected = Form::from_terms(&r, 3, vec![(vec![0, 1, 2], -&u1.inv().unwrap())]).unwrap();
        assert!(o3.equals_exact(&expected), "{o3}");
        assert!(contract(&x, &o3).unwrap().is_zero());
    }

    #[test]
    fn wedge_is_graded_antisymmetric() {
        let r = ring4();
        let a = basis_one_form(&r, 2);
        let b = basis_one_form(&r, 0);
        let ab = wedge(&a, &b).unwrap();
        let ba = wedge(&b, &a).unwrap();
        assert!(ab.equals_exact(&ba.neg()));
        assert!(wedge(&a, &a).unwrap().is_zero());
        assert_eq!(ab.coefficient(&[0, 2]).constant_value(), Some(int(-1)));
    }

    #[test]
    fn divergence_examples() {
        let r = ring4();
        let v: Vec<RationalFunction> = (0..4).map(|i| RationalFunction::var(&r, i)).collect();
        let one = RationalFunction::one(&r);
        let x = VectorField::new(&r, vec![v[0].clone(), -&v[1], -&v[2], v[3].clone()]).unwrap();
        assert!(divergence(&x, &one).unwrap().is_zero());
        let zero = RationalFunction::zero(&r);
        let e = VectorField::new(&r, vec![v[0].clone(), zero.clone(), zero.clone(), zero]).unwrap();
        assert_eq!(divergence(&e, &one).unwrap().constant_value(), Some(int(1)));
    }

    #[test]
    fn determinant_matches_numeric() {
        let r = Ring::new(&["x", "y"], &[] as &[&str]);
        let x = RationalFunction::var(&r, 0);
        let y = RationalFunction::var(&r, 1);
        let one = RationalFunction::one(&r);
        let m = vec![
            vec![x.clone(), y.clone(), one.clone()],
            vec![one.clone(), x.clone(), y.clone()],
            vec![y.clone(), one.clone(), x.clone()],
        ];
        let d = determinant(&m).unwrap();
        let p = [int(2), int(3)];
        let num: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|e| e.eval(&p).unwrap()).collect()).collect();
        assert_eq!(d.eval(&p).unwrap(), determinant_q(num));
    }

    #[test]
    fn trivial_symmetry_basis() {
        let r = ring4();
        let h = vec![RationalFunction::var(&r, 2), RationalFunction::var(&r, 3)];
        let basis = symmetry_basis(&h, &[0, 1]).unwrap();
        let consts: Vec<Vec<Option<Rational>>> = basis
            .iter()
            .map(|b| b.components().iter().map(|c| c.constant_value()).collect())
            .collect();
        assert_eq!(consts[0], vec![Some(int(1)), Some(int(0)), Some(int(0)), Some(int(0))]);
        assert_eq!(consts[1], vec![Some(int(0)), Some(int(1)), Some(int(0)), Some(int(0))]);
    }
}
