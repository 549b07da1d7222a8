//! Switch involutions and QRT maps of biquadratic invariants.

use crate::algebra::{Polynomial, RationalFunction, Ring};
use crate::error::{Error, Result};
use crate::maps::RationalMap;

/// A planar invariant whose cleared form `num(h)(u,v)` and `den(h)(u,v)` have
/// degree at most two in each of `u` and `v`.
#[derive(Clone, Debug)]
pub struct BiquadraticInvariant {
    h: RationalFunction,
    u: usize,
    v: usize,
    num: Polynomial,
    den: Polynomial,
}

pub fn validate_biquadratic(h: &RationalFunction, u: &str, v: &str) -> Result<BiquadraticInvariant> {
    let ring = h.ring();
    let (ui, vi) = (ring.var(u)?, ring.var(v)?);
    if ring.is_param(ui) || ring.is_param(vi) || ui == vi {
        return Err(Error::Shape(format!("`{u}` and `{v}` must be distinct phase variables")));
    }
    let num = h.num().clone();
    let den = h.den();
    for (i, name) in [(ui, u), (vi, v)] {
        let degree = num.degree_in(i).max(den.degree_in(i));
        if degree == 0 || degree > 2 {
            return Err(Error::NotBiquadratic {
                var: name.to_string(),
                degree,
            });
        }
    }
    Ok(BiquadraticInvariant {
        h: h.clone(),
        u: ui,
        v: vi,
        num,
        den,
    })
}

impl BiquadraticInvariant {
    pub fn h(&self) -> &RationalFunction {
        &self.h
    }

    pub fn ring(&self) -> &Ring {
        self.h.ring()
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn v(&self) -> usize {
        self.v
    }

    /// Coefficients `p_0, p_1, p_2` of
    /// `P(t) = num(t)·den(w) − num(w)·den(t)` in the slot `var`.
    pub fn switch_polynomial(&self, var: usize) -> [RationalFunction; 3] {
        let ring = self.ring();
        let coeffs = |p: &Polynomial| {
            let mut c = p.coefficients_in(var);
            c.resize(3, Polynomial::zero(ring));
            c
        };
        let (n, d) = (coeffs(&self.num), coeffs(&self.den));
        let nw = RationalFunction::from_poly(self.num.clone());
        let dw = RationalFunction::from_poly(self.den.clone());
        [0, 1, 2].map(|i| {
            &(&RationalFunction::from_poly(n[i].clone()) * &dw) - &(&nw * &RationalFunction::from_poly(d[i].clone()))
        })
    }
}

/// The involution sending `var` to the other root of `h(·, rest) = h(var, rest)`.
///
/// Dividing `P(t)` by `t − w` leaves `p_2·t + (p_1 + p_2·w)`, so the conjugate
/// root is `−(p_1 + p_2·w)/p_2`.
pub fn switch(h: &BiquadraticInvariant, var: &str) -> Result<RationalMap> {
    let ring = h.ring();
    let w = ring.var(var)?;
    if w != h.u && w != h.v {
        return Err(Error::Shape(format!("`{var}` is not a variable of the invariant")));
    }
    let [_, p1, p2] = h.switch_polynomial(w);
    if p2.is_zero() {
        return Err(Error::DegenerateSwitch { var: var.to_string() });
    }
    let x = RationalFunction::var(ring, w);
    let root = -&(&p1 + &(&p2 * &x)).try_div(&p2)?;
    let comps = (0..ring.phase_count())
        .map(|i| if i == w { root.clone() } else { RationalFunction::var(ring, i) })
        .collect();
    RationalMap::endo(&format!("switch_{var}"), ring, comps)
}

/// Horizontal switch, then vertical: `(u, v) ↦ (ũ, ṽ(ũ, v))`.
pub fn build_qrt(h: &BiquadraticInvariant) -> Result<RationalMap> {
    let ring = h.ring();
    let horizontal = switch(h, ring.name(h.u))?;
    let vertical = switch(h, ring.name(h.v))?;
    Ok(RationalMap::compose(&vertical, &horizontal)?.renamed("qrt"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn rf(ring: &Ring, s: &str) -> RationalFunction {
        parse_expr(s).unwrap().to_rational_function(ring).unwrap()
    }

    #[test]
    fn symmetric_switch_negates() {
        let r = Ring::new(&["u", "v"], &[] as &[&str]);
        let h = validate_biquadratic(&rf(&r, "u^2 + v^2"), "u", "v").unwrap();
        let s = switch(&h, "u").unwrap();
        assert_eq!(s.components()[0].to_string(), "-u");
        assert_eq!(s.components()[1].to_string(), "v");
    }

    #[test]
    fn cubic_is_rejected() {
        let r = Ring::new(&["u", "v"], &[] as &[&str]);
        match validate_biquadratic(&rf(&r, "u^3 + v"), "u", "v") {
            Err(Error::NotBiquadratic { var, degree }) => assert_eq!((var.as_str(), degree), ("u", 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn linear_variable_is_degenerate() {
        let r = Ring::new(&["u", "v"], &[] as &[&str]);
        let h = validate_biquadratic(&rf(&r, "u + v^2 + u*v"), "u", "v").unwrap();
        assert!(matches!(switch(&h, "u"), Err(Error::DegenerateSwitch { .. })));
        assert!(switch(&h, "v").is_ok());
    }

    #[test]
    fn mcmillan_switch_matches_closed_form() {
        let r = Ring::new(&["u", "v"], &["a", "k"]);
        let h = rf(&r, "1 - u - (2*a + k)*v + v^2 + (k - v)*v/u");
        let b = validate_biquadratic(&h, "u", "v").unwrap();
        let s = switch(&b, "u").unwrap();
        assert!(s.components()[0].equals_exact(&rf(&r, "v*(v - k)/u")));
    }
}
