//! Univariate polynomials for evaluation, and sparse multivariate polynomials
//! for the symbolic degree algebra used to derive map invariants.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `c_0 + c_1 z + ... + c_m z^m` with `m >= 1` and `c_m != 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly1 {
    coeffs: Vec<Complex64>,
}

impl Poly1 {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidMap("polynomial coefficients must be finite".into()));
        }
        match coeffs.last() {
            Some(lead) if *lead != ZERO && coeffs.len() >= 2 => Ok(Poly1 { coeffs }),
            Some(lead) if *lead == ZERO => {
                Err(Error::InvalidMap("leading polynomial coefficient is zero".into()))
            }
            _ => Err(Error::InvalidMap("polynomial degree must be at least 1".into())),
        }
    }

    /// Real-coefficient convenience constructor.
    pub fn real(coeffs: &[f64]) -> Result<Self> {
        Poly1::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `z^2 + c`.
    pub fn quadratic(c: Complex64) -> Self {
        Poly1 { coeffs: vec![c, ZERO, Complex64::new(1.0, 0.0)] }
    }

    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().expect("nonempty")
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn deriv(&self, z: Complex64) -> Complex64 {
        let m = self.coeffs.len();
        let mut acc = ZERO;
        for k in (1..m).rev() {
            acc = acc * z + self.coeffs[k] * k as f64;
        }
        acc
    }

    pub fn to_multi(&self, nvars: usize, var: usize) -> MultiPoly {
        let x = MultiPoly::var(nvars, var);
        let mut out = MultiPoly::zero(nvars);
        let mut power = MultiPoly::constant(nvars, Complex64::new(1.0, 0.0));
        for &c in &self.coeffs {
            out = out.add(&power.scale(c));
            power = power.mul(&x);
        }
        out
    }
}

/// Sparse polynomial in `nvars` variables keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Complex64>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Complex64) -> Self {
        let mut p = MultiPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = MultiPoly::zero(nvars);
        p.add_term(e, Complex64::new(1.0, 0.0));
        p
    }

    pub fn monomial(exps: Vec<u32>, c: Complex64) -> Self {
        let mut p = MultiPoly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Complex64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Vec<u32>, c: Complex64) {
        if c == ZERO {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                // only exact cancellation prunes a term
                if *o.get() == ZERO {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut out = MultiPoly::constant(self.nvars, Complex64::new(1.0, 0.0));
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Substitutes `subs[i]` for variable `i`.
    pub fn compose(&self, subs: &[MultiPoly]) -> MultiPoly {
        assert_eq!(subs.len(), self.nvars);
        let target = subs.first().map_or(self.nvars, |s| s.nvars);
        let mut out = MultiPoly::zero(target);
        for (e, &c) in &self.terms {
            let mut term = MultiPoly::constant(target, c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&subs[i].pow(k));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// The homogeneous part of total degree exactly `deg`.
    pub fn homogeneous_part(&self, deg: u32) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, &c) in &self.terms {
            if e.iter().sum::<u32>() == deg {
                out.add_term(e.clone(), c);
            }
        }
        out
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        let mut s = ZERO;
        for (e, &c) in &self.terms {
            let mut t = c;
            for (xi, &k) in x.iter().zip(e) {
                t *= xi.powu(k);
            }
            s += t;
        }
        s
    }

    /// Sets variable `i` to zero.
    pub fn restrict_zero(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, &c) in &self.terms {
            if e[i] == 0 {
                out.add_term(e.clone(), c);
            }
        }
        out
    }

    /// Variables that appear with a positive exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|e| e[i] > 0)).collect()
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn poly1_rejects_degenerate_input() {
        assert!(Poly1::real(&[1.0]).is_err());
        assert!(Poly1::real(&[1.0, 0.0]).is_err());
        assert!(Poly1::real(&[]).is_err());
        assert_eq!(Poly1::real(&[-6.0, 0.0, 1.0]).unwrap().degree(), 2);
    }

    #[test]
    fn horner_and_derivative() {
        let p = Poly1::real(&[-6.0, 0.0, 1.0]).unwrap();
        assert_eq!(p.eval(c(3.0)), c(3.0));
        assert_eq!(p.deriv(c(3.0)), c(6.0));
    }

    #[test]
    fn composition_degrees_multiply() {
        // (y^2 - 6) composed with itself has degree 4
        let p = Poly1::real(&[-6.0, 0.0, 1.0]).unwrap().to_multi(1, 0);
        let pp = p.compose(&[p.clone()]);
        assert_eq!(pp.total_degree(), Some(4));
        assert_eq!(pp.eval(&[c(1.0)]), c(19.0));
    }

    #[test]
    fn homogeneous_part_and_restriction() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let q = x.mul(&x).add(&x.mul(&y)).add(&y).add(&MultiPoly::constant(2, c(2.0)));
        let h = q.homogeneous_part(2);
        assert_eq!(h.support_vars(), vec![0, 1]);
        assert_eq!(h.restrict_zero(0).is_zero(), true);
        assert_eq!(q.total_degree(), Some(2));
    }
}
