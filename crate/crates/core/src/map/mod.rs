//! Built-in families of regular polynomial automorphisms.
//!
//! Conventions:
//!
//! * Hénon stage: `h(x, y) = (y, p(y) - a x)`, inverse `(x, y) -> ((p(x) - y)/a, x)`,
//!   Jacobian determinant `+a`. A composition applies `stages[0]` first and
//!   has determinant `prod a_i`.
//! * Fornæss–Wu `H1 = (P(x,y) + a z, Q(y) + x, y)` with determinant `a`;
//!   `H2 = (P(x,y) + a z, Q(x) + b y, x)` with determinant `-a b`.
//! * Shift-like `f(z_1..z_n) = (z_2, .., z_n, p(z_n) + a z_1)` with
//!   determinant `(-1)^(n-1) a`.
//!
//! Degrees of `f` and `f^-1` are read off the symbolic compositions, never
//! from sampling.

mod indeterminacy;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMat, CPoint, MAX_DIM};
use crate::poly::{MultiPoly, Poly1};

pub use indeterminacy::{locus_at_infinity, Indeterminacy};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Marker returned when an iterate leaves the representable range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Escaped;

fn checked(p: CPoint) -> Result<CPoint, Escaped> {
    if p.is_escaped() {
        Err(Escaped)
    } else {
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HenonStage {
    pub p: Poly1,
    pub a: Complex64,
}

impl HenonStage {
    pub fn new(p: Poly1, a: Complex64) -> Result<Self> {
        if a == ZERO {
            return Err(Error::InvalidMap("Hénon stage with a = 0 is not invertible".into()));
        }
        if p.degree() < 2 {
            return Err(Error::InvalidMap("Hénon stage polynomial must have degree >= 2".into()));
        }
        Ok(HenonStage { p, a })
    }

    fn apply(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        (y, self.p.eval(y) - self.a * x)
    }

    fn unapply(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        ((self.p.eval(x) - y) / self.a, x)
    }

    fn jacobian(&self, y: Complex64) -> CMat {
        CMat::from_rows(&[&[ZERO, ONE], &[-self.a, self.p.deriv(y)]])
    }

    fn inverse_jacobian(&self, x: Complex64) -> CMat {
        CMat::from_rows(&[&[self.p.deriv(x) / self.a, -ONE / self.a], &[ONE, ZERO]])
    }
}

/// Coefficients `c_ij` of `P(x, y) = sum c_ij x^i y^j` with `i + j <= 2`.
///
/// `P` must have degree two in each variable separately (`c_20 != 0` and
/// `c_02 != 0`); mixed terms of total degree above two are rejected since
/// they would raise `deg f` above two.
#[derive(Clone, Debug, PartialEq)]
pub struct PTable {
    terms: Vec<(u32, u32, Complex64)>,
}

impl PTable {
    pub fn new(terms: Vec<(u32, u32, Complex64)>) -> Result<Self> {
        let mut merged: Vec<(u32, u32, Complex64)> = Vec::new();
        for (i, j, c) in terms {
            if i + j > 2 {
                return Err(Error::InvalidMap(format!(
                    "P term x^{i} y^{j} has total degree above two"
                )));
            }
            match merged.iter_mut().find(|t| t.0 == i && t.1 == j) {
                Some(t) => t.2 += c,
                None => merged.push((i, j, c)),
            }
        }
        merged.retain(|t| t.2 != ZERO);
        merged.sort_by_key(|t| (t.0, t.1));
        let has = |i, j| merged.iter().any(|t| t.0 == i && t.1 == j);
        if !has(2, 0) || !has(0, 2) {
            return Err(Error::InvalidMap(
                "P must have degree two in each variable (x^2 and y^2 terms)".into(),
            ));
        }
        Ok(PTable { terms: merged })
    }

    pub fn terms(&self) -> &[(u32, u32, Complex64)] {
        &self.terms
    }

    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.terms.iter().map(|&(i, j, c)| c * x.powu(i) * y.powu(j)).sum()
    }

    pub fn dx(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.terms
            .iter()
            .filter(|t| t.0 > 0)
            .map(|&(i, j, c)| c * (i as f64) * x.powu(i - 1) * y.powu(j))
            .sum()
    }

    pub fn dy(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.terms
            .iter()
            .filter(|t| t.1 > 0)
            .map(|&(i, j, c)| c * (j as f64) * x.powu(i) * y.powu(j - 1))
            .sum()
    }

    fn to_multi(&self, x: &MultiPoly, y: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(x.nvars());
        for &(i, j, c) in &self.terms {
            out = out.add(&x.pow(i).mul(&y.pow(j)).scale(c));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FwKind {
    H1,
    H2,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    HenonComposition { stages: Vec<HenonStage> },
    FornaessWu { kind: FwKind, p: PTable, q: Poly1, a: Complex64, b: Complex64 },
    ShiftLike { p: Poly1, a: Complex64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::HenonComposition { .. } => "henon",
            Family::FornaessWu { kind: FwKind::H1, .. } => "fornaess-wu-h1",
            Family::FornaessWu { kind: FwKind::H2, .. } => "fornaess-wu-h2",
            Family::ShiftLike { .. } => "shift-like",
        }
    }
}

/// Forward or backward iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn reverse(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// A holomorphic self-map of `C^n` with a Jacobian.
pub trait Dynamics: Sync {
    fn dim(&self) -> usize;
    fn step(&self, p: &CPoint) -> Result<CPoint, Escaped>;
    fn jacobian(&self, p: &CPoint) -> CMat;
}

/// A regular polynomial automorphism with its derived invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct MapSpec {
    family: Family,
    n: usize,
    degree: u32,
    inverse_degree: u32,
    regularity_index: Option<u32>,
    jacobian_det: Complex64,
    i_plus: Indeterminacy,
    i_minus: Indeterminacy,
}

impl MapSpec {
    /// Composition `h_m o ... o h_1` of Hénon stages, `stages[0]` applied first.
    pub fn henon_composition(stages: Vec<HenonStage>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::InvalidMap("Hénon composition needs at least one stage".into()));
        }
        for s in &stages {
            HenonStage::new(s.p.clone(), s.a)?;
        }
        let det = stages.iter().map(|s| s.a).product();
        MapSpec::finish(Family::HenonComposition { stages }, 2, det)
    }

    /// Single stage `(x, y) -> (y, p(y) - a x)`.
    pub fn henon(p: Poly1, a: Complex64) -> Result<Self> {
        MapSpec::henon_composition(vec![HenonStage::new(p, a)?])
    }

    /// `(x, y) -> (y, y^2 + c - a x)` with real parameters.
    pub fn henon_quadratic(c: f64, a: f64) -> Result<Self> {
        MapSpec::henon(Poly1::quadratic(Complex64::new(c, 0.0)), Complex64::new(a, 0.0))
    }

    pub fn fornaess_wu(kind: FwKind, p: PTable, q: Poly1, a: Complex64, b: Complex64) -> Result<Self> {
        if a == ZERO {
            return Err(Error::InvalidMap("Fornæss–Wu map needs a != 0".into()));
        }
        if kind == FwKind::H2 && b == ZERO {
            return Err(Error::InvalidMap("Fornæss–Wu H2 needs b != 0".into()));
        }
        if q.degree() != 2 {
            return Err(Error::InvalidMap("Fornæss–Wu Q must have degree two".into()));
        }
        let det = match kind {
            FwKind::H1 => a,
            FwKind::H2 => -a * b,
        };
        MapSpec::finish(Family::FornaessWu { kind, p, q, a, b }, 3, det)
    }

    pub fn shift_like(n: usize, p: Poly1, a: Complex64) -> Result<Self> {
        if !(2..=MAX_DIM).contains(&n) {
            return Err(Error::InvalidMap(format!("shift-like dimension must be in 2..={MAX_DIM}")));
        }
        if a == ZERO {
            return Err(Error::InvalidMap("shift-like map needs a != 0".into()));
        }
        if p.degree() < 2 {
            return Err(Error::InvalidMap("shift-like polynomial must have degree >= 2".into()));
        }
        let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
        MapSpec::finish(Family::ShiftLike { p, a }, n, a * sign)
    }

    fn finish(family: Family, n: usize, jacobian_det: Complex64) -> Result<Self> {
        let mut m = MapSpec {
            family,
            n,
            degree: 0,
            inverse_degree: 0,
            regularity_index: None,
            jacobian_det,
            i_plus: Indeterminacy::Unknown,
            i_minus: Indeterminacy::Unknown,
        };
        let fwd = m.forward_poly();
        let inv = m.inverse_poly();
        m.degree = max_degree(&fwd);
        m.inverse_degree = max_degree(&inv);
        if m.degree < 2 {
            return Err(Error::InvalidMap(format!("degree {} is not > 1", m.degree)));
        }
        m.regularity_index = regularity_index(m.degree, m.inverse_degree, n);
        m.i_plus = locus_at_infinity(&fwd, m.degree);
        m.i_minus = locus_at_infinity(&inv, m.inverse_degree);
        Ok(m)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn inverse_degree(&self) -> u32 {
        self.inverse_degree
    }

    pub fn degree_in(&self, dir: Direction) -> u32 {
        match dir {
            Direction::Forward => self.degree,
            Direction::Backward => self.inverse_degree,
        }
    }

    /// Smallest `l` in `1..n` with `d^l = (d^-)^(n-l)`.
    pub fn regularity_index(&self) -> Option<u32> {
        self.regularity_index
    }

    pub fn det_df(&self) -> Complex64 {
        self.jacobian_det
    }

    /// `(I^+, I^-)`.
    pub fn indeterminacy_sets(&self) -> (&Indeterminacy, &Indeterminacy) {
        (&self.i_plus, &self.i_minus)
    }

    pub fn indeterminacy_disjoint(&self) -> Option<bool> {
        self.i_plus.disjoint(&self.i_minus)
    }

    /// Degree > 1 and `I^+ ∩ I^- = ∅` as computed by homogenisation.
    pub fn is_regular(&self) -> bool {
        self.degree > 1 && self.indeterminacy_disjoint() == Some(true)
    }

    /// Human-readable warning when the computed data contradict regularity.
    pub fn regularity_warning(&self) -> Option<String> {
        let mut msgs = Vec::new();
        if self.regularity_index.is_none() {
            msgs.push(format!(
                "no integer l with {}^l = {}^({}-l)",
                self.degree, self.inverse_degree, self.n
            ));
        }
        match self.indeterminacy_disjoint() {
            Some(false) => msgs.push("I+ and I- intersect".to_string()),
            None => msgs.push("indeterminacy loci could not be resolved".to_string()),
            Some(true) => {}
        }
        (!msgs.is_empty()).then(|| msgs.join("; "))
    }

    pub fn eval_forward(&self, p: &CPoint) -> Result<CPoint, Escaped> {
        debug_assert_eq!(p.dim(), self.n);
        let out = match &self.family {
            Family::HenonComposition { stages } => {
                let (mut x, mut y) = (p[0], p[1]);
                for s in stages {
                    (x, y) = s.apply(x, y);
                }
                CPoint::new(&[x, y])
            }
            Family::FornaessWu { kind, p: pt, q, a, b } => {
                let (x, y, z) = (p[0], p[1], p[2]);
                match kind {
                    FwKind::H1 => CPoint::new(&[pt.eval(x, y) + a * z, q.eval(y) + x, y]),
                    FwKind::H2 => CPoint::new(&[pt.eval(x, y) + a * z, q.eval(x) + b * y, x]),
                }
            }
            Family::ShiftLike { p: poly, a } => {
                let n = self.n;
                let mut out = CPoint::zeros(n);
                for i in 0..n - 1 {
                    out[i] = p[i + 1];
                }
                out[n - 1] = poly.eval(p[n - 1]) + a * p[0];
                out
            }
        };
        checked(out)
    }

    pub fn eval_inverse(&self, p: &CPoint) -> Result<CPoint, Escaped> {
        debug_assert_eq!(p.dim(), self.n);
        let out = match &self.family {
            Family::HenonComposition { stages } => {
                let (mut x, mut y) = (p[0], p[1]);
                for s in stages.iter().rev() {
                    (x, y) = s.unapply(x, y);
                }
                CPoint::new(&[x, y])
            }
            Family::FornaessWu { kind, p: pt, q, a, b } => {
                let (u, v, w) = (p[0], p[1], p[2]);
                match kind {
                    FwKind::H1 => {
                        let x = v - q.eval(w);
                        CPoint::new(&[x, w, (u - pt.eval(x, w)) / a])
                    }
                    FwKind::H2 => {
                        let y = (v - q.eval(w)) / b;
                        CPoint::new(&[w, y, (u - pt.eval(w, y)) / a])
                    }
                }
            }
            Family::ShiftLike { p: poly, a } => {
                let n = self.n;
                let mut out = CPoint::zeros(n);
                out[0] = (p[n - 1] - poly.eval(p[n - 2])) / a;
                for i in 1..n {
                    out[i] = p[i - 1];
                }
                out
            }
        };
        checked(out)
    }

    pub fn eval(&self, dir: Direction, p: &CPoint) -> Result<CPoint, Escaped> {
        match dir {
            Direction::Forward => self.eval_forward(p),
            Direction::Backward => self.eval_inverse(p),
        }
    }

    /// `Df(p)`; row `i` holds the partial derivatives of component `i`.
    pub fn jacobian(&self, p: &CPoint) -> CMat {
        match &self.family {
            Family::HenonComposition { stages } => {
                let (mut x, mut y) = (p[0], p[1]);
                let mut acc = CMat::identity(2);
                for s in stages {
                    acc = s.jacobian(y).mul(&acc);
                    (x, y) = s.apply(x, y);
                }
                acc
            }
            Family::FornaessWu { kind, p: pt, q, a, b } => {
                let (x, y) = (p[0], p[1]);
                match kind {
                    FwKind::H1 => CMat::from_rows(&[
                        &[pt.dx(x, y), pt.dy(x, y), *a],
                        &[ONE, q.deriv(y), ZERO],
                        &[ZERO, ONE, ZERO],
                    ]),
                    FwKind::H2 => CMat::from_rows(&[
                        &[pt.dx(x, y), pt.dy(x, y), *a],
                        &[q.deriv(x), *b, ZERO],
                        &[ONE, ZERO, ZERO],
                    ]),
                }
            }
            Family::ShiftLike { p: poly, a } => {
                let n = self.n;
                let mut m = CMat::zeros(n);
                for i in 0..n - 1 {
                    m.set(i, i + 1, ONE);
                }
                m.set(n - 1, 0, *a);
                let last = m.get(n - 1, n - 1) + poly.deriv(p[n - 1]);
                m.set(n - 1, n - 1, last);
                m
            }
        }
    }

    /// `D(f^-1)(p)`, computed from the closed-form inverse.
    pub fn inverse_jacobian(&self, p: &CPoint) -> CMat {
        match &self.family {
            Family::HenonComposition { stages } => {
                let (mut x, mut y) = (p[0], p[1]);
                let mut acc = CMat::identity(2);
                for s in stages.iter().rev() {
                    acc = s.inverse_jacobian(x).mul(&acc);
                    (x, y) = s.unapply(x, y);
                }
                let _ = y;
                acc
            }
            Family::FornaessWu { kind, p: pt, q, a, b } => {
                let (v, w) = (p[1], p[2]);
                match kind {
                    FwKind::H1 => {
                        let x = v - q.eval(w);
                        let (px, py) = (pt.dx(x, w), pt.dy(x, w));
                        let qp = q.deriv(w);
                        CMat::from_rows(&[
                            &[ZERO, ONE, -qp],
                            &[ZERO, ZERO, ONE],
                            &[ONE / a, -px / a, (px * qp - py) / a],
                        ])
                    }
                    FwKind::H2 => {
                        let y = (v - q.eval(w)) / b;
                        let (px, py) = (pt.dx(w, y), pt.dy(w, y));
                        let qp = q.deriv(w);
                        CMat::from_rows(&[
                            &[ZERO, ZERO, ONE],
                            &[ZERO, ONE / b, -qp / b],
                            &[ONE / a, -py / (a * b), -(px - py * qp / b) / a],
                        ])
                    }
                }
            }
            Family::ShiftLike { p: poly, a } => {
                let n = self.n;
                let mut m = CMat::zeros(n);
                m.set(0, n - 1, ONE / a);
                let prev = m.get(0, n - 2) - poly.deriv(p[n - 2]) / a;
                m.set(0, n - 2, prev);
                for i in 1..n {
                    m.set(i, i - 1, ONE);
                }
                m
            }
        }
    }

    pub fn jacobian_in(&self, dir: Direction, p: &CPoint) -> CMat {
        match dir {
            Direction::Forward => self.jacobian(p),
            Direction::Backward => self.inverse_jacobian(p),
        }
    }

    /// The components of `f` as symbolic polynomials.
    pub fn forward_poly(&self) -> Vec<MultiPoly> {
        let n = self.n;
        let vars: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(n, i)).collect();
        match &self.family {
            Family::HenonComposition { stages } => {
                let mut cur = vars;
                for s in stages {
                    let py = s.p.to_multi(1, 0).compose(&[cur[1].clone()]);
                    let next = vec![cur[1].clone(), py.sub(&cur[0].scale(s.a))];
                    cur = next;
                }
                cur
            }
            Family::FornaessWu { kind, p: pt, q, a, b } => {
                let (x, y, z) = (&vars[0], &vars[1], &vars[2]);
                let pxy = pt.to_multi(x, y).add(&z.scale(*a));
                match kind {
                    FwKind::H1 => vec![pxy, q.to_multi(n, 1).add(x), y.clone()],
                    FwKind::H2 => vec![pxy, q.to_multi(n, 0).add(&y.scale(*b)), x.clone()],
                }
            }
            Family::ShiftLike { p: poly, a } => {
                let mut out: Vec<MultiPoly> = vars[1..].to_vec();
                out.push(poly.to_multi(n, n - 1).add(&vars[0].scale(*a)));
                out
            }
        }
    }

    /// The components of `f^-1` as symbolic polynomials.
    pub fn inverse_poly(&self) -> Vec<MultiPoly> {
        let n = self.n;
        let vars: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(n, i)).collect();
        match &self.family {
            Family::HenonComposition { stages } => {
                let mut cur = vars;
                for s in stages.iter().rev() {
                    let px = s.p.to_multi(1, 0).compose(&[cur[0].clone()]);
                    let next = vec![px.sub(&cur[1]).scale(ONE / s.a), cur[0].clone()];
                    cur = next;
                }
                cur
            }
            Family::FornaessWu { kind, p: pt, q, a, b } => {
                let (u, v, w) = (&vars[0], &vars[1], &vars[2]);
                let qw = q.to_multi(1, 0).compose(&[w.clone()]);
                match kind {
                    FwKind::H1 => {
                        let x = v.sub(&qw);
                        let z = u.sub(&pt.to_multi(&x, w)).scale(ONE / a);
                        vec![x, w.clone(), z]
                    }
                    FwKind::H2 => {
                        let y = v.sub(&qw).scale(ONE / b);
                        let z = u.sub(&pt.to_multi(w, &y)).scale(ONE / a);
                        vec![w.clone(), y, z]
                    }
                }
            }
            Family::ShiftLike { p: poly, a } => {
                let pz = poly.to_multi(1, 0).compose(&[vars[n - 2].clone()]);
                let mut out = vec![vars[n - 1].sub(&pz).scale(ONE / a)];
                out.extend(vars[..n - 1].iter().cloned());
                out
            }
        }
    }

    pub fn forward(&self) -> DirectedMap<'_> {
        DirectedMap { map: self, dir: Direction::Forward }
    }

    pub fn backward(&self) -> DirectedMap<'_> {
        DirectedMap { map: self, dir: Direction::Backward }
    }

    pub fn directed(&self, dir: Direction) -> DirectedMap<'_> {
        DirectedMap { map: self, dir }
    }
}

fn max_degree(components: &[MultiPoly]) -> u32 {
    components.iter().filter_map(MultiPoly::total_degree).max().unwrap_or(0)
}

/// Smallest `l` in `1..n` with `d^l = dinv^(n-l)`, in exact integer arithmetic.
pub fn regularity_index(d: u32, dinv: u32, n: usize) -> Option<u32> {
    (1..n as u32).find(|&l| {
        let lhs = (d as u128).checked_pow(l);
        let rhs = (dinv as u128).checked_pow(n as u32 - l);
        matches!((lhs, rhs), (Some(x), Some(y)) if x == y)
    })
}

/// `f` or `f^-1` seen as a [`Dynamics`].
#[derive(Clone, Copy, Debug)]
pub struct DirectedMap<'a> {
    pub map: &'a MapSpec,
    pub dir: Direction,
}

impl Dynamics for DirectedMap<'_> {
    fn dim(&self) -> usize {
        self.map.dim()
    }

    fn step(&self, p: &CPoint) -> Result<CPoint, Escaped> {
        self.map.eval(self.dir, p)
    }

    fn jacobian(&self, p: &CPoint) -> CMat {
        self.map.jacobian_in(self.dir, p)
    }
}

/// `p -> M p`. Not regular; used as an analytic oracle for cocycle code.
#[derive(Clone, Copy, Debug)]
pub struct LinearMap {
    pub matrix: CMat,
}

impl Dynamics for LinearMap {
    fn dim(&self) -> usize {
        self.matrix.dim()
    }

    fn step(&self, p: &CPoint) -> Result<CPoint, Escaped> {
        checked(self.matrix.mul_vec(p))
    }

    fn jacobian(&self, _p: &CPoint) -> CMat {
        self.matrix
    }
}

/// Iterates `dynamics` `k` times.
pub fn iterate<D: Dynamics + ?Sized>(dynamics: &D, p: &CPoint, k: usize) -> Result<CPoint, Escaped> {
    let mut q = *p;
    for _ in 0..k {
        q = dynamics.step(&q)?;
    }
    Ok(q)
}
