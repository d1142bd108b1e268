//! Small fixed-capacity complex vectors and matrices.
//!
//! Every map in this crate acts on `C^n` with `n <= MAX_DIM`, so points and
//! Jacobians live on the stack. Spectral quantities (eigenvalues, singular
//! values) go through nalgebra.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Largest ambient dimension supported by the stack-allocated types.
pub const MAX_DIM: usize = 6;

/// Coordinates beyond this modulus mark an orbit as escaped.
pub const ESCAPE_LIMIT: f64 = 1e100;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A point of `C^n`, stored as `n` complex coordinates.
#[derive(Clone, Copy, PartialEq)]
pub struct CPoint {
    n: usize,
    c: [Complex64; MAX_DIM],
}

impl CPoint {
    pub fn zeros(n: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&n), "dimension {n} out of range");
        CPoint { n, c: [ZERO; MAX_DIM] }
    }

    pub fn new(coords: &[Complex64]) -> Self {
        let mut p = CPoint::zeros(coords.len());
        p.c[..coords.len()].copy_from_slice(coords);
        p
    }

    pub fn from_real(coords: &[f64]) -> Self {
        let mut p = CPoint::zeros(coords.len());
        for (dst, &x) in p.c.iter_mut().zip(coords) {
            *dst = Complex64::new(x, 0.0);
        }
        p
    }

    /// Builds a point from `2n` reals laid out as `re_0, im_0, re_1, im_1, ...`.
    pub fn from_reals(reals: &[f64]) -> Self {
        assert!(reals.len() % 2 == 0);
        let mut p = CPoint::zeros(reals.len() / 2);
        for (i, pair) in reals.chunks_exact(2).enumerate() {
            p.c[i] = Complex64::new(pair[0], pair[1]);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.c[..self.n]
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.c[..self.n]
    }

    /// Real coordinates `re_0, im_0, re_1, im_1, ...` of the point in `R^{2n}`.
    pub fn to_reals(&self) -> Vec<f64> {
        self.as_slice().iter().flat_map(|z| [z.re, z.im]).collect()
    }

    pub fn max_norm(&self) -> f64 {
        self.as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn dist(&self, other: &CPoint) -> f64 {
        (*self - *other).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// True once a coordinate is non-finite or beyond [`ESCAPE_LIMIT`].
    pub fn is_escaped(&self) -> bool {
        self.as_slice()
            .iter()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()) || z.norm() > ESCAPE_LIMIT)
    }

    pub fn scale(&self, s: f64) -> CPoint {
        let mut out = *self;
        for z in out.as_mut_slice() {
            *z *= s;
        }
        out
    }

    /// Lexicographic order on (re, im) of each coordinate in turn.
    pub fn lex_cmp(&self, other: &CPoint) -> Ordering {
        for (a, b) in self.as_slice().iter().zip(other.as_slice()) {
            match a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.n.cmp(&other.n)
    }
}

impl Index<usize> for CPoint {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.as_slice()[i]
    }
}

impl IndexMut<usize> for CPoint {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.as_mut_slice()[i]
    }
}

impl std::ops::Sub for CPoint {
    type Output = CPoint;
    fn sub(mut self, rhs: CPoint) -> CPoint {
        debug_assert_eq!(self.n, rhs.n);
        for i in 0..self.n {
            self.c[i] -= rhs.c[i];
        }
        self
    }
}

impl std::ops::Add for CPoint {
    type Output = CPoint;
    fn add(mut self, rhs: CPoint) -> CPoint {
        debug_assert_eq!(self.n, rhs.n);
        for i in 0..self.n {
            self.c[i] += rhs.c[i];
        }
        self
    }
}

impl fmt::Debug for CPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.as_slice()).finish()
    }
}

/// A dense `n x n` complex matrix, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct CMat {
    n: usize,
    a: [[Complex64; MAX_DIM]; MAX_DIM],
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&n), "dimension {n} out of range");
        CMat { n, a: [[ZERO; MAX_DIM]; MAX_DIM] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m.a[i][i] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let mut m = CMat::zeros(rows.len());
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), rows.len());
            m.a[i][..row.len()].copy_from_slice(row);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.a[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.a[i][j] = v;
    }

    pub fn mul(&self, rhs: &CMat) -> CMat {
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.a[i][k];
                if aik == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.a[i][j] += aik * rhs.a[k][j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &CPoint) -> CPoint {
        let mut out = CPoint::zeros(self.n);
        for i in 0..self.n {
            let mut s = ZERO;
            for j in 0..self.n {
                s += self.a[i][j] * v[j];
            }
            out[i] = s;
        }
        out
    }

    pub fn scale(&self, s: f64) -> CMat {
        let mut out = *self;
        for i in 0..self.n {
            for j in 0..self.n {
                out.a[i][j] *= s;
            }
        }
        out
    }

    pub fn sub_identity(&self) -> CMat {
        let mut out = *self;
        for i in 0..self.n {
            out.a[i][i] -= ONE;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                m = m.max(self.a[i][j].norm());
            }
        }
        m
    }

    pub fn frobenius(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                s += self.a[i][j].norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn is_finite(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.a[i][j].re.is_finite() && self.a[i][j].im.is_finite()))
    }

    /// LU factorisation with partial pivoting. Returns `None` for an
    /// (numerically) singular matrix.
    fn lu(&self) -> Option<(CMat, [usize; MAX_DIM], f64)> {
        let n = self.n;
        let mut lu = *self;
        let mut perm = [0usize; MAX_DIM];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i;
        }
        let mut sign = 1.0;
        let scale = self.max_abs();
        if scale == 0.0 || !scale.is_finite() {
            return None;
        }
        for k in 0..n {
            let (piv, pmax) = (k..n)
                .map(|i| (i, lu.a[i][k].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax <= scale * 1e-300 || pmax == 0.0 {
                return None;
            }
            if piv != k {
                lu.a.swap(piv, k);
                perm.swap(piv, k);
                sign = -sign;
            }
            let pivot = lu.a[k][k];
            for i in k + 1..n {
                let factor = lu.a[i][k] / pivot;
                lu.a[i][k] = factor;
                for j in k + 1..n {
                    let t = lu.a[k][j];
                    lu.a[i][j] -= factor * t;
                }
            }
        }
        Some((lu, perm, sign))
    }

    pub fn det(&self) -> Complex64 {
        match self.lu() {
            None => ZERO,
            Some((lu, _, sign)) => {
                let mut d = Complex64::new(sign, 0.0);
                for i in 0..self.n {
                    d *= lu.a[i][i];
                }
                d
            }
        }
    }

    /// Solves `self * x = b`.
    pub fn solve(&self, b: &CPoint) -> Option<CPoint> {
        let n = self.n;
        let (lu, perm, _) = self.lu()?;
        let mut x = CPoint::zeros(n);
        for i in 0..n {
            let mut s = b[perm[i]];
            for j in 0..i {
                s -= lu.a[i][j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= lu.a[i][j] * x[j];
            }
            x[i] = s / lu.a[i][i];
        }
        x.is_finite().then_some(x)
    }

    pub fn inverse(&self) -> Option<CMat> {
        let n = self.n;
        let mut inv = CMat::zeros(n);
        for j in 0..n {
            let mut e = CPoint::zeros(n);
            e[j] = ONE;
            let col = self.solve(&e)?;
            for i in 0..n {
                inv.a[i][j] = col[i];
            }
        }
        Some(inv)
    }

    pub fn to_dmatrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.a[i][j])
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = self.to_dmatrix().singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// `(σ_i, v_i)` with `A v_i = σ_i u_i`, by decreasing `σ_i`.
    pub fn right_singular_vectors(&self) -> Vec<(f64, CPoint)> {
        let svd = self.to_dmatrix().svd(false, true);
        let vt = svd.v_t.expect("requested");
        let mut out: Vec<(f64, CPoint)> = (0..self.n)
            .map(|i| {
                let v: Vec<Complex64> = (0..self.n).map(|j| vt[(i, j)].conj()).collect();
                (svd.singular_values[i], CPoint::new(&v))
            })
            .collect();
        out.sort_by(|a, b| b.0.total_cmp(&a.0));
        out
    }

    pub fn spectral_norm(&self) -> f64 {
        self.singular_values()[0]
    }

    /// Eigenvalues sorted by decreasing modulus.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let mut ev: Vec<Complex64> = match self.to_dmatrix().schur().eigenvalues() {
            Some(v) => v.iter().copied().collect(),
            None => Vec::new(),
        };
        ev.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
        ev
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[Complex64]> = (0..self.n).map(|i| &self.a[i][..self.n]).collect();
        f.debug_list().entries(rows).finish()
    }
}

/// A matrix product kept as `exp(log_scale) * mat` so long cocycle products
/// never overflow.
#[derive(Clone, Copy, Debug)]
pub struct ScaledMat {
    pub mat: CMat,
    pub log_scale: f64,
}

impl ScaledMat {
    pub fn identity(n: usize) -> Self {
        ScaledMat { mat: CMat::identity(n), log_scale: 0.0 }
    }

    /// Replaces the product `P` by `step * P`, then factors out the largest
    /// entry modulus.
    pub fn left_mul(&mut self, step: &CMat) {
        self.mat = step.mul(&self.mat);
        let m = self.mat.max_abs();
        if m > 0.0 && m.is_finite() {
            self.mat = self.mat.scale(1.0 / m);
            self.log_scale += m.ln();
        }
    }

    pub fn log_spectral_norm(&self) -> f64 {
        self.mat.spectral_norm().ln() + self.log_scale
    }

    pub fn log_singular_values(&self) -> Vec<f64> {
        self.mat
            .singular_values()
            .into_iter()
            .map(|s| s.ln() + self.log_scale)
            .collect()
    }

    pub fn to_mat(&self) -> CMat {
        self.mat.scale(self.log_scale.exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solve_and_det_agree_with_hand_computation() {
        let m = CMat::from_rows(&[&[c(2.0, 1.0), c(1.0, 0.0)], &[c(0.0, -1.0), c(3.0, 0.0)]]);
        // det = (2+i)*3 - 1*(-i) = 6 + 4i
        let d = m.det();
        assert!((d - c(6.0, 4.0)).norm() < 1e-14);
        let b = CPoint::new(&[c(1.0, 0.0), c(0.0, 1.0)]);
        let x = m.solve(&b).unwrap();
        let r = m.mul_vec(&x) - b;
        assert!(r.norm() < 1e-14);
    }

    #[test]
    fn singular_matrix_has_no_solution() {
        let m = CMat::from_rows(&[&[c(1.0, 0.0), c(2.0, 0.0)], &[c(2.0, 0.0), c(4.0, 0.0)]]);
        assert!(m.solve(&CPoint::from_real(&[1.0, 1.0])).is_none());
        assert_eq!(m.det(), c(0.0, 0.0));
    }

    #[test]
    fn scaled_product_matches_direct_product() {
        let a = CMat::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(-0.3, 0.0), c(4.0, 1.0)]]);
        let mut direct = CMat::identity(2);
        let mut scaled = ScaledMat::identity(2);
        for _ in 0..10 {
            direct = a.mul(&direct);
            scaled.left_mul(&a);
        }
        let back = scaled.to_mat();
        let err = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| (back.get(i, j) - direct.get(i, j)).norm())
            .fold(0.0, f64::max);
        assert!(err <= 1e-9 * direct.max_abs(), "err {err}");
    }

    #[test]
    fn lex_order_is_total_and_coordinatewise() {
        let p = CPoint::new(&[c(1.0, 0.0), c(0.0, 5.0)]);
        let q = CPoint::new(&[c(1.0, 0.0), c(0.0, 6.0)]);
        assert_eq!(p.lex_cmp(&q), Ordering::Less);
        assert_eq!(q.lex_cmp(&p), Ordering::Greater);
        assert_eq!(p.lex_cmp(&p), Ordering::Equal);
    }
}
