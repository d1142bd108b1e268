//! Periodic orbits by damped multiple-shooting Newton.
//!
//! A `k`-cycle is a zero of `r_i = f(p_i) - p_{i+1 mod k}`. Solving for all
//! `k` points at once keeps the linear systems well conditioned where Newton
//! on `f^k - id` directly would not be. The residual reported for a cycle is
//! the largest one-step defect `max_i |f(p_i) - p_{i+1}|`.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::filtration::FiltrationSpec;
use crate::linalg::{CMat, CPoint, ScaledMat};
use crate::map::{Dynamics, MapSpec};
use crate::par::par_range;
use crate::rng::{disk, task_rng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stability {
    Attracting,
    Repelling,
    /// Unstable index `u`: number of multipliers outside the unit circle.
    Saddle(usize),
    /// Some multiplier within the unit-circle tolerance.
    Indeterminate,
}

impl Stability {
    pub fn label(&self) -> String {
        match self {
            Stability::Attracting => "attracting".into(),
            Stability::Repelling => "repelling".into(),
            Stability::Saddle(u) => format!("saddle({u})"),
            Stability::Indeterminate => "indeterminate".into(),
        }
    }

    pub fn classify(multipliers: &[Complex64], unit_tol: f64) -> Stability {
        if multipliers.iter().any(|l| (l.norm() - 1.0).abs() < unit_tol) {
            return Stability::Indeterminate;
        }
        let u = multipliers.iter().filter(|l| l.norm() > 1.0).count();
        match u {
            0 => Stability::Attracting,
            u if u == multipliers.len() => Stability::Repelling,
            u => Stability::Saddle(u),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicOrbit {
    /// The cycle in orbit order, starting at the lexicographically smallest point.
    pub points: Vec<CPoint>,
    /// Minimal period.
    pub period: usize,
    /// Eigenvalues of `Df^period` at `points[0]`, by decreasing modulus.
    pub multipliers: Vec<Complex64>,
    pub stability: Stability,
    pub residual: f64,
}

impl PeriodicOrbit {
    pub fn representative(&self) -> &CPoint {
        &self.points[0]
    }

    /// Product of the multipliers outside the unit circle.
    pub fn unstable_product(&self) -> Complex64 {
        self.multipliers.iter().filter(|l| l.norm() > 1.0).product()
    }

    /// Product of the multipliers inside the unit circle.
    pub fn stable_product(&self) -> Complex64 {
        self.multipliers.iter().filter(|l| l.norm() < 1.0).product()
    }

    pub fn is_saddle(&self) -> bool {
        matches!(self.stability, Stability::Saddle(_))
    }

    /// Distance from `p` to the nearest cycle point and that point's index.
    pub fn nearest(&self, p: &CPoint) -> (usize, f64) {
        self.points
            .iter()
            .enumerate()
            .map(|(i, q)| (i, q.dist(p)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty cycle")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonOptions {
    pub residual_tol: f64,
    pub max_iter: usize,
    pub dedupe_radius: f64,
    /// Side of the real seed grid over `V` (n = 2 only).
    pub grid: usize,
    /// Number of complex seeds drawn in the polydisk of radius `R`.
    pub random_seeds: usize,
    pub seed: u64,
    pub unit_tol: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            residual_tol: 1e-10,
            max_iter: 60,
            dedupe_radius: 1e-6,
            grid: 200,
            random_seeds: 20_000,
            seed: 0,
            unit_tol: 1e-4,
        }
    }
}

/// Every cycle whose minimal period divides `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Census {
    pub k: usize,
    pub orbits: Vec<PeriodicOrbit>,
}

impl Census {
    /// `#Fix(f^k)` as found: each cycle contributes its period.
    pub fn fixed_point_count(&self) -> usize {
        self.orbits.iter().map(|o| o.period).sum()
    }

    pub fn saddle_fixed_point_count(&self) -> usize {
        self.orbits.iter().filter(|o| o.is_saddle()).map(|o| o.period).sum()
    }

    pub fn all_saddles(&self) -> bool {
        self.orbits.iter().all(PeriodicOrbit::is_saddle)
    }

    pub fn points(&self) -> impl Iterator<Item = &CPoint> {
        self.orbits.iter().flat_map(|o| o.points.iter())
    }

    pub fn attracting(&self) -> impl Iterator<Item = &PeriodicOrbit> {
        self.orbits.iter().filter(|o| o.stability == Stability::Attracting)
    }
}

fn shooting_residual(m: &MapSpec, pts: &[CPoint]) -> Option<Vec<CPoint>> {
    let k = pts.len();
    (0..k)
        .map(|i| m.eval_forward(&pts[i]).ok().map(|q| q - pts[(i + 1) % k]))
        .collect()
}

fn defect(r: &[CPoint]) -> f64 {
    r.iter().map(CPoint::max_norm).fold(0.0, f64::max)
}

fn sq_norm(r: &[CPoint]) -> f64 {
    r.iter().map(|p| p.norm().powi(2)).sum()
}

fn newton_step(m: &MapSpec, pts: &[CPoint], r: &[CPoint]) -> Option<Vec<CPoint>> {
    let k = pts.len();
    let n = m.dim();
    let size = n * k;
    let mut jac = DMatrix::<Complex64>::zeros(size, size);
    let mut rhs = DVector::<Complex64>::zeros(size);
    for i in 0..k {
        let a = m.jacobian(&pts[i]);
        let next = (i + 1) % k;
        for row in 0..n {
            for col in 0..n {
                jac[(i * n + row, i * n + col)] += a.get(row, col);
            }
            jac[(i * n + row, next * n + row)] -= Complex64::new(1.0, 0.0);
            rhs[i * n + row] = -r[i][row];
        }
    }
    let delta = jac.lu().solve(&rhs)?;
    Some(
        (0..k)
            .map(|i| {
                let mut d = CPoint::zeros(n);
                for row in 0..n {
                    d[row] = delta[i * n + row];
                }
                d
            })
            .collect(),
    )
}

/// Damped Newton on the shooting system; `None` if the start does not converge.
pub fn solve_cycle(m: &MapSpec, start: &[CPoint], opts: &NewtonOptions, bound: f64) -> Option<(Vec<CPoint>, f64)> {
    let mut pts = start.to_vec();
    let mut r = shooting_residual(m, &pts)?;
    let mut f2 = sq_norm(&r);
    for _ in 0..opts.max_iter {
        if defect(&r) < opts.residual_tol {
            // one more step usually gains a few digits
            if let Some(step) = newton_step(m, &pts, &r) {
                let cand: Vec<CPoint> = pts.iter().zip(&step).map(|(p, d)| *p + *d).collect();
                if let Some(rc) = shooting_residual(m, &cand) {
                    if defect(&rc) < defect(&r) {
                        return Some((cand, defect(&rc)));
                    }
                }
            }
            return Some((pts, defect(&r)));
        }
        let step = newton_step(m, &pts, &r)?;
        let size = step.iter().map(CPoint::max_norm).fold(0.0, f64::max);
        if !size.is_finite() {
            return None;
        }
        let mut t = if size > bound { bound / size } else { 1.0 };
        let mut accepted = false;
        for _ in 0..12 {
            let cand: Vec<CPoint> = pts.iter().zip(&step).map(|(p, d)| *p + d.scale(t)).collect();
            if let Some(rc) = shooting_residual(m, &cand) {
                let fc = sq_norm(&rc);
                if fc < f2 {
                    pts = cand;
                    r = rc;
                    f2 = fc;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted || pts.iter().any(|p| p.max_norm() > 4.0 * bound) {
            return None;
        }
    }
    (defect(&r) < opts.residual_tol).then(|| (pts.clone(), defect(&r)))
}

fn minimal_period(pts: &[CPoint], radius: f64) -> usize {
    let k = pts.len();
    (1..=k)
        .filter(|q| k % q == 0)
        .find(|&q| (0..k).all(|i| pts[i].dist(&pts[(i + q) % k]) < radius))
        .unwrap_or(k)
}

/// Lexicographic order treating components closer than `tol` as equal, so
/// that conjugate-symmetric cycles pick the same rotation every time.
fn lex_cmp_tol(a: &CPoint, b: &CPoint, tol: f64) -> Ordering {
    for i in 0..a.dim() {
        for (x, y) in [(a[i].re, b[i].re), (a[i].im, b[i].im)] {
            if (x - y).abs() > tol {
                return x.total_cmp(&y);
            }
        }
    }
    Ordering::Equal
}

/// Reduces to the minimal period and rotates the lex-smallest point first.
fn canonical(pts: &[CPoint], radius: f64) -> Vec<CPoint> {
    let q = minimal_period(pts, radius);
    let cyc = &pts[..q];
    let start = (0..q).min_by(|&a, &b| lex_cmp_tol(&cyc[a], &cyc[b], radius)).unwrap_or(0);
    (0..q).map(|i| cyc[(start + i) % q]).collect()
}

/// Large multipliers from the forward product, small ones as reciprocals of
/// the large eigenvalues of the backward product.
pub fn cycle_multipliers(m: &MapSpec, pts: &[CPoint]) -> Vec<Complex64> {
    let n = m.dim();
    let q = pts.len();
    let mut fwd = ScaledMat::identity(n);
    for p in pts {
        fwd.left_mul(&m.jacobian(p));
    }
    let mut bwd = ScaledMat::identity(n);
    for i in 0..q {
        bwd.left_mul(&m.inverse_jacobian(&pts[(q - i) % q]));
    }
    let scaled = |s: &ScaledMat| -> Vec<Complex64> {
        let f = s.log_scale.exp();
        s.mat.eigenvalues().into_iter().map(|l| l * f).collect()
    };
    let ef = scaled(&fwd);
    let eb = scaled(&bwd);
    let u = ef.iter().filter(|l| l.norm() > 1.0).count();
    let mut out: Vec<Complex64> = ef[..u].to_vec();
    out.extend(eb[..n - u].iter().map(|l| Complex64::new(1.0, 0.0) / l));
    out.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    out
}

fn make_orbit(m: &MapSpec, pts: Vec<CPoint>, opts: &NewtonOptions) -> PeriodicOrbit {
    let residual = shooting_residual(m, &pts).map_or(f64::INFINITY, |r| defect(&r));
    let multipliers = cycle_multipliers(m, &pts);
    let stability = Stability::classify(&multipliers, opts.unit_tol);
    PeriodicOrbit { period: pts.len(), points: pts, multipliers, stability, residual }
}

/// Initial shooting guess: the seed's pseudo-orbit, pulled back radially
/// into the polydisk of radius `r` whenever it leaves.
fn pseudo_orbit(m: &MapSpec, seed: CPoint, k: usize, r: f64) -> Vec<CPoint> {
    let clamp = |p: CPoint| {
        let s = p.max_norm();
        if s > r {
            p.scale(r / s)
        } else {
            p
        }
    };
    let mut out = vec![seed];
    let mut p = seed;
    for _ in 1..k {
        p = m.eval_forward(&p).map(clamp).unwrap_or_else(|_| clamp(p));
        out.push(p);
    }
    out
}

fn seed_point(m: &MapSpec, r: f64, opts: &NewtonOptions, idx: usize) -> CPoint {
    let n = m.dim();
    let grid = if n == 2 { opts.grid } else { 0 };
    if idx < grid * grid {
        let g = grid.max(2) as f64 - 1.0;
        let (i, j) = (idx / grid, idx % grid);
        CPoint::from_real(&[-r + 2.0 * r * j as f64 / g, -r + 2.0 * r * i as f64 / g])
    } else {
        let mut rng = task_rng(opts.seed, idx as u64);
        let mut p = CPoint::zeros(n);
        for c in 0..n {
            p[c] = disk(&mut rng, r);
        }
        p
    }
}

fn seed_count(m: &MapSpec, opts: &NewtonOptions) -> usize {
    let grid = if m.dim() == 2 { opts.grid * opts.grid } else { 0 };
    grid + opts.random_seeds
}

const CHUNK: usize = 256;

fn insert_unique(found: &mut Vec<Vec<CPoint>>, cand: Vec<CPoint>, radius: f64) {
    let dup = found
        .iter()
        .any(|c| c.len() == cand.len() && c.iter().any(|p| p.dist(&cand[0]) < radius));
    if !dup {
        found.push(cand);
    }
}

/// Cycles of exact shooting length `k` (collapsed to minimal period).
fn search_period(m: &MapSpec, fs: &FiltrationSpec, k: usize, opts: &NewtonOptions) -> Vec<Vec<CPoint>> {
    let r = fs.radius;
    let total = seed_count(m, opts);
    let chunks = total.div_ceil(CHUNK);
    let parts = par_range(chunks, |c| {
        let mut local: Vec<Vec<CPoint>> = Vec::new();
        for idx in c * CHUNK..((c + 1) * CHUNK).min(total) {
            let start = pseudo_orbit(m, seed_point(m, r, opts, idx), k, r);
            if let Some((pts, _)) = solve_cycle(m, &start, opts, r) {
                if pts.iter().all(|p| p.max_norm() <= 2.0 * r) {
                    insert_unique(&mut local, canonical(&pts, opts.dedupe_radius), opts.dedupe_radius);
                }
            }
        }
        local
    });
    let mut found = Vec::new();
    for part in parts {
        for cyc in part {
            insert_unique(&mut found, cyc, opts.dedupe_radius);
        }
    }
    found
}

/// Radius for merging cycles with a multiplier on the unit circle. Newton
/// converges to such degenerate roots only like `residual^(1/m)`, so copies
/// of one cycle land far outside `dedupe_radius`.
const DEGENERATE_RADIUS: f64 = 1e-2;

/// Collapses clusters of indeterminate cycles of equal period, keeping the
/// smallest residual.
fn merge_degenerate(orbits: Vec<PeriodicOrbit>) -> Vec<PeriodicOrbit> {
    let mut out: Vec<PeriodicOrbit> = Vec::with_capacity(orbits.len());
    for o in orbits {
        if o.stability == Stability::Indeterminate {
            let near = out.iter().position(|c| {
                c.stability == Stability::Indeterminate
                    && c.period == o.period
                    && c.points.iter().any(|p| p.dist(&o.points[0]) < DEGENERATE_RADIUS)
            });
            if let Some(i) = near {
                if o.residual < out[i].residual {
                    out[i] = o;
                }
                continue;
            }
        }
        out.push(o);
    }
    out
}

fn order_orbits(orbits: &mut [PeriodicOrbit]) {
    orbits.sort_by(|a, b| match a.period.cmp(&b.period) {
        Ordering::Equal => lex_cmp_tol(&a.points[0], &b.points[0], 1e-9),
        o => o,
    });
}

/// All cycles whose minimal period divides `k`, found by Newton from the seed
/// grid and random seeds. Seeds that fail to converge are dropped.
pub fn find_periodic_points(m: &MapSpec, fs: &FiltrationSpec, k: usize, opts: &NewtonOptions) -> Census {
    if k == 0 {
        return Census { k, orbits: Vec::new() };
    }
    let mut cycles: Vec<Vec<CPoint>> = Vec::new();
    for j in (1..=k).filter(|j| k % j == 0) {
        for cyc in search_period(m, fs, j, opts) {
            insert_unique(&mut cycles, cyc, opts.dedupe_radius);
        }
    }
    let mut orbits = merge_degenerate(cycles.into_iter().map(|c| make_orbit(m, c, opts)).collect());
    order_orbits(&mut orbits);
    Census { k, orbits }
}

/// Censuses for every period `1..=k_max`, sharing the work on divisors.
pub fn census_range(m: &MapSpec, fs: &FiltrationSpec, k_max: usize, opts: &NewtonOptions) -> Vec<Census> {
    let by_len: Vec<Vec<Vec<CPoint>>> = (1..=k_max).map(|j| search_period(m, fs, j, opts)).collect();
    (1..=k_max)
        .map(|k| {
            let mut cycles: Vec<Vec<CPoint>> = Vec::new();
            for j in (1..=k).filter(|j| k % j == 0) {
                for cyc in &by_len[j - 1] {
                    insert_unique(&mut cycles, cyc.clone(), opts.dedupe_radius);
                }
            }
            let mut orbits = merge_degenerate(cycles.into_iter().map(|c| make_orbit(m, c, opts)).collect());
            order_orbits(&mut orbits);
            Census { k, orbits }
        })
        .collect()
}

/// Attracting cycles of period up to `k_max`, each reported once.
pub fn find_attracting_cycles(m: &MapSpec, fs: &FiltrationSpec, k_max: usize, opts: &NewtonOptions) -> Vec<PeriodicOrbit> {
    let mut out: Vec<PeriodicOrbit> = Vec::new();
    for census in census_range(m, fs, k_max, opts) {
        for o in census.attracting() {
            let dup = out
                .iter()
                .any(|c| c.period == o.period && c.points.iter().any(|p| p.dist(&o.points[0]) < opts.dedupe_radius));
            if !dup {
                out.push(o.clone());
            }
        }
    }
    order_orbits(&mut out);
    out
}

/// `Df^k` at `p` as a plain matrix product.
pub fn cycle_jacobian<D: Dynamics + ?Sized>(d: &D, p: &CPoint, k: usize) -> Option<CMat> {
    let mut acc = CMat::identity(d.dim());
    let mut q = *p;
    for _ in 0..k {
        acc = d.jacobian(&q).mul(&acc);
        q = d.step(&q).ok()?;
    }
    Some(acc)
}
