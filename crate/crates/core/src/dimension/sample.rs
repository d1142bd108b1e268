//! Point samples on `J`, `J+` and `J-`.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::filtration::{FiltrationSpec, Region};
use crate::linalg::CPoint;
use crate::map::{Direction, MapSpec};
use crate::orbit::{census_range, NewtonOptions};
use crate::par::par_range;
use crate::rng::{disk, task_rng};
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum JuliaTarget {
    J,
    JPlus,
    JMinus,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Strategy {
    /// All saddle cycle points of period `<= k_max`.
    Saddles { k_max: usize, newton: NewtonOptions },
    /// Escape-boundary search on random complex lines.
    Boundary(BoundaryOptions),
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Saddles { .. } => "saddles",
            Strategy::Boundary(_) => "boundary",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryOptions {
    pub lines: usize,
    /// Grid side in the parameter square of each line.
    pub per_line: usize,
    /// Escape-test budget.
    pub budget: usize,
    /// Bisection steps (the bracket shrinks by `2^-steps` of the cell width).
    pub bisections: usize,
    /// Forward (resp. backward) iterates applied to `J+` (resp. `J-`)
    /// crossings to pull them towards `J`.
    pub settle: usize,
    pub seed: u64,
}

impl Default for BoundaryOptions {
    fn default() -> Self {
        BoundaryOptions { lines: 2000, per_line: 16, budget: 200, bisections: 48, settle: 6, seed: 0 }
    }
}

/// Steps until the orbit of `p` reaches the escape region, capped at `budget + 1`.
pub fn escape_time(m: &MapSpec, fs: &FiltrationSpec, dir: Direction, p: &CPoint, budget: usize) -> usize {
    let region = match dir {
        Direction::Forward => Region::Vminus,
        Direction::Backward => Region::Vplus,
    };
    let mut q = *p;
    for k in 0..=budget {
        if fs.region(&q) == region {
            return k;
        }
        q = match m.eval(dir, &q) {
            Ok(next) => next,
            Err(_) => return k + 1,
        };
    }
    budget + 1
}

/// Whether the orbit of `p` reaches the escape region within `budget` steps.
pub fn escapes(m: &MapSpec, fs: &FiltrationSpec, dir: Direction, p: &CPoint, budget: usize) -> bool {
    escape_time(m, fs, dir, p, budget) <= budget
}

/// Drops points that fall in an already occupied cell of side `cell`.
pub fn dedupe_lattice(points: Vec<CPoint>, cell: f64) -> Vec<CPoint> {
    let mut seen = HashSet::new();
    points
        .into_iter()
        .filter(|p| {
            let key: Vec<i64> = p.to_reals().iter().map(|x| (x / cell).round() as i64).collect();
            seen.insert(key)
        })
        .collect()
}

const ZOOMS: usize = 24;

/// One point of `J+` (or `J-`) on the complex line `base + s v`, `s` in the
/// square `|Re s|, |Im s| <= R`.
///
/// The square is sampled on a `per_line x per_line` grid. When a sample stays
/// bounded for the whole budget, the first bounded/escaping pair of grid
/// neighbours is bisected. Otherwise `K+` has no interior in the line and the
/// search zooms onto the sample with the largest escape time until the grid
/// step is at the resolution limit. Returns the point and its escape time.
fn line_crossing(
    m: &MapSpec,
    fs: &FiltrationSpec,
    dir: Direction,
    base: CPoint,
    v: CPoint,
    opts: &BoundaryOptions,
) -> Option<(CPoint, usize)> {
    let at = |s: Complex64| {
        let mut q = base;
        for i in 0..q.dim() {
            q[i] += s * v[i];
        }
        q
    };
    let time = |s: Complex64| escape_time(m, fs, dir, &at(s), opts.budget);
    let side = opts.per_line.max(3);
    let mut centre = Complex64::new(0.0, 0.0);
    let mut half = fs.radius;
    let mut best = None;
    for _ in 0..ZOOMS {
        let step = 2.0 * half / (side - 1) as f64;
        let grid = |i: usize, j: usize| centre + Complex64::new(-half + step * j as f64, -half + step * i as f64);
        let ts: Vec<usize> = (0..side * side).map(|k| time(grid(k / side, k % side))).collect();
        let bounded = |k: usize| ts[k] > opts.budget;
        let pair = (0..side * side).find_map(|k| {
            let (i, j) = (k / side, k % side);
            let right = (j + 1 < side).then(|| k + 1);
            let down = (i + 1 < side).then(|| k + side);
            [right, down].into_iter().flatten().find(|&l| bounded(k) != bounded(l)).map(|l| (k, l))
        });
        if let Some((k, l)) = pair {
            let (a, b) = (grid(k / side, k % side), grid(l / side, l % side));
            let (mut inside, mut outside) = if bounded(k) { (a, b) } else { (b, a) };
            for _ in 0..opts.bisections {
                let mid = 0.5 * (inside + outside);
                if time(mid) > opts.budget {
                    inside = mid;
                } else {
                    outside = mid;
                }
            }
            return Some((at(inside), opts.budget + 1));
        }
        let (k, &t) = ts.iter().enumerate().max_by_key(|&(k, &t)| (t, std::cmp::Reverse(k)))?;
        if t == 0 {
            return None;
        }
        centre = grid(k / side, k % side);
        best = Some((at(centre), t));
        if step < 1e-13 * fs.radius {
            break;
        }
        half = step;
    }
    best
}

/// Crossings of `J+` (or `J-`) on random complex lines through the polydisk.
fn boundary_points(m: &MapSpec, fs: &FiltrationSpec, dir: Direction, opts: &BoundaryOptions) -> Vec<(CPoint, usize)> {
    let n = m.dim();
    let r = fs.radius;
    let per_line = par_range(opts.lines, |j| {
        let mut rng = task_rng(opts.seed, j as u64);
        let mut base = CPoint::zeros(n);
        let mut v = CPoint::zeros(n);
        for i in 0..n {
            base[i] = disk(&mut rng, 0.5 * r);
            v[i] = disk(&mut rng, 1.0);
        }
        let v = v.scale(1.0 / v.norm());
        line_crossing(m, fs, dir, base, v, opts)
    });
    per_line.into_iter().flatten().collect()
}

/// Pushes a crossing with escape time `t` along the orbit, at most `t / 2` steps.
fn settle(m: &MapSpec, fs: &FiltrationSpec, dir: Direction, p: &(CPoint, usize), steps: usize) -> Option<CPoint> {
    let mut q = p.0;
    for _ in 0..steps.min(p.1 / 2) {
        q = m.eval(dir, &q).ok()?;
    }
    (fs.region(&q) == Region::V).then_some(q)
}

/// Samples of `target` by `strategy`, deduplicated on a `1e-9` lattice.
pub fn sample_julia(m: &MapSpec, fs: &FiltrationSpec, target: JuliaTarget, strategy: &Strategy) -> Result<Vec<CPoint>> {
    let pts: Vec<CPoint> = match strategy {
        Strategy::Saddles { k_max, newton } => census_range(m, fs, *k_max, newton)
            .iter()
            .flat_map(|c| c.orbits.iter().filter(|o| o.is_saddle()).flat_map(|o| o.points.clone()))
            .collect(),
        Strategy::Boundary(opts) => match target {
            JuliaTarget::JPlus => boundary_points(m, fs, Direction::Forward, opts).into_iter().map(|p| p.0).collect(),
            JuliaTarget::JMinus => boundary_points(m, fs, Direction::Backward, opts).into_iter().map(|p| p.0).collect(),
            JuliaTarget::J => {
                // J+ crossings pushed forward towards J, J- crossings pushed back
                let mut v: Vec<CPoint> = boundary_points(m, fs, Direction::Forward, opts)
                    .iter()
                    .filter_map(|p| settle(m, fs, Direction::Forward, p, opts.settle))
                    .collect();
                v.extend(
                    boundary_points(m, fs, Direction::Backward, opts)
                        .iter()
                        .filter_map(|p| settle(m, fs, Direction::Backward, p, opts.settle)),
                );
                v
            }
        },
    };
    let pts = dedupe_lattice(pts, 1e-9);
    if pts.is_empty() {
        return Err(Error::NoJuliaSamples);
    }
    Ok(pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::default_regions;

    #[test]
    fn lattice_dedupe_merges_close_points() {
        let a = CPoint::from_real(&[0.1, 0.2]);
        let b = CPoint::from_real(&[0.1 + 1e-12, 0.2]);
        let c = CPoint::from_real(&[0.3, 0.2]);
        assert_eq!(dedupe_lattice(vec![a, b, c], 1e-9).len(), 2);
    }

    #[test]
    fn horseshoe_crossings_have_long_escape_times() {
        let m = MapSpec::henon_quadratic(-6.0, 1.0).unwrap();
        let fs = default_regions(&m, 4.6).unwrap();
        let opts = BoundaryOptions { lines: 8, ..BoundaryOptions::default() };
        let pts = sample_julia(&m, &fs, JuliaTarget::JPlus, &Strategy::Boundary(opts)).unwrap();
        assert!(!pts.is_empty());
        for p in &pts {
            assert!(escape_time(&m, &fs, Direction::Forward, p, 200) >= 12);
        }
    }

    #[test]
    fn dissipative_crossings_are_bisected() {
        let m = MapSpec::henon_quadratic(-0.1, 0.3).unwrap();
        let fs = default_regions(&m, 1.8).unwrap();
        let opts = BoundaryOptions { lines: 8, ..BoundaryOptions::default() };
        let pts = sample_julia(&m, &fs, JuliaTarget::JPlus, &Strategy::Boundary(opts)).unwrap();
        for p in &pts {
            assert!(!escapes(&m, &fs, Direction::Forward, p, 200));
        }
    }
}
