//! Green functions `G+ = lim d^-k log+ |f^k|` and `G-` (with `f^-1`, `d-`).

use crate::error::{Error, Result};
use crate::linalg::CPoint;
use crate::map::{Direction, MapSpec};
use crate::orbit::GridWindow;
use crate::par::par_range;

pub const DEFAULT_BIG_RADIUS: f64 = 1e10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenEval {
    pub value: f64,
    /// First index with `|f^k(p)| > big_radius`, or the budget.
    pub k: usize,
    pub escaped: bool,
    /// Change between the index-`k` and index-`k+1` truncations.
    pub truncation_error: f64,
}

impl GreenEval {
    /// Zero because the orbit never left the big ball.
    pub fn budget_limited(&self) -> bool {
        !self.escaped
    }
}

fn log_norm(p: &CPoint) -> f64 {
    p.max_norm().ln()
}

pub fn green(m: &MapSpec, dir: Direction, p: &CPoint, budget: usize, big_radius: f64) -> GreenEval {
    let d = m.degree_in(dir) as f64;
    let mut q = *p;
    // d^-k, kept as a running factor
    let mut w = 1.0;
    for k in 0..=budget {
        if q.max_norm() > big_radius {
            let coarse = w * log_norm(&q);
            return match m.eval(dir, &q) {
                Ok(next) => {
                    let fine = w / d * log_norm(&next);
                    GreenEval { value: fine, k, escaped: true, truncation_error: (fine - coarse).abs() }
                }
                Err(_) => GreenEval { value: coarse, k, escaped: true, truncation_error: f64::NAN },
            };
        }
        if k == budget {
            break;
        }
        q = match m.eval(dir, &q) {
            Ok(next) => next,
            Err(_) => {
                // only reachable with big_radius near the overflow guard
                return GreenEval { value: w * log_norm(&q), k, escaped: true, truncation_error: f64::NAN };
            }
        };
        w /= d;
    }
    GreenEval { value: 0.0, k: budget, escaped: false, truncation_error: 0.0 }
}

pub fn green_plus(m: &MapSpec, p: &CPoint, budget: usize, big_radius: f64) -> GreenEval {
    green(m, Direction::Forward, p, budget, big_radius)
}

pub fn green_minus(m: &MapSpec, p: &CPoint, budget: usize, big_radius: f64) -> GreenEval {
    green(m, Direction::Backward, p, budget, big_radius)
}

/// `G` over the cells of `window`, row-major.
pub fn green_grid(m: &MapSpec, dir: Direction, window: &GridWindow, budget: usize, big_radius: f64) -> Vec<GreenEval> {
    let w = window.width;
    par_range(window.height, |row| {
        (0..w)
            .map(|col| green(m, dir, &window.point(row, col), budget, big_radius))
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct HolderEstimate {
    pub exponent: f64,
    /// Coefficient of determination of the log-log fit.
    pub r_squared: f64,
    /// Located crossing of `J+` on the segment.
    pub boundary: CPoint,
    /// `(distance, G)` pairs used in the fit.
    pub samples: Vec<(f64, f64)>,
}

/// Least-squares line through `(x, y)`; returns `(slope, intercept, r^2)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (slope, my - slope * mx, r2)
}

/// Fits `log G+` against `log dist(., J+)` along the segment `[a, b]`.
///
/// One endpoint must have a bounded orbit over `budget` and the other must
/// escape. Distances run log-uniformly over `[1e-9, 1e-2]` times the
/// segment length; points that turn out to lie in `K+` are dropped.
pub fn holder_exponent_estimate(
    m: &MapSpec,
    a: &CPoint,
    b: &CPoint,
    samples: usize,
    budget: usize,
) -> Result<HolderEstimate> {
    let g = |p: &CPoint| green_plus(m, p, budget, DEFAULT_BIG_RADIUS);
    let (inside, outside) = match (g(a).escaped, g(b).escaped) {
        (false, true) => (*a, *b),
        (true, false) => (*b, *a),
        _ => return Err(Error::NoCrossing),
    };
    if samples < 3 {
        return Err(Error::InvalidArgument("Hölder fit needs at least 3 samples".into()));
    }
    let seg = outside - inside;
    let len = seg.norm();
    let at = |t: f64| inside + seg.scale(t);
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if g(&at(mid)).escaped {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let boundary = at(lo);
    let pts: Vec<(f64, f64)> = (0..samples)
        .filter_map(|i| {
            let e = -9.0 + 7.0 * i as f64 / (samples - 1) as f64;
            let dist = 10f64.powf(e) * len;
            let t = lo + dist / len;
            (t <= 1.0).then(|| (dist, g(&at(t)).value))
        })
        .filter(|&(_, v)| v > 0.0)
        .collect();
    if pts.len() < 3 {
        return Err(Error::NoCrossing);
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let (slope, _, r2) = linear_fit(&xs, &ys);
    Ok(HolderEstimate { exponent: slope, r_squared: r2, boundary, samples: pts })
}
