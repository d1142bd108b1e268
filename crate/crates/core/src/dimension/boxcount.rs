//! Box counting on point clouds and on box-exclusion indicators in `R^2n`.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::filtration::{FiltrationSpec, Region};
use crate::linalg::{CPoint, ScaledMat};
use crate::map::{Direction, MapSpec};
use crate::orbit::PeriodicOrbit;
use crate::par::par_map;
use crate::potential::linear_fit;

#[derive(Clone, Debug, PartialEq)]
pub struct BoxCountResult {
    pub target: String,
    pub source: String,
    /// Dyadic levels `j`; the box side is `window_side * 2^-j`.
    pub levels: Vec<u32>,
    pub scales: Vec<f64>,
    pub counts: Vec<u64>,
    /// Inclusive range of levels used in the fit.
    pub fit_window: (u32, u32),
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square residual of the fit.
    pub residual: f64,
}

/// A cube `[lo_i, lo_i + side]` in `R^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cube {
    pub lo: Vec<f64>,
    pub side: f64,
}

impl Cube {
    /// Smallest axis-aligned cube containing the points, padded by 1%.
    pub fn bounding(points: &[CPoint]) -> Cube {
        let dim = points[0].dim() * 2;
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for p in points {
            for (i, x) in p.to_reals().into_iter().enumerate() {
                lo[i] = lo[i].min(x);
                hi[i] = hi[i].max(x);
            }
        }
        let side = lo.iter().zip(&hi).map(|(l, h)| h - l).fold(0.0, f64::max).max(1e-12) * 1.02;
        let lo = lo.iter().zip(&hi).map(|(l, h)| 0.5 * (l + h) - 0.5 * side).collect();
        Cube { lo, side }
    }

    /// The cube around the polydisk of radius `r` in `C^n`, shifted off-centre
    /// so that coordinate hyperplanes do not fall on box faces.
    pub fn polydisk(n: usize, r: f64) -> Cube {
        Cube { lo: vec![-1.0137 * r; 2 * n], side: 2.0291 * r }
    }
}

fn fit(levels: &[u32], scales: &[f64], counts: &[u64], window: (u32, u32)) -> Result<(f64, f64, f64)> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = levels
        .iter()
        .zip(scales.iter().zip(counts))
        .filter(|(l, (_, &c))| (window.0..=window.1).contains(*l) && c > 0)
        .map(|(_, (s, &c))| ((1.0 / s).ln(), (c as f64).ln()))
        .unzip();
    if xs.len() < 3 {
        return Err(Error::InvalidArgument("box counting needs at least 3 scales in the fit window".into()));
    }
    let (slope, intercept, _) = linear_fit(&xs, &ys);
    let rms = (xs.iter().zip(&ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum::<f64>() / xs.len() as f64).sqrt();
    Ok((slope, intercept, rms))
}

/// Occupied boxes of side `cube.side * 2^-j` for each requested level.
pub fn box_dimension_points(
    points: &[CPoint],
    cube: &Cube,
    levels: &[u32],
    fit_window: (u32, u32),
    target: &str,
) -> Result<BoxCountResult> {
    if levels.len() < 3 {
        return Err(Error::InvalidArgument("box counting needs at least 3 scales".into()));
    }
    if points.is_empty() {
        return Err(Error::InvalidArgument("box counting needs a nonempty point set".into()));
    }
    let reals: Vec<Vec<f64>> = points.iter().map(CPoint::to_reals).collect();
    let counts: Vec<u64> = par_map(levels, |&j| {
        let eps = cube.side / 2f64.powi(j as i32);
        let mut occupied: HashSet<Vec<i64>> = HashSet::new();
        for x in &reals {
            occupied.insert(x.iter().zip(&cube.lo).map(|(v, l)| ((v - l) / eps).floor() as i64).collect());
        }
        occupied.len() as u64
    });
    let scales: Vec<f64> = levels.iter().map(|&j| cube.side / 2f64.powi(j as i32)).collect();
    let (slope, intercept, residual) = fit(levels, &scales, &counts, fit_window)?;
    Ok(BoxCountResult {
        target: target.to_string(),
        source: format!("points({})", points.len()),
        levels: levels.to_vec(),
        scales,
        counts,
        fit_window,
        slope,
        intercept,
        residual,
    })
}

/// Which set a box indicator tracks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IndicatorTarget {
    KPlus,
    KMinus,
    K,
    /// `K` minus the basins of the registered attracting cycles.
    J,
}

impl IndicatorTarget {
    pub fn name(&self) -> &'static str {
        match self {
            IndicatorTarget::KPlus => "K+",
            IndicatorTarget::KMinus => "K-",
            IndicatorTarget::K => "K",
            IndicatorTarget::J => "J",
        }
    }
}

/// A ball about an attracting cycle point that its cycle maps into itself.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Trap {
    pub centre: CPoint,
    pub radius: f64,
}

/// Traps around each point of each attracting cycle: the largest radius
/// `10^-j` whose sampled sphere is pulled into the half-radius ball by one
/// trip around the cycle.
pub fn attracting_traps(m: &MapSpec, cycles: &[PeriodicOrbit]) -> Vec<Trap> {
    let mut out = Vec::new();
    for cyc in cycles {
        let n = m.dim();
        let radius = (1..=8).map(|j| 10f64.powi(-j)).find(|&rho| {
            (0..64).all(|i| {
                let mut p = cyc.points[0];
                // deterministic directions on the sphere
                let c = (i as f64 * 0.7548776662).fract() * std::f64::consts::TAU;
                let s = (i as f64 * 0.5698402910).fract() * std::f64::consts::TAU;
                let k = i % n;
                let l = (i / n) % n;
                p[k] += num_complex::Complex64::from_polar(rho / 2f64.sqrt(), c);
                p[l] += num_complex::Complex64::from_polar(rho / 2f64.sqrt(), s);
                let mut q = p;
                for _ in 0..cyc.period {
                    match m.eval_forward(&q) {
                        Ok(next) => q = next,
                        Err(_) => return false,
                    }
                }
                q.dist(&cyc.points[0]) < 0.5 * rho
            })
        });
        if let Some(r) = radius {
            out.extend(cyc.points.iter().map(|&centre| Trap { centre, radius: r }));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndicatorOptions {
    pub max_steps: usize,
    /// Linearised image radius beyond which a box is kept undecided.
    pub radius_cap: f64,
}

impl Default for IndicatorOptions {
    fn default() -> Self {
        IndicatorOptions { max_steps: 80, radius_cap: 0.25 }
    }
}

/// Whether the ball `B(p, rho)` provably (to first order) leaves through the
/// escape region of `dir` or falls into a trap.
fn excluded(
    m: &MapSpec,
    fs: &FiltrationSpec,
    dir: Direction,
    traps: &[Trap],
    p: &CPoint,
    rho: f64,
    opts: &IndicatorOptions,
    cap: f64,
) -> bool {
    let region = match dir {
        Direction::Forward => Region::Vminus,
        Direction::Backward => Region::Vplus,
    };
    let mut q = *p;
    let mut prod = ScaledMat::identity(m.dim());
    let mut r = rho;
    for _ in 0..=opts.max_steps {
        if fs.ball_in(region, &q, r) {
            return true;
        }
        if traps.iter().any(|t| q.dist(&t.centre) + r < t.radius) {
            return true;
        }
        if r > cap {
            return false;
        }
        prod.left_mul(&m.jacobian_in(dir, &q));
        q = match m.eval(dir, &q) {
            Ok(next) => next,
            Err(_) => return true,
        };
        r = rho * prod.mat.frobenius() * prod.log_scale.exp();
    }
    false
}

/// Box counting by recursive refinement of `cube`: a box is split while its
/// circumscribed ball is not excluded for the target.
pub fn box_dimension_indicator(
    m: &MapSpec,
    fs: &FiltrationSpec,
    target: IndicatorTarget,
    attractors: &[PeriodicOrbit],
    cube: &Cube,
    levels: &[u32],
    fit_window: (u32, u32),
    opts: &IndicatorOptions,
) -> Result<BoxCountResult> {
    if levels.len() < 3 {
        return Err(Error::InvalidArgument("box counting needs at least 3 scales".into()));
    }
    let dim = 2 * m.dim();
    if cube.lo.len() != dim {
        return Err(Error::InvalidArgument("cube dimension does not match the map".into()));
    }
    let traps = if target == IndicatorTarget::J { attracting_traps(m, attractors) } else { Vec::new() };
    let cap = opts.radius_cap * fs.radius;
    let max_level = *levels.iter().max().expect("nonempty");
    let keep = |idx: &Vec<u32>, level: u32| -> bool {
        let side = cube.side / 2f64.powi(level as i32);
        let reals: Vec<f64> = idx.iter().zip(&cube.lo).map(|(&i, l)| l + (i as f64 + 0.5) * side).collect();
        let p = CPoint::from_reals(&reals);
        let rho = 0.5 * side * (dim as f64).sqrt();
        let fwd = || excluded(m, fs, Direction::Forward, &traps, &p, rho, opts, cap);
        let bwd = || excluded(m, fs, Direction::Backward, &[], &p, rho, opts, cap);
        match target {
            IndicatorTarget::KPlus => !fwd(),
            IndicatorTarget::KMinus => !bwd(),
            IndicatorTarget::K | IndicatorTarget::J => !fwd() && !bwd(),
        }
    };
    let mut boxes: Vec<Vec<u32>> = vec![vec![0; dim]];
    let mut counts_by_level = vec![0u64; max_level as usize + 1];
    boxes.retain(|b| keep(b, 0));
    counts_by_level[0] = boxes.len() as u64;
    for level in 1..=max_level {
        let children = par_map(&boxes, |b| {
            (0..1u32 << dim)
                .map(|mask| (0..dim).map(|i| 2 * b[i] + ((mask >> i) & 1)).collect::<Vec<u32>>())
                .filter(|c| keep(c, level))
                .collect::<Vec<_>>()
        });
        boxes = children.into_iter().flatten().collect();
        counts_by_level[level as usize] = boxes.len() as u64;
    }
    let counts: Vec<u64> = levels.iter().map(|&j| counts_by_level[j as usize]).collect();
    let scales: Vec<f64> = levels.iter().map(|&j| cube.side / 2f64.powi(j as i32)).collect();
    let (slope, intercept, residual) = fit(levels, &scales, &counts, fit_window)?;
    Ok(BoxCountResult {
        target: target.name().to_string(),
        source: "indicator".into(),
        levels: levels.to_vec(),
        scales,
        counts,
        fit_window,
        slope,
        intercept,
        residual,
    })
}
