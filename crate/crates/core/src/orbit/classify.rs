//! Orbit verdicts and basin grids.

use std::fmt;

use crate::filtration::{FiltrationSpec, Region};
use crate::linalg::CPoint;
use crate::map::{Direction, MapSpec};
use crate::orbit::periodic::PeriodicOrbit;
use crate::par::par_range;

pub const ATTRACTION_TOL: f64 = 1e-6;
pub const CONTRACTING_STEPS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// Entered `V-` at step `k`; escape is then forced.
    EscapesForward(usize),
    /// Entered `V+` at step `k` of the backward orbit.
    EscapesBackward(usize),
    /// Settled on registered attracting cycle `cycle` by step `k`.
    ConvergesToCycle { cycle: usize, k: usize },
    /// Never escaped or settled within the budget and ended in `V`.
    BoundedNonAttracted,
    Undecided,
}

impl Verdict {
    pub fn label(&self) -> String {
        match self {
            Verdict::EscapesForward(_) => "escapes_forward".into(),
            Verdict::EscapesBackward(_) => "escapes_backward".into(),
            Verdict::ConvergesToCycle { cycle, .. } => format!("cycle_{cycle}"),
            Verdict::BoundedNonAttracted => "bounded".into(),
            Verdict::Undecided => "undecided".into(),
        }
    }

    pub fn step(&self) -> Option<usize> {
        match *self {
            Verdict::EscapesForward(k) | Verdict::EscapesBackward(k) => Some(k),
            Verdict::ConvergesToCycle { k, .. } => Some(k),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitClassification {
    pub verdict: Verdict,
    pub iterations: usize,
    /// Distance to the nearest registered attracting cycle at the last step.
    pub final_distance: f64,
}

/// Follows the orbit of `p` under `f` (or `f^-1`) for up to `budget` steps.
///
/// Backward orbits escape through `V+`; `attractors` must then be attracting
/// cycles of `f^-1`.
pub fn classify_point(
    m: &MapSpec,
    fs: &FiltrationSpec,
    attractors: &[PeriodicOrbit],
    p: &CPoint,
    budget: usize,
    dir: Direction,
) -> OrbitClassification {
    let escape_region = match dir {
        Direction::Forward => Region::Vminus,
        Direction::Backward => Region::Vplus,
    };
    let escaped = |k| match dir {
        Direction::Forward => Verdict::EscapesForward(k),
        Direction::Backward => Verdict::EscapesBackward(k),
    };
    if budget == 0 {
        return OrbitClassification { verdict: Verdict::Undecided, iterations: 0, final_distance: f64::INFINITY };
    }
    // per attractor: distance history over one period and the contraction streak
    let mut hist: Vec<Vec<f64>> = attractors.iter().map(|a| vec![f64::INFINITY; a.period]).collect();
    let mut streak = vec![0usize; attractors.len()];
    let mut q = *p;
    let mut nearest = f64::INFINITY;
    for k in 0..=budget {
        if fs.region(&q) == escape_region {
            return OrbitClassification { verdict: escaped(k), iterations: k, final_distance: nearest };
        }
        nearest = f64::INFINITY;
        for (i, a) in attractors.iter().enumerate() {
            let d = a.nearest(&q).1;
            nearest = nearest.min(d);
            let slot = k % a.period;
            let contracting = d <= hist[i][slot] || d < 1e-12;
            hist[i][slot] = d;
            if d < ATTRACTION_TOL && contracting {
                streak[i] += 1;
                if streak[i] >= CONTRACTING_STEPS {
                    return OrbitClassification {
                        verdict: Verdict::ConvergesToCycle { cycle: i, k },
                        iterations: k,
                        final_distance: d,
                    };
                }
            } else {
                streak[i] = 0;
            }
        }
        if k == budget {
            break;
        }
        q = match m.eval(dir, &q) {
            Ok(next) => next,
            Err(_) => {
                return OrbitClassification { verdict: escaped(k + 1), iterations: k + 1, final_distance: nearest };
            }
        };
    }
    let verdict = if fs.region(&q) == Region::V { Verdict::BoundedNonAttracted } else { Verdict::Undecided };
    OrbitClassification { verdict, iterations: budget, final_distance: nearest }
}

/// An affine real 2-plane in `C^n`: `base + s e1 + t e2`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridWindow {
    pub base: CPoint,
    pub e1: CPoint,
    pub e2: CPoint,
    pub s_range: (f64, f64),
    pub t_range: (f64, f64),
    pub width: usize,
    pub height: usize,
}

impl GridWindow {
    /// The real `(z_0, z_1)` plane with the other coordinates fixed at `base`.
    pub fn real_plane(n: usize, s_range: (f64, f64), t_range: (f64, f64), width: usize, height: usize) -> Self {
        let mut e1 = CPoint::zeros(n);
        let mut e2 = CPoint::zeros(n);
        e1[0] = 1.0.into();
        e2[1] = 1.0.into();
        GridWindow { base: CPoint::zeros(n), e1, e2, s_range, t_range, width, height }
    }

    /// Slice coordinates of the centre of cell `(row, col)`; row 0 is the top.
    pub fn coords(&self, row: usize, col: usize) -> (f64, f64) {
        let s = self.s_range.0 + (col as f64 + 0.5) / self.width as f64 * (self.s_range.1 - self.s_range.0);
        let t = self.t_range.1 - (row as f64 + 0.5) / self.height as f64 * (self.t_range.1 - self.t_range.0);
        (s, t)
    }

    pub fn point(&self, row: usize, col: usize) -> CPoint {
        let (s, t) = self.coords(row, col);
        self.base + self.e1.scale(s) + self.e2.scale(t)
    }

    pub fn cells(&self) -> usize {
        self.width * self.height
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasinMap {
    pub window: GridWindow,
    /// Row-major, top-left origin.
    pub cells: Vec<OrbitClassification>,
}

impl BasinMap {
    pub fn count(&self, pred: impl Fn(&Verdict) -> bool) -> usize {
        self.cells.iter().filter(|c| pred(&c.verdict)).count()
    }

    /// 8-bit gray level per cell.
    pub fn gray(&self) -> Vec<u8> {
        self.cells
            .iter()
            .map(|c| match c.verdict {
                Verdict::EscapesForward(k) | Verdict::EscapesBackward(k) => 255 - (4 * k.min(40)) as u8,
                Verdict::ConvergesToCycle { cycle, .. } => 40 + (30 * (cycle % 4)) as u8,
                Verdict::BoundedNonAttracted => 0,
                Verdict::Undecided => 20,
            })
            .collect()
    }

    /// Rows `(s, t, class, k)`.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, String, usize)> + '_ {
        self.cells.iter().enumerate().map(|(i, c)| {
            let (s, t) = self.window.coords(i / self.window.width, i % self.window.width);
            (s, t, c.verdict.label(), c.verdict.step().unwrap_or(c.iterations))
        })
    }
}

/// Classifies every cell centre of `window`.
pub fn basin_map(
    m: &MapSpec,
    fs: &FiltrationSpec,
    attractors: &[PeriodicOrbit],
    window: &GridWindow,
    budget: usize,
    dir: Direction,
) -> BasinMap {
    let w = window.width;
    let rows = par_range(window.height, |row| {
        (0..w)
            .map(|col| classify_point(m, fs, attractors, &window.point(row, col), budget, dir))
            .collect::<Vec<_>>()
    });
    BasinMap { window: window.clone(), cells: rows.into_iter().flatten().collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::default_regions;

    #[test]
    fn far_point_escapes_quickly() {
        let m = MapSpec::henon_quadratic(-6.0, 1.0).unwrap();
        let fs = default_regions(&m, 4.6).unwrap();
        let c = classify_point(&m, &fs, &[], &CPoint::from_real(&[100.0, 100.0]), 50, Direction::Forward);
        assert_eq!(c.verdict, Verdict::EscapesForward(0));
        let c = classify_point(&m, &fs, &[], &CPoint::from_real(&[100.0, 100.0]), 0, Direction::Forward);
        assert_eq!(c.verdict, Verdict::Undecided);
    }

    #[test]
    fn saddle_fixed_point_is_bounded() {
        let m = MapSpec::henon_quadratic(-6.0, 1.0).unwrap();
        let fs = default_regions(&m, 4.6).unwrap();
        let y = 1.0 - 7f64.sqrt();
        let c = classify_point(&m, &fs, &[], &CPoint::from_real(&[y, y]), 30, Direction::Forward);
        assert_eq!(c.verdict, Verdict::BoundedNonAttracted);
    }

    #[test]
    fn window_orientation() {
        let w = GridWindow::real_plane(2, (-2.0, 2.0), (-2.0, 2.0), 4, 4);
        let (s, t) = w.coords(0, 0);
        assert!(s < 0.0 && t > 0.0);
        let (s, t) = w.coords(3, 3);
        assert!(s > 0.0 && t < 0.0);
    }
}
