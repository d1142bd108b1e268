//! Bowen–Ruelle roots and box dimension along a one-parameter path.

use crate::error::Result;
use crate::filtration::{choose_radius, VerifyBudget};
use crate::linalg::CPoint;
use crate::map::MapSpec;
use crate::orbit::{census_range, Census, NewtonOptions};
use crate::thermo::{bowen_ruelle_root, hyperbolicity_heuristic, HyperbolicityOptions, Weight, DEFAULT_BRACKET};

use super::boxcount::{box_dimension_indicator, Cube, IndicatorOptions, IndicatorTarget};

/// Adjacent-step change in `t^u` or `t^s` above which a step is flagged.
pub const JUMP_LIMIT: f64 = 0.05;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOptions {
    pub k_max: usize,
    pub newton: NewtonOptions,
    /// Box-count levels for `J`; empty to skip box counting.
    pub levels: Vec<u32>,
    pub fit_window: (u32, u32),
    pub indicator: IndicatorOptions,
    pub filtration: VerifyBudget,
    pub hyperbolicity: HyperbolicityOptions,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            k_max: 6,
            newton: NewtonOptions::default(),
            levels: (0..=9).collect(),
            fit_window: (3, 9),
            indicator: IndicatorOptions::default(),
            filtration: VerifyBudget { samples: 2000, ..VerifyBudget::default() },
            hyperbolicity: HyperbolicityOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepStep {
    pub param: f64,
    pub t_u: Option<f64>,
    pub t_s: Option<f64>,
    pub boxdim_j: Option<f64>,
    pub hyperbolic: bool,
    /// Set when the hyperbolicity diagnostic fails, a root is missing, or the
    /// step jumps by more than [`JUMP_LIMIT`] from its predecessor.
    pub flagged: bool,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub steps: Vec<SweepStep>,
    /// Largest adjacent change of `t^u` and `t^s`.
    pub max_jump: f64,
    /// Largest second difference of `t^u` and `t^s`.
    pub max_second_difference: f64,
}

/// Largest first and second differences over the defined consecutive values.
pub fn differences(values: &[Option<f64>]) -> (f64, f64) {
    let first = values
        .windows(2)
        .filter_map(|w| Some((w[1]? - w[0]?).abs()))
        .fold(0.0, f64::max);
    let second = values
        .windows(3)
        .filter_map(|w| Some((w[2]? - 2.0 * w[1]? + w[0]?).abs()))
        .fold(0.0, f64::max);
    (first, second)
}

fn step(m: &MapSpec, param: f64, opts: &SweepOptions) -> SweepStep {
    let mut notes = Vec::new();
    let mut out = SweepStep { param, t_u: None, t_s: None, boxdim_j: None, hyperbolic: false, flagged: false, note: String::new() };
    let fs = match choose_radius(m, opts.filtration) {
        Ok(fs) => fs,
        Err(e) => {
            out.flagged = true;
            out.note = e.to_string();
            return out;
        }
    };
    let censuses = census_range(m, &fs, opts.k_max, &opts.newton);
    let points = saddle_points(&censuses);
    let diag = hyperbolicity_heuristic(&m.forward(), &m.backward(), &points, &opts.hyperbolicity);
    out.hyperbolic = diag.pass;
    if !diag.pass {
        notes.push(format!(
            "hyperbolicity heuristic failed (worst gap {:.4}, worst angle {:.4})",
            diag.worst_gap, diag.worst_angle
        ));
    }
    match bowen_ruelle_root(&censuses, Weight::Unstable, DEFAULT_BRACKET) {
        Ok(r) => out.t_u = Some(r.t),
        Err(e) => notes.push(format!("t^u: {e}")),
    }
    match bowen_ruelle_root(&censuses, Weight::Stable, DEFAULT_BRACKET) {
        Ok(r) => out.t_s = Some(r.t),
        Err(e) => notes.push(format!("t^s: {e}")),
    }
    if !opts.levels.is_empty() {
        let cube = Cube::polydisk(m.dim(), fs.radius);
        let att: Vec<_> = censuses.iter().flat_map(|c| c.attracting().cloned().collect::<Vec<_>>()).collect();
        match box_dimension_indicator(m, &fs, IndicatorTarget::J, &att, &cube, &opts.levels, opts.fit_window, &opts.indicator) {
            Ok(b) => out.boxdim_j = Some(b.slope),
            Err(e) => notes.push(format!("boxdim: {e}")),
        }
    }
    out.flagged = !diag.pass || out.t_u.is_none() || out.t_s.is_none();
    out.note = notes.join("; ");
    out
}

/// Every point of every saddle cycle in the censuses, the `J` proxy used by
/// the hyperbolicity heuristic.
pub fn saddle_points(censuses: &[Census]) -> Vec<CPoint> {
    let mut out: Vec<CPoint> = Vec::new();
    for c in censuses {
        for o in c.orbits.iter().filter(|o| o.is_saddle() && o.period == c.k) {
            out.extend_from_slice(&o.points);
        }
    }
    out
}

/// Runs each parameter through `build` and evaluates the step; failures flag
/// the step and the sweep carries on.
pub fn dimension_sweep(build: impl Fn(f64) -> Result<MapSpec>, params: &[f64], opts: &SweepOptions) -> SweepResult {
    let mut steps: Vec<SweepStep> = params
        .iter()
        .map(|&c| match build(c) {
            Ok(m) => step(&m, c, opts),
            Err(e) => SweepStep {
                param: c,
                t_u: None,
                t_s: None,
                boxdim_j: None,
                hyperbolic: false,
                flagged: true,
                note: e.to_string(),
            },
        })
        .collect();
    for i in 1..steps.len() {
        let jump = |f: fn(&SweepStep) -> Option<f64>| Some((f(&steps[i])? - f(&steps[i - 1])?).abs());
        let worst = jump(|s| s.t_u).into_iter().chain(jump(|s| s.t_s)).fold(0.0, f64::max);
        if worst > JUMP_LIMIT {
            steps[i].flagged = true;
            let sep = if steps[i].note.is_empty() { "" } else { "; " };
            steps[i].note = format!("{}{sep}jump {worst:.4}", steps[i].note);
        }
    }
    let tu: Vec<Option<f64>> = steps.iter().map(|s| s.t_u).collect();
    let ts: Vec<Option<f64>> = steps.iter().map(|s| s.t_s).collect();
    let (j1, s1) = differences(&tu);
    let (j2, s2) = differences(&ts);
    SweepResult { steps, max_jump: j1.max(j2), max_second_difference: s1.max(s2) }
}

/// `n` evenly spaced parameters from `a` to `b`.
pub fn linear_path(a: f64, b: f64, n: usize) -> Vec<f64> {
    crate::thermo::t_grid(a, b, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differences_of_a_parabola() {
        let v: Vec<Option<f64>> = (0..5).map(|i| Some((i * i) as f64)).collect();
        assert_eq!(differences(&v), (7.0, 2.0));
        assert_eq!(differences(&[Some(1.0), None, Some(9.0)]), (0.0, 0.0));
    }

    #[test]
    fn constant_path_has_no_variation() {
        let opts = SweepOptions {
            k_max: 3,
            newton: NewtonOptions { grid: 30, random_seeds: 200, ..NewtonOptions::default() },
            levels: Vec::new(),
            filtration: VerifyBudget { samples: 200, ..VerifyBudget::default() },
            ..SweepOptions::default()
        };
        let r = dimension_sweep(|c| MapSpec::henon_quadratic(c, 0.1), &[-6.0; 3], &opts);
        assert_eq!(r.max_jump, 0.0);
        assert_eq!(r.max_second_difference, 0.0);
        assert!(r.steps.iter().all(|s| s.t_u.is_some() && !s.flagged), "{:?}", r.steps);
    }
}
