//! Analytic dimension bounds next to measured box dimensions.

use std::fmt;

use crate::map::MapSpec;

pub const CHECK_TOL: f64 = 0.1;

/// Box dimensions and growth rates fed into the report. Missing
/// measurements skip the checks that need them.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Measurements {
    pub boxdim_j: Option<f64>,
    pub boxdim_k: Option<f64>,
    pub boxdim_kminus: Option<f64>,
    pub boxdim_jplus: Option<f64>,
    pub boxdim_jminus: Option<f64>,
    pub s_plus: f64,
    pub s_minus: f64,
}

/// Pressure inputs for the bounds that need hyperbolicity.
#[derive(Clone, Debug, PartialEq)]
pub struct ThermoInputs {
    pub b_plus: f64,
    pub b_minus: f64,
    pub hyperbolic: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bound {
    pub name: &'static str,
    pub hypothesis: &'static str,
    pub hypothesis_holds: bool,
    /// `None` when the hypothesis fails.
    pub value: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    /// e.g. `boxdim_J >= lower_J - 0.1`.
    pub description: String,
    pub measured: f64,
    pub bound: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionReport {
    pub n: usize,
    pub measured: Measurements,
    pub bounds: Vec<Bound>,
    pub checks: Vec<Check>,
}

impl DimensionReport {
    pub fn bound(&self, name: &str) -> Option<&Bound> {
        self.bounds.iter().find(|b| b.name == name)
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.bound(name).and_then(|b| b.value)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.verdict == Verdict::Pass)
    }

    /// `(key, value)` rows for a key-value CSV.
    pub fn rows(&self) -> Vec<(String, String)> {
        let opt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |x| x.to_string());
        let m = &self.measured;
        let mut out = vec![
            ("n".to_string(), self.n.to_string()),
            ("s_plus".into(), m.s_plus.to_string()),
            ("s_minus".into(), m.s_minus.to_string()),
            ("boxdim_J".into(), opt(m.boxdim_j)),
            ("boxdim_K".into(), opt(m.boxdim_k)),
            ("boxdim_Kminus".into(), opt(m.boxdim_kminus)),
            ("boxdim_Jplus".into(), opt(m.boxdim_jplus)),
            ("boxdim_Jminus".into(), opt(m.boxdim_jminus)),
        ];
        for b in &self.bounds {
            out.push((b.name.to_string(), opt(b.value)));
            out.push((format!("{}_hypothesis", b.name), format!("{}={}", b.hypothesis, b.hypothesis_holds)));
        }
        for c in &self.checks {
            out.push((format!("check[{}]", c.description), format!("{} ({} vs {})", c.verdict, c.measured, c.bound)));
        }
        out
    }
}

fn upper(description: String, measured: f64, bound: f64) -> Check {
    let verdict = if measured <= bound + CHECK_TOL { Verdict::Pass } else { Verdict::Fail };
    Check { description, measured, bound, verdict }
}

fn lower(description: String, measured: f64, bound: f64) -> Check {
    let verdict = if measured >= bound - CHECK_TOL { Verdict::Pass } else { Verdict::Fail };
    Check { description, measured, bound, verdict }
}

/// Every bound with its hypothesis flag, and a PASS/FAIL check against each
/// available measurement at tolerance [`CHECK_TOL`].
pub fn bound_report(m: &MapSpec, meas: &Measurements, thermo: Option<&ThermoInputs>) -> DimensionReport {
    let n = m.dim();
    let two_n = 2.0 * n as f64;
    let d = m.degree() as f64;
    let (sp, sm) = (meas.s_plus, meas.s_minus);
    let l = m.regularity_index().map(f64::from);
    let log_det = m.det_df().norm().ln();
    let hyperbolic = thermo.is_some_and(|t| t.hyperbolic);
    let dim_i_minus_zero = m.indeterminacy_sets().1.dim() == Some(0);

    let mut bounds = Vec::new();
    let mut checks = Vec::new();
    let mut emit = |name, hypothesis, holds: bool, value: f64| {
        bounds.push(Bound { name, hypothesis, hypothesis_holds: holds, value: holds.then_some(value) });
        holds.then_some(value)
    };

    if let Some(b) = emit("upper_Kminus", "volume_decreasing", log_det < 0.0, two_n + 2.0 * log_det / sm) {
        if let Some(x) = meas.boxdim_kminus {
            checks.push(upper("boxdim_Kminus <= upper_Kminus + 0.1".into(), x, b));
        }
        if let Some(x) = meas.boxdim_k {
            checks.push(upper("boxdim_K <= upper_Kminus + 0.1".into(), x, b));
        }
    }
    let ld = l.unwrap_or(f64::NAN) * d.ln();
    if let Some(b) = emit("lower_J", "regular", l.is_some(), (ld / sp).max(ld / sm)) {
        if let Some(x) = meas.boxdim_j {
            checks.push(lower("boxdim_J >= lower_J - 0.1".into(), x, b));
        }
    }
    if let Some(b) = emit("lower_Jplus", "dim_I_minus_zero", dim_i_minus_zero, two_n - 2.0 + d.ln() / sp) {
        if let Some(x) = meas.boxdim_jplus {
            checks.push(lower("boxdim_Jplus >= lower_Jplus - 0.1".into(), x, b));
        }
    }
    let (bp, bm) = thermo.map_or((f64::NAN, f64::NAN), |t| (t.b_plus, t.b_minus));
    let jpm_ok = hyperbolic && bp < 0.0 && bm < 0.0;
    if let Some(b) = emit("upper_Jpm", "hyperbolic_heuristic", jpm_ok, two_n + (bp / sp).max(bm / sm)) {
        for (name, v) in [("boxdim_Jplus", meas.boxdim_jplus), ("boxdim_Jminus", meas.boxdim_jminus), ("boxdim_J", meas.boxdim_j)] {
            if let Some(x) = v {
                checks.push(upper(format!("{name} <= upper_Jpm + 0.1"), x, b));
            }
        }
    }
    if let Some(b) = emit("measure_lower", "hyperbolic_heuristic", hyperbolic && l.is_some(), ld * (1.0 / sp + 1.0 / sm)) {
        if let Some(x) = meas.boxdim_j {
            checks.push(lower("boxdim_J >= measure_lower - 0.1".into(), x, b));
        }
    }
    DimensionReport { n, measured: meas.clone(), bounds, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meas() -> Measurements {
        Measurements { boxdim_j: Some(0.6), boxdim_kminus: Some(2.6), s_plus: 1.0, s_minus: 2.0, ..Measurements::default() }
    }

    #[test]
    fn volume_decreasing_bound_below_four() {
        let m = MapSpec::henon_quadratic(-0.1, 0.3).unwrap();
        let r = bound_report(&m, &meas(), None);
        let b = r.value("upper_Kminus").unwrap();
        assert!((b - (4.0 + 0.3f64.ln())).abs() < 1e-12);
        assert!(r.value("upper_Jpm").is_none());
    }

    #[test]
    fn conservative_map_omits_upper_kminus() {
        let m = MapSpec::henon_quadratic(-6.0, 1.0).unwrap();
        let r = bound_report(&m, &meas(), None);
        let b = r.bound("upper_Kminus").unwrap();
        assert!(!b.hypothesis_holds && b.value.is_none());
        assert!(r.bounds.iter().all(|b| b.value.is_some() == b.hypothesis_holds));
    }

    #[test]
    fn hyperbolic_inputs_emit_upper_jpm() {
        let m = MapSpec::henon_quadratic(-6.0, 1.0).unwrap();
        let t = ThermoInputs { b_plus: -1.0, b_minus: -1.0, hyperbolic: true };
        let r = bound_report(&m, &Measurements { boxdim_j: Some(1.0), ..meas() }, Some(&t));
        assert!((r.value("upper_Jpm").unwrap() - 3.5).abs() < 1e-12);
        // log 2 (1 + 1/2)
        assert!((r.value("measure_lower").unwrap() - 1.5 * 2f64.ln()).abs() < 1e-12);
        assert!(r.all_pass());
        let low = bound_report(&m, &meas(), Some(&t));
        assert!(!low.all_pass());
    }
}
