//! Pressure of `t φ^u` and `t φ^s` from periodic-orbit sums, Bowen–Ruelle
//! roots, entropy and a hyperbolicity heuristic.
//!
//! All sums run over the fixed points of `f^k`, so a cycle of period `p | k`
//! contributes `p` equal terms.

use crate::error::{Error, Result};
use crate::linalg::{CMat, CPoint, ScaledMat};
use crate::map::Dynamics;
use crate::orbit::{Census, PeriodicOrbit, Stability};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Weight {
    /// `S_k = -log |Λ_u|`, `Λ_u` the product of the expanding multipliers of `Df^k`.
    Unstable,
    /// `S_k = log |Λ_c|`, `Λ_c` the product of the contracting multipliers of
    /// `Df^k`, i.e. minus the log of the expansion of `f^-k` along `E^s`.
    Stable,
}

impl Weight {
    pub fn name(self) -> &'static str {
        match self {
            Weight::Unstable => "unstable",
            Weight::Stable => "stable",
        }
    }
}

impl std::str::FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unstable" | "u" => Ok(Weight::Unstable),
            "stable" | "s" => Ok(Weight::Stable),
            _ => Err(Error::InvalidArgument(format!("unknown weight {s:?} (expected unstable or stable)"))),
        }
    }
}

/// Birkhoff sums `S_k(x)` over the saddle fixed points of `f^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointSums {
    pub k: usize,
    pub sums: Vec<f64>,
    /// Fixed points left out because the cycle is not a saddle.
    pub excluded: usize,
}

fn log_modulus_sum(o: &PeriodicOrbit, weight: Weight) -> f64 {
    o.multipliers
        .iter()
        .map(|l| l.norm())
        .filter(|&r| match weight {
            Weight::Unstable => r > 1.0,
            Weight::Stable => r < 1.0,
        })
        .map(f64::ln)
        .sum()
}

impl FixedPointSums {
    pub fn from_census(census: &Census, weight: Weight) -> Result<Self> {
        let k = census.k;
        let mut sums = Vec::with_capacity(census.fixed_point_count());
        let mut excluded = 0;
        for o in &census.orbits {
            if !o.is_saddle() {
                excluded += o.period;
                continue;
            }
            let reps = (k / o.period) as f64;
            let s = match weight {
                Weight::Unstable => -reps * log_modulus_sum(o, weight),
                Weight::Stable => reps * log_modulus_sum(o, weight),
            };
            sums.extend(std::iter::repeat_n(s, o.period));
        }
        if sums.is_empty() {
            return Err(Error::EmptyCensus(format!("no saddle fixed points of f^{k}")));
        }
        Ok(FixedPointSums { k, sums, excluded })
    }

    /// Sums given directly, e.g. for a synthetic system.
    pub fn synthetic(k: usize, sums: Vec<f64>) -> Result<Self> {
        if sums.is_empty() || k == 0 {
            return Err(Error::EmptyCensus("synthetic system without fixed points".into()));
        }
        Ok(FixedPointSums { k, sums, excluded: 0 })
    }

    /// `P_k(t) = (1/k) log Σ exp(t S_k(x))`.
    pub fn pressure(&self, t: f64) -> f64 {
        log_sum_exp(self.sums.iter().map(|s| t * s)) / self.k as f64
    }

    /// Root of `P_k` in `[lo, hi]` by bisection; returns `(t, |P_k(t)|)`.
    pub fn root(&self, lo: f64, hi: f64) -> Result<(f64, f64)> {
        let (p_lo, p_hi) = (self.pressure(lo), self.pressure(hi));
        if !(p_lo > 0.0 && p_hi < 0.0) {
            return Err(Error::NoBracket { lo, hi });
        }
        let (mut a, mut b) = (lo, hi);
        let mut t = 0.5 * (a + b);
        for _ in 0..200 {
            t = 0.5 * (a + b);
            let p = self.pressure(t);
            if p.abs() < ROOT_TOL || b - a < 1e-15 {
                break;
            }
            if p > 0.0 {
                a = t;
            } else {
                b = t;
            }
        }
        Ok((t, self.pressure(t).abs()))
    }
}

pub const ROOT_TOL: f64 = 1e-10;

/// `log Σ exp(x_i)`, shifted by the max and summed with Neumaier compensation
/// in input order.
pub fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for x in xs {
        let v = (x - m).exp();
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    m + (sum + comp).ln()
}

pub fn pressure(census: &Census, t: f64, weight: Weight) -> Result<f64> {
    Ok(FixedPointSums::from_census(census, weight)?.pressure(t))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PressureCurve {
    pub k: usize,
    pub weight: Weight,
    pub points: Vec<(f64, f64)>,
    /// Saddle fixed points summed over.
    pub orbit_count: usize,
}

impl PressureCurve {
    pub fn strictly_decreasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].1 < w[0].1)
    }
}

pub fn pressure_curve(census: &Census, weight: Weight, ts: &[f64]) -> Result<PressureCurve> {
    let sums = FixedPointSums::from_census(census, weight)?;
    Ok(PressureCurve {
        k: census.k,
        weight,
        points: ts.iter().map(|&t| (t, sums.pressure(t))).collect(),
        orbit_count: sums.sums.len(),
    })
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn t_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BowenRuelleRoot {
    pub weight: Weight,
    pub t: f64,
    pub bracket: (f64, f64),
    /// Period of the census used for `t`.
    pub k: usize,
    pub residual: f64,
    /// `(k, t(k))` for every period from 2 on.
    pub table: Vec<(usize, f64)>,
}

impl BowenRuelleRoot {
    /// `|t(k_max) - t(k_max - 1)|`, if the table has two entries.
    pub fn last_delta(&self) -> Option<f64> {
        let n = self.table.len();
        (n >= 2).then(|| (self.table[n - 1].1 - self.table[n - 2].1).abs())
    }
}

pub const DEFAULT_BRACKET: (f64, f64) = (0.0, 2.0);

/// Roots of `P_k(t) = 0` for each census with `k >= 2`; the last one is reported.
pub fn bowen_ruelle_root(censuses: &[Census], weight: Weight, bracket: (f64, f64)) -> Result<BowenRuelleRoot> {
    let sums: Vec<FixedPointSums> = censuses
        .iter()
        .filter(|c| c.k >= 2)
        .map(|c| FixedPointSums::from_census(c, weight))
        .collect::<Result<_>>()?;
    bowen_ruelle_root_of(&sums, weight, bracket)
}

pub fn bowen_ruelle_root_of(sums: &[FixedPointSums], weight: Weight, bracket: (f64, f64)) -> Result<BowenRuelleRoot> {
    let last = sums.last().ok_or_else(|| Error::EmptyCensus("no census with k >= 2".into()))?;
    let mut table = Vec::with_capacity(sums.len());
    for s in sums {
        table.push((s.k, s.root(bracket.0, bracket.1)?.0));
    }
    let (t, residual) = last.root(bracket.0, bracket.1)?;
    Ok(BowenRuelleRoot { weight, t, bracket, k: last.k, residual, table })
}

/// The unstable index shared by every saddle of the census, if it is one.
fn unstable_index(censuses: &[Census]) -> Option<usize> {
    let mut idx = None;
    for o in censuses.iter().flat_map(|c| c.orbits.iter()) {
        if let Stability::Saddle(u) = o.stability {
            match idx {
                None => idx = Some(u),
                Some(v) if v != u => return None,
                _ => {}
            }
        }
    }
    idx
}

/// `t^u + 2n - 2`, the dimension of the stable set of `J`.
pub fn stable_set_dimension(n: usize, t_u: f64, censuses: &[Census]) -> Result<f64> {
    match unstable_index(censuses) {
        Some(1) => {}
        Some(u) => return Err(Error::Hypothesis(format!("unstable index {u}, expected 1"))),
        None => return Err(Error::Hypothesis("census has no consistent unstable index".into())),
    }
    let v = t_u + 2.0 * n as f64 - 2.0;
    let (lo, hi) = (2.0 * n as f64 - 2.0, 2.0 * n as f64);
    if !(v > lo && v < hi) {
        return Err(Error::Hypothesis(format!("stable set dimension {v} outside ({lo}, {hi})")));
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyEstimate {
    /// `(k, saddle fixed points of f^k, h_k)`.
    pub per_k: Vec<(usize, usize, f64)>,
    /// `l log d`.
    pub target: f64,
}

impl EntropyEstimate {
    pub fn last(&self) -> Option<f64> {
        self.per_k.last().map(|r| r.2)
    }
}

/// `h_k = (1/k) log #saddle Fix(f^k)`, summed exactly as [`FixedPointSums::pressure`] at `t = 0`.
pub fn entropy_estimate(censuses: &[Census], l: u32, d: u32) -> EntropyEstimate {
    let per_k = censuses
        .iter()
        .filter(|c| c.k >= 1)
        .map(|c| {
            let count = c.saddle_fixed_point_count();
            let h = if count == 0 {
                0.0
            } else {
                log_sum_exp(std::iter::repeat_n(0.0, count)) / c.k as f64
            };
            (c.k, count, h)
        })
        .collect();
    EntropyEstimate { per_k, target: l as f64 * (d as f64).ln() }
}

/// The weight exponent giving `b` in the upper bound for `J±`: `φ^u` there is
/// minus the log of the real Jacobian of `Df|E^u`, i.e. `2 log |Λ_u|` for a
/// one-dimensional complex `E^u`.
pub const B_EXPONENT: f64 = 2.0;

#[derive(Clone, Debug, PartialEq)]
pub struct UpperBoundJpm {
    pub b_plus: f64,
    pub b_minus: f64,
    pub s_plus: f64,
    pub s_minus: f64,
    /// `2n + max(b+/s+, b-/s-)`.
    pub value: f64,
}

/// `b = P_k(B_EXPONENT)` for one census and weight.
pub fn b_value(census: &Census, weight: Weight) -> Result<f64> {
    pressure(census, B_EXPONENT, weight)
}

pub fn upper_bound_jpm(n: usize, b_plus: f64, b_minus: f64, s_plus: f64, s_minus: f64) -> Result<UpperBoundJpm> {
    if !(b_plus < 0.0 && b_minus < 0.0) {
        return Err(Error::Hypothesis(format!("b+ = {b_plus}, b- = {b_minus}; both must be negative")));
    }
    if !(s_plus > 0.0 && s_minus > 0.0) {
        return Err(Error::Hypothesis(format!("s+ = {s_plus}, s- = {s_minus}; both must be positive")));
    }
    let value = 2.0 * n as f64 + (b_plus / s_plus).max(b_minus / s_minus);
    Ok(UpperBoundJpm { b_plus, b_minus, s_plus, s_minus, value })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HyperbolicityOptions {
    /// Orbit segment length.
    pub k: usize,
    /// Minimal per-step singular value ratio `(σ_u / σ_{u+1})^{1/k}`.
    pub gap: f64,
    /// Minimal transversality of the estimated `E^u` and `E^s`.
    pub angle: f64,
}

impl Default for HyperbolicityOptions {
    fn default() -> Self {
        HyperbolicityOptions { k: 8, gap: 1.1, angle: 0.05 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HyperbolicityDiagnostic {
    /// Pass/fail per sample point.
    pub per_point: Vec<bool>,
    /// Expanding dimension shared by every point, if consistent.
    pub index: Option<usize>,
    /// Smallest per-step ratio `(σ_u / σ_{u+1})^{1/k}` seen.
    pub worst_gap: f64,
    /// Smallest singular value of `[E^u | E^s]` (orthonormal bases) seen;
    /// zero when the two directions coincide.
    pub worst_angle: f64,
    pub options: HyperbolicityOptions,
    pub pass: bool,
}

/// Log singular values of the product, with the smallest one recovered from
/// the determinant for `n = 2` where the SVD loses it to rounding.
fn log_sv(prod: &ScaledMat, log_det: f64) -> Vec<f64> {
    let mut sv = prod.log_singular_values();
    if sv.len() == 2 {
        sv[1] = log_det - sv[0];
    }
    sv
}

/// Expanding index (checked for every `j <= k`), per-step gap of the
/// `k`-step product and that product, or `None` when the orbit leaves the domain or the index changes.
fn point_gap<D: Dynamics + ?Sized>(d: &D, p: &CPoint, k: usize) -> Option<(usize, f64, ScaledMat)> {
    let mut prod = ScaledMat::identity(d.dim());
    let mut log_det = 0.0;
    let mut q = *p;
    let mut index = None;
    let mut worst = f64::NAN;
    for j in 1..=k {
        let df = d.jacobian(&q);
        log_det += df.det().norm().ln();
        prod.left_mul(&df);
        q = d.step(&q).ok()?;
        let sv = log_sv(&prod, log_det);
        let u = sv.iter().filter(|&&s| s > 0.0).count();
        if u == 0 || u == sv.len() {
            return None;
        }
        match index {
            None => index = Some(u),
            Some(v) if v != u => return None,
            _ => {}
        }
        if j == k {
            worst = ((sv[u - 1] - sv[u]) / j as f64).exp();
        }
    }
    index.map(|u| (u, worst, prod))
}

/// `σ_min [E^u | E^s]` with `E^s` the `n - u` least expanded inputs of the
/// forward product and `E^u` the `u` least expanded inputs of the backward one.
fn transversality(fwd: &ScaledMat, bwd: &ScaledMat, u: usize) -> f64 {
    let n = fwd.mat.dim();
    let fs = fwd.mat.right_singular_vectors();
    let bs = bwd.mat.right_singular_vectors();
    let cols: Vec<CPoint> = bs[n - u..].iter().chain(&fs[u..]).map(|x| x.1).collect();
    let mut basis = CMat::zeros(n);
    for (j, c) in cols.iter().enumerate() {
        for i in 0..n {
            basis.set(i, j, c[i]);
        }
    }
    basis.singular_values()[n - 1]
}

/// Singular-value gap and splitting-angle test along `k`-step orbit segments
/// in both time directions. A heuristic: passing is evidence of a dominated
/// splitting, not a proof.
pub fn hyperbolicity_heuristic<F, B>(fwd: &F, bwd: &B, points: &[CPoint], opts: &HyperbolicityOptions) -> HyperbolicityDiagnostic
where
    F: Dynamics + ?Sized,
    B: Dynamics + ?Sized,
{
    let k = opts.k.max(1);
    let rows: Vec<Option<(usize, f64, f64)>> = crate::par::par_map(points, |p| {
        let (u, g, pf) = point_gap(fwd, p, k)?;
        let (us, gb, pb) = point_gap(bwd, p, k)?;
        (us + u == p.dim()).then(|| (u, g.min(gb), transversality(&pf, &pb, u)))
    });
    let index = rows.first().copied().flatten().map(|g| g.0).filter(|&u| rows.iter().all(|g| g.is_some_and(|g| g.0 == u)));
    let worst_gap = rows.iter().map(|g| g.map_or(1.0, |g| g.1)).fold(f64::INFINITY, f64::min);
    let worst_angle = rows.iter().map(|g| g.map_or(0.0, |g| g.2)).fold(f64::INFINITY, f64::min);
    let per_point: Vec<bool> = rows
        .iter()
        .map(|g| g.is_some_and(|g| Some(g.0) == index && g.1 >= opts.gap && g.2 >= opts.angle))
        .collect();
    let pass = !points.is_empty() && per_point.iter().all(|&b| b);
    HyperbolicityDiagnostic { per_point, index, worst_gap, worst_angle, options: *opts, pass }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sum_exp_of_zeros_is_log_count() {
        assert_eq!(log_sum_exp(std::iter::repeat_n(0.0, 64)), 64f64.ln());
    }

    #[test]
    fn two_point_system_matches_closed_form() {
        let (l1, l2) = (3.0f64, 5.0f64);
        let sys = FixedPointSums::synthetic(1, vec![-l1.ln(), -l2.ln()]).unwrap();
        for t in t_grid(0.0, 2.0, 21) {
            let exact = (l1.powf(-t) + l2.powf(-t)).ln();
            assert!((sys.pressure(t) - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_root() {
        let lambda = 3.5f64;
        let k = 6;
        let sys = FixedPointSums::synthetic(k, vec![-(k as f64) * lambda.ln(); 1 << k]).unwrap();
        let (t, res) = sys.root(0.0, 2.0).unwrap();
        assert!((t - 2f64.ln() / lambda.ln()).abs() < 1e-8);
        assert!(res < ROOT_TOL);
    }

    #[test]
    fn missing_bracket() {
        let sys = FixedPointSums::synthetic(1, vec![-0.1, -0.1]).unwrap();
        assert!(matches!(sys.root(0.0, 2.0), Err(Error::NoBracket { .. })));
    }

    #[test]
    fn upper_bound_rejects_nonnegative_b() {
        assert!(upper_bound_jpm(2, 0.1, -0.2, 1.0, 1.0).is_err());
        let ub = upper_bound_jpm(2, -0.5, -1.0, 1.0, 4.0).unwrap();
        assert!((ub.value - 3.75).abs() < 1e-15);
    }

    #[test]
    fn linear_saddle_gap_is_singular_value_ratio() {
        use crate::linalg::CMat;
        use crate::map::LinearMap;
        use num_complex::Complex64;
        let c = |x: f64| Complex64::new(x, 0.0);
        let lin = LinearMap { matrix: CMat::from_rows(&[&[c(3.0), c(1.0)], &[c(0.0), c(0.5)]]) };
        let inv = LinearMap { matrix: lin.matrix.inverse().unwrap() };
        let sv = lin.matrix.singular_values();
        let opts = HyperbolicityOptions { k: 1, ..HyperbolicityOptions::default() };
        let d = hyperbolicity_heuristic(&lin, &inv, &[CPoint::from_real(&[0.0, 0.0])], &opts);
        assert!((d.worst_gap - sv[0] / sv[1]).abs() < 1e-12);
        assert_eq!(d.index, Some(1));
        assert!(d.pass);
        // a diagonal saddle splits orthogonally
        let diag = LinearMap { matrix: CMat::from_rows(&[&[c(3.0), c(0.0)], &[c(0.0), c(0.5)]]) };
        let dinv = LinearMap { matrix: diag.matrix.inverse().unwrap() };
        let d = hyperbolicity_heuristic(&diag, &dinv, &[CPoint::from_real(&[0.0, 0.0])], &opts);
        assert!((d.worst_angle - 1.0).abs() < 1e-12);
    }
}
