//! Growth rates `s± = lim (1/k) log max |Df^{±k}|` over a sample set.

use crate::filtration::{FiltrationSpec, Region};
use crate::linalg::{CPoint, ScaledMat};
use crate::map::{Direction, Dynamics, MapSpec};
use crate::orbit::PeriodicOrbit;
use crate::par::par_map;
use crate::potential::linear_fit;

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthRate {
    pub direction: Direction,
    /// `(k, s_k)` with `s_k = (1/k) log max_p |Df^k(p)|`.
    pub per_k: Vec<(usize, f64)>,
    /// Slope of `k s_k` against `k` over the last third of the sequence.
    pub s: f64,
    pub samples: usize,
    /// Points that left the admissible set before `k_max`.
    pub dropped: usize,
    pub descriptor: String,
}

/// `log |D^k(p)|` for `k = 1..=k_max`, cut short when `alive` fails.
fn log_norms<D: Dynamics + ?Sized>(d: &D, p: &CPoint, k_max: usize, alive: &(dyn Fn(&CPoint) -> bool + Sync)) -> Vec<f64> {
    let mut out = Vec::with_capacity(k_max);
    let mut prod = ScaledMat::identity(d.dim());
    let mut q = *p;
    for _ in 0..k_max {
        prod.left_mul(&d.jacobian(&q));
        q = match d.step(&q) {
            Ok(next) => next,
            Err(_) => break,
        };
        out.push(prod.log_spectral_norm());
        if !alive(&q) {
            break;
        }
    }
    out
}

/// Generic form over any [`Dynamics`]; `alive` decides admissibility of iterates.
pub fn growth_rate_dyn<D: Dynamics + ?Sized>(
    d: &D,
    direction: Direction,
    samples: &[CPoint],
    k_max: usize,
    alive: &(dyn Fn(&CPoint) -> bool + Sync),
    descriptor: &str,
) -> GrowthRate {
    let rows = par_map(samples, |p| log_norms(d, p, k_max, alive));
    let dropped = rows.iter().filter(|r| r.len() < k_max).count();
    let per_k: Vec<(usize, f64)> = (1..=k_max)
        .filter_map(|k| {
            rows.iter()
                .filter_map(|r| r.get(k - 1).copied())
                .reduce(f64::max)
                .map(|v| (k, v / k as f64))
        })
        .collect();
    let s = extrapolate(&per_k);
    GrowthRate { direction, per_k, s, samples: samples.len(), dropped, descriptor: descriptor.to_string() }
}

/// Slope of `k s_k` over the last third of `per_k`; falls back to the last
/// value when fewer than two points are available.
pub fn extrapolate(per_k: &[(usize, f64)]) -> f64 {
    let start = per_k.len() - per_k.len() / 3;
    let tail = &per_k[start.saturating_sub(1).min(per_k.len().saturating_sub(2))..];
    if tail.len() < 2 {
        return per_k.last().map_or(f64::NAN, |x| x.1);
    }
    let xs: Vec<f64> = tail.iter().map(|x| x.0 as f64).collect();
    let ys: Vec<f64> = tail.iter().map(|x| x.0 as f64 * x.1).collect();
    linear_fit(&xs, &ys).0
}

/// `s+` or `s-` over every point of the given cycles. Products follow the
/// stored cycle points, so iterating `f^-1` on a strongly dissipative map
/// cannot drift off the orbit.
pub fn growth_rate_cycles(m: &MapSpec, dir: Direction, cycles: &[PeriodicOrbit], k_max: usize, descriptor: &str) -> GrowthRate {
    let starts: Vec<(usize, usize)> = cycles
        .iter()
        .enumerate()
        .flat_map(|(c, o)| (0..o.period).map(move |i| (c, i)))
        .collect();
    let rows = par_map(&starts, |&(c, i)| {
        let pts = &cycles[c].points;
        let p = pts.len();
        let mut prod = ScaledMat::identity(m.dim());
        let mut j = i;
        (0..k_max)
            .map(|_| {
                prod.left_mul(&m.jacobian_in(dir, &pts[j]));
                j = match dir {
                    Direction::Forward => (j + 1) % p,
                    Direction::Backward => (j + p - 1) % p,
                };
                prod.log_spectral_norm()
            })
            .collect::<Vec<f64>>()
    });
    let per_k: Vec<(usize, f64)> = (1..=k_max)
        .filter_map(|k| rows.iter().map(|r| r[k - 1]).reduce(f64::max).map(|v| (k, v / k as f64)))
        .collect();
    let s = extrapolate(&per_k);
    GrowthRate { direction: dir, per_k, s, samples: starts.len(), dropped: 0, descriptor: descriptor.to_string() }
}

/// `s+` (forward) or `s-` (backward) on `samples`; iterates must stay in `V`.
pub fn growth_rate(
    m: &MapSpec,
    fs: &FiltrationSpec,
    dir: Direction,
    samples: &[CPoint],
    k_max: usize,
    descriptor: &str,
) -> GrowthRate {
    let alive = |q: &CPoint| fs.region(q) == Region::V;
    growth_rate_dyn(&m.directed(dir), dir, samples, k_max, &alive, descriptor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMat;
    use crate::map::LinearMap;
    use num_complex::Complex64;

    #[test]
    fn constant_cocycle_gives_log_sigma() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let lin = LinearMap { matrix: CMat::from_rows(&[&[c(3.0), c(1.0)], &[c(0.0), c(0.5)]]) };
        let sigma = lin.matrix.spectral_norm();
        let g = growth_rate_dyn(&lin, Direction::Forward, &[CPoint::from_real(&[0.0, 0.0])], 1, &|_| true, "lin");
        assert!((g.s - sigma.ln()).abs() < 1e-12);
        let diag = LinearMap { matrix: CMat::from_rows(&[&[c(3.0), c(0.0)], &[c(0.0), c(0.5)]]) };
        let g = growth_rate_dyn(&diag, Direction::Forward, &[CPoint::from_real(&[0.0, 0.0])], 30, &|_| true, "lin");
        assert!((g.s - 3f64.ln()).abs() < 1e-12);
        assert!(g.per_k.iter().all(|&(_, s)| (s - 3f64.ln()).abs() < 1e-12));
    }

    #[test]
    fn extrapolation_of_affine_sequence() {
        // k s_k = 2k + 1
        let per_k: Vec<(usize, f64)> = (1..=12).map(|k| (k, (2.0 * k as f64 + 1.0) / k as f64)).collect();
        assert!((extrapolate(&per_k) - 2.0).abs() < 1e-12);
    }
}
