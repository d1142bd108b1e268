//! The regions `V`, `V+`, `V-` and their Monte Carlo verification.
//!
//! The rule is derived from the indeterminacy loci. Coordinates that do not
//! vanish on `I-` are the ones that blow up under forward iteration, so
//!
//! * `V-`: the largest of those coordinates exceeds `R` and is at least every
//!   other coordinate;
//! * `V+`: the same with the free coordinates of `I+` and a strict comparison;
//! * `V`: everything else.
//!
//! `V-` is tested first, so ties go to `V-`. For Hénon maps this is exactly
//! `V- = {|y| > R, |y| >= |x|}`, `V+ = {|x| > R, |y| < |x|}` and `V` is the
//! closed bidisk of radius `R`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::CPoint;
use crate::map::MapSpec;
use crate::par::par_range;
use crate::rng::{disk, log_annulus, task_rng, uniform};

const DEFAULT_MARGIN: f64 = 1.25;
const MAX_RADIUS: f64 = 1e6;
const CHUNK: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    V,
    Vplus,
    Vminus,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::V => "V",
            Region::Vplus => "V+",
            Region::Vminus => "V-",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiltrationSpec {
    pub radius: f64,
    /// Coordinates compared for `V-`.
    pub minus_coords: Vec<usize>,
    /// Coordinates compared for `V+`.
    pub plus_coords: Vec<usize>,
    pub margin: f64,
}

fn group_max(p: &CPoint, coords: &[usize]) -> f64 {
    coords.iter().map(|&i| p[i].norm()).fold(0.0, f64::max)
}

fn rest_max(p: &CPoint, coords: &[usize]) -> f64 {
    (0..p.dim())
        .filter(|i| !coords.contains(i))
        .map(|i| p[i].norm())
        .fold(0.0, f64::max)
}

impl FiltrationSpec {
    pub fn region(&self, p: &CPoint) -> Region {
        let m = group_max(p, &self.minus_coords);
        if m > self.radius && m >= rest_max(p, &self.minus_coords) {
            return Region::Vminus;
        }
        let m = group_max(p, &self.plus_coords);
        if m > self.radius && m > rest_max(p, &self.plus_coords) {
            return Region::Vplus;
        }
        Region::V
    }

    /// Whether the Euclidean ball of radius `rho` about `p` lies in `region`
    /// (`V-` or `V+`); always `false` for `V`.
    pub fn ball_in(&self, region: Region, p: &CPoint, rho: f64) -> bool {
        let (coords, strict) = match region {
            Region::Vminus => (&self.minus_coords, false),
            Region::Vplus => (&self.plus_coords, true),
            Region::V => return false,
        };
        let lo = group_max(p, coords) - rho;
        let hi = rest_max(p, coords) + rho;
        lo > self.radius && if strict { lo > hi } else { lo >= hi }
    }

    pub fn with_radius(&self, radius: f64) -> FiltrationSpec {
        FiltrationSpec { radius, ..self.clone() }
    }
}

/// Region rule for `m` at radius `r`.
pub fn default_regions(m: &MapSpec, r: f64) -> Result<FiltrationSpec> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("filtration radius must be positive, got {r}")));
    }
    let (ip, im) = m.indeterminacy_sets();
    let n = m.dim();
    let all: Vec<usize> = (0..n).collect();
    let nonempty = |v: Option<Vec<usize>>| v.filter(|v| !v.is_empty()).unwrap_or_else(|| all.clone());
    Ok(FiltrationSpec {
        radius: r,
        minus_coords: nonempty(im.free()),
        plus_coords: nonempty(ip.free()),
        margin: DEFAULT_MARGIN,
    })
}

/// Sample counts for [`choose_radius`] and [`verify_filtration`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyBudget {
    pub samples: usize,
    pub iters: usize,
    pub seed: u64,
}

impl Default for VerifyBudget {
    fn default() -> Self {
        VerifyBudget { samples: 20_000, iters: 20, seed: 0 }
    }
}

pub const PROPERTIES: [&str; 6] = [
    "minus_forward",
    "minus_or_v_forward",
    "plus_backward",
    "plus_or_v_backward",
    "cor1_plus",
    "cor1_minus",
];

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyReport {
    pub property: &'static str,
    /// Number of (point, step) pairs where the hypothesis held.
    pub samples: u64,
    pub violations: u64,
    /// Sample index and the orbit point at which the first violation was seen.
    pub witness: Option<(usize, CPoint)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiltrationReport {
    pub radius: f64,
    pub properties: Vec<PropertyReport>,
}

impl FiltrationReport {
    pub fn total_violations(&self) -> u64 {
        self.properties.iter().map(|p| p.violations).sum()
    }

    pub fn get(&self, property: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.property == property)
    }
}

#[derive(Clone, Default)]
struct Tally {
    checked: [u64; 6],
    violations: [u64; 6],
    witness: [Option<(usize, CPoint)>; 6],
}

impl Tally {
    fn record(&mut self, prop: usize, ok: bool, idx: usize, p: &CPoint) {
        self.checked[prop] += 1;
        if !ok {
            self.violations[prop] += 1;
            if self.witness[prop].is_none() {
                self.witness[prop] = Some((idx, *p));
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        for i in 0..6 {
            self.checked[i] += other.checked[i];
            self.violations[i] += other.violations[i];
            if self.witness[i].is_none() {
                self.witness[i] = other.witness[i];
            }
        }
    }
}

/// The `i`-th verification sample: even indices uniform in the polydisk of
/// radius `2R`, odd indices with log-uniform moduli in `[R/2, 1000 R]`;
/// indices 1 and 2 mod 4 are real points.
pub fn filtration_sample(n: usize, r: f64, seed: u64, i: usize) -> CPoint {
    let mut rng = task_rng(seed, i as u64);
    let mut p = CPoint::zeros(n);
    let real = i % 4 == 1 || i % 4 == 2;
    for k in 0..n {
        p[k] = if i % 2 == 0 {
            if real {
                uniform(&mut rng, -2.0 * r, 2.0 * r).into()
            } else {
                disk(&mut rng, 2.0 * r)
            }
        } else {
            let z = log_annulus(&mut rng, 0.5 * r, 1e3 * r);
            if real {
                (z.norm() * z.re.signum()).into()
            } else {
                z
            }
        };
    }
    p
}

fn check_sample(m: &MapSpec, fs: &FiltrationSpec, iters: usize, idx: usize, p0: &CPoint, t: &mut Tally) {
    // forward: (i), (ii), and invariance of K+ approximants in V
    let mut orbit = vec![*p0];
    let mut p = *p0;
    for _ in 0..iters {
        match m.eval_forward(&p) {
            Ok(q) => {
                orbit.push(q);
                p = q;
            }
            Err(_) => break,
        }
    }
    for w in orbit.windows(2) {
        let (a, b) = (fs.region(&w[0]), fs.region(&w[1]));
        if a == Region::Vminus {
            t.record(0, b == Region::Vminus, idx, &w[0]);
        }
        if a != Region::Vplus {
            t.record(1, b != Region::Vplus, idx, &w[0]);
        }
    }
    let stays = orbit.len() == iters + 1 && orbit.iter().all(|q| fs.region(q) != Region::Vminus);
    if stays && fs.region(p0) == Region::V {
        t.record(4, fs.region(&orbit[1]) == Region::V, idx, p0);
    }

    let mut orbit = vec![*p0];
    let mut p = *p0;
    for _ in 0..iters {
        match m.eval_inverse(&p) {
            Ok(q) => {
                orbit.push(q);
                p = q;
            }
            Err(_) => break,
        }
    }
    for w in orbit.windows(2) {
        let (a, b) = (fs.region(&w[0]), fs.region(&w[1]));
        if a == Region::Vplus {
            t.record(2, b == Region::Vplus, idx, &w[0]);
        }
        if a != Region::Vminus {
            t.record(3, b != Region::Vminus, idx, &w[0]);
        }
    }
    let stays = orbit.len() == iters + 1 && orbit.iter().all(|q| fs.region(q) != Region::Vplus);
    if stays && fs.region(p0) == Region::V {
        t.record(5, fs.region(&orbit[1]) == Region::V, idx, p0);
    }
}

/// Checks the filtration properties along `iters`-step forward and backward
/// orbits of `samples` seeded points.
pub fn verify_filtration(m: &MapSpec, fs: &FiltrationSpec, samples: usize, iters: usize, seed: u64) -> FiltrationReport {
    let n = m.dim();
    let chunks = samples.div_ceil(CHUNK);
    let parts = par_range(chunks, |c| {
        let mut t = Tally::default();
        for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
            let p = filtration_sample(n, fs.radius, seed, i);
            check_sample(m, fs, iters, i, &p, &mut t);
        }
        t
    });
    let mut total = Tally::default();
    for t in parts {
        total.merge(t);
    }
    FiltrationReport {
        radius: fs.radius,
        properties: (0..6)
            .map(|i| PropertyReport {
                property: PROPERTIES[i],
                samples: total.checked[i],
                violations: total.violations[i],
                witness: total.witness[i],
            })
            .collect(),
    }
}

/// Smallest radius passing [`verify_filtration`] on `budget`, found by
/// doubling from 1 and then bisecting, multiplied by the margin factor.
pub fn choose_radius(m: &MapSpec, budget: VerifyBudget) -> Result<FiltrationSpec> {
    let base = default_regions(m, 1.0)?;
    let passes = |r: f64| {
        verify_filtration(m, &base.with_radius(r), budget.samples, budget.iters, budget.seed).total_violations() == 0
    };
    let mut hi = 1.0;
    while !passes(hi) {
        hi *= 2.0;
        if hi > MAX_RADIUS {
            return Err(Error::RadiusSearch(format!("no admissible radius below {MAX_RADIUS:e}")));
        }
    }
    let mut lo = if hi > 1.0 { hi / 2.0 } else { 0.0 };
    while hi - lo > 1e-3 * hi {
        let mid = 0.5 * (lo + hi);
        if passes(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut r = hi * base.margin;
    // the margin is meant to absorb sampling noise; widen if it did not
    while !passes(r) {
        r *= base.margin;
        if r > MAX_RADIUS {
            return Err(Error::RadiusSearch(format!("no admissible radius below {MAX_RADIUS:e}")));
        }
    }
    Ok(base.with_radius(r))
}
