//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines appear in order as each
//! criterion finishes. Exits nonzero if any criterion fails.

mod common;

use std::f64::consts::LN_2;
use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::RngExt;

use automorph::dimension::{
    bound_report, box_dimension_indicator, growth_rate_cycles, saddle_points, BoxCountResult, Cube, IndicatorOptions,
    IndicatorTarget, Measurements, ThermoInputs,
};
use automorph::filtration::{choose_radius, default_regions, verify_filtration, VerifyBudget, PROPERTIES};
use automorph::orbit::{basin_map, census_range, find_attracting_cycles, Census, GridWindow, NewtonOptions, PeriodicOrbit, Verdict};
use automorph::potential::{green_plus, DEFAULT_BIG_RADIUS};
use automorph::rng::task_rng;
use automorph::thermo::{
    b_value, bowen_ruelle_root, entropy_estimate, hyperbolicity_heuristic, BowenRuelleRoot,
    FixedPointSums, HyperbolicityOptions, DEFAULT_BRACKET,
};
use automorph::{CPoint, Direction, MapSpec, Weight};

use common::{fixture, fixtures};

// 1: inverse round trip
const ROUND_TRIP_POINTS: usize = 10_000;
const ROUND_TRIP_RADIUS: f64 = 5.0;
const ROUND_TRIP_TOL: f64 = 1e-9;
const ROUND_TRIP_BUDGET_S: f64 = 5.0;
// 2: Jacobian
const DET_POINTS: usize = 1_000;
const DET_STD_TOL: f64 = 1e-10;
const DELTA_TOL: f64 = 1e-12;
// 4: filtration
const FILTRATION_SAMPLES: usize = 100_000;
const FILTRATION_ITERS: usize = 20;
const FILTRATION_SEED: u64 = 1;
const NEGATIVE_RADIUS: f64 = 0.1;
const FILTRATION_BUDGET_S: f64 = 30.0;
// 5: Green function
const GREEN_SAMPLES: usize = 1_000;
const GREEN_TOL: f64 = 1e-6;
/// An orbit started on a saddle drifts off it by rounding. With per-step
/// expansion up to about 5 it escapes after some 23 steps, so the computed
/// `G+` there is near `2^-23 log 1e10`, about 3e-6, where the exact value is 0.
const GREEN_SADDLE_TOL: f64 = 1e-5;
const GREEN_BUDGET: usize = 200;
// 6, 7: horseshoe census
const HORSESHOE_R: f64 = 4.6;
const CENSUS_KMAX: usize = 6;
const FIXED_POINT_TOL: f64 = 1e-9;
const CENSUS_BUDGET_S: f64 = 120.0;
const ENTROPY_TOL: f64 = f64::EPSILON;
// 8: synthetic pressure
const PRESSURE_TOL: f64 = 1e-12;
const ROOT_TOL: f64 = 1e-8;
// 9: Bowen-Ruelle convergence, a = 0.1
const DISSIPATIVE_R: f64 = 3.9;
const BR_KMAX: usize = 8;
const BR_DELTA_TOL: f64 = 0.02;
const BR_DIM_TOL: f64 = 0.15;
const BR_LEVELS: std::ops::RangeInclusive<u32> = 0..=9;
const BR_FIT: (u32, u32) = (3, 9);
const BR_BUDGET_S: f64 = 300.0;
// 10: bounds, a = 0.3
const ATTRACTING_R: f64 = 1.8;
const BOUND_TOL: f64 = 0.1;
const BOUND_KMAX: usize = 6;
const GROWTH_K: usize = 20;
const KMINUS_LEVELS: std::ops::RangeInclusive<u32> = 0..=7;
const KMINUS_FIT: (u32, u32) = (2, 7);
const J_LEVELS: std::ops::RangeInclusive<u32> = 0..=6;
const J_FIT: (u32, u32) = (2, 6);
const NON_HYPERBOLIC_C: f64 = -1.95;
// 11: trichotomy
const GRID: usize = 256;
const GRID_BUDGET: usize = 200;
const GRID_ATTRACTOR_KMAX: usize = 4;
const GRID_BUDGET_S: f64 = 60.0;
// 12: determinism
const WORKER_COUNTS: [usize; 2] = [1, 8];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn seconds(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

fn ball_point(n: usize, r: f64, seed: u64, i: usize) -> CPoint {
    let mut rng = task_rng(seed, i as u64);
    loop {
        let v: Vec<f64> = (0..2 * n).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect();
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return CPoint::from_reals(&v.iter().map(|x| x * r).collect::<Vec<_>>());
        }
    }
}

fn c1_round_trip() -> Outcome {
    let t = Instant::now();
    let mut worst = (0.0, "");
    for (name, m) in fixtures() {
        for i in 0..ROUND_TRIP_POINTS {
            let p = ball_point(m.dim(), ROUND_TRIP_RADIUS, 1, i);
            let a = m.eval_inverse(&m.eval_forward(&p).unwrap()).unwrap().dist(&p);
            let b = m.eval_forward(&m.eval_inverse(&p).unwrap()).unwrap().dist(&p);
            if a.max(b) > worst.0 {
                worst = (a.max(b), name);
            }
        }
    }
    let dt = seconds(t);
    outcome(
        worst.0 < ROUND_TRIP_TOL && dt < ROUND_TRIP_BUDGET_S,
        format!("max err {:.2e} ({}) < {ROUND_TRIP_TOL:e}, {dt:.2} s < {ROUND_TRIP_BUDGET_S} s", worst.0, worst.1),
    )
}

fn c2_jacobian() -> Outcome {
    let mut worst_std = (0.0, "");
    for (name, m) in fixtures() {
        let dets: Vec<Complex64> = (0..DET_POINTS).map(|i| m.jacobian(&ball_point(m.dim(), 2.0, 2, i)).det()).collect();
        let mean = dets.iter().sum::<Complex64>() / dets.len() as f64;
        let var = dets.iter().map(|d| (d - mean).norm_sqr()).sum::<f64>() / (dets.len() - 1) as f64;
        if var.sqrt() >= worst_std.0 {
            worst_std = (var.sqrt(), name);
        }
    }
    // analytic determinant of the composition: a_1 * a_2
    let two = fixture("two-stage");
    let delta_err = (two.det_df().norm() - 0.5 * 0.4).abs();
    outcome(
        worst_std.0 < DET_STD_TOL && delta_err < DELTA_TOL,
        format!("std {:.2e} ({}) < {DET_STD_TOL:e}; |delta| - 0.2 = {delta_err:.1e}", worst_std.0, worst_std.1),
    )
}

fn c3_degrees() -> Outcome {
    let m = fixture("fw-h1");
    let (ip, im) = m.indeterminacy_sets();
    let got = (m.degree(), m.inverse_degree(), m.regularity_index(), im.dim(), ip.dim(), m.indeterminacy_disjoint());
    outcome(
        got == (2, 4, Some(2), Some(1), Some(0), Some(true)),
        format!("d={} d-={} l={:?} dim I-={:?} dim I+={:?} disjoint={:?}", got.0, got.1, got.2, got.3, got.4, got.5),
    )
}

fn c4_filtration() -> Outcome {
    let t = Instant::now();
    let m = fixture("horseshoe");
    let fs = match choose_radius(&m, VerifyBudget::default()) {
        Ok(fs) => fs,
        Err(e) => return outcome(false, e.to_string()),
    };
    let report = verify_filtration(&m, &fs, FILTRATION_SAMPLES, FILTRATION_ITERS, FILTRATION_SEED);
    let negative = verify_filtration(&m, &fs.with_radius(NEGATIVE_RADIUS), 10_000, FILTRATION_ITERS, FILTRATION_SEED);
    let witnessed = negative.properties.iter().any(|p| p.violations > 0 && p.witness.is_some());
    let dt = seconds(t);
    let mut detail = format!("R={:.3}, {} samples:", fs.radius, FILTRATION_SAMPLES);
    for name in PROPERTIES {
        let p = report.get(name).unwrap();
        write!(detail, " {name} {}/{}", p.violations, p.samples).unwrap();
    }
    write!(detail, "; R={NEGATIVE_RADIUS} violations {}; {dt:.1} s < {FILTRATION_BUDGET_S} s", negative.total_violations()).unwrap();
    outcome(report.total_violations() == 0 && witnessed && dt < FILTRATION_BUDGET_S, detail)
}

fn c5_green(census: &[Census]) -> Outcome {
    let m = fixture("horseshoe");
    let mut sup: f64 = 0.0;
    let mut found = 0;
    let mut i = 0;
    while found < GREEN_SAMPLES {
        let mut rng = task_rng(5, i as u64);
        i += 1;
        let p = CPoint::new(&[
            automorph::rng::disk(&mut rng, 2.0 * HORSESHOE_R),
            automorph::rng::disk(&mut rng, 2.0 * HORSESHOE_R),
        ]);
        let g0 = green_plus(&m, &p, GREEN_BUDGET, DEFAULT_BIG_RADIUS);
        let Ok(q) = m.eval_forward(&p) else { continue };
        let g1 = green_plus(&m, &q, GREEN_BUDGET, DEFAULT_BIG_RADIUS);
        if g0.escaped && g1.escaped {
            sup = sup.max((g1.value - 2.0 * g0.value).abs());
            found += 1;
        }
    }
    let saddle_max = census
        .iter()
        .flat_map(|c| c.orbits.iter().filter(|o| o.is_saddle()).flat_map(|o| o.points.iter()))
        .map(|p| green_plus(&m, p, GREEN_BUDGET, DEFAULT_BIG_RADIUS).value)
        .fold(0.0, f64::max);
    outcome(
        sup < GREEN_TOL && saddle_max <= GREEN_SADDLE_TOL,
        format!("sup |G+(f p) - 2 G+(p)| = {sup:.2e} < {GREEN_TOL:e} over {found}; max G+ on saddles {saddle_max:.1e} <= {GREEN_SADDLE_TOL:e}"),
    )
}

fn horseshoe_census() -> Vec<Census> {
    let m = fixture("horseshoe");
    census_range(&m, &default_regions(&m, HORSESHOE_R).unwrap(), CENSUS_KMAX, &NewtonOptions::default())
}

fn c6_census(census: &[Census], dt: f64) -> Outcome {
    let counts: Vec<usize> = census.iter().map(Census::fixed_point_count).collect();
    let expected: Vec<usize> = (1..=CENSUS_KMAX).map(|k| 1 << k).collect();
    let saddles = census.iter().all(Census::all_saddles);
    // x = y with y^2 - 2y - 6 = 0
    let oracle = [1.0 - 7f64.sqrt(), 1.0 + 7f64.sqrt()];
    let root_err = census[0]
        .points()
        .map(|p| oracle.iter().map(|&y| p.dist(&CPoint::from_real(&[y, y]))).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    outcome(
        counts == expected && saddles && root_err < FIXED_POINT_TOL && dt < CENSUS_BUDGET_S,
        format!("#Fix = {counts:?}, all saddle {saddles}; k=1 err {root_err:.1e} < {FIXED_POINT_TOL:e}; {dt:.1} s < {CENSUS_BUDGET_S} s"),
    )
}

fn c7_entropy(census: &[Census]) -> Outcome {
    let e = entropy_estimate(census, 1, 2);
    let (k, count, h) = *e.per_k.last().unwrap();
    outcome(
        k == 6 && count == 64 && (h - LN_2).abs() <= ENTROPY_TOL,
        format!("h_{k} = {h} from {count} saddle fixed points; log 2 = {LN_2}; bitwise equal {}", h.to_bits() == LN_2.to_bits()),
    )
}

fn c8_pressure() -> Outcome {
    let mut worst: f64 = 0.0;
    // two-point and three-point systems, P(t) = (1/k) log sum exp(t S)
    for (k, sums) in [(1usize, vec![-1.3, -0.4]), (3, vec![-2.0, -5.5, -0.7])] {
        let sys = FixedPointSums::synthetic(k, sums.clone()).unwrap();
        for i in 0..=40 {
            let t = 0.1 * i as f64;
            let closed = sums.iter().map(|s| (t * s).exp()).sum::<f64>().ln() / k as f64;
            worst = worst.max((sys.pressure(t) - closed).abs());
        }
    }
    // 2^k points, each with multiplier lambda^k: P(t) = log 2 - t log lambda
    let lambda: f64 = 3.0;
    let k = 10;
    let uniform = FixedPointSums::synthetic(k, vec![-(k as f64) * lambda.ln(); 1 << k]).unwrap();
    let root = uniform.root(DEFAULT_BRACKET.0, DEFAULT_BRACKET.1).map(|r| r.0);
    let expect = LN_2 / lambda.ln();
    let root_err = root.as_ref().map_or(f64::INFINITY, |t| (t - expect).abs());
    outcome(
        worst < PRESSURE_TOL && root_err < ROOT_TOL,
        format!("closed-form err {worst:.1e} < {PRESSURE_TOL:e}; root err {root_err:.1e} < {ROOT_TOL:e}"),
    )
}

/// Census, both roots and the `J` box count for the dissipative horseshoe.
struct BowenRuelle {
    census: Vec<Census>,
    tu: BowenRuelleRoot,
    ts: BowenRuelleRoot,
    boxdim: BoxCountResult,
}

fn bowen_ruelle_run() -> automorph::Result<BowenRuelle> {
    let m = fixture("horseshoe-dissipative");
    let fs = default_regions(&m, DISSIPATIVE_R)?;
    let census = census_range(&m, &fs, BR_KMAX, &NewtonOptions::default());
    let tu = bowen_ruelle_root(&census, Weight::Unstable, DEFAULT_BRACKET)?;
    let ts = bowen_ruelle_root(&census, Weight::Stable, DEFAULT_BRACKET)?;
    let levels: Vec<u32> = BR_LEVELS.collect();
    let cube = Cube::polydisk(2, fs.radius);
    let boxdim = box_dimension_indicator(&m, &fs, IndicatorTarget::J, &[], &cube, &levels, BR_FIT, &IndicatorOptions::default())?;
    Ok(BowenRuelle { census, tu, ts, boxdim })
}

fn c9_bowen_ruelle(run: &automorph::Result<BowenRuelle>, dt: f64) -> Outcome {
    let r = match run {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let delta = r.tu.last_delta().unwrap_or(f64::INFINITY);
    let sum = r.tu.t + r.ts.t;
    let gap = (sum - r.boxdim.slope).abs();
    outcome(
        delta < BR_DELTA_TOL && r.tu.t > 0.0 && r.tu.t < 2.0 && gap <= BR_DIM_TOL && dt < BR_BUDGET_S,
        format!(
            "t^u(8) = {:.4}, |t^u(8) - t^u(7)| = {delta:.1e} < {BR_DELTA_TOL}; t^u + t^s = {sum:.3} vs boxdim J {:.3}, gap {gap:.3} <= {BR_DIM_TOL}; {dt:.0} s < {BR_BUDGET_S} s",
            r.tu.t, r.boxdim.slope
        ),
    )
}

fn saddle_cycles(census: &[Census]) -> Vec<PeriodicOrbit> {
    census.iter().flat_map(|c| c.orbits.iter().filter(|o| o.is_saddle() && o.period == c.k).cloned()).collect()
}

fn c10_bounds() -> Outcome {
    let m = fixture("attracting");
    let fs = default_regions(&m, ATTRACTING_R).unwrap();
    let census = census_range(&m, &fs, BOUND_KMAX, &NewtonOptions::default());
    let cycles = saddle_cycles(&census);
    let sp = growth_rate_cycles(&m, Direction::Forward, &cycles, GROWTH_K, "saddles").s;
    let sm = growth_rate_cycles(&m, Direction::Backward, &cycles, GROWTH_K, "saddles").s;
    let cube = Cube::polydisk(2, fs.radius);
    let ind = IndicatorOptions::default();
    let attractors: Vec<PeriodicOrbit> = census.iter().flat_map(|c| c.attracting().filter(|o| o.period == c.k).cloned()).collect();
    let levels = |r: std::ops::RangeInclusive<u32>| r.collect::<Vec<u32>>();
    let kminus = box_dimension_indicator(&m, &fs, IndicatorTarget::KMinus, &[], &cube, &levels(KMINUS_LEVELS), KMINUS_FIT, &ind);
    let j = box_dimension_indicator(&m, &fs, IndicatorTarget::J, &attractors, &cube, &levels(J_LEVELS), J_FIT, &ind);
    let (kminus, j) = match (kminus, j) {
        (Ok(a), Ok(b)) => (a.slope, b.slope),
        (a, b) => return outcome(false, format!("box counting failed: {:?} {:?}", a.err(), b.err())),
    };

    let upper = 4.0 + 2.0 * 0.3f64.ln() / sm;
    let lower = LN_2 / sp.max(sm);
    let hyperbolic = hyperbolicity_heuristic(&m.forward(), &m.backward(), &saddle_points(&census), &HyperbolicityOptions::default());
    let last = census.last().unwrap();
    let thermo = ThermoInputs {
        b_plus: b_value(last, Weight::Unstable).unwrap_or(f64::NAN),
        b_minus: b_value(last, Weight::Stable).unwrap_or(f64::NAN),
        hyperbolic: hyperbolic.pass,
    };
    let meas = Measurements { boxdim_j: Some(j), boxdim_kminus: Some(kminus), s_plus: sp, s_minus: sm, ..Measurements::default() };
    let report = bound_report(&m, &meas, Some(&thermo));
    let jpm = report.value("upper_Jpm");
    let jpm_ok = match jpm {
        Some(v) => hyperbolic.pass && v < 4.0,
        None => !hyperbolic.pass || !(thermo.b_plus < 0.0 && thermo.b_minus < 0.0),
    };

    // negative control: past the horseshoe-forming region the heuristic must fail and the bound vanish
    let nh = MapSpec::henon_quadratic(NON_HYPERBOLIC_C, 0.3).unwrap();
    let nh_fs = choose_radius(&nh, VerifyBudget { samples: 2000, ..VerifyBudget::default() }).unwrap();
    let nh_census = census_range(&nh, &nh_fs, BOUND_KMAX, &NewtonOptions::default());
    let nh_diag = hyperbolicity_heuristic(&nh.forward(), &nh.backward(), &saddle_points(&nh_census), &HyperbolicityOptions::default());
    let nh_thermo = ThermoInputs {
        b_plus: b_value(nh_census.last().unwrap(), Weight::Unstable).unwrap_or(f64::NAN),
        b_minus: b_value(nh_census.last().unwrap(), Weight::Stable).unwrap_or(f64::NAN),
        hyperbolic: nh_diag.pass,
    };
    let nh_report = bound_report(&nh, &meas, Some(&nh_thermo));
    let control_ok = !nh_diag.pass && nh_report.value("upper_Jpm").is_none();

    outcome(
        kminus <= upper + BOUND_TOL && j >= lower - BOUND_TOL && jpm_ok && control_ok,
        format!(
            "s+ {sp:.4} s- {sm:.4}; boxdim K- {kminus:.3} <= {upper:.3} + {BOUND_TOL}; boxdim J {j:.3} >= {lower:.3} - {BOUND_TOL}; heuristic {} upper_Jpm {}; c={NON_HYPERBOLIC_C} heuristic {} upper_Jpm {}",
            hyperbolic.pass,
            jpm.map_or_else(|| "omitted".to_string(), |v| format!("{v:.3}")),
            nh_diag.pass,
            nh_report.value("upper_Jpm").map_or_else(|| "omitted".to_string(), |v| format!("{v:.3}")),
        ),
    )
}

fn c11_trichotomy() -> Outcome {
    let t = Instant::now();
    let m = fixture("attracting");
    let fs = default_regions(&m, ATTRACTING_R).unwrap();
    let att = find_attracting_cycles(&m, &fs, GRID_ATTRACTOR_KMAX, &NewtonOptions::default());
    let window = GridWindow::real_plane(2, (-2.0, 2.0), (-2.0, 2.0), GRID, GRID);
    let map = basin_map(&m, &fs, &att, &window, GRID_BUDGET, Direction::Forward);
    let esc = map.count(|v| matches!(v, Verdict::EscapesForward(_)));
    let cyc = map.count(|v| matches!(v, Verdict::ConvergesToCycle { .. }));
    let bnd = map.count(|v| matches!(v, Verdict::BoundedNonAttracted));
    let dt = seconds(t);
    outcome(
        esc + cyc + bnd == GRID * GRID && map.cells.len() == GRID * GRID && dt < GRID_BUDGET_S,
        format!("{} attracting cycle(s); escapes {esc} + converges {cyc} + bounded {bnd} = {} of {}; {dt:.1} s < {GRID_BUDGET_S} s", att.len(), esc + cyc + bnd, GRID * GRID),
    )
}

/// The criterion-6 and criterion-9 artifacts as CSV text.
fn artifacts(census6: &[Census], br: &automorph::Result<BowenRuelle>) -> String {
    let mut s = String::new();
    let mut census_rows = |cs: &[Census]| {
        for c in cs {
            for (i, o) in c.orbits.iter().enumerate() {
                for p in &o.points {
                    let coords: Vec<String> = p.to_reals().iter().map(f64::to_string).collect();
                    let mults: Vec<String> = o.multipliers.iter().map(|l| l.norm().to_string()).collect();
                    writeln!(s, "{},{i},{},{},{},{}", c.k, o.period, coords.join(","), mults.join(","), o.stability.label()).unwrap();
                }
            }
        }
    };
    census_rows(census6);
    if let Ok(r) = br {
        census_rows(&r.census);
        for root in [&r.tu, &r.ts] {
            for (k, t) in &root.table {
                writeln!(s, "{},{k},{t}", root.weight.name()).unwrap();
            }
        }
        for (l, c) in r.boxdim.levels.iter().zip(&r.boxdim.counts) {
            writeln!(s, "box,{l},{c}").unwrap();
        }
        writeln!(s, "slope,{}", r.boxdim.slope).unwrap();
    }
    s
}

fn c12_determinism(reference: &str, workers: usize) -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().unwrap();
    let other = pool.install(|| artifacts(&horseshoe_census(), &bowen_ruelle_run()));
    outcome(
        other == reference,
        format!("{} bytes of census, root and box-count output identical across workers {WORKER_COUNTS:?}", reference.len()),
    )
}

fn report(id: u32, name: &str, o: &Outcome, failures: &mut u32) {
    let verdict = if o.pass { "PASS" } else { "FAIL" };
    if !o.pass {
        *failures += 1;
    }
    println!("[{verdict}] C{id:02} {name}: {}", o.detail);
    std::io::stdout().flush().ok();
}

fn main() -> ExitCode {
    let mut failures = 0;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(WORKER_COUNTS[1]).build().unwrap();
    pool.install(|| {
        report(1, "inverse round trip", &c1_round_trip(), &mut failures);
        report(2, "Jacobian constancy", &c2_jacobian(), &mut failures);
        report(3, "degree bookkeeping", &c3_degrees(), &mut failures);
        report(4, "filtration", &c4_filtration(), &mut failures);

        let t = Instant::now();
        let census = horseshoe_census();
        let census_dt = seconds(t);
        report(5, "Green functional equation", &c5_green(&census), &mut failures);
        report(6, "periodic census", &c6_census(&census, census_dt), &mut failures);
        report(7, "entropy", &c7_entropy(&census), &mut failures);
        report(8, "pressure oracle", &c8_pressure(), &mut failures);

        let t = Instant::now();
        let br = bowen_ruelle_run();
        report(9, "Bowen-Ruelle convergence", &c9_bowen_ruelle(&br, seconds(t)), &mut failures);
        report(10, "bound consistency", &c10_bounds(), &mut failures);
        report(11, "trichotomy coverage", &c11_trichotomy(), &mut failures);

        let reference = artifacts(&census, &br);
        report(12, "determinism", &c12_determinism(&reference, WORKER_COUNTS[0]), &mut failures);
    });
    println!("acceptance: {} of 12 criteria passed", 12 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
