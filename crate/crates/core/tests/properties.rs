mod common;

use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;

use automorph::dimension::{box_dimension_points, growth_rate_cycles, Cube};
use automorph::filtration::{default_regions, Region};
use automorph::map::regularity_index;
use automorph::orbit::{census_range, classify_point, find_attracting_cycles, Census, NewtonOptions, Verdict};
use automorph::potential::{green_plus, DEFAULT_BIG_RADIUS};
use automorph::rng::task_rng;
use automorph::thermo::{entropy_estimate, pressure, FixedPointSums};
use automorph::{CMat, CPoint, Direction, HenonStage, MapSpec, Poly1, ScaledMat, Weight};

use common::fixtures;

fn small_newton() -> NewtonOptions {
    NewtonOptions { grid: 60, random_seeds: 2000, ..NewtonOptions::default() }
}

fn horseshoe_census() -> &'static [Census] {
    static C: OnceLock<Vec<Census>> = OnceLock::new();
    C.get_or_init(|| {
        let m = MapSpec::henon_quadratic(-6.0, 1.0).unwrap();
        let fs = default_regions(&m, 4.6).unwrap();
        census_range(&m, &fs, 4, &small_newton())
    })
}

/// A point of the ball of radius `r` in `C^n` from `2n` reals in `[-1, 1]`.
fn in_ball(reals: &[f64], n: usize, r: f64) -> CPoint {
    let v = &reals[..2 * n];
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    CPoint::from_reals(&v.iter().map(|x| x / norm * r).collect::<Vec<_>>())
}

fn reals() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 6)
}

fn mat_dist(a: &CMat, b: &CMat) -> f64 {
    let n = a.dim();
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (a.get(i, j) - b.get(i, j)).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_round_trip(v in reals()) {
        for (name, m) in fixtures() {
            let p = in_ball(&v, m.dim(), 5.0);
            let back = m.eval_inverse(&m.eval_forward(&p).unwrap()).unwrap();
            prop_assert!(back.dist(&p) < 1e-9, "{name}: {}", back.dist(&p));
            let fwd = m.eval_forward(&m.eval_inverse(&p).unwrap()).unwrap();
            prop_assert!(fwd.dist(&p) < 1e-9, "{name}: {}", fwd.dist(&p));
        }
    }

    #[test]
    fn jacobian_determinant_is_constant(v in reals()) {
        for (name, m) in fixtures() {
            let p = in_ball(&v, m.dim(), 5.0);
            let det = m.jacobian(&p).det();
            prop_assert!((det - m.det_df()).norm() < 1e-9 * (1.0 + det.norm()), "{name}: {det}");
            let inv = m.inverse_jacobian(&p).det();
            prop_assert!((inv * m.det_df() - 1.0).norm() < 1e-9, "{name}");
        }
    }

    #[test]
    fn degree_relation(d in 2u32..9, dinv in 2u32..9, n in 2usize..7) {
        if let Some(l) = regularity_index(d, dinv, n) {
            prop_assert_eq!((d as u128).pow(l), (dinv as u128).pow(n as u32 - l));
        }
    }

    #[test]
    fn chain_rule(c1 in -6.0f64..6.0, a1 in 0.1f64..2.0, c2 in -6.0f64..6.0, a2 in 0.1f64..2.0, v in reals()) {
        let stage = |c: f64, a: f64| HenonStage::new(Poly1::real(&[c, 0.0, 1.0]).unwrap(), Complex64::new(a, 0.0)).unwrap();
        let m1 = MapSpec::henon_composition(vec![stage(c1, a1)]).unwrap();
        let m2 = MapSpec::henon_composition(vec![stage(c2, a2)]).unwrap();
        let both = MapSpec::henon_composition(vec![stage(c1, a1), stage(c2, a2)]).unwrap();
        let p = in_ball(&v, 2, 3.0);
        let q = m1.eval_forward(&p).unwrap();
        prop_assert!(both.eval_forward(&p).unwrap().dist(&m2.eval_forward(&q).unwrap()) < 1e-9);
        let product = m2.jacobian(&q).mul(&m1.jacobian(&p));
        let direct = both.jacobian(&p);
        prop_assert!(mat_dist(&product, &direct) < 1e-9 * (1.0 + direct.max_abs()));
    }

    #[test]
    fn partition_is_total_and_ties_go_to_v_minus(v in reals(), r in 0.5f64..10.0, s in 1.0f64..100.0, theta in 0.0f64..6.28) {
        for (name, m) in fixtures() {
            let fs = default_regions(&m, r).unwrap();
            let p = in_ball(&v, m.dim(), 3.0 * r);
            let region = fs.region(&p);
            prop_assert_eq!(region, fs.region(&p), "{}", name);
        }
        let m = MapSpec::henon_quadratic(-6.0, 1.0).unwrap();
        let fs = default_regions(&m, r).unwrap();
        let t = r * (1.0 + s);
        let tie = CPoint::new(&[Complex64::from_polar(t, theta), Complex64::from_polar(t, -theta)]);
        prop_assert_eq!(fs.region(&tie), Region::Vminus);
    }

    #[test]
    fn v_minus_is_forward_invariant_and_escapes(v in reals(), scale in 1.0f64..50.0) {
        let m = MapSpec::henon_quadratic(-6.0, 1.0).unwrap();
        let fs = default_regions(&m, 4.6).unwrap();
        // |y| dominant and beyond R
        let mut p = in_ball(&v, 2, 1.0);
        p[1] = p[1] / p[1].norm().max(1e-3) * 4.6 * (1.0 + scale);
        p[0] = p[0] * 4.6;
        prop_assume!(fs.region(&p) == Region::Vminus);
        let mut q = p;
        let mut steps = 0;
        // Err(Escaped) is the norm passing ESCAPE_LIMIT = 1e100
        while let Ok(next) = m.eval_forward(&q) {
            q = next;
            prop_assert_eq!(fs.region(&q), Region::Vminus);
            steps += 1;
            prop_assert!(steps <= 12, "slow escape");
        }
    }

    #[test]
    fn green_is_nonnegative_and_truncation_is_honest(v in reals()) {
        let m = MapSpec::henon_quadratic(-6.0, 1.0).unwrap();
        let p = in_ball(&v, 2, 6.0);
        let g = green_plus(&m, &p, 200, DEFAULT_BIG_RADIUS);
        prop_assert!(g.value >= 0.0);
        if g.escaped {
            let fine = green_plus(&m, &p, 200, 1e20);
            prop_assert!((fine.value - g.value).abs() <= g.truncation_error + 1e-12);
        }
    }

    #[test]
    fn larger_budget_keeps_settled_verdicts(v in reals()) {
        static ATT: OnceLock<(MapSpec, Vec<automorph::orbit::PeriodicOrbit>)> = OnceLock::new();
        let (m, att) = ATT.get_or_init(|| {
            let m = MapSpec::henon_quadratic(-0.1, 0.3).unwrap();
            let fs = default_regions(&m, 1.8).unwrap();
            let att = find_attracting_cycles(&m, &fs, 2, &small_newton());
            (m, att)
        });
        let fs = default_regions(m, 1.8).unwrap();
        let p = in_ball(&v, 2, 2.5);
        let short = classify_point(m, &fs, att, &p, 60, Direction::Forward);
        let long = classify_point(m, &fs, att, &p, 300, Direction::Forward);
        if matches!(short.verdict, Verdict::EscapesForward(_) | Verdict::ConvergesToCycle { .. }) {
            prop_assert_eq!(short.verdict, long.verdict);
        }
    }

    #[test]
    fn scaled_products_match_direct_ones(entries in prop::collection::vec(-2.0f64..2.0, 8 * 10), k in 1usize..=10) {
        let mut scaled = ScaledMat::identity(2);
        let mut direct = CMat::identity(2);
        for j in 0..k {
            let e = &entries[8 * j..8 * j + 8];
            let step = CMat::from_rows(&[
                &[Complex64::new(e[0], e[1]), Complex64::new(e[2], e[3])],
                &[Complex64::new(e[4], e[5]), Complex64::new(e[6], e[7])],
            ]);
            scaled.left_mul(&step);
            direct = step.mul(&direct);
        }
        prop_assert!(mat_dist(&scaled.to_mat(), &direct) <= 1e-9 * direct.max_abs().max(1e-300));
    }

    #[test]
    fn pressure_decreases_and_roots_agree(logs in prop::collection::vec(0.1f64..3.0, 1..40), k in 1usize..8, t1 in 0.0f64..4.0, dt in 1e-3f64..1.0) {
        let sums = FixedPointSums::synthetic(k, logs.iter().map(|l| -(k as f64) * l).collect()).unwrap();
        prop_assert!(sums.pressure(t1 + dt) < sums.pressure(t1));
        if let (Ok((a, _)), Ok((b, _))) = (sums.root(0.0, 50.0), sums.root(1e-3, 40.0)) {
            prop_assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn box_counts_are_monotone(v in prop::collection::vec(-1.0f64..1.0, 4 * 60)) {
        let pts: Vec<CPoint> = v.chunks(4).map(CPoint::from_reals).collect();
        let r = box_dimension_points(&pts, &Cube::polydisk(2, 1.5), &[0, 1, 2, 3, 4, 5], (1, 5), "cloud").unwrap();
        for w in r.counts.windows(2) {
            prop_assert!(w[0] <= w[1] && w[1] <= 16 * w[0]);
        }
        prop_assert!(*r.counts.last().unwrap() <= pts.len() as u64);
    }

    #[test]
    fn task_streams_are_reproducible(seed in any::<u64>(), task in any::<u64>()) {
        use rand::RngExt;
        let a: Vec<u64> = (0..4).map({ let mut r = task_rng(seed, task); move |_| r.random() }).collect();
        let b: Vec<u64> = (0..4).map({ let mut r = task_rng(seed, task); move |_| r.random() }).collect();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn census_multipliers_and_invariance() {
    let m = MapSpec::henon_quadratic(-6.0, 1.0).unwrap();
    for c in horseshoe_census() {
        for o in &c.orbits {
            let prod: Complex64 = o.multipliers.iter().product();
            let expect = m.det_df().norm().powi(o.period as i32);
            assert!((prod.norm() - expect).abs() < 1e-6 * expect, "k={} {prod}", c.k);
            for (j, p) in o.points.iter().enumerate() {
                let img = m.eval_forward(p).unwrap();
                assert!(img.dist(&o.points[(j + 1) % o.period]) < 1e-8);
            }
        }
    }
}

#[test]
fn pressure_at_zero_is_entropy_bit_for_bit() {
    let cs = horseshoe_census();
    let h = entropy_estimate(cs, 1, 2);
    for (c, row) in cs.iter().zip(&h.per_k) {
        assert_eq!(pressure(c, 0.0, Weight::Unstable).unwrap().to_bits(), row.2.to_bits());
    }
}

#[test]
fn growth_sequence_is_subadditive_on_cycles() {
    let m = MapSpec::henon_quadratic(-6.0, 1.0).unwrap();
    let cycles: Vec<_> = horseshoe_census().iter().flat_map(|c| c.orbits.iter().filter(|o| o.period == c.k).cloned()).collect();
    let g = growth_rate_cycles(&m, Direction::Forward, &cycles, 12, "saddles");
    let ks: Vec<f64> = g.per_k.iter().map(|&(k, s)| k as f64 * s).collect();
    for i in 0..ks.len() {
        for j in 0..ks.len() - i - 1 {
            // (i+1) + (j+1) steps sit at index i + j + 1
            assert!(ks[i + j + 1] <= ks[i] + ks[j] + 1e-9, "k={} j={}", i + 1, j + 1);
        }
    }
}

#[test]
fn stable_and_unstable_slices_are_dual() {
    let f = MapSpec::henon_quadratic(-6.0, 1.0).unwrap();
    // f^-1 conjugated by the coordinate swap is (x, y) -> (y, (p(y) - x) / a)
    let a = 1.0;
    let g = MapSpec::henon(Poly1::real(&[-6.0 / a, 0.0, 1.0 / a]).unwrap(), Complex64::new(1.0 / a, 0.0)).unwrap();
    let fs = default_regions(&f, 4.6).unwrap();
    let cf = census_range(&f, &fs, 5, &small_newton());
    let cg = census_range(&g, &default_regions(&g, 4.6).unwrap(), 5, &small_newton());
    for c in &cf {
        for o in &c.orbits {
            let u = o.unstable_product().norm();
            let s = o.stable_product().norm();
            assert!((u * s - 1.0).abs() < 1e-6);
        }
    }
    let ts = automorph::thermo::bowen_ruelle_root(&cf, Weight::Stable, (0.0, 2.0)).unwrap().t;
    let tu = automorph::thermo::bowen_ruelle_root(&cg, Weight::Unstable, (0.0, 2.0)).unwrap().t;
    assert!((ts - tu).abs() < 0.02, "{ts} {tu}");
}
