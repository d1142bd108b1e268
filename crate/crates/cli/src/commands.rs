use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;

use automorph::config::{Cx, MapConfig};
use automorph::dimension::{
    bound_report, box_dimension_indicator, box_dimension_points, dimension_sweep, growth_rate, growth_rate_cycles,
    linear_path, sample_julia, saddle_points, BoundaryOptions, BoxCountResult, Cube, IndicatorOptions,
    IndicatorTarget, JuliaTarget, Measurements, Strategy, SweepOptions, ThermoInputs,
};
use automorph::filtration::{choose_radius, default_regions, verify_filtration, FiltrationSpec, VerifyBudget};
use automorph::orbit::{
    basin_map, census_range, find_attracting_cycles, find_periodic_points, BasinMap, Census, GridWindow,
    NewtonOptions, PeriodicOrbit,
};
use automorph::potential::green_grid;
use automorph::thermo::{
    b_value, bowen_ruelle_root, entropy_estimate, hyperbolicity_heuristic, pressure_curve, t_grid,
    HyperbolicityOptions, DEFAULT_BRACKET,
};
use automorph::{Direction, MapSpec, Weight};

use crate::out::{coord_header, coords, opt, Artifacts, Table};
use crate::{
    BoxStrategy, BoxdimArgs, Cli, Command, DimsArgs, FiltrationArgs, GreenArgs, GridArgs, GrowthArgs, NewtonArgs,
    Param, PeriodicArgs, PressureArgs, RadiusArgs, SampleStrategy, Span, SweepArgs, Target, WeightArg,
};

const VERIFY_ITERS: usize = 20;

pub fn run(cli: &Cli) -> Result<()> {
    let path = cli.config.as_deref().context("--config is required")?;
    let config = MapConfig::load(path)?;
    let mut art = Artifacts::new(&cli.out)?;
    let seed = cli.seed;
    let name = match &cli.command {
        Command::Info => {
            info(&config.build()?, &mut art)?;
            "info"
        }
        Command::FiltrationVerify(a) => {
            filtration_verify(&config.build()?, a, seed, &mut art)?;
            "filtration-verify"
        }
        Command::ClassifyGrid(a) => {
            grid(&config.build()?, a, seed, "classify", false, &mut art)?;
            "classify-grid"
        }
        Command::Basins(a) => {
            grid(&config.build()?, a, seed, "basins", true, &mut art)?;
            "basins"
        }
        Command::Periodic(a) => {
            periodic(&config.build()?, a, seed, &mut art)?;
            "periodic"
        }
        Command::Green(a) => {
            green(&config.build()?, a, &mut art)?;
            "green"
        }
        Command::Boxdim(a) => {
            boxdim(&config.build()?, a, seed, &mut art)?;
            "boxdim"
        }
        Command::Growth(a) => {
            growth(&config.build()?, a, seed, &mut art)?;
            "growth"
        }
        Command::Pressure(a) => {
            pressure(&config.build()?, a, seed, &mut art)?;
            "pressure"
        }
        Command::Dims(a) => {
            dims(&config.build()?, a, seed, &mut art)?;
            "dims"
        }
        Command::Sweep(a) => {
            sweep(&config, a, seed, &mut art)?;
            "sweep"
        }
    };
    art.finish(name, Some(path), seed, serde_json::to_value(&cli.command)?)
}

fn filtration(m: &MapSpec, r: &RadiusArgs, seed: u64) -> Result<FiltrationSpec> {
    let fs = match r.radius {
        Some(radius) => default_regions(m, radius)?,
        None => choose_radius(m, VerifyBudget { samples: r.radius_samples, iters: VERIFY_ITERS, seed })?,
    };
    eprintln!("radius={}", fs.radius);
    Ok(fs)
}

fn newton(a: &NewtonArgs, seed: u64) -> NewtonOptions {
    NewtonOptions { grid: a.seed_grid, random_seeds: a.random_seeds, seed, ..NewtonOptions::default() }
}

fn key_values(rows: &[(String, String)]) -> Result<Table> {
    let mut t = Table::new(&["key", "value"])?;
    for (k, v) in rows {
        t.row([k, v])?;
    }
    Ok(t)
}

fn info(m: &MapSpec, art: &mut Artifacts) -> Result<()> {
    let (ip, im) = m.indeterminacy_sets();
    let delta = m.det_df();
    let dim = |d: Option<i32>| d.map_or_else(|| "unknown".to_string(), |d| d.to_string());
    let mut rows = vec![
        ("family".to_string(), m.family().name().to_string()),
        ("n".into(), m.dim().to_string()),
        ("d".into(), m.degree().to_string()),
        ("d_inverse".into(), m.inverse_degree().to_string()),
        ("l".into(), m.regularity_index().map_or_else(|| "NA".to_string(), |l| l.to_string())),
        ("delta_re".into(), delta.re.to_string()),
        ("delta_im".into(), delta.im.to_string()),
        ("delta_abs".into(), delta.norm().to_string()),
        ("I_plus".into(), ip.to_string()),
        ("I_minus".into(), im.to_string()),
        ("dim_I_plus".into(), dim(ip.dim())),
        ("dim_I_minus".into(), dim(im.dim())),
        ("disjoint".into(), m.indeterminacy_disjoint().map_or_else(|| "unknown".to_string(), |b| b.to_string())),
        ("regular".into(), m.is_regular().to_string()),
    ];
    if let Some(w) = m.regularity_warning() {
        rows.push(("warning".into(), w));
    }
    for (k, v) in &rows {
        println!("{k}={v}");
    }
    art.csv("info.csv", key_values(&rows)?)
}

fn filtration_verify(m: &MapSpec, a: &FiltrationArgs, seed: u64, art: &mut Artifacts) -> Result<()> {
    let fs = filtration(m, &a.radius, seed)?;
    let report = verify_filtration(m, &fs, a.samples, a.iters, seed);
    let mut header = vec!["property".to_string(), "samples".into(), "violations".into(), "witness_index".into()];
    header.extend(coord_header(m.dim()));
    let mut t = Table::new(&header)?;
    for p in &report.properties {
        let mut row = vec![p.property.to_string(), p.samples.to_string(), p.violations.to_string()];
        match &p.witness {
            Some((i, q)) => {
                row.push(i.to_string());
                row.extend(coords(q));
            }
            None => row.extend(std::iter::repeat_n("NA".to_string(), 1 + 2 * m.dim())),
        }
        t.row(&row)?;
    }
    println!("radius={} samples={} violations={}", report.radius, a.samples, report.total_violations());
    art.csv("filtration.csv", t)
}

fn window(n: usize, grid: usize, x: Span, y: Option<Span>) -> GridWindow {
    let y = y.unwrap_or(x);
    GridWindow::real_plane(n, (x.lo, x.hi), (y.lo, y.hi), grid, grid)
}

fn orbit_header(n: usize) -> Vec<String> {
    let mut h = vec!["k".to_string(), "cycle".into(), "j".into(), "period".into()];
    h.extend(coord_header(n));
    h.extend((0..n).map(|i| format!("mult{i}_abs")));
    h.extend(["stability".to_string(), "residual".into()]);
    h
}

fn orbit_rows(t: &mut Table, k: usize, idx: usize, o: &PeriodicOrbit) -> Result<()> {
    for (j, p) in o.points.iter().enumerate() {
        let mut row = vec![k.to_string(), idx.to_string(), j.to_string(), o.period.to_string()];
        row.extend(coords(p));
        row.extend(o.multipliers.iter().map(|l| l.norm().to_string()));
        row.extend([o.stability.label(), o.residual.to_string()]);
        t.row(&row)?;
    }
    Ok(())
}

fn basin_table(map: &BasinMap) -> Result<Table> {
    let mut t = Table::new(&["x", "y", "class", "k"])?;
    for (x, y, class, k) in map.rows() {
        t.row([x.to_string(), y.to_string(), class, k.to_string()])?;
    }
    Ok(t)
}

fn grid(m: &MapSpec, a: &GridArgs, seed: u64, stem: &str, with_cycles: bool, art: &mut Artifacts) -> Result<()> {
    let fs = filtration(m, &a.radius, seed)?;
    let att = find_attracting_cycles(m, &fs, a.kmax, &newton(&a.newton, seed));
    let win = window(m.dim(), a.grid, a.window, a.window_y);
    let map = basin_map(m, &fs, &att, &win, a.budget, Direction::Forward);
    art.csv(&format!("{stem}.csv"), basin_table(&map)?)?;
    art.pgm(&format!("{stem}.pgm"), win.width, win.height, &map.gray())?;

    let mut counts: Vec<(String, usize)> = Vec::new();
    for c in &map.cells {
        let label = c.verdict.label();
        match counts.iter_mut().find(|e| e.0 == label) {
            Some(e) => e.1 += 1,
            None => counts.push((label, 1)),
        }
    }
    counts.sort();
    let mut t = Table::new(&["class", "cells"])?;
    for (label, n) in &counts {
        println!("{label}={n}");
        t.row([label.clone(), n.to_string()])?;
    }
    art.csv(&format!("{stem}_counts.csv"), t)?;

    if with_cycles {
        let mut t = Table::new(&orbit_header(m.dim()))?;
        for (i, o) in att.iter().enumerate() {
            orbit_rows(&mut t, o.period, i, o)?;
        }
        art.csv("attractors.csv", t)?;
    }
    Ok(())
}

fn periodic(m: &MapSpec, a: &PeriodicArgs, seed: u64, art: &mut Artifacts) -> Result<()> {
    let fs = filtration(m, &a.radius, seed)?;
    let opts = NewtonOptions { grid: a.grid, random_seeds: a.random_seeds, seed, ..NewtonOptions::default() };
    let censuses = match a.period {
        Some(k) => vec![find_periodic_points(m, &fs, k, &opts)],
        None => census_range(m, &fs, a.kmax, &opts),
    };
    let mut t = Table::new(&orbit_header(m.dim()))?;
    let mut s = Table::new(&["k", "cycles", "fixed_points", "saddle_fixed_points"])?;
    for c in &censuses {
        for (i, o) in c.orbits.iter().enumerate() {
            orbit_rows(&mut t, c.k, i, o)?;
        }
        let row = [c.k, c.orbits.len(), c.fixed_point_count(), c.saddle_fixed_point_count()];
        println!("k={} cycles={} fixed_points={} saddle_fixed_points={}", row[0], row[1], row[2], row[3]);
        s.row(row.map(|v| v.to_string()))?;
    }
    art.csv("periodic.csv", t)?;
    art.csv("periodic_summary.csv", s)
}

fn green(m: &MapSpec, a: &GreenArgs, art: &mut Artifacts) -> Result<()> {
    let win = window(m.dim(), a.grid, a.window, a.window_y);
    let gp = green_grid(m, Direction::Forward, &win, a.budget, a.big_radius);
    let gm = green_grid(m, Direction::Backward, &win, a.budget, a.big_radius);
    let mut t = Table::new(&["x", "y", "g_plus", "g_minus", "flags"])?;
    for (i, (p, q)) in gp.iter().zip(&gm).enumerate() {
        let (x, y) = win.coords(i / win.width, i % win.width);
        let flags: Vec<&str> = [(p.budget_limited(), "plus_bounded"), (q.budget_limited(), "minus_bounded")]
            .into_iter()
            .filter_map(|(on, f)| on.then_some(f))
            .collect();
        t.row([x.to_string(), y.to_string(), p.value.to_string(), q.value.to_string(), flags.join("|")])?;
    }
    art.csv("green.csv", t)?;
    art.pgm("green.pgm", win.width, win.height, &automorph::io::green_gray(&gp))
}

fn attracting(censuses: &[Census]) -> Vec<PeriodicOrbit> {
    censuses
        .iter()
        .flat_map(|c| c.attracting().filter(|o| o.period == c.k).cloned().collect::<Vec<_>>())
        .collect()
}

fn saddle_cycles(censuses: &[Census]) -> Vec<PeriodicOrbit> {
    censuses
        .iter()
        .flat_map(|c| c.orbits.iter().filter(|o| o.is_saddle() && o.period == c.k).cloned().collect::<Vec<_>>())
        .collect()
}

fn boxcount_rows(t: &mut Table, r: &BoxCountResult) -> Result<()> {
    for ((l, s), c) in r.levels.iter().zip(&r.scales).zip(&r.counts) {
        t.row([r.target.clone(), l.to_string(), s.to_string(), c.to_string()])?;
    }
    Ok(())
}

fn boxdim(m: &MapSpec, a: &BoxdimArgs, seed: u64, art: &mut Artifacts) -> Result<()> {
    let fs = filtration(m, &a.radius, seed)?;
    let opts = newton(&a.newton, seed);
    let levels = a.scales.all();
    let result = match a.strategy {
        BoxStrategy::Indicator => {
            let target = match a.target {
                Target::J => IndicatorTarget::J,
                Target::K => IndicatorTarget::K,
                Target::KPlus => IndicatorTarget::KPlus,
                Target::KMinus => IndicatorTarget::KMinus,
                Target::JPlus | Target::JMinus => bail!("the indicator counts J, K, K+ and K-; use a point strategy for J+ and J-"),
            };
            let att = if target == IndicatorTarget::J { find_attracting_cycles(m, &fs, a.kmax, &opts) } else { Vec::new() };
            let cube = Cube::polydisk(m.dim(), fs.radius);
            box_dimension_indicator(m, &fs, target, &att, &cube, &levels, a.fit_window.pair(), &IndicatorOptions::default())?
        }
        BoxStrategy::Saddles | BoxStrategy::Boundary => {
            let target = match a.target {
                Target::J => JuliaTarget::J,
                Target::JPlus => JuliaTarget::JPlus,
                Target::JMinus => JuliaTarget::JMinus,
                _ => bail!("point strategies sample J, J+ or J-; use the indicator for K targets"),
            };
            let strategy = match a.strategy {
                BoxStrategy::Saddles => Strategy::Saddles { k_max: a.kmax, newton: opts },
                _ => Strategy::Boundary(BoundaryOptions { lines: a.lines, seed, ..BoundaryOptions::default() }),
            };
            let pts = sample_julia(m, &fs, target, &strategy)?;
            let name = format!("{target:?}");
            box_dimension_points(&pts, &Cube::bounding(&pts), &levels, a.fit_window.pair(), &name)?
        }
    };
    let mut t = Table::new(&["target", "level", "scale", "count"])?;
    boxcount_rows(&mut t, &result)?;
    art.csv("boxdim.csv", t)?;
    let rows = vec![
        ("target".to_string(), result.target.clone()),
        ("source".into(), result.source.clone()),
        ("fit_lo".into(), result.fit_window.0.to_string()),
        ("fit_hi".into(), result.fit_window.1.to_string()),
        ("slope".into(), result.slope.to_string()),
        ("intercept".into(), result.intercept.to_string()),
        ("residual".into(), result.residual.to_string()),
    ];
    println!("boxdim({})={}", result.target, result.slope);
    art.csv("boxdim_fit.csv", key_values(&rows)?)
}

fn growth(m: &MapSpec, a: &GrowthArgs, seed: u64, art: &mut Artifacts) -> Result<()> {
    let fs = filtration(m, &a.radius, seed)?;
    let rates = match a.strategy {
        SampleStrategy::Saddles => {
            let cycles = saddle_cycles(&census_range(m, &fs, a.period, &newton(&a.newton, seed)));
            if cycles.is_empty() {
                bail!("no saddle cycles of period <= {}", a.period);
            }
            [Direction::Forward, Direction::Backward].map(|d| growth_rate_cycles(m, d, &cycles, a.kmax, "saddles"))
        }
        SampleStrategy::Boundary => {
            let mut out = Vec::new();
            for (dir, target) in [(Direction::Forward, JuliaTarget::JPlus), (Direction::Backward, JuliaTarget::JMinus)] {
                let strategy = Strategy::Boundary(BoundaryOptions { lines: a.lines, seed, ..BoundaryOptions::default() });
                let pts = sample_julia(m, &fs, target, &strategy)?;
                out.push(growth_rate(m, &fs, dir, &pts, a.kmax, "boundary"));
            }
            let [f, b]: [_; 2] = out.try_into().map_err(|_| anyhow!("growth rates"))?;
            [f, b]
        }
    };
    let mut t = Table::new(&["direction", "k", "s_k"])?;
    let mut s = Table::new(&["direction", "s", "samples", "dropped", "descriptor"])?;
    for g in &rates {
        let dir = dir_name(g.direction);
        for (k, sk) in &g.per_k {
            t.row([dir.to_string(), k.to_string(), sk.to_string()])?;
        }
        println!("s_{dir}={}", g.s);
        s.row([dir.to_string(), g.s.to_string(), g.samples.to_string(), g.dropped.to_string(), g.descriptor.clone()])?;
    }
    art.csv("growth.csv", t)?;
    art.csv("growth_summary.csv", s)
}

fn dir_name(d: Direction) -> &'static str {
    match d {
        Direction::Forward => "plus",
        Direction::Backward => "minus",
    }
}

fn weight(w: WeightArg) -> Weight {
    match w {
        WeightArg::Unstable => Weight::Unstable,
        WeightArg::Stable => Weight::Stable,
    }
}

fn pressure(m: &MapSpec, a: &PressureArgs, seed: u64, art: &mut Artifacts) -> Result<()> {
    let fs = filtration(m, &a.radius, seed)?;
    let censuses = census_range(m, &fs, a.kmax, &newton(&a.newton, seed));
    let w = weight(a.weight);
    let ts = t_grid(a.t_grid.lo, a.t_grid.hi, a.t_grid.n);
    let mut curve = Table::new(&["k", "t", "pressure"])?;
    for c in &censuses {
        let pc = pressure_curve(c, w, &ts)?;
        for (t, p) in &pc.points {
            curve.row([c.k.to_string(), t.to_string(), p.to_string()])?;
        }
    }
    let l = m.regularity_index().ok_or_else(|| anyhow!("map is not regular; no entropy target"))?;
    let h = entropy_estimate(&censuses, l, m.degree());
    let mut ent = Table::new(&["k", "count", "h_k"])?;
    for (k, count, hk) in &h.per_k {
        ent.row([k.to_string(), count.to_string(), hk.to_string()])?;
    }
    let root = bowen_ruelle_root(&censuses, w, DEFAULT_BRACKET)?;
    let mut roots = Table::new(&["k", "t"])?;
    for (k, t) in &root.table {
        roots.row([k.to_string(), t.to_string()])?;
    }
    println!("t_{}={} last_delta={} h={} target={}", w.name(), root.t, opt(root.last_delta()), opt(h.last()), h.target);
    art.csv("pressure.csv", curve)?;
    art.csv("roots.csv", roots)?;
    art.csv("entropy.csv", ent)
}

fn dims(m: &MapSpec, a: &DimsArgs, seed: u64, art: &mut Artifacts) -> Result<()> {
    let fs = filtration(m, &a.radius, seed)?;
    let censuses = census_range(m, &fs, a.kmax, &newton(&a.newton, seed));
    let cycles = saddle_cycles(&censuses);
    if cycles.is_empty() {
        bail!("no saddle cycles of period <= {}", a.kmax);
    }
    let sp = growth_rate_cycles(m, Direction::Forward, &cycles, a.growth_k, "saddles");
    let sm = growth_rate_cycles(m, Direction::Backward, &cycles, a.growth_k, "saddles");
    let mut meas = Measurements { s_plus: sp.s, s_minus: sm.s, ..Measurements::default() };

    let mut counts = Table::new(&["target", "level", "scale", "count"])?;
    if !a.no_boxdim {
        let cube = Cube::polydisk(m.dim(), fs.radius);
        let levels = a.scales.all();
        let ind = IndicatorOptions::default();
        let j = box_dimension_indicator(m, &fs, IndicatorTarget::J, &attracting(&censuses), &cube, &levels, a.fit_window.pair(), &ind)?;
        boxcount_rows(&mut counts, &j)?;
        meas.boxdim_j = Some(j.slope);
        // K- has interior unless f contracts volume; counting it is then pointless
        if m.det_df().norm() < 1.0 {
            let k = box_dimension_indicator(m, &fs, IndicatorTarget::KMinus, &[], &cube, &levels, a.fit_window.pair(), &ind)?;
            boxcount_rows(&mut counts, &k)?;
            meas.boxdim_kminus = Some(k.slope);
        }
    }

    let last = censuses.last().expect("kmax >= 1");
    let diag = hyperbolicity_heuristic(&m.forward(), &m.backward(), &saddle_points(&censuses), &HyperbolicityOptions::default());
    let thermo = match (b_value(last, Weight::Unstable), b_value(last, Weight::Stable)) {
        (Ok(b_plus), Ok(b_minus)) => Some(ThermoInputs { b_plus, b_minus, hyperbolic: diag.pass }),
        _ => None,
    };
    let report = bound_report(m, &meas, thermo.as_ref());
    let tu = bowen_ruelle_root(&censuses, Weight::Unstable, DEFAULT_BRACKET).ok().map(|r| r.t);
    let ts = bowen_ruelle_root(&censuses, Weight::Stable, DEFAULT_BRACKET).ok().map(|r| r.t);

    let mut rows = vec![("radius".to_string(), fs.radius.to_string())];
    rows.extend(report.rows());
    rows.extend([
        ("t_u".to_string(), opt(tu)),
        ("t_s".into(), opt(ts)),
        ("b_plus".into(), opt(thermo.as_ref().map(|t| t.b_plus))),
        ("b_minus".into(), opt(thermo.as_ref().map(|t| t.b_minus))),
        ("hyperbolic".into(), diag.pass.to_string()),
        ("worst_gap".into(), diag.worst_gap.to_string()),
        ("worst_angle".into(), diag.worst_angle.to_string()),
    ]);
    for (k, v) in &rows {
        println!("{k}={v}");
    }
    art.csv("dims.csv", key_values(&rows)?)?;
    if !a.no_boxdim {
        art.csv("dims_boxcount.csv", counts)?;
    }
    Ok(())
}

fn set_param(cfg: &mut MapConfig, param: Param, stage: usize, value: f64) -> Result<()> {
    let replace = |slot: &mut Cx| {
        let old: Complex64 = (*slot).into();
        *slot = Cx::Pair([value, old.im]);
    };
    let slot: &mut Cx = match (cfg.family.as_str(), param) {
        ("henon", _) => {
            let n = cfg.stages.len();
            let s = cfg.stages.get_mut(stage).ok_or_else(|| anyhow!("stage {stage} out of range (map has {n})"))?;
            match param {
                Param::A => &mut s.a,
                Param::C => s.p.first_mut().context("empty stage polynomial")?,
            }
        }
        (_, Param::A) => cfg.a.as_mut().context("config has no `a`")?,
        ("shift-like", Param::C) => cfg.p.as_mut().and_then(|p| p.first_mut()).context("config has no `p`")?,
        (_, Param::C) => cfg.q.as_mut().and_then(|q| q.first_mut()).context("config has no `q`")?,
    };
    replace(slot);
    Ok(())
}

fn sweep(cfg: &MapConfig, a: &SweepArgs, seed: u64, art: &mut Artifacts) -> Result<()> {
    if a.steps < 2 {
        bail!("--steps must be at least 2");
    }
    let opts = SweepOptions {
        k_max: a.kmax,
        newton: newton(&a.newton, seed),
        levels: a.scales.map_or_else(Vec::new, |l| l.all()),
        fit_window: a.fit_window.pair(),
        filtration: VerifyBudget { samples: a.radius_samples, iters: VERIFY_ITERS, seed },
        ..SweepOptions::default()
    };
    // surface a bad --param/--stage before the sweep swallows it into a flag
    set_param(&mut cfg.clone(), a.param, a.stage, a.from)?;
    let build = |v: f64| {
        let mut c = cfg.clone();
        set_param(&mut c, a.param, a.stage, v).map_err(|e| automorph::Error::InvalidArgument(e.to_string()))?;
        c.build()
    };
    let result = dimension_sweep(build, &linear_path(a.from, a.to, a.steps), &opts);
    let mut t = Table::new(&["param", "t_u", "t_s", "boxdim_j", "hyperbolic", "flagged", "note"])?;
    for s in &result.steps {
        t.row([
            s.param.to_string(),
            opt(s.t_u),
            opt(s.t_s),
            opt(s.boxdim_j),
            s.hyperbolic.to_string(),
            s.flagged.to_string(),
            s.note.clone(),
        ])?;
        println!("param={} t_u={} t_s={} flagged={}", s.param, opt(s.t_u), opt(s.t_s), s.flagged);
    }
    art.csv("sweep.csv", t)?;
    let rows = vec![
        ("max_jump".to_string(), result.max_jump.to_string()),
        ("max_second_difference".into(), result.max_second_difference.to_string()),
        ("flagged_steps".into(), result.steps.iter().filter(|s| s.flagged).count().to_string()),
    ];
    art.csv("sweep_summary.csv", key_values(&rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_moves_the_named_parameter() {
        let mut cfg = MapConfig::parse("family = \"henon\"\n[[stages]]\np = [-6, 0, 1]\na = [1.0, 0.25]\n").unwrap();
        set_param(&mut cfg, Param::A, 0, 0.3).unwrap();
        set_param(&mut cfg, Param::C, 0, -5.0).unwrap();
        assert_eq!(cfg.stages[0].a, Cx::Pair([0.3, 0.25]));
        assert_eq!(cfg.stages[0].p[0], Cx::Pair([-5.0, 0.0]));
        assert!(set_param(&mut cfg, Param::A, 1, 0.3).is_err());
    }
}
