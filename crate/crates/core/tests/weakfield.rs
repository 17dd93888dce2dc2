use emwave_core::weakfield::*;
use proptest::prelude::*;

const H: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

fn small(points: usize) -> SimulationConfig {
    let mut cfg = SimulationConfig::standard(points, 0.2).unwrap();
    cfg.response_lambda = None;
    cfg
}

/// `Ĥ₂` entry by direct index loops over the metric.
fn h2hat_loop(f: &[[f64; 4]; 4], a: usize, b: usize) -> f64 {
    let mut s = 0.0;
    for k in 0..4 {
        s += H[k] * f[a][k] * f[b][k];
    }
    let mut tr = 0.0;
    for k in 0..4 {
        for l in 0..4 {
            tr += H[k] * H[l] * f[k][l] * f[k][l];
        }
    }
    let hab = if a == b { H[a] } else { 0.0 };
    -2.0 * (s - 0.25 * hab * tr)
}

fn constant_f(vals: [f64; 6]) -> (GridField, [[f64; 4]; 4]) {
    let g = GridSpec::new(5, 1.0, 0.3, 0).unwrap();
    let mut f = GridField::zeros(g, 6);
    let mut m = [[0.0; 4]; 4];
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    for (k, &(a, b)) in pairs.iter().enumerate() {
        f.comps[k].iter_mut().for_each(|v| *v = vals[k]);
        m[a][b] = vals[k];
        m[b][a] = -vals[k];
    }
    (f, m)
}

#[test]
fn unit_electric_field_has_unit_negative_energy() {
    let (f, _) = constant_f([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let s = em_stress(&f);
    assert_eq!(s.comps[0][0], -1.0);
    let (f, _) = constant_f([0.0; 6]);
    assert_eq!(em_stress(&f).max_abs(), 0.0);
}

proptest! {
    #[test]
    fn stress_matches_loops_and_sign_identity(vals in prop::array::uniform6(-5.0f64..5.0)) {
        let (f, m) = constant_f(vals);
        let s = em_stress(&f);
        for (slot, &(a, b)) in STRESS_INDEX.iter().enumerate() {
            prop_assert!((s.comps[slot][0] - h2hat_loop(&m, a, b)).abs() < 1e-12);
        }
        let electric: f64 = vals[..3].iter().map(|v| v * v).sum();
        let magnetic: f64 = vals[3..].iter().map(|v| v * v).sum();
        let want = -electric - magnetic;
        prop_assert!((s.comps[0][0] - want).abs() <= 1e-12 * (1.0 + electric + magnetic));
        prop_assert!(s.comps[0][0] <= 1e-12 * (electric + magnetic));
    }
}

#[test]
fn zero_source_gives_zero_field() {
    let g = GridSpec::new(9, 1.0, 0.4, 10).unwrap();
    let u = wave_solve(&g, 4, |_, _| GridField::zeros(g, 4)).unwrap();
    assert_eq!(u.max_abs(), 0.0);
    let phi = vec![GridField::zeros(g, 4); 6];
    let j = vec![GridField::zeros(g, 4); 6];
    assert_eq!(metric_correction(&phi, &j, &g).unwrap().max_abs(), 0.0);
}

#[test]
fn wave_solve_rejects_unstable_grid() {
    let g = GridSpec {
        points: 9,
        length: 1.0,
        cfl: 0.7,
        steps: 3,
    };
    assert!(matches!(
        wave_solve(&g, 1, |_, _| GridField::zeros(g, 1)),
        Err(WeakfieldError::Cfl { .. })
    ));
}

#[test]
fn source_peaks_at_base_point_and_keeps_its_mass() {
    let g = GridSpec::new(41, 1.0, 0.3, 1).unwrap();
    let spec = ConormalSourceSpec::centered(&g, 0.0, 3.0);
    let src = ConormalSource::build(&spec, &g).unwrap();
    let c = &src.spatial.comps[0];
    let (imax, _) = c
        .iter()
        .enumerate()
        .fold((0, f64::MIN), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
    let (x, y, z) = g.coords(imax);
    let p = g.position(x, y, z);
    for k in 0..3 {
        assert!((p[k] - spec.base[k]).abs() <= g.h());
    }
    // Normal mass through the base point is 1 for every width.
    let mass = |w: f64| {
        let mut s = spec.clone();
        s.width = w;
        let f = ConormalSource::build(&s, &g).unwrap();
        (0..g.points)
            .map(|z| f.spatial.comps[0][g.index(20, 20, z)])
            .sum::<f64>()
            * g.h()
    };
    for w in [3.0 * g.h(), 4.0 * g.h(), 6.0 * g.h()] {
        assert!((mass(w) - 1.0).abs() < 2e-2, "{}", mass(w));
    }
    let mut zero = spec.clone();
    zero.amplitude = [0.0; 3];
    assert_eq!(
        ConormalSource::build(&zero, &g).unwrap().spatial.max_abs(),
        0.0
    );
}

#[test]
fn source_vanishes_outside_window_and_neighbourhood() {
    let g = GridSpec::new(41, 1.0, 0.3, 1).unwrap();
    let spec = ConormalSourceSpec::centered(&g, 0.1, 3.0);
    let src = ConormalSource::build(&spec, &g).unwrap();
    assert_eq!(src.slice(spec.window.end() + 1e-9).max_abs(), 0.0);
    for i in 0..g.len() {
        let (x, y, z) = g.coords(i);
        if spec.distance_to_patch(g.position(x, y, z)) > spec.support_radius() {
            assert_eq!(src.spatial.comps[0][i], 0.0);
        }
    }
}

#[test]
fn run_satisfies_sign_identity_and_causality() {
    let out = run_simulation(&small(33)).unwrap();
    let d = &out.diagnostics;
    assert!(d.h2_00_max_violation <= 1e-12, "{}", d.h2_00_max_violation);
    assert!(d.h2_00_min < 0.0);
    assert_eq!(d.causality_leak, Some(0.0));
    assert!(d.g1_max_off_source > 0.0);
    assert!(out.g1.all_finite());
}

#[test]
fn leak_is_measured_outside_the_domain_of_influence() {
    let mut cfg = small(33);
    cfg.leak_check_step = Some(3);
    let d = run_simulation(&cfg).unwrap().diagnostics;
    assert_eq!(d.causality_leak, Some(0.0));
}

#[test]
fn metric_response_is_quadratic() {
    for lambda in [0.5, 2.0] {
        let mut cfg = small(25);
        cfg.response_lambda = Some(lambda);
        let r = run_simulation(&cfg)
            .unwrap()
            .diagnostics
            .response_ratio
            .unwrap();
        assert!((r / (lambda * lambda) - 1.0).abs() < 1e-9, "{lambda}: {r}");
    }
}

#[test]
fn streaming_and_sampled_metric_solves_agree() {
    let mut cfg = small(17);
    cfg.grid.steps = 20;
    cfg.leak_check_step = None;
    let g = cfg.grid;
    let src = ConormalSource::build(&cfg.source, &g).unwrap();
    let mut acc = CurrentIntegrator::new(&g);
    let mut solver = WaveSolver::new(g, 4);
    let mut phis = vec![GridField::zeros(g, 4)];
    let mut currents = Vec::new();
    for n in 0..=g.steps {
        let t = n as f64 * g.dt();
        let jbar = src.slice(t);
        let j0 = acc.push(&jbar).to_vec();
        let mut j = GridField::zeros(g, 4);
        j.comps[0] = j0;
        j.comps[1..].clone_from_slice(&jbar.comps);
        let mut s = j.clone();
        s.comps[0].iter_mut().for_each(|v| *v = -*v);
        currents.push(j);
        if n < g.steps {
            solver.step(&s).unwrap();
            phis.push(solver.state());
        }
    }
    let sampled = metric_correction(
        &phis,
        &currents,
        &GridSpec {
            steps: g.steps - 1,
            ..g
        },
    )
    .unwrap();
    let mut short = cfg.clone();
    short.grid.steps = g.steps;
    let streamed = run_simulation(&short).unwrap().g1;
    let scale = streamed.max_abs();
    assert!(scale > 0.0);
    for (a, b) in sampled.comps.iter().zip(&streamed.comps) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= 1e-9 * scale);
        }
    }
}

#[test]
fn pulse_travels_at_unit_speed() {
    let g = GridSpec::new(49, 1.0, 0.25, 80).unwrap();
    let mut spec = ConormalSourceSpec::centered(&g, 0.0, 4.0);
    spec.amplitude = [0.0, 0.0, 1.0];
    let src = ConormalSource::build(&spec, &g).unwrap();
    let u = wave_solve(&g, 3, |_, t| src.slice(t)).unwrap();
    let elapsed = g.final_time() - spec.window.center;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..g.len() {
        let (x, y, z) = g.coords(i);
        let e: f64 = u.comps.iter().map(|c| c[i] * c[i]).sum();
        num += e * spec.distance_to_patch(g.position(x, y, z));
        den += e;
    }
    let mean_radius = num / den;
    assert!(
        (mean_radius - elapsed).abs() <= g.h(),
        "{mean_radius} vs {elapsed}"
    );
}

fn gauge_residual_at(points: usize, conserve: bool) -> f64 {
    let cfg = small(points);
    let g = cfg.grid;
    let src = ConormalSource::build(&cfg.source, &g).unwrap();
    let mut acc = CurrentIntegrator::new(&g);
    let mut w = WaveSolver::new(g, 4);
    let mut prev = w.state();
    for n in 0..g.steps {
        let jbar = src.slice(n as f64 * g.dt());
        let mut s = GridField::zeros(g, 4);
        if conserve {
            s.comps[0] = acc.push(&jbar).iter().map(|v| -v).collect();
        }
        s.comps[1..].clone_from_slice(&jbar.comps);
        prev = w.state();
        w.step(&s).unwrap();
    }
    let dphi = w.time_derivative();
    let r = gauge_residual(&prev, &dphi);
    let mask = measurement_mask(&g, measurement_padding(&cfg.source, &g, g.final_time()));
    let scale = field_strength(&prev, &dphi).max_abs();
    r.comps[0]
        .iter()
        .zip(&mask)
        .filter(|(_, m)| **m)
        .map(|(v, _)| v.abs())
        .fold(0.0, f64::max)
        / scale
}

#[test]
fn gauge_residual_converges_only_with_conservation() {
    let coarse = gauge_residual_at(25, true);
    let fine = gauge_residual_at(49, true);
    assert!(fine < coarse / 1.5, "{coarse} -> {fine}");
    let bad_coarse = gauge_residual_at(25, false);
    let bad_fine = gauge_residual_at(49, false);
    assert!(bad_fine > 0.5 * bad_coarse, "{bad_coarse} -> {bad_fine}");
    assert!(bad_fine > 10.0 * fine);
}

#[test]
fn tube_ratio_controls() {
    let g = GridSpec::new(33, 1.0, 0.25, 60).unwrap();
    let spec = ConormalSourceSpec::centered(&g, 0.05, 3.0);
    let t = g.final_time();
    assert_eq!(
        lightcone_energy_diag(&GridField::zeros(g, 10), &spec, t, EnergyMeasure::Gradient).ratio,
        1.0
    );
    // A static bump sitting on Y, far from the front.
    let c = spec.base;
    let bump_field = GridField::from_fn(g, 1, |_, p| {
        let r2: f64 = (0..3).map(|k| (p[k] - c[k]).powi(2)).sum();
        bump(r2.sqrt() / 0.08, None)
    });
    let r = lightcone_energy_diag(&bump_field, &spec, t, EnergyMeasure::Gradient);
    assert!(r.ratio < 0.01, "{}", r.ratio);
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let cfg = small(21);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_simulation(&cfg).unwrap())
    };
    let a = run(1);
    let b = run(3);
    assert_eq!(a.g1, b.g1);
    assert_eq!(a.diagnostics, b.diagnostics);
    assert_eq!(a.slice_csv(), b.slice_csv());
}

#[test]
fn renderings_have_expected_shape() {
    let out = run_simulation(&small(17)).unwrap();
    let pgm = out.g1_pgm();
    assert!(pgm.starts_with(b"P5\n17 17\n255\n"));
    assert_eq!(pgm.len(), b"P5\n17 17\n255\n".len() + 17 * 17);
    assert_eq!(out.slice_csv().lines().count(), 1 + 17 * 17);
    assert_eq!(
        out.timeline_csv().lines().count(),
        1 + out.config.grid.steps
    );
}
