#[path = "common/geometry.rs"]
mod geometry;

use emwave_core::causal::*;
use geometry::*;
use proptest::prelude::*;
use std::f64::consts::PI;

fn opts() -> TraceOptions {
    TraceOptions::default()
}

/// Point at stereographic `y = −1/2` on the x-axis and the unit-speed radial
/// null direction there.
fn sphere_start() -> (Point, Point) {
    let y0 = -0.5;
    let c = 2.0 / (1.0 + y0 * y0);
    ([0.0, y0, 0.0, 0.0], [1.0, 1.0 / c, 0.0, 0.0])
}

fn standard_frame() -> [Point; 4] {
    std::array::from_fn(|a| std::array::from_fn(|m| if a == m { 1.0 } else { 0.0 }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn minkowski_geodesics_are_straight(
        x in prop::array::uniform4(-2.0f64..2.0),
        th in prop::array::uniform4(-1.5f64..1.5),
    ) {
        prop_assume!(th.iter().any(|c| c.abs() > 1e-3));
        let c = geodesic_trace(&WarpedMetric::Minkowski, x, th, 5.0, &opts()).unwrap();
        prop_assert_eq!(c.exit, ExitReason::Horizon);
        prop_assert!(c.norm_drift < 1e-10);
        for p in &c.samples {
            for m in 0..4 {
                prop_assert!((p.x[m] - (x[m] + p.s * th[m])).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn sphere_radial_null_geodesic_follows_the_great_circle() {
    let (x, th) = sphere_start();
    let chi0 = 2.0 * (-0.5f64).atan();
    let c = geodesic_trace(&WarpedMetric::unit_sphere(), x, th, 3.0, &opts()).unwrap();
    assert_eq!(c.exit, ExitReason::Horizon);
    assert!(c.norm_drift < 1e-8);
    for p in &c.samples {
        assert!((p.x[0] - p.s).abs() < 1e-12);
        assert!((p.x[1] - stereographic(chi0 + p.s)).abs() < 1e-8 * (1.0 + p.x[1].abs()));
        assert!(p.x[2].abs() < 1e-14 && p.x[3].abs() < 1e-14);
    }
}

#[test]
fn sphere_oblique_geodesic_stays_in_a_plane_through_the_centre() {
    let m = WarpedMetric::unit_sphere();
    let x = [0.0, 0.3, -0.2, 0.4];
    let th = [1.0, 0.2, 0.35, -0.1];
    let c = geodesic_trace(&m, x, th, 4.0, &opts()).unwrap();
    let lift = |p: &Point| to_sphere([p[1], p[2], p[3]]);
    let (a, b) = (
        lift(&c.samples[0].x),
        lift(&c.samples[c.samples.len() / 3].x),
    );
    for p in &c.samples {
        assert!(gram3(a, b, lift(&p.x)).abs() < 1e-9);
    }
    assert!(c.norm_drift < 1e-8 * m.norm(&x, &th).abs().max(1.0));
}

#[test]
fn finite_difference_fallback_matches_analytic_derivatives() {
    let x = [0.0, 0.3, -0.2, 0.4];
    let th = [1.0, 0.2, 0.35, -0.1];
    for m in [
        WarpedMetric::unit_sphere(),
        WarpedMetric::PerturbedFlat { epsilon: 0.4 },
    ] {
        let a = geodesic_trace(&m, x, th, 2.0, &opts()).unwrap();
        let b = geodesic_trace(&FiniteDifference(m.clone()), x, th, 2.0, &opts()).unwrap();
        for k in 0..4 {
            assert!((a.end().x[k] - b.end().x[k]).abs() < 1e-6);
        }
    }
}

#[test]
fn leaving_the_chart_is_an_exit() {
    let m = WarpedMetric::RoundSphere {
        radius: 1.0,
        chart_radius: 3.0,
    };
    let (x, th) = sphere_start();
    let c = geodesic_trace(&m, x, th, 4.0, &opts()).unwrap();
    assert_eq!(c.exit, ExitReason::LeftChart);
    let end = c.end();
    assert!(end.x[1] <= 3.0 && end.x[1] > 2.9);
}

#[test]
fn degenerate_metric_is_an_error() {
    let m = WarpedMetric::PerturbedFlat { epsilon: -1.0 };
    let r = geodesic_trace(&m, [0.0, 1.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0], 2.0, &opts());
    assert!(matches!(r, Err(CausalError::Metric { .. })));
    let r = geodesic_trace(&m, [0.0, 0.5, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0], 2.0, &opts());
    assert!(matches!(
        r,
        Err(CausalError::Metric { .. }) | Err(CausalError::StepUnderflow(_))
    ));
}

#[test]
fn sphere_conjugate_point_is_the_antipode() {
    let reference = jacobi_first_zero(1.0, 1e-4, 10.0).unwrap();
    assert!((reference - PI).abs() < 1e-9);
    let (x, th) = sphere_start();
    let s = first_conjugate_time(&WarpedMetric::unit_sphere(), x, th, 5.0, &opts())
        .unwrap()
        .unwrap();
    assert!((s - reference).abs() < 1e-6 * reference, "{s}");
}

#[test]
fn radius_two_sphere_scales_the_conjugate_parameter() {
    let m = WarpedMetric::RoundSphere {
        radius: 2.0,
        chart_radius: 1e3,
    };
    let reference = jacobi_first_zero(0.25, 1e-4, 10.0).unwrap();
    let x = [0.0, -0.5, 0.0, 0.0];
    let c = 4.0 / (1.0 + 0.25);
    let th = [1.0, 1.0 / c, 0.0, 0.0];
    let s = first_conjugate_time(&m, x, th, 8.0, &opts())
        .unwrap()
        .unwrap();
    assert!(
        (s - reference).abs() < 1e-6 * reference,
        "{s} vs {reference}"
    );
}

#[test]
fn minkowski_has_no_conjugate_points() {
    for th in [
        [1.0, 1.0, 0.0, 0.0],
        [1.0, 0.6, 0.0, 0.8],
        [2.0, 0.0, -2.0, 0.0],
    ] {
        assert_eq!(
            first_conjugate_time(
                &WarpedMetric::Minkowski,
                [0.3, 0.1, -0.2, 0.0],
                th,
                20.0,
                &opts()
            ),
            Ok(None)
        );
    }
}

#[test]
fn conjugate_time_is_monotone_in_the_horizon() {
    let (x, th) = sphere_start();
    let m = WarpedMetric::unit_sphere();
    let found: Vec<Option<f64>> = [1.0, 3.0, 3.14, 3.2, 4.0, 6.0]
        .iter()
        .map(|&h| first_conjugate_time(&m, x, th, h, &opts()).unwrap())
        .collect();
    assert_eq!(&found[..3], &[None, None, None]);
    let first = found[3].unwrap();
    for f in &found[3..] {
        assert!((f.unwrap() - first).abs() < 1e-9);
    }
}

#[test]
fn conjugate_time_requires_a_light_like_direction() {
    let r = first_conjugate_time(
        &WarpedMetric::unit_sphere(),
        [0.0; 4],
        [1.0, 0.1, 0.0, 0.0],
        4.0,
        &opts(),
    );
    assert!(matches!(r, Err(CausalError::NotLightlike(_))));
}

#[test]
fn fermi_chart_of_the_time_axis_is_the_identity() {
    let chart =
        FermiChart::new(WarpedMetric::Minkowski, [0.0; 4], standard_frame(), opts()).unwrap();
    for z in [
        [0.0, 0.0, 0.0, 0.0],
        [1.0, 0.5, -0.25, 0.75],
        [-0.7, 2.0, 0.1, -1.3],
    ] {
        let p = chart.map(z).unwrap();
        for m in 0..4 {
            assert!((p[m] - z[m]).abs() < 1e-12);
        }
    }
}

#[test]
fn fermi_chart_of_a_boosted_observer_is_the_boost() {
    let (v, o) = (0.6f64, [0.5, -1.0, 0.25, 2.0]);
    let g = 1.0 / (1.0 - v * v).sqrt();
    let frame = [
        [g, g * v, 0.0, 0.0],
        [g * v, g, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ];
    let chart = FermiChart::new(WarpedMetric::Minkowski, o, frame, opts()).unwrap();
    for z in [[1.0, 0.5, -0.25, 0.75], [-0.3, -1.0, 0.4, 0.0]] {
        let p = chart.map(z).unwrap();
        for m in 0..4 {
            let expected = o[m] + (0..4).map(|a| z[a] * frame[a][m]).sum::<f64>();
            assert!((p[m] - expected).abs() < 1e-11);
        }
    }
}

#[test]
fn transported_frames_stay_orthonormal_on_curved_metrics() {
    let a = 0.7f64;
    let cases: [(WarpedMetric, Point); 2] = [
        (WarpedMetric::unit_sphere(), [0.0, -0.5, 0.2, 0.0]),
        (
            WarpedMetric::PerturbedFlat { epsilon: 0.3 },
            [0.0, 0.4, -0.3, 0.5],
        ),
    ];
    for (m, o) in cases {
        let k = m.spatial(&o);
        // κ-orthonormal basis by Gram–Schmidt.
        let mut e = [[0.0f64; 3]; 3];
        let dot = |u: &[f64; 3], w: &[f64; 3]| -> f64 {
            (0..3)
                .map(|i| (0..3).map(|j| k[i][j] * u[i] * w[j]).sum::<f64>())
                .sum()
        };
        for i in 0..3 {
            let mut v = [0.0; 3];
            v[i] = 1.0;
            for j in 0..i {
                let p = dot(&v, &e[j]);
                (0..3).for_each(|c| v[c] -= p * e[j][c]);
            }
            let n = dot(&v, &v).sqrt();
            e[i] = v.map(|c| c / n);
        }
        let lift = |t: f64, s: &[f64; 3]| [t, s[0], s[1], s[2]];
        let add = |p: Point, q: Point| -> Point { std::array::from_fn(|i| p[i] + q[i]) };
        let z0 = add(
            lift(a.cosh(), &[0.0; 3]),
            lift(0.0, &e[0].map(|c| c * a.sinh())),
        );
        let z1 = add(
            lift(a.sinh(), &[0.0; 3]),
            lift(0.0, &e[0].map(|c| c * a.cosh())),
        );
        let frame = [z0, z1, lift(0.0, &e[1]), lift(0.0, &e[2])];
        let chart = FermiChart::new(m, o, frame, opts()).unwrap();
        for t in [-1.0, 0.5, 1.5, 2.5] {
            let gram = chart.frame_gram(t).unwrap();
            for (i, row) in gram.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let target = if i != j {
                        0.0
                    } else if i == 0 {
                        -1.0
                    } else {
                        1.0
                    };
                    assert!((v - target).abs() < 1e-8, "{t}: {i}{j} {v}");
                }
            }
        }
    }
}

#[test]
fn fermi_chart_reports_loss_of_injectivity() {
    let (o, th) = sphere_start();
    let frame = [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, th[1], 0.0, 0.0],
        [0.0, 0.0, th[1], 0.0],
        [0.0, 0.0, 0.0, th[1]],
    ];
    let chart = FermiChart::new(WarpedMetric::unit_sphere(), o, frame, opts()).unwrap();
    assert!(chart.volume_jacobian([0.0; 4]).unwrap() > 0.99);
    assert!(chart.map([0.0, 1.0, 0.0, 0.0]).is_ok());
    assert!(matches!(
        chart.map([0.0, PI, 0.0, 0.0]),
        Err(CausalError::ChartInvalid { .. })
    ));
}

fn ring(radius: f64) -> Vec<[f64; 3]> {
    vec![
        [radius, 0.0, 0.0],
        [-radius, 0.0, 0.0],
        [0.0, radius, 0.0],
        [0.0, -radius, 0.0],
        [0.0, 0.0, radius],
        [0.0, 0.0, -radius],
    ]
}

const FAN: FanResolution = FanResolution {
    polar: 24,
    azimuth: 48,
};

#[test]
fn minkowski_samples_lie_on_the_cone() {
    let region = ObserverRegion {
        centers: ring(1.0),
        radius: 0.15,
        t_range: [0.0, 3.0],
    };
    let obs = observation_set(&WarpedMetric::Minkowski, [0.0; 4], &region, FAN, &opts()).unwrap();
    assert!(!obs.samples.is_empty());
    let cell = FAN.cell_angle() * 1.2;
    for s in &obs.samples {
        let r = (s.point[1].powi(2) + s.point[2].powi(2) + s.point[3].powi(2)).sqrt();
        assert!((r - s.point[0]).abs() < cell);
        assert!(s.distance < region.radius);
    }
}

#[test]
fn region_outside_the_future_is_empty() {
    let region = ObserverRegion {
        centers: ring(1.0),
        radius: 0.2,
        t_range: [-3.0, -1.0],
    };
    let obs = observation_set(&WarpedMetric::Minkowski, [0.0; 4], &region, FAN, &opts()).unwrap();
    assert!(obs.samples.is_empty());
    assert!(earliest_observation_set(&obs).samples.is_empty());
}

#[test]
fn enlarging_the_region_enlarges_the_samples() {
    let q = [0.0, 0.1, -0.2, 0.05];
    let small = ObserverRegion {
        centers: ring(1.0),
        radius: 0.1,
        t_range: [0.5, 1.5],
    };
    let large = ObserverRegion {
        radius: 0.25,
        t_range: [0.0, 2.0],
        ..small.clone()
    };
    let a = observation_set(&WarpedMetric::Minkowski, q, &small, FAN, &opts()).unwrap();
    let b = observation_set(&WarpedMetric::Minkowski, q, &large, FAN, &opts()).unwrap();
    assert!(b.samples.len() > a.samples.len());
    for s in &a.samples {
        assert!(b.samples.iter().any(|t| t.worldline == s.worldline
            && t.direction == s.direction
            && t.point == s.point));
    }
}

#[test]
fn earliest_set_is_a_per_worldline_subset() {
    let q = [0.0, 0.2, 0.1, -0.1];
    let region = ObserverRegion {
        centers: ring(1.0),
        radius: 0.2,
        t_range: [0.0, 3.0],
    };
    let obs = observation_set(&WarpedMetric::unit_sphere(), q, &region, FAN, &opts()).unwrap();
    let e = earliest_observation_set(&obs);
    assert!(e.samples.iter().all(|s| obs.samples.contains(s)));
    for w in 0..region.centers.len() {
        let all: Vec<_> = obs.samples.iter().filter(|s| s.worldline == w).collect();
        let first: Vec<_> = e.samples.iter().filter(|s| s.worldline == w).collect();
        assert_eq!(first.len(), usize::from(!all.is_empty()));
        if let Some(f) = first.first() {
            assert!(all.iter().all(|s| s.point[0] >= f.point[0]));
        }
    }
}

#[test]
fn single_central_observer_sees_the_analytic_arrival() {
    let c = [0.0, 0.0, 0.0];
    let region = ObserverRegion {
        centers: vec![c],
        radius: 0.1,
        t_range: [-1.0, 2.0],
    };
    for q in [
        [-1.0, 0.6, 0.0, 0.0],
        [-0.5, 0.2, -0.3, 0.4],
        [0.0, -0.1, 0.1, 0.9],
    ] {
        let obs = earliest_observation_set(
            &observation_set(&WarpedMetric::Minkowski, q, &region, FAN, &opts()).unwrap(),
        );
        assert_eq!(obs.samples.len(), 1);
        let d = (q[1].powi(2) + q[2].powi(2) + q[3].powi(2)).sqrt();
        assert!((obs.samples[0].point[0] - minkowski_arrival(q, c)).abs() < FAN.cell_angle() * d);
    }
}

#[test]
fn distinct_sources_give_distinct_earliest_sets() {
    let region = ObserverRegion {
        centers: ring(1.5),
        radius: 0.3,
        t_range: [-1.0, 4.0],
    };
    let sources = [
        [-0.4, 0.0, 0.0, 0.0],
        [-0.4, 0.25, 0.0, 0.0],
        [-0.3, 0.0, 0.0, 0.0],
        [-0.4, 0.0, -0.2, 0.1],
    ];
    let sets: Vec<ObservationSet> = sources
        .iter()
        .map(|q| {
            earliest_observation_set(
                &observation_set(&WarpedMetric::Minkowski, *q, &region, FAN, &opts()).unwrap(),
            )
        })
        .collect();
    for i in 0..sets.len() {
        assert_eq!(sets[i].samples.len(), 6);
        for j in i + 1..sets.len() {
            assert!(hausdorff_distance(&sets[i], &sets[j]) > 0.0);
        }
    }
}

#[test]
fn observation_csv_has_one_row_per_sample() {
    let region = ObserverRegion {
        centers: vec![[1.0, 0.0, 0.0]],
        radius: 0.4,
        t_range: [0.0, 2.0],
    };
    let obs = observation_set(
        &WarpedMetric::Minkowski,
        [0.0; 4],
        &region,
        FanResolution {
            polar: 8,
            azimuth: 16,
        },
        &opts(),
    )
    .unwrap();
    assert!(!obs.samples.is_empty());
    let csv = obs.to_csv();
    assert_eq!(csv.lines().count(), obs.samples.len() + 1);
    assert!(csv.starts_with("worldline,direction,nx,ny,nz,arrival,t,x,y,z,distance,earliest"));
    assert_eq!(csv.lines().skip(1).filter(|l| l.ends_with(",1")).count(), 1);
}

#[test]
fn bad_regions_are_rejected() {
    let q = [0.0; 4];
    let bad = ObserverRegion {
        centers: ring(1.0),
        radius: 0.0,
        t_range: [0.0, 1.0],
    };
    assert!(matches!(
        observation_set(&WarpedMetric::Minkowski, q, &bad, FAN, &opts()),
        Err(CausalError::BadRegion(_))
    ));
    let outside = ObserverRegion {
        centers: vec![[5.0, 0.0, 0.0]],
        radius: 0.1,
        t_range: [0.0, 1.0],
    };
    let m = WarpedMetric::RoundSphere {
        radius: 1.0,
        chart_radius: 2.0,
    };
    assert!(matches!(
        observation_set(&m, q, &outside, FAN, &opts()),
        Err(CausalError::BadRegion(_))
    ));
}
