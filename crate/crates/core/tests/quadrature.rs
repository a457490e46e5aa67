use shotchart_core::geometry::nba_court;
use shotchart_core::{
    evaluate_surface, BoundedBox, GaussianComponent, GridSpec, MixtureModel, Outcome, Point,
    Scenario, ShotChartModel, SurfaceKind, SymMat2,
};

fn nba_box() -> BoundedBox {
    BoundedBox::from(&nba_court())
}

/// Midpoint rule over an `n × n` grid of the court box.
fn integrate(n: usize, f: impl Fn(Point) -> f64) -> f64 {
    let grid = GridSpec::new(n, n, &nba_court()).unwrap();
    grid.centers().map(f).sum::<f64>() * grid.cell_area()
}

fn single(mean: Point, cov: SymMat2) -> MixtureModel {
    MixtureModel::new(vec![GaussianComponent::new(1.0, mean, cov)], nba_box()).unwrap()
}

#[test]
fn scenario_densities_integrate_to_one() {
    for s in Scenario::ALL {
        let model = s.model();
        for outcome in [Outcome::Made, Outcome::Missed] {
            let mass = integrate(500, |p| model.class_density(p, outcome).unwrap());
            assert!((mass - 1.0).abs() < 1e-3, "{} {}: {mass}", s.name(), outcome.name());
        }
    }
}

#[test]
fn density_surface_integrates_to_one() {
    let model = Scenario::ThreeCluster.model();
    let grid = GridSpec::new(500, 500, model.court()).unwrap();
    let surface = evaluate_surface(&model, &grid, SurfaceKind::Density1).unwrap();
    assert!((surface.integral() - 1.0).abs() < 1e-3);
    assert!(surface.values.iter().all(|v| *v >= 0.0));
}

#[test]
fn small_surfaces_respect_ranges() {
    let model = Scenario::TwoCluster.model();
    let grid = GridSpec::new(2, 2, model.court()).unwrap();
    let prob = evaluate_surface(&model, &grid, SurfaceKind::Probability).unwrap();
    assert_eq!(prob.values.len(), 4);
    assert!(prob.values.iter().all(|v| (0.0..=1.0).contains(v)));

    let grid = GridSpec::new(37, 29, model.court()).unwrap();
    let prob = evaluate_surface(&model, &grid, SurfaceKind::Probability).unwrap();
    let eps = evaluate_surface(&model, &grid, SurfaceKind::Eps).unwrap();
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let c = grid.cell_center(i, j);
            let v = model.court().shot_value(c).unwrap().points();
            assert!((eps.get(i, j) - v * prob.get(i, j)).abs() <= 1e-12);
            assert!((0.0..=3.0).contains(&eps.get(i, j)));
        }
    }
}

#[test]
fn hdr_half_level_covers_half_the_mass() {
    let m = single(Point::new(0.2, -1.0), SymMat2::new(0.3, 0.05, 0.4));
    let model = ShotChartModel::new(m.clone(), m, 0.5, nba_court()).unwrap();
    let t = model.hdr_thresholds(Outcome::Made, &[0.5], 100_000, 3).unwrap()[0];
    let mass = integrate(1000, |p| {
        let f = model.class_density(p, Outcome::Made).unwrap();
        if f >= t {
            f
        } else {
            0.0
        }
    });
    assert!((mass - 0.5).abs() < 0.02, "{mass}");
}

#[test]
fn hdr_thresholds_are_monotone() {
    let model = Scenario::Ring.model();
    let levels = [0.25, 0.5, 0.75, 0.95, 1.0];
    let t = model.hdr_thresholds(Outcome::Missed, &levels, 20_000, 1).unwrap();
    assert!(t.windows(2).all(|w| w[0] >= w[1]));
    assert!(model.hdr_thresholds(Outcome::Made, &[0.5, 0.25], 20_000, 1).is_err());
    assert!(model.hdr_thresholds(Outcome::Made, &[0.0], 20_000, 1).is_err());
    assert!(model.hdr_thresholds(Outcome::Made, &[0.5], 999, 1).is_err());
}

#[test]
fn sample_mean_obeys_clt_bound() {
    let (mean, cov) = (Point::new(0.4, -0.8), SymMat2::new(0.5, 0.1, 0.3));
    let m = single(mean, cov);
    let n = 200_000;
    let pts = m.sample(n, 17);
    let b = nba_box();
    let (mut sx, mut sy) = (0.0, 0.0);
    for p in &pts {
        assert!(b.contains(*p));
        let q = b.forward(*p).unwrap();
        sx += q.x;
        sy += q.y;
    }
    let nf = n as f64;
    assert!((sx / nf - mean.x).abs() < 3.0 * (cov.xx / nf).sqrt());
    assert!((sy / nf - mean.y).abs() < 3.0 * (cov.yy / nf).sqrt());
}
