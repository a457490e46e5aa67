use rand_distr::{Distribution, StandardNormal};

use shotchart_core::geometry::nba_court;
use shotchart_core::mixture::n_params;
use shotchart_core::rng::stream;
use shotchart_core::{
    default_prior, fit_em, select_model, BoundedBox, Error, FitConfig, GaussianComponent,
    MixtureModel, Point, PriorSpec, SymMat2,
};

fn nba_box() -> BoundedBox {
    BoundedBox::from(&nba_court())
}

/// Draws from a mixture on the transformed plane with an independent stream.
fn draw(parts: &[(f64, Point, SymMat2)], n: usize, seed: u64) -> Vec<Point> {
    let comps = parts
        .iter()
        .map(|&(w, m, s)| GaussianComponent::new(w, m, s))
        .collect();
    let m = MixtureModel::new(comps, nba_box()).unwrap();
    let mut r = stream(seed, &[0xDA7A]);
    m.sample_transformed(n, &mut r)
}

fn moments(data: &[Point]) -> (Point, SymMat2) {
    let n = data.len() as f64;
    let mx = data.iter().map(|p| p.x).sum::<f64>() / n;
    let my = data.iter().map(|p| p.y).sum::<f64>() / n;
    let mut s = [0.0; 3];
    for p in data {
        let (dx, dy) = (p.x - mx, p.y - my);
        s[0] += dx * dx;
        s[1] += dx * dy;
        s[2] += dy * dy;
    }
    (Point::new(mx, my), SymMat2::new(s[0] / n, s[1] / n, s[2] / n))
}

#[test]
fn single_component_mle_is_sample_moments() {
    let mut r = stream(5, &[]);
    let data: Vec<Point> = (0..1000)
        .map(|_| {
            let (a, b): (f64, f64) = (StandardNormal.sample(&mut r), StandardNormal.sample(&mut r));
            Point::new(0.7 + 0.9 * a, -1.2 + 0.3 * a + 0.5 * b)
        })
        .collect();
    let fit = fit_em(&data, 1, None, nba_box(), &FitConfig::default()).unwrap();
    let (mean, cov) = moments(&data);
    let c = fit.model.components()[0];
    assert_eq!(fit.meta.n_iter, 1);
    assert!(fit.meta.converged);
    assert_eq!(c.weight, 1.0);
    assert!((c.mean.x - mean.x).abs() < 1e-12 && (c.mean.y - mean.y).abs() < 1e-12);
    for (a, b) in c.covariance.to_row_major().iter().zip(cov.to_row_major()) {
        assert!((a - b).abs() < 1e-12, "{a} {b}");
    }
}

#[test]
fn recovers_two_components() {
    let truth = [
        (0.3, Point::new(-3.0, 0.0), SymMat2::identity()),
        (0.7, Point::new(3.0, 0.0), SymMat2::identity()),
    ];
    let data = draw(&truth, 5000, 1);
    let prior = default_prior(&data, 2).unwrap();
    let fit = fit_em(&data, 2, Some(&prior), nba_box(), &FitConfig::default()).unwrap();
    let mut comps = fit.model.components().to_vec();
    comps.sort_by(|a, b| a.mean.x.total_cmp(&b.mean.x));
    for (c, t) in comps.iter().zip(&truth) {
        assert!((c.weight - t.0).abs() < 0.03);
        assert!((c.mean.x - t.1.x).abs() < 0.1 && (c.mean.y - t.1.y).abs() < 0.1);
    }
    assert_eq!(fit.meta.n_params, 11);
}

#[test]
fn parameter_counts() {
    assert_eq!(n_params(1), 5);
    assert_eq!(n_params(3), 17);
}

#[test]
fn bic_picks_three_separated_clusters() {
    let s = SymMat2::diagonal(0.25, 0.25);
    let truth = [
        (1.0 / 3.0, Point::new(-5.0, 0.0), s),
        (1.0 / 3.0, Point::new(5.0, 0.0), s),
        (1.0 / 3.0, Point::new(0.0, 5.0), s),
    ];
    let data = draw(&truth, 3000, 2);
    let cfg = FitConfig {
        seed: 2,
        ..FitConfig::default()
    };
    let fit = select_model(&data, 1..=6, nba_box(), &cfg).unwrap();
    assert_eq!(fit.model.n_components(), 3);
    let ll = fit.meta.loglik_at_map;
    let expected = 2.0 * ll - 17.0 * (3000f64).ln();
    assert!((fit.meta.bic - expected).abs() < 1e-9 * expected.abs());
}

#[test]
fn vanishing_prior_matches_mle() {
    let truth = [
        (0.4, Point::new(-2.0, 0.5), SymMat2::new(0.6, 0.1, 0.4)),
        (0.6, Point::new(2.0, -0.5), SymMat2::new(0.4, -0.1, 0.7)),
    ];
    let data = draw(&truth, 2000, 3);
    let prior = PriorSpec {
        mean: Point::new(0.0, 0.0),
        shrinkage: 1e-8,
        dof: 4.0,
        scale: SymMat2::diagonal(1e-8, 1e-8),
    };
    let cfg = FitConfig::default();
    let map = fit_em(&data, 2, Some(&prior), nba_box(), &cfg).unwrap();
    let mle = fit_em(&data, 2, None, nba_box(), &cfg).unwrap();
    let sorted = |m: &MixtureModel| {
        let mut c = m.components().to_vec();
        c.sort_by(|a, b| a.mean.x.total_cmp(&b.mean.x));
        c
    };
    for (a, b) in sorted(&map.model).iter().zip(sorted(&mle.model)) {
        assert!((a.mean.x - b.mean.x).abs() < 1e-4 && (a.mean.y - b.mean.y).abs() < 1e-4);
    }
}

#[test]
fn objective_traces_never_decrease() {
    let truth = [
        (0.5, Point::new(-1.0, 0.0), SymMat2::new(0.8, 0.3, 0.6)),
        (0.3, Point::new(1.5, 1.0), SymMat2::new(0.3, 0.0, 0.3)),
        (0.2, Point::new(0.0, -2.0), SymMat2::new(1.0, -0.2, 0.2)),
    ];
    let data = draw(&truth, 800, 4);
    for seed in 0..5 {
        let cfg = FitConfig {
            seed,
            n_restarts: 3,
            ..FitConfig::default()
        };
        for g in 1..=4 {
            let prior = default_prior(&data, g).unwrap();
            for p in [Some(&prior), None] {
                let Ok(fit) = fit_em(&data, g, p, nba_box(), &cfg) else {
                    continue;
                };
                for w in fit.meta.log_objective_trace.windows(2) {
                    assert!(w[1] >= w[0] - 1e-8, "g={g} seed={seed}: {} -> {}", w[0], w[1]);
                }
            }
        }
    }
}

#[test]
fn fits_are_deterministic() {
    let truth = [
        (0.5, Point::new(-1.0, 0.0), SymMat2::identity()),
        (0.5, Point::new(2.0, 0.0), SymMat2::identity()),
    ];
    let data = draw(&truth, 600, 6);
    let cfg = FitConfig {
        seed: 99,
        ..FitConfig::default()
    };
    let a = select_model(&data, 1..=3, nba_box(), &cfg).unwrap();
    let b = select_model(&data, 1..=3, nba_box(), &cfg).unwrap();
    assert_eq!(a.model, b.model);
    assert_eq!(a.meta, b.meta);
}

#[test]
fn preconditions() {
    let one = [Point::new(0.0, 0.0)];
    assert!(matches!(
        fit_em(&one, 2, None, nba_box(), &FitConfig::default()),
        Err(Error::InsufficientData(_))
    ));
    assert!(default_prior(&one, 1).is_err());
    let data = draw(&[(1.0, Point::new(0.0, 0.0), SymMat2::identity())], 100, 7);
    #[allow(clippy::reversed_empty_ranges)]
    let empty = 3..=2;
    assert!(matches!(
        select_model(&data, empty, nba_box(), &FitConfig::default()),
        Err(Error::Usage(_))
    ));
    assert!(matches!(
        select_model(&data, 1..=20, nba_box(), &FitConfig::default()),
        Err(Error::InsufficientData(_))
    ));
}
