//! k-means++ seeding followed by a few Lloyd sweeps, used to initialize EM.

use alloc::vec;
use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::geometry::Point;

const LLOYD_SWEEPS: usize = 20;

fn sq_dist(a: Point, b: Point) -> f64 {
    let (dx, dy) = (a.x - b.x, a.y - b.y);
    dx * dx + dy * dy
}

fn nearest(p: Point, centers: &[Point]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (k, c) in centers.iter().enumerate() {
        let d = sq_dist(p, *c);
        if d < best.1 {
            best = (k, d);
        }
    }
    best
}

/// Chooses `k` centers: the first uniformly, each next one with probability
/// proportional to the squared distance to the nearest chosen center.
pub(crate) fn plus_plus<R: Rng + ?Sized>(data: &[Point], k: usize, rng: &mut R) -> Vec<Point> {
    let mut centers = Vec::with_capacity(k);
    if k == 0 || data.is_empty() {
        return centers;
    }
    centers.push(data[rng.random_range(0..data.len())]);
    let mut d2: Vec<f64> = data.iter().map(|p| sq_dist(*p, centers[0])).collect();
    while centers.len() < k {
        let next = match WeightedIndex::new(&d2) {
            Ok(w) => w.sample(rng),
            // Every point coincides with a center.
            Err(_) => rng.random_range(0..data.len()),
        };
        let c = data[next];
        centers.push(c);
        for (d, p) in d2.iter_mut().zip(data) {
            *d = d.min(sq_dist(*p, c));
        }
    }
    centers
}

/// Hard labels after Lloyd refinement of k-means++ centers.
pub(crate) fn init_labels<R: Rng + ?Sized>(data: &[Point], k: usize, rng: &mut R) -> Vec<usize> {
    let mut centers = plus_plus(data, k, rng);
    let mut labels = vec![usize::MAX; data.len()];
    for _ in 0..LLOYD_SWEEPS {
        let mut changed = false;
        for (l, p) in labels.iter_mut().zip(data) {
            let (j, _) = nearest(*p, &centers);
            if *l != j {
                *l = j;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let mut sums = vec![(0.0, 0.0, 0usize); k];
        for (l, p) in labels.iter().zip(data) {
            let s = &mut sums[*l];
            s.0 += p.x;
            s.1 += p.y;
            s.2 += 1;
        }
        for (c, s) in centers.iter_mut().zip(&sums) {
            // Empty clusters keep their previous center.
            if s.2 > 0 {
                *c = Point::new(s.0 / s.2 as f64, s.1 / s.2 as f64);
            }
        }
    }
    labels
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn separates_obvious_clusters() {
        let mut data = Vec::new();
        for i in 0..50 {
            let t = i as f64 * 0.01;
            data.push(Point::new(-10.0 + t, t));
            data.push(Point::new(10.0 - t, -t));
        }
        let mut r = rng::stream(3, &[]);
        let labels = init_labels(&data, 2, &mut r);
        for pair in labels.chunks(2) {
            assert_ne!(pair[0], pair[1]);
        }
        assert!(labels.iter().step_by(2).all(|&l| l == labels[0]));
    }

    #[test]
    fn duplicate_points_do_not_panic() {
        let data = vec![Point::new(1.0, 1.0); 10];
        let mut r = rng::stream(0, &[]);
        let c = plus_plus(&data, 3, &mut r);
        assert_eq!(c.len(), 3);
        let labels = init_labels(&data, 3, &mut r);
        assert_eq!(labels.len(), 10);
    }
}
