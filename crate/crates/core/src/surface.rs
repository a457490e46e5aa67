//! Model surfaces evaluated at the cell centers of a regular court grid.

use alloc::format;
use alloc::vec::Vec;

use crate::exec::{Executor, Serial};
use crate::geometry::{CourtSpec, Point};
use crate::shotmodel::{Outcome, ShotChartModel};
use crate::transform::BoundedBox;
use crate::{Error, Result};

/// `nx × ny` cells covering the court box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    bbox: BoundedBox,
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, court: &CourtSpec) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::usage(format!("grid {nx}x{ny} needs at least 2 cells per axis")));
        }
        Ok(Self {
            nx,
            ny,
            bbox: BoundedBox::from(court),
        })
    }

    pub fn bbox(&self) -> &BoundedBox {
        &self.bbox
    }

    pub fn cell_width(&self) -> f64 {
        (self.bbox.hi().x - self.bbox.lo().x) / self.nx as f64
    }

    pub fn cell_height(&self) -> f64 {
        (self.bbox.hi().y - self.bbox.lo().y) / self.ny as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.cell_width() * self.cell_height()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Center of column `i`, row `j`.
    pub fn cell_center(&self, i: usize, j: usize) -> Point {
        let lo = self.bbox.lo();
        Point::new(
            lo.x + (i as f64 + 0.5) * self.cell_width(),
            lo.y + (j as f64 + 0.5) * self.cell_height(),
        )
    }

    /// Cell centers row by row: `y` outer, `x` inner.
    pub fn centers(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| self.cell_center(i, j)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceKind {
    /// Missed-shot density `f(x, y | C = 0)`.
    Density0,
    /// Made-shot density `f(x, y | C = 1)`.
    Density1,
    Probability,
    Eps,
}

impl SurfaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SurfaceKind::Density0 => "density0",
            SurfaceKind::Density1 => "density1",
            SurfaceKind::Probability => "probability",
            SurfaceKind::Eps => "eps",
        }
    }

    /// Range the values are guaranteed to fall in, when bounded.
    pub fn value_range(self) -> Option<(f64, f64)> {
        match self {
            SurfaceKind::Probability => Some((0.0, 1.0)),
            SurfaceKind::Eps => Some((0.0, 3.0)),
            _ => None,
        }
    }
}

/// Row-major values (`values[j * nx + i]`).
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    pub grid: GridSpec,
    pub values: Vec<f64>,
    pub kind: SurfaceKind,
}

impl Surface {
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.nx + i]
    }

    /// Midpoint-rule integral over the court.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_area()
    }
}

fn evaluate_point(model: &ShotChartModel, p: Point, kind: SurfaceKind) -> Result<f64> {
    match kind {
        SurfaceKind::Density0 => model.class_density(p, Outcome::Missed),
        SurfaceKind::Density1 => model.class_density(p, Outcome::Made),
        SurfaceKind::Probability => model.success_probability(p),
        SurfaceKind::Eps => model.expected_points(p),
    }
}

pub fn evaluate_surface(model: &ShotChartModel, grid: &GridSpec, kind: SurfaceKind) -> Result<Surface> {
    evaluate_surface_with(&Serial, model, grid, kind)
}

/// Evaluates one row per job; values do not depend on the executor.
pub fn evaluate_surface_with<E: Executor>(
    exec: &E,
    model: &ShotChartModel,
    grid: &GridSpec,
    kind: SurfaceKind,
) -> Result<Surface> {
    if *grid.bbox() != BoundedBox::from(model.court()) {
        return Err(Error::usage("grid does not cover the model's court"));
    }
    let rows = exec.map_indexed(grid.ny, |j| {
        (0..grid.nx)
            .map(|i| evaluate_point(model, grid.cell_center(i, j), kind))
            .collect::<Result<Vec<f64>>>()
    });
    let mut values = Vec::with_capacity(grid.len());
    for row in rows {
        values.extend(row?);
    }
    Ok(Surface {
        grid: *grid,
        values,
        kind,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::nba_court;
    use crate::scenarios::Scenario;

    #[test]
    fn grid_centers_inside_and_ordered() {
        let court = nba_court();
        let g = GridSpec::new(4, 3, &court).unwrap();
        let c: Vec<Point> = g.centers().collect();
        assert_eq!(c.len(), 12);
        assert!(c.iter().all(|p| court.contains(*p)));
        assert_eq!(c[0], Point::new(-25.0 + 6.25, 47.0 / 6.0));
        assert!(c[1].x > c[0].x && c[1].y == c[0].y);
        assert!(c[4].y > c[3].y);
        assert!(GridSpec::new(1, 5, &court).is_err());
    }

    #[test]
    fn small_probability_and_eps_surfaces() {
        let m = Scenario::TwoCluster.model();
        let g = GridSpec::new(2, 2, m.court()).unwrap();
        let pr = evaluate_surface(&m, &g, SurfaceKind::Probability).unwrap();
        assert_eq!(pr.values.len(), 4);
        assert!(pr.values.iter().all(|v| (0.0..=1.0).contains(v)));
        let eps = evaluate_surface(&m, &g, SurfaceKind::Eps).unwrap();
        for (k, p) in g.centers().enumerate() {
            let v = m.court().shot_value(p).unwrap().points();
            assert!((eps.values[k] - v * pr.values[k]).abs() <= 1e-12);
        }
    }

    #[test]
    fn foreign_grid_rejected() {
        let m = Scenario::TwoCluster.model();
        let mut other = nba_court();
        other.y_max = 40.0;
        let g = GridSpec::new(3, 3, &other).unwrap();
        assert!(evaluate_surface(&m, &g, SurfaceKind::Density1).is_err());
    }
}
