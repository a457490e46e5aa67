//! Built-in synthetic shot-chart models for demos and tests.
//!
//! Parameters are on the transformed plane of the NBA half-court.

use alloc::vec::Vec;

use crate::geometry::{nba_court, Point};
use crate::linalg::SymMat2;
use crate::math::{cos, sin};
use crate::mixture::{GaussianComponent, MixtureModel};
use crate::shotmodel::ShotChartModel;
use crate::transform::BoundedBox;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// Shots at the rim and from the top of the key.
    TwoCluster,
    /// Rim plus both corner threes.
    ThreeCluster,
    /// Components strung along the 3-point arc.
    Ring,
}

fn comp(weight: f64, mx: f64, my: f64, vx: f64, cxy: f64, vy: f64) -> GaussianComponent {
    GaussianComponent::new(weight, Point::new(mx, my), SymMat2::new(vx, cxy, vy))
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Scenario::TwoCluster, Scenario::ThreeCluster, Scenario::Ring];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::TwoCluster => "two-cluster",
            Scenario::ThreeCluster => "three-cluster",
            Scenario::Ring => "ring",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn model(self) -> ShotChartModel {
        let court = nba_court();
        let bbox = BoundedBox::from(&court);
        let (made, missed, tau) = match self {
            Scenario::TwoCluster => (
                alloc::vec![
                    comp(0.6, 0.0, -2.1, 0.12, 0.0, 0.25),
                    comp(0.4, 0.0, 0.45, 0.25, 0.0, 0.04),
                ],
                alloc::vec![
                    comp(0.45, 0.0, -1.9, 0.2, 0.0, 0.3),
                    comp(0.55, 0.0, 0.55, 0.35, 0.0, 0.05),
                ],
                0.47,
            ),
            Scenario::ThreeCluster => (
                alloc::vec![
                    comp(0.5, 0.0, -2.1, 0.1, 0.0, 0.2),
                    comp(0.25, -3.1, -2.5, 0.08, 0.0, 0.2),
                    comp(0.25, 3.1, -2.5, 0.08, 0.0, 0.2),
                ],
                alloc::vec![
                    comp(0.4, 0.0, -1.9, 0.15, 0.02, 0.25),
                    comp(0.3, -3.0, -2.4, 0.1, 0.0, 0.25),
                    comp(0.3, 3.0, -2.4, 0.1, 0.0, 0.25),
                ],
                0.45,
            ),
            Scenario::Ring => (
                ring(&bbox, &court.hoop_center, 25.0, 6, 0.0),
                ring(&bbox, &court.hoop_center, 26.5, 5, 0.1),
                0.38,
            ),
        };
        ShotChartModel::new(
            MixtureModel::new(made, bbox).expect("valid scenario"),
            MixtureModel::new(missed, bbox).expect("valid scenario"),
            tau,
            court,
        )
        .expect("valid scenario")
    }
}

/// Equal-weight components centered on a circle of `radius` feet around the
/// hoop, between 20° and 160°.
fn ring(bbox: &BoundedBox, hoop: &Point, radius: f64, k: usize, offset: f64) -> Vec<GaussianComponent> {
    let (a0, a1) = (20f64.to_radians(), 160f64.to_radians());
    (0..k)
        .map(|i| {
            let t = a0 + (a1 - a0) * (i as f64 + 0.5 + offset) / k as f64;
            let p = Point::new(hoop.x + radius * cos(t), hoop.y + radius * sin(t));
            let q = bbox.forward(p).expect("ring inside court");
            comp(1.0 / k as f64, q.x, q.y, 0.08, 0.0, 0.05)
        })
        .collect()
}
