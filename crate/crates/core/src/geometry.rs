//! Half-court geometry: bounds, hoop, the 3-point boundary and court markings.
//!
//! All lengths are in feet. The default frame puts the baseline at `y = 0`,
//! the half-court line at `y = 47` and the sidelines at `x = ±25`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::math::{acos, cos, hypot, sin, sqrt};
use crate::{Error, Result};

/// A point in the plane, either court feet or transformed coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, o: Point) -> f64 {
        hypot(self.x - o.x, self.y - o.y)
    }

}

impl core::ops::Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl From<[f64; 2]> for Point {
    fn from(p: [f64; 2]) -> Self {
        Point::new(p[0], p[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

/// Point value of a field-goal attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ShotValue {
    Two = 2,
    Three = 3,
}

impl ShotValue {
    pub fn points(self) -> f64 {
        self as u8 as f64
    }
}

/// Bounded half-court geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCourt", into = "RawCourt")]
pub struct CourtSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub hoop_center: Point,
    /// Radius of the 3-point arc around `hoop_center`.
    pub arc_radius: f64,
    /// `|x|` of the straight corner-3 lines.
    pub corner_line_x: f64,
    /// Distance from the baseline over which the corner lines apply.
    pub corner_extent_y: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCourt {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    hoop_center: Point,
    arc_radius: f64,
    corner_line_x: f64,
    corner_extent_y: f64,
}

impl TryFrom<RawCourt> for CourtSpec {
    type Error = Error;

    fn try_from(r: RawCourt) -> Result<Self> {
        let c = CourtSpec {
            x_min: r.x_min,
            x_max: r.x_max,
            y_min: r.y_min,
            y_max: r.y_max,
            hoop_center: r.hoop_center,
            arc_radius: r.arc_radius,
            corner_line_x: r.corner_line_x,
            corner_extent_y: r.corner_extent_y,
        };
        c.validate()?;
        Ok(c)
    }
}

impl From<CourtSpec> for RawCourt {
    fn from(c: CourtSpec) -> Self {
        RawCourt {
            x_min: c.x_min,
            x_max: c.x_max,
            y_min: c.y_min,
            y_max: c.y_max,
            hoop_center: c.hoop_center,
            arc_radius: c.arc_radius,
            corner_line_x: c.corner_line_x,
            corner_extent_y: c.corner_extent_y,
        }
    }
}

// Standard NBA markings that the court spec does not parameterize.
const LANE_HALF_WIDTH: f64 = 8.0;
const FREE_THROW_LINE_Y: f64 = 19.0;
const FREE_THROW_CIRCLE_RADIUS: f64 = 6.0;
const HOOP_RADIUS: f64 = 0.75;
const ARC_SEGMENTS: usize = 96;
const CIRCLE_SEGMENTS: usize = 64;

/// NBA half-court: 50 ft wide, 47 ft deep, rim center 5.25 ft off the
/// baseline, 23.75 ft arc and 22 ft corner lines meeting 14 ft up.
pub fn nba_court() -> CourtSpec {
    CourtSpec {
        x_min: -25.0,
        x_max: 25.0,
        y_min: 0.0,
        y_max: 47.0,
        hoop_center: Point::new(0.0, 5.25),
        arc_radius: 23.75,
        corner_line_x: 22.0,
        corner_extent_y: 14.0,
    }
}

impl Default for CourtSpec {
    fn default() -> Self {
        nba_court()
    }
}

/// Which marking a polyline draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineKind {
    Boundary,
    ThreePointArc,
    CornerLine,
    Paint,
    FreeThrowCircle,
    Hoop,
}

impl LineKind {
    pub fn name(self) -> &'static str {
        match self {
            LineKind::Boundary => "boundary",
            LineKind::ThreePointArc => "three-point-arc",
            LineKind::CornerLine => "corner-line",
            LineKind::Paint => "paint",
            LineKind::FreeThrowCircle => "free-throw-circle",
            LineKind::Hoop => "hoop",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub kind: LineKind,
    pub points: Vec<Point>,
}

impl CourtSpec {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.x_min,
            self.x_max,
            self.y_min,
            self.y_max,
            self.hoop_center.x,
            self.hoop_center.y,
            self.arc_radius,
            self.corner_line_x,
            self.corner_extent_y,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::usage("court fields must be finite"));
        }
        if !(self.x_min < self.x_max && self.y_min < self.y_max) {
            return Err(Error::usage("court bounds must satisfy min < max"));
        }
        if !self.contains(self.hoop_center) {
            return Err(Error::usage("hoop center must lie strictly inside the court"));
        }
        if !(0.0 < self.corner_line_x && self.corner_line_x < self.x_max) {
            return Err(Error::usage("corner_line_x must lie in (0, x_max)"));
        }
        if !(0.0 < self.corner_extent_y && self.corner_extent_y < self.y_max) {
            return Err(Error::usage("corner_extent_y must lie in (0, y_max)"));
        }
        if !(self.arc_radius > self.corner_line_x) {
            return Err(Error::usage("arc_radius must exceed corner_line_x"));
        }
        Ok(())
    }

    /// Strict containment in the open box.
    pub fn contains(&self, p: Point) -> bool {
        self.x_min < p.x && p.x < self.x_max && self.y_min < p.y && p.y < self.y_max
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn depth(&self) -> f64 {
        self.y_max - self.y_min
    }

    /// 2 or 3 points. Points exactly on the arc or corner line count as 3.
    pub fn shot_value(&self, p: Point) -> Result<ShotValue> {
        if !self.contains(p) {
            return Err(Error::domain(format!(
                "point ({}, {}) is outside the court",
                p.x, p.y
            )));
        }
        let corner = p.x.abs() >= self.corner_line_x && p.y <= self.corner_extent_y;
        let arc = p.y > self.corner_extent_y && p.distance(self.hoop_center) >= self.arc_radius;
        Ok(if corner || arc {
            ShotValue::Three
        } else {
            ShotValue::Two
        })
    }

    /// Court markings as polylines in the closed box, in a fixed order:
    /// boundary, arc, left and right corner lines, paint, free-throw circle, hoop.
    pub fn court_lines(&self) -> Vec<Polyline> {
        let h = self.hoop_center;
        let r = self.arc_radius;
        let mut lines = Vec::with_capacity(7);

        lines.push(Polyline {
            kind: LineKind::Boundary,
            points: alloc::vec![
                Point::new(self.x_min, self.y_min),
                Point::new(self.x_max, self.y_min),
                Point::new(self.x_max, self.y_max),
                Point::new(self.x_min, self.y_max),
                Point::new(self.x_min, self.y_min),
            ],
        });

        // The arc runs between its intersections with the corner lines.
        let right = ((self.corner_line_x - h.x) / r).clamp(-1.0, 1.0);
        let left = ((-self.corner_line_x - h.x) / r).clamp(-1.0, 1.0);
        let (t0, t1) = (acos(right), acos(left));
        let arc: Vec<Point> = (0..=ARC_SEGMENTS)
            .map(|i| {
                let t = t0 + (t1 - t0) * i as f64 / ARC_SEGMENTS as f64;
                Point::new(h.x + r * cos(t), h.y + r * sin(t))
            })
            .filter(|p| self.in_closed_box(*p))
            .collect();
        lines.push(Polyline {
            kind: LineKind::ThreePointArc,
            points: arc,
        });

        for x in [-self.corner_line_x, self.corner_line_x] {
            let dx = x - h.x;
            let top = if dx.abs() < r {
                h.y + sqrt(r * r - dx * dx)
            } else {
                self.corner_extent_y
            };
            lines.push(Polyline {
                kind: LineKind::CornerLine,
                points: alloc::vec![
                    self.clamp_closed(Point::new(x, self.y_min)),
                    self.clamp_closed(Point::new(x, top)),
                ],
            });
        }

        let ft_y = self.y_min + FREE_THROW_LINE_Y;
        lines.push(Polyline {
            kind: LineKind::Paint,
            points: [
                Point::new(h.x - LANE_HALF_WIDTH, self.y_min),
                Point::new(h.x - LANE_HALF_WIDTH, ft_y),
                Point::new(h.x + LANE_HALF_WIDTH, ft_y),
                Point::new(h.x + LANE_HALF_WIDTH, self.y_min),
            ]
            .into_iter()
            .map(|p| self.clamp_closed(p))
            .collect(),
        });

        lines.push(Polyline {
            kind: LineKind::FreeThrowCircle,
            points: self.circle(Point::new(h.x, ft_y), FREE_THROW_CIRCLE_RADIUS),
        });
        lines.push(Polyline {
            kind: LineKind::Hoop,
            points: self.circle(h, HOOP_RADIUS),
        });
        lines
    }

    fn circle(&self, c: Point, r: f64) -> Vec<Point> {
        (0..=CIRCLE_SEGMENTS)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / CIRCLE_SEGMENTS as f64;
                Point::new(c.x + r * cos(t), c.y + r * sin(t))
            })
            .filter(|p| self.in_closed_box(*p))
            .collect()
    }

    fn in_closed_box(&self, p: Point) -> bool {
        self.x_min <= p.x && p.x <= self.x_max && self.y_min <= p.y && p.y <= self.y_max
    }

    fn clamp_closed(&self, p: Point) -> Point {
        Point::new(
            p.x.clamp(self.x_min, self.x_max),
            p.y.clamp(self.y_min, self.y_max),
        )
    }
}
