//! Shot CSV ingestion.
//!
//! Required columns are `x`, `y` (feet, baseline at `y = y_min`) and `made`
//! (literal `0` or `1`); anything else in the header is ignored. Rows are
//! numbered from 1, not counting the header.

use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use shotchart_core::{CourtSpec, Point, ShotDataset, ShotRecord};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OnInvalid {
    SkipAndReport,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IngestPolicy {
    /// Rows at most this far outside a bound are moved this far inside it.
    /// Zero disables clamping.
    pub clamp_epsilon: f64,
    /// Reflect rows from the far half (`y > y_max`) onto the near half.
    pub mirror_full_court: bool,
    pub on_invalid: OnInvalid,
}

impl Default for IngestPolicy {
    fn default() -> Self {
        Self {
            clamp_epsilon: 1e-6,
            mirror_full_court: false,
            on_invalid: OnInvalid::SkipAndReport,
        }
    }
}

impl IngestPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.clamp_epsilon >= 0.0 && self.clamp_epsilon.is_finite()) {
            return Err(Error::Usage(format!(
                "clamp epsilon {} must be a finite non-negative number",
                self.clamp_epsilon
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    ParseX,
    ParseY,
    BadMade,
    NonFinite,
    OutsideCourt,
    /// Accepted after moving onto the inside of a bound.
    Clamped,
}

impl Reason {
    pub fn code(self) -> &'static str {
        match self {
            Reason::ParseX => "parse-x",
            Reason::ParseY => "parse-y",
            Reason::BadMade => "bad-made",
            Reason::NonFinite => "non-finite",
            Reason::OutsideCourt => "outside-court",
            Reason::Clamped => "clamped",
        }
    }

    /// Whether the row was dropped.
    pub fn is_skip(self) -> bool {
        !matches!(self, Reason::Clamped)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Diagnostic {
    pub row: usize,
    pub reason: Reason,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row={} reason={}", self.row, self.reason.code())
    }
}

/// Reflection through the center line: `(x, y) → (-x, 2·y_max - y)`.
/// With the hoop-side origin at `x = 0` this maps the far half of a full
/// court onto the near half. It is its own inverse.
pub fn mirror(court: &CourtSpec, p: Point) -> Point {
    Point::new(-p.x, 2.0 * court.y_max - p.y)
}

fn clamp_axis(v: f64, lo: f64, hi: f64, eps: f64) -> Option<f64> {
    if eps > 0.0 && v <= lo && v >= lo - eps {
        Some(lo + eps)
    } else if eps > 0.0 && v >= hi && v <= hi + eps {
        Some(hi - eps)
    } else {
        None
    }
}

/// Maps a raw coordinate pair to an accepted court point, or the reason it
/// is rejected. The flag reports whether clamping was applied.
pub fn normalize(court: &CourtSpec, policy: &IngestPolicy, p: Point) -> Result<(Point, bool), Reason> {
    if !p.is_finite() {
        return Err(Reason::NonFinite);
    }
    let mut p = p;
    if policy.mirror_full_court && p.y > court.y_max {
        p = mirror(court, p);
    }
    if court.contains(p) {
        return Ok((p, false));
    }
    let eps = policy.clamp_epsilon;
    let x = if court.x_min < p.x && p.x < court.x_max {
        Some(p.x)
    } else {
        clamp_axis(p.x, court.x_min, court.x_max, eps)
    };
    let y = if court.y_min < p.y && p.y < court.y_max {
        Some(p.y)
    } else {
        clamp_axis(p.y, court.y_min, court.y_max, eps)
    };
    match (x, y) {
        (Some(x), Some(y)) if court.contains(Point::new(x, y)) => Ok((Point::new(x, y), true)),
        _ => Err(Reason::OutsideCourt),
    }
}

pub fn read_shots(
    path: &Path,
    court: &CourtSpec,
    policy: &IngestPolicy,
) -> Result<(ShotDataset, Vec<Diagnostic>)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    read_shots_from(file, court, policy, label)
}

pub fn read_shots_from<R: Read>(
    reader: R,
    court: &CourtSpec,
    policy: &IngestPolicy,
    label: impl Into<String>,
) -> Result<(ShotDataset, Vec<Diagnostic>)> {
    policy.validate()?;
    court.validate()?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Data(format!("cannot read CSV header: {e}")))?
        .clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Data(format!("missing required column `{name}`")))
    };
    let (cx, cy, cm) = (column("x")?, column("y")?, column("made")?);

    let mut records = Vec::new();
    let mut diagnostics = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| Error::Data(format!("row {row}: {e}")))?;
        let field = |c: usize| rec.get(c).unwrap_or("");
        let parsed = (|| {
            let x: f64 = field(cx).parse().map_err(|_| Reason::ParseX)?;
            let y: f64 = field(cy).parse().map_err(|_| Reason::ParseY)?;
            let made = match field(cm) {
                "0" => false,
                "1" => true,
                _ => return Err(Reason::BadMade),
            };
            let (p, clamped) = normalize(court, policy, Point::new(x, y))?;
            Ok((ShotRecord::new(p.x, p.y, made), clamped))
        })();
        match parsed {
            Ok((r, clamped)) => {
                records.push(r);
                if clamped {
                    diagnostics.push(Diagnostic {
                        row,
                        reason: Reason::Clamped,
                    });
                }
            }
            Err(reason) => match policy.on_invalid {
                OnInvalid::Fail => {
                    return Err(Error::Data(format!(
                        "row {row}: {} ({:?})",
                        reason.code(),
                        rec.iter().collect::<Vec<_>>()
                    )))
                }
                OnInvalid::SkipAndReport => diagnostics.push(Diagnostic { row, reason }),
            },
        }
    }
    if records.is_empty() {
        return Err(Error::Data("no valid shots in input".into()));
    }
    let data = ShotDataset::new(records, *court, label)?;
    Ok((data, diagnostics))
}
