//! Versioned JSON documents for mixtures, shot-chart models and courts.
//!
//! Floats are written in shortest round-trip form, so reading a document
//! back reproduces every parameter bit for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use shotchart_core::{
    BoundedBox, CourtSpec, FitMeta, GaussianComponent, MixtureModel, ShotChartModel,
};

use crate::error::{Error, Result};

pub const MIXTURE_FORMAT: &str = "shotchart-mixture";
pub const MODEL_FORMAT: &str = "shotchart-model";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureDocument {
    pub format: String,
    pub version: u32,
    #[serde(rename = "box")]
    pub bbox: BoundedBox,
    pub components: Vec<GaussianComponent>,
    /// Absent for hand-built models.
    pub fit: Option<FitMeta>,
}

impl MixtureDocument {
    pub fn new(model: &MixtureModel, fit: Option<&FitMeta>) -> Self {
        Self {
            format: MIXTURE_FORMAT.into(),
            version: VERSION,
            bbox: *model.bbox(),
            components: model.components().to_vec(),
            fit: fit.cloned(),
        }
    }

    pub fn into_model(self) -> Result<(MixtureModel, Option<FitMeta>)> {
        check_header(&self.format, self.version, MIXTURE_FORMAT)?;
        let m = MixtureModel::new(self.components, self.bbox).map_err(invalid)?;
        Ok((m, self.fit))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub format: String,
    pub version: u32,
    pub court: CourtSpec,
    pub tau_made: f64,
    pub tau_missed: f64,
    pub made: MixtureDocument,
    pub missed: MixtureDocument,
}

impl ModelDocument {
    pub fn new(model: &ShotChartModel) -> Self {
        Self {
            format: MODEL_FORMAT.into(),
            version: VERSION,
            court: *model.court(),
            tau_made: model.tau_made(),
            tau_missed: model.tau_missed(),
            made: MixtureDocument::new(model.made_model(), model.made_fit()),
            missed: MixtureDocument::new(model.missed_model(), model.missed_fit()),
        }
    }

    pub fn into_model(self) -> Result<ShotChartModel> {
        check_header(&self.format, self.version, MODEL_FORMAT)?;
        if (self.tau_made + self.tau_missed - 1.0).abs() > 1e-12 {
            return Err(Error::Data(format!(
                "tau_made + tau_missed = {}, not 1",
                self.tau_made + self.tau_missed
            )));
        }
        let (made, made_fit) = self.made.into_model()?;
        let (missed, missed_fit) = self.missed.into_model()?;
        Ok(ShotChartModel::new(made, missed, self.tau_made, self.court)
            .map_err(invalid)?
            .with_fit_meta(made_fit, missed_fit))
    }
}

fn check_header(format: &str, version: u32, expected: &str) -> Result<()> {
    if format != expected {
        return Err(Error::Data(format!("expected a `{expected}` document, found `{format}`")));
    }
    if version != VERSION {
        return Err(Error::Data(format!("unsupported {expected} version {version}")));
    }
    Ok(())
}

/// Invariant violations in a file are data errors, not usage errors.
fn invalid(e: shotchart_core::Error) -> Error {
    Error::Data(e.to_string())
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Data(format!("invalid {what}: {e}")))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn model_to_json(model: &ShotChartModel) -> String {
    to_json(&ModelDocument::new(model))
}

pub fn model_from_json(text: &str) -> Result<ShotChartModel> {
    from_json::<ModelDocument>(text, "model document")?.into_model()
}

pub fn mixture_to_json(model: &MixtureModel, fit: Option<&FitMeta>) -> String {
    to_json(&MixtureDocument::new(model, fit))
}

pub fn mixture_from_json(text: &str) -> Result<(MixtureModel, Option<FitMeta>)> {
    from_json::<MixtureDocument>(text, "mixture document")?.into_model()
}

pub fn court_from_json(text: &str) -> Result<CourtSpec> {
    from_json(text, "court spec")
}

pub fn court_to_json(court: &CourtSpec) -> String {
    to_json(court)
}

pub fn read_model(path: &Path) -> Result<ShotChartModel> {
    model_from_json(&read_text(path)?)
}

pub fn write_model(path: &Path, model: &ShotChartModel) -> Result<()> {
    write_text(path, &model_to_json(model))
}

pub fn read_court(path: &Path) -> Result<CourtSpec> {
    court_from_json(&read_text(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use shotchart_core::geometry::nba_court;
    use shotchart_core::Scenario;

    #[test]
    fn model_round_trip_is_exact() {
        for s in Scenario::ALL {
            let m = s.model();
            let text = model_to_json(&m);
            let back = model_from_json(&text).unwrap();
            assert_eq!(back, m);
            assert_eq!(model_to_json(&back), text);
        }
    }

    #[test]
    fn rejects_wrong_documents() {
        let m = Scenario::TwoCluster.model();
        let text = model_to_json(&m);
        let bad = text.replacen("\"version\": 1", "\"version\": 2", 1);
        assert!(matches!(model_from_json(&bad), Err(Error::Data(_))));
        let bad = text.replacen(MODEL_FORMAT, "other", 1);
        assert!(model_from_json(&bad).is_err());
        assert!(mixture_from_json(&text).is_err());
        let bad = text.replacen("\"tau_made\": 0.47", "\"tau_made\": 0.5", 1);
        assert!(model_from_json(&bad).is_err());
    }

    #[test]
    fn court_json_uses_field_names() {
        let text = court_to_json(&nba_court());
        for key in [
            "x_min",
            "x_max",
            "y_min",
            "y_max",
            "hoop_center",
            "arc_radius",
            "corner_line_x",
            "corner_extent_y",
        ] {
            assert!(text.contains(&format!("\"{key}\"")), "{key}");
        }
        assert_eq!(court_from_json(&text).unwrap(), nba_court());
        let extra = text.replacen('{', "{\"rim\": 1,", 1);
        assert!(court_from_json(&extra).is_err());
        let bad = text.replacen("\"arc_radius\": 23.75", "\"arc_radius\": 2.0", 1);
        assert!(court_from_json(&bad).is_err());
    }
}
