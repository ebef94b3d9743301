//! Run configuration files (JSON or TOML). Every key is optional; command-line
//! flags take precedence over the file, and the file over built-in defaults.

use std::path::{Path, PathBuf};

use ifm_core::LikelihoodMode;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub geometry: GeometrySection,
    #[serde(default)]
    pub screen: ScreenSection,
    #[serde(default)]
    pub classifier: ClassifierSection,
    #[serde(default)]
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub momentum: MomentumSection,
    #[serde(default)]
    pub optimal: OptimalSection,
    #[serde(default)]
    pub zeno: ZenoSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub w: Option<f64>,
    pub b: Option<f64>,
    pub l2: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScreenSection {
    /// `[lo, hi]` in wavelengths.
    pub window: Option<[f64; 2]>,
    pub bin_width: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifierSection {
    #[serde(rename = "T")]
    pub threshold: Option<f64>,
    pub prior: Option<f64>,
    pub mode: Option<LikelihoodMode>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub n_bomb: Option<u64>,
    pub n_empty: Option<u64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentumSection {
    /// `[lo, hi]` in units of k₀.
    pub window: Option<[f64; 2]>,
    pub bin_width: Option<f64>,
    /// Kick threshold in units of k₀.
    pub kc: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimalSection {
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZenoSection {
    pub w: Option<f64>,
    pub b: Option<f64>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub grid_points: Option<usize>,
    pub total_distance: Option<f64>,
    pub n_values: Option<Vec<usize>>,
    pub edge_width: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub pattern: Option<PathBuf>,
    pub posterior: Option<PathBuf>,
    pub efficiency: Option<PathBuf>,
    pub optimal: Option<PathBuf>,
    pub momentum: Option<PathBuf>,
    pub kicks: Option<PathBuf>,
    pub classify: Option<PathBuf>,
    pub trials: Option<PathBuf>,
    pub zeno: Option<PathBuf>,
    pub survival: Option<PathBuf>,
}

impl RunConfig {
    /// Parses `text` as TOML or JSON according to `path`'s extension; other
    /// extensions try JSON first, then TOML.
    pub fn parse(path: &Path, text: &str) -> Result<Self, CliError> {
        let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
        let json = |t: &str| serde_json::from_str::<Self>(t).map_err(|e| e.to_string());
        let toml = |t: &str| toml::from_str::<Self>(t).map_err(|e| e.to_string());
        let parsed = match ext.as_deref() {
            Some("json") => json(text),
            Some("toml") => toml(text),
            _ => json(text).or_else(|_| toml(text)),
        };
        parsed.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(path, &text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_and_json_agree() {
        let t = RunConfig::parse(
            Path::new("a.toml"),
            "[geometry]\nw = 800.0\n[classifier]\nT = 0.95\nmode = \"unit_normalized\"\n[zeno]\nn_values = [1, 2]\n",
        )
        .unwrap();
        let j = RunConfig::parse(
            Path::new("a.json"),
            r#"{"geometry": {"w": 800.0}, "classifier": {"T": 0.95, "mode": "unit_normalized"}, "zeno": {"n_values": [1, 2]}}"#,
        )
        .unwrap();
        assert_eq!(t, j);
        assert_eq!(t.geometry.w, Some(800.0));
        assert_eq!(t.classifier.mode, Some(LikelihoodMode::UnitNormalized));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::parse(Path::new("a.toml"), "[geometry]\nwidth = 3.0\n").is_err());
        assert!(RunConfig::parse(Path::new("a.json"), r#"{"colour": 1}"#).is_err());
        assert!(RunConfig::parse(Path::new("a.cfg"), "not a config").is_err());
    }
}
