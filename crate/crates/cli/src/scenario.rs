//! Scenario files: plain-text `key = value` pairs, one per line.
//!
//! Blank lines and lines starting with `#` are ignored. Unknown and
//! duplicate keys are rejected, and every key except `filter_file` is
//! required. A relative `filter_file` path resolves against the scenario
//! file's directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use morphdet_core::{
    design_receiver_filter, DetectorKind, ImpulseResponse, NoiseParams, QuantConfig, Scenario,
    StructuringElement,
};

const KEYS: &[&str] = &[
    "epsilon",
    "sigma1",
    "sigma2_grid",
    "amplitude",
    "M",
    "N",
    "K",
    "se_length",
    "detectors",
    "min_errors",
    "max_symbols",
    "seed",
    "filter_file",
];

/// Parsed scenario file, before overrides and validation.
#[derive(Debug, Clone)]
pub struct ScenarioSpec {
    pub epsilon: f64,
    pub sigma1: f64,
    pub sigma2_grid: Vec<f64>,
    pub amplitude: f64,
    pub symbol_len: usize,
    pub levels: usize,
    pub scale: f64,
    pub se_length: usize,
    pub detectors: Vec<DetectorKind>,
    pub min_errors: u64,
    pub max_symbols: u64,
    pub seed: u64,
    pub filter_file: Option<PathBuf>,
}

/// Command-line values that replace their file counterparts.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub min_errors: Option<u64>,
    pub max_symbols: Option<u64>,
}

fn parse_number<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T, String> {
    value
        .parse::<T>()
        .map_err(|_| format!("line {line}: key {key:?} has unparsable value {value:?}"))
}

fn parse_finite(key: &str, value: &str, line: usize) -> Result<f64, String> {
    let v: f64 = parse_number(key, value, line)?;
    if !v.is_finite() {
        return Err(format!(
            "line {line}: key {key:?} must be finite, got {value:?}"
        ));
    }
    Ok(v)
}

impl ScenarioSpec {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut seen: BTreeMap<&str, (usize, String)> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {line_no}: expected `key = value`, got {line:?}"))?;
            let key = key.trim();
            let value = value.trim().to_string();
            let known = KEYS
                .iter()
                .find(|&&k| k == key)
                .ok_or_else(|| format!("line {line_no}: unknown key {key:?}"))?;
            if seen.insert(known, (line_no, value)).is_some() {
                return Err(format!("line {line_no}: duplicate key {key:?}"));
            }
        }

        let mut require = |key: &str| -> Result<(usize, String), String> {
            seen.remove(key)
                .ok_or_else(|| format!("missing required key {key:?}"))
        };

        let (ln, v) = require("epsilon")?;
        let epsilon = parse_finite("epsilon", &v, ln)?;
        let (ln, v) = require("sigma1")?;
        let sigma1 = parse_finite("sigma1", &v, ln)?;

        let (ln, v) = require("sigma2_grid")?;
        let mut sigma2_grid = Vec::new();
        for part in v.split(',') {
            let part = part.trim();
            if part.is_empty() {
                return Err(format!("line {ln}: empty entry in sigma2_grid"));
            }
            sigma2_grid.push(parse_finite("sigma2_grid", part, ln)?);
        }

        let (ln, v) = require("amplitude")?;
        let amplitude = parse_finite("amplitude", &v, ln)?;
        let (ln, v) = require("M")?;
        let symbol_len: usize = parse_number("M", &v, ln)?;
        let (ln, v) = require("N")?;
        let levels: usize = parse_number("N", &v, ln)?;
        let (ln, v) = require("K")?;
        let scale = parse_finite("K", &v, ln)?;
        let (ln, v) = require("se_length")?;
        let se_length: usize = parse_number("se_length", &v, ln)?;

        let (ln, v) = require("detectors")?;
        let mut detectors = Vec::new();
        for part in v.split(',') {
            let part = part.trim();
            let kind: DetectorKind = part.parse().map_err(|e| format!("line {ln}: {e}"))?;
            detectors.push(kind);
        }

        let (ln, v) = require("min_errors")?;
        let min_errors: u64 = parse_number("min_errors", &v, ln)?;
        let (ln, v) = require("max_symbols")?;
        let max_symbols: u64 = parse_number("max_symbols", &v, ln)?;
        let (ln, v) = require("seed")?;
        let seed: u64 = parse_number("seed", &v, ln)?;

        let filter_file = seen.remove("filter_file").map(|(_, v)| PathBuf::from(v));

        Ok(Self {
            epsilon,
            sigma1,
            sigma2_grid,
            amplitude,
            symbol_len,
            levels,
            scale,
            se_length,
            detectors,
            min_errors,
            max_symbols,
            seed,
            filter_file,
        })
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read scenario file {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn apply(&mut self, overrides: &Overrides) {
        if let Some(seed) = overrides.seed {
            self.seed = seed;
        }
        if let Some(min_errors) = overrides.min_errors {
            self.min_errors = min_errors;
        }
        if let Some(max_symbols) = overrides.max_symbols {
            self.max_symbols = max_symbols;
        }
    }

    /// Build the validated scenario and the sweep grid.
    pub fn build(&self, base_dir: &Path) -> Result<(Scenario, Vec<f64>), String> {
        let first_sigma2 = *self
            .sigma2_grid
            .first()
            .ok_or_else(|| "sigma2_grid must not be empty".to_string())?;
        let noise =
            NoiseParams::new(self.epsilon, self.sigma1, first_sigma2).map_err(|e| e.to_string())?;
        let quant = QuantConfig::new(self.scale, self.levels).map_err(|e| e.to_string())?;
        let se = StructuringElement::line(self.se_length).map_err(|e| e.to_string())?;
        let filter = match &self.filter_file {
            Some(path) => {
                let resolved = if path.is_absolute() {
                    path.clone()
                } else {
                    base_dir.join(path)
                };
                ImpulseResponse::load(&resolved)
                    .map_err(|e| format!("filter file {}: {e}", resolved.display()))?
            }
            None => design_receiver_filter(self.symbol_len, 0.1).map_err(|e| e.to_string())?,
        };
        let scenario = Scenario {
            noise,
            quant,
            se,
            amplitude: self.amplitude,
            symbol_len: self.symbol_len,
            filter,
            detectors: self.detectors.clone(),
            master_seed: self.seed,
            min_errors: self.min_errors,
            max_symbols: self.max_symbols,
        };
        scenario.validate().map_err(|e| e.to_string())?;
        Ok((scenario, self.sigma2_grid.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> String {
        "\
# typical impulsive channel
epsilon = 0.01
sigma1 = 2
sigma2_grid = 10, 20, 40
amplitude = 1
M = 70
N = 300
K = 10
se_length = 15
detectors = morph, map_mixture, map_genie, matched
min_errors = 100
max_symbols = 1000000
seed = 7
"
        .to_string()
    }

    #[test]
    fn parses_complete_file() {
        let spec = ScenarioSpec::parse(&sample()).unwrap();
        assert_eq!(spec.epsilon, 0.01);
        assert_eq!(spec.sigma2_grid, vec![10.0, 20.0, 40.0]);
        assert_eq!(spec.detectors.len(), 4);
        assert_eq!(spec.symbol_len, 70);
        assert!(spec.filter_file.is_none());
        let (scenario, grid) = spec.build(Path::new(".")).unwrap();
        assert_eq!(grid.len(), 3);
        assert_eq!(scenario.master_seed, 7);
        assert_eq!(scenario.filter.len(), 7);
    }

    #[test]
    fn rejects_unknown_key_with_line() {
        let text = sample() + "bogus = 1\n";
        let err = ScenarioSpec::parse(&text).unwrap_err();
        assert!(err.contains("line 14"), "{err}");
        assert!(err.contains("bogus"), "{err}");
    }

    #[test]
    fn rejects_duplicate_key() {
        let text = sample() + "seed = 8\n";
        let err = ScenarioSpec::parse(&text).unwrap_err();
        assert!(err.contains("duplicate"), "{err}");
    }

    #[test]
    fn rejects_missing_key() {
        let text = sample().replace("seed = 7\n", "");
        let err = ScenarioSpec::parse(&text).unwrap_err();
        assert!(err.contains("seed"), "{err}");
    }

    #[test]
    fn rejects_bad_number_with_line() {
        let text = sample().replace("sigma1 = 2", "sigma1 = two");
        let err = ScenarioSpec::parse(&text).unwrap_err();
        assert!(err.contains("line 3"), "{err}");
        assert!(err.contains("sigma1"), "{err}");
    }

    #[test]
    fn rejects_non_finite() {
        let text = sample().replace("sigma1 = 2", "sigma1 = inf");
        let err = ScenarioSpec::parse(&text).unwrap_err();
        assert!(err.contains("finite"), "{err}");
    }

    #[test]
    fn rejects_bad_detector() {
        let text = sample().replace("matched", "telepathy");
        let err = ScenarioSpec::parse(&text).unwrap_err();
        assert!(err.contains("telepathy"), "{err}");
    }

    #[test]
    fn rejects_missing_equals() {
        let err = ScenarioSpec::parse("epsilon 0.01\n").unwrap_err();
        assert!(err.contains("line 1"), "{err}");
    }

    #[test]
    fn overrides_replace_values() {
        let mut spec = ScenarioSpec::parse(&sample()).unwrap();
        spec.apply(&Overrides {
            seed: Some(99),
            min_errors: Some(5),
            max_symbols: None,
        });
        assert_eq!(spec.seed, 99);
        assert_eq!(spec.min_errors, 5);
        assert_eq!(spec.max_symbols, 1_000_000);
    }

    #[test]
    fn build_rejects_bad_grid_head() {
        let text = sample().replace("sigma2_grid = 10, 20, 40", "sigma2_grid = 1, 20");
        let spec = ScenarioSpec::parse(&text).unwrap();
        // First grid value below sigma1.
        assert!(spec.build(Path::new(".")).is_err());
    }

    #[test]
    fn filter_file_is_loaded_and_normalized() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("taps.txt"), "1\n2\n1\n").unwrap();
        let text = sample() + "filter_file = taps.txt\n";
        let spec = ScenarioSpec::parse(&text).unwrap();
        let (scenario, _) = spec.build(dir.path()).unwrap();
        assert_eq!(scenario.filter.taps(), &[0.25, 0.5, 0.25]);
        assert_eq!(scenario.filter.peak_index(), 1);
    }
}
