//! Symbol-level Monte-Carlo experiments: paired-detector trials, the
//! minimum-error stopping rule, and BER sweeps over the impulse std.
//!
//! All randomness for symbol `t` of grid point `g` derives from
//! `(master_seed, g, t)` through a counter-constructed ChaCha stream, so
//! trials replay bit-identically and parallel execution cannot change any
//! result. Every enabled detector sees the identical realization.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bridge::QuantConfig;
use crate::detectors::{
    detect_map_genie, detect_map_mixture, detect_matched_filter, detect_morph, detect_morph_traced,
    Decision, HypothesisPair, MorphTrace,
};
use crate::error::{Error, Result};
use crate::frontend::{convolve, ImpulseResponse};
use crate::morphology::StructuringElement;
use crate::noise::NoiseParams;
use crate::stats::wilson_interval;

/// Symbols simulated between stopping-rule checks. Counts are merged at
/// batch boundaries; the minimum-error guarantee holds on the final counts.
const BATCH_SYMBOLS: u64 = 4096;

/// The available decision rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectorKind {
    /// Morphological detector on the filtered waveform.
    Morph,
    /// Mixture-density MAP on the raw waveform.
    MapMixture,
    /// Genie-aided MAP (true component labels) on the raw waveform.
    MapGenie,
    /// Matched filter on the filtered waveform.
    Matched,
}

impl DetectorKind {
    pub const ALL: [DetectorKind; 4] = [
        DetectorKind::Morph,
        DetectorKind::MapMixture,
        DetectorKind::MapGenie,
        DetectorKind::Matched,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            DetectorKind::Morph => "morph",
            DetectorKind::MapMixture => "map_mixture",
            DetectorKind::MapGenie => "map_genie",
            DetectorKind::Matched => "matched",
        }
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DetectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "morph" => Ok(DetectorKind::Morph),
            "map_mixture" => Ok(DetectorKind::MapMixture),
            "map_genie" => Ok(DetectorKind::MapGenie),
            "matched" => Ok(DetectorKind::Matched),
            other => Err(Error::Parameter(format!(
                "unknown detector {other:?}; expected morph, map_mixture, map_genie, or matched"
            ))),
        }
    }
}

/// One experiment point: channel, geometry, detectors, stopping rule, seed.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub noise: NoiseParams,
    pub quant: QuantConfig,
    pub se: StructuringElement,
    /// Rectangular symbol amplitude; must be finite and positive.
    pub amplitude: f64,
    /// Samples per symbol.
    pub symbol_len: usize,
    pub filter: ImpulseResponse,
    /// Enabled decision rules, without duplicates.
    pub detectors: Vec<DetectorKind>,
    pub master_seed: u64,
    /// Stop once every detector has at least this many errors.
    pub min_errors: u64,
    /// Hard cap on simulated symbols per BER point.
    pub max_symbols: u64,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if !self.amplitude.is_finite() || self.amplitude <= 0.0 {
            return Err(Error::Parameter(format!(
                "amplitude must be positive and finite, got {}",
                self.amplitude
            )));
        }
        if self.symbol_len == 0 {
            return Err(Error::Parameter("symbol_len must be at least 1".into()));
        }
        if self.min_errors == 0 {
            return Err(Error::Parameter("min_errors must be at least 1".into()));
        }
        if self.max_symbols < self.min_errors {
            return Err(Error::Parameter(format!(
                "max_symbols {} is below min_errors {}",
                self.max_symbols, self.min_errors
            )));
        }
        if self.detectors.is_empty() {
            return Err(Error::Parameter(
                "at least one detector must be enabled".into(),
            ));
        }
        for (i, d) in self.detectors.iter().enumerate() {
            if self.detectors[..i].contains(d) {
                return Err(Error::Parameter(format!("duplicate detector {d}")));
            }
        }
        Ok(())
    }
}

/// Error statistics of one detector at one impulse-std value.
#[derive(Debug, Clone, PartialEq)]
pub struct BerPoint {
    pub detector: DetectorKind,
    pub sigma2: f64,
    /// Mixture std `sqrt((1-eps) s1^2 + eps s2^2)`.
    pub total_std: f64,
    pub symbols: u64,
    pub errors: u64,
    pub ber: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Set when the symbol cap stopped the run before every detector
    /// reached `min_errors`.
    pub capped: bool,
}

/// Decisions of every enabled detector for one symbol, plus the truth.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolOutcome {
    pub truth: Decision,
    /// Parallel to `scenario.detectors`.
    pub decisions: Vec<Decision>,
}

/// Full per-symbol diagnostics behind [`SymbolOutcome`].
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolTrace {
    pub truth: Decision,
    /// Antenna-input waveform (symbol plus noise).
    pub raw: Vec<f64>,
    /// Waveform after the receiver filter.
    pub filtered: Vec<f64>,
    /// Noise component labels, aligned with `raw`.
    pub noise_labels: Vec<u8>,
    /// Parallel to `scenario.detectors`.
    pub decisions: Vec<Decision>,
    pub morph_decision: Decision,
    pub morph: MorphTrace,
}

/// The deterministic per-symbol random stream for `(master_seed, grid_index,
/// symbol_index)`.
pub fn symbol_stream(master_seed: u64, grid_index: u64, symbol_index: u64) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    seed[0..8].copy_from_slice(&master_seed.to_le_bytes());
    seed[8..16].copy_from_slice(&grid_index.to_le_bytes());
    seed[16..24].copy_from_slice(&symbol_index.to_le_bytes());
    ChaCha8Rng::from_seed(seed)
}

/// Precomputed per-point state shared across symbol trials.
struct PointContext<'a> {
    scenario: &'a Scenario,
    noise: NoiseParams,
    grid_index: u64,
    hyp: HypothesisPair,
    template: Vec<f64>,
}

impl<'a> PointContext<'a> {
    fn new(scenario: &'a Scenario, noise: NoiseParams, grid_index: u64) -> Result<Self> {
        let hyp = HypothesisPair::rectangular(scenario.amplitude, scenario.symbol_len)?;
        let template = convolve(hyp.plus(), &scenario.filter);
        Ok(Self {
            scenario,
            noise,
            grid_index,
            hyp,
            template,
        })
    }

    /// Draw one symbol realization: polarity first, then the labeled noise.
    fn realize(&self, symbol_index: u64) -> (Decision, Vec<f64>, Vec<f64>, Vec<u8>) {
        let mut rng = symbol_stream(self.scenario.master_seed, self.grid_index, symbol_index);
        let truth = if rng.random::<bool>() {
            Decision::Plus
        } else {
            Decision::Minus
        };
        let noise = self
            .noise
            .sample_labeled(self.scenario.symbol_len, &mut rng);
        let wave = match truth {
            Decision::Plus => self.hyp.plus(),
            Decision::Minus => self.hyp.minus(),
        };
        let raw: Vec<f64> = wave
            .iter()
            .zip(noise.samples())
            .map(|(s, n)| s + n)
            .collect();
        let filtered = convolve(&raw, &self.scenario.filter);
        let labels = noise.labels().to_vec();
        (truth, raw, filtered, labels)
    }

    fn decide(&self, kind: DetectorKind, raw: &[f64], filtered: &[f64], labels: &[u8]) -> Decision {
        match kind {
            DetectorKind::Morph => detect_morph(filtered, &self.scenario.quant, &self.scenario.se),
            DetectorKind::MapMixture => detect_map_mixture(raw, &self.hyp, &self.noise),
            DetectorKind::MapGenie => detect_map_genie(raw, labels, &self.hyp, &self.noise)
                .expect("generator labels are binary"),
            DetectorKind::Matched => detect_matched_filter(filtered, &self.template),
        }
    }

    fn simulate(&self, symbol_index: u64) -> SymbolOutcome {
        let (truth, raw, filtered, labels) = self.realize(symbol_index);
        let decisions = self
            .scenario
            .detectors
            .iter()
            .map(|&kind| self.decide(kind, &raw, &filtered, &labels))
            .collect();
        SymbolOutcome { truth, decisions }
    }
}

/// Simulate one symbol and evaluate every enabled detector on it.
///
/// Deterministic in `(scenario.master_seed, symbol_index)`.
pub fn run_symbol(scenario: &Scenario, symbol_index: u64) -> Result<SymbolOutcome> {
    scenario.validate()?;
    let ctx = PointContext::new(scenario, scenario.noise, 0)?;
    Ok(ctx.simulate(symbol_index))
}

/// [`run_symbol`] with the full waveform and morphological diagnostics.
pub fn run_symbol_traced(scenario: &Scenario, symbol_index: u64) -> Result<SymbolTrace> {
    scenario.validate()?;
    let ctx = PointContext::new(scenario, scenario.noise, 0)?;
    let (truth, raw, filtered, labels) = ctx.realize(symbol_index);
    let decisions = scenario
        .detectors
        .iter()
        .map(|&kind| ctx.decide(kind, &raw, &filtered, &labels))
        .collect();
    let (morph_decision, morph) = detect_morph_traced(&filtered, &scenario.quant, &scenario.se);
    Ok(SymbolTrace {
        truth,
        raw,
        filtered,
        noise_labels: labels,
        decisions,
        morph_decision,
        morph,
    })
}

fn all_reached(errors: &[u64], min_errors: u64) -> bool {
    errors.iter().all(|&e| e >= min_errors)
}

fn run_point(scenario: &Scenario, noise: NoiseParams, grid_index: u64) -> Result<Vec<BerPoint>> {
    let ctx = PointContext::new(scenario, noise, grid_index)?;
    let n_det = scenario.detectors.len();
    let mut errors = vec![0u64; n_det];
    let mut symbols = 0u64;

    while symbols < scenario.max_symbols && !all_reached(&errors, scenario.min_errors) {
        let batch = BATCH_SYMBOLS.min(scenario.max_symbols - symbols);
        let batch_errors = (symbols..symbols + batch)
            .into_par_iter()
            .fold(
                || vec![0u64; n_det],
                |mut acc, t| {
                    let outcome = ctx.simulate(t);
                    for (slot, &decision) in acc.iter_mut().zip(&outcome.decisions) {
                        if decision != outcome.truth {
                            *slot += 1;
                        }
                    }
                    acc
                },
            )
            .reduce(
                || vec![0u64; n_det],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            );
        for (total, add) in errors.iter_mut().zip(batch_errors) {
            *total += add;
        }
        symbols += batch;
    }

    let capped = !all_reached(&errors, scenario.min_errors);
    let total_std = noise.total_std();
    Ok(scenario
        .detectors
        .iter()
        .zip(&errors)
        .map(|(&detector, &errs)| {
            let ber = errs as f64 / symbols as f64;
            let (ci_low, ci_high) = wilson_interval(errs, symbols);
            BerPoint {
                detector,
                sigma2: noise.sigma2(),
                total_std,
                symbols,
                errors: errs,
                ber,
                ci_low,
                ci_high,
                capped,
            }
        })
        .collect())
}

/// Simulate until every enabled detector has `min_errors` errors or the
/// symbol cap is hit, and return one [`BerPoint`] per detector.
pub fn run_ber_point(scenario: &Scenario) -> Result<Vec<BerPoint>> {
    scenario.validate()?;
    run_point(scenario, scenario.noise, 0)
}

/// Run one BER point per grid value, each with its own derived seed stream,
/// and return the points ordered by `sigma2` (detector order within a value).
///
/// Every grid value must be finite and at least `sigma1`.
pub fn sweep(scenario: &Scenario, sigma2_grid: &[f64]) -> Result<Vec<BerPoint>> {
    scenario.validate()?;
    if sigma2_grid.is_empty() {
        return Err(Error::Parameter("sigma2 grid must not be empty".into()));
    }
    let mut points = Vec::with_capacity(sigma2_grid.len() * scenario.detectors.len());
    for (grid_index, &sigma2) in sigma2_grid.iter().enumerate() {
        let noise = scenario.noise.with_sigma2(sigma2)?;
        points.extend(run_point(scenario, noise, grid_index as u64)?);
    }
    points.sort_by(|a, b| a.sigma2.partial_cmp(&b.sigma2).unwrap());
    Ok(points)
}
