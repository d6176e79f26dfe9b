//! Symbol detection in impulsive two-component Gaussian mixture noise.
//!
//! The receiver under test converts the filtered waveform into a filled
//! binary image, smooths it with an open-close morphological filter (once on
//! the image, once on its mirror), and decides the symbol polarity from the
//! averaged reconstruction. Two MAP rules (full mixture density, and a
//! genie given the true per-sample noise component) plus a matched filter
//! serve as references. A seeded Monte-Carlo harness measures BER per
//! detector over a grid of impulse noise levels, with paired realizations
//! and a minimum-error stopping rule.
//!
//! Modules:
//! - [`noise`]: the mixture model, log-density, labeled sample generator.
//! - [`frontend`]: receiver filter design, loading, and convolution.
//! - [`morphology`]: bit-packed flat binary morphology with a line element.
//! - [`bridge`]: signal/image conversions around the quantizer.
//! - [`detectors`]: the four decision rules.
//! - [`monte_carlo`]: symbol trials, stopping rule, BER sweeps.
//! - [`stats`]: Wilson score intervals.

pub mod bridge;
pub mod detectors;
pub mod error;
pub mod frontend;
pub mod monte_carlo;
pub mod morphology;
pub mod noise;
pub mod stats;

pub use bridge::{
    image_to_signal, quantize, signal_to_image, signal_to_image_mirrored, QuantConfig,
    QuantizedSignal,
};
pub use detectors::{
    detect_map_genie, detect_map_mixture, detect_matched_filter, detect_morph, detect_morph_traced,
    Decision, HypothesisPair, MorphTrace,
};
pub use error::{Error, Result};
pub use frontend::{convolve, design_receiver_filter, ImpulseResponse};
pub use monte_carlo::{
    run_ber_point, run_symbol, run_symbol_traced, sweep, symbol_stream, BerPoint, DetectorKind,
    Scenario, SymbolOutcome, SymbolTrace,
};
pub use morphology::{close, dilate, erode, open, open_close, BinaryImage, StructuringElement};
pub use noise::{LabeledNoise, NoiseParams};
pub use stats::wilson_interval;
