//! Receiver input filter: a normalized low-pass impulse response and the
//! convolution that applies it to the antenna waveform.

use std::path::Path;

use crate::error::{Error, Result};

/// A finite impulse response with unit tap sum.
///
/// The peak index marks the maximum-magnitude tap; [`convolve`] aligns its
/// output on the peak so the filtered pulse overlays the transmitted pulse
/// (group-delay compensation).
#[derive(Debug, Clone, PartialEq)]
pub struct ImpulseResponse {
    taps: Vec<f64>,
    peak_index: usize,
}

impl ImpulseResponse {
    /// Normalize `taps` to unit sum and record the peak position.
    pub fn from_taps(taps: Vec<f64>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::Parameter("filter needs at least one tap".into()));
        }
        if taps.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFinite("filter tap"));
        }
        let sum: f64 = taps.iter().sum();
        if sum.abs() < 1e-12 {
            return Err(Error::Parameter(format!(
                "tap sum {sum} is too close to zero to normalize"
            )));
        }
        let taps: Vec<f64> = taps.into_iter().map(|t| t / sum).collect();
        let peak_index = taps
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.abs().partial_cmp(&b.abs()).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        Ok(Self { taps, peak_index })
    }

    /// Parse a plain-text tap file: one tap per line, blank lines ignored.
    /// Taps are re-normalized to unit sum.
    pub fn parse(text: &str) -> Result<Self> {
        let mut taps = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let tap: f64 = trimmed.parse().map_err(|_| Error::FilterFile {
                line: idx + 1,
                message: format!("expected a number, got {trimmed:?}"),
            })?;
            taps.push(tap);
        }
        if taps.is_empty() {
            return Err(Error::Parameter("filter file contains no taps".into()));
        }
        Self::from_taps(taps)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn peak_index(&self) -> usize {
        self.peak_index
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    /// Length of the shortest contiguous tap run holding at least `mass`
    /// of the total absolute tap mass.
    pub fn effective_length(&self, mass: f64) -> usize {
        let total: f64 = self.taps.iter().map(|t| t.abs()).sum();
        let target = mass * total;
        let mut best = self.taps.len();
        for start in 0..self.taps.len() {
            let mut acc = 0.0;
            for end in start..self.taps.len() {
                acc += self.taps[end].abs();
                if acc >= target {
                    best = best.min(end - start + 1);
                    break;
                }
            }
        }
        best
    }
}

/// Design the default receiver filter: a raised-cosine (sine-squared)
/// positive tap window, normalized to unit sum, whose length is
/// `round(significant_fraction * symbol_len)`.
pub fn design_receiver_filter(
    symbol_len: usize,
    significant_fraction: f64,
) -> Result<ImpulseResponse> {
    if symbol_len < 10 {
        return Err(Error::Parameter(format!(
            "symbol_len must be at least 10, got {symbol_len}"
        )));
    }
    if !(significant_fraction > 0.0 && significant_fraction < 1.0) {
        return Err(Error::Parameter(format!(
            "significant_fraction must lie in (0, 1), got {significant_fraction}"
        )));
    }
    let len = (significant_fraction * symbol_len as f64).round() as usize;
    if len < 1 {
        return Err(Error::Parameter(format!(
            "significant_fraction {significant_fraction} yields an empty filter for symbol_len {symbol_len}"
        )));
    }
    let denom = (len + 1) as f64;
    let taps: Vec<f64> = (0..len)
        .map(|k| {
            let s = (std::f64::consts::PI * (k + 1) as f64 / denom).sin();
            s * s
        })
        .collect();
    ImpulseResponse::from_taps(taps)
}

/// Convolve `x` with `h`, peak-aligned, zero-padded outside the input:
/// `y(i) = sum_k h(k) * x(i - k + peak_index)`.
///
/// The output has the same length as the input.
pub fn convolve(x: &[f64], h: &ImpulseResponse) -> Vec<f64> {
    let n = x.len() as isize;
    let peak = h.peak_index() as isize;
    (0..n)
        .map(|i| {
            let mut acc = 0.0;
            for (k, &tap) in h.taps().iter().enumerate() {
                let j = i - k as isize + peak;
                if (0..n).contains(&j) {
                    acc += tap * x[j as usize];
                }
            }
            acc
        })
        .collect()
}
