//! Signal/image interfaces: quantize a real signal, encode it as a filled
//! binary image (ones from the bottom of each column up to the trace), and
//! recover the signal from an image by counting ones per column.
//!
//! The pair is an exact inverse: `image_to_signal(signal_to_image(q)) == q`
//! for every in-range `q`, and likewise for the mirrored-image route with
//! negation on extraction.

use crate::error::{Error, Result};
use crate::morphology::BinaryImage;

/// Quantizer geometry: scale factor, level count, and the derived offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantConfig {
    scale: f64,
    levels: usize,
}

impl QuantConfig {
    /// `scale` is the number of levels per signal unit; `levels` is the
    /// image height and must be even and at least 4.
    pub fn new(scale: f64, levels: usize) -> Result<Self> {
        if !scale.is_finite() || scale <= 0.0 {
            return Err(Error::Parameter(format!(
                "scale must be positive and finite, got {scale}"
            )));
        }
        if levels < 4 || !levels.is_multiple_of(2) {
            return Err(Error::Parameter(format!(
                "levels must be even and at least 4, got {levels}"
            )));
        }
        if levels > (i32::MAX / 2) as usize {
            return Err(Error::Parameter(format!(
                "levels {levels} out of supported range"
            )));
        }
        Ok(Self { scale, levels })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    /// The mid-height offset `V = levels / 2`.
    pub fn offset(&self) -> i32 {
        (self.levels / 2) as i32
    }
}

/// An integer signal whose values lie in `[-V, V]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantizedSignal {
    values: Vec<i32>,
}

impl QuantizedSignal {
    /// Wrap pre-quantized values, checking the range invariant.
    pub fn from_values(values: Vec<i32>, cfg: &QuantConfig) -> Result<Self> {
        let v = cfg.offset();
        if let Some(bad) = values.iter().find(|x| x.abs() > v) {
            return Err(Error::Parameter(format!(
                "quantized value {bad} outside [-{v}, {v}]"
            )));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<i32> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Round each sample half away from zero at the quantizer scale and clamp
/// into `[-V, V]`. Clamping absorbs impulses that exceed the level range.
pub fn quantize(signal: &[f64], cfg: &QuantConfig) -> QuantizedSignal {
    let v = cfg.offset() as f64;
    let values = signal
        .iter()
        .map(|&s| (s * cfg.scale()).round().clamp(-v, v) as i32)
        .collect();
    QuantizedSignal { values }
}

/// Encode the signal as a filled image: column `i` has its bottom
/// `q(i) + V` cells set.
pub fn signal_to_image(q: &QuantizedSignal, cfg: &QuantConfig) -> BinaryImage {
    fill_image(q, cfg, false)
}

/// Encode the negated signal: column `i` filled to `-q(i) + V`. This is the
/// mirrored image for the second filter pass.
pub fn signal_to_image_mirrored(q: &QuantizedSignal, cfg: &QuantConfig) -> BinaryImage {
    fill_image(q, cfg, true)
}

fn fill_image(q: &QuantizedSignal, cfg: &QuantConfig, mirrored: bool) -> BinaryImage {
    assert!(!q.is_empty(), "cannot build an image from an empty signal");
    let v = cfg.offset();
    let mut img = BinaryImage::zeros(q.len(), cfg.levels()).expect("validated dimensions");
    for (col, &value) in q.values().iter().enumerate() {
        let signed = if mirrored { -value } else { value };
        img.fill_column(col, (signed + v) as usize);
    }
    img
}

/// Recover a signal from an image: per column, `(count of ones) - V`,
/// negated when `negate` is set (the mirrored-pass inverse).
pub fn image_to_signal(img: &BinaryImage, cfg: &QuantConfig, negate: bool) -> Vec<i32> {
    assert_eq!(
        img.height(),
        cfg.levels(),
        "image height {} does not match quantizer levels {}",
        img.height(),
        cfg.levels()
    );
    let v = cfg.offset();
    img.column_sums()
        .into_iter()
        .map(|count| {
            let raw = count as i32 - v;
            if negate {
                -raw
            } else {
                raw
            }
        })
        .collect()
}
