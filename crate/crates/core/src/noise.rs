//! Two-component Gaussian scale-mixture noise ("epsilon noise").
//!
//! Each sample is background noise (std `sigma1`) with probability
//! `1 - epsilon`, or background-plus-impulse noise (std `sigma2`) with
//! probability `epsilon`. The generator also emits the per-sample component
//! label so that a genie-aided detector can be fed the true component.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

const LOG_SQRT_2PI: f64 = 0.918_938_533_204_672_7;
const SQRT_2PI: f64 = 2.506_628_274_631_000_2;

/// Zero-mean Gaussian density with standard deviation `sigma`.
pub(crate) fn gaussian_pdf(x: f64, sigma: f64) -> f64 {
    let z = x / sigma;
    (-0.5 * z * z).exp() / (sigma * SQRT_2PI)
}

/// Natural log of [`gaussian_pdf`], stable for arguments far in the tail.
pub(crate) fn log_gaussian_pdf(x: f64, sigma: f64) -> f64 {
    let z = x / sigma;
    -LOG_SQRT_2PI - sigma.ln() - 0.5 * z * z
}

/// Parameters of the two-component mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    epsilon: f64,
    sigma1: f64,
    sigma2: f64,
}

impl NoiseParams {
    /// Build a validated parameter set.
    ///
    /// Requires `0 <= epsilon <= 1`, `sigma1 > 0`, and `sigma2 >= sigma1`,
    /// all finite.
    pub fn new(epsilon: f64, sigma1: f64, sigma2: f64) -> Result<Self> {
        if !epsilon.is_finite() || !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::Parameter(format!(
                "epsilon must lie in [0, 1], got {epsilon}"
            )));
        }
        if !sigma1.is_finite() || sigma1 <= 0.0 {
            return Err(Error::Parameter(format!(
                "sigma1 must be positive and finite, got {sigma1}"
            )));
        }
        if !sigma2.is_finite() || sigma2 < sigma1 {
            return Err(Error::Parameter(format!(
                "sigma2 must be finite and >= sigma1, got {sigma2}"
            )));
        }
        Ok(Self {
            epsilon,
            sigma1,
            sigma2,
        })
    }

    /// Pure background noise: `epsilon = 0`, `sigma2 = sigma1`.
    pub fn gaussian(sigma1: f64) -> Result<Self> {
        Self::new(0.0, sigma1, sigma1)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn sigma1(&self) -> f64 {
        self.sigma1
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// Standard deviation of the mixture:
    /// `sqrt((1 - epsilon) * sigma1^2 + epsilon * sigma2^2)`.
    pub fn total_std(&self) -> f64 {
        ((1.0 - self.epsilon) * self.sigma1 * self.sigma1
            + self.epsilon * self.sigma2 * self.sigma2)
            .sqrt()
    }

    /// Return this parameter set with a different impulse-component std.
    pub fn with_sigma2(&self, sigma2: f64) -> Result<Self> {
        Self::new(self.epsilon, self.sigma1, sigma2)
    }

    /// Mixture density at `x`.
    ///
    /// Non-finite `x` is a domain error.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::NonFinite("x"));
        }
        Ok((1.0 - self.epsilon) * gaussian_pdf(x, self.sigma1)
            + self.epsilon * gaussian_pdf(x, self.sigma2))
    }

    /// Log of the mixture density, evaluated without underflow.
    ///
    /// The plain density of a sample deep in the tail underflows to zero;
    /// detectors that multiply many densities need this form instead.
    pub fn log_pdf(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::NonFinite("x"));
        }
        Ok(self.log_pdf_raw(x))
    }

    /// Unchecked log-density for hot loops; `x` must be finite.
    pub(crate) fn log_pdf_raw(&self, x: f64) -> f64 {
        if self.epsilon <= 0.0 {
            return log_gaussian_pdf(x, self.sigma1);
        }
        if self.epsilon >= 1.0 {
            return log_gaussian_pdf(x, self.sigma2);
        }
        let background = (1.0 - self.epsilon).ln() + log_gaussian_pdf(x, self.sigma1);
        let impulse = self.epsilon.ln() + log_gaussian_pdf(x, self.sigma2);
        // Max-shifted two-term log-sum-exp.
        let hi = background.max(impulse);
        let lo = background.min(impulse);
        hi + (lo - hi).exp().ln_1p()
    }

    /// Draw `n` independent samples with their component labels.
    ///
    /// Each sample consumes one uniform draw (component choice) followed by
    /// one standard-normal draw from `rng`, in that order; replaying the same
    /// stream reproduces the same output exactly.
    pub fn sample_labeled<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> LabeledNoise {
        let mut samples = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        for _ in 0..n {
            let background = rng.random::<f64>() < 1.0 - self.epsilon;
            let z: f64 = rng.sample(StandardNormal);
            if background {
                samples.push(z * self.sigma1);
                labels.push(LabeledNoise::BACKGROUND);
            } else {
                samples.push(z * self.sigma2);
                labels.push(LabeledNoise::IMPULSE);
            }
        }
        LabeledNoise { samples, labels }
    }
}

/// Noise samples together with their true component labels.
///
/// Label 1 marks a sample drawn from the background component (`sigma1`),
/// label 0 a sample from the background-plus-impulse component (`sigma2`).
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledNoise {
    samples: Vec<f64>,
    labels: Vec<u8>,
}

impl LabeledNoise {
    pub const BACKGROUND: u8 = 1;
    pub const IMPULSE: u8 = 0;

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}
