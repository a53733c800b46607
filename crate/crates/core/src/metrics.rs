//! Pixel-domain quality measures between an original and a segmented image.

use std::fmt;

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Peak gray value used by PSNR.
pub const PEAK: f64 = 255.0;

/// Peak signal-to-noise ratio in decibels; infinite when the images agree exactly.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum Psnr {
    Finite(f64),
    Infinite,
}

impl Psnr {
    pub fn is_infinite(self) -> bool {
        matches!(self, Psnr::Infinite)
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Psnr::Finite(db) => db,
            Psnr::Infinite => f64::INFINITY,
        }
    }
}

/// Shortest round-trip decimal, or `inf`.
impl fmt::Display for Psnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Finite(db) => write!(f, "{db}"),
            Psnr::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport {
    pub correlation: f64,
    pub mse: f64,
    pub psnr: Psnr,
}

impl QualityReport {
    /// Correlation, MSE and PSNR of `segmented` against `original`.
    pub fn compare(original: &GrayImage, segmented: &GrayImage) -> Result<Self> {
        let correlation = correlation(original, segmented)?;
        let mse = mse(original, segmented)?;
        Ok(Self {
            correlation,
            mse,
            psnr: psnr(mse),
        })
    }

    /// Like [`QualityReport::compare`] but with an already known correlation,
    /// e.g. the fitness of the segmentation that produced `segmented`.
    pub fn with_correlation(
        correlation: f64,
        original: &GrayImage,
        segmented: &GrayImage,
    ) -> Result<Self> {
        let mse = mse(original, segmented)?;
        Ok(Self {
            correlation,
            mse,
            psnr: psnr(mse),
        })
    }
}

fn check_shape(a: &GrayImage, b: &GrayImage) -> Result<()> {
    if a.same_shape(b) {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        })
    }
}

/// Pearson correlation of two equally long real sequences.
///
/// Both means are taken first, then covariance and variances are
/// accumulated over mean-centered values.
pub fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::DegenerateImage("first image"));
    }
    let n = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let (mut cov, mut var_a, mut var_b) = (0.0, 0.0, 0.0);
    for (&pa, &pb) in a.iter().zip(b) {
        let da = pa - mean_a;
        let db = pb - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if var_a == 0.0 {
        return Err(Error::DegenerateImage("first image"));
    }
    if var_b == 0.0 {
        return Err(Error::DegenerateImage("second image"));
    }
    Ok(cov / (var_a * var_b).sqrt())
}

/// Pearson correlation over all pixels.
pub fn correlation(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_shape(a, b)?;
    let to_real = |img: &GrayImage| img.pixels().iter().map(|&p| p as f64).collect::<Vec<_>>();
    pearson(&to_real(a), &to_real(b))
}

/// Mean squared gray-level difference.
pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_shape(a, b)?;
    let sse: u64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&pa, &pb)| {
            let d = pa.abs_diff(pb) as u64;
            d * d
        })
        .sum();
    Ok(sse as f64 / a.len() as f64)
}

/// `20 log10(255 / sqrt(mse))`, or [`Psnr::Infinite`] at zero error.
pub fn psnr(mse_value: f64) -> Psnr {
    if mse_value <= 0.0 {
        Psnr::Infinite
    } else {
        Psnr::Finite(20.0 * (PEAK / mse_value.sqrt()).log10())
    }
}
