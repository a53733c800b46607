//! 8-bit grayscale image model and its gray-level histogram.

use crate::error::{Error, Result};

/// Number of representable gray levels.
pub const GRAY_LEVELS: usize = 256;

/// A width x height grid of 8-bit gray values stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    /// Builds an image from row-major samples.
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions { width, height });
        }
        let expected = width
            .checked_mul(height)
            .ok_or(Error::InvalidDimensions { width, height })?;
        if pixels.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Builds an image from wide integer samples, rejecting anything outside `[0, 255]`.
    pub fn from_values(width: usize, height: usize, values: &[i64]) -> Result<Self> {
        let expected = width.saturating_mul(height);
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions { width, height });
        }
        if values.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: values.len(),
            });
        }
        let pixels = values
            .iter()
            .enumerate()
            .map(|(index, &value)| {
                u8::try_from(value).map_err(|_| Error::ValueOutOfRange { value, index })
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(width, height, pixels)
    }

    /// A `width` x `height` image with every pixel set to `value`.
    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width.saturating_mul(height)])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    /// Always false; a valid image has at least one pixel.
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    /// Gray value at column `x`, row `y`.
    pub fn get(&self, x: usize, y: usize) -> Option<u8> {
        if x < self.width && y < self.height {
            Some(self.pixels[y * self.width + x])
        } else {
            None
        }
    }

    /// Applies a per-gray-level lookup table to every pixel.
    pub fn map_levels(&self, lut: &[u8; GRAY_LEVELS]) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|&p| lut[p as usize]).collect(),
        }
    }

    pub fn same_shape(&self, other: &GrayImage) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn histogram(&self) -> Histogram {
        let mut counts = [0u64; GRAY_LEVELS];
        for &p in &self.pixels {
            counts[p as usize] += 1;
        }
        Histogram::from_counts(counts)
    }
}

/// Gray-level occurrence counts together with cumulative moment tables.
///
/// The prefix tables make the pixel count, gray sum and squared gray sum of
/// any half-open gray interval available in O(1), so a class partition can be
/// scored without touching the pixels again.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: [u64; GRAY_LEVELS],
    total: u64,
    // prefix_*[g] covers gray levels 0..g
    prefix_count: [u64; GRAY_LEVELS + 1],
    prefix_sum: [u64; GRAY_LEVELS + 1],
    prefix_sq: [u64; GRAY_LEVELS + 1],
}

impl Histogram {
    pub fn from_counts(counts: [u64; GRAY_LEVELS]) -> Self {
        let mut prefix_count = [0u64; GRAY_LEVELS + 1];
        let mut prefix_sum = [0u64; GRAY_LEVELS + 1];
        let mut prefix_sq = [0u64; GRAY_LEVELS + 1];
        for (g, &c) in counts.iter().enumerate() {
            let g64 = g as u64;
            prefix_count[g + 1] = prefix_count[g] + c;
            prefix_sum[g + 1] = prefix_sum[g] + g64 * c;
            prefix_sq[g + 1] = prefix_sq[g] + g64 * g64 * c;
        }
        Self {
            counts,
            total: prefix_count[GRAY_LEVELS],
            prefix_count,
            prefix_sum,
            prefix_sq,
        }
    }

    pub fn counts(&self) -> &[u64; GRAY_LEVELS] {
        &self.counts
    }

    pub fn count(&self, gray: u8) -> u64 {
        self.counts[gray as usize]
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Gray levels with a nonzero count, ascending.
    pub fn present_levels(&self) -> Vec<u8> {
        (0..GRAY_LEVELS)
            .filter(|&g| self.counts[g] > 0)
            .map(|g| g as u8)
            .collect()
    }

    pub fn distinct_levels(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// True when fewer than two gray levels are populated.
    pub fn is_constant(&self) -> bool {
        self.distinct_levels() < 2
    }

    /// Pixel count in gray interval `[lo, hi)`.
    pub fn interval_count(&self, lo: usize, hi: usize) -> u64 {
        self.prefix_count[hi] - self.prefix_count[lo]
    }

    /// Sum of gray values in `[lo, hi)`.
    pub fn interval_sum(&self, lo: usize, hi: usize) -> u64 {
        self.prefix_sum[hi] - self.prefix_sum[lo]
    }

    /// Sum of squared gray values in `[lo, hi)`.
    pub fn interval_sq_sum(&self, lo: usize, hi: usize) -> u64 {
        self.prefix_sq[hi] - self.prefix_sq[lo]
    }

    /// Expands the histogram back into a sorted pixel multiset.
    pub fn to_sorted_pixels(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.total as usize);
        for (g, &c) in self.counts.iter().enumerate() {
            out.extend(std::iter::repeat_n(g as u8, c as usize));
        }
        out
    }
}
