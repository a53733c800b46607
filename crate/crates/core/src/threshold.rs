//! Threshold vectors, the gray-level class partition they induce, and the
//! correlation fitness of the resulting segmentation.
//!
//! `x` thresholds `t_1 < ... < t_x` in `[1, 255]` split the gray range into
//! `x + 1` half-open classes `[0, t_1), [t_1, t_2), ..., [t_x, 256)`. Every
//! pixel of class `j` is replaced by the class representative, the rounded
//! histogram-weighted mean of the class.

use std::fmt;

use crate::error::{Error, Result};
use crate::image::{GrayImage, Histogram, GRAY_LEVELS};
use crate::levy::RngState;

/// Largest number of thresholds an 8-bit image admits.
pub const MAX_THRESHOLDS: usize = 255;

/// Strictly increasing thresholds in `[1, 255]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThresholdSet(Vec<u8>);

impl ThresholdSet {
    /// Validates an already sorted threshold vector.
    pub fn new(thresholds: Vec<u8>) -> Result<Self> {
        if thresholds.is_empty() {
            return Err(Error::EmptyThresholds);
        }
        if thresholds.contains(&0) {
            return Err(Error::InvalidThresholds(
                "thresholds must lie in [1, 255]".into(),
            ));
        }
        if thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidThresholds(format!(
                "thresholds must be strictly increasing: {thresholds:?}"
            )));
        }
        Ok(Self(thresholds))
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    /// Number of thresholds, `x`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn classes(&self) -> usize {
        self.0.len() + 1
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.0
    }
}

impl fmt::Display for ThresholdSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("]")
    }
}

/// Class boundaries plus one output gray value per class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMap {
    boundaries: Vec<u16>,
    representatives: Vec<u8>,
}

impl ClassMap {
    /// Builds a map from explicit representatives (one per class).
    pub fn new(thresholds: &ThresholdSet, representatives: Vec<u8>) -> Result<Self> {
        if representatives.len() != thresholds.classes() {
            return Err(Error::DimensionMismatch {
                expected: thresholds.classes(),
                actual: representatives.len(),
            });
        }
        Ok(Self {
            boundaries: sentinel_boundaries(thresholds.as_slice()),
            representatives,
        })
    }

    /// `[0, t_1, ..., t_x, 256]`.
    pub fn boundaries(&self) -> &[u16] {
        &self.boundaries
    }

    pub fn representatives(&self) -> &[u8] {
        &self.representatives
    }

    pub fn classes(&self) -> usize {
        self.representatives.len()
    }

    /// Index of the class containing `gray`.
    pub fn class_of(&self, gray: u8) -> usize {
        self.boundaries[1..].partition_point(|&b| b <= gray as u16)
    }

    /// Gray interval `[lo, hi)` of class `j`.
    pub fn interval(&self, class: usize) -> (usize, usize) {
        (
            self.boundaries[class] as usize,
            self.boundaries[class + 1] as usize,
        )
    }

    /// Output gray value for every input gray value.
    pub fn lookup_table(&self) -> [u8; GRAY_LEVELS] {
        let mut lut = [0u8; GRAY_LEVELS];
        for (j, &rep) in self.representatives.iter().enumerate() {
            let (lo, hi) = self.interval(j);
            lut[lo..hi].fill(rep);
        }
        lut
    }
}

/// A scored segmentation: thresholds, their class map and the correlation
/// between the original and segmented images.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationResult {
    pub thresholds: ThresholdSet,
    pub class_map: ClassMap,
    pub fitness: f64,
}

impl SegmentationResult {
    /// Scores `thresholds` against `hist`.
    pub fn evaluate(hist: &Histogram, thresholds: ThresholdSet) -> Result<Self> {
        let class_map = class_representatives(hist, &thresholds);
        let fitness = fitness_from_histogram(hist, &thresholds)?;
        Ok(Self {
            thresholds,
            class_map,
            fitness,
        })
    }

    pub fn segment(&self, image: &GrayImage) -> GrayImage {
        apply(image, &self.class_map)
    }
}

fn sentinel_boundaries(thresholds: &[u8]) -> Vec<u16> {
    let mut b = Vec::with_capacity(thresholds.len() + 2);
    b.push(0);
    b.extend(thresholds.iter().map(|&t| t as u16));
    b.push(GRAY_LEVELS as u16);
    b
}

/// Draws `levels` distinct thresholds uniformly from `[1, 255]`.
///
/// Partial Fisher-Yates over the pool `1..=255`: step `k` swaps slot `k`
/// with slot `k + below(255 - k)`. The first `levels` slots are then sorted.
pub fn random_threshold_set(rng: &mut RngState, levels: usize) -> Result<ThresholdSet> {
    if levels == 0 {
        return Err(Error::EmptyThresholds);
    }
    if levels > MAX_THRESHOLDS {
        return Err(Error::TooManyLevels(levels));
    }
    let mut pool: Vec<u8> = (1..=255).collect();
    for k in 0..levels {
        let j = k + rng.below((MAX_THRESHOLDS - k) as u64) as usize;
        pool.swap(k, j);
    }
    pool.truncate(levels);
    pool.sort_unstable();
    Ok(ThresholdSet(pool))
}

/// Turns arbitrary real proposals into a valid [`ThresholdSet`].
///
/// Values are rounded (half away from zero), clamped to `[1, 255]` and
/// sorted. Walking the sorted values, each one takes the nearest free
/// integer at or above itself; when nothing above is free the search wraps
/// around and takes the lowest free integer from 1. NaN maps to 1.
pub fn repair(raw: &[f64]) -> Result<ThresholdSet> {
    if raw.is_empty() {
        return Err(Error::EmptyThresholds);
    }
    if raw.len() > MAX_THRESHOLDS {
        return Err(Error::Unrepairable(raw.len()));
    }
    let mut values: Vec<u8> = raw
        .iter()
        .map(|&v| {
            if v.is_nan() {
                1
            } else {
                v.round().clamp(1.0, 255.0) as u8
            }
        })
        .collect();
    values.sort_unstable();

    let mut used = [false; GRAY_LEVELS];
    for v in values.iter_mut() {
        let start = *v as usize;
        let slot = (start..GRAY_LEVELS)
            .find(|&g| !used[g])
            .or_else(|| (1..start).find(|&g| !used[g]))
            .expect("fewer than 256 values always leave a free slot");
        used[slot] = true;
        *v = slot as u8;
    }
    values.sort_unstable();
    Ok(ThresholdSet(values))
}

/// Rounded class mean of a nonempty class, or the interval midpoint of an
/// empty one.
fn representative(hist: &Histogram, lo: usize, hi: usize) -> u8 {
    let n = hist.interval_count(lo, hi);
    if n == 0 {
        ((lo + hi - 1) / 2) as u8
    } else {
        let s = hist.interval_sum(lo, hi);
        // floor(s / n + 1/2) in exact integer arithmetic
        ((2 * s + n) / (2 * n)) as u8
    }
}

/// Class map whose representatives are the rounded histogram-weighted class means.
pub fn class_representatives(hist: &Histogram, thresholds: &ThresholdSet) -> ClassMap {
    let boundaries = sentinel_boundaries(thresholds.as_slice());
    let representatives = boundaries
        .windows(2)
        .map(|w| representative(hist, w[0] as usize, w[1] as usize))
        .collect();
    ClassMap {
        boundaries,
        representatives,
    }
}

/// Replaces each pixel with its class representative.
pub fn apply(image: &GrayImage, class_map: &ClassMap) -> GrayImage {
    image.map_levels(&class_map.lookup_table())
}

/// Correlation between the image behind `hist` and its segmentation by
/// `thresholds`, computed from class moments only.
///
/// With `f(g)` the representative of the class holding gray `g`, the raw
/// moments `T, sum g, sum g^2, sum f, sum f^2, sum g f` (all weighted by the
/// histogram) are exact integers, so covariance and variances are formed as
/// `T * sum(ab) - sum(a) sum(b)` without rounding before the final division.
/// A constant segmentation scores 0.
pub fn fitness_from_histogram(hist: &Histogram, thresholds: &ThresholdSet) -> Result<f64> {
    if hist.is_constant() {
        return Err(Error::DegenerateImage("original image"));
    }
    Ok(correlation_of_partition(hist, thresholds.as_slice()))
}

/// Fitness for a validated, sorted threshold slice on a non-constant histogram.
pub(crate) fn correlation_of_partition(hist: &Histogram, thresholds: &[u8]) -> f64 {
    let total = hist.total() as i128;
    let sum_g = hist.interval_sum(0, GRAY_LEVELS) as i128;
    let sum_gg = hist.interval_sq_sum(0, GRAY_LEVELS) as i128;

    let mut sum_f: i128 = 0;
    let mut sum_ff: i128 = 0;
    let mut sum_gf: i128 = 0;
    let mut lo = 0usize;
    for k in 0..=thresholds.len() {
        let hi = thresholds.get(k).map_or(GRAY_LEVELS, |&t| t as usize);
        let n = hist.interval_count(lo, hi) as i128;
        if n > 0 {
            let rep = representative(hist, lo, hi) as i128;
            sum_f += rep * n;
            sum_ff += rep * rep * n;
            sum_gf += rep * hist.interval_sum(lo, hi) as i128;
        }
        lo = hi;
    }

    let cov = total * sum_gf - sum_g * sum_f;
    let var_orig = total * sum_gg - sum_g * sum_g;
    let var_seg = total * sum_ff - sum_f * sum_f;
    if var_seg == 0 || var_orig == 0 {
        return 0.0;
    }
    cov as f64 / (var_orig as f64 * var_seg as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hist_of(pixels: &[u8]) -> Histogram {
        GrayImage::new(pixels.len(), 1, pixels.to_vec())
            .unwrap()
            .histogram()
    }

    fn ts(v: &[u8]) -> ThresholdSet {
        ThresholdSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn threshold_set_validation() {
        assert!(ThresholdSet::new(vec![]).is_err());
        assert!(ThresholdSet::new(vec![0, 5]).is_err());
        assert!(ThresholdSet::new(vec![5, 5]).is_err());
        assert!(ThresholdSet::new(vec![9, 5]).is_err());
        assert_eq!(ts(&[1, 255]).classes(), 3);
        assert_eq!(ts(&[3, 40]).to_string(), "[3,40]");
    }

    #[test]
    fn random_set_single_and_full() {
        let mut rng = RngState::new(5);
        for _ in 0..100 {
            let t = random_threshold_set(&mut rng, 1).unwrap();
            assert_eq!(t.len(), 1);
            assert!(t.as_slice()[0] >= 1);
        }
        let full = random_threshold_set(&mut rng, 255).unwrap();
        assert_eq!(full.into_vec(), (1..=255).collect::<Vec<u8>>());
        assert_eq!(
            random_threshold_set(&mut rng, 256),
            Err(Error::TooManyLevels(256))
        );
    }

    #[test]
    fn random_set_marginals_are_uniform() {
        let draws = 100_000u64;
        let mut rng = RngState::new(2024);
        let mut freq = [0u64; 256];
        for _ in 0..draws {
            for &t in random_threshold_set(&mut rng, 4).unwrap().as_slice() {
                freq[t as usize] += 1;
            }
        }
        assert_eq!(freq[0], 0);
        let p = 4.0 / 255.0;
        let mean = draws as f64 * p;
        let sd = (draws as f64 * p * (1.0 - p)).sqrt();
        for (g, &f) in freq.iter().enumerate().skip(1) {
            assert!(
                (f as f64 - mean).abs() <= 3.0 * sd,
                "gray {g}: {f} vs {mean} +/- {}",
                3.0 * sd
            );
        }
    }

    #[test]
    fn repair_examples() {
        assert_eq!(repair(&[200.4, 10.6, 10.4]).unwrap(), ts(&[10, 11, 200]));
        assert_eq!(repair(&[-5.0, 300.0]).unwrap(), ts(&[1, 255]));
        assert_eq!(
            repair(&[128.0, 128.0, 128.0]).unwrap(),
            ts(&[128, 129, 130])
        );
    }

    #[test]
    fn repair_wraps_when_top_is_exhausted() {
        assert_eq!(repair(&[255.0, 255.0]).unwrap(), ts(&[1, 255]));
        assert_eq!(repair(&[254.0, 255.0, 255.0]).unwrap(), ts(&[1, 254, 255]));
        assert_eq!(repair(&[f64::NAN, 1.0]).unwrap(), ts(&[1, 2]));
    }

    #[test]
    fn repair_limits() {
        assert_eq!(repair(&[]), Err(Error::EmptyThresholds));
        assert_eq!(repair(&[7.0; 256]), Err(Error::Unrepairable(256)));
        assert_eq!(
            repair(&[7.0; 255]).unwrap().into_vec(),
            (1..=255).collect::<Vec<u8>>()
        );
    }

    #[test]
    fn representatives_examples() {
        let cm = class_representatives(&hist_of(&[10, 10, 200, 200]), &ts(&[100]));
        assert_eq!(cm.representatives(), &[10, 200]);

        // class 2 = [150, 256) is empty: floor((150 + 256 - 1) / 2) = 202
        let cm = class_representatives(&hist_of(&[0, 100]), &ts(&[50, 150]));
        assert_eq!(cm.representatives(), &[0, 100, 202]);
        assert_eq!(cm.boundaries(), &[0, 50, 150, 256]);

        let uniform: Vec<u8> = (0..=255).collect();
        let cm = class_representatives(&hist_of(&uniform), &ts(&[128]));
        assert_eq!(cm.representatives(), &[64, 192]);
    }

    #[test]
    fn representative_lies_in_its_class() {
        let pixels: Vec<u8> = (0..200).map(|i| (i * 37 % 251) as u8).collect();
        let h = hist_of(&pixels);
        let cm = class_representatives(&h, &ts(&[3, 4, 90, 91, 250]));
        for j in 0..cm.classes() {
            let (lo, hi) = cm.interval(j);
            let rep = cm.representatives()[j] as usize;
            assert!(lo <= rep && rep < hi, "class {j} [{lo},{hi}) rep {rep}");
        }
    }

    #[test]
    fn partition_covers_every_gray_once() {
        let cm = class_representatives(&hist_of(&[0, 255]), &ts(&[1, 17, 128, 255]));
        let mut per_class = vec![0usize; cm.classes()];
        for g in 0..=255u8 {
            let c = cm.class_of(g);
            let (lo, hi) = cm.interval(c);
            assert!(lo <= g as usize && (g as usize) < hi);
            per_class[c] += 1;
        }
        assert_eq!(per_class, vec![1, 16, 111, 127, 1]);
    }

    #[test]
    fn apply_examples() {
        let img = GrayImage::new(2, 2, vec![10, 10, 200, 200]).unwrap();
        let cm = class_representatives(&img.histogram(), &ts(&[100]));
        assert_eq!(apply(&img, &cm), img);

        let constant = GrayImage::filled(3, 2, 7).unwrap();
        let cm = class_representatives(&hist_of(&[0, 255]), &ts(&[5, 60]));
        let out = apply(&constant, &cm);
        assert!(out.pixels().iter().all(|&p| p == cm.representatives()[1]));

        let perm = GrayImage::new(16, 16, (0..=255).collect()).unwrap();
        let cm = ClassMap::new(&ts(&[128]), vec![64, 192]).unwrap();
        let out = apply(&perm, &cm);
        for (g, &p) in out.pixels().iter().enumerate() {
            assert_eq!(p, if g < 128 { 64 } else { 192 });
        }
    }

    #[test]
    fn fitness_perfect_and_degenerate() {
        let h = hist_of(&[10, 10, 200, 200]);
        assert_eq!(fitness_from_histogram(&h, &ts(&[100])).unwrap(), 1.0);
        // all pixels fall into the middle class
        assert_eq!(fitness_from_histogram(&h, &ts(&[5, 250])).unwrap(), 0.0);
        assert_eq!(
            fitness_from_histogram(&hist_of(&[9, 9, 9]), &ts(&[5])),
            Err(Error::DegenerateImage("original image"))
        );
    }

    // Reference: class means 40 and 212.5 -> 213, correlation of
    // [0,80,170,255] with [40,40,213,213] evaluated at 40 digits.
    #[test]
    fn fitness_four_pixel_reference() {
        let rho = fitness_from_histogram(&hist_of(&[0, 80, 170, 255]), &ts(&[100])).unwrap();
        assert!((rho - 0.902_057_126_030_529).abs() < 1e-12, "{rho}");
    }
}
