#![allow(dead_code)]

use cuckoo_threshold::{GrayImage, RngState};

/// Plain two-pass Pearson correlation written straight from the definition,
/// independent of the library's code paths.
pub fn pixel_rho(a: &[u8], b: &[u8]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len() as f64;
    let ma = a.iter().map(|&v| v as f64).sum::<f64>() / n;
    let mb = b.iter().map(|&v| v as f64).sum::<f64>() / n;
    let mut num = 0.0;
    let mut da2 = 0.0;
    let mut db2 = 0.0;
    for i in 0..a.len() {
        let da = a[i] as f64 - ma;
        let db = b[i] as f64 - mb;
        num += da * db;
        da2 += da * da;
        db2 += db * db;
    }
    (num / n) / ((da2 / n).sqrt() * (db2 / n).sqrt())
}

/// Segments by thresholds using rounded class means, computed per pixel.
pub fn pixel_segment(pixels: &[u8], thresholds: &[u8]) -> Vec<u8> {
    let class = |p: u8| thresholds.iter().filter(|&&t| p >= t).count();
    let k = thresholds.len() + 1;
    let mut sums = vec![0u64; k];
    let mut counts = vec![0u64; k];
    for &p in pixels {
        sums[class(p)] += p as u64;
        counts[class(p)] += 1;
    }
    pixels
        .iter()
        .map(|&p| {
            let c = class(p);
            (sums[c] as f64 / counts[c] as f64 + 0.5).floor() as u8
        })
        .collect()
}

/// 64x64 image mixing two clipped Gaussian gray clusters in equal shares.
pub fn bimodal_image(seed: u64) -> GrayImage {
    let mut rng = RngState::new(seed);
    let pixels = (0..64 * 64)
        .map(|_| {
            let mean = if rng.next_f64() < 0.5 { 60.0 } else { 190.0 };
            (mean + 10.0 * rng.standard_normal())
                .round()
                .clamp(0.0, 255.0) as u8
        })
        .collect();
    GrayImage::new(64, 64, pixels).unwrap()
}

/// Least-squares slope of `ys` against `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Slope of log P(|s| > t) against log t at 25 log-spaced points in [lo, hi].
pub fn tail_slope(samples: &[f64], lo: f64, hi: f64) -> f64 {
    let mut mags: Vec<f64> = samples.iter().map(|s| s.abs()).collect();
    mags.sort_by(f64::total_cmp);
    let n = mags.len() as f64;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for k in 0..25 {
        let t = lo * (hi / lo).powf(k as f64 / 24.0);
        let above = mags.len() - mags.partition_point(|&m| m <= t);
        if above > 0 {
            xs.push(t.ln());
            ys.push((above as f64 / n).ln());
        }
    }
    slope(&xs, &ys)
}

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}
