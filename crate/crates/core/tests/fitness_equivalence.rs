mod common;

use cuckoo_threshold::{
    apply, class_representatives, correlation, fitness_from_histogram, pearson, GrayImage,
    ThresholdSet,
};
use proptest::prelude::*;

fn image_strategy() -> impl Strategy<Value = GrayImage> {
    (1usize..=64, 1usize..=64, 0u8..=255, 1u8..=255)
        .prop_filter("at least two pixels", |(w, h, _, _)| w * h >= 2)
        .prop_flat_map(|(w, h, lo, span)| {
            let hi = lo.saturating_add(span);
            proptest::collection::vec(lo..=hi, w * h)
                .prop_map(move |px| GrayImage::new(w, h, px).unwrap())
        })
}

fn thresholds_strategy() -> impl Strategy<Value = ThresholdSet> {
    proptest::collection::btree_set(1u8..=255, 1..=8)
        .prop_map(|s| ThresholdSet::new(s.into_iter().collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn histogram_path_matches_pixel_path(img in image_strategy(), t in thresholds_strategy()) {
        let hist = img.histogram();
        prop_assume!(!hist.is_constant());
        let rho = fitness_from_histogram(&hist, &t).unwrap();
        let seg = apply(&img, &class_representatives(&hist, &t));
        prop_assert_eq!(seg.pixels(), &common::pixel_segment(img.pixels(), t.as_slice())[..]);
        if seg.histogram().is_constant() {
            prop_assert_eq!(rho, 0.0);
        } else {
            let oracle = common::pixel_rho(img.pixels(), seg.pixels());
            prop_assert!((rho - oracle).abs() <= 1e-12, "{} vs {}", rho, oracle);
            let lib = correlation(&img, &seg).unwrap();
            prop_assert!((rho - lib).abs() <= 1e-12);
        }
        // class means never anti-correlate
        prop_assert!((0.0..=1.0 + 1e-15).contains(&rho));
    }

    #[test]
    fn apply_is_idempotent(img in image_strategy(), t in thresholds_strategy()) {
        let cm = class_representatives(&img.histogram(), &t);
        let once = apply(&img, &cm);
        let cm2 = class_representatives(&once.histogram(), &t);
        // each nonempty class maps to a representative inside the class, and
        // the mean of a constant class is that constant
        prop_assert_eq!(apply(&once, &cm2), once.clone());
        prop_assert_eq!(apply(&once, &cm), once);
    }

    #[test]
    fn few_valued_images_segment_perfectly(
        values in proptest::collection::btree_set(0u8..=255, 2..=6),
        picks in proptest::collection::vec(any::<prop::sample::Index>(), 16..200),
    ) {
        let values: Vec<u8> = values.into_iter().collect();
        let mut px: Vec<u8> = picks.iter().map(|i| values[i.index(values.len())]).collect();
        px.extend_from_slice(&values);
        let img = GrayImage::new(px.len(), 1, px).unwrap();
        let t = ThresholdSet::new(values.windows(2).map(|w| w[0] + 1).collect()).unwrap();
        let rho = fitness_from_histogram(&img.histogram(), &t).unwrap();
        prop_assert_eq!(rho, 1.0);
    }

    #[test]
    fn correlation_is_symmetric(a in image_strategy()) {
        let b = GrayImage::new(a.width(), a.height(), a.pixels().iter().rev().copied().collect()).unwrap();
        prop_assume!(!a.histogram().is_constant());
        prop_assert_eq!(correlation(&a, &b).unwrap(), correlation(&b, &a).unwrap());
    }

    #[test]
    fn correlation_ignores_positive_affine_maps(
        xs in proptest::collection::vec(-1e3f64..1e3, 2..500),
        scale in 1e-3f64..1e3,
        shift in -1e4f64..1e4,
    ) {
        let ys: Vec<f64> = xs.iter().map(|x| scale * x + shift).collect();
        prop_assume!(xs.iter().any(|&x| (x - xs[0]).abs() > 1e-6));
        let r = pearson(&xs, &ys).unwrap();
        prop_assert!((r - 1.0).abs() < 1e-9, "{}", r);
    }
}

#[test]
fn four_pixel_image_matches_pixel_oracle() {
    let img = GrayImage::new(4, 1, vec![0, 80, 170, 255]).unwrap();
    let t = ThresholdSet::new(vec![100]).unwrap();
    let rho = fitness_from_histogram(&img.histogram(), &t).unwrap();
    let seg = common::pixel_segment(img.pixels(), &[100]);
    assert_eq!(seg, vec![40, 40, 213, 213]);
    assert!((rho - common::pixel_rho(img.pixels(), &seg)).abs() <= 1e-12);
}
