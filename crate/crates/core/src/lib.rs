//! Multilevel gray-level thresholding driven by Cuckoo Search.
//!
//! An 8-bit image is split into `x + 1` gray classes by `x` thresholds.
//! Each class is painted with its mean gray value and the thresholds are
//! chosen to maximize the Pearson correlation between the original and the
//! segmented image. The search is a Cuckoo Search with Levy-flight moves;
//! fitness is computed from the 256-bin histogram so its cost does not
//! depend on the pixel count.
//!
//! ```
//! use cuckoo_threshold::{search, GrayImage, SearchParams};
//!
//! let img = GrayImage::new(4, 1, vec![12, 13, 200, 210]).unwrap();
//! let report = search(&img.histogram(), &SearchParams::new(1).with_seed(3)).unwrap();
//! let segmented = report.best.segment(&img);
//! assert_eq!(segmented.pixels(), &[13, 13, 205, 205]);
//! ```
//!
//! With the default `parallel` feature the exhaustive oracle, batch runs and
//! nest re-evaluation use rayon; without it everything runs on the calling
//! thread with identical results.

pub mod cuckoo;
pub mod error;
mod exec;
pub mod image;
pub mod levy;
pub mod metrics;
pub mod oracle;
pub mod pgm;
pub mod pipeline;
pub mod report;
pub mod threshold;

pub use cuckoo::{search, search_runs, search_runs_seq, Nest, SearchParams, SearchReport};
pub use error::{Error, Result};
pub use image::{GrayImage, Histogram, GRAY_LEVELS};
pub use levy::{levy_step, mantegna_sigma, LevyParams, RngState};
pub use metrics::{correlation, mse, pearson, psnr, Psnr, QualityReport};
pub use oracle::{combination_count, exhaustive_best, EnumerationMode, OracleResult};
pub use pgm::{read_pgm, write_pgm, PgmFormat};
pub use pipeline::{segment_image, Segmentation};
pub use report::{parse_report, write_report, ParsedReport};
pub use threshold::{
    apply, class_representatives, fitness_from_histogram, random_threshold_set, repair, ClassMap,
    SegmentationResult, ThresholdSet,
};
