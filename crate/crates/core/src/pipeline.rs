//! End-to-end segmentation of an image.

use crate::cuckoo::{search, SearchParams, SearchReport};
use crate::error::Result;
use crate::image::GrayImage;
use crate::metrics::QualityReport;

#[derive(Debug, Clone, PartialEq)]
pub struct Segmentation {
    pub report: SearchReport,
    pub segmented: GrayImage,
    pub quality: QualityReport,
}

/// Histogram once, search, then paint the best class map onto the image.
///
/// The reported correlation is the search fitness, which equals the
/// pixel-domain correlation of `segmented` with `image`.
pub fn segment_image(image: &GrayImage, params: &SearchParams) -> Result<Segmentation> {
    let report = search(&image.histogram(), params)?;
    let segmented = report.best.segment(image);
    let quality = QualityReport::with_correlation(report.best.fitness, image, &segmented)?;
    Ok(Segmentation {
        report,
        segmented,
        quality,
    })
}
