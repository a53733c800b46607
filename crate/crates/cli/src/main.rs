use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use cuckoo_threshold::oracle::exhaustive_best_with;
use cuckoo_threshold::report::{write_report, write_trace_csv};
use cuckoo_threshold::{
    read_pgm, segment_image, write_pgm, EnumerationMode, GrayImage, LevyParams, PgmFormat,
    QualityReport, SearchParams, SegmentationResult, GRAY_LEVELS,
};

/// Multilevel gray-level thresholding with Cuckoo Search.
///
/// `--levels x` asks for x thresholds, i.e. x + 1 output gray classes.
#[derive(Debug, Parser)]
#[command(name = "cuckoo-threshold", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search thresholds for an image and write the segmented result.
    Segment(SegmentArgs),
    /// Find the optimal thresholds by exhaustive enumeration.
    Oracle(OracleArgs),
    /// Compare two images: correlation, MSE and PSNR.
    Metrics(MetricsArgs),
}

#[derive(Debug, Args)]
struct SegmentArgs {
    /// Input PGM (P2 or P5, maxval 255).
    #[arg(long)]
    input: PathBuf,
    /// Number of thresholds; the image is split into levels + 1 classes.
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..=255))]
    levels: u16,
    #[arg(long, default_value_t = 20)]
    nests: usize,
    #[arg(long, default_value_t = 50)]
    generations: usize,
    /// Fraction of non-best nests abandoned per generation.
    #[arg(long, default_value_t = 0.25)]
    pa: f64,
    /// Levy stability index, in (0, 2).
    #[arg(long, default_value_t = 1.5)]
    beta: f64,
    /// Levy step scale.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// 64-bit seed, or `random` to draw one (recorded in the report).
    #[arg(long, default_value = "0")]
    seed: String,
    /// Segmented image (binary PGM).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Run report document.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Best-fitness trace as CSV.
    #[arg(long)]
    trace_csv: Option<PathBuf>,
    /// Original and segmented gray-level histograms as CSV.
    #[arg(long)]
    histogram_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..=255))]
    levels: u16,
    /// Refuse to enumerate more threshold tuples than this.
    #[arg(long, default_value_t = 10_000_000)]
    max_combinations: u64,
    /// Enumerate every threshold in [1, 255] instead of only class boundaries
    /// between populated gray levels.
    #[arg(long)]
    unrestricted: bool,
    /// Segmented image (binary PGM).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MetricsArgs {
    #[arg(long)]
    original: PathBuf,
    #[arg(long)]
    segmented: PathBuf,
}

fn load(path: &Path) -> Result<(GrayImage, Vec<u8>)> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let image = read_pgm(&bytes).with_context(|| format!("parsing {}", path.display()))?;
    Ok((image, bytes))
}

fn store(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

fn parse_seed(raw: &str) -> Result<u64> {
    if raw == "random" {
        Ok(rand::random())
    } else {
        raw.parse()
            .with_context(|| format!("--seed must be a u64 or `random`, got {raw:?}"))
    }
}

/// `levels=<x> rho=<r> mse=<m> psnr=<p> thresholds=[t1,...]`
fn summary_line(result: &SegmentationResult, quality: &QualityReport) -> String {
    format!(
        "levels={} rho={} mse={} psnr={} thresholds={}",
        result.thresholds.len(),
        quality.correlation,
        quality.mse,
        quality.psnr,
        result.thresholds
    )
}

fn histogram_csv(original: &GrayImage, segmented: &GrayImage) -> Vec<u8> {
    let (a, b) = (original.histogram(), segmented.histogram());
    let mut out = String::from("gray,original,segmented\n");
    for g in 0..GRAY_LEVELS {
        let _ = writeln!(out, "{g},{},{}", a.counts()[g], b.counts()[g]);
    }
    out.into_bytes()
}

fn segment(args: SegmentArgs) -> Result<()> {
    let (image, bytes) = load(&args.input)?;
    let params = SearchParams {
        nests: args.nests,
        generations: args.generations,
        pa: args.pa,
        levy: LevyParams::new(args.beta, args.alpha)?,
        levels: args.levels as usize,
        seed: parse_seed(&args.seed)?,
    };
    let seg = segment_image(&image, &params)?;

    if let Some(path) = &args.output {
        store(path, &write_pgm(&seg.segmented, PgmFormat::Binary))?;
    }
    if let Some(path) = &args.report {
        let digest = sha256_hex(&bytes);
        store(
            path,
            &write_report(&seg.report, &seg.quality, Some(&digest)),
        )?;
    }
    if let Some(path) = &args.trace_csv {
        store(path, &write_trace_csv(&seg.report.trace))?;
    }
    if let Some(path) = &args.histogram_csv {
        store(path, &histogram_csv(&image, &seg.segmented))?;
    }
    println!("{}", summary_line(&seg.report.best, &seg.quality));
    Ok(())
}

fn oracle(args: OracleArgs) -> Result<()> {
    let (image, _) = load(&args.input)?;
    let mode = if args.unrestricted {
        EnumerationMode::Unrestricted
    } else {
        EnumerationMode::Restricted
    };
    let found = exhaustive_best_with(
        &image.histogram(),
        args.levels as usize,
        args.max_combinations,
        mode,
    )?;
    let segmented = found.best.segment(&image);
    let quality = QualityReport::with_correlation(found.best.fitness, &image, &segmented)?;
    if let Some(path) = &args.output {
        store(path, &write_pgm(&segmented, PgmFormat::Binary))?;
    }
    println!("{}", summary_line(&found.best, &quality));
    Ok(())
}

fn metrics(args: MetricsArgs) -> Result<()> {
    let (original, _) = load(&args.original)?;
    let (segmented, _) = load(&args.segmented)?;
    let q = QualityReport::compare(&original, &segmented)?;
    println!("rho={} mse={} psnr={}", q.correlation, q.mse, q.psnr);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let degenerate_code = match cli.command {
        Command::Metrics(_) => 1,
        _ => 2,
    };
    let result = match cli.command {
        Command::Segment(args) => segment(args),
        Command::Oracle(args) => oracle(args),
        Command::Metrics(args) => metrics(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let degenerate = err
                .chain()
                .filter_map(|e| e.downcast_ref::<cuckoo_threshold::Error>())
                .any(cuckoo_threshold::Error::is_degenerate);
            ExitCode::from(if degenerate { degenerate_code } else { 1 })
        }
    }
}
