//! Brute-force enumeration of threshold tuples, used to validate the
//! stochastic search on instances small enough to solve exactly.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::exec;
use crate::image::Histogram;
use crate::threshold::{correlation_of_partition, SegmentationResult, ThresholdSet};

/// Which thresholds the enumeration considers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnumerationMode {
    /// Only the smallest threshold separating each pair of consecutive
    /// populated gray levels (`v_k + 1`), padded with the lowest unused
    /// values when there are fewer candidates than thresholds.
    #[default]
    Restricted,
    /// Every value in `[1, 255]`.
    Unrestricted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best: SegmentationResult,
    /// Number of tuples scored.
    pub enumerated: u64,
    /// Size of the candidate threshold pool.
    pub candidates: usize,
}

/// Exact binomial coefficient `C(values, x)`.
pub fn combination_count(values: usize, x: usize) -> Result<BigUint> {
    if x == 0 || x > values {
        return Err(Error::InvalidArgs(format!(
            "need 1 <= x <= values, got x = {x}, values = {values}"
        )));
    }
    Ok(binomial(values, x))
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Candidate threshold pool for `mode`, ascending.
pub fn candidate_thresholds(hist: &Histogram, levels: usize, mode: EnumerationMode) -> Vec<u8> {
    match mode {
        EnumerationMode::Unrestricted => (1..=255).collect(),
        EnumerationMode::Restricted => {
            let present = hist.present_levels();
            let mut pool: Vec<u8> = present.windows(2).map(|w| w[0] + 1).collect();
            let mut filler = 1u8;
            while pool.len() < levels && filler != 0 {
                if !pool.contains(&filler) {
                    pool.push(filler);
                }
                filler = filler.wrapping_add(1);
            }
            pool.sort_unstable();
            pool
        }
    }
}

/// Best `levels`-threshold set in restricted mode. Ties go to the
/// lexicographically smallest tuple.
pub fn exhaustive_best(
    hist: &Histogram,
    levels: usize,
    max_combinations: u64,
) -> Result<OracleResult> {
    exhaustive_best_with(hist, levels, max_combinations, EnumerationMode::Restricted)
}

/// Enumerates in parallel over the first tuple element when the `parallel`
/// feature is enabled. The result does not depend on the schedule.
pub fn exhaustive_best_with(
    hist: &Histogram,
    levels: usize,
    max_combinations: u64,
    mode: EnumerationMode,
) -> Result<OracleResult> {
    let pool = prepare(hist, levels, max_combinations, mode)?;
    let partials = exec::map_range(0..pool.len() - levels + 1, |first| {
        scan_prefix(hist, &pool, levels, first)
    });
    finish(hist, pool.len(), partials)
}

/// Single-threaded twin of [`exhaustive_best_with`].
pub fn exhaustive_best_seq(
    hist: &Histogram,
    levels: usize,
    max_combinations: u64,
    mode: EnumerationMode,
) -> Result<OracleResult> {
    let pool = prepare(hist, levels, max_combinations, mode)?;
    let partials = (0..pool.len() - levels + 1)
        .map(|first| scan_prefix(hist, &pool, levels, first))
        .collect();
    finish(hist, pool.len(), partials)
}

fn prepare(
    hist: &Histogram,
    levels: usize,
    max_combinations: u64,
    mode: EnumerationMode,
) -> Result<Vec<u8>> {
    if levels == 0 || levels > 255 {
        return Err(Error::InvalidArgs(format!(
            "levels must lie in [1, 255], got {levels}"
        )));
    }
    if hist.is_constant() {
        return Err(Error::DegenerateImage("original image"));
    }
    let pool = candidate_thresholds(hist, levels, mode);
    let count = binomial(pool.len(), levels);
    if count > BigUint::from(max_combinations) {
        return Err(Error::TooLarge {
            candidates: pool.len(),
            levels,
            count: count.to_string(),
            limit: max_combinations,
            full_space: binomial(256, levels).to_string(),
        });
    }
    Ok(pool)
}

struct Partial {
    fitness: f64,
    tuple: Vec<u8>,
    enumerated: u64,
}

/// Scores every tuple whose first element is `pool[first]`, in
/// lexicographic order, keeping the first maximum.
fn scan_prefix(hist: &Histogram, pool: &[u8], levels: usize, first: usize) -> Partial {
    let m = pool.len();
    let mut idx: Vec<usize> = (first..first + levels).collect();
    let mut tuple: Vec<u8> = idx.iter().map(|&i| pool[i]).collect();
    let mut best = Partial {
        fitness: f64::NEG_INFINITY,
        tuple: tuple.clone(),
        enumerated: 0,
    };
    loop {
        let fitness = correlation_of_partition(hist, &tuple);
        best.enumerated += 1;
        if fitness > best.fitness {
            best.fitness = fitness;
            best.tuple.copy_from_slice(&tuple);
        }
        // advance positions 1.. like an odometer; position 0 stays fixed
        let mut pos = levels;
        loop {
            if pos == 1 {
                return best;
            }
            pos -= 1;
            if idx[pos] < m - levels + pos {
                break;
            }
        }
        idx[pos] += 1;
        tuple[pos] = pool[idx[pos]];
        for k in pos + 1..levels {
            idx[k] = idx[k - 1] + 1;
            tuple[k] = pool[idx[k]];
        }
    }
}

fn finish(hist: &Histogram, candidates: usize, partials: Vec<Partial>) -> Result<OracleResult> {
    let enumerated = partials.iter().map(|p| p.enumerated).sum();
    // partials are ordered by first element, so a strict comparison keeps
    // the lexicographically smallest among equal maxima
    let winner = partials
        .into_iter()
        .reduce(|acc, p| if p.fitness > acc.fitness { p } else { acc })
        .expect("at least one prefix");
    let best = SegmentationResult::evaluate(hist, ThresholdSet::new(winner.tuple)?)?;
    Ok(OracleResult {
        best,
        enumerated,
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::GrayImage;

    #[test]
    fn counts() {
        assert_eq!(
            combination_count(256, 4).unwrap(),
            BigUint::from(174_792_640u64)
        );
        assert_eq!(combination_count(256, 1).unwrap(), BigUint::from(256u32));
        assert_eq!(combination_count(16, 2).unwrap(), BigUint::from(120u32));
        assert_eq!(combination_count(5, 5).unwrap(), BigUint::from(1u32));
        assert!(combination_count(3, 4).is_err());
        assert!(combination_count(3, 0).is_err());
        // C(256, 128) needs more than 128 bits
        assert!(combination_count(256, 128).unwrap().bits() > 128);
    }

    fn two_valued() -> Histogram {
        GrayImage::new(4, 1, vec![40, 200, 200, 40])
            .unwrap()
            .histogram()
    }

    #[test]
    fn two_values_pick_smallest_separator() {
        for mode in [EnumerationMode::Restricted, EnumerationMode::Unrestricted] {
            let r = exhaustive_best_with(&two_valued(), 1, 1000, mode).unwrap();
            assert_eq!(r.best.fitness, 1.0);
            assert_eq!(r.best.thresholds.as_slice(), &[41]);
        }
    }

    #[test]
    fn restricted_pool() {
        let h = two_valued();
        assert_eq!(
            candidate_thresholds(&h, 1, EnumerationMode::Restricted),
            vec![41]
        );
        assert_eq!(
            candidate_thresholds(&h, 3, EnumerationMode::Restricted),
            vec![1, 2, 41]
        );
        let r = exhaustive_best(&h, 3, 1000).unwrap();
        assert_eq!(r.best.fitness, 1.0);
    }

    #[test]
    fn unrestricted_enumerates_full_space() {
        let h = two_valued();
        for x in 1..=2 {
            let r = exhaustive_best_with(&h, x, u64::MAX, EnumerationMode::Unrestricted).unwrap();
            assert_eq!(
                BigUint::from(r.enumerated),
                combination_count(255, x).unwrap()
            );
        }
    }

    #[test]
    fn guard_reports_counts() {
        let h = GrayImage::new(256, 1, (0..=255).collect())
            .unwrap()
            .histogram();
        let err = exhaustive_best(&h, 4, 10_000_000).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("174792640"), "{msg}");
        assert!(msg.contains("172061505"), "{msg}");
    }

    #[test]
    fn degenerate_and_bad_args() {
        let flat = GrayImage::filled(2, 2, 3).unwrap().histogram();
        assert!(exhaustive_best(&flat, 1, 100).unwrap_err().is_degenerate());
        assert!(exhaustive_best(&two_valued(), 0, 100).is_err());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let px: Vec<u8> = (0..400u32).map(|i| ((i * 7919) % 97 * 2) as u8).collect();
        let h = GrayImage::new(20, 20, px).unwrap().histogram();
        let a = exhaustive_best_with(&h, 2, u64::MAX, EnumerationMode::Restricted).unwrap();
        let b = exhaustive_best_seq(&h, 2, u64::MAX, EnumerationMode::Restricted).unwrap();
        assert_eq!(a, b);
    }
}
