//! Cuckoo Search over threshold sets.
//!
//! One generation:
//!
//! 1. pick a random nest `i` and lay a cuckoo egg by a Levy flight from it,
//! 2. pick a random nest `j != i` and replace it when the egg is strictly fitter,
//! 3. rebuild the `ceil(pa * (n - 1))` worst nests (never the best one) from
//!    fresh uniform random threshold sets,
//! 4. record the best fitness in the population.
//!
//! The best nest is never discarded, so the recorded trace is non-decreasing.

use crate::error::{Error, Result};
use crate::exec;
use crate::image::Histogram;
use crate::levy::{levy_step, LevyParams, RngState};
use crate::threshold::{
    correlation_of_partition, random_threshold_set, repair, SegmentationResult, ThresholdSet,
    MAX_THRESHOLDS,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchParams {
    /// Population size `n`.
    pub nests: usize,
    pub generations: usize,
    /// Fraction of non-best nests rebuilt each generation.
    pub pa: f64,
    pub levy: LevyParams,
    /// Number of thresholds `x`; the image is split into `x + 1` classes.
    pub levels: usize,
    pub seed: u64,
}

impl SearchParams {
    /// 20 nests, 50 generations, `pa = 0.25`, `beta = 1.5`, `alpha = 1`, seed 0.
    pub fn new(levels: usize) -> Self {
        Self {
            nests: 20,
            generations: 50,
            pa: 0.25,
            levy: LevyParams::default(),
            levels,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.nests < 2 {
            return Err(Error::InvalidParams(format!(
                "need at least 2 nests, got {}",
                self.nests
            )));
        }
        if self.generations == 0 {
            return Err(Error::InvalidParams("generations must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.pa) {
            return Err(Error::InvalidParams(format!(
                "pa must lie in [0, 1], got {}",
                self.pa
            )));
        }
        if self.levels == 0 || self.levels > MAX_THRESHOLDS {
            return Err(Error::InvalidParams(format!(
                "levels must lie in [1, {MAX_THRESHOLDS}], got {}",
                self.levels
            )));
        }
        Ok(())
    }
}

/// A candidate solution and its fitness.
#[derive(Debug, Clone, PartialEq)]
pub struct Nest {
    pub thresholds: ThresholdSet,
    pub fitness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub best: SegmentationResult,
    /// Best fitness after each generation.
    pub trace: Vec<f64>,
    pub params: SearchParams,
    /// Fitness evaluations performed, including the initial population.
    pub evaluations: u64,
    /// Population after the last generation.
    pub population: Vec<Nest>,
}

/// Index of the fittest nest; ties go to the lower index.
pub fn best_index(population: &[Nest]) -> usize {
    let mut best = 0;
    for (k, nest) in population.iter().enumerate().skip(1) {
        if nest.fitness > population[best].fitness {
            best = k;
        }
    }
    best
}

/// Number of nests rebuilt per generation: `ceil(pa * (n - 1))`.
pub fn abandon_count(nests: usize, pa: f64) -> usize {
    let others = nests.saturating_sub(1);
    ((pa * others as f64).ceil() as usize).min(others)
}

/// Deterministic part of a Levy move.
///
/// Coordinate `k` moves to `current_k + alpha * steps[k] * (current_k - best_k)`.
/// When `current == best` the difference is replaced by one gray level so
/// the best nest can still move. The result goes through [`repair`].
pub fn cuckoo_move(
    current: &ThresholdSet,
    best: &ThresholdSet,
    alpha: f64,
    steps: &[f64],
) -> ThresholdSet {
    assert_eq!(current.len(), best.len(), "nests must have equal length");
    assert_eq!(current.len(), steps.len(), "one step per coordinate");
    let same = current == best;
    let raw: Vec<f64> = current
        .as_slice()
        .iter()
        .zip(best.as_slice())
        .zip(steps)
        .map(|((&c, &b), &step)| {
            let scale = if same { 1.0 } else { c as f64 - b as f64 };
            c as f64 + alpha * step * scale
        })
        .collect();
    repair(&raw).expect("length is bounded by an existing threshold set")
}

/// Lays a cuckoo egg by a Levy flight from `current`, one independent step
/// per coordinate drawn in coordinate order.
pub fn propose_cuckoo(
    rng: &mut RngState,
    current: &ThresholdSet,
    best: &ThresholdSet,
    levy: &LevyParams,
) -> ThresholdSet {
    let steps: Vec<f64> = (0..current.len()).map(|_| levy_step(rng, levy)).collect();
    cuckoo_move(current, best, levy.alpha(), &steps)
}

fn fresh_nests(rng: &mut RngState, count: usize, levels: usize, hist: &Histogram) -> Vec<Nest> {
    // draws stay sequential so the stream does not depend on scheduling
    let sets: Vec<ThresholdSet> = (0..count)
        .map(|_| random_threshold_set(rng, levels).expect("levels validated"))
        .collect();
    let scores = exec::map_slice(&sets, |t| correlation_of_partition(hist, t.as_slice()));
    sets.into_iter()
        .zip(scores)
        .map(|(thresholds, fitness)| Nest {
            thresholds,
            fitness,
        })
        .collect()
}

/// Rebuilds the worst `ceil(pa * (n - 1))` non-best nests and returns how
/// many were replaced.
///
/// Worst-first order is ascending fitness with ties on the lower index.
/// Replacement sets are drawn in that order.
pub fn abandon_worst(
    rng: &mut RngState,
    population: &mut [Nest],
    pa: f64,
    hist: &Histogram,
) -> Result<usize> {
    if population.len() < 2 {
        return Err(Error::InvalidParams(
            "abandonment needs a population of at least 2".into(),
        ));
    }
    if hist.is_constant() {
        return Err(Error::DegenerateImage("original image"));
    }
    let count = abandon_count(population.len(), pa);
    if count == 0 {
        return Ok(0);
    }
    let best = best_index(population);
    let mut order: Vec<usize> = (0..population.len()).filter(|&k| k != best).collect();
    order.sort_by(|&a, &b| {
        population[a]
            .fitness
            .total_cmp(&population[b].fitness)
            .then(a.cmp(&b))
    });
    let levels = population[best].thresholds.len();
    let fresh = fresh_nests(rng, count, levels, hist);
    for (slot, nest) in order.into_iter().zip(fresh) {
        population[slot] = nest;
    }
    Ok(count)
}

/// Runs one seeded search.
pub fn search(hist: &Histogram, params: &SearchParams) -> Result<SearchReport> {
    params.validate()?;
    if hist.is_constant() {
        return Err(Error::DegenerateImage("original image"));
    }
    let n = params.nests;
    let mut rng = RngState::new(params.seed);
    let mut population = fresh_nests(&mut rng, n, params.levels, hist);
    let mut evaluations = n as u64;
    let mut trace = Vec::with_capacity(params.generations);

    for _ in 0..params.generations {
        let i = rng.below(n as u64) as usize;
        let b = best_index(&population);
        let egg = propose_cuckoo(
            &mut rng,
            &population[i].thresholds,
            &population[b].thresholds,
            &params.levy,
        );
        let egg_fitness = correlation_of_partition(hist, egg.as_slice());
        evaluations += 1;

        let mut j = rng.below(n as u64 - 1) as usize;
        if j >= i {
            j += 1;
        }
        if egg_fitness > population[j].fitness {
            population[j] = Nest {
                thresholds: egg,
                fitness: egg_fitness,
            };
        }

        evaluations += abandon_worst(&mut rng, &mut population, params.pa, hist)? as u64;
        trace.push(population[best_index(&population)].fitness);
    }

    let best =
        SegmentationResult::evaluate(hist, population[best_index(&population)].thresholds.clone())?;
    Ok(SearchReport {
        best,
        trace,
        params: *params,
        evaluations,
        population,
    })
}

/// Independent runs `0..runs`; run `k` is seeded with `params.seed ^ k`.
/// Runs execute on the rayon pool when the `parallel` feature is enabled.
pub fn search_runs(
    hist: &Histogram,
    params: &SearchParams,
    runs: usize,
) -> Result<Vec<SearchReport>> {
    exec::map_range(0..runs, |k| search(hist, &stream_params(params, k)))
        .into_iter()
        .collect()
}

/// Sequential twin of [`search_runs`]; produces identical reports.
pub fn search_runs_seq(
    hist: &Histogram,
    params: &SearchParams,
    runs: usize,
) -> Result<Vec<SearchReport>> {
    (0..runs)
        .map(|k| search(hist, &stream_params(params, k)))
        .collect()
}

fn stream_params(params: &SearchParams, k: usize) -> SearchParams {
    params.with_seed(RngState::for_stream(params.seed, k as u64).seed())
}
