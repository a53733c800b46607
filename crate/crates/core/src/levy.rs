//! Seeded random source and Levy-flight step sampling.
//!
//! The generator is xoshiro256** whose four state words are the first four
//! SplitMix64 outputs of the 64-bit seed. Every derived draw is defined on
//! top of [`RngState::next_u64`] so a run can be replayed in any language
//! that implements the same two published generators:
//!
//! * uniform `f64` in `[0, 1)`: `(next_u64() >> 11) * 2^-53`
//! * bounded integer in `[0, n)`: rejection of outputs below `(2^64 - n) mod n`, then `% n`
//! * standard normal: Box-Muller cosine branch, `sqrt(-2 ln(1 - u1)) * cos(2 pi u2)`,
//!   consuming two uniforms per normal (the sine twin is discarded)
//!
//! Transcendentals go through `libm` so results do not depend on the host
//! C library.
//!
//! Levy steps use Mantegna's algorithm: `u / |v|^(1/beta)` with
//! `u ~ N(0, sigma_u^2)` and `v ~ N(0, 1)`. The step length then has a power
//! law tail `P(|s| > t) ~ t^-beta`, i.e. a density exponent `lambda = 1 + beta`.

use std::f64::consts::PI;

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::error::{Error, Result};

const MAX_NORMAL_REDRAWS: usize = 64;

/// Single-owner deterministic random stream.
///
/// Parallel runs must each own a stream; run `k` of a batch seeded with `s`
/// uses seed `s ^ k` (see [`RngState::for_stream`]).
#[derive(Debug, Clone)]
pub struct RngState {
    seed: u64,
    inner: Xoshiro256StarStar,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: Xoshiro256StarStar::seed_from_u64(seed),
        }
    }

    /// Stream `index` derived from `base_seed` as `base_seed ^ index`.
    pub fn for_stream(base_seed: u64, index: u64) -> Self {
        Self::new(base_seed ^ index)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)` with 53 bits of resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Unbiased uniform integer in `[0, n)`. `n` must be nonzero.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0) has an empty range");
        let threshold = n.wrapping_neg() % n;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % n;
            }
        }
    }

    pub fn standard_normal(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * PI * u2)
    }
}

/// Step distribution parameters: stability index `beta` and step scale `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyParams {
    beta: f64,
    alpha: f64,
    sigma_u: f64,
}

impl LevyParams {
    pub fn new(beta: f64, alpha: f64) -> Result<Self> {
        let sigma_u = mantegna_sigma(beta)?;
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidAlpha(alpha));
        }
        Ok(Self {
            beta,
            alpha,
            sigma_u,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Density tail exponent `lambda = 1 + beta`, always in `(1, 3)`.
    pub fn lambda(&self) -> f64 {
        1.0 + self.beta
    }

    pub fn sigma_u(&self) -> f64 {
        self.sigma_u
    }
}

impl Default for LevyParams {
    fn default() -> Self {
        Self::new(1.5, 1.0).expect("default levy parameters are valid")
    }
}

/// Scale of the numerator normal in Mantegna's algorithm.
///
/// `sigma_u = [ G(1+b) sin(pi b / 2) / ( G((1+b)/2) b 2^((b-1)/2) ) ]^(1/b)`
pub fn mantegna_sigma(beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 2.0) {
        return Err(Error::InvalidBeta(beta));
    }
    let num = libm::tgamma(1.0 + beta) * libm::sin(PI * beta / 2.0);
    let den = libm::tgamma((1.0 + beta) / 2.0) * beta * libm::pow(2.0, (beta - 1.0) / 2.0);
    Ok(libm::pow(num / den, 1.0 / beta))
}

/// Draws one signed Levy step (not yet multiplied by `alpha`).
///
/// Consumes two normals; the denominator normal is redrawn in the
/// practically impossible event that it is exactly zero.
pub fn levy_step(rng: &mut RngState, params: &LevyParams) -> f64 {
    let u = params.sigma_u * rng.standard_normal();
    let mut v = rng.standard_normal();
    let mut redraws = 0;
    while v == 0.0 && redraws < MAX_NORMAL_REDRAWS {
        v = rng.standard_normal();
        redraws += 1;
    }
    if v == 0.0 {
        v = f64::MIN_POSITIVE;
    }
    u / libm::pow(v.abs(), 1.0 / params.beta)
}
