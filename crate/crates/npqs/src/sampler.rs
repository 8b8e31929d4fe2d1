//! Seeded sampling on the unit ball of ℂⁿ.
//!
//! Streams are counter-based: a [`SampleStream`] is addressed by
//! `(seed, stream id)` and any shard of an estimate can be generated
//! independently of the others, so results depend only on the configuration
//! and never on worker scheduling.
//!
//! Radial law: a point of the ball is `r · ξ` with `ξ` uniform on the unit
//! sphere of ℝ²ⁿ (normalized Gaussian vector). Under the normalized volume
//! `dV`, `t = r²` is Beta(n, 1), i.e. `r = U^{1/(2n)}`; under the tilted
//! measure `dV_τ ∝ (1−r²)^τ dV`, `t` is Beta(n, τ+1).

use alloc::format;
use alloc::string::String;
use core::f64::consts::PI;
use core::fmt;

#[allow(unused_imports)] // f64 math methods come from this trait without std
use num_traits::Float;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ball::{BallPoint, Coords};
use num_complex::Complex64;

/// How the radius of a sample is drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialMode {
    /// Uniform with respect to normalized volume: `r = U^{1/(2n)}`.
    UniformVolume,
    /// Importance tilt: radial density ∝ `r^{2n−1} (1−r²)^τ`, τ > −1.
    BetaTilt(f64),
}

impl RadialMode {
    pub fn tilt(&self) -> f64 {
        match self {
            RadialMode::UniformVolume => 0.0,
            RadialMode::BetaTilt(t) => *t,
        }
    }
}

/// Deterministic sampling plan: seed, total budget, radial law and shard
/// count. The shard partition is a pure function of `(seed, shard index)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub n_samples: u64,
    pub radial_mode: RadialMode,
    pub shards: u32,
}

impl SamplerConfig {
    pub fn new(seed: u64, n_samples: u64) -> Self {
        Self { seed, n_samples, radial_mode: RadialMode::UniformVolume, shards: 8 }
    }

    pub fn with_samples(mut self, n_samples: u64) -> Self {
        self.n_samples = n_samples;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_shards(mut self, shards: u32) -> Self {
        self.shards = shards;
        self
    }

    pub fn with_radial_mode(mut self, mode: RadialMode) -> Self {
        self.radial_mode = mode;
        self
    }

    pub fn validate(&self) -> Result<(), SamplerError> {
        if self.n_samples == 0 {
            return Err(SamplerError::BadConfig(String::from("n_samples must be >= 1")));
        }
        if self.shards == 0 {
            return Err(SamplerError::BadConfig(String::from("shards must be >= 1")));
        }
        if let RadialMode::BetaTilt(t) = self.radial_mode {
            if !(t > -1.0) {
                return Err(SamplerError::BadConfig(format!(
                    "radial tilt must be > -1, got {t}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SamplerError {
    /// α ≤ −1 makes the normalizing constant of dV_α singular.
    AlphaOutOfRange { alpha: f64 },
    BadConfig(String),
}

impl fmt::Display for SamplerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SamplerError::AlphaOutOfRange { alpha } => {
                write!(f, "alpha must be > -1 (Gamma(alpha+1) singular), got {alpha}")
            }
            SamplerError::BadConfig(msg) => write!(f, "bad sampler config: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SamplerError {}

/// One reproducible stream of variates, addressed by `(seed, stream id)`.
pub struct SampleStream {
    rng: ChaCha8Rng,
    cached_normal: Option<f64>,
}

impl SampleStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, cached_normal: None }
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in (0, 1]; safe under `ln`.
    fn uniform_pos(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box–Muller (pairs cached).
    pub fn normal(&mut self) -> f64 {
        if let Some(v) = self.cached_normal.take() {
            return v;
        }
        let u1 = self.uniform_pos();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * PI * u2;
        self.cached_normal = Some(r * theta.sin());
        r * theta.cos()
    }

    /// Gamma(shape, 1) via Marsaglia–Tsang, with the boost for shape < 1.
    pub fn gamma(&mut self, shape: f64) -> f64 {
        debug_assert!(shape > 0.0);
        if shape < 1.0 {
            let u = self.uniform_pos();
            return self.gamma(shape + 1.0) * u.powf(1.0 / shape);
        }
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        loop {
            let x = self.normal();
            let t = 1.0 + c * x;
            if t <= 0.0 {
                continue;
            }
            let v = t * t * t;
            let u = self.uniform_pos();
            if u.ln() < 0.5 * x * x + d - d * v + d * v.ln() {
                return d * v;
            }
        }
    }

    /// Beta(a, b) as X/(X+Y) with independent Gamma variates.
    pub fn beta(&mut self, a: f64, b: f64) -> f64 {
        let x = self.gamma(a);
        let y = self.gamma(b);
        x / (x + y)
    }
}

/// Strict-interiority cap on sampled radii. Strong negative tilts put
/// non-negligible Beta mass within one ulp of t = 1, which would otherwise
/// round to boundary points the automorphisms must reject. Samples landing
/// at the cap stand for the unresolvable sliver (cap, 1); the estimators
/// watch how much mass they carry.
pub(crate) const MAX_SAMPLE_RADIUS: f64 = 1.0 - 1e-14;

/// Uniform direction on the unit sphere of ℝ²ⁿ, as a complex n-vector.
fn sphere_direction(n: usize, stream: &mut SampleStream) -> Coords {
    loop {
        let coords: Coords = (0..n)
            .map(|_| Complex64::new(stream.normal(), stream.normal()))
            .collect();
        let norm_sq: f64 = coords.iter().map(|c| c.norm_sqr()).sum();
        if norm_sq > 1e-300 {
            let inv = norm_sq.sqrt().recip();
            return coords.iter().map(|c| c * inv).collect();
        }
    }
}

fn scaled_point(dir: Coords, r: f64) -> BallPoint {
    let r = r.min(MAX_SAMPLE_RADIUS);
    BallPoint::from_coords(dir.iter().map(|c| c * r).collect())
}

/// Uniform sample of the unit ball with respect to normalized volume `dV`.
pub fn sample_uniform_ball(n: usize, stream: &mut SampleStream) -> BallPoint {
    let dir = sphere_direction(n, stream);
    let r = stream.uniform().powf(1.0 / (2 * n) as f64);
    scaled_point(dir, r)
}

/// Sample distributed as the probability measure `dV_τ` (tilt τ > −1).
pub fn sample_tilted_ball(n: usize, tilt: f64, stream: &mut SampleStream) -> BallPoint {
    if tilt == 0.0 {
        return sample_uniform_ball(n, stream);
    }
    let dir = sphere_direction(n, stream);
    let t = stream.beta(n as f64, tilt + 1.0);
    scaled_point(dir, t.sqrt())
}

/// Normalizing constant `c_α = Γ(n+α+1) / (n! Γ(α+1))` of `dV_α`.
pub fn dv_alpha_constant(n: usize, alpha: f64) -> Result<f64, SamplerError> {
    if !(alpha > -1.0) {
        return Err(SamplerError::AlphaOutOfRange { alpha });
    }
    let nf = n as f64;
    Ok(libm::exp(
        libm::lgamma(nf + alpha + 1.0) - libm::lgamma(nf + 1.0) - libm::lgamma(alpha + 1.0),
    ))
}

/// Density of `dV_α` against `dV` at `z`: `c_α (1 − |z|²)^α`.
pub fn weight_dv_alpha(z: &BallPoint, alpha: f64) -> Result<f64, SamplerError> {
    let c = dv_alpha_constant(z.dim(), alpha)?;
    Ok(c * (1.0 - z.norm_sq()).powf(alpha))
}
