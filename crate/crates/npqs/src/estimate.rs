//! Monte Carlo estimation over the ball with divergence diagnostics.
//!
//! Every estimator runs a fixed number of shards; shard `k` draws from the
//! counter-based stream `(seed, k)` and the shard results combine in shard
//! order, so an estimate is a pure function of its [`SamplerConfig`]
//! regardless of how shards are scheduled.
//!
//! The equivalence theorems behind the functionals are finiteness
//! statements, so each estimate also carries an operational finite/infinite
//! verdict (`diverged`):
//!
//! * doubling test — the cumulative estimate at N/4, N/2 and N samples must
//!   not jump by more than 5 combined σ twice in a row;
//! * truncation test — the mass added by the radius shells
//!   (0.9, 0.99], (0.99, 0.999], (0.999, 1) must not grow shell over shell
//!   while remaining statistically significant;
//! * any non-finite integrand value flags the estimate immediately.

use alloc::format;
use alloc::string::String;
use core::fmt;

#[allow(unused_imports)] // f64 math methods come from this trait without std
use num_traits::Float;

use crate::ball::{BallPoint, MobiusMap};
use crate::expr::EvalError;
use crate::sampler::{
    dv_alpha_constant, sample_tilted_ball, SampleStream, SamplerConfig, SamplerError,
};

/// Jump threshold (in combined σ) of the doubling test.
const DOUBLING_SIGMA: f64 = 5.0;
/// Radius shells of the truncation diagnostic.
const SHELL_RADII: [f64; 3] = [0.9, 0.99, 0.999];
/// Relative standard error above which an estimate is treated as
/// non-converging. Calibrated on the kernel-power family at its known
/// membership threshold: finite cases contract below 0.15 by 5e4 samples
/// while divergent ones stay above 0.23 across seeds and budgets.
const REL_SE_LIMIT: f64 = 0.2;
/// Minimum sample count before the relative-error trigger may fire, so that
/// deliberately small validation runs are not flagged.
const REL_SE_MIN_SAMPLES: u64 = 16_384;
/// Share of the total mass carried by samples at the radius-resolution cap
/// beyond which the integral is treated as escaping to the boundary.
const CAP_MASS_SHARE: f64 = 0.05;
/// Floor for the importance tilt when a declared boundary order would make it
/// invalid; the estimator stays unbiased, divergence is left to the verdict.
const MIN_TILT: f64 = -0.9;

/// Value, standard error, actual sample count and the finite/infinite verdict
/// of one integral estimation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub diverged: bool,
}

impl IntegralEstimate {
    /// σ of the difference of two independent estimates.
    pub fn combined_sigma(&self, other: &IntegralEstimate) -> f64 {
        (self.std_error * self.std_error + other.std_error * other.std_error).sqrt()
    }

    /// |self − other| ≤ k · combined σ.
    pub fn agrees_within(&self, other: &IntegralEstimate, k_sigma: f64) -> bool {
        (self.value - other.value).abs() <= k_sigma * self.combined_sigma(other)
    }
}

/// Sampling mode of [`double_integral`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairMode {
    /// Independent pairs (z, w) ~ dV_α × dV_α.
    Plain,
    /// Substituted pairs: w = Φ_z(u) with the change-of-variables kernel
    /// `dV_α(Φ_z(u)) = k_z(u) dV_α(u)`; moves a diagonal singularity of the
    /// integrand to u = 0 where it can be cancelled.
    Desingularized,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EstimateError {
    BadConfig(String),
    Sampler(SamplerError),
    /// Integrand evaluation failed at a concrete sample point.
    Integrand { at: BallPoint, second: Option<BallPoint>, source: EvalError },
}

impl fmt::Display for EstimateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstimateError::BadConfig(msg) => write!(f, "bad estimator config: {msg}"),
            EstimateError::Sampler(e) => write!(f, "{e}"),
            EstimateError::Integrand { at, second, source } => {
                write!(f, "integrand failed at z={:?}", at.coords())?;
                if let Some(w) = second {
                    write!(f, ", w={:?}", w.coords())?;
                }
                write!(f, ": {source}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for EstimateError {}

impl From<SamplerError> for EstimateError {
    fn from(e: SamplerError) -> Self {
        EstimateError::Sampler(e)
    }
}

// ---------------------------------------------------------------------------
// Accumulator
// ---------------------------------------------------------------------------

/// The raw statistics behind a finite/infinite verdict, exposed so the CLI
/// and the calibration tests can show why an estimate was flagged.
#[derive(Debug, Clone, PartialEq)]
pub struct VerdictDetail {
    /// Cumulative estimates at N/4, N/2, N samples.
    pub prefix_values: [f64; 3],
    pub prefix_errors: [f64; 3],
    /// Doubling jumps in units of combined σ.
    pub jump_sigmas: [f64; 2],
    /// Per-sample-normalized mass in the radius shells
    /// [0, 0.9], (0.9, 0.99], (0.99, 0.999], (0.999, 1).
    pub shell_mass: [f64; 4],
    pub shell_counts: [u64; 4],
    /// Largest single |sample|²-share of the sum of squares, per half.
    pub half_max_share: [f64; 2],
    /// Largest |sample| per quarter chunk.
    pub quarter_max_abs: [f64; 4],
    /// Radius at which the globally largest |sample| occurred.
    pub max_radius: f64,
    /// Samples sitting at the sampler's radius-resolution cap, and the
    /// per-sample-normalized mass they carry.
    pub cap_count: u64,
    pub cap_mass: f64,
    pub nonfinite: u64,
}

/// Per-shard running sums: four sequential quarter-chunks (for the doubling
/// and heavy-tail tests) and radius-shell sums (for the truncation test).
#[derive(Debug, Clone, Default)]
struct Accum {
    quarter_sum: [f64; 4],
    quarter_sq: [f64; 4],
    quarter_count: [u64; 4],
    quarter_max_abs: [f64; 4],
    max_radius: f64,
    max_abs: f64,
    shell_sum: [f64; 4],
    shell_count: [u64; 4],
    cap_count: u64,
    cap_sum: f64,
    nonfinite: u64,
}

impl Accum {
    fn add(&mut self, quarter: usize, radius: f64, value: f64) {
        if !value.is_finite() {
            self.nonfinite += 1;
            return;
        }
        self.quarter_sum[quarter] += value;
        self.quarter_sq[quarter] += value * value;
        self.quarter_count[quarter] += 1;
        let abs = value.abs();
        if abs > self.quarter_max_abs[quarter] {
            self.quarter_max_abs[quarter] = abs;
        }
        if abs > self.max_abs {
            self.max_abs = abs;
            self.max_radius = radius;
        }
        let shell = SHELL_RADII.iter().position(|&r| radius <= r).unwrap_or(3);
        self.shell_sum[shell] += value;
        self.shell_count[shell] += 1;
        if radius >= crate::sampler::MAX_SAMPLE_RADIUS {
            self.cap_count += 1;
            self.cap_sum += value;
        }
    }

    fn merge(&mut self, other: &Accum) {
        for i in 0..4 {
            self.quarter_sum[i] += other.quarter_sum[i];
            self.quarter_sq[i] += other.quarter_sq[i];
            self.quarter_count[i] += other.quarter_count[i];
            self.quarter_max_abs[i] = self.quarter_max_abs[i].max(other.quarter_max_abs[i]);
            self.shell_sum[i] += other.shell_sum[i];
            self.shell_count[i] += other.shell_count[i];
        }
        if other.max_abs > self.max_abs {
            self.max_abs = other.max_abs;
            self.max_radius = other.max_radius;
        }
        self.cap_count += other.cap_count;
        self.cap_sum += other.cap_sum;
        self.nonfinite += other.nonfinite;
    }

    /// (mean, std error) over the first `k` quarters, with non-finite samples
    /// counted in the denominator so skipping them cannot hide divergence.
    fn estimate_prefix(&self, k: usize, total_prefix: u64) -> (f64, f64) {
        let mut sum = 0.0;
        let mut sq = 0.0;
        for i in 0..k {
            sum += self.quarter_sum[i];
            sq += self.quarter_sq[i];
        }
        let n = total_prefix as f64;
        let mean = sum / n;
        let var = ((sq / n - mean * mean) / (n - 1.0).max(1.0)).max(0.0);
        (mean, var.sqrt())
    }

    fn detail(&self, total: u64) -> VerdictDetail {
        let quarter = total / 4;
        let (v1, s1) = self.estimate_prefix(1, quarter);
        let (v2, s2) = self.estimate_prefix(2, 2 * quarter);
        let (v3, s3) = self.estimate_prefix(4, total);
        let jump1 = (v2 - v1).abs() / (s1 * s1 + s2 * s2).sqrt().max(f64::MIN_POSITIVE);
        let jump2 = (v3 - v2).abs() / (s2 * s2 + s3 * s3).sqrt().max(f64::MIN_POSITIVE);

        let n = total as f64;
        let shell_mass = [
            self.shell_sum[0] / n,
            self.shell_sum[1] / n,
            self.shell_sum[2] / n,
            self.shell_sum[3] / n,
        ];

        let half_sq = [
            self.quarter_sq[0] + self.quarter_sq[1],
            self.quarter_sq[2] + self.quarter_sq[3],
        ];
        let half_max = [
            self.quarter_max_abs[0].max(self.quarter_max_abs[1]),
            self.quarter_max_abs[2].max(self.quarter_max_abs[3]),
        ];
        let share = |m: f64, sq: f64| if sq > 0.0 { m * m / sq } else { 0.0 };

        VerdictDetail {
            prefix_values: [v1, v2, v3],
            prefix_errors: [s1, s2, s3],
            jump_sigmas: [jump1, jump2],
            shell_mass,
            shell_counts: self.shell_count,
            half_max_share: [share(half_max[0], half_sq[0]), share(half_max[1], half_sq[1])],
            quarter_max_abs: self.quarter_max_abs,
            max_radius: self.max_radius,
            cap_count: self.cap_count,
            cap_mass: self.cap_sum / n,
            nonfinite: self.nonfinite,
        }
    }

    fn finish(&self, total: u64) -> IntegralEstimate {
        let detail = self.detail(total);
        let (value, std_error) = (detail.prefix_values[2], detail.prefix_errors[2]);
        IntegralEstimate {
            value,
            std_error,
            n_samples: total,
            diverged: decide_diverged(&detail, total),
        }
    }
}

/// Finite/infinite verdict from the run statistics.
///
/// Three triggers, OR-ed:
///
/// * doubling — the cumulative estimate moves by more than 5 combined σ
///   going N/4 → N/2 and again N/2 → N;
/// * non-convergence — the relative standard error stays above
///   [`REL_SE_LIMIT`]: the σ of a finite-variance integrand contracts like
///   1/√N while a divergent one keeps σ of the order of the value itself;
/// * resolution escape — samples at the radius cap (standing for the
///   unresolvable boundary sliver) carry a macroscopic share of the mass.
///
/// The radius-shell ladder stays in [`VerdictDetail`] as a diagnostic; it
/// cannot act as a trigger because high powers of `log(1 − z)` — convergent
/// — grow across the three rungs at the same rate as genuine kernel-power
/// divergence.
pub fn decide_diverged(detail: &VerdictDetail, total: u64) -> bool {
    if detail.nonfinite > 0 {
        return true;
    }

    let doubling =
        detail.jump_sigmas[0] > DOUBLING_SIGMA && detail.jump_sigmas[1] > DOUBLING_SIGMA;

    let value = detail.prefix_values[2];
    let rel_se = detail.prefix_errors[2] / value.abs().max(f64::MIN_POSITIVE);
    let stagnation = total >= REL_SE_MIN_SAMPLES && rel_se > REL_SE_LIMIT;

    let cap_escape =
        detail.cap_count > 0 && detail.cap_mass.abs() > CAP_MASS_SHARE * value.abs();

    doubling || stagnation || cap_escape
}

/// Rounds the configured budget up so each shard splits into four equal
/// quarter-chunks. Returns (per-shard count, total).
fn shard_layout(cfg: &SamplerConfig) -> (u64, u64) {
    let shards = cfg.shards as u64;
    let per_shard = cfg.n_samples.div_ceil(shards);
    let per_shard = per_shard.div_ceil(4) * 4;
    (per_shard, per_shard * shards)
}

// ---------------------------------------------------------------------------
// Drivers
// ---------------------------------------------------------------------------

/// Mean of `h(z, stream)` over `z ~ dV_tilt`; the caller folds all importance
/// ratios into `h` so that this mean estimates the target integral. The
/// stream handed to `h` is the shard's own stream (for nested estimators).
pub fn mc_points<F>(
    n_dim: usize,
    tilt: f64,
    cfg: &SamplerConfig,
    h: F,
) -> Result<IntegralEstimate, EstimateError>
where
    F: FnMut(&BallPoint, &mut SampleStream) -> Result<f64, EvalError>,
{
    mc_points_detailed(n_dim, tilt, cfg, h).map(|(est, _)| est)
}

/// [`mc_points`] plus the verdict statistics.
pub fn mc_points_detailed<F>(
    n_dim: usize,
    tilt: f64,
    cfg: &SamplerConfig,
    mut h: F,
) -> Result<(IntegralEstimate, VerdictDetail), EstimateError>
where
    F: FnMut(&BallPoint, &mut SampleStream) -> Result<f64, EvalError>,
{
    cfg.validate()?;
    if !(tilt > -1.0) {
        return Err(EstimateError::BadConfig(format!("tilt must be > -1, got {tilt}")));
    }
    let (per_shard, total) = shard_layout(cfg);
    let quarter = per_shard / 4;
    let mut combined = Accum::default();
    for shard in 0..cfg.shards {
        let mut stream = SampleStream::new(cfg.seed, shard as u64);
        let mut acc = Accum::default();
        for i in 0..per_shard {
            let z = sample_tilted_ball(n_dim, tilt, &mut stream);
            let value = h(&z, &mut stream).map_err(|source| EstimateError::Integrand {
                at: z.clone(),
                second: None,
                source,
            })?;
            acc.add((i / quarter) as usize, z.norm(), value);
        }
        combined.merge(&acc);
    }
    Ok((combined.finish(total), combined.detail(total)))
}

/// Mean of `h(z, u)` over independent `z ~ dV_tilt_z`, `u ~ dV_tilt_u`.
pub fn mc_pairs<F>(
    n_dim: usize,
    tilt_z: f64,
    tilt_u: f64,
    cfg: &SamplerConfig,
    h: F,
) -> Result<IntegralEstimate, EstimateError>
where
    F: FnMut(&BallPoint, &BallPoint) -> Result<f64, EvalError>,
{
    mc_pairs_detailed(n_dim, tilt_z, tilt_u, cfg, h).map(|(est, _)| est)
}

/// [`mc_pairs`] plus the verdict statistics.
pub fn mc_pairs_detailed<F>(
    n_dim: usize,
    tilt_z: f64,
    tilt_u: f64,
    cfg: &SamplerConfig,
    mut h: F,
) -> Result<(IntegralEstimate, VerdictDetail), EstimateError>
where
    F: FnMut(&BallPoint, &BallPoint) -> Result<f64, EvalError>,
{
    cfg.validate()?;
    if !(tilt_z > -1.0) || !(tilt_u > -1.0) {
        return Err(EstimateError::BadConfig(format!(
            "tilts must be > -1, got ({tilt_z}, {tilt_u})"
        )));
    }
    let (per_shard, total) = shard_layout(cfg);
    let quarter = per_shard / 4;
    let mut combined = Accum::default();
    for shard in 0..cfg.shards {
        let mut stream = SampleStream::new(cfg.seed, shard as u64);
        let mut acc = Accum::default();
        for i in 0..per_shard {
            let z = sample_tilted_ball(n_dim, tilt_z, &mut stream);
            let u = sample_tilted_ball(n_dim, tilt_u, &mut stream);
            let value = h(&z, &u).map_err(|source| EstimateError::Integrand {
                at: z.clone(),
                second: Some(u.clone()),
                source,
            })?;
            acc.add((i / quarter) as usize, z.norm().max(u.norm()), value);
        }
        combined.merge(&acc);
    }
    Ok((combined.finish(total), combined.detail(total)))
}

// ---------------------------------------------------------------------------
// Public integrals
// ---------------------------------------------------------------------------

/// Unbiased estimate of `∫ g dV_α` (α > −1). Sampling follows
/// `cfg.radial_mode`; with `BetaTilt(α)` the importance weights cancel
/// exactly, so e.g. `g ≡ 1` returns 1 ± 0.
pub fn integrate_ball<F>(
    mut g: F,
    alpha: f64,
    n_dim: usize,
    cfg: &SamplerConfig,
) -> Result<IntegralEstimate, EstimateError>
where
    F: FnMut(&BallPoint) -> Result<f64, EvalError>,
{
    let tilt = cfg.radial_mode.tilt();
    let c_alpha = dv_alpha_constant(n_dim, alpha)?;
    let c_tilt = dv_alpha_constant(n_dim, tilt)?;
    let ratio = c_alpha / c_tilt;
    let delta = alpha - tilt;
    mc_points(n_dim, tilt, cfg, |z, _| {
        Ok(g(z)? * ratio * (1.0 - z.norm_sq()).powf(delta))
    })
}

/// Estimate of `∫ g dλ` with `dλ = (1−|z|²)^{−n−1} dV`.
///
/// `boundary_order` is the declared decay of `g` at the boundary,
/// `g = O((1−|z|²)^β)`; the importance tilt is `β − n − 1`, the exponent
/// that keeps the weight variance finite exactly when the integral is.
/// Orders β ≤ n are admitted (the tilt is floored); divergence is then
/// detected by the verdict rather than prevented.
pub fn integrate_lambda<F>(
    mut g: F,
    boundary_order: f64,
    n_dim: usize,
    cfg: &SamplerConfig,
) -> Result<IntegralEstimate, EstimateError>
where
    F: FnMut(&BallPoint) -> Result<f64, EvalError>,
{
    let nf = n_dim as f64;
    let tilt = (boundary_order - nf - 1.0).max(MIN_TILT);
    let c_tilt = dv_alpha_constant(n_dim, tilt)?;
    let exponent = -nf - 1.0 - tilt;
    mc_points(n_dim, tilt, cfg, |z, _| {
        Ok(g(z)? * (1.0 - z.norm_sq()).powf(exponent) / c_tilt)
    })
}

/// Estimate of `∬ G(z,w) dV_α(z) dV_α(w)`.
///
/// `Plain` draws independent pairs; `Desingularized` substitutes
/// `w = Φ_z(u)` and multiplies by the kernel `k_z(u)`, which is the right
/// route when G is singular on the diagonal. Both modes agree within error
/// bars on nonsingular integrands.
pub fn double_integral<G>(
    mut g: G,
    alpha: f64,
    n_dim: usize,
    cfg: &SamplerConfig,
    mode: PairMode,
) -> Result<IntegralEstimate, EstimateError>
where
    G: FnMut(&BallPoint, &BallPoint) -> Result<f64, EvalError>,
{
    let gamma = n_dim as f64 + 1.0 + alpha;
    // Draw both coordinates from dV_alpha itself so the importance weights
    // cancel; alpha > -1 is checked here.
    dv_alpha_constant(n_dim, alpha)?;
    match mode {
        PairMode::Plain => mc_pairs(n_dim, alpha, alpha, cfg, |z, w| g(z, w)),
        PairMode::Desingularized => mc_pairs(n_dim, alpha, alpha, cfg, |z, u| {
            let map = MobiusMap::new(z.clone()).map_err(EvalError::Geometry)?;
            let w = map.apply(u).map_err(EvalError::Geometry)?;
            let k = crate::ball::kernel_weight_unchecked(z, u, gamma);
            Ok(g(z, &w)? * k)
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::RadialMode;

    #[test]
    fn constant_integrand_is_exact_in_matching_tilt() {
        for alpha in [0.0, 1.0, 2.5] {
            let cfg = SamplerConfig::new(3, 4000)
                .with_radial_mode(RadialMode::BetaTilt(alpha));
            let est = integrate_ball(|_| Ok(1.0), alpha, 2, &cfg).unwrap();
            assert_eq!(est.value, 1.0);
            assert_eq!(est.std_error, 0.0);
            assert!(!est.diverged);
        }
    }

    #[test]
    fn moment_matches_polar_oracle() {
        // n=1, alpha=0: integral of |z|^2 dV = 1/2.
        let cfg = SamplerConfig::new(9, 200_000);
        let est = integrate_ball(|z| Ok(z.norm_sq()), 0.0, 1, &cfg).unwrap();
        assert!(!est.diverged);
        assert!((est.value - 0.5).abs() <= 3.0 * est.std_error.max(1e-4));
    }

    #[test]
    fn lambda_weights_cancel_for_matching_decay() {
        // g = (1-|z|^2)^{n+1}: integral against dlambda is exactly 1 and the
        // importance weights cancel sample by sample.
        let n = 2usize;
        let cfg = SamplerConfig::new(17, 4000);
        let est = integrate_lambda(
            |z| Ok((1.0 - z.norm_sq()).powi(n as i32 + 1)),
            (n + 1) as f64,
            n,
            &cfg,
        )
        .unwrap();
        assert!((est.value - 1.0).abs() < 1e-12);
        assert!(est.std_error < 1e-12);
    }

    #[test]
    fn lambda_radial_oracle() {
        // n=1: g=(1-|z|^2)^3 against dlambda equals integral of (1-|z|^2) dV = 1/2.
        let cfg = SamplerConfig::new(23, 100_000);
        let est =
            integrate_lambda(|z| Ok((1.0 - z.norm_sq()).powi(3)), 3.0, 1, &cfg).unwrap();
        assert!(!est.diverged);
        assert!((est.value - 0.5).abs() <= 3.0 * est.std_error.max(1e-4));
    }

    #[test]
    fn double_integral_total_mass_in_both_modes() {
        let cfg = SamplerConfig::new(31, 20_000);
        let plain =
            double_integral(|_, _| Ok(1.0), 0.5, 1, &cfg, PairMode::Plain).unwrap();
        assert_eq!(plain.value, 1.0);
        let desing =
            double_integral(|_, _| Ok(1.0), 0.5, 1, &cfg, PairMode::Desingularized)
                .unwrap();
        // Substitution preserves total mass: E[k_z(u)] = 1.
        assert!(!desing.diverged);
        assert!((desing.value - 1.0).abs() <= 3.0 * desing.std_error.max(1e-3));
    }

    #[test]
    fn determinism_bitwise() {
        let cfg = SamplerConfig::new(77, 50_000).with_shards(4);
        let a = integrate_ball(|z| Ok(z.norm_sq()), 0.5, 2, &cfg).unwrap();
        let b = integrate_ball(|z| Ok(z.norm_sq()), 0.5, 2, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn integrand_error_carries_the_point() {
        let cfg = SamplerConfig::new(1, 100);
        let err = integrate_ball(
            |_| Err(EvalError::VarOutOfRange { var: 3, dim: 1 }),
            0.0,
            1,
            &cfg,
        )
        .unwrap_err();
        match err {
            EstimateError::Integrand { at, .. } => assert_eq!(at.dim(), 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn nonfinite_sample_flags_divergence() {
        let cfg = SamplerConfig::new(1, 1000);
        let est = integrate_ball(|_| Ok(f64::INFINITY), 0.0, 1, &cfg).unwrap();
        assert!(est.diverged);
    }

    #[test]
    fn rejects_bad_budget() {
        let cfg = SamplerConfig::new(1, 0);
        assert!(matches!(
            integrate_ball(|_| Ok(1.0), 0.0, 1, &cfg),
            Err(EstimateError::Sampler(_))
        ));
    }
}
