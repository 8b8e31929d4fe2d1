//! Derivative-free supremum search over the Möbius parameter `a ∈ 𝔹`.
//!
//! Two stages share one evaluation budget:
//!
//! * coarse — the origin, `±r·e` along every real coordinate axis of ℝ²ⁿ for
//!   `r ∈ {0.3, 0.6, 0.8, r_max}`, plus `budget/4` seeded random directions;
//! * refine — Nelder–Mead simplex descent on `−F` over the 2n real
//!   coordinates, every proposal clamped back to `|a| ≤ r_max`.
//!
//! The search only ever evaluates points it can return, so the reported
//! value is a lower bound for the true supremum by construction.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math methods come from this trait without std
use num_traits::Float;

use crate::ball::{BallPoint, Coords};
use crate::sampler::SampleStream;

/// Coarse radii probed along every axis.
const COARSE_RADII: [f64; 4] = [0.3, 0.6, 0.8, f64::NAN]; // NAN slot replaced by r_max
/// Stream id namespace for the search's own randomness; estimator shards use
/// low ids, so auxiliary consumers start above u32::MAX.
const SUP_STREAM: u64 = 1 << 32;
/// Initial Nelder–Mead step per coordinate.
const SIMPLEX_STEP: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupConfig {
    /// Clamp radius for probed parameters, 0 < r_max < 1.
    pub r_max: f64,
    /// Total evaluation budget across both stages.
    pub budget: u32,
}

impl Default for SupConfig {
    fn default() -> Self {
        Self { r_max: 0.95, budget: 264 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SupError {
    BadConfig(String),
    /// The budget cannot even cover the coarse probes.
    BudgetTooSmall { budget: u32, coarse_points: u32 },
}

impl fmt::Display for SupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupError::BadConfig(m) => write!(f, "bad sup-search config: {m}"),
            SupError::BudgetTooSmall { budget, coarse_points } => write!(
                f,
                "budget {budget} is below the {coarse_points} coarse probe points"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SupError {}

/// Search outcome: the best probed parameter, its value, and every probe in
/// deterministic order (coarse stage first, then refine evaluations).
#[derive(Debug, Clone)]
pub struct SupResult {
    pub a_star: BallPoint,
    pub value: f64,
    pub probes: Vec<(BallPoint, f64)>,
}

fn coords_from_reals(n: usize, x: &[f64]) -> BallPoint {
    let coords: Coords = (0..n).map(|k| Complex64::new(x[2 * k], x[2 * k + 1])).collect();
    BallPoint::from_coords(coords)
}

fn reals_from_point(a: &BallPoint) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * a.dim());
    for c in a.coords() {
        out.push(c.re);
        out.push(c.im);
    }
    out
}

fn clamp_to_ball(x: &mut [f64], r_max: f64) {
    let norm_sq: f64 = x.iter().map(|v| v * v).sum();
    let norm = norm_sq.sqrt();
    if norm > r_max {
        let scale = r_max / norm;
        for v in x.iter_mut() {
            *v *= scale;
        }
    }
}

/// Maximizes a deterministic `F` over the ball `|a| ≤ r_max` with at most
/// `cfg.budget` evaluations. `seed` feeds the coarse stage's random probes.
pub fn sup_search<F>(
    n: usize,
    cfg: &SupConfig,
    seed: u64,
    mut f: F,
) -> Result<SupResult, SupError>
where
    F: FnMut(&BallPoint) -> f64,
{
    if !(cfg.r_max > 0.0 && cfg.r_max < 1.0) {
        return Err(SupError::BadConfig(format!("r_max must be in (0,1), got {}", cfg.r_max)));
    }
    if n == 0 {
        return Err(SupError::BadConfig(String::from("dimension must be >= 1")));
    }

    // ----- coarse stage ------------------------------------------------
    let mut coarse: Vec<BallPoint> = Vec::new();
    coarse.push(BallPoint::origin(n));
    let mut radii = COARSE_RADII;
    radii[3] = cfg.r_max;
    for axis in 0..2 * n {
        for &r in &radii {
            for sign in [1.0, -1.0] {
                let mut x = alloc::vec![0.0; 2 * n];
                x[axis] = sign * r;
                coarse.push(coords_from_reals(n, &x));
            }
        }
    }
    let n_random = cfg.budget / 4;
    let mut stream = SampleStream::new(seed, SUP_STREAM);
    for _ in 0..n_random {
        let z = crate::sampler::sample_uniform_ball(n, &mut stream);
        let mut x = reals_from_point(&z);
        for v in x.iter_mut() {
            *v *= cfg.r_max;
        }
        coarse.push(coords_from_reals(n, &x));
    }
    let coarse_points = coarse.len() as u32;
    if cfg.budget < coarse_points {
        return Err(SupError::BudgetTooSmall { budget: cfg.budget, coarse_points });
    }

    let mut probes: Vec<(BallPoint, f64)> = Vec::with_capacity(cfg.budget as usize);
    let mut best_idx = 0usize;
    for a in coarse {
        let v = f(&a);
        probes.push((a, v));
        let best = probes[best_idx].1;
        let last = probes.len() - 1;
        if probes[last].1 > best {
            best_idx = last;
        }
    }

    // ----- refine stage -------------------------------------------------
    let refine_budget = cfg.budget - coarse_points;
    let dim = 2 * n;
    if refine_budget > dim as u32 + 1 {
        let start = reals_from_point(&probes[best_idx].0);
        let mut evals_left = refine_budget;
        let mut eval = |x: &[f64], probes: &mut Vec<(BallPoint, f64)>| -> f64 {
            let a = coords_from_reals(n, x);
            let v = f(&a);
            probes.push((a, v));
            // minimize -F
            -v
        };

        // initial simplex around the coarse winner
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
        {
            let mut x0 = start.clone();
            clamp_to_ball(&mut x0, cfg.r_max);
            let v0 = eval(&x0, &mut probes);
            evals_left -= 1;
            simplex.push((x0, v0));
        }
        for k in 0..dim {
            if evals_left == 0 {
                break;
            }
            let mut x = start.clone();
            x[k] += SIMPLEX_STEP;
            clamp_to_ball(&mut x, cfg.r_max);
            let v = eval(&x, &mut probes);
            evals_left -= 1;
            simplex.push((x, v));
        }

        // standard Nelder-Mead coefficients
        let (alpha, gamma_e, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
        while evals_left > 0 && simplex.len() == dim + 1 {
            simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(core::cmp::Ordering::Equal));
            let spread = simplex[dim].1 - simplex[0].1;
            if !spread.is_finite() || spread.abs() < 1e-12 {
                break;
            }
            // centroid of all but the worst
            let mut centroid = alloc::vec![0.0; dim];
            for (x, _) in simplex.iter().take(dim) {
                for (c, v) in centroid.iter_mut().zip(x.iter()) {
                    *c += v / dim as f64;
                }
            }
            let worst = simplex[dim].clone();
            let mut reflected = alloc::vec![0.0; dim];
            for i in 0..dim {
                reflected[i] = centroid[i] + alpha * (centroid[i] - worst.0[i]);
            }
            clamp_to_ball(&mut reflected, cfg.r_max);
            let fr = eval(&reflected, &mut probes);
            evals_left -= 1;

            if fr < simplex[0].1 && evals_left > 0 {
                // try expansion
                let mut expanded = alloc::vec![0.0; dim];
                for i in 0..dim {
                    expanded[i] = centroid[i] + gamma_e * (reflected[i] - centroid[i]);
                }
                clamp_to_ball(&mut expanded, cfg.r_max);
                let fe = eval(&expanded, &mut probes);
                evals_left -= 1;
                simplex[dim] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            } else if fr < simplex[dim - 1].1 {
                simplex[dim] = (reflected, fr);
            } else if evals_left > 0 {
                // contraction toward the better of worst/reflected
                let toward = if fr < worst.1 { &reflected } else { &worst.0 };
                let mut contracted = alloc::vec![0.0; dim];
                for i in 0..dim {
                    contracted[i] = centroid[i] + rho * (toward[i] - centroid[i]);
                }
                clamp_to_ball(&mut contracted, cfg.r_max);
                let fc = eval(&contracted, &mut probes);
                evals_left -= 1;
                if fc < worst.1.min(fr) {
                    simplex[dim] = (contracted, fc);
                } else {
                    // shrink toward the best vertex
                    let best = simplex[0].0.clone();
                    for k in 1..=dim {
                        if evals_left == 0 {
                            break;
                        }
                        let mut x = alloc::vec![0.0; dim];
                        for i in 0..dim {
                            x[i] = best[i] + sigma * (simplex[k].0[i] - best[i]);
                        }
                        clamp_to_ball(&mut x, cfg.r_max);
                        let v = eval(&x, &mut probes);
                        evals_left -= 1;
                        simplex[k] = (x, v);
                    }
                }
            } else {
                break;
            }
        }
    }

    let (mut a_star, mut value) = probes[0].clone();
    for (a, v) in probes.iter() {
        if *v > value {
            value = *v;
            a_star = a.clone();
        }
    }
    Ok(SupResult { a_star, value, probes })
}
