//! Randomized identity and inequality batteries for the ball geometry.
//!
//! Each check sweeps seeded random configurations with |z|, |a| ≤ 0.999 and
//! reports its worst deviation together with a reproducing (seed, index)
//! pair. The batteries are pure library code so the CLI and the acceptance
//! suite drive the very same checks.

use alloc::vec::Vec;

#[allow(unused_imports)] // f64 math methods come from this trait without std
use num_traits::Float;

use crate::ball::{
    bergman_pseudometric, inner_unchecked, lemma43_triple, reciprocal_identity_sides, BallPoint,
    MobiusMap,
};
use crate::sampler::{sample_uniform_ball, SampleStream};
use num_complex::Complex64;

/// Radius cap of the sampled configurations.
const RADIUS_CAP: f64 = 0.999;
/// Relative slack granted to the exact inequalities.
const INEQ_SLACK: f64 = 1e-12;
/// Exponents γ probed by the reciprocal identity check.
const GAMMAS: [f64; 3] = [1.5, 2.0, 4.0];
/// Bergman radii probed by the two-sided comparability bounds.
const LEMMA41_RADII: [f64; 3] = [0.3, 0.5, 0.8];

/// Deliberate defect injected into the battery to prove it can fail.
///
/// Flipping the sign of `s_a` replaces `Φ_a` by `Φ_a ∘ (P_a − Q_a)`, which is
/// still an involutive automorphism (the reflection commutes with `Φ_a`), so
/// every intrinsic identity — involution, fixed pairs, product form,
/// norm symmetry, kernel factorization — keeps holding. What the flip does
/// change is the map itself; the battery pins that down by comparing finite
/// differences of the map against the closed-form derivative
/// `Φ_a'(0) = −(1−|a|²)P_a − s_a Q_a` built from the parameter alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    None,
    FlipSaSign,
}

/// Outcome of one named check over `cases` random configurations.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: &'static str,
    pub cases: u64,
    /// Worst deviation observed (absolute or relative, per check).
    pub max_violation: f64,
    /// Cases beyond the check's slack.
    pub violations: u64,
    /// Deviation bound this check must stay under to pass.
    pub tolerance: f64,
    /// (seed, case index) reproducing the worst deviation.
    pub worst_case: (u64, u64),
}

impl CheckReport {
    fn new(name: &'static str, seed: u64, tolerance: f64) -> Self {
        Self { name, cases: 0, max_violation: 0.0, violations: 0, tolerance, worst_case: (seed, 0) }
    }

    fn record(&mut self, index: u64, deviation: f64, violated: bool) {
        self.cases += 1;
        if deviation > self.max_violation {
            self.max_violation = deviation;
            self.worst_case.1 = index;
        }
        if violated {
            self.violations += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.max_violation <= self.tolerance
    }
}

fn capped_sample(n: usize, stream: &mut SampleStream) -> BallPoint {
    let z = sample_uniform_ball(n, stream);
    BallPoint::from_coords(z.coords().iter().map(|c| c * RADIUS_CAP).collect())
}

fn make_map(a: BallPoint, mutation: Mutation) -> MobiusMap {
    match mutation {
        Mutation::None => MobiusMap::new(a).expect("interior parameter"),
        Mutation::FlipSaSign => MobiusMap::with_flipped_s(a).expect("interior parameter"),
    }
}

fn distance(x: &BallPoint, y: &BallPoint) -> f64 {
    x.coords()
        .iter()
        .zip(y.coords().iter())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Closed-form identity battery: involution, fixed pairs, product form of
/// `1 − |Φ_a(z)|²`, the reciprocal identity, `|Φ_a(z)| = |Φ_z(a)|` and the
/// projection-kernel factorization. Returns per-check worst deviations; the
/// caller applies its tolerance.
pub fn identity_battery(
    n: usize,
    cases: u64,
    seed: u64,
    mutation: Mutation,
) -> Vec<CheckReport> {
    const IDENTITY_TOL: f64 = 1e-9;
    // central differences with h = 1e-5: truncation O(h^2), rounding O(eps/h)
    const FD_TOL: f64 = 1e-6;
    let mut involution = CheckReport::new("involution", seed, IDENTITY_TOL);
    let mut phi_at_zero = CheckReport::new("phi_at_zero", seed, IDENTITY_TOL);
    let mut phi_at_a = CheckReport::new("phi_at_a", seed, IDENTITY_TOL);
    let mut product_form = CheckReport::new("product_form", seed, IDENTITY_TOL);
    let mut eq_4_22 = CheckReport::new("reciprocal_identity", seed, IDENTITY_TOL);
    let mut symmetry = CheckReport::new("phi_norm_symmetry", seed, IDENTITY_TOL);
    let mut factorization =
        CheckReport::new("projection_kernel_factorization", seed, IDENTITY_TOL);
    let mut n1_collapse = CheckReport::new("n1_kernel_collapse", seed, IDENTITY_TOL);
    let mut jacobian = CheckReport::new("jacobian_closed_form", seed, FD_TOL);

    let mut stream = SampleStream::new(seed, 0);
    let origin = BallPoint::origin(n);
    for index in 0..cases {
        let a = capped_sample(n, &mut stream);
        let z = capped_sample(n, &mut stream);
        let map = make_map(a.clone(), mutation);

        // involution
        let once = map.apply(&z).expect("interior");
        let twice = map.apply(&once).expect("interior");
        involution.record(index, distance(&twice, &z), false);

        // fixed pairs
        let at0 = map.apply(&origin).expect("interior");
        phi_at_zero.record(index, distance(&at0, &a), false);
        let ata = map.apply(&a).expect("interior");
        phi_at_a.record(index, ata.norm(), false);

        // product form vs direct subtraction, relative to max(1, value)
        let prod = map.one_minus_phi_sq(&z).expect("interior");
        let direct = 1.0 - once.norm_sq();
        product_form.record(index, (prod - direct).abs() / prod.max(1.0), false);

        // reciprocal identity, relative deviation over the probed exponents
        let mut worst = 0.0f64;
        for gamma in GAMMAS {
            let (lhs, rhs) = reciprocal_identity_sides(&z, &a, gamma).expect("interior");
            let dev = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
            worst = worst.max(dev);
        }
        eq_4_22.record(index, worst, false);

        // |Phi_a(z)| = |Phi_z(a)|
        let d_az = once.norm();
        let map_z = make_map(z.clone(), mutation);
        let d_za = map_z.apply(&a).expect("interior").norm();
        symmetry.record(index, (d_az - d_za).abs(), false);

        // |w - P_w z - s_w Q_w z| = |Phi_w(z)| |1 - <z,w>| (w := a here)
        let num = map.numerator(&z).expect("dims agree");
        let denom = (Complex64::new(1.0, 0.0)
            - inner_unchecked(z.coords(), a.coords()))
        .norm();
        let lhs = num.norm();
        let rhs = map.apply(&z).expect("interior").norm() * denom;
        factorization.record(index, (lhs - rhs).abs(), false);

        if n == 1 {
            // on the disk the projection kernel collapses to |w - z|
            let euclid = distance(&a, &z);
            n1_collapse.record(index, (lhs - euclid).abs(), false);
        }

        // finite differences of the (possibly mutated) map vs the canonical
        // closed-form derivative built from the parameter alone
        let canonical = MobiusMap::new(a.clone()).expect("interior").jacobian_at_zero();
        jacobian.record(index, jacobian_fd_deviation(&map, &canonical, n), false);
    }

    let mut reports = alloc::vec![
        involution,
        phi_at_zero,
        phi_at_a,
        product_form,
        eq_4_22,
        symmetry,
        factorization,
    ];
    if n == 1 {
        reports.push(n1_collapse);
    }
    reports.push(jacobian);
    reports
}

/// Max entrywise deviation between columnwise central differences of
/// `map` at the origin and the given closed-form Jacobian.
fn jacobian_fd_deviation(map: &MobiusMap, closed_form: &[Complex64], n: usize) -> f64 {
    const H: f64 = 1e-5;
    let mut worst = 0.0f64;
    for j in 0..n {
        let mut plus = alloc::vec![Complex64::new(0.0, 0.0); n];
        plus[j] = Complex64::new(H, 0.0);
        let mut minus = alloc::vec![Complex64::new(0.0, 0.0); n];
        minus[j] = Complex64::new(-H, 0.0);
        let fp = map
            .apply(&BallPoint::new(plus).expect("finite"))
            .expect("interior");
        let fm = map
            .apply(&BallPoint::new(minus).expect("finite"))
            .expect("interior");
        for k in 0..n {
            let fd = (fp.coords()[k] - fm.coords()[k]) / (2.0 * H);
            worst = worst.max((fd - closed_form[k * n + j]).norm());
        }
    }
    worst
}

/// Inequality battery: the displacement bounds, the trivial kernel
/// dominance, and the quantitative two-sided comparability bounds on
/// Bergman balls. Violations are counted beyond a relative slack of 1e-12.
pub fn inequality_battery(n: usize, cases: u64, seed: u64) -> Vec<CheckReport> {
    // pass/fail is by violation count; deviations are reported for context
    let mut lemma_lower = CheckReport::new("displacement_lower", seed, f64::INFINITY);
    let mut lemma_upper = CheckReport::new("displacement_upper", seed, f64::INFINITY);
    let mut trivial = CheckReport::new("trivial_kernel_dominance", seed, f64::INFINITY);
    let mut l41_inner = CheckReport::new("comparability_inner_product", seed, f64::INFINITY);
    let mut l41_ratio = CheckReport::new("comparability_norm_ratio", seed, f64::INFINITY);

    let mut stream = SampleStream::new(seed, 1);
    for index in 0..cases {
        let z = capped_sample(n, &mut stream);
        let w = capped_sample(n, &mut stream);
        if z.approx_eq(&w, 1e-14) {
            continue;
        }

        let (disp, lower, upper_sq) = lemma43_triple(&z, &w).expect("distinct interior");
        let slack = INEQ_SLACK * disp.max(lower).max(1.0);
        lemma_lower.record(index, (lower - disp).max(0.0), lower > disp + slack);
        let slack_sq = INEQ_SLACK * (disp * disp).max(upper_sq).max(1.0);
        lemma_upper.record(
            index,
            (disp * disp - upper_sq).max(0.0),
            disp * disp > upper_sq + slack_sq,
        );

        // |w - P_w z - s_w Q_w z| <= |1 - <z,w>|
        let map_w = MobiusMap::new(w.clone()).expect("interior");
        let num = map_w.numerator(&z).expect("dims agree").norm();
        let denom = (Complex64::new(1.0, 0.0)
            - inner_unchecked(z.coords(), w.coords()))
        .norm();
        trivial.record(
            index,
            (num - denom).max(0.0),
            num > denom + INEQ_SLACK * denom.max(1.0),
        );

        // Quantitative comparability on E(z, r): w' = Phi_z(u) with |u| < r
        // has d(z, w') = |u| < r by the involution.
        let map_z = MobiusMap::new(z.clone()).expect("interior");
        for (ri, r) in LEMMA41_RADII.iter().enumerate() {
            let u = BallPoint::from_coords(
                sample_uniform_ball(n, &mut stream)
                    .coords()
                    .iter()
                    .map(|c| c * r * 0.999)
                    .collect(),
            );
            let wp = map_z.apply(&u).expect("interior");
            debug_assert!(bergman_pseudometric(&z, &wp).expect("interior") < *r);
            let one_minus_z = 1.0 - z.norm_sq();
            let one_minus_w = 1.0 - wp.norm_sq();
            let ip = (Complex64::new(1.0, 0.0)
                - inner_unchecked(z.coords(), wp.coords()))
            .norm();
            let idx = index * LEMMA41_RADII.len() as u64 + ri as u64;

            let lo = one_minus_z / 2.0;
            let hi = 2.0 * one_minus_z / (1.0 - r * r);
            let excess = (lo - ip).max(ip - hi).max(0.0);
            l41_inner.record(idx, excess, excess > INEQ_SLACK * ip.max(1.0));

            let ratio = one_minus_w / one_minus_z;
            let rlo = (1.0 - r * r) / 4.0;
            let rhi = 4.0 / (1.0 - r * r);
            let rexcess = (rlo - ratio).max(ratio - rhi).max(0.0);
            l41_ratio.record(idx, rexcess, rexcess > INEQ_SLACK * ratio.max(1.0));
        }
    }

    alloc::vec![lemma_lower, lemma_upper, trivial, l41_inner, l41_ratio]
}
