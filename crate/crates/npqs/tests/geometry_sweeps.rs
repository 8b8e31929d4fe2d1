//! Randomized sweeps of the closed-form identities and inequalities, plus
//! the brute-force verification of the two-sided comparability constants.

mod common;

use npqs::ball::{bergman_pseudometric, inner, lemma43_triple, BallPoint, MobiusMap};
use npqs::battery::{identity_battery, inequality_battery, Mutation};
use npqs::sampler::{sample_uniform_ball, SampleStream};
use npqs::Complex64;

fn capped(n: usize, stream: &mut SampleStream, cap: f64) -> BallPoint {
    let z = sample_uniform_ball(n, stream);
    BallPoint::new(z.coords().iter().map(|c| c * cap)).unwrap()
}

#[test]
fn identity_battery_sweep() {
    for n in 1..=3 {
        for report in identity_battery(n, 10_000, 0xBA11, Mutation::None) {
            assert!(
                report.passed(),
                "n={n}: {} worst {} at case {:?}",
                report.name,
                report.max_violation,
                report.worst_case
            );
        }
    }
}

#[test]
fn inequality_battery_sweep() {
    for n in 1..=3 {
        for report in inequality_battery(n, 100_000, 0x1E05) {
            assert_eq!(
                report.violations, 0,
                "n={n}: {} violated, worst excess {}",
                report.name, report.max_violation
            );
        }
    }
}

#[test]
fn displacement_bounds_hold_on_big_sweep() {
    // Lemma-level displacement inequalities, 1e5 pairs per dimension.
    for n in 1..=3usize {
        let mut stream = SampleStream::new(0xD15 + n as u64, 0);
        let mut checked = 0u64;
        while checked < 100_000 {
            let z = capped(n, &mut stream, 0.999);
            let w = capped(n, &mut stream, 0.999);
            if z.approx_eq(&w, 1e-12) {
                continue;
            }
            let (d, lo, up_sq) = lemma43_triple(&z, &w).unwrap();
            assert!(d >= lo - 1e-12 * lo.max(1.0), "lower bound failed: {d} < {lo}");
            assert!(
                d * d <= up_sq + 1e-12 * up_sq.max(1.0),
                "upper bound failed: {} > {up_sq}",
                d * d
            );
            checked += 1;
        }
    }
}

#[test]
fn comparability_constants_brute_force_maximization() {
    // Verifies by brute force over ~1e6 admissible pairs that the derived
    // constants are never exceeded: for w in the Bergman ball E(z, r),
    //   (1-|z|^2)/2 <= |1-<z,w>| <= 2(1-|z|^2)/(1-r^2)
    //   (1-r^2)/4 <= (1-|w|^2)/(1-|z|^2) <= 4/(1-r^2).
    let n = 2usize;
    let mut stream = SampleStream::new(0x41AA, 0);
    let mut worst_ratio_hi = 0.0f64;
    let mut worst_ratio_lo = f64::INFINITY;
    for _ in 0..350_000 {
        let z = capped(n, &mut stream, 0.999);
        let map = MobiusMap::new(z.clone()).unwrap();
        for r in [0.3, 0.5, 0.8] {
            let u = capped(n, &mut stream, r * 0.999);
            let w = map.apply(&u).unwrap();
            debug_assert!(bergman_pseudometric(&z, &w).unwrap() < r);
            let one_z = 1.0 - z.norm_sq();
            let one_w = 1.0 - w.norm_sq();
            let ip = (Complex64::new(1.0, 0.0) - inner(&z, &w).unwrap()).norm();
            assert!(ip >= one_z / 2.0 * (1.0 - 1e-12));
            assert!(ip <= 2.0 * one_z / (1.0 - r * r) * (1.0 + 1e-12));
            let ratio = one_w / one_z;
            let scale = 1.0 - r * r;
            assert!(ratio >= scale / 4.0 * (1.0 - 1e-12));
            assert!(ratio <= 4.0 / scale * (1.0 + 1e-12));
            // normalized slack: how close the sweep actually gets
            worst_ratio_hi = worst_ratio_hi.max(ratio * scale);
            worst_ratio_lo = worst_ratio_lo.min(ratio / scale);
        }
    }
    // The bounds must be approached within their constant factor, i.e. the
    // sweep is actually exercising the near-extremal region.
    assert!(worst_ratio_hi > 1.0, "sweep never stressed the upper ratio bound");
    assert!(worst_ratio_lo < 1.0, "sweep never stressed the lower ratio bound");
}

#[test]
fn pseudometric_symmetry_random_pairs() {
    let mut stream = SampleStream::new(0x5E7, 0);
    for _ in 0..10_000 {
        let z = capped(2, &mut stream, 0.999);
        let w = capped(2, &mut stream, 0.999);
        let d1 = bergman_pseudometric(&z, &w).unwrap();
        let d2 = bergman_pseudometric(&w, &z).unwrap();
        assert!((d1 - d2).abs() <= 1e-12);
        assert!((0.0..1.0).contains(&d1));
    }
}

#[test]
fn mutation_mode_is_detected() {
    let reports = identity_battery(2, 2_000, 0xBAD, Mutation::FlipSaSign);
    assert!(reports.iter().any(|r| !r.passed()), "mutated battery must fail");
    let jac = reports.iter().find(|r| r.name == "jacobian_closed_form").unwrap();
    assert!(!jac.passed());
}
