//! Report rows and the two output formats: a fixed-column CSV (diff-able in
//! CI) and a JSON summary with the verdict matrices and cross-checks.
//!
//! Byte determinism: all maps are ordered, floats print through Rust's
//! shortest-roundtrip formatter, and wall times are zeroed unless the config
//! opts into recording them.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use npqs::ball::BallPoint;
use npqs::functionals::FunctionalKind;
use npqs::Complex64;

use crate::config::ParamSpec;

pub const CSV_HEADER: &str =
    "function,kind,n,p,q,s,alpha,a_star,value,std_error,samples,diverged,seconds,seed";

/// Outcome of one (function, parameter set, kind) cell.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub function: String,
    pub kind: String,
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub s: f64,
    pub alpha: f64,
    /// None for error/skipped rows.
    pub a_star: Option<Vec<[f64; 2]>>,
    pub value: Option<f64>,
    pub std_error: Option<f64>,
    pub samples: u64,
    pub diverged: Option<bool>,
    pub seconds: f64,
    pub seed: u64,
    /// Human-readable failure for rows that could not run; such rows are
    /// recorded, never silently absent.
    pub error: Option<String>,
    pub skipped: bool,
}

impl ReportRow {
    pub fn status_key(&self) -> Option<&'static str> {
        self.diverged.map(|d| if d { "diverged" } else { "finite" })
    }
}

pub fn format_point(a: &BallPoint) -> String {
    let mut out = String::from("(");
    for (i, c) in a.coords().iter().enumerate() {
        if i > 0 {
            out.push_str("; ");
        }
        format_complex(*c, &mut out);
    }
    out.push(')');
    out
}

fn format_complex(c: Complex64, out: &mut String) {
    if c.im == 0.0 {
        let _ = write!(out, "{}", c.re);
    } else if c.re == 0.0 {
        let _ = write!(out, "{}i", c.im);
    } else if c.im < 0.0 {
        let _ = write!(out, "{}-{}i", c.re, -c.im);
    } else {
        let _ = write!(out, "{}+{}i", c.re, c.im);
    }
}

fn point_to_string(coords: &[[f64; 2]]) -> String {
    let mut out = String::from("(");
    for (i, [re, im]) in coords.iter().enumerate() {
        if i > 0 {
            out.push_str("; ");
        }
        format_complex(Complex64::new(*re, *im), &mut out);
    }
    out.push(')');
    out
}

/// Renders rows to the fixed-column CSV. Cells never contain commas (points
/// use semicolons), so no quoting is needed.
pub fn to_csv(rows: &[ReportRow], record_timing: bool) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let a_star = row.a_star.as_ref().map(|c| point_to_string(c)).unwrap_or_default();
        let value = row.value.map(|v| v.to_string()).unwrap_or_default();
        let std_error = row.std_error.map(|v| v.to_string()).unwrap_or_default();
        let diverged = row.diverged.map(|d| d.to_string()).unwrap_or_default();
        let seconds = if record_timing { format!("{:.3}", row.seconds) } else { "0.000".into() };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            row.function,
            row.kind,
            row.n,
            row.p,
            row.q,
            row.s,
            row.alpha,
            a_star,
            value,
            std_error,
            row.samples,
            diverged,
            seconds,
            row.seed
        );
    }
    out
}

/// Per-(function, params) cross-checks carried in the JSON summary.
#[derive(Debug, Clone, Serialize)]
pub struct CrossChecks {
    pub fubini_j: Option<f64>,
    pub fubini_d_alpha0: Option<f64>,
    pub fubini_combined_sigma: Option<f64>,
    /// |J − D_0| ≤ 3 combined σ, or both routes flagged divergent.
    pub fubini_consistent: Option<bool>,
    pub dominance_pairs: u64,
    pub dominance_violations: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub seed: u64,
    pub n: usize,
    /// function|params key -> kind -> "finite" / "diverged".
    pub verdicts: BTreeMap<String, BTreeMap<String, String>>,
    /// function|params key -> all kinds agree.
    pub verdict_agreement: BTreeMap<String, bool>,
    pub cross_checks: BTreeMap<String, CrossChecks>,
    /// Ratio of each kind's sup value to the defining norm's, per key;
    /// qualitative comparability only (the equivalence constants are not
    /// asserted anywhere).
    pub ratios: BTreeMap<String, BTreeMap<String, f64>>,
    pub kernel_dominance_violations: u64,
    pub all_verdicts_agree: bool,
    pub rows_with_errors: usize,
    pub rows_skipped: usize,
}

pub fn row_key(function: &str, params: &ParamSpec, n: usize) -> String {
    format!(
        "{function}|n={n},p={},q={},s={},alpha={}",
        params.p, params.q, params.s, params.alpha
    )
}

/// Builds the verdict matrix and agreement booleans from the rows plus the
/// cross-check table assembled by the caller.
pub fn summarize(
    rows: &[ReportRow],
    params: &[ParamSpec],
    n: usize,
    seed: u64,
    cross_checks: BTreeMap<String, CrossChecks>,
) -> Summary {
    let mut verdicts: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    let mut ratios: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
    for row in rows {
        let spec = ParamSpec { p: row.p, q: row.q, s: row.s, alpha: row.alpha };
        let key = row_key(&row.function, &spec, row.n);
        if let Some(status) = row.status_key() {
            verdicts.entry(key).or_default().insert(row.kind.clone(), status.to_string());
        }
    }
    // ratio tables relative to the defining norm
    for spec in params {
        for row in rows {
            if row.kind != FunctionalKind::NNorm.label() {
                continue;
            }
            let this = ParamSpec { p: row.p, q: row.q, s: row.s, alpha: row.alpha };
            if &this != spec || row.n != n {
                continue;
            }
            let key = row_key(&row.function, spec, n);
            let base = match row.value {
                Some(v) if v > 0.0 => v,
                _ => continue,
            };
            for other in rows.iter().filter(|r| {
                r.function == row.function
                    && r.n == row.n
                    && ParamSpec { p: r.p, q: r.q, s: r.s, alpha: r.alpha } == this
            }) {
                if let Some(v) = other.value {
                    ratios
                        .entry(key.clone())
                        .or_default()
                        .insert(other.kind.clone(), v / base);
                }
            }
        }
    }
    let verdict_agreement: BTreeMap<String, bool> = verdicts
        .iter()
        .map(|(k, kinds)| {
            let mut values = kinds.values();
            let first = values.next().cloned();
            (
                k.clone(),
                match first {
                    None => true,
                    Some(f) => values.all(|v| *v == f),
                },
            )
        })
        .collect();
    let kernel_dominance_violations =
        cross_checks.values().map(|c| c.dominance_violations).sum();
    let all_verdicts_agree = verdict_agreement.values().all(|&b| b)
        && cross_checks.values().all(|c| c.fubini_consistent.unwrap_or(true));
    Summary {
        seed,
        n,
        verdicts,
        verdict_agreement,
        cross_checks,
        ratios,
        kernel_dominance_violations,
        all_verdicts_agree,
        rows_with_errors: rows.iter().filter(|r| r.error.is_some() && !r.skipped).count(),
        rows_skipped: rows.iter().filter(|r| r.skipped).count(),
    }
}
