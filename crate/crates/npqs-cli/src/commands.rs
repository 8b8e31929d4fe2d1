//! The five commands behind the binary. Each returns the process exit code:
//! 0 success, 1 invariant violation, 2 input error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{Context, Result};
use rayon::prelude::*;

use npqs::ball::BallPoint;
use npqs::battery::{identity_battery, inequality_battery, Mutation};
use npqs::functionals::{
    d_alpha_at_fixed_alpha, functional_at, j_mean_osc_at, kernel_dominance, sup_functional,
    EvalConfig, FunctionalKind,
};
use npqs::parser::{parse, parse_complex};
use npqs::space::SpaceParams;

use crate::config::{ParamSpec, RunConfig};
use crate::exit_code;
use crate::report::{format_point, row_key, summarize, to_csv, CrossChecks, ReportRow, Summary};

/// Parses `p=7,q=1,s=1,alpha=0.5`.
pub fn parse_params(text: &str) -> Result<ParamSpec> {
    let mut p = None;
    let mut q = None;
    let mut s = None;
    let mut alpha = None;
    for part in text.split(',') {
        let (key, value) = part
            .split_once('=')
            .with_context(|| format!("bad parameter entry `{part}`, expected name=value"))?;
        let value: f64 = value
            .trim()
            .parse()
            .with_context(|| format!("bad numeric value in `{part}`"))?;
        match key.trim() {
            "p" => p = Some(value),
            "q" => q = Some(value),
            "s" => s = Some(value),
            "alpha" | "a" => alpha = Some(value),
            other => anyhow::bail!("unknown parameter `{other}` (expected p, q, s, alpha)"),
        }
    }
    Ok(ParamSpec {
        p: p.context("missing p")?,
        q: q.context("missing q")?,
        s: s.context("missing s")?,
        alpha: alpha.context("missing alpha")?,
    })
}

/// Parses a point as comma-separated complex literals, e.g. `0.5+0.1i,0.3i`.
pub fn parse_point(text: &str, n: usize) -> Result<BallPoint> {
    let coords = text
        .split(',')
        .map(|part| parse_complex(part.trim()).map_err(|e| anyhow::anyhow!("{e}")))
        .collect::<Result<Vec<_>>>()?;
    if coords.len() != n {
        anyhow::bail!("point has {} components, dimension is {n}", coords.len());
    }
    let point = BallPoint::new(coords).map_err(|e| anyhow::anyhow!("{e}"))?;
    if !point.is_interior() {
        anyhow::bail!("point must be interior to the unit ball, |a|^2 = {}", point.norm_sq());
    }
    Ok(point)
}

// ---------------------------------------------------------------------------
// check-identities
// ---------------------------------------------------------------------------

pub fn cmd_check_identities(n: usize, samples: u64, seed: u64, mutate: Option<&str>) -> Result<u8> {
    let mutation = match mutate {
        None => Mutation::None,
        Some("flip-sa-sign") => Mutation::FlipSaSign,
        Some(other) => anyhow::bail!("unknown mutation `{other}` (expected flip-sa-sign)"),
    };
    println!("identity battery: n={n}, cases={samples}, seed={seed}");
    let mut failed = false;
    for report in identity_battery(n, samples, seed, mutation) {
        let ok = report.passed();
        failed |= !ok;
        println!(
            "  {:34} max violation {:10.3e} (tol {:7.1e}, cases {}) {}{}",
            report.name,
            report.max_violation,
            report.tolerance,
            report.cases,
            if ok { "PASS" } else { "FAIL" },
            if ok {
                String::new()
            } else {
                format!("  reproduce with seed={} case={}", report.worst_case.0, report.worst_case.1)
            }
        );
    }
    println!("inequality battery: n={n}, cases={samples}, seed={seed}");
    for report in inequality_battery(n, samples, seed) {
        let ok = report.passed();
        failed |= !ok;
        println!(
            "  {:34} violations {:6} worst excess {:10.3e} {}{}",
            report.name,
            report.violations,
            report.max_violation,
            if ok { "PASS" } else { "FAIL" },
            if ok {
                String::new()
            } else {
                format!("  reproduce with seed={} case={}", report.worst_case.0, report.worst_case.1)
            }
        );
    }
    if n == 1 {
        println!("note: in dimension 1 the projection kernel collapses to |w - z| (checked above)");
    }
    Ok(if failed { exit_code::VIOLATION } else { exit_code::OK })
}

// ---------------------------------------------------------------------------
// norm / functional / sup-search
// ---------------------------------------------------------------------------

pub struct SingleRun {
    pub expr: String,
    pub spec: ParamSpec,
    pub n: usize,
    pub a: Option<String>,
    pub kind: FunctionalKind,
    pub eval: EvalConfig,
}

pub fn cmd_single(run: &SingleRun) -> Result<u8> {
    let f = match parse(&run.expr, run.n) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: expression `{}`: {e}", run.expr);
            return Ok(exit_code::INPUT);
        }
    };
    let params = match SpaceParams::new(run.n, run.spec.p, run.spec.q, run.spec.s, run.spec.alpha)
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(exit_code::INPUT);
        }
    };
    let label = run.kind.label();
    match &run.a {
        Some(text) => {
            let a = match parse_point(text, run.n) {
                Ok(a) => a,
                Err(e) => {
                    eprintln!("error: point `{text}`: {e}");
                    return Ok(exit_code::INPUT);
                }
            };
            match functional_at(&f, &params, &a, run.kind, &run.eval) {
                Ok(est) => {
                    println!(
                        "{label}({}) at a={} = {} +- {} (diverged: {}; samples {}; seed {})",
                        run.expr,
                        format_point(&a),
                        est.value,
                        est.std_error,
                        est.diverged,
                        est.n_samples,
                        run.eval.sampler.seed
                    );
                    Ok(exit_code::OK)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(exit_code::INPUT)
                }
            }
        }
        None => match sup_functional(&f, &params, run.kind, &run.eval) {
            Ok(out) => {
                println!(
                    "sup {label}({}) >= {} at a* = {} (lower bound; diverged: {}; probes {}; samples/probe {}; seed {})",
                    run.expr,
                    out.value,
                    format_point(&out.a_star),
                    out.diverged,
                    out.table.len(),
                    out.estimate.n_samples,
                    run.eval.sampler.seed
                );
                Ok(exit_code::OK)
            }
            Err(e) => {
                eprintln!("error: {e}");
                Ok(exit_code::INPUT)
            }
        },
    }
}

// ---------------------------------------------------------------------------
// equivalence-report
// ---------------------------------------------------------------------------

struct RowSpec {
    expr: String,
    spec: ParamSpec,
    kind: FunctionalKind,
}

/// Computes every report row plus the per-(function, params) cross-checks,
/// writes `report.csv` and `summary.json` under the out dir, and returns the
/// exit code with the file paths.
pub fn cmd_equivalence_report(cfg: &RunConfig) -> Result<(u8, PathBuf, PathBuf)> {
    cfg.validate()?;
    let corpus = cfg.effective_corpus();
    let mut specs = Vec::new();
    for expr in &corpus {
        for spec in &cfg.params {
            for kind in FunctionalKind::ALL {
                specs.push(RowSpec { expr: expr.clone(), spec: spec.clone(), kind });
            }
        }
    }

    let started = Instant::now();
    let deadline = cfg.budget_seconds.map(Duration::from_secs_f64);
    let eval = cfg.eval_config();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .context("building worker pool")?;
    let rows: Vec<ReportRow> = pool.install(|| {
        specs
            .par_iter()
            .map(|spec| compute_row(spec, cfg, &eval, started, deadline))
            .collect()
    });

    // cross-checks at a = 0, one per (function, params)
    let mut pairs = Vec::new();
    for expr in &corpus {
        for spec in &cfg.params {
            pairs.push((expr.clone(), spec.clone()));
        }
    }
    let checks: Vec<(String, CrossChecks)> = pool.install(|| {
        pairs
            .par_iter()
            .map(|(expr, spec)| {
                (row_key(expr, spec, cfg.n), cross_check(expr, spec, cfg, &eval))
            })
            .collect()
    });
    let cross_checks: BTreeMap<String, CrossChecks> = checks.into_iter().collect();

    let summary = summarize(&rows, &cfg.params, cfg.n, cfg.seed, cross_checks);

    let out_dir = Path::new(&cfg.out_dir);
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output dir {}", out_dir.display()))?;
    let csv_path = out_dir.join("report.csv");
    let json_path = out_dir.join("summary.json");
    fs::write(&csv_path, to_csv(&rows, cfg.record_timing))?;
    fs::write(&json_path, render_summary_json(cfg, &summary)?)?;

    println!(
        "equivalence report: {} rows ({} errors, {} skipped) -> {}",
        rows.len(),
        summary.rows_with_errors,
        summary.rows_skipped,
        out_dir.display()
    );
    for (key, agree) in &summary.verdict_agreement {
        if !agree {
            println!("  verdict disagreement: {key}: {:?}", summary.verdicts[key]);
        }
    }
    println!(
        "verdict agreement: {}; kernel dominance violations: {}",
        summary.all_verdicts_agree, summary.kernel_dominance_violations
    );
    let code = if summary.all_verdicts_agree && summary.kernel_dominance_violations == 0 {
        exit_code::OK
    } else {
        exit_code::VIOLATION
    };
    Ok((code, csv_path, json_path))
}

fn render_summary_json(cfg: &RunConfig, summary: &Summary) -> Result<String> {
    #[derive(serde::Serialize)]
    struct Doc<'a> {
        config: &'a RunConfig,
        summary: &'a Summary,
    }
    Ok(serde_json::to_string_pretty(&Doc { config: cfg, summary })?)
}

fn compute_row(
    spec: &RowSpec,
    cfg: &RunConfig,
    eval: &EvalConfig,
    started: Instant,
    deadline: Option<Duration>,
) -> ReportRow {
    let mut row = ReportRow {
        function: spec.expr.clone(),
        kind: spec.kind.label().to_string(),
        n: cfg.n,
        p: spec.spec.p,
        q: spec.spec.q,
        s: spec.spec.s,
        alpha: spec.spec.alpha,
        a_star: None,
        value: None,
        std_error: None,
        samples: 0,
        diverged: None,
        seconds: 0.0,
        seed: cfg.seed,
        error: None,
        skipped: false,
    };
    if let Some(cap) = deadline {
        if started.elapsed() > cap {
            row.skipped = true;
            row.error = Some("skipped: wall-clock budget exhausted".into());
            return row;
        }
    }
    let t0 = Instant::now();
    let f = match parse(&spec.expr, cfg.n) {
        Ok(f) => f,
        Err(e) => {
            row.error = Some(format!("parse: {e}"));
            return row;
        }
    };
    let params = match spec.spec.resolve(cfg.n) {
        Ok(p) => p,
        Err(e) => {
            row.error = Some(format!("params: {e}"));
            return row;
        }
    };
    match sup_functional(&f, &params, spec.kind, eval) {
        Ok(out) => {
            row.a_star =
                Some(out.a_star.coords().iter().map(|c| [c.re, c.im]).collect());
            row.value = Some(out.value);
            row.std_error = Some(out.estimate.std_error);
            row.samples = out.estimate.n_samples;
            row.diverged = Some(out.diverged);
        }
        Err(e) => {
            row.error = Some(e.to_string());
        }
    }
    row.seconds = t0.elapsed().as_secs_f64();
    row
}

fn cross_check(expr: &str, spec: &ParamSpec, cfg: &RunConfig, eval: &EvalConfig) -> CrossChecks {
    let mut out = CrossChecks {
        fubini_j: None,
        fubini_d_alpha0: None,
        fubini_combined_sigma: None,
        fubini_consistent: None,
        dominance_pairs: 0,
        dominance_violations: 0,
    };
    let (Ok(f), Ok(params)) = (parse(expr, cfg.n), spec.resolve(cfg.n)) else {
        return out;
    };
    let a0 = BallPoint::origin(cfg.n);
    if let (Ok(j), Ok(d0)) = (
        j_mean_osc_at(&f, &params, &a0, eval),
        d_alpha_at_fixed_alpha(&f, &params, &a0, 0.0, eval),
    ) {
        out.fubini_j = Some(j.value);
        out.fubini_d_alpha0 = Some(d0.value);
        let sigma = j.combined_sigma(&d0);
        out.fubini_combined_sigma = Some(sigma);
        out.fubini_consistent = Some(if j.diverged || d0.diverged {
            j.diverged && d0.diverged
        } else {
            (j.value - d0.value).abs() <= 3.0 * sigma
        });
    }
    if let Ok(rep) = kernel_dominance(&f, &params, &a0, &eval.sampler) {
        out.dominance_pairs = rep.pairs;
        out.dominance_violations = rep.violations;
    }
    out
}
