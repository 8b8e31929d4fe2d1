//! Run configuration: a JSON object that fully determines an equivalence
//! report. The file round-trips losslessly and every expression must parse
//! under the declared dimension before a run starts.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use npqs::functionals::EvalConfig;
use npqs::parser::parse;
use npqs::sampler::SamplerConfig;
use npqs::space::SpaceParams;
use npqs::supsearch::SupConfig;

use crate::corpus;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ParamSpec {
    pub p: f64,
    pub q: f64,
    pub s: f64,
    pub alpha: f64,
}

impl ParamSpec {
    pub fn resolve(&self, n: usize) -> Result<SpaceParams> {
        SpaceParams::new(n, self.p, self.q, self.s, self.alpha)
            .map_err(|e| anyhow::anyhow!("{e}"))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SupSpec {
    pub r_max: f64,
    pub budget: u32,
}

impl Default for SupSpec {
    fn default() -> Self {
        let d = SupConfig::default();
        Self { r_max: d.r_max, budget: d.budget }
    }
}

fn default_samples() -> u64 {
    1_000_000
}

fn default_shards() -> u32 {
    8
}

fn default_mo_inner() -> u32 {
    32
}

fn default_workers() -> usize {
    2
}

fn default_out_dir() -> String {
    "out".into()
}

/// Everything `equivalence-report` needs, in one diff-able JSON object.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: u64,
    #[serde(default = "default_shards")]
    pub shards: u32,
    #[serde(default = "default_mo_inner")]
    pub mo_inner: u32,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default)]
    pub override_hw_gate: bool,
    /// Wall-clock timings are zeroed in the outputs unless set, so default
    /// reports are byte-identical across runs.
    #[serde(default)]
    pub record_timing: bool,
    /// Wall-clock cap; rows not started before the cap are marked skipped.
    #[serde(default)]
    pub budget_seconds: Option<f64>,
    #[serde(default)]
    pub sup: SupSpec,
    pub params: Vec<ParamSpec>,
    /// Expression corpus; `null` selects the built-in default for `n`.
    #[serde(default)]
    pub corpus: Option<Vec<String>>,
    #[serde(default = "default_out_dir")]
    pub out_dir: String,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).context("parsing config JSON")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            bail!("config: n must be >= 1");
        }
        if self.params.is_empty() {
            bail!("config: at least one parameter set required");
        }
        for p in &self.params {
            p.resolve(self.n)?;
        }
        for expr in self.effective_corpus() {
            parse(&expr, self.n)
                .map_err(|e| anyhow::anyhow!("config: corpus entry `{expr}`: {e}"))?;
        }
        if self.samples == 0 {
            bail!("config: samples must be >= 1");
        }
        if self.workers == 0 {
            bail!("config: workers must be >= 1");
        }
        Ok(())
    }

    pub fn effective_corpus(&self) -> Vec<String> {
        match &self.corpus {
            Some(c) => c.clone(),
            None => corpus::default_corpus(self.n),
        }
    }

    pub fn eval_config(&self) -> EvalConfig {
        EvalConfig {
            sampler: SamplerConfig::new(self.seed, self.samples).with_shards(self.shards),
            mo_inner: self.mo_inner,
            hw_override: self.override_hw_gate,
            sup: SupConfig { r_max: self.sup.r_max, budget: self.sup.budget },
        }
    }
}
