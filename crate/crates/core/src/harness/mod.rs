//! Campaign runner: samples graphs from generator specs, runs one lemma on
//! each, certifies the output independently and writes a JSON report.

mod lemmas;
pub mod search;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub use lemmas::Lemma;
pub use lemmas::covering_supplier;
use lemmas::{run_lemma, RunError};

use crate::certify::Margin;
use crate::error::{Error, Result};
use crate::extract::p5::P5Params;
use crate::generators::{build_family, derive_seed, Family, GeneratorSpec};
use crate::graph::Graph;
use crate::io::{from_graph6, to_graph6};
use crate::oracles::MeasureKind;
use crate::rational::{q, serde_q, Q};
use crate::trace::TraceEntry;

pub const REPORT_SCHEMA: &str = "purepair-report/1";

/// Largest graph a campaign may sample; exact χ is the limiting oracle.
pub const CAMPAIGN_MAX_N: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CampaignParams {
    /// Broom leaf count for the t-broom lemmas.
    pub t: usize,
    /// Path length for the covering and broom extractions.
    pub k: usize,
    /// Forbidden path length for the Gyárfás lemmas.
    pub path_k: usize,
    #[serde(with = "serde_q")]
    pub eps: Q,
    pub p5: P5Params,
    /// Forbidden graph for the Erdős–Hajnal lemmas, by name.
    pub h: String,
    pub measure: MeasureKind,
    pub covering_samples: usize,
    /// Core threshold; defaults to ⌊χ/2⌋ per graph.
    pub p: Option<usize>,
    /// Control parameter; defaults to max(ω, 2) per graph.
    pub q: Option<usize>,
    #[serde(with = "serde_q")]
    pub terminal_p: Q,
}

impl Default for CampaignParams {
    fn default() -> Self {
        CampaignParams {
            t: 2,
            k: 3,
            path_k: 5,
            eps: q(1, 2),
            p5: P5Params::default(),
            h: "P5".into(),
            measure: MeasureKind::Cardinality,
            covering_samples: 100,
            p: None,
            q: None,
            terminal_p: q(1, 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub lemma: Lemma,
    pub specs: Vec<GeneratorSpec>,
    /// Samples per random spec; deterministic specs run once.
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_max_n")]
    pub max_n: usize,
    #[serde(default)]
    pub params: CampaignParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

fn default_max_n() -> usize {
    CAMPAIGN_MAX_N
}

impl CampaignConfig {
    pub fn new(lemma: Lemma, specs: Vec<GeneratorSpec>, samples: usize, seed: u64) -> Self {
        CampaignConfig {
            lemma,
            specs,
            samples,
            seed,
            max_n: CAMPAIGN_MAX_N,
            params: CampaignParams::default(),
            workers: None,
            out: None,
        }
    }

    /// Random graphs from the lemma's class with n in 5..=max_n.
    pub fn default_specs(lemma: Lemma, params: &CampaignParams, max_n: usize) -> Vec<GeneratorSpec> {
        let n_min = Some(5.min(max_n));
        // Colourful graphs are dense; sparse samples almost never qualify.
        let p = if lemma == Lemma::ColourfulCompletePair { q(4, 5) } else { q(1, 2) };
        let free = |forbidden: String| {
            GeneratorSpec::new(Family::HFreeRejection {
                n: max_n,
                n_min,
                p: p.clone(),
                forbidden,
                max_rounds: 2000,
            })
        };
        match lemma {
            Lemma::Oracles
            | Lemma::MinDegreeCore
            | Lemma::ControlledSubgraph
            | Lemma::VividClique
            | Lemma::EhStep
            | Lemma::CoveringBlockade
            | Lemma::BroomOrAnticomplete => vec![GeneratorSpec::new(Family::Gnp { n: max_n, n_min, p: q(1, 2) })],
            Lemma::NearPurePair | Lemma::QuasiPure => vec![free(params.h.clone())],
            Lemma::TbroomDecompose | Lemma::TbroomColour => vec![free(format!("broom(3,{})", params.t))],
            Lemma::GyarfasVertex | Lemma::GyarfasColourBound if params.path_k != 5 => {
                vec![free(format!("P{}", params.path_k))]
            }
            _ => vec![free("P5".into())],
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: CampaignConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_n > CAMPAIGN_MAX_N {
            return Err(Error::CapExceeded {
                n: self.max_n,
                cap: CAMPAIGN_MAX_N,
                what: "campaign graphs".into(),
            });
        }
        if self.params.eps <= q(0, 1) || self.params.eps >= q(1, 1) {
            return Err(Error::Precondition("eps must lie in (0, 1)".into()));
        }
        if self.specs.is_empty() {
            return Err(Error::Precondition("campaign needs at least one generator spec".into()));
        }
        Ok(())
    }

    fn jobs(&self) -> Vec<(usize, usize, u64)> {
        let mut jobs = Vec::new();
        for (si, spec) in self.specs.iter().enumerate() {
            let count = if spec.is_random() { self.samples } else { self.samples.min(1) };
            for k in 0..count {
                jobs.push((si, k, derive_seed(derive_seed(self.seed, si as u64), k as u64)));
            }
        }
        jobs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: usize,
    pub spec_index: usize,
    pub sample: usize,
    pub seed: u64,
    pub graph6: String,
    pub graph_hash: String,
    pub n: usize,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<String>,
    #[serde(default)]
    pub witness: Value,
    #[serde(default)]
    pub margins: Vec<Margin>,
    #[serde(default)]
    pub degenerate: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceEntry>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub schema: String,
    pub version: String,
    pub config: CampaignConfig,
    pub records: Vec<SampleRecord>,
    pub counts: Counts,
    pub wall_clock_ms: u128,
}

impl CampaignReport {
    pub fn failures(&self) -> impl Iterator<Item = &SampleRecord> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: CampaignReport = serde_json::from_str(text)?;
        if r.schema != REPORT_SCHEMA {
            return Err(Error::Parse(format!(
                "report schema '{}' is not {REPORT_SCHEMA}",
                r.schema
            )));
        }
        Ok(r)
    }
}

pub fn graph_hash(g: &Graph) -> String {
    let digest = Sha256::digest(to_graph6(g).as_bytes());
    hex::encode(digest)[..16].to_string()
}

fn worker_count(cfg: &CampaignConfig) -> usize {
    cfg.workers
        .or_else(|| std::env::var("PUREPAIR_WORKERS").ok().and_then(|s| s.parse().ok()))
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Runs a lemma on one graph and turns the result into a record.
pub fn run_sample(
    lemma: Lemma,
    g: &Graph,
    params: &CampaignParams,
    seed: u64,
    keep_trace: bool,
) -> SampleRecord {
    let mut rec = SampleRecord {
        index: 0,
        spec_index: 0,
        sample: 0,
        seed,
        graph6: to_graph6(g),
        graph_hash: graph_hash(g),
        n: g.n(),
        status: Status::Skipped,
        outcome: None,
        witness: Value::Null,
        margins: Vec::new(),
        degenerate: false,
        reason: None,
        trace: None,
    };
    let res = catch_unwind(AssertUnwindSafe(|| run_lemma(lemma, g, params, seed)));
    match res {
        Ok(Ok(run)) => {
            rec.outcome = Some(run.tag);
            rec.witness = run.witness;
            rec.degenerate = run.degenerate;
            rec.margins = run.cert.margins.clone();
            let failed: Vec<String> = run
                .cert
                .failures()
                .map(|c| format!("{}: {}", c.name, c.detail))
                .collect();
            if failed.is_empty() {
                rec.status = Status::Pass;
                if keep_trace {
                    rec.trace = Some(run.trace);
                }
            } else {
                rec.status = Status::Fail;
                rec.reason = Some(failed.join("; "));
                rec.trace = Some(run.trace);
            }
        }
        Ok(Err(RunError::Skip(why))) => rec.reason = Some(why),
        Ok(Err(RunError::Fail(why, trace))) => {
            rec.status = Status::Fail;
            rec.reason = Some(why);
            rec.trace = Some(trace);
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            rec.status = Status::Fail;
            rec.reason = Some(format!("panic: {msg}"));
        }
    }
    rec
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    cfg.validate()?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count(cfg))
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    let jobs = cfg.jobs();
    let records: Vec<SampleRecord> = pool.install(|| {
        jobs.par_iter()
            .enumerate()
            .map(|(index, &(si, k, seed))| {
                let mut rec = match build_family(&cfg.specs[si].with_seed(seed)) {
                    Ok(g) if g.n() > cfg.max_n => skipped(seed, &g, format!("n = {} above max_n", g.n())),
                    Ok(g) => run_sample(cfg.lemma, &g, &cfg.params, seed, false),
                    Err(e) => SampleRecord {
                        status: Status::Fail,
                        reason: Some(format!("generator: {e}")),
                        ..skipped(seed, &Graph::empty(0), String::new())
                    },
                };
                rec.index = index;
                rec.spec_index = si;
                rec.sample = k;
                rec
            })
            .collect()
    });
    let mut counts = Counts::default();
    for r in &records {
        match r.status {
            Status::Pass => counts.pass += 1,
            Status::Fail => counts.fail += 1,
            Status::Skipped => counts.skipped += 1,
        }
    }
    let report = CampaignReport {
        schema: REPORT_SCHEMA.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg.clone(),
        records,
        counts,
        wall_clock_ms: start.elapsed().as_millis(),
    };
    if let Some(path) = &cfg.out {
        std::fs::write(path, report.to_json())?;
    }
    Ok(report)
}

fn skipped(seed: u64, g: &Graph, reason: String) -> SampleRecord {
    SampleRecord {
        index: 0,
        spec_index: 0,
        sample: 0,
        seed,
        graph6: to_graph6(g),
        graph_hash: graph_hash(g),
        n: g.n(),
        status: Status::Skipped,
        outcome: None,
        witness: Value::Null,
        margins: Vec::new(),
        degenerate: false,
        reason: Some(reason),
        trace: None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Replay {
    pub record: SampleRecord,
    /// Status, outcome tag and witness agree with the stored record.
    pub identical: bool,
}

/// Re-runs one record of a report from its stored graph and seed, keeping the trace.
pub fn replay(report: &CampaignReport, index: usize) -> Result<Replay> {
    let stored = report
        .records
        .get(index)
        .ok_or_else(|| Error::Precondition(format!("report has no record {index}")))?;
    let g = from_graph6(&stored.graph6)?;
    if graph_hash(&g) != stored.graph_hash {
        return Err(Error::Parse("graph hash does not match the stored graph".into()));
    }
    let mut rec = if g.n() > report.config.max_n {
        skipped(stored.seed, &g, format!("n = {} above max_n", g.n()))
    } else {
        run_sample(report.config.lemma, &g, &report.config.params, stored.seed, true)
    };
    rec.index = stored.index;
    rec.spec_index = stored.spec_index;
    rec.sample = stored.sample;
    let identical = rec.status == stored.status && rec.outcome == stored.outcome && rec.witness == stored.witness;
    Ok(Replay { record: rec, identical })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gnp(n: usize, p: Q) -> GeneratorSpec {
        GeneratorSpec::new(Family::Gnp { n, n_min: None, p })
    }

    #[test]
    fn lemma_ids_round_trip() {
        for l in Lemma::ALL {
            assert_eq!(Lemma::parse(&l.id()).unwrap(), l);
        }
        assert_eq!(Lemma::parse("p5-chi-bound").unwrap(), Lemma::P5ChiBound);
        assert!(Lemma::parse("nope").is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = CampaignConfig::new(Lemma::Oracles, vec![gnp(6, q(1, 2))], 2, 1);
        assert!(cfg.validate().is_ok());
        cfg.max_n = 21;
        assert!(cfg.validate().is_err());
        cfg.max_n = 20;
        cfg.params.eps = q(1, 1);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn campaign_is_deterministic_across_worker_counts() {
        let mut cfg = CampaignConfig::new(Lemma::ControlledSubgraph, vec![gnp(8, q(1, 2))], 6, 42);
        cfg.workers = Some(1);
        let a = run_campaign(&cfg).unwrap();
        cfg.workers = Some(3);
        let b = run_campaign(&cfg).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(a.counts.fail, 0);
    }

    #[test]
    fn report_round_trips_and_replays() {
        let mut cfg = CampaignConfig::new(Lemma::TbroomColour, vec![gnp(7, q(1, 3))], 4, 9);
        cfg.workers = Some(2);
        let rep = run_campaign(&cfg).unwrap();
        let back = CampaignReport::from_json(&rep.to_json()).unwrap();
        assert_eq!(back, rep);
        for i in 0..rep.records.len() {
            let r = replay(&back, i).unwrap();
            assert!(r.identical, "record {i} differs on replay");
        }
        let mut bad = back.clone();
        bad.schema = "other/9".into();
        assert!(CampaignReport::from_json(&serde_json::to_string(&bad).unwrap()).is_err());
    }
}
