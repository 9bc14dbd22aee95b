use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use purepair::certify::{self, Certificate};
use purepair::extract::basic::{
    controlled_subgraph, gyarfas_colour_bound, gyarfas_vertex, min_degree_core, vivid_clique,
};
use purepair::extract::broom::{
    broom_or_anticomplete, covering_blockade, star_step, tbroom_colour, tbroom_decompose,
};
use purepair::extract::eh::{eh_step, near_pure_pair, quasi_pure};
use purepair::extract::p5::{
    assert_unmixed, colourful_complete_pair, linanti, locdense, nonneighbour_cover, p5_chi_bound, p5_complete_pair,
    terminal_complete_pair, terminal_partition, P5Params,
};
use purepair::generators::{build_family, named, Family, GeneratorSpec};
use purepair::harness::search::{search, SearchConfig, SearchTarget};
use purepair::harness::{covering_supplier, replay, CampaignParams, Status, CAMPAIGN_MAX_N};
use purepair::io::{parse_graph, parse_graph6_stream, to_edge_list, to_graph6};
use purepair::oracles::{chromatic_number, clique_number, degeneracy, find_induced_copy, stability_number, MeasureKind};
use purepair::rational::parse_q;
use purepair::{run_campaign, CampaignConfig, CampaignReport, Graph, Lemma, VertexSet, Q};

// Like println!, but a closed pipe (e.g. `| head`) is not an error.
macro_rules! out {
    ($($t:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(name = "purepair", version, about = "Certified pure-pair extraction on small graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact graph invariants as JSON {value, witness}.
    Oracle {
        which: OracleKind,
        /// Edge list or graph6; stdin when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Pattern graph for `copy`, e.g. P5 or broom(3,2).
        #[arg(long, default_value = "P5")]
        pattern: String,
    },
    /// Write a generated graph.
    Gen(GenArgs),
    /// Run one extraction and print its outcome with a certificate.
    Extract(ExtractArgs),
    /// Run a lemma campaign; exits nonzero on any failure.
    Verify(VerifyArgs),
    /// Exhaustive hard-instance search over a graph6 corpus.
    Search {
        target: Target,
        #[arg(long, default_value = "1/2")]
        eps: String,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value = "P5")]
        forest: String,
    },
    /// Re-run one record of a report with its full trace.
    Replay {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        index: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    Chi,
    Omega,
    Alpha,
    Degeneracy,
    Copy,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Clful,
    Modp5,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Graph6,
    Edges,
}

#[derive(Args)]
struct GenArgs {
    /// gnp, h-free, path, broom, double-star, c5-join, multipartite or named.
    family: String,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value = "1/2")]
    p: String,
    #[arg(long, default_value = "P5")]
    forbidden: String,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 2)]
    t: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Comma-separated part sizes for `multipartite`, leaf counts for `double-star`.
    #[arg(long, default_value = "2,2")]
    parts: String,
    #[arg(long, default_value = "C5")]
    name: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Graph6)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExtractArgs {
    /// Operation, e.g. gyarfas-vertex, tbroom-colour, covering-blockade, linanti, p5-chi.
    op: String,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 2)]
    t: usize,
    /// Count for min-degree-core, ratio for terminal ops and star-step.
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    w: Option<usize>,
    #[arg(long, default_value = "1/2")]
    eps: String,
    /// Erdős–Hajnal exponent for the P5 pipeline.
    #[arg(long, default_value_t = 4)]
    a: usize,
    #[arg(long, default_value = "P5")]
    h: String,
    #[arg(long, value_enum, default_value_t = Measure::Cardinality)]
    measure: Measure,
    /// Vertex list like 0,1,4.
    #[arg(long)]
    set_a: Option<String>,
    #[arg(long)]
    set_b: Option<String>,
    /// Blocks or anchors separated by ';', e.g. "0,1;2,3".
    #[arg(long)]
    blocks: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Measure {
    Chromatic,
    Cardinality,
}

#[derive(Args)]
struct VerifyArgs {
    lemma: String,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 12)]
    max_n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn read_graph(path: &Option<PathBuf>) -> Result<Graph> {
    Ok(parse_graph(&read_input(path)?)?)
}

fn ratio(s: &str) -> Result<Q> {
    Ok(parse_q(s)?)
}

fn set(s: &Option<String>, what: &str) -> Result<VertexSet> {
    let s = s.as_deref().ok_or_else(|| anyhow!("--{what} is required"))?;
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<usize>().map_err(|e| anyhow!("{what}: {t:?}: {e}")))
        .collect()
}

fn sets(s: &Option<String>) -> Result<Vec<VertexSet>> {
    let s = s.as_deref().ok_or_else(|| anyhow!("--blocks is required"))?;
    s.split(';').map(|b| set(&Some(b.to_string()), "blocks")).collect()
}

fn emit(v: &Value) {
    out!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn oracle(which: OracleKind, input: &Option<PathBuf>, pattern: &str) -> Result<()> {
    let g = read_graph(input)?;
    let out = match which {
        OracleKind::Chi => {
            let r = chromatic_number(&g)?;
            json!({ "value": r.value, "witness": r.colouring.classes })
        }
        OracleKind::Omega => {
            let (v, w) = clique_number(&g);
            json!({ "value": v, "witness": w })
        }
        OracleKind::Alpha => {
            let (v, w) = stability_number(&g);
            json!({ "value": v, "witness": w })
        }
        OracleKind::Degeneracy => {
            let (v, order) = degeneracy(&g);
            json!({ "value": v, "witness": order })
        }
        OracleKind::Copy => {
            let h = named(pattern)?;
            let phi = find_induced_copy(&h, &g, None)?;
            json!({ "value": phi.is_some(), "witness": phi })
        }
    };
    emit(&out);
    Ok(())
}

fn list(s: &str) -> Result<Vec<usize>> {
    s.split(',').map(|t| t.trim().parse::<usize>().map_err(|e| anyhow!("{t:?}: {e}"))).collect()
}

fn gen(a: &GenArgs) -> Result<()> {
    let family = match a.family.as_str() {
        "gnp" => Family::Gnp { n: a.n, n_min: None, p: ratio(&a.p)? },
        "h-free" => Family::HFreeRejection {
            n: a.n,
            n_min: None,
            p: ratio(&a.p)?,
            forbidden: a.forbidden.clone(),
            max_rounds: 2000,
        },
        "path" => Family::Path { n: a.n },
        "broom" => Family::Broom { k: a.k, t: a.t },
        "double-star" => match list(&a.parts)?[..] {
            [x, y] => Family::DoubleStar { a: x, b: y },
            _ => bail!("double-star needs --parts a,b"),
        },
        "c5-join" => Family::C5JoinPower { m: a.m },
        "multipartite" => Family::CompleteMultipartite { parts: list(&a.parts)? },
        "named" => Family::Named { name: a.name.clone() },
        other => bail!("unknown family {other:?}"),
    };
    let g = build_family(&GeneratorSpec { family, seed: a.seed })?;
    let text = match a.format {
        Format::Graph6 => format!("{}\n", to_graph6(&g)),
        Format::Edges => to_edge_list(&g),
    };
    match &a.out {
        Some(p) => fs::write(p, text)?,
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
        },
    }
    Ok(())
}

fn ser<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("json")
}

fn extract(a: &ExtractArgs) -> Result<bool> {
    let g = read_graph(&a.input)?;
    let eps = ratio(&a.eps)?;
    let params = P5Params::new(a.a)?;
    let mu = match a.measure {
        Measure::Chromatic => MeasureKind::Chromatic,
        Measure::Cardinality => MeasureKind::Cardinality,
    };
    let count_p = || -> Result<usize> {
        a.p.as_deref()
            .ok_or_else(|| anyhow!("--p is required"))?
            .parse()
            .map_err(|e| anyhow!("--p: {e}"))
    };
    let ratio_p = || ratio(a.p.as_deref().unwrap_or("1"));
    let (outcome, cert): (Value, Certificate) = match a.op.as_str() {
        "gyarfas-vertex" => {
            let v = gyarfas_vertex(&g, a.k)?;
            (json!({ "vertex": v }), certify::gyarfas_vertex(&g, a.k, v))
        }
        "gyarfas-colour" => {
            let r = gyarfas_colour_bound(&g, a.k)?;
            (ser(&r), certify::gyarfas_colouring(&g, a.k, &r))
        }
        "min-degree-core" => {
            let p = count_p()?;
            let r = min_degree_core(&g, p)?;
            (ser(&r), certify::min_degree_core(&g, p, &r))
        }
        "controlled" => {
            let q = a.q.ok_or_else(|| anyhow!("--q is required"))?;
            let r = controlled_subgraph(&g, q)?;
            (ser(&r), certify::controlled_subgraph(&g, q, &r))
        }
        "vivid" => {
            let blocks = sets(&a.blocks)?;
            let r = vivid_clique(&g, &blocks, &eps)?;
            (ser(&r), certify::vivid(&g, &blocks, &eps, &r))
        }
        "eh-step" => {
            let h = named(&a.h)?;
            let anchors = sets(&a.blocks)?;
            let r = eh_step(&g, &h, &eps, &mu, &anchors)?;
            (ser(&r), certify::eh_step(&g, &h, &eps, mu, &anchors, &r))
        }
        "near-pure" => {
            let h = named(&a.h)?;
            let r = near_pure_pair(&g, &h, &eps, &mu)?;
            (ser(&r), certify::near_pure_pair(&g, &h, &eps, mu, &r))
        }
        "quasi-pure" => {
            let h = named(&a.h)?;
            let r = quasi_pure(&g, &h, &eps, &mu)?;
            (ser(&r), certify::quasi_pure(&g, &h, &eps, mu, &r))
        }
        "tbroom-decompose" => {
            let r = tbroom_decompose(&g, a.t)?;
            (ser(&r), certify::tbroom_decomposition(&g, a.t, &r))
        }
        "tbroom-colour" => {
            let r = tbroom_colour(&g, a.t)?;
            (ser(&r), certify::tbroom_colouring(&g, a.t, &r))
        }
        "star-step" => {
            let (sa, sb) = (set(&a.set_a, "set-a")?, set(&a.set_b, "set-b")?);
            let w = a.w.unwrap_or_else(|| clique_number(&g).0);
            let q = ratio_p()?;
            let r = star_step(&g, sa, sb, a.t, &q, w)?;
            (ser(&r), certify::star_step(&g, sa, sb, a.t, &q, w, &r))
        }
        "covering-blockade" => {
            let r = covering_blockade(&g, a.k)?;
            (ser(&r), certify::covering(&g, a.k, &r, 100, 0))
        }
        "broom-anti" => {
            let r = broom_or_anticomplete(&g, a.k, a.t)?;
            (ser(&r), certify::broom_or_anticomplete(&g, a.k, a.t, &r, 100, 0))
        }
        "unmixed" => {
            let (sa, sb) = (set(&a.set_a, "set-a")?, set(&a.set_b, "set-b")?);
            let r = assert_unmixed(&g, sa, sb)?;
            (ser(&r), certify::unmixed(&g, sa, sb, &r))
        }
        "terminal" => {
            let r = terminal_partition(&g, &ratio_p()?)?;
            (ser(&r), certify::terminal_run(&g, &r))
        }
        "terminal-pair" => {
            let p = ratio_p()?;
            let r = terminal_complete_pair(&g, &p, covering_supplier)?;
            (ser(&r), certify::terminal_pair(&g, &p, r.a, r.b))
        }
        "mid" => {
            let (sp, sq) = (set(&a.set_a, "set-a")?, set(&a.set_b, "set-b")?);
            let r = nonneighbour_cover(&g, sp, sq, &params)?;
            (ser(&r), certify::nonneighbour_cover(&g, sp, sq, &r))
        }
        "colourful-pair" => {
            let r = colourful_complete_pair(&g, &eps)?;
            (ser(&r), certify::colourful_pair(&g, &eps, &r))
        }
        "linanti" => {
            let r = linanti(&g, &eps, &params)?;
            (ser(&r), certify::linanti(&g, &eps, &params, &r.outcome))
        }
        "locdense" => {
            let r = locdense(&g, &eps, &params)?;
            (ser(&r), certify::locdense(&g, &eps, &params, &r.outcome))
        }
        "p5-pair" => {
            let r = p5_complete_pair(&g, &params)?;
            (ser(&r), certify::p5_pair(&g, &params, r.a, r.b))
        }
        "p5-chi" => {
            let r = p5_chi_bound(&g, &params)?;
            (ser(&r), certify::chi_bound(&g, &params, &r))
        }
        other => bail!("unknown extract op {other:?}"),
    };
    let passed = cert.passed();
    if a.json {
        emit(&json!({ "op": a.op, "outcome": outcome, "certificate": cert }));
    } else {
        let failed: Vec<String> = cert.failures().map(|c| format!("{}: {}", c.name, c.detail)).collect();
        out!(
            "{}: {} ({} checks, {} failed{})",
            a.op,
            if passed { "certified" } else { "NOT certified" },
            cert.checks.len(),
            failed.len(),
            if cert.degenerate { ", degenerate thresholds" } else { "" }
        );
        for f in failed {
            out!("  {f}");
        }
        out!("{}", serde_json::to_string(&outcome)?);
    }
    Ok(passed)
}

fn verify(a: &VerifyArgs) -> Result<bool> {
    let mut cfg = match &a.config {
        Some(p) => CampaignConfig::from_json(&fs::read_to_string(p)?)?,
        None => {
            let lemma = Lemma::parse(&a.lemma)?;
            if a.max_n > CAMPAIGN_MAX_N {
                bail!("--max-n above {CAMPAIGN_MAX_N}");
            }
            let params = CampaignParams::default();
            let specs = CampaignConfig::default_specs(lemma, &params, a.max_n);
            let mut cfg = CampaignConfig::new(lemma, specs, a.samples, a.seed);
            cfg.max_n = a.max_n;
            cfg
        }
    };
    if a.out.is_some() {
        cfg.out = a.out.clone();
    }
    if a.workers.is_some() {
        cfg.workers = a.workers;
    }
    let rep = run_campaign(&cfg)?;
    out!(
        "{}: {} pass, {} fail, {} skipped in {} ms",
        cfg.lemma.id(),
        rep.counts.pass,
        rep.counts.fail,
        rep.counts.skipped,
        rep.wall_clock_ms
    );
    for r in rep.failures().take(10) {
        out!("  #{} {}: {}", r.index, r.graph6, r.reason.as_deref().unwrap_or(""));
    }
    Ok(rep.counts.fail == 0)
}

fn run_search(target: Target, eps: &str, corpus: &PathBuf, forest: &str) -> Result<()> {
    let graphs = parse_graph6_stream(&fs::read_to_string(corpus)?)?;
    let target = match target {
        Target::Clful => SearchTarget::Clful,
        Target::Modp5 => SearchTarget::Modp5,
    };
    let mut cfg = SearchConfig::new(target, ratio(eps)?);
    cfg.forest = forest.to_string();
    emit(&ser(&search(&graphs, &cfg)?));
    Ok(())
}

fn run_replay(report: &PathBuf, index: usize) -> Result<bool> {
    let rep = CampaignReport::from_json(&fs::read_to_string(report)?)?;
    let r = replay(&rep, index)?;
    emit(&ser(&r));
    Ok(r.identical && r.record.status != Status::Fail)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Oracle { which, input, pattern } => oracle(*which, input, pattern).map(|_| true),
        Cmd::Gen(a) => gen(a).map(|_| true),
        Cmd::Extract(a) => extract(a),
        Cmd::Verify(a) => verify(a),
        Cmd::Search { target, eps, corpus, forest } => run_search(*target, eps, corpus, forest).map(|_| true),
        Cmd::Replay { report, index } => run_replay(report, *index),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
