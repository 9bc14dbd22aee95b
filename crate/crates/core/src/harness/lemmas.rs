//! One lemma run on one graph: input preparation, extraction and the
//! independent certificate.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::CampaignParams;
use crate::certify::{self, Certificate, Checker};
use crate::ctx::Ctx;
use crate::error::{Error, Result};
use crate::extract::basic::{
    controlled_subgraph, gyarfas_colour_bound, gyarfas_vertex, min_degree_core, vivid_clique, VividOutcome,
};
use crate::extract::broom::{
    broom_or_anticomplete_with, covering_blockade_with, tbroom_colour, tbroom_decompose, CoveringOutcome, CoveringPolicy,
};
use crate::extract::eh::{eh_step, near_pure_pair, quasi_pure};
use crate::extract::p5::{
    assert_unmixed, colourful_complete_pair, linanti, locdense, p5_chi_bound, p5_complete_pair, p5_complete_pair_full,
    terminal_complete_pair, terminal_partition, MixedCheck,
};
use crate::generators::{broom, named, path};
use crate::graph::{Graph, VertexSet};
use crate::oracles::{is_h_free, omega_of};
use crate::rational::{fmt_q, q, qu, Q};
use crate::trace::{Trace, TraceEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lemma {
    Oracles,
    GyarfasVertex,
    GyarfasColourBound,
    MinDegreeCore,
    ControlledSubgraph,
    VividClique,
    EhStep,
    NearPurePair,
    QuasiPure,
    TbroomDecompose,
    TbroomColour,
    CoveringBlockade,
    BroomOrAnticomplete,
    AssertUnmixed,
    TerminalPartition,
    TerminalCompletePair,
    ColourfulCompletePair,
    Linanti,
    Locdense,
    P5CompletePair,
    P5ChiBound,
}

impl Lemma {
    pub const ALL: [Lemma; 21] = [
        Lemma::Oracles,
        Lemma::GyarfasVertex,
        Lemma::GyarfasColourBound,
        Lemma::MinDegreeCore,
        Lemma::ControlledSubgraph,
        Lemma::VividClique,
        Lemma::EhStep,
        Lemma::NearPurePair,
        Lemma::QuasiPure,
        Lemma::TbroomDecompose,
        Lemma::TbroomColour,
        Lemma::CoveringBlockade,
        Lemma::BroomOrAnticomplete,
        Lemma::AssertUnmixed,
        Lemma::TerminalPartition,
        Lemma::TerminalCompletePair,
        Lemma::ColourfulCompletePair,
        Lemma::Linanti,
        Lemma::Locdense,
        Lemma::P5CompletePair,
        Lemma::P5ChiBound,
    ];

    pub fn id(self) -> String {
        serde_json::to_value(self)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default()
    }

    pub fn parse(s: &str) -> Result<Lemma> {
        let key = s.replace('-', "_");
        serde_json::from_value(Value::String(key)).map_err(|_| {
            let ids: Vec<String> = Lemma::ALL.iter().map(|l| l.id()).collect();
            Error::Parse(format!("unknown lemma '{s}'; expected one of {}", ids.join(", ")))
        })
    }

    fn needs_p5_free(self) -> bool {
        use Lemma::*;
        matches!(
            self,
            GyarfasVertex
                | GyarfasColourBound
                | AssertUnmixed
                | TerminalPartition
                | TerminalCompletePair
                | ColourfulCompletePair
                | Linanti
                | Locdense
                | P5CompletePair
                | P5ChiBound
        )
    }
}

/// Result of one lemma on one graph before it becomes a report record.
pub(crate) struct LemmaRun {
    pub tag: String,
    pub witness: Value,
    pub cert: Certificate,
    pub degenerate: bool,
    pub trace: Vec<TraceEntry>,
}

pub(crate) enum RunError {
    /// The graph is outside the lemma's hypotheses.
    Skip(String),
    Fail(String, Vec<TraceEntry>),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e.clone() {
            Error::Precondition(msg) => RunError::Skip(msg),
            Error::CompleteInput => RunError::Skip("complete input".into()),
            Error::EmptySet => RunError::Skip("empty input".into()),
            Error::CapExceeded { .. } => RunError::Skip(e.to_string()),
            Error::SupplierFailed(msg) => RunError::Skip(format!("supplier hypothesis fails: {msg}")),
            Error::ClaimViolation { claim, detail, trace } => RunError::Fail(format!("{claim}: {detail}"), trace),
            other => RunError::Fail(other.to_string(), Vec::new()),
        }
    }
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

fn run(tag: &str, witness: Value, cert: Certificate, degenerate: bool, trace: Trace) -> LemmaRun {
    let degenerate = degenerate || cert.degenerate;
    LemmaRun {
        tag: tag.to_string(),
        witness,
        cert,
        degenerate,
        trace: trace.entries,
    }
}

fn lift(map: &[usize], s: VertexSet) -> VertexSet {
    s.iter().map(|i| map[i]).collect()
}

/// Graphs outside the lemma's class are skipped rather than failed.
fn class_gate(lemma: Lemma, g: &Graph, params: &CampaignParams) -> std::result::Result<(), String> {
    if g.n() == 0 && lemma != Lemma::Oracles {
        return Err("empty graph".into());
    }
    if lemma.needs_p5_free() && !is_h_free(g, &path(5)) {
        return Err("not P5-free".into());
    }
    if matches!(lemma, Lemma::GyarfasVertex | Lemma::GyarfasColourBound) && !is_h_free(g, &path(params.path_k)) {
        return Err(format!("not P{}-free", params.path_k));
    }
    if matches!(lemma, Lemma::TbroomDecompose | Lemma::TbroomColour) {
        let b = broom(3, params.t).map_err(|e| e.to_string())?;
        if !is_h_free(g, &b) {
            return Err(format!("not (3,{})-broom-free", params.t));
        }
    }
    if matches!(lemma, Lemma::NearPurePair | Lemma::QuasiPure) {
        let h = named(&params.h).map_err(|e| e.to_string())?;
        if !is_h_free(g, &h) {
            return Err(format!("not {}-free", params.h));
        }
    }
    Ok(())
}

/// Connected vertex subsets of `g`, by brute force over bitmasks.
fn connected_subsets(g: &Graph) -> Vec<VertexSet> {
    (1u64..1 << g.n()).map(VertexSet).filter(|&s| g.is_connected(s)).collect()
}

fn random_partition(n: usize, parts: usize, rng: &mut ChaCha8Rng) -> Vec<VertexSet> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut out = vec![VertexSet::EMPTY; parts];
    for (i, &v) in order.iter().enumerate() {
        let slot = if i < parts { i } else { rng.random_range(0..parts) };
        out[slot].insert(v);
    }
    out
}

/// Grows a blockade whose new blocks keep the vividity condition towards
/// every earlier block; with probability 1/4 a final block is drawn freely,
/// which usually breaks it.
fn grow_vivid_blockade(g: &Graph, eps: &Q, rng: &mut ChaCha8Rng) -> Vec<VertexSet> {
    let ctx = match Ctx::new(g) {
        Ok(c) => c,
        Err(_) => return Vec::new(),
    };
    let mut free = g.vertices();
    let mut blocks: Vec<VertexSet> = Vec::new();
    loop {
        let cand: VertexSet = free
            .iter()
            .filter(|&v| {
                blocks
                    .iter()
                    .all(|&b| qu(ctx.chi(b - g.nbrs(v))) < eps * qu(ctx.chi(b)))
            })
            .collect();
        if cand.is_empty() {
            break;
        }
        let mut block: VertexSet = cand.iter().filter(|_| rng.random_bool(0.5)).collect();
        if block.is_empty() {
            let pick = cand.to_vec()[rng.random_range(0..cand.len())];
            block.insert(pick);
        }
        free = free - block;
        blocks.push(block);
    }
    if !free.is_empty() && rng.random_bool(0.25) {
        let block: VertexSet = free.iter().filter(|_| rng.random_bool(0.5)).collect();
        if !block.is_empty() {
            blocks.push(block);
        }
    }
    blocks
}

pub(crate) fn run_lemma(
    lemma: Lemma,
    g: &Graph,
    params: &CampaignParams,
    seed: u64,
) -> std::result::Result<LemmaRun, RunError> {
    class_gate(lemma, g, params).map_err(RunError::Skip)?;
    let all = g.vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let empty = Trace::new;
    Ok(match lemma {
        Lemma::Oracles => {
            let pats = [
                ("P4", path(4)),
                ("P5", path(5)),
                ("broom(3,2)", broom(3, 2)?),
            ];
            let cert = certify::oracle_consistency(g, &pats);
            run("consistent", json!({ "n": g.n() }), cert, false, empty())
        }
        Lemma::GyarfasVertex => {
            let v = gyarfas_vertex(g, params.path_k)?;
            let cert = certify::gyarfas_vertex(g, params.path_k, v);
            run("vertex", json!({ "v": v }), cert, false, empty())
        }
        Lemma::GyarfasColourBound => {
            let r = gyarfas_colour_bound(g, params.path_k)?;
            let cert = certify::gyarfas_colouring(g, params.path_k, &r);
            run("colouring", to_json(&r), cert, false, empty())
        }
        Lemma::MinDegreeCore => {
            let chi = Checker::new(g).chi(all);
            let p = params.p.unwrap_or(chi / 2);
            let r = min_degree_core(g, p)?;
            let cert = certify::min_degree_core(g, p, &r);
            run("subgraph", json!({ "p": p, "core": to_json(&r) }), cert, false, empty())
        }
        Lemma::ControlledSubgraph => {
            let w = omega_of(g, all);
            let qv = params.q.unwrap_or(w.max(2));
            let r = controlled_subgraph(g, qv)?;
            let cert = certify::controlled_subgraph(g, qv, &r);
            run("subgraph", json!({ "q": qv, "result": to_json(&r) }), cert, false, empty())
        }
        Lemma::VividClique => {
            let w = omega_of(g, all).max(1);
            let eps = q(1, w as i64);
            let blocks = grow_vivid_blockade(g, &eps, &mut rng);
            if blocks.is_empty() {
                return Err(RunError::Skip("no blockade".into()));
            }
            let r = vivid_clique(g, &blocks, &eps)?;
            let cert = certify::vivid(g, &blocks, &eps, &r);
            let tag = match r {
                VividOutcome::Clique { .. } => "clique",
                VividOutcome::NotVivid { .. } => "not_vivid",
                VividOutcome::Stuck { .. } => "stuck",
            };
            let witness = json!({ "blocks": to_json(&blocks), "eps": fmt_q(&eps), "result": to_json(&r) });
            run(tag, witness, cert, false, empty())
        }
        Lemma::EhStep => {
            let h = named(&params.h)?;
            if g.n() < h.n() {
                return Err(RunError::Skip("fewer vertices than H".into()));
            }
            let anchors = random_partition(g.n(), h.n(), &mut rng);
            let r = eh_step(g, &h, &params.eps, &params.measure, &anchors)?;
            let cert = certify::eh_step(g, &h, &params.eps, params.measure, &anchors, &r);
            let tag = match r.outcome {
                crate::extract::eh::EhOutcome::Copy { .. } => "induced_copy",
                crate::extract::eh::EhOutcome::Pair(_) => "near_pure_pair",
            };
            run(tag, json!({ "anchors": to_json(&anchors), "result": to_json(&r) }), cert, false, empty())
        }
        Lemma::NearPurePair => {
            let h = named(&params.h)?;
            let r = near_pure_pair(g, &h, &params.eps, &params.measure)?;
            let cert = certify::near_pure_pair(g, &h, &params.eps, params.measure, &r);
            run("near_pure_pair", to_json(&r), cert, r.trivial, empty())
        }
        Lemma::QuasiPure => {
            let h = named(&params.h)?;
            let w = omega_of(g, all).max(1);
            let eps = params.eps.clone().min(q(1, w as i64));
            let r = quasi_pure(g, &h, &eps, &params.measure)?;
            let cert = certify::quasi_pure(g, &h, &eps, params.measure, &r);
            let tag = match r.outcome {
                crate::extract::eh::QuasiOutcome::StableSet { .. } => "stable_set",
                crate::extract::eh::QuasiOutcome::Pair(_) => "near_pure_pair",
            };
            run(tag, json!({ "eps": fmt_q(&eps), "result": to_json(&r) }), cert, false, empty())
        }
        Lemma::TbroomDecompose => {
            let r = tbroom_decompose(g, params.t)?;
            let cert = certify::tbroom_decomposition(g, params.t, &r);
            run("decomposition_sp", to_json(&r), cert, false, empty())
        }
        Lemma::TbroomColour => {
            let r = tbroom_colour(g, params.t)?;
            let cert = certify::tbroom_colouring(g, params.t, &r);
            run("colouring", to_json(&r), cert, false, empty())
        }
        Lemma::CoveringBlockade => {
            let r = covering_blockade_with(g, params.k, CoveringPolicy::PreferBlockade)?;
            let cert = certify::covering(g, params.k, &r, params.covering_samples, seed);
            let tag = match r.outcome {
                CoveringOutcome::Anticomplete { .. } => "anticomplete_pair",
                CoveringOutcome::Blockade(_) => "covering_blockade",
            };
            let trace = r.trace.clone();
            let witness = json!({ "outcome": to_json(&r.outcome), "fallback": r.fallback });
            run(tag, witness, cert, r.degenerate, trace)
        }
        Lemma::BroomOrAnticomplete => {
            let r = broom_or_anticomplete_with(g, params.k, params.t, CoveringPolicy::PreferBlockade)?;
            let cert = certify::broom_or_anticomplete(g, params.k, params.t, &r, params.covering_samples, seed);
            let tag = match r.outcome {
                crate::extract::broom::BroomOutcome::Anticomplete { .. } => "anticomplete_pair",
                crate::extract::broom::BroomOutcome::Broom { .. } => "broom_pair",
            };
            let trace = r.trace.clone();
            let witness = json!({ "outcome": to_json(&r.outcome), "fallback": r.fallback });
            run(tag, witness, cert, r.degenerate, trace)
        }
        Lemma::AssertUnmixed => unmixed_campaign(g, &mut rng)?,
        Lemma::TerminalPartition => {
            let (h, map) = controlled_core(g)?;
            let r = terminal_partition(&h, &params.terminal_p)?;
            let cert = certify::terminal_run(&h, &r);
            let witness = json!({ "core": to_json(&lift(&map, h.vertices())), "map": map, "run": to_json(&r.partition) });
            let trace = r.trace.clone();
            run("terminal_partition", witness, cert, false, trace)
        }
        Lemma::TerminalCompletePair => {
            let (h, map) = controlled_core(g)?;
            let p = params.terminal_p.clone();
            let r = terminal_complete_pair(&h, &p, covering_supplier)?;
            let cert = certify::terminal_pair(&h, &p, r.a, r.b);
            let witness = json!({
                "a": to_json(&lift(&map, r.a)),
                "b": to_json(&lift(&map, r.b)),
                "extensions": r.extensions,
            });
            let trace = r.trace.clone();
            run("complete_pair", witness, cert, false, trace)
        }
        Lemma::ColourfulCompletePair => {
            let r = colourful_complete_pair(g, &params.eps)?;
            let cert = certify::colourful_pair(g, &params.eps, &r);
            let witness = json!({ "a": to_json(&r.a), "b": to_json(&r.b), "route": to_json(&r.route) });
            run("complete_pair", witness, cert, r.degenerate, r.trace)
        }
        Lemma::Linanti => {
            let eps = params.eps.clone().min(q(1, 2));
            let r = linanti(g, &eps, &params.p5)?;
            let cert = certify::linanti(g, &eps, &params.p5, &r.outcome);
            let witness = json!({ "outcome": to_json(&r.outcome), "extensions": r.extensions, "eh_violation": r.eh_violation });
            run(dense_tag(&r.outcome), witness, cert, r.degenerate, r.trace)
        }
        Lemma::Locdense => {
            let eps = params.eps.clone().min(q(1, 2));
            let r = locdense(g, &eps, &params.p5)?;
            let cert = certify::locdense(g, &eps, &params.p5, &r.outcome);
            let witness = json!({ "outcome": to_json(&r.outcome), "extensions": r.extensions, "eh_violation": r.eh_violation });
            run(dense_tag(&r.outcome), witness, cert, r.degenerate, r.trace)
        }
        Lemma::P5CompletePair => {
            let quick = p5_complete_pair(g, &params.p5)?;
            let full = p5_complete_pair_full(g, &params.p5)?;
            let mut cert = certify::p5_pair(g, &params.p5, quick.a, quick.b);
            let second = certify::p5_pair(g, &params.p5, full.a, full.b);
            cert.checks.extend(second.checks.into_iter().map(|mut c| {
                c.name = format!("full pipeline: {}", c.name);
                c
            }));
            cert.margins.extend(second.margins);
            cert.degenerate |= second.degenerate;
            let witness = json!({
                "a": to_json(&quick.a),
                "b": to_json(&quick.b),
                "route": to_json(&quick.route),
                "full": { "a": to_json(&full.a), "b": to_json(&full.b), "route": to_json(&full.route) },
            });
            let mut trace = quick.trace;
            trace.entries.extend(full.trace.entries);
            run("complete_pair", witness, cert, quick.degenerate || full.degenerate, trace)
        }
        Lemma::P5ChiBound => {
            let r = p5_chi_bound(g, &params.p5)?;
            let cert = certify::chi_bound(g, &params.p5, &r);
            let witness = json!({
                "colours": r.colouring.count(),
                "raw_count": r.raw_count,
                "certificate": to_json(&r.certificate),
            });
            run("colouring", witness, cert, false, r.trace)
        }
    })
}

fn dense_tag(o: &crate::extract::p5::DenseOutcome) -> &'static str {
    match o {
        crate::extract::p5::DenseOutcome::Colourful { .. } => "colourful_subgraph",
        crate::extract::p5::DenseOutcome::Anticomplete { .. } => "anticomplete_pair",
        crate::extract::p5::DenseOutcome::Complete { .. } => "complete_pair",
    }
}

/// G[J] for the w-controlled subgraph J of G, with its vertex map.
fn controlled_core(g: &Graph) -> Result<(Graph, Vec<usize>)> {
    let w = omega_of(g, g.vertices()).max(2);
    let j = controlled_subgraph(g, w)?.j;
    g.induced(j)
}

/// Anticomplete pairs from the covering step on G[F], lifted back to G.
pub fn covering_supplier(ctx: &Ctx, f: VertexSet) -> Result<(VertexSet, VertexSet)> {
    let (h, map) = ctx.g.induced(f)?;
    if h.is_complete() {
        return Err(Error::SupplierFailed("F is complete".into()));
    }
    match covering_blockade_with(&h, 1, CoveringPolicy::FirstOutcome)?.outcome {
        CoveringOutcome::Anticomplete { a, b } => Ok((lift(&map, a), lift(&map, b))),
        CoveringOutcome::Blockade(_) => Err(Error::SupplierFailed("covering step returned a blockade".into())),
    }
}

const EXHAUSTIVE_UNMIXED_N: usize = 10;

/// Every anticomplete pair of connected sets for n ≤ 10, else a sample.
fn unmixed_campaign(g: &Graph, rng: &mut ChaCha8Rng) -> std::result::Result<LemmaRun, RunError> {
    let conn = connected_subsets(g);
    let mut pairs = Vec::new();
    if g.n() <= EXHAUSTIVE_UNMIXED_N {
        for (i, &a) in conn.iter().enumerate() {
            let reach = a | g.nbrs_of_set(a);
            for &b in &conn[i + 1..] {
                if b.is_disjoint(reach) {
                    pairs.push((a, b));
                }
            }
        }
    } else {
        for _ in 0..20 * conn.len().min(100) {
            let a = conn[rng.random_range(0..conn.len())];
            let b = conn[rng.random_range(0..conn.len())];
            if b.is_disjoint(a | g.nbrs_of_set(a)) {
                pairs.push((a, b));
            }
        }
    }
    if pairs.is_empty() {
        return Err(RunError::Skip("no anticomplete pair of connected sets".into()));
    }
    let mut ck = Checker::new(g);
    let mut witnesses = 0;
    for &(a, b) in &pairs {
        let r = assert_unmixed(g, a, b)?;
        if matches!(r, MixedCheck::P5Witness { .. }) {
            witnesses += 1;
        }
        let c = certify::unmixed(g, a, b, &r);
        let first = c.failures().next().map(|f| (f.name.clone(), f.detail.clone()));
        if let Some((name, detail)) = first {
            ck.holds(&name, false, format!("A = {:?}, B = {:?}: {}", a.to_vec(), b.to_vec(), detail));
        }
    }
    ck.holds("no P5 witness in a P5-free graph", witnesses == 0, format!("{witnesses} witnesses"));
    let tag = if witnesses == 0 { "unmixed" } else { "p5_witness" };
    Ok(run(tag, json!({ "pairs": pairs.len() }), ck.finish(), false, Trace::new()))
}
