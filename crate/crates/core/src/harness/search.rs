//! Exhaustive hard-instance search for the two colourful-subgraph
//! conjectures. A finding is the graph whose best achievable ratio is the
//! smallest in the corpus; it is evidence, not a disproof.

use serde::{Deserialize, Serialize};

use crate::ctx::Ctx;
use crate::error::{Error, Result};
use crate::generators::named;
use crate::graph::{Graph, VertexSet};
use crate::io::to_graph6;
use crate::oracles::is_h_free;
use crate::rational::{fmt_q, qu, Q};

/// Largest graph searched exhaustively over all induced subgraphs.
pub const SEARCH_MAX_N: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchTarget {
    /// Largest χ(F)/χ(G) over ε-colourful induced F.
    Clful,
    /// Largest min(χ(F)/χ(G), min_v χ(N_F(v))/χ(F)) over induced F.
    Modp5,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub target: SearchTarget,
    /// ε for `Clful`; ignored for `Modp5`.
    #[serde(with = "crate::rational::serde_q")]
    pub eps: Q,
    /// Forbidden forest the corpus is filtered by.
    pub forest: String,
}

impl SearchConfig {
    pub fn new(target: SearchTarget, eps: Q) -> Self {
        SearchConfig {
            target,
            eps,
            forest: "P5".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub index: usize,
    pub graph6: String,
    pub chi: usize,
    pub best_f: Vec<usize>,
    /// Best achievable ratio as "p/q".
    pub delta: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub instances: Vec<Instance>,
    /// Corpus entries that contain the forbidden forest or have no vertices.
    pub skipped: usize,
    pub finding: Option<Instance>,
    pub exhausted: bool,
}

fn is_colourful(ctx: &Ctx, f: VertexSet, eps: &Q) -> bool {
    let chi_f = qu(ctx.chi(f));
    f.iter()
        .all(|v| qu(ctx.chi(f - ctx.g.nbrs(v).with(v))) < eps * &chi_f)
}

fn ratio(ctx: &Ctx, f: VertexSet, chi_g: usize, target: SearchTarget, eps: &Q) -> Option<Q> {
    let chi_f = ctx.chi(f);
    let base = Q::new(chi_f.into(), chi_g.into());
    match target {
        SearchTarget::Clful => is_colourful(ctx, f, eps).then_some(base),
        SearchTarget::Modp5 => {
            let worst = f.iter().map(|v| ctx.chi(ctx.g.nbrs(v) & f)).min().unwrap_or(0);
            Some(base.min(Q::new(worst.into(), chi_f.into())))
        }
    }
}

/// Best induced subgraph of one graph for the target, by enumeration.
pub fn best_subgraph(g: &Graph, cfg: &SearchConfig) -> Result<Option<(VertexSet, Q)>> {
    if g.n() > SEARCH_MAX_N {
        return Err(Error::CapExceeded {
            n: g.n(),
            cap: SEARCH_MAX_N,
            what: "exhaustive search".into(),
        });
    }
    if g.n() == 0 {
        return Ok(None);
    }
    let ctx = Ctx::new(g)?;
    let chi_g = ctx.chi(g.vertices());
    let mut best: Option<(VertexSet, Q)> = None;
    for mask in 1u64..1 << g.n() {
        let f = VertexSet(mask);
        if let Some(r) = ratio(&ctx, f, chi_g, cfg.target, &cfg.eps) {
            if best.as_ref().is_none_or(|(_, b)| r > *b) {
                best = Some((f, r));
            }
        }
    }
    Ok(best)
}

pub fn search(corpus: &[Graph], cfg: &SearchConfig) -> Result<SearchReport> {
    if cfg.target == SearchTarget::Clful && cfg.eps <= qu(0) {
        return Err(Error::Precondition("ε must be positive".into()));
    }
    let forest = named(&cfg.forest)?;
    let mut instances = Vec::new();
    let mut skipped = 0;
    let mut worst: Option<(Q, usize)> = None;
    for (index, g) in corpus.iter().enumerate() {
        if g.n() > SEARCH_MAX_N {
            return Err(Error::CapExceeded {
                n: g.n(),
                cap: SEARCH_MAX_N,
                what: "exhaustive search".into(),
            });
        }
        if g.n() == 0 || !is_h_free(g, &forest) {
            skipped += 1;
            continue;
        }
        let chi = Ctx::new(g)?.chi(g.vertices());
        let (f, delta) = best_subgraph(g, cfg)?.unwrap_or((VertexSet::EMPTY, qu(0)));
        if worst.as_ref().is_none_or(|(w, _)| delta < *w) {
            worst = Some((delta.clone(), instances.len()));
        }
        instances.push(Instance {
            index,
            graph6: to_graph6(g),
            chi,
            best_f: f.to_vec(),
            delta: fmt_q(&delta),
        });
    }
    let finding = worst.map(|(_, i)| instances[i].clone());
    Ok(SearchReport {
        config: cfg.clone(),
        exhausted: finding.is_none(),
        instances,
        skipped,
        finding,
    })
}
