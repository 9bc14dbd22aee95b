//! Brooms: t-broom decompositions and colourings, the star step, covering
//! blockades, and the broom-or-anticomplete pipeline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ctx::Ctx;
use crate::error::{precondition, Error, Result};
use crate::extract::basic::{controlled_subgraph_in, min_degree_core_in};
use crate::extract::outcome::CoveringBlockade;
use crate::extract::pairs::maximize_anticomplete_pair;
use crate::generators::{broom, derive_seed};
use crate::graph::{Graph, VertexSet};
use crate::oracles::chromatic::{exact_colouring, Colouring};
use crate::oracles::clique::max_clique;
use crate::oracles::copy::find_induced_copy;
use crate::oracles::degeneracy::{degeneracy_colouring, degeneracy_of};
use crate::oracles::ramsey::ramsey;
use crate::rational::{qu, upow, wpow, Q};
use crate::trace::Trace;

fn require_broom_free(g: &Graph, k: usize, t: usize) -> Result<()> {
    if let Some(copy) = find_induced_copy(&broom(k, t)?, g, None)? {
        return Err(Error::ForbiddenCopy {
            what: format!("({k},{t})-broom"),
            copy,
        });
    }
    Ok(())
}

fn violation(claim: &str, detail: impl Into<String>, trace: &Trace) -> Error {
    Error::ClaimViolation {
        claim: claim.into(),
        detail: detail.into(),
        trace: trace.entries.clone(),
    }
}

/// First non-adjacent pair (u < v), lexicographically.
fn first_non_edge(g: &Graph) -> Option<(usize, usize)> {
    (0..g.n()).find_map(|u| {
        let miss = g.vertices() - g.closed_nbrs(u) - VertexSet::full(u);
        miss.first().map(|v| (u, v))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub s: VertexSet,
    pub p: VertexSet,
    pub q: VertexSet,
    /// The component of G that was decomposed.
    pub component: VertexSet,
    pub w: usize,
    pub ramsey: u64,
    /// The component was complete and S, P were taken from its vertices.
    pub complete_case: bool,
    /// (u, degeneracy of G[P \ N(u)]) for every u ∈ S.
    pub degeneracies: Vec<(usize, usize)>,
}

/// Nonempty disjoint S, P with χ(G) ≤ χ(S) + χ(P), ω·χ(P) ≥ χ(G) and
/// P \ N(u) of low degeneracy for every u ∈ S.
pub fn tbroom_decompose(g: &Graph, t: usize) -> Result<Decomposition> {
    if t == 0 {
        return Err(precondition("t must be at least 1"));
    }
    let ctx = Ctx::new(g)?;
    require_broom_free(g, 3, t)?;
    if ctx.omega(g.vertices()) < 2 {
        return Err(precondition("ω(G) must be at least 2"));
    }
    tbroom_decompose_in(&ctx, g.vertices(), t)
}

pub(crate) fn tbroom_decompose_in(ctx: &Ctx, dom: VertexSet, t: usize) -> Result<Decomposition> {
    let g = ctx.g;
    let w = ctx.omega(dom);
    let r = ramsey(t as u64, w as u64);
    let c0 = ctx.max_chi_component(dom);
    let (s, p, q, complete_case) = if g.is_clique(c0) {
        // Both singletons would lose χ when c0 is a larger clique; keep all of
        // c0 \ {p} in S so that χ(S) + χ(P) still covers χ(c0).
        let top = c0.iter().last().expect("nonempty component");
        (c0.without(top), VertexSet::singleton(top), VertexSet::EMPTY, true)
    } else {
        let k = max_clique(g, c0);
        let (v, pv) = k
            .iter()
            .map(|v| (v, c0 - k - g.nbrs(v)))
            .max_by(|a, b| ctx.chi(a.1).cmp(&ctx.chi(b.1)).then(b.0.cmp(&a.0)))
            .expect("nonempty clique");
        let p0 = ctx.max_chi_component(pv);
        let cut = maximize_anticomplete_pair(ctx, c0, p0, VertexSet::singleton(v));
        (cut.s, cut.p, cut.q, false)
    };
    let mut degeneracies = Vec::with_capacity(s.len());
    let limit = 2 * (r as usize).saturating_sub(1);
    for u in s.iter() {
        let (d, _) = degeneracy_of(g, p - g.nbrs(u));
        if d > limit {
            let mut trace = Trace::new();
            trace.check("degeneracy(P \\ N(u)) ≤ 2(R(t,w)-1)", false, format!("u={u} d={d} limit={limit}"));
            if let Some(copy) = find_induced_copy(&broom(3, t)?, g, None)? {
                return Err(Error::ForbiddenCopy {
                    what: format!("(3,{t})-broom"),
                    copy,
                });
            }
            return Err(violation("tbroom-degeneracy", format!("u={u}"), &trace));
        }
        degeneracies.push((u, d));
    }
    Ok(Decomposition {
        s,
        p,
        q,
        component: c0,
        w,
        ramsey: r,
        complete_case,
        degeneracies,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedColouring {
    pub colouring: Colouring,
    /// Colours used before greedy compaction.
    pub raw_count: usize,
    /// Decimal integer.
    pub bound: String,
}

/// A proper colouring with at most 2ω²R(t, ω) colours by recursing on the
/// decomposition.
pub fn tbroom_colour(g: &Graph, t: usize) -> Result<BoundedColouring> {
    if t == 0 {
        return Err(precondition("t must be at least 1"));
    }
    let ctx = Ctx::new(g)?;
    require_broom_free(g, 3, t)?;
    let w = ctx.omega(g.vertices());
    let bound = if w == 0 {
        0
    } else {
        2 * (w as u64) * (w as u64) * ramsey(t as u64, w as u64)
    };
    let raw = Colouring::new(colour_rec(&ctx, g.vertices(), t)?);
    let raw_count = raw.count();
    Ok(BoundedColouring {
        colouring: raw.compact(g),
        raw_count,
        bound: bound.to_string(),
    })
}

fn merge_parallel(parts: Vec<Vec<VertexSet>>) -> Vec<VertexSet> {
    let mut out: Vec<VertexSet> = Vec::new();
    for part in parts {
        for (i, c) in part.into_iter().enumerate() {
            if i < out.len() {
                out[i] = out[i] | c;
            } else {
                out.push(c);
            }
        }
    }
    out
}

fn colour_rec(ctx: &Ctx, dom: VertexSet, t: usize) -> Result<Vec<VertexSet>> {
    let g = ctx.g;
    if dom.is_empty() {
        return Ok(vec![]);
    }
    if g.is_stable(dom) {
        return Ok(vec![dom]);
    }
    let comps = g.components(dom);
    if comps.len() > 1 {
        let parts = comps
            .into_iter()
            .map(|c| colour_rec(ctx, c, t))
            .collect::<Result<Vec<_>>>()?;
        return Ok(merge_parallel(parts));
    }
    let dec = tbroom_decompose_in(ctx, dom, t)?;
    let s_classes = colour_rec(ctx, dec.s, t)?;
    let c = max_clique(g, dec.s);
    let d = dec.p - g.common_nbrs(c);
    let mut p_classes = Vec::new();
    let mut done = VertexSet::EMPTY;
    for v in c.iter() {
        let dc = (dec.p - g.nbrs(v)) & d - done;
        done = done | dc;
        p_classes.extend(degeneracy_colouring(g, dc));
    }
    p_classes.extend(colour_rec(ctx, dec.p - d, t)?);
    let others: Vec<Vec<VertexSet>> = g
        .components(dom - dec.s - dec.p)
        .into_iter()
        .map(|r| exact_colouring(g, r))
        .collect();
    let mut rest = vec![p_classes];
    rest.extend(others);
    let mut out = s_classes;
    out.extend(merge_parallel(rest));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StarOutcome {
    PairXY { x: VertexSet, y: VertexSet },
    /// `p` is a stable set of size t anticomplete to `q`.
    Anticomplete { p: VertexSet, q: VertexSet },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarResult {
    pub outcome: StarOutcome,
    /// The greedily peeled maximum cliques A_1..A_n.
    pub cliques: Vec<VertexSet>,
}

/// Either (X, Y) ⊆ (A, B) with ω(X) + ω(Y) ≤ ω(F), |A \ X| < w^(t+2) and
/// χ(B \ Y) < q, or a stable t-set P ⊆ A anticomplete to Q ⊆ B with
/// χ(Q) ≥ w^(-t(t+2))·q.
pub fn star_step(g: &Graph, a: VertexSet, b: VertexSet, t: usize, q: &Q, w: usize) -> Result<StarResult> {
    g.check_subset(a)?;
    g.check_subset(b)?;
    if !a.is_disjoint(b) {
        return Err(Error::Overlap);
    }
    let ctx = Ctx::new(g)?;
    star_step_in(&ctx, g.vertices(), a, b, t, q, w)
}

pub(crate) fn star_step_in(
    ctx: &Ctx,
    f: VertexSet,
    a: VertexSet,
    b: VertexSet,
    t: usize,
    q: &Q,
    w: usize,
) -> Result<StarResult> {
    let g = ctx.g;
    if t == 0 || w < 2 {
        return Err(precondition("need t ≥ 1 and w ≥ 2"));
    }
    if q <= &qu(0) {
        return Err(precondition("q must be positive"));
    }
    let omega_f = ctx.omega(f);
    if omega_f > w {
        return Err(precondition(format!("ω(F) = {omega_f} exceeds w = {w}")));
    }
    let big = upow(w, t as u32 + 2);
    if num_bigint::BigUint::from(a.len()) < big {
        return Err(precondition(format!("|A| = {} is below w^(t+2) = {big}", a.len())));
    }
    let n_cl = upow(w, t as u32 + 1) - 1u32;
    let n_cl: usize = n_cl.try_into().unwrap_or(usize::MAX);
    let mut rest = a;
    let mut cliques = Vec::new();
    while cliques.len() < n_cl && !rest.is_empty() {
        let k = max_clique(g, rest);
        rest = rest - k;
        cliques.push(k);
    }
    let x = rest;
    let peeled = a - x;
    let wt = upow(w, t as u32);
    let y: VertexSet = b
        .iter()
        .filter(|&v| num_bigint::BigUint::from((peeled - g.nbrs(v)).len()) < wt)
        .collect();
    let share = wpow(w, -((t * (t + 2)) as i64)) * q;
    let stable_sets = stable_subsets(g, peeled.to_vec(), t);
    for s in stable_sets {
        let qs = (b - y) - g.nbrs_of_set(s);
        if qu(ctx.chi(qs)) >= share {
            return Ok(StarResult {
                outcome: StarOutcome::Anticomplete { p: s, q: qs },
                cliques,
            });
        }
    }
    let mut trace = Trace::new();
    let ok1 = trace.check(
        "ω(X) + ω(Y) ≤ ω(F)",
        ctx.omega(x) + ctx.omega(y) <= omega_f,
        format!("{} + {} vs {omega_f}", ctx.omega(x), ctx.omega(y)),
    );
    let ok2 = trace.check("|A \\ X| < w^(t+2)", num_bigint::BigUint::from(peeled.len()) < big, format!("{}", peeled.len()));
    let ok3 = trace.check("χ(B \\ Y) < q", &qu(ctx.chi(b - y)) < q, format!("{}", ctx.chi(b - y)));
    if !(ok1 && ok2 && ok3) {
        return Err(violation("star-step", "first outcome does not hold", &trace));
    }
    Ok(StarResult {
        outcome: StarOutcome::PairXY { x, y },
        cliques,
    })
}

/// Stable t-subsets of `pool` in lexicographic order.
fn stable_subsets(g: &Graph, pool: Vec<usize>, t: usize) -> Vec<VertexSet> {
    fn rec(g: &Graph, pool: &[usize], start: usize, t: usize, cur: VertexSet, out: &mut Vec<VertexSet>) {
        if cur.len() == t {
            out.push(cur);
            return;
        }
        for i in start..pool.len() {
            let v = pool[i];
            if (g.nbrs(v) & cur).is_empty() {
                rec(g, pool, i + 1, t, cur.with(v), out);
            }
        }
    }
    let mut out = Vec::new();
    rec(g, &pool, 0, t, VertexSet::EMPTY, &mut out);
    out
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoveringPolicy {
    /// Return the first anticomplete pair that meets its threshold; when the
    /// thresholds are below 1 this is any non-edge, before any construction.
    #[default]
    FirstOutcome,
    /// Keep building while the construction can proceed; fall back to the
    /// first qualifying anticomplete pair only when it gets stuck.
    PreferBlockade,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoveringOutcome {
    Anticomplete { a: VertexSet, b: VertexSet },
    Blockade(CoveringBlockade),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringResult {
    pub outcome: CoveringOutcome,
    /// Some threshold of the outcome is below 1.
    pub degenerate: bool,
    /// The construction got stuck and a structurally valid pair was
    /// returned instead.
    pub fallback: bool,
    pub trace: Trace,
}

/// The vertices u of `d` with w·χ(y \ N(u)) < χ(y).
pub fn vivid_part(ctx: &Ctx, d: VertexSet, y: VertexSet, w: usize) -> VertexSet {
    let g = ctx.g;
    let chi_y = ctx.chi(y);
    d.iter().filter(|&u| w * ctx.chi(y - g.nbrs(u)) < chi_y).collect()
}

/// Subsets of `e` tried when looking for a covering violation: all of them
/// when |e| ≤ 12, otherwise a deterministic sample.
pub fn y_candidates(e: VertexSet, salt: u64) -> (Vec<VertexSet>, bool) {
    if e.len() <= 12 {
        let mut out = Vec::with_capacity(1 << e.len());
        let mut sub = e.0;
        loop {
            if sub != 0 {
                out.push(VertexSet(sub));
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & e.0;
        }
        return (out, true);
    }
    let mut out = vec![e];
    out.extend(e.iter().map(|x| e.without(x)));
    out.extend(e.iter().map(VertexSet::singleton));
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(salt, e.0));
    for _ in 0..256 {
        let s = VertexSet(rng.random::<u64>() & e.0);
        if !s.is_empty() {
            out.push(s);
        }
    }
    (out, false)
}

/// A Y ⊆ e with w³χ(Y) ≥ χ(e) whose vivid part X in `d` has
/// w²χ(X) ≥ (w² - 1)χ(d): a violation of the covering property at (d, e).
pub fn find_covering_violation(ctx: &Ctx, d: VertexSet, e: VertexSet, w: usize) -> Option<(VertexSet, VertexSet)> {
    let chi_e = ctx.chi(e);
    let chi_d = ctx.chi(d);
    let w2 = w * w;
    let (cands, _) = y_candidates(e, d.0);
    cands.into_iter().find_map(|y| {
        if w2 * w * ctx.chi(y) < chi_e {
            return None;
        }
        let x = vivid_part(ctx, d, y, w);
        (!x.is_empty() && w2 * ctx.chi(x) >= (w2 - 1) * chi_d).then_some((y, x))
    })
}

enum Level {
    Anti(VertexSet, VertexSet),
    Blockade { d: Vec<VertexSet>, e: VertexSet },
    Stuck(String),
}

/// An anticomplete pair with χ ≥ w^(-8k)χ(G) on both sides, or a k-covering
/// blockade (D_1, ..., D_k, E).
pub fn covering_blockade(g: &Graph, k: usize) -> Result<CoveringResult> {
    covering_blockade_with(g, k, CoveringPolicy::default())
}

pub fn covering_blockade_with(g: &Graph, k: usize, policy: CoveringPolicy) -> Result<CoveringResult> {
    if k == 0 {
        return Err(precondition("k must be at least 1"));
    }
    if g.is_complete() {
        return Err(Error::CompleteInput);
    }
    let ctx = Ctx::new(g)?;
    covering_blockade_in(&ctx, k, policy)
}

pub(crate) fn covering_blockade_in(ctx: &Ctx, k: usize, policy: CoveringPolicy) -> Result<CoveringResult> {
    let g = ctx.g;
    let chi_g = qu(ctx.chi(g.vertices()));
    let w = ctx.omega(g.vertices());
    let mut trace = Trace::new();
    let anti_thr = wpow(w, -8 * k as i64) * &chi_g;
    let block_thr = wpow(w, -6 * k as i64) * &chi_g;
    let one = qu(1);
    let shortcut = policy == CoveringPolicy::FirstOutcome && anti_thr <= one;
    if w < 2 || shortcut {
        let (u, v) = first_non_edge(g).expect("non-complete");
        trace.note("shortcut", "χ(G) ≤ w^(8k): any non-edge meets the anticomplete thresholds");
        return Ok(CoveringResult {
            outcome: CoveringOutcome::Anticomplete {
                a: VertexSet::singleton(u),
                b: VertexSet::singleton(v),
            },
            degenerate: anti_thr <= one,
            fallback: false,
            trace,
        });
    }
    let mut queries = Vec::new();
    let mut remembered: Option<(VertexSet, VertexSet)> = None;
    let mut level = covering_base(ctx, w, &mut trace);
    let mut built = 1;
    while built < k {
        let Level::Blockade { d, e } = level else { break };
        level = covering_extend(ctx, w, d, e, built, policy, &mut queries, &mut remembered, &mut trace)?;
        built += 1;
    }
    let degenerate = anti_thr <= one || block_thr <= one;
    let finish = |outcome, fallback, trace| {
        Ok(CoveringResult {
            outcome,
            degenerate,
            fallback,
            trace,
        })
    };
    match level {
        Level::Anti(a, b) => finish(CoveringOutcome::Anticomplete { a, b }, false, trace),
        Level::Blockade { d, e } => finish(
            CoveringOutcome::Blockade(CoveringBlockade { d, e, k, w, queries }),
            false,
            trace,
        ),
        Level::Stuck(why) => {
            trace.note("stuck", why.clone());
            if let Some((a, b)) = remembered {
                return finish(CoveringOutcome::Anticomplete { a, b }, true, trace);
            }
            if anti_thr > one {
                return Err(violation("covering-blockade", why, &trace));
            }
            let (u, v) = first_non_edge(g).expect("non-complete");
            finish(
                CoveringOutcome::Anticomplete {
                    a: VertexSet::singleton(u),
                    b: VertexSet::singleton(v),
                },
                true,
                trace,
            )
        }
    }
}

fn covering_base(ctx: &Ctx, w: usize, trace: &mut Trace) -> Level {
    let g = ctx.g;
    let mut blocks = vec![g.vertices()];
    loop {
        let bl = *blocks.last().expect("nonempty");
        let lo = wpow(w, -4) * qu(ctx.chi(bl));
        let target = if lo < qu(1) { qu(1) } else { lo };
        let mut e = bl;
        for x in bl.iter() {
            if qu(ctx.chi(e.without(x))) >= target {
                e.remove(x);
            }
        }
        let d = bl - e;
        trace.note("base-split", format!("blocks={} chi(E)={} chi(D)={}", blocks.len(), ctx.chi(e), ctx.chi(d)));
        if d.is_empty() {
            return Level::Stuck("last vivid block too small to split".into());
        }
        match find_covering_violation(ctx, d, e, w) {
            None => return Level::Blockade { d: vec![d], e },
            Some((y, x)) => {
                if blocks.len() + 1 > w {
                    return Level::Stuck("vivid blockade longer than ω".into());
                }
                trace.note("base-extend", format!("Y={y:?} X={x:?}"));
                blocks.pop();
                blocks.push(y);
                blocks.push(x);
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn covering_extend(
    ctx: &Ctx,
    w: usize,
    d: Vec<VertexSet>,
    e: VertexSet,
    k: usize,
    policy: CoveringPolicy,
    queries: &mut Vec<(VertexSet, VertexSet)>,
    remembered: &mut Option<(VertexSet, VertexSet)>,
    trace: &mut Trace,
) -> Result<Level> {
    let g = ctx.g;
    let chi_g = qu(ctx.chi(g.vertices()));
    let dk = *d.last().expect("nonempty");
    let anti_thr = wpow(w, -8 * (k as i64 + 1)) * &chi_g;
    let mut blocks = vec![e];
    loop {
        let bl = *blocks.last().expect("nonempty");
        let chi_bl = ctx.chi(bl);
        queries.push((dk, bl));
        let mut a = VertexSet::EMPTY;
        let mut b = bl;
        for x in dk.iter() {
            let b2 = b - g.nbrs(x);
            if w * ctx.chi(b2) >= chi_bl {
                a.insert(x);
                b = b2;
            }
        }
        if a.is_empty() {
            return Ok(Level::Stuck(format!("no vertex of D_{k} misses a 1/w share of the last block")));
        }
        trace.note("grow-A", format!("level={} A={a:?} chi(B)={}", k + 1, ctx.chi(b)));
        if qu(ctx.chi(a)) >= anti_thr && qu(ctx.chi(b)) >= anti_thr {
            match policy {
                CoveringPolicy::FirstOutcome => return Ok(Level::Anti(a, b)),
                CoveringPolicy::PreferBlockade => {
                    remembered.get_or_insert((a, b));
                }
            }
        }
        queries.push((dk - a, b));
        let chi_b = ctx.chi(b);
        let Some(u) = (dk - a).iter().find(|&u| w * ctx.chi(b - g.nbrs(u)) >= chi_b) else {
            return Ok(Level::Stuck("no vertex u outside A".into()));
        };
        let dk_new = a.with(u);
        let d_next: VertexSet = bl.iter().filter(|&x| !(g.nbrs(x) & dk_new).is_empty()).collect();
        let e_new = bl - d_next;
        if d_next.is_empty() || e_new.is_empty() {
            return Ok(Level::Stuck("re-partition left an empty block".into()));
        }
        match find_covering_violation(ctx, d_next, e_new, w) {
            None => {
                let mut out = d;
                *out.last_mut().expect("nonempty") = dk_new;
                out.push(d_next);
                return Ok(Level::Blockade { d: out, e: e_new });
            }
            Some((y, x)) => {
                if blocks.len() + 1 > w {
                    return Ok(Level::Stuck("vivid blockade longer than ω".into()));
                }
                trace.note("extend", format!("Y={y:?} X={x:?}"));
                blocks.pop();
                blocks.push(y);
                blocks.push(x);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BroomOutcome {
    Anticomplete {
        a: VertexSet,
        b: VertexSet,
    },
    /// `spine` lists the path in order, its last vertex carrying `leaves`.
    Broom {
        p: VertexSet,
        q: VertexSet,
        spine: Vec<usize>,
        leaves: VertexSet,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BroomResult {
    pub outcome: BroomOutcome,
    /// 6k + t(t+2) + 9.
    pub exponent: usize,
    pub degenerate: bool,
    pub fallback: bool,
    pub covering: Option<CoveringBlockade>,
    pub trace: Trace,
}

/// The (k, t)-broom exponent d.
pub fn broom_exponent(k: usize, t: usize) -> usize {
    6 * k + t * (t + 2) + 9
}

/// An anticomplete pair with χ ≥ w^(-d)χ(G) on both sides, or an induced
/// (k, t)-broom P anticomplete to Q with χ(Q) ≥ w^(-d)χ(G).
pub fn broom_or_anticomplete(g: &Graph, k: usize, t: usize) -> Result<BroomResult> {
    broom_or_anticomplete_with(g, k, t, CoveringPolicy::default())
}

pub fn broom_or_anticomplete_with(g: &Graph, k: usize, t: usize, policy: CoveringPolicy) -> Result<BroomResult> {
    if k == 0 || t == 0 {
        return Err(precondition("k and t must be at least 1"));
    }
    if g.is_complete() {
        return Err(Error::CompleteInput);
    }
    let ctx = Ctx::new(g)?;
    let w = ctx.omega(g.vertices());
    if w < 2 {
        return Err(precondition("ω(G) must be at least 2"));
    }
    let d_exp = broom_exponent(k, t);
    let chi_g = qu(ctx.chi(g.vertices()));
    let thr = wpow(w, -(d_exp as i64)) * &chi_g;
    let degenerate = thr <= qu(1);
    if degenerate && policy == CoveringPolicy::FirstOutcome {
        let (u, v) = first_non_edge(g).expect("non-complete");
        let mut trace = Trace::new();
        trace.note("shortcut", "χ(G) ≤ w^d: any non-edge meets the anticomplete thresholds");
        return Ok(BroomResult {
            outcome: BroomOutcome::Anticomplete {
                a: VertexSet::singleton(u),
                b: VertexSet::singleton(v),
            },
            exponent: d_exp,
            degenerate,
            fallback: false,
            covering: None,
            trace,
        });
    }
    let cov = covering_blockade_in(&ctx, k, policy)?;
    let mut trace = cov.trace.clone();
    let blockade = match cov.outcome {
        CoveringOutcome::Anticomplete { a, b } => {
            return Ok(BroomResult {
                outcome: BroomOutcome::Anticomplete { a, b },
                exponent: d_exp,
                degenerate,
                fallback: cov.fallback,
                covering: None,
                trace,
            })
        }
        CoveringOutcome::Blockade(b) => b,
    };
    let run = broom_pipeline(&ctx, &blockade, k, t, w, &chi_g, &mut trace)?;
    let (outcome, fallback) = match run {
        Ok(o) => (o, false),
        Err(why) => {
            trace.note("stuck", why.clone());
            if !degenerate {
                return Err(violation("broom-pipeline", why, &trace));
            }
            let pair = if k >= 2 {
                let a = blockade.d[..k - 1].iter().fold(VertexSet::EMPTY, |acc, &x| acc | x);
                (a, blockade.e)
            } else {
                let (u, v) = first_non_edge(g).expect("non-complete");
                (VertexSet::singleton(u), VertexSet::singleton(v))
            };
            (BroomOutcome::Anticomplete { a: pair.0, b: pair.1 }, true)
        }
    };
    Ok(BroomResult {
        outcome,
        exponent: d_exp,
        degenerate,
        fallback,
        covering: Some(blockade),
        trace,
    })
}

/// Runs the block-splitting loop on E; the inner `Err` explains where the
/// construction stopped short.
fn broom_pipeline(
    ctx: &Ctx,
    cb: &CoveringBlockade,
    k: usize,
    t: usize,
    w: usize,
    chi_g: &Q,
    trace: &mut Trace,
) -> Result<std::result::Result<BroomOutcome, String>> {
    let g = ctx.g;
    let dk = *cb.d.last().expect("k ≥ 1");
    let p_deg: num_bigint::BigUint = upow(w, t as u32 + 2) * 2u32;
    let p_deg: usize = p_deg.try_into().unwrap_or(usize::MAX);
    let s = wpow(w, -(6 * k as i64 + 7)) * chi_g;
    let mut eblocks = vec![cb.e];
    loop {
        if eblocks.iter().map(|&x| ctx.omega(x)).sum::<usize>() > w {
            return Ok(Err("clique budget exceeded".into()));
        }
        let (idx, &e0) = eblocks
            .iter()
            .enumerate()
            .max_by(|a, b| ctx.chi(*a.1).cmp(&ctx.chi(*b.1)).then(b.0.cmp(&a.0)))
            .expect("nonempty");
        let j = controlled_subgraph_in(ctx, e0, w * w).j;
        if ctx.chi(j) <= p_deg {
            return Ok(Err(format!("χ(J) = {} is not above 2w^(t+2) = {p_deg}", ctx.chi(j))));
        }
        let f = min_degree_core_in(g, j, p_deg).f;
        let chi_f = ctx.chi(f);
        let z: VertexSet = dk.iter().filter(|&z| w * ctx.chi(f - g.nbrs(z)) < chi_f).collect();
        let cand = dk - z;
        let Some(v) = cand.iter().find(|&v| !(g.nbrs(v) & f).is_empty()) else {
            if cand.is_empty() {
                return Ok(Err("D_k \\ Z is empty".into()));
            }
            trace.note("anticomplete", "D_k \\ Z has no neighbour in F");
            return Ok(Ok(BroomOutcome::Anticomplete { a: cand, b: f }));
        };
        let u = (g.nbrs(v) & f).first().expect("checked");
        let nu = g.nbrs(u) & f;
        let (a1, a0) = (nu & g.nbrs(v), nu - g.nbrs(v));
        let complete = a1.len() >= a0.len();
        let (a, b) = if complete {
            (a1, f - g.nbrs(v))
        } else {
            (a0, f - g.closed_nbrs(u) - g.nbrs(v))
        };
        trace.note("star-input", format!("v={v} u={u} complete={complete}"));
        let star = star_step_in(ctx, f, a, b, t, &s, w)?;
        match star.outcome {
            StarOutcome::Anticomplete { p, q } => {
                let mut spine = vec![v];
                for i in (0..k - 1).rev() {
                    let prev = *spine.last().expect("nonempty");
                    let Some(x) = (g.nbrs(prev) & cb.d[i]).first() else {
                        return Err(violation("covering-chain", format!("no neighbour in D_{}", i + 1), trace));
                    };
                    spine.push(x);
                }
                spine.reverse();
                if !complete {
                    spine.remove(0);
                    spine.push(u);
                }
                let body = VertexSet::from_slice(&spine) | p;
                return Ok(Ok(BroomOutcome::Broom {
                    p: body,
                    q,
                    spine,
                    leaves: p,
                }));
            }
            StarOutcome::PairXY { x, y } => {
                if x.is_empty() || y.is_empty() {
                    return Ok(Err("star step returned an empty side".into()));
                }
                trace.note("split", format!("E_{idx} -> X={x:?} Y={y:?}"));
                eblocks.remove(idx);
                eblocks.insert(idx, y);
                eblocks.insert(idx, x);
            }
        }
    }
}

/// Whether `spine` ∪ `leaves` induces the (k, t)-broom in the given order.
pub fn is_broom_witness(g: &Graph, spine: &[usize], leaves: VertexSet, k: usize, t: usize) -> bool {
    let Ok(h) = broom(k, t) else { return false };
    if spine.len() != k || leaves.len() != t {
        return false;
    }
    let mut phi = spine.to_vec();
    phi.extend(leaves.iter());
    crate::oracles::copy::is_induced_copy(&h, g, &phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{c5_join_power, complete, cycle, edgeless, join};
    use crate::rational::q;

    fn check_decomposition(g: &Graph, t: usize) {
        let d = tbroom_decompose(g, t).unwrap();
        let ctx = Ctx::new(g).unwrap();
        let chi = ctx.chi(g.vertices());
        assert!(!d.s.is_empty() && !d.p.is_empty() && d.s.is_disjoint(d.p));
        assert!(chi <= ctx.chi(d.s) + ctx.chi(d.p));
        assert!(d.w * ctx.chi(d.p) >= chi);
        for u in d.s.iter() {
            assert!(ctx.chi(d.p - g.nbrs(u)) as u64 <= 2 * d.ramsey - 1);
        }
    }

    #[test]
    fn decomposition_examples() {
        let d = tbroom_decompose(&complete(4), 1).unwrap();
        assert!(d.complete_case && d.p.len() == 1);
        check_decomposition(&complete(4), 2);
        check_decomposition(&cycle(5), 2);
        check_decomposition(&c5_join_power(2).unwrap(), 3);
    }

    #[test]
    fn colouring_examples() {
        assert_eq!(tbroom_colour(&edgeless(5), 1).unwrap().colouring.count(), 1);
        let r = tbroom_colour(&cycle(5), 2).unwrap();
        assert!(r.colouring.is_proper(&cycle(5)));
        assert!(r.raw_count <= 16);
        assert_eq!(r.colouring.count(), 3);
        let r = tbroom_colour(&complete(4), 1).unwrap();
        assert_eq!(r.colouring.count(), 4);
        assert_eq!(r.bound, "32");
        let g = c5_join_power(2).unwrap();
        let r = tbroom_colour(&g, 3).unwrap();
        assert!(r.colouring.is_proper(&g) && r.colouring.domain() == g.vertices());
    }

    #[test]
    fn star_examples() {
        // A independent of size 8, B anticomplete to A.
        let g = Graph::build(10, &[(8, 9)]).unwrap();
        let a = VertexSet::full(8);
        let r = star_step(&g, a, VertexSet::EMPTY, 1, &q(1, 1), 2).unwrap();
        assert!(matches!(r.outcome, StarOutcome::PairXY { y, .. } if y.is_empty()));
        let r = star_step(&g, a, VertexSet::from_slice(&[8, 9]), 1, &q(1, 1), 2).unwrap();
        match r.outcome {
            StarOutcome::Anticomplete { p, q } => {
                assert_eq!(p.len(), 1);
                assert!(!q.is_empty() && g.is_anticomplete_to(p, q));
            }
            other => panic!("{other:?}"),
        }
        assert!(star_step(&g, VertexSet::full(7), VertexSet::EMPTY, 1, &q(1, 1), 2).is_err());
    }

    #[test]
    fn covering_examples() {
        let r = covering_blockade(&cycle(5), 1).unwrap();
        match &r.outcome {
            CoveringOutcome::Anticomplete { a, b } => assert!(cycle(5).is_anticomplete_to(*a, *b)),
            CoveringOutcome::Blockade(cb) => assert!(!cb.d[0].is_empty() && !cb.e.is_empty()),
        }
        let k4e = Graph::build(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let r = covering_blockade(&k4e, 1).unwrap();
        match r.outcome {
            CoveringOutcome::Anticomplete { a, b } => assert_eq!(a | b, VertexSet::from_slice(&[2, 3])),
            CoveringOutcome::Blockade(cb) => panic!("{cb:?}"),
        }
        assert_eq!(covering_blockade(&complete(5), 1).unwrap_err(), Error::CompleteInput);
        let r = covering_blockade_with(&k4e, 1, CoveringPolicy::PreferBlockade).unwrap();
        match r.outcome {
            CoveringOutcome::Blockade(cb) => {
                assert_eq!(cb.e, VertexSet::singleton(3));
                assert_eq!(cb.d, vec![VertexSet::from_slice(&[0, 1, 2])]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn prefer_blockade_runs_the_pipeline() {
        for g in [cycle(5), c5_join_power(2).unwrap(), join(&cycle(5), &edgeless(2)).unwrap()] {
            for k in 1..=3 {
                let r = covering_blockade_with(&g, k, CoveringPolicy::PreferBlockade).unwrap();
                if let CoveringOutcome::Blockade(cb) = &r.outcome {
                    assert_eq!(cb.d.len(), k);
                    for i in 1..k {
                        for v in cb.d[i].iter() {
                            assert!(!(g.nbrs(v) & cb.d[i - 1]).is_empty());
                        }
                    }
                }
                let r = broom_or_anticomplete_with(&g, k, 1, CoveringPolicy::PreferBlockade).unwrap();
                match r.outcome {
                    BroomOutcome::Anticomplete { a, b } => assert!(g.is_anticomplete_to(a, b)),
                    BroomOutcome::Broom { p, q, spine, leaves } => {
                        assert!(is_broom_witness(&g, &spine, leaves, k, 1));
                        assert!(g.is_anticomplete_to(p, q));
                    }
                }
            }
        }
    }

    #[test]
    fn broom_witness_checker() {
        let g = broom(3, 2).unwrap();
        assert!(is_broom_witness(&g, &[0, 1, 2], VertexSet::from_slice(&[3, 4]), 3, 2));
        assert!(!is_broom_witness(&g, &[2, 1, 0], VertexSet::from_slice(&[3, 4]), 3, 2));
        assert!(!is_broom_witness(&g, &[0, 1, 2], VertexSet::singleton(3), 3, 2));
        let mut h = g.clone();
        h.add_edge(3, 4);
        assert!(!is_broom_witness(&h, &[0, 1, 2], VertexSet::from_slice(&[3, 4]), 3, 2));
    }

    #[test]
    fn broom_examples() {
        let r = broom_or_anticomplete(&cycle(5), 3, 2).unwrap();
        match r.outcome {
            BroomOutcome::Anticomplete { a, b } => assert!(cycle(5).is_anticomplete_to(a, b)),
            BroomOutcome::Broom { .. } => panic!("C5 has no (3,2)-broom"),
        }
        let g = c5_join_power(2).unwrap();
        let r = broom_or_anticomplete(&g, 3, 1).unwrap();
        match r.outcome {
            BroomOutcome::Anticomplete { a, b } => assert!(g.is_anticomplete_to(a, b) && !a.is_empty() && !b.is_empty()),
            BroomOutcome::Broom { p, q, spine, leaves } => {
                assert!(is_broom_witness(&g, &spine, leaves, 3, 1));
                assert!(g.is_anticomplete_to(p, q));
            }
        }
        assert_eq!(broom_or_anticomplete(&complete(6), 3, 2).unwrap_err(), Error::CompleteInput);
    }
}
