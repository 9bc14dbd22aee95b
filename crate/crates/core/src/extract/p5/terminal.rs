//! Terminal partitions of controlled P5-free graphs and the complete pairs
//! they yield.

use serde::{Deserialize, Serialize};

use super::{complete_part, ensure, ensure_p5, require_controlled, require_p5_free, touching, violation, w_of};
use crate::ctx::Ctx;
use crate::error::{Error, Result};
use crate::extract::outcome::TerminalPartition;
use crate::extract::pairs::maximize_anticomplete_pair;
use crate::graph::{Graph, VertexSet};
use crate::rational::{fmt_q, qu, wpow, Q};
use crate::trace::Trace;

/// The partition with k = 0: B empty and D everything.
pub fn base_partition(dom: VertexSet, p: &Q) -> TerminalPartition {
    TerminalPartition {
        a: Vec::new(),
        b: VertexSet::EMPTY,
        d: dom,
        p: p.clone(),
        b_i: Vec::new(),
    }
}

/// Adds `new_a` as the next block and moves `extra_b` into B.
pub(crate) fn extend(g: &Graph, tp: &TerminalPartition, new_a: VertexSet, extra_b: VertexSet) -> TerminalPartition {
    let mut a = tp.a.clone();
    a.push(new_a);
    let b = tp.b | extra_b;
    TerminalPartition {
        b_i: a.iter().map(|&ai| touching(g, b, ai)).collect(),
        a,
        b,
        d: tp.d - new_a - extra_b,
        p: tp.p.clone(),
    }
}

fn union(sets: &[VertexSet]) -> VertexSet {
    sets.iter().fold(VertexSet::EMPTY, |acc, &s| acc | s)
}

/// The components C of G[D] with χ(C)·w² ≥ (w² - 1)·χ(dom).
pub(crate) fn high_components(ctx: &Ctx, dom: VertexSet, d: VertexSet, w: usize) -> Vec<VertexSet> {
    let w2 = w * w;
    let chi = ctx.chi(dom);
    ctx.g
        .components(d)
        .into_iter()
        .filter(|&c| w2 * ctx.chi(c) >= (w2 - 1) * chi)
        .collect()
}

/// Checks the five defining conditions of a p-terminal partition of G[dom].
pub fn check_partition(ctx: &Ctx, dom: VertexSet, tp: &TerminalPartition, w: usize) -> std::result::Result<(), String> {
    let g = ctx.g;
    let chi = ctx.chi(dom);
    let all_a = union(&tp.a);
    let mut seen = VertexSet::EMPTY;
    for &part in tp.a.iter().chain([&tp.b, &tp.d]) {
        if !part.is_disjoint(seen) {
            return Err("parts overlap".into());
        }
        seen = seen | part;
    }
    if seen != dom {
        return Err("parts do not cover the vertex set".into());
    }
    if !g.is_anticomplete_to(tp.d, all_a) {
        return Err("D is not anticomplete to the A blocks".into());
    }
    if let Some(v) = tp.b.iter().find(|&v| (g.nbrs(v) & all_a).is_empty()) {
        return Err(format!("B-vertex {v} has no neighbour in the A blocks"));
    }
    if tp.b_i.len() != tp.a.len() {
        return Err("one attachment set per block is required".into());
    }
    let w4 = w.pow(4);
    for (i, (&ai, &bi)) in tp.a.iter().zip(&tp.b_i).enumerate() {
        if bi != touching(g, tp.b, ai) {
            return Err(format!("B_{i} is not the set of B-vertices touching A_{i}"));
        }
        let c = ctx.chi(bi);
        if c == 0 || w4 * c > chi {
            return Err(format!("χ(B_{i}) = {c} outside [1, χ(G)/w⁴] with χ(G) = {chi}, w = {w}"));
        }
    }
    let mut comps = g.components(dom - tp.b - tp.d);
    let mut blocks = tp.a.clone();
    comps.sort_by_key(|s| s.0);
    blocks.sort_by_key(|s| s.0);
    if comps != blocks {
        return Err("the A blocks are not the components of G \\ (B ∪ D)".into());
    }
    if let Some((i, ai)) = tp.a.iter().enumerate().find(|(_, &ai)| qu(ctx.chi(ai)) < tp.p) {
        return Err(format!("χ(A_{i}) = {} < p = {}", ctx.chi(*ai), fmt_q(&tp.p)));
    }
    let w2 = w * w;
    if w2 * ctx.chi(tp.d) < (w2 - 1) * chi {
        return Err(format!("χ(D) = {} below (1 - w⁻²)·{chi}", ctx.chi(tp.d)));
    }
    for c in high_components(ctx, dom, tp.d, w) {
        if let Some(v) = tp.b.iter().find(|&v| (g.nbrs(v) & c).is_empty()) {
            return Err(format!("B-vertex {v} misses a high-χ component of D"));
        }
    }
    Ok(())
}

/// The consequences for controlled P5-free graphs: G[D] has exactly one
/// high-χ component, returned, and χ(D)·w³ ≥ (w³ - 1)·χ(dom).
pub fn check_unique_component(
    ctx: &Ctx,
    dom: VertexSet,
    tp: &TerminalPartition,
    w: usize,
) -> std::result::Result<VertexSet, String> {
    let high = high_components(ctx, dom, tp.d, w);
    if high.len() != 1 {
        return Err(format!("G[D] has {} high-χ components", high.len()));
    }
    let w3 = w.pow(3);
    let chi = ctx.chi(dom);
    if w3 * ctx.chi(tp.d) < (w3 - 1) * chi {
        return Err(format!("χ(D) = {} below (1 - w⁻³)·{chi}", ctx.chi(tp.d)));
    }
    Ok(high[0])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalRun {
    pub partition: TerminalPartition,
    /// The unique high-χ component of G[D].
    pub component: VertexSet,
    pub w: usize,
    pub trace: Trace,
}

/// A p-terminal partition of a connected, controlled P5-free graph, grown
/// from the base partition until no extension applies.
pub fn terminal_partition(g: &Graph, p: &Q) -> Result<TerminalRun> {
    let ctx = Ctx::new(g)?;
    let dom = g.vertices();
    let w = w_of(&ctx, dom);
    require_controlled(&ctx, dom, w)?;
    require_p5_free(&ctx, dom)?;
    let mut trace = Trace::new();
    let partition = terminal_partition_in(&ctx, dom, p, w, &mut trace)?;
    let component = check_unique_component(&ctx, dom, &partition, w)
        .map_err(|e| violation("terminal.unique_component", e, &trace))?;
    Ok(TerminalRun {
        partition,
        component,
        w,
        trace,
    })
}

/// Extension loop. A candidate extension cuts the high-χ component C of
/// G[D] between two non-adjacent vertices, makes one side the next block and
/// moves the cutset into B; it is kept only if every condition still holds.
pub(crate) fn terminal_partition_in(
    ctx: &Ctx,
    dom: VertexSet,
    p: &Q,
    w: usize,
    trace: &mut Trace,
) -> Result<TerminalPartition> {
    let g = ctx.g;
    let mut tp = base_partition(dom, p);
    if w.pow(4) > ctx.chi(dom) {
        trace.note("terminal.extend", "χ(G) < w⁴: no B_i can have 1 ≤ χ(B_i) ≤ χ(G)/w⁴, k stays 0");
        return Ok(tp);
    }
    'grow: loop {
        check_partition(ctx, dom, &tp, w).map_err(|e| violation("terminal.bullets", e, trace))?;
        let c = check_unique_component(ctx, dom, &tp, w).map_err(|e| violation("terminal.unique_component", e, trace))?;
        for x in c.iter() {
            for y in (c - g.closed_nbrs(x) - VertexSet::full(x + 1)).iter() {
                let cut = maximize_anticomplete_pair(ctx, c, VertexSet::singleton(x), VertexSet::singleton(y));
                for side in [cut.q, cut.p] {
                    let next = extend(g, &tp, side, cut.s);
                    if check_partition(ctx, dom, &next, w).is_ok() {
                        trace.note("terminal.extend", format!("A_{} = {:?}", next.a.len(), side.to_vec()));
                        tp = next;
                        continue 'grow;
                    }
                }
            }
        }
        trace.note("terminal.extend", format!("no extension applies at k = {}", tp.a.len()));
        return Ok(tp);
    }
}

/// What an anticomplete-pair supplier hands back.
pub enum Supply<T> {
    Pair(VertexSet, VertexSet),
    /// Stop the search with a result of the caller's own.
    Stop(T),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TerminalPairOutcome<T> {
    /// `a` is complete to `b`, χ(a)·w⁴ ≥ χ(G) and χ(b) ≥ p.
    Complete { a: VertexSet, b: VertexSet },
    Stopped(T),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalPairResult {
    pub a: VertexSet,
    pub b: VertexSet,
    pub extensions: usize,
    pub w: usize,
    pub trace: Trace,
}

/// A complete pair (A, B) with χ(A)·w⁴ ≥ χ(G) and χ(B) ≥ p, given a supplier
/// of anticomplete pairs with both sides of χ ≥ p inside any induced
/// subgraph F with χ(F)·w³ ≥ (w³ - 1)·χ(G).
pub fn terminal_complete_pair<F>(g: &Graph, p: &Q, mut supplier: F) -> Result<TerminalPairResult>
where
    F: FnMut(&Ctx, VertexSet) -> Result<(VertexSet, VertexSet)>,
{
    let ctx = Ctx::new(g)?;
    let dom = g.vertices();
    let w = w_of(&ctx, dom);
    require_controlled(&ctx, dom, w)?;
    require_p5_free(&ctx, dom)?;
    let mut trace = Trace::new();
    let mut call = |f: VertexSet, _: &mut Trace| supplier(&ctx, f).map(|(x, y)| Supply::<()>::Pair(x, y));
    let (outcome, extensions) = terminal_pair_in(&ctx, dom, p, w, &mut call, &mut trace)?;
    match outcome {
        TerminalPairOutcome::Complete { a, b } => Ok(TerminalPairResult {
            a,
            b,
            extensions,
            w,
            trace,
        }),
        TerminalPairOutcome::Stopped(()) => unreachable!("the public supplier never stops"),
    }
}

pub(crate) type Supplier<'a, T> = dyn FnMut(VertexSet, &mut Trace) -> Result<Supply<T>> + 'a;

/// The construction behind [`terminal_complete_pair`] on G[dom], which must
/// be controlled and P5-free. Returns the outcome and the number of
/// extensions performed.
pub(crate) fn terminal_pair_in<T>(
    ctx: &Ctx,
    dom: VertexSet,
    p: &Q,
    w: usize,
    supplier: &mut Supplier<'_, T>,
    trace: &mut Trace,
) -> Result<(TerminalPairOutcome<T>, usize)> {
    let g = ctx.g;
    let chi_g = ctx.chi(dom);
    let thr4 = wpow(w, -4) * qu(chi_g);
    let w2 = w * w;
    let big = |s: VertexSet| !s.is_empty() && qu(ctx.chi(s)) >= thr4;
    let mut tp = base_partition(dom, p);
    let mut extensions = 0;
    loop {
        check_partition(ctx, dom, &tp, w).map_err(|e| violation("terminal.bullets", e, trace))?;
        let c = check_unique_component(ctx, dom, &tp, w).map_err(|e| violation("terminal.unique_component", e, trace))?;
        trace.note("term.partition", format!("k = {}, C = {:?}", tp.a.len(), c.to_vec()));
        let (p0, q0) = match supplier(c, trace)? {
            Supply::Stop(t) => return Ok((TerminalPairOutcome::Stopped(t), extensions)),
            Supply::Pair(x, y) => (x, y),
        };
        let ok = !p0.is_empty()
            && !q0.is_empty()
            && (p0 | q0).is_subset(c)
            && g.is_anticomplete_to(p0, q0)
            && qu(ctx.chi(p0)) >= *p
            && qu(ctx.chi(q0)) >= *p;
        if !ok {
            return Err(Error::SupplierFailed(format!(
                "supplied ({:?}, {:?}) is not an anticomplete pair in C with both sides of χ ≥ {}",
                p0.to_vec(),
                q0.to_vec(),
                fmt_q(p)
            )));
        }
        let cut = maximize_anticomplete_pair(ctx, c, ctx.max_chi_component(p0), ctx.max_chi_component(q0));
        let (pp, qq, s) = (cut.p, cut.q, cut.s);
        trace.note("term.cut", format!("P = {:?}, Q = {:?}, S = {:?}", pp.to_vec(), qq.to_vec(), s.to_vec()));
        let s_p = complete_part(g, s, pp);
        let s_q = s - s_p;
        ensure_p5(ctx, dom, trace, "term.s_pure", g.is_complete_to(s_q, qq), "S \\ S_P is complete to Q")?;
        if big(s_p) {
            trace.note("term.outcome", "S_P is complete to P");
            return Ok((TerminalPairOutcome::Complete { a: s_p, b: pp }, extensions));
        }
        if big(s_q) {
            trace.note("term.outcome", "S_Q is complete to Q");
            return Ok((TerminalPairOutcome::Complete { a: s_q, b: qq }, extensions));
        }
        let chi_p = ctx.chi(pp);
        ensure(
            trace,
            "term.claim1.chi",
            w2 * chi_p >= (w2 - 1) * chi_g,
            format!("χ(P) = {chi_p} ≥ (1 - w⁻²)·{chi_g}"),
        )?;
        ensure(
            trace,
            "term.claim1.mixed",
            s.iter().all(|x| g.mixed(x, pp)) && g.is_complete_to(s, qq),
            "S is mixed on P and complete to Q",
        )?;
        let rest_high = high_components(ctx, dom, c - s, w);
        ensure(trace, "term.claim1.unique", rest_high == vec![pp], "P is the unique high-χ component of C \\ S")?;
        ensure_p5(
            ctx,
            dom,
            trace,
            "term.claim2",
            tp.b.iter().all(|x| !(g.nbrs(x) & pp).is_empty()),
            "every B-vertex has a neighbour in P",
        )?;
        let z = touching(g, tp.b, qq);
        ensure_p5(ctx, dom, trace, "term.z_complete", g.is_complete_to(z, qq), "Z is complete to Q")?;
        if big(s | z) {
            trace.note("term.outcome", "S ∪ Z is complete to Q");
            return Ok((TerminalPairOutcome::Complete { a: s | z, b: qq }, extensions));
        }
        tp = extend(g, &tp, qq, s);
        extensions += 1;
        trace.note("term.extend", format!("A_{} = {:?}", tp.a.len(), qq.to_vec()));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::broom::{covering_blockade_in, CoveringOutcome, CoveringPolicy};
    use crate::generators::{c5_join_power, complete, cycle, disjoint_union, join};
    use crate::rational::q;

    #[test]
    fn c5_base_partition() {
        let g = cycle(5);
        let run = terminal_partition(&g, &q(0, 1)).unwrap();
        assert!(run.partition.a.is_empty());
        assert_eq!(run.partition.d, g.vertices());
        assert_eq!(run.component, g.vertices());
        let ctx = Ctx::new(&g).unwrap();
        assert_eq!(check_partition(&ctx, g.vertices(), &run.partition, 2), Ok(()));
    }

    #[test]
    fn join_power_partition_is_valid() {
        let g = c5_join_power(2).unwrap();
        let ctx = Ctx::new(&g).unwrap();
        let core = crate::extract::basic::controlled_subgraph_in(&ctx, g.vertices(), 4).j;
        let (h, _) = g.induced(core).unwrap();
        let run = terminal_partition(&h, &q(1, 1)).unwrap();
        let hctx = Ctx::new(&h).unwrap();
        assert_eq!(check_partition(&hctx, h.vertices(), &run.partition, run.w), Ok(()));
        assert!(check_unique_component(&hctx, h.vertices(), &run.partition, run.w).is_ok());
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = disjoint_union(&cycle(5), &cycle(5)).unwrap();
        assert!(matches!(terminal_partition(&g, &q(0, 1)), Err(Error::Precondition(_))));
        assert!(matches!(terminal_partition(&crate::generators::path(5), &q(0, 1)), Err(Error::ForbiddenCopy { .. })));
    }

    #[test]
    fn bullet_checker_catches_breakage() {
        let g = cycle(6);
        let ctx = Ctx::new(&g).unwrap();
        let mut tp = base_partition(g.vertices(), &q(0, 1));
        tp.d = tp.d.without(0);
        assert!(check_partition(&ctx, g.vertices(), &tp, 2).is_err());
        let tp = extend(&g, &base_partition(g.vertices(), &q(0, 1)), VertexSet::singleton(0), VertexSet::from_slice(&[1, 5]));
        // χ(B_1) = 1 > χ(G)/w⁴
        assert!(check_partition(&ctx, g.vertices(), &tp, 2).unwrap_err().contains("B_0"));
    }

    #[test]
    fn complete_pair_from_c5_supplier() {
        let g = cycle(5);
        let r = terminal_complete_pair(&g, &q(1, 1), |_, _| Ok((VertexSet::singleton(0), VertexSet::singleton(2)))).unwrap();
        assert!(g.is_complete_to(r.a, r.b));
        assert!(!r.a.is_empty() && !r.b.is_empty());
        assert_eq!(r.extensions, 0);
    }

    #[test]
    fn complete_pair_on_join_with_covering_supplier() {
        let g = join(&cycle(5), &cycle(5)).unwrap();
        let r = terminal_complete_pair(&g, &q(1, 1), |ctx, f| {
            let (h, map) = ctx.g.induced(f)?;
            let hctx = Ctx::new(&h)?;
            match covering_blockade_in(&hctx, 1, CoveringPolicy::FirstOutcome)?.outcome {
                CoveringOutcome::Anticomplete { a, b } => {
                    let lift = |s: VertexSet| VertexSet::from_slice(&s.iter().map(|i| map[i]).collect::<Vec<_>>());
                    Ok((lift(a), lift(b)))
                }
                CoveringOutcome::Blockade(_) => Err(Error::SupplierFailed("blockade".into())),
            }
        })
        .unwrap();
        let ctx = Ctx::new(&g).unwrap();
        assert!(g.is_complete_to(r.a, r.b));
        assert!(r.w.pow(4) * ctx.chi(r.a) >= 6 && ctx.chi(r.b) >= 1);
    }

    #[test]
    fn complete_graph_supplier_fails() {
        let g = complete(4);
        let r = terminal_complete_pair(&g, &q(1, 1), |_, _| Err(Error::SupplierFailed("no anticomplete pair".into())));
        assert!(matches!(r, Err(Error::SupplierFailed(_))));
    }
}
