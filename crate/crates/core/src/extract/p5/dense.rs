//! Colourful subgraphs versus complete pairs in P5-free graphs, and the
//! chromatic bound obtained from repeated complete pairs.

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use super::terminal::{base_partition, check_partition, check_unique_component, extend, high_components};
use super::terminal::{terminal_pair_in, Supply, TerminalPairOutcome};
use super::{
    complete_part, cover_in, ensure, ensure_p5, non_colourful_vertex, require_p5_free, scaled_ge, touching, violation,
    w_of, P5Params,
};
use crate::ctx::Ctx;
use crate::error::{precondition, Error, Result};
use crate::extract::basic::{controlled_subgraph_in, gyarfas_colour_bound};
use crate::extract::broom::{covering_blockade_in, CoveringOutcome, CoveringPolicy};
use crate::extract::pairs::maximize_anticomplete_pair;
use crate::graph::{Graph, VertexSet};
use crate::oracles::chromatic::{exact_colouring, Colouring};
use crate::rational::{floor_log2, fmt_q, is_in_open_unit, q, qu, upow, wpow, Q};
use crate::trace::Trace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairRoute {
    /// G was complete: one vertex against the rest.
    CompleteGraph,
    /// Cutset between a maximal anticomplete pair, split by attachment.
    Cutset,
    /// χ(G) < w^b: any edge meets both thresholds.
    SmallChi,
    /// A colourful subgraph, then the cutset construction inside it.
    Colourful,
    /// The complete pair came straight out of the two-outcome lemma.
    Locdense,
    /// The colourful subgraph had χ < 2; an edge meets the thresholds.
    EdgeFallback,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairResult {
    pub a: VertexSet,
    pub b: VertexSet,
    pub w: usize,
    pub route: PairRoute,
    /// Some threshold was at most 1, so any nonempty side met it.
    pub degenerate: bool,
    pub trace: Trace,
}

fn lift(map: &[usize], s: VertexSet) -> VertexSet {
    s.iter().fold(VertexSet::EMPTY, |acc, i| acc.with(map[i]))
}

fn first_edge(g: &Graph, dom: VertexSet) -> Option<(usize, usize)> {
    dom.iter()
        .find_map(|u| (g.nbrs(u) & dom - VertexSet::full(u + 1)).first().map(|v| (u, v)))
}

/// A complete pair (A, B) in an ε-colourful P5-free graph with
/// χ(A)·w³² ≥ χ(G) and 2·χ(B) ≥ (1 - ε)·χ(G).
pub fn colourful_complete_pair(g: &Graph, eps: &Q) -> Result<PairResult> {
    if !is_in_open_unit(eps) {
        return Err(precondition("ε must lie in (0, 1)"));
    }
    let ctx = Ctx::new(g)?;
    let dom = g.vertices();
    require_p5_free(&ctx, dom)?;
    let mut trace = Trace::new();
    let (a, b, route) = colourful_pair_in(&ctx, dom, eps, &mut trace)?;
    let w = w_of(&ctx, dom);
    Ok(PairResult {
        a,
        b,
        w,
        route,
        degenerate: scaled_ge(1, w, 32, ctx.chi(dom)),
        trace,
    })
}

pub(crate) fn colourful_pair_in(
    ctx: &Ctx,
    dom: VertexSet,
    eps: &Q,
    trace: &mut Trace,
) -> Result<(VertexSet, VertexSet, PairRoute)> {
    let g = ctx.g;
    let chi = ctx.chi(dom);
    if chi < 2 {
        return Err(precondition("χ(G) must be at least 2"));
    }
    if let Some(v) = non_colourful_vertex(ctx, dom, eps) {
        return Err(precondition(format!(
            "not {}-colourful: χ(G \\ N[{v}]) = {} against χ(G) = {chi}",
            fmt_q(eps),
            ctx.chi(dom - g.closed_nbrs(v))
        )));
    }
    let w = w_of(ctx, dom);
    if g.is_clique(dom) {
        let v = dom.first().expect("χ ≥ 2");
        trace.note("dense.complete", format!("G is complete: ({v}, G \\ {v})"));
        return Ok((VertexSet::singleton(v), dom.without(v), PairRoute::CompleteGraph));
    }
    ensure(trace, "dense.connected", g.is_connected(dom), "an ε-colourful graph with ε < 1 is connected")?;
    let (h, map) = g.induced(dom)?;
    let hctx = Ctx::new(&h)?;
    let (a0, b0) = match covering_blockade_in(&hctx, 4, CoveringPolicy::FirstOutcome)?.outcome {
        CoveringOutcome::Anticomplete { a, b } => (lift(&map, a), lift(&map, b)),
        CoveringOutcome::Blockade(_) => {
            return Err(violation("dense.covering", "the covering step with k = 4 returned a blockade", trace))
        }
    };
    let big = |s: VertexSet| scaled_ge(ctx.chi(s), w, 32, chi);
    ensure(
        trace,
        "dense.covering",
        g.is_anticomplete_to(a0, b0) && big(a0) && big(b0),
        format!("anticomplete ({:?}, {:?}) with χ·w³² ≥ {chi}", a0.to_vec(), b0.to_vec()),
    )?;
    let cut = maximize_anticomplete_pair(ctx, dom, ctx.max_chi_component(a0), ctx.max_chi_component(b0));
    let (p, qq, s) = (cut.p, cut.q, cut.s);
    let eps_chi = eps * qu(chi);
    ensure(
        trace,
        "dense.sides",
        qu(ctx.chi(p)) < eps_chi && qu(ctx.chi(qq)) < eps_chi,
        format!("χ(A) = {}, χ(B) = {} below ε·χ(G)", ctx.chi(p), ctx.chi(qq)),
    )?;
    let one_minus = Q::one() - eps;
    ensure(
        trace,
        "dense.cutset",
        qu(ctx.chi(s)) >= &one_minus * qu(chi),
        format!("χ(S) = {} ≥ (1 - ε)·{chi}", ctx.chi(s)),
    )?;
    let s_p = complete_part(g, s, p);
    let s_q = s - s_p;
    ensure_p5(ctx, dom, trace, "dense.split", g.is_complete_to(s_q, qq), "S \\ S_A is complete to B")?;
    let (a, b) = if ctx.chi(s_p) >= ctx.chi(s_q) { (p, s_p) } else { (qq, s_q) };
    ensure(
        trace,
        "dense.outcome",
        g.is_complete_to(a, b) && big(a) && qu(2 * ctx.chi(b)) >= one_minus * qu(chi),
        format!("χ(A) = {}, χ(B) = {}", ctx.chi(a), ctx.chi(b)),
    )?;
    Ok((a, b, PairRoute::Cutset))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DenseOutcome {
    Colourful { j: VertexSet },
    Anticomplete { p: VertexSet, q: VertexSet },
    Complete { a: VertexSet, b: VertexSet },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseResult {
    pub outcome: DenseOutcome,
    pub w: usize,
    /// Terminal-partition extensions performed before an outcome appeared.
    pub extensions: usize,
    /// Some minimal cover exceeded w^a vertices.
    pub eh_violation: bool,
    pub degenerate: bool,
    pub trace: Trace,
}

#[derive(Debug, Default)]
pub(crate) struct Flags {
    pub extensions: usize,
    pub eh_violation: bool,
}

fn check_eps(eps: &Q) -> Result<()> {
    if *eps <= qu(0) || *eps > q(1, 2) {
        return Err(precondition("ε must lie in (0, 1/2]"));
    }
    Ok(())
}

fn dense_entry<'g>(g: &'g Graph, eps: &Q, params: &P5Params) -> Result<Ctx<'g>> {
    params.validate()?;
    check_eps(eps)?;
    if g.n() == 0 {
        return Err(Error::EmptySet);
    }
    let ctx = Ctx::new(g)?;
    require_p5_free(&ctx, g.vertices())?;
    Ok(ctx)
}

/// One of: an ε-colourful J with 16·χ(J) ≥ χ(G); an anticomplete (P, Q) with
/// 16·χ(P) ≥ χ(G) and 16·χ(Q) ≥ ε·χ(G); a complete (A, B) with
/// χ(A)·w^b ≥ χ(G) and 256·χ(B) ≥ ε·χ(G), where b = d + 6.
pub fn linanti(g: &Graph, eps: &Q, params: &P5Params) -> Result<DenseResult> {
    let ctx = dense_entry(g, eps, params)?;
    let dom = g.vertices();
    let w = w_of(&ctx, dom);
    let mut trace = Trace::new();
    let mut flags = Flags::default();
    let outcome = linanti_in(&ctx, dom, eps, params, w, &mut trace, &mut flags)?;
    let chi = ctx.chi(dom);
    Ok(DenseResult {
        outcome,
        w,
        extensions: flags.extensions,
        eh_violation: flags.eh_violation,
        degenerate: scaled_ge(1, w, params.linanti_exponent(), chi) || eps * qu(chi) <= qu(256),
        trace,
    })
}

pub(crate) fn linanti_in(
    ctx: &Ctx,
    dom: VertexSet,
    eps: &Q,
    params: &P5Params,
    w: usize,
    trace: &mut Trace,
    flags: &mut Flags,
) -> Result<DenseOutcome> {
    let g = ctx.g;
    let chi_g = ctx.chi(dom);
    let bx = params.linanti_exponent();
    let d_exp = params.d;
    let eps_chi = eps * qu(chi_g);
    let chi = |s: VertexSet| ctx.chi(s);
    let out1 = |j: VertexSet| !j.is_empty() && 16 * chi(j) >= chi_g && non_colourful_vertex(ctx, j, eps).is_none();
    let out2 = |x: VertexSet, y: VertexSet| {
        !x.is_empty()
            && !y.is_empty()
            && g.is_anticomplete_to(x, y)
            && 16 * chi(x) >= chi_g
            && qu(16 * chi(y)) >= eps_chi
    };
    let out3 = |a: VertexSet, b: VertexSet| {
        !a.is_empty()
            && !b.is_empty()
            && g.is_complete_to(a, b)
            && scaled_ge(chi(a), w, bx, chi_g)
            && qu(256 * chi(b)) >= eps_chi
    };
    let w2 = w * w;

    if out1(dom) {
        trace.note("linanti.outcome", "G itself is ε-colourful");
        return Ok(DenseOutcome::Colourful { j: dom });
    }
    if chi_g == 1 {
        // Edgeless with at least two vertices: any two of them.
        let v = dom.to_vec();
        trace.note("linanti.outcome", "edgeless: two non-adjacent vertices");
        return Ok(DenseOutcome::Anticomplete {
            p: VertexSet::singleton(v[0]),
            q: VertexSet::singleton(v[1]),
        });
    }
    let z = VertexSet(dom.iter().filter(|&x| 6 * chi(g.nbrs(x) & dom) < chi_g).fold(0, |m, x| m | 1 << x));
    ensure_p5(
        ctx,
        dom,
        trace,
        "linanti.z",
        // A stable Z has no vertex for the Gyárfás step; χ(Z) = 1 then.
        2 * chi(z) < chi_g || chi(z) <= 1,
        format!("Z = {:?}: 2·χ(Z) = {} < {chi_g}", z.to_vec(), 2 * chi(z)),
    )?;
    let f = controlled_subgraph_in(ctx, dom - z, w).j;
    let chi_f = chi(f);
    ensure(
        trace,
        "linanti.f",
        w * chi_f > (w - 1) * chi(dom - z) && 4 * chi_f > chi_g,
        format!("controlled F = {:?}, χ(F) = {chi_f}", f.to_vec()),
    )?;
    let eps_f = eps * qu(chi_f);
    let v = match f.iter().find(|&x| qu(chi(f - g.closed_nbrs(x))) >= eps_f) {
        Some(v) => v,
        None => {
            ensure(trace, "linanti.outcome", out1(f), "F is ε-colourful with 16·χ(F) ≥ χ(G)")?;
            return Ok(DenseOutcome::Colourful { j: f });
        }
    };
    let nv = g.nbrs(v) & dom;
    let qset = dom - g.closed_nbrs(v);
    ensure(
        trace,
        "linanti.v",
        qu(chi(qset)) >= eps_f && 6 * chi(nv) >= chi_g,
        format!("v = {v}: χ(Q) = {}, χ(N(v)) = {}", chi(qset), chi(nv)),
    )?;
    let s_dom = controlled_subgraph_in(ctx, qset, w).j;
    let chi_s = chi(s_dom);
    ensure(
        trace,
        "linanti.s",
        w * chi_s > (w - 1) * chi(qset),
        format!("controlled S = {:?}, χ(S) = {chi_s}", s_dom.to_vec()),
    )?;
    let p = wpow(w, -(d_exp as i64)) * qu(chi_g) / qu(2);
    let mut tp = base_partition(s_dom, &p);
    loop {
        check_partition(ctx, s_dom, &tp, w).map_err(|e| violation("linanti.partition", e, trace))?;
        let d = check_unique_component(ctx, s_dom, &tp, w).map_err(|e| violation("linanti.partition", e, trace))?;
        let chi_d = chi(d);
        trace.note("linanti.d", format!("k = {}, D = {:?}, χ(D) = {chi_d}", tp.a.len(), d.to_vec()));

        let x = VertexSet(nv.iter().filter(|&y| (g.nbrs(y) & d).is_empty()).fold(0, |m, y| m | 1 << y));
        let y = VertexSet(
            (nv - x)
                .iter()
                .filter(|&u| upow(w, d_exp as u32) * chi(d - g.nbrs(u)) < chi_d.into())
                .fold(0, |m, u| m | 1 << u),
        );
        let r = nv - x - y;
        trace.note("linanti.xyr", format!("X = {:?}, Y = {:?}, R = {:?}", x.to_vec(), y.to_vec(), r.to_vec()));
        if out2(x, d) {
            trace.note("linanti.outcome", "X is anticomplete to D");
            return Ok(DenseOutcome::Anticomplete { p: x, q: d });
        }
        ensure(
            trace,
            "linanti.d_size",
            qu(16 * chi_d) >= eps_chi,
            format!("16·χ(D) = {} ≥ ε·χ(G)", 16 * chi_d),
        )?;
        if !y.is_empty() {
            let cover = cover_in(ctx, y, d, w, params, trace)?;
            flags.eh_violation |= cover.eh_violation();
            let dy = d - cover.t();
            ensure(trace, "linanti.claim1.complete", g.is_complete_to(y, dy), "D \\ T is complete to Y")?;
            if out3(y, dy) {
                trace.note("linanti.outcome", "Y is complete to D \\ T");
                return Ok(DenseOutcome::Complete { a: y, b: dy });
            }
            if !cover.eh_violation() {
                ensure(
                    trace,
                    "linanti.claim1.dense",
                    qu(32 * chi(dy)) >= eps_chi,
                    format!("32·χ(D \\ T) = {} ≥ ε·χ(G)", 32 * chi(dy)),
                )?;
            }
        }
        ensure(
            trace,
            "linanti.claim1",
            2 * chi(r) >= chi(nv) && 16 * chi(r) >= chi_g,
            format!("χ(R) = {}, χ(N(v)) = {}", chi(r), chi(nv)),
        )?;
        let eps_r = eps * qu(chi(r));
        let u = match r.iter().find(|&u| qu(chi(r - g.closed_nbrs(u))) >= eps_r) {
            Some(u) => u,
            None => {
                ensure(trace, "linanti.outcome", out1(r), "R is ε-colourful with 16·χ(R) ≥ χ(G)")?;
                return Ok(DenseOutcome::Colourful { j: r });
            }
        };
        let e = r - g.closed_nbrs(u);
        let t = g.nbrs(u) & d;
        let c = ctx.max_chi_component(d - g.nbrs(u));
        ensure(
            trace,
            "linanti.c",
            !c.is_empty() && chi(c) == chi(d - g.nbrs(u)) && scaled_ge(chi(c), w, d_exp, chi_d),
            format!("u = {u}, E = {:?}, C = {:?}", e.to_vec(), c.to_vec()),
        )?;
        ensure_p5(
            ctx,
            dom,
            trace,
            "linanti.claim2",
            (e | t).iter().all(|z| !g.mixed(z, c)),
            "E ∪ T is pure to C",
        )?;
        let e1 = VertexSet(e.iter().filter(|&z| (g.nbrs(z) & c).is_empty()).fold(0, |m, z| m | 1 << z));
        if out3(c, e - e1) {
            trace.note("linanti.outcome", "E \\ E1 is complete to C");
            return Ok(DenseOutcome::Complete { a: c, b: e - e1 });
        }
        ensure(
            trace,
            "linanti.claim3",
            2 * chi(e1) >= chi(e),
            format!("χ(E1) = {}, χ(E) = {}", chi(e1), chi(e)),
        )?;
        let uu = touching(g, t, c);
        ensure(
            trace,
            "linanti.u",
            !uu.is_empty() && g.is_complete_to(uu, c),
            format!("U = {:?} is nonempty and complete to C", uu.to_vec()),
        )?;
        let ww = touching(g, tp.b, c);
        let w1 = ww - g.nbrs(u);
        let w2set = ww & g.nbrs(u);
        let c1 = ctx.max_chi_component(w1);
        ensure_p5(
            ctx,
            dom,
            trace,
            "linanti.claim4",
            g.is_complete_to(e1, uu | w2set) && e1.iter().all(|z| !g.mixed(z, c1)),
            "E1 is complete to U ∪ W2 and pure to C1",
        )?;
        let e2 = VertexSet(e1.iter().filter(|&z| !c1.is_subset(g.nbrs(z))).fold(0, |m, z| m | 1 << z));
        if let Some(yv) = c1.first() {
            let i = tp.b_i.iter().position(|bi| bi.contains(yv));
            let ai = match i {
                Some(i) => tp.a[i],
                None => return Err(violation("linanti.claim5", format!("{yv} touches no A block"), trace)),
            };
            ensure_p5(
                ctx,
                dom,
                trace,
                "linanti.claim5",
                g.is_complete_to(VertexSet::singleton(yv), ai) && g.is_complete_to(e2, ai),
                "y and E2 are complete to A_i",
            )?;
            if out3(ai, e2) {
                trace.note("linanti.outcome", "E2 is complete to A_i");
                return Ok(DenseOutcome::Complete { a: ai, b: e2 });
            }
        }
        ensure(
            trace,
            "linanti.claim5",
            qu(64 * chi(e2)) <= eps_chi,
            format!("64·χ(E2) = {} ≤ ε·χ(G)", 64 * chi(e2)),
        )?;
        let e12 = e1 - e2;
        ensure(
            trace,
            "linanti.claim6.complete",
            g.is_complete_to(e12, c1 | uu | w2set),
            "E1 \\ E2 is complete to C1 ∪ U ∪ W2",
        )?;
        for (name, side) in [("U", uu), ("C1", c1), ("W2", w2set)] {
            if out3(side, e12) {
                trace.note("linanti.outcome", format!("E1 \\ E2 is complete to {name}"));
                return Ok(DenseOutcome::Complete { a: side, b: e12 });
            }
        }
        let wb = upow(w, bx as u32);
        ensure(
            trace,
            "linanti.claim6",
            &wb * chi(uu) <= chi_g.into() && &wb * chi(ww) <= (2 * chi_g).into(),
            format!("χ(U) = {}, χ(W) = {}", chi(uu), chi(ww)),
        )?;
        let d1 = d - c - uu;
        ensure(
            trace,
            "linanti.d_prime",
            w2 * chi(c) < (w2 - 1) * chi_s && w2 * chi(d1) >= (w2 - 1) * chi_s,
            format!("χ(C) = {}, χ(D') = {}", chi(c), chi(d1)),
        )?;
        let cp = match high_components(ctx, s_dom, d1, w).first() {
            Some(&cp) => cp,
            None => return Err(violation("linanti.c_prime", "D' has no high-χ component", trace)),
        };
        let up = touching(g, uu, cp);
        let c0 = g.component_of(c.first().expect("nonempty"), d - up);
        ensure(
            trace,
            "linanti.c0",
            !up.is_empty() && c.is_subset(c0),
            format!("C' = {:?}, U' = {:?}, C0 = {:?}", cp.to_vec(), up.to_vec(), c0.to_vec()),
        )?;
        ensure_p5(
            ctx,
            dom,
            trace,
            "linanti.claim7",
            up.iter().all(|z| g.mixed(z, cp)) && high_components(ctx, s_dom, d - up, w) == vec![cp],
            "U' is mixed on C', which is the unique high-χ component of D \\ U'",
        )?;
        ensure_p5(
            ctx,
            dom,
            trace,
            "linanti.claim8",
            tp.b.iter().all(|z| !(g.nbrs(z) & cp).is_empty()),
            "every B-vertex has a neighbour in C'",
        )?;
        let wp = touching(g, tp.b, c0);
        ensure(trace, "linanti.w_in_w_prime", ww.is_subset(wp), "W ⊆ W'")?;
        ensure_p5(
            ctx,
            dom,
            trace,
            "linanti.w_prime_in_w",
            wp.is_subset(ww) && g.is_complete_to(wp, c0),
            "W' ⊆ W and W' is complete to A_(k+1)",
        )?;
        let bk = up | ww;
        ensure(
            trace,
            "linanti.extension",
            w.pow(4) * chi(bk) <= chi_s && qu(chi(c0)) >= p,
            format!("χ(B_(k+1)) = {}, χ(A_(k+1)) = {}", chi(bk), chi(c0)),
        )?;
        tp = extend(g, &tp, c0, up);
        flags.extensions += 1;
    }
}

/// Either an ε-colourful J with 64·χ(J) ≥ χ(G), or a complete (A, B) with
/// χ(A)·w^a ≥ χ(G) and 256·χ(B) ≥ ε·χ(G), where a = d + 8.
pub fn locdense(g: &Graph, eps: &Q, params: &P5Params) -> Result<DenseResult> {
    let ctx = dense_entry(g, eps, params)?;
    let dom = g.vertices();
    let w = w_of(&ctx, dom);
    let mut trace = Trace::new();
    let mut flags = Flags::default();
    let outcome = locdense_in(&ctx, dom, eps, params, w, &mut trace, &mut flags)?;
    let chi = ctx.chi(dom);
    Ok(DenseResult {
        outcome,
        w,
        extensions: flags.extensions,
        eh_violation: flags.eh_violation,
        degenerate: scaled_ge(1, w, params.locdense_exponent(), chi) || eps * qu(chi) <= qu(256),
        trace,
    })
}

pub(crate) fn locdense_in(
    ctx: &Ctx,
    dom: VertexSet,
    eps: &Q,
    params: &P5Params,
    w: usize,
    trace: &mut Trace,
    flags: &mut Flags,
) -> Result<DenseOutcome> {
    let g = ctx.g;
    let chi_g = ctx.chi(dom);
    let ax = params.locdense_exponent();
    let eps_chi = eps * qu(chi_g);
    let final_pair = |a: VertexSet, b: VertexSet| {
        !a.is_empty()
            && !b.is_empty()
            && g.is_complete_to(a, b)
            && scaled_ge(ctx.chi(a), w, ax, chi_g)
            && qu(256 * ctx.chi(b)) >= eps_chi
    };
    if non_colourful_vertex(ctx, dom, eps).is_none() {
        trace.note("locdense.outcome", "G itself is ε-colourful");
        return Ok(DenseOutcome::Colourful { j: dom });
    }
    let f = controlled_subgraph_in(ctx, dom, w).j;
    let chi_f = ctx.chi(f);
    ensure(
        trace,
        "locdense.f",
        w * chi_f > (w - 1) * chi_g,
        format!("controlled F = {:?}, χ(F) = {chi_f}", f.to_vec()),
    )?;
    let p = eps * qu(chi_f) / qu(32);
    let w3 = w.pow(3);
    let mut supplier = |j: VertexSet, tr: &mut Trace| -> Result<Supply<DenseOutcome>> {
        ensure(
            tr,
            "locdense.claim.size",
            w3 * ctx.chi(j) >= (w3 - 1) * chi_f,
            format!("J = {:?}, χ(J) = {}", j.to_vec(), ctx.chi(j)),
        )?;
        match linanti_in(ctx, j, eps, params, w, tr, flags)? {
            DenseOutcome::Colourful { j: l } => {
                ensure(tr, "locdense.claim.colourful", 64 * ctx.chi(l) >= chi_g, "64·χ(L) ≥ χ(G)")?;
                Ok(Supply::Stop(DenseOutcome::Colourful { j: l }))
            }
            DenseOutcome::Complete { a, b } => {
                ensure(tr, "locdense.claim.complete", final_pair(a, b), "the complete pair meets the outer thresholds")?;
                Ok(Supply::Stop(DenseOutcome::Complete { a, b }))
            }
            DenseOutcome::Anticomplete { p: x, q: y } => {
                ensure(
                    tr,
                    "locdense.claim.anticomplete",
                    qu(ctx.chi(x)) >= p && qu(ctx.chi(y)) >= p,
                    format!("χ(P) = {}, χ(Q) = {} ≥ p = {}", ctx.chi(x), ctx.chi(y), fmt_q(&p)),
                )?;
                Ok(Supply::Pair(x, y))
            }
        }
    };
    let (outcome, ext) = terminal_pair_in(ctx, f, &p, w, &mut supplier, trace)?;
    flags.extensions += ext;
    match outcome {
        TerminalPairOutcome::Stopped(o) => Ok(o),
        TerminalPairOutcome::Complete { a, b } => {
            ensure(
                trace,
                "locdense.outcome",
                final_pair(a, b),
                format!("χ(A) = {}, χ(B) = {}", ctx.chi(a), ctx.chi(b)),
            )?;
            Ok(DenseOutcome::Complete { a, b })
        }
    }
}

/// A complete pair (A, B) with χ(A)·w^b ≥ χ(G) and χ(B)·2^b ≥ χ(G).
///
/// Below χ(G) = w^b any edge qualifies and is returned directly.
pub fn p5_complete_pair(g: &Graph, params: &P5Params) -> Result<PairResult> {
    p5_pair(g, params, true)
}

/// As [`p5_complete_pair`], but always runs the colourful/two-outcome
/// pipeline instead of the small-χ shortcut.
pub fn p5_complete_pair_full(g: &Graph, params: &P5Params) -> Result<PairResult> {
    p5_pair(g, params, false)
}

fn p5_pair(g: &Graph, params: &P5Params, shortcut: bool) -> Result<PairResult> {
    params.validate()?;
    let ctx = Ctx::new(g)?;
    let dom = g.vertices();
    let w = ctx.omega(dom);
    if w < 2 {
        return Err(precondition("ω(G) must be at least 2"));
    }
    require_p5_free(&ctx, dom)?;
    let mut trace = Trace::new();
    let (a, b, route) = p5_pair_in(&ctx, dom, params, shortcut, &mut trace)?;
    Ok(PairResult {
        a,
        b,
        w,
        route,
        degenerate: scaled_ge(1, w, params.b, ctx.chi(dom)),
        trace,
    })
}

pub(crate) fn p5_pair_in(
    ctx: &Ctx,
    dom: VertexSet,
    params: &P5Params,
    shortcut: bool,
    trace: &mut Trace,
) -> Result<(VertexSet, VertexSet, PairRoute)> {
    let g = ctx.g;
    let w = ctx.omega(dom);
    let chi_g = ctx.chi(dom);
    let b_exp = params.b;
    let (u, v) = first_edge(g, dom).ok_or_else(|| precondition("ω(G) must be at least 2"))?;
    let edge = (VertexSet::singleton(u), VertexSet::singleton(v));
    let (a, b, route) = if shortcut && scaled_ge(1, w, b_exp, chi_g + 1) {
        trace.note("p5.shortcut", format!("χ(G) = {chi_g} < w^{b_exp}: the edge {u}{v}"));
        (edge.0, edge.1, PairRoute::SmallChi)
    } else {
        let half = q(1, 2);
        let mut flags = Flags::default();
        match locdense_in(ctx, dom, &half, params, w, trace, &mut flags)? {
            DenseOutcome::Colourful { j } => {
                ensure(trace, "p5.colourful", 64 * ctx.chi(j) >= chi_g, format!("J = {:?}", j.to_vec()))?;
                if ctx.chi(j) < 2 {
                    trace.note("p5.colourful", "χ(J) < 2, which needs χ(G) < w^b: using an edge");
                    (edge.0, edge.1, PairRoute::EdgeFallback)
                } else {
                    let (a, b, _) = colourful_pair_in(ctx, j, &half, trace)?;
                    (a, b, PairRoute::Colourful)
                }
            }
            DenseOutcome::Complete { a, b } => (a, b, PairRoute::Locdense),
            DenseOutcome::Anticomplete { .. } => {
                return Err(violation("p5.locdense", "two-outcome step returned an anticomplete pair", trace))
            }
        }
    };
    ensure(
        trace,
        "p5.outcome",
        g.is_complete_to(a, b)
            && !a.is_empty()
            && !b.is_empty()
            && scaled_ge(ctx.chi(a), w, b_exp, chi_g)
            && scaled_ge(ctx.chi(b), 2, b_exp, chi_g),
        format!("A = {:?}, B = {:?}", a.to_vec(), b.to_vec()),
    )?;
    Ok((a, b, route))
}

/// Exponent E with w^E ≥ w^(d·log w / log log w), logs binary, computed
/// from integer bounds on log w (above) and log log w (below).
pub fn chi_envelope_exponent(w: usize, d: usize) -> u64 {
    assert!(w >= 3, "the envelope needs w ≥ 3");
    const M: u32 = 64;
    // log2 w ∈ [k/M, (k+1)/M)
    let k = floor_log2(&Pow::pow(BigUint::from(w), M));
    // log2(k/M) ≥ j/M
    let j = floor_log2(&Pow::pow(BigUint::from(k), M)) - 6 * M as u64;
    assert!(j > 0, "log log w bounded below by a positive rational for w ≥ 3");
    (d as u64 * (k + 1)).div_ceil(j)
}

pub fn chi_envelope(w: usize, d: usize) -> BigUint {
    Pow::pow(BigUint::from(w), chi_envelope_exponent(w, d))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChiBranch {
    /// ω ≤ 16: the Gyárfás colouring and its high-χ neighbourhood chain.
    SmallClique { chain: Vec<usize> },
    /// Complete blockade B_0, …, B_k grown by complete pairs from the last
    /// block; `chosen` has clique number at most w / log w.
    Blockade {
        blocks: Vec<VertexSet>,
        chosen: Option<usize>,
        chosen_omega: usize,
        /// k reached log w.
        reached: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiCertificate {
    pub w: usize,
    pub branch: ChiBranch,
    /// The bound the branch certifies, decimal.
    pub bound: String,
    /// w^exponent, an upper envelope of w^(d log w / log log w).
    pub envelope: String,
    pub exponent: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiBoundResult {
    pub colouring: Colouring,
    pub raw_count: usize,
    pub certificate: ChiCertificate,
    pub trace: Trace,
}

/// A proper colouring of a P5-free graph with ω ≥ 3, with a certificate
/// that its size is at most w^(d log w / log log w), d = 2b.
pub fn p5_chi_bound(g: &Graph, params: &P5Params) -> Result<ChiBoundResult> {
    params.validate()?;
    let ctx = Ctx::new(g)?;
    let dom = g.vertices();
    let w = ctx.omega(dom);
    if w < 3 {
        return Err(precondition("ω(G) must be at least 3"));
    }
    require_p5_free(&ctx, dom)?;
    let mut trace = Trace::new();
    let exponent = chi_envelope_exponent(w, params.d_final);
    let envelope = chi_envelope(w, params.d_final);
    let (colouring, raw_count, branch, bound) = if w <= 16 {
        let gc = gyarfas_colour_bound(g, 5)?;
        let bound = Pow::pow(BigUint::from(3u32), w as u32);
        ensure(&mut trace, "chi.small_envelope", bound <= envelope, "3^w is below the envelope")?;
        (gc.colouring, gc.raw_count, ChiBranch::SmallClique { chain: gc.chain }, bound)
    } else {
        let b = params.b;
        let chi_g = ctx.chi(dom);
        let mut blocks = vec![dom];
        let mut reached = true;
        while BigUint::one() << (blocks.len() - 1) < BigUint::from(w) {
            let k = blocks.len() - 1;
            let last = blocks[k];
            if ctx.omega(last) < 2 {
                trace.note("chi.blockade", format!("B_{k} is stable: the blockade stops at k = {k}"));
                reached = false;
                break;
            }
            let (a, bb, _) = p5_pair_in(&ctx, last, params, false, &mut trace)?;
            trace.check(
                "chi.blockade",
                scaled_ge(ctx.chi(a), w, 2 * b, chi_g) && scaled_ge(ctx.chi(bb), 2, b * (k + 1), chi_g),
                format!("B_{k} ← {:?}, B_{} = {:?}", a.to_vec(), k + 1, bb.to_vec()),
            );
            blocks[k] = a;
            blocks.push(bb);
        }
        let complete = blocks
            .iter()
            .enumerate()
            .all(|(i, &x)| blocks[i + 1..].iter().all(|&y| g.is_complete_to(x, y)));
        ensure(&mut trace, "chi.complete_blockade", complete, "the blocks are pairwise complete")?;
        let k = blocks.len() - 1;
        let chosen = (0..k).min_by_key(|&i| ctx.omega(blocks[i]));
        let chosen_omega = chosen.map_or(0, |i| ctx.omega(blocks[i]));
        if let Some(i) = chosen {
            // ω(B_i) ≤ w / log w  ⟺  w^ω(B_i) ≤ 2^w
            trace.check(
                "chi.small_block",
                !reached || upow(w, chosen_omega as u32) <= BigUint::one() << w,
                format!("ω(B_{i}) = {chosen_omega}"),
            );
        }
        let raw = Colouring::new(exact_colouring(g, dom));
        let raw_count = raw.count();
        let branch = ChiBranch::Blockade {
            blocks,
            chosen,
            chosen_omega,
            reached,
        };
        (raw.compact(g), raw_count, branch, envelope.clone())
    };
    ensure(
        &mut trace,
        "chi.proper",
        colouring.is_proper(g) && colouring.domain() == dom,
        "the colouring is proper on V(G)",
    )?;
    ensure(
        &mut trace,
        "chi.bound",
        BigUint::from(colouring.count()) <= bound,
        format!("{} colours", colouring.count()),
    )?;
    Ok(ChiBoundResult {
        colouring,
        raw_count,
        certificate: ChiCertificate {
            w,
            branch,
            bound: bound.to_string(),
            envelope: envelope.to_string(),
            exponent,
        },
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{c5_join_power, complete, cycle, edgeless, join};

    fn params() -> P5Params {
        P5Params::default()
    }

    #[test]
    fn colourful_pair_examples() {
        let k4 = complete(4);
        let r = colourful_complete_pair(&k4, &q(1, 2)).unwrap();
        assert_eq!(r.route, PairRoute::CompleteGraph);
        assert_eq!((r.a.len(), r.b.len()), (1, 3));
        assert!(k4.is_complete_to(r.a, r.b));
        assert!(matches!(colourful_complete_pair(&cycle(5), &q(1, 2)), Err(Error::Precondition(_))));
    }

    #[test]
    fn colourful_pair_on_join() {
        let g = join(&cycle(5), &cycle(5)).unwrap();
        let ctx = Ctx::new(&g).unwrap();
        // χ(G \ N[v]) = χ(edge) = 2 < (3/4)·6
        assert_eq!(colourful_check(&g, &q(3, 4)).unwrap(), None);
        let r = colourful_complete_pair(&g, &q(3, 4)).unwrap();
        assert_eq!(r.route, PairRoute::Cutset);
        assert!(g.is_complete_to(r.a, r.b));
        assert!(8 * ctx.chi(r.b) >= 6);
        assert!(r.degenerate);
    }

    use super::super::colourful_check;

    #[test]
    fn linanti_examples() {
        let k4 = complete(4);
        let r = linanti(&k4, &q(1, 4), &params()).unwrap();
        assert_eq!(r.outcome, DenseOutcome::Colourful { j: k4.vertices() });
        let c5 = cycle(5);
        let r = linanti(&c5, &q(1, 4), &params()).unwrap();
        assert_outcome(&c5, &r.outcome, &q(1, 4));
        assert!(linanti(&c5, &q(3, 4), &params()).is_err());
        assert!(matches!(linanti(&crate::generators::path(5), &q(1, 4), &params()), Err(Error::ForbiddenCopy { .. })));
    }

    fn assert_outcome(g: &Graph, o: &DenseOutcome, eps: &Q) {
        let ctx = Ctx::new(g).unwrap();
        match *o {
            DenseOutcome::Colourful { j } => assert_eq!(non_colourful_vertex(&ctx, j, eps), None),
            DenseOutcome::Anticomplete { p, q } => assert!(g.is_anticomplete_to(p, q) && !p.is_empty() && !q.is_empty()),
            DenseOutcome::Complete { a, b } => assert!(g.is_complete_to(a, b) && !a.is_empty() && !b.is_empty()),
        }
    }

    #[test]
    fn locdense_examples() {
        let k5 = complete(5);
        assert_eq!(locdense(&k5, &q(1, 2), &params()).unwrap().outcome, DenseOutcome::Colourful { j: k5.vertices() });
        let g = join(&cycle(5), &cycle(5)).unwrap();
        let r = locdense(&g, &q(1, 2), &params()).unwrap();
        assert_outcome(&g, &r.outcome, &q(1, 2));
        for m in 1..=2 {
            let g = c5_join_power(m).unwrap();
            let r = locdense(&g, &q(1, 3), &params()).unwrap();
            assert!(!matches!(r.outcome, DenseOutcome::Anticomplete { .. }));
            assert_outcome(&g, &r.outcome, &q(1, 3));
        }
    }

    #[test]
    fn p5_pair_examples() {
        let c5 = cycle(5);
        let r = p5_complete_pair(&c5, &params()).unwrap();
        assert_eq!(r.route, PairRoute::SmallChi);
        assert_eq!((r.a.len(), r.b.len()), (1, 1));
        assert!(c5.is_complete_to(r.a, r.b));
        let g = join(&cycle(5), &cycle(5)).unwrap();
        for r in [p5_complete_pair(&g, &params()).unwrap(), p5_complete_pair_full(&g, &params()).unwrap()] {
            assert!(g.is_complete_to(r.a, r.b));
        }
        assert!(matches!(p5_complete_pair(&edgeless(3), &params()), Err(Error::Precondition(_))));
    }

    #[test]
    fn envelope_values() {
        // log2 3 < 102/64 and log2 log2 3 > 42/64
        assert_eq!(chi_envelope_exponent(3, 80), 195);
        assert!(chi_envelope(16, 8) >= Pow::pow(BigUint::from(3u32), 16u32));
    }

    #[test]
    fn chi_bound_examples() {
        assert!(matches!(p5_chi_bound(&cycle(5), &params()), Err(Error::Precondition(_))));
        let g = join(&cycle(5), &join(&cycle(5), &cycle(5)).unwrap()).unwrap();
        let r = p5_chi_bound(&g, &params()).unwrap();
        assert_eq!(r.certificate.w, 6);
        assert_eq!(r.certificate.bound, "729");
        assert_eq!(r.colouring.count(), 9);
        let g = c5_join_power(3).unwrap();
        assert_eq!(p5_chi_bound(&g, &params()).unwrap().colouring.count(), 9);
        let k17 = complete(17);
        let r = p5_chi_bound(&k17, &params()).unwrap();
        assert_eq!(r.colouring.count(), 17);
        match r.certificate.branch {
            ChiBranch::Blockade { ref blocks, reached, chosen_omega, .. } => {
                assert!(reached);
                assert_eq!(blocks.len(), 6);
                assert_eq!(chosen_omega, 1);
            }
            _ => panic!("ω = 17 takes the blockade branch"),
        }
    }
}
