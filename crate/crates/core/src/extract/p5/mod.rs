//! P5-free graphs: mixed vertices, terminal partitions, colourful subgraphs,
//! complete pairs and the chromatic bound built from them.

mod dense;
mod terminal;

pub use dense::*;
pub use terminal::*;

use serde::{Deserialize, Serialize};

use crate::ctx::Ctx;
use crate::error::{precondition, Error, Result};
use crate::generators::path;
use crate::graph::{Graph, VertexSet};
use crate::oracles::clique::max_stable_set;
use crate::oracles::copy::find_induced_copy_in;
use crate::rational::{qu, upow, Q};
use crate::trace::Trace;

/// Exponents of the P5 pipeline. Only `a` is free; the rest follow from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct P5Params {
    /// Erdős–Hajnal exponent: a P5-free graph with α, ω ≤ w has at most w^a vertices.
    pub a: usize,
    /// Non-neighbour cover exponent, a + 2.
    pub d: usize,
    /// Complete-pair exponent, max(a + 10, 40).
    pub b: usize,
    /// Chromatic bound exponent, 2b.
    pub d_final: usize,
}

impl P5Params {
    pub fn new(a: usize) -> Result<Self> {
        if a < 4 {
            return Err(precondition("the EH exponent a must be at least 4"));
        }
        let d = a + 2;
        let b = (d + 8).max(40);
        Ok(P5Params { a, d, b, d_final: 2 * b })
    }

    /// Polynomial exponent of the three-outcome lemma, d + 6.
    pub fn linanti_exponent(&self) -> usize {
        self.d + 6
    }

    /// Polynomial exponent of the two-outcome lemma, d + 8.
    pub fn locdense_exponent(&self) -> usize {
        self.d + 8
    }

    pub fn validate(&self) -> Result<()> {
        if *self != P5Params::new(self.a)? {
            return Err(precondition("derived P5 exponents are inconsistent with a"));
        }
        Ok(())
    }
}

impl Default for P5Params {
    fn default() -> Self {
        P5Params::new(4).expect("a = 4 is valid")
    }
}

/// `lhs · w^e ≥ rhs` for integers, exactly.
pub(crate) fn scaled_ge(lhs: usize, w: usize, e: usize, rhs: usize) -> bool {
    upow(w, e as u32) * lhs >= rhs.into()
}

pub(crate) fn violation(claim: &str, detail: impl Into<String>, trace: &Trace) -> Error {
    Error::ClaimViolation {
        claim: claim.into(),
        detail: detail.into(),
        trace: trace.entries.clone(),
    }
}

/// Records a claim; on failure returns a violation carrying the trace.
pub(crate) fn ensure(trace: &mut Trace, claim: &str, holds: bool, detail: impl Into<String>) -> Result<()> {
    let detail = detail.into();
    if trace.check(claim, holds, detail.clone()) {
        Ok(())
    } else {
        Err(violation(claim, detail, trace))
    }
}

/// Like [`ensure`] for claims that only P5-freeness can break: a failure
/// becomes a forbidden-copy error when G[dom] contains a P5.
pub(crate) fn ensure_p5(
    ctx: &Ctx,
    dom: VertexSet,
    trace: &mut Trace,
    claim: &str,
    holds: bool,
    detail: impl Into<String>,
) -> Result<()> {
    let detail = detail.into();
    if trace.check(claim, holds, detail.clone()) {
        return Ok(());
    }
    if let Some(copy) = find_induced_copy_in(&path(5), ctx.g, dom, None)? {
        return Err(Error::ForbiddenCopy { what: "P5".into(), copy });
    }
    Err(violation(claim, detail, trace))
}

pub(crate) fn require_p5_free(ctx: &Ctx, dom: VertexSet) -> Result<()> {
    match find_induced_copy_in(&path(5), ctx.g, dom, None)? {
        Some(copy) => Err(Error::ForbiddenCopy { what: "P5".into(), copy }),
        None => Ok(()),
    }
}

/// Connected and χ(N(v))·w² < (w² - 1)·χ for every vertex.
pub(crate) fn require_controlled(ctx: &Ctx, dom: VertexSet, w: usize) -> Result<()> {
    let g = ctx.g;
    if dom.is_empty() {
        return Err(Error::EmptySet);
    }
    if !g.is_connected(dom) {
        let comps: Vec<_> = g.components(dom).into_iter().map(|c| c.to_vec()).collect();
        return Err(precondition(format!("graph is not connected: components {comps:?}")));
    }
    let w2 = w * w;
    let chi = ctx.chi(dom);
    if let Some(v) = dom.iter().find(|&v| w2 * ctx.chi(g.nbrs(v) & dom) >= (w2 - 1) * chi) {
        return Err(precondition(format!(
            "graph is not controlled: χ(N({v})) = {} against χ(G) = {chi}, w = {w}",
            ctx.chi(g.nbrs(v) & dom)
        )));
    }
    Ok(())
}

/// The clique-number bound used by the pipeline: max(ω, 2).
pub(crate) fn w_of(ctx: &Ctx, dom: VertexSet) -> usize {
    ctx.omega(dom).max(2)
}

/// Vertices of `s` that are complete to `t`.
pub(crate) fn complete_part(g: &Graph, s: VertexSet, t: VertexSet) -> VertexSet {
    VertexSet(s.iter().filter(|&x| t.is_subset(g.nbrs(x))).fold(0, |m, x| m | 1 << x))
}

/// Vertices of `s` with at least one neighbour in `t`.
pub(crate) fn touching(g: &Graph, s: VertexSet, t: VertexSet) -> VertexSet {
    s & g.nbrs_of_set(t)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MixedCheck {
    Unmixed,
    /// a2 - a1 - v - b1 - b2.
    P5Witness { path: Vec<usize> },
}

/// a2 - a1 - v - b1 - b2 when `v` is mixed on both connected sets.
pub(crate) fn mixed_p5(g: &Graph, a: VertexSet, b: VertexSet, v: usize) -> Option<Vec<usize>> {
    let edge = |s: VertexSet| {
        (s & g.nbrs(v))
            .iter()
            .find_map(|x| (g.nbrs(x) & s - g.nbrs(v)).first().map(|y| (x, y)))
    };
    let (a1, a2) = edge(a)?;
    let (b1, b2) = edge(b)?;
    Some(vec![a2, a1, v, b1, b2])
}

/// Checks that no vertex is mixed on both sides of the anticomplete pair.
///
/// Both sides must induce connected subgraphs: on disconnected sides a
/// vertex can be mixed without any edge to build the path from.
pub fn assert_unmixed(g: &Graph, a: VertexSet, b: VertexSet) -> Result<MixedCheck> {
    g.check_subset(a)?;
    g.check_subset(b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    if !a.is_disjoint(b) {
        return Err(Error::Overlap);
    }
    if !g.is_anticomplete_to(a, b) {
        return Err(precondition("the pair is not anticomplete"));
    }
    if !g.is_connected(a) || !g.is_connected(b) {
        return Err(precondition("both sides must induce connected subgraphs"));
    }
    for v in (g.vertices() - a - b).iter() {
        if g.mixed(v, a) && g.mixed(v, b) {
            let path = mixed_p5(g, a, b, v).expect("connected sides carry a mixed edge");
            return Ok(MixedCheck::P5Witness { path });
        }
    }
    Ok(MixedCheck::Unmixed)
}

/// First vertex v of `dom` with χ(dom \ N[v]) ≥ ε·χ(dom), if any.
pub(crate) fn non_colourful_vertex(ctx: &Ctx, dom: VertexSet, eps: &Q) -> Option<usize> {
    let bound = eps * qu(ctx.chi(dom));
    dom.iter()
        .find(|&v| qu(ctx.chi(dom - ctx.g.closed_nbrs(v))) >= bound)
}

/// `None` if G is ε-colourful, else the first vertex whose closed
/// non-neighbourhood is too colourful.
pub fn colourful_check(g: &Graph, eps: &Q) -> Result<Option<usize>> {
    if *eps <= qu(0) {
        return Err(precondition("ε must be positive"));
    }
    let ctx = Ctx::new(g)?;
    Ok(non_colourful_vertex(&ctx, g.vertices(), eps))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverResult {
    /// Vertices of Q with a non-neighbour in P.
    pub t: VertexSet,
    /// Minimal S ⊆ P whose non-neighbourhoods in Q cover T.
    pub s: VertexSet,
    /// `z[i]` misses the i-th vertex of S and sees the others.
    pub z: Vec<usize>,
    pub chi_t: usize,
    pub chi_q: usize,
    pub alpha_s: usize,
    pub w: usize,
    /// |S| > w^a: the EH exponent was too small for this instance.
    pub eh_violation: bool,
    pub trace: Trace,
}

/// T = vertices of Q with a non-neighbour in P, with χ(T)·w² ≤ χ(Q)
/// certified through a minimal cover of T by non-neighbourhoods.
pub fn nonneighbour_cover(g: &Graph, p: VertexSet, q: VertexSet, params: &P5Params) -> Result<CoverResult> {
    params.validate()?;
    g.check_subset(p)?;
    g.check_subset(q)?;
    if p.is_empty() || q.is_empty() {
        return Err(Error::EmptySet);
    }
    let ctx = Ctx::new(g)?;
    let w = ctx.omega(g.vertices());
    if w < 2 {
        return Err(precondition("ω(G) must be at least 2"));
    }
    require_p5_free(&ctx, g.vertices())?;
    let chi_q = ctx.chi(q);
    if let Some(u) = p
        .iter()
        .find(|&u| upow(w, params.d as u32) * ctx.chi(q - g.nbrs(u)) > chi_q.into())
    {
        return Err(precondition(format!(
            "χ(Q \\ N({u})) = {} exceeds w^-{}·χ(Q) with χ(Q) = {chi_q}",
            ctx.chi(q - g.nbrs(u)),
            params.d
        )));
    }
    let mut trace = Trace::new();
    cover_in(&ctx, p, q, w, params, &mut trace)?.finish(trace)
}

pub(crate) struct CoverCore {
    t: VertexSet,
    s: VertexSet,
    z: Vec<usize>,
    chi_t: usize,
    chi_q: usize,
    alpha_s: usize,
    w: usize,
    eh_violation: bool,
}

impl CoverCore {
    pub(crate) fn t(&self) -> VertexSet {
        self.t
    }

    pub(crate) fn eh_violation(&self) -> bool {
        self.eh_violation
    }

    fn finish(self, trace: Trace) -> Result<CoverResult> {
        Ok(CoverResult {
            t: self.t,
            s: self.s,
            z: self.z,
            chi_t: self.chi_t,
            chi_q: self.chi_q,
            alpha_s: self.alpha_s,
            w: self.w,
            eh_violation: self.eh_violation,
            trace,
        })
    }
}

/// The cover construction without the per-vertex precondition. The bound
/// χ(T)·w² ≤ χ(Q) is asserted only when |S| ≤ w^a.
pub(crate) fn cover_in(
    ctx: &Ctx,
    p: VertexSet,
    q: VertexSet,
    w: usize,
    params: &P5Params,
    trace: &mut Trace,
) -> Result<CoverCore> {
    let g = ctx.g;
    let miss = |u: usize| q - g.nbrs(u);
    let t = p.iter().fold(VertexSet::EMPTY, |acc, u| acc | miss(u));
    let mut s = VertexSet(p.iter().filter(|&u| !miss(u).is_empty()).fold(0, |m, u| m | 1 << u));
    for u in s.iter() {
        let rest = s.without(u);
        if rest.iter().fold(VertexSet::EMPTY, |acc, x| acc | miss(x)) == t {
            s = rest;
        }
    }
    let mut z = Vec::new();
    for u in s.iter() {
        let others = s.without(u).iter().fold(VertexSet::EMPTY, |acc, x| acc | miss(x));
        match (miss(u) - others).first() {
            Some(x) => z.push(x),
            None => return Err(violation("cover.minimal", format!("{u} is redundant in S"), trace)),
        }
    }
    trace.note("cover.s", format!("|T| = {}, minimal S = {:?}, z = {z:?}", t.len(), s.to_vec()));
    let alpha_s = ctx.alpha(s);
    if alpha_s > w {
        let stable = max_stable_set(g, s).to_vec();
        let idx: Vec<usize> = stable.iter().map(|&u| s.iter().position(|x| x == u).unwrap()).collect();
        let clique = idx.iter().all(|&i| idx.iter().all(|&j| i == j || g.adjacent(z[i], z[j])));
        ensure_p5(
            ctx,
            g.vertices(),
            trace,
            "cover.alpha",
            false,
            format!("α(S) = {alpha_s} > w = {w}; z over a largest stable set is a clique: {clique}"),
        )?;
    }
    trace.check("cover.alpha", true, format!("α(S) = {alpha_s} ≤ w = {w}"));
    let eh_violation = upow(w, params.a as u32) < s.len().into();
    trace.check(
        "cover.eh_size",
        !eh_violation,
        format!("|S| = {} against w^a with w = {w}, a = {}", s.len(), params.a),
    );
    let chi_t = ctx.chi(t);
    let chi_q = ctx.chi(q);
    let bound_holds = w * w * chi_t <= chi_q;
    if eh_violation {
        trace.check("cover.bound", bound_holds, format!("χ(T) = {chi_t}, χ(Q) = {chi_q} (EH-constant violation at a = {})", params.a));
    } else {
        ensure(trace, "cover.bound", bound_holds, format!("w²·χ(T) = {} ≤ χ(Q) = {chi_q}", w * w * chi_t))?;
    }
    Ok(CoverCore {
        t,
        s,
        z,
        chi_t,
        chi_q,
        alpha_s,
        w,
        eh_violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, edgeless, path};
    use crate::rational::q;

    #[test]
    fn params_follow_a() {
        let p = P5Params::default();
        assert_eq!((p.a, p.d, p.b, p.d_final), (4, 6, 40, 80));
        assert_eq!(p.linanti_exponent(), 12);
        assert_eq!(p.locdense_exponent(), 14);
        assert!(P5Params::new(3).is_err());
        let big = P5Params::new(40).unwrap();
        assert_eq!((big.d, big.b), (42, 50));
    }

    #[test]
    fn unmixed_examples() {
        let c5 = cycle(5);
        let r = assert_unmixed(&c5, VertexSet::singleton(0), VertexSet::singleton(2)).unwrap();
        assert_eq!(r, MixedCheck::Unmixed);
        let p5 = path(5);
        let err = assert_unmixed(&p5, VertexSet::from_slice(&[0, 1]), VertexSet::from_slice(&[2, 3]));
        assert!(matches!(err, Err(Error::Precondition(_))));
        // a1 a2 / b1 b2 edges, centre 4 joined to a1 = 0 and b1 = 2
        let g = crate::build_graph(5, &[(0, 1), (2, 3), (4, 0), (4, 2)]).unwrap();
        let r = assert_unmixed(&g, VertexSet::from_slice(&[0, 1]), VertexSet::from_slice(&[2, 3])).unwrap();
        assert_eq!(r, MixedCheck::P5Witness { path: vec![1, 0, 4, 2, 3] });
    }

    #[test]
    fn colourful_examples() {
        assert_eq!(colourful_check(&complete(4), &q(1, 100)).unwrap(), None);
        // C5 \ N[v] is an edge: χ = 2 ≥ 3/2
        assert_eq!(colourful_check(&cycle(5), &q(1, 2)).unwrap(), Some(0));
        assert_eq!(colourful_check(&edgeless(3), &q(1, 1)).unwrap(), Some(0));
        assert!(colourful_check(&cycle(5), &q(0, 1)).is_err());
    }

    #[test]
    fn cover_trivial_cases() {
        let params = P5Params::default();
        // P complete to Q
        let g = complete(4);
        let r = nonneighbour_cover(&g, VertexSet::from_slice(&[0, 1]), VertexSet::from_slice(&[2, 3]), &params).unwrap();
        assert_eq!((r.t, r.chi_t), (VertexSet::EMPTY, 0));
        let star = crate::generators::star(3);
        let r = nonneighbour_cover(&star, VertexSet::from_slice(&[1, 2, 3]), VertexSet::singleton(0), &params).unwrap();
        assert_eq!(r.chi_t, 0);
        // a single miss violates the precondition at desk scale
        let err = nonneighbour_cover(&path(3), VertexSet::singleton(0), VertexSet::from_slice(&[1, 2]), &params);
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn cover_core_on_join_power() {
        // c5_join_power(2): w = 4, χ = 6. P = {0}, Q = the other C5 plus
        // vertex 2 of the first one: 0 misses only 2.
        let g = crate::generators::c5_join_power(2).unwrap();
        let ctx = Ctx::new(&g).unwrap();
        let q_set = VertexSet::from_slice(&[2, 5, 6, 7, 8, 9]);
        let mut trace = Trace::new();
        let err = cover_in(&ctx, VertexSet::singleton(0), q_set, 4, &P5Params::default(), &mut trace);
        // χ(T) = 1 and w²·1 = 16 > χ(Q) = 4: the bound needs χ(Q) ≥ w²,
        // which the per-vertex precondition would have guaranteed
        assert!(matches!(err, Err(Error::ClaimViolation { ref claim, .. }) if claim == "cover.bound"));
        let notes: Vec<_> = trace.entries.iter().map(|e| e.step.as_str()).collect();
        assert_eq!(notes, ["cover.s", "cover.alpha", "cover.eh_size", "cover.bound"]);
        assert!(trace.entries[0].detail.contains("minimal S = [0], z = [2]"));
    }
}
