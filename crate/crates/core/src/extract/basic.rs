//! Class-generic constructions: long induced paths from high-χ graphs,
//! minimum-degree cores, controlled subgraphs and vivid blockades.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::ctx::Ctx;
use crate::error::{precondition, Error, Result};
use crate::extract::outcome::{Blockade, VividCertificate, VividMargin};
use crate::generators::path;
use crate::graph::{Graph, VertexSet};
use crate::oracles::chromatic::{exact_colouring, Colouring};
use crate::oracles::copy::find_induced_copy;
use crate::rational::{qu, Q};
use crate::trace::Trace;

fn require_pk_free(g: &Graph, k: usize) -> Result<()> {
    if let Some(copy) = find_induced_copy(&path(k), g, None)? {
        return Err(Error::ForbiddenCopy {
            what: format!("P{k}"),
            copy,
        });
    }
    Ok(())
}

/// A vertex whose neighbourhood carries at least a 1/(k-2) share of χ(G).
pub fn gyarfas_vertex(g: &Graph, k: usize) -> Result<usize> {
    if k < 4 {
        return Err(precondition("k must be at least 4"));
    }
    let ctx = Ctx::new(g)?;
    require_pk_free(g, k)?;
    let chi = ctx.chi(g.vertices());
    if chi < 2 {
        return Err(precondition("χ(G) must be at least 2"));
    }
    gyarfas_vertex_in(&ctx, g.vertices(), k)
}

/// Scan of G[dom] for the high-χ neighbourhood; on failure the path-growing
/// procedure returns an induced P_k as the witness.
pub(crate) fn gyarfas_vertex_in(ctx: &Ctx, dom: VertexSet, k: usize) -> Result<usize> {
    let g = ctx.g;
    let chi = ctx.chi(dom);
    for v in dom.iter() {
        if (k - 2) * ctx.chi(g.nbrs(v) & dom) >= chi {
            return Ok(v);
        }
    }
    let copy = grow_gyarfas_path(ctx, dom, k)?;
    Err(Error::ForbiddenCopy {
        what: format!("P{k}"),
        copy,
    })
}

/// Grows an induced path p_1..p_m while keeping a connected set D with
/// p_1..p_{m-1} anticomplete to D and p_m attached to D. Succeeds whenever
/// every neighbourhood in G[dom] has χ below χ(dom)/(k-2).
pub fn grow_gyarfas_path(ctx: &Ctx, dom: VertexSet, k: usize) -> Result<Vec<usize>> {
    let g = ctx.g;
    let mut trace = Trace::new();
    let fail = |trace: Trace, what: &str| Error::ClaimViolation {
        claim: "gyarfas-path".into(),
        detail: what.into(),
        trace: trace.entries,
    };
    let c0 = ctx.max_chi_component(dom);
    let Some(v1) = c0.first() else {
        return Err(fail(trace, "empty domain"));
    };
    let mut d = ctx.max_chi_component(c0 - g.closed_nbrs(v1));
    trace.note("start", format!("v1={v1} chi(D)={}", ctx.chi(d)));
    let Some(v2) = (g.nbrs(v1) & c0).iter().find(|&x| !(g.nbrs(x) & d).is_empty()) else {
        return Err(fail(trace, "no neighbour of v1 attaches to D"));
    };
    let mut walk = vec![v1, v2];
    while walk.len() < k {
        let last = *walk.last().expect("nonempty");
        let attach = g.nbrs(last) & d;
        if walk.len() == k - 1 {
            match attach.first() {
                Some(y) => walk.push(y),
                None => return Err(fail(trace, "last vertex lost its attachment")),
            }
            break;
        }
        let next = ctx.max_chi_component(d - g.nbrs(last));
        let Some(y) = attach.iter().find(|&y| !(g.nbrs(y) & next).is_empty()) else {
            return Err(fail(trace, "no attachment reaches the next component"));
        };
        trace.note("extend", format!("y={y} chi(D')={}", ctx.chi(next)));
        walk.push(y);
        d = next;
    }
    Ok(walk)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GyarfasColouring {
    pub colouring: Colouring,
    pub raw_count: usize,
    /// (k-2)^(ω-1), as a decimal integer.
    pub bound: String,
    /// v_1, v_2, ...: v_{i+1} is a high-χ vertex inside N(v_1) ∩ ... ∩ N(v_i).
    pub chain: Vec<usize>,
}

/// A proper colouring of a P_k-free graph with at most (k-2)^(ω-1) colours.
///
/// The colouring comes from the exact engine; the bound is certified by the
/// chain of nested high-χ neighbourhoods, each losing at most a factor k-2.
pub fn gyarfas_colour_bound(g: &Graph, k: usize) -> Result<GyarfasColouring> {
    if k < 4 {
        return Err(precondition("k must be at least 4"));
    }
    let ctx = Ctx::new(g)?;
    require_pk_free(g, k)?;
    let w = ctx.omega(g.vertices());
    let bound = if w == 0 {
        BigUint::from(0u32)
    } else {
        BigUint::from(k - 2).pow(w as u32 - 1)
    };
    let mut chain = Vec::new();
    let mut cur = g.vertices();
    while ctx.chi(cur) >= 2 {
        let v = gyarfas_vertex_in(&ctx, cur, k)?;
        chain.push(v);
        cur = g.nbrs(v) & cur;
    }
    let raw = Colouring::new(exact_colouring(g, g.vertices()));
    let raw_count = raw.count();
    Ok(GyarfasColouring {
        colouring: raw.compact(g),
        raw_count,
        bound: bound.to_string(),
        chain,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Core {
    pub f: VertexSet,
    /// Deleted vertices, in deletion order.
    pub removed: Vec<usize>,
}

/// Deletes vertices of degree below `p` until none remain.
pub fn min_degree_core(g: &Graph, p: usize) -> Result<Core> {
    let ctx = Ctx::new(g)?;
    if ctx.chi(g.vertices()) <= p {
        return Err(precondition(format!("χ(G) must exceed p = {p}")));
    }
    Ok(min_degree_core_in(g, g.vertices(), p))
}

pub(crate) fn min_degree_core_in(g: &Graph, dom: VertexSet, p: usize) -> Core {
    let mut f = dom;
    let mut removed = Vec::new();
    while let Some(v) = f.iter().find(|&v| g.degree_in(v, f) < p) {
        f.remove(v);
        removed.push(v);
    }
    Core { f, removed }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Controlled {
    pub j: VertexSet,
    /// The clique S: each vertex was the centre of one descent step.
    pub trace: Vec<usize>,
}

/// A connected induced subgraph J with χ(N_J(v)) < (1 - q^-2)χ(J) for all v.
pub fn controlled_subgraph(g: &Graph, q: usize) -> Result<Controlled> {
    if q < 2 {
        return Err(precondition("q must be at least 2"));
    }
    if g.n() == 0 {
        return Err(Error::EmptySet);
    }
    let ctx = Ctx::new(g)?;
    Ok(controlled_subgraph_in(&ctx, g.vertices(), q))
}

pub(crate) fn controlled_subgraph_in(ctx: &Ctx, dom: VertexSet, q: usize) -> Controlled {
    let g = ctx.g;
    let q2 = q * q;
    let mut f = dom;
    let mut trace = Vec::new();
    loop {
        let chi_f = ctx.chi(f);
        let step = f
            .iter()
            .find(|&v| q2 * ctx.chi(g.nbrs(v) & f) >= (q2 - 1) * chi_f);
        match step {
            Some(v) => {
                trace.push(v);
                f = g.nbrs(v) & f;
            }
            None => break,
        }
    }
    Controlled {
        j: ctx.max_chi_component(f),
        trace,
    }
}

/// Whether G[s] is q-controlled: connected and every neighbourhood has
/// χ(N(v) ∩ s)·q² < (q² - 1)·χ(s).
pub fn is_controlled(ctx: &Ctx, s: VertexSet, q: usize) -> bool {
    let g = ctx.g;
    let q2 = q * q;
    let chi = ctx.chi(s);
    !s.is_empty()
        && g.is_connected(s)
        && s.iter().all(|v| q2 * ctx.chi(g.nbrs(v) & s) < (q2 - 1) * chi)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VividOutcome {
    /// One vertex per block, `clique[i]` in block i.
    Clique {
        clique: Vec<usize>,
        certificate: VividCertificate,
    },
    NotVivid {
        i: usize,
        j: usize,
        v: usize,
        margin: usize,
        #[serde(with = "crate::rational::serde_q")]
        threshold: Q,
    },
    /// Vivid, but the greedy found no vertex of `block` complete to the
    /// later choices; only possible when ε exceeds 1/ω.
    Stuck { block: usize, partial: Vec<usize> },
}

fn check_blockade(g: &Graph, blocks: &[VertexSet]) -> Result<()> {
    for &b in blocks {
        g.check_subset(b)?;
        if b.is_empty() {
            return Err(Error::EmptySet);
        }
    }
    if !(Blockade {
        blocks: blocks.to_vec(),
    })
    .is_disjoint()
    {
        return Err(Error::Overlap);
    }
    Ok(())
}

/// Checks ε-vividness and, when it holds, builds a transversal clique
/// from the last block backwards.
pub fn vivid_clique(g: &Graph, blocks: &[VertexSet], eps: &Q) -> Result<VividOutcome> {
    check_blockade(g, blocks)?;
    let ctx = Ctx::new(g)?;
    Ok(vivid_clique_in(&ctx, blocks, eps))
}

pub(crate) fn vivid_clique_in(ctx: &Ctx, blocks: &[VertexSet], eps: &Q) -> VividOutcome {
    let g = ctx.g;
    let mut margins = Vec::new();
    for (i, &bi) in blocks.iter().enumerate() {
        let threshold = eps * qu(ctx.chi(bi));
        for (j, &bj) in blocks.iter().enumerate().skip(i + 1) {
            for v in bj.iter() {
                let margin = ctx.chi(bi - g.nbrs(v));
                if qu(margin) >= threshold {
                    return VividOutcome::NotVivid {
                        i,
                        j,
                        v,
                        margin,
                        threshold,
                    };
                }
                margins.push(VividMargin {
                    i,
                    j,
                    v,
                    margin,
                    threshold: threshold.clone(),
                });
            }
        }
    }
    let mut chosen = VertexSet::EMPTY;
    let mut picks = vec![usize::MAX; blocks.len()];
    for (j, &b) in blocks.iter().enumerate().rev() {
        match (b & g.common_nbrs(chosen)).first() {
            Some(v) => {
                picks[j] = v;
                chosen.insert(v);
            }
            None => {
                return VividOutcome::Stuck {
                    block: j,
                    partial: picks.into_iter().filter(|&v| v != usize::MAX).collect(),
                }
            }
        }
    }
    VividOutcome::Clique {
        clique: picks,
        certificate: VividCertificate {
            blockade: Blockade {
                blocks: blocks.to_vec(),
            },
            eps: eps.clone(),
            margins,
        },
    }
}

/// `base^e` as a big integer.
pub(crate) fn big_pow(base: usize, e: usize) -> BigUint {
    let mut r = BigUint::one();
    for _ in 0..e {
        r *= base;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, complete_multipartite, cycle, edgeless, join, star};
    use crate::rational::q;

    fn c5c5() -> Graph {
        join(&cycle(5), &cycle(5)).unwrap()
    }

    #[test]
    fn gyarfas_examples() {
        let g = cycle(5);
        let v = gyarfas_vertex(&g, 5).unwrap();
        assert!(3 * crate::oracles::chi_of(&g, g.nbrs(v)) >= 3);
        assert!(gyarfas_vertex(&complete(4), 5).is_ok());
        let g = c5c5();
        let v = gyarfas_vertex(&g, 5).unwrap();
        assert_eq!(crate::oracles::chi_of(&g, g.nbrs(v)), 4);
    }

    #[test]
    fn gyarfas_rejects_paths() {
        let err = gyarfas_vertex(&path(6), 5).unwrap_err();
        assert!(matches!(err, Error::ForbiddenCopy { .. }));
    }

    #[test]
    fn path_growth_finds_induced_path_in_triangle_free_high_chi() {
        // Mycielski graph of C5: triangle-free, χ = 4.
        let mut edges = cycle(5).edges();
        for (u, v) in cycle(5).edges() {
            edges.push((u, v + 5));
            edges.push((v, u + 5));
        }
        for i in 5..10 {
            edges.push((i, 10));
        }
        let g = Graph::build(11, &edges).unwrap();
        let ctx = Ctx::new(&g).unwrap();
        assert_eq!(ctx.chi(g.vertices()), 4);
        let walk = grow_gyarfas_path(&ctx, g.vertices(), 5).unwrap();
        assert!(crate::oracles::is_induced_copy(&path(5), &g, &walk));
    }

    #[test]
    fn gyarfas_colouring_examples() {
        let r = gyarfas_colour_bound(&cycle(5), 5).unwrap();
        assert!(r.colouring.is_proper(&cycle(5)) && r.colouring.count() <= 3);
        assert_eq!(gyarfas_colour_bound(&edgeless(6), 5).unwrap().colouring.count(), 1);
        let g = c5c5();
        let r = gyarfas_colour_bound(&g, 5).unwrap();
        assert_eq!(r.bound, "27");
        assert_eq!(r.colouring.count(), 6);
    }

    #[test]
    fn min_degree_core_examples() {
        assert_eq!(min_degree_core(&cycle(5), 2).unwrap().f, cycle(5).vertices());
        let s = star(5);
        assert_eq!(min_degree_core(&s, 1).unwrap().f, s.vertices());
        let mut edges = cycle(5).edges();
        edges.push((0, 5));
        let g = Graph::build(6, &edges).unwrap();
        let core = min_degree_core(&g, 2).unwrap();
        assert_eq!(core.f, VertexSet::full(5));
        assert_eq!(core.removed, vec![5]);
        assert!(min_degree_core(&cycle(5), 3).is_err());
    }

    #[test]
    fn controlled_examples() {
        let c = controlled_subgraph(&cycle(5), 2).unwrap();
        assert_eq!(c.j, cycle(5).vertices());
        assert!(c.trace.is_empty());
        let k4 = complete(4);
        let c = controlled_subgraph(&k4, 4).unwrap();
        assert_eq!(c.j, k4.vertices());
        assert!(controlled_subgraph(&Graph::empty(0), 2).is_err());
        let g = c5c5();
        let c = controlled_subgraph(&g, 4).unwrap();
        let ctx = Ctx::new(&g).unwrap();
        assert!(is_controlled(&ctx, c.j, 4));
    }

    #[test]
    fn vivid_examples() {
        let g = complete_multipartite(&[2, 2, 2]).unwrap();
        let blocks = [VertexSet::from_slice(&[0, 1]), VertexSet::from_slice(&[2, 3]), VertexSet::from_slice(&[4, 5])];
        match vivid_clique(&g, &blocks, &q(1, 3)).unwrap() {
            VividOutcome::Clique { clique, .. } => {
                assert_eq!(clique.len(), 3);
                assert!(g.is_clique(VertexSet::from_slice(&clique)));
            }
            other => panic!("{other:?}"),
        }
        match vivid_clique(&cycle(5), &[VertexSet::singleton(0)], &q(1, 2)).unwrap() {
            VividOutcome::Clique { clique, .. } => assert_eq!(clique, vec![0]),
            other => panic!("{other:?}"),
        }
        let r = vivid_clique(&cycle(5), &[VertexSet::singleton(0), VertexSet::singleton(2)], &q(1, 2)).unwrap();
        assert!(matches!(r, VividOutcome::NotVivid { i: 0, j: 1, v: 2, margin: 1, .. }));
    }
}
