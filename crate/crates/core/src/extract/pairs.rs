//! Anticomplete pairs of connected sets and the cutsets between them.

use crate::ctx::Ctx;
use crate::graph::VertexSet;

/// Connected anticomplete `p`, `q` inside a connected domain, with a minimal
/// cutset `s` separating them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutPair {
    pub p: VertexSet,
    pub q: VertexSet,
    pub s: VertexSet,
}

/// Given connected anticomplete `p`, `q` in the connected domain `dom`,
/// climbs to a local maximum of (χ(P)+χ(Q), |P|+|Q|) under two moves: grow
/// P and Q to their components after removing a minimal cutset, or swap Q
/// for a component of dom \ S with larger χ. On return:
/// - χ(P) ≥ χ(Q), and P, Q are components of G[dom \ S];
/// - every vertex of S has a neighbour in P and one in Q;
/// - every other component of G[dom \ S] has χ ≤ χ(Q), so χ(dom \ S) = χ(P).
pub fn maximize_anticomplete_pair(ctx: &Ctx, dom: VertexSet, mut p: VertexSet, mut q: VertexSet) -> CutPair {
    let g = ctx.g;
    debug_assert!(g.is_anticomplete_to(p, q) && !p.is_empty() && !q.is_empty());
    loop {
        if ctx.chi(q) > ctx.chi(p) {
            std::mem::swap(&mut p, &mut q);
        }
        let x = (g.nbrs_of_set(q) & dom) - q;
        let p_grown = g.component_of(p.first().expect("nonempty"), dom - x);
        let s = x & g.nbrs_of_set(p_grown);
        let q_grown = g.component_of(q.first().expect("nonempty"), dom - s);
        if p_grown != p || q_grown != q {
            p = p_grown;
            q = q_grown;
            continue;
        }
        let chi_q = ctx.chi(q);
        let better = g
            .components(dom - s - p - q)
            .into_iter()
            .find(|&r| ctx.chi(r) > chi_q);
        match better {
            Some(r) => q = r,
            None => return CutPair { p, q, s },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{c5_join_power, cycle, path};

    #[test]
    fn path_pair_cut_by_middle() {
        let g = path(5);
        let ctx = Ctx::new(&g).unwrap();
        let r = maximize_anticomplete_pair(&ctx, g.vertices(), VertexSet::singleton(0), VertexSet::singleton(4));
        assert!(g.is_anticomplete_to(r.p, r.q));
        assert_eq!(r.s.len(), 1);
        assert_eq!(r.p | r.q | r.s, g.vertices());
    }

    #[test]
    fn cut_properties_on_c6_and_join() {
        for g in [cycle(6), c5_join_power(2).unwrap().complement()] {
            if !g.is_connected(g.vertices()) {
                continue;
            }
            let ctx = Ctx::new(&g).unwrap();
            let r = maximize_anticomplete_pair(&ctx, g.vertices(), VertexSet::singleton(0), VertexSet::singleton(2));
            assert!(g.is_anticomplete_to(r.p, r.q));
            assert!(g.is_connected(r.p) && g.is_connected(r.q));
            for s in r.s.iter() {
                assert!(!(g.nbrs(s) & r.p).is_empty() && !(g.nbrs(s) & r.q).is_empty());
            }
            assert_eq!(ctx.chi(g.vertices() - r.s), ctx.chi(r.p));
        }
    }
}
