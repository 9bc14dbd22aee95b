//! Maximum cliques and stable sets by ordered branch and bound.

use crate::graph::{Graph, VertexSet};

fn above(v: usize) -> VertexSet {
    if v >= 63 {
        VertexSet::EMPTY
    } else {
        VertexSet(u64::MAX << (v + 1))
    }
}

/// Greedy colouring size of G[s]; an upper bound on ω(G[s]).
fn colour_bound(g: &Graph, s: VertexSet) -> usize {
    let mut rest = s;
    let mut k = 0;
    while !rest.is_empty() {
        let mut avail = rest;
        while let Some(v) = avail.first() {
            rest.remove(v);
            avail = avail - g.closed_nbrs(v);
        }
        k += 1;
    }
    k
}

fn expand(g: &Graph, current: VertexSet, cand: VertexSet, best: &mut VertexSet) {
    if current.len() > best.len() {
        *best = current;
    }
    if current.len() + cand.len() <= best.len()
        || current.len() + colour_bound(g, cand) <= best.len()
    {
        return;
    }
    for v in cand.iter() {
        let rest = cand & above(v).with(v);
        if current.len() + rest.len() <= best.len() {
            break;
        }
        expand(g, current.with(v), cand & g.nbrs(v) & above(v), best);
    }
}

/// The lexicographically least maximum clique of G[s].
pub fn max_clique(g: &Graph, s: VertexSet) -> VertexSet {
    let mut best = VertexSet::EMPTY;
    expand(g, VertexSet::EMPTY, s, &mut best);
    best
}

pub fn omega_of(g: &Graph, s: VertexSet) -> usize {
    max_clique(g, s).len()
}

/// The lexicographically least maximum stable set of G[s].
pub fn max_stable_set(g: &Graph, s: VertexSet) -> VertexSet {
    max_clique(&g.complement(), s)
}

pub fn alpha_of(g: &Graph, s: VertexSet) -> usize {
    max_stable_set(g, s).len()
}

/// ω(G) with a witness clique.
pub fn clique_number(g: &Graph) -> (usize, VertexSet) {
    let c = max_clique(g, g.vertices());
    (c.len(), c)
}

/// α(G) with a witness stable set.
pub fn stability_number(g: &Graph) -> (usize, VertexSet) {
    let s = max_stable_set(g, g.vertices());
    (s.len(), s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let c5 = Graph::build(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(clique_number(&c5), (2, VertexSet::from_slice(&[0, 1])));
        assert_eq!(stability_number(&c5), (2, VertexSet::from_slice(&[0, 2])));
        assert_eq!(stability_number(&Graph::empty(7)).0, 7);
        let k4 = crate::io::from_graph6("C~").unwrap();
        assert_eq!(clique_number(&k4).0, 4);
        assert_eq!(stability_number(&k4).0, 1);
        assert_eq!(clique_number(&Graph::empty(0)).0, 0);
    }
}
