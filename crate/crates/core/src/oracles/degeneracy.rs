use crate::graph::{Graph, VertexSet};

/// Degeneracy of G[s] with a smallest-last elimination order: each vertex
/// has at most `d` neighbours later in the order.
pub fn degeneracy_of(g: &Graph, s: VertexSet) -> (usize, Vec<usize>) {
    let mut rest = s;
    let mut d = 0;
    let mut order = Vec::with_capacity(s.len());
    while !rest.is_empty() {
        let v = rest
            .iter()
            .min_by_key(|&v| (g.degree_in(v, rest), v))
            .expect("nonempty");
        d = d.max(g.degree_in(v, rest));
        order.push(v);
        rest.remove(v);
    }
    (d, order)
}

pub fn degeneracy(g: &Graph) -> (usize, Vec<usize>) {
    degeneracy_of(g, g.vertices())
}

/// Greedy colouring along the reverse of a degeneracy order; uses at most
/// `d + 1` colours.
pub fn degeneracy_colouring(g: &Graph, s: VertexSet) -> Vec<VertexSet> {
    let (_, order) = degeneracy_of(g, s);
    let mut classes: Vec<VertexSet> = Vec::new();
    for &v in order.iter().rev() {
        match classes.iter().position(|c| (g.nbrs(v) & *c).is_empty()) {
            Some(i) => classes[i].insert(v),
            None => classes.push(VertexSet::singleton(v)),
        }
    }
    classes
}
