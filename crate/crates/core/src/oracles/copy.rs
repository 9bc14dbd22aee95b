//! Induced subgraph search by backtracking with degree pruning.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

struct Search<'a> {
    h: &'a Graph,
    g: &'a Graph,
    order: Vec<usize>,
    base: Vec<VertexSet>,
    phi: Vec<usize>,
}

impl Search<'_> {
    fn candidates(&self, depth: usize, used: VertexSet) -> VertexSet {
        let x = self.order[depth];
        let mut c = self.base[x] - used;
        for &y in &self.order[..depth] {
            let gy = self.phi[y];
            if self.h.adjacent(x, y) {
                c = c & self.g.nbrs(gy);
            } else {
                c = c - self.g.nbrs(gy);
            }
        }
        c
    }

    fn run(&mut self, depth: usize, used: VertexSet, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if depth == self.order.len() {
            return visit(&self.phi);
        }
        let x = self.order[depth];
        for v in self.candidates(depth, used).iter() {
            self.phi[x] = v;
            if self.run(depth + 1, used.with(v), visit) {
                return true;
            }
        }
        false
    }
}

fn setup<'a>(h: &'a Graph, g: &'a Graph, domain: VertexSet, anchors: Option<&[VertexSet]>) -> Result<Search<'a>> {
    let k = h.n();
    let domain = domain & g.vertices();
    let mut base = vec![domain; k];
    if let Some(a) = anchors {
        if a.len() != k {
            return Err(Error::Precondition(format!(
                "{} anchor sets for a pattern on {k} vertices",
                a.len()
            )));
        }
        let mut seen = VertexSet::EMPTY;
        for (x, &s) in a.iter().enumerate() {
            if !s.is_disjoint(seen) {
                return Err(Error::Overlap);
            }
            seen = seen | s;
            base[x] = base[x] & s;
        }
    }
    // Degree pruning inside the domain.
    for (x, b) in base.iter_mut().enumerate() {
        let dh = h.degree(x);
        let nh = k - 1 - dh;
        *b = b
            .iter()
            .filter(|&v| {
                let d = g.degree_in(v, domain);
                d >= dh && domain.len() - 1 - d >= nh
            })
            .collect();
    }
    // Most constrained first, then grow along pattern edges.
    let mut order = Vec::with_capacity(k);
    let mut placed = VertexSet::EMPTY;
    while order.len() < k {
        let x = (0..k)
            .filter(|&x| !placed.contains(x))
            .min_by_key(|&x| {
                let linked = (h.nbrs(x) & placed).len();
                (usize::MAX - linked, base[x].len(), x)
            })
            .expect("unplaced vertex");
        order.push(x);
        placed.insert(x);
    }
    Ok(Search {
        h,
        g,
        order,
        base,
        phi: vec![usize::MAX; k],
    })
}

/// An induced copy of `h` in G[domain]: `phi[x]` is the image of pattern vertex `x`.
pub fn find_induced_copy_in(
    h: &Graph,
    g: &Graph,
    domain: VertexSet,
    anchors: Option<&[VertexSet]>,
) -> Result<Option<Vec<usize>>> {
    let mut s = setup(h, g, domain, anchors)?;
    let mut found = None;
    s.run(0, VertexSet::EMPTY, &mut |phi| {
        found = Some(phi.to_vec());
        true
    });
    Ok(found)
}

pub fn find_induced_copy(h: &Graph, g: &Graph, anchors: Option<&[VertexSet]>) -> Result<Option<Vec<usize>>> {
    find_induced_copy_in(h, g, g.vertices(), anchors)
}

pub fn is_h_free(g: &Graph, h: &Graph) -> bool {
    find_induced_copy(h, g, None)
        .expect("no anchors, no error")
        .is_none()
}

pub fn is_h_free_in(g: &Graph, s: VertexSet, h: &Graph) -> bool {
    find_induced_copy_in(h, g, s, None)
        .expect("no anchors, no error")
        .is_none()
}

/// Number of injective maps that are induced copies of `h` in `g`.
pub fn count_induced_copies(h: &Graph, g: &Graph) -> usize {
    let mut s = setup(h, g, g.vertices(), None).expect("no anchors, no error");
    let mut count = 0;
    s.run(0, VertexSet::EMPTY, &mut |_| {
        count += 1;
        false
    });
    count
}

/// True iff `phi` maps `h` injectively onto an induced copy in `g`.
pub fn is_induced_copy(h: &Graph, g: &Graph, phi: &[usize]) -> bool {
    if phi.len() != h.n() || phi.iter().any(|&v| v >= g.n()) {
        return false;
    }
    let image: VertexSet = phi.iter().copied().collect();
    if image.len() != phi.len() {
        return false;
    }
    (0..h.n()).all(|x| (x + 1..h.n()).all(|y| h.adjacent(x, y) == g.adjacent(phi[x], phi[y])))
}

/// Reference oracle: tries every ordered `|H|`-tuple of distinct vertices.
pub fn naive_count_induced_copies(h: &Graph, g: &Graph) -> usize {
    fn go(h: &Graph, g: &Graph, phi: &mut Vec<usize>, count: &mut usize) {
        if phi.len() == h.n() {
            if is_induced_copy(h, g, phi) {
                *count += 1;
            }
            return;
        }
        for v in 0..g.n() {
            if !phi.contains(&v) {
                phi.push(v);
                go(h, g, phi, count);
                phi.pop();
            }
        }
    }
    let mut count = 0;
    go(h, g, &mut Vec::new(), &mut count);
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::build(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>()).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::build(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(find_induced_copy(&path(5), &cycle(5), None).unwrap(), None);
        let phi = find_induced_copy(&path(5), &cycle(6), None).unwrap().unwrap();
        assert!(is_induced_copy(&path(5), &cycle(6), &phi));
        // Six copies up to reversal: twelve injective maps.
        assert_eq!(count_induced_copies(&path(5), &cycle(6)), 12);
        assert_eq!(naive_count_induced_copies(&path(5), &cycle(6)), 12);
        let k3 = cycle(3);
        assert_eq!(find_induced_copy(&k3, &k3, None).unwrap(), Some(vec![0, 1, 2]));
    }

    #[test]
    fn freeness() {
        assert!(is_h_free(&cycle(5), &path(5)));
        let k33 = Graph::build(
            6,
            &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)],
        )
        .unwrap();
        assert!(is_h_free(&k33, &path(4)));
        assert!(!is_h_free(&path(5), &path(5)));
    }

    #[test]
    fn anchors() {
        let c6 = cycle(6);
        let anchors = [
            VertexSet::singleton(3),
            VertexSet::from_slice(&[2, 4]),
            VertexSet::from_slice(&[0, 1, 5]),
        ];
        let phi = find_induced_copy(&path(3), &c6, Some(&anchors)).unwrap().unwrap();
        assert_eq!(phi[0], 3);
        assert!(is_induced_copy(&path(3), &c6, &phi));
        let overlap = [VertexSet::singleton(0), VertexSet::singleton(0), VertexSet::singleton(1)];
        assert_eq!(find_induced_copy(&path(3), &c6, Some(&overlap)), Err(Error::Overlap));
    }
}
