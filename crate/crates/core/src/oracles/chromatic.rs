//! Exact colouring: DSATUR branch-and-bound seeded with a maximum clique.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{Graph, Limits, VertexSet};
use crate::oracles::clique::max_clique;

/// A colouring as an ordered list of colour classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Colouring {
    pub classes: Vec<VertexSet>,
}

impl Colouring {
    pub fn new(classes: Vec<VertexSet>) -> Self {
        Colouring {
            classes: classes.into_iter().filter(|c| !c.is_empty()).collect(),
        }
    }

    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn domain(&self) -> VertexSet {
        self.classes.iter().fold(VertexSet::EMPTY, |a, &c| a | c)
    }

    pub fn colour_of(&self, v: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(v))
    }

    pub fn to_map(&self, n: usize) -> Vec<Option<usize>> {
        (0..n).map(|v| self.colour_of(v)).collect()
    }

    /// Classes nonempty, pairwise disjoint and stable.
    pub fn is_proper(&self, g: &Graph) -> bool {
        let mut seen = VertexSet::EMPTY;
        for &c in &self.classes {
            if c.is_empty() || !c.is_disjoint(seen) || !g.is_subset(c) || !g.is_stable(c) {
                return false;
            }
            seen = seen | c;
        }
        true
    }

    pub fn is_proper_on(&self, g: &Graph, s: VertexSet) -> bool {
        self.is_proper(g) && self.domain() == s
    }

    /// Greedy recolouring in class order; never uses more colours.
    pub fn compact(&self, g: &Graph) -> Colouring {
        let mut out: Vec<VertexSet> = Vec::new();
        for &c in &self.classes {
            for v in c.iter() {
                match out.iter().position(|k| (g.nbrs(v) & *k).is_empty()) {
                    Some(i) => out[i].insert(v),
                    None => out.push(VertexSet::singleton(v)),
                }
            }
        }
        Colouring::new(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiResult {
    pub value: usize,
    pub colouring: Colouring,
    /// `Some(true)` when a search for a `(value-1)`-colouring was run and failed.
    pub obstruction_checked: Option<bool>,
}

pub fn chromatic_number(g: &Graph) -> Result<ChiResult> {
    chromatic_number_with(g, &Limits::default(), false)
}

pub fn chromatic_number_with(g: &Graph, limits: &Limits, check_obstruction: bool) -> Result<ChiResult> {
    limits.check_chi(g.n())?;
    let classes = exact_colouring(g, g.vertices());
    let value = classes.len();
    let obstruction_checked = check_obstruction
        .then(|| value == 0 || k_colouring(g, g.vertices(), value - 1).is_none());
    Ok(ChiResult {
        value,
        colouring: Colouring::new(classes),
        obstruction_checked,
    })
}

/// χ(G[s]) without a cap check; callers enforce caps.
pub fn chi_of(g: &Graph, s: VertexSet) -> usize {
    if s.is_empty() {
        0
    } else if g.is_stable(s) {
        1
    } else {
        exact_colouring(g, s).len()
    }
}

fn pick(g: &Graph, uncol: VertexSet, classes: &[u64]) -> usize {
    let mut best = (0usize, 0usize, usize::MAX);
    let mut choice = usize::MAX;
    for v in uncol.iter() {
        let nb = g.nbrs(v).0;
        let sat = classes.iter().filter(|&&c| c & nb != 0).count();
        let deg = g.degree_in(v, uncol);
        if choice == usize::MAX || (sat, deg) > (best.0, best.1) {
            best = (sat, deg, v);
            choice = v;
        }
    }
    choice
}

fn dsatur_greedy(g: &Graph, s: VertexSet) -> Vec<u64> {
    let mut classes: Vec<u64> = Vec::new();
    let mut uncol = s;
    while !uncol.is_empty() {
        let v = pick(g, uncol, &classes);
        let nb = g.nbrs(v).0;
        match classes.iter().position(|&c| c & nb == 0) {
            Some(i) => classes[i] |= 1 << v,
            None => classes.push(1 << v),
        }
        uncol.remove(v);
    }
    classes
}

/// Minimum colouring of G[s] as colour classes.
pub fn exact_colouring(g: &Graph, s: VertexSet) -> Vec<VertexSet> {
    if s.is_empty() {
        return Vec::new();
    }
    let clique = max_clique(g, s);
    let lb = clique.len();
    let mut best = dsatur_greedy(g, s);
    if best.len() > lb {
        let mut classes: Vec<u64> = clique.iter().map(|v| 1u64 << v).collect();
        search(g, s - clique, &mut classes, &mut best, lb);
    }
    best.into_iter().map(VertexSet).collect()
}

fn search(g: &Graph, uncol: VertexSet, classes: &mut Vec<u64>, best: &mut Vec<u64>, lb: usize) -> bool {
    if uncol.is_empty() {
        if classes.len() < best.len() {
            *best = classes.clone();
        }
        return best.len() == lb;
    }
    if classes.len() >= best.len() {
        return false;
    }
    let v = pick(g, uncol, classes);
    let nb = g.nbrs(v).0;
    let rest = uncol.without(v);
    for i in 0..classes.len() {
        if classes[i] & nb == 0 {
            classes[i] |= 1 << v;
            let done = search(g, rest, classes, best, lb);
            classes[i] &= !(1 << v);
            if done {
                return true;
            }
        }
    }
    if classes.len() + 1 < best.len() {
        classes.push(1 << v);
        let done = search(g, rest, classes, best, lb);
        classes.pop();
        if done {
            return true;
        }
    }
    false
}

/// A `k`-colouring of G[s] by plain backtracking, if one exists.
pub fn k_colouring(g: &Graph, s: VertexSet, k: usize) -> Option<Vec<VertexSet>> {
    fn go(g: &Graph, order: &[usize], i: usize, classes: &mut Vec<u64>, k: usize) -> bool {
        let Some(&v) = order.get(i) else {
            return true;
        };
        let nb = g.nbrs(v).0;
        for c in 0..classes.len() {
            if classes[c] & nb == 0 {
                classes[c] |= 1 << v;
                if go(g, order, i + 1, classes, k) {
                    return true;
                }
                classes[c] &= !(1 << v);
            }
        }
        if classes.len() < k {
            classes.push(1 << v);
            if go(g, order, i + 1, classes, k) {
                return true;
            }
            classes.pop();
        }
        false
    }
    let order = s.to_vec();
    let mut classes = Vec::new();
    go(g, &order, 0, &mut classes, k).then(|| classes.into_iter().map(VertexSet).collect())
}

/// χ(G[s]) by dynamic programming over subsets; an independent reference
/// implementation, practical up to about 16 vertices.
pub fn chi_subset_dp(g: &Graph, s: VertexSet) -> usize {
    let verts = s.to_vec();
    let m = verts.len();
    let full = (1usize << m) - 1;
    let mut local_adj = vec![0usize; m];
    for i in 0..m {
        for j in 0..m {
            if g.adjacent(verts[i], verts[j]) {
                local_adj[i] |= 1 << j;
            }
        }
    }
    let mut stable = vec![false; full + 1];
    stable[0] = true;
    for mask in 1..=full {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        stable[mask] = stable[rest] && local_adj[low] & rest == 0;
    }
    let mut dp = vec![usize::MAX; full + 1];
    dp[0] = 0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        // Enumerate stable sets containing the lowest vertex of `mask`.
        let mut sub = rest;
        loop {
            let cand = sub | low;
            if stable[cand] && dp[mask ^ cand] != usize::MAX {
                dp[mask] = dp[mask].min(dp[mask ^ cand] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    dp[full]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::from_graph6;

    fn cycle(n: usize) -> Graph {
        Graph::build(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn small_values() {
        let k4 = from_graph6("C~").unwrap();
        assert_eq!(chromatic_number(&k4).unwrap().value, 4);
        assert_eq!(chromatic_number(&cycle(5)).unwrap().value, 3);
        assert_eq!(chromatic_number(&cycle(6)).unwrap().value, 2);
        assert_eq!(chromatic_number(&Graph::empty(0)).unwrap().value, 0);
    }

    #[test]
    fn petersen_cross_checked() {
        let p = from_graph6("IheA@GUAo").unwrap();
        let r = chromatic_number_with(&p, &Limits::default(), true).unwrap();
        assert_eq!(r.value, 3);
        assert_eq!(r.obstruction_checked, Some(true));
        assert!(r.colouring.is_proper_on(&p, p.vertices()));
        assert_eq!(chi_subset_dp(&p, p.vertices()), 3);
        assert!(k_colouring(&p, p.vertices(), 2).is_none());
    }

    #[test]
    fn cap_is_enforced() {
        assert!(chromatic_number(&Graph::empty(21)).is_err());
    }

    #[test]
    fn compaction_never_grows() {
        let c5 = cycle(5);
        let wasteful = Colouring::new((0..5).map(VertexSet::singleton).collect());
        let c = wasteful.compact(&c5);
        assert!(c.is_proper(&c5));
        assert_eq!(c.count(), 3);
    }
}
