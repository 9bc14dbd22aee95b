//! Bitset graphs on at most 64 vertices.
//!
//! Every vertex set is a `u64` mask, so neighbourhood intersections over a
//! subset cost one word operation.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

/// Vertex caps: structural operations and exact chromatic number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub structural: usize,
    pub exact_chi: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            structural: 40,
            exact_chi: 20,
        }
    }
}

impl Limits {
    pub fn check_structural(&self, g: &Graph) -> Result<()> {
        if g.n() > self.structural {
            return Err(Error::CapExceeded {
                n: g.n(),
                cap: self.structural,
                what: "structural operations".into(),
            });
        }
        Ok(())
    }

    pub fn check_chi(&self, n: usize) -> Result<()> {
        if n > self.exact_chi {
            return Err(Error::CapExceeded {
                n,
                cap: self.exact_chi,
                what: "exact chromatic number".into(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    #[inline]
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub fn from_slice(vs: &[usize]) -> Self {
        vs.iter().copied().collect()
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    #[inline]
    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1u64 << v)
    }

    #[inline]
    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1u64 << v))
    }

    #[inline]
    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: VertexSet) -> bool {
        self.0 & other.0 == 0
    }

    #[inline]
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl BitOr for VertexSet {
    type Output = VertexSet;
    fn bitor(self, rhs: Self) -> Self {
        VertexSet(self.0 | rhs.0)
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    fn bitand(self, rhs: Self) -> Self {
        VertexSet(self.0 & rhs.0)
    }
}

impl BitXor for VertexSet {
    type Output = VertexSet;
    fn bitxor(self, rhs: Self) -> Self {
        VertexSet(self.0 ^ rhs.0)
    }
}

impl Sub for VertexSet {
    type Output = VertexSet;
    fn sub(self, rhs: Self) -> Self {
        VertexSet(self.0 & !rhs.0)
    }
}

impl Not for VertexSet {
    type Output = VertexSet;
    fn not(self) -> Self {
        VertexSet(!self.0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<usize> = Vec::deserialize(d)?;
        if let Some(&bad) = v.iter().find(|&&x| x >= MAX_VERTICES) {
            return Err(serde::de::Error::custom(format!("vertex {bad} out of range")));
        }
        Ok(VertexSet::from_slice(&v))
    }
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "at most {MAX_VERTICES} vertices");
        Graph { n, adj: vec![0; n] }
    }

    /// Builds a graph from an edge list; duplicate edges collapse.
    pub fn build(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::CapExceeded {
                n,
                cap: MAX_VERTICES,
                what: "bitset representation".into(),
            });
        }
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { v: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u] |= 1u64 << v;
        self.adj[v] |= 1u64 << u;
    }

    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !(1u64 << v);
        self.adj[v] &= !(1u64 << u);
    }

    pub(crate) fn toggle_edge(&mut self, u: usize, v: usize) {
        if self.adjacent(u, v) {
            self.remove_edge(u, v);
        } else {
            self.add_edge(u, v);
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    /// Open neighbourhood N(v).
    #[inline]
    pub fn nbrs(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    /// Closed neighbourhood N[v].
    #[inline]
    pub fn closed_nbrs(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v] | 1u64 << v)
    }

    /// Non-neighbours of `v` inside `s`, excluding `v`.
    #[inline]
    pub fn non_nbrs_in(&self, v: usize, s: VertexSet) -> VertexSet {
        s - self.closed_nbrs(v)
    }

    #[inline]
    pub fn degree_in(&self, v: usize, s: VertexSet) -> usize {
        (self.nbrs(v) & s).len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbrs(v).len()
    }

    /// Vertices with at least one neighbour in `s`.
    pub fn nbrs_of_set(&self, s: VertexSet) -> VertexSet {
        s.iter().fold(VertexSet::EMPTY, |acc, v| acc | self.nbrs(v))
    }

    /// Vertices adjacent to every vertex of `s` (all vertices when `s` is empty).
    pub fn common_nbrs(&self, s: VertexSet) -> VertexSet {
        s.iter()
            .fold(self.vertices(), |acc, v| acc & self.nbrs(v))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in VertexSet(self.adj[u] >> u >> 1 << u << 1).iter() {
                out.push((u, v));
            }
        }
        out
    }

    pub fn is_subset(&self, s: VertexSet) -> bool {
        s.is_subset(self.vertices())
    }

    pub fn check_subset(&self, s: VertexSet) -> Result<()> {
        if self.is_subset(s) {
            Ok(())
        } else {
            Err(Error::NotSubset)
        }
    }

    /// True iff `s` is a clique.
    pub fn is_clique(&self, s: VertexSet) -> bool {
        s.iter().all(|v| (s - self.closed_nbrs(v)).is_empty())
    }

    /// True iff `s` is a stable set.
    pub fn is_stable(&self, s: VertexSet) -> bool {
        s.iter().all(|v| (self.nbrs(v) & s).is_empty())
    }

    pub fn is_complete(&self) -> bool {
        self.is_clique(self.vertices())
    }

    /// Induced subgraph on `s`, with the map from new labels back to `self`.
    pub fn induced(&self, s: VertexSet) -> Result<(Graph, Vec<usize>)> {
        self.check_subset(s)?;
        let map = s.to_vec();
        let mut h = Graph::empty(map.len());
        for (i, &u) in map.iter().enumerate() {
            for (j, &v) in map.iter().enumerate().skip(i + 1) {
                if self.adjacent(u, v) {
                    h.add_edge(i, j);
                }
            }
        }
        Ok((h, map))
    }

    pub fn complement(&self) -> Graph {
        let full = self.vertices().0;
        let adj = (0..self.n)
            .map(|v| full & !self.adj[v] & !(1u64 << v))
            .collect();
        Graph { n: self.n, adj }
    }

    /// Connected components of G[s], ordered by least vertex.
    pub fn components(&self, s: VertexSet) -> Vec<VertexSet> {
        let mut rest = s & self.vertices();
        let mut out = Vec::new();
        while let Some(v) = rest.first() {
            let c = self.component_of(v, rest);
            rest = rest - c;
            out.push(c);
        }
        out
    }

    /// The component of G[s] containing `v` (which must lie in `s`).
    pub fn component_of(&self, v: usize, s: VertexSet) -> VertexSet {
        let mut comp = VertexSet::singleton(v);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let next = self.nbrs_of_set(frontier) & s & !comp;
            comp = comp | next;
            frontier = next;
        }
        comp
    }

    pub fn is_connected(&self, s: VertexSet) -> bool {
        match s.first() {
            None => true,
            Some(v) => self.component_of(v, s) == s,
        }
    }

    pub fn pair_status(&self, a: VertexSet, b: VertexSet) -> Result<PairStatus> {
        self.check_subset(a)?;
        self.check_subset(b)?;
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptySet);
        }
        if !a.is_disjoint(b) {
            return Err(Error::Overlap);
        }
        let mut edge = None;
        let mut non_edge = None;
        for u in a.iter() {
            let hit = self.nbrs(u) & b;
            if edge.is_none() {
                if let Some(v) = hit.first() {
                    edge = Some((u, v));
                }
            }
            if non_edge.is_none() {
                if let Some(v) = (b - hit).first() {
                    non_edge = Some((u, v));
                }
            }
            if edge.is_some() && non_edge.is_some() {
                break;
            }
        }
        Ok(match (edge, non_edge) {
            (Some(edge), Some(non_edge)) => PairStatus::Mixed { edge, non_edge },
            (Some(_), None) => PairStatus::Complete,
            _ => PairStatus::Anticomplete,
        })
    }

    /// True iff every vertex of `a` is adjacent to every vertex of `b`.
    pub fn is_complete_to(&self, a: VertexSet, b: VertexSet) -> bool {
        a.iter().all(|u| b.is_subset(self.nbrs(u)))
    }

    /// True iff there is no edge between `a` and `b`.
    pub fn is_anticomplete_to(&self, a: VertexSet, b: VertexSet) -> bool {
        a.iter().all(|u| (self.nbrs(u) & b).is_empty())
    }

    pub fn is_mixed_on(&self, v: usize, s: VertexSet) -> Result<bool> {
        self.check_subset(s)?;
        if v >= self.n {
            return Err(Error::VertexOutOfRange { v, n: self.n });
        }
        if s.contains(v) {
            return Err(Error::VertexInSet(v));
        }
        Ok(self.mixed(v, s))
    }

    #[inline]
    pub(crate) fn mixed(&self, v: usize, s: VertexSet) -> bool {
        let hit = self.nbrs(v) & s;
        !hit.is_empty() && hit != s
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::io::to_graph6(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        crate::io::from_graph6(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairStatus {
    Complete,
    Anticomplete,
    Mixed {
        edge: (usize, usize),
        non_edge: (usize, usize),
    },
}

pub fn build_graph(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
    Graph::build(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c5() -> Graph {
        Graph::build(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap()
    }

    fn k(n: usize) -> Graph {
        let mut e = vec![];
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v));
            }
        }
        Graph::build(n, &e).unwrap()
    }

    #[test]
    fn build_rejects_bad_input() {
        assert_eq!(
            Graph::build(3, &[(0, 3)]),
            Err(Error::VertexOutOfRange { v: 3, n: 3 })
        );
        assert_eq!(Graph::build(3, &[(1, 1)]), Err(Error::SelfLoop(1)));
        let g = Graph::build(3, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn small_builds() {
        assert_eq!(k(4).edge_count(), 6);
        assert!(k(4).is_complete());
        let p5 = Graph::build(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(p5.edge_count(), 4);
        assert_eq!(c5().degree(0), 2);
    }

    #[test]
    fn induced_examples() {
        let (p3, map) = c5().induced(VertexSet::from_slice(&[0, 1, 2])).unwrap();
        assert_eq!(map, vec![0, 1, 2]);
        assert_eq!(p3.edges(), vec![(0, 1), (1, 2)]);
        let (e, _) = k(4).induced(VertexSet::EMPTY).unwrap();
        assert_eq!(e.n(), 0);
        let (two, _) = c5().induced(VertexSet::from_slice(&[0, 2])).unwrap();
        assert_eq!(two.edge_count(), 0);
        assert_eq!(c5().induced(VertexSet::singleton(7)).err(), Some(Error::NotSubset));
    }

    #[test]
    fn component_examples() {
        assert_eq!(c5().components(c5().vertices()).len(), 1);
        assert_eq!(
            c5().components(VertexSet::from_slice(&[0, 2])),
            vec![VertexSet::singleton(0), VertexSet::singleton(2)]
        );
        let two_k3 = Graph::build(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(two_k3.components(two_k3.vertices()).len(), 2);
    }

    #[test]
    fn pair_status_examples() {
        let g = c5();
        assert_eq!(
            g.pair_status(VertexSet::singleton(0), VertexSet::from_slice(&[2, 3])),
            Ok(PairStatus::Anticomplete)
        );
        assert_eq!(
            k(4).pair_status(VertexSet::singleton(0), VertexSet::from_slice(&[1, 2, 3])),
            Ok(PairStatus::Complete)
        );
        assert_eq!(
            g.pair_status(VertexSet::singleton(0), VertexSet::from_slice(&[1, 2])),
            Ok(PairStatus::Mixed {
                edge: (0, 1),
                non_edge: (0, 2)
            })
        );
        assert_eq!(
            g.pair_status(VertexSet::singleton(0), VertexSet::from_slice(&[0, 2])),
            Err(Error::Overlap)
        );
        assert_eq!(
            g.pair_status(VertexSet::EMPTY, VertexSet::singleton(1)),
            Err(Error::EmptySet)
        );
    }

    #[test]
    fn mixed_examples() {
        assert_eq!(c5().is_mixed_on(0, VertexSet::from_slice(&[1, 2])), Ok(true));
        assert_eq!(k(4).is_mixed_on(0, VertexSet::from_slice(&[1, 2])), Ok(false));
        assert_eq!(c5().is_mixed_on(0, VertexSet::from_slice(&[2, 3])), Ok(false));
        assert_eq!(
            c5().is_mixed_on(0, VertexSet::from_slice(&[0, 3])),
            Err(Error::VertexInSet(0))
        );
    }

    #[test]
    fn complement_of_c5_is_c5() {
        let c = c5().complement();
        assert_eq!(c.edge_count(), 5);
        assert!(c.adjacent(0, 2) && !c.adjacent(0, 1));
    }
}
