//! Seeded random graphs, hereditary-class samplers and named families.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::graph::{Graph, Limits, VertexSet};
use crate::oracles::copy::find_induced_copy;
use crate::rational::{self, Q};

/// Mixes a base seed with a sample index (splitmix64 finalizer).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exact Bernoulli trial with rational success probability `num/den`.
fn bernoulli(rng: &mut ChaCha8Rng, num: u64, den: u64) -> bool {
    num == den || (num > 0 && rng.random_range(0..den) < num)
}

fn prob_parts(p: &Q) -> Result<(u64, u64)> {
    if p.is_negative() || p > &Q::one() {
        return Err(precondition(format!("edge probability {} outside [0,1]", rational::fmt_q(p))));
    }
    let num = p.numer().to_u64();
    let den = p.denom().to_u64();
    match (num, den) {
        (Some(n), Some(d)) => Ok((n, d)),
        _ => Err(precondition("edge probability denominator exceeds 64 bits")),
    }
}

fn gnp_with(n: usize, num: u64, den: u64, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if bernoulli(rng, num, den) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Erdős–Rényi G(n, p), pairs visited in lexicographic order.
pub fn gnp(n: usize, p: &Q, seed: u64) -> Result<Graph> {
    let (num, den) = prob_parts(p)?;
    check_size(n)?;
    Ok(gnp_with(n, num, den, &mut rng_for(seed)))
}

fn check_size(n: usize) -> Result<()> {
    let cap = Limits::default().structural;
    if n > cap {
        return Err(Error::CapExceeded {
            n,
            cap,
            what: "generators".into(),
        });
    }
    Ok(())
}

/// An H-free graph: sample G(n, p), then while an induced copy of `h` exists
/// toggle a uniformly chosen vertex pair of that copy.
pub fn random_h_free(n: usize, p: &Q, h: &Graph, seed: u64, max_rounds: usize) -> Result<Graph> {
    if h.n() == 0 {
        return Err(precondition("forbidden graph must be nonempty"));
    }
    let (num, den) = prob_parts(p)?;
    check_size(n)?;
    let mut rng = rng_for(seed);
    let mut g = gnp_with(n, num, den, &mut rng);
    let pairs: Vec<(usize, usize)> = (0..h.n())
        .flat_map(|x| (x + 1..h.n()).map(move |y| (x, y)))
        .collect();
    for _ in 0..=max_rounds {
        let Some(phi) = find_induced_copy(h, &g, None)? else {
            debug_assert!(crate::oracles::is_h_free(&g, h));
            return Ok(g);
        };
        if pairs.is_empty() {
            return Err(precondition("a one-vertex pattern is only avoided by the empty graph"));
        }
        let (x, y) = pairs[rng.random_range(0..pairs.len())];
        g.toggle_edge(phi[x], phi[y]);
    }
    Err(Error::Exhausted(format!("no H-free graph after {max_rounds} repair rounds")))
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::build(n, &edges).expect("valid path")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycles need at least 3 vertices");
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::build(n, &edges).expect("valid cycle")
}

pub fn complete(n: usize) -> Graph {
    Graph::empty(n).complement()
}

pub fn edgeless(n: usize) -> Graph {
    Graph::empty(n)
}

pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    Graph::build(leaves + 1, &edges).expect("valid star")
}

/// (k,t)-broom: a path p_0..p_{k-1} with `t` pendant leaves on p_{k-1};
/// equivalently P_{k+1} with one end leaf blown up to `t` stable vertices.
pub fn broom(k: usize, t: usize) -> Result<Graph> {
    if k == 0 || t == 0 {
        return Err(precondition("broom needs k >= 1 and t >= 1"));
    }
    let mut edges: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
    edges.extend((0..t).map(|j| (k - 1, k + j)));
    Graph::build(k + t, &edges)
}

/// P4 with its two leaves blown up to stable sets of sizes `a` and `b`.
pub fn double_star(a: usize, b: usize) -> Result<Graph> {
    if a == 0 || b == 0 {
        return Err(precondition("double star needs a, b >= 1"));
    }
    let (x, y) = (0, 1);
    let mut edges = vec![(x, y)];
    edges.extend((0..a).map(|i| (x, 2 + i)));
    edges.extend((0..b).map(|j| (y, 2 + a + j)));
    Graph::build(a + b + 2, &edges)
}

pub fn complete_multipartite(parts: &[usize]) -> Result<Graph> {
    let n: usize = parts.iter().sum();
    check_size(n)?;
    let mut g = Graph::empty(n);
    let mut start = 0;
    let mut label = vec![0; n];
    for (i, &p) in parts.iter().enumerate() {
        label[start..start + p].fill(i);
        start += p;
    }
    for u in 0..n {
        for v in u + 1..n {
            if label[u] != label[v] {
                g.add_edge(u, v);
            }
        }
    }
    Ok(g)
}

pub fn disjoint_union(a: &Graph, b: &Graph) -> Result<Graph> {
    combine(a, b, false)
}

pub fn join(a: &Graph, b: &Graph) -> Result<Graph> {
    combine(a, b, true)
}

fn combine(a: &Graph, b: &Graph, cross: bool) -> Result<Graph> {
    let n = a.n() + b.n();
    check_size(n)?;
    let mut g = Graph::empty(n);
    for (u, v) in a.edges() {
        g.add_edge(u, v);
    }
    for (u, v) in b.edges() {
        g.add_edge(a.n() + u, a.n() + v);
    }
    if cross {
        for u in 0..a.n() {
            for v in 0..b.n() {
                g.add_edge(u, a.n() + v);
            }
        }
    }
    Ok(g)
}

/// Join of `m` copies of C5: χ = 3m, ω = 2m, P5-free.
pub fn c5_join_power(m: usize) -> Result<Graph> {
    if m == 0 {
        return Err(precondition("c5_join_power needs m >= 1"));
    }
    let mut g = cycle(5);
    for _ in 1..m {
        g = join(&g, &cycle(5))?;
    }
    Ok(g)
}

pub fn petersen() -> Graph {
    crate::io::from_graph6("IheA@GUAo").expect("valid graph6")
}

fn parse_args(s: &str, name: &str) -> Option<Vec<usize>> {
    let inner = s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')?;
    inner.split(',').map(|t| t.trim().parse().ok()).collect()
}

/// Named small graphs: `K5`, `P4`, `C6`, `E3` (edgeless), `star(4)`,
/// `broom(3,2)`, `double_star(2,3)`, `multipartite(2,2,3)`, `c5_join(2)`,
/// `petersen`, or `g6:<graph6>`.
pub fn named(name: &str) -> Result<Graph> {
    let name = name.trim();
    let bad = || precondition(format!("unknown graph name {name:?}"));
    if let Some(g6) = name.strip_prefix("g6:") {
        return crate::io::from_graph6(g6);
    }
    if name.eq_ignore_ascii_case("petersen") {
        return Ok(petersen());
    }
    if let Some(a) = parse_args(name, "broom") {
        return match a[..] {
            [k, t] => broom(k, t),
            _ => Err(bad()),
        };
    }
    if let Some(a) = parse_args(name, "double_star") {
        return match a[..] {
            [x, y] => double_star(x, y),
            _ => Err(bad()),
        };
    }
    if let Some(a) = parse_args(name, "star") {
        return match a[..] {
            [k] => Ok(star(k)),
            _ => Err(bad()),
        };
    }
    if let Some(a) = parse_args(name, "multipartite") {
        return complete_multipartite(&a);
    }
    if let Some(a) = parse_args(name, "c5_join") {
        return match a[..] {
            [m] => c5_join_power(m),
            _ => Err(bad()),
        };
    }
    let (head, num) = name.split_at(1.min(name.len()));
    let n: usize = num.parse().map_err(|_| bad())?;
    check_size(n)?;
    match head {
        "K" => Ok(complete(n)),
        "P" => Ok(path(n)),
        "E" => Ok(edgeless(n)),
        "C" if n >= 3 => Ok(cycle(n)),
        _ => Err(bad()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// G(n, p); `n` drawn uniformly from `n_min..=n` when `n_min` is set.
    Gnp {
        n: usize,
        #[serde(default)]
        n_min: Option<usize>,
        #[serde(with = "rational::serde_q")]
        p: Q,
    },
    /// Repair-loop sampler for `forbidden`-free graphs.
    HFreeRejection {
        n: usize,
        #[serde(default)]
        n_min: Option<usize>,
        #[serde(with = "rational::serde_q")]
        p: Q,
        forbidden: String,
        #[serde(default = "default_rounds")]
        max_rounds: usize,
    },
    Broom { k: usize, t: usize },
    Path { n: usize },
    DoubleStar { a: usize, b: usize },
    C5JoinPower { m: usize },
    CompleteMultipartite { parts: Vec<usize> },
    Named { name: String },
}

fn default_rounds() -> usize {
    2000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default)]
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family) -> Self {
        GeneratorSpec { family, seed: 0 }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        GeneratorSpec {
            family: self.family.clone(),
            seed,
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self.family, Family::Gnp { .. } | Family::HFreeRejection { .. })
    }
}

fn pick_n(n: usize, n_min: Option<usize>, seed: u64) -> Result<usize> {
    match n_min {
        None => Ok(n),
        Some(lo) if lo <= n => {
            let mut rng = rng_for(derive_seed(seed, u64::MAX));
            Ok(rng.random_range(lo..=n))
        }
        Some(lo) => Err(precondition(format!("n_min {lo} above n {n}"))),
    }
}

pub fn build_family(spec: &GeneratorSpec) -> Result<Graph> {
    match &spec.family {
        Family::Gnp { n, n_min, p } => gnp(pick_n(*n, *n_min, spec.seed)?, p, spec.seed),
        Family::HFreeRejection {
            n,
            n_min,
            p,
            forbidden,
            max_rounds,
        } => {
            let h = named(forbidden)?;
            random_h_free(pick_n(*n, *n_min, spec.seed)?, p, &h, spec.seed, *max_rounds)
        }
        Family::Broom { k, t } => broom(*k, *t),
        Family::Path { n } => {
            check_size(*n)?;
            Ok(path(*n))
        }
        Family::DoubleStar { a, b } => double_star(*a, *b),
        Family::C5JoinPower { m } => c5_join_power(*m),
        Family::CompleteMultipartite { parts } => complete_multipartite(parts),
        Family::Named { name } => named(name),
    }
}

/// Probability helper for configs: `p = num/den`.
pub fn prob(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Vertices of `g` sorted by degree sequence; used by tests that compare
/// generated graphs against expected degree multisets.
pub fn degree_sequence(g: &Graph) -> Vec<usize> {
    (0..g.n()).map(|v| g.degree(v)).collect()
}

/// Every vertex pair of `s` as an edge list, for quick fixtures.
pub fn clique_edges(s: VertexSet) -> Vec<(usize, usize)> {
    let v = s.to_vec();
    let mut out = Vec::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            out.push((v[i], v[j]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{chromatic_number, clique_number, is_h_free};

    #[test]
    fn gnp_extremes_and_determinism() {
        assert_eq!(gnp(5, &prob(0, 1), 7).unwrap().edge_count(), 0);
        assert!(gnp(5, &prob(1, 1), 7).unwrap().is_complete());
        let a = gnp(10, &prob(1, 2), 42).unwrap();
        let b = gnp(10, &prob(1, 2), 42).unwrap();
        assert_eq!(a, b);
        assert!(gnp(5, &prob(3, 2), 1).is_err());
    }

    #[test]
    fn h_free_examples() {
        let g = random_h_free(5, &prob(1, 2), &complete(2), 9, 100).unwrap();
        assert_eq!(g.edge_count(), 0);
        for s in 0..10 {
            let g = random_h_free(10, &prob(1, 2), &path(5), s, 2000).unwrap();
            assert!(is_h_free(&g, &path(5)));
        }
    }

    #[test]
    fn brooms() {
        assert_eq!(broom(3, 1).unwrap(), path(4));
        let b = broom(3, 2).unwrap();
        assert_eq!(degree_sequence(&b), vec![1, 2, 3, 1, 1]);
        assert_eq!(double_star(2, 3).unwrap().n(), 7);
    }

    #[test]
    fn joins_and_unions() {
        let w5 = join(&complete(1), &cycle(5)).unwrap();
        assert_eq!(chromatic_number(&w5).unwrap().value, 4);
        let two_k3 = disjoint_union(&complete(3), &complete(3)).unwrap();
        assert_eq!(clique_number(&two_k3).0, 3);
        assert_eq!(chromatic_number(&two_k3).unwrap().value, 3);
        assert_eq!(two_k3.components(two_k3.vertices()).len(), 2);
        let k23 = join(&edgeless(2), &edgeless(3)).unwrap();
        assert_eq!(k23, complete_multipartite(&[2, 3]).unwrap());
    }

    #[test]
    fn named_parser() {
        assert_eq!(named("P4").unwrap(), path(4));
        assert_eq!(named("broom(3,2)").unwrap(), broom(3, 2).unwrap());
        assert_eq!(named("K3").unwrap(), cycle(3));
        assert_eq!(named("multipartite(3,3,3)").unwrap().n(), 9);
        assert!(named("Q4").is_err());
    }

    #[test]
    fn spec_round_trip() {
        let spec = GeneratorSpec {
            family: Family::HFreeRejection {
                n: 12,
                n_min: Some(6),
                p: prob(1, 2),
                forbidden: "P5".into(),
                max_rounds: 100,
            },
            seed: 3,
        };
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"p\":\"1/2\""));
        let back: GeneratorSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }
}
