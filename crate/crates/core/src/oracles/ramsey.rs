//! Ramsey numbers R(t, w): the least n such that every n-vertex graph has a
//! stable set of size t or a clique of size w.

use crate::graph::{Graph, VertexSet};
use crate::oracles::clique::{alpha_of, omega_of};

/// Classical exact values with R ≤ 25, as (t, w, R) with t ≤ w.
const TABLE: &[(u64, u64, u64)] = &[
    (3, 3, 6),
    (3, 4, 9),
    (3, 5, 14),
    (3, 6, 18),
    (3, 7, 23),
    (4, 4, 18),
    (4, 5, 25),
];

/// Exact value when known: the trivial rows t ≤ 2 and the table.
pub fn ramsey_exact(t: u64, w: u64) -> Option<u64> {
    let (a, b) = if t <= w { (t, w) } else { (w, t) };
    match a {
        0 => None,
        1 => Some(1),
        2 => Some(b),
        _ => TABLE.iter().find(|&&(x, y, _)| x == a && y == b).map(|e| e.2),
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
        if r > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    r as u64
}

/// min(C(t+w-2, t-1), w^t), saturating.
pub fn ramsey_fallback(t: u64, w: u64) -> u64 {
    let b = binomial(t + w - 2, t - 1);
    let p = w.checked_pow(t as u32).unwrap_or(u64::MAX);
    b.min(p)
}

/// Upper bound on R(t, w), exact when tabulated.
pub fn ramsey(t: u64, w: u64) -> u64 {
    assert!(t >= 1 && w >= 1, "ramsey arguments must be positive");
    ramsey_exact(t, w).unwrap_or_else(|| ramsey_fallback(t, w))
}

/// R(t, w) by exhaustive vertex-by-vertex extension of graphs with no
/// stable t-set and no w-clique. Feasible for R ≤ 10.
pub fn ramsey_by_search(t: usize, w: usize) -> usize {
    fn extend(g: &mut Graph, k: usize, t: usize, w: usize, best: &mut usize, cap: usize) {
        *best = (*best).max(k);
        if k == cap {
            return;
        }
        let prev = VertexSet::full(k);
        for m in 0..1u64 << k {
            let nb = VertexSet(m);
            if omega_of(g, nb) + 1 >= w || alpha_of(g, prev - nb) + 1 >= t {
                continue;
            }
            for u in nb.iter() {
                g.add_edge(u, k);
            }
            extend(g, k + 1, t, w, best, cap);
            for u in nb.iter() {
                g.remove_edge(u, k);
            }
            if *best == cap {
                return;
            }
        }
    }
    if t <= 1 || w <= 1 {
        return 1;
    }
    let cap = 20;
    let mut g = Graph::empty(cap);
    let mut best = 0;
    extend(&mut g, 0, t, w, &mut best, cap);
    best + 1
}

/// True iff G has neither a stable t-set nor a w-clique.
pub fn avoids(g: &Graph, t: usize, w: usize) -> bool {
    alpha_of(g, g.vertices()) < t && omega_of(g, g.vertices()) < w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        assert_eq!(ramsey(2, 7), 7);
        assert_eq!(ramsey(7, 2), 7);
        assert_eq!(ramsey(1, 9), 1);
        assert_eq!(ramsey(3, 3), 6);
        assert_eq!(ramsey(4, 3), 9);
        assert_eq!(ramsey(5, 4), 25);
        assert_eq!(ramsey(3, 8), ramsey_fallback(3, 8));
    }

    #[test]
    fn fallback_dominates_table() {
        for t in 1..=6u64 {
            for w in 1..=8u64 {
                let f = ramsey_fallback(t, w);
                assert!(f <= w.pow(t as u32));
                if let Some(e) = ramsey_exact(t, w) {
                    assert!(e <= f, "R({t},{w}) = {e} above fallback {f}");
                }
            }
        }
    }

    #[test]
    fn monotone_in_w() {
        for t in 1..=5u64 {
            for w in 1..=10u64 {
                assert!(ramsey(t, w) <= ramsey(t, w + 1));
            }
        }
    }

    #[test]
    fn c5_witnesses_r33_lower_bound() {
        let c5 = Graph::build(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert!(avoids(&c5, 3, 3));
    }
}
