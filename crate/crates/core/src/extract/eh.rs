//! Near-pure pairs in H-free graphs under an arbitrary submeasure.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::ctx::Ctx;
use crate::error::{precondition, Error, Result};
use crate::extract::outcome::{Direction, NearPure};
use crate::graph::{Graph, VertexSet};
use crate::oracles::clique::max_clique;
use crate::oracles::copy::find_induced_copy;
use crate::oracles::submeasure::Submeasure;
use crate::rational::{self, qi, qpow, qu, Q};
use crate::trace::Trace;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EhOutcome {
    /// `phi[x]` ∈ A_x for every pattern vertex x.
    Copy { phi: Vec<usize> },
    Pair(NearPure),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EhResult {
    pub outcome: EhOutcome,
    /// Number of recursion levels entered.
    pub depth: usize,
}

fn check_eps_half(eps: &Q) -> Result<()> {
    if !rational::is_in_open_unit(eps) || eps > &rational::q(1, 2) {
        return Err(precondition("ε must lie in (0, 1/2]"));
    }
    Ok(())
}

fn mu_of(mu: &dyn Submeasure, ctx: &Ctx, s: VertexSet) -> Q {
    qi(mu.measure_in(ctx, s))
}

/// Whether every v ∈ b satisfies the near-pure inequality towards a.
pub fn is_near_pure(ctx: &Ctx, mu: &dyn Submeasure, a: VertexSet, b: VertexSet, dir: Direction, eps: &Q) -> bool {
    let g = ctx.g;
    let bound = eps * mu_of(mu, ctx, a);
    b.iter().all(|v| {
        let part = match dir {
            Direction::Sparse => a & g.nbrs(v),
            Direction::Dense => a - g.nbrs(v),
        };
        mu_of(mu, ctx, part) < bound
    })
}

/// Anchored copy of H with φ(x) ∈ anchors[x], or a near-pure pair inside
/// two anchors whose measures keep an ε^(h-2) share.
pub fn eh_step(g: &Graph, h: &Graph, eps: &Q, mu: &dyn Submeasure, anchors: &[VertexSet]) -> Result<EhResult> {
    check_eps_half(eps)?;
    if anchors.len() != h.n() || h.n() == 0 {
        return Err(precondition("need one anchor per vertex of H"));
    }
    let mut seen = VertexSet::EMPTY;
    for &a in anchors {
        g.check_subset(a)?;
        if a.is_empty() {
            return Err(Error::EmptySet);
        }
        if !a.is_disjoint(seen) {
            return Err(Error::Overlap);
        }
        seen = seen | a;
    }
    let ctx = Ctx::new(g)?;
    eh_step_in(&ctx, h, eps, mu, anchors)
}

pub(crate) fn eh_step_in(ctx: &Ctx, h: &Graph, eps: &Q, mu: &dyn Submeasure, anchors: &[VertexSet]) -> Result<EhResult> {
    let order: Vec<usize> = (0..h.n()).collect();
    let mut trace = Trace::new();
    let (outcome, depth) = eh_rec(ctx, h, &order, anchors, eps, mu, &mut trace)?;
    Ok(EhResult { outcome, depth })
}

fn eh_rec(
    ctx: &Ctx,
    h: &Graph,
    hv: &[usize],
    anchors: &[VertexSet],
    eps: &Q,
    mu: &dyn Submeasure,
    trace: &mut Trace,
) -> Result<(EhOutcome, usize)> {
    let g = ctx.g;
    let m = hv.len();
    let a1 = anchors[0];
    if m == 1 {
        let v = a1.first().expect("anchors are nonempty");
        return Ok((EhOutcome::Copy { phi: vec![v] }, 1));
    }
    if m == 2 {
        let a2 = anchors[1];
        let edge = h.adjacent(hv[0], hv[1]);
        for u in a1.iter() {
            let hits = if edge { a2 & g.nbrs(u) } else { a2 - g.nbrs(u) };
            if let Some(x) = hits.first() {
                return Ok((EhOutcome::Copy { phi: vec![u, x] }, 1));
            }
        }
        let direction = if edge { Direction::Sparse } else { Direction::Dense };
        return Ok((
            EhOutcome::Pair(NearPure {
                i: 0,
                j: 1,
                a: a2,
                b: a1,
                direction,
            }),
            1,
        ));
    }
    let share = qpow(eps, m as i64 - 2) * mu_of(mu, ctx, a1);
    let mut covered = VertexSet::EMPTY;
    for idx in 1..m {
        let ai = anchors[idx];
        let edge = h.adjacent(hv[0], hv[idx]);
        let direction = if edge { Direction::Sparse } else { Direction::Dense };
        let bound = eps * mu_of(mu, ctx, ai);
        let bi: VertexSet = a1
            .iter()
            .filter(|&v| {
                let part = if edge { ai & g.nbrs(v) } else { ai - g.nbrs(v) };
                mu_of(mu, ctx, part) < bound
            })
            .collect();
        if mu_of(mu, ctx, bi) >= share {
            return Ok((
                EhOutcome::Pair(NearPure {
                    i: 0,
                    j: idx,
                    a: ai,
                    b: bi,
                    direction,
                }),
                1,
            ));
        }
        covered = covered | bi;
    }
    let Some(v) = (a1 - covered).first() else {
        trace.check("B_2 ∪ ... ∪ B_h ≠ A_1", false, format!("A_1={a1:?}"));
        return Err(Error::ClaimViolation {
            claim: "eh-step".into(),
            detail: "the sets B_i cover A_1".into(),
            trace: trace.entries.clone(),
        });
    };
    trace.note("peel", format!("v={v}"));
    let rest: Vec<VertexSet> = (1..m)
        .map(|idx| {
            if h.adjacent(hv[0], hv[idx]) {
                anchors[idx] & g.nbrs(v)
            } else {
                anchors[idx] - g.nbrs(v)
            }
        })
        .collect();
    if rest.iter().any(|c| c.is_empty()) {
        return Err(Error::ClaimViolation {
            claim: "eh-step".into(),
            detail: "some C_i is empty".into(),
            trace: trace.entries.clone(),
        });
    }
    let (inner, depth) = eh_rec(ctx, h, &hv[1..], &rest, eps, mu, trace)?;
    let outcome = match inner {
        EhOutcome::Copy { phi } => {
            let mut full = vec![v];
            full.extend(phi);
            EhOutcome::Copy { phi: full }
        }
        EhOutcome::Pair(p) => EhOutcome::Pair(NearPure {
            i: p.i + 1,
            j: p.j + 1,
            ..p
        }),
    };
    Ok((outcome, depth + 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearPureResult {
    pub pair: NearPure,
    /// μ(G) was below 2|H|·ε^(2-|H|) and two singletons were returned.
    pub trivial: bool,
    pub anchors: Vec<VertexSet>,
    pub depth: usize,
}

fn require_h_free(g: &Graph, h: &Graph) -> Result<()> {
    if let Some(copy) = find_induced_copy(h, g, None)? {
        return Err(Error::ForbiddenCopy {
            what: "H".into(),
            copy,
        });
    }
    Ok(())
}

/// Disjoint A, B with μ(A), μ(B) ≥ ε^(|H|-2)μ(G)/(2|H|) and B near-pure to A.
pub fn near_pure_pair(g: &Graph, h: &Graph, eps: &Q, mu: &dyn Submeasure) -> Result<NearPureResult> {
    check_eps_half(eps)?;
    let ctx = Ctx::new(g)?;
    require_h_free(g, h)?;
    near_pure_pair_in(&ctx, g.vertices(), h, eps, mu)
}

pub(crate) fn near_pure_pair_in(
    ctx: &Ctx,
    dom: VertexSet,
    h: &Graph,
    eps: &Q,
    mu: &dyn Submeasure,
) -> Result<NearPureResult> {
    let g = ctx.g;
    let hn = h.n();
    let mu_g = mu_of(mu, ctx, dom);
    if hn < 2 || mu_g < qu(2 * hn) * qpow(eps, 2 - hn as i64) {
        let vs = dom.to_vec();
        if vs.len() < 2 {
            return Err(precondition("need at least two vertices"));
        }
        let (x, y) = (vs[0], vs[1]);
        let direction = if g.adjacent(x, y) { Direction::Dense } else { Direction::Sparse };
        return Ok(NearPureResult {
            pair: NearPure {
                i: 0,
                j: 1,
                a: VertexSet::singleton(y),
                b: VertexSet::singleton(x),
                direction,
            },
            trivial: true,
            anchors: vec![],
            depth: 0,
        });
    }
    let lower = &mu_g / qu(2 * hn);
    let mut used = VertexSet::EMPTY;
    let mut anchors = Vec::with_capacity(hn);
    for _ in 0..hn {
        let mut a = dom - used;
        if mu_of(mu, ctx, a) < lower {
            return Err(Error::ClaimViolation {
                claim: "near-pure-partition".into(),
                detail: format!("remaining measure below μ(G)/(2h) after {} blocks", anchors.len()),
                trace: vec![],
            });
        }
        for x in (dom - used).iter() {
            if mu_of(mu, ctx, a.without(x)) >= lower {
                a.remove(x);
            }
        }
        used = used | a;
        anchors.push(a);
    }
    let r = eh_step_in(ctx, h, eps, mu, &anchors)?;
    match r.outcome {
        EhOutcome::Copy { phi } => Err(Error::ForbiddenCopy { what: "H".into(), copy: phi }),
        EhOutcome::Pair(pair) => Ok(NearPureResult {
            pair,
            trivial: false,
            anchors,
            depth: r.depth,
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuasiOutcome {
    StableSet { s: VertexSet },
    /// Always in the sparse direction.
    Pair(NearPure),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiResult {
    pub outcome: QuasiOutcome,
    /// Doubling rounds performed.
    pub rounds: usize,
    pub max_depth: usize,
    /// ⌊2|H|·log2 ω⌋; ε raised to it bounds ε^(2|H| log ω) from above.
    pub exponent: u64,
}

/// Exponent e with ε^e ≥ ε^(2h·log2 w): the floor of 2h·log2 w.
pub fn quasi_exponent(h: usize, w: usize) -> u64 {
    let big = super::basic::big_pow(w, 2 * h);
    rational::floor_log2(&big)
}

/// A large stable set, or a sparse near-pure pair, by repeatedly splitting
/// blocks and purifying the dense halves.
pub fn quasi_pure(g: &Graph, h: &Graph, eps: &Q, mu: &dyn Submeasure) -> Result<QuasiResult> {
    let ctx = Ctx::new(g)?;
    let w = ctx.omega(g.vertices());
    if w == 0 {
        return Err(precondition("graph has no vertices"));
    }
    if !eps.is_positive() || eps > &rational::q(1, w as i64) {
        return Err(precondition("ε must lie in (0, 1/ω]"));
    }
    require_h_free(g, h)?;
    let exponent = if w >= 2 { quasi_exponent(h.n(), w) } else { 0 };
    let mut blocks = vec![g.vertices()];
    let mut rounds = 0;
    let mut max_depth = 0;
    loop {
        if let Some(&s) = blocks.iter().find(|&&e| ctx.omega(e) == 1) {
            return Ok(QuasiResult {
                outcome: QuasiOutcome::StableSet { s },
                rounds,
                max_depth,
                exponent,
            });
        }
        if 2 * blocks.len() > w {
            return Err(Error::ClaimViolation {
                claim: "quasi-budget".into(),
                detail: format!("{} blocks of clique number ≥ 2 with ω = {w}", blocks.len()),
                trace: vec![],
            });
        }
        let mut next = Vec::with_capacity(2 * blocks.len());
        for &e in &blocks {
            let r = near_pure_pair_in(&ctx, e, h, eps, mu)?;
            max_depth = max_depth.max(r.depth);
            let pair = r.pair;
            match pair.direction {
                Direction::Sparse => {
                    return Ok(QuasiResult {
                        outcome: QuasiOutcome::Pair(pair),
                        rounds,
                        max_depth,
                        exponent,
                    })
                }
                Direction::Dense => {
                    let d = max_clique(ctx.g, pair.b);
                    let a = pair.a & ctx.g.common_nbrs(d);
                    if a.is_empty() {
                        return Err(Error::ClaimViolation {
                            claim: "quasi-purify".into(),
                            detail: "no vertex complete to the clique".into(),
                            trace: vec![],
                        });
                    }
                    next.push(pair.b);
                    next.push(a);
                }
            }
        }
        blocks = next;
        rounds += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{c5_join_power, complete, complete_multipartite, cycle, edgeless, path, prob, random_h_free};
    use crate::oracles::MeasureKind;
    use crate::rational::q;

    #[test]
    fn k2_anchors() {
        let g = path(2);
        let r = eh_step(&g, &complete(2), &q(1, 2), &MeasureKind::Cardinality, &[VertexSet::singleton(0), VertexSet::singleton(1)]).unwrap();
        assert_eq!(r.outcome, EhOutcome::Copy { phi: vec![0, 1] });
        let g = edgeless(2);
        let r = eh_step(&g, &complete(2), &q(1, 2), &MeasureKind::Cardinality, &[VertexSet::singleton(0), VertexSet::singleton(1)]).unwrap();
        match r.outcome {
            EhOutcome::Pair(p) => assert_eq!(p.direction, Direction::Sparse),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn triangle_in_c5_gives_pair() {
        let g = cycle(5);
        let anchors = [VertexSet::singleton(0), VertexSet::singleton(1), VertexSet::singleton(3)];
        for mu in [MeasureKind::Cardinality, MeasureKind::Chromatic] {
            let r = eh_step(&g, &complete(3), &q(1, 2), &mu, &anchors).unwrap();
            let EhOutcome::Pair(p) = r.outcome else { panic!() };
            let ctx = Ctx::new(&g).unwrap();
            assert!(is_near_pure(&ctx, &mu, p.a, p.b, p.direction, &q(1, 2)));
            assert!(p.a.is_subset(anchors[p.j]) && p.b.is_subset(anchors[p.i]));
            assert!(r.depth <= 3);
        }
    }

    #[test]
    fn near_pure_examples() {
        let r = near_pure_pair(&cycle(5), &complete(3), &q(1, 2), &MeasureKind::Cardinality).unwrap();
        assert!(r.trivial);
        let g = c5_join_power(2).unwrap();
        let r = near_pure_pair(&g, &complete(5), &q(1, 2), &MeasureKind::Chromatic).unwrap();
        let ctx = Ctx::new(&g).unwrap();
        assert!(is_near_pure(&ctx, &MeasureKind::Chromatic, r.pair.a, r.pair.b, r.pair.direction, &q(1, 2)));
        let g = random_h_free(14, &prob(1, 2), &path(5), 7, 2000).unwrap();
        let r = near_pure_pair(&g, &path(5), &q(1, 2), &MeasureKind::Cardinality).unwrap();
        assert!(r.pair.a.is_disjoint(r.pair.b));
        assert!(!r.pair.a.is_empty() && !r.pair.b.is_empty());
    }

    #[test]
    fn quasi_examples() {
        let r = quasi_pure(&edgeless(4), &complete(3), &q(1, 1), &MeasureKind::Cardinality).unwrap();
        assert_eq!(r.outcome, QuasiOutcome::StableSet { s: VertexSet::full(4) });
        let g = complete_multipartite(&[3, 3, 3]).unwrap();
        let r = quasi_pure(&g, &complete(5), &q(1, 3), &MeasureKind::Cardinality).unwrap();
        match r.outcome {
            QuasiOutcome::StableSet { s } => assert!(g.is_stable(s) && !s.is_empty()),
            QuasiOutcome::Pair(p) => assert_eq!(p.direction, Direction::Sparse),
        }
        let r = quasi_pure(&cycle(5), &complete(4), &q(1, 2), &MeasureKind::Chromatic).unwrap();
        assert_eq!(r.exponent, 8);
        assert!(quasi_pure(&cycle(5), &complete(4), &q(2, 3), &MeasureKind::Chromatic).is_err());
    }
}
