//! Submeasures: μ(∅) = 0, μ({v}) = 1, monotone and subadditive.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ctx::Ctx;
use crate::graph::{Graph, VertexSet};
use crate::oracles::chromatic::chi_of;

/// Integer-valued set function on the vertex subsets of one graph.
pub trait Submeasure {
    fn name(&self) -> &str;
    fn measure(&self, g: &Graph, s: VertexSet) -> i64;

    /// Evaluation through a memoizing context; override when useful.
    fn measure_in(&self, ctx: &Ctx, s: VertexSet) -> i64 {
        self.measure(ctx.g, s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Chromatic,
    Cardinality,
}

impl Submeasure for MeasureKind {
    fn name(&self) -> &str {
        match self {
            MeasureKind::Chromatic => "chromatic",
            MeasureKind::Cardinality => "cardinality",
        }
    }

    fn measure(&self, g: &Graph, s: VertexSet) -> i64 {
        match self {
            MeasureKind::Chromatic => chi_of(g, s) as i64,
            MeasureKind::Cardinality => s.len() as i64,
        }
    }

    fn measure_in(&self, ctx: &Ctx, s: VertexSet) -> i64 {
        match self {
            MeasureKind::Chromatic => ctx.chi(s) as i64,
            MeasureKind::Cardinality => s.len() as i64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomViolation {
    pub axiom: String,
    pub sets: Vec<VertexSet>,
    pub values: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub measure: String,
    pub samples: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the axioms: the empty set and every singleton exhaustively,
/// monotonicity and subadditivity on `samples` random set pairs.
pub fn submeasure_axiom_check(mu: &dyn Submeasure, g: &Graph, samples: usize, seed: u64) -> AxiomReport {
    let mut violations = Vec::new();
    let mut flag = |axiom: &str, sets: Vec<VertexSet>, values: Vec<i64>| {
        violations.push(AxiomViolation {
            axiom: axiom.to_string(),
            sets,
            values,
        })
    };
    let e = mu.measure(g, VertexSet::EMPTY);
    if e != 0 {
        flag("mu(empty) = 0", vec![VertexSet::EMPTY], vec![e]);
    }
    for v in 0..g.n() {
        let s = VertexSet::singleton(v);
        let m = mu.measure(g, s);
        if m != 1 {
            flag("mu({v}) = 1", vec![s], vec![m]);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = g.vertices().0;
    for _ in 0..samples {
        if g.n() == 0 {
            break;
        }
        let x = VertexSet(rng.random::<u64>() & full);
        let y = VertexSet(rng.random::<u64>() & full);
        let (mx, my) = (mu.measure(g, x), mu.measure(g, y));
        let sup = x | y;
        let ms = mu.measure(g, sup);
        if mx > ms {
            flag("monotone", vec![x, sup], vec![mx, ms]);
        }
        if ms > mx + my {
            flag("subadditive", vec![x, y], vec![mx, my, ms]);
        }
    }
    AxiomReport {
        measure: mu.name().to_string(),
        samples,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Negated;

    impl Submeasure for Negated {
        fn name(&self) -> &str {
            "negated cardinality"
        }
        fn measure(&self, _: &Graph, s: VertexSet) -> i64 {
            -(s.len() as i64)
        }
    }

    fn c5() -> Graph {
        Graph::build(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap()
    }

    #[test]
    fn shipped_measures_pass() {
        assert!(submeasure_axiom_check(&MeasureKind::Chromatic, &c5(), 200, 1).passed());
        let p = crate::io::from_graph6("IheA@GUAo").unwrap();
        assert!(submeasure_axiom_check(&MeasureKind::Cardinality, &p, 200, 2).passed());
    }

    #[test]
    fn broken_measure_flagged_on_singletons() {
        let r = submeasure_axiom_check(&Negated, &c5(), 200, 3);
        let first = &r.violations[0];
        assert_eq!(first.axiom, "mu({v}) = 1");
        assert_eq!(first.values, vec![-1]);
    }
}
