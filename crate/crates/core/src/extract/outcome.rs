//! Witness types returned by the extraction operations.

use serde::{Deserialize, Serialize};

use crate::graph::VertexSet;
use crate::oracles::Colouring;
use crate::rational::{self, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// μ(a ∩ N(v)) < ε·μ(a) for every v ∈ b.
    Sparse,
    /// μ(a \ N(v)) < ε·μ(a) for every v ∈ b.
    Dense,
}

/// A near-pure pair: every vertex of `b` sees little of `a` (sparse) or
/// misses little of `a` (dense), measured by a submeasure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearPure {
    /// Anchor index of `b` (the quantified side).
    pub i: usize,
    /// Anchor index of `a` (the measured side).
    pub j: usize,
    pub a: VertexSet,
    pub b: VertexSet,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blockade {
    pub blocks: Vec<VertexSet>,
}

impl Blockade {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_disjoint(&self) -> bool {
        let mut seen = VertexSet::EMPTY;
        for &b in &self.blocks {
            if !b.is_disjoint(seen) {
                return false;
            }
            seen = seen | b;
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VividMargin {
    pub i: usize,
    pub j: usize,
    pub v: usize,
    /// χ(B_i \ N(v)).
    pub margin: usize,
    #[serde(with = "rational::serde_q")]
    pub threshold: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VividCertificate {
    pub blockade: Blockade,
    #[serde(with = "rational::serde_q")]
    pub eps: Q,
    pub margins: Vec<VividMargin>,
}

/// D_1..D_k and E; `queries` lists the (X, Y) pairs later steps relied on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringBlockade {
    pub d: Vec<VertexSet>,
    pub e: VertexSet,
    pub k: usize,
    pub w: usize,
    pub queries: Vec<(VertexSet, VertexSet)>,
}

/// A p-terminal partition (A_1..A_k, B, D) with the per-block attachments B_i.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalPartition {
    pub a: Vec<VertexSet>,
    pub b: VertexSet,
    pub d: VertexSet,
    #[serde(with = "rational::serde_q")]
    pub p: Q,
    pub b_i: Vec<VertexSet>,
}

/// Tagged union of everything an extraction can return.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExtractionOutcome {
    CompletePair {
        a: VertexSet,
        b: VertexSet,
    },
    AnticompletePair {
        a: VertexSet,
        b: VertexSet,
    },
    InducedCopy {
        phi: Vec<usize>,
    },
    StableSet {
        s: VertexSet,
    },
    NearPurePair(NearPure),
    ColourfulSubgraph {
        j: VertexSet,
        #[serde(with = "rational::serde_q")]
        eps: Q,
    },
    CoveringBlockadeFound(CoveringBlockade),
    Colouring {
        colouring: Colouring,
        raw_count: usize,
        /// Decimal integer; can exceed 64 bits.
        bound: String,
    },
    BroomPair {
        p: VertexSet,
        q: VertexSet,
    },
    DecompositionSP {
        s: VertexSet,
        p: VertexSet,
    },
    Vertex {
        v: usize,
    },
    Subgraph {
        f: VertexSet,
        trace: Vec<usize>,
    },
    Clique {
        clique: Vec<usize>,
    },
    NotVivid {
        i: usize,
        j: usize,
        v: usize,
    },
    PairXY {
        x: VertexSet,
        y: VertexSet,
    },
    TerminalPartition(TerminalPartition),
    Unmixed,
    P5Witness {
        path: Vec<usize>,
    },
    Cover {
        t: VertexSet,
        s: VertexSet,
        z: Vec<usize>,
        eh_violation: bool,
    },
    Colourful,
    NotColourful {
        v: usize,
    },
}

impl ExtractionOutcome {
    pub fn tag(&self) -> &'static str {
        use ExtractionOutcome::*;
        match self {
            CompletePair { .. } => "complete_pair",
            AnticompletePair { .. } => "anticomplete_pair",
            InducedCopy { .. } => "induced_copy",
            StableSet { .. } => "stable_set",
            NearPurePair(_) => "near_pure_pair",
            ColourfulSubgraph { .. } => "colourful_subgraph",
            CoveringBlockadeFound(_) => "covering_blockade",
            Colouring { .. } => "colouring",
            BroomPair { .. } => "broom_pair",
            DecompositionSP { .. } => "decomposition_sp",
            Vertex { .. } => "vertex",
            Subgraph { .. } => "subgraph",
            Clique { .. } => "clique",
            NotVivid { .. } => "not_vivid",
            PairXY { .. } => "pair_xy",
            TerminalPartition(_) => "terminal_partition",
            Unmixed => "unmixed",
            P5Witness { .. } => "p5_witness",
            Cover { .. } => "cover",
            Colourful => "colourful",
            NotColourful { .. } => "not_colourful",
        }
    }
}
