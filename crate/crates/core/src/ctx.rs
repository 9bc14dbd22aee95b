//! Per-call oracle context with memoized χ and ω over vertex subsets.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::error::Result;
use crate::graph::{Graph, Limits, VertexSet};
use crate::oracles::chromatic::chi_of;
use crate::oracles::clique::{alpha_of, omega_of};

pub struct Ctx<'g> {
    pub g: &'g Graph,
    pub limits: Limits,
    chi: RefCell<HashMap<u64, usize>>,
    omega: RefCell<HashMap<u64, usize>>,
}

impl<'g> Ctx<'g> {
    /// Fails when the graph exceeds the exact-χ cap.
    pub fn new(g: &'g Graph) -> Result<Self> {
        Self::with_limits(g, Limits::default())
    }

    pub fn with_limits(g: &'g Graph, limits: Limits) -> Result<Self> {
        limits.check_structural(g)?;
        limits.check_chi(g.n())?;
        Ok(Ctx {
            g,
            limits,
            chi: RefCell::new(HashMap::new()),
            omega: RefCell::new(HashMap::new()),
        })
    }

    pub fn chi(&self, s: VertexSet) -> usize {
        if s.len() <= 1 {
            return s.len();
        }
        if let Some(&c) = self.chi.borrow().get(&s.0) {
            return c;
        }
        let c = chi_of(self.g, s);
        self.chi.borrow_mut().insert(s.0, c);
        c
    }

    pub fn omega(&self, s: VertexSet) -> usize {
        if s.len() <= 1 {
            return s.len();
        }
        if let Some(&c) = self.omega.borrow().get(&s.0) {
            return c;
        }
        let c = omega_of(self.g, s);
        self.omega.borrow_mut().insert(s.0, c);
        c
    }

    pub fn alpha(&self, s: VertexSet) -> usize {
        alpha_of(self.g, s)
    }

    pub fn all(&self) -> VertexSet {
        self.g.vertices()
    }

    /// The component of G[s] with the largest χ, lowest least vertex on ties.
    pub fn max_chi_component(&self, s: VertexSet) -> VertexSet {
        let mut best = VertexSet::EMPTY;
        let mut best_chi = 0;
        for c in self.g.components(s) {
            let k = self.chi(c);
            if k > best_chi {
                best = c;
                best_chi = k;
            }
        }
        best
    }
}
