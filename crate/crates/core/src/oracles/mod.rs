//! Exact ground-truth oracles.

pub mod chromatic;
pub mod clique;
pub mod copy;
pub mod degeneracy;
pub mod ramsey;
pub mod submeasure;

pub use chromatic::{chi_of, chromatic_number, chromatic_number_with, ChiResult, Colouring};
pub use clique::{alpha_of, clique_number, max_clique, max_stable_set, omega_of, stability_number};
pub use copy::{
    count_induced_copies, find_induced_copy, find_induced_copy_in, is_h_free, is_induced_copy, naive_count_induced_copies,
};
pub use degeneracy::{degeneracy, degeneracy_of};
pub use ramsey::ramsey;
pub use submeasure::{submeasure_axiom_check, AxiomReport, MeasureKind, Submeasure};
