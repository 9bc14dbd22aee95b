//! Constructive versions of the pure-pair lemmas.

pub mod basic;
pub mod broom;
pub mod eh;
pub mod outcome;
pub mod p5;
pub mod pairs;

pub use outcome::{Blockade, CoveringBlockade, Direction, ExtractionOutcome, NearPure, TerminalPartition};
