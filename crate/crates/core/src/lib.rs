//! Synchronizing automata and road colorings of bounded reset length.
//!
//! The crate covers shortest reset words, the synchronizing road coloring
//! problem with a length bound (SRCP), its kernel, the polynomial case of
//! out-degree 2 and length 3, the composition of many instances into one
//! automaton, and the reduction from 3-SAT to SRCP with two letters and
//! length 4.

pub mod automaton;
pub mod composer;
mod error;
pub mod graph;
pub mod letters;
pub mod reduction;
pub mod srcp;
pub mod srcpw;
pub mod sync;
mod text;

pub use automaton::{cerny_automaton, Dfa, StateSet};
pub use error::{Error, Result};
pub use graph::{Coloring, Multigraph};

pub type State = usize;
pub type Letter = usize;
pub type Word = Vec<Letter>;
