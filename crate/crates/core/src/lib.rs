//! Winning shifts of the two-player word-building game for subshifts
//! generated by uniform substitutions.

pub mod builtin;
pub mod complexity;
pub mod error;
pub mod game;
pub mod gtm;
pub mod recognizability;
pub mod substitution;
pub mod table;
pub mod verify;
pub mod winshift;
pub mod words;

pub use error::{Error, Result};
pub use game::{MemberOutcome, Solver, StrategyTree, WinningSet};
pub use gtm::GtmParams;
pub use substitution::{Substitution, SubstitutionFile};
pub use winshift::{Method, WinShift};
pub use words::{Alphabet, ChoiceSequence, Letter, Word};
