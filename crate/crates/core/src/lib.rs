//! Cooperative games on simplicial complexes.
//!
//! A game assigns a worth to every feasible coalition (face) of a complex.
//! This crate provides the complexes themselves, games and carrier games,
//! marginal-contribution value schemes, the generic / traditional /
//! probabilistic / simplicial total payoffs, and brute-force oracles used to
//! cross-check every closed form.

pub mod complex;
pub mod error;
pub mod face;
pub mod game;
pub mod json;
pub mod matroid;
pub mod numeric;
pub mod oracle;
pub mod payoff;
pub mod scheme;

pub use complex::{SimplicialComplex, Subcomplex};
pub use error::{Error, Result};
pub use face::{Face, MAX_VERTICES};
pub use game::Game;
pub use matroid::{is_matroid, shelling_order, uniform_matroid, verify_shelling, ShellingOrder};
pub use payoff::{CoefficientFamily, CoefficientLabel, FormulaComparison};
pub use scheme::{EfficiencyReport, GroupValue, ValueScheme};
