//! Frugal bribery in elections.
//!
//! Winner determination for common voting rules over weighted profiles,
//! vulnerable-vote classification, exact and polynomial-time bribery solvers,
//! hardness-reduction generators and brute-force oracles to check them.

pub mod election;
pub mod error;
pub mod format;
pub mod oracles;
pub mod reductions;
pub mod rules;
pub mod solvers;
pub mod vulnerability;

pub use election::{majority_graph, positional_scores, Election, MarginMatrix, Price, Ranking, Vote};
pub use error::{Error, Result};
pub use rules::{compute_winner, normalize_score_vector, Rule};
pub use vulnerability::{build_instance, classify_vulnerable, BriberyInstance, Variant, VulnerabilityLabel};
