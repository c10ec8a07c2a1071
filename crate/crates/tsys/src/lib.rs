//! Protocol models: relational transition systems with guarded updates.
//!
//! A model consists of a signature, a closed initial-state formula, a list of
//! parameterized actions and an optional safety formula. Actions update
//! relations pointwise: each updated relation gets a formula over fresh
//! argument variables, the action parameters and the pre-state; omitted
//! relations keep their value and constants never change.

pub mod model;
pub mod text;

pub use model::{Action, Bounds, BoundsParseError, ProtocolModel, Update};
pub use text::{parse_model, render_model, ModelParseError};
