//! Many-sorted relational first-order kernel.
//!
//! Signatures consist of sorts, constants and relations (no function
//! symbols). Terms are variables or constants, literals are possibly negated
//! relation applications or equalities, and structures interpret a signature
//! over finite universes of integer elements. On top of these the crate
//! provides evaluation, sort-preserving variable permutations, exhaustive
//! enumeration of bounded structures, general first-order formulas with their
//! semantics, and a JSON format for states.

pub mod enumerate;
pub mod fo;
pub mod literals;
pub mod perm;
pub mod sig;
pub mod statefile;
pub mod structure;
pub mod term;

pub use enumerate::{structures_exact, structures_up_to, StructureIter};
pub use fo::{Fo, QuantKind};
pub use literals::{generate_literals, LitOptions};
pub use perm::{sort_permutations, Permutation};
pub use sig::{ConstDecl, RelationDecl, Signature, Sort, Var};
pub use statefile::{parse_state, render_state, StateFileError};
pub use structure::{Assignment, Element, EvalError, State, Structure};
pub use term::{Atom, Literal, Term};
