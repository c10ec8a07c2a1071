//! Bounded first-order languages and their abstract-domain machinery.
//!
//! A bounded language is described by a recursive [`LanguageSpec`]: a finite,
//! permutation-closed set of literals at the leaves, combined by binary and
//! homogeneous disjunction/conjunction and by block quantification. Formulas
//! of such a language mirror the spec's shape. The crate implements the
//! syntactic subsumption preorder that under-approximates entailment, the
//! total order and canonicalization that make subsumption a partial order on
//! representatives, language enumeration for test oracles, the k-pDNF
//! language builder, and parsing/rendering of formulas and language files.

pub mod canon;
pub mod enumerate;
pub mod formula;
pub mod kpdnf;
pub mod parse;
pub mod render;
pub mod sat;
pub mod sexp;
pub mod spec;
pub mod subsume;

pub use canon::{canonicalize, compare, is_canonical, minimize};
pub use enumerate::{count_formulas, enumerate_canonical, enumerate_formulas, EnumError};
pub use formula::{apply_permutation, bottom, shape_check, Formula, ShapeError};
pub use kpdnf::{build_kpdnf, KpdnfError, KpdnfOptions, PrefixItem, PrefixKind};
pub use fol::literals::{generate_literals, LitOptions};
pub use parse::{parse_formula, parse_language_file, LangParseError, ParsedLanguage};
pub use render::render;
pub use sat::satisfies;
pub use spec::{AtomsSpec, LanguageSpec, SpecError, VarBlock};
pub use subsume::subsumes;
