//! JSON text format for states.
//!
//! ```json
//! {"universe": {"node": 2}, "constants": {"c0": 0},
//!  "relations": {"p": [[0],[1]]}, "assignment": {"x": 0}}
//! ```
//!
//! Tuples are arrays of element indices. An omitted `assignment` (or
//! `constants`) means the empty map.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sig::{Signature, Sort};
use crate::structure::{Assignment, State, Structure, StructureError};

#[derive(Debug, Serialize, Deserialize)]
struct RawState {
    universe: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    constants: BTreeMap<String, usize>,
    relations: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    assignment: BTreeMap<String, usize>,
}

#[derive(Debug, Error)]
pub enum StateFileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown sort {0} in universe")]
    UnknownSort(String),
    #[error("{0}")]
    Structure(#[from] StructureError),
    #[error("assigned variable {name} maps to element {element} outside any universe")]
    AssignmentOutOfRange { name: String, element: usize },
}

/// Parses a state file against a signature. Sorts, constants and relations
/// must all belong to the signature; assignment variables are unchecked here
/// (their sorts are only known to the caller).
pub fn parse_state(text: &str, sig: &Arc<Signature>) -> Result<State, StateFileError> {
    let raw: RawState = serde_json::from_str(text)?;
    let mut universe = BTreeMap::new();
    for (name, size) in raw.universe {
        let sort = sig
            .sort(&name)
            .ok_or_else(|| StateFileError::UnknownSort(name.clone()))?;
        universe.insert(sort.clone(), size);
    }
    let mut structure = Structure::new(Arc::clone(sig), universe);
    for (name, value) in raw.constants {
        structure.constants.insert(name, value);
    }
    for (name, tuples) in raw.relations {
        structure
            .relations
            .insert(name, tuples.into_iter().collect());
    }
    structure.validate()?;
    let max = structure.universe.values().copied().max().unwrap_or(0);
    for (name, &element) in &raw.assignment {
        if element >= max {
            return Err(StateFileError::AssignmentOutOfRange {
                name: name.clone(),
                element,
            });
        }
    }
    Ok(State::with_assignment(
        Arc::new(structure),
        Assignment(raw.assignment),
    ))
}

/// Renders a state in the JSON text format, with sorted keys.
pub fn render_state(state: &State) -> String {
    let raw = RawState {
        universe: state
            .structure
            .universe
            .iter()
            .map(|(s, &n)| (s.name().to_string(), n))
            .collect(),
        constants: state.structure.constants.clone(),
        relations: state
            .structure
            .relations
            .iter()
            .map(|(name, table)| (name.clone(), table.iter().cloned().collect()))
            .collect(),
        assignment: state.assignment.0.clone(),
    };
    serde_json::to_string(&raw).expect("state serialization cannot fail")
}

/// Checks that an assignment's elements are inside the universe of each
/// variable's sort, given the variable sorts in scope.
pub fn check_assignment_sorts(
    state: &State,
    var_sorts: &BTreeMap<String, Sort>,
) -> Result<(), StateFileError> {
    for (name, &element) in &state.assignment.0 {
        if let Some(sort) = var_sorts.get(name) {
            if element >= state.structure.size(sort) {
                return Err(StateFileError::AssignmentOutOfRange {
                    name: name.clone(),
                    element,
                });
            }
        }
    }
    Ok(())
}
