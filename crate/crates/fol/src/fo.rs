//! General first-order formulas and their semantics over finite structures.
//!
//! These are the formulas used for initial conditions, safety properties and
//! guarded updates of transition systems. They are unrelated to the bounded
//! languages of the abstract domain, which have their own formula type.

use std::fmt;

use crate::sig::Var;
use crate::structure::{assignments, EvalError, State};
use crate::term::Literal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuantKind {
    Forall,
    Exists,
}

impl fmt::Display for QuantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuantKind::Forall => write!(f, "forall"),
            QuantKind::Exists => write!(f, "exists"),
        }
    }
}

/// A general first-order formula over a relational signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Fo {
    True,
    False,
    Lit(Literal),
    Not(Box<Fo>),
    And(Vec<Fo>),
    Or(Vec<Fo>),
    Implies(Box<Fo>, Box<Fo>),
    Quant(QuantKind, Vec<Var>, Box<Fo>),
}

impl Fo {
    pub fn and(conjuncts: Vec<Fo>) -> Fo {
        match conjuncts.len() {
            0 => Fo::True,
            1 => conjuncts.into_iter().next().unwrap(),
            _ => Fo::And(conjuncts),
        }
    }

    pub fn eval(&self, state: &State) -> Result<bool, EvalError> {
        match self {
            Fo::True => Ok(true),
            Fo::False => Ok(false),
            Fo::Lit(lit) => state.holds(lit),
            Fo::Not(f) => Ok(!f.eval(state)?),
            Fo::And(fs) => {
                for f in fs {
                    if !f.eval(state)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Fo::Or(fs) => {
                for f in fs {
                    if f.eval(state)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Fo::Implies(a, b) => Ok(!a.eval(state)? || b.eval(state)?),
            Fo::Quant(kind, vars, body) => {
                for nu in assignments(vars, &state.structure) {
                    let truth = body.eval(&state.updated(&nu))?;
                    match kind {
                        QuantKind::Forall if !truth => return Ok(false),
                        QuantKind::Exists if truth => return Ok(true),
                        _ => {}
                    }
                }
                Ok(matches!(kind, QuantKind::Forall))
            }
        }
    }
}
