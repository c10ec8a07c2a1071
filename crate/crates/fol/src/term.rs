//! Terms, atoms and literals.

use std::fmt;

use crate::sig::{Signature, Sort, Var};

/// A term is a variable or a constant symbol. The sort is carried inline so
/// terms are self-describing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    Const { name: String, sort: Sort },
}

impl Term {
    pub fn var(name: impl Into<String>, sort: Sort) -> Self {
        Term::Var(Var::new(name, sort))
    }

    pub fn constant(name: impl Into<String>, sort: Sort) -> Self {
        Term::Const {
            name: name.into(),
            sort,
        }
    }

    pub fn sort(&self) -> &Sort {
        match self {
            Term::Var(v) => &v.sort,
            Term::Const { sort, .. } => sort,
        }
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const { .. } => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{}", v.name),
            Term::Const { name, .. } => write!(f, "{name}"),
        }
    }
}

/// An atomic formula: a relation application or an equality.
///
/// Equalities are kept with operands in the `Term` order, so `x = y` and
/// `y = x` are the same atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Relation { name: String, args: Vec<Term> },
    Equal(Term, Term),
}

impl Atom {
    pub fn equal(a: Term, b: Term) -> Self {
        if a <= b {
            Atom::Equal(a, b)
        } else {
            Atom::Equal(b, a)
        }
    }
}

/// A literal: an atom with a polarity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn relation(name: impl Into<String>, args: Vec<Term>, positive: bool) -> Self {
        Literal {
            atom: Atom::Relation {
                name: name.into(),
                args,
            },
            positive,
        }
    }

    pub fn equality(a: Term, b: Term, positive: bool) -> Self {
        Literal {
            atom: Atom::equal(a, b),
            positive,
        }
    }

    pub fn negated(&self) -> Self {
        Literal {
            atom: self.atom.clone(),
            positive: !self.positive,
        }
    }

    /// The variables mentioned by the literal, in argument order.
    pub fn vars(&self) -> Vec<&Var> {
        let terms: Vec<&Term> = match &self.atom {
            Atom::Relation { args, .. } => args.iter().collect(),
            Atom::Equal(a, b) => vec![a, b],
        };
        terms.into_iter().filter_map(|t| t.as_var()).collect()
    }

    /// Checks argument sorts against the signature.
    pub fn well_sorted(&self, sig: &Signature) -> bool {
        match &self.atom {
            Atom::Relation { name, args } => match sig.relation(name) {
                Some(decl) => {
                    decl.args.len() == args.len()
                        && decl.args.iter().zip(args).all(|(s, t)| t.sort() == s)
                }
                None => false,
            },
            Atom::Equal(a, b) => a.sort() == b.sort(),
        }
    }

    /// The deterministic base-order key: relation name (with `=` for
    /// equalities), rendered argument tuple, then positive before negative.
    pub fn order_key(&self) -> (String, String, bool) {
        match &self.atom {
            Atom::Relation { name, args } => (
                name.clone(),
                args.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", "),
                !self.positive,
            ),
            Atom::Equal(a, b) => ("=".to_string(), format!("{a}, {b}"), !self.positive),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.atom {
            Atom::Relation { name, args } => {
                if !self.positive {
                    write!(f, "!")?;
                }
                write!(f, "{name}")?;
                if !args.is_empty() {
                    let rendered: Vec<String> = args.iter().map(|t| t.to_string()).collect();
                    write!(f, "({})", rendered.join(", "))?;
                }
                Ok(())
            }
            Atom::Equal(a, b) => {
                let op = if self.positive { "=" } else { "!=" };
                write!(f, "{a} {op} {b}")
            }
        }
    }
}
