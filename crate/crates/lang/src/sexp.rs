//! A minimal s-expression reader with source positions.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    /// A bare token: symbol, keyword, number or boolean.
    Atom { text: String, pos: Pos },
    List { items: Vec<Sexp>, pos: Pos },
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Atom { pos, .. } | Sexp::List { pos, .. } => *pos,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom { text, .. } => Some(text),
            Sexp::List { .. } => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List { items, .. } => Some(items),
            Sexp::Atom { .. } => None,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SexpError {
    #[error("{pos}: unexpected closing parenthesis")]
    UnexpectedClose { pos: Pos },
    #[error("{pos}: unclosed parenthesis")]
    UnclosedParen { pos: Pos },
    #[error("{pos}: unexpected character {ch:?}")]
    BadChar { pos: Pos, ch: char },
}

/// Reads all top-level s-expressions in the text. Comments run from `;` or
/// `#` to end of line.
pub fn parse_all(text: &str) -> Result<Vec<Sexp>, SexpError> {
    let mut chars = text.chars().peekable();
    let mut pos = Pos { line: 1, col: 1 };
    let mut stack: Vec<(Pos, Vec<Sexp>)> = Vec::new();
    let mut top: Vec<Sexp> = Vec::new();

    let push = |stack: &mut Vec<(Pos, Vec<Sexp>)>, top: &mut Vec<Sexp>, s: Sexp| {
        match stack.last_mut() {
            Some((_, items)) => items.push(s),
            None => top.push(s),
        }
    };

    while let Some(&c) = chars.peek() {
        let here = pos;
        let advance = |pos: &mut Pos, c: char| {
            if c == '\n' {
                pos.line += 1;
                pos.col = 1;
            } else {
                pos.col += 1;
            }
        };
        match c {
            '(' => {
                chars.next();
                advance(&mut pos, c);
                stack.push((here, Vec::new()));
            }
            ')' => {
                chars.next();
                advance(&mut pos, c);
                match stack.pop() {
                    Some((open_pos, items)) => push(
                        &mut stack,
                        &mut top,
                        Sexp::List {
                            items,
                            pos: open_pos,
                        },
                    ),
                    None => return Err(SexpError::UnexpectedClose { pos: here }),
                }
            }
            ';' | '#' => {
                while let Some(&c) = chars.peek() {
                    chars.next();
                    advance(&mut pos, c);
                    if c == '\n' {
                        break;
                    }
                }
            }
            c if c.is_whitespace() => {
                chars.next();
                advance(&mut pos, c);
            }
            c if is_atom_char(c) => {
                let mut text = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_atom_char(c) {
                        break;
                    }
                    text.push(c);
                    chars.next();
                    advance(&mut pos, c);
                }
                push(&mut stack, &mut top, Sexp::Atom { text, pos: here });
            }
            ch => return Err(SexpError::BadChar { pos: here, ch }),
        }
    }
    if let Some((open_pos, _)) = stack.pop() {
        return Err(SexpError::UnclosedParen { pos: open_pos });
    }
    Ok(top)
}

fn is_atom_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | ':' | '=' | '!' | '<' | '>' | '.' | '*')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_lists() {
        let forms = parse_all("(forall ((x node)) (or 2 (atoms)))  ; tail comment").unwrap();
        assert_eq!(forms.len(), 1);
        let items = forms[0].as_list().unwrap();
        assert_eq!(items[0].as_atom(), Some("forall"));
        assert_eq!(items.len(), 3);
    }

    #[test]
    fn reports_positions() {
        let err = parse_all("(a\n(b").unwrap_err();
        assert_eq!(err, SexpError::UnclosedParen { pos: Pos { line: 2, col: 1 } });
        let err = parse_all(")").unwrap_err();
        assert!(matches!(err, SexpError::UnexpectedClose { .. }));
    }
}
