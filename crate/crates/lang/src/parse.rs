//! Parsers for language files (s-expressions) and rendered formulas.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use fol::{ConstDecl, Literal, QuantKind, RelationDecl, Signature, Sort, Term, Var};

use crate::formula::{bottom, Formula, ShapeError};
use crate::kpdnf::{build_kpdnf, KpdnfError, KpdnfOptions, PrefixItem, PrefixKind};
use fol::literals::{generate_literals, LitOptions};
use crate::sexp::{parse_all, Pos, Sexp, SexpError};
use crate::spec::{AtomsSpec, LanguageSpec, SpecError, VarBlock};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LangParseError {
    #[error("{0}")]
    Sexp(#[from] SexpError),
    #[error("{pos}: expected {what}")]
    Expected { pos: Pos, what: String },
    #[error("{pos}: unknown sort {name}")]
    UnknownSort { pos: Pos, name: String },
    #[error("{pos}: unknown name {name} (not a variable in scope or a constant)")]
    UnknownName { pos: Pos, name: String },
    #[error("{pos}: unknown constructor {name}")]
    UnknownConstructor { pos: Pos, name: String },
    #[error("{pos}: {err}")]
    Kpdnf { pos: Pos, err: KpdnfError },
    #[error("{pos}: {err}")]
    Spec { pos: Pos, err: SpecError },
    #[error("{pos}: {err}")]
    Shape { pos: Pos, err: ShapeError },
    #[error("{pos}: literal {lit} is not in the language's atoms base")]
    NotInLanguage { pos: Pos, lit: String },
    #[error("{pos}: quantifier variables do not match the language block")]
    BlockMismatch { pos: Pos },
    #[error("a language file needs exactly one language form")]
    MissingLanguageForm,
    #[error("{pos}: unexpected trailing form")]
    TrailingForm { pos: Pos },
    #[error("language file declares no signature and none was supplied")]
    NoSignature,
    #[error("{pos}: invalid signature declaration: {msg}")]
    BadSignature { pos: Pos, msg: String },
    #[error("{pos}: unexpected character {ch:?}")]
    BadChar { pos: Pos, ch: char },
    #[error("{pos}: unexpected end of input")]
    UnexpectedEnd { pos: Pos },
    #[error("{pos}: unexpected token {tok}")]
    UnexpectedToken { pos: Pos, tok: String },
}

fn expected(pos: Pos, what: impl Into<String>) -> LangParseError {
    LangParseError::Expected {
        pos,
        what: what.into(),
    }
}

// ---------------------------------------------------------------------------
// Language files
// ---------------------------------------------------------------------------

/// A parsed language file: optional signature declarations plus one language
/// form, still unresolved.
#[derive(Debug, Clone)]
pub struct ParsedLanguage {
    signature: Option<Signature>,
    form: Sexp,
}

/// Parses a language file. Signature declarations (`(sort n)`,
/// `(constant c s)`, `(relation r (s...))`) may precede the single language
/// form.
pub fn parse_language_file(text: &str) -> Result<ParsedLanguage, LangParseError> {
    let forms = parse_all(text)?;
    let mut sig = Signature::default();
    let mut saw_decl = false;
    let mut language: Option<Sexp> = None;
    for form in forms {
        let items = form
            .as_list()
            .ok_or_else(|| expected(form.pos(), "a parenthesized form"))?;
        let head = items
            .first()
            .and_then(|h| h.as_atom())
            .ok_or_else(|| expected(form.pos(), "a form starting with a symbol"))?;
        match head {
            "sort" | "constant" | "relation" => {
                if language.is_some() {
                    return Err(LangParseError::TrailingForm { pos: form.pos() });
                }
                saw_decl = true;
                parse_decl(&mut sig, head, items, form.pos())?;
            }
            _ => {
                if language.is_some() {
                    return Err(LangParseError::TrailingForm { pos: form.pos() });
                }
                language = Some(form);
            }
        }
    }
    let form = language.ok_or(LangParseError::MissingLanguageForm)?;
    if saw_decl {
        sig.validate().map_err(|e| LangParseError::BadSignature {
            pos: Pos { line: 1, col: 1 },
            msg: e.to_string(),
        })?;
    }
    Ok(ParsedLanguage {
        signature: saw_decl.then_some(sig),
        form,
    })
}

fn parse_decl(
    sig: &mut Signature,
    head: &str,
    items: &[Sexp],
    pos: Pos,
) -> Result<(), LangParseError> {
    let atom = |i: usize, what: &str| -> Result<&str, LangParseError> {
        items
            .get(i)
            .and_then(|s| s.as_atom())
            .ok_or_else(|| expected(pos, what))
    };
    match head {
        "sort" => {
            let name = atom(1, "(sort NAME)")?;
            sig.sorts.push(Sort::new(name));
        }
        "constant" => {
            let name = atom(1, "(constant NAME SORT)")?;
            let sort = atom(2, "(constant NAME SORT)")?;
            sig.constants.push(ConstDecl {
                name: name.to_string(),
                sort: Sort::new(sort),
            });
        }
        "relation" => {
            let name = atom(1, "(relation NAME (SORT...))")?;
            let args = items
                .get(2)
                .and_then(|s| s.as_list())
                .ok_or_else(|| expected(pos, "(relation NAME (SORT...))"))?;
            let mut arg_sorts = Vec::new();
            for a in args {
                let sort = a
                    .as_atom()
                    .ok_or_else(|| expected(a.pos(), "a sort name"))?;
                arg_sorts.push(Sort::new(sort));
            }
            sig.relations.push(RelationDecl {
                name: name.to_string(),
                args: arg_sorts,
            });
        }
        _ => unreachable!(),
    }
    Ok(())
}

impl ParsedLanguage {
    /// The signature declared in the file, if any.
    pub fn signature(&self) -> Option<&Signature> {
        self.signature.as_ref()
    }

    /// Resolves the language form against a signature, producing the spec.
    /// The file's own signature (when present) takes precedence and must be
    /// used by passing it here.
    pub fn resolve(&self, sig: &Signature) -> Result<Arc<LanguageSpec>, LangParseError> {
        let mut scope: Vec<Var> = Vec::new();
        let spec = resolve_form(&self.form, sig, &mut scope)?;
        spec.validate(sig).map_err(|err| LangParseError::Spec {
            pos: self.form.pos(),
            err,
        })?;
        Ok(spec)
    }
}

fn resolve_form(
    form: &Sexp,
    sig: &Signature,
    scope: &mut Vec<Var>,
) -> Result<Arc<LanguageSpec>, LangParseError> {
    let items = form
        .as_list()
        .ok_or_else(|| expected(form.pos(), "a language constructor"))?;
    let head = items
        .first()
        .and_then(|h| h.as_atom())
        .ok_or_else(|| expected(form.pos(), "a constructor symbol"))?;
    match head {
        "atoms" => {
            let litspec = items
                .get(1)
                .ok_or_else(|| expected(form.pos(), "(atoms (literals ...))"))?;
            let literals = resolve_literals(litspec, sig, scope)?;
            Ok(LanguageSpec::Atoms(AtomsSpec::new(literals)).into_arc())
        }
        "or2" | "and2" => {
            if items.len() != 3 {
                return Err(expected(form.pos(), format!("({head} LEFT RIGHT)")));
            }
            let l = resolve_form(&items[1], sig, scope)?;
            let r = resolve_form(&items[2], sig, scope)?;
            Ok(match head {
                "or2" => LanguageSpec::Or2(l, r),
                _ => LanguageSpec::And2(l, r),
            }
            .into_arc())
        }
        "or" => {
            if items.len() != 3 {
                return Err(expected(form.pos(), "(or K INNER)"));
            }
            let k = parse_usize(&items[1])?;
            let inner = resolve_form(&items[2], sig, scope)?;
            Ok(LanguageSpec::OrK(k, inner).into_arc())
        }
        "and" => {
            if items.len() != 2 {
                return Err(expected(form.pos(), "(and INNER)"));
            }
            let inner = resolve_form(&items[1], sig, scope)?;
            Ok(LanguageSpec::AndW(inner).into_arc())
        }
        "exists" | "forall" | "ef" => {
            if items.len() != 3 {
                return Err(expected(form.pos(), format!("({head} ((VAR SORT)...) INNER)")));
            }
            let vars = parse_var_list(&items[1], sig)?;
            let block = VarBlock::new(vars.clone()).map_err(|err| LangParseError::Spec {
                pos: items[1].pos(),
                err,
            })?;
            scope.extend(vars.iter().cloned());
            let inner = resolve_form(&items[2], sig, scope)?;
            scope.truncate(scope.len() - vars.len());
            Ok(match head {
                "exists" => LanguageSpec::Exists(block, inner),
                "forall" => LanguageSpec::Forall(block, inner),
                _ => LanguageSpec::Ef(block, inner),
            }
            .into_arc())
        }
        "kpdnf" => {
            if !scope.is_empty() {
                return Err(expected(form.pos(), "kpdnf only as the whole language"));
            }
            resolve_kpdnf(items, form.pos(), sig)
        }
        other => Err(LangParseError::UnknownConstructor {
            pos: form.pos(),
            name: other.to_string(),
        }),
    }
}

fn resolve_literals(
    litspec: &Sexp,
    sig: &Signature,
    scope: &[Var],
) -> Result<Vec<Literal>, LangParseError> {
    let items = litspec
        .as_list()
        .ok_or_else(|| expected(litspec.pos(), "(literals ...)"))?;
    match items.first().and_then(|h| h.as_atom()) {
        Some("literals") => {}
        _ => return Err(expected(litspec.pos(), "(literals ...)")),
    }
    let mut equality = true;
    let mut positive_only = false;
    let mut vars: Vec<Var> = scope.to_vec();
    let mut i = 1;
    while i < items.len() {
        let key = items[i]
            .as_atom()
            .ok_or_else(|| expected(items[i].pos(), "a keyword"))?;
        let value = items
            .get(i + 1)
            .ok_or_else(|| expected(items[i].pos(), format!("a value after {key}")))?;
        match key {
            ":equality" => equality = parse_bool(value)?,
            ":polarity" => {
                positive_only = match value.as_atom() {
                    Some("positive") => true,
                    Some("both") => false,
                    _ => return Err(expected(value.pos(), "positive or both")),
                }
            }
            ":vars" => vars.extend(parse_var_list(value, sig)?),
            other => return Err(expected(items[i].pos(), format!("a known keyword, not {other}"))),
        }
        i += 2;
    }
    Ok(generate_literals(
        sig,
        &vars,
        LitOptions {
            equality,
            positive_only,
        },
    ))
}

fn resolve_kpdnf(
    items: &[Sexp],
    pos: Pos,
    sig: &Signature,
) -> Result<Arc<LanguageSpec>, LangParseError> {
    let mut prefix: Option<Vec<PrefixItem>> = None;
    let mut k: Option<usize> = None;
    let mut n: Option<usize> = None;
    let mut equality = true;
    let mut i = 1;
    while i < items.len() {
        let key = items[i]
            .as_atom()
            .ok_or_else(|| expected(items[i].pos(), "a keyword"))?;
        let value = items
            .get(i + 1)
            .ok_or_else(|| expected(items[i].pos(), format!("a value after {key}")))?;
        match key {
            ":prefix" => {
                let entries = value
                    .as_list()
                    .ok_or_else(|| expected(value.pos(), "((forall VAR SORT) ...)"))?;
                let mut list = Vec::new();
                for e in entries {
                    let triple = e
                        .as_list()
                        .ok_or_else(|| expected(e.pos(), "(QUANT VAR SORT)"))?;
                    if triple.len() != 3 {
                        return Err(expected(e.pos(), "(QUANT VAR SORT)"));
                    }
                    let kind = match triple[0].as_atom() {
                        Some("forall") => PrefixKind::Forall,
                        Some("exists") => PrefixKind::Exists,
                        Some("ef") => PrefixKind::Ef,
                        _ => return Err(expected(triple[0].pos(), "forall, exists or ef")),
                    };
                    let name = triple[1]
                        .as_atom()
                        .ok_or_else(|| expected(triple[1].pos(), "a variable name"))?;
                    let sort = resolve_sort(&triple[2], sig)?;
                    list.push(PrefixItem {
                        kind,
                        var: Var::new(name, sort),
                    });
                }
                prefix = Some(list);
            }
            ":k" => k = Some(parse_usize(value)?),
            ":n" => n = Some(parse_usize(value)?),
            ":equality" => equality = parse_bool(value)?,
            other => return Err(expected(items[i].pos(), format!("a known keyword, not {other}"))),
        }
        i += 2;
    }
    let prefix = prefix.ok_or_else(|| expected(pos, ":prefix"))?;
    let k = k.ok_or_else(|| expected(pos, ":k"))?;
    let n = n.ok_or_else(|| expected(pos, ":n"))?;
    build_kpdnf(sig, &prefix, k, n, KpdnfOptions { equality })
        .map_err(|err| LangParseError::Kpdnf { pos, err })
}

fn parse_var_list(form: &Sexp, sig: &Signature) -> Result<Vec<Var>, LangParseError> {
    let entries = form
        .as_list()
        .ok_or_else(|| expected(form.pos(), "((VAR SORT) ...)"))?;
    let mut vars = Vec::new();
    for e in entries {
        let pair = e.as_list().ok_or_else(|| expected(e.pos(), "(VAR SORT)"))?;
        if pair.len() != 2 {
            return Err(expected(e.pos(), "(VAR SORT)"));
        }
        let name = pair[0]
            .as_atom()
            .ok_or_else(|| expected(pair[0].pos(), "a variable name"))?;
        let sort = resolve_sort(&pair[1], sig)?;
        vars.push(Var::new(name, sort));
    }
    Ok(vars)
}

fn resolve_sort(form: &Sexp, sig: &Signature) -> Result<Sort, LangParseError> {
    let name = form
        .as_atom()
        .ok_or_else(|| expected(form.pos(), "a sort name"))?;
    sig.sort(name)
        .cloned()
        .ok_or_else(|| LangParseError::UnknownSort {
            pos: form.pos(),
            name: name.to_string(),
        })
}

fn parse_usize(form: &Sexp) -> Result<usize, LangParseError> {
    form.as_atom()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| expected(form.pos(), "a number"))
}

fn parse_bool(form: &Sexp) -> Result<bool, LangParseError> {
    match form.as_atom() {
        Some("true") => Ok(true),
        Some("false") => Ok(false),
        _ => Err(expected(form.pos(), "true or false")),
    }
}

// ---------------------------------------------------------------------------
// Rendered formulas
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Colon,
    Dot,
    Pipe,
    Amp,
    Bang,
    Eq,
    Ne,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::LBracket => write!(f, "["),
            Tok::RBracket => write!(f, "]"),
            Tok::Semi => write!(f, ";"),
            Tok::Comma => write!(f, ","),
            Tok::Colon => write!(f, ":"),
            Tok::Dot => write!(f, "."),
            Tok::Pipe => write!(f, "|"),
            Tok::Amp => write!(f, "&"),
            Tok::Bang => write!(f, "!"),
            Tok::Eq => write!(f, "="),
            Tok::Ne => write!(f, "!="),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, LangParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut pos = Pos { line: 1, col: 1 };
    while let Some(&c) = chars.peek() {
        let here = pos;
        let mut bump = |c: char| {
            if c == '\n' {
                pos.line += 1;
                pos.col = 1;
            } else {
                pos.col += 1;
            }
        };
        match c {
            c if c.is_whitespace() => {
                chars.next();
                bump(c);
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if !(c.is_alphanumeric() || c == '_') {
                        break;
                    }
                    s.push(c);
                    chars.next();
                    bump(c);
                }
                out.push((Tok::Ident(s), here));
            }
            '!' => {
                chars.next();
                bump('!');
                if chars.peek() == Some(&'=') {
                    chars.next();
                    bump('=');
                    out.push((Tok::Ne, here));
                } else {
                    out.push((Tok::Bang, here));
                }
            }
            _ => {
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ';' => Tok::Semi,
                    ',' => Tok::Comma,
                    ':' => Tok::Colon,
                    '.' => Tok::Dot,
                    '|' => Tok::Pipe,
                    '&' => Tok::Amp,
                    '=' => Tok::Eq,
                    ch => return Err(LangParseError::BadChar { pos: here, ch }),
                };
                chars.next();
                bump(c);
                out.push((tok, here));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
struct Raw {
    kind: RawKind,
    pos: Pos,
}

#[derive(Debug, Clone)]
enum RawKind {
    False,
    Rel {
        name: String,
        args: Vec<String>,
        positive: bool,
    },
    Eq {
        a: String,
        b: String,
        positive: bool,
    },
    Or2(Box<Raw>, Box<Raw>),
    And2(Box<Raw>, Box<Raw>),
    OrSeq(Vec<Raw>),
    AndSeq(Vec<Raw>),
    Quant(QuantKind, Vec<(String, String)>, Box<Raw>),
}

struct FormulaParser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl FormulaParser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Result<(Tok, Pos), LangParseError> {
        let item = self
            .toks
            .get(self.at)
            .cloned()
            .ok_or(LangParseError::UnexpectedEnd { pos: self.end })?;
        self.at += 1;
        Ok(item)
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, LangParseError> {
        let (t, p) = self.next()?;
        if t == tok {
            Ok(p)
        } else {
            Err(LangParseError::UnexpectedToken {
                pos: p,
                tok: t.to_string(),
            })
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), LangParseError> {
        let (t, p) = self.next()?;
        match t {
            Tok::Ident(s) => Ok((s, p)),
            other => Err(LangParseError::UnexpectedToken {
                pos: p,
                tok: other.to_string(),
            }),
        }
    }

    fn formula(&mut self) -> Result<Raw, LangParseError> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Ident(word)) if word == "forall" || word == "exists" => {
                let kind = if word == "forall" {
                    QuantKind::Forall
                } else {
                    QuantKind::Exists
                };
                self.next()?;
                let mut vars = Vec::new();
                loop {
                    let (name, _) = self.ident()?;
                    self.expect(Tok::Colon)?;
                    let (sort, _) = self.ident()?;
                    vars.push((name, sort));
                    match self.next()? {
                        (Tok::Comma, _) => continue,
                        (Tok::Dot, _) => break,
                        (t, p) => {
                            return Err(LangParseError::UnexpectedToken {
                                pos: p,
                                tok: t.to_string(),
                            })
                        }
                    }
                }
                let body = self.formula()?;
                Ok(Raw {
                    kind: RawKind::Quant(kind, vars, Box::new(body)),
                    pos,
                })
            }
            Some(Tok::Ident(word)) if word == "or" || word == "and" => {
                let is_or = word == "or";
                self.next()?;
                self.expect(Tok::LBracket)?;
                let mut parts = Vec::new();
                if self.peek() != Some(&Tok::RBracket) {
                    loop {
                        parts.push(self.formula()?);
                        match self.next()? {
                            (Tok::Semi, _) => continue,
                            (Tok::RBracket, _) => break,
                            (t, p) => {
                                return Err(LangParseError::UnexpectedToken {
                                    pos: p,
                                    tok: t.to_string(),
                                })
                            }
                        }
                    }
                } else {
                    self.next()?;
                }
                Ok(Raw {
                    kind: if is_or {
                        RawKind::OrSeq(parts)
                    } else {
                        RawKind::AndSeq(parts)
                    },
                    pos,
                })
            }
            Some(Tok::Ident(word)) if word == "false" => {
                self.next()?;
                Ok(Raw {
                    kind: RawKind::False,
                    pos,
                })
            }
            Some(Tok::LParen) => {
                self.next()?;
                let a = self.formula()?;
                let (op, op_pos) = self.next()?;
                let b = self.formula()?;
                self.expect(Tok::RParen)?;
                let kind = match op {
                    Tok::Pipe => RawKind::Or2(Box::new(a), Box::new(b)),
                    Tok::Amp => RawKind::And2(Box::new(a), Box::new(b)),
                    other => {
                        return Err(LangParseError::UnexpectedToken {
                            pos: op_pos,
                            tok: other.to_string(),
                        })
                    }
                };
                Ok(Raw { kind, pos })
            }
            Some(Tok::Bang) => {
                self.next()?;
                let lit = self.literal(false)?;
                Ok(lit)
            }
            Some(Tok::Ident(_)) => self.literal(true),
            Some(t) => Err(LangParseError::UnexpectedToken {
                pos,
                tok: t.to_string(),
            }),
            None => Err(LangParseError::UnexpectedEnd { pos }),
        }
    }

    fn literal(&mut self, positive: bool) -> Result<Raw, LangParseError> {
        let (name, pos) = self.ident()?;
        match self.peek() {
            Some(Tok::LParen) => {
                self.next()?;
                let mut args = Vec::new();
                if self.peek() != Some(&Tok::RParen) {
                    loop {
                        let (arg, _) = self.ident()?;
                        args.push(arg);
                        match self.next()? {
                            (Tok::Comma, _) => continue,
                            (Tok::RParen, _) => break,
                            (t, p) => {
                                return Err(LangParseError::UnexpectedToken {
                                    pos: p,
                                    tok: t.to_string(),
                                })
                            }
                        }
                    }
                } else {
                    self.next()?;
                }
                Ok(Raw {
                    kind: RawKind::Rel {
                        name,
                        args,
                        positive,
                    },
                    pos,
                })
            }
            Some(Tok::Eq) => {
                self.next()?;
                let (b, _) = self.ident()?;
                Ok(Raw {
                    kind: RawKind::Eq {
                        a: name,
                        b,
                        positive,
                    },
                    pos,
                })
            }
            Some(Tok::Ne) => {
                self.next()?;
                let (b, _) = self.ident()?;
                Ok(Raw {
                    kind: RawKind::Eq {
                        a: name,
                        b,
                        positive: !positive,
                    },
                    pos,
                })
            }
            _ => Ok(Raw {
                kind: RawKind::Rel {
                    name,
                    args: Vec::new(),
                    positive,
                },
                pos,
            }),
        }
    }
}

/// Parses a rendered formula against its language, checking shape and
/// membership along the way.
pub fn parse_formula(
    text: &str,
    spec: &LanguageSpec,
    sig: &Signature,
) -> Result<Formula, LangParseError> {
    let toks = lex(text)?;
    let end = toks
        .last()
        .map(|(_, p)| Pos {
            line: p.line,
            col: p.col + 1,
        })
        .unwrap_or(Pos { line: 1, col: 1 });
    let mut parser = FormulaParser { toks, at: 0, end };
    let raw = parser.formula()?;
    if parser.at != parser.toks.len() {
        let (t, p) = parser.toks[parser.at].clone();
        return Err(LangParseError::UnexpectedToken {
            pos: p,
            tok: t.to_string(),
        });
    }
    let mut scope: Vec<Var> = spec
        .free_vars()
        .into_iter()
        .map(|(name, sort)| Var::new(name, sort))
        .collect();
    realize(&raw, spec, sig, &mut scope)
}

fn realize(
    raw: &Raw,
    spec: &LanguageSpec,
    sig: &Signature,
    scope: &mut Vec<Var>,
) -> Result<Formula, LangParseError> {
    match (&raw.kind, spec) {
        (RawKind::False, _) => Ok(bottom(spec)),
        (RawKind::Rel { name, args, positive }, LanguageSpec::Atoms(atoms)) => {
            let terms = args
                .iter()
                .map(|a| resolve_term(a, raw.pos, sig, scope))
                .collect::<Result<Vec<_>, _>>()?;
            let lit = Literal::relation(name.clone(), terms, *positive);
            check_membership(atoms, lit, raw.pos)
        }
        (RawKind::Eq { a, b, positive }, LanguageSpec::Atoms(atoms)) => {
            let ta = resolve_term(a, raw.pos, sig, scope)?;
            let tb = resolve_term(b, raw.pos, sig, scope)?;
            let lit = Literal::equality(ta, tb, *positive);
            check_membership(atoms, lit, raw.pos)
        }
        (RawKind::Or2(a, b), LanguageSpec::Or2(l, r)) => Ok(Formula::Or(
            Box::new(realize(a, l, sig, scope)?),
            Box::new(realize(b, r, sig, scope)?),
        )),
        (RawKind::And2(a, b), LanguageSpec::And2(l, r)) => Ok(Formula::And(
            Box::new(realize(a, l, sig, scope)?),
            Box::new(realize(b, r, sig, scope)?),
        )),
        (RawKind::OrSeq(parts), LanguageSpec::OrK(k, inner)) => {
            if parts.len() > *k {
                return Err(LangParseError::Shape {
                    pos: raw.pos,
                    err: ShapeError::TooManyDisjuncts {
                        len: parts.len(),
                        k: *k,
                    },
                });
            }
            let fs = parts
                .iter()
                .map(|p| realize(p, inner, sig, scope))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Formula::OrSeq(fs))
        }
        (RawKind::AndSeq(parts), LanguageSpec::AndW(inner)) => {
            if parts.is_empty() {
                return Err(LangParseError::Shape {
                    pos: raw.pos,
                    err: ShapeError::EmptyConjunction,
                });
            }
            let fs = parts
                .iter()
                .map(|p| realize(p, inner, sig, scope))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Formula::AndSeq(fs))
        }
        (RawKind::Quant(kind, vars, body), _) => {
            let (block, inner, allowed) = match spec {
                LanguageSpec::Exists(b, i) => (b, i, *kind == QuantKind::Exists),
                LanguageSpec::Forall(b, i) => (b, i, *kind == QuantKind::Forall),
                LanguageSpec::Ef(b, i) => (b, i, true),
                _ => {
                    return Err(LangParseError::Shape {
                        pos: raw.pos,
                        err: ShapeError::Mismatch {
                            expected: "non-quantified".to_string(),
                            found: "quantified".to_string(),
                        },
                    })
                }
            };
            if !allowed {
                return Err(LangParseError::Shape {
                    pos: raw.pos,
                    err: ShapeError::WrongQuantifier {
                        expected: "the block's quantifier".to_string(),
                        found: kind.to_string(),
                    },
                });
            }
            // the written variable list must match the block exactly
            let written: Vec<(String, String)> = vars.clone();
            let expected_vars: Vec<(String, String)> = block
                .vars()
                .iter()
                .map(|v| (v.name.clone(), v.sort.name().to_string()))
                .collect();
            if written != expected_vars {
                return Err(LangParseError::BlockMismatch { pos: raw.pos });
            }
            scope.extend(block.vars().iter().cloned());
            let f = realize(body, inner, sig, scope)?;
            scope.truncate(scope.len() - block.vars().len());
            Ok(Formula::Quant(*kind, Box::new(f)))
        }
        _ => Err(LangParseError::Shape {
            pos: raw.pos,
            err: ShapeError::Mismatch {
                expected: "the language shape".to_string(),
                found: "a different formula shape".to_string(),
            },
        }),
    }
}

fn check_membership(
    atoms: &AtomsSpec,
    lit: Literal,
    pos: Pos,
) -> Result<Formula, LangParseError> {
    if atoms.position(&lit).is_some() {
        Ok(Formula::Lit(lit))
    } else {
        Err(LangParseError::NotInLanguage {
            pos,
            lit: lit.to_string(),
        })
    }
}

fn resolve_term(
    name: &str,
    pos: Pos,
    sig: &Signature,
    scope: &[Var],
) -> Result<Term, LangParseError> {
    if let Some(v) = scope.iter().rev().find(|v| v.name == name) {
        return Ok(Term::Var(v.clone()));
    }
    if let Some(c) = sig.constant(name) {
        return Ok(Term::constant(c.name.clone(), c.sort.clone()));
    }
    Err(LangParseError::UnknownName {
        pos,
        name: name.to_string(),
    })
}

/// Variable sorts visible to a state file used with this language: the free
/// variables of the spec.
pub fn state_var_sorts(spec: &LanguageSpec) -> BTreeMap<String, Sort> {
    spec.free_vars()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::render::render;
    use crate::spec::fixtures::{ex1_spec, p_sig};

    const EX1: &str = "(sort node)\n(relation p (node))\n(forall ((x node) (y node)) (or 2 (atoms (literals :equality false))))\n";

    #[test]
    fn parses_the_running_example_file() {
        let parsed = parse_language_file(EX1).unwrap();
        let sig = parsed.signature().unwrap().clone();
        let spec = parsed.resolve(&sig).unwrap();
        assert_eq!(spec, ex1_spec());
    }

    #[test]
    fn missing_language_form_is_reported() {
        assert_eq!(
            parse_language_file("(sort node)").unwrap_err(),
            LangParseError::MissingLanguageForm
        );
    }

    #[test]
    fn formula_round_trip_through_text() {
        let spec = ex1_spec();
        let sig = p_sig();
        let all = crate::enumerate::enumerate_formulas(&spec, 100).unwrap();
        for f in all {
            let text = render(&spec, &f);
            let parsed = parse_formula(&text, &spec, &sig).unwrap();
            assert_eq!(parsed, f, "round trip failed for {text}");
        }
    }

    #[test]
    fn formula_errors_carry_positions() {
        let spec = ex1_spec();
        let sig = p_sig();
        let err = parse_formula("forall x:node, y:node. or[q(x)]", &spec, &sig).unwrap_err();
        assert!(matches!(err, LangParseError::NotInLanguage { .. }), "{err}");
        let err = parse_formula("forall x:node, y:node. or[p(z)]", &spec, &sig).unwrap_err();
        assert!(matches!(err, LangParseError::UnknownName { .. }), "{err}");
        let err = parse_formula("forall x:node. or[p(x)]", &spec, &sig).unwrap_err();
        assert!(matches!(err, LangParseError::BlockMismatch { .. }));
        let err =
            parse_formula("exists x:node, y:node. or[p(x)]", &spec, &sig).unwrap_err();
        assert!(matches!(err, LangParseError::Shape { .. }));
    }

    #[test]
    fn kpdnf_shorthand_resolves() {
        let text = "(sort node)\n(relation p (node))\n(kpdnf :prefix ((forall m node) (forall n node)) :k 1 :n 3 :equality true)\n";
        let parsed = parse_language_file(text).unwrap();
        let sig = parsed.signature().unwrap().clone();
        let spec = parsed.resolve(&sig).unwrap();
        assert!(matches!(spec.as_ref(), LanguageSpec::Forall(..)));
        spec.validate(&sig).unwrap();
    }
}
