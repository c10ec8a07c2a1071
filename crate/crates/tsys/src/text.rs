//! The line-oriented model file format.
//!
//! ```text
//! sort node
//! relation lock(node)
//! constant leader: node
//! init forall N:node. !lock(N)
//! safe forall M:node, N:node. (grant(M) & grant(N)) -> M = N
//! action acquire(n: node)
//!   guard !grant(n)
//!   update grant(V: node) := grant(V) | V = n
//! ```
//!
//! Formulas use `&`, `|`, `!`, `->`, `=`, `!=`, `true`, `false` and
//! `forall`/`exists` with sorted variables. Quantifiers extend to the end of
//! the enclosing formula and need parentheses under a connective. `guard` and
//! `update` lines attach to the most recent `action`; omitted guards mean
//! `true`, omitted updates frame the relation.

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use fol::{ConstDecl, Fo, Literal, QuantKind, RelationDecl, Signature, Sort, Term, Var};

use crate::model::{Action, ProtocolModel, Update};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelParseError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:1: unknown directive {directive}")]
    UnknownDirective { line: usize, directive: String },
    #[error("{line}:1: {which} outside an action block")]
    OrphanClause { line: usize, which: String },
    #[error("{line}:1: duplicate {what}")]
    Duplicate { line: usize, what: String },
    #[error("model declares no init formula")]
    MissingInit,
    #[error("invalid signature: {0}")]
    BadSignature(String),
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ModelParseError {
    ModelParseError::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

// ---------------------------------------------------------------------------
// Tokens
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Colon,
    Dot,
    Amp,
    Pipe,
    Bang,
    Arrow,
    Assign,
    Eq,
    Ne,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Tok::Ident(s) => s.as_str(),
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Dot => ".",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Bang => "!",
            Tok::Arrow => "->",
            Tok::Assign => ":=",
            Tok::Eq => "=",
            Tok::Ne => "!=",
        };
        write!(f, "{s}")
    }
}

fn lex_line(line_no: usize, text: &str) -> Result<Vec<(Tok, usize)>, ModelParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' => i += 1,
            '#' => break, // comment to end of line
            c if c.is_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            }
            '(' => {
                out.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, col));
                i += 1;
            }
            ',' => {
                out.push((Tok::Comma, col));
                i += 1;
            }
            '.' => {
                out.push((Tok::Dot, col));
                i += 1;
            }
            '&' => {
                out.push((Tok::Amp, col));
                i += 1;
            }
            '|' => {
                out.push((Tok::Pipe, col));
                i += 1;
            }
            ':' => {
                if chars.get(i + 1) == Some(&'=') {
                    out.push((Tok::Assign, col));
                    i += 2;
                } else {
                    out.push((Tok::Colon, col));
                    i += 1;
                }
            }
            '!' => {
                if chars.get(i + 1) == Some(&'=') {
                    out.push((Tok::Ne, col));
                    i += 2;
                } else {
                    out.push((Tok::Bang, col));
                    i += 1;
                }
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    out.push((Tok::Arrow, col));
                    i += 2;
                } else {
                    return Err(syntax(line_no, col, "unexpected character '-'"));
                }
            }
            '=' => {
                out.push((Tok::Eq, col));
                i += 1;
            }
            ch => return Err(syntax(line_no, col, format!("unexpected character {ch:?}"))),
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Formula parser
// ---------------------------------------------------------------------------

struct FoParser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    line: usize,
    sig: &'a Signature,
    scope: Vec<Var>,
}

impl<'a> FoParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.at)
            .map(|(_, c)| *c)
            .or_else(|| self.toks.last().map(|(_, c)| c + 1))
            .unwrap_or(1)
    }

    fn next(&mut self) -> Result<(Tok, usize), ModelParseError> {
        let item = self
            .toks
            .get(self.at)
            .cloned()
            .ok_or_else(|| syntax(self.line, self.col(), "unexpected end of line"))?;
        self.at += 1;
        Ok(item)
    }

    fn expect(&mut self, tok: Tok) -> Result<usize, ModelParseError> {
        let (t, c) = self.next()?;
        if t == tok {
            Ok(c)
        } else {
            Err(syntax(self.line, c, format!("expected {tok}, found {t}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize), ModelParseError> {
        let (t, c) = self.next()?;
        match t {
            Tok::Ident(s) => Ok((s, c)),
            other => Err(syntax(self.line, c, format!("expected {what}, found {other}"))),
        }
    }

    fn at_end(&self) -> bool {
        self.at == self.toks.len()
    }

    /// formula := quantified | implication
    fn formula(&mut self) -> Result<Fo, ModelParseError> {
        if let Some(Tok::Ident(w)) = self.peek() {
            if w == "forall" || w == "exists" {
                return self.quantified();
            }
        }
        self.implication()
    }

    fn quantified(&mut self) -> Result<Fo, ModelParseError> {
        let (word, _) = self.ident("a quantifier")?;
        let kind = if word == "forall" {
            QuantKind::Forall
        } else {
            QuantKind::Exists
        };
        let mut vars = Vec::new();
        loop {
            let (name, _) = self.ident("a variable name")?;
            self.expect(Tok::Colon)?;
            let (sort_name, sort_col) = self.ident("a sort name")?;
            let sort = self.sig.sort(&sort_name).cloned().ok_or_else(|| {
                syntax(self.line, sort_col, format!("unknown sort {sort_name}"))
            })?;
            vars.push(Var::new(name, sort));
            match self.next()? {
                (Tok::Comma, _) => continue,
                (Tok::Dot, _) => break,
                (t, c) => return Err(syntax(self.line, c, format!("expected , or . found {t}"))),
            }
        }
        let depth = self.scope.len();
        self.scope.extend(vars.iter().cloned());
        let body = self.formula()?;
        self.scope.truncate(depth);
        Ok(Fo::Quant(kind, vars, Box::new(body)))
    }

    /// implication := disjunction ('->' formula)?   (right associative)
    fn implication(&mut self) -> Result<Fo, ModelParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.next()?;
            let rhs = self.formula()?;
            return Ok(Fo::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Fo, ModelParseError> {
        let mut parts = vec![self.conjunction()?];
        while self.peek() == Some(&Tok::Pipe) {
            self.next()?;
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Fo::Or(parts)
        })
    }

    fn conjunction(&mut self) -> Result<Fo, ModelParseError> {
        let mut parts = vec![self.unary()?];
        while self.peek() == Some(&Tok::Amp) {
            self.next()?;
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Fo::And(parts)
        })
    }

    fn unary(&mut self) -> Result<Fo, ModelParseError> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.next()?;
                Ok(Fo::Not(Box::new(self.unary()?)))
            }
            Some(Tok::LParen) => {
                self.next()?;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Fo, ModelParseError> {
        let (name, col) = self.ident("a formula")?;
        match name.as_str() {
            "true" => return Ok(Fo::True),
            "false" => return Ok(Fo::False),
            _ => {}
        }
        if self.peek() == Some(&Tok::LParen) {
            self.next()?;
            let mut args = Vec::new();
            if self.peek() != Some(&Tok::RParen) {
                loop {
                    let (arg, arg_col) = self.ident("a term")?;
                    args.push(self.resolve_term(&arg, arg_col)?);
                    match self.next()? {
                        (Tok::Comma, _) => continue,
                        (Tok::RParen, _) => break,
                        (t, c) => {
                            return Err(syntax(self.line, c, format!("expected , or ) found {t}")))
                        }
                    }
                }
            } else {
                self.next()?;
            }
            return self.relation_literal(name, args, col);
        }
        // an equality, or a nullary relation
        match self.peek() {
            Some(Tok::Eq) | Some(Tok::Ne) => {
                let positive = self.next()?.0 == Tok::Eq;
                let a = self.resolve_term(&name, col)?;
                let (b_name, b_col) = self.ident("a term")?;
                let b = self.resolve_term(&b_name, b_col)?;
                if a.sort() != b.sort() {
                    return Err(syntax(
                        self.line,
                        col,
                        format!("equality between sorts {} and {}", a.sort(), b.sort()),
                    ));
                }
                Ok(Fo::Lit(Literal::equality(a, b, positive)))
            }
            _ => self.relation_literal(name, Vec::new(), col),
        }
    }

    fn relation_literal(
        &mut self,
        name: String,
        args: Vec<Term>,
        col: usize,
    ) -> Result<Fo, ModelParseError> {
        let decl = self
            .sig
            .relation(&name)
            .ok_or_else(|| syntax(self.line, col, format!("unknown relation {name}")))?;
        if decl.args.len() != args.len() {
            return Err(syntax(
                self.line,
                col,
                format!(
                    "relation {name} takes {} arguments, got {}",
                    decl.args.len(),
                    args.len()
                ),
            ));
        }
        for (term, expected) in args.iter().zip(&decl.args) {
            if term.sort() != expected {
                return Err(syntax(
                    self.line,
                    col,
                    format!("argument {term} of {name} has sort {}, expected {expected}", term.sort()),
                ));
            }
        }
        Ok(Fo::Lit(Literal::relation(name, args, true)))
    }

    fn resolve_term(&self, name: &str, col: usize) -> Result<Term, ModelParseError> {
        if let Some(v) = self.scope.iter().rev().find(|v| v.name == name) {
            return Ok(Term::Var(v.clone()));
        }
        if let Some(c) = self.sig.constant(name) {
            return Ok(Term::constant(c.name.clone(), c.sort.clone()));
        }
        Err(syntax(
            self.line,
            col,
            format!("unknown name {name} (not a variable in scope or a constant)"),
        ))
    }

    /// `name(v: sort, ...)` headers for actions and updates.
    fn typed_params(&mut self) -> Result<Vec<Var>, ModelParseError> {
        let mut params = Vec::new();
        if self.peek() != Some(&Tok::LParen) {
            return Ok(params);
        }
        self.next()?;
        if self.peek() == Some(&Tok::RParen) {
            self.next()?;
            return Ok(params);
        }
        loop {
            let (name, name_col) = self.ident("a parameter name")?;
            self.expect(Tok::Colon)?;
            let (sort_name, sort_col) = self.ident("a sort name")?;
            let sort = self.sig.sort(&sort_name).cloned().ok_or_else(|| {
                syntax(self.line, sort_col, format!("unknown sort {sort_name}"))
            })?;
            if params.iter().any(|p: &Var| p.name == name) {
                return Err(syntax(
                    self.line,
                    name_col,
                    format!("duplicate parameter {name}"),
                ));
            }
            params.push(Var::new(name, sort));
            match self.next()? {
                (Tok::Comma, _) => continue,
                (Tok::RParen, _) => break,
                (t, c) => return Err(syntax(self.line, c, format!("expected , or ) found {t}"))),
            }
        }
        Ok(params)
    }
}

// ---------------------------------------------------------------------------
// Model parser
// ---------------------------------------------------------------------------

/// Parses a model file.
pub fn parse_model(text: &str) -> Result<ProtocolModel, ModelParseError> {
    // first pass: signature lines
    let mut sig = Signature::default();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let toks = lex_line(line_no, raw_line)?;
        let Some((Tok::Ident(head), _)) = toks.first() else {
            continue;
        };
        let mut p = FoParser {
            toks: toks[1..].to_vec(),
            at: 0,
            line: line_no,
            sig: &sig,
            scope: Vec::new(),
        };
        match head.as_str() {
            "sort" => {
                let (name, _) = p.ident("a sort name")?;
                sig.sorts.push(Sort::new(name));
            }
            "constant" => {
                let (name, _) = p.ident("a constant name")?;
                p.expect(Tok::Colon)?;
                let (sort_name, col) = p.ident("a sort name")?;
                let sort = sig
                    .sort(&sort_name)
                    .cloned()
                    .ok_or_else(|| syntax(line_no, col, format!("unknown sort {sort_name}")))?;
                sig.constants.push(ConstDecl { name, sort });
            }
            "relation" => {
                let (name, _) = p.ident("a relation name")?;
                let mut args = Vec::new();
                if p.peek() == Some(&Tok::LParen) {
                    p.next()?;
                    if p.peek() != Some(&Tok::RParen) {
                        loop {
                            let (sort_name, col) = p.ident("a sort name")?;
                            let sort = sig.sort(&sort_name).cloned().ok_or_else(|| {
                                syntax(line_no, col, format!("unknown sort {sort_name}"))
                            })?;
                            args.push(sort);
                            match p.next()? {
                                (Tok::Comma, _) => continue,
                                (Tok::RParen, _) => break,
                                (t, c) => {
                                    return Err(syntax(
                                        line_no,
                                        c,
                                        format!("expected , or ) found {t}"),
                                    ))
                                }
                            }
                        }
                    } else {
                        p.next()?;
                    }
                }
                sig.relations.push(RelationDecl { name, args });
            }
            _ => {}
        }
    }
    sig.validate()
        .map_err(|e| ModelParseError::BadSignature(e.to_string()))?;
    let sig = Arc::new(sig);

    // second pass: formulas and actions
    let mut init: Option<Fo> = None;
    let mut safety: Option<Fo> = None;
    let mut actions: Vec<Action> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let toks = lex_line(line_no, raw_line)?;
        let Some((head_tok, _)) = toks.first() else {
            continue;
        };
        let Tok::Ident(head) = head_tok else {
            return Err(syntax(line_no, 1, format!("unexpected token {head_tok}")));
        };
        let mut p = FoParser {
            toks: toks[1..].to_vec(),
            at: 0,
            line: line_no,
            sig: &sig,
            scope: Vec::new(),
        };
        match head.as_str() {
            "sort" | "constant" | "relation" => {}
            "init" => {
                if init.is_some() {
                    return Err(ModelParseError::Duplicate {
                        line: line_no,
                        what: "init".to_string(),
                    });
                }
                let f = p.formula()?;
                expect_line_end(&p)?;
                init = Some(f);
            }
            "safe" => {
                if safety.is_some() {
                    return Err(ModelParseError::Duplicate {
                        line: line_no,
                        what: "safe".to_string(),
                    });
                }
                let f = p.formula()?;
                expect_line_end(&p)?;
                safety = Some(f);
            }
            "action" => {
                let (name, _) = p.ident("an action name")?;
                let params = p.typed_params()?;
                expect_line_end(&p)?;
                actions.push(Action {
                    name,
                    params,
                    guard: Fo::True,
                    updates: Vec::new(),
                });
            }
            "guard" => {
                let action = actions.last_mut().ok_or_else(|| ModelParseError::OrphanClause {
                    line: line_no,
                    which: "guard".to_string(),
                })?;
                p.scope = action.params.clone();
                let f = p.formula()?;
                expect_line_end(&p)?;
                action.guard = match std::mem::replace(&mut action.guard, Fo::True) {
                    Fo::True => f,
                    g => Fo::And(vec![g, f]),
                };
            }
            "update" => {
                let params = actions
                    .last()
                    .ok_or_else(|| ModelParseError::OrphanClause {
                        line: line_no,
                        which: "update".to_string(),
                    })?
                    .params
                    .clone();
                let (rel_name, rel_col) = p.ident("a relation name")?;
                let decl = sig.relation(&rel_name).ok_or_else(|| {
                    syntax(line_no, rel_col, format!("unknown relation {rel_name}"))
                })?;
                let vars = p.typed_params()?;
                if vars.len() != decl.args.len()
                    || vars.iter().zip(&decl.args).any(|(v, s)| &v.sort != s)
                {
                    return Err(syntax(
                        line_no,
                        rel_col,
                        format!("update variables do not match the arguments of {rel_name}"),
                    ));
                }
                p.expect(Tok::Assign)?;
                p.scope = params;
                p.scope.extend(vars.iter().cloned());
                let formula = p.formula()?;
                expect_line_end(&p)?;
                let action = actions.last_mut().unwrap();
                if action.update_for(&rel_name).is_some() {
                    return Err(ModelParseError::Duplicate {
                        line: line_no,
                        what: format!("update for {rel_name}"),
                    });
                }
                action.updates.push(Update {
                    relation: rel_name,
                    vars,
                    formula,
                });
            }
            other => {
                return Err(ModelParseError::UnknownDirective {
                    line: line_no,
                    directive: other.to_string(),
                })
            }
        }
    }
    Ok(ProtocolModel {
        signature: sig,
        init: init.ok_or(ModelParseError::MissingInit)?,
        safety,
        actions,
    })
}

fn expect_line_end(p: &FoParser) -> Result<(), ModelParseError> {
    if p.at_end() {
        Ok(())
    } else {
        let (t, c) = p.toks[p.at].clone();
        Err(syntax(p.line, c, format!("unexpected trailing token {t}")))
    }
}

// ---------------------------------------------------------------------------
// Renderer
// ---------------------------------------------------------------------------

/// Renders a formula with minimal parentheses matching the parser's
/// precedence: `!` over `&` over `|` over `->`; quantifiers are
/// parenthesized under any connective.
pub fn render_fo(f: &Fo) -> String {
    render_prec(f, 0)
}

fn render_prec(f: &Fo, prec: u8) -> String {
    let wrap = |s: String, level: u8| {
        if prec > level {
            format!("({s})")
        } else {
            s
        }
    };
    match f {
        Fo::True => "true".to_string(),
        Fo::False => "false".to_string(),
        Fo::Lit(lit) => lit.to_string(),
        Fo::Not(inner) => format!("!{}", render_prec(inner, 4)),
        Fo::And(parts) => wrap(
            parts
                .iter()
                .map(|p| render_prec(p, 3))
                .collect::<Vec<_>>()
                .join(" & "),
            2,
        ),
        Fo::Or(parts) => wrap(
            parts
                .iter()
                .map(|p| render_prec(p, 2))
                .collect::<Vec<_>>()
                .join(" | "),
            1,
        ),
        Fo::Implies(a, b) => wrap(
            format!("{} -> {}", render_prec(a, 1), render_prec(b, 0)),
            0,
        ),
        Fo::Quant(kind, vars, body) => {
            let vs: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
            wrap(
                format!("{} {}. {}", kind, vs.join(", "), render_prec(body, 0)),
                0,
            )
        }
    }
}

/// Renders a model back into the file format.
pub fn render_model(model: &ProtocolModel) -> String {
    let mut out = String::new();
    for s in &model.signature.sorts {
        writeln!(out, "sort {s}").unwrap();
    }
    for c in &model.signature.constants {
        writeln!(out, "constant {}: {}", c.name, c.sort).unwrap();
    }
    for r in &model.signature.relations {
        let args: Vec<String> = r.args.iter().map(|s| s.to_string()).collect();
        writeln!(out, "relation {}({})", r.name, args.join(", ")).unwrap();
    }
    writeln!(out, "init {}", render_fo(&model.init)).unwrap();
    if let Some(safety) = &model.safety {
        writeln!(out, "safe {}", render_fo(safety)).unwrap();
    }
    for a in &model.actions {
        let params: Vec<String> = a.params.iter().map(|v| v.to_string().replace(':', ": ")).collect();
        writeln!(out, "action {}({})", a.name, params.join(", ")).unwrap();
        if a.guard != Fo::True {
            writeln!(out, "  guard {}", render_fo(&a.guard)).unwrap();
        }
        for u in &a.updates {
            let vars: Vec<String> = u.vars.iter().map(|v| v.to_string().replace(':', ": ")).collect();
            writeln!(
                out,
                "  update {}({}) := {}",
                u.relation,
                vars.join(", "),
                render_fo(&u.formula)
            )
            .unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const LOCKSERV: &str = "\
sort node
relation lock(node)
relation grant(node)
init forall N:node. !lock(N) & !grant(N)
safe forall M:node, N:node. (grant(M) & grant(N)) -> M = N
action request(n: node)
  guard !lock(n)
  update lock(V: node) := lock(V) | V = n
action acquire(n: node)
  guard lock(n) & (forall W:node. !grant(W))
  update grant(V: node) := grant(V) | V = n
action release(n: node)
  guard grant(n)
  update grant(V: node) := grant(V) & V != n
  update lock(V: node) := lock(V) & V != n
";

    #[test]
    fn parses_the_lock_server() {
        let model = parse_model(LOCKSERV).unwrap();
        assert_eq!(model.signature.relations.len(), 2);
        assert_eq!(model.actions.len(), 3);
        assert!(model.safety.is_some());
        assert_eq!(model.actions[0].name, "request");
        assert_eq!(model.actions[2].updates.len(), 2);
    }

    #[test]
    fn round_trips_through_rendering() {
        let model = parse_model(LOCKSERV).unwrap();
        let rendered = render_model(&model);
        let reparsed = parse_model(&rendered).unwrap();
        assert_eq!(model, reparsed);
    }

    #[test]
    fn reports_unknown_names_with_position() {
        let bad = "sort node\nrelation p(node)\ninit p(x)\n";
        let err = parse_model(bad).unwrap_err();
        assert!(matches!(err, ModelParseError::Syntax { line: 3, .. }), "{err}");
    }

    #[test]
    fn guard_outside_action_is_rejected() {
        let bad = "sort node\ninit true\nguard true\n";
        assert!(matches!(
            parse_model(bad).unwrap_err(),
            ModelParseError::OrphanClause { .. }
        ));
    }

    #[test]
    fn missing_init_is_rejected() {
        assert_eq!(
            parse_model("sort node\n").unwrap_err(),
            ModelParseError::MissingInit
        );
    }

    #[test]
    fn formula_precedence() {
        let text = "sort node\nrelation p(node)\nrelation q(node)\ninit forall X:node. p(X) & q(X) | !p(X) -> q(X)\n";
        let model = parse_model(text).unwrap();
        // -> binds loosest: ((p&q) | !p) -> q
        let Fo::Quant(_, _, body) = &model.init else {
            panic!()
        };
        assert!(matches!(body.as_ref(), Fo::Implies(..)));
        let rendered = render_fo(&model.init);
        assert_eq!(rendered, "forall X:node. p(X) & q(X) | !p(X) -> q(X)");
    }
}
