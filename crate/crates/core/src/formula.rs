//! Formulas over monadic predicates in the single variable `x`.
//!
//! Concrete syntax (ASCII):
//!
//! ```text
//! formula := imp
//! imp     := or  ( "->q" or )*
//! or      := and ( ("|" | "|q") and )*
//! and     := unary ( ("&" | "&q") unary )*
//! unary   := ("~" | "~q") unary | atom
//! atom    := IDENT | "(" formula ")"
//! IDENT   := [A-Za-z][A-Za-z0-9_]*
//! ```
//!
//! The variable is implicit: `E` stands for `E(x)`. A `q` suffix makes an
//! operator quantum only when the next character cannot continue an
//! identifier, so `~qE` is the classical negation of the predicate `qE` while
//! `~q E` and `~q(E)` are quantum negations.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub const MAX_ENUMERATION_DEPTH: usize = 4;
pub const MAX_ENUMERATION_LEN: u128 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredicateId(Arc<str>);

impl PredicateId {
    pub fn new(name: &str) -> Result<Self> {
        if !is_identifier(name) {
            return Err(Error::InvalidModel(format!(
                "{name:?} is not a valid predicate name"
            )));
        }
        Ok(PredicateId(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PredicateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Pred(PredicateId),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    QNot(Arc<Formula>),
    QAnd(Arc<Formula>, Arc<Formula>),
    QOr(Arc<Formula>, Arc<Formula>),
    QImp(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    /// Atomic formula; panics on an invalid identifier.
    pub fn pred(name: &str) -> Formula {
        Formula::Pred(PredicateId::new(name).expect("valid predicate name"))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Arc::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn qnot(f: Formula) -> Formula {
        Formula::QNot(Arc::new(f))
    }

    pub fn qand(a: Formula, b: Formula) -> Formula {
        Formula::QAnd(Arc::new(a), Arc::new(b))
    }

    pub fn qor(a: Formula, b: Formula) -> Formula {
        Formula::QOr(Arc::new(a), Arc::new(b))
    }

    pub fn qimp(a: Formula, b: Formula) -> Formula {
        Formula::QImp(Arc::new(a), Arc::new(b))
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Pred(_) => 0,
            Formula::Not(a) | Formula::QNot(a) => 1 + a.depth(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::QAnd(a, b)
            | Formula::QOr(a, b)
            | Formula::QImp(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn is_quantum_node(&self) -> bool {
        matches!(
            self,
            Formula::QNot(_) | Formula::QAnd(..) | Formula::QOr(..) | Formula::QImp(..)
        )
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Pred(_) => vec![],
            Formula::Not(a) | Formula::QNot(a) => vec![a],
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::QAnd(a, b)
            | Formula::QOr(a, b)
            | Formula::QImp(a, b) => vec![a, b],
        }
    }

    /// True iff the tree contains no quantum connective.
    pub fn is_classical(&self) -> bool {
        !self.is_quantum_node() && self.children().into_iter().all(Formula::is_classical)
    }

    /// Predicates at the leaves, in left-to-right order with repeats.
    pub fn leaves(&self) -> Vec<&PredicateId> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a PredicateId>) {
        match self {
            Formula::Pred(p) => out.push(p),
            _ => self
                .children()
                .into_iter()
                .for_each(|c| c.collect_leaves(out)),
        }
    }

    /// Applies `rename` to every leaf.
    pub fn map_leaves(&self, rename: &impl Fn(&PredicateId) -> PredicateId) -> Formula {
        let m = |a: &Arc<Formula>| Arc::new(a.map_leaves(rename));
        match self {
            Formula::Pred(p) => Formula::Pred(rename(p)),
            Formula::Not(a) => Formula::Not(m(a)),
            Formula::QNot(a) => Formula::QNot(m(a)),
            Formula::And(a, b) => Formula::And(m(a), m(b)),
            Formula::Or(a, b) => Formula::Or(m(a), m(b)),
            Formula::QAnd(a, b) => Formula::QAnd(m(a), m(b)),
            Formula::QOr(a, b) => Formula::QOr(m(a), m(b)),
            Formula::QImp(a, b) => Formula::QImp(m(a), m(b)),
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    QNot,
    And,
    QAnd,
    Or,
    QOr,
    QImp,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Not => "'~'".into(),
            Tok::QNot => "'~q'".into(),
            Tok::And => "'&'".into(),
            Tok::QAnd => "'&q'".into(),
            Tok::Or => "'|'".into(),
            Tok::QOr => "'|q'".into(),
            Tok::QImp => "'->q'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
        }
    }
}

/// Tokens with 1-based character positions.
fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let ident_char = |c: char| c.is_ascii_alphanumeric() || c == '_';
    // `q` suffix applies only when it is not the start of an identifier.
    let q_suffix = |i: usize| chars.get(i) == Some(&'q') && !chars.get(i + 1).is_some_and(|&c| ident_char(c));

    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            '~' | '&' | '|' => {
                let quantum = q_suffix(i + 1);
                let tok = match (c, quantum) {
                    ('~', false) => Tok::Not,
                    ('~', true) => Tok::QNot,
                    ('&', false) => Tok::And,
                    ('&', true) => Tok::QAnd,
                    ('|', false) => Tok::Or,
                    _ => Tok::QOr,
                };
                out.push((pos, tok));
                i += if quantum { 2 } else { 1 };
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') && q_suffix(i + 2) {
                    out.push((pos, Tok::QImp));
                    i += 3;
                } else {
                    return Err(Error::Syntax {
                        position: pos,
                        message: "unknown token; expected '->q'".into(),
                    });
                }
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && ident_char(chars[i]) {
                    i += 1;
                }
                out.push((pos, Tok::Ident(chars[start..i].iter().collect())));
            }
            other => {
                return Err(Error::Syntax {
                    position: pos,
                    message: format!("unknown token {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position: self.pos(),
            message: message.into(),
        })
    }

    fn imp(&mut self) -> Result<Formula> {
        let mut lhs = self.or()?;
        while self.peek() == Some(&Tok::QImp) {
            self.at += 1;
            let rhs = self.or()?;
            lhs = Formula::qimp(lhs, rhs);
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        loop {
            let ctor: fn(Formula, Formula) -> Formula = match self.peek() {
                Some(Tok::Or) => Formula::or,
                Some(Tok::QOr) => Formula::qor,
                _ => return Ok(lhs),
            };
            self.at += 1;
            let rhs = self.and()?;
            lhs = ctor(lhs, rhs);
        }
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        loop {
            let ctor: fn(Formula, Formula) -> Formula = match self.peek() {
                Some(Tok::And) => Formula::and,
                Some(Tok::QAnd) => Formula::qand,
                _ => return Ok(lhs),
            };
            self.at += 1;
            let rhs = self.unary()?;
            lhs = ctor(lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Not) => {
                self.at += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::QNot) => {
                self.at += 1;
                Ok(Formula::qnot(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.at += 1;
                Ok(Formula::Pred(PredicateId(Arc::from(name.as_str()))))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.imp()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.error("expected ')'");
                }
                self.at += 1;
                Ok(inner)
            }
            Some(t) => self.error(format!("expected formula, found {}", t.describe())),
            None => self.error("expected formula, found end of input"),
        }
    }
}

/// Parses formula text. Error positions are 1-based character columns; an
/// error at end of input reports `len + 1`.
pub fn parse(text: &str) -> Result<Formula> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.chars().count() + 1,
    };
    let f = p.imp()?;
    if let Some(t) = p.peek() {
        let msg = format!("unexpected {}", t.describe());
        return p.error(msg);
    }
    Ok(f)
}

// ---------------------------------------------------------------------------
// Renderer

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::QImp(..) => 1,
        Formula::Or(..) | Formula::QOr(..) => 2,
        Formula::And(..) | Formula::QAnd(..) => 3,
        Formula::Not(_) | Formula::QNot(_) => 4,
        Formula::Pred(_) => 5,
    }
}

fn render_into(f: &Formula, out: &mut String) {
    let wrap = |child: &Formula, need: bool, out: &mut String| {
        if need {
            out.push('(');
            render_into(child, out);
            out.push(')');
        } else {
            render_into(child, out);
        }
    };
    match f {
        Formula::Pred(p) => out.push_str(p.as_str()),
        Formula::Not(a) | Formula::QNot(a) => {
            out.push_str(if matches!(f, Formula::Not(_)) { "~" } else { "~q" });
            let need = precedence(a) < 4;
            // `~q` directly before an identifier would lex as `~` + ident.
            if !need && matches!(f, Formula::QNot(_)) && matches!(**a, Formula::Pred(_)) {
                out.push(' ');
            }
            wrap(a, need, out);
        }
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::QAnd(a, b)
        | Formula::QOr(a, b)
        | Formula::QImp(a, b) => {
            let op = match f {
                Formula::And(..) => "&",
                Formula::Or(..) => "|",
                Formula::QAnd(..) => "&q",
                Formula::QOr(..) => "|q",
                _ => "->q",
            };
            let prec = precedence(f);
            wrap(a, precedence(a) < prec, out);
            out.push(' ');
            out.push_str(op);
            out.push(' ');
            wrap(b, precedence(b) <= prec, out);
        }
    }
}

/// Minimal-parenthesis rendering; `parse(&render(f)) == f`.
pub fn render(f: &Formula) -> String {
    let mut s = String::new();
    render_into(f, &mut s);
    s
}

// ---------------------------------------------------------------------------
// Classification

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LanguageTag {
    /// Classical, with at least one non-property leaf.
    EffectWff,
    /// Classical over property predicates only.
    PropertyWff,
    /// Property leaves under quantum connectives only.
    PureQwff,
    Mixed,
}

pub fn classify(f: &Formula, property_names: &BTreeSet<PredicateId>) -> LanguageTag {
    let all_props = f.leaves().into_iter().all(|p| property_names.contains(p));
    if f.is_classical() {
        return if all_props {
            LanguageTag::PropertyWff
        } else {
            LanguageTag::EffectWff
        };
    }
    fn internal_all_quantum(f: &Formula) -> bool {
        match f {
            Formula::Pred(_) => true,
            _ => f.is_quantum_node() && f.children().into_iter().all(internal_all_quantum),
        }
    }
    if all_props && internal_all_quantum(f) {
        LanguageTag::PureQwff
    } else {
        LanguageTag::Mixed
    }
}

// ---------------------------------------------------------------------------
// Enumeration

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConnectiveFamily {
    /// `~`, `&`, `|`.
    Classical,
    /// `~q`, `&q`, `|q`, `->q`.
    Quantum,
}

impl ConnectiveFamily {
    fn unary(self) -> fn(Formula) -> Formula {
        match self {
            ConnectiveFamily::Classical => Formula::not,
            ConnectiveFamily::Quantum => Formula::qnot,
        }
    }

    fn binary(self) -> &'static [fn(Formula, Formula) -> Formula] {
        match self {
            ConnectiveFamily::Classical => &[Formula::and, Formula::or],
            ConnectiveFamily::Quantum => &[Formula::qand, Formula::qor, Formula::qimp],
        }
    }
}

pub fn check_depth(requested: usize, max: usize) -> Result<()> {
    if requested > max {
        Err(Error::DepthLimitExceeded { requested, max })
    } else {
        Ok(())
    }
}

/// Number of formulas of depth at most `max_depth` (saturating).
pub fn count_formulas(n_predicates: usize, max_depth: usize, family: ConnectiveFamily) -> u128 {
    let binary = family.binary().len() as u128;
    let leaves = n_predicates as u128;
    let mut total = leaves;
    for _ in 0..max_depth {
        total = leaves
            .saturating_add(total)
            .saturating_add(binary.saturating_mul(total.saturating_mul(total)));
    }
    total
}

/// All formulas over `predicates` up to `max_depth`, without duplicates.
///
/// Order: by exact depth; within a depth, unary nodes first, then each binary
/// connective in family order over pairs `(a, b)` in lexicographic order of
/// their positions in the sequence so far.
pub fn enumerate_formulas(
    predicates: &[PredicateId],
    max_depth: usize,
    family: ConnectiveFamily,
) -> Result<Vec<Formula>> {
    check_depth(max_depth, MAX_ENUMERATION_DEPTH)?;
    let count = count_formulas(predicates.len(), max_depth, family);
    if count > MAX_ENUMERATION_LEN {
        return Err(Error::EnumerationTooLarge {
            count,
            limit: MAX_ENUMERATION_LEN,
        });
    }
    let mut preds: Vec<PredicateId> = Vec::new();
    for p in predicates {
        if !preds.contains(p) {
            preds.push(p.clone());
        }
    }

    let mut all: Vec<Formula> = preds.into_iter().map(Formula::Pred).collect();
    // `all[layer_start..]` are the formulas of the previous exact depth.
    let mut layer_start = 0;
    for _ in 0..max_depth {
        let prev_len = all.len();
        let mut next = Vec::new();
        for f in &all[layer_start..prev_len] {
            next.push(family.unary()(f.clone()));
        }
        for ctor in family.binary() {
            for i in 0..prev_len {
                for j in 0..prev_len {
                    if i < layer_start && j < layer_start {
                        continue;
                    }
                    next.push(ctor(all[i].clone(), all[j].clone()));
                }
            }
        }
        layer_start = prev_len;
        all.extend(next);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str) -> Formula {
        Formula::pred(name)
    }

    fn ids(names: &[&str]) -> Vec<PredicateId> {
        names.iter().map(|n| PredicateId::new(n).unwrap()).collect()
    }

    #[test]
    fn parses_examples() {
        assert_eq!(parse("E & ~F").unwrap(), Formula::and(p("E"), Formula::not(p("F"))));
        assert_eq!(
            parse("E |q (F &q G)").unwrap(),
            Formula::qor(p("E"), Formula::qand(p("F"), p("G")))
        );
    }

    #[test]
    fn unbalanced_parenthesis_position() {
        assert_eq!(
            parse("E & (F").unwrap_err(),
            Error::Syntax {
                position: 7,
                message: "expected ')'".into()
            }
        );
    }

    #[test]
    fn syntax_errors() {
        let pos = |s: &str| match parse(s).unwrap_err() {
            Error::Syntax { position, .. } => position,
            e => panic!("unexpected {e:?}"),
        };
        assert_eq!(pos(""), 1);
        assert_eq!(pos("E &"), 4);
        assert_eq!(pos("E)"), 2);
        assert_eq!(pos("E $ F"), 3);
        assert_eq!(pos("E -> F"), 3);
        assert_eq!(pos("& E"), 1);
        assert_eq!(pos("E F"), 3);
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse("E | F & G").unwrap(),
            Formula::or(p("E"), Formula::and(p("F"), p("G")))
        );
        assert_eq!(
            parse("E & F & G").unwrap(),
            Formula::and(Formula::and(p("E"), p("F")), p("G"))
        );
        assert_eq!(
            parse("E ->q F ->q G").unwrap(),
            Formula::qimp(Formula::qimp(p("E"), p("F")), p("G"))
        );
        assert_eq!(
            parse("~q E |q F ->q G").unwrap(),
            Formula::qimp(Formula::qor(Formula::qnot(p("E")), p("F")), p("G"))
        );
    }

    #[test]
    fn q_suffix_disambiguation() {
        assert_eq!(parse("~qE").unwrap(), Formula::not(p("qE")));
        assert_eq!(parse("~q E").unwrap(), Formula::qnot(p("E")));
        assert_eq!(parse("~q(E)").unwrap(), Formula::qnot(p("E")));
        assert_eq!(parse("E&q(F)").unwrap(), Formula::qand(p("E"), p("F")));
        assert_eq!(parse("E &qF").unwrap(), Formula::and(p("E"), p("qF")));
        assert_eq!(parse("E->q F").unwrap(), Formula::qimp(p("E"), p("F")));
    }

    #[test]
    fn renders_examples() {
        assert_eq!(render(&Formula::and(p("E"), Formula::not(p("F")))), "E & ~F");
        assert_eq!(render(&Formula::qimp(p("E"), p("F"))), "E ->q F");
        assert_eq!(render(&Formula::or(Formula::and(p("E"), p("F")), p("G"))), "E & F | G");
        assert_eq!(render(&Formula::and(p("E"), Formula::or(p("F"), p("G")))), "E & (F | G)");
        assert_eq!(render(&Formula::qnot(p("qE"))), "~q qE");
        assert_eq!(render(&Formula::not(Formula::qnot(p("E")))), "~~q E");
    }

    #[test]
    fn classify_examples() {
        let props: BTreeSet<PredicateId> = ids(&["E", "F"]).into_iter().collect();
        let c = |s: &str| classify(&parse(s).unwrap(), &props);
        assert_eq!(c("E & F"), LanguageTag::PropertyWff);
        assert_eq!(c("E &q F"), LanguageTag::PureQwff);
        assert_eq!(c("~q (E & F)"), LanguageTag::Mixed);
        assert_eq!(c("E & G"), LanguageTag::EffectWff);
        assert_eq!(c("E &q G"), LanguageTag::Mixed);
        assert_eq!(c("~(E &q F)"), LanguageTag::Mixed);
    }

    #[test]
    fn enumeration_small_cases() {
        let e = ids(&["E"]);
        assert_eq!(
            enumerate_formulas(&e, 0, ConnectiveFamily::Classical).unwrap(),
            vec![p("E")]
        );
        assert_eq!(
            enumerate_formulas(&e, 1, ConnectiveFamily::Classical).unwrap(),
            vec![
                p("E"),
                Formula::not(p("E")),
                Formula::and(p("E"), p("E")),
                Formula::or(p("E"), p("E"))
            ]
        );
    }

    #[test]
    fn enumeration_depth_guard() {
        assert_eq!(
            enumerate_formulas(&ids(&["E"]), 5, ConnectiveFamily::Classical).unwrap_err(),
            Error::DepthLimitExceeded { requested: 5, max: 4 }
        );
        assert!(matches!(
            enumerate_formulas(&ids(&["E", "F", "G"]), 4, ConnectiveFamily::Classical),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }
}
