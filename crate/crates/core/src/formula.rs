//! Formulas of the interpretability language, their concrete syntax, and the
//! closure operations that parameterize filtration.
//!
//! `▷` is primitive. `□` and `◇` are kept as nodes of their own so that formula
//! sets can mention them literally; [`Formula::normalize`] expands them into
//! `¬A ▷ ⊥` and `¬(A ▷ ⊥)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    Var(String),
    Bot,
    Top,
    Impl(Box<Formula>, Box<Formula>),
    Neg(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Rhd(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Dia(Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Formula::Var(name.into())
    }

    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }

    pub fn boxed(f: Formula) -> Formula {
        Formula::Box(Box::new(f))
    }

    pub fn dia(f: Formula) -> Formula {
        Formula::Dia(Box::new(f))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Impl(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn rhd(a: Formula, b: Formula) -> Formula {
        Formula::Rhd(Box::new(a), Box::new(b))
    }

    /// Parses the concrete syntax; see [`parse`].
    pub fn parse(text: &str) -> Result<Formula, ParseError> {
        parse(text)
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Top => vec![],
            Formula::Neg(a) | Formula::Box(a) | Formula::Dia(a) => vec![a],
            Formula::Impl(a, b) | Formula::And(a, b) | Formula::Or(a, b) | Formula::Rhd(a, b) => {
                vec![a, b]
            }
        }
    }

    /// Expands `□A` to `¬A ▷ ⊥` and `◇A` to `¬(A ▷ ⊥)`, bottom-up.
    pub fn normalize(&self) -> Formula {
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Top => self.clone(),
            Formula::Neg(a) => Formula::neg(a.normalize()),
            Formula::Impl(a, b) => Formula::imp(a.normalize(), b.normalize()),
            Formula::And(a, b) => Formula::and(a.normalize(), b.normalize()),
            Formula::Or(a, b) => Formula::or(a.normalize(), b.normalize()),
            Formula::Rhd(a, b) => Formula::rhd(a.normalize(), b.normalize()),
            Formula::Box(a) => Formula::rhd(Formula::neg(a.normalize()), Formula::Bot),
            Formula::Dia(a) => Formula::neg(Formula::rhd(a.normalize(), Formula::Bot)),
        }
    }

    /// Does the formula contain `□` or `◇` nodes?
    pub fn has_sugar(&self) -> bool {
        matches!(self, Formula::Box(_) | Formula::Dia(_))
            || self.children().into_iter().any(Formula::has_sugar)
    }

    /// All nodes of the syntax tree, including the formula itself.
    pub fn subformulas(&self) -> FormulaSet {
        let mut out = FormulaSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut FormulaSet) {
        if out.insert(self.clone()) {
            for c in self.children() {
                c.collect_subformulas(out);
            }
        }
    }

    /// `~A`: `B` if `A = ¬B`, otherwise `¬A`.
    pub fn single_negation(&self) -> Formula {
        match self {
            Formula::Neg(inner) => (**inner).clone(),
            other => Formula::neg(other.clone()),
        }
    }

    /// Propositional variables occurring in the formula.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<String>) {
        if let Formula::Var(p) = self {
            out.insert(p.clone());
        }
        for c in self.children() {
            c.collect_variables(out);
        }
    }

    /// Height of the syntax tree; atoms have depth 0.
    pub fn depth(&self) -> usize {
        self.children()
            .into_iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Nesting depth of `▷`, `□` and `◇`.
    pub fn modal_depth(&self) -> usize {
        let inner = self
            .children()
            .into_iter()
            .map(Formula::modal_depth)
            .max()
            .unwrap_or(0);
        match self {
            Formula::Rhd(..) | Formula::Box(_) | Formula::Dia(_) => inner + 1,
            _ => inner,
        }
    }

    /// Replaces variables by formulas; variables without an entry are kept.
    pub fn substitute(&self, map: &BTreeMap<String, Formula>) -> Formula {
        match self {
            Formula::Var(p) => map.get(p).cloned().unwrap_or_else(|| self.clone()),
            Formula::Bot | Formula::Top => self.clone(),
            Formula::Neg(a) => Formula::neg(a.substitute(map)),
            Formula::Box(a) => Formula::boxed(a.substitute(map)),
            Formula::Dia(a) => Formula::dia(a.substitute(map)),
            Formula::Impl(a, b) => Formula::imp(a.substitute(map), b.substitute(map)),
            Formula::And(a, b) => Formula::and(a.substitute(map), b.substitute(map)),
            Formula::Or(a, b) => Formula::or(a.substitute(map), b.substitute(map)),
            Formula::Rhd(a, b) => Formula::rhd(a.substitute(map), b.substitute(map)),
        }
    }

    /// Antecedent and succedent if this is a `▷`-formula, reading `□G` as
    /// `¬G ▷ ⊥` and `◇G` as the negation of `G ▷ ⊥`.
    pub fn rhd_components(&self) -> Option<(Formula, Formula)> {
        match self {
            Formula::Rhd(a, b) => Some(((**a).clone(), (**b).clone())),
            Formula::Box(g) => Some((Formula::neg((**g).clone()), Formula::Bot)),
            Formula::Dia(g) => Some(((**g).clone(), Formula::Bot)),
            _ => None,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Impl(..) => 1,
            Formula::Rhd(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Neg(_) | Formula::Box(_) | Formula::Dia(_) => 5,
            Formula::Var(_) | Formula::Bot | Formula::Top => 6,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let paren = self.precedence() < min_prec;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Formula::Var(p) => f.write_str(p)?,
            Formula::Bot => f.write_str("bot")?,
            Formula::Top => f.write_str("top")?,
            Formula::Neg(a) => {
                f.write_str("~")?;
                a.write_at(f, 5)?;
            }
            Formula::Box(a) => {
                f.write_str("[]")?;
                a.write_at(f, 5)?;
            }
            Formula::Dia(a) => {
                f.write_str("<>")?;
                a.write_at(f, 5)?;
            }
            // right-associative
            Formula::Impl(a, b) => {
                a.write_at(f, 2)?;
                f.write_str(" -> ")?;
                b.write_at(f, 1)?;
            }
            Formula::Rhd(a, b) | Formula::Or(a, b) | Formula::And(a, b) => {
                let p = self.precedence();
                let op = match self {
                    Formula::Rhd(..) => " |> ",
                    Formula::Or(..) => " | ",
                    _ => " & ",
                };
                a.write_at(f, p)?;
                f.write_str(op)?;
                b.write_at(f, p + 1)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Formula, ParseError> {
        parse(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {}: {message}", position_text(.position))]
pub struct ParseError {
    /// Byte offset of the offending token; `None` means end of input.
    pub position: Option<usize>,
    pub message: String,
}

fn position_text(p: &Option<usize>) -> String {
    match p {
        Some(p) => format!("position {p}"),
        None => "end of input".to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Bot,
    Top,
    Not,
    BoxOp,
    DiaOp,
    And,
    Or,
    Rhd,
    Imp,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let two = |s: &[u8]| bytes[i..].starts_with(s);
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => {
                i += 1;
                Token::Not
            }
            b'&' => {
                i += 1;
                Token::And
            }
            b'(' => {
                i += 1;
                Token::LParen
            }
            b')' => {
                i += 1;
                Token::RParen
            }
            b'|' if two(b"|>") => {
                i += 2;
                Token::Rhd
            }
            b'|' => {
                i += 1;
                Token::Or
            }
            b'-' if two(b"->") => {
                i += 2;
                Token::Imp
            }
            b'[' if two(b"[]") => {
                i += 2;
                Token::BoxOp
            }
            b'<' if two(b"<>") => {
                i += 2;
                Token::DiaOp
            }
            b'a'..=b'z' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                match &text[start..i] {
                    "bot" => Token::Bot,
                    "top" => Token::Top,
                    name => Token::Ident(name.to_string()),
                }
            }
            _ => {
                return Err(ParseError {
                    position: Some(start),
                    message: format!("unexpected character {:?}", text[start..].chars().next().unwrap()),
                })
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            position: self.tokens.get(self.pos).map(|(p, _)| *p),
            message: message.into(),
        }
    }

    fn eat(&mut self, t: &Token) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.rhd()?;
        if self.eat(&Token::Imp) {
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn rhd(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.or()?;
        while self.eat(&Token::Rhd) {
            lhs = Formula::rhd(lhs, self.or()?);
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Token::Or) {
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Token::And) {
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Token::Not) {
            return Ok(Formula::neg(self.unary()?));
        }
        if self.eat(&Token::BoxOp) {
            return Ok(Formula::boxed(self.unary()?));
        }
        if self.eat(&Token::DiaOp) {
            return Ok(Formula::dia(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return Err(self.error("expected a formula")),
        };
        let f = match tok {
            Token::Ident(name) => Formula::Var(name),
            Token::Bot => Formula::Bot,
            Token::Top => Formula::Top,
            Token::LParen => {
                self.pos += 1;
                let inner = self.imp()?;
                if !self.eat(&Token::RParen) {
                    return Err(self.error("expected ')'"));
                }
                return Ok(inner);
            }
            _ => return Err(self.error("expected a formula")),
        };
        self.pos += 1;
        Ok(f)
    }
}

/// Parses a formula.
///
/// Binding strength, tightest first: `~ [] <>`, `&`, `|`, `|>`, `->`.
/// `->` associates to the right, the other binary operators to the left.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        tokens: tokenize(text)?,
        pos: 0,
    };
    let f = p.imp()?;
    if p.pos != p.tokens.len() {
        return Err(p.error("unexpected token"));
    }
    Ok(f)
}

/// A finite, order-independent set of formulas (structural equality).
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct FormulaSet(BTreeSet<Formula>);

impl FormulaSet {
    pub fn new() -> Self {
        FormulaSet(BTreeSet::new())
    }

    pub fn insert(&mut self, f: Formula) -> bool {
        self.0.insert(f)
    }

    pub fn remove(&mut self, f: &Formula) -> bool {
        self.0.remove(f)
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.0.contains(f)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::collections::btree_set::Iter<'_, Formula> {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &FormulaSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn extend<I: IntoIterator<Item = Formula>>(&mut self, iter: I) {
        self.0.extend(iter)
    }

    pub fn is_subformula_closed(&self) -> bool {
        self.iter()
            .all(|f| f.children().into_iter().all(|c| self.contains(c)))
    }

    pub fn is_negation_closed(&self) -> bool {
        self.iter().all(|f| self.contains(&f.single_negation()))
    }

    /// Is this a legal `D`: closed under subformulas and single negations, with `⊤`?
    pub fn is_valid_d(&self) -> bool {
        self.contains(&Formula::Top) && self.is_subformula_closed() && self.is_negation_closed()
    }

    /// The pool of antecedents and succedents of `▷`-formulas in the set.
    fn rhd_pool(&self) -> BTreeSet<Formula> {
        let mut pool = BTreeSet::new();
        for f in self.iter() {
            if let Some((a, b)) = f.rhd_components() {
                pool.insert(a);
                pool.insert(b);
            }
        }
        pool
    }
}

impl FromIterator<Formula> for FormulaSet {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        FormulaSet(iter.into_iter().collect())
    }
}

impl IntoIterator for FormulaSet {
    type Item = Formula;
    type IntoIter = std::collections::btree_set::IntoIter<Formula>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a FormulaSet {
    type Item = &'a Formula;
    type IntoIter = std::collections::btree_set::Iter<'a, Formula>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for FormulaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

/// Least superset of `seed ∪ {⊤}` closed under subformulas and single negation.
pub fn d_closure(seed: &FormulaSet) -> FormulaSet {
    let mut out = FormulaSet::new();
    let mut work: Vec<Formula> = seed.iter().cloned().collect();
    work.push(Formula::Top);
    while let Some(f) = work.pop() {
        if out.contains(&f) {
            continue;
        }
        work.extend(f.children().into_iter().cloned());
        work.push(f.single_negation());
        out.insert(f);
    }
    out
}

/// The least adequate set `Γ_D` over a valid `d`.
///
/// Closure conditions: subformulas; single negations; `⊥ ▷ ⊥`; `A ▷ B` whenever
/// `A` and `B` are both antecedents or succedents of `▷`-formulas already in
/// the set (boxes and diamonds included via [`Formula::rhd_components`]);
/// `□¬A` for every `A ∈ d`.
pub fn adequate_set(d: &FormulaSet) -> FormulaSet {
    let mut gamma = d.clone();
    gamma.insert(Formula::rhd(Formula::Bot, Formula::Bot));
    for a in d.iter() {
        gamma.insert(Formula::boxed(Formula::neg(a.clone())));
    }
    loop {
        let before = gamma.len();
        // Subformulas and single negations to a fixpoint.
        let mut work: Vec<Formula> = gamma.iter().cloned().collect();
        while let Some(f) = work.pop() {
            for c in f.children() {
                if gamma.insert(c.clone()) {
                    work.push(c.clone());
                }
            }
            let n = f.single_negation();
            if gamma.insert(n.clone()) {
                work.push(n);
            }
        }
        let pool = gamma.rhd_pool();
        for a in &pool {
            for b in &pool {
                gamma.insert(Formula::rhd(a.clone(), b.clone()));
            }
        }
        if gamma.len() == before {
            return gamma;
        }
    }
}

/// Checks the five adequacy conditions of `gamma` relative to `d`, and `d ⊆ gamma`.
pub fn is_adequate(gamma: &FormulaSet, d: &FormulaSet) -> bool {
    if !d.is_subset(gamma) || !gamma.is_subformula_closed() || !gamma.is_negation_closed() {
        return false;
    }
    if !gamma.contains(&Formula::rhd(Formula::Bot, Formula::Bot)) {
        return false;
    }
    let pool = gamma.rhd_pool();
    let recombined = pool
        .iter()
        .all(|a| pool.iter().all(|b| gamma.contains(&Formula::rhd(a.clone(), b.clone()))));
    recombined
        && d
            .iter()
            .all(|a| gamma.contains(&Formula::boxed(Formula::neg(a.clone()))))
}
