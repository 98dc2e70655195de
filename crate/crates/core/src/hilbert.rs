//! Axiom schemata of IL and its extensions, and a Hilbert-style proof checker.
//!
//! Schema matching is syntactic on normalized formulas: both the schema and
//! the candidate have their boxes and diamonds expanded first, and then the
//! metavariables `A`, `B`, `C` are bound by first-order matching. No
//! reasoning modulo commutativity or associativity takes place.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::{parse, Formula};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SchemaId {
    K,
    L,
    J1,
    J2,
    J3,
    J4,
    J5,
    M,
    M0,
    P,
    P0,
    R,
    W,
    Wstar,
}

impl SchemaId {
    pub const ALL: [SchemaId; 14] = [
        SchemaId::K,
        SchemaId::L,
        SchemaId::J1,
        SchemaId::J2,
        SchemaId::J3,
        SchemaId::J4,
        SchemaId::J5,
        SchemaId::M,
        SchemaId::M0,
        SchemaId::P,
        SchemaId::P0,
        SchemaId::R,
        SchemaId::W,
        SchemaId::Wstar,
    ];

    /// Schemata shared by every logic.
    pub const BASE: [SchemaId; 7] = [
        SchemaId::K,
        SchemaId::L,
        SchemaId::J1,
        SchemaId::J2,
        SchemaId::J3,
        SchemaId::J4,
        SchemaId::J5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemaId::K => "K",
            SchemaId::L => "L",
            SchemaId::J1 => "J1",
            SchemaId::J2 => "J2",
            SchemaId::J3 => "J3",
            SchemaId::J4 => "J4",
            SchemaId::J5 => "J5",
            SchemaId::M => "M",
            SchemaId::M0 => "M0",
            SchemaId::P => "P",
            SchemaId::P0 => "P0",
            SchemaId::R => "R",
            SchemaId::W => "W",
            SchemaId::Wstar => "Wstar",
        }
    }

    /// The schema written with lowercase placeholders `a`, `b`, `c`.
    fn template(self) -> &'static str {
        match self {
            SchemaId::K => "[](a -> b) -> ([]a -> []b)",
            SchemaId::L => "[]([]a -> a) -> []a",
            SchemaId::J1 => "[](a -> b) -> a |> b",
            SchemaId::J2 => "(a |> b) & (b |> c) -> a |> c",
            SchemaId::J3 => "(a |> c) & (b |> c) -> a | b |> c",
            SchemaId::J4 => "a |> b -> (<>a -> <>b)",
            SchemaId::J5 => "<>a |> a",
            SchemaId::M => "a |> b -> a & []c |> b & []c",
            SchemaId::M0 => "a |> b -> <>a & []c |> b & []c",
            SchemaId::P => "a |> b -> [](a |> b)",
            SchemaId::P0 => "a |> <>b -> [](a |> b)",
            SchemaId::R => "a |> b -> ~(a |> ~c) |> b & []c",
            SchemaId::W => "a |> b -> a |> b & []~a",
            SchemaId::Wstar => "a |> b -> b & []c |> b & []c & []~a",
        }
    }

    /// The schema as a formula over the metavariables `A`, `B`, `C`. These
    /// names cannot be written in the concrete syntax, so they never clash
    /// with user variables.
    pub fn pattern(self) -> Formula {
        self.instantiate_with(&["A", "B", "C"])
    }

    /// The schema instantiated with the variables `a`, `b`, `c`.
    pub fn fresh_instance(self) -> Formula {
        parse(self.template()).expect("schema templates parse")
    }

    fn instantiate_with(self, names: &[&str; 3]) -> Formula {
        let map = ["a", "b", "c"]
            .iter()
            .zip(names)
            .map(|(from, to)| (from.to_string(), Formula::var(*to)))
            .collect();
        self.fresh_instance().substitute(&map)
    }

    /// Metavariables actually used, in order.
    pub fn metavariables(self) -> Vec<&'static str> {
        let vars = self.fresh_instance().variables();
        ["a", "b", "c"]
            .iter()
            .zip(["A", "B", "C"])
            .filter(|(lower, _)| vars.contains(**lower))
            .map(|(_, upper)| upper)
            .collect()
    }

    /// Instantiates the metavariables; missing ones are left as is.
    pub fn instantiate(self, sub: &Substitution) -> Formula {
        self.pattern().substitute(sub)
    }
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown schema {0:?}")]
pub struct UnknownSchema(pub String);

impl FromStr for SchemaId {
    type Err = UnknownSchema;
    fn from_str(s: &str) -> Result<SchemaId, UnknownSchema> {
        let found = SchemaId::ALL.iter().find(|id| id.name() == s).copied();
        match (found, s) {
            (Some(id), _) => Ok(id),
            (None, "W*") => Ok(SchemaId::Wstar),
            _ => Err(UnknownSchema(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Logic {
    IL,
    ILM,
    ILM0,
    ILP,
    ILP0,
    ILR,
    ILW,
    ILWstar,
}

impl Logic {
    pub const ALL: [Logic; 8] = [
        Logic::IL,
        Logic::ILM,
        Logic::ILM0,
        Logic::ILP,
        Logic::ILP0,
        Logic::ILR,
        Logic::ILW,
        Logic::ILWstar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Logic::IL => "IL",
            Logic::ILM => "ILM",
            Logic::ILM0 => "ILM0",
            Logic::ILP => "ILP",
            Logic::ILP0 => "ILP0",
            Logic::ILR => "ILR",
            Logic::ILW => "ILW",
            Logic::ILWstar => "ILWstar",
        }
    }

    /// Principles added on top of IL.
    pub fn extra_schemata(self) -> &'static [SchemaId] {
        match self {
            Logic::IL => &[],
            Logic::ILM => &[SchemaId::M],
            Logic::ILM0 => &[SchemaId::M0],
            Logic::ILP => &[SchemaId::P],
            Logic::ILP0 => &[SchemaId::P0],
            Logic::ILR => &[SchemaId::R],
            Logic::ILW => &[SchemaId::W],
            Logic::ILWstar => &[SchemaId::M0, SchemaId::W],
        }
    }

    /// All axiom schemata of the logic.
    pub fn schemata(self) -> Vec<SchemaId> {
        SchemaId::BASE
            .iter()
            .chain(self.extra_schemata())
            .copied()
            .collect()
    }

    pub fn has_schema(self, id: SchemaId) -> bool {
        SchemaId::BASE.contains(&id) || self.extra_schemata().contains(&id)
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown logic {0:?}")]
pub struct UnknownLogic(pub String);

impl FromStr for Logic {
    type Err = UnknownLogic;
    fn from_str(s: &str) -> Result<Logic, UnknownLogic> {
        let found = Logic::ALL.iter().find(|l| l.name() == s).copied();
        match (found, s) {
            (Some(l), _) => Ok(l),
            (None, "ILW*") => Ok(Logic::ILWstar),
            _ => Err(UnknownLogic(s.to_string())),
        }
    }
}

/// Metavariable bindings, keyed `"A"`, `"B"`, `"C"`.
pub type Substitution = BTreeMap<String, Formula>;

/// Finds a substitution making the schema equal to `f`, both normalized.
/// The bound formulas are in normalized form.
pub fn match_schema(id: SchemaId, f: &Formula) -> Option<Substitution> {
    let mut sub = Substitution::new();
    match_into(&id.pattern().normalize(), &f.normalize(), &mut sub).then_some(sub)
}

fn is_metavariable(name: &str) -> bool {
    matches!(name, "A" | "B" | "C")
}

fn match_into(pattern: &Formula, target: &Formula, sub: &mut Substitution) -> bool {
    use Formula as F;
    match (pattern, target) {
        (F::Var(x), _) if is_metavariable(x) => match sub.get(x) {
            Some(bound) => bound == target,
            None => {
                sub.insert(x.clone(), target.clone());
                true
            }
        },
        (F::Var(x), F::Var(y)) => x == y,
        (F::Bot, F::Bot) | (F::Top, F::Top) => true,
        (F::Neg(a), F::Neg(b)) | (F::Box(a), F::Box(b)) | (F::Dia(a), F::Dia(b)) => {
            match_into(a, b, sub)
        }
        (F::Impl(a1, a2), F::Impl(b1, b2))
        | (F::And(a1, a2), F::And(b1, b2))
        | (F::Or(a1, a2), F::Or(b1, b2))
        | (F::Rhd(a1, a2), F::Rhd(b1, b2)) => match_into(a1, b1, sub) && match_into(a2, b2, sub),
        _ => false,
    }
}

/// Largest number of skeleton atoms accepted by the truth-table check.
pub const MAX_TAUTOLOGY_ATOMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("propositional skeleton has {0} atoms (limit {MAX_TAUTOLOGY_ATOMS})")]
pub struct TooManyAtoms(pub usize);

#[derive(Debug)]
enum Skeleton {
    Atom(usize),
    Const(bool),
    Not(Box<Skeleton>),
    And(Box<Skeleton>, Box<Skeleton>),
    Or(Box<Skeleton>, Box<Skeleton>),
    Impl(Box<Skeleton>, Box<Skeleton>),
}

impl Skeleton {
    fn build(f: &Formula, atoms: &mut Vec<Formula>) -> Skeleton {
        let mut atom = |f: &Formula| {
            let i = atoms.iter().position(|a| a == f).unwrap_or_else(|| {
                atoms.push(f.clone());
                atoms.len() - 1
            });
            Skeleton::Atom(i)
        };
        match f {
            Formula::Var(_) | Formula::Rhd(..) | Formula::Box(_) | Formula::Dia(_) => atom(f),
            Formula::Bot => Skeleton::Const(false),
            Formula::Top => Skeleton::Const(true),
            Formula::Neg(a) => Skeleton::Not(Box::new(Skeleton::build(a, atoms))),
            Formula::And(a, b) => Skeleton::And(
                Box::new(Skeleton::build(a, atoms)),
                Box::new(Skeleton::build(b, atoms)),
            ),
            Formula::Or(a, b) => Skeleton::Or(
                Box::new(Skeleton::build(a, atoms)),
                Box::new(Skeleton::build(b, atoms)),
            ),
            Formula::Impl(a, b) => Skeleton::Impl(
                Box::new(Skeleton::build(a, atoms)),
                Box::new(Skeleton::build(b, atoms)),
            ),
        }
    }

    fn eval(&self, assignment: u32) -> bool {
        match self {
            Skeleton::Atom(i) => assignment & (1 << i) != 0,
            Skeleton::Const(b) => *b,
            Skeleton::Not(a) => !a.eval(assignment),
            Skeleton::And(a, b) => a.eval(assignment) && b.eval(assignment),
            Skeleton::Or(a, b) => a.eval(assignment) || b.eval(assignment),
            Skeleton::Impl(a, b) => !a.eval(assignment) || b.eval(assignment),
        }
    }
}

/// Is the propositional skeleton of `f` a tautology? Maximal `▷`-subformulas
/// of the normalized formula become atoms, equal ones sharing an atom.
pub fn is_classical_tautology(f: &Formula) -> Result<bool, TooManyAtoms> {
    let mut atoms = Vec::new();
    let sk = Skeleton::build(&f.normalize(), &mut atoms);
    if atoms.len() > MAX_TAUTOLOGY_ATOMS {
        return Err(TooManyAtoms(atoms.len()));
    }
    Ok((0..1u32 << atoms.len()).all(|a| sk.eval(a)))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Justification {
    Axiom(SchemaId),
    Taut,
    /// `Mp(i, j)`: line `j` is `line i -> this line`. Line numbers start at 1.
    Mp(usize, usize),
    Nec(usize),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom(s) => write!(f, "ax {s}"),
            Justification::Taut => f.write_str("taut"),
            Justification::Mp(i, j) => write!(f, "mp {i} {j}"),
            Justification::Nec(i) => write!(f, "nec {i}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProofLine {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ProofObject {
    pub lines: Vec<ProofLine>,
}

impl ProofObject {
    pub fn new(lines: Vec<(Formula, Justification)>) -> Self {
        ProofObject {
            lines: lines
                .into_iter()
                .map(|(formula, justification)| ProofLine {
                    formula,
                    justification,
                })
                .collect(),
        }
    }

    /// The last line, which is what the proof proves.
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    /// Parses the line-oriented format `<index>. <formula> ; <justification>`.
    pub fn parse(text: &str) -> Result<ProofObject, ProofParseError> {
        let mut lines = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line_no = no + 1;
            let err = |message: String| ProofParseError { line_no, message };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (index, rest) = content
                .split_once('.')
                .ok_or_else(|| err("expected `<index>.`".into()))?;
            let index: usize = index
                .trim()
                .parse()
                .map_err(|_| err(format!("bad step index {:?}", index.trim())))?;
            if index != lines.len() + 1 {
                return Err(err(format!(
                    "step index {index} out of sequence (expected {})",
                    lines.len() + 1
                )));
            }
            let (formula, just) = rest
                .rsplit_once(';')
                .ok_or_else(|| err("expected `; <justification>`".into()))?;
            let formula = parse(formula.trim()).map_err(|e| err(e.to_string()))?;
            let justification = parse_justification(just.trim()).map_err(err)?;
            lines.push(ProofLine {
                formula,
                justification,
            });
        }
        Ok(ProofObject { lines })
    }
}

fn parse_justification(text: &str) -> Result<Justification, String> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| format!("bad line reference {s:?}"))
    };
    match words.as_slice() {
        ["taut"] => Ok(Justification::Taut),
        ["ax", s] => s
            .parse()
            .map(Justification::Axiom)
            .map_err(|e: UnknownSchema| e.to_string()),
        ["mp", i, j] => Ok(Justification::Mp(num(i)?, num(j)?)),
        ["nec", i] => Ok(Justification::Nec(num(i)?)),
        _ => Err(format!("unrecognized justification {text:?}")),
    }
}

impl fmt::Display for ProofObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.lines.iter().enumerate() {
            writeln!(f, "{}. {} ; {}", i + 1, l.formula, l.justification)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("proof line {line_no}: {message}")]
pub struct ProofParseError {
    pub line_no: usize,
    pub message: String,
}

/// First failing proof step, numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {reason}")]
pub struct Rejection {
    pub line: usize,
    pub reason: String,
}

/// Checks every step of `proof` against the axioms and rules of `logic`.
pub fn check_proof(proof: &ProofObject, logic: Logic) -> Result<(), Rejection> {
    let normalized: Vec<Formula> = proof.lines.iter().map(|l| l.formula.normalize()).collect();
    for (idx, line) in proof.lines.iter().enumerate() {
        let no = idx + 1;
        let reject = |reason: String| Rejection { line: no, reason };
        let earlier = |i: usize| {
            if i == 0 || i >= no {
                Err(reject(format!("line {i} is not an earlier line")))
            } else {
                Ok(&normalized[i - 1])
            }
        };
        match line.justification {
            Justification::Axiom(id) => {
                if !logic.has_schema(id) {
                    return Err(reject(format!("{id} is not an axiom of {logic}")));
                }
                if match_schema(id, &line.formula).is_none() {
                    return Err(reject(format!("not an instance of {id}")));
                }
            }
            Justification::Taut => match is_classical_tautology(&line.formula) {
                Ok(true) => {}
                Ok(false) => return Err(reject("not a classical tautology".into())),
                Err(e) => return Err(reject(e.to_string())),
            },
            Justification::Mp(i, j) => {
                let premise = earlier(i)?;
                let implication = earlier(j)?;
                let expected = Formula::imp(premise.clone(), normalized[idx].clone());
                if *implication != expected {
                    return Err(reject(format!(
                        "line {j} is not the implication from line {i} to this line"
                    )));
                }
            }
            Justification::Nec(i) => {
                let premise = earlier(i)?;
                if normalized[idx] != Formula::boxed(premise.clone()).normalize() {
                    return Err(reject(format!("not the necessitation of line {i}")));
                }
            }
        }
    }
    Ok(())
}
