//! Finite ordinary and generalized Veltman frames and models.
//!
//! Worlds are indexed `0..n` in the lexicographic order of their ids. `R` is
//! stored as a successor set per world. A generalized `S_w` is stored per pair
//! `(w, u)` as the antichain of minimal `V` with `u S_w V`; monotonicity is
//! implicit in that representation.

mod forcing;
mod json;

use std::collections::BTreeMap;
use std::fmt;

use crate::worldset::{Antichain, WorldSet, MAX_WORLDS};

pub use forcing::{forces, truth_set, Evaluator, Semantics};
pub use json::{load, valuation_variables, LoadedModel, ModelError, ModelFile};

/// Truth sets of propositional variables. Absent variables are false everywhere.
pub type Valuation = BTreeMap<String, WorldSet>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GenFrame {
    worlds: Vec<String>,
    succ: Vec<WorldSet>,
    s: Vec<Vec<Antichain>>,
}

impl GenFrame {
    /// Builds a frame from world ids, successor sets and `S` generators
    /// (`s[w][u]`). Nothing is checked; see [`GenFrame::validate`].
    pub fn from_parts(worlds: Vec<String>, succ: Vec<WorldSet>, s: Vec<Vec<Antichain>>) -> Self {
        let n = worlds.len();
        assert!(n <= MAX_WORLDS, "at most {MAX_WORLDS} worlds are supported");
        assert_eq!(succ.len(), n);
        assert_eq!(s.len(), n);
        assert!(s.iter().all(|row| row.len() == n));
        GenFrame { worlds, succ, s }
    }

    /// A frame on worlds named `w0, w1, ..` with empty `S`.
    pub fn with_relation(succ: Vec<WorldSet>) -> Self {
        let n = succ.len();
        let worlds = default_names(n);
        GenFrame::from_parts(worlds, succ, vec![vec![Antichain::new(); n]; n])
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn name(&self, w: usize) -> &str {
        &self.worlds[w]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|x| x == name)
    }

    pub fn all(&self) -> WorldSet {
        WorldSet::full(self.len())
    }

    /// `R[w]`.
    pub fn succ(&self, w: usize) -> WorldSet {
        self.succ[w]
    }

    /// `R[V]`, the union of `R[v]` for `v ∈ V`.
    pub fn succ_of_set(&self, v: WorldSet) -> WorldSet {
        v.iter().fold(WorldSet::EMPTY, |acc, x| acc | self.succ[x])
    }

    /// Minimal `V` with `u S_w V`.
    pub fn generators(&self, w: usize, u: usize) -> &Antichain {
        &self.s[w][u]
    }

    pub fn generators_mut(&mut self, w: usize, u: usize) -> &mut Antichain {
        &mut self.s[w][u]
    }

    /// Does `u S_w V` hold?
    pub fn s_holds(&self, w: usize, u: usize, v: WorldSet) -> bool {
        let rw = self.succ[w];
        rw.contains(u) && v.is_subset(rw) && self.s[w][u].covers(v)
    }

    /// `S_w^{-1}[V] = {x ∈ R[w] : x S_w V}`.
    pub fn s_preimage(&self, w: usize, v: WorldSet) -> WorldSet {
        self.succ[w].iter().filter(|&x| self.s_holds(w, x, v)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(|s| s.len()).sum()
    }

    pub fn generator_count(&self) -> usize {
        self.s.iter().flatten().map(Antichain::len).sum()
    }

    /// Checks every generalized-frame clause and lists each violation.
    pub fn validate(&self) -> Report {
        let mut violations = Vec::new();
        if self.is_empty() {
            violations.push(Violation::NoWorlds);
        }
        check_relation(&self.succ, &mut violations);
        let n = self.len();
        for w in 0..n {
            let rw = self.succ[w];
            for u in 0..n {
                let gens = &self.s[w][u];
                if !rw.contains(u) {
                    if !gens.is_empty() {
                        violations.push(Violation::SOutsideR { w, u });
                    }
                    continue;
                }
                for &g in gens {
                    if g.is_empty() {
                        violations.push(Violation::EmptyImage { w, u });
                    } else if !g.is_subset(rw) {
                        violations.push(Violation::ImageOutsideR { w, u, set: g });
                    }
                }
                if !gens.covers(WorldSet::singleton(u)) {
                    violations.push(Violation::QuasiReflexivity { w, u });
                }
                for v in self.succ[u] & rw {
                    if !gens.covers(WorldSet::singleton(v)) {
                        violations.push(Violation::SuccessorImage { w, u, v });
                    }
                }
            }
            for u in rw {
                for &g in &self.s[w][u] {
                    if let Some(union) = self
                        .composite_images(w, g)
                        .iter()
                        .find(|z| !self.s[w][u].covers(**z))
                    {
                        violations.push(Violation::QuasiTransitivity {
                            w,
                            u,
                            via: g,
                            union: *union,
                        });
                        break;
                    }
                }
            }
        }
        Report {
            worlds: self.worlds.clone(),
            violations,
        }
    }

    /// Minimal sets `⋃_{v ∈ V} Z_v` over all choices of generators `Z_v` of
    /// `S_w(v)`. Empty when some `v ∈ V` has no image.
    fn composite_images(&self, w: usize, v: WorldSet) -> Antichain {
        let mut acc = Antichain::from_iter([WorldSet::EMPTY]);
        for x in v {
            let mut next = Antichain::new();
            for a in &acc {
                for z in &self.s[w][x] {
                    next.insert(*a | *z);
                }
            }
            acc = next;
        }
        acc
    }

    /// The least `S` containing the given one that satisfies quasi-reflexivity,
    /// the successor clause and quasi-transitivity. `R` must already be a
    /// strict order and all generators nonempty subsets of the right `R[w]`.
    pub fn close_s(&self) -> GenFrame {
        let mut out = self.clone();
        let n = self.len();
        for w in 0..n {
            let rw = self.succ[w];
            for u in rw {
                let gens = &mut out.s[w][u];
                gens.insert(WorldSet::singleton(u));
                for v in self.succ[u] & rw {
                    gens.insert(WorldSet::singleton(v));
                }
            }
            loop {
                let mut changed = false;
                for u in rw {
                    let current: Vec<WorldSet> = out.s[w][u].iter().copied().collect();
                    for g in current {
                        let unions = out.composite_images(w, g);
                        for z in unions.iter() {
                            changed |= out.s[w][u].insert(*z);
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
        }
        out
    }
}

fn check_relation(succ: &[WorldSet], violations: &mut Vec<Violation>) {
    let n = succ.len();
    for w in 0..n {
        if succ[w].contains(w) {
            violations.push(Violation::Reflexive { w });
        }
        if !succ[w].is_subset(WorldSet::full(n)) {
            violations.push(Violation::UnknownWorld { w });
        }
        for u in succ[w] & WorldSet::full(n) {
            for v in succ[u] {
                if !succ[w].contains(v) {
                    violations.push(Violation::NotTransitive { w, u, v });
                }
            }
        }
    }
}

pub(crate) fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i}")).collect()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GenModel {
    pub frame: GenFrame,
    pub valuation: Valuation,
}

impl GenModel {
    pub fn new(frame: GenFrame, valuation: Valuation) -> Self {
        GenModel { frame, valuation }
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    pub fn val(&self, p: &str) -> WorldSet {
        self.valuation.get(p).copied().unwrap_or_default()
    }

    pub fn s_holds(&self, w: usize, u: usize, v: WorldSet) -> bool {
        self.frame.s_holds(w, u, v)
    }

    /// Validates the frame and that the valuation stays inside the world set.
    pub fn validate(&self) -> Report {
        let mut report = self.frame.validate();
        validate_valuation(&self.valuation, self.len(), &mut report.violations);
        report
    }
}

fn validate_valuation(val: &Valuation, n: usize, out: &mut Vec<Violation>) {
    for (p, set) in val {
        if !set.is_subset(WorldSet::full(n)) {
            out.push(Violation::ValuationOutside { var: p.clone() });
        }
    }
}

/// Ordinary Veltman frame: `s[w][u]` is the set of `v` with `u S_w v`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OrdFrame {
    worlds: Vec<String>,
    succ: Vec<WorldSet>,
    s: Vec<Vec<WorldSet>>,
}

impl OrdFrame {
    pub fn from_parts(worlds: Vec<String>, succ: Vec<WorldSet>, s: Vec<Vec<WorldSet>>) -> Self {
        let n = worlds.len();
        assert!(n <= MAX_WORLDS, "at most {MAX_WORLDS} worlds are supported");
        assert_eq!(succ.len(), n);
        assert_eq!(s.len(), n);
        assert!(s.iter().all(|row| row.len() == n));
        OrdFrame { worlds, succ, s }
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn succ(&self, w: usize) -> WorldSet {
        self.succ[w]
    }

    /// `{v : u S_w v}`.
    pub fn s_image(&self, w: usize, u: usize) -> WorldSet {
        self.s[w][u]
    }

    pub fn validate(&self) -> Report {
        let mut violations = Vec::new();
        if self.is_empty() {
            violations.push(Violation::NoWorlds);
        }
        check_relation(&self.succ, &mut violations);
        let n = self.len();
        for w in 0..n {
            let rw = self.succ[w];
            for u in 0..n {
                let img = self.s[w][u];
                if !rw.contains(u) {
                    if !img.is_empty() {
                        violations.push(Violation::SOutsideR { w, u });
                    }
                    continue;
                }
                if !img.is_subset(rw) {
                    violations.push(Violation::ImageOutsideR { w, u, set: img - rw });
                }
                if !img.contains(u) {
                    violations.push(Violation::QuasiReflexivity { w, u });
                }
                for v in self.succ[u] & rw {
                    if !img.contains(v) {
                        violations.push(Violation::SuccessorImage { w, u, v });
                    }
                }
                for v in img & rw {
                    for x in self.s[w][v] {
                        if !img.contains(x) {
                            violations.push(Violation::OrdNotTransitive { w, u, v, x });
                        }
                    }
                }
            }
        }
        Report {
            worlds: self.worlds.clone(),
            violations,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrdModel {
    pub frame: OrdFrame,
    pub valuation: Valuation,
}

impl OrdModel {
    pub fn new(frame: OrdFrame, valuation: Valuation) -> Self {
        OrdModel { frame, valuation }
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    pub fn validate(&self) -> Report {
        let mut report = self.frame.validate();
        validate_valuation(&self.valuation, self.len(), &mut report.violations);
        report
    }
}

/// Embeds an ordinary model: `u S_w v` becomes the generator `{v}` of `S_w(u)`.
pub fn gen_of_ordinary(m: &OrdModel) -> GenModel {
    let n = m.len();
    let s = (0..n)
        .map(|w| {
            (0..n)
                .map(|u| m.frame.s[w][u].iter().map(WorldSet::singleton).collect())
                .collect()
        })
        .collect();
    let frame = GenFrame::from_parts(m.frame.worlds.clone(), m.frame.succ.clone(), s);
    GenModel::new(frame, m.valuation.clone())
}

/// A violated frame clause with its witness (world indices).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    NoWorlds,
    UnknownWorld { w: usize },
    Reflexive { w: usize },
    NotTransitive { w: usize, u: usize, v: usize },
    SOutsideR { w: usize, u: usize },
    EmptyImage { w: usize, u: usize },
    ImageOutsideR { w: usize, u: usize, set: WorldSet },
    QuasiReflexivity { w: usize, u: usize },
    SuccessorImage { w: usize, u: usize, v: usize },
    QuasiTransitivity { w: usize, u: usize, via: WorldSet, union: WorldSet },
    OrdNotTransitive { w: usize, u: usize, v: usize, x: usize },
    ValuationOutside { var: String },
}

/// Result of validation: empty iff the frame is legal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Report {
    worlds: Vec<String>,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_legal(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn describe(&self, v: &Violation) -> String {
        let name = |i: &usize| {
            self.worlds
                .get(*i)
                .cloned()
                .unwrap_or_else(|| format!("#{i}"))
        };
        let set = |s: &WorldSet| format_set(&self.worlds, *s);
        match v {
            Violation::NoWorlds => "world set is empty".into(),
            Violation::UnknownWorld { w } => format!("R[{}] mentions an unknown world", name(w)),
            Violation::Reflexive { w } => format!("R is reflexive at {}", name(w)),
            Violation::NotTransitive { w, u, v } => format!(
                "R is not transitive: ({}, {}, {})",
                name(w),
                name(u),
                name(v)
            ),
            Violation::SOutsideR { w, u } => {
                format!("S_{} has an entry for {} outside R[{}]", name(w), name(u), name(w))
            }
            Violation::EmptyImage { w, u } => {
                format!("{} S_{} of the empty set", name(u), name(w))
            }
            Violation::ImageOutsideR { w, u, set: s } => format!(
                "image {} of {} under S_{} is not inside R[{}]",
                set(s),
                name(u),
                name(w),
                name(w)
            ),
            Violation::QuasiReflexivity { w, u } => format!(
                "quasi-reflexivity fails at ({}, {}): missing {} S_{} {{{}}}",
                name(w),
                name(u),
                name(u),
                name(w),
                name(u)
            ),
            Violation::SuccessorImage { w, u, v } => format!(
                "{} R {} R {} but not {} S_{} {{{}}}",
                name(w),
                name(u),
                name(v),
                name(u),
                name(w),
                name(v)
            ),
            Violation::QuasiTransitivity { w, u, via, union } => format!(
                "quasi-transitivity fails at ({}, {}): {} S_{} {} composes to {} which is missing",
                name(w),
                name(u),
                name(u),
                name(w),
                set(via),
                set(union)
            ),
            Violation::OrdNotTransitive { w, u, v, x } => format!(
                "S_{} is not transitive: ({}, {}, {})",
                name(w),
                name(u),
                name(v),
                name(x)
            ),
            Violation::ValuationOutside { var } => {
                format!("valuation of {var} mentions unknown worlds")
            }
        }
    }

    pub fn lines(&self) -> Vec<String> {
        self.violations.iter().map(|v| self.describe(v)).collect()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_legal() {
            return f.write_str("legal");
        }
        for line in self.lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// `{a, b}` using world names.
pub fn format_set(names: &[String], s: WorldSet) -> String {
    let items: Vec<&str> = s
        .iter()
        .map(|i| names.get(i).map(String::as_str).unwrap_or("?"))
        .collect();
    format!("{{{}}}", items.join(", "))
}
