use std::collections::HashMap;

use super::{GenModel, OrdModel};
use crate::formula::Formula;
use crate::worldset::WorldSet;

/// Set-level semantics of a finite model. Forcing of every formula is
/// computed from these operations as a truth set.
pub trait Semantics {
    fn size(&self) -> usize;
    fn successors(&self, w: usize) -> WorldSet;
    fn atom(&self, p: &str) -> WorldSet;
    /// Worlds forcing `A ▷ B`, given the truth sets of `A` and `B`.
    fn rhd_set(&self, a: WorldSet, b: WorldSet) -> WorldSet;

    fn box_set(&self, a: WorldSet) -> WorldSet {
        (0..self.size())
            .filter(|&w| self.successors(w).is_subset(a))
            .collect()
    }

    fn dia_set(&self, a: WorldSet) -> WorldSet {
        (0..self.size())
            .filter(|&w| self.successors(w).intersects(a))
            .collect()
    }
}

impl Semantics for GenModel {
    fn size(&self) -> usize {
        self.len()
    }

    fn successors(&self, w: usize) -> WorldSet {
        self.frame.succ(w)
    }

    fn atom(&self, p: &str) -> WorldSet {
        self.val(p) & WorldSet::full(self.len())
    }

    // w ⊩ A ▷ B iff every A-successor u has some V ⊆ R[w] with u S_w V ⊩ B.
    // The largest candidate is B ∩ R[w], and S_w is monotone.
    fn rhd_set(&self, a: WorldSet, b: WorldSet) -> WorldSet {
        (0..self.len())
            .filter(|&w| {
                let rw = self.frame.succ(w);
                (rw & a)
                    .iter()
                    .all(|u| self.frame.generators(w, u).covers(b & rw))
            })
            .collect()
    }
}

impl Semantics for OrdModel {
    fn size(&self) -> usize {
        self.len()
    }

    fn successors(&self, w: usize) -> WorldSet {
        self.frame.succ(w)
    }

    fn atom(&self, p: &str) -> WorldSet {
        self.valuation.get(p).copied().unwrap_or_default() & WorldSet::full(self.len())
    }

    fn rhd_set(&self, a: WorldSet, b: WorldSet) -> WorldSet {
        (0..self.len())
            .filter(|&w| {
                (self.frame.succ(w) & a)
                    .iter()
                    .all(|u| self.frame.s_image(w, u).intersects(b))
            })
            .collect()
    }
}

/// Truth set of `f` in `m`.
pub fn truth_set<M: Semantics + ?Sized>(m: &M, f: &Formula) -> WorldSet {
    let all = WorldSet::full(m.size());
    match f {
        Formula::Var(p) => m.atom(p),
        Formula::Bot => WorldSet::EMPTY,
        Formula::Top => all,
        Formula::Neg(a) => all - truth_set(m, a),
        Formula::Impl(a, b) => (all - truth_set(m, a)) | truth_set(m, b),
        Formula::And(a, b) => truth_set(m, a) & truth_set(m, b),
        Formula::Or(a, b) => truth_set(m, a) | truth_set(m, b),
        Formula::Rhd(a, b) => m.rhd_set(truth_set(m, a), truth_set(m, b)),
        Formula::Box(a) => m.box_set(truth_set(m, a)),
        Formula::Dia(a) => m.dia_set(truth_set(m, a)),
    }
}

/// Does `w` force `f`?
pub fn forces<M: Semantics + ?Sized>(m: &M, w: usize, f: &Formula) -> bool {
    truth_set(m, f).contains(w)
}

/// Evaluates many formulas over one model, sharing work on common subformulas.
pub struct Evaluator<'m, M: ?Sized> {
    model: &'m M,
    cache: HashMap<Formula, WorldSet>,
}

impl<'m, M: Semantics + ?Sized> Evaluator<'m, M> {
    pub fn new(model: &'m M) -> Self {
        Evaluator {
            model,
            cache: HashMap::new(),
        }
    }

    pub fn truth_set(&mut self, f: &Formula) -> WorldSet {
        if let Some(s) = self.cache.get(f) {
            return *s;
        }
        let m = self.model;
        let all = WorldSet::full(m.size());
        let s = match f {
            Formula::Var(p) => m.atom(p),
            Formula::Bot => WorldSet::EMPTY,
            Formula::Top => all,
            Formula::Neg(a) => all - self.truth_set(a),
            Formula::Impl(a, b) => (all - self.truth_set(a)) | self.truth_set(b),
            Formula::And(a, b) => self.truth_set(a) & self.truth_set(b),
            Formula::Or(a, b) => self.truth_set(a) | self.truth_set(b),
            Formula::Rhd(a, b) => {
                let (x, y) = (self.truth_set(a), self.truth_set(b));
                m.rhd_set(x, y)
            }
            Formula::Box(a) => {
                let x = self.truth_set(a);
                m.box_set(x)
            }
            Formula::Dia(a) => {
                let x = self.truth_set(a);
                m.dia_set(x)
            }
        };
        self.cache.insert(f.clone(), s);
        s
    }

    pub fn forces(&mut self, w: usize, f: &Formula) -> bool {
        self.truth_set(f).contains(w)
    }
}
