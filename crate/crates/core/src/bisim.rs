//! Bisimulations between generalized Veltman models.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{Map, Value};

use crate::model::{format_set, GenModel};
use crate::worldset::{Antichain, WorldSet};

/// A relation `Z ⊆ W × W'`, stored as `z[w] = {w' : w Z w'}`.
pub type Relation = Vec<WorldSet>;

/// Equivalence classes of worlds. Classes are numbered in order of their
/// least member.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Partition {
    class_of: Vec<usize>,
    classes: Vec<WorldSet>,
}

impl Partition {
    /// Builds a partition from any class labelling, renumbering classes
    /// canonically.
    pub fn from_labels<K: Ord + Clone>(labels: &[K]) -> Partition {
        let mut ids: BTreeMap<K, usize> = BTreeMap::new();
        let mut class_of = Vec::with_capacity(labels.len());
        let mut classes: Vec<WorldSet> = Vec::new();
        for (w, k) in labels.iter().enumerate() {
            let next = ids.len();
            let id = *ids.entry(k.clone()).or_insert(next);
            if id == classes.len() {
                classes.push(WorldSet::EMPTY);
            }
            classes[id].insert(w);
            class_of.push(id);
        }
        Partition { class_of, classes }
    }

    pub fn discrete(n: usize) -> Partition {
        Partition::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn worlds(&self) -> usize {
        self.class_of.len()
    }

    pub fn class_of(&self, w: usize) -> usize {
        self.class_of[w]
    }

    pub fn class(&self, c: usize) -> WorldSet {
        self.classes[c]
    }

    pub fn classes(&self) -> &[WorldSet] {
        &self.classes
    }

    /// Least member of class `c`.
    pub fn representative(&self, c: usize) -> usize {
        self.classes[c].min().expect("classes are nonempty")
    }

    /// Class indices met by `v`.
    pub fn classes_of(&self, v: WorldSet) -> WorldSet {
        v.iter().map(|w| self.class_of[w]).collect()
    }

    /// Union of the classes in `c`.
    pub fn union_of(&self, c: WorldSet) -> WorldSet {
        c.iter().fold(WorldSet::EMPTY, |acc, i| acc | self.classes[i])
    }

    pub fn relation(&self) -> Relation {
        self.class_of.iter().map(|&c| self.classes[c]).collect()
    }

    /// Is every class of `self` inside a class of `other`?
    pub fn refines(&self, other: &Partition) -> bool {
        self.classes
            .iter()
            .all(|c| other.classes.iter().any(|d| c.is_subset(*d)))
    }

    /// Display name of class `c`: its least member in brackets.
    pub fn class_name(&self, names: &[String], c: usize) -> String {
        format!("[{}]", names[self.representative(c)])
    }

    /// `{class name: [member names]}`.
    pub fn to_json(&self, names: &[String]) -> Value {
        let mut map = Map::new();
        for (c, members) in self.classes.iter().enumerate() {
            let list = members.iter().map(|w| Value::String(names[w].clone())).collect();
            map.insert(self.class_name(names, c), Value::Array(list));
        }
        Value::Object(map)
    }

    pub fn describe(&self, names: &[String]) -> String {
        self.classes
            .iter()
            .enumerate()
            .map(|(c, m)| format!("{} = {}\n", self.class_name(names, c), format_set(names, *m)))
            .collect()
    }
}

/// The clause a candidate relation violates, with its witness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BisimFailure {
    Empty,
    /// `w Z w'` but they disagree on `var`.
    At { w: usize, w2: usize, var: String },
    /// `w Z w'`, `w R u`, and no `u'` matches `u`.
    Forth { w: usize, w2: usize, u: usize },
    /// `w Z w'`, `w' R' u'`, and no `u` matches `u'`.
    Back { w: usize, w2: usize, u2: usize },
}

impl BisimFailure {
    pub fn describe(&self, left: &[String], right: &[String]) -> String {
        match self {
            BisimFailure::Empty => "the relation is empty".into(),
            BisimFailure::At { w, w2, var } => format!(
                "(at) fails: {} and {} disagree on {var}",
                left[*w], right[*w2]
            ),
            BisimFailure::Forth { w, w2, u } => format!(
                "(forth) fails: {} Z {} and {} R {}, but no successor of {} matches",
                left[*w], right[*w2], left[*w], left[*u], right[*w2]
            ),
            BisimFailure::Back { w, w2, u2 } => format!(
                "(back) fails: {} Z {} and {} R' {}, but no successor of {} matches",
                left[*w], right[*w2], right[*w2], right[*u2], left[*w]
            ),
        }
    }
}

fn image(z: &Relation, v: WorldSet) -> WorldSet {
    v.iter().fold(WorldSet::EMPTY, |acc, x| acc | z[x])
}

fn converse(z: &Relation, right_len: usize) -> Relation {
    let mut out = vec![WorldSet::EMPTY; right_len];
    for (w, targets) in z.iter().enumerate() {
        for t in *targets {
            out[t].insert(w);
        }
    }
    out
}

/// Checks (at), (forth) and (back) for every pair of `z`.
///
/// For (forth) with a fixed `u'`, a set `V'` with `u' S'_{w'} V'` needs some
/// `V` with `u S_w V` and `V ⊆ Z⁻¹[V']`. That requirement weakens as `V'`
/// grows, so only generators of `S'_{w'}(u')` need checking; and since `S_w(u)`
/// is upward closed in `R[w]`, the best `V` is `Z⁻¹[V'] ∩ R[w]`. (back) is
/// symmetric.
pub fn is_bisimulation(m: &GenModel, m2: &GenModel, z: &Relation) -> Result<(), BisimFailure> {
    assert_eq!(z.len(), m.len(), "relation must have one row per world");
    let full2 = WorldSet::full(m2.len());
    assert!(z.iter().all(|r| r.is_subset(full2)), "relation targets out of range");
    if z.iter().all(|r| r.is_empty()) {
        return Err(BisimFailure::Empty);
    }
    let zc = converse(z, m2.len());
    let vars: BTreeSet<&String> = m.valuation.keys().chain(m2.valuation.keys()).collect();
    let (f, f2) = (&m.frame, &m2.frame);
    for w in 0..m.len() {
        for w2 in z[w] {
            if let Some(var) = vars
                .iter()
                .find(|p| m.val(p).contains(w) != m2.val(p).contains(w2))
            {
                return Err(BisimFailure::At {
                    w,
                    w2,
                    var: (*var).clone(),
                });
            }
            let (rw, rw2) = (f.succ(w), f2.succ(w2));
            for u in rw {
                let ok = (rw2 & z[u]).iter().any(|u2| {
                    f2.generators(w2, u2)
                        .iter()
                        .all(|&g2| f.s_holds(w, u, image(&zc, g2) & rw))
                });
                if !ok {
                    return Err(BisimFailure::Forth { w, w2, u });
                }
            }
            for u2 in rw2 {
                let ok = (rw & zc[u2]).iter().any(|u| {
                    f.generators(w, u)
                        .iter()
                        .all(|&g| f2.s_holds(w2, u2, image(z, g) & rw2))
                });
                if !ok {
                    return Err(BisimFailure::Back { w, w2, u2 });
                }
            }
        }
    }
    Ok(())
}

/// Partition of `m` by agreement on the variables of its valuation.
pub fn atomic_partition(m: &GenModel) -> Partition {
    let labels: Vec<Vec<bool>> = (0..m.len())
        .map(|w| m.valuation.values().map(|s| s.contains(w)).collect())
        .collect();
    Partition::from_labels(&labels)
}

/// What a world must match under the current partition: for each class `c`,
/// the ⊆-minimal families `{cls(G) : G generator of S_w(u)}↑` over successors
/// `u ∈ c`. Two worlds of one class satisfy (forth) and (back) against each
/// other exactly when these coincide.
fn signature(m: &GenModel, p: &Partition, w: usize) -> Vec<(usize, Vec<Antichain>)> {
    let mut by_class: BTreeMap<usize, Vec<Antichain>> = BTreeMap::new();
    for u in m.frame.succ(w) {
        let fam: Antichain = m
            .frame
            .generators(w, u)
            .iter()
            .map(|&g| p.classes_of(g))
            .collect();
        let entry = by_class.entry(p.class_of(u)).or_default();
        // Up-closed families: the smaller family is the one included in the other.
        if entry.iter().any(|e| fam.includes(e)) {
            continue;
        }
        entry.retain(|e| !e.includes(&fam));
        entry.push(fam);
    }
    by_class
        .into_iter()
        .map(|(c, mut fams)| {
            fams.sort();
            (c, fams)
        })
        .collect()
}

/// The largest bisimulation of `m` with itself, by partition refinement from
/// atomic agreement.
pub fn largest_autobisimulation(m: &GenModel) -> Partition {
    let mut p = atomic_partition(m);
    loop {
        let labels: Vec<(usize, Vec<(usize, Vec<Antichain>)>)> = (0..m.len())
            .map(|w| (p.class_of(w), signature(m, &p, w)))
            .collect();
        let next = Partition::from_labels(&labels);
        if next.len() == p.len() {
            return next;
        }
        p = next;
    }
}
