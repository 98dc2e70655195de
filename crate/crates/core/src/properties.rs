//! Characteristic frame conditions of the principles M, M₀, P, P₀, R and W
//! over generalized frames, frame validity of schemata, and a bench that
//! compares the two on enumerated frames.
//!
//! All checks quantify over generators of `S` where the condition is monotone
//! in the quantified image, and replace each inner `∃V' ⊆ V` by a test on the
//! largest admissible `V'`: since `S_w` is upward closed, some admissible
//! `V'` is an `S_w`-image iff the largest one is.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::decide::{enumerate_frames, DecideError};
use crate::hilbert::{Logic, SchemaId};
use crate::model::{format_set, truth_set, GenFrame, GenModel, Valuation};
use crate::worldset::{minimal_hitting_sets, Antichain, WorldSet};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub enum PropertyId {
    Mgen,
    M0gen,
    Pgen,
    P0gen,
    Rgen,
    Wgen,
}

impl PropertyId {
    pub const ALL: [PropertyId; 6] = [
        PropertyId::Mgen,
        PropertyId::M0gen,
        PropertyId::Pgen,
        PropertyId::P0gen,
        PropertyId::Rgen,
        PropertyId::Wgen,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropertyId::Mgen => "Mgen",
            PropertyId::M0gen => "M0gen",
            PropertyId::Pgen => "Pgen",
            PropertyId::P0gen => "P0gen",
            PropertyId::Rgen => "Rgen",
            PropertyId::Wgen => "Wgen",
        }
    }

    /// The principle this condition characterizes.
    pub fn schema(self) -> SchemaId {
        match self {
            PropertyId::Mgen => SchemaId::M,
            PropertyId::M0gen => SchemaId::M0,
            PropertyId::Pgen => SchemaId::P,
            PropertyId::P0gen => SchemaId::P0,
            PropertyId::Rgen => SchemaId::R,
            PropertyId::Wgen => SchemaId::W,
        }
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown property {0:?}")]
pub struct UnknownProperty(pub String);

impl FromStr for PropertyId {
    type Err = UnknownProperty;
    fn from_str(s: &str) -> Result<PropertyId, UnknownProperty> {
        PropertyId::ALL
            .iter()
            .find(|p| p.name() == s)
            .copied()
            .ok_or_else(|| UnknownProperty(s.to_string()))
    }
}

/// Frame conditions defining the characteristic class of a logic.
pub fn frame_conditions(logic: Logic) -> &'static [PropertyId] {
    match logic {
        Logic::IL => &[],
        Logic::ILM => &[PropertyId::Mgen],
        Logic::ILM0 => &[PropertyId::M0gen],
        Logic::ILP => &[PropertyId::Pgen],
        Logic::ILP0 => &[PropertyId::P0gen],
        Logic::ILR => &[PropertyId::Rgen],
        Logic::ILW => &[PropertyId::Wgen],
        Logic::ILWstar => &[PropertyId::M0gen, PropertyId::Wgen],
    }
}

/// Does the frame belong to the characteristic class of `logic`?
pub fn is_logic_frame(f: &GenFrame, logic: Logic) -> bool {
    frame_conditions(logic)
        .iter()
        .all(|p| check_property(f, *p).is_ok())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("choice sets need x R u")]
pub struct NotRelated;

/// Minimal choice sets `C ⊆ R[x]`: sets meeting every `Z` with `u S_x Z`.
/// Every superset within `R[x]` of a returned set is a choice set as well.
pub fn choice_sets(f: &GenFrame, x: usize, u: usize) -> Result<Antichain, NotRelated> {
    if !f.succ(x).contains(u) {
        return Err(NotRelated);
    }
    Ok(minimal_hitting_sets(f.generators(x, u).iter().copied()))
}

/// The tuple violating a frame condition (world indices).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Counterwitness {
    /// `u S_w V` without a suitable `V' ⊆ V`.
    M { w: usize, u: usize, v: WorldSet },
    /// `w R u R x S_w V` without a suitable `V' ⊆ V` for `u`.
    M0 { w: usize, u: usize, x: usize, v: WorldSet },
    /// `w R w' R u S_w V` but no `V' ⊆ V` with `u S_w' V'`.
    P { w: usize, w1: usize, u: usize, v: WorldSet },
    /// `w R x R u S_w V`, `Z` meets every `R[v]`, but no `Z' ⊆ Z` with `u S_x Z'`.
    P0 { w: usize, x: usize, u: usize, v: WorldSet, z: WorldSet },
    /// `w R x R u S_w V` and choice set `C` without `U ⊆ V`, `x S_w U`, `R[U] ⊆ C`.
    R { w: usize, x: usize, u: usize, v: WorldSet, c: WorldSet },
    /// `u S_w V` without `V' ⊆ V` such that `R[V']` avoids `S_w^{-1}[V]`.
    W { w: usize, u: usize, v: WorldSet },
}

impl Counterwitness {
    pub fn describe(&self, names: &[String]) -> String {
        let n = |i: &usize| names.get(*i).cloned().unwrap_or_else(|| format!("#{i}"));
        let s = |x: &WorldSet| format_set(names, *x);
        match self {
            Counterwitness::M { w, u, v } => format!("(w, u, V) = ({}, {}, {})", n(w), n(u), s(v)),
            Counterwitness::M0 { w, u, x, v } => {
                format!("(w, u, x, V) = ({}, {}, {}, {})", n(w), n(u), n(x), s(v))
            }
            Counterwitness::P { w, w1, u, v } => {
                format!("(w, w', u, V) = ({}, {}, {}, {})", n(w), n(w1), n(u), s(v))
            }
            Counterwitness::P0 { w, x, u, v, z } => format!(
                "(w, x, u, V, Z) = ({}, {}, {}, {}, {})",
                n(w),
                n(x),
                n(u),
                s(v),
                s(z)
            ),
            Counterwitness::R { w, x, u, v, c } => format!(
                "(w, x, u, V, C) = ({}, {}, {}, {}, {})",
                n(w),
                n(x),
                n(u),
                s(v),
                s(c)
            ),
            Counterwitness::W { w, u, v } => format!("(w, u, V) = ({}, {}, {})", n(w), n(u), s(v)),
        }
    }
}

/// Checks one characteristic condition on a legal frame.
pub fn check_property(f: &GenFrame, p: PropertyId) -> Result<(), Counterwitness> {
    match p {
        PropertyId::Mgen => check_m(f),
        PropertyId::M0gen => check_m0(f),
        PropertyId::Pgen => check_p(f),
        PropertyId::P0gen => check_p0(f),
        PropertyId::Rgen => check_r(f),
        PropertyId::Wgen => check_w(f),
    }
}

/// `{v ∈ V : R[v] ⊆ bound}`.
fn successors_within(f: &GenFrame, v: WorldSet, bound: WorldSet) -> WorldSet {
    v.iter().filter(|&x| f.succ(x).is_subset(bound)).collect()
}

// uS_wV ⇒ (∃V'⊆V)(uS_wV' & R[V'] ⊆ R[u])
fn check_m(f: &GenFrame) -> Result<(), Counterwitness> {
    for w in 0..f.len() {
        for u in f.succ(w) {
            for &v in f.generators(w, u) {
                if !f.s_holds(w, u, successors_within(f, v, f.succ(u))) {
                    return Err(Counterwitness::M { w, u, v });
                }
            }
        }
    }
    Ok(())
}

// wRuRxS_wV ⇒ (∃V'⊆V)(uS_wV' & R[V'] ⊆ R[u])
fn check_m0(f: &GenFrame) -> Result<(), Counterwitness> {
    for w in 0..f.len() {
        for u in f.succ(w) {
            for x in f.succ(u) {
                for &v in f.generators(w, x) {
                    if !f.s_holds(w, u, successors_within(f, v, f.succ(u))) {
                        return Err(Counterwitness::M0 { w, u, x, v });
                    }
                }
            }
        }
    }
    Ok(())
}

// wRw'RuS_wV ⇒ (∃V'⊆V) uS_{w'}V'
fn check_p(f: &GenFrame) -> Result<(), Counterwitness> {
    for w in 0..f.len() {
        for w1 in f.succ(w) {
            for u in f.succ(w1) {
                for &v in f.generators(w, u) {
                    if !f.s_holds(w1, u, v & f.succ(w1)) {
                        return Err(Counterwitness::P { w, w1, u, v });
                    }
                }
            }
        }
    }
    Ok(())
}

// wRxRuS_wV & (∀v∈V) R[v]∩Z ≠ ∅ ⇒ (∃Z'⊆Z) uS_xZ'
// Z ranges over minimal hitting sets of {R[v] : v ∈ V}.
fn check_p0(f: &GenFrame) -> Result<(), Counterwitness> {
    for w in 0..f.len() {
        for x in f.succ(w) {
            for u in f.succ(x) {
                for &v in f.generators(w, u) {
                    let hitting = minimal_hitting_sets(v.iter().map(|y| f.succ(y)));
                    for &z in &hitting {
                        if !f.s_holds(x, u, z & f.succ(x)) {
                            return Err(Counterwitness::P0 { w, x, u, v, z });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

// wRxRuS_wV ⇒ (∀C ∈ C(x,u))(∃U⊆V)(xS_wU & R[U] ⊆ C)
// C ranges over minimal choice sets.
fn check_r(f: &GenFrame) -> Result<(), Counterwitness> {
    for w in 0..f.len() {
        for x in f.succ(w) {
            for u in f.succ(x) {
                let choices = choice_sets(f, x, u).expect("x R u");
                for &v in f.generators(w, u) {
                    for &c in &choices {
                        if !f.s_holds(w, x, successors_within(f, v, c)) {
                            return Err(Counterwitness::R { w, x, u, v, c });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

// uS_wV ⇒ (∃V'⊆V)(uS_wV' & R[V'] ∩ S_w^{-1}[V] = ∅)
// Not monotone in V (the preimage grows with V), so every image V is visited.
fn check_w(f: &GenFrame) -> Result<(), Counterwitness> {
    for w in 0..f.len() {
        let rw = f.succ(w);
        for v in rw.subsets() {
            let pre = f.s_preimage(w, v);
            let allowed: WorldSet = v.iter().filter(|&y| !f.succ(y).intersects(pre)).collect();
            for u in pre {
                if !f.s_holds(w, u, allowed) {
                    return Err(Counterwitness::W { w, u, v });
                }
            }
        }
    }
    Ok(())
}

/// Default bound on frame size for [`schema_frame_valid`].
pub const DEFAULT_SCHEMA_WORLD_CAP: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("frame has {size} worlds; schema validity is checked up to {cap}")]
pub struct FrameTooLarge {
    pub size: usize,
    pub cap: usize,
}

/// A valuation of the schema's variables `a`, `b`, `c` and a world where the
/// instance fails.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Falsifier {
    pub valuation: Valuation,
    pub world: usize,
}

/// Every valuation of `vars` over `n` worlds, the last variable varying fastest.
pub fn valuations(vars: &[String], n: usize) -> impl Iterator<Item = Valuation> + '_ {
    let per = 1u64 << n;
    let total = per.checked_pow(vars.len() as u32).expect("valuation count overflow");
    (0..total).map(move |mut code| {
        let mut val = Valuation::new();
        for var in vars.iter().rev() {
            val.insert(var.clone(), WorldSet::from_bits(code % per));
            code /= per;
        }
        val
    })
}

/// Is the schema valid on the frame? Instantiates it with fresh variables and
/// tries every valuation of them; returns the first falsifier otherwise.
pub fn schema_frame_valid(
    f: &GenFrame,
    schema: SchemaId,
    cap: usize,
) -> Result<Option<Falsifier>, FrameTooLarge> {
    if f.len() > cap {
        return Err(FrameTooLarge { size: f.len(), cap });
    }
    let instance = schema.fresh_instance();
    let vars: Vec<String> = instance.variables().into_iter().collect();
    let all = f.all();
    let mut model = GenModel::new(f.clone(), Valuation::new());
    for val in valuations(&vars, f.len()) {
        model.valuation = val;
        let t = truth_set(&model, &instance);
        if t != all {
            let world = (all - t).min().expect("nonempty complement");
            return Ok(Some(Falsifier {
                valuation: model.valuation,
                world,
            }));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub frame_id: String,
    pub property_holds: bool,
    pub schema_valid: bool,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub property: PropertyId,
    pub worlds: usize,
    pub exhaustive: bool,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn disagreements(&self) -> impl Iterator<Item = &BenchRow> {
        self.rows.iter().filter(|r| !r.agree)
    }

    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.agree)
    }

    pub fn text_table(&self) -> String {
        let mut out = format!(
            "{:<12} {:>8} {:>8} {:>6}\n",
            "frame", self.property.name(), self.property.schema().name(), "agree"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:<12} {:>8} {:>8} {:>6}\n",
                r.frame_id, r.property_holds, r.schema_valid, r.agree
            ));
        }
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BenchOptions {
    /// Frames drawn at four worlds.
    pub samples: usize,
    pub seed: u64,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            samples: 500,
            seed: 0,
        }
    }
}

/// Compares `check_property` with frame validity of the matching schema on
/// every frame with `n ≤ 3` worlds, or on a seeded sample at `n = 4`.
pub fn correspondence_bench(
    n: usize,
    p: PropertyId,
    opts: BenchOptions,
) -> Result<BenchReport, DecideError> {
    let frames: Vec<GenFrame> = enumerate_frames(n, Logic::IL)?.collect();
    let exhaustive = n <= 3;
    let picked: Vec<(usize, &GenFrame)> = if exhaustive || frames.len() <= opts.samples {
        frames.iter().enumerate().collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut idx = sample(&mut rng, frames.len(), opts.samples).into_vec();
        idx.sort_unstable();
        idx.into_iter().map(|i| (i, &frames[i])).collect()
    };
    let rows = picked
        .par_iter()
        .map(|(i, f)| {
            let property_holds = check_property(f, p).is_ok();
            let schema_valid = schema_frame_valid(f, p.schema(), n.max(DEFAULT_SCHEMA_WORLD_CAP))
                .expect("within cap")
                .is_none();
            BenchRow {
                frame_id: format!("n{n}#{i}"),
                property_holds,
                schema_valid,
                agree: property_holds == schema_valid,
            }
        })
        .collect();
    Ok(BenchReport {
        property: p,
        worlds: n,
        exhaustive,
        rows,
    })
}
