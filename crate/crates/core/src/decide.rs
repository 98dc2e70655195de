//! Enumeration of small generalized frames and bounded countermodel search.
//!
//! A `NoCountermodelUpTo(n)` verdict means what it says: no frame of the
//! logic's class with at most `n` worlds refutes the formula. It is not a
//! validity claim.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::formula::Formula;
use crate::hilbert::{check_proof, Logic, ProofObject, Rejection};
use crate::model::{default_names, truth_set, GenFrame, GenModel, Valuation};
use crate::properties::{is_logic_frame, valuations};
use crate::worldset::{Antichain, WorldSet};

/// Largest frame size accepted by [`enumerate_frames`].
pub const MAX_ENUMERATION_WORLDS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("frame enumeration is limited to {MAX_ENUMERATION_WORLDS} worlds (asked for {0})")]
    TooManyWorlds(usize),
    #[error("search budget must be positive: {0}")]
    BadBudget(&'static str),
    #[error("time limit of {0:?} exhausted before the search finished")]
    TimeLimit(Duration),
}

/// Strict partial orders on `0..n` in which every edge goes up (`i R j ⇒ i < j`).
/// Every finite strict order is isomorphic to one of these. Ordered by edge
/// count, then lexicographically by sorted edge list.
pub fn strict_orders(n: usize) -> Vec<Vec<WorldSet>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut out: Vec<(Vec<(usize, usize)>, Vec<WorldSet>)> = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, e)| *e)
            .collect();
        let mut succ = vec![WorldSet::EMPTY; n];
        for &(i, j) in &edges {
            succ[i].insert(j);
        }
        let transitive = (0..n).all(|w| succ[w].iter().all(|u| succ[u].is_subset(succ[w])));
        if transitive {
            out.push((edges, succ));
        }
    }
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    out.into_iter().map(|(_, s)| s).collect()
}

/// Antichains of nonempty subsets of `free` (including the empty antichain).
fn antichains_over(free: WorldSet) -> Vec<Vec<WorldSet>> {
    let subsets: Vec<WorldSet> = free.subsets().filter(|s| !s.is_empty()).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn go(
        subsets: &[WorldSet],
        start: usize,
        current: &mut Vec<WorldSet>,
        out: &mut Vec<Vec<WorldSet>>,
    ) {
        out.push(current.clone());
        for i in start..subsets.len() {
            let s = subsets[i];
            if current.iter().all(|c| !c.is_subset(s) && !s.is_subset(*c)) {
                current.push(s);
                go(subsets, i + 1, current, out);
                current.pop();
            }
        }
    }
    go(&subsets, 0, &mut current, &mut out);
    out
}

fn cartesian<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut acc: Vec<Vec<T>> = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::with_capacity(acc.len() * list.len());
        for prefix in &acc {
            for item in list {
                let mut v = prefix.clone();
                v.push(item.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

/// Legal `S_w` assignments (one antichain per world, indexed by `u`) for a
/// fixed `w` over the order `succ`.
fn s_options_at(succ: &[WorldSet], w: usize) -> Vec<Vec<Antichain>> {
    let n = succ.len();
    let rw = succ[w];
    let members: Vec<usize> = rw.iter().collect();
    let per_u: Vec<Vec<Antichain>> = members
        .iter()
        .map(|&u| {
            let forced = WorldSet::singleton(u) | (succ[u] & rw);
            let free = rw - forced;
            antichains_over(free)
                .into_iter()
                .map(|extra| {
                    forced
                        .iter()
                        .map(WorldSet::singleton)
                        .chain(extra)
                        .collect::<Antichain>()
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for combo in cartesian(&per_u) {
        let mut row = vec![Antichain::new(); n];
        for (&u, a) in members.iter().zip(combo) {
            row[u] = a;
        }
        // Quasi-transitivity only involves S_w, so it can be checked per world.
        let mut probe = GenFrame::with_relation(succ.to_vec());
        for u in 0..n {
            *probe.generators_mut(w, u) = row[u].clone();
        }
        if probe.close_s().generators_row_eq(w, &row) {
            out.push(row);
        }
    }
    out
}

impl GenFrame {
    fn generators_row_eq(&self, w: usize, row: &[Antichain]) -> bool {
        (0..self.len()).all(|u| self.generators(w, u) == &row[u])
    }
}

/// All legal generalized frames on `n` worlds whose `R` is one of
/// [`strict_orders`], belonging to the characteristic class of `logic`.
///
/// Within one `R`, frames come in increasing order of generator count.
pub fn enumerate_frames(
    n: usize,
    logic: Logic,
) -> Result<impl Iterator<Item = GenFrame>, DecideError> {
    if n > MAX_ENUMERATION_WORLDS {
        return Err(DecideError::TooManyWorlds(n));
    }
    if n == 0 {
        return Err(DecideError::BadBudget("frames need at least one world"));
    }
    let names = default_names(n);
    Ok(strict_orders(n).into_iter().flat_map(move |succ| {
        let options: Vec<Vec<Vec<Antichain>>> = (0..n).map(|w| s_options_at(&succ, w)).collect();
        let mut frames: Vec<GenFrame> = cartesian(&options)
            .into_iter()
            .map(|s| GenFrame::from_parts(names.clone(), succ.clone(), s))
            .filter(|f| is_logic_frame(f, logic))
            .collect();
        frames.sort_by_key(GenFrame::generator_count);
        frames
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_worlds: usize,
    pub max_generators: Option<usize>,
    pub time_limit: Option<Duration>,
}

impl SearchBudget {
    pub fn worlds(max_worlds: usize) -> Self {
        SearchBudget {
            max_worlds,
            max_generators: None,
            time_limit: None,
        }
    }

    fn check(&self) -> Result<(), DecideError> {
        if self.max_worlds == 0 {
            return Err(DecideError::BadBudget("max worlds"));
        }
        if self.max_worlds > MAX_ENUMERATION_WORLDS {
            return Err(DecideError::TooManyWorlds(self.max_worlds));
        }
        if self.max_generators == Some(0) {
            return Err(DecideError::BadBudget("max generators"));
        }
        if self.time_limit == Some(Duration::ZERO) {
            return Err(DecideError::BadBudget("time limit"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The formula fails at `world` in `model`, whose frame is in the logic's class.
    Refuted { model: GenModel, world: usize },
    NoCountermodelUpTo(usize),
    /// A supplied proof of the formula was accepted.
    CheckedTheorem { logic: Logic, steps: usize },
}

/// Looks for the smallest frame of `logic`'s class, and the first valuation of
/// the formula's variables, refuting `a` somewhere.
pub fn countermodel_search(
    a: &Formula,
    logic: Logic,
    budget: SearchBudget,
) -> Result<Verdict, DecideError> {
    budget.check()?;
    let started = Instant::now();
    let vars: Vec<String> = a.variables().into_iter().collect();
    for n in 1..=budget.max_worlds {
        let all = WorldSet::full(n);
        for frame in enumerate_frames(n, logic)? {
            if let Some(limit) = budget.time_limit {
                if started.elapsed() > limit {
                    return Err(DecideError::TimeLimit(limit));
                }
            }
            if let Some(cap) = budget.max_generators {
                let too_many = (0..n).any(|w| (0..n).any(|u| frame.generators(w, u).len() > cap));
                if too_many {
                    continue;
                }
            }
            let mut model = GenModel::new(frame, Valuation::new());
            for val in valuations(&vars, n) {
                model.valuation = val;
                let t = truth_set(&model, a);
                if t != all {
                    let world = (all - t).min().expect("some world fails");
                    return Ok(Verdict::Refuted { model, world });
                }
            }
        }
    }
    Ok(Verdict::NoCountermodelUpTo(budget.max_worlds))
}

/// Accepts a supplied proof of `a`, or falls back to countermodel search.
/// A proof whose last line is not `a` (up to normalization) is ignored.
pub fn decide(
    a: &Formula,
    logic: Logic,
    budget: SearchBudget,
    proof: Option<&ProofObject>,
) -> Result<Verdict, DecideError> {
    if let Some(p) = proof {
        let concludes = p.conclusion().map(Formula::normalize) == Some(a.normalize());
        if concludes && check_proof(p, logic).is_ok() {
            return Ok(Verdict::CheckedTheorem {
                logic,
                steps: p.lines.len(),
            });
        }
    }
    countermodel_search(a, logic, budget)
}

/// Why a supplied proof was not used.
pub fn proof_problem(a: &Formula, logic: Logic, proof: &ProofObject) -> Option<Rejection> {
    if let Err(r) = check_proof(proof, logic) {
        return Some(r);
    }
    if proof.conclusion().map(Formula::normalize) != Some(a.normalize()) {
        return Some(Rejection {
            line: proof.lines.len(),
            reason: "the proof does not conclude the queried formula".into(),
        });
    }
    None
}
