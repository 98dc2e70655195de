//! Filtration of a generalized model through an adequate set, over the
//! classes of its largest autobisimulation.

use thiserror::Error;

use crate::bisim::{largest_autobisimulation, Partition};
use crate::formula::{adequate_set, Formula, FormulaSet};
use crate::model::{Evaluator, GenFrame, GenModel, Report, Valuation};
use crate::worldset::{Antichain, WorldSet};

#[derive(Clone, Debug)]
pub struct FiltrationResult {
    /// World `c` of the quotient is class `c` of `partition`.
    pub quotient: GenModel,
    pub partition: Partition,
    pub gamma: FormulaSet,
}

#[derive(Clone, Debug, Error)]
pub enum FiltrationError {
    #[error("input model is not legal:\n{0}")]
    IllegalInput(Report),
    #[error("the constructed quotient violates a frame clause:\n{0}")]
    IllegalQuotient(Report),
}

/// A formula of `gamma` whose truth at `world` differs from its truth at the
/// world's class.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Counterexample {
    pub world: usize,
    pub formula: Formula,
}

/// The box-formulas of `gamma`, with `□A` written either as a box or as
/// `¬A ▷ ⊥`.
fn box_witnesses(gamma: &FormulaSet) -> Vec<&Formula> {
    gamma
        .iter()
        .filter(|f| matches!(f, Formula::Box(_)) || matches!(f, Formula::Rhd(_, b) if **b == Formula::Bot))
        .collect()
}

/// Builds the filtration of `m` through the adequate set of `d`.
///
/// - `[w] R̃ [u]` iff some `w' ∈ [w]`, `u' ∈ [u]` have `w' R u'` and a box
///   formula of Γ fails at `w'` and holds at `u'`.
/// - `[u] S̃_[w] Ṽ` iff `[w] R̃ [u]`, `Ṽ ⊆ R̃[[w]]`, and every `w' ∈ [w]`,
///   `u' ∈ [u]` with `w' R u'` have a generator `G` of `S_{w'}(u')` whose
///   classes lie in `Ṽ`. The minimal `Ṽ` are found by scanning subsets.
/// - Variables of Γ keep their truth value; other variables are false.
pub fn filtrate(m: &GenModel, d: &FormulaSet) -> Result<FiltrationResult, FiltrationError> {
    let report = m.validate();
    if !report.is_legal() {
        return Err(FiltrationError::IllegalInput(report));
    }
    let gamma = adequate_set(d);
    let partition = largest_autobisimulation(m);
    let k = partition.len();
    let mut eval = Evaluator::new(m);
    let boxes: Vec<WorldSet> = box_witnesses(&gamma)
        .into_iter()
        .map(|f| eval.truth_set(f))
        .collect();
    let f = &m.frame;

    let mut succ = vec![WorldSet::EMPTY; k];
    for w in 0..m.len() {
        for u in f.succ(w) {
            if boxes.iter().any(|t| !t.contains(w) && t.contains(u)) {
                succ[partition.class_of(w)].insert(partition.class_of(u));
            }
        }
    }

    let mut s = vec![vec![Antichain::new(); k]; k];
    for cw in 0..k {
        let range = succ[cw];
        for cu in range {
            // Class images of the generators, one family per related pair.
            let mut demands: Vec<Vec<WorldSet>> = Vec::new();
            for w in partition.class(cw) {
                for u in f.succ(w) & partition.class(cu) {
                    demands.push(
                        f.generators(w, u)
                            .iter()
                            .map(|&g| partition.classes_of(g))
                            .collect(),
                    );
                }
            }
            let mut candidates: Vec<WorldSet> = range.subsets().collect();
            candidates.sort_by_key(|v| (v.len(), v.bits()));
            for v in candidates {
                if demands.iter().all(|gs| gs.iter().any(|g| g.is_subset(v))) {
                    s[cw][cu].insert(v);
                }
            }
        }
    }

    let names: Vec<String> = (0..k)
        .map(|c| partition.class_name(f.worlds(), c))
        .collect();
    let frame = GenFrame::from_parts(names, succ, s);
    let valuation: Valuation = gamma
        .iter()
        .filter_map(|g| match g {
            Formula::Var(p) => Some((p.clone(), partition.classes_of(m.val(p)))),
            _ => None,
        })
        .collect();
    let quotient = GenModel::new(frame, valuation);
    let report = quotient.validate();
    if !report.is_legal() {
        return Err(FiltrationError::IllegalQuotient(report));
    }
    Ok(FiltrationResult {
        quotient,
        partition,
        gamma,
    })
}

/// Checks `w ⊩ A ⟺ [w] ⊩ A` for every `A ∈ Γ` and every world `w`.
/// Reports the first failure in formula order, then world order.
pub fn verify_filtration(m: &GenModel, r: &FiltrationResult) -> Result<(), Counterexample> {
    let mut left = Evaluator::new(m);
    let mut right = Evaluator::new(&r.quotient);
    for a in r.gamma.iter() {
        let here = left.truth_set(a);
        let there = r.partition.union_of(right.truth_set(a));
        if here != there {
            let world = ((here - there) | (there - here)).min().expect("sets differ");
            return Err(Counterexample {
                world,
                formula: a.clone(),
            });
        }
    }
    Ok(())
}
