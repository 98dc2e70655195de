//! Seeded random formulas and models for property testing.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formula::Formula;
use crate::model::{default_names, GenFrame, GenModel, OrdFrame, OrdModel, Valuation};
use crate::worldset::WorldSet;

/// Bounds on generated formulas.
#[derive(Clone, Copy, Debug)]
pub struct FormulaShape {
    /// Maximum nesting depth of connectives.
    pub depth: usize,
    /// Maximum nesting of `▷`, `□` and `◇`.
    pub modal_depth: usize,
    /// Allow `□` and `◇` (otherwise they are never produced).
    pub sugar: bool,
}

/// A random formula over `vars` (which must be nonempty) within `shape`.
pub fn formula<R: Rng + ?Sized>(rng: &mut R, vars: &[String], shape: FormulaShape) -> Formula {
    assert!(!vars.is_empty(), "need at least one variable");
    gen_formula(rng, vars, shape.depth, shape.modal_depth, shape.sugar)
}

fn gen_formula<R: Rng + ?Sized>(
    rng: &mut R,
    vars: &[String],
    depth: usize,
    modal: usize,
    sugar: bool,
) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return match rng.gen_range(0..10) {
            0 => Formula::Bot,
            1 => Formula::Top,
            _ => Formula::var(vars.choose(rng).expect("nonempty").clone()),
        };
    }
    let sub = |rng: &mut R, m: usize| gen_formula(rng, vars, depth - 1, m, sugar);
    let choices: &[u8] = match (modal > 0, sugar) {
        (true, true) => &[0, 1, 2, 3, 4, 5, 6],
        (true, false) => &[0, 1, 2, 3, 4],
        (false, _) => &[0, 1, 2, 3],
    };
    match choices.choose(rng).expect("nonempty") {
        0 => Formula::neg(sub(rng, modal)),
        1 => Formula::and(sub(rng, modal), sub(rng, modal)),
        2 => Formula::or(sub(rng, modal), sub(rng, modal)),
        3 => Formula::imp(sub(rng, modal), sub(rng, modal)),
        4 => Formula::rhd(sub(rng, modal - 1), sub(rng, modal - 1)),
        5 => Formula::boxed(sub(rng, modal - 1)),
        _ => Formula::dia(sub(rng, modal - 1)),
    }
}

/// A random strict partial order on `n` worlds with labels shuffled.
pub fn strict_order<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> Vec<WorldSet> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut succ = vec![WorldSet::EMPTY; n];
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                succ[perm[i]].insert(perm[j]);
            }
        }
    }
    // Transitive closure, processing sinks of the topological order first.
    for i in (0..n).rev() {
        let w = perm[i];
        let below = succ[w].iter().fold(WorldSet::EMPTY, |acc, u| acc | succ[u]);
        succ[w] = succ[w] | below;
    }
    succ
}

fn valuation<R: Rng + ?Sized>(rng: &mut R, n: usize, vars: &[String]) -> Valuation {
    vars.iter()
        .map(|p| {
            let bits = rng.gen::<u64>() & WorldSet::full(n).bits();
            (p.clone(), WorldSet::from_bits(bits))
        })
        .collect()
}

/// A random legal generalized model: random order, a few extra generators,
/// then the least legal closure.
pub fn gen_model<R: Rng + ?Sized>(rng: &mut R, n: usize, vars: &[String]) -> GenModel {
    let succ = strict_order(rng, n, 0.5);
    let mut frame = GenFrame::with_relation(succ.clone());
    for w in 0..n {
        let rw = succ[w];
        for u in rw {
            for _ in 0..rng.gen_range(0..3) {
                let g = WorldSet::from_bits(rng.gen::<u64>() & rw.bits());
                if !g.is_empty() {
                    frame.generators_mut(w, u).insert(g);
                }
            }
        }
    }
    GenModel::new(frame.close_s(), valuation(rng, n, vars))
}

/// A random legal ordinary model.
pub fn ord_model<R: Rng + ?Sized>(rng: &mut R, n: usize, vars: &[String]) -> OrdModel {
    let succ = strict_order(rng, n, 0.5);
    let mut s = vec![vec![WorldSet::EMPTY; n]; n];
    for w in 0..n {
        let rw = succ[w];
        for u in rw {
            let mut img = WorldSet::singleton(u) | (succ[u] & rw);
            for v in rw {
                if rng.gen_ratio(1, 3) {
                    img.insert(v);
                }
            }
            s[w][u] = img;
        }
        // Close S_w under composition.
        loop {
            let mut changed = false;
            for u in rw {
                let img = s[w][u];
                let next = img.iter().fold(img, |acc, v| acc | s[w][v]);
                if next != img {
                    s[w][u] = next;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
    let frame = OrdFrame::from_parts(default_names(n), succ, s);
    OrdModel::new(frame, valuation(rng, n, vars))
}

/// `p, q, r, ..` as owned strings.
pub fn variables(count: usize) -> Vec<String> {
    ["p", "q", "r", "s", "t"]
        .iter()
        .take(count)
        .map(|s| s.to_string())
        .chain((5..count).map(|i| format!("p{i}")))
        .collect()
}
