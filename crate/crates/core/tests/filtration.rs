mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use veltman::bisim::largest_autobisimulation;
use veltman::filtration::{filtrate, verify_filtration};
use veltman::formula::{d_closure, is_adequate, FormulaSet};
use veltman::model::{forces, GenFrame, GenModel, Valuation};
use veltman::random::{formula, gen_model, variables, FormulaShape};
use veltman::{parse, WorldSet};

const SEED_SHAPE: FormulaShape = FormulaShape {
    depth: 3,
    modal_depth: 2,
    sugar: true,
};

fn random_d(rng: &mut ChaCha8Rng, vars: &[String]) -> FormulaSet {
    let k = rng.gen_range(1..=4);
    let seed: FormulaSet = (0..k).map(|_| formula(rng, vars, SEED_SHAPE)).collect();
    d_closure(&seed)
}

#[test]
fn random_filtrations_preserve_truth() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..120 {
        let n = rng.gen_range(1..=6);
        let vars = variables(rng.gen_range(1..=3));
        let m = gen_model(&mut rng, n, &vars);
        let d = random_d(&mut rng, &vars);
        let r = filtrate(&m, &d).expect("quotient is legal");
        assert!(is_adequate(&r.gamma, &d));
        assert!(r.quotient.len() <= m.len());
        assert!(r.quotient.validate().is_legal());
        assert_eq!(verify_filtration(&m, &r), Ok(()));
        // Independent recheck of a few members of Γ at every world.
        let qe = Explicit::of_frame(&r.quotient.frame);
        for a in r.gamma.iter().take(40) {
            for w in 0..n {
                let c = r.partition.class_of(w);
                assert_eq!(forces(&m, w, a), gen_forces(&r.quotient, &qe, c, a), "{a}");
            }
        }
    }
}

#[test]
fn filtrating_again_does_not_grow() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..60 {
        let n = rng.gen_range(1..=6);
        let vars = variables(2);
        let m = gen_model(&mut rng, n, &vars);
        let d = random_d(&mut rng, &vars);
        let once = filtrate(&m, &d).unwrap();
        let twice = filtrate(&once.quotient, &d).unwrap();
        assert!(twice.quotient.len() <= once.quotient.len());
        assert_eq!(verify_filtration(&once.quotient, &twice), Ok(()));
    }
}

#[test]
fn quotient_worlds_are_bisimulation_classes() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..40 {
        let vars = variables(2);
        let m = gen_model(&mut rng, 5, &vars);
        let r = filtrate(&m, &random_d(&mut rng, &vars)).unwrap();
        assert_eq!(r.partition, largest_autobisimulation(&m));
        let names: Vec<String> = (0..r.partition.len())
            .map(|c| format!("[w{}]", r.partition.representative(c)))
            .collect();
        assert_eq!(r.quotient.frame.worlds(), names.as_slice());
    }
}

/// On a two-world chain the only edge comes from a box witness.
#[test]
fn chain_relation_comes_from_a_box_witness() {
    let frame = GenFrame::with_relation(vec![WorldSet::singleton(1), WorldSet::EMPTY]).close_s();
    let val: Valuation = [("p".to_string(), WorldSet::singleton(1))].into_iter().collect();
    let m = GenModel::new(frame, val);
    let d = d_closure(&[parse("p").unwrap()].into_iter().collect());
    let r = filtrate(&m, &d).unwrap();
    let witness = parse("[]~p").unwrap();
    assert!(r.gamma.contains(&witness));
    assert!(!forces(&m, 0, &witness) && forces(&m, 1, &witness));
    assert_eq!(r.quotient.frame.succ(0), WorldSet::singleton(1));
    assert_eq!(
        r.quotient.frame.generators(0, 1).generators(),
        &[WorldSet::singleton(1)]
    );
}

#[test]
fn dropping_a_quotient_edge_is_detected() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let mut caught = 0;
    for _ in 0..80 {
        let vars = variables(2);
        let m = gen_model(&mut rng, 4, &vars);
        let mut r = filtrate(&m, &random_d(&mut rng, &vars)).unwrap();
        let k = r.quotient.len();
        let Some(w) = (0..k).find(|&w| !r.quotient.frame.succ(w).is_empty()) else {
            continue;
        };
        let mut succ: Vec<WorldSet> = (0..k).map(|x| r.quotient.frame.succ(x)).collect();
        let u = succ[w].min().unwrap();
        succ[w].remove(u);
        let s = (0..k)
            .map(|x| {
                (0..k)
                    .map(|y| {
                        if succ[x].contains(y) {
                            r.quotient.frame.generators(x, y).clone()
                        } else {
                            Default::default()
                        }
                    })
                    .collect()
            })
            .collect();
        let names = r.quotient.frame.worlds().to_vec();
        r.quotient.frame = GenFrame::from_parts(names, succ, s);
        if verify_filtration(&m, &r).is_err() {
            caught += 1;
        }
    }
    assert!(caught > 20, "mutations caught: {caught}");
}
