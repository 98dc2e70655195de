mod common;

use std::collections::BTreeMap;

use common::corpus;
use proptest::prelude::*;
use veltman::hilbert::{
    check_proof, is_classical_tautology, match_schema, Justification, Logic, ProofObject, SchemaId,
};
use veltman::{parse, Formula};

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Bot),
        Just(Formula::Top),
        "[pqrs]".prop_map(Formula::var),
        "x[0-9]".prop_map(Formula::var),
    ];
    leaf.prop_recursive(6, 64, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::neg),
            inner.clone().prop_map(Formula::boxed),
            inner.clone().prop_map(Formula::dia),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::rhd(a, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn printing_then_parsing_is_the_identity(f in arb_formula()) {
        prop_assert!(f.depth() <= 6);
        let text = f.to_string();
        prop_assert_eq!(parse(&text).unwrap(), f);
    }
}

fn instance_of(id: SchemaId) -> impl Strategy<Value = (Formula, BTreeMap<String, Formula>)> {
    let metas: Vec<&'static str> = id.metavariables();
    proptest::collection::vec(arb_formula(), metas.len()).prop_map(move |fs| {
        let sub: BTreeMap<String, Formula> = metas
            .iter()
            .map(|m| m.to_string())
            .zip(fs)
            .collect();
        (id.instantiate(&sub), sub)
    })
}

fn logic_with(id: SchemaId) -> Option<Logic> {
    Logic::ALL.into_iter().find(|l| l.has_schema(id))
}

#[test]
fn every_schema_has_500_recognised_instances() {
    use proptest::test_runner::{Config, TestRunner};
    for id in SchemaId::ALL {
        let mut runner = TestRunner::new(Config {
            cases: 500,
            ..Config::default()
        });
        runner
            .run(&instance_of(id), |(f, sub)| {
                let found = match_schema(id, &f);
                prop_assert!(found.is_some(), "{} not recognised", f);
                let found = found.unwrap();
                for (m, g) in &sub {
                    prop_assert_eq!(&found[m], &g.normalize());
                }
                if let Some(logic) = logic_with(id) {
                    let proof = ProofObject::new(vec![(f, Justification::Axiom(id))]);
                    prop_assert!(check_proof(&proof, logic).is_ok());
                }
                Ok(())
            })
            .unwrap_or_else(|e| panic!("{id}: {e}"));
    }
}

#[test]
fn corpus_is_accepted() {
    for case in corpus::accepted() {
        let proof = ProofObject::parse(&case.text).unwrap();
        assert_eq!(check_proof(&proof, case.logic), Ok(()), "{}", case.name);
    }
}

#[test]
fn mutations_are_rejected() {
    let all = corpus::mutations();
    assert!(all.len() >= 20);
    for case in all {
        let proof = ProofObject::parse(&case.text).unwrap();
        assert!(check_proof(&proof, case.logic).is_err(), "{} accepted:\n{}", case.name, case.text);
    }
}

#[test]
fn proof_files_round_trip() {
    for case in corpus::accepted() {
        let proof = ProofObject::parse(&case.text).unwrap();
        let again = ProofObject::parse(&proof.to_string()).unwrap();
        assert_eq!(again.lines.len(), proof.lines.len());
        assert_eq!(check_proof(&again, case.logic), Ok(()));
    }
}

#[test]
fn malformed_proof_lines_are_reported() {
    let err = ProofObject::parse("1. p -> p ; taut\n2. p |> ; taut\n").unwrap_err();
    assert_eq!(err.line_no, 2);
    assert!(ProofObject::parse("1. p ; frobnicate").is_err());
    assert!(ProofObject::parse("1. p -> p").is_err());
}

#[test]
fn tautology_checker_knows_classics() {
    for t in ["p | ~p", "(p -> q) -> (~q -> ~p)", "p |> q -> p |> q", "bot -> []p"] {
        assert_eq!(is_classical_tautology(&parse(t).unwrap()), Ok(true), "{t}");
    }
    for t in ["p", "p |> q -> q |> p", "[]p -> p"] {
        assert_eq!(is_classical_tautology(&parse(t).unwrap()), Ok(false), "{t}");
    }
}
