//! Every registered lemma runs and passes at a reduced bound; the full
//! acceptance bounds live in the acceptance suite.

use std::collections::BTreeMap;

use dposet_core::catalog::Catalog;
use dposet_core::lemmas::{self, LemmaId, LemmaMode};

#[test]
fn every_lemma_passes_at_reduced_bounds() {
    let catalog = Catalog::build(3).expect("catalog");
    let no_params = BTreeMap::new();
    for id in LemmaId::all() {
        let report = match id.mode() {
            LemmaMode::Universe => {
                lemmas::verify_lemma(id, &catalog, 3, None, &no_params).expect("runs")
            }
            LemmaMode::Targeted => {
                // smaller main-theorem sampling here; the acceptance suite
                // runs the full six-source sweep
                let mut params = BTreeMap::new();
                if id == LemmaId::MainTheorem {
                    params.insert("samples".to_string(), "50".to_string());
                }
                lemmas::verify_targeted(id, &catalog, &params).expect("runs")
            }
        };
        assert!(
            report.passed(),
            "{id} failed: {:?} {:?}",
            report.counterexamples.first(),
            report.notes
        );
    }
}

#[test]
fn unknown_and_mismatched_ids_error() {
    let catalog = Catalog::build(2).expect("catalog");
    assert!("no-such-lemma".parse::<LemmaId>().is_err());
    let no_params = BTreeMap::new();
    assert!(lemmas::verify_lemma(LemmaId::MaleRel, &catalog, 2, None, &no_params).is_err());
    assert!(lemmas::verify_targeted(LemmaId::IoDef, &catalog, &no_params).is_err());
}

#[test]
fn bad_targeted_params_are_rejected() {
    let catalog = Catalog::build(2).expect("catalog");
    let mut params = BTreeMap::new();
    params.insert("i".to_string(), "4".to_string());
    params.insert("j".to_string(), "4".to_string());
    assert!(lemmas::verify_targeted(LemmaId::MaleRel, &catalog, &params).is_err());
    let mut params = BTreeMap::new();
    params.insert("g".to_string(), "E2".to_string());
    // arrow-rel needs a loop-full digraph
    assert!(lemmas::verify_targeted(LemmaId::ArrowRel, &catalog, &params).is_err());
}

#[test]
fn skipped_reports_carry_a_reason() {
    let catalog = Catalog::build(2).expect("catalog");
    let report =
        lemmas::verify_lemma(LemmaId::IoChar, &catalog, 2, Some(2), &BTreeMap::new()).unwrap();
    assert_eq!(report.status, "skipped");
    assert!(report.skip_reason.is_some());
}
