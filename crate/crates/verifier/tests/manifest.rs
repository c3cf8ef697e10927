use std::collections::HashSet;

use ogring_verifier::cli::{run_suite, Suite, DEFAULT_SEED};
use ogring_verifier::context::Context;
use ogring_verifier::manifest::{label_of, statements_for, PROPERTY_LABEL, STATEMENTS};
use ogring::CoeffMode;

#[test]
fn ids_are_unique() {
    let mut seen = HashSet::new();
    for st in STATEMENTS {
        assert!(seen.insert(st.id()), "{} listed twice", st.id());
    }
}

#[test]
fn labels_split_across_suites_are_qualified() {
    for st in STATEMENTS {
        let owners: HashSet<Suite> = STATEMENTS.iter().filter(|o| o.label == st.label).map(|o| o.suite).collect();
        if owners.len() > 1 {
            assert!(st.part.is_some(), "{} is checked in several suites without a part", st.label);
        }
    }
}

#[test]
fn every_statement_is_checked_in_its_suite_at_eight() {
    let ctx = Context::new(8, CoeffMode::Exact, DEFAULT_SEED).unwrap();
    for suite in Suite::EACH {
        let cert = run_suite(suite, &ctx).unwrap();
        let labels: HashSet<&str> = cert.checks.iter().map(|c| label_of(&c.paper_ref)).collect();
        for label in &labels {
            assert!(
                *label == PROPERTY_LABEL || statements_for(suite, 8).any(|st| st.label == *label),
                "{label} appears in {} but is owned elsewhere",
                suite.name()
            );
        }
        for st in statements_for(suite, 8) {
            assert!(labels.contains(st.label), "{} has no check in {}", st.id(), suite.name());
        }
    }
}
