mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use sensegraph::{parse_jsonl, render_jsonl, Assertion, AssertionStore, ConceptSense, DimensionTag, Source};

use common::*;

fn assertion_strategy() -> impl Strategy<Value = Assertion> {
    (
        prop::sample::select(vec!["book", "publication", "car", "omelet"]),
        1u32..=3,
        prop::sample::select(DimensionTag::ALL.to_vec()),
        prop::sample::select(vec!["old", "heavy", "popularity", "thought-provoking", "sit on", "5'10\""]),
        0.0f64..=1.0,
        prop::sample::select(vec![Source::Fixture, Source::Harvested, Source::Manual]),
    )
        .prop_map(|(lemma, n, d, f, w, src)| {
            Assertion::new(ConceptSense::new(lemma, n).unwrap(), d, f, w, src).unwrap()
        })
}

fn assertion_set(snap: &sensegraph::Snapshot) -> Vec<String> {
    let mut v: Vec<String> = snap.assertions().map(|a| format!("{a:?}")).collect();
    v.sort();
    v
}

#[test]
fn book_profile() {
    let snap = load("book_publication.jsonl");
    let p = snap.profile(&sense("book#1"));
    let has: Vec<(f64, &str)> = p
        .get(DimensionTag::HasProp)
        .iter()
        .map(|wf| (wf.weight, wf.filler.as_str()))
        .collect();
    assert!(has.contains(&(0.75, "popularity")));
    assert!(has.contains(&(0.73, "controversy")));
}

#[test]
fn save_then_load_round_trips_fixture() {
    let snap = load("omelet.jsonl");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.jsonl");
    sensegraph::save_jsonl(&snap, &path).unwrap();
    let back = sensegraph::load_jsonl(&path).unwrap();
    assert_eq!(assertion_set(&snap), assertion_set(&back));
    assert_eq!(snap.signatures().count(), back.signatures().count());
    assert_eq!(render_jsonl(&snap), render_jsonl(&back));
}

#[test]
fn add_relational_fragment() {
    let mut store = AssertionStore::new();
    store
        .add_relational("DRIVE", &sense("human#1"), &sense("car#1"), 1.0, Source::Fixture)
        .unwrap();
    assert_eq!(store.extension("DRIVE", None), BTreeSet::from([sense("human#1"), sense("car#1")]));
}

proptest! {
    #[test]
    fn jsonl_round_trip(items in prop::collection::vec(assertion_strategy(), 0..40)) {
        let mut store = AssertionStore::new();
        for a in items {
            store.add_assertion(a);
        }
        let snap = store.snapshot();
        let back = parse_jsonl(&render_jsonl(&snap)).unwrap();
        prop_assert_eq!(assertion_set(&snap), assertion_set(&back));
    }

    #[test]
    fn store_invariants(items in prop::collection::vec(assertion_strategy(), 1..40)) {
        let mut store = AssertionStore::new();
        for a in &items {
            store.add_assertion(a.clone());
        }
        let snap = store.snapshot();

        // extension(p, d) ⊆ extension(p, ALL)
        for a in &items {
            let all = snap.extension(a.filler(), None);
            for d in DimensionTag::ALL {
                prop_assert!(snap.extension(a.filler(), Some(d)).is_subset(&all));
            }
        }
        // profiles partition the store
        let total: usize = snap.concepts().iter().map(|c| snap.profile(c).len()).sum();
        prop_assert_eq!(total, snap.len());

        // upsert idempotence
        let before = assertion_set(&snap);
        store.add_assertion(items[0].clone());
        let after = store.snapshot();
        let last = items.iter().rev().find(|a| a.key() == items[0].key()).unwrap();
        if last == &items[0] {
            prop_assert_eq!(before, assertion_set(&after));
        }
        prop_assert_eq!(after.len(), snap.len());
        prop_assert!(after.version() > snap.version());
    }
}
