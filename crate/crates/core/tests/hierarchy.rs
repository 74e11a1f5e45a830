mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use sensegraph::hierarchy::Feature;
use sensegraph::{induce, ConceptSense, NodeId, Snapshot, TypeGraph};

use common::*;

fn s(lemma: &str) -> ConceptSense {
    sense(&format!("{lemma}#1"))
}

#[test]
fn closure_oracle_extension_of_old() {
    let snap = closed_fragment();
    let expected: BTreeSet<ConceptSense> = FRAGMENT_TYPES.iter().map(|t| s(t)).collect();
    assert_eq!(snap.extension("OLD", None), expected);
    assert_eq!(snap.extension("ARTICULATE", None), BTreeSet::from([s("human")]));
    assert!(snap.extension("ZZZ", None).is_empty());
}

#[test]
fn fragment_hierarchy_matches_drawn_tree() {
    let g = induce(&closed_fragment(), 0.0).unwrap();
    // every type gets its own node
    assert_eq!(g.nodes().len(), FRAGMENT_TYPES.len());
    for (a, b) in [
        ("car", "vehicle"),
        ("vehicle", "physical"),
        ("physical", "entity"),
        ("car", "entity"),
        ("instrument", "artifact"),
        ("human", "living"),
    ] {
        assert!(g.is_subtype(&s(a), &s(b)).unwrap(), "{a} ⊑ {b}");
    }
    for (a, b) in [("entity", "car"), ("human", "artifact"), ("car", "living"), ("instrument", "vehicle")] {
        assert!(!g.is_subtype(&s(a), &s(b)).unwrap(), "{a} ⋢ {b}");
    }
    // edges reproduce the parent map exactly
    let up = fragment_supertypes();
    for &(child, parent) in FRAGMENT_PARENTS {
        let (c, p) = (g.node_of(&s(child)).unwrap(), g.node_of(&s(parent)).unwrap());
        assert!(g.edges().contains(&(c, p)), "{child} -> {parent}");
        assert!(up[child].contains(parent));
    }
    assert_eq!(g.edges().len(), FRAGMENT_PARENTS.len());
    for t in FRAGMENT_TYPES {
        assert_eq!(g.node(g.node_of(&s(t)).unwrap()).label(), *t);
    }
}

#[test]
fn fragment_dot_has_car_to_vehicle() {
    let g = induce(&closed_fragment(), 0.0).unwrap();
    let dot = g.export_dot();
    assert!(dot.contains("\"car\" -> \"vehicle\";"), "{dot}");
    assert_eq!(dot, g.export_dot());
}

#[test]
fn artifact_structure() {
    let g = induce(&harvested_artifacts(), 0.0).unwrap();
    let (car, computer, couch) = (s("car"), s("computer"), s("couch"));

    let low = g.lca(&[car.clone(), computer.clone()]).unwrap();
    assert_eq!(low.len(), 1);
    let low_node = g.node(low[0]);
    assert!(!low_node.extent().contains(&couch));
    assert!(low_node.has_filler("operate"));
    assert!(low_node.has_filler("running"));
    assert!(low_node.has_filler("off"));

    let high = g.lca(&[car.clone(), computer.clone(), couch.clone()]).unwrap();
    assert_eq!(high.len(), 1);
    assert!(g.reaches(low[0], high[0]) && low[0] != high[0]);
    assert!(g.node(high[0]).has_filler("assemble"));
    assert_eq!(g.node(high[0]).label(), "assemble");

    assert!(!g.is_subtype(&couch, &s("living")).unwrap());
    assert_eq!(g.lca(std::slice::from_ref(&couch)).unwrap(), vec![g.node_of(&couch).unwrap()]);
    assert_eq!(g.lca(&[couch, s("living")]).unwrap(), Vec::<NodeId>::new());
}

#[test]
fn lca_rejects_unknown() {
    let g = induce(&closed_fragment(), 0.0).unwrap();
    assert!(g.lca(&[s("car"), s("unicorn")]).is_err());
}

fn random_context() -> impl Strategy<Value = Context> {
    (1usize..=8, 1usize..=8).prop_flat_map(|(c, p)| proptest::collection::vec(proptest::collection::vec(any::<bool>(), p), c))
}

fn nonempty(ctx: &Context) -> bool {
    ctx.iter().flatten().any(|&b| b)
}

fn features_of(snap: &Snapshot, c: &ConceptSense) -> BTreeSet<Feature> {
    snap.assertions()
        .filter(|a| a.concept() == c)
        .map(|a| Feature::new(a.dimension(), a.filler()))
        .collect()
}

fn check_invariants(g: &TypeGraph, snap: &Snapshot) {
    // edges are strict on both extent and intent
    for (c, p) in g.edges() {
        let (nc, np) = (g.node(*c), g.node(*p));
        assert!(nc.extent().is_subset(np.extent()) && nc.extent().len() < np.extent().len());
        assert!(nc.intent().is_superset(np.intent()) && nc.intent().len() > np.intent().len());
    }
    // acyclic: no node is its own strict ancestor
    for i in 0..g.nodes().len() {
        assert!(!g.ancestors(NodeId(i)).any(|a| a == NodeId(i)));
    }
    // transitively reduced: dropping any edge changes reachability
    for (k, (c, p)) in g.edges().iter().enumerate() {
        let others: Vec<_> = g.edges().iter().enumerate().filter(|(j, _)| *j != k).map(|(_, e)| *e).collect();
        let mut frontier = vec![*c];
        let mut seen = BTreeSet::new();
        while let Some(n) = frontier.pop() {
            for (x, y) in &others {
                if *x == n && seen.insert(*y) {
                    frontier.push(*y);
                }
            }
        }
        assert!(!seen.contains(p), "edge {c:?}->{p:?} is implied");
    }
    // every sense maps to one node, which contains it
    let concepts = snap.concepts();
    assert_eq!(g.senses().count(), concepts.len());
    for (sense, id) in g.senses() {
        assert!(g.node(id).extent().contains(sense));
    }
    // soundness against raw feature sets
    for a in &concepts {
        for b in &concepts {
            let by_graph = g.is_subtype(a, b).unwrap();
            let by_sets = features_of(snap, a).is_superset(&features_of(snap, b));
            assert_eq!(by_graph, by_sets, "{a} vs {b}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn induce_matches_brute_force_oracle(ctx in random_context().prop_filter("non-empty", nonempty)) {
        let snap = context_snapshot(&ctx);
        let g = induce(&snap, 0.0).unwrap();
        prop_assert_eq!(graph_lattice(&g), oracle_lattice(&ctx));
        check_invariants(&g, &snap);
    }

    #[test]
    fn subtype_is_a_partial_order_on_nodes(ctx in random_context().prop_filter("non-empty", nonempty)) {
        let g = induce(&context_snapshot(&ctx), 0.0).unwrap();
        let n = g.nodes().len();
        for a in 0..n {
            prop_assert!(g.reaches(NodeId(a), NodeId(a)));
            for b in 0..n {
                if a != b && g.reaches(NodeId(a), NodeId(b)) {
                    prop_assert!(!g.reaches(NodeId(b), NodeId(a)));
                }
                for c in 0..n {
                    if g.reaches(NodeId(a), NodeId(b)) && g.reaches(NodeId(b), NodeId(c)) {
                        prop_assert!(g.reaches(NodeId(a), NodeId(c)));
                    }
                }
            }
        }
    }

    #[test]
    fn identical_rows_share_a_node(ctx in random_context().prop_filter("non-empty", nonempty)) {
        let mut ctx = ctx;
        let dup = ctx[0].clone();
        ctx.push(dup);
        if ctx[0].iter().any(|&b| b) {
            let g = induce(&context_snapshot(&ctx), 0.0).unwrap();
            let last = format!("c{}#1", ctx.len() - 1);
            prop_assert_eq!(g.node_of(&sense("c0#1")).unwrap(), g.node_of(&sense(&last)).unwrap());
        }
    }

    #[test]
    fn positive_theta_stays_acyclic(ctx in random_context().prop_filter("non-empty", nonempty), theta in 0.0f64..=1.0) {
        let g = induce(&context_snapshot(&ctx), theta).unwrap();
        for (c, p) in g.edges() {
            prop_assert!(g.node(*c).extent().len() < g.node(*p).extent().len());
        }
        for i in 0..g.nodes().len() {
            prop_assert!(!g.ancestors(NodeId(i)).any(|a| a == NodeId(i)));
        }
    }
}
