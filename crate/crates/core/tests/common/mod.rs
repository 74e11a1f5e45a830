//! Fixtures and brute-force oracles shared by the integration tests.
//!
//! Nothing here calls into the hierarchy module: the oracles recompute
//! closures and lattices from first principles.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use sensegraph::acquisition::{build_mask_prompt, FixtureProvider, MaskTemplate};
use sensegraph::{Assertion, AssertionStore, ConceptSense, DimensionTag, Snapshot, Source, TypeGraph};

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

pub fn data(name: &str) -> PathBuf {
    data_dir().join(name)
}

pub fn sense(token: &str) -> ConceptSense {
    token.parse().unwrap()
}

pub fn load(name: &str) -> Snapshot {
    sensegraph::load_jsonl(data(name)).unwrap()
}

// ---------------------------------------------------------------------------
// the vehicle fragment and the hierarchy they imply
// ---------------------------------------------------------------------------

/// Hand-drawn parent of each type in the vehicle fragment.
pub const FRAGMENT_PARENTS: &[(&str, &str)] = &[
    ("physical", "entity"),
    ("living", "physical"),
    ("human", "living"),
    ("artifact", "physical"),
    ("instrument", "artifact"),
    ("vehicle", "instrument"),
    ("car", "vehicle"),
];

pub const FRAGMENT_TYPES: &[&str] = &[
    "entity", "physical", "living", "human", "artifact", "instrument", "vehicle", "car",
];

/// `(dimension, property, type)` for the vehicle fragment. Binary relations contribute an
/// AgentOf fact on the subject type and an ObjectOf fact on the object type.
pub const FRAGMENT_FACTS: &[(DimensionTag, &str, &str)] = &[
    (DimensionTag::HasProp, "OLD", "entity"),
    (DimensionTag::HasProp, "HEAVY", "physical"),
    (DimensionTag::InState, "HUNGRY", "living"),
    (DimensionTag::HasProp, "ARTICULATE", "human"),
    (DimensionTag::AgentOf, "MAKE", "human"),
    (DimensionTag::ObjectOf, "MAKE", "artifact"),
    (DimensionTag::AgentOf, "MANUFACTURE", "human"),
    (DimensionTag::ObjectOf, "MANUFACTURE", "instrument"),
    (DimensionTag::AgentOf, "RIDE", "human"),
    (DimensionTag::ObjectOf, "RIDE", "vehicle"),
    (DimensionTag::AgentOf, "DRIVE", "human"),
    (DimensionTag::ObjectOf, "DRIVE", "car"),
];

/// Reflexive-transitive closure of the parent map, by fixpoint iteration.
pub fn fragment_supertypes() -> BTreeMap<&'static str, BTreeSet<&'static str>> {
    let mut up: BTreeMap<&str, BTreeSet<&str>> = FRAGMENT_TYPES
        .iter()
        .map(|t| (*t, BTreeSet::from([*t])))
        .collect();
    loop {
        let mut changed = false;
        for &(child, parent) in FRAGMENT_PARENTS {
            for t in FRAGMENT_TYPES {
                if up[t].contains(child) && !up[t].contains(parent) {
                    up.get_mut(t).unwrap().insert(parent);
                    changed = true;
                }
            }
        }
        if !changed {
            return up;
        }
    }
}

/// the vehicle fragment closed downward: a fact about `t` holds of every subtype of `t`.
pub fn closed_fragment_facts() -> BTreeSet<(DimensionTag, &'static str, &'static str)> {
    let up = fragment_supertypes();
    let mut out = BTreeSet::new();
    for &(dim, prop, ty) in FRAGMENT_FACTS {
        for c in FRAGMENT_TYPES {
            if up[c].contains(ty) {
                out.insert((dim, prop, *c));
            }
        }
    }
    out
}

pub fn closed_fragment() -> Snapshot {
    let mut store = AssertionStore::new();
    for (dim, prop, c) in closed_fragment_facts() {
        store.add_assertion(Assertion::new(sense(&format!("{c}#1")), dim, prop, 1.0, Source::Fixture).unwrap());
    }
    store.snapshot()
}

// ---------------------------------------------------------------------------
// Boolean contexts and the subset-lattice oracle
// ---------------------------------------------------------------------------

/// `rows[i][j]`: concept `i` has property `j`.
pub type Context = Vec<Vec<bool>>;

pub fn context_snapshot(ctx: &Context) -> Snapshot {
    let mut store = AssertionStore::new();
    for (i, row) in ctx.iter().enumerate() {
        for (j, &has) in row.iter().enumerate() {
            if has {
                store.add_assertion(
                    Assertion::new(sense(&format!("c{i}#1")), DimensionTag::HasProp, &format!("p{j}"), 1.0, Source::Fixture)
                        .unwrap(),
                );
            }
        }
    }
    store.snapshot()
}

pub type Extent = BTreeSet<usize>;

#[derive(Debug, PartialEq, Eq)]
pub struct OracleLattice {
    pub nodes: BTreeSet<Extent>,
    pub edges: BTreeSet<(Extent, Extent)>,
}

/// Nodes: every non-empty property extent, plus for each concept the set
/// of concepts having all of its properties. Edges: strict inclusion with
/// nothing strictly in between.
pub fn oracle_lattice(ctx: &Context) -> OracleLattice {
    let n_concepts = ctx.len();
    let n_props = ctx.first().map_or(0, Vec::len);
    let mut nodes: BTreeSet<Extent> = BTreeSet::new();
    for j in 0..n_props {
        let ext: Extent = (0..n_concepts).filter(|&i| ctx[i][j]).collect();
        if !ext.is_empty() {
            nodes.insert(ext);
        }
    }
    for i in 0..n_concepts {
        if !ctx[i].iter().any(|&b| b) {
            continue;
        }
        let ext: Extent = (0..n_concepts)
            .filter(|&k| (0..n_props).all(|j| !ctx[i][j] || ctx[k][j]))
            .collect();
        nodes.insert(ext);
    }
    let strict = |a: &Extent, b: &Extent| a.len() < b.len() && a.iter().all(|x| b.contains(x));
    let mut edges = BTreeSet::new();
    for a in &nodes {
        for b in &nodes {
            if strict(a, b) && !nodes.iter().any(|c| strict(a, c) && strict(c, b)) {
                edges.insert((a.clone(), b.clone()));
            }
        }
    }
    OracleLattice { nodes, edges }
}

/// The induced graph expressed in the oracle's terms.
pub fn graph_lattice(g: &TypeGraph) -> OracleLattice {
    let idx = |s: &ConceptSense| -> usize { s.lemma()[1..].parse().unwrap() };
    let ext = |id: sensegraph::NodeId| -> Extent { g.node(id).extent().iter().map(idx).collect() };
    OracleLattice {
        nodes: (0..g.nodes().len()).map(|i| ext(sensegraph::NodeId(i))).collect(),
        edges: g.edges().iter().map(|(c, p)| (ext(*c), ext(*p))).collect(),
    }
}

// ---------------------------------------------------------------------------
// Completion fixtures
// ---------------------------------------------------------------------------

pub fn read_list(name: &str) -> String {
    fs::read_to_string(data(&format!("lists/{name}.txt"))).unwrap()
}

pub fn load_templates(name: &str) -> Vec<MaskTemplate> {
    MaskTemplate::load_jsonl(data(name)).unwrap()
}

/// `(concept, template file, template index, list name)` for every canned
/// completion.
pub const CANNED: &[(&str, &str, usize, &str)] = &[
    ("book#1", "book_templates.jsonl", 0, "book_agent_of"),
    ("book#1", "book_templates.jsonl", 1, "book_object_of"),
    ("book#1", "book_templates.jsonl", 2, "book_has_prop"),
    ("car#1", "artifact_templates.jsonl", 0, "car_object_of"),
    ("computer#1", "artifact_templates.jsonl", 0, "computer_object_of"),
    ("couch#1", "artifact_templates.jsonl", 0, "couch_object_of"),
];

/// Writes every canned completion into `dir`, keyed by prompt hash.
pub fn record_completions(dir: &Path) -> FixtureProvider {
    let provider = FixtureProvider::new(dir);
    for &(concept, file, idx, list) in CANNED {
        let t = &load_templates(file)[idx];
        let prompt = build_mask_prompt(&sense(concept), t).unwrap();
        provider.record(&prompt, &read_list(list)).unwrap();
    }
    provider
}

/// Artifact lists harvested, plus the manual extras (running/off, living).
pub fn harvested_artifacts() -> Snapshot {
    let dir = tempfile::tempdir().unwrap();
    let provider = record_completions(dir.path());
    let concepts: Vec<ConceptSense> = ["car#1", "computer#1", "couch#1"].iter().map(|s| sense(s)).collect();
    let report = sensegraph::acquisition::harvest(&provider, &concepts, &load_templates("artifact_templates.jsonl"));
    assert!(report.is_complete(), "{:?}", report.failures);
    let mut store = AssertionStore::new();
    for a in report.assertions {
        store.add_assertion(a);
    }
    store.extend(&load("artifact_extra.jsonl"));
    store.snapshot()
}
