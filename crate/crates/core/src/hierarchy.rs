//! Type-graph induction from property extensions.
//!
//! Every property (a `(dimension, filler)` feature) has an extent: the senses
//! it applies to. Distinct extents become nodes, ordered by containment and
//! transitively reduced. Each sense additionally gets the node whose extent
//! is the intersection of every extent containing it, so that a sense always
//! maps to exactly one node.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::json;

use crate::error::{Error, Result};
use crate::model::{ConceptSense, DimensionTag};
use crate::store::Snapshot;

/// A property as used for induction: a filler along one dimension.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Feature {
    pub dimension: DimensionTag,
    pub filler: String,
}

impl Feature {
    pub fn new(dimension: DimensionTag, filler: &str) -> Self {
        Feature {
            dimension,
            filler: filler.to_string(),
        }
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.dimension, self.filler)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeNode {
    extent: BTreeSet<ConceptSense>,
    intent: BTreeSet<Feature>,
    label: String,
}

impl TypeNode {
    pub fn extent(&self) -> &BTreeSet<ConceptSense> {
        &self.extent
    }

    pub fn intent(&self) -> &BTreeSet<Feature> {
        &self.intent
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Whether any intent feature carries `filler`, compared case-insensitively.
    pub fn has_filler(&self, filler: &str) -> bool {
        self.intent
            .iter()
            .any(|f| f.filler.eq_ignore_ascii_case(filler))
    }
}

/// Induced subsumption DAG. Node 0 has the largest extent; edges point from
/// child to parent.
#[derive(Clone, Debug, Default)]
pub struct TypeGraph {
    nodes: Vec<TypeNode>,
    edges: Vec<(NodeId, NodeId)>,
    ancestors: Vec<BTreeSet<usize>>,
    sense_index: BTreeMap<ConceptSense, NodeId>,
    theta: f64,
}

/// Induces the type graph of `snapshot`.
///
/// `theta` is the containment tolerance: extent `a` counts as contained in a
/// strictly larger extent `b` when `|a \ b| / |a| <= theta`.
pub fn induce(snapshot: &Snapshot, theta: f64) -> Result<TypeGraph> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::InvalidTheta(theta));
    }
    if snapshot.is_empty() {
        return Err(Error::EmptySnapshot);
    }

    let mut feature_extents: BTreeMap<Feature, BTreeSet<ConceptSense>> = BTreeMap::new();
    let mut sense_features: BTreeMap<ConceptSense, Vec<Feature>> = BTreeMap::new();
    for a in snapshot.assertions() {
        let feature = Feature::new(a.dimension(), a.filler());
        feature_extents
            .entry(feature.clone())
            .or_default()
            .insert(a.concept().clone());
        sense_features
            .entry(a.concept().clone())
            .or_default()
            .push(feature);
    }

    let mut extents: BTreeSet<BTreeSet<ConceptSense>> = feature_extents.values().cloned().collect();
    let mut object_extent: BTreeMap<ConceptSense, BTreeSet<ConceptSense>> = BTreeMap::new();
    for (sense, features) in &sense_features {
        let mut acc = feature_extents[&features[0]].clone();
        for f in &features[1..] {
            acc.retain(|c| feature_extents[f].contains(c));
        }
        extents.insert(acc.clone());
        object_extent.insert(sense.clone(), acc);
    }

    // Largest extent first, ties by member order.
    let mut extents: Vec<BTreeSet<ConceptSense>> = extents.into_iter().collect();
    extents.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let position: BTreeMap<&BTreeSet<ConceptSense>, usize> =
        extents.iter().enumerate().map(|(i, e)| (e, i)).collect();

    let sense_index: BTreeMap<ConceptSense, NodeId> = object_extent
        .iter()
        .map(|(s, e)| (s.clone(), NodeId(position[e])))
        .collect();

    let n = extents.len();
    let below = |a: usize, b: usize| -> bool {
        let (ea, eb) = (&extents[a], &extents[b]);
        if ea.len() >= eb.len() {
            return false;
        }
        let outside = ea.iter().filter(|c| !eb.contains(*c)).count();
        outside as f64 <= theta * ea.len() as f64
    };
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).filter(|&b| below(a, b)).collect())
        .collect();

    // Successors always have strictly larger extents, i.e. smaller indices,
    // so ascending index order visits parents before children.
    let mut ancestors: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for a in 0..n {
        let mut acc = BTreeSet::new();
        for &b in &succ[a] {
            acc.insert(b);
            acc.extend(ancestors[b].iter().copied());
        }
        ancestors[a] = acc;
    }

    let mut edges = Vec::new();
    for (a, out) in succ.iter().enumerate() {
        for &b in out {
            let implied = out.iter().any(|&c| c != b && ancestors[c].contains(&b));
            if !implied {
                edges.push((NodeId(a), NodeId(b)));
            }
        }
    }
    edges.sort();

    let nodes = extents
        .iter()
        .enumerate()
        .map(|(i, extent)| {
            let intent: BTreeSet<Feature> = feature_extents
                .iter()
                .filter(|(_, fe)| extent.is_subset(fe))
                .map(|(f, _)| f.clone())
                .collect();
            let own = sense_index
                .iter()
                .filter(|(_, id)| id.0 == i)
                .map(|(s, _)| s.lemma())
                .min();
            let label = match own {
                Some(lemma) => lemma.to_string(),
                None => feature_extents
                    .iter()
                    .filter(|(_, fe)| *fe == extent)
                    .map(|(f, _)| f.filler.clone())
                    .min()
                    .unwrap_or_else(|| format!("node{i}")),
            };
            TypeNode {
                extent: extent.clone(),
                intent,
                label,
            }
        })
        .collect();

    Ok(TypeGraph {
        nodes,
        edges,
        ancestors,
        sense_index,
        theta,
    })
}

impl TypeGraph {
    /// A graph with no nodes.
    pub fn empty() -> Self {
        TypeGraph::default()
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn nodes(&self) -> &[TypeNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &TypeNode {
        &self.nodes[id.0]
    }

    /// Child-to-parent edges, sorted.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn parents(&self, id: NodeId) -> Vec<NodeId> {
        self.edges
            .iter()
            .filter(|(c, _)| *c == id)
            .map(|(_, p)| *p)
            .collect()
    }

    /// Strict ancestors of a node.
    pub fn ancestors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.ancestors[id.0].iter().map(|&i| NodeId(i))
    }

    pub fn senses(&self) -> impl Iterator<Item = (&ConceptSense, NodeId)> {
        self.sense_index.iter().map(|(s, id)| (s, *id))
    }

    pub fn contains(&self, sense: &ConceptSense) -> bool {
        self.sense_index.contains_key(sense)
    }

    pub fn node_of(&self, sense: &ConceptSense) -> Result<NodeId> {
        self.sense_index
            .get(sense)
            .copied()
            .ok_or_else(|| Error::UnknownSense(sense.to_string()))
    }

    /// Reflexive, transitive node reachability.
    pub fn reaches(&self, from: NodeId, to: NodeId) -> bool {
        from == to || self.ancestors[from.0].contains(&to.0)
    }

    /// `a ⊑ b`: same node, or a path from `a`'s node up to `b`'s.
    pub fn is_subtype(&self, a: &ConceptSense, b: &ConceptSense) -> Result<bool> {
        let (na, nb) = (self.node_of(a)?, self.node_of(b)?);
        Ok(self.reaches(na, nb))
    }

    /// Minimal common ancestors of `senses`; empty when they share none.
    pub fn lca(&self, senses: &[ConceptSense]) -> Result<Vec<NodeId>> {
        if senses.is_empty() {
            return Err(Error::UnknownSense("<empty set>".into()));
        }
        let mut common: Option<BTreeSet<usize>> = None;
        for s in senses {
            let id = self.node_of(s)?;
            let mut up = self.ancestors[id.0].clone();
            up.insert(id.0);
            common = Some(match common {
                None => up,
                Some(c) => c.intersection(&up).copied().collect(),
            });
        }
        let common = common.unwrap_or_default();
        Ok(common
            .iter()
            .filter(|&&m| !common.iter().any(|&c| c != m && self.ancestors[c].contains(&m)))
            .map(|&m| NodeId(m))
            .collect())
    }

    fn dot_names(&self) -> Vec<String> {
        let mut used: BTreeMap<&str, usize> = BTreeMap::new();
        self.nodes
            .iter()
            .map(|n| {
                let k = used.entry(n.label.as_str()).or_insert(0);
                *k += 1;
                if *k == 1 {
                    n.label.clone()
                } else {
                    format!("{}~{}", n.label, k)
                }
            })
            .collect()
    }

    /// DOT digraph, one node per type labelled with its intent size.
    pub fn export_dot(&self) -> String {
        let names = self.dot_names();
        let mut out = String::from("digraph G {\n");
        for (node, name) in self.nodes.iter().zip(&names) {
            out.push_str(&format!(
                "  \"{}\" [label=\"{} ({})\"];\n",
                dot_escape(name),
                dot_escape(&node.label),
                node.intent.len()
            ));
        }
        for (child, parent) in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\";\n",
                dot_escape(&names[child.0]),
                dot_escape(&names[parent.0])
            ));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<_> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                json!({
                    "id": i,
                    "label": n.label,
                    "extent": n.extent.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                    "intent": n.intent.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                    "parents": self.parents(NodeId(i)).iter().map(|p| p.0).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "theta": self.theta, "nodes": nodes })
    }

    /// One line per node: `label: extent -> parent labels`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, n) in self.nodes.iter().enumerate() {
            let extent: Vec<String> = n.extent.iter().map(|s| s.to_string()).collect();
            let parents: Vec<&str> = self
                .parents(NodeId(i))
                .iter()
                .map(|p| self.nodes[p.0].label.as_str())
                .collect();
            out.push_str(&format!(
                "{}: {{{}}} -> [{}]\n",
                n.label,
                extent.join(", "),
                parents.join(", ")
            ));
        }
        out
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
