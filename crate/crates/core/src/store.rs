//! Queryable collection of assertions and relation signatures.
//!
//! [`AssertionStore`] is the single writer; [`Snapshot`] is the immutable
//! value every downstream algorithm consumes.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{check_weight, Assertion, AssertionKey, ConceptSense, DimensionTag, Source};

/// Typed relation such as `WANT(person, entity)`, weighted by salience.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationSignature {
    relation: String,
    arg1: ConceptSense,
    arg2: ConceptSense,
    weight: f64,
}

pub type SignatureKey = (String, ConceptSense, ConceptSense);

impl RelationSignature {
    pub fn new(relation: &str, arg1: ConceptSense, arg2: ConceptSense, weight: f64) -> Result<Self> {
        let relation = relation.trim();
        if relation.is_empty() {
            return Err(Error::InvalidAssertion("relation name is empty".into()));
        }
        check_weight(weight)?;
        Ok(RelationSignature {
            relation: relation.to_string(),
            arg1,
            arg2,
            weight,
        })
    }

    pub fn relation(&self) -> &str {
        &self.relation
    }

    pub fn arg1(&self) -> &ConceptSense {
        &self.arg1
    }

    pub fn arg2(&self) -> &ConceptSense {
        &self.arg2
    }

    pub fn arg(&self, position: usize) -> &ConceptSense {
        if position == 1 {
            &self.arg1
        } else {
            &self.arg2
        }
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn key(&self) -> SignatureKey {
        (self.relation.clone(), self.arg1.clone(), self.arg2.clone())
    }
}

/// A filler with its typicality weight.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedFiller {
    pub weight: f64,
    pub filler: String,
}

/// Per-dimension feature sets of one sense. Every dimension is present;
/// fillers within a dimension are sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    dims: BTreeMap<DimensionTag, Vec<WeightedFiller>>,
}

impl Profile {
    pub fn get(&self, dimension: DimensionTag) -> &[WeightedFiller] {
        self.dims.get(&dimension).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn iter(&self) -> impl Iterator<Item = (DimensionTag, &[WeightedFiller])> {
        self.dims.iter().map(|(d, v)| (*d, v.as_slice()))
    }

    pub fn nonempty_dimensions(&self) -> Vec<DimensionTag> {
        self.iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(d, _)| d)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.dims.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Default)]
struct Contents {
    assertions: BTreeMap<AssertionKey, Assertion>,
    signatures: BTreeMap<SignatureKey, RelationSignature>,
}

/// Immutable view of a store at one version.
#[derive(Clone, Debug)]
pub struct Snapshot {
    contents: Arc<Contents>,
    version: u64,
}

impl Snapshot {
    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn is_empty(&self) -> bool {
        self.contents.assertions.is_empty()
    }

    pub fn len(&self) -> usize {
        self.contents.assertions.len()
    }

    /// Assertions in key order.
    pub fn assertions(&self) -> impl Iterator<Item = &Assertion> {
        self.contents.assertions.values()
    }

    /// Signatures in key order.
    pub fn signatures(&self) -> impl Iterator<Item = &RelationSignature> {
        self.contents.signatures.values()
    }

    pub fn get(&self, concept: &ConceptSense, dimension: DimensionTag, filler: &str) -> Option<&Assertion> {
        self.contents
            .assertions
            .get(&(concept.clone(), dimension, filler.to_string()))
    }

    /// All senses with at least one assertion.
    pub fn concepts(&self) -> BTreeSet<ConceptSense> {
        self.assertions().map(|a| a.concept().clone()).collect()
    }

    /// Senses carrying `filler`, restricted to `dimension` unless `None`.
    pub fn extension(&self, filler: &str, dimension: Option<DimensionTag>) -> BTreeSet<ConceptSense> {
        self.assertions()
            .filter(|a| a.filler() == filler && dimension.is_none_or(|d| a.dimension() == d))
            .map(|a| a.concept().clone())
            .collect()
    }

    pub fn profile(&self, concept: &ConceptSense) -> Profile {
        let mut dims: BTreeMap<DimensionTag, Vec<WeightedFiller>> =
            DimensionTag::ALL.into_iter().map(|d| (d, Vec::new())).collect();
        // Keys sort by (concept, dimension, filler), so this is a contiguous range.
        let start = (concept.clone(), DimensionTag::ALL[0], String::new());
        for a in self
            .contents
            .assertions
            .range(start..)
            .map(|(_, a)| a)
            .take_while(|a| a.concept() == concept)
        {
            dims.entry(a.dimension()).or_default().push(WeightedFiller {
                weight: a.weight(),
                filler: a.filler().to_string(),
            });
        }
        Profile { dims }
    }

    /// Signatures whose relation name matches, case-insensitively.
    pub fn signatures_for(&self, relation: &str) -> Vec<&RelationSignature> {
        self.signatures()
            .filter(|s| s.relation().eq_ignore_ascii_case(relation))
            .collect()
    }
}

/// Mutable store. Mutation takes `&mut self`, so there is exactly one writer;
/// readers work from [`Snapshot`]s.
#[derive(Debug, Default)]
pub struct AssertionStore {
    contents: Contents,
    version: u64,
}

impl AssertionStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_snapshot(snapshot: &Snapshot) -> Self {
        let mut store = AssertionStore::new();
        store.extend(snapshot);
        store
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn len(&self) -> usize {
        self.contents.assertions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contents.assertions.is_empty()
    }

    /// Upserts by identity key and returns the new version.
    pub fn add_assertion(&mut self, assertion: Assertion) -> u64 {
        self.contents.assertions.insert(assertion.key(), assertion);
        self.bump()
    }

    pub fn add_signature(&mut self, signature: RelationSignature) -> u64 {
        self.contents.signatures.insert(signature.key(), signature);
        self.bump()
    }

    /// Stores a binary relation `verb(subject, object)` as an `AgentOf`
    /// assertion on the subject and an `ObjectOf` assertion on the object.
    pub fn add_relational(
        &mut self,
        verb: &str,
        subject: &ConceptSense,
        object: &ConceptSense,
        weight: f64,
        source: Source,
    ) -> Result<u64> {
        let agent = Assertion::new(subject.clone(), DimensionTag::AgentOf, verb, weight, source)?;
        let patient = Assertion::new(object.clone(), DimensionTag::ObjectOf, verb, weight, source)?;
        self.add_assertion(agent);
        Ok(self.add_assertion(patient))
    }

    /// Merges every record of `snapshot` into this store.
    pub fn extend(&mut self, snapshot: &Snapshot) -> u64 {
        for a in snapshot.assertions() {
            self.contents.assertions.insert(a.key(), a.clone());
        }
        for s in snapshot.signatures() {
            self.contents.signatures.insert(s.key(), s.clone());
        }
        self.bump()
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            contents: Arc::new(Contents {
                assertions: self.contents.assertions.clone(),
                signatures: self.contents.signatures.clone(),
            }),
            version: self.version,
        }
    }

    pub fn extension(&self, filler: &str, dimension: Option<DimensionTag>) -> BTreeSet<ConceptSense> {
        self.snapshot().extension(filler, dimension)
    }

    pub fn profile(&self, concept: &ConceptSense) -> Profile {
        self.snapshot().profile(concept)
    }

    fn bump(&mut self) -> u64 {
        self.version += 1;
        self.version
    }
}

#[derive(Serialize, Deserialize)]
struct AssertionRecord {
    concept: String,
    sense: u32,
    dimension: String,
    filler: String,
    #[serde(default = "default_weight")]
    weight: f64,
    #[serde(default)]
    source: Source,
}

#[derive(Serialize, Deserialize)]
struct SignatureRecord {
    relation: String,
    arg1: String,
    arg1_sense: u32,
    arg2: String,
    arg2_sense: u32,
    #[serde(default = "default_weight")]
    weight: f64,
}

fn default_weight() -> f64 {
    1.0
}

/// Serializes an assertion as one JSONL record.
pub fn assertion_to_json(a: &Assertion) -> String {
    let rec = AssertionRecord {
        concept: a.concept().lemma().to_string(),
        sense: a.concept().sense(),
        dimension: a.dimension().name().to_string(),
        filler: a.filler().to_string(),
        weight: a.weight(),
        source: a.source(),
    };
    serde_json::to_string(&rec).expect("assertion record serializes")
}

fn signature_to_json(s: &RelationSignature) -> String {
    let rec = SignatureRecord {
        relation: s.relation().to_string(),
        arg1: s.arg1().lemma().to_string(),
        arg1_sense: s.arg1().sense(),
        arg2: s.arg2().lemma().to_string(),
        arg2_sense: s.arg2().sense(),
        weight: s.weight(),
    };
    serde_json::to_string(&rec).expect("signature record serializes")
}

enum Record {
    Assertion(Assertion),
    Signature(RelationSignature),
}

fn parse_record(line: &str) -> Result<Record, String> {
    let value: Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let is_signature = value.get("relation").is_some() && value.get("concept").is_none();
    if is_signature {
        let rec: SignatureRecord = serde_json::from_value(value).map_err(|e| e.to_string())?;
        let arg1 = ConceptSense::new(&rec.arg1, rec.arg1_sense).map_err(|e| e.to_string())?;
        let arg2 = ConceptSense::new(&rec.arg2, rec.arg2_sense).map_err(|e| e.to_string())?;
        RelationSignature::new(&rec.relation, arg1, arg2, rec.weight)
            .map(Record::Signature)
            .map_err(|e| e.to_string())
    } else {
        let rec: AssertionRecord = serde_json::from_value(value).map_err(|e| e.to_string())?;
        let concept = ConceptSense::new(&rec.concept, rec.sense).map_err(|e| e.to_string())?;
        let dimension: DimensionTag = rec.dimension.parse().map_err(|e: Error| e.to_string())?;
        Assertion::new(concept, dimension, &rec.filler, rec.weight, rec.source)
            .map(Record::Assertion)
            .map_err(|e| e.to_string())
    }
}

/// Parses JSONL text. Blank lines are skipped; later records upsert earlier
/// ones with the same key.
pub fn parse_jsonl(text: &str) -> Result<Snapshot> {
    let mut store = AssertionStore::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match parse_record(line) {
            Ok(Record::Assertion(a)) => {
                store.add_assertion(a);
            }
            Ok(Record::Signature(s)) => {
                store.add_signature(s);
            }
            Err(message) => return Err(Error::Parse { line: idx + 1, message }),
        }
    }
    Ok(store.snapshot())
}

pub fn load_jsonl(path: impl AsRef<Path>) -> Result<Snapshot> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_jsonl(&text)
}

/// Renders a snapshot as JSONL: assertions in key order, then signatures.
pub fn render_jsonl(snapshot: &Snapshot) -> String {
    let mut out = String::new();
    for a in snapshot.assertions() {
        out.push_str(&assertion_to_json(a));
        out.push('\n');
    }
    for s in snapshot.signatures() {
        out.push_str(&signature_to_json(s));
        out.push('\n');
    }
    out
}

pub fn save_jsonl(snapshot: &Snapshot, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(render_jsonl(snapshot).as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}
