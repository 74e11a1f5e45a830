//! Shared vocabulary: word senses, properties, tropes, dimensions, primitive
//! relations and weighted assertions.
//!
//! Everything here is immutable after construction and validated on the way
//! in, so downstream algorithms never re-check invariants.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One meaning of a word, e.g. `book#1`.
///
/// The lemma is lowercased at construction; sense indices are 1-based and
/// always supplied by the data, never inferred.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConceptSense {
    lemma: String,
    sense: u32,
}

impl ConceptSense {
    pub fn new(lemma: &str, sense: u32) -> Result<Self> {
        let lemma = lemma.trim().to_lowercase();
        if lemma.is_empty() {
            return Err(Error::InvalidSense("lemma is empty".into()));
        }
        if lemma.contains('#') {
            return Err(Error::InvalidSense(format!("lemma `{lemma}` contains `#`")));
        }
        if sense == 0 {
            return Err(Error::InvalidSense(format!(
                "sense index for `{lemma}` must be positive"
            )));
        }
        Ok(ConceptSense { lemma, sense })
    }

    pub fn lemma(&self) -> &str {
        &self.lemma
    }

    pub fn sense(&self) -> u32 {
        self.sense
    }
}

impl fmt::Display for ConceptSense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.lemma, self.sense)
    }
}

/// Parses the `lemma#sense` token form.
impl FromStr for ConceptSense {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (lemma, sense) = s
            .trim()
            .rsplit_once('#')
            .ok_or_else(|| Error::InvalidSense(format!("`{s}` is not of the form lemma#sense")))?;
        let sense: u32 = sense
            .trim()
            .parse()
            .map_err(|_| Error::InvalidSense(format!("`{s}` has a non-numeric sense index")))?;
        ConceptSense::new(lemma, sense)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arity {
    /// Adjectival or stative property (HEAVY).
    Unary,
    /// Relational verb (RIDE(human, vehicle)).
    Binary,
}

/// A property as it appears on the surface, e.g. `ARTICULATE` or `RIDE`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropertyRef {
    surface: String,
    arity: Arity,
}

impl PropertyRef {
    pub fn new(surface: &str, arity: Arity) -> Result<Self> {
        let surface = surface.trim();
        if surface.is_empty() {
            return Err(Error::InvalidProperty("surface form is empty".into()));
        }
        Ok(PropertyRef {
            surface: surface.to_string(),
            arity,
        })
    }

    pub fn unary(surface: &str) -> Result<Self> {
        Self::new(surface, Arity::Unary)
    }

    pub fn binary(surface: &str) -> Result<Self> {
        Self::new(surface, Arity::Binary)
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }
}

/// A reified property: an abstract object such as `articulation`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trope {
    name: String,
    source: PropertyRef,
}

impl Trope {
    pub(crate) fn new(name: &str, source: PropertyRef) -> Result<Self> {
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::MissingNominalization(source.surface().to_string()));
        }
        Ok(Trope {
            name: name.to_string(),
            source,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &PropertyRef {
        &self.source
    }
}

/// Axis of word meaning along which weighted fillers accumulate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DimensionTag {
    HasProp,
    InState,
    AgentOf,
    ObjectOf,
    PartOf,
    HasValue,
    ParticipantIn,
}

impl DimensionTag {
    pub const ALL: [DimensionTag; 7] = [
        DimensionTag::HasProp,
        DimensionTag::InState,
        DimensionTag::AgentOf,
        DimensionTag::ObjectOf,
        DimensionTag::PartOf,
        DimensionTag::HasValue,
        DimensionTag::ParticipantIn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DimensionTag::HasProp => "HasProp",
            DimensionTag::InState => "InState",
            DimensionTag::AgentOf => "AgentOf",
            DimensionTag::ObjectOf => "ObjectOf",
            DimensionTag::PartOf => "PartOf",
            DimensionTag::HasValue => "HasValue",
            DimensionTag::ParticipantIn => "ParticipantIn",
        }
    }

    /// The primitive relation this dimension reifies into. Injective.
    pub fn relation(self) -> PrimitiveRelation {
        match self {
            DimensionTag::HasProp => PrimitiveRelation::HasProp,
            DimensionTag::InState => PrimitiveRelation::InState,
            DimensionTag::AgentOf => PrimitiveRelation::HasAgent,
            DimensionTag::ObjectOf => PrimitiveRelation::ObjectOf,
            DimensionTag::PartOf => PrimitiveRelation::Part,
            DimensionTag::HasValue => PrimitiveRelation::HasValue,
            DimensionTag::ParticipantIn => PrimitiveRelation::HasParticipant,
        }
    }

    /// Inverse of [`relation`](Self::relation).
    pub fn from_relation(relation: PrimitiveRelation) -> Option<Self> {
        DimensionTag::ALL
            .into_iter()
            .find(|d| d.relation() == relation)
    }
}

impl fmt::Display for DimensionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exact, case-sensitive match against the tag names.
impl FromStr for DimensionTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DimensionTag::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::UnknownDimension(s.to_string()))
    }
}

/// Closed, language-agnostic relation vocabulary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrimitiveRelation {
    Eq,
    Part,
    Inst,
    Inhere,
    Exemp,
    Dep,
    IsA,
    Precedes,
    HasParticipant,
    HasAgent,
    Realizes,
    TypeOf,
    HasProp,
    InState,
    ObjectOf,
    HasValue,
}

const ALIASES: &[(&str, PrimitiveRelation)] = &[
    ("instanceof", PrimitiveRelation::Inst),
    ("agentof", PrimitiveRelation::HasAgent),
    ("participantin", PrimitiveRelation::HasParticipant),
];

impl PrimitiveRelation {
    pub const ALL: [PrimitiveRelation; 16] = [
        PrimitiveRelation::Eq,
        PrimitiveRelation::Part,
        PrimitiveRelation::Inst,
        PrimitiveRelation::Inhere,
        PrimitiveRelation::Exemp,
        PrimitiveRelation::Dep,
        PrimitiveRelation::IsA,
        PrimitiveRelation::Precedes,
        PrimitiveRelation::HasParticipant,
        PrimitiveRelation::HasAgent,
        PrimitiveRelation::Realizes,
        PrimitiveRelation::TypeOf,
        PrimitiveRelation::HasProp,
        PrimitiveRelation::InState,
        PrimitiveRelation::ObjectOf,
        PrimitiveRelation::HasValue,
    ];

    /// Relation-table names recognised as aliases, as written in the
    /// copular-pattern table.
    pub const TABLE_ALIASES: [&'static str; 8] = [
        "instanceOf",
        "eq",
        "agentOf",
        "participantIn",
        "objectOf",
        "hasProp",
        "inState",
        "hasValue",
    ];

    pub fn name(self) -> &'static str {
        match self {
            PrimitiveRelation::Eq => "Eq",
            PrimitiveRelation::Part => "Part",
            PrimitiveRelation::Inst => "Inst",
            PrimitiveRelation::Inhere => "Inhere",
            PrimitiveRelation::Exemp => "Exemp",
            PrimitiveRelation::Dep => "Dep",
            PrimitiveRelation::IsA => "IsA",
            PrimitiveRelation::Precedes => "Precedes",
            PrimitiveRelation::HasParticipant => "HasParticipant",
            PrimitiveRelation::HasAgent => "HasAgent",
            PrimitiveRelation::Realizes => "Realizes",
            PrimitiveRelation::TypeOf => "TypeOf",
            PrimitiveRelation::HasProp => "HasProp",
            PrimitiveRelation::InState => "InState",
            PrimitiveRelation::ObjectOf => "ObjectOf",
            PrimitiveRelation::HasValue => "HasValue",
        }
    }
}

impl fmt::Display for PrimitiveRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Maps a relation name from either relation table onto its canonical
/// member. Matching is case-insensitive.
pub fn canonical_relation(alias: &str) -> Result<PrimitiveRelation> {
    let key = alias.trim().to_lowercase();
    if key.is_empty() {
        return Err(Error::UnknownRelation(alias.to_string()));
    }
    if let Some(r) = PrimitiveRelation::ALL
        .into_iter()
        .find(|r| r.name().to_lowercase() == key)
    {
        return Ok(r);
    }
    ALIASES
        .iter()
        .find(|(a, _)| *a == key)
        .map(|(_, r)| *r)
        .ok_or_else(|| Error::UnknownRelation(alias.to_string()))
}

impl FromStr for PrimitiveRelation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        canonical_relation(s)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Fixture,
    Harvested,
    #[default]
    Manual,
}

/// A weighted `app(p, c)` fact along one dimension.
///
/// Identity is `(concept, dimension, filler)`; the weight is payload.
#[derive(Clone, Debug, PartialEq)]
pub struct Assertion {
    concept: ConceptSense,
    dimension: DimensionTag,
    filler: String,
    weight: f64,
    source: Source,
}

pub type AssertionKey = (ConceptSense, DimensionTag, String);

impl Assertion {
    pub fn new(
        concept: ConceptSense,
        dimension: DimensionTag,
        filler: &str,
        weight: f64,
        source: Source,
    ) -> Result<Self> {
        check_weight(weight)?;
        let filler = filler.trim();
        if filler.is_empty() {
            return Err(Error::InvalidAssertion(format!(
                "empty filler for {concept} {dimension}"
            )));
        }
        Ok(Assertion {
            concept,
            dimension,
            filler: filler.to_string(),
            weight,
            source,
        })
    }

    pub fn concept(&self) -> &ConceptSense {
        &self.concept
    }

    pub fn dimension(&self) -> DimensionTag {
        self.dimension
    }

    pub fn filler(&self) -> &str {
        &self.filler
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn key(&self) -> AssertionKey {
        (self.concept.clone(), self.dimension, self.filler.clone())
    }
}

pub(crate) fn check_weight(weight: f64) -> Result<()> {
    if (0.0..=1.0).contains(&weight) {
        Ok(())
    } else {
        Err(Error::InvalidWeight(weight))
    }
}
