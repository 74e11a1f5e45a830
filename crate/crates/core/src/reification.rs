//! Turning applicability facts and tagged copular sentences into
//! primitive-relation triples.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{Assertion, ConceptSense, DimensionTag, PrimitiveRelation, PropertyRef, Trope};

/// Subject of a copular sentence or triple head.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Subject {
    Sense(ConceptSense),
    Individual(String),
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Sense(s) => write!(f, "{s}"),
            Subject::Individual(name) => f.write_str(name),
        }
    }
}

/// The eight shapes of "X is ..." sentences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CopularPattern {
    /// Frido is a dog.
    CommonNounComplement,
    /// JFK is John Fitzgerald Kennedy.
    ProperNameIdentity,
    /// Mary is wise.
    TraitAdjective,
    /// Carlos is ill.
    StateAdjective,
    /// Sara is running.
    ActiveProgressive,
    /// Sara is greeted.
    PassiveParticiple,
    /// Dan is 69 years old.
    MeasurePhrase,
    /// Sheba is running (as a participant in an event).
    EventParticipation,
}

impl CopularPattern {
    pub const ALL: [CopularPattern; 8] = [
        CopularPattern::CommonNounComplement,
        CopularPattern::ProperNameIdentity,
        CopularPattern::TraitAdjective,
        CopularPattern::StateAdjective,
        CopularPattern::ActiveProgressive,
        CopularPattern::PassiveParticiple,
        CopularPattern::MeasurePhrase,
        CopularPattern::EventParticipation,
    ];
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedCopular {
    subject: Subject,
    pattern: CopularPattern,
    complement: String,
}

impl TaggedCopular {
    pub fn new(subject: Subject, pattern: CopularPattern, complement: &str) -> Result<Self> {
        let complement = complement.trim();
        if complement.is_empty() {
            return Err(Error::InvalidAssertion("copular complement is empty".into()));
        }
        Ok(TaggedCopular {
            subject,
            pattern,
            complement: complement.to_string(),
        })
    }

    pub fn subject(&self) -> &Subject {
        &self.subject
    }

    pub fn pattern(&self) -> CopularPattern {
        self.pattern
    }

    pub fn complement(&self) -> &str {
        &self.complement
    }
}

pub fn classify_copular(t: &TaggedCopular) -> PrimitiveRelation {
    match t.pattern {
        CopularPattern::CommonNounComplement => PrimitiveRelation::Inst,
        CopularPattern::ProperNameIdentity => PrimitiveRelation::Eq,
        CopularPattern::TraitAdjective => PrimitiveRelation::HasProp,
        CopularPattern::StateAdjective => PrimitiveRelation::InState,
        CopularPattern::ActiveProgressive => PrimitiveRelation::HasAgent,
        CopularPattern::PassiveParticiple => PrimitiveRelation::ObjectOf,
        CopularPattern::MeasurePhrase => PrimitiveRelation::HasValue,
        CopularPattern::EventParticipation => PrimitiveRelation::HasParticipant,
    }
}

/// Surface form to trope name table, keyed case-insensitively.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NominalizationLexicon {
    entries: BTreeMap<String, String>,
}

impl NominalizationLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an entry; a surface form may only be defined once.
    pub fn insert(&mut self, surface: &str, trope: &str) -> Result<()> {
        let key = surface.trim().to_lowercase();
        let trope = trope.trim();
        if key.is_empty() || trope.is_empty() {
            return Err(Error::InvalidAssertion(format!(
                "empty nominalization entry `{surface}` -> `{trope}`"
            )));
        }
        if self.entries.contains_key(&key) {
            return Err(Error::InvalidAssertion(format!(
                "duplicate nominalization for `{surface}`"
            )));
        }
        self.entries.insert(key, trope.to_string());
        Ok(())
    }

    pub fn get(&self, surface: &str) -> Option<&str> {
        self.entries
            .get(&surface.trim().to_lowercase())
            .map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parses `SURFACE<TAB>TROPE` lines; `#` starts a comment.
    pub fn parse_tsv(text: &str) -> Result<Self> {
        let mut lex = NominalizationLexicon::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim_end();
            if line.trim().is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: idx + 1,
                message,
            };
            let mut cols = line.split('\t');
            let (surface, trope) = match (cols.next(), cols.next(), cols.next()) {
                (Some(s), Some(t), None) => (s, t),
                _ => return Err(parse_err("expected SURFACE<TAB>TROPE".into())),
            };
            lex.insert(surface, trope)
                .map_err(|e| parse_err(e.to_string()))?;
        }
        Ok(lex)
    }

    pub fn load_tsv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_tsv(&text)
    }
}

pub fn nominalize(p: &PropertyRef, lexicon: &NominalizationLexicon) -> Result<Trope> {
    let name = lexicon
        .get(p.surface())
        .ok_or_else(|| Error::MissingNominalization(p.surface().to_string()))?;
    Trope::new(name, p.clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tail {
    Trope(Trope),
    Sense(ConceptSense),
    /// An event or individual named verbatim, e.g. `influencing`.
    Event(String),
    /// A measured attribute: `height hasValue 5'10"`.
    Value { attribute: String, literal: String },
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tail::Trope(t) => f.write_str(t.name()),
            Tail::Sense(s) => write!(f, "{s}"),
            Tail::Event(e) => f.write_str(e),
            Tail::Value { attribute, literal } => write!(f, "{attribute}={literal}"),
        }
    }
}

/// `relation(head, tail)`.
///
/// `inverted` is set when the relation's own argument convention reads the
/// other way round, e.g. `HasAgent(event, agent)` stored concept-first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    pub head: Subject,
    pub relation: PrimitiveRelation,
    pub tail: Tail,
    pub inverted: bool,
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverted {
            write!(f, "{}({}, {})", self.relation, self.tail, self.head)
        } else {
            write!(f, "{}({}, {})", self.relation, self.head, self.tail)
        }
    }
}

/// Reifies an assertion as `(concept, relation, tail)`.
///
/// `HasProp` and `InState` fillers must nominalize to a trope. Event
/// dimensions use the lexicon's event noun when one is listed and the filler
/// verbatim otherwise. `HasValue` fillers have the form `attribute:literal`.
pub fn reify(a: &Assertion, lexicon: &NominalizationLexicon) -> Result<Triple> {
    let relation = a.dimension().relation();
    let tail = match a.dimension() {
        DimensionTag::HasProp | DimensionTag::InState => {
            let p = PropertyRef::unary(a.filler())?;
            Tail::Trope(nominalize(&p, lexicon)?)
        }
        DimensionTag::HasValue => {
            let (attribute, literal) = a
                .filler()
                .split_once(':')
                .map(|(x, y)| (x.trim(), y.trim()))
                .filter(|(x, y)| !x.is_empty() && !y.is_empty())
                .ok_or_else(|| Error::InvalidValueFiller(a.filler().to_string()))?;
            Tail::Value {
                attribute: attribute.to_string(),
                literal: literal.to_string(),
            }
        }
        DimensionTag::AgentOf | DimensionTag::ObjectOf | DimensionTag::ParticipantIn | DimensionTag::PartOf => {
            let name = lexicon.get(a.filler()).unwrap_or(a.filler());
            Tail::Event(name.to_string())
        }
    };
    Ok(Triple {
        head: Subject::Sense(a.concept().clone()),
        relation,
        tail,
        inverted: matches!(
            relation,
            PrimitiveRelation::HasAgent | PrimitiveRelation::HasParticipant
        ),
    })
}

/// Recovers the dimension an assertion was reified from.
pub fn dimension_of(triple: &Triple) -> Option<DimensionTag> {
    DimensionTag::from_relation(triple.relation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Source;

    fn lexicon() -> NominalizationLexicon {
        NominalizationLexicon::parse_tsv(
            "# surface\ttrope\nARTICULATE\tarticulation\nHUNGRY\thunger\ninfluenced\tinfluencing\n",
        )
        .unwrap()
    }

    fn individual(name: &str) -> Subject {
        Subject::Individual(name.into())
    }

    #[test]
    fn copular_table_rows() {
        let cases = [
            ("Frido", CopularPattern::CommonNounComplement, "dog", PrimitiveRelation::Inst),
            ("JFK", CopularPattern::ProperNameIdentity, "John Fitzgerald Kennedy", PrimitiveRelation::Eq),
            ("Mary", CopularPattern::TraitAdjective, "wise", PrimitiveRelation::HasProp),
            ("Carlos", CopularPattern::StateAdjective, "ill", PrimitiveRelation::InState),
            ("Sara", CopularPattern::ActiveProgressive, "running", PrimitiveRelation::HasAgent),
            ("Sara", CopularPattern::PassiveParticiple, "greeted", PrimitiveRelation::ObjectOf),
            ("Dan", CopularPattern::MeasurePhrase, "69 years old", PrimitiveRelation::HasValue),
            ("Sheba", CopularPattern::EventParticipation, "running", PrimitiveRelation::HasParticipant),
        ];
        for (s, p, c, r) in cases {
            let t = TaggedCopular::new(individual(s), p, c).unwrap();
            assert_eq!(classify_copular(&t), r, "{s} {p:?}");
        }
        assert!(TaggedCopular::new(individual("x"), CopularPattern::TraitAdjective, " ").is_err());
    }

    #[test]
    fn nominalization_lookup() {
        let lex = lexicon();
        let t = nominalize(&PropertyRef::unary("ARTICULATE").unwrap(), &lex).unwrap();
        assert_eq!(t.name(), "articulation");
        assert_eq!(t.source().surface(), "ARTICULATE");
        let t = nominalize(&PropertyRef::unary("hungry").unwrap(), &lex).unwrap();
        assert_eq!(t.name(), "hunger");
        assert!(matches!(
            nominalize(&PropertyRef::unary("BLORFY").unwrap(), &lex),
            Err(Error::MissingNominalization(s)) if s == "BLORFY"
        ));
    }

    #[test]
    fn lexicon_rejects_duplicates_and_bad_lines() {
        let dup = NominalizationLexicon::parse_tsv("A\ta\n# c\nb\tb2\na\tx\n");
        assert!(matches!(dup, Err(Error::Parse { line: 4, .. })));
        let bad = NominalizationLexicon::parse_tsv("just-one-column\n");
        assert!(matches!(bad, Err(Error::Parse { line: 1, .. })));
        let three = NominalizationLexicon::parse_tsv("a\tb\tc\n");
        assert!(three.is_err());
    }

    #[test]
    fn reify_property_and_state() {
        let lex = lexicon();
        let human = ConceptSense::new("human", 1).unwrap();
        let a = Assertion::new(human.clone(), DimensionTag::HasProp, "ARTICULATE", 1.0, Source::Fixture).unwrap();
        let t = reify(&a, &lex).unwrap();
        assert_eq!(t.head, Subject::Sense(human));
        assert_eq!(t.relation, PrimitiveRelation::HasProp);
        assert_eq!(t.to_string(), "HasProp(human#1, articulation)");

        let living = ConceptSense::new("living", 1).unwrap();
        let a = Assertion::new(living, DimensionTag::InState, "HUNGRY", 1.0, Source::Fixture).unwrap();
        assert_eq!(reify(&a, &lex).unwrap().to_string(), "InState(living#1, hunger)");
    }

    #[test]
    fn reify_agent_is_inverse_event_triple() {
        let book = ConceptSense::new("book", 1).unwrap();
        let a = Assertion::new(book.clone(), DimensionTag::AgentOf, "influenced", 1.0, Source::Harvested).unwrap();
        let t = reify(&a, &lexicon()).unwrap();
        assert_eq!(t.relation, PrimitiveRelation::HasAgent);
        assert!(t.inverted);
        assert_eq!(t.tail, Tail::Event("influencing".into()));
        assert_eq!(t.to_string(), "HasAgent(influencing, book#1)");
        // no lexicon entry: verbatim
        let a = Assertion::new(book, DimensionTag::ObjectOf, "translated", 1.0, Source::Harvested).unwrap();
        assert_eq!(reify(&a, &lexicon()).unwrap().tail, Tail::Event("translated".into()));
    }

    #[test]
    fn reify_errors() {
        let c = ConceptSense::new("x", 1).unwrap();
        let a = Assertion::new(c.clone(), DimensionTag::HasProp, "BLORFY", 1.0, Source::Manual).unwrap();
        assert!(matches!(reify(&a, &lexicon()), Err(Error::MissingNominalization(_))));
        let a = Assertion::new(c.clone(), DimensionTag::HasValue, "69 yrs", 1.0, Source::Manual).unwrap();
        assert!(matches!(reify(&a, &lexicon()), Err(Error::InvalidValueFiller(_))));
        let a = Assertion::new(c, DimensionTag::HasValue, "age: 69 yrs", 1.0, Source::Manual).unwrap();
        assert_eq!(
            reify(&a, &lexicon()).unwrap().tail,
            Tail::Value { attribute: "age".into(), literal: "69 yrs".into() }
        );
    }

    #[test]
    fn dimension_round_trips_through_triple() {
        let mut lex = lexicon();
        lex.insert("P", "p-ness").unwrap();
        let c = ConceptSense::new("x", 1).unwrap();
        for d in DimensionTag::ALL {
            let filler = if d == DimensionTag::HasValue { "size:3 m" } else { "P" };
            let a = Assertion::new(c.clone(), d, filler, 0.5, Source::Manual).unwrap();
            let t = reify(&a, &lex).unwrap();
            assert_eq!(dimension_of(&t), Some(d));
        }
    }
}
