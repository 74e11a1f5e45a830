//! Symbolic lexical semantics: induce a type hierarchy from applicability
//! assertions, reify them into primitive relations, score concept similarity
//! along meaning dimensions, and resolve metonymy by type unification.

pub mod acquisition;
pub mod cli;
pub mod error;
pub mod hierarchy;
pub mod metonymy;
pub mod model;
pub mod reification;
pub mod similarity;
pub mod store;

pub use error::{Error, Result};
pub use hierarchy::{induce, Feature, NodeId, TypeGraph, TypeNode};
pub use metonymy::{
    resolve_metonymy, salient_relation, typecheck, unify_arg, Application, CoercedReading, Coercion,
    Resolution, TypeCheck,
};
pub use model::{
    canonical_relation, Arity, Assertion, ConceptSense, DimensionTag, PrimitiveRelation, PropertyRef,
    Source, Trope,
};
pub use reification::{
    classify_copular, nominalize, reify, CopularPattern, NominalizationLexicon, Subject, Tail,
    TaggedCopular, Triple,
};
pub use similarity::{c_similarity, d_similarity, f_similarity, feature_set, FeaturePair, FeatureSet};
pub use store::{
    load_jsonl, parse_jsonl, render_jsonl, save_jsonl, AssertionStore, Profile, RelationSignature,
    Snapshot, WeightedFiller,
};
