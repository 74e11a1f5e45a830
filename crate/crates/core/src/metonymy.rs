//! Type-checking relation applications against their signatures and
//! repairing mismatches with a salient bridge relation.
//!
//! `WANT(omelet, beer)` against `WANT(person, entity)` fails at position 1.
//! The heaviest signature relating `person` to `omelet` (here
//! `EAT(person, food)`) becomes the bridge, giving
//! `EAT(person, omelet) ∧ WANT(person, beer)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hierarchy::TypeGraph;
use crate::model::ConceptSense;
use crate::store::{RelationSignature, Snapshot};

/// `RELATION(arg1, arg2)` over concept senses.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Application {
    relation: String,
    arg1: ConceptSense,
    arg2: ConceptSense,
}

impl Application {
    pub fn new(relation: &str, arg1: ConceptSense, arg2: ConceptSense) -> Result<Self> {
        let relation = relation.trim();
        if relation.is_empty() {
            return Err(Error::Usage("relation name is empty".into()));
        }
        Ok(Application {
            relation: relation.to_string(),
            arg1,
            arg2,
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

    fn with_arg(&self, position: usize, sense: ConceptSense) -> Self {
        let mut out = self.clone();
        if position == 1 {
            out.arg1 = sense;
        } else {
            out.arg2 = sense;
        }
        out
    }
}

impl fmt::Display for Application {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.relation, self.arg1, self.arg2)
    }
}

#[derive(Debug, PartialEq)]
enum Token<'a> {
    Word(&'a str),
    Open,
    Close,
    Comma,
}

fn tokenize(input: &str) -> Result<Vec<Token<'_>>> {
    let mut tokens = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some(&(i, ch)) = chars.peek() {
        match ch {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                tokens.push(Token::Open);
                chars.next();
            }
            ')' => {
                tokens.push(Token::Close);
                chars.next();
            }
            ',' => {
                tokens.push(Token::Comma);
                chars.next();
            }
            _ => {
                let mut end = i;
                while let Some(&(j, c)) = chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | ',') {
                        break;
                    }
                    end = j + c.len_utf8();
                    chars.next();
                }
                tokens.push(Token::Word(&input[i..end]));
            }
        }
    }
    Ok(tokens)
}

/// Parses `NAME(lemma#n, lemma#n)`; whitespace is insignificant.
impl FromStr for Application {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let syntax = || Error::Usage(format!("`{s}` is not of the form NAME(concept#n,concept#n)"));
        match tokenize(s)?.as_slice() {
            [Token::Word(name), Token::Open, Token::Word(a), Token::Comma, Token::Word(b), Token::Close] => {
                let arg1: ConceptSense = a.parse()?;
                let arg2: ConceptSense = b.parse()?;
                Application::new(name, arg1, arg2)
            }
            _ => Err(syntax()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeCheck {
    WellTyped,
    /// Failing argument positions, ascending.
    Mismatch(Vec<usize>),
}

/// One inserted bridge, e.g. `EAT(person, omelet)` at position 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Coercion {
    pub position: usize,
    pub bridge: Application,
    pub signature: RelationSignature,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoercedReading {
    pub coercions: Vec<Coercion>,
    pub rewritten: Application,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Resolution {
    WellTyped(Application),
    Coerced(CoercedReading),
}

/// `c` fits a signature slot typed `sig_type` iff `c ⊑ sig_type`.
pub fn unify_arg(c: &ConceptSense, sig_type: &ConceptSense, g: &TypeGraph) -> Result<bool> {
    g.is_subtype(c, sig_type)
}

fn mismatches(app: &Application, sig: &RelationSignature, g: &TypeGraph) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for pos in [1, 2] {
        if !unify_arg(app.arg(pos), sig.arg(pos), g)? {
            out.push(pos);
        }
    }
    Ok(out)
}

/// Picks the signature the application fits best: fewest mismatches, then
/// highest weight, then key order.
fn best_signature<'s>(
    app: &Application,
    s: &'s Snapshot,
    g: &TypeGraph,
) -> Result<(&'s RelationSignature, Vec<usize>)> {
    let sigs = s.signatures_for(app.relation());
    if sigs.is_empty() {
        return Err(Error::UnknownRelationSignature(app.relation().to_string()));
    }
    let mut scored = Vec::with_capacity(sigs.len());
    for sig in sigs {
        scored.push((sig, mismatches(app, sig, g)?));
    }
    scored.sort_by(|(sa, ma), (sb, mb)| {
        ma.len()
            .cmp(&mb.len())
            .then_with(|| sb.weight().total_cmp(&sa.weight()))
            .then_with(|| sa.key().cmp(&sb.key()))
    });
    Ok(scored.swap_remove(0))
}

pub fn typecheck(app: &Application, s: &Snapshot, g: &TypeGraph) -> Result<TypeCheck> {
    let (_, failing) = best_signature(app, s, g)?;
    Ok(if failing.is_empty() {
        TypeCheck::WellTyped
    } else {
        TypeCheck::Mismatch(failing)
    })
}

fn extent_size(sense: &ConceptSense, g: &TypeGraph) -> usize {
    g.node_of(sense)
        .map(|id| g.node(id).extent().len())
        .unwrap_or(usize::MAX)
}

/// Salience order: heavier first, then more specific second argument, then
/// more specific first argument, then relation name.
fn salience_order(a: &RelationSignature, b: &RelationSignature, g: &TypeGraph) -> Ordering {
    b.weight()
        .total_cmp(&a.weight())
        .then_with(|| extent_size(a.arg2(), g).cmp(&extent_size(b.arg2(), g)))
        .then_with(|| extent_size(a.arg1(), g).cmp(&extent_size(b.arg1(), g)))
        .then_with(|| a.relation().cmp(b.relation()))
        .then_with(|| a.key().cmp(&b.key()))
}

fn bridge_candidates<'s>(
    expected: &ConceptSense,
    actual: &ConceptSense,
    exclude: Option<&str>,
    s: &'s Snapshot,
    g: &TypeGraph,
) -> Vec<&'s RelationSignature> {
    let fits = |c: &ConceptSense, t: &ConceptSense| g.is_subtype(c, t).unwrap_or(false);
    s.signatures()
        .filter(|sig| exclude.is_none_or(|r| !sig.relation().eq_ignore_ascii_case(r)))
        .filter(|sig| fits(expected, sig.arg1()) && fits(actual, sig.arg2()))
        .collect()
}

fn pick_bridge(
    expected: &ConceptSense,
    actual: &ConceptSense,
    exclude: Option<&str>,
    s: &Snapshot,
    g: &TypeGraph,
) -> Result<RelationSignature> {
    bridge_candidates(expected, actual, exclude, s, g)
        .into_iter()
        .min_by(|a, b| salience_order(a, b, g))
        .cloned()
        .ok_or_else(|| Error::NoBridgeRelation {
            expected: expected.to_string(),
            actual: actual.to_string(),
        })
}

/// Most salient signature `R(a1, a2)` with `expected ⊑ a1` and `actual ⊑ a2`.
pub fn salient_relation(
    expected: &ConceptSense,
    actual: &ConceptSense,
    s: &Snapshot,
    g: &TypeGraph,
) -> Result<RelationSignature> {
    pick_bridge(expected, actual, None, s, g)
}

/// Returns the application unchanged when it type-checks; otherwise bridges
/// each mismatched argument (position 1 first) with one salient relation.
/// The relation being resolved is never used as its own bridge.
pub fn resolve_metonymy(app: &Application, s: &Snapshot, g: &TypeGraph) -> Result<Resolution> {
    let (sig, failing) = best_signature(app, s, g)?;
    if failing.is_empty() {
        return Ok(Resolution::WellTyped(app.clone()));
    }
    let mut rewritten = app.clone();
    let mut coercions = Vec::with_capacity(failing.len());
    for &pos in &failing {
        let expected = sig.arg(pos);
        let actual = app.arg(pos);
        let bridge = match pick_bridge(expected, actual, Some(app.relation()), s, g) {
            Ok(b) => b,
            Err(Error::NoBridgeRelation { .. }) if failing.len() == 2 => {
                return Err(Error::UnresolvableApplication(app.to_string()))
            }
            Err(e) => return Err(e),
        };
        coercions.push(Coercion {
            position: pos,
            bridge: Application::new(bridge.relation(), expected.clone(), actual.clone())?,
            signature: bridge,
        });
        rewritten = rewritten.with_arg(pos, expected.clone());
    }
    if !mismatches(&rewritten, sig, g)?.is_empty() {
        return Err(Error::UnresolvableApplication(app.to_string()));
    }
    Ok(Resolution::Coerced(CoercedReading {
        coercions,
        rewritten,
    }))
}
