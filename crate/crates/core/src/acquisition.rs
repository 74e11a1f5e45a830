//! Masked-completion knowledge acquisition.
//!
//! A [`MaskTemplate`] is instantiated for a concept, sent to a
//! [`CompletionProvider`], and the returned ranked list becomes weighted
//! assertions along the template's dimension.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{Assertion, ConceptSense, DimensionTag, Source};

pub const MASK: &str = "[MASK]";
pub const CONCEPT: &str = "{CONCEPT}";

pub const ENV_ENDPOINT: &str = "COMPLETION_ENDPOINT";
pub const ENV_API_KEY: &str = "COMPLETION_API_KEY";
pub const ENV_FIXTURES: &str = "COMPLETION_FIXTURES";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaskTemplate {
    pub dimension: DimensionTag,
    pub text: String,
    pub count: usize,
}

impl MaskTemplate {
    pub fn new(dimension: DimensionTag, text: &str, count: usize) -> Result<Self> {
        let t = MaskTemplate {
            dimension,
            text: text.to_string(),
            count,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let masks = self.text.matches(MASK).count();
        let concepts = self.text.matches(CONCEPT).count();
        if masks != 1 {
            return Err(Error::InvalidTemplate(format!(
                "expected exactly one {MASK}, found {masks} in `{}`",
                self.text
            )));
        }
        if concepts != 1 {
            return Err(Error::InvalidTemplate(format!(
                "expected exactly one {CONCEPT}, found {concepts} in `{}`",
                self.text
            )));
        }
        if self.count == 0 {
            return Err(Error::InvalidTemplate("count must be positive".into()));
        }
        Ok(())
    }

    /// Reads JSONL template records.
    pub fn load_jsonl(path: impl AsRef<Path>) -> Result<Vec<MaskTemplate>> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut out = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: idx + 1,
                message,
            };
            let t: MaskTemplate = serde_json::from_str(line).map_err(|e| parse_err(e.to_string()))?;
            t.validate().map_err(|e| parse_err(e.to_string()))?;
            out.push(t);
        }
        Ok(out)
    }
}

/// Reads one `lemma#sense` per line; blank lines and `#`-prefixed comments
/// are skipped.
pub fn load_concepts(path: impl AsRef<Path>) -> Result<Vec<ConceptSense>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(idx, l)| {
            l.parse().map_err(|e: Error| Error::Parse {
                line: idx + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn build_mask_prompt(concept: &ConceptSense, template: &MaskTemplate) -> Result<String> {
    template.validate()?;
    let sentence = template.text.replace(CONCEPT, concept.lemma());
    let noun = if template.count == 1 { "replacement" } else { "replacements" };
    Ok(format!(
        "Provide exactly {n} plausible (sensible) single-word {noun} for {MASK} in the sentence below.\n\
         Answer with a numbered list, one item per line, most plausible first.\n\
         \n\
         {sentence}\n",
        n = template.count,
    ))
}

/// Ordered, deduplicated, normalized fillers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedList {
    pub fillers: Vec<String>,
    pub requested: usize,
}

impl RankedList {
    /// Numbered rendering, `1. first` per line.
    pub fn render(&self) -> String {
        self.fillers
            .iter()
            .enumerate()
            .map(|(i, f)| format!("{}. {}\n", i + 1, f))
            .collect()
    }
}

/// Lowercases, trims, strips a leading rank numeral or bullet and any
/// surrounding punctuation. Inner hyphens and spaces are kept.
pub fn normalize_filler(raw: &str) -> String {
    let mut s = raw.trim();
    let digits = s.len() - s.trim_start_matches(|c: char| c.is_ascii_digit()).len();
    if digits > 0 {
        let rest = &s[digits..];
        if let Some(r) = rest.strip_prefix(['.', ')', ':']) {
            s = r;
        } else if rest.starts_with(char::is_whitespace) {
            s = rest;
        }
    } else if let Some(r) = s.strip_prefix(['-', '*', '•']) {
        s = r;
    }
    let s = s.trim_matches(|c: char| c.is_whitespace() || (c.is_ascii_punctuation() && c != '\''));
    s.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

pub fn parse_completion_list(raw: &str, requested: usize) -> Result<RankedList> {
    let mut fillers: Vec<String> = Vec::new();
    for line in raw.lines() {
        let item = normalize_filler(line);
        if !item.is_empty() && !fillers.contains(&item) {
            fillers.push(item);
        }
    }
    if fillers.is_empty() {
        return Err(Error::EmptyCompletion);
    }
    Ok(RankedList { fillers, requested })
}

/// Linear weight `(n - rank + 1) / n`.
pub fn rank_to_weight(rank: usize, n: usize) -> Result<f64> {
    if rank == 0 || rank > n {
        return Err(Error::RankOutOfRange { rank, n });
    }
    Ok((n - rank + 1) as f64 / n as f64)
}

/// Source of ranked completions for a prompt.
pub trait CompletionProvider: Sync {
    fn complete(&self, prompt: &str, max_items: usize) -> Result<String>;
}

/// Hex SHA-256 of the prompt text, used as the fixture file stem.
pub fn prompt_key(prompt: &str) -> String {
    hex::encode(Sha256::digest(prompt.as_bytes()))
}

/// Replays canned responses stored as `<dir>/<prompt_key>.txt`.
#[derive(Clone, Debug)]
pub struct FixtureProvider {
    dir: PathBuf,
}

impl FixtureProvider {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        FixtureProvider { dir: dir.into() }
    }

    pub fn path_for(&self, prompt: &str) -> PathBuf {
        self.dir.join(format!("{}.txt", prompt_key(prompt)))
    }

    /// Writes the canned response for `prompt`.
    pub fn record(&self, prompt: &str, response: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        let path = self.path_for(prompt);
        fs::write(&path, response).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }
}

impl CompletionProvider for FixtureProvider {
    fn complete(&self, prompt: &str, _max_items: usize) -> Result<String> {
        let path = self.path_for(prompt);
        fs::read_to_string(&path)
            .map_err(|e| Error::Provider(format!("no fixture {}: {e}", path.display())))
    }
}

#[derive(Serialize)]
struct CompletionRequest<'a> {
    prompt: &'a str,
    max_items: usize,
}

#[derive(Deserialize)]
struct CompletionResponse {
    text: String,
}

/// JSON-over-HTTP completion client.
///
/// POSTs `{"prompt", "max_items"}` and expects `{"text"}` back. Each call is
/// tried up to three times.
pub struct HttpProvider {
    endpoint: String,
    api_key: Option<String>,
    client: reqwest::blocking::Client,
}

const HTTP_ATTEMPTS: usize = 3;

impl HttpProvider {
    pub fn new(endpoint: &str, api_key: Option<String>) -> Result<Self> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(60))
            .build()
            .map_err(|e| Error::Provider(e.to_string()))?;
        Ok(HttpProvider {
            endpoint: endpoint.to_string(),
            api_key,
            client,
        })
    }

    pub fn from_env() -> Result<Self> {
        let endpoint = std::env::var(ENV_ENDPOINT)
            .map_err(|_| Error::Provider(format!("{ENV_ENDPOINT} is not set")))?;
        Self::new(&endpoint, std::env::var(ENV_API_KEY).ok())
    }

    fn attempt(&self, prompt: &str, max_items: usize) -> Result<String> {
        let mut req = self
            .client
            .post(&self.endpoint)
            .json(&CompletionRequest { prompt, max_items });
        if let Some(key) = &self.api_key {
            req = req.bearer_auth(key);
        }
        let resp = req.send().map_err(|e| Error::Provider(e.to_string()))?;
        let status = resp.status();
        if !status.is_success() {
            return Err(Error::Provider(format!("HTTP {status} from {}", self.endpoint)));
        }
        resp.json::<CompletionResponse>()
            .map(|r| r.text)
            .map_err(|e| Error::Provider(format!("bad response body: {e}")))
    }
}

impl CompletionProvider for HttpProvider {
    fn complete(&self, prompt: &str, max_items: usize) -> Result<String> {
        let mut last = None;
        for _ in 0..HTTP_ATTEMPTS {
            match self.attempt(prompt, max_items) {
                Ok(text) => return Ok(text),
                Err(e) => last = Some(e),
            }
        }
        Err(last.unwrap_or_else(|| Error::Provider("no attempt made".into())))
    }
}

/// Fixture mode when `COMPLETION_FIXTURES` is set (or `fixtures` is given),
/// HTTP otherwise.
pub fn provider_from_env(fixtures: Option<&Path>) -> Result<Box<dyn CompletionProvider>> {
    if let Some(dir) = fixtures {
        return Ok(Box::new(FixtureProvider::new(dir)));
    }
    if let Ok(dir) = std::env::var(ENV_FIXTURES) {
        return Ok(Box::new(FixtureProvider::new(dir)));
    }
    Ok(Box::new(HttpProvider::from_env()?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct HarvestFailure {
    pub concept: ConceptSense,
    pub template: String,
    pub message: String,
}

/// Harvested assertions together with every request that failed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HarvestReport {
    pub assertions: Vec<Assertion>,
    pub failures: Vec<HarvestFailure>,
}

impl HarvestReport {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn harvest(
    provider: &dyn CompletionProvider,
    concepts: &[ConceptSense],
    templates: &[MaskTemplate],
) -> HarvestReport {
    harvest_samples(provider, concepts, templates, 1)
}

/// Queries every (concept, template) pair `samples` times. Weights for a
/// filler seen more than once for the same concept and dimension are
/// averaged over its occurrences.
pub fn harvest_samples(
    provider: &dyn CompletionProvider,
    concepts: &[ConceptSense],
    templates: &[MaskTemplate],
    samples: usize,
) -> HarvestReport {
    let jobs: Vec<(&ConceptSense, &MaskTemplate, usize)> = concepts
        .iter()
        .flat_map(|c| templates.iter().map(move |t| (c, t)))
        .flat_map(|(c, t)| (0..samples.max(1)).map(move |k| (c, t, k)))
        .collect();

    let results: Vec<Result<Vec<(String, f64)>>> = jobs
        .par_iter()
        .map(|(c, t, _)| {
            let prompt = build_mask_prompt(c, t)?;
            let raw = provider.complete(&prompt, t.count)?;
            let mut list = parse_completion_list(&raw, t.count)?;
            list.fillers.truncate(t.count);
            let n = list.fillers.len();
            list.fillers
                .into_iter()
                .enumerate()
                .map(|(i, f)| Ok((f, rank_to_weight(i + 1, n)?)))
                .collect()
        })
        .collect();

    let mut sums: BTreeMap<(ConceptSense, DimensionTag, String), (f64, usize)> = BTreeMap::new();
    let mut report = HarvestReport::default();
    for ((c, t, _), res) in jobs.iter().zip(results) {
        match res {
            Ok(items) => {
                for (filler, w) in items {
                    let e = sums.entry(((*c).clone(), t.dimension, filler)).or_insert((0.0, 0));
                    e.0 += w;
                    e.1 += 1;
                }
            }
            Err(e) => report.failures.push(HarvestFailure {
                concept: (*c).clone(),
                template: t.text.clone(),
                message: e.to_string(),
            }),
        }
    }
    report.failures.dedup();
    report.assertions = sums
        .into_iter()
        .filter_map(|((c, d, f), (sum, k))| {
            let w = (sum / k as f64).clamp(0.0, 1.0);
            Assertion::new(c, d, &f, w, Source::Harvested).ok()
        })
        .collect();
    report
}
