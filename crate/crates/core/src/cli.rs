//! `sensegraph` command-line interface.
//!
//! Exit codes: 0 on success, 1 on domain errors, 2 on usage or parse errors.
//! Domain errors are reported as a single `error: <code>: <detail>` line.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::acquisition::{harvest_samples, load_concepts, provider_from_env, MaskTemplate};
use crate::error::{Error, Result};
use crate::hierarchy::induce;
use crate::metonymy::{resolve_metonymy, Application, Resolution};
use crate::model::{ConceptSense, DimensionTag};
use crate::similarity::{c_similarity, d_similarity};
use crate::store::{assertion_to_json, load_jsonl, save_jsonl, AssertionStore, Snapshot};

pub const DEFAULT_STORE: &str = "sensegraph.jsonl";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    Dot,
}

/// Validated settings shared by the subcommands.
#[derive(Clone, Debug, PartialEq)]
pub struct CliConfig {
    pub store_path: PathBuf,
    pub theta: f64,
    pub dims: Vec<DimensionTag>,
    pub output_format: OutputFormat,
}

impl CliConfig {
    pub fn new(store_path: PathBuf, theta: f64, dims: Vec<DimensionTag>, output_format: OutputFormat) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidTheta(theta));
        }
        if dims.is_empty() {
            return Err(Error::EmptyDimensionList);
        }
        Ok(CliConfig {
            store_path,
            theta,
            dims,
            output_format,
        })
    }
}

#[derive(Parser, Debug)]
#[command(name = "sensegraph", version, about = "Ontology induction, concept similarity and metonymy resolution")]
struct Cli {
    /// Assertion store (JSONL).
    #[arg(long, global = true, default_value = DEFAULT_STORE)]
    store: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Merge JSONL files into the store.
    Ingest {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Induce the type graph.
    Induce {
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        #[arg(long, value_enum, default_value = "text")]
        out: OutputFormat,
    },
    /// Export the induced type graph.
    Export {
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
    },
    /// Concept similarity between two senses.
    Sim {
        c1: String,
        c2: String,
        /// Comma-separated dimensions (default: all).
        #[arg(long, value_delimiter = ',')]
        dims: Vec<String>,
        /// Dimension weights, e.g. `HasProp=2,AgentOf=1`.
        #[arg(long, value_delimiter = ',')]
        weights: Vec<String>,
        #[arg(long)]
        per_dim: bool,
    },
    /// Type-check an application and resolve metonymy, e.g. `WANT(omelet#1,beer#1)`.
    Resolve {
        application: String,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
    },
    /// Harvest assertions from masked completions and print them as JSONL.
    Acquire {
        #[arg(long)]
        templates: PathBuf,
        #[arg(long)]
        concepts: PathBuf,
        /// Replay canned completions from this directory.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        /// Also merge the harvested assertions into the store.
        #[arg(long)]
        ingest: bool,
    },
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return e.exit_code();
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let detail = e.to_string().replace('\n', " ");
            let _ = writeln!(err, "error: {}: {}", e.code(), detail);
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}

fn open_store(path: &Path) -> Result<Snapshot> {
    if path.exists() {
        load_jsonl(path)
    } else {
        Ok(AssertionStore::new().snapshot())
    }
}

fn parse_sense(token: &str) -> Result<ConceptSense> {
    token.parse()
}

fn parse_dims(raw: &[String]) -> Result<Vec<DimensionTag>> {
    if raw.is_empty() {
        return Ok(DimensionTag::ALL.to_vec());
    }
    let mut dims = Vec::new();
    for d in raw {
        let tag: DimensionTag = d.trim().parse()?;
        if !dims.contains(&tag) {
            dims.push(tag);
        }
    }
    Ok(dims)
}

fn parse_weights(raw: &[String]) -> Result<Option<BTreeMap<DimensionTag, f64>>> {
    if raw.is_empty() {
        return Ok(None);
    }
    let mut map = BTreeMap::new();
    for item in raw {
        let (d, w) = item
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("weight `{item}` is not DIM=VALUE")))?;
        let tag: DimensionTag = d.trim().parse()?;
        let w: f64 = w
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("weight `{item}` is not numeric")))?;
        map.insert(tag, w);
    }
    Ok(Some(map))
}

fn gerund(verb: &str) -> String {
    let v = verb.to_lowercase();
    match v.strip_suffix('e') {
        Some(stem) if !stem.ends_with('e') && !stem.is_empty() => format!("{stem}ing"),
        _ => format!("{v}ing"),
    }
}

fn io_out(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let store_path = cli.store;
    match cli.command {
        Command::Ingest { files } => {
            let mut store = AssertionStore::from_snapshot(&open_store(&store_path)?);
            let mut records = 0;
            for f in &files {
                let snap = load_jsonl(f)?;
                records += snap.len() + snap.signatures().count();
                store.extend(&snap);
            }
            let snap = store.snapshot();
            save_jsonl(&snap, &store_path)?;
            writeln!(
                out,
                "ingested {} records from {} files; store has {} assertions and {} signatures",
                records,
                files.len(),
                snap.len(),
                snap.signatures().count()
            )
            .map_err(io_out)?;
        }
        Command::Induce { theta, out: format } => {
            let cfg = CliConfig::new(store_path, theta, DimensionTag::ALL.to_vec(), format)?;
            let g = induce(&open_store(&cfg.store_path)?, cfg.theta)?;
            let text = match cfg.output_format {
                OutputFormat::Text => g.to_text(),
                OutputFormat::Dot => g.export_dot(),
                OutputFormat::Json => {
                    let mut s = serde_json::to_string_pretty(&g.to_json()).expect("graph json");
                    s.push('\n');
                    s
                }
            };
            out.write_all(text.as_bytes()).map_err(io_out)?;
        }
        Command::Export { format: ExportFormat::Dot, theta } => {
            let cfg = CliConfig::new(store_path, theta, DimensionTag::ALL.to_vec(), OutputFormat::Dot)?;
            let g = induce(&open_store(&cfg.store_path)?, cfg.theta)?;
            out.write_all(g.export_dot().as_bytes()).map_err(io_out)?;
        }
        Command::Sim {
            c1,
            c2,
            dims,
            weights,
            per_dim,
        } => {
            let (c1, c2) = (parse_sense(&c1)?, parse_sense(&c2)?);
            let cfg = CliConfig::new(store_path, 0.0, parse_dims(&dims)?, OutputFormat::Text)?;
            let weights = parse_weights(&weights)?;
            let snap = open_store(&cfg.store_path)?;
            if per_dim {
                for d in &cfg.dims {
                    writeln!(out, "{} {:.6}", d, d_similarity(&c1, &c2, *d, &snap)).map_err(io_out)?;
                }
            }
            let score = c_similarity(&c1, &c2, &cfg.dims, weights.as_ref(), &snap)?;
            writeln!(out, "similarity {score:.6}").map_err(io_out)?;
        }
        Command::Resolve { application, theta } => {
            let app: Application = application.parse()?;
            let snap = open_store(&store_path)?;
            let g = induce(&snap, theta)?;
            match resolve_metonymy(&app, &snap, &g)? {
                Resolution::WellTyped(a) => {
                    writeln!(out, "well-typed {a}").map_err(io_out)?;
                }
                Resolution::Coerced(reading) => {
                    for c in &reading.coercions {
                        writeln!(out, "coercion {} (position {})", c.bridge, c.position).map_err(io_out)?;
                    }
                    writeln!(out, "rewritten {}", reading.rewritten).map_err(io_out)?;
                    for c in &reading.coercions {
                        writeln!(
                            out,
                            "reading the {} {} the {}",
                            c.bridge.arg1().lemma(),
                            gerund(c.bridge.relation()),
                            c.bridge.arg2().lemma()
                        )
                        .map_err(io_out)?;
                    }
                }
            }
        }
        Command::Acquire {
            templates,
            concepts,
            fixtures,
            samples,
            ingest,
        } => {
            let templates = MaskTemplate::load_jsonl(&templates)?;
            let concepts = load_concepts(&concepts)?;
            let provider = provider_from_env(fixtures.as_deref())?;
            let report = harvest_samples(provider.as_ref(), &concepts, &templates, samples);
            for a in &report.assertions {
                writeln!(out, "{}", assertion_to_json(a)).map_err(io_out)?;
            }
            if ingest {
                let mut store = AssertionStore::from_snapshot(&open_store(&store_path)?);
                for a in &report.assertions {
                    store.add_assertion(a.clone());
                }
                save_jsonl(&store.snapshot(), &store_path)?;
            }
            if !report.is_complete() {
                for f in &report.failures {
                    let _ = writeln!(
                        err,
                        "error: provider_error: {} / `{}`: {}",
                        f.concept,
                        f.template,
                        f.message.replace('\n', " ")
                    );
                }
                return Ok(1);
            }
        }
    }
    Ok(0)
}
