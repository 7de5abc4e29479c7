//! `eszk` command-line front end.
//!
//! Every subcommand writes exactly one report to standard output (JSON by
//! default, `key: value` lines with `--format text`) and diagnostics to
//! standard error. Exit codes: 0 success, 1 negative answer for predicate
//! commands, 2 usage or input errors, 3 capability limits.

pub mod input;
pub mod store;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use eszk_core::{
    classify, convex_permutations, count_convex_subgons, f_bounds, find_convex_subgon, grow, is_convex,
    is_pre_convex, search_extremal, sub_polygon, verify_certificate, CountMethod, CountOptions, Polygon,
    SearchConfig,
};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::input::{parse_polygon, InputFormat, ParseError};
use crate::store::{resolve_path, Store, StoreError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPABILITY: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "eszk", version, about = "Convexity of ordered lattice polygons")]
struct Cli {
    /// Report format on standard output.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Also draw the (input or resulting) polygon and its hull to this SVG file.
    #[arg(long, global = true, value_name = "OUT.svg")]
    svg: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Strictness, ordinariness and dimension.
    Classify { file: PathBuf },
    /// Convexity verdict; exit 1 when not convex.
    Check { file: PathBuf },
    /// Whether some ordering of the vertices is convex.
    PreConvex { file: PathBuf },
    /// Every vertex ordering that is convex (n <= 8).
    Permutations { file: PathBuf },
    /// Count convex sub-k-gons exhaustively.
    CountSubgons {
        file: PathBuf,
        #[arg(short)]
        k: usize,
        /// Decide each sub-polygon with the definition-level oracle.
        #[arg(long)]
        oracle: bool,
        /// Include the convex index subsets in the report.
        #[arg(long)]
        list: bool,
    },
    /// Lexicographically least convex sub-k-gon; exit 1 when there is none.
    FindSubgon {
        file: PathBuf,
        #[arg(short)]
        k: usize,
    },
    /// Certify that no sub-k-gon is convex; exit 1 when one is.
    VerifyCert {
        file: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long)]
        store: Option<PathBuf>,
    },
    /// Known bounds on F(k).
    Bounds {
        #[arg(short)]
        k: usize,
        #[arg(long)]
        store: Option<PathBuf>,
    },
    /// Annealing search for n-gons with few convex sub-k-gons.
    Search {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 5000)]
        iters: u64,
        #[arg(long, default_value_t = 200)]
        restarts: u64,
        #[arg(long = "box", default_value_t = 50)]
        box_bound: i64,
        #[arg(long, default_value_t = 2.0)]
        temp: f64,
        #[arg(long, default_value_t = 0.999)]
        decay: f64,
        #[arg(long, default_value_t = 5)]
        radius: i64,
        /// Start the first restart from this polygon.
        #[arg(long, value_name = "FILE")]
        init: Option<PathBuf>,
        #[arg(long)]
        store: Option<PathBuf>,
        /// Worker threads for the restarts; results do not depend on it.
        #[arg(long, default_value_t = 1)]
        parallel: usize,
    },
    /// Extend a certificate by one vertex; exit 1 when no extension is found.
    Grow {
        file: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 5000)]
        iters: u64,
        #[arg(long = "box", default_value_t = 50)]
        box_bound: i64,
        #[arg(long)]
        store: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Check { .. } => "check",
            Command::PreConvex { .. } => "pre-convex",
            Command::Permutations { .. } => "permutations",
            Command::CountSubgons { .. } => "count-subgons",
            Command::FindSubgon { .. } => "find-subgon",
            Command::VerifyCert { .. } => "verify-cert",
            Command::Bounds { .. } => "bounds",
            Command::Search { .. } => "search",
            Command::Grow { .. } => "grow",
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Core(#[from] eszk_core::Error),
    #[error(transparent)]
    Store(#[from] StoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(eszk_core::Error::Capability(_) | eszk_core::Error::Exhausted { .. }) => {
                EXIT_CAPABILITY
            }
            CliError::Store(StoreError::Core(eszk_core::Error::Capability(_))) => EXIT_CAPABILITY,
            _ => EXIT_USAGE,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Read { .. } | CliError::Write { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Store(_) => "store",
            CliError::Core(e) => match e {
                eszk_core::Error::CoordinateBound { .. } | eszk_core::Error::Input(_) => "input",
                eszk_core::Error::Precondition(_) => "precondition",
                eszk_core::Error::Exhausted { .. } => "exhausted",
                eszk_core::Error::Capability(_) => "capability",
            },
        }
    }
}

/// What a subcommand produced, before timing and formatting.
struct Outcome {
    digest: String,
    result: Value,
    exit: i32,
    drawing: Option<(Polygon, Option<Vec<usize>>)>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let mut s = String::with_capacity(7 + 64);
    s.push_str("sha256:");
    for b in hash {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

fn load_polygon(path: &Path) -> Result<(Polygon, String), CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let polygon = parse_polygon(&bytes, InputFormat::from_path(path)).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    Ok((polygon, sha256_hex(&bytes)))
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn store_certificate(flag: Option<&Path>, cert: &eszk_core::Certificate) -> Result<Value, CliError> {
    if !cert.verified {
        return Ok(Value::Null);
    }
    let path = resolve_path(flag);
    let mut store = Store::load(&path)?;
    if store.insert(cert)? {
        store.save(&path)?;
    }
    Ok(json!(path.display().to_string()))
}

fn run(command: &Command) -> Result<Outcome, CliError> {
    let plain = |digest: String, result: Value, drawing: Option<Polygon>| Outcome {
        digest,
        result,
        exit: EXIT_OK,
        drawing: drawing.map(|p| (p, None)),
    };
    match command {
        Command::Classify { file } => {
            let (p, digest) = load_polygon(file)?;
            Ok(plain(digest, json!(classify(&p)), Some(p)))
        }
        Command::Check { file } => {
            let (p, digest) = load_polygon(file)?;
            let verdict = is_convex(&p);
            let exit = if verdict.convex { EXIT_OK } else { EXIT_NEGATIVE };
            let result = json!({
                "convex": verdict.convex,
                "method": verdict.method,
                "witness": verdict.witness,
                "explanation": verdict.witness.as_ref().map(|w| w.to_string()),
            });
            Ok(Outcome {
                digest,
                result,
                exit,
                drawing: Some((p, None)),
            })
        }
        Command::PreConvex { file } => {
            let (p, digest) = load_polygon(file)?;
            let pre = is_pre_convex(&p)?;
            Ok(plain(digest, json!({ "pre_convex": pre }), Some(p)))
        }
        Command::Permutations { file } => {
            let (p, digest) = load_polygon(file)?;
            let perms = convex_permutations(&p)?;
            let result = json!({ "count": perms.len(), "total": factorial(p.len()), "permutations": perms });
            Ok(plain(digest, result, Some(p)))
        }
        Command::CountSubgons {
            file,
            k,
            oracle,
            list,
        } => {
            let (p, digest) = load_polygon(file)?;
            let method = if *oracle {
                CountMethod::Oracle
            } else {
                CountMethod::Dispatch
            };
            let counted = count_convex_subgons(
                &p,
                *k,
                &CountOptions {
                    method,
                    collect: *list,
                    ..Default::default()
                },
            )?;
            Ok(plain(digest, json!(counted), Some(p)))
        }
        Command::FindSubgon { file, k } => {
            let (p, digest) = load_polygon(file)?;
            let found = find_convex_subgon(&p, *k)?;
            let vertices = match &found {
                Some(s) => json!(sub_polygon(&p, s)?),
                None => Value::Null,
            };
            let result = json!({ "k": k, "found": found.is_some(), "subset": found, "vertices": vertices });
            let exit = if found.is_some() { EXIT_OK } else { EXIT_NEGATIVE };
            let highlight = found.map(|s| s.indices().to_vec());
            Ok(Outcome {
                digest,
                result,
                exit,
                drawing: Some((p, highlight)),
            })
        }
        Command::VerifyCert { file, k, store } => {
            let (p, digest) = load_polygon(file)?;
            let cert = verify_certificate(&p, *k)?;
            let stored = store_certificate(store.as_deref(), &cert)?;
            let mut result = json!(cert);
            result["statement"] = if cert.verified {
                json!(format!("F({}) >= {}", cert.k, cert.claimed_bound))
            } else {
                Value::Null
            };
            result["store"] = stored;
            let exit = if cert.verified { EXIT_OK } else { EXIT_NEGATIVE };
            Ok(Outcome {
                digest,
                result,
                exit,
                drawing: Some((p, None)),
            })
        }
        Command::Bounds { k, store } => {
            let path = resolve_path(store.as_deref());
            let certs = Store::load(&path)?.for_k(*k);
            let record = f_bounds(*k, &certs)?;
            let digest = sha256_hex(format!("bounds k={k} certificates={}", certs.len()).as_bytes());
            Ok(plain(digest, json!(record), None))
        }
        Command::Search {
            n,
            k,
            seed,
            iters,
            restarts,
            box_bound,
            temp,
            decay,
            radius,
            init,
            store,
            parallel,
        } => {
            let initial = init.as_deref().map(load_polygon).transpose()?.map(|(p, _)| p);
            let cfg = SearchConfig {
                n: *n,
                k: *k,
                seed: *seed,
                box_bound: *box_bound,
                max_iterations: *iters,
                restarts: *restarts,
                initial_temperature: *temp,
                decay: *decay,
                radius: *radius,
                initial,
            };
            let out = search_extremal(&cfg, *parallel)?;
            let stored = match &out.certificate {
                Some(c) => store_certificate(store.as_deref(), c)?,
                None => Value::Null,
            };
            let digest = sha256_hex(serde_json::to_string(&cfg).expect("plain data").as_bytes());
            let result = json!({
                "config": cfg,
                "best": out.best,
                "objective": out.objective,
                "restart": out.restart,
                "zero_restarts": out.zero_restarts,
                "certificate": out.certificate,
                "store": stored,
            });
            Ok(plain(digest, result, Some(out.best)))
        }
        Command::Grow {
            file,
            k,
            seed,
            iters,
            box_bound,
            store,
        } => {
            let (p, digest) = load_polygon(file)?;
            let cfg = SearchConfig {
                max_iterations: *iters,
                box_bound: *box_bound,
                ..SearchConfig::new(p.len(), *k, *seed)
            };
            let grown = grow(&p, &cfg)?;
            let (certificate, stored) = match &grown {
                Some(g) => {
                    let cert = verify_certificate(g, *k)?;
                    let stored = store_certificate(store.as_deref(), &cert)?;
                    (Some(cert), stored)
                }
                None => (None, Value::Null),
            };
            let exit = if grown.is_some() { EXIT_OK } else { EXIT_NEGATIVE };
            let result = json!({
                "grown": grown.is_some(),
                "polygon": grown,
                "certificate": certificate,
                "store": stored,
            });
            let drawing = Some((grown.unwrap_or(p), None));
            Ok(Outcome {
                digest,
                result,
                exit,
                drawing,
            })
        }
    }
}

fn render_text(report: &Value) -> String {
    let mut s = String::new();
    if let Value::Object(map) = report {
        for (key, value) in map {
            match value {
                Value::Object(inner) => {
                    for (k2, v2) in inner {
                        s.push_str(&format!("{k2}: {}\n", scalar(v2)));
                    }
                }
                v => s.push_str(&format!("{key}: {}\n", scalar(v))),
            }
        }
    }
    s
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Run the tool on `args` (including the program name) and return the exit code.
pub fn execute<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };

    let started = Instant::now();
    let command = cli.command.name();
    let (report, exit) = match run(&cli.command).and_then(|outcome| {
        if let (Some(path), Some((p, highlight))) = (&cli.svg, &outcome.drawing) {
            std::fs::write(path, svg::render(p, highlight.as_deref())).map_err(|source| CliError::Write {
                path: path.clone(),
                source,
            })?;
        }
        Ok(outcome)
    }) {
        Ok(outcome) => {
            let timing = started.elapsed().as_secs_f64() * 1e3;
            let report = json!({
                "command": command,
                "input_digest": outcome.digest,
                "result": outcome.result,
                "timing_ms": timing,
            });
            (report, outcome.exit)
        }
        Err(e) => {
            let _ = writeln!(err, "eszk {command}: {e}");
            let report = json!({
                "command": command,
                "error": { "kind": e.kind(), "message": e.to_string() },
            });
            (report, e.exit_code())
        }
    };

    let _ = match cli.format {
        OutputFormat::Json => writeln!(out, "{report}"),
        OutputFormat::Text => write!(out, "{}", render_text(&report)),
    };
    exit
}
