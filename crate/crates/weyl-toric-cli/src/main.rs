use std::io::Write;
use std::panic;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use weyl_toric::lm_pairs::{self, LMPair};
use weyl_toric::presentation::{self, RaynaudMode};
use weyl_toric::report::{self, ReportOptions, SemigroupChoice, SCHEMA};
use weyl_toric::semigroups::Budget;
use weyl_toric::{Error, IVec, Int, Result};

#[derive(Parser)]
#[command(name = "weyl-toric", version, about = "Toric invariants of local-model pairs")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Residue characteristic.
    #[arg(long, global = true, default_value_t = 3)]
    p: Int,
    /// Semigroup: max, free, or file:<path> with {"generators": [...]}.
    #[arg(long, global = true, default_value = "max")]
    semigroup: String,
    /// Work budget for toric ideals: a count, or "full" for no limit.
    #[arg(long, global = true, default_value = "200000")]
    budget: String,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    out: Output,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Catalog pairs.
    Pair {
        #[command(subcommand)]
        action: PairAction,
    },
    /// Full report: cones, Hilbert basis, ideal, Lang cover, admissible set, charts.
    Analyze {
        pair: String,
        /// Skip the toric ideal.
        #[arg(long)]
        no_ideal: bool,
        /// Skip the admissible set.
        #[arg(long)]
        no_adm: bool,
        /// Character for the divisor section, comma separated; repeatable.
        #[arg(long = "chi", allow_hyphen_values = true)]
        chi: Vec<String>,
    },
    /// Hilbert basis of the chosen semigroup.
    Hilbert { pair: String },
    /// Minimal generators of the toric ideal.
    Ideal { pair: String },
    /// Lang cover: group order, ramification, fiber length, flatness.
    Lang { pair: String },
    /// Admissible set with its cover relations.
    Adm {
        pair: String,
        /// Emit Graphviz instead of JSON.
        #[arg(long)]
        dot: bool,
        /// Maximum number of elements.
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
    },
    /// Admissible set joined with the face of the orbit cone of each element.
    Facemap {
        pair: String,
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
    },
    /// Divisor multiplicities `e·⟨μ̄′, χ⟩`.
    Divisor {
        pair: String,
        #[arg(long = "chi", allow_hyphen_values = true)]
        chi: Vec<String>,
    },
    /// Chart presentations for the chosen semigroup.
    Chart { pair: String },
    /// Raynaud group scheme or its scheme of generators.
    Raynaud {
        d: usize,
        #[arg(long, value_enum, default_value_t = Mode::Group)]
        mode: Mode,
    },
}

#[derive(Subcommand)]
enum PairAction {
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Group,
    Generators,
}

fn parse_chi(items: &[String]) -> Result<Vec<IVec>> {
    items
        .iter()
        .map(|s| {
            s.split(',')
                .map(|x| x.trim().parse::<Int>().map_err(|_| Error::invalid(format!("bad character entry {x:?}"))))
                .collect()
        })
        .collect()
}

struct Ctx {
    p: Int,
    semigroup: SemigroupChoice,
    budget: Budget,
}

impl Ctx {
    fn pair(&self, name: &str) -> Result<LMPair> {
        lm_pairs::catalog(name, self.p)
    }

    fn semigroup(&self, pair: &LMPair) -> Result<weyl_toric::semigroups::AffineSemigroup> {
        report::select_semigroup(pair, &self.semigroup)
    }
}

/// What a subcommand produced: a JSON value, or verbatim text (DOT).
enum Produced {
    Value(String, Value),
    Raw(String),
}

fn run(cli: &Cli) -> Result<Produced> {
    let ctx = Ctx {
        p: cli.global.p,
        semigroup: SemigroupChoice::parse(&cli.global.semigroup)?,
        budget: Budget::parse(&cli.global.budget)?,
    };
    let done = |cmd: &str, v: Value| Ok(Produced::Value(cmd.to_string(), v));
    match &cli.command {
        Command::Pair { action: PairAction::List } => {
            let rows: Vec<Value> = lm_pairs::EXAMPLE_NAMES
                .iter()
                .map(|name| match lm_pairs::catalog(name, ctx.p) {
                    Ok(pair) => json!({ "name": name, "rank": pair.rank(), "e": pair.e, "orbit_size": pair.orbit.len() }),
                    Err(e) => json!({ "name": name, "error": e.to_string() }),
                })
                .collect();
            done("pair list", Value::Array(rows))
        }
        Command::Analyze { pair, no_ideal, no_adm, chi } => {
            let opts = ReportOptions {
                semigroup: ctx.semigroup.clone(),
                budget: ctx.budget,
                include_ideal: !no_ideal,
                include_adm: !no_adm,
                characters: parse_chi(chi)?,
                ..ReportOptions::default()
            };
            let v = report::report(pair, ctx.p, &opts);
            if let Some(kind) = v["error"]["kind"].as_str() {
                let msg = v["error"]["message"].as_str().unwrap_or_default().to_string();
                return Err(match kind {
                    "budget_exceeded" => Error::budget(msg, 0),
                    "invariant_violation" => Error::invariant(msg),
                    _ => Error::invalid(msg),
                });
            }
            done("analyze", v)
        }
        Command::Hilbert { pair } => {
            let pair = ctx.pair(pair)?;
            let s = ctx.semigroup(&pair)?;
            done("hilbert", report::hilbert_section(&pair, &s, &ctx.semigroup)?)
        }
        Command::Ideal { pair } => {
            let pair = ctx.pair(pair)?;
            let s = ctx.semigroup(&pair)?;
            done("ideal", report::ideal_section(&pair, &s, ctx.budget)?)
        }
        Command::Lang { pair } => {
            let pair = ctx.pair(pair)?;
            let s = ctx.semigroup(&pair)?;
            done("lang", report::lang_section(&pair, &s)?)
        }
        Command::Adm { pair, dot, limit } => {
            let pair = ctx.pair(pair)?;
            if *dot {
                let (aw, poset) = report::admissible(&pair, *limit)?;
                return Ok(Produced::Raw(poset.to_dot(&aw)));
            }
            done("adm", report::adm_section(&pair, *limit, false)?)
        }
        Command::Facemap { pair, limit } => {
            let pair = ctx.pair(pair)?;
            done("facemap", report::adm_section(&pair, *limit, true)?)
        }
        Command::Divisor { pair, chi } => {
            let pair = ctx.pair(pair)?;
            done("divisor", report::divisor_section(&pair, &parse_chi(chi)?)?)
        }
        Command::Chart { pair } => {
            let pair = ctx.pair(pair)?;
            let s = ctx.semigroup(&pair)?;
            done("chart", report::chart_section(&pair, &s))
        }
        Command::Raynaud { d, mode } => {
            let mode = match mode {
                Mode::Group => RaynaudMode::Group,
                Mode::Generators => RaynaudMode::Generators,
            };
            let c = presentation::raynaud_presentation(*d, mode)?;
            done("raynaud", report::raynaud_value(&c))
        }
    }
}

/// Flatten a JSON value into `path: value` lines.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => out.push(format!("{prefix}: {s}")),
        _ => out.push(format!("{prefix}: {v}")),
    }
}

fn render_text(cmd: &str, v: &Value) -> String {
    let mut lines = Vec::new();
    match cmd {
        "hilbert" => {
            for e in v["elements"].as_array().into_iter().flatten() {
                lines.push(format!("{} = {}", e["name"].as_str().unwrap_or("?"), e["vector"]));
            }
            lines.push(format!("count: {}", v["count"]));
        }
        "ideal" => {
            lines.extend(v["minimal_generators"].as_array().into_iter().flatten().filter_map(|g| g.as_str()).map(String::from));
            lines.push(format!("count: {}", v["minimal_count"]));
        }
        "chart" => {
            for c in v.as_array().into_iter().flatten() {
                match c["presentation"].as_str() {
                    Some(p) => lines.push(format!("{}: {p}", c["title"].as_str().unwrap_or(""))),
                    None => lines.push(format!("error: {}", c["error"]["message"])),
                }
            }
        }
        "raynaud" => lines.push(v["presentation"].as_str().unwrap_or_default().to_string()),
        _ => flatten("", v, &mut lines),
    }
    lines.join("\n")
}

/// Write to stdout, treating a closed pipe as success.
fn emit(text: &str) {
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.global.out;
    let outcome = panic::catch_unwind(|| run(&cli));
    match outcome {
        Ok(Ok(Produced::Raw(text))) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Ok(Ok(Produced::Value(cmd, v))) => {
            match out {
                Output::Json => {
                    let doc = json!({ "schema": SCHEMA, "command": cmd, "result": v });
                    emit(&(serde_json::to_string_pretty(&doc).expect("JSON values serialize") + "\n"));
                }
                Output::Text => emit(&(render_text(&cmd, &v) + "\n")),
            }
            ExitCode::SUCCESS
        }
        Ok(Err(e)) => {
            if out == Output::Json {
                let mut doc = report::error_value(&e);
                doc["schema"] = json!(SCHEMA);
                emit(&(serde_json::to_string_pretty(&doc).expect("JSON values serialize") + "\n"));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => {
            eprintln!("error: internal failure (panic)");
            ExitCode::from(4)
        }
    }
}
