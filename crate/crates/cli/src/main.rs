use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ssindex::operators::{
    build_witness_tree, index_estimate, magnitude_json, witness_search, BasicSequence, Operator,
    SearchConfig, WitnessTreeSpec,
};
use ssindex::rational::parse_rational;
use ssindex::spaces::{self, DualWitness, TsirelsonWitness};
use ssindex::trees::{self, FiniteTree};
use ssindex::{gallery, schreier, Classification, Error, FiniteSet, NormDescriptor, Ordinal, Q};

/// Schreier families, tree ranks, sequence-space norms and strict
/// singularity evidence for concrete operators.
#[derive(Parser, Debug)]
#[command(name = "ssindex", version)]
struct Cli {
    /// Seed for every randomised search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Human,
    Json,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Ordinals below epsilon_0.
    #[command(subcommand)]
    Ord(OrdCmd),
    /// Schreier families.
    #[command(subcommand)]
    Schreier(SchreierCmd),
    /// Finite trees and their ranks.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Sequence-space norms.
    #[command(subcommand)]
    Norm(NormCmd),
    /// Operators given by spec files.
    #[command(subcommand)]
    Op(OpCmd),
    /// Named presets.
    #[command(subcommand)]
    Gallery(GalleryCmd),
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum OrdCmd {
    /// Normalise an ordinal and classify it.
    Eval {
        #[arg(long)]
        xi: String,
    },
    /// Compare two ordinals.
    Cmp {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// The n-th term of the fundamental sequence.
    Fund {
        #[arg(long)]
        xi: String,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SchreierCmd {
    /// Membership of a set in S_xi.
    Member {
        #[arg(long)]
        xi: String,
        #[arg(long)]
        set: String,
    },
    /// Least number of consecutive S_zeta pieces covering a set.
    Blocks {
        #[arg(long, alias = "xi")]
        zeta: String,
        #[arg(long)]
        set: String,
    },
    /// Maximality of a member.
    Maximal {
        #[arg(long)]
        xi: String,
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 1)]
        guard: u32,
    },
    /// All members inside {1..n}.
    Enum {
        #[arg(long)]
        xi: String,
        #[arg(long)]
        n: u32,
    },
}

#[derive(Args, Debug, Serialize)]
struct TreeSource {
    /// Tree file, one node per line.
    #[arg(long, conflicts_with = "schreier")]
    file: Option<PathBuf>,
    /// Use the Schreier tree of S_xi restricted to {1..max}.
    #[arg(long, requires_all = ["xi", "max"])]
    schreier: bool,
    #[arg(long)]
    xi: Option<String>,
    #[arg(long)]
    max: Option<u32>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum TreeCmd {
    /// Rank of a finite tree.
    Rank(TreeSource),
    /// Derived tree.
    Derive(TreeSource),
    /// The Schreier tree of S_xi restricted to {1..max}.
    SchreierTree {
        #[arg(long)]
        xi: String,
        #[arg(long)]
        max: u32,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum NormCmd {
    /// Norm of a vector.
    Eval {
        #[arg(long)]
        norm: String,
        #[arg(long)]
        vec: String,
    },
    /// Optimiser realising a Schreier or Tsirelson norm.
    Witness {
        #[arg(long)]
        norm: String,
        #[arg(long)]
        vec: String,
    },
}

#[derive(Args, Debug, Serialize)]
struct SearchArgs {
    /// Operator spec file.
    #[arg(long)]
    spec: PathBuf,
    /// Length of the unit-vector sequence e_1..e_n.
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 512)]
    candidates: usize,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum OpCmd {
    /// Apply an operator to a vector.
    Apply {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        vec: String,
    },
    /// Search for a certificate with ratio below epsilon on a set in S_xi.
    Witness {
        #[command(flatten)]
        #[serde(flatten)]
        search: SearchArgs,
        #[arg(long)]
        xi: String,
        #[arg(long)]
        epsilon: String,
    },
    /// Truncated witness tree for the threshold 1/m.
    Tree {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        width: u32,
        /// Admit arbitrary tuples rather than increasing ones.
        #[arg(long)]
        arbitrary_tuples: bool,
    },
    /// Certificate search over a grid of ordinals and thresholds.
    Index {
        #[command(flatten)]
        #[serde(flatten)]
        search: SearchArgs,
        /// Comma-separated ascending ordinals.
        #[arg(long)]
        xi_grid: String,
        /// Comma-separated positive rationals.
        #[arg(long)]
        eps_grid: String,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum GalleryCmd {
    /// Run a preset by name.
    Run { name: String },
}

struct Output {
    result: Value,
    human: String,
    undecided: bool,
}

impl Output {
    fn plain(result: Value, human: impl Into<String>) -> Self {
        Output {
            result,
            human: human.into(),
            undecided: false,
        }
    }
}

type Res<T> = ssindex::Result<T>;

fn ordinal(s: &str) -> Res<Ordinal> {
    s.parse()
}

fn set(s: &str) -> Res<FiniteSet> {
    s.parse()
}

fn read(path: &PathBuf) -> Res<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn tree_from(src: &TreeSource) -> Res<FiniteTree> {
    match (&src.file, src.schreier, &src.xi, src.max) {
        (Some(path), false, _, _) => read(path)?.parse(),
        (None, true, Some(xi), Some(max)) => {
            Ok(trees::restricted_schreier_tree(&ordinal(xi)?, max))
        }
        _ => Err(Error::Domain(
            "give either --file <path> or --schreier --xi <ord> --max <n>".into(),
        )),
    }
}

fn tree_json(t: &FiniteTree) -> Value {
    json!({ "nodes": t.nodes().collect::<Vec<_>>(), "size": t.len() })
}

fn tsirelson_json(w: &TsirelsonWitness) -> Value {
    match w {
        TsirelsonWitness::Zero => json!("zero"),
        TsirelsonWitness::Coordinate(i) => json!({ "coordinate": i }),
        TsirelsonWitness::Combination(blocks) => json!({
            "blocks": blocks.iter().map(|b| json!({
                "lo": b.lo,
                "hi": b.hi,
                "inner": tsirelson_json(&b.inner),
            })).collect::<Vec<_>>(),
        }),
    }
}

fn grid<T>(s: &str, parse: impl Fn(&str) -> Res<T>) -> Res<Vec<T>> {
    s.split(',').map(|p| parse(p.trim())).collect()
}

fn search_setup(a: &SearchArgs, seed: u64) -> Res<(Operator, BasicSequence, SearchConfig)> {
    let t = Operator::from_spec_file(&a.spec)?;
    let seq = BasicSequence::unit_vectors(&t.domain, a.n)?;
    let config = SearchConfig {
        seed,
        random_trials: a.trials,
        candidate_budget: a.candidates,
        ..SearchConfig::default()
    };
    Ok((t, seq, config))
}

fn run(cmd: &Command, seed: u64) -> Res<Output> {
    Ok(match cmd {
        Command::Ord(c) => match c {
            OrdCmd::Eval { xi } => {
                let a = ordinal(xi)?;
                let (class, pred) = match a.classify() {
                    Classification::Zero => ("zero", None),
                    Classification::Successor(p) => ("successor", Some(p.to_string())),
                    Classification::Limit => ("limit", None),
                };
                Output::plain(
                    json!({ "value": a.to_string(), "classification": class, "predecessor": pred }),
                    format!("{a}\n{class}"),
                )
            }
            OrdCmd::Cmp { a, b } => {
                let word = match ordinal(a)?.cmp(&ordinal(b)?) {
                    std::cmp::Ordering::Less => "less",
                    std::cmp::Ordering::Equal => "equal",
                    std::cmp::Ordering::Greater => "greater",
                };
                Output::plain(json!(word), word)
            }
            OrdCmd::Fund { xi, n } => {
                let v = ordinal(xi)?.fundamental_sequence(*n)?;
                Output::plain(json!(v.to_string()), v.to_string())
            }
        },
        Command::Schreier(c) => match c {
            SchreierCmd::Member { xi, set: s } => {
                let v = schreier::member(&ordinal(xi)?, &set(s)?);
                Output::plain(json!(v), v.to_string())
            }
            SchreierCmd::Blocks { zeta, set: s } => {
                let v = schreier::min_blocks(&ordinal(zeta)?, &set(s)?)?;
                Output::plain(json!(v), v.to_string())
            }
            SchreierCmd::Maximal { xi, set: s, guard } => {
                let v = schreier::is_maximal_with_guard(&ordinal(xi)?, &set(s)?, *guard)?;
                Output::plain(json!(v), v.to_string())
            }
            SchreierCmd::Enum { xi, n } => {
                let sets = schreier::enumerate(&ordinal(xi)?, *n);
                let human: Vec<String> = sets.iter().map(FiniteSet::to_string).collect();
                Output::plain(
                    json!({ "count": sets.len(), "sets": human }),
                    human.join("\n"),
                )
            }
        },
        Command::Tree(c) => match c {
            TreeCmd::Rank(src) => {
                let r = tree_from(src)?.rank();
                Output::plain(json!(r), r.to_string())
            }
            TreeCmd::Derive(src) => {
                let d = tree_from(src)?.derivative();
                Output::plain(tree_json(&d), d.to_text().trim_end().to_string())
            }
            TreeCmd::SchreierTree { xi, max } => {
                let t = trees::restricted_schreier_tree(&ordinal(xi)?, *max);
                Output::plain(tree_json(&t), t.to_text().trim_end().to_string())
            }
        },
        Command::Norm(c) => match c {
            NormCmd::Eval { norm, vec } => {
                let d: NormDescriptor = norm.parse()?;
                let m = spaces::norm(&d, &vec.parse()?);
                Output::plain(magnitude_json(&m), m.to_string())
            }
            NormCmd::Witness { norm, vec } => {
                let d: NormDescriptor = norm.parse()?;
                let x = vec.parse()?;
                let value = spaces::norm_exact(&d, &x)?;
                let functional = spaces::norming_functional(&d, &x)?;
                let (w, human) = match spaces::dual_witness(&d, &x)? {
                    DualWitness::Schreier(f) => (json!({ "F": f.as_slice() }), f.to_string()),
                    DualWitness::Tsirelson(t) => {
                        let j = tsirelson_json(&t);
                        let h = j.to_string();
                        (json!({ "tree": j }), h)
                    }
                };
                Output::plain(
                    json!({
                        "norm": value.to_string(),
                        "witness": w,
                        "functional": functional.to_string(),
                    }),
                    format!("{value}\n{human}"),
                )
            }
        },
        Command::Op(c) => match c {
            OpCmd::Apply { spec, vec } => {
                let t = Operator::from_spec_file(spec)?;
                let y = t.apply(&vec.parse()?)?;
                Output::plain(json!(y.to_string()), y.to_string())
            }
            OpCmd::Witness {
                search,
                xi,
                epsilon,
            } => {
                let (t, seq, config) = search_setup(search, seed)?;
                let out =
                    witness_search(&t, &ordinal(xi)?, &parse_rational(epsilon)?, &seq, &config)?;
                let human = match &out.certificate {
                    Some(c) => format!("certificate F = {} ratio = {}", c.f, c.ratio),
                    None => format!(
                        "no certificate; best ratio {} on {}",
                        out.best.ratio, out.best.f
                    ),
                };
                Output::plain(out.to_json(), human)
            }
            OpCmd::Tree {
                spec,
                m,
                n,
                depth,
                width,
                arbitrary_tuples,
            } => {
                let operator = Operator::from_spec_file(spec)?;
                let sequence = BasicSequence::unit_vectors(&operator.domain, *n)?;
                let w = build_witness_tree(&WitnessTreeSpec {
                    operator,
                    m: *m,
                    sequence,
                    depth_bound: *depth,
                    width_bound: *width,
                    arbitrary_tuples: *arbitrary_tuples,
                })?;
                Output {
                    result: w.to_json(),
                    human: format!(
                        "{}verdict {}\nrank {}",
                        w.truncation.to_text(),
                        w.verdict.as_str(),
                        w.rank
                    ),
                    undecided: w.verdict == trees::Verdict::HitBound,
                }
            }
            OpCmd::Index {
                search,
                xi_grid,
                eps_grid,
            } => {
                let (t, seq, config) = search_setup(search, seed)?;
                let xs = grid(xi_grid, ordinal)?;
                let es: Vec<Q> = grid(eps_grid, parse_rational)?;
                let report = index_estimate(&t, &xs, &es, &seq, &config)?;
                let human = match &report.bracket {
                    Some(b) => format!("bracket {b}"),
                    None => "no bracket on this grid".to_string(),
                };
                Output::plain(report.to_json(), human)
            }
        },
        Command::Gallery(GalleryCmd::Run { name }) => {
            let r = gallery::run(name, seed)?;
            let human = match &r.report.bracket {
                Some(b) => format!(
                    "{name}: bracket {b}, {} certificates verified",
                    r.certificates_verified
                ),
                None => format!(
                    "{name}: no bracket, {} certificates verified",
                    r.certificates_verified
                ),
            };
            Output::plain(r.to_json(), human)
        }
    })
}

fn command_name(cmd: &Command) -> String {
    let v = serde_json::to_value(cmd).unwrap_or(Value::Null);
    let mut parts = Vec::new();
    let mut cur = &v;
    while parts.len() < 2 {
        match cur {
            Value::Object(m) if m.len() == 1 => {
                let (k, inner) = m.iter().next().unwrap();
                parts.push(k.clone());
                cur = inner;
            }
            _ => break,
        }
    }
    parts.join(" ")
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::Domain(_) => "domain",
        Error::Undecided(_) => "undecided",
        Error::Io { .. } => "io",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let config = json!({
        "command": command_name(&cli.command),
        "arguments": cli.command,
        "seed": cli.seed,
        "threads": cli.threads,
        "format": cli.format,
    });
    let outcome = match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Domain(format!("cannot start {n} threads: {e}")))
            .and_then(|pool| pool.install(|| run(&cli.command, cli.seed))),
        None => run(&cli.command, cli.seed),
    };
    let code = match &outcome {
        Ok(o) if o.undecided => 2,
        Ok(_) => 0,
        Err(Error::Undecided(_)) => 2,
        Err(_) => 1,
    };
    match cli.format {
        Format::Json => {
            let body = match &outcome {
                Ok(o) => json!({ "config": config, "result": o.result }),
                Err(e) => json!({
                    "config": config,
                    "error": { "kind": error_kind(e), "message": e.to_string() },
                }),
            };
            println!("{}", serde_json::to_string_pretty(&body).expect("json"));
        }
        Format::Human => {
            eprintln!("config: {config}");
            match &outcome {
                Ok(o) => println!("{}", o.human),
                Err(e) => eprintln!("error: {e}"),
            }
        }
    }
    ExitCode::from(code)
}
