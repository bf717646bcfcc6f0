use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use double_kruskal::collapse::{translate, translate_sum};
use double_kruskal::forest::{covering_exists, from_json, to_dot, to_json_value, DoubleForest};
use double_kruskal::order::compare;
use double_kruskal::ot::{check_ot, enumerate_ot, EnumerateOptions};
use double_kruskal::term::{parse, Term};
use double_kruskal::verify::{longest_controlled_bad_sequence, run_suite, Domain, Limits, Params, Suite};

const USAGE: u8 = 2;
const DOMAIN: u8 = 1;
const VIOLATIONS: u8 = 3;

#[derive(Parser)]
#[command(
    name = "double-kruskal",
    version,
    about = "Ordinal terms, monotone double forests and the reduction between them"
)]
struct Cli {
    /// Structured output.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for verification.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Stop with an error after this many checked instances.
    #[arg(long, global = true, value_name = "N")]
    max_instances: Option<u64>,
    /// Wall-time budget in seconds.
    #[arg(long, global = true, value_name = "SECS")]
    time_budget: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a term and print its canonical form.
    Parse { term: String },
    /// Compare two terms: LT, EQ or GT.
    Compare { a: String, b: String },
    /// Check membership in OT, naming the broken rule on failure.
    Validate { term: String },
    /// List the ordinal terms within the bounds, one per line, in ≺ order.
    Enumerate {
        #[arg(long, value_name = "K")]
        max_sub: u32,
        #[arg(long, value_name = "N")]
        max_norm: usize,
        /// Only terms of order 0.
        #[arg(long)]
        order0: bool,
    },
    /// Translate a principal term to its monotone double tree.
    Translate {
        term: String,
        /// Graphviz output instead of JSON.
        #[arg(long)]
        dot: bool,
        /// Translate a nonzero order-0 term to a double tree via ρ.
        #[arg(long)]
        sum: bool,
    },
    /// Search for a covering of the first forest into the second.
    Cover { a: PathBuf, b: PathBuf },
    /// Check a forest file against the axioms.
    ValidateForest { file: PathBuf },
    /// Run a verification suite; the JSON report goes to stdout.
    Verify(VerifyArgs),
    /// Longest bad sequence under the norm control `||q_i|| ≤ c·(i+1)`.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_name = "ID", required_unless_present = "list")]
    suite: Option<Suite>,
    /// Print the suite ids and exit.
    #[arg(long)]
    list: bool,
    #[arg(long, value_name = "K")]
    max_sub: Option<u32>,
    #[arg(long, value_name = "N")]
    max_norm: Option<usize>,
    #[arg(long, value_name = "M")]
    max_nodes: Option<usize>,
    /// Random sample size for transitivity checks.
    #[arg(long, value_name = "N")]
    sample: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    DoubleTrees,
    Trees,
    OtTerms,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_name = "C")]
    c: usize,
    #[arg(long, value_enum, default_value = "double-trees")]
    domain: DomainArg,
    /// Largest subscript for ot-terms.
    #[arg(long, value_name = "K", default_value_t = 1)]
    max_sub: u32,
    /// Only forests of at most this height.
    #[arg(long, value_name = "H")]
    height_cap: Option<usize>,
    #[arg(long, value_name = "L", default_value_t = 8)]
    length_cap: usize,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    fn domain(e: impl ToString) -> Failure {
        Failure::Domain(e.to_string())
    }
}

type Out<'a> = BufWriter<io::StdoutLock<'a>>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    let mut out = BufWriter::new(io::stdout().lock());
    let code = match run(&cli, &mut out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            USAGE
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            DOMAIN
        }
    };
    // A closed pipe is not worth reporting.
    let _ = out.flush();
    ExitCode::from(code)
}

fn term(text: &str) -> Result<Term, Failure> {
    parse(text).map_err(|e| Failure::Domain(format!("{text:?}: {e}")))
}

fn forest(path: &Path) -> Result<(DoubleForest, Vec<String>), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    from_json(&text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn limits(cli: &Cli) -> Result<Limits, Failure> {
    let mut l = Limits { jobs: cli.jobs, ..Limits::default() };
    if let Some(n) = cli.max_instances {
        l.max_instances = n;
    }
    if let Some(secs) = cli.time_budget {
        l.time_budget =
            Some(Duration::try_from_secs_f64(secs).map_err(|_| Failure::Usage(format!("bad time budget {secs}")))?);
    }
    if cli.jobs == Some(0) {
        return Err(Failure::Usage("--jobs must be at least 1".into()));
    }
    Ok(l)
}

fn line(out: &mut Out, text: impl std::fmt::Display) {
    let _ = writeln!(out, "{text}");
}

fn run(cli: &Cli, out: &mut Out) -> Result<u8, Failure> {
    match &cli.command {
        Command::Parse { term: text } => {
            let a = term(text)?;
            if cli.json {
                let v = json!({
                    "term": a.to_string(),
                    "order": a.order().to_string(),
                    "norm": a.norm(),
                    "principal": a.is_principal(),
                });
                line(out, v);
            } else {
                line(out, &a);
            }
        }
        Command::Compare { a, b } => {
            let word = match compare(&term(a)?, &term(b)?) {
                std::cmp::Ordering::Less => "LT",
                std::cmp::Ordering::Equal => "EQ",
                std::cmp::Ordering::Greater => "GT",
            };
            line(out, if cli.json { json!({ "result": word }).to_string() } else { word.to_string() });
        }
        Command::Validate { term: text } => {
            let a = term(text)?;
            let verdict = check_ot(&a);
            if cli.json {
                let v = match &verdict {
                    Ok(()) => json!({ "term": a.to_string(), "ot": true }),
                    Err(e) => json!({
                        "term": a.to_string(),
                        "ot": false,
                        "clause": e.clause.to_string(),
                        "at": e.at.to_string(),
                        "detail": e.detail,
                    }),
                };
                line(out, v);
            } else {
                match &verdict {
                    Ok(()) => line(out, "OT"),
                    Err(e) => line(out, format_args!("NOT-OT {e}")),
                }
            }
            if verdict.is_err() {
                return Ok(DOMAIN);
            }
        }
        Command::Enumerate { max_sub, max_norm, order0 } => {
            let opts = EnumerateOptions::new(*max_sub, *max_norm).order_zero_only(*order0);
            for a in enumerate_ot(&opts).map_err(Failure::domain)? {
                let text = a.to_string();
                let ok = if cli.json { writeln!(out, "{}", Value::String(text)) } else { writeln!(out, "{text}") };
                if ok.is_err() {
                    break;
                }
            }
        }
        Command::Translate { term: text, dot, sum } => {
            let a = term(text)?;
            let t = if *sum { translate_sum(&a) } else { translate(&a) }.map_err(Failure::domain)?;
            if *dot {
                let _ = write!(out, "{}", to_dot(&t, None));
            } else {
                line(out, serde_json::to_string_pretty(&to_json_value(&t)).expect("forest JSON serializes"));
            }
        }
        Command::Cover { a, b } => {
            let ((s, s_names), (t, t_names)) = (forest(a)?, forest(b)?);
            let found = covering_exists(&s, &t);
            if cli.json {
                let map = found.as_ref().map(|w| {
                    let pairs = w.map.iter().enumerate().map(|(x, &y)| (s_names[x].clone(), json!(t_names[y])));
                    Value::Object(pairs.collect())
                });
                line(out, json!({ "covering": map }));
            } else {
                match found {
                    Some(w) => w
                        .map
                        .iter()
                        .enumerate()
                        .for_each(|(x, &y)| line(out, format_args!("{} -> {}", s_names[x], t_names[y]))),
                    None => line(out, "NONE"),
                }
            }
        }
        Command::ValidateForest { file } => {
            let text = fs::read_to_string(file).map_err(|e| Failure::Domain(format!("{}: {e}", file.display())))?;
            match from_json(&text) {
                Ok((t, _)) => {
                    let facts = json!({
                        "valid": true,
                        "nodes": t.len(),
                        "roots": t.roots().len(),
                        "double_tree": t.is_double_tree(),
                        "height": t.height().ok(),
                        "m2f_height": t.m2f_height().ok(),
                    });
                    if cli.json {
                        line(out, facts);
                    } else {
                        line(
                            out,
                            format_args!(
                                "VALID nodes={} roots={} double-tree={} height={} m2f-height={}",
                                facts["nodes"],
                                facts["roots"],
                                facts["double_tree"],
                                facts["height"],
                                facts["m2f_height"]
                            ),
                        );
                    }
                }
                Err(e) => {
                    if cli.json {
                        line(out, json!({ "valid": false, "error": e.to_string() }));
                    } else {
                        line(out, format_args!("INVALID {e}"));
                    }
                    return Ok(DOMAIN);
                }
            }
        }
        Command::Verify(args) => return verify(cli, args, out),
        Command::Experiment(args) => return experiment(cli, args, out),
    }
    Ok(0)
}

fn verify(cli: &Cli, args: &VerifyArgs, out: &mut Out) -> Result<u8, Failure> {
    if args.list {
        for s in Suite::ALL {
            line(out, format_args!("{:<20} {}", s.id(), s.description()));
        }
        return Ok(0);
    }
    let suite = args.suite.expect("clap requires --suite without --list");
    let mut p = suite.default_params();
    p = Params {
        max_subscript: args.max_sub.unwrap_or(p.max_subscript),
        max_norm: args.max_norm.unwrap_or(p.max_norm),
        max_nodes: args.max_nodes.unwrap_or(p.max_nodes),
        sample: args.sample.unwrap_or(p.sample),
        seed: args.seed.unwrap_or(p.seed),
        ..p
    };
    match run_suite(suite, &p, &limits(cli)?) {
        Ok(report) => {
            line(out, report.to_json());
            eprintln!("{}", report.summary());
            Ok(if report.passed { 0 } else { VIOLATIONS })
        }
        Err(e) if e.is_cap() => {
            eprintln!("{suite}: stopped: {e}");
            Ok(VIOLATIONS)
        }
        Err(e) => Err(Failure::domain(e)),
    }
}

fn experiment(cli: &Cli, args: &ExperimentArgs, out: &mut Out) -> Result<u8, Failure> {
    let domain = match args.domain {
        DomainArg::DoubleTrees => Domain::DoubleTrees,
        DomainArg::Trees => Domain::Trees,
        DomainArg::OtTerms => Domain::OtTerms { max_subscript: args.max_sub },
    };
    let r = longest_controlled_bad_sequence(args.c, domain, args.height_cap, args.length_cap, &limits(cli)?)
        .map_err(Failure::domain)?;
    if cli.json {
        line(out, serde_json::to_string_pretty(&r).expect("result serializes"));
    } else {
        let status = match (&r.stopped_by, r.exhausted) {
            (Some(why), _) => format!("stopped: {why}"),
            (None, true) => "exhausted".to_string(),
            (None, false) => format!("cut at length cap {}", r.length_cap),
        };
        line(
            out,
            format_args!("c={} domain={} length={} ({status}, {} nodes visited)", r.c, r.domain, r.length, r.visited),
        );
        for (i, item) in r.sequence.iter().enumerate() {
            line(out, format_args!("{i}: {item}"));
        }
    }
    Ok(if r.stopped_by.is_some() { VIOLATIONS } else { 0 })
}
