//! Command line interface.
//!
//! One static binary, subcommands for every operation, machine-readable
//! output behind `--json`. Exit codes: 0 success (or "holds"), 1 a
//! counterexample or inequality violation was found, 2 a budget was
//! exceeded, 3 invalid input.
//!
//! Identical arguments and seed produce byte-identical output; `--jobs`
//! only shards work and never changes what is printed.

use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{ArgAction, Parser, Subcommand};
use serde_json::json;

use crate::endo::{
    contraction_check, fix_generators, fix_presentation, lemma13_crosscheck, per_generators,
    ContractionOutcome, Endomorphism,
};
use crate::engine::{Budget, Element, Engine};
use crate::error::{Error, Result};
use crate::lattice::DeltaOutcome;
use crate::metrics::{verify_inequalities, Metric};
use crate::normalform::format_factors;
use crate::presentation::ArtinPresentation;
use crate::sample::DEFAULT_SEED;

#[derive(Parser)]
#[command(
    name = "garside",
    version,
    about = "Artin monoid engine: word problem, normal forms, metrics, endomorphisms",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Presentation file (required by every subcommand)
    #[arg(short = 'p', long = "presentation", global = true)]
    presentation: Option<PathBuf>,

    /// Endomorphism file
    #[arg(short = 'e', long = "endo", global = true)]
    endo: Option<PathBuf>,

    /// First word argument (space-separated atoms; "" is the identity)
    #[arg(long = "u", global = true)]
    u: Option<String>,

    /// Second word argument
    #[arg(long = "v", global = true)]
    v: Option<String>,

    /// Metric: d1, d2 or d3
    #[arg(long = "metric", global = true)]
    metric: Option<String>,

    /// Length bound for censuses and sampled words
    #[arg(long = "bound", global = true)]
    bound: Option<usize>,

    /// Number of sampled pairs
    #[arg(long = "samples", global = true)]
    samples: Option<u64>,

    /// Seed for the deterministic sampler
    #[arg(long = "seed", global = true)]
    seed: Option<u64>,

    /// Budget: cap on element length in searches
    #[arg(long = "max-len", global = true)]
    max_len: Option<usize>,

    /// Budget: cap on words enumerated per braid class
    #[arg(long = "max-class", global = true)]
    max_class: Option<usize>,

    /// Emit JSON instead of text
    #[arg(long = "json", global = true, action = ArgAction::SetTrue)]
    json: bool,

    /// Worker threads for fuzzing (output is identical for any value)
    #[arg(long = "jobs", global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Are two words equal in the monoid?
    Eq,
    /// Greedy normal form of --u
    Nf,
    /// Foata normal form of --u
    Foata,
    /// Head α(u): the maximal reduced left divisor
    Alpha,
    /// Does --u left-divide --v?
    Divides,
    /// Least common right multiple Δ(T) of the atoms listed in --u
    Lcm,
    /// Greatest common left divisor of --u and --v
    Gcd,
    /// Is --u reduced?
    Reduced,
    /// Rank and distance between --u and --v under --metric
    Dist,
    /// Fuzz the metric inequalities on seeded random pairs
    FuzzMetrics,
    /// Generators of the fixed-point submonoid of --endo
    Fix,
    /// Generators of the periodic-point submonoid of --endo
    Per,
    /// Derived Artin presentation of the fixed-point submonoid
    FixPresentation,
    /// Head-based contraction test for --endo over reduced pairs
    Contract,
    /// Sampled crosscheck of the equivalent head conditions
    Crosscheck,
}

/// Entry point; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 3 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

struct Context {
    pres: ArtinPresentation,
    engine: Engine,
    budget: Budget,
}

impl Context {
    fn word(&self, text: &str) -> Result<Element> {
        self.engine.element(text, &self.budget)
    }

    fn show(&self, e: &Element) -> String {
        self.pres.word_string(e.letters())
    }
}

fn load(cli: &Cli) -> Result<Context> {
    let path = cli
        .presentation
        .as_ref()
        .ok_or_else(|| Error::Precondition("missing -p/--presentation".into()))?;
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))?;
    let pres = ArtinPresentation::parse(&text)?;
    let engine = Engine::new(&pres);
    let defaults = Budget::default();
    let budget = Budget::new(
        cli.max_class.unwrap_or(defaults.max_class_size),
        cli.max_len.unwrap_or(defaults.max_length),
    )?;
    Ok(Context {
        pres,
        engine,
        budget,
    })
}

fn load_endo(cli: &Cli, ctx: &Context) -> Result<Endomorphism> {
    let path = cli
        .endo
        .as_ref()
        .ok_or_else(|| Error::Precondition("missing -e/--endo".into()))?;
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))?;
    Endomorphism::parse(&ctx.engine, &text, &ctx.budget)
}

fn need<'a>(opt: &'a Option<String>, flag: &str) -> Result<&'a str> {
    opt.as_deref()
        .ok_or_else(|| Error::Precondition(format!("missing --{flag}")))
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let ctx = load(cli)?;
    let budget = &ctx.budget;
    match &cli.command {
        Command::Eq => {
            let u = ctx.word(need(&cli.u, "u")?)?;
            let v = ctx.word(need(&cli.v, "v")?)?;
            let equal = u == v;
            if cli.json {
                println!("{}", json!({ "equal": equal }));
            } else {
                println!("{equal}");
            }
            Ok(0)
        }
        Command::Nf => {
            let u = ctx.word(need(&cli.u, "u")?)?;
            let nf = ctx.engine.greedy_nf(&u, budget)?;
            if cli.json {
                let factors: Vec<String> = nf.factors.iter().map(|f| ctx.show(f)).collect();
                println!("{}", json!({ "factors": factors }));
            } else {
                println!("{}", format_factors(&ctx.pres, &nf.factors));
            }
            Ok(0)
        }
        Command::Foata => {
            let u = ctx.word(need(&cli.u, "u")?)?;
            let nf = ctx.engine.foata_nf(&u, budget)?;
            if cli.json {
                let factors: Vec<String> = nf.factors.iter().map(|f| ctx.show(f)).collect();
                println!("{}", json!({ "factors": factors }));
            } else {
                println!("{}", format_factors(&ctx.pres, &nf.factors));
            }
            Ok(0)
        }
        Command::Alpha => {
            let u = ctx.word(need(&cli.u, "u")?)?;
            let head = ctx.engine.alpha(&u, budget)?;
            if cli.json {
                println!("{}", json!({ "alpha": ctx.show(&head) }));
            } else {
                println!("{}", ctx.show(&head));
            }
            Ok(0)
        }
        Command::Divides => {
            let u = ctx.word(need(&cli.u, "u")?)?;
            let v = ctx.word(need(&cli.v, "v")?)?;
            let divides = ctx.engine.left_divides(&u, &v, budget)?;
            if cli.json {
                println!("{}", json!({ "divides": divides }));
            } else {
                println!("{divides}");
            }
            Ok(0)
        }
        Command::Lcm => {
            let atoms = ctx.pres.parse_word(need(&cli.u, "u")?)?;
            match ctx.engine.delta_of_atoms(&atoms, budget)? {
                DeltaOutcome::Lcm(d) => {
                    if cli.json {
                        println!("{}", json!({ "lcm": ctx.show(&d) }));
                    } else {
                        println!("{}", ctx.show(&d));
                    }
                }
                DeltaOutcome::NoLcm => {
                    if cli.json {
                        println!("{}", json!({ "lcm": null }));
                    } else {
                        println!("none");
                    }
                }
            }
            Ok(0)
        }
        Command::Gcd => {
            let u = ctx.word(need(&cli.u, "u")?)?;
            let v = ctx.word(need(&cli.v, "v")?)?;
            let g = ctx.engine.gcd_left(&u, &v, budget)?;
            if cli.json {
                println!("{}", json!({ "gcd": ctx.show(&g) }));
            } else {
                println!("{}", ctx.show(&g));
            }
            Ok(0)
        }
        Command::Reduced => {
            let u = ctx.word(need(&cli.u, "u")?)?;
            let reduced = ctx.engine.is_reduced(&u, budget)?;
            if cli.json {
                println!("{}", json!({ "reduced": reduced }));
            } else {
                println!("{reduced}");
            }
            Ok(0)
        }
        Command::Dist => {
            let metric = Metric::from_str(need(&cli.metric, "metric")?)?;
            let u = ctx.word(need(&cli.u, "u")?)?;
            let v = ctx.word(need(&cli.v, "v")?)?;
            let rank = ctx.engine.rank(metric, &u, &v, budget)?;
            let dist = crate::metrics::DyadicDistance { exponent: rank };
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "metric": metric.to_string(),
                        "rank": rank.finite(),
                        "infinite": rank.is_infinite(),
                        "distance": dist.to_string(),
                    })
                );
            } else {
                println!("r{}({}, {}) = {rank}", metric.index(), ctx.show(&u), ctx.show(&v));
                println!("d{}({}, {}) = {dist}", metric.index(), ctx.show(&u), ctx.show(&v));
            }
            Ok(0)
        }
        Command::FuzzMetrics => {
            let samples = cli.samples.unwrap_or(500);
            let max_len = cli.bound.unwrap_or(10);
            let seed = cli.seed.unwrap_or(DEFAULT_SEED);
            let jobs = cli.jobs.unwrap_or(1).max(1);
            let report = verify_inequalities(&ctx.pres, samples, max_len, seed, budget, jobs);
            if cli.json {
                println!("{}", serde_json::to_string(&report).expect("serializable"));
            } else {
                for law in &report.laws {
                    println!(
                        "law {}: samples={} violations={}",
                        law.law, law.samples, law.violations
                    );
                    for cx in &law.counterexamples {
                        println!("  counterexample: u = `{}`, v = `{}`", cx.u, cx.v);
                    }
                }
                println!("skipped (budget): {}", report.skipped_budget);
            }
            Ok(if report.total_violations() > 0 { 1 } else { 0 })
        }
        Command::Fix => {
            let phi = load_endo(cli, &ctx)?;
            let report = fix_generators(&ctx.engine, &phi, budget)?;
            print_fix(&ctx, cli.json, &report);
            Ok(0)
        }
        Command::Per => {
            let phi = load_endo(cli, &ctx)?;
            let report = per_generators(&ctx.engine, &phi, budget)?;
            print_fix(&ctx, cli.json, &report);
            Ok(0)
        }
        Command::FixPresentation => {
            let phi = load_endo(cli, &ctx)?;
            let report = fix_generators(&ctx.engine, &phi, budget)?;
            let fp = fix_presentation(&ctx.engine, &report, budget)?;
            if cli.json {
                println!("{}", fp.to_json(&ctx.pres));
            } else {
                for (name, g) in fp
                    .presentation
                    .atoms()
                    .map(|a| fp.presentation.atom_name(a))
                    .zip(fp.generators.iter())
                {
                    println!("# generator {name} = {}", ctx.show(g));
                }
                for &(i, j) in &fp.unresolved {
                    println!(
                        "# entry m(g{i},g{j}) unresolved within the length budget"
                    );
                }
                print!("{}", fp.presentation.serialize());
            }
            Ok(0)
        }
        Command::Contract => {
            let phi = load_endo(cli, &ctx)?;
            let bound = cli.bound.unwrap_or(8);
            let verdict = contraction_check(&ctx.engine, &phi, bound, budget)?;
            if cli.json {
                println!("{}", verdict.to_json(&ctx.pres));
            } else {
                match &verdict.outcome {
                    ContractionOutcome::HoldsExhaustive => println!("verdict: holds-exhaustive"),
                    ContractionOutcome::HoldsUpToBound(l) => {
                        println!("verdict: holds-up-to-bound {l}")
                    }
                    ContractionOutcome::Counterexample(u, v) => {
                        println!("verdict: counterexample");
                        println!("u = `{}`", ctx.show(u));
                        println!("v = `{}`", ctx.show(v));
                    }
                }
                println!("pairs checked: {}", verdict.pairs_checked);
            }
            Ok(if verdict.holds() { 0 } else { 1 })
        }
        Command::Crosscheck => {
            let phi = load_endo(cli, &ctx)?;
            let bound = cli.bound.unwrap_or(6);
            let samples = cli.samples.unwrap_or(200);
            let seed = cli.seed.unwrap_or(DEFAULT_SEED);
            let report = lemma13_crosscheck(&ctx.engine, &phi, bound, samples, seed, budget)?;
            if cli.json {
                println!("{}", report.to_json(&ctx.pres));
            } else {
                match &report.verdict.outcome {
                    ContractionOutcome::HoldsExhaustive => println!("verdict: holds-exhaustive"),
                    ContractionOutcome::HoldsUpToBound(l) => {
                        println!("verdict: holds-up-to-bound {l}")
                    }
                    ContractionOutcome::Counterexample(u, v) => {
                        println!(
                            "verdict: counterexample u = `{}`, v = `{}`",
                            ctx.show(u),
                            ctx.show(v)
                        );
                    }
                }
                for clause in &report.clauses {
                    println!(
                        "clause {}: premises={} violations={}",
                        clause.clause, clause.premises, clause.violations
                    );
                    for cx in &clause.counterexamples {
                        println!("  counterexample: u = `{}`, v = `{}`", cx.u, cx.v);
                    }
                }
                println!("skipped (budget): {}", report.skipped_budget);
                println!("consistent: {}", report.consistent);
            }
            Ok(if report.clean() { 0 } else { 1 })
        }
    }
}

fn print_fix(ctx: &Context, as_json: bool, report: &crate::endo::FixReport) {
    if as_json {
        println!("{}", report.to_json(&ctx.pres));
        return;
    }
    println!("case: {}", report.case);
    println!("exhausted: {}", report.exhausted);
    for (orbit, delta) in &report.sigma {
        let names: Vec<&str> = orbit.iter().map(|&a| ctx.pres.atom_name(a)).collect();
        println!("orbit {{{}}}: delta = {}", names.join(", "), ctx.show(delta));
    }
    for g in &report.generators {
        println!("generator: {}", ctx.show(g));
    }
}

