use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sawset::chains::{chain_maximal_elements, chain_stats, monte_carlo_chain_stats};
use sawset::constructions::{
    consecutive_layers, lightning, middle_layers, odd_intersecting_extremal, power_set_minus_one, star,
};
use sawset::document::{parse_family, DocumentFormat, FamilyDocument};
use sawset::family::{is_antichain, is_intersecting, is_t_saw};
use sawset::parallel::WORKERS_ENV;
use sawset::report::{emit_report, ReportOptions};
use sawset::search::{
    conjecture_probe, search_max_parallel, verify_classification, ConjectureVerdict, SearchMode, SearchProblem,
    SearchStatus,
};
use sawset::sunflowers::DEFAULT_ODD_BUDGET;
use sawset::verify::{run_verification, Level, VerifyOptions, DEFAULT_SEED};
use sawset::{Family, GroundSize, SetMask};

const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "sawset", version, about = "Checks, constructions and searches for t-saw set families")]
struct Cli {
    /// Worker threads for parallel searches and sampling. Output does not
    /// depend on this value.
    #[arg(long, global = true, env = WORKERS_ENV, default_value_t = 1)]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report every property of the family in FILE.
    Check {
        file: PathBuf,
        /// `t-saw=T`, `intersecting` or `antichain`; repeatable.
        #[arg(long = "assert")]
        assertions: Vec<String>,
        /// Subfamilies the odd-sunflower search may test.
        #[arg(long, default_value_t = DEFAULT_ODD_BUDGET)]
        odd_budget: u64,
    },
    /// Write a named family.
    Construct {
        #[arg(value_enum)]
        name: Construction,
        /// Integer parameters; see the README for each construction.
        params: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Find maximum t-saw families.
    Search {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        intersecting: bool,
        #[arg(long, value_enum, default_value_t = Mode::BranchAndBound)]
        mode: Mode,
        #[arg(long)]
        all_optima: bool,
        /// Report optima up to relabeling of the ground set.
        #[arg(long)]
        symmetry: bool,
        /// Restrict to set sizes LO..=HI, written `LO..HI`.
        #[arg(long)]
        window: Option<String>,
        #[arg(long)]
        budget: Option<u64>,
        /// Accepted for uniformity; the search itself is deterministic.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare the maximum t-saw families on [n] with the known classification.
    Classify {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: u32,
    },
    /// Exact chain statistics, plus a Monte Carlo estimate when --trials is given.
    Chains {
        file: PathBuf,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Run the acceptance checks.
    Verify {
        #[arg(long, value_enum, default_value_t = VerifyLevel::Quick)]
        level: VerifyLevel,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Leave out elapsed times so reports can be compared byte for byte.
        #[arg(long)]
        no_timing: bool,
    },
    /// Maximum intersecting saw family on [2k], seeded with the lightning family.
    Probe {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    /// `n t`
    MiddleLayers,
    /// `n lo hi`
    Layers,
    /// `k`
    Lightning,
    /// `n i`
    Star,
    /// `k`
    OddExtremal,
    /// `n` followed by the elements of the missing set (none for the empty set)
    PowerSetMinusOne,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    BranchAndBound,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyLevel {
    Quick,
    Full,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn input_error(error: anyhow::Error) -> Failure {
    Failure { code: EXIT_INPUT, error }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

/// Writes one JSON document per line; a closed pipe is not an error.
fn print(value: &impl serde::Serialize) {
    emit(&serde_json::to_string(value).expect("reports serialize"));
}

fn print_pretty(value: &impl serde::Serialize) {
    emit(&serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn ground(n: u32) -> Result<GroundSize, Failure> {
    GroundSize::dense(n).map_err(|e| input_error(e.into()))
}

fn read_family(path: &Path) -> Result<Family, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(input_error)?;
    let doc = parse_family(&text).with_context(|| format!("parsing {}", path.display())).map_err(input_error)?;
    doc.to_family().map_err(|e| input_error(e.into()))
}

fn run(cli: Cli) -> Outcome {
    let workers = cli.workers.max(1);
    match cli.command {
        Command::Check { file, assertions, odd_budget } => check(&file, &assertions, odd_budget),
        Command::Construct { name, params, output, format } => construct(name, &params, output.as_deref(), format),
        Command::Search { n, t, intersecting, mode, all_optima, symmetry, window, budget, seed: _ } => {
            let mut p = SearchProblem::new(ground(n)?, t)
                .intersecting(intersecting)
                .mode(match mode {
                    Mode::Exhaustive => SearchMode::Exhaustive,
                    Mode::BranchAndBound => SearchMode::BranchAndBound,
                })
                .all_optima(all_optima)
                .symmetry(symmetry)
                .budget(budget);
            if let Some(w) = window {
                p = p.window(Some(parse_window(&w).map_err(input_error)?));
            }
            let outcome = search_max_parallel(&p, workers).map_err(|e| input_error(e.into()))?;
            print(&outcome);
            Ok(if outcome.status == SearchStatus::BudgetExhausted { EXIT_BUDGET } else { 0 })
        }
        Command::Classify { n, t } => {
            let report = verify_classification(ground(n)?, t, workers).map_err(|e| input_error(e.into()))?;
            print(&report);
            Ok(if report.agrees {
                0
            } else if report.status == SearchStatus::BudgetExhausted {
                EXIT_BUDGET
            } else {
                EXIT_MISMATCH
            })
        }
        Command::Chains { file, trials, seed } => {
            let f = read_family(&file)?;
            let mut out = json!({
                "stats": chain_stats(&f),
                "chain_maximal": chain_maximal_elements(&f),
            });
            if let Some(trials) = trials {
                let mc = monte_carlo_chain_stats(&f, trials, seed, workers).map_err(|e| input_error(e.into()))?;
                out["monte_carlo"] = json!({ "seed": seed, "stats": mc });
            }
            print(&out);
            Ok(0)
        }
        Command::Verify { level, seed, no_timing } => {
            let level = match level {
                VerifyLevel::Quick => Level::Quick,
                VerifyLevel::Full => Level::Full,
            };
            let mut report = run_verification(VerifyOptions { level, seed, workers });
            if no_timing {
                report = report.without_timing();
            }
            print_pretty(&report);
            Ok(if report.passed { 0 } else { EXIT_MISMATCH })
        }
        Command::Probe { k, budget } => {
            let probe = conjecture_probe(k, budget, workers).map_err(|e| input_error(e.into()))?;
            print(&probe);
            Ok(match probe.verdict {
                ConjectureVerdict::Confirmed => 0,
                ConjectureVerdict::Counterexample => EXIT_MISMATCH,
                ConjectureVerdict::Undecided => EXIT_BUDGET,
            })
        }
    }
}

fn parse_window(text: &str) -> anyhow::Result<(u32, u32)> {
    let (lo, hi) = text.split_once("..").ok_or_else(|| anyhow!("window must look like LO..HI, got {text:?}"))?;
    Ok((lo.trim().parse()?, hi.trim_start_matches('=').trim().parse()?))
}

enum Assertion {
    TSaw(u32),
    Intersecting,
    Antichain,
}

fn parse_assertion(text: &str) -> anyhow::Result<Assertion> {
    match text {
        "intersecting" => Ok(Assertion::Intersecting),
        "antichain" => Ok(Assertion::Antichain),
        _ => match text.strip_prefix("t-saw=") {
            Some(t) => Ok(Assertion::TSaw(t.parse().with_context(|| format!("bad t in {text:?}"))?)),
            None => bail!("unknown assertion {text:?}; use t-saw=T, intersecting or antichain"),
        },
    }
}

fn check(file: &Path, assertions: &[String], odd_budget: u64) -> Outcome {
    let parsed =
        assertions.iter().map(|a| parse_assertion(a)).collect::<anyhow::Result<Vec<_>>>().map_err(input_error)?;
    let f = read_family(file)?;
    let report = emit_report(&f, ReportOptions { odd_budget }).map_err(|e| input_error(e.into()))?;
    let results: Vec<Value> = assertions
        .iter()
        .zip(&parsed)
        .map(|(text, a)| {
            let holds = match a {
                Assertion::TSaw(t) => is_t_saw(&f, *t),
                Assertion::Intersecting => is_intersecting(&f),
                Assertion::Antichain => is_antichain(&f),
            };
            json!({ "assertion": text, "holds": holds })
        })
        .collect();
    let all_hold = results.iter().all(|r| r["holds"] == Value::Bool(true));
    print(&json!({ "report": report, "assertions": results }));
    Ok(if all_hold { 0 } else { EXIT_MISMATCH })
}

fn construct(name: Construction, params: &[String], output: Option<&Path>, format: Format) -> Outcome {
    let nums = params
        .iter()
        .map(|p| p.parse::<u32>().with_context(|| format!("parameter {p:?} is not a non-negative integer")))
        .collect::<anyhow::Result<Vec<u32>>>()
        .map_err(input_error)?;
    let want = |count: usize| -> Result<(), Failure> {
        if nums.len() != count {
            return Err(input_error(anyhow!("expected {count} parameters, got {}", nums.len())));
        }
        Ok(())
    };
    let built = match name {
        Construction::MiddleLayers => {
            want(2)?;
            middle_layers(ground(nums[0])?, nums[1])
        }
        Construction::Layers => {
            want(3)?;
            consecutive_layers(ground(nums[0])?, nums[1], nums[2])
        }
        Construction::Lightning => {
            want(1)?;
            lightning(nums[0])
        }
        Construction::Star => {
            want(2)?;
            star(ground(nums[0])?, nums[1])
        }
        Construction::OddExtremal => {
            want(1)?;
            odd_intersecting_extremal(nums[0])
        }
        Construction::PowerSetMinusOne => {
            if nums.is_empty() {
                return Err(input_error(anyhow!("expected n followed by the missing set's elements")));
            }
            let n = ground(nums[0])?;
            let missing = SetMask::from_elements(nums[1..].iter().copied()).map_err(|e| input_error(e.into()))?;
            power_set_minus_one(n, missing)
        }
    };
    let f = built.map_err(|e| input_error(e.into()))?;
    let format = match format {
        Format::Text => DocumentFormat::Text,
        Format::Json => DocumentFormat::Json,
    };
    let text = FamilyDocument::from_family(&f, format).emit();
    match output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display())).map_err(input_error)?
        }
        None => {
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
        }
    }
    Ok(0)
}
