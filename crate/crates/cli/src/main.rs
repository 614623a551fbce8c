use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::{json, Value};

use nbhd_core::algebra::{check_algebra_properties, enumerate_prime_filters, FiniteModalAlgebra, MeetFamilySet};
use nbhd_core::duality::{build, build_k, stone_map, Variant};
use nbhd_core::frames::{check_frame_properties, NeighborhoodFrame};
use nbhd_core::lab::{
    bf_countermodel, countermodel, decide_valid_with, model_existence, omega_bf_countermodel_with, DecideOptions,
    LogicClass,
};
use nbhd_core::par::{configure_jobs, Exec};
use nbhd_core::selftest;
use nbhd_core::syntax::{free_vars, parse, subformulas, Formula};

const JOBS_ENV: &str = "NBHD_DUALITY_JOBS";

/// Neighborhood frames, modal algebras and the duality between them.
///
/// Results are printed as JSON on standard output; diagnostics go to
/// standard error. Exit status is 0 on success, 1 on a domain error and 2 on
/// a usage error.
#[derive(Parser, Debug)]
#[command(name = "nbhd", version)]
struct Cli {
    /// Pretty-print the JSON output.
    #[arg(long, global = true)]
    pretty: bool,

    /// Wrap the output in a report carrying the command, its inputs and the exit code.
    #[arg(long, global = true)]
    envelope: bool,

    /// Worker threads for parallel sweeps (also read from NBHD_DUALITY_JOBS).
    #[arg(long, global = true, env = JOBS_ENV)]
    jobs: Option<usize>,

    /// Run sweeps on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ClassArgs {
    /// Comma separated frame conditions from m, t, c; "" for the minimal class.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_class)]
    class: LogicClass,

    /// Largest basis (variables plus boxed arguments) the procedure accepts.
    #[arg(long, default_value_t = nbhd_core::lab::DEFAULT_BASIS_LIMIT)]
    bound: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a formula from FILE (or `-` for standard input).
    Parse { file: String },
    /// Report the frame conditions of a frame JSON file.
    CheckFrame { file: PathBuf },
    /// Report the properties and prime filters of an algebra JSON file.
    CheckAlgebra { file: PathBuf },
    /// Build J or J-bar of an algebra, or the dual algebra K of a frame.
    #[command(group(ArgGroup::new("construction").required(true).args(["j", "jbar", "k"])))]
    Dualize {
        #[arg(long)]
        j: bool,
        #[arg(long)]
        jbar: bool,
        #[arg(long)]
        k: bool,
        file: PathBuf,
        /// Designated meet families (JSON array of code arrays).
        #[arg(long)]
        meets: Option<PathBuf>,
    },
    /// Verify the representation map of an algebra.
    Represent {
        file: PathBuf,
        #[arg(long)]
        meets: PathBuf,
        #[arg(long)]
        jbar: bool,
    },
    /// Decide a formula in the least logic of a class.
    Decide {
        formula: String,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Search for a countermodel with a bounded number of worlds.
    Countermodel {
        formula: String,
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        max_worlds: usize,
    },
    /// Build a model of a class validating exactly the provable formulas of FILE (one per line).
    ModelExistence {
        #[arg(long)]
        formulas: PathBuf,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Refute the Barcan formula on the cofinite frame.
    BfDemo,
    /// Refute the infinitary Barcan formula and contrast it with finite instances.
    OmegaBfDemo,
    /// Run the invariant suites.
    Selftest {
        /// Use the full acceptance-scale parameters.
        #[arg(long)]
        exhaustive: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Parse { .. } => "parse",
            Command::CheckFrame { .. } => "check-frame",
            Command::CheckAlgebra { .. } => "check-algebra",
            Command::Dualize { .. } => "dualize",
            Command::Represent { .. } => "represent",
            Command::Decide { .. } => "decide",
            Command::Countermodel { .. } => "countermodel",
            Command::ModelExistence { .. } => "model-existence",
            Command::BfDemo => "bf-demo",
            Command::OmegaBfDemo => "omega-bf-demo",
            Command::Selftest { .. } => "selftest",
        }
    }
}

/// Outcome of one invocation.
struct CommandReport {
    command: &'static str,
    inputs: Value,
    result: Value,
    exit_code: u8,
}

fn read_text(source: &str) -> Result<String> {
    if source == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
        Ok(s)
    } else {
        std::fs::read_to_string(source).with_context(|| format!("reading {source}"))
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_text(&path.to_string_lossy())?;
    let value = serde_json::from_str(&text).map_err(nbhd_core::Error::from)?;
    Ok(value)
}

fn read_meets(path: Option<&Path>, a: &FiniteModalAlgebra) -> Result<MeetFamilySet> {
    let s = match path {
        Some(p) => read_json::<MeetFamilySet>(p)?,
        None => MeetFamilySet::empty(),
    };
    s.validate(a)?;
    Ok(s)
}

fn parse_class(s: &str) -> std::result::Result<LogicClass, String> {
    s.parse().map_err(|e: nbhd_core::Error| e.to_string())
}

fn options(class: &ClassArgs, exec: Exec) -> Result<(LogicClass, DecideOptions)> {
    Ok((
        class.class,
        DecideOptions {
            limit: class.bound,
            exec,
            ..DecideOptions::default()
        },
    ))
}

fn formula_summary(f: &Formula) -> Value {
    json!({
        "formula": f.to_string(),
        "ast": f,
        "size": f.size(),
        "modal_depth": f.modal_depth(),
        "subformulas": subformulas(f).len(),
        "free_vars": free_vars(f),
        "propositional": f.is_propositional(),
    })
}

fn execute(command: &Command, exec: Exec) -> Result<(Value, Value, u8)> {
    Ok(match command {
        Command::Parse { file } => {
            let text = read_text(file)?;
            let f = parse(&text)?;
            (json!({ "file": file }), formula_summary(&f), 0)
        }
        Command::CheckFrame { file } => {
            let z: NeighborhoodFrame = read_json(file)?;
            let p = check_frame_properties(&z);
            (json!({ "file": file }), json!({ "worlds": z.world_count(), "properties": p }), 0)
        }
        Command::CheckAlgebra { file } => {
            let a: FiniteModalAlgebra = read_json(file)?;
            let filters: Vec<Vec<u32>> = enumerate_prime_filters(&a).iter().map(|f| f.elements().to_vec()).collect();
            (
                json!({ "file": file }),
                json!({
                    "atoms": a.atom_count(),
                    "size": a.size(),
                    "properties": check_algebra_properties(&a),
                    "prime_filters": filters,
                }),
                0,
            )
        }
        Command::Dualize { j, jbar, k, file, meets } => {
            let inputs = json!({ "file": file, "meets": meets, "construction": if *k { "k" } else if *j { "j" } else { "jbar" } });
            if *k {
                let z: NeighborhoodFrame = read_json(file)?;
                (inputs, serde_json::to_value(build_k(&z)?)?, 0)
            } else {
                let a: FiniteModalAlgebra = read_json(file)?;
                let s = read_meets(meets.as_deref(), &a)?;
                let variant = if *jbar { Variant::JBar } else { Variant::J };
                (inputs, serde_json::to_value(build(&a, &s, variant)?)?, 0)
            }
        }
        Command::Represent { file, meets, jbar } => {
            let a: FiniteModalAlgebra = read_json(file)?;
            let s = read_meets(Some(meets), &a)?;
            let variant = if *jbar { Variant::JBar } else { Variant::J };
            let (map, report) = stone_map(&a, &s, variant)?;
            let mut result = serde_json::to_value(&report)?;
            result["map"] = json!(map);
            (json!({ "file": file, "meets": meets, "variant": variant }), result, 0)
        }
        Command::Decide { formula, class } => {
            let (l, opts) = options(class, exec)?;
            let f = parse(formula)?;
            let verdict = decide_valid_with(&f, l, &opts)?;
            (json!({ "formula": f.to_string(), "class": l, "bound": class.bound }), serde_json::to_value(verdict)?, 0)
        }
        Command::Countermodel { formula, class, max_worlds } => {
            let (l, opts) = options(class, exec)?;
            let f = parse(formula)?;
            let model = countermodel(&f, l, *max_worlds, &opts)?;
            (
                json!({ "formula": f.to_string(), "class": l, "max_worlds": max_worlds }),
                json!({ "found": model.is_some(), "countermodel": model }),
                0,
            )
        }
        Command::ModelExistence { formulas, class } => {
            let (l, opts) = options(class, exec)?;
            let text = read_text(&formulas.to_string_lossy())?;
            let fs = text
                .lines()
                .map(str::trim)
                .filter(|line| !line.is_empty() && !line.starts_with('#'))
                .map(parse)
                .collect::<nbhd_core::Result<Vec<Formula>>>()?;
            let r = model_existence(&fs, l, &opts)?;
            let code = if r.holds() { 0 } else { 1 };
            (json!({ "formulas": formulas, "class": l }), serde_json::to_value(r)?, code)
        }
        Command::BfDemo => {
            let r = bf_countermodel();
            let code = if r.verified() { 0 } else { 1 };
            (json!({}), serde_json::to_value(r)?, code)
        }
        Command::OmegaBfDemo => {
            let r = omega_bf_countermodel_with(exec);
            let code = if r.verified() { 0 } else { 1 };
            (json!({}), serde_json::to_value(r)?, code)
        }
        Command::Selftest { exhaustive } => {
            let results = selftest::run_all(exec, *exhaustive);
            let passed = results.iter().all(|r| r.passed);
            (
                json!({ "exhaustive": exhaustive }),
                json!({ "passed": passed, "suites": results }),
                if passed { 0 } else { 1 },
            )
        }
    })
}

fn error_value(e: &anyhow::Error) -> Value {
    let kind = e.downcast_ref::<nbhd_core::Error>().map_or("io", nbhd_core::Error::kind);
    let mut error = json!({ "kind": kind, "message": format!("{e:#}") });
    if let Some(nbhd_core::Error::Syntax { position, expected, found }) = e.downcast_ref::<nbhd_core::Error>() {
        error["position"] = json!(position);
        error["expected"] = json!(expected);
        error["found"] = json!(found);
    }
    json!({ "error": error })
}

fn run(cli: &Cli) -> CommandReport {
    if let Some(jobs) = cli.jobs {
        configure_jobs(jobs);
    }
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let command = cli.command.name();
    match execute(&cli.command, exec) {
        Ok((inputs, result, exit_code)) => CommandReport {
            command,
            inputs,
            result,
            exit_code,
        },
        Err(e) => {
            eprintln!("nbhd {command}: {e:#}");
            CommandReport {
                command,
                inputs: Value::Null,
                result: error_value(&e),
                exit_code: 1,
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = run(&cli);
    let out = if cli.envelope {
        json!({
            "command": report.command,
            "inputs": report.inputs,
            "result": report.result,
            "exit_code": report.exit_code,
        })
    } else {
        report.result
    };
    let text = if cli.pretty {
        serde_json::to_string_pretty(&out)
    } else {
        serde_json::to_string(&out)
    }
    .expect("JSON values serialize");
    // a closed pipe downstream is not an error of ours
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    ExitCode::from(report.exit_code)
}
