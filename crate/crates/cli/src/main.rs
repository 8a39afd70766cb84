//! `twirlkit`: classify, analyze, simulate and optimize random unitary
//! operations, and emit the reference convergence data as CSV or JSON.

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use twirlkit_core::attractors::{analyze, check_convergence_to_twirl};
use twirlkit_core::channels::{factor_collective, lift, EnsembleFile, UnitaryEnsemble};
use twirlkit_core::lab::{
    figure1, figure2, optimize_construction, optimize_probabilities, trace_convergence, Figure,
    OptimizationResult,
};
use twirlkit_core::linalg::ComplexMatrix;
use twirlkit_core::qubit::{classify_multi, TwirlVerdict};
use twirlkit_core::qudit::{build_ensemble, ConstructionSpec, Variant};
use twirlkit_core::tolerance::{self, Tolerances};

const TOL_ENV: &str = "TWIRLKIT_TOL_OVERRIDE";

#[derive(Parser, Debug)]
#[command(name = "twirlkit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Ensemble (`{"dim", "items"}`) or construction spec (`{"d", "variant", ..}`) JSON file
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Local dimension of the default construction when no input is given
    #[arg(long, global = true)]
    d: Option<usize>,
    #[arg(long, global = true, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    n_max: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Optimizer restarts
    #[arg(long, global = true)]
    restarts: Option<usize>,
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Two-qubit twirling verdict, checked against the attractor oracle
    Classify,
    /// Asymptotic spectrum and attractor spaces
    Attractors,
    /// `n,distance` trace of ‖Sⁿ − T‖
    Simulate,
    /// Optimize probabilities (ensemble input) or probabilities and A (spec input)
    Optimize,
    /// Reference multi-series data
    Reproduce {
        #[arg(value_enum)]
        figure: FigureName,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FigureName {
    Fig1,
    Fig2,
}

enum Input {
    Ensemble(UnitaryEnsemble),
    Spec(ConstructionSpec),
}

impl Input {
    fn ensemble(&self) -> Result<UnitaryEnsemble> {
        match self {
            Input::Ensemble(e) => Ok(e.clone()),
            Input::Spec(spec) => Ok(build_ensemble(spec)?),
        }
    }
}

/// Items that all factor as `u ⊗ u` are taken as given; otherwise every
/// item is a single-qudit unitary and is lifted.
fn interpret(raw: UnitaryEnsemble) -> Result<UnitaryEnsemble> {
    if let Some(d) = exact_sqrt(raw.dim()) {
        if raw.unitaries().all(|u| factor_collective(u, d).is_some()) {
            return Ok(raw);
        }
    }
    let items = raw
        .items()
        .iter()
        .map(|it| Ok((it.p, lift(&it.u)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(UnitaryEnsemble::new(items)?)
}

fn exact_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r > 1 && r * r == n).then_some(r)
}

fn read_input(path: &Path) -> Result<Input> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if value.get("items").is_some() {
        let raw = UnitaryEnsemble::from_json(&text)?;
        Ok(Input::Ensemble(raw))
    } else if value.get("variant").is_some() {
        Ok(Input::Spec(ConstructionSpec::from_json(&text)?))
    } else {
        bail!("{}: expected an ensemble with \"items\" or a spec with \"variant\"", path.display())
    }
}

fn load(cli: &Cli) -> Result<Input> {
    match &cli.input {
        Some(path) => match read_input(path)? {
            Input::Ensemble(raw) => Ok(Input::Ensemble(interpret(raw)?)),
            spec => Ok(spec),
        },
        None => {
            let d = cli.d.context("either --input or --d is required")?;
            Ok(Input::Spec(ConstructionSpec::new(d, Variant::ThreeOp)))
        }
    }
}

/// Single-qubit members and probabilities of a two-qubit collective input.
fn qubit_members(cli: &Cli) -> Result<(Vec<ComplexMatrix>, Vec<f64>)> {
    let path = cli.input.as_ref().context("classify requires --input")?;
    let Input::Ensemble(raw) = read_input(path)? else {
        bail!("classify expects an ensemble file");
    };
    let us = match raw.dim() {
        2 => raw.unitaries().cloned().collect(),
        4 => raw
            .unitaries()
            .enumerate()
            .map(|(i, u)| factor_collective(u, 2).with_context(|| format!("item {i} is not of the form u ⊗ u")))
            .collect::<Result<Vec<_>>>()?,
        n => bail!("classify expects 2x2 or 4x4 items, got {n}x{n}"),
    };
    Ok((us, raw.probabilities()))
}

struct Sink {
    out: Box<dyn Write>,
}

impl Sink {
    fn open(path: Option<&Path>) -> Result<Self> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?),
            None => Box::new(io::stdout().lock()),
        };
        Ok(Self { out })
    }

    fn json<T: Serialize>(&mut self, value: &T) -> Result<()> {
        serde_json::to_writer_pretty(&mut self.out, value)?;
        writeln!(self.out)?;
        Ok(())
    }

    fn csv(self) -> csv::Writer<Box<dyn Write>> {
        csv::Writer::from_writer(self.out)
    }
}

fn format_or(cli: &Cli, default: Format, allowed: &[Format]) -> Result<Format> {
    let f = cli.format.unwrap_or(default);
    if !allowed.contains(&f) {
        bail!("--format {:?} is not available for this command", f);
    }
    Ok(f)
}

#[derive(Serialize)]
struct ClassifyReport {
    verdict: TwirlVerdict,
    oracle_converges: bool,
    agree: bool,
}

fn cmd_classify(cli: &Cli) -> Result<u8> {
    let format = format_or(cli, Format::Json, &[Format::Json, Format::Csv])?;
    let (us, probs) = qubit_members(cli)?;
    let verdict = classify_multi(&us)?;
    let items = us.iter().zip(&probs).map(|(u, &p)| Ok((p, lift(u)?))).collect::<Result<Vec<_>>>()?;
    let oracle = check_convergence_to_twirl(&UnitaryEnsemble::new(items)?)?.converges_to_twirl;
    let report = ClassifyReport {
        agree: verdict.converges == oracle,
        oracle_converges: oracle,
        verdict,
    };
    let mut sink = Sink::open(cli.out.as_deref())?;
    match format {
        Format::Json => sink.json(&report)?,
        Format::Csv => {
            let mut w = sink.csv();
            w.write_record(["converges", "rule_fired", "oracle_converges", "agree"])?;
            let rule = serde_json::to_value(report.verdict.rule_fired)?;
            w.write_record([
                report.verdict.converges.to_string(),
                rule.as_str().unwrap_or_default().to_string(),
                report.oracle_converges.to_string(),
                report.agree.to_string(),
            ])?;
            w.flush()?;
        }
    }
    if !report.agree {
        eprintln!("classifier and attractor oracle disagree");
        return Ok(2);
    }
    Ok(0)
}

fn cmd_attractors(cli: &Cli) -> Result<u8> {
    let format = format_or(cli, Format::Json, &[Format::Json, Format::Csv])?;
    let e = load(cli)?.ensemble()?;
    let report = analyze(&e)?;
    let mut sink = Sink::open(cli.out.as_deref())?;
    match format {
        Format::Json => sink.json(&report)?,
        Format::Csv => {
            let mut w = sink.csv();
            w.write_record(["lambda_re", "lambda_im", "dim"])?;
            for b in &report.attractor_bases {
                w.serialize((b.lambda.re, b.lambda.im, b.basis.len()))?;
            }
            w.flush()?;
        }
    }
    Ok(0)
}

fn cmd_simulate(cli: &Cli) -> Result<u8> {
    let format = format_or(cli, Format::Csv, &[Format::Csv, Format::Json])?;
    let e = load(cli)?.ensemble()?;
    let trace = trace_convergence(&e, cli.n_max)?;
    let mut sink = Sink::open(cli.out.as_deref())?;
    match format {
        Format::Json => sink.json(&trace)?,
        Format::Csv => {
            let mut w = sink.csv();
            w.write_record(["n", "distance"])?;
            for (n, dist) in trace.n_values.iter().zip(&trace.distances) {
                w.serialize((n, dist))?;
            }
            w.flush()?;
        }
    }
    Ok(0)
}

fn cmd_optimize(cli: &Cli) -> Result<u8> {
    format_or(cli, Format::Json, &[Format::Json])?;
    let restarts = cli.restarts.unwrap_or(20);
    let (result, ensemble): (OptimizationResult, UnitaryEnsemble) = match load(cli)? {
        Input::Ensemble(e) => {
            let res = optimize_probabilities(&e, restarts, cli.seed)?;
            let best = e.with_probabilities(&res.best_probs)?;
            (res, best)
        }
        Input::Spec(spec) => {
            let res = optimize_construction(&spec, restarts, cli.seed)?;
            let mut best = spec.clone().with_probs(res.best_probs.clone());
            if let Some(a) = res.best_a {
                best = best.with_a(a);
            }
            (res, build_ensemble(&best)?)
        }
    };
    let mut out = json!({
        "best_objective": result.best_objective,
        "best_params": result.best_params,
        "best_probs": result.best_probs,
        "best_a": result.best_a,
        "n_restarts": result.n_restarts,
        "ensemble": EnsembleFile::from(ensemble),
    });
    if cli.verbose {
        out["history"] = serde_json::to_value(&result.history)?;
    }
    Sink::open(cli.out.as_deref())?.json(&out)?;
    Ok(0)
}

fn cmd_reproduce(cli: &Cli, figure: FigureName) -> Result<u8> {
    let format = format_or(cli, Format::Csv, &[Format::Csv, Format::Json])?;
    let restarts = cli.restarts.unwrap_or(10);
    let fig: Figure = match figure {
        FigureName::Fig1 => figure1(cli.n_max, restarts, cli.seed)?,
        FigureName::Fig2 => figure2(cli.n_max, restarts, cli.seed)?,
    };
    let mut sink = Sink::open(cli.out.as_deref())?;
    match format {
        Format::Json => sink.json(&fig)?,
        Format::Csv => {
            let mut w = sink.csv();
            w.write_record(["series", "n", "distance"])?;
            for s in &fig.series {
                for (n, dist) in s.trace.n_values.iter().zip(&s.trace.distances) {
                    w.serialize((&s.name, n, dist))?;
                }
            }
            w.flush()?;
        }
    }
    Ok(0)
}

fn install_tolerances() -> Result<()> {
    if let Ok(text) = std::env::var(TOL_ENV) {
        let tol = Tolerances::from_json(&text).with_context(|| format!("parsing {TOL_ENV}"))?;
        tolerance::install(tol);
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<u8> {
    install_tolerances()?;
    match &cli.command {
        Command::Classify => cmd_classify(cli),
        Command::Attractors => cmd_attractors(cli),
        Command::Simulate => cmd_simulate(cli),
        Command::Optimize => cmd_optimize(cli),
        Command::Reproduce { figure } => cmd_reproduce(cli, *figure),
    }
}

fn main() -> ExitCode {
    // usage errors share exit status 1 with other input errors
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
