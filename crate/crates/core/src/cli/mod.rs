//! The `nufreg` command line: `fit`, `predict`, `curve` and `report`.
//!
//! Errors are printed to standard error as `error[<category>]: <message>`
//! and mapped to exit codes: 2 parse, 3 validation, 4 ill-posed,
//! 5 infeasible, 6 io.

pub mod dataset;
pub mod modelfile;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::benchmark;
use crate::boxopt::OptimizerConfig;
use crate::coeffs::{FuzzyObservation, DEFAULT_ALPHA_LEVELS};
use crate::error::FitError;
use crate::forecast::{build_rule_base, predict, ForecastResult};
use crate::fuznum::{discrepancy, TrapezoidalFuzzyNumber};
use crate::spreads::{
    estimated_response, fit_nonuniform, fit_uniform_baseline, ErrorTerm, SpreadConfig,
};

pub use dataset::read_dataset;
pub use modelfile::ModelFile;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    IllPosed(String),
    #[error("{0}")]
    Infeasible(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::IllPosed(_) => 4,
            CliError::Infeasible(_) => 5,
            CliError::Io(_) => 6,
        }
    }

    pub fn category(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Validation(_) => "validation",
            CliError::IllPosed(_) => "ill-posed",
            CliError::Infeasible(_) => "infeasible",
            CliError::Io(_) => "io",
        }
    }
}

impl From<FitError> for CliError {
    fn from(e: FitError) -> Self {
        let msg = e.to_string();
        match e {
            FitError::IllPosed { .. } | FitError::DegenerateMembership(_) => CliError::IllPosed(msg),
            FitError::Infeasible { .. } => CliError::Infeasible(msg),
            FitError::Domain(_) | FitError::Invalid(_) | FitError::InvalidModel(_) => {
                CliError::Validation(msg)
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "nufreg",
    version,
    about = "Fuzzy linear regression with non-uniform error spreads"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model to a CSV dataset and write a model file
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ALPHA_LEVELS)]
        alpha_levels: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Forecast the response for a new explanatory value
    Predict {
        #[arg(long)]
        model: PathBuf,
        /// One crisp value or four comma-separated trapezoid knots
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Print a coefficient membership curve as alpha,lo,hi CSV
    Curve {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum)]
        coef: CoefArg,
    },
    /// Compare non-uniform and uniform-baseline estimation errors
    Report {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        model: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoefArg {
    B0,
    B1,
}

/// Parse arguments, run, and report errors; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if e.use_stderr() {
                let _ = write!(err, "{e}");
            } else {
                let _ = write!(out, "{e}");
            }
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {e}", e.category());
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Fit {
            input,
            alpha_levels,
            seed,
            output,
        } => cmd_fit(input, *alpha_levels, *seed, output, out).map(|_| ()),
        Command::Predict { model, x } => cmd_predict(model, x, out).map(|_| ()),
        Command::Curve { model, coef } => cmd_curve(model, *coef, out),
        Command::Report { input, model } => cmd_report(input, model, out),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn load_dataset(path: &Path) -> Result<Vec<FuzzyObservation>, CliError> {
    read_dataset(read_file(path)?.as_bytes())
}

pub fn load_model(path: &Path) -> Result<ModelFile, CliError> {
    ModelFile::from_text(&read_file(path)?)
}

/// Run the full pipeline plus the uniform baseline with default tolerances.
pub fn fit_dataset(
    data: &[FuzzyObservation],
    alpha_levels: usize,
    seed: u64,
) -> Result<ModelFile, FitError> {
    let optimizer = OptimizerConfig {
        rng_seed: seed,
        ..OptimizerConfig::default()
    };
    let spreads = SpreadConfig::from_data(data)?;
    let model = fit_nonuniform(data, alpha_levels, &optimizer, &spreads)?;
    let baseline = fit_uniform_baseline(data, model.b0_c, model.b1_c)?;
    Ok(ModelFile {
        alpha_levels,
        optimizer,
        model,
        observations: data.to_vec(),
        baseline,
    })
}

pub fn cmd_fit(
    input: &Path,
    alpha_levels: usize,
    seed: u64,
    output: &Path,
    out: &mut dyn Write,
) -> Result<ModelFile, CliError> {
    let data = load_dataset(input)?;
    let mf = fit_dataset(&data, alpha_levels, seed)?;
    fs::write(output, mf.to_text())
        .map_err(|e| CliError::Io(format!("{}: {e}", output.display())))?;
    write_fit_summary(&mf, out)?;
    Ok(mf)
}

fn write_fit_summary(mf: &ModelFile, out: &mut dyn Write) -> Result<(), CliError> {
    let m = &mf.model;
    writeln!(out, "coefficients: b0 = {:.6}, b1 = {:.6}", m.b0_c, m.b1_c)?;
    writeln!(
        out,
        "spread bounds: l_min = {:.6}, r_min = {:.6}",
        m.spread_config.l_min, m.spread_config.r_min
    )?;
    writeln!(
        out,
        "{:>4}  {:>10}  {:>10}  {:>14}  {:>14}",
        "obs", "l*", "r*", "D non-uniform", "D uniform"
    )?;
    for (i, t) in m.error_terms.iter().enumerate() {
        writeln!(
            out,
            "{:>4}  {:>10.6}  {:>10.6}  {:>14.6}  {:>14.6}",
            i + 1,
            t.left,
            t.right,
            m.per_obs_discrepancy[i],
            mf.baseline.per_obs_discrepancy[i]
        )?;
    }
    writeln!(
        out,
        "{:>4}  {:>10}  {:>10}  {:>14.6}  {:>14.6}",
        "sum", "", "", m.total_discrepancy, mf.baseline.total_discrepancy
    )?;
    writeln!(
        out,
        "uniform baseline error term: (-{:.6}, 0, 0, {:.6})",
        mf.baseline.term.left, mf.baseline.term.right
    )?;
    Ok(())
}

/// Parse `a` or `a,b,c,d` (commas or whitespace) into a trapezoid.
pub fn parse_x(text: &str) -> Result<TrapezoidalFuzzyNumber, CliError> {
    let values = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Parse(format!("x: cannot parse '{t}' as a number")))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    match values.as_slice() {
        [v] => Ok(TrapezoidalFuzzyNumber::crisp(*v)),
        [a, b, c, d] => TrapezoidalFuzzyNumber::new(*a, *b, *c, *d)
            .map_err(|e| CliError::Validation(format!("x: {e}"))),
        _ => Err(CliError::Parse(format!(
            "x needs 1 or 4 numbers, got {}",
            values.len()
        ))),
    }
}

pub fn cmd_predict(
    model_path: &Path,
    x: &str,
    out: &mut dyn Write,
) -> Result<ForecastResult, CliError> {
    let mf = load_model(model_path)?;
    let x_new = parse_x(x)?;
    let rules = build_rule_base(&mf.model, &mf.observations)?;
    let f = predict(&mf.model, &rules, &x_new)?;
    writeln!(out, "x: {x_new}")?;
    writeln!(out, "crisp core: {:.6}", f.crisp_core)?;
    writeln!(out, "error term: {:.6}", f.error_term)?;
    writeln!(out, "response: {:.6}", f.response)?;
    writeln!(out, "activated rules:")?;
    for (i, w) in &f.activations {
        writeln!(out, "  rule {} weight {w:.6}", i + 1)?;
    }
    Ok(f)
}

pub fn cmd_curve(model_path: &Path, coef: CoefArg, out: &mut dyn Write) -> Result<(), CliError> {
    let mf = load_model(model_path)?;
    let curve = match coef {
        CoefArg::B0 => &mf.model.b0_curve,
        CoefArg::B1 => &mf.model.b1_curve,
    };
    writeln!(out, "alpha,lo,hi")?;
    for (a, c) in curve.levels() {
        writeln!(out, "{a},{},{}", c.lo, c.hi)?;
    }
    Ok(())
}

/// Flag text for a computed value against a published one.
fn compare(computed: f64, reference: f64) -> &'static str {
    if (computed - reference).abs() <= benchmark::REFERENCE_PRECISION {
        "ok"
    } else {
        "DIVERGES"
    }
}

fn discrepancies(data: &[FuzzyObservation], b0: f64, b1: f64, terms: &[ErrorTerm]) -> Vec<f64> {
    data.iter()
        .zip(terms)
        .map(|(o, t)| discrepancy(&o.y, &estimated_response(o, b0, b1, t)))
        .collect()
}

pub fn cmd_report(input: &Path, model_path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let data = load_dataset(input)?;
    let mf = load_model(model_path)?;
    if data.len() != mf.model.len() {
        return Err(CliError::Validation(format!(
            "dataset has {} rows but the model was fitted on {}",
            data.len(),
            mf.model.len()
        )));
    }
    let m = &mf.model;
    let nonuniform = discrepancies(&data, m.b0_c, m.b1_c, &m.error_terms);
    let shared = vec![mf.baseline.term; data.len()];
    let uniform = discrepancies(&data, m.b0_c, m.b1_c, &shared);
    let reference = benchmark::is_benchmark(&data);

    writeln!(out, "Estimation errors: non-uniform spreads vs uniform two-stage baseline")?;
    writeln!(
        out,
        "model: y = {:.6} + {:.6} x + E_i; baseline E = (-{:.6}, 0, 0, {:.6})",
        m.b0_c, m.b1_c, mf.baseline.term.left, mf.baseline.term.right
    )?;
    writeln!(
        out,
        "{:>4}  {:>10}  {:>10}  {:>9}  {:>10}  {:>10}  {:>9}",
        "obs", "two-stage", "reference", "flag", "non-unif", "reference", "flag"
    )?;
    let cell = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.3}"));
    let flag = |c: f64, r: Option<f64>| r.map_or("-", |r| compare(c, r));
    for i in 0..data.len() {
        let r2 = reference.then(|| benchmark::REFERENCE_TWO_STAGE[i]);
        let rn = reference.then(|| benchmark::REFERENCE_NON_UNIFORM[i]);
        writeln!(
            out,
            "{:>4}  {:>10.6}  {:>10}  {:>9}  {:>10.6}  {:>10}  {:>9}",
            i + 1,
            uniform[i],
            cell(r2),
            flag(uniform[i], r2),
            nonuniform[i],
            cell(rn),
            flag(nonuniform[i], rn)
        )?;
    }
    let (tu, tn): (f64, f64) = (uniform.iter().sum(), nonuniform.iter().sum());
    let r2 = reference.then_some(benchmark::REFERENCE_TWO_STAGE_TOTAL);
    let rn = reference.then_some(benchmark::REFERENCE_NON_UNIFORM_TOTAL);
    writeln!(
        out,
        "{:>4}  {:>10.6}  {:>10}  {:>9}  {:>10.6}  {:>10}  {:>9}",
        "sum",
        tu,
        cell(r2),
        flag(tu, r2),
        tn,
        cell(rn),
        flag(tn, rn)
    )?;
    writeln!(
        out,
        "non-uniform total {} uniform total",
        if tn < tu { "<" } else { ">=" }
    )?;

    if reference {
        let (b0, b1) = benchmark::REFERENCE_COEFFICIENTS;
        writeln!(out)?;
        writeln!(
            out,
            "Re-evaluated with the published coefficients y = {b0} + {b1} x"
        )?;
        writeln!(
            out,
            "published crisp coefficients vs computed: b0 {} ({:.6} vs {b0}), b1 {} ({:.6} vs {b1})",
            compare(m.b0_c, b0),
            m.b0_c,
            compare(m.b1_c, b1),
            m.b1_c
        )?;
        let pub_shared = vec![benchmark::REFERENCE_SHARED_TERM; data.len()];
        let pub_terms = vec![benchmark::REFERENCE_NON_UNIFORM_TERM; data.len()];
        let two = discrepancies(&data, b0, b1, &pub_shared);
        let non = discrepancies(&data, b0, b1, &pub_terms);
        let refit = fit_uniform_baseline(&data, b0, b1)?;
        writeln!(
            out,
            "{:>4}  {:>13}  {:>13}  {:>10}  {:>13}  {:>10}",
            "obs", "shared term", "refit shared", "reference", "(-0.6,0,0,0.6)", "reference"
        )?;
        for i in 0..data.len() {
            writeln!(
                out,
                "{:>4}  {:>13.6}  {:>13.6}  {:>10.3}  {:>13.6}  {:>10.3}",
                i + 1,
                two[i],
                refit.per_obs_discrepancy[i],
                benchmark::REFERENCE_TWO_STAGE[i],
                non[i],
                benchmark::REFERENCE_NON_UNIFORM[i]
            )?;
        }
        writeln!(
            out,
            "{:>4}  {:>13.6}  {:>13.6}  {:>10.3}  {:>13.6}  {:>10.3}",
            "sum",
            two.iter().sum::<f64>(),
            refit.total_discrepancy,
            benchmark::REFERENCE_TWO_STAGE_TOTAL,
            non.iter().sum::<f64>(),
            benchmark::REFERENCE_NON_UNIFORM_TOTAL
        )?;
        writeln!(
            out,
            "refit shared term at published coefficients: (-{:.6}, 0, 0, {:.6})",
            refit.term.left, refit.term.right
        )?;
    }
    Ok(())
}
