//! `toda`: build explicit solutions of the singular SU(n+1) Toda system
//! from a JSON parameter file, and run the verification passes on them.
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 invalid input,
//! 3 numerical budget exhausted.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use toda_core::cartan::{build_cartan, exponent_data, ResonanceMode};
use toda_core::grid::GridSpec;
use toda_core::invariants;
use toda_core::rat;
use toda_core::solution::{
    admissible_support, build_solution, family_dimension, lambda_product_target, CoefficientSpec,
    LambdaSlot, TodaParams, TodaSolution,
};
use toda_core::verifier::{self, oracle, VerifyOptions};
use toda_core::{Complex64, TodaError};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INVALID_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "toda",
    version,
    about = "Explicit solutions of the singular SU(n+1) Toda system: construction, conserved quantities, verification"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a solution and print its resolved parameters and shape.
    Build {
        #[command(flatten)]
        common: Common,
    },
    /// Check system residuals, determinant identities, conserved
    /// quantities, asymptotics and (rank two) the closed-form construction.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Override the bound on the pointwise system residual.
        #[arg(long)]
        tol: Option<f64>,
        /// Sample grid as "r0,r1,nr,ntheta".
        #[arg(long)]
        grid: Option<String>,
    },
    /// Integrate every density and compare with the quantized totals.
    Quantize {
        #[command(flatten)]
        common: Common,
        /// Override the relative tolerance on each mass.
        #[arg(long)]
        tol: Option<f64>,
        /// Cap on field evaluations per integral.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Check the linearized operator: explicit kernel and family tangents.
    Nondegeneracy {
        #[command(flatten)]
        common: Common,
    },
    /// Export field values as CSV.
    Sample {
        /// JSON parameter file.
        #[arg(long)]
        input: PathBuf,
        /// Write here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Sample grid as "r0,r1,nr,ntheta".
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, value_enum, default_value_t = SampleMode::Grid)]
        mode: SampleMode,
    },
}

#[derive(Args)]
struct Common {
    /// JSON parameter file.
    #[arg(long)]
    input: PathBuf,
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Aligned pass/fail lines.
    Human,
    /// Deterministic JSON.
    Structured,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SampleMode {
    /// Log-polar grid, radius-major row order.
    Grid,
    /// Log-spaced radii along the fixed ray theta = 0.
    Ray,
    /// Relative density differences against the rank-two closed form.
    OracleDiff,
}

enum CliError {
    Input(String),
    Budget(String),
}

impl From<TodaError> for CliError {
    fn from(e: TodaError) -> Self {
        match e {
            TodaError::BudgetExceeded(msg) => CliError::Budget(msg),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// On-disk parameter schema.  `gamma` entries are integers or `"p/q"`
/// strings; `lambda` entries are numbers or the string `"auto"` (at most
/// one); `c` lists resonant coefficients; `resonance` selects whether
/// resonance is decided exactly from gamma (default) or declared absent.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InputFile {
    n: usize,
    gamma: Vec<RationalLit>,
    #[serde(default)]
    lambda: Option<Vec<LambdaLit>>,
    #[serde(default)]
    c: Vec<CoeffLit>,
    #[serde(default)]
    resonance: Option<ResonanceLit>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalLit {
    Int(i64),
    Str(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LambdaLit {
    Num(f64),
    Word(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoeffLit {
    i: usize,
    j: usize,
    #[serde(default)]
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ResonanceLit {
    Exact,
    Generic,
}

/// The shape `build` emits: the resolved parameters plus a summary.  Loading
/// one re-reads only the parameter block, so a build output is itself a
/// valid input (the summary is recomputed, never trusted).
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WrappedFile {
    params: InputFile,
    #[serde(default)]
    #[allow(dead_code)]
    summary: Option<serde_json::Value>,
}

fn load_params(path: &Path) -> Result<TodaParams, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let shape: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let input: InputFile = if shape.get("params").is_some() {
        let mut de = serde_json::Deserializer::from_str(&text);
        let wrapped: WrappedFile = serde_path_to_error::deserialize(&mut de)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        wrapped.params
    } else {
        let mut de = serde_json::Deserializer::from_str(&text);
        serde_path_to_error::deserialize(&mut de)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
    };

    let gamma = input
        .gamma
        .iter()
        .map(|g| match g {
            RationalLit::Int(k) => Ok(rat::rat_i64(*k)),
            RationalLit::Str(s) => rat::parse_rational(s),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mode = match input.resonance {
        Some(ResonanceLit::Generic) => ResonanceMode::Generic,
        _ => ResonanceMode::Exact,
    };
    let cartan = build_cartan(input.n)?;
    let expo = exponent_data(cartan, gamma, mode)?;

    let mut params = TodaParams::canonical(expo);
    if let Some(slots) = input.lambda {
        params.lambda = slots
            .iter()
            .map(|l| match l {
                LambdaLit::Num(v) => Ok(LambdaSlot::Fixed(*v)),
                LambdaLit::Word(w) if w == "auto" => Ok(LambdaSlot::Auto),
                LambdaLit::Word(w) => Err(CliError::Input(format!(
                    "lambda entry {w:?} is neither a number nor \"auto\""
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
    }
    params.c = input
        .c
        .iter()
        .map(|c| CoefficientSpec { i: c.i, j: c.j, value: Complex64::new(c.re, c.im) })
        .collect();
    Ok(params)
}

fn build_from(path: &Path) -> Result<TodaSolution, CliError> {
    let params = load_params(path)?;
    Ok(build_solution(params.resolve()?))
}

fn parse_grid(arg: &Option<String>) -> Result<GridSpec, CliError> {
    match arg {
        Some(s) => Ok(GridSpec::parse(s)?),
        None => Ok(GridSpec::default()),
    }
}

fn emit(target: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match target {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct BuildCoefficient {
    i: usize,
    j: usize,
    re: f64,
    im: f64,
}

/// Echo of the input with the auto lambda slot resolved; a valid input file.
#[derive(Serialize)]
struct ParamsEcho {
    n: usize,
    gamma: Vec<String>,
    lambda: Vec<f64>,
    c: Vec<BuildCoefficient>,
    resonance: &'static str,
}

#[derive(Serialize)]
struct BuildSummary {
    resonant_pairs: Vec<(usize, usize)>,
    family_dimension: usize,
    lambda_product: f64,
    lambda_product_target: f64,
    alpha: Vec<String>,
    beta: Vec<String>,
    indicial_w: Vec<String>,
    top_determinant_constant: f64,
    moment_terms: usize,
}

#[derive(Serialize)]
struct BuildOutput {
    params: ParamsEcho,
    summary: BuildSummary,
}

fn build_output(sol: &TodaSolution) -> BuildOutput {
    let params = sol.params();
    let expo = sol.expo();
    let n = sol.n();
    BuildOutput {
        params: ParamsEcho {
            n,
            gamma: (1..=n).map(|i| rat::format_rational(expo.gamma().value(i))).collect(),
            lambda: params.lambda().to_vec(),
            c: params
                .coefficients()
                .iter()
                .map(|(&(i, j), v)| BuildCoefficient { i, j, re: v.re, im: v.im })
                .collect(),
            resonance: match expo.mode() {
                ResonanceMode::Exact => "exact",
                ResonanceMode::Generic => "generic",
            },
        },
        summary: BuildSummary {
            resonant_pairs: admissible_support(expo),
            family_dimension: family_dimension(expo),
            lambda_product: params.lambda().iter().product(),
            lambda_product_target: lambda_product_target(expo),
            alpha: (1..=n).map(|i| rat::format_rational(expo.alpha(i))).collect(),
            beta: (0..=n).map(|i| rat::format_rational(expo.beta(i))).collect(),
            indicial_w: invariants::indicial_coefficients(expo)
                .iter()
                .map(rat::format_rational)
                .collect(),
            top_determinant_constant: sol.top_constant(),
            moment_terms: sol.f().num_terms(),
        },
    }
}

fn render_build(out: &BuildOutput, format: Format) -> String {
    match format {
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(out).expect("build serialization");
            s.push('\n');
            s
        }
        Format::Human => {
            let p = &out.params;
            let sm = &out.summary;
            let mut s = String::new();
            let _ = writeln!(s, "build: n = {}, gamma = [{}]", p.n, p.gamma.join(", "));
            let _ = writeln!(s, "  resonance handling:    {}", p.resonance);
            let _ = writeln!(
                s,
                "  lambda:                [{}]",
                p.lambda.iter().map(|v| format!("{v:.12e}")).collect::<Vec<_>>().join(", ")
            );
            let _ = writeln!(
                s,
                "  lambda product:        {:.12e} (target {:.12e})",
                sm.lambda_product, sm.lambda_product_target
            );
            for c in &p.c {
                let _ = writeln!(s, "  c[{}][{}]:               {:+.12e} {:+.12e} i", c.i, c.j, c.re, c.im);
            }
            let _ = writeln!(
                s,
                "  resonant pairs:        [{}]",
                sm.resonant_pairs
                    .iter()
                    .map(|(i, j)| format!("({i}, {j})"))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            let _ = writeln!(s, "  family dimension:      {}", sm.family_dimension);
            let _ = writeln!(s, "  alpha:                 [{}]", sm.alpha.join(", "));
            let _ = writeln!(s, "  beta:                  [{}]", sm.beta.join(", "));
            let _ = writeln!(s, "  indicial w:            [{}]", sm.indicial_w.join(", "));
            let _ = writeln!(s, "  top det constant:      {:.12e}", sm.top_determinant_constant);
            let _ = writeln!(s, "  moment matrix terms:   {}", sm.moment_terms);
            s
        }
    }
}

fn render_report(report: &toda_core::report::Report, format: Format) -> String {
    match format {
        Format::Human => report.human(),
        Format::Structured => report.json(),
    }
}

fn sample_csv(sol: &TodaSolution, grid: &GridSpec, mode: SampleMode) -> Result<String, CliError> {
    let n = sol.n();
    let mut s = String::new();
    match mode {
        SampleMode::Grid | SampleMode::Ray => {
            s.push_str("re_z,im_z");
            for i in 1..=n {
                let _ = write!(s, ",u_{i}");
            }
            for i in 1..=n {
                let _ = write!(s, ",eu_{i}");
            }
            s.push('\n');
            let points = match mode {
                SampleMode::Grid => grid.points(),
                _ => toda_core::grid::log_spaced(grid.r0, grid.r1, grid.nr * grid.ntheta)
                    .into_iter()
                    .map(|r| Complex64::new(r, 0.0))
                    .collect(),
            };
            let rows = toda_core::par::map(&points, |&z| {
                let us: Vec<f64> = (1..=n).map(|i| sol.u(i, z)).collect();
                let mut row = format!("{:e},{:e}", z.re, z.im);
                for u in &us {
                    let _ = write!(row, ",{u:e}");
                }
                for u in &us {
                    let _ = write!(row, ",{:e}", u.exp());
                }
                row
            });
            for row in rows {
                s.push_str(&row);
                s.push('\n');
            }
        }
        SampleMode::OracleDiff => {
            let o = oracle::OracleParams::from_builder(sol.params())?;
            s.push_str("re_z,im_z,rel_diff_eu_1,rel_diff_eu_2\n");
            let points = grid.points();
            let rows = toda_core::par::map(&points, |&z| {
                let mut row = format!("{:e},{:e}", z.re, z.im);
                for i in 1..=2 {
                    let a = sol.eu(i, z);
                    let b = o.eu(i, z);
                    let rel = (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
                    let _ = write!(row, ",{rel:e}");
                }
                row
            });
            for row in rows {
                s.push_str(&row);
                s.push('\n');
            }
        }
    }
    Ok(s)
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.cmd {
        Cmd::Build { common } => {
            let sol = build_from(&common.input)?;
            let text = render_build(&build_output(&sol), common.format);
            emit(&common.output, &text)?;
            Ok(true)
        }
        Cmd::Verify { common, tol, grid } => {
            let sol = build_from(&common.input)?;
            let opts = VerifyOptions { grid: parse_grid(&grid)?, pde_tol: tol };
            let report = verifier::verify(&sol, &opts);
            emit(&common.output, &render_report(&report, common.format))?;
            Ok(report.passed)
        }
        Cmd::Quantize { common, tol, budget } => {
            let sol = build_from(&common.input)?;
            let report = verifier::quantize(&sol, tol, budget)?;
            emit(&common.output, &render_report(&report, common.format))?;
            Ok(report.passed)
        }
        Cmd::Nondegeneracy { common } => {
            let sol = build_from(&common.input)?;
            let report = verifier::nondegeneracy(&sol);
            emit(&common.output, &render_report(&report, common.format))?;
            Ok(report.passed)
        }
        Cmd::Sample { input, output, grid, mode } => {
            let sol = build_from(&input)?;
            let text = sample_csv(&sol, &parse_grid(&grid)?, mode)?;
            emit(&output, &text)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    toda_core::par::init_threads_from_env();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID_INPUT)
        }
        Err(CliError::Budget(msg)) => {
            eprintln!("error: numerical budget exceeded: {msg}");
            ExitCode::from(EXIT_BUDGET)
        }
    }
}
