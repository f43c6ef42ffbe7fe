//! `fliess`: command-line front end for truncated Fliess-operator series.
//!
//! Exit status is 1 for malformed input (unreadable files, bad syntax) and
//! 2 for dimension or precondition failures on well-formed input.

mod axle;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fliess_core::composition::{compose, mod_compose};
use fliess_core::feedback::{feedback_product_with, inverse_proper, radius_inverse, InverseMethod, RadiusMode};
use fliess_core::fliess_eval::{
    eval_fliess, growth_csv, growth_fit, natural_coefficients, natural_response_taylor, trace_csv, FitMode,
    SampledSignal,
};
use fliess_core::hopf::{antipode, basis_dimensions, table_dimensions, CoordinateMap};
use fliess_core::rational::format_significant;
use fliess_core::realization::{closed_loop_realization, series_from_realization, Realization};
use fliess_core::{Error, Series, Word};
use num_traits::Zero;

#[derive(Parser)]
#[command(name = "fliess", version, about = "Formal power series of Fliess operators and the output-feedback group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Componentwise shuffle product of two series.
    Shuffle { a: PathBuf, b: PathBuf },
    /// Composition product c∘d.
    Compose { c: PathBuf, d: PathBuf },
    /// Modified composition product c õ d.
    Modcompose { c: PathBuf, d: PathBuf },
    /// Proper part of the group inverse (δ + c)⁻¹.
    Invert {
        c: PathBuf,
        #[arg(long, default_value = "antipode")]
        method: InverseMethod,
        /// Defaults to the truncation of the input.
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Prints the antipode S a[component, word].
    Antipode {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        component: usize,
        #[arg(long)]
        word: String,
    },
    /// Enumerated grading dimensions next to the closed-form polynomials.
    HopfDims {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 6)]
        max_k: usize,
    },
    /// Feedback product c@d.
    Feedback {
        c: PathBuf,
        d: PathBuf,
        #[arg(long)]
        max_degree: usize,
        #[arg(long, default_value = "antipode")]
        method: InverseMethod,
    },
    /// Generating series of a realization.
    Realize {
        r: PathBuf,
        #[arg(long)]
        max_degree: usize,
        /// Taylor working degree; defaults to max-degree + 2.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Closed-loop realization of a plant and a feedback controller.
    ClosedLoop {
        plant: PathBuf,
        controller: PathBuf,
        /// Taylor working degree of the emitted fields.
        #[arg(long, default_value_t = 10)]
        degree: usize,
        /// Emit the closed-loop series through this word length instead of
        /// the realization.
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Exact Taylor coefficients of the natural response, `<i> <k> <coeff of t^k>`.
    Respond {
        c: PathBuf,
        #[arg(long)]
        order: usize,
    },
    /// Evaluates the Fliess operator on a sampled input; CSV on stdout.
    Simulate {
        c: PathBuf,
        #[arg(long)]
        input: PathBuf,
    },
    /// Growth amplification of the inverse and the convergence radius.
    Radius {
        #[arg(long)]
        mode: RadiusMode,
        #[arg(long = "K")]
        k: f64,
        #[arg(long = "M")]
        m_growth: f64,
        #[arg(long)]
        inputs: usize,
    },
    /// Log-linear fit of the natural-response coefficients (c_i, x0^k).
    Growthfit {
        c: PathBuf,
        #[arg(long, default_value_t = 1)]
        component: usize,
        #[arg(long, default_value = "global")]
        mode: FitMode,
        #[arg(long, default_value_t = 3)]
        from: usize,
        /// Defaults to the truncation of the series.
        #[arg(long)]
        to: Option<usize>,
        /// Also write the fitted points and line as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Runs the differential-axle example end to end and cross-checks the routes.
    ReproduceAxle {
        /// Truncation of the feedback product.
        #[arg(long, default_value_t = 7)]
        max_degree: usize,
        /// Highest natural-response order taken from the closed-loop realization.
        #[arg(long, default_value_t = 20)]
        fit_order: usize,
    },
}

/// CLI failure with its exit status.
pub(crate) struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = if err.is_malformed_input() { 1 } else { 2 };
        Failure { code, message: err.to_string() }
    }
}

impl Failure {
    fn malformed(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    fn precondition(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::malformed(format!("cannot read {}: {e}", path.display())))
}

fn read_series(path: &Path) -> CliResult<Series> {
    Series::parse(&read(path)?).map_err(|e| {
        let f = Failure::from(e);
        Failure { code: f.code, message: format!("{}: {}", path.display(), f.message) }
    })
}

fn read_realization(path: &Path, degree: usize) -> CliResult<Realization> {
    Ok(Realization::from_json(&read(path)?, degree)?)
}

fn run(command: Command) -> CliResult<String> {
    match command {
        Command::Shuffle { a, b } => Ok(read_series(&a)?.shuffle(&read_series(&b)?)?.format()),
        Command::Compose { c, d } => Ok(compose(&read_series(&c)?, &read_series(&d)?)?.format()),
        Command::Modcompose { c, d } => Ok(mod_compose(&read_series(&c)?, &read_series(&d)?)?.format()),
        Command::Invert { c, method, max_degree } => {
            let c = read_series(&c)?;
            let n = max_degree.unwrap_or(c.truncation());
            Ok(inverse_proper(&c.truncate(n), method)?.format())
        }
        Command::Antipode { m, component, word } => {
            if m == 0 || component == 0 || component > m {
                return Err(Failure::precondition(format!("component must be in 1..={m}")));
            }
            let w: Word = word.parse()?;
            fliess_core::Alphabet::new(m)?.check(&w)?;
            Ok(format!("{}\n", antipode(&CoordinateMap::new(component, w), m)))
        }
        Command::HopfDims { m, max_k } => {
            if m == 0 {
                return Err(Failure::precondition("m must be at least 1"));
            }
            let mut out = String::from("k dim_V dim_H table_V table_H commutative_H match\n");
            let mut all = true;
            for k in 0..=max_k {
                let d = basis_dimensions(k, m);
                let table = table_dimensions(k, m as u64);
                let (tv, th, ok) = match table {
                    Some((tv, th)) => (tv.to_string(), th.to_string(), (tv, th) == d.as_pair()),
                    None => ("-".into(), "-".into(), true),
                };
                all &= ok;
                let _ = writeln!(out, "{k} {} {} {tv} {th} {} {}", d.v, d.h, d.h_commutative, if ok { "yes" } else { "NO" });
            }
            if !all {
                return Err(Failure::precondition(format!("{out}enumeration disagrees with the closed forms")));
            }
            Ok(out)
        }
        Command::Feedback { c, d, max_degree, method } => {
            Ok(feedback_product_with(&read_series(&c)?, &read_series(&d)?, max_degree, method)?.format())
        }
        Command::Realize { r, max_degree, degree } => {
            let r = read_realization(&r, degree.unwrap_or(max_degree + 2))?;
            Ok(series_from_realization(&r, max_degree)?.format())
        }
        Command::ClosedLoop { plant, controller, degree, max_degree } => {
            let degree = max_degree.map_or(degree, |n| degree.max(n + 2));
            let cl = closed_loop_realization(&read_realization(&plant, degree)?, &read_realization(&controller, degree)?)?;
            match max_degree {
                Some(n) => Ok(series_from_realization(&cl, n)?.format()),
                None => Ok(cl.to_json() + "\n"),
            }
        }
        Command::Respond { c, order } => {
            let responses = natural_response_taylor(&read_series(&c)?, order)?;
            let mut out = String::new();
            for (i, r) in responses.iter().enumerate() {
                for (k, a) in r.coefficients.iter().enumerate() {
                    if !a.is_zero() {
                        let _ = writeln!(out, "{} {k} {a}", i + 1);
                    }
                }
            }
            Ok(out)
        }
        Command::Simulate { c, input } => {
            let u = SampledSignal::from_csv(&read(&input)?)?;
            let out = eval_fliess(&read_series(&c)?, &u)?;
            if let Some(w) = &out.warning {
                eprintln!("warning: {w}");
            }
            Ok(trace_csv(&out))
        }
        Command::Radius { mode, k, m_growth, inputs } => {
            let r = radius_inverse(mode, k, m_growth, inputs)?;
            Ok(format!(
                "amplification {}\ngeometric_constant {}\nradius {}\n",
                format_significant(r.amplification, 9),
                format_significant(r.geometric_constant, 9),
                format_significant(r.radius, 9)
            ))
        }
        Command::Growthfit { c, component, mode, from, to, csv } => {
            let c = read_series(&c)?;
            if component == 0 || component > c.l() {
                return Err(Failure::precondition(format!("component must be in 1..={}", c.l())));
            }
            let coeffs = natural_coefficients(&c, component - 1);
            let fit = growth_fit(&coeffs, mode, from, to.unwrap_or(c.truncation()))?;
            if let Some(path) = csv {
                fs::write(&path, growth_csv(&fit))
                    .map_err(|e| Failure::precondition(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok(format!(
                "points {}\nslope {}\nintercept {}\nr_squared {}\nM {}\n",
                fit.points.len(),
                format_significant(fit.slope, 9),
                format_significant(fit.intercept, 9),
                format_significant(fit.r_squared, 9),
                format_significant(fit.m_estimate, 9)
            ))
        }
        Command::ReproduceAxle { max_degree, fit_order } => axle::reproduce(max_degree, fit_order),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
