//! `mahler`: compute p-adic higher Mahler measures and zeta Mahler
//! measures of Laurent polynomials on the p-adic torus, and run the
//! verification matrix comparing the constant-term engine against the
//! closed forms and the root-of-unity averaging oracle.
//!
//! Exit codes: 0 success (and verification PASS), 1 usage or parse
//! errors (and verification FAIL), 2 mathematical domain errors.

mod render;
mod verify_cmd;

use std::fs;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use mahler_core::laurent::LaurentPoly;
use mahler_core::measure::{higher_mahler, radius_bound, shnirelman_average, zeta_mahler, zeta_mahler_jet};
use mahler_core::padic::{agreement_valuation, PadicContext, PadicScalar};
use mahler_core::series::{hypergeometric, multipolylog};
use mahler_core::hoffman::Index;
use mahler_core::{Error, Result};

use render::{render_jet_result, render_scalar_result, OutputFormat};

#[derive(Parser)]
#[command(
    name = "mahler",
    version,
    about = "Exact p-adic Mahler measure calculator",
    after_help = "Polynomials use the JSON schema \
{\"vars\":n,\"terms\":[{\"coeff\":\"<p-adic literal>\",\"exp\":[e1,..,en]}]} \
(inline or @file.json); p-adic literals are <int>, <int>/<int> or p^<v>*<int>."
)]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Odd prime of the base field
    #[arg(long = "p", global = true, default_value_t = 5)]
    p: u64,

    /// Target precision: requested p-adic digits of final answers
    #[arg(long = "prec", global = true, default_value_t = 30)]
    prec: u32,

    /// Extra working digits on top of the target precision
    #[arg(long = "guard", global = true, default_value_t = 10)]
    guard: u32,

    /// Degree of the unramified tower used by the averaging oracle
    #[arg(long = "tower-degree", global = true, default_value_t = 1)]
    tower_degree: usize,

    /// Output format
    #[arg(long = "format", global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the k-higher Mahler measure m_{p,k}(f)
    Measure {
        /// Polynomial (inline JSON or @file.json)
        #[arg(long = "poly")]
        poly: String,
        /// Which higher measure to compute
        #[arg(short = 'k', long = "k")]
        k: u32,
    },
    /// Compute the zeta Mahler measure Z_p(s, f) at a scalar s or as a jet
    Zeta {
        #[arg(long = "poly")]
        poly: String,
        /// Scalar exponent (p-adic literal with |s| <= 1)
        #[arg(long = "s", conflicts_with = "jet")]
        s: Option<String>,
        /// Jet truncation order: report coefficients of s^0..s^K
        #[arg(long = "jet")]
        jet: Option<usize>,
    },
    /// Run one target of the verification matrix
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
        /// Larger root of the quadratic (|alpha| > 1)
        #[arg(long = "alpha", default_value = "p^-1*1")]
        alpha: String,
        /// Smaller root of the quadratic (0 < |beta| < 1)
        #[arg(long = "beta", default_value = "p^1*1")]
        beta: String,
        /// Constant of the cross polynomial (|c| > 1)
        #[arg(long = "c", default_value = "p^-1*1")]
        c: String,
        /// Exponent for the zeta comparisons
        #[arg(long = "s", default_value = "1")]
        s: String,
        /// Measure order for the measure comparisons
        #[arg(short = 'k', long = "k", default_value_t = 2)]
        k: u32,
        /// Weight bound for the word-algebra laws
        #[arg(long = "max-weight", default_value_t = 5)]
        max_weight: u32,
        /// Polylog argument for the double-sum comparison
        #[arg(long = "t")]
        t: Option<String>,
        /// Polynomial for invariance/radius targets (defaults per target)
        #[arg(long = "poly")]
        poly: Option<String>,
    },
    /// Average log_p^k f over N-th roots of unity and compare to the engine
    Average {
        #[arg(long = "poly")]
        poly: String,
        #[arg(short = 'k', long = "k")]
        k: u32,
        /// Root counts, each dividing p^tower_degree - 1
        #[arg(long = "N", value_delimiter = ',', required = true)]
        n: Vec<u64>,
    },
    /// Report the certified decay constant and convergence radius
    Radius {
        #[arg(long = "poly")]
        poly: String,
    },
    /// Evaluate a multiple polylogarithm (debug helper)
    Polylog {
        /// Index, e.g. "(1,2)"
        #[arg(long = "index")]
        index: String,
        /// Argument with |t| < 1
        #[arg(long = "t")]
        t: String,
    },
    /// Evaluate a generalized hypergeometric series (debug helper)
    Hyper {
        /// Upper parameters, comma-separated p-adic literals
        #[arg(long = "upper")]
        upper: String,
        /// Lower parameters, comma-separated positive integers
        #[arg(long = "lower", default_value = "")]
        lower: String,
        /// Argument with |z| < 1
        #[arg(long = "z")]
        z: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyTarget {
    Thm1,
    Thm2,
    Thm3,
    Rv,
    Hoffman,
    Lemma35,
    Invariance,
    Radius,
}

fn load_poly(ctx: &PadicContext, spec: &str) -> Result<LaurentPoly<PadicContext>> {
    let text = if let Some(path) = spec.strip_prefix('@') {
        fs::read_to_string(path).map_err(|e| Error::parse(format!("cannot read {path}: {e}")))?
    } else {
        spec.to_string()
    };
    LaurentPoly::from_json(ctx, &text)
}

fn run(cli: Cli) -> Result<u8> {
    let common = cli.common;
    let ctx = PadicContext::new(common.p, common.prec, common.guard)?;
    let format = common.format;
    match cli.command {
        Command::Measure { poly, k } => {
            let f = load_poly(&ctx, &poly)?;
            let result = higher_mahler(&f, k)?;
            render_scalar_result(&format, &format!("m_{{p,{k}}}"), &result);
            Ok(0)
        }
        Command::Zeta { poly, s, jet } => {
            let f = load_poly(&ctx, &poly)?;
            match (s, jet) {
                (Some(s_lit), None) => {
                    let s = ctx.parse(&s_lit)?;
                    let result = zeta_mahler(&f, &s)?;
                    render_scalar_result(&format, &format!("Z_p({s_lit}, f)"), &result);
                    Ok(0)
                }
                (None, Some(order)) => {
                    let result = zeta_mahler_jet(&f, order)?;
                    render_jet_result(&format, &result);
                    Ok(0)
                }
                _ => Err(Error::parse("provide exactly one of --s or --jet")),
            }
        }
        Command::Verify { target, alpha, beta, c, s, k, max_weight, t, poly } => {
            let options = verify_cmd::VerifyOptions {
                ctx: ctx.clone(),
                alpha,
                beta,
                c,
                s,
                k,
                max_weight,
                t,
                poly,
                format,
            };
            verify_cmd::run(target, options)
        }
        Command::Average { poly, k, n } => {
            let f = load_poly(&ctx, &poly)?;
            let engine = higher_mahler(&f, k)?;
            let mut rows = Vec::new();
            for n_roots in n {
                let avg = shnirelman_average(&f, k, common.tower_degree, n_roots)?;
                let agreement = agreement_valuation(&avg.value, &engine.value);
                rows.push((n_roots, avg, agreement));
            }
            render::render_average_table(&format, &engine, &rows);
            Ok(0)
        }
        Command::Radius { poly } => {
            let f = load_poly(&ctx, &poly)?;
            let bound = radius_bound(&f)?;
            render::render_radius(&format, &bound);
            Ok(0)
        }
        Command::Polylog { index, t } => {
            let index = Index::parse(&index)?;
            let t = ctx.parse(&t)?;
            let eval = multipolylog(&ctx, &index, &t, ctx.target_precision() + 1)?;
            render::render_series(&format, &format!("Li_{index}({})", t.literal()), &eval);
            Ok(0)
        }
        Command::Hyper { upper, lower, z } => {
            let upper: Vec<PadicScalar> = upper
                .split(',')
                .map(|piece| ctx.parse(piece))
                .collect::<Result<_>>()?;
            let lower: Vec<u64> = lower
                .split(',')
                .filter(|piece| !piece.trim().is_empty())
                .map(|piece| {
                    piece
                        .trim()
                        .parse::<u64>()
                        .map_err(|_| Error::parse(format!("bad lower parameter `{piece}`")))
                })
                .collect::<Result<_>>()?;
            let z = ctx.parse(&z)?;
            let eval = hypergeometric(&ctx, &upper, &lower, &z, ctx.target_precision() + 1)?;
            render::render_series(&format, "hypergeometric value", &eval);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) => ExitCode::from(1),
                Error::Domain(_) | Error::Nonvanishing => ExitCode::from(2),
            }
        }
    }
}
