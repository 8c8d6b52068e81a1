//! The `verify` subcommand: dispatch one target of the verification
//! matrix and report PASS/FAIL per comparison.

use serde_json::json;

use mahler_core::closedform::cross_polynomial;
use mahler_core::laurent::LaurentPoly;
use mahler_core::padic::PadicContext;
use mahler_core::verify::{
    check_combinatorial_identities, check_cross_measure, check_cross_zeta, check_double_sums,
    check_hoffman, check_invariance, check_prefix_homomorphism, check_quadratic_measure,
    check_quadratic_zeta, check_radius, thresholds, CheckOutcome,
};
use mahler_core::Result;

use crate::render::OutputFormat;
use crate::VerifyTarget;

pub struct VerifyOptions {
    pub ctx: PadicContext,
    pub alpha: String,
    pub beta: String,
    pub c: String,
    pub s: String,
    pub k: u32,
    pub max_weight: u32,
    pub t: Option<String>,
    pub poly: Option<String>,
    pub format: OutputFormat,
}

pub fn run(target: VerifyTarget, opts: VerifyOptions) -> Result<u8> {
    let ctx = &opts.ctx;
    let outcomes: Vec<CheckOutcome> = match target {
        VerifyTarget::Thm1 => {
            let alpha = ctx.parse(&opts.alpha)?;
            let beta = ctx.parse(&opts.beta)?;
            vec![check_quadratic_measure(&alpha, &beta, opts.k)?]
        }
        VerifyTarget::Thm2 => {
            let alpha = ctx.parse(&opts.alpha)?;
            let beta = ctx.parse(&opts.beta)?;
            let s = ctx.parse(&opts.s)?;
            vec![check_quadratic_zeta(&alpha, &beta, &s)?]
        }
        VerifyTarget::Thm3 => {
            let c = ctx.parse(&opts.c)?;
            let s = ctx.parse(&opts.s)?;
            vec![check_cross_zeta(&c, &s)?]
        }
        VerifyTarget::Rv => {
            let c = ctx.parse(&opts.c)?;
            vec![check_cross_measure(&c)?]
        }
        VerifyTarget::Hoffman => {
            vec![
                check_hoffman(opts.max_weight),
                check_prefix_homomorphism(
                    thresholds::PREFIX_HOM_MAX_WEIGHT,
                    thresholds::PREFIX_HOM_CUTOFF,
                ),
                check_combinatorial_identities(thresholds::COMBINATORIAL_MAX_M),
            ]
        }
        VerifyTarget::Lemma35 => {
            let args = match &opts.t {
                Some(text) => vec![ctx.parse(text)?],
                None => {
                    let p = ctx.prime() as i64;
                    vec![ctx.from_i64(p), ctx.from_i64(p * p)]
                }
            };
            let mut all = Vec::new();
            for t in &args {
                all.extend(check_double_sums(ctx, t)?);
            }
            all
        }
        VerifyTarget::Invariance => {
            let f = match &opts.poly {
                Some(spec) => crate::load_poly(ctx, spec)?,
                None => {
                    let c = ctx.parse(&opts.c)?;
                    cross_polynomial(&c)
                }
            };
            check_invariance(&f, opts.k.min(2))?
        }
        VerifyTarget::Radius => {
            let f = match &opts.poly {
                Some(spec) => crate::load_poly(ctx, spec)?,
                None => {
                    let p = ctx.prime() as i64;
                    LaurentPoly::from_terms(
                        ctx,
                        1,
                        [(vec![0], ctx.one()), (vec![1], ctx.from_i64(p))],
                    )
                }
            };
            check_radius(&f)?
        }
    };

    let all_pass = outcomes.iter().all(|o| o.pass);
    match opts.format {
        OutputFormat::Text => {
            for o in &outcomes {
                println!("[{}] {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.label, o.detail);
            }
            println!(
                "verification {}: {}/{} checks passed",
                if all_pass { "PASS" } else { "FAIL" },
                outcomes.iter().filter(|o| o.pass).count(),
                outcomes.len()
            );
        }
        OutputFormat::Json => {
            let doc = json!({
                "pass": all_pass,
                "checks": outcomes.iter().map(|o| json!({
                    "label": o.label,
                    "detail": o.detail,
                    "pass": o.pass,
                })).collect::<Vec<_>>(),
            });
            println!("{doc}");
        }
    }
    Ok(if all_pass { 0 } else { 1 })
}
