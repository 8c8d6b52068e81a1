//! Closed-form right-hand sides used to cross-verify the constant-term
//! engine: the polylogarithmic formula for the higher measures of a
//! quadratic with one large and one small root, the Gauss-hypergeometric
//! form of its zeta measure, and the hypergeometric forms for the
//! two-variable cross polynomial t1 + 1/t1 + t2 + 1/t2 + c.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::hoffman::ones_product_word;
use crate::laurent::LaurentPoly;
use crate::measure::{Diagnostics, MeasureResult, Method};
use crate::padic::{PadicContext, PadicScalar};
use crate::ring::Valuation;
use crate::series::{factorial, hypergeometric, multipolylog_word, SJet, SJetRing, SRing};

/// 0 < |beta| < 1 < |alpha|, the standing hypothesis for the quadratic
/// closed forms.
fn check_root_sizes(alpha: &PadicScalar, beta: &PadicScalar) -> Result<()> {
    let va = alpha.val_floor();
    let vb = beta.val_floor();
    if !matches!(va, Valuation::Finite(v) if v <= -1) {
        return Err(Error::domain("alpha must satisfy |alpha| > 1 (valuation <= -1)"));
    }
    if !vb.at_least(1) || vb.is_infinite() {
        return Err(Error::domain("beta must satisfy 0 < |beta| < 1 (valuation >= 1)"));
    }
    Ok(())
}

/// |c| > 1, the hypothesis for the cross-polynomial closed forms.
fn check_large(c: &PadicScalar) -> Result<()> {
    if !matches!(c.val_floor(), Valuation::Finite(v) if v <= -1) {
        return Err(Error::domain("c must satisfy |c| > 1 (valuation <= -1)"));
    }
    Ok(())
}

/// The polylogarithmic closed form for m_{p,k}((t-alpha)(t-beta)):
///
///   log_p^k(alpha) + sum over i,j >= 1 with i+j <= k of
///   (-1)^{i+j} k!/(k-i-j)! log_p^{k-i-j}(alpha) Li_{w(i,j)}(beta/alpha)
///
/// where w(i,j) is the harmonic-product word of two runs of ones capped
/// by a final 2.
pub fn quadratic_measure_rhs(
    alpha: &PadicScalar,
    beta: &PadicScalar,
    k: u32,
) -> Result<MeasureResult<PadicScalar>> {
    check_root_sizes(alpha, beta)?;
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    let ctx = alpha.context().clone();
    let target = ctx.target_precision() + 1;
    let ratio = beta.div(alpha)?;
    let log_a = alpha.log()?;
    let mut sum = log_a.pow(k as u64);
    let mut series_terms = 0u64;
    let k_fact = BigInt::from(factorial(k as u64));
    for i in 1..k {
        for j in 1..=(k - i) {
            let li = multipolylog_word(&ctx, &ones_product_word(i, j), &ratio, target)?;
            series_terms = series_terms.max(li.terms_used);
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            let coeff = BigRational::new(
                BigInt::from(sign) * &k_fact,
                BigInt::from(factorial((k - i - j) as u64)),
            );
            let term = li
                .value
                .mul(&log_a.pow((k - i - j) as u64))
                .mul(&ctx.from_ratio(&coeff).expect("nonzero denominator"));
            sum = sum.add(&term);
        }
    }
    let certified = sum.abs_precision().capped(target);
    Ok(MeasureResult {
        value: sum.truncate_abs(certified),
        certified_abs_precision: certified,
        method: Method::ClosedForm,
        diagnostics: Diagnostics { series_terms: Some(series_terms), ..Default::default() },
    })
}

/// Gauss-hypergeometric closed form for the quadratic's zeta measure:
/// <alpha>^s 2F1(-s, -s; 1; beta/alpha), over scalar or jet exponents.
pub fn quadratic_zeta_rhs_in<S: SRing>(
    sring: &S,
    alpha: &PadicScalar,
    beta: &PadicScalar,
    s: &S::Elem,
) -> Result<MeasureResult<S::Elem>> {
    check_root_sizes(alpha, beta)?;
    if !sring.val_floor(s).at_least(0) {
        return Err(Error::domain("exponent outside the closed unit disc"));
    }
    let ctx = alpha.context().clone();
    let target = ctx.target_precision() + 1;
    let ratio = sring.embed_scalar(&beta.div(alpha)?);
    let neg_s = sring.neg(s);
    let f = hypergeometric(sring, &[neg_s.clone(), neg_s], &[1], &ratio, target)?;
    let angle = sring.angle_power(alpha, s)?;
    let value = sring.mul(&angle, &f.value);
    let certified = sring.abs_precision(&value).capped(target);
    Ok(MeasureResult {
        value: sring.truncate_abs(&value, certified),
        certified_abs_precision: certified,
        method: Method::ClosedForm,
        diagnostics: Diagnostics { series_terms: Some(f.terms_used), ..Default::default() },
    })
}

pub fn quadratic_zeta_rhs(
    alpha: &PadicScalar,
    beta: &PadicScalar,
    s: &PadicScalar,
) -> Result<MeasureResult<PadicScalar>> {
    let ctx = alpha.context().clone();
    quadratic_zeta_rhs_in(&ctx, alpha, beta, s)
}

pub fn quadratic_zeta_rhs_jet(
    alpha: &PadicScalar,
    beta: &PadicScalar,
    order: usize,
) -> Result<MeasureResult<SJet>> {
    let ring = SJetRing::new(alpha.context(), order);
    let s = ring.generator();
    quadratic_zeta_rhs_in(&ring, alpha, beta, &s)
}

/// The cross polynomial t1 + 1/t1 + t2 + 1/t2 + c.
pub fn cross_polynomial(c: &PadicScalar) -> LaurentPoly<PadicContext> {
    let ctx = c.context().clone();
    LaurentPoly::from_terms(
        &ctx,
        2,
        [
            (vec![1, 0], ctx.one()),
            (vec![-1, 0], ctx.one()),
            (vec![0, 1], ctx.one()),
            (vec![0, -1], ctx.one()),
            (vec![0, 0], c.clone()),
        ],
    )
}

/// Hypergeometric closed form for the cross polynomial's zeta measure:
/// <c>^s 3F2(1/2, -s/2, (1-s)/2; 1, 1; 16/c^2).
pub fn cross_zeta_rhs_in<S: SRing>(
    sring: &S,
    c: &PadicScalar,
    s: &S::Elem,
) -> Result<MeasureResult<S::Elem>> {
    check_large(c)?;
    if !sring.val_floor(s).at_least(0) {
        return Err(Error::domain("exponent outside the closed unit disc"));
    }
    let ctx = c.context().clone();
    let target = ctx.target_precision() + 1;
    let z_scalar = ctx.from_i64(16).div(&c.mul(c))?;
    let z = sring.embed_scalar(&z_scalar);
    let half = BigRational::new(1.into(), 2.into());
    let upper = [
        sring.from_rational(&half)?,
        sring.scale(s, &-&half),
        sring.scale(&sring.sub(&sring.one(), s), &half),
    ];
    let f = hypergeometric(sring, &upper, &[1, 1], &z, target)?;
    let angle = sring.angle_power(c, s)?;
    let value = sring.mul(&angle, &f.value);
    let certified = sring.abs_precision(&value).capped(target);
    Ok(MeasureResult {
        value: sring.truncate_abs(&value, certified),
        certified_abs_precision: certified,
        method: Method::ClosedForm,
        diagnostics: Diagnostics { series_terms: Some(f.terms_used), ..Default::default() },
    })
}

pub fn cross_zeta_rhs(c: &PadicScalar, s: &PadicScalar) -> Result<MeasureResult<PadicScalar>> {
    let ctx = c.context().clone();
    cross_zeta_rhs_in(&ctx, c, s)
}

pub fn cross_zeta_rhs_jet(c: &PadicScalar, order: usize) -> Result<MeasureResult<SJet>> {
    let ring = SJetRing::new(c.context(), order);
    let s = ring.generator();
    cross_zeta_rhs_in(&ring, c, &s)
}

/// Closed form for the first measure of the cross polynomial:
/// log_p(c) - (2/c^2) 4F3(3/2, 3/2, 1, 1; 2, 2, 2; 16/c^2).
pub fn cross_measure_rhs(c: &PadicScalar) -> Result<MeasureResult<PadicScalar>> {
    check_large(c)?;
    let ctx = c.context().clone();
    let target = ctx.target_precision() + 1;
    let z = ctx.from_i64(16).div(&c.mul(c))?;
    let three_halves = ctx
        .from_rational_parts(&3.into(), &2.into())
        .expect("p odd");
    let upper = [three_halves.clone(), three_halves, ctx.one(), ctx.one()];
    let f = hypergeometric(&ctx, &upper, &[2, 2, 2], &z, target)?;
    let correction = ctx.from_i64(2).div(&c.mul(c))?.mul(&f.value);
    let value = c.log()?.sub(&correction);
    let certified = value.abs_precision().capped(target);
    Ok(MeasureResult {
        value: value.truncate_abs(certified),
        certified_abs_precision: certified,
        method: Method::ClosedForm,
        diagnostics: Diagnostics { series_terms: Some(f.terms_used), ..Default::default() },
    })
}
