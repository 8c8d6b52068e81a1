//! The torus-integration engine. Higher measures m_{p,k}(f) come from the
//! constant-term algorithm: write f = a t^l (1 + g), truncate the log
//! series L of 1 + g, extract constant terms b_j = [L^j]_0 and assemble
//! sum_i binom(k,i) log_p^i(a) b_{k-i}. The zeta measure Z_p(s, f) is the
//! exponential variant <a>^s sum_j s^j b_j / j!, run over either scalar s
//! or a formal jet through the same code path. A finite root-of-unity
//! average provides an independent oracle, with an explicit predicted
//! agreement valuation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extension::{eval_laurent, UnramifiedField};
use crate::laurent::LaurentPoly;
use crate::padic::{PadicContext, PadicScalar};
use crate::ring::{min_tail_valuation, tail_cutoff, Valuation};
use crate::series::{factorial, SJet, SJetRing, SRing};

/// How a value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ConstantTermEngine,
    ClosedForm,
    FiniteAverage,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ConstantTermEngine => "constant_term_engine",
            Method::ClosedForm => "closed_form",
            Method::FiniteAverage => "finite_average",
        }
    }
}

/// Truncation orders and oracle metadata for one computation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    /// Terms kept in the log series of 1 + g.
    pub log_terms: Option<u64>,
    /// Terms kept in the exponential sum over s^j b_j / j!.
    pub exp_terms: Option<u64>,
    /// Terms kept in a polylog or hypergeometric closed form.
    pub series_terms: Option<u64>,
    /// Number of sample points of a finite average.
    pub points: Option<u64>,
    /// Valuation down to which a finite average is predicted to agree
    /// with the engine value.
    pub predicted_agreement: Option<i64>,
}

/// A computed measure with its certified precision claim.
#[derive(Debug, Clone)]
pub struct MeasureResult<V> {
    pub value: V,
    pub certified_abs_precision: i64,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

/// L_M = sum_{m=1}^{M} (-1)^{m+1} g^m / m with M chosen so every dropped
/// term sits at valuation >= target_abs. Requires a strictly small g
/// (positive Gauss valuation, no constant term).
pub fn truncated_log_series(
    g: &LaurentPoly<PadicContext>,
    target_abs: i64,
) -> Result<(LaurentPoly<PadicContext>, u64)> {
    let ctx = g.ring().clone();
    if g.is_zero() {
        return Ok((g.clone(), 0));
    }
    let v_g = match g.gauss_valuation() {
        Valuation::Finite(v) if v >= 1 => v,
        _ => return Err(Error::domain("log series needs Gauss valuation >= 1")),
    };
    if !g.constant_term().is_exact_zero() {
        return Err(Error::domain("log series input must have zero constant term"));
    }
    let working = ctx.working_precision();
    let m_max = tail_cutoff(ctx.prime(), v_g, 1, target_abs);
    let mut sum = LaurentPoly::zero(&ctx, g.n_vars());
    let mut power = LaurentPoly::one(&ctx, g.n_vars());
    for m in 1..=m_max {
        power = power.mul_truncated(g, working)?;
        let sign = if m % 2 == 1 { 1i64 } else { -1 };
        let coeff = ctx
            .from_ratio(&BigRational::new(sign.into(), (m as i64).into()))
            .expect("m nonzero");
        sum = sum.add(&power.scale(&coeff))?;
    }
    Ok((sum, m_max))
}

/// Constant terms [L^j]_0 for j = 0..=j_max, sharing the power iteration.
fn constant_terms(
    l: &LaurentPoly<PadicContext>,
    j_max: u64,
) -> Result<Vec<PadicScalar>> {
    let ctx = l.ring().clone();
    let working = ctx.working_precision();
    let mut out = Vec::with_capacity(j_max as usize + 1);
    out.push(ctx.one());
    let mut power = LaurentPoly::one(&ctx, l.n_vars());
    for _ in 1..=j_max {
        power = power.mul_truncated(l, working)?;
        if power.is_zero() {
            // all further powers vanish at working precision
            while out.len() <= j_max as usize {
                out.push(ctx.zero());
            }
            break;
        }
        out.push(power.constant_term());
    }
    while out.len() <= j_max as usize {
        out.push(ctx.zero());
    }
    Ok(out)
}

/// The k-higher Mahler measure via the constant-term algorithm.
pub fn higher_mahler(
    f: &LaurentPoly<PadicContext>,
    k: u32,
) -> Result<MeasureResult<PadicScalar>> {
    let ctx = f.ring().clone();
    let working = ctx.working_precision();
    if k == 0 {
        return Ok(MeasureResult {
            value: ctx.one(),
            certified_abs_precision: working,
            method: Method::ConstantTermEngine,
            diagnostics: Diagnostics::default(),
        });
    }
    let dec = f.decompose_unit()?;
    let target = ctx.target_precision() + 1;
    let (l_series, log_terms) = truncated_log_series(&dec.tail, target)?;
    let b = constant_terms(&l_series, k as u64)?;
    let log_a = dec.coefficient.log()?;
    let mut sum = ctx.zero();
    for i in 0..=k {
        let binom = crate::series::binomial_integer(k as u64, i as u64);
        let coeff = ctx
            .from_ratio(&BigRational::from_integer(BigInt::from(binom)))
            .expect("integer");
        let term = coeff.mul(&log_a.pow(i as u64)).mul(&b[(k - i) as usize]);
        sum = sum.add(&term);
    }
    let certified = sum.abs_precision().capped(target);
    Ok(MeasureResult {
        value: sum.truncate_abs(certified),
        certified_abs_precision: certified,
        method: Method::ConstantTermEngine,
        diagnostics: Diagnostics { log_terms: Some(log_terms), ..Default::default() },
    })
}

/// Z_p(s, f) = <a>^s sum_j s^j b_j / j!, generic over the ring the
/// exponent lives in: p-adic scalars evaluate pointwise, jets extract all
/// Taylor coefficients in one pass through the identical path.
pub fn zeta_mahler_in<S: SRing>(
    f: &LaurentPoly<PadicContext>,
    sring: &S,
    s: &S::Elem,
) -> Result<MeasureResult<S::Elem>> {
    let ctx = f.ring().clone();
    if !sring.val_floor(s).at_least(0) {
        return Err(Error::domain("exponent outside the closed unit disc"));
    }
    let dec = f.decompose_unit()?;
    if sring.is_zero(s) {
        // Z_p(0, f) = m_{p,0}(f) = 1 with no series truncation at all
        return Ok(MeasureResult {
            value: sring.one(),
            certified_abs_precision: ctx.working_precision(),
            method: Method::ConstantTermEngine,
            diagnostics: Diagnostics::default(),
        });
    }
    let target = ctx.target_precision() + 1;
    let (l_series, log_terms) = truncated_log_series(&dec.tail, target)?;

    // j-th term has valuation >= j v_L - (j-1)/(p-1)
    let j_max = match l_series.gauss_valuation() {
        Valuation::Infinite => 0,
        Valuation::Finite(v_l) => {
            let p = ctx.prime() as i64;
            let slope = v_l * (p - 1) - 1;
            debug_assert!(slope >= 1);
            let rhs = target * (p - 1) - 1;
            (rhs + slope - 1).div_euclid(slope).max(0) as u64
        }
    };
    let b = constant_terms(&l_series, j_max)?;

    let mut sum = sring.one();
    let mut s_pow = sring.one();
    let mut j_used = 0;
    for (j, b_j) in b.iter().enumerate().skip(1) {
        s_pow = sring.mul(&s_pow, s);
        if sring.is_zero(&s_pow) {
            break;
        }
        let inv_fact = BigRational::new(BigInt::one(), BigInt::from(factorial(j as u64)));
        let term = sring.scale(&sring.mul(&s_pow, &sring.embed_scalar(b_j)), &inv_fact);
        sum = sring.add(&sum, &term);
        j_used = j as u64;
    }
    let angle = sring.angle_power(&dec.coefficient, s)?;
    let value = sring.mul(&angle, &sum);
    let certified = sring.abs_precision(&value).capped(target);
    Ok(MeasureResult {
        value: sring.truncate_abs(&value, certified),
        certified_abs_precision: certified,
        method: Method::ConstantTermEngine,
        diagnostics: Diagnostics {
            log_terms: Some(log_terms),
            exp_terms: Some(j_used),
            ..Default::default()
        },
    })
}

/// Pointwise zeta Mahler measure at a scalar exponent with |s| <= 1.
pub fn zeta_mahler(
    f: &LaurentPoly<PadicContext>,
    s: &PadicScalar,
) -> Result<MeasureResult<PadicScalar>> {
    let ctx = f.ring().clone();
    zeta_mahler_in(f, &ctx, s)
}

/// The jet of Z_p(s, f) at s = 0 through the given order: coefficient k
/// is m_{p,k}(f) / k!.
pub fn zeta_mahler_jet(
    f: &LaurentPoly<PadicContext>,
    order: usize,
) -> Result<MeasureResult<SJet>> {
    let ring = SJetRing::new(f.ring(), order);
    let s = ring.generator();
    zeta_mahler_in(f, &ring, &s)
}

/// Finite Shnirelman average over mu_N^n inside the unramified tower:
/// (1/N^n) sum over root tuples of log_p^k f(zeta). The returned claim
/// certifies the average itself; `diagnostics.predicted_agreement` bounds
/// how far it can sit from the true measure.
pub fn shnirelman_average(
    f: &LaurentPoly<PadicContext>,
    k: u32,
    tower_degree: usize,
    n_roots: u64,
) -> Result<MeasureResult<PadicScalar>> {
    let ctx = f.ring().clone();
    let dec = f.decompose_unit()?;
    let field = UnramifiedField::new(&ctx, tower_degree)?;
    let roots = field.roots_of_unity(n_roots)?;
    let n_vars = f.n_vars();
    let total = (n_roots as u128).pow(n_vars as u32);
    if total > 1 << 24 {
        return Err(Error::domain("too many sample points"));
    }
    let total = total as u64;

    let sum = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut idx = flat;
            let mut point = Vec::with_capacity(n_vars);
            for _ in 0..n_vars {
                point.push(roots[(idx % n_roots) as usize].clone());
                idx /= n_roots;
            }
            let value = eval_laurent(f, &point)?;
            Ok(value.log()?.pow(k as u64))
        })
        .try_reduce(
            || field.zero_elem(),
            |a, b| Ok(a.add(&b)),
        )?;

    let count = BigInt::from(total);
    let scale = ctx
        .from_bigint(&count)
        .inv()
        .expect("N^n is a unit (coprime to p)");
    let value = sum.mul(&field.embed(&scale)).into_base_field()?;

    let predicted = predicted_oracle_agreement(&dec.tail, n_roots, &ctx);
    let certified = value.abs_precision().capped(ctx.working_precision());
    Ok(MeasureResult {
        value: value.truncate_abs(certified),
        certified_abs_precision: certified,
        method: Method::FiniteAverage,
        diagnostics: Diagnostics {
            points: Some(total),
            predicted_agreement: Some(predicted),
            ..Default::default()
        },
    })
}

/// Artifact-derived agreement bound for the finite average: the first
/// series terms the average keeps but the integral drops are monomials of
/// g^m whose exponents are nonzero multiples of N in every coordinate,
/// which needs m >= N / deg_inf(g); each such term has valuation
/// >= m v_g - floor(log_p m). Reported as a diagnostic, capped by the
/// engine's own certification target.
fn predicted_oracle_agreement(
    g: &LaurentPoly<PadicContext>,
    n_roots: u64,
    ctx: &PadicContext,
) -> i64 {
    let target = ctx.target_precision() + 1;
    if g.is_zero() || n_roots == 0 {
        return target;
    }
    let deg_inf = g
        .iter()
        .map(|(e, _)| e.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0))
        .max()
        .unwrap_or(1)
        .max(1);
    let v_g = match g.gauss_valuation() {
        Valuation::Finite(v) => v,
        Valuation::Infinite => return target,
    };
    let m0 = n_roots.div_ceil(deg_inf);
    min_tail_valuation(ctx.prime(), v_g, 1, m0).min(target)
}

/// Convergence bound data for the zeta series in the formal variable.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusBound {
    /// C = min(v(log_p a), inf_m (m v_g - floor(log_p m))); every
    /// m_{p,k}(f) then satisfies |m_{p,k}| <= p^{-Ck}.
    pub decay: Valuation,
    /// log_p of the certified convergence radius, C - 1/(p-1); none when
    /// every coefficient vanishes (the series is identically 1).
    pub log_radius: Option<BigRational>,
    /// Whether the closed-unit-disc criterion (decay constant exceeding
    /// 1/(p-1)) is met.
    pub closed_disc: bool,
}

/// Certified decay constant and convergence radius for Z_p(X, f).
pub fn radius_bound(f: &LaurentPoly<PadicContext>) -> Result<RadiusBound> {
    let ctx = f.ring().clone();
    let dec = f.decompose_unit()?;
    let v_log_a = dec.coefficient.log()?.val_floor();
    let v_series = match dec.tail.gauss_valuation() {
        Valuation::Infinite => Valuation::Infinite,
        Valuation::Finite(v_g) => {
            Valuation::Finite(min_tail_valuation(ctx.prime(), v_g, 1, 1))
        }
    };
    let decay = v_log_a.meet(v_series);
    let p = ctx.prime() as i64;
    Ok(match decay {
        Valuation::Infinite => RadiusBound {
            decay,
            log_radius: None,
            closed_disc: true,
        },
        Valuation::Finite(c) => RadiusBound {
            decay,
            log_radius: Some(
                BigRational::from_integer(c.into())
                    - BigRational::new(BigInt::one(), (p - 1).into()),
            ),
            // integer C exceeds 1/(p-1) exactly when C >= 1 (p >= 3)
            closed_disc: c >= 1,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::eval_laurent;
    use crate::laurent::quadratic_from_roots;
    use crate::padic::agreement_valuation;

    fn ctx() -> PadicContext {
        PadicContext::new(5, 4, 6).unwrap()
    }

    fn deep() -> PadicContext {
        PadicContext::with_default_guard(5, 30).unwrap()
    }

    fn standard_quadratic(ctx: &PadicContext) -> LaurentPoly<PadicContext> {
        let alpha = ctx.from_rational_parts(&1.into(), &5.into()).unwrap();
        let beta = ctx.from_i64(5);
        quadratic_from_roots(&alpha, &beta)
    }

    #[test]
    fn log_series_examples() {
        let ctx = ctx();
        let zero = LaurentPoly::zero(&ctx, 1);
        let (l, m) = truncated_log_series(&zero, 5).unwrap();
        assert!(l.is_zero());
        assert_eq!(m, 0);

        // g = -5t at target 4+1: terms -5t - 25t^2/2 - 125t^3/3 - 625t^4/4 - ...
        let g = LaurentPoly::from_terms(&ctx, 1, [(vec![1], ctx.from_i64(-5))]);
        let (l, _) = truncated_log_series(&g, 5).unwrap();
        let expect = [
            (1i64, ctx.from_i64(-5)),
            (2, ctx.from_rational_parts(&(-25).into(), &2.into()).unwrap()),
            (3, ctx.from_rational_parts(&(-125).into(), &3.into()).unwrap()),
            (4, ctx.from_rational_parts(&(-625).into(), &4.into()).unwrap()),
        ];
        for (e, c) in expect {
            assert!(
                agreement_valuation(&l.coefficient(&[e]), &c).at_least(5),
                "coefficient of t^{e}"
            );
        }
        // every kept term has valuation >= v_g
        assert!(l.gauss_valuation().at_least(1));

        // positive-valuation precondition
        let bad = LaurentPoly::from_terms(&ctx, 1, [(vec![1], ctx.one())]);
        assert!(truncated_log_series(&bad, 5).is_err());
    }

    #[test]
    fn monomials_have_vanishing_measures() {
        let ctx = ctx();
        let mono = LaurentPoly::from_terms(
            &ctx,
            2,
            [(vec![3, -2], ctx.one())],
        );
        for k in 1..=3u32 {
            let m = higher_mahler(&mono, k).unwrap();
            assert!(m.value.is_exact_zero(), "k = {k}");
        }
        let m0 = higher_mahler(&mono, 0).unwrap();
        assert_eq!(m0.value, ctx.one());
    }

    #[test]
    fn first_measure_of_two_term_poly_is_a_log() {
        // m_p(t - 6/5) = log_p(6/5) = log_p 6: the tail powers have no
        // constant terms, so only i = k survives
        let ctx = ctx();
        let f = LaurentPoly::from_terms(
            &ctx,
            1,
            [
                (vec![1], ctx.one()),
                (vec![0], ctx.from_rational_parts(&(-6).into(), &5.into()).unwrap()),
            ],
        );
        let m = higher_mahler(&f, 1).unwrap();
        assert_eq!(m.value.integer_residue(4).unwrap(), 555u32.into());
    }

    #[test]
    fn worked_example_k2() {
        // m_{p,2}((t-1/5)(t-5)) = 2 Li_2(25) = 50 mod 5^4
        let ctx = ctx();
        let f = standard_quadratic(&ctx);
        let m = higher_mahler(&f, 2).unwrap();
        assert_eq!(m.value.integer_residue(4).unwrap(), 50u32.into());
    }

    #[test]
    fn nonvanishing_error_propagates() {
        let ctx = ctx();
        let f = LaurentPoly::from_terms(&ctx, 1, [(vec![1], ctx.one()), (vec![0], ctx.one())]);
        assert!(matches!(higher_mahler(&f, 1), Err(Error::Nonvanishing)));
    }

    #[test]
    fn zeta_at_zero_is_exactly_one() {
        let ctx = deep();
        let f = standard_quadratic(&ctx);
        let z = zeta_mahler(&f, &ctx.zero()).unwrap();
        assert_eq!(z.value, ctx.one());
    }

    #[test]
    fn zeta_of_monomial_is_one() {
        let ctx = deep();
        let mono = LaurentPoly::monomial(&ctx, vec![4]);
        let s = ctx.from_i64(7);
        let z = zeta_mahler(&mono, &s).unwrap();
        assert!(agreement_valuation(&z.value, &ctx.one()).at_least(ctx.target_precision()));
    }

    #[test]
    fn zeta_at_one_matches_closed_value() {
        // Z_p(1, (t-1/5)(t-5)) = <1/5> (1 + 25) = 26
        let ctx = deep();
        let f = standard_quadratic(&ctx);
        let z = zeta_mahler(&f, &ctx.one()).unwrap();
        assert!(
            agreement_valuation(&z.value, &ctx.from_i64(26)).at_least(ctx.target_precision()),
            "got {}",
            z.value
        );
    }

    #[test]
    fn zeta_rejects_large_exponent() {
        let ctx = deep();
        let f = standard_quadratic(&ctx);
        let s = ctx.from_rational_parts(&1.into(), &5.into()).unwrap();
        assert!(zeta_mahler(&f, &s).is_err());
    }

    #[test]
    fn jet_coefficients_match_higher_measures() {
        let ctx = deep();
        let f = standard_quadratic(&ctx);
        let jet = zeta_mahler_jet(&f, 3).unwrap();
        assert!(
            agreement_valuation(jet.value.coefficient(0), &ctx.one())
                .at_least(ctx.target_precision())
        );
        let mut fact = BigInt::one();
        for k in 1..=3usize {
            fact *= BigInt::from(k as i64);
            let mk = higher_mahler(&f, k as u32).unwrap();
            let coeff = jet
                .value
                .coefficient(k)
                .mul(&ctx.from_ratio(&BigRational::from_integer(fact.clone())).unwrap());
            assert!(
                agreement_valuation(&coeff, &mk.value).at_least(20),
                "k = {k}"
            );
        }
        // coефficient 2 = Li_2(25) = 25 mod 5^4
        assert_eq!(jet.value.coefficient(2).integer_residue(4).unwrap(), 25u32.into());
    }

    #[test]
    fn average_over_mu_one_is_value_at_one() {
        let ctx = ctx();
        let f = standard_quadratic(&ctx);
        let avg = shnirelman_average(&f, 2, 1, 1).unwrap();
        // log^2 f(1): f(1) = 1 - 26/5 + 1 = -16/5
        let at_one = ctx
            .from_rational_parts(&(-16).into(), &5.into())
            .unwrap()
            .log()
            .unwrap()
            .pow(2);
        assert!(agreement_valuation(&avg.value, &at_one).at_least(4));
        assert_eq!(avg.diagnostics.points, Some(1));
    }

    #[test]
    fn average_of_identity_function_vanishes() {
        // not a measure: the plain average of z over mu_4 is 0
        let ctx = ctx();
        let field = UnramifiedField::new(&ctx, 1).unwrap();
        let t = LaurentPoly::monomial(&ctx, vec![1]);
        let mut sum = field.zero_elem();
        for z in field.roots_of_unity(4).unwrap() {
            sum = sum.add(&eval_laurent(&t, &[z]).unwrap());
        }
        assert!(sum.is_zero_to_working());
    }

    #[test]
    fn log_factor_kills_the_average() {
        // appending log_p z to the integrand yields 0 at every root
        let ctx = ctx();
        let field = UnramifiedField::new(&ctx, 1).unwrap();
        let h = standard_quadratic(&ctx);
        let mut sum = field.zero_elem();
        for z in field.roots_of_unity(4).unwrap() {
            let integrand = z.log().unwrap().mul(&eval_laurent(&h, &[z.clone()]).unwrap());
            assert!(integrand.val_floor().at_least(ctx.target_precision()));
            sum = sum.add(&integrand);
        }
        assert!(sum.val_floor().at_least(ctx.target_precision()));
    }

    #[test]
    fn oracle_converges_to_engine_value() {
        let ctx = deep();
        let f = standard_quadratic(&ctx);
        let engine = higher_mahler(&f, 2).unwrap();

        let small = shnirelman_average(&f, 2, 1, 4).unwrap();
        let small_pred = small.diagnostics.predicted_agreement.unwrap();
        let small_agree = agreement_valuation(&small.value, &engine.value);
        assert!(small_agree.at_least(small_pred), "mu_4: {small_agree} < {small_pred}");

        let large = shnirelman_average(&f, 2, 2, 24).unwrap();
        let large_pred = large.diagnostics.predicted_agreement.unwrap();
        let large_agree = agreement_valuation(&large.value, &engine.value);
        assert!(large_agree.at_least(large_pred), "mu_24: {large_agree} < {large_pred}");

        // more roots, strictly more agreement
        assert!(large_agree > small_agree);
    }

    #[test]
    fn oracle_validates_divisibility() {
        let ctx = ctx();
        let f = standard_quadratic(&ctx);
        assert!(shnirelman_average(&f, 1, 1, 3).is_err());
        assert!(shnirelman_average(&f, 1, 1, 5).is_err());
    }

    #[test]
    fn radius_bound_examples() {
        let ctx = deep();
        // f = 1 + 5t: log a = 0 contributes infinity, the series infimum is 1
        let f = LaurentPoly::from_terms(&ctx, 1, [(vec![0], ctx.one()), (vec![1], ctx.from_i64(5))]);
        let rb = radius_bound(&f).unwrap();
        assert_eq!(rb.decay, Valuation::Finite(1));
        assert_eq!(rb.log_radius, Some(BigRational::new(3.into(), 4.into())));
        assert!(rb.closed_disc);

        // pure monomial: all measures vanish
        let mono = LaurentPoly::monomial(&ctx, vec![2]);
        let rb = radius_bound(&mono).unwrap();
        assert_eq!(rb.decay, Valuation::Infinite);
        assert!(rb.closed_disc);
        assert!(rb.log_radius.is_none());
    }

    #[test]
    fn measure_decay_respects_radius_constant() {
        // |m_{p,k}| <= p^{-k} for the standard quadratic, k <= 6
        let ctx = deep();
        let f = standard_quadratic(&ctx);
        for k in 1..=6u32 {
            let m = higher_mahler(&f, k).unwrap();
            assert!(
                m.value.val_floor().at_least(k as i64),
                "k = {k}: valuation {}",
                m.value.val_floor()
            );
        }
    }
}
