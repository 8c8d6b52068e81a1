//! Certified p-adic evaluation of multiple polylogarithms, Pochhammer
//! symbols and generalized hypergeometric series, over any valued
//! coefficient ring (scalars, extension scalars, jets). Every sum is
//! truncated by an explicit tail bound: the dropped terms all sit at
//! valuation >= the certification target.

pub mod sjet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hoffman::{Index, WordPoly};
use crate::ring::{tail_cutoff, Ring, ValuedRing};

pub use sjet::{jet_agreement, SJet, SJetRing, SRing};

/// A certified series value: the evaluation, how many terms were summed,
/// and the absolute precision to which the result is claimed.
#[derive(Debug, Clone)]
pub struct SeriesEval<T> {
    pub value: T,
    pub terms_used: u64,
    pub certified_abs: i64,
}

fn certify<R: ValuedRing>(ring: &R, value: R::Elem, terms: u64, target: i64) -> SeriesEval<R::Elem> {
    let certified = ring.abs_precision(&value).capped(target);
    SeriesEval {
        value: ring.truncate_abs(&value, certified),
        terms_used: terms,
        certified_abs: certified,
    }
}

/// Multiple polylogarithm: the nested sum over increasing indices
/// m_1 < ... < m_r of t^{m_r} / (m_1^{k_1} ... m_r^{k_r}), for |t| < 1.
///
/// Dynamic programming over prefix sums costs O(M * depth) ring
/// operations; the cutoff M certifies every dropped term at valuation
/// >= target via v(1/(m_1^{k_1}...m_r^{k_r})) >= -weight*floor(log_p m_r).
pub fn multipolylog<R: ValuedRing>(
    ring: &R,
    index: &Index,
    t: &R::Elem,
    target_abs: i64,
) -> Result<SeriesEval<R::Elem>> {
    if index.depth() == 0 {
        return Ok(SeriesEval { value: ring.one(), terms_used: 0, certified_abs: i64::MAX });
    }
    if ring.is_zero(t) {
        return Ok(SeriesEval { value: ring.zero(), terms_used: 0, certified_abs: i64::MAX });
    }
    let v_t = match ring.val_floor(t).finite() {
        Some(v) if v >= 1 => v,
        _ => return Err(Error::domain("outside polylog disc (need |t| < 1)")),
    };
    let parts = index.parts();
    let r = parts.len();
    let weight = index.weight() as i64;
    let m_max = tail_cutoff(ring.prime(), v_t, weight, target_abs);

    // acc[j] = sum over chains m_1 < ... < m_j <= m of the inner factors
    let mut acc: Vec<R::Elem> = vec![ring.zero(); r];
    acc[0] = ring.one();
    let mut sum = ring.zero();
    let mut t_pow = ring.one();
    for m in 1..=m_max {
        t_pow = ring.mul(&t_pow, t);
        let outer = BigRational::new(BigInt::one(), BigInt::from(m).pow(parts[r - 1]));
        let contrib = ring.scale(&ring.mul(&acc[r - 1], &t_pow), &outer);
        sum = ring.add(&sum, &contrib);
        for j in (1..r).rev() {
            let inner = BigRational::new(BigInt::one(), BigInt::from(m).pow(parts[j - 1]));
            let step = ring.scale(&acc[j - 1], &inner);
            acc[j] = ring.add(&acc[j], &step);
        }
    }
    Ok(certify(ring, sum, m_max, target_abs))
}

/// Linear extension of the polylogarithm to word polynomials.
pub fn multipolylog_word<R: ValuedRing>(
    ring: &R,
    words: &WordPoly,
    t: &R::Elem,
    target_abs: i64,
) -> Result<SeriesEval<R::Elem>> {
    let mut sum = ring.zero();
    let mut terms = 0;
    let mut certified = i64::MAX;
    for (index, coeff) in words.terms() {
        let part = multipolylog(ring, index, t, target_abs)?;
        sum = ring.add(&sum, &ring.scale(&part.value, coeff));
        terms = terms.max(part.terms_used);
        certified = certified.min(part.certified_abs);
    }
    let certified = certified
        .min(ring.abs_precision(&sum).capped(target_abs));
    Ok(SeriesEval {
        value: ring.truncate_abs(&sum, certified),
        terms_used: terms,
        certified_abs: certified,
    })
}

/// The double-constrained sum over m_1 < ... < m_{k-1} < m and
/// n_1 < ... < n_{l-1} < m of t^m / (m_1...m_{k-1} n_1...n_{l-1} m^2):
/// an independent evaluation route for the polylogarithms of the
/// harmonic-product words built from runs of ones.
pub fn double_constrained_sum<R: ValuedRing>(
    ring: &R,
    k: u32,
    l: u32,
    t: &R::Elem,
    target_abs: i64,
) -> Result<SeriesEval<R::Elem>> {
    if k == 0 || l == 0 {
        return Err(Error::domain("chain lengths must be positive"));
    }
    if ring.is_zero(t) {
        return Ok(SeriesEval { value: ring.zero(), terms_used: 0, certified_abs: i64::MAX });
    }
    let v_t = match ring.val_floor(t).finite() {
        Some(v) if v >= 1 => v,
        _ => return Err(Error::domain("outside polylog disc (need |t| < 1)")),
    };
    let weight = (k + l) as i64;
    let m_max = tail_cutoff(ring.prime(), v_t, weight, target_abs);
    let depth = (k.max(l) - 1) as usize;

    // harm[j] = sum over chains n_1 < ... < n_j < m of 1/(n_1...n_j)
    let mut harm: Vec<R::Elem> = vec![ring.zero(); depth + 1];
    harm[0] = ring.one();
    let mut sum = ring.zero();
    let mut t_pow = ring.one();
    for m in 1..=m_max {
        t_pow = ring.mul(&t_pow, t);
        let outer = BigRational::new(BigInt::one(), BigInt::from(m).pow(2));
        let pair = ring.mul(&harm[(k - 1) as usize], &harm[(l - 1) as usize]);
        let contrib = ring.scale(&ring.mul(&pair, &t_pow), &outer);
        sum = ring.add(&sum, &contrib);
        let inv_m = BigRational::new(BigInt::one(), BigInt::from(m));
        for j in (1..=depth).rev() {
            let step = ring.scale(&harm[j - 1], &inv_m);
            harm[j] = ring.add(&harm[j], &step);
        }
    }
    Ok(certify(ring, sum, m_max, target_abs))
}

/// Rising factorial (a)_n = a (a+1) ... (a+n-1); exact over exact rings.
pub fn pochhammer<R: Ring>(ring: &R, a: &R::Elem, n: u64) -> R::Elem {
    let mut out = ring.one();
    let mut factor = a.clone();
    for i in 0..n {
        if i > 0 {
            factor = ring.add(&factor, &ring.one());
        }
        out = ring.mul(&out, &factor);
    }
    out
}

/// Generalized hypergeometric series with r+1 upper parameters (p-adic
/// integers in the coefficient ring) and r positive-integer lower
/// parameters:
///
///   sum_n (a_1)_n ... (a_{r+1})_n / ((b_1)_n ... (b_r)_n n!) z^n.
///
/// Integer lower parameters make the denominator loss per term exactly
/// controllable: v_p((b)_n) <= (n + b - 2)/(p - 1), which combined with
/// v_p(n!) <= (n-1)/(p-1) yields a linear certified tail bound. The call
/// fails when that bound cannot reach the target at this z.
pub fn hypergeometric<R: ValuedRing>(
    ring: &R,
    upper: &[R::Elem],
    lower: &[u64],
    z: &R::Elem,
    target_abs: i64,
) -> Result<SeriesEval<R::Elem>> {
    if upper.len() != lower.len() + 1 {
        return Err(Error::domain(
            "need r+1 upper and r lower hypergeometric parameters",
        ));
    }
    if lower.iter().any(|&b| b == 0) {
        return Err(Error::domain("lower parameters must be positive integers"));
    }
    for a in upper {
        if !ring.val_floor(a).at_least(0) {
            return Err(Error::domain(
                "upper parameters must be p-adic integers (valuation >= 0)",
            ));
        }
    }
    if ring.is_zero(z) {
        return Ok(SeriesEval { value: ring.one(), terms_used: 0, certified_abs: i64::MAX });
    }
    let v_z = match ring.val_floor(z).finite() {
        Some(v) if v >= 1 => v,
        _ => return Err(Error::domain("hypergeometric argument must satisfy |z| < 1")),
    };
    let p = ring.prime() as i64;
    let denoms = lower.len() as i64 + 1;
    let slope = v_z * (p - 1) - denoms;
    if slope < 1 {
        return Err(Error::domain("series not certifiably convergent at z"));
    }
    let b_sum: i64 = lower.iter().map(|&b| b as i64 - 2).sum();
    let rhs = target_abs * (p - 1) - 1 + b_sum;
    let m_max = if rhs <= 0 { 0 } else { ((rhs + slope - 1) / slope) as u64 };

    let mut sum = ring.one();
    let mut term = ring.one();
    for n in 0..m_max {
        let n_elem = ring.from_integer(n as i64);
        for a in upper {
            term = ring.mul(&term, &ring.add(a, &n_elem));
        }
        let mut den = BigInt::from(n + 1);
        for &b in lower {
            den *= BigInt::from(b + n);
        }
        term = ring.scale(&term, &BigRational::new(BigInt::one(), den));
        term = ring.mul(&term, z);
        sum = ring.add(&sum, &term);
    }
    Ok(certify(ring, sum, m_max, target_abs))
}

/// n! as an exact integer.
pub fn factorial(n: u64) -> BigUint {
    let mut out = BigUint::one();
    for i in 2..=n {
        out *= BigUint::from(i);
    }
    out
}

/// Exact binomial coefficient.
pub fn binomial_integer(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut out = BigUint::one();
    for i in 0..k {
        out = out * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    out
}

/// Coefficients of the polylogarithm as a formal power series over the
/// exact rationals, through t^max_degree inclusive. Used to verify the
/// homomorphism property of the harmonic product with zero tolerance.
pub fn polylog_coefficients(index: &Index, max_degree: usize) -> Vec<BigRational> {
    let parts = index.parts();
    let r = parts.len();
    let mut out = vec![BigRational::zero(); max_degree + 1];
    if r == 0 {
        out[0] = BigRational::one();
        return out;
    }
    let mut acc = vec![BigRational::zero(); r];
    acc[0] = BigRational::one();
    for m in 1..=max_degree {
        let outer = BigRational::new(BigInt::one(), BigInt::from(m).pow(parts[r - 1]));
        out[m] = &acc[r - 1] * outer;
        for j in (1..r).rev() {
            let inner = BigRational::new(BigInt::one(), BigInt::from(m).pow(parts[j - 1]));
            let step = &acc[j - 1] * inner;
            acc[j] = &acc[j] + step;
        }
    }
    out
}

/// Linear extension of [`polylog_coefficients`] to word polynomials.
pub fn wordpoly_coefficients(words: &WordPoly, max_degree: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); max_degree + 1];
    for (index, coeff) in words.terms() {
        for (m, c) in polylog_coefficients(index, max_degree).into_iter().enumerate() {
            out[m] = &out[m] + c * coeff;
        }
    }
    out
}

/// Multiple harmonic prefix sums H_I(M) = sum over m_1 < ... < m_r <= M
/// of 1/(m_1^{k_1} ... m_r^{k_r}), returned for every cutoff M up to
/// `max_cutoff`. These nested partial sums are the exact data under the
/// polylogarithm, and the harmonic product multiplies them pointwise in
/// the cutoff: H_{v*w}(M) = H_v(M) H_w(M) for every M.
pub fn harmonic_prefix_sums(index: &Index, max_cutoff: usize) -> Vec<BigRational> {
    let parts = index.parts();
    let r = parts.len();
    let mut acc = vec![BigRational::zero(); r + 1];
    acc[0] = BigRational::one();
    let mut out = Vec::with_capacity(max_cutoff + 1);
    out.push(acc[r].clone());
    for m in 1..=max_cutoff {
        for j in (1..=r).rev() {
            let inner = BigRational::new(BigInt::one(), BigInt::from(m).pow(parts[j - 1]));
            let step = &acc[j - 1] * inner;
            acc[j] = &acc[j] + step;
        }
        out.push(acc[r].clone());
    }
    out
}

/// Linear extension of [`harmonic_prefix_sums`] to word polynomials.
pub fn wordpoly_prefix_sums(words: &WordPoly, max_cutoff: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); max_cutoff + 1];
    for (index, coeff) in words.terms() {
        for (m, h) in harmonic_prefix_sums(index, max_cutoff).into_iter().enumerate() {
            out[m] = &out[m] + h * coeff;
        }
    }
    out
}
