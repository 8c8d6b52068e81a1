//! Coefficient-ring abstraction shared by the series and measure engines,
//! plus the certified tail-bound helpers used to truncate p-adic series.
//!
//! A [`Ring`] value is a ring *descriptor* (it may carry a prime, a
//! precision budget, a defining polynomial, ...); elements are plain data.
//! [`ValuedRing`] adds the p-adic structure the engines rely on: a certified
//! lower bound on valuations and an absolute-precision claim per element.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// A p-adic valuation bound. `Infinite` is the valuation of (anything
/// indistinguishable from) zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// The finite value, if any.
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// Finite value or `cap` when infinite; useful when every claim is
    /// anyway capped by a working precision.
    pub fn capped(self, cap: i64) -> i64 {
        match self {
            Valuation::Finite(v) => v.min(cap),
            Valuation::Infinite => cap,
        }
    }

    pub fn at_least(self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinite => true,
        }
    }

    /// Valuation of a sum: the minimum of the two bounds.
    pub fn meet(self, other: Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a.min(b)),
            (Valuation::Finite(a), _) | (_, Valuation::Finite(a)) => Valuation::Finite(a),
            _ => Valuation::Infinite,
        }
    }

    /// Valuation of a product: the sum of the two bounds.
    pub fn plus(self, other: Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Commutative ring descriptor with an embedding of the rationals.
pub trait Ring: Clone {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;

    /// True when `x` is indistinguishable from zero at the ring's precision
    /// (exact zero for exact rings).
    fn is_zero(&self, x: &Self::Elem) -> bool;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Multiplicative inverse; fails on non-units.
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// Image of an exact rational. Fails only when the rational cannot be
    /// represented (never for the rings in this crate).
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn from_integer(&self, n: i64) -> Self::Elem {
        let q = BigRational::from_integer(n.into());
        self.from_rational(&q)
            .expect("integer embeds into every ring")
    }

    /// `a * q` for an exact rational `q`.
    fn scale(&self, a: &Self::Elem, q: &BigRational) -> Self::Elem {
        self.mul(a, &self.from_rational(q).expect("rational scale"))
    }
}

/// A ring whose elements carry certified p-adic valuation and precision
/// information. Satisfied by p-adic scalars, unramified-extension scalars
/// and truncated jets.
pub trait ValuedRing: Ring {
    fn prime(&self) -> u64;

    /// Requested precision of final answers (series tails aim one digit
    /// past this).
    fn target_precision(&self) -> i64;

    /// Number of digits carried by the underlying arithmetic.
    fn working_precision(&self) -> i64;

    /// Certified lower bound on the valuation of `x`.
    fn val_floor(&self, x: &Self::Elem) -> Valuation;

    /// Absolute precision of the claim carried by `x` (infinite for exact
    /// elements such as the exact zero).
    fn abs_precision(&self, x: &Self::Elem) -> Valuation;

    /// Weaken the claim carried by `x` to at most `abs` digits.
    fn truncate_abs(&self, x: &Self::Elem, abs: i64) -> Self::Elem;
}

/// The exact rationals. Mostly used to verify algebraic identities with
/// zero tolerance before any p-adic embedding happens.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RationalField;

impl Ring for RationalField {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::from_integer(1.into())
    }

    fn is_zero(&self, x: &BigRational) -> bool {
        x.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(Error::domain("inverse of zero"));
        }
        Ok(a.recip())
    }

    fn from_rational(&self, q: &BigRational) -> Result<BigRational> {
        Ok(q.clone())
    }
}

/// Floor of log_p(m) for m >= 1.
pub fn ilog_p(p: u64, m: u64) -> i64 {
    debug_assert!(m >= 1);
    let mut k = 0;
    let mut pw = p;
    while pw <= m {
        k += 1;
        match pw.checked_mul(p) {
            Some(next) => pw = next,
            None => break,
        }
    }
    k
}

/// phi(m) = m*v - w*floor(log_p m): the certified valuation floor of the
/// m-th term of the series handled by [`tail_cutoff`].
fn phi(p: u64, v: i64, w: i64, m: u64) -> i64 {
    (m as i64) * v - w * ilog_p(p, m)
}

/// Smallest index beyond which phi stays >= `target` forever: within a
/// decade [p^j, p^{j+1}) phi is increasing, and once a decade head p^j
/// satisfies both phi(p^j) >= target and p^j >= w the heads never dip again
/// (the increment v*p^j*(p-1) - w is nonnegative from there on).
fn safe_horizon(p: u64, v: i64, w: i64, target: i64) -> u64 {
    debug_assert!(v >= 1);
    let mut head: u64 = 1;
    while phi(p, v, w, head) < target || (head as i64) < w {
        head = head.checked_mul(p).expect("horizon overflow");
    }
    head
}

/// Smallest M such that m*v_x - weight*floor(log_p m) >= target for every
/// m > M. Summing a series to M then certifies the dropped tail at
/// valuation >= target.
pub fn tail_cutoff(p: u64, v_x: i64, weight: i64, target: i64) -> u64 {
    assert!(v_x >= 1, "series argument must have positive valuation");
    let horizon = safe_horizon(p, v_x, weight, target);
    let mut last_unsafe = 0;
    for m in 1..=horizon {
        if phi(p, v_x, weight, m) < target {
            last_unsafe = m;
        }
    }
    last_unsafe
}

/// min over m >= m0 of m*v_x - weight*floor(log_p m), computed exactly.
pub fn min_tail_valuation(p: u64, v_x: i64, weight: i64, m0: u64) -> i64 {
    assert!(v_x >= 1);
    let m0 = m0.max(1);
    // Beyond the horizon phi exceeds phi(m0) + 1, so the scan suffices.
    let horizon = safe_horizon(p, v_x, weight, phi(p, v_x, weight, m0) + 1).max(m0);
    (m0..=horizon)
        .map(|m| phi(p, v_x, weight, m))
        .min()
        .expect("nonempty range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ilog_examples() {
        assert_eq!(ilog_p(5, 1), 0);
        assert_eq!(ilog_p(5, 4), 0);
        assert_eq!(ilog_p(5, 5), 1);
        assert_eq!(ilog_p(5, 24), 1);
        assert_eq!(ilog_p(5, 25), 2);
        assert_eq!(ilog_p(5, 624), 3);
    }

    #[test]
    fn cutoff_matches_direct_scan() {
        // brute force over a window large enough to contain the answer
        for (v, w, target) in [(1, 1, 5), (1, 1, 31), (2, 2, 5), (1, 4, 31), (3, 8, 45)] {
            let got = tail_cutoff(5, v, w, target);
            for m in (got + 1)..(got + 4000) {
                assert!(phi(5, v, w, m) >= target, "m={m} v={v} w={w}");
            }
            if got > 0 {
                assert!(phi(5, v, w, got) < target);
            }
        }
    }

    #[test]
    fn log_series_cutoff_at_default_precision() {
        // unit-valuation argument, weight 1, one digit past 30
        assert_eq!(tail_cutoff(5, 1, 1, 31), 32);
        assert_eq!(tail_cutoff(5, 1, 1, 5), 5);
    }

    #[test]
    fn min_tail_examples() {
        // inf over m>=1 of m - floor(log5 m) is 1
        assert_eq!(min_tail_valuation(5, 1, 1, 1), 1);
        // starting at m=4 the dip at m=5 (4) and m=6 (5) matters
        assert_eq!(min_tail_valuation(5, 1, 1, 4), 4);
        assert_eq!(min_tail_valuation(5, 1, 1, 24), 23);
    }

    #[test]
    fn valuation_ordering() {
        assert!(Valuation::Finite(3) < Valuation::Infinite);
        assert_eq!(
            Valuation::Finite(2).meet(Valuation::Infinite),
            Valuation::Finite(2)
        );
        assert_eq!(
            Valuation::Finite(2).plus(Valuation::Finite(3)),
            Valuation::Finite(5)
        );
        assert_eq!(Valuation::Infinite.capped(40), 40);
    }
}
