//! Sparse multivariate Laurent polynomials over a generic coefficient
//! ring: the computational model of the ring of functions on the p-adic
//! torus. Supplies the Gauss valuation, the dominant-unit decomposition
//! f = a t^l (1 + g) and monomial substitutions t^v -> t^{Sv}.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicScalar};
use crate::ring::{Ring, ValuedRing, Valuation};

/// Sparse Laurent polynomial; exponent keys are unique and no stored
/// coefficient is (indistinguishable from) zero.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly<R: Ring> {
    ring: R,
    n_vars: usize,
    terms: BTreeMap<Vec<i64>, R::Elem>,
}

impl<R: Ring> LaurentPoly<R> {
    pub fn zero(ring: &R, n_vars: usize) -> Self {
        assert!(n_vars >= 1, "at least one variable");
        LaurentPoly { ring: ring.clone(), n_vars, terms: BTreeMap::new() }
    }

    pub fn constant(ring: &R, n_vars: usize, c: R::Elem) -> Self {
        Self::from_terms(ring, n_vars, [(vec![0; n_vars], c)])
    }

    pub fn one(ring: &R, n_vars: usize) -> Self {
        Self::constant(ring, n_vars, ring.one())
    }

    /// t^e with unit coefficient.
    pub fn monomial(ring: &R, exponent: Vec<i64>) -> Self {
        let n = exponent.len();
        Self::from_terms(ring, n, [(exponent, ring.one())])
    }

    pub fn from_terms<I>(ring: &R, n_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<i64>, R::Elem)>,
    {
        assert!(n_vars >= 1, "at least one variable");
        let mut map: BTreeMap<Vec<i64>, R::Elem> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), n_vars, "exponent arity mismatch");
            match map.remove(&e) {
                Some(prev) => {
                    let s = ring.add(&prev, &c);
                    if !ring.is_zero(&s) {
                        map.insert(e, s);
                    }
                }
                None => {
                    if !ring.is_zero(&c) {
                        map.insert(e, c);
                    }
                }
            }
        }
        LaurentPoly { ring: ring.clone(), n_vars, terms: map }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &R::Elem)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponent: &[i64]) -> R::Elem {
        self.terms
            .get(exponent)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn constant_term(&self) -> R::Elem {
        self.coefficient(&vec![0; self.n_vars])
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            match terms.remove(e) {
                Some(prev) => {
                    let s = self.ring.add(&prev, c);
                    if !self.ring.is_zero(&s) {
                        terms.insert(e.clone(), s);
                    }
                }
                None => {
                    terms.insert(e.clone(), c.clone());
                }
            }
        }
        Ok(LaurentPoly { ring: self.ring.clone(), n_vars: self.n_vars, terms })
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), self.ring.neg(c)))
            .collect();
        LaurentPoly { ring: self.ring.clone(), n_vars: self.n_vars, terms }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Multiply every coefficient by a ring element.
    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut terms = BTreeMap::new();
        for (e, x) in &self.terms {
            let y = self.ring.mul(x, c);
            if !self.ring.is_zero(&y) {
                terms.insert(e.clone(), y);
            }
        }
        LaurentPoly { ring: self.ring.clone(), n_vars: self.n_vars, terms }
    }

    /// Shift exponents by `delta` (multiplication by t^delta).
    pub fn shift_exponents(&self, delta: &[i64]) -> Self {
        assert_eq!(delta.len(), self.n_vars);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let shifted: Vec<i64> = e.iter().zip(delta).map(|(a, b)| a + b).collect();
                (shifted, c.clone())
            })
            .collect();
        LaurentPoly { ring: self.ring.clone(), n_vars: self.n_vars, terms }
    }

    /// Convolution product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut acc: HashMap<Vec<i64>, R::Elem> = HashMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let prod = self.ring.mul(ca, cb);
                match acc.remove(&e) {
                    Some(prev) => {
                        acc.insert(e, self.ring.add(&prev, &prod));
                    }
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !self.ring.is_zero(c))
            .collect();
        Ok(LaurentPoly { ring: self.ring.clone(), n_vars: self.n_vars, terms })
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.n_vars != other.n_vars {
            return Err(Error::domain(format!(
                "mixed variable counts: {} vs {}",
                self.n_vars, other.n_vars
            )));
        }
        Ok(())
    }

    /// The exponents' substitution t^v -> t^{S v} for an integer matrix S
    /// (rows index the output coordinates). S must be nonsingular over Q.
    pub fn substitute_monomials(&self, s: &[Vec<i64>]) -> Result<Self> {
        let n = self.n_vars;
        if s.len() != n || s.iter().any(|row| row.len() != n) {
            return Err(Error::domain("substitution matrix must be n x n"));
        }
        if det_i128(s) == 0 {
            return Err(Error::domain("substitution matrix is singular"));
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut out = vec![0i64; n];
            for (i, row) in s.iter().enumerate() {
                out[i] = row.iter().zip(e).map(|(a, b)| a * b).sum();
            }
            // nonsingular S keeps exponents distinct
            let clash = terms.insert(out, c.clone());
            debug_assert!(clash.is_none());
        }
        Ok(LaurentPoly { ring: self.ring.clone(), n_vars: n, terms })
    }
}

impl<R: ValuedRing> LaurentPoly<R> {
    /// Minimum coefficient valuation; infinite for the zero polynomial.
    pub fn gauss_valuation(&self) -> Valuation {
        self.terms
            .values()
            .map(|c| self.ring.val_floor(c))
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    /// Drop terms that are zero below `abs` digits and weaken the remaining
    /// claims to `abs`. Only used by engines whose certified output never
    /// claims more than `abs`.
    pub fn truncate_coefficients(&self, abs: i64) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if self.ring.val_floor(c).at_least(abs) {
                continue;
            }
            terms.insert(e.clone(), self.ring.truncate_abs(c, abs));
        }
        LaurentPoly { ring: self.ring.clone(), n_vars: self.n_vars, terms }
    }

    /// Dominant-unit decomposition f = a t^l (1 + g): `a` is the unique
    /// coefficient of strictly minimal valuation and every coefficient of g
    /// has valuation >= 1 with zero constant term. Fails exactly when no
    /// strictly dominant coefficient exists, in which case f has a zero of
    /// p-adic absolute value one somewhere on the torus.
    pub fn decompose_unit(&self) -> Result<UnitDecomposition<R>> {
        if self.is_zero() {
            return Err(Error::domain("cannot decompose the zero polynomial"));
        }
        for c in self.terms.values() {
            if self.ring.abs_precision(c) <= self.ring.val_floor(c) {
                return Err(Error::domain(
                    "coefficient carries no digits; dominance test is meaningless",
                ));
            }
        }
        let vmin = self.gauss_valuation();
        let mut dominant: Option<(&Vec<i64>, &R::Elem)> = None;
        for (e, c) in &self.terms {
            if self.ring.val_floor(c) == vmin {
                if dominant.is_some() {
                    return Err(Error::Nonvanishing);
                }
                dominant = Some((e, c));
            }
        }
        let (exponent, coeff) = dominant.expect("nonzero polynomial has a minimum");
        let a_inv = self.ring.inv(coeff)?;
        let mut tail_terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e == exponent {
                continue;
            }
            let shifted: Vec<i64> = e.iter().zip(exponent).map(|(x, l)| x - l).collect();
            let scaled = self.ring.mul(c, &a_inv);
            debug_assert!(self.ring.val_floor(&scaled).at_least(1));
            tail_terms.insert(shifted, scaled);
        }
        Ok(UnitDecomposition {
            coefficient: coeff.clone(),
            exponent: exponent.clone(),
            tail: LaurentPoly {
                ring: self.ring.clone(),
                n_vars: self.n_vars,
                terms: tail_terms,
            },
        })
    }
}

/// f = coefficient * t^exponent * (1 + tail).
#[derive(Clone)]
pub struct UnitDecomposition<R: Ring> {
    pub coefficient: R::Elem,
    pub exponent: Vec<i64>,
    pub tail: LaurentPoly<R>,
}

impl<R: Ring> UnitDecomposition<R> {
    pub fn reassemble(&self) -> Result<LaurentPoly<R>> {
        let ring = self.tail.ring().clone();
        let n = self.tail.n_vars();
        let one_plus = LaurentPoly::one(&ring, n).add(&self.tail)?;
        Ok(one_plus.scale(&self.coefficient).shift_exponents(&self.exponent))
    }
}

/// Integer determinant by fraction-free elimination.
fn det_i128(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let swap = (k + 1..n).find(|&i| a[i][k] != 0);
            match swap {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

impl<R: Ring> fmt::Debug for LaurentPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({} vars, {} terms)", self.n_vars, self.terms.len())
    }
}

impl<R: Ring> fmt::Display for LaurentPoly<R>
where
    R::Elem: fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &k) in e.iter().enumerate() {
                if k != 0 {
                    write!(f, "*t{}^{}", i + 1, k)?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    vars: usize,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: String,
    exp: Vec<i64>,
}

/// (exponent, valuation, absolute precision, unit digits if any).
type StrippedTerm<'a> = (&'a [i64], i64, i64, Option<&'a BigUint>);

fn strip_base(poly: &LaurentPoly<PadicContext>) -> Vec<StrippedTerm<'_>> {
    poly.terms
        .iter()
        .filter_map(|(e, c)| {
            let val = c.val_floor().finite()?;
            let abs = c
                .abs_precision()
                .finite()
                .expect("nonzero coefficients carry finite claims");
            Some((e.as_slice(), val, abs, c.unit()))
        })
        .collect()
}

/// Partially accumulated output coefficient: sum * p^base + O(p^abs),
/// with the integer sum not yet reduced.
struct RawCoeff {
    base: i64,
    sum: BigUint,
    abs: i64,
    has_digits: bool,
}

impl RawCoeff {
    fn cap(abs: i64) -> RawCoeff {
        RawCoeff { base: abs, sum: BigUint::zero(), abs, has_digits: false }
    }

    fn absorb(&mut self, ctx: &PadicContext, val: i64, unit: BigUint, abs: i64) {
        self.abs = self.abs.min(abs);
        if !self.has_digits {
            self.base = val;
            self.sum = unit;
            self.has_digits = true;
            return;
        }
        if val < self.base {
            self.sum = &self.sum * ctx.pow_p(self.base - val);
            self.base = val;
        }
        if val == self.base {
            self.sum += unit;
        } else {
            self.sum += unit * ctx.pow_p(val - self.base);
        }
    }

    fn merge(&mut self, ctx: &PadicContext, other: RawCoeff) {
        self.abs = self.abs.min(other.abs);
        if other.has_digits {
            self.absorb(ctx, other.base, other.sum, other.abs);
        }
    }
}

impl LaurentPoly<PadicContext> {
    /// Truncated convolution specialized to base-field coefficients. Term
    /// products accumulate as plain integers at a shared power of p per
    /// output exponent and get reduced once at the end; coefficients
    /// certified to vanish below `abs` digits are dropped, and pairs whose
    /// product is certified below the cutoff are never multiplied. Large
    /// products fan out over term blocks; accumulation is exact, so the
    /// merge order cannot change the result.
    pub fn mul_truncated(&self, other: &Self, abs: i64) -> Result<Self> {
        self.check_arity(other)?;
        let ctx = &self.ring;
        let left = strip_base(self);
        let right = strip_base(other);

        let block = |chunk: &[StrippedTerm<'_>]| {
            let mut acc: HashMap<Vec<i64>, RawCoeff> = HashMap::new();
            for &(ea, va, aa, ua) in chunk {
                for &(eb, vb, ab, ub) in &right {
                    let vp = va + vb;
                    if vp >= abs {
                        continue;
                    }
                    let pair_abs = (aa + vb).min(ab + va).min(abs);
                    let e: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                    let slot = acc.entry(e).or_insert_with(|| RawCoeff::cap(abs));
                    match (ua, ub) {
                        (Some(x), Some(y)) => slot.absorb(ctx, vp, x * y, pair_abs),
                        _ => slot.abs = slot.abs.min(pair_abs),
                    }
                }
            }
            acc
        };

        let acc = if left.len() * right.len() >= 1 << 12 {
            let chunk = left
                .len()
                .div_ceil(4 * rayon::current_num_threads().max(1))
                .max(1);
            left.par_chunks(chunk).map(block).reduce(HashMap::new, |mut a, b| {
                for (e, rc) in b {
                    match a.remove(&e) {
                        Some(mut prev) => {
                            prev.merge(ctx, rc);
                            a.insert(e, prev);
                        }
                        None => {
                            a.insert(e, rc);
                        }
                    }
                }
                a
            })
        } else {
            block(&left)
        };

        let mut terms = BTreeMap::new();
        for (e, rc) in acc {
            let value = if rc.has_digits {
                PadicScalar::from_window(ctx, rc.base, rc.sum, rc.abs)
            } else {
                PadicScalar::from_window(ctx, rc.abs, BigUint::zero(), rc.abs)
            };
            if value.val_floor().at_least(abs) {
                continue;
            }
            terms.insert(e, value);
        }
        Ok(LaurentPoly { ring: ctx.clone(), n_vars: self.n_vars, terms })
    }

    /// Parse the JSON polynomial schema shared with the CLI:
    /// `{"vars": n, "terms": [{"coeff": "<p-adic literal>", "exp": [..]}]}`.
    pub fn from_json(ctx: &PadicContext, text: &str) -> Result<Self> {
        let parsed: PolyJson =
            serde_json::from_str(text).map_err(|e| Error::parse(format!("polynomial JSON: {e}")))?;
        if parsed.vars == 0 {
            return Err(Error::parse("polynomial must have at least one variable"));
        }
        let mut terms = Vec::with_capacity(parsed.terms.len());
        for t in parsed.terms {
            if t.exp.len() != parsed.vars {
                return Err(Error::parse(format!(
                    "exponent {:?} does not have {} entries",
                    t.exp, parsed.vars
                )));
            }
            let c = ctx.parse(&t.coeff)?;
            terms.push((t.exp, c));
        }
        Ok(LaurentPoly::from_terms(ctx, parsed.vars, terms))
    }

    pub fn to_json(&self) -> String {
        let doc = PolyJson {
            vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson { coeff: c.literal(), exp: e.clone() })
                .collect(),
        };
        serde_json::to_string(&doc).expect("serializable")
    }
}

/// Convenience constructor used across tests and the closed forms:
/// (t - alpha)(t - beta) = t^2 - (alpha + beta) t + alpha*beta.
pub fn quadratic_from_roots(alpha: &PadicScalar, beta: &PadicScalar) -> LaurentPoly<PadicContext> {
    let ctx = alpha.context().clone();
    LaurentPoly::from_terms(
        &ctx,
        1,
        [
            (vec![2], ctx.one()),
            (vec![1], alpha.add(beta).neg()),
            (vec![0], alpha.mul(beta)),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::agreement_valuation;
    use proptest::prelude::*;

    fn ctx() -> PadicContext {
        PadicContext::new(5, 8, 6).unwrap()
    }

    fn poly_1var(ctx: &PadicContext, coeffs: &[(i64, i64, i64)]) -> LaurentPoly<PadicContext> {
        // (exponent, num, den)
        LaurentPoly::from_terms(
            ctx,
            1,
            coeffs.iter().map(|&(e, n, d)| {
                (vec![e], ctx.from_rational_parts(&n.into(), &d.into()).unwrap())
            }),
        )
    }

    #[test]
    fn mul_examples() {
        let ctx = ctx();
        let a = poly_1var(&ctx, &[(0, 1, 1), (1, 1, 1)]);
        let b = poly_1var(&ctx, &[(0, 1, 1), (1, -1, 1)]);
        let prod = a.mul(&b).unwrap();
        let expect = poly_1var(&ctx, &[(0, 1, 1), (2, -1, 1)]);
        assert_eq!(prod.len(), 2);
        for (e, c) in expect.iter() {
            assert!(agreement_valuation(&prod.coefficient(e), c).at_least(8));
        }

        let c = poly_1var(&ctx, &[(1, 1, 1), (-1, 1, 1)]);
        let sq = c.mul(&c).unwrap();
        assert_eq!(sq.len(), 3);
        assert!(agreement_valuation(&sq.coefficient(&[0]), &ctx.from_i64(2)).at_least(8));
        assert!(agreement_valuation(&sq.coefficient(&[2]), &ctx.one()).at_least(8));
        assert!(agreement_valuation(&sq.coefficient(&[-2]), &ctx.one()).at_least(8));
    }

    #[test]
    fn gauss_valuation_examples() {
        let ctx = ctx();
        assert_eq!(LaurentPoly::zero(&ctx, 1).gauss_valuation(), Valuation::Infinite);

        let f = LaurentPoly::from_terms(
            &ctx,
            2,
            [
                (vec![1, 0], ctx.from_i64(5)),
                (vec![0, -1], ctx.from_i64(25)),
            ],
        );
        assert_eq!(f.gauss_valuation(), Valuation::Finite(1));

        let g = poly_1var(&ctx, &[(1, 1, 5), (-1, 5, 1)]);
        assert_eq!(g.gauss_valuation(), Valuation::Finite(-1));
    }

    #[test]
    fn decompose_two_term_case() {
        let ctx = ctx();
        // t - 1/5: dominant constant -1/5, tail -5t
        let f = poly_1var(&ctx, &[(1, 1, 1), (0, -1, 5)]);
        let dec = f.decompose_unit().unwrap();
        assert_eq!(dec.exponent, vec![0]);
        let a_expect = ctx.from_rational_parts(&(-1).into(), &5.into()).unwrap();
        assert!(agreement_valuation(&dec.coefficient, &a_expect).at_least(6));
        assert_eq!(dec.tail.len(), 1);
        assert!(agreement_valuation(&dec.tail.coefficient(&[1]), &ctx.from_i64(-5)).at_least(6));
        assert!(dec.tail.constant_term().is_exact_zero() || dec.tail.coefficient(&[0]).is_exact_zero());
    }

    #[test]
    fn decompose_standard_quadratic() {
        let ctx = ctx();
        // (t - 1/5)(t - 5) = t^2 - (26/5) t + 1
        let f = poly_1var(&ctx, &[(2, 1, 1), (1, -26, 5), (0, 1, 1)]);
        let dec = f.decompose_unit().unwrap();
        assert_eq!(dec.exponent, vec![1]);
        let a = ctx.from_rational_parts(&(-26).into(), &5.into()).unwrap();
        assert!(agreement_valuation(&dec.coefficient, &a).at_least(6));
        // g = -(5/26)(t + 1/t)
        let gc = ctx.from_rational_parts(&(-5).into(), &26.into()).unwrap();
        for e in [[1i64], [-1i64]] {
            let c = dec.tail.coefficient(&e);
            assert!(agreement_valuation(&c, &gc).at_least(6));
            assert!(c.val_floor().at_least(1));
        }
        // round trip: cancellation down to the inputs' own claim window
        let back = dec.reassemble().unwrap();
        let diff = back.sub(&f).unwrap();
        let min_abs = f
            .iter()
            .map(|(_, c)| c.abs_precision())
            .min()
            .unwrap()
            .capped(ctx.working_precision());
        assert!(diff.gauss_valuation().at_least(min_abs));
    }

    #[test]
    fn decompose_rejects_equal_norms() {
        let ctx = ctx();
        let f = poly_1var(&ctx, &[(1, 1, 1), (0, 1, 1)]);
        assert!(matches!(f.decompose_unit(), Err(Error::Nonvanishing)));
    }

    #[test]
    fn substitution_examples() {
        let ctx = ctx();
        let f = LaurentPoly::from_terms(
            &ctx,
            2,
            [
                (vec![1, 1], ctx.one()),
                (vec![1, 0], ctx.from_i64(3)),
            ],
        );
        let id = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(f.substitute_monomials(&id).unwrap(), f);

        let swap = vec![vec![0, 1], vec![1, 0]];
        let swapped = f.substitute_monomials(&swap).unwrap();
        assert!(agreement_valuation(&swapped.coefficient(&[0, 1]), &ctx.from_i64(3)).at_least(6));

        // [[1,1],[0,1]] sends (1,1) to (2,1)
        let shear = vec![vec![1, 1], vec![0, 1]];
        let sheared = f.substitute_monomials(&shear).unwrap();
        assert!(agreement_valuation(&sheared.coefficient(&[2, 1]), &ctx.one()).at_least(6));

        let singular = vec![vec![1, 1], vec![1, 1]];
        assert!(f.substitute_monomials(&singular).is_err());
    }

    #[test]
    fn json_round_trip() {
        let ctx = ctx();
        let text = r#"{"vars":1,"terms":[{"coeff":"1","exp":[2]},{"coeff":"-26/5","exp":[1]},{"coeff":"1","exp":[0]}]}"#;
        let f = LaurentPoly::from_json(&ctx, text).unwrap();
        assert_eq!(f.len(), 3);
        let enc = f.to_json();
        let g = LaurentPoly::from_json(&ctx, &enc).unwrap();
        assert_eq!(f, g);

        assert!(LaurentPoly::from_json(&ctx, "{").is_err());
        assert!(LaurentPoly::from_json(&ctx, r#"{"vars":2,"terms":[{"coeff":"1","exp":[1]}]}"#).is_err());
    }

    fn random_poly_strategy() -> impl Strategy<Value = LaurentPoly<PadicContext>> {
        proptest::collection::vec(((-4i64..5i64), (-300i64..300i64), (1i64..40i64)), 1..5)
            .prop_map(|terms| {
                let ctx = ctx();
                LaurentPoly::from_terms(
                    &ctx,
                    1,
                    terms.into_iter().filter(|(_, n, _)| *n != 0).map(|(e, n, d)| {
                        (vec![e], ctx.from_rational_parts(&n.into(), &d.into()).unwrap())
                    }),
                )
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn gauss_valuation_is_multiplicative(
            f in random_poly_strategy(),
            g in random_poly_strategy(),
        ) {
            let prod = f.mul(&g).unwrap();
            prop_assert_eq!(
                prod.gauss_valuation(),
                f.gauss_valuation().plus(g.gauss_valuation())
            );
        }

        #[test]
        fn decompose_round_trips(f in random_poly_strategy()) {
            if let Ok(dec) = f.decompose_unit() {
                let back = dec.reassemble().unwrap();
                let diff = back.sub(&f).unwrap();
                let min_abs = f
                    .iter()
                    .map(|(_, c)| c.abs_precision())
                    .min()
                    .unwrap()
                    .capped(f.ring().working_precision());
                prop_assert!(diff.gauss_valuation().at_least(min_abs));
                prop_assert!(dec.tail.gauss_valuation().at_least(1));
                prop_assert!(dec.tail.coefficient(&[0]).is_exact_zero());
            }
        }

        #[test]
        fn substitution_composes(
            f in random_poly_strategy(),
            a in 1i64..3, b in -2i64..3,
        ) {
            // 1x1 matrices: composition is multiplication
            let s1 = vec![vec![a]];
            let s2 = if b == 0 { vec![vec![1]]} else { vec![vec![b]] };
            let lhs = f.substitute_monomials(&s1).unwrap().substitute_monomials(&s2).unwrap();
            let prod = vec![vec![s2[0][0] * s1[0][0]]];
            let rhs = f.substitute_monomials(&prod).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn unimodular_substitution_preserves_decomposition(f in random_poly_strategy()) {
            if let Ok(dec) = f.decompose_unit() {
                // the only unimodular 1x1 actions are t -> t^{\pm 1}
                let sub = f.substitute_monomials(&[vec![-1]]).unwrap();
                let dec2 = sub.decompose_unit().unwrap();
                prop_assert_eq!(dec.coefficient, dec2.coefficient);
                prop_assert_eq!(dec.tail.gauss_valuation(), dec2.tail.gauss_valuation());
            }
        }
    }
}
