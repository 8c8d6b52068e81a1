//! Truncated polynomials in a formal variable s with p-adic coefficients.
//! Running the zeta engine with the jet generator in place of a scalar s
//! extracts every Taylor coefficient of Z_p(s, f) up to the truncation
//! order in one pass.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicScalar};
use crate::ring::{Ring, ValuedRing, Valuation};

/// Ring descriptor for jets truncated at s^{order+1}.
#[derive(Clone, Debug, PartialEq)]
pub struct SJetRing {
    ctx: PadicContext,
    order: usize,
}

impl SJetRing {
    pub fn new(ctx: &PadicContext, order: usize) -> Self {
        SJetRing { ctx: ctx.clone(), order }
    }

    pub fn context(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The formal generator s.
    pub fn generator(&self) -> SJet {
        let mut coeffs = vec![self.ctx.zero(); self.order + 1];
        if self.order >= 1 {
            coeffs[1] = self.ctx.one();
        }
        SJet { ring: self.clone(), coeffs }
    }

    pub fn constant(&self, c: &PadicScalar) -> SJet {
        let mut coeffs = vec![self.ctx.zero(); self.order + 1];
        coeffs[0] = c.clone();
        SJet { ring: self.clone(), coeffs }
    }

    pub fn from_coefficients(&self, mut coeffs: Vec<PadicScalar>) -> SJet {
        coeffs.resize(self.order + 1, self.ctx.zero());
        SJet { ring: self.clone(), coeffs }
    }
}

/// c_0 + c_1 s + ... + c_K s^K (mod s^{K+1}).
#[derive(Clone, PartialEq)]
pub struct SJet {
    ring: SJetRing,
    coeffs: Vec<PadicScalar>,
}

impl SJet {
    pub fn ring(&self) -> &SJetRing {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.ring.order
    }

    pub fn coefficient(&self, k: usize) -> &PadicScalar {
        &self.coeffs[k]
    }

    pub fn coefficients(&self) -> &[PadicScalar] {
        &self.coeffs
    }

    pub fn add(&self, other: &SJet) -> SJet {
        debug_assert_eq!(self.ring, other.ring);
        SJet {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> SJet {
        SJet {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, other: &SJet) -> SJet {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &SJet) -> SJet {
        debug_assert_eq!(self.ring, other.ring);
        let ctx = &self.ring.ctx;
        let k = self.ring.order;
        let mut coeffs = vec![ctx.zero(); k + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j > k {
                    break;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        SJet { ring: self.ring.clone(), coeffs }
    }

    /// Inverse of a jet whose constant term is a unit: triangular solve
    /// y_0 = 1/c_0, y_k = -y_0 * sum_{i=1}^{k} c_i y_{k-i}. Jets with a
    /// non-unit constant term are never inverted.
    pub fn inv(&self) -> Result<SJet> {
        let ctx = &self.ring.ctx;
        if self.coeffs[0].val_floor() != Valuation::Finite(0) {
            return Err(Error::domain("jet constant term is not a unit"));
        }
        let c0_inv = self.coeffs[0]
            .inv()
            .map_err(|_| Error::domain("jet constant term is not invertible"))?;
        let k = self.ring.order;
        let mut out = vec![ctx.zero(); k + 1];
        out[0] = c0_inv.clone();
        for n in 1..=k {
            let mut acc = ctx.zero();
            for i in 1..=n {
                acc = acc.add(&self.coeffs[i].mul(&out[n - i]));
            }
            out[n] = acc.mul(&c0_inv).neg();
        }
        Ok(SJet { ring: self.ring.clone(), coeffs: out })
    }

    /// exp of a jet whose constant term lies in the exp disc: the scalar
    /// exponential of the constant part times the finite nilpotent sum.
    pub fn exp(&self) -> Result<SJet> {
        let ctx = &self.ring.ctx;
        let scalar_part = self.coeffs[0].exp()?;
        let mut nil = self.clone();
        nil.coeffs[0] = ctx.zero();
        let k = self.ring.order;
        let mut sum = self.ring.constant(&ctx.one());
        let mut term = self.ring.constant(&ctx.one());
        let mut factorial = BigInt::from(1);
        for n in 1..=k {
            factorial *= BigInt::from(n as i64);
            term = term.mul(&nil);
            let scaled = term.scale_rational(&BigRational::new(1.into(), factorial.clone()));
            sum = sum.add(&scaled);
        }
        Ok(sum.scale_scalar(&scalar_part))
    }

    pub fn scale_scalar(&self, c: &PadicScalar) -> SJet {
        SJet {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(),
        }
    }

    pub fn scale_rational(&self, q: &BigRational) -> SJet {
        let c = self.ring.ctx.from_ratio(q).expect("rational scale");
        self.scale_scalar(&c)
    }

    /// Evaluate at a scalar (Horner), for jet/scalar consistency checks.
    pub fn evaluate_at(&self, s: &PadicScalar) -> PadicScalar {
        let mut acc = self.ring.ctx.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(s).add(c);
        }
        acc
    }

    pub fn val_floor(&self) -> Valuation {
        self.coeffs
            .iter()
            .map(|c| c.val_floor())
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    pub fn abs_precision(&self) -> Valuation {
        self.coeffs
            .iter()
            .map(|c| c.abs_precision())
            .min()
            .unwrap_or(Valuation::Infinite)
    }
}

impl fmt::Debug for SJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SJet{:?}", self.coeffs)
    }
}

impl fmt::Display for SJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*s")?,
                _ => write!(f, "({c})*s^{k}")?,
            }
        }
        write!(f, " + O(s^{})", self.ring.order + 1)
    }
}

impl Ring for SJetRing {
    type Elem = SJet;

    fn zero(&self) -> SJet {
        self.constant(&self.ctx.zero())
    }

    fn one(&self) -> SJet {
        self.constant(&self.ctx.one())
    }

    fn is_zero(&self, x: &SJet) -> bool {
        x.coeffs.iter().all(|c| c.is_zero_to_working())
    }

    fn add(&self, a: &SJet, b: &SJet) -> SJet {
        a.add(b)
    }

    fn neg(&self, a: &SJet) -> SJet {
        a.neg()
    }

    fn mul(&self, a: &SJet, b: &SJet) -> SJet {
        a.mul(b)
    }

    fn inv(&self, a: &SJet) -> Result<SJet> {
        a.inv()
    }

    fn from_rational(&self, q: &BigRational) -> Result<SJet> {
        Ok(self.constant(&self.ctx.from_ratio(q)?))
    }
}

impl ValuedRing for SJetRing {
    fn prime(&self) -> u64 {
        self.ctx.prime()
    }

    fn target_precision(&self) -> i64 {
        self.ctx.target_precision()
    }

    fn working_precision(&self) -> i64 {
        self.ctx.working_precision()
    }

    fn val_floor(&self, x: &SJet) -> Valuation {
        x.val_floor()
    }

    fn abs_precision(&self, x: &SJet) -> Valuation {
        x.abs_precision()
    }

    fn truncate_abs(&self, x: &SJet, abs: i64) -> SJet {
        SJet {
            ring: x.ring.clone(),
            coeffs: x.coeffs.iter().map(|c| c.truncate_abs(abs)).collect(),
        }
    }
}

/// The ring the zeta exponent parameter lives in: p-adic scalars for
/// pointwise evaluation, jets for Taylor extraction. Both expose the same
/// angle-power operation so the engines run one code path.
pub trait SRing: ValuedRing {
    fn embed_scalar(&self, x: &PadicScalar) -> Self::Elem;

    /// <base>^s for s in this ring.
    fn angle_power(&self, base: &PadicScalar, s: &Self::Elem) -> Result<Self::Elem>;
}

impl SRing for PadicContext {
    fn embed_scalar(&self, x: &PadicScalar) -> PadicScalar {
        debug_assert!(self == x.context());
        x.clone()
    }

    fn angle_power(&self, base: &PadicScalar, s: &PadicScalar) -> Result<PadicScalar> {
        base.angle_power(s)
    }
}

impl SRing for SJetRing {
    fn embed_scalar(&self, x: &PadicScalar) -> SJet {
        self.constant(x)
    }

    /// <base>^s as the jet exponential of s * log_p(base).
    fn angle_power(&self, base: &PadicScalar, s: &SJet) -> Result<SJet> {
        if !s.val_floor().at_least(0) {
            return Err(Error::domain("exponent outside the closed unit disc"));
        }
        let log = base.log()?;
        s.scale_scalar(&log).exp()
    }
}

/// Coefficientwise agreement valuation of two jets.
pub fn jet_agreement(a: &SJet, b: &SJet) -> Valuation {
    a.sub(b).val_floor()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::agreement_valuation;

    fn ring() -> SJetRing {
        SJetRing::new(&PadicContext::with_default_guard(5, 12).unwrap(), 4)
    }

    #[test]
    fn generator_and_truncation() {
        let r = ring();
        let s = r.generator();
        let s5 = s.mul(&s).mul(&s).mul(&s).mul(&s);
        assert!(r.is_zero(&s5), "s^5 vanishes at order 4");
        let s2 = s.mul(&s);
        assert!(s2.coefficient(2).sub(&r.context().one()).is_zero_to_working());
    }

    #[test]
    fn inverse_round_trip() {
        let r = ring();
        let ctx = r.context().clone();
        let x = r.from_coefficients(vec![
            ctx.from_i64(3),
            ctx.from_i64(7),
            ctx.from_i64(-2),
            ctx.from_i64(1),
            ctx.from_i64(4),
        ]);
        let xi = x.inv().unwrap();
        let prod = x.mul(&xi);
        assert!(prod.sub(&r.one()).coefficients().iter().all(|c| c.is_zero_to_working()));

        let bad = r.from_coefficients(vec![ctx.from_i64(5)]);
        assert!(bad.inv().is_err());
    }

    #[test]
    fn exp_splits_constant_and_nilpotent_parts() {
        let r = ring();
        let ctx = r.context().clone();
        // x = 5 + 5 s: exp(x) = exp(5) * exp(5 s)
        let x = r.from_coefficients(vec![ctx.from_i64(5), ctx.from_i64(5)]);
        let e = x.exp().unwrap();
        let e5 = ctx.from_i64(5).exp().unwrap();
        // coefficient of s^k is exp(5) * 5^k / k!
        let mut fact = 1i64;
        for k in 0..=4usize {
            if k > 0 {
                fact *= k as i64;
            }
            let expect = e5
                .mul(&ctx.from_i64(5).pow(k as u64))
                .mul(&ctx.from_rational_parts(&1.into(), &fact.into()).unwrap());
            assert!(
                agreement_valuation(e.coefficient(k), &expect).at_least(ctx.target_precision() - 2),
                "coefficient {k}"
            );
        }
    }

    #[test]
    fn jet_angle_power_matches_scalar_evaluation() {
        let r = ring();
        let ctx = r.context().clone();
        let base = ctx.from_i64(6);
        let jet = r.angle_power(&base, &r.generator()).unwrap();
        for s_int in [0i64, 1, 2, 5] {
            let s = ctx.from_i64(s_int);
            // the jet truncates the exponential: at order 4 the first
            // dropped term is (log 6)^5 s^5 / 5! with valuation 5 - 1 = 4
            let via_jet = jet.evaluate_at(&s);
            let direct = base.angle_power(&s).unwrap();
            assert!(
                agreement_valuation(&via_jet, &direct).at_least(4),
                "s = {s_int}"
            );
        }
    }
}
