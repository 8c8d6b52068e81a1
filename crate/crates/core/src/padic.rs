//! Exact arithmetic in Q_p with tracked precision, and the analytic
//! primitives on top of it: Teichmüller lifts, the angle decomposition
//! a = p^v * omega * <a>, the p-adic logarithm and exponential, binomial
//! coefficients binom(s, n) and powers <a>^s.
//!
//! A scalar represents p^v * u + O(p^{v + r}) with u a unit known modulo
//! p^r. Arithmetic never claims more absolute precision than the standard
//! propagation rules allow: absolute precision is the minimum under
//! addition, relative precision the minimum under multiplication. Exact
//! zero is a distinguished state; "zero to N digits" is a claim O(p^N)
//! with no known digits.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{ilog_p, tail_cutoff, Ring, ValuedRing, Valuation};

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[derive(Debug)]
struct CtxInner {
    p: u64,
    target_precision: i64,
    guard_digits: i64,
    working_precision: i64,
    /// p^0 .. p^{working_precision}, cached at construction so the context
    /// stays immutable afterwards.
    pows: Vec<BigUint>,
}

/// Shared parameters of one computation run: the odd prime p, the
/// requested precision N_t and the guard digits G (working precision
/// N_w = N_t + G). Cheap to clone; every scalar carries one.
#[derive(Clone, Debug)]
pub struct PadicContext {
    inner: Arc<CtxInner>,
}

impl PartialEq for PadicContext {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.prime() == other.prime()
                && self.target_precision() == other.target_precision()
                && self.guard_digits() == other.guard_digits())
    }
}

impl Eq for PadicContext {}

impl PadicContext {
    /// p must be an odd prime: the exponential disc and the closed-form
    /// theorems both need p >= 3 in the unramified setting.
    pub fn new(p: u64, target_precision: u32, guard_digits: u32) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::domain(format!("p = {p} is not an odd prime (p >= 3 required)")));
        }
        if target_precision == 0 {
            return Err(Error::domain("target precision must be at least 1"));
        }
        let target = target_precision as i64;
        let working = target + guard_digits as i64;
        let mut pows = Vec::with_capacity(working as usize + 1);
        let mut pw = BigUint::one();
        for _ in 0..=working {
            pows.push(pw.clone());
            pw *= p;
        }
        Ok(PadicContext {
            inner: Arc::new(CtxInner {
                p,
                target_precision: target,
                guard_digits: guard_digits as i64,
                working_precision: working,
                pows,
            }),
        })
    }

    /// Default guard: G = 2*ceil(log_p M) + 4 where M is the log-series
    /// cutoff for a unit-valuation argument, so that the division losses of
    /// a full series evaluation stay inside the guard.
    pub fn with_default_guard(p: u64, target_precision: u32) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::domain(format!("p = {p} is not an odd prime (p >= 3 required)")));
        }
        let target = target_precision as i64;
        let m = tail_cutoff(p, 1, 1, target + 1).max(1);
        let mut ceil_log = ilog_p(p, m);
        if p.pow(ceil_log as u32) < m {
            ceil_log += 1;
        }
        let guard = 2 * ceil_log + 4;
        PadicContext::new(p, target_precision, guard as u32)
    }

    pub fn prime(&self) -> u64 {
        self.inner.p
    }

    pub fn target_precision(&self) -> i64 {
        self.inner.target_precision
    }

    pub fn guard_digits(&self) -> i64 {
        self.inner.guard_digits
    }

    pub fn working_precision(&self) -> i64 {
        self.inner.working_precision
    }

    /// p^k for k >= 0.
    pub fn pow_p(&self, k: i64) -> BigUint {
        assert!(k >= 0, "negative power of p has no integer value");
        let k = k as usize;
        match self.inner.pows.get(k) {
            Some(x) => x.clone(),
            None => BigUint::from(self.inner.p).pow(k as u32),
        }
    }

    pub fn zero(&self) -> PadicScalar {
        PadicScalar { ctx: self.clone(), repr: Repr::Zero }
    }

    pub fn one(&self) -> PadicScalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> PadicScalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> PadicScalar {
        if n.is_zero() {
            return self.zero();
        }
        let w = self.working_precision();
        let (val, unit) = split_p_power(self.prime(), n.magnitude());
        let modulus = self.pow_p(w);
        let mut u = unit % &modulus;
        if n.sign() == Sign::Minus {
            u = &modulus - u;
        }
        // |n| may be a pure power of p times a unit that reduces to 0 only
        // if the modulus divides it, which the split already prevents.
        PadicScalar {
            ctx: self.clone(),
            repr: Repr::Approx { val, unit: u, rel: w },
        }
    }

    /// num/den as an element of Q_p, carried at full working precision.
    pub fn from_rational_parts(&self, num: &BigInt, den: &BigInt) -> Result<PadicScalar> {
        if den.is_zero() {
            return Err(Error::domain("denominator is zero"));
        }
        let n = self.from_bigint(num);
        let d = self.from_bigint(den);
        n.div(&d)
    }

    pub fn from_ratio(&self, q: &BigRational) -> Result<PadicScalar> {
        self.from_rational_parts(q.numer(), q.denom())
    }

    /// Parse the p-adic literal grammar shared with the CLI:
    /// `<int>` | `<int>/<int>` | `p^<v>*<int>`.
    pub fn parse(&self, text: &str) -> Result<PadicScalar> {
        let t = text.trim();
        if t.is_empty() {
            return Err(Error::parse("empty p-adic literal"));
        }
        if let Some(rest) = t.strip_prefix("p^") {
            let (v_str, u_str) = rest
                .split_once('*')
                .ok_or_else(|| Error::parse(format!("expected p^<v>*<int>, got `{t}`")))?;
            let v: i64 = v_str
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("bad exponent in `{t}`")))?;
            let u: BigInt = u_str
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("bad integer in `{t}`")))?;
            return Ok(self.from_bigint(&u).shift(v));
        }
        if let Some((n_str, d_str)) = t.split_once('/') {
            let n: BigInt = n_str
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("bad numerator in `{t}`")))?;
            let d: BigInt = d_str
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("bad denominator in `{t}`")))?;
            return self
                .from_rational_parts(&n, &d)
                .map_err(|_| Error::parse(format!("zero denominator in `{t}`")));
        }
        let n: BigInt = t
            .parse()
            .map_err(|_| Error::parse(format!("bad p-adic literal `{t}`")))?;
        Ok(self.from_bigint(&n))
    }
}

/// (v_p(n), n / p^{v_p(n)}) for n != 0.
fn split_p_power(p: u64, n: &BigUint) -> (i64, BigUint) {
    debug_assert!(!n.is_zero());
    let big_p = BigUint::from(p);
    let mut val = 0i64;
    let mut rest = n.clone();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&rest, &big_p);
        if r.is_zero() {
            val += 1;
            rest = q;
        } else {
            break;
        }
    }
    (val, rest)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    /// The exact zero of Q_p.
    Zero,
    /// p^val * unit + O(p^{val+rel}); for rel = 0 nothing is known beyond
    /// the bound O(p^val) and unit is 0.
    Approx { val: i64, unit: BigUint, rel: i64 },
}

/// An element of Q_p with tracked precision.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicScalar {
    ctx: PadicContext,
    repr: Repr,
}

impl PadicScalar {
    fn assert_same_ctx(&self, other: &PadicScalar) {
        assert!(
            self.ctx == other.ctx,
            "mixed p-adic contexts (p={} vs p={})",
            self.ctx.prime(),
            other.ctx.prime()
        );
    }

    /// Normalized constructor: `value * p^base` is known modulo p^abs.
    pub(crate) fn from_window(ctx: &PadicContext, base: i64, value: BigUint, abs: i64) -> PadicScalar {
        if abs <= base {
            return PadicScalar {
                ctx: ctx.clone(),
                repr: Repr::Approx { val: abs, unit: BigUint::zero(), rel: 0 },
            };
        }
        let window = abs - base;
        let value = value % ctx.pow_p(window);
        if value.is_zero() {
            return PadicScalar {
                ctx: ctx.clone(),
                repr: Repr::Approx { val: abs, unit: BigUint::zero(), rel: 0 },
            };
        }
        let (w, unit) = split_p_power(ctx.prime(), &value);
        let val = base + w;
        PadicScalar {
            ctx: ctx.clone(),
            repr: Repr::Approx { val, unit, rel: abs - val },
        }
    }

    pub fn context(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    /// Indistinguishable from zero at working precision.
    pub fn is_zero_to_working(&self) -> bool {
        self.val_floor().at_least(self.ctx.working_precision())
    }

    /// Certified lower bound on the valuation; exact whenever digits are
    /// known (rel > 0).
    pub fn val_floor(&self) -> Valuation {
        match &self.repr {
            Repr::Zero => Valuation::Infinite,
            Repr::Approx { val, .. } => Valuation::Finite(*val),
        }
    }

    /// Number of known unit digits.
    pub fn rel_precision(&self) -> i64 {
        match &self.repr {
            Repr::Zero => i64::MAX,
            Repr::Approx { rel, .. } => *rel,
        }
    }

    pub fn abs_precision(&self) -> Valuation {
        match &self.repr {
            Repr::Zero => Valuation::Infinite,
            Repr::Approx { val, rel, .. } => Valuation::Finite(val + rel),
        }
    }

    /// The unit part, if digits are known.
    pub fn unit(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Approx { unit, rel, .. } if *rel > 0 => Some(unit),
            _ => None,
        }
    }

    /// Multiply by p^k (exact shift of the valuation).
    pub fn shift(&self, k: i64) -> PadicScalar {
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::Approx { val, unit, rel } => PadicScalar {
                ctx: self.ctx.clone(),
                repr: Repr::Approx { val: val + k, unit: unit.clone(), rel: *rel },
            },
        }
    }

    pub fn add(&self, other: &PadicScalar) -> PadicScalar {
        self.assert_same_ctx(other);
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) => other.clone(),
            (_, Repr::Zero) => self.clone(),
            (
                Repr::Approx { val: va, unit: ua, rel: ra },
                Repr::Approx { val: vb, unit: ub, rel: rb },
            ) => {
                let abs = (va + ra).min(vb + rb);
                let base = (*va).min(*vb);
                if abs <= base {
                    return PadicScalar::from_window(&self.ctx, base, BigUint::zero(), abs);
                }
                let ctx = &self.ctx;
                let sa = ua * ctx.pow_p(va - base);
                let sb = ub * ctx.pow_p(vb - base);
                PadicScalar::from_window(ctx, base, sa + sb, abs)
            }
        }
    }

    pub fn neg(&self) -> PadicScalar {
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::Approx { val, unit, rel } => {
                if *rel == 0 {
                    return self.clone();
                }
                let m = self.ctx.pow_p(*rel);
                PadicScalar {
                    ctx: self.ctx.clone(),
                    repr: Repr::Approx { val: *val, unit: &m - unit, rel: *rel },
                }
            }
        }
    }

    pub fn sub(&self, other: &PadicScalar) -> PadicScalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PadicScalar) -> PadicScalar {
        self.assert_same_ctx(other);
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => self.ctx.zero(),
            (
                Repr::Approx { val: va, unit: ua, rel: ra },
                Repr::Approx { val: vb, unit: ub, rel: rb },
            ) => {
                let val = va + vb;
                let rel = (*ra).min(*rb);
                if rel == 0 {
                    return PadicScalar {
                        ctx: self.ctx.clone(),
                        repr: Repr::Approx { val, unit: BigUint::zero(), rel: 0 },
                    };
                }
                let unit = (ua * ub) % self.ctx.pow_p(rel);
                PadicScalar {
                    ctx: self.ctx.clone(),
                    repr: Repr::Approx { val, unit, rel },
                }
            }
        }
    }

    pub fn inv(&self) -> Result<PadicScalar> {
        match &self.repr {
            Repr::Zero => Err(Error::domain("division by exact zero")),
            Repr::Approx { val, unit, rel } => {
                if *rel == 0 {
                    return Err(Error::domain(
                        "cannot invert a value with no known digits",
                    ));
                }
                let modulus = BigInt::from(self.ctx.pow_p(*rel));
                let u = BigInt::from(unit.clone());
                let inv = u
                    .modinv(&modulus)
                    .expect("unit is coprime to p")
                    .magnitude()
                    .clone();
                Ok(PadicScalar {
                    ctx: self.ctx.clone(),
                    repr: Repr::Approx { val: -val, unit: inv, rel: *rel },
                })
            }
        }
    }

    pub fn div(&self, other: &PadicScalar) -> Result<PadicScalar> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u64) -> PadicScalar {
        let mut result = self.ctx.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    /// Weaken the claim to at most `abs` absolute digits. Exact zero passes
    /// through: all of its claims are true.
    pub fn truncate_abs(&self, abs: i64) -> PadicScalar {
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::Approx { val, unit, rel } => {
                if val + rel <= abs {
                    return self.clone();
                }
                if abs <= *val {
                    return PadicScalar {
                        ctx: self.ctx.clone(),
                        repr: Repr::Approx { val: abs, unit: BigUint::zero(), rel: 0 },
                    };
                }
                let rel2 = abs - val;
                PadicScalar {
                    ctx: self.ctx.clone(),
                    repr: Repr::Approx { val: *val, unit: unit % self.ctx.pow_p(rel2), rel: rel2 },
                }
            }
        }
    }

    /// The value reduced modulo p^digits as a nonnegative integer, when the
    /// scalar is integral and carries enough precision. Convenient for
    /// comparing against hand-computed residues.
    pub fn integer_residue(&self, digits: i64) -> Result<BigUint> {
        match &self.repr {
            Repr::Zero => Ok(BigUint::zero()),
            Repr::Approx { val, unit, rel } => {
                if *val < 0 {
                    return Err(Error::domain("not a p-adic integer"));
                }
                if val + rel < digits {
                    return Err(Error::domain(format!(
                        "only {} digits known, {digits} requested",
                        val + rel
                    )));
                }
                if *val >= digits {
                    return Ok(BigUint::zero());
                }
                Ok((unit * self.ctx.pow_p(*val)) % self.ctx.pow_p(digits))
            }
        }
    }

    /// Teichmüller representative of a unit: the unique root of unity of
    /// order dividing p-1 congruent to it modulo p. Computed by iterating
    /// x -> x^p to its fixpoint; each step gains at least one digit.
    pub fn teichmuller(&self) -> Result<PadicScalar> {
        match &self.repr {
            Repr::Approx { val: 0, unit, rel } if *rel > 0 => {
                let ctx = &self.ctx;
                let w = ctx.working_precision();
                let modulus = ctx.pow_p(w);
                let p = BigUint::from(ctx.prime());
                let mut x = unit % &modulus;
                for _ in 0..=w {
                    let next = x.modpow(&p, &modulus);
                    if next == x {
                        break;
                    }
                    x = next;
                }
                Ok(PadicScalar {
                    ctx: ctx.clone(),
                    repr: Repr::Approx { val: 0, unit: x, rel: w },
                })
            }
            Repr::Zero => Err(Error::domain("Teichmüller lift of zero")),
            _ => Err(Error::domain(
                "Teichmüller lift requires a unit with known digits",
            )),
        }
    }

    /// a = p^v * omega * <a> with omega the Teichmüller representative of
    /// the unit part and <a> = 1 (mod p).
    pub fn angle_decompose(&self) -> Result<AngleDecomposition> {
        match &self.repr {
            Repr::Zero => Err(Error::domain("angle decomposition of zero")),
            Repr::Approx { val, unit, rel } => {
                if *rel == 0 {
                    return Err(Error::domain(
                        "angle decomposition requires known digits",
                    ));
                }
                let u = PadicScalar {
                    ctx: self.ctx.clone(),
                    repr: Repr::Approx { val: 0, unit: unit.clone(), rel: *rel },
                };
                let omega = u.teichmuller()?;
                let angle = u.div(&omega)?;
                Ok(AngleDecomposition { valuation: *val, teichmuller: omega, angle })
            }
        }
    }

    /// The 1-unit part <a>.
    pub fn angle(&self) -> Result<PadicScalar> {
        Ok(self.angle_decompose()?.angle)
    }

    /// log_p with the normalization log_p p = 0: the log series applied to
    /// the angle part. The returned claim is capped one digit past the
    /// target precision, where the dropped tail is certified.
    pub fn log(&self) -> Result<PadicScalar> {
        let ctx = &self.ctx;
        let angle = self.angle()?;
        let x = angle.sub(&ctx.one());
        if x.is_zero_to_working() {
            // The angle is 1 up to O(p^{N_w}), so the log sits below every
            // representable claim; report exact zero.
            return Ok(ctx.zero());
        }
        let v_x = x
            .val_floor()
            .finite()
            .expect("nonzero window");
        debug_assert!(v_x >= 1, "angle part is a 1-unit");
        if x.rel_precision() == 0 {
            // log(1 + O(p^v)) = O(p^v): nothing more can be claimed.
            return Ok(x);
        }
        let target = ctx.target_precision() + 1;
        let m_max = tail_cutoff(ctx.prime(), v_x, 1, target);
        let mut sum = ctx.zero();
        let mut power = ctx.one();
        for m in 1..=m_max {
            power = power.mul(&x);
            let sign = if m % 2 == 1 { 1 } else { -1 };
            let coeff = BigRational::new(BigInt::from(sign), BigInt::from(m));
            sum = sum.add(&power.mul(&ctx.from_ratio(&coeff).expect("m nonzero")));
        }
        let certified = sum.abs_precision().capped(target);
        Ok(sum.truncate_abs(certified))
    }

    /// exp_p, defined for valuation >= 1 (sufficient for p >= 3).
    pub fn exp(&self) -> Result<PadicScalar> {
        let ctx = &self.ctx;
        if self.is_exact_zero() {
            return Ok(ctx.one());
        }
        if !self.val_floor().at_least(1) {
            return Err(Error::domain("outside the exp convergence disc"));
        }
        if self.rel_precision() == 0 {
            // exp(O(p^v)) = 1 + O(p^v)
            return Ok(ctx.one().add(self));
        }
        let v_x = self.val_floor().finite().expect("nonzero");
        let m_max = factorial_series_cutoff(ctx, v_x);
        let mut sum = ctx.one();
        let mut term = ctx.one();
        for m in 1..=m_max {
            let m_inv = BigRational::new(BigInt::one(), BigInt::from(m));
            term = term.mul(self).mul(&ctx.from_ratio(&m_inv).expect("m nonzero"));
            sum = sum.add(&term);
        }
        let target = ctx.target_precision() + 1;
        let certified = sum.abs_precision().capped(target);
        Ok(sum.truncate_abs(certified))
    }

    /// <a>^s via the binomial series sum binom(s, n) (<a> - 1)^n, valid for
    /// |s| <= 1. Agrees with exp(s log_p a) where both converge.
    pub fn angle_power(&self, s: &PadicScalar) -> Result<PadicScalar> {
        let ctx = &self.ctx;
        self.assert_same_ctx(s);
        if s.is_exact_zero() {
            return Ok(ctx.one());
        }
        if !s.val_floor().at_least(0) {
            return Err(Error::domain("exponent outside the closed unit disc"));
        }
        let angle = self.angle()?;
        let x = angle.sub(&ctx.one());
        if x.is_zero_to_working() {
            return Ok(ctx.one());
        }
        if x.rel_precision() == 0 {
            return Ok(ctx.one().add(&x.mul(s)));
        }
        let v_x = x.val_floor().finite().expect("nonzero");
        let m_max = factorial_series_cutoff(ctx, v_x);
        let mut sum = ctx.one();
        let mut coeff = ctx.one();
        let mut power = ctx.one();
        for n in 0..m_max {
            // binom(s, n+1) = binom(s, n) * (s - n) / (n + 1)
            let step = s.sub(&ctx.from_i64(n as i64));
            let n1_inv = BigRational::new(BigInt::one(), BigInt::from(n + 1));
            coeff = coeff.mul(&step).mul(&ctx.from_ratio(&n1_inv).expect("n+1 nonzero"));
            power = power.mul(&x);
            sum = sum.add(&coeff.mul(&power));
        }
        let target = ctx.target_precision() + 1;
        let certified = sum.abs_precision().capped(target);
        Ok(sum.truncate_abs(certified))
    }

    /// Render in the compact literal grammar (`p^<v>*<u>` or `<u>`); a
    /// value with no known digits prints as `0` and its precision must be
    /// reported separately.
    pub fn literal(&self) -> String {
        match &self.repr {
            Repr::Zero => "0".into(),
            Repr::Approx { rel: 0, .. } => "0".into(),
            Repr::Approx { val: 0, unit, .. } => unit.to_string(),
            Repr::Approx { val, unit, .. } => format!("p^{val}*{unit}"),
        }
    }

    /// Digit expansion `a_0 + a_1*p + ... + O(p^N)` starting at p^val.
    pub fn expansion(&self) -> String {
        match &self.repr {
            Repr::Zero => "0".into(),
            Repr::Approx { val, unit, rel } => {
                if *rel == 0 {
                    return format!("O(p^{val})");
                }
                let p = self.ctx.prime();
                let big_p = BigUint::from(p);
                let mut pieces = Vec::new();
                let mut u = unit.clone();
                for i in 0..*rel {
                    let (q, r) = num_integer::Integer::div_rem(&u, &big_p);
                    u = q;
                    if r.is_zero() {
                        continue;
                    }
                    let e = val + i;
                    let piece = match e {
                        0 => format!("{r}"),
                        1 => format!("{r}*p"),
                        _ => format!("{r}*p^{e}"),
                    };
                    pieces.push(piece);
                }
                let abs = val + rel;
                if pieces.is_empty() {
                    format!("O(p^{abs})")
                } else {
                    format!("{} + O(p^{abs})", pieces.join(" + "))
                }
            }
        }
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expansion())
    }
}

impl fmt::Debug for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero => write!(f, "PadicScalar(0 exact, p={})", self.ctx.prime()),
            Repr::Approx { val, unit, rel } => {
                write!(f, "PadicScalar(p^{val}*{unit} + O(p^{}), p={})", val + rel, self.ctx.prime())
            }
        }
    }
}

/// a = p^valuation * teichmuller * angle.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleDecomposition {
    pub valuation: i64,
    pub teichmuller: PadicScalar,
    pub angle: PadicScalar,
}

impl AngleDecomposition {
    pub fn reassemble(&self) -> PadicScalar {
        self.teichmuller.mul(&self.angle).shift(self.valuation)
    }
}

/// binom(s, n) = s(s-1)...(s-n+1)/n!.
pub fn binomial_coefficient(s: &PadicScalar, n: u64) -> PadicScalar {
    let ctx = s.context().clone();
    let mut num = ctx.one();
    for i in 0..n {
        num = num.mul(&s.sub(&ctx.from_i64(i as i64)));
    }
    let mut fact = BigInt::one();
    for i in 1..=n {
        fact *= BigInt::from(i);
    }
    num.mul(
        &ctx.from_ratio(&BigRational::new(BigInt::one(), fact))
            .expect("factorial nonzero"),
    )
}

/// Valuation of the difference, i.e. the number of agreeing digits. Capped
/// only by the operands' own precision claims.
pub fn agreement_valuation(a: &PadicScalar, b: &PadicScalar) -> Valuation {
    a.sub(b).val_floor()
}

/// Cutoff for series with a 1/m! style denominator (exp, binomial powers):
/// smallest M with m*v - (m-1)/(p-1) >= target + 1 for all m > M, using
/// v_p(m!) <= (m-1)/(p-1).
fn factorial_series_cutoff(ctx: &PadicContext, v_x: i64) -> u64 {
    let p = ctx.prime() as i64;
    let target = ctx.target_precision() + 1;
    // m*(v*(p-1) - 1) >= target*(p-1) - 1
    let slope = v_x * (p - 1) - 1;
    debug_assert!(slope >= 1, "v >= 1 and p >= 3 keep the series inside the disc");
    let rhs = target * (p - 1) - 1;
    let m = (rhs + slope - 1) / slope;
    m.max(0) as u64
}

impl Ring for PadicContext {
    type Elem = PadicScalar;

    fn zero(&self) -> PadicScalar {
        PadicContext::zero(self)
    }

    fn one(&self) -> PadicScalar {
        PadicContext::one(self)
    }

    fn is_zero(&self, x: &PadicScalar) -> bool {
        x.is_zero_to_working()
    }

    fn add(&self, a: &PadicScalar, b: &PadicScalar) -> PadicScalar {
        a.add(b)
    }

    fn neg(&self, a: &PadicScalar) -> PadicScalar {
        a.neg()
    }

    fn mul(&self, a: &PadicScalar, b: &PadicScalar) -> PadicScalar {
        a.mul(b)
    }

    fn inv(&self, a: &PadicScalar) -> Result<PadicScalar> {
        a.inv()
    }

    fn from_rational(&self, q: &BigRational) -> Result<PadicScalar> {
        self.from_ratio(q)
    }
}

impl ValuedRing for PadicContext {
    fn prime(&self) -> u64 {
        PadicContext::prime(self)
    }

    fn target_precision(&self) -> i64 {
        PadicContext::target_precision(self)
    }

    fn working_precision(&self) -> i64 {
        PadicContext::working_precision(self)
    }

    fn val_floor(&self, x: &PadicScalar) -> Valuation {
        x.val_floor()
    }

    fn abs_precision(&self, x: &PadicScalar) -> Valuation {
        x.abs_precision()
    }

    fn truncate_abs(&self, x: &PadicScalar, abs: i64) -> PadicScalar {
        x.truncate_abs(abs)
    }
}
