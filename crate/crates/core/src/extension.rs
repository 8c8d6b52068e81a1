//! Arithmetic in unramified extensions of Q_p and enumeration of the
//! roots of unity mu_N for N | p^f - 1, which drive the finite-average
//! oracle for the Shnirelman integral.
//!
//! Elements are residue polynomials of degree < f over [`PadicScalar`]
//! coefficients, reduced modulo a deterministic defining polynomial that
//! is irreducible mod p. Unramifiedness makes the field valuation equal
//! to the minimum coefficient valuation.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::padic::{PadicContext, PadicScalar};
use crate::ring::{tail_cutoff, Ring, ValuedRing, Valuation};

// ---------------------------------------------------------------------
// dense polynomial arithmetic over F_p (u64 coefficients, p odd, small)
// ---------------------------------------------------------------------

fn fp_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_rem(a: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    debug_assert!(*g.last().unwrap() == 1, "monic modulus");
    let mut r: Vec<u64> = a.to_vec();
    fp_trim(&mut r);
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - dg;
        for (i, &gi) in g.iter().enumerate() {
            let idx = shift + i;
            let sub = lead * (gi % p) % p;
            r[idx] = (r[idx] + p - sub) % p;
        }
        fp_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn fp_mul(a: &[u64], b: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    fp_rem(&prod, g, p)
}

fn fp_powmod(base: &[u64], exp: &BigUint, g: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let b = fp_rem(base, g, p);
    for bit in (0..exp.bits()).rev() {
        result = fp_mul(&result, &result, g, p);
        if exp.bit(bit) {
            result = fp_mul(&result, &b, g, p);
        }
    }
    result
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x: Vec<u64> = a.to_vec();
    let mut y: Vec<u64> = b.to_vec();
    fp_trim(&mut x);
    fp_trim(&mut y);
    while !y.is_empty() {
        let r = fp_poly_mod(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Remainder against an arbitrary nonzero divisor (not necessarily monic).
fn fp_poly_mod(a: &[u64], d: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    fp_trim(&mut r);
    let dd = d.len() - 1;
    let lead_inv = fp_inv_scalar(*d.last().unwrap(), p);
    while r.len() > dd {
        let c = *r.last().unwrap() * lead_inv % p;
        let shift = r.len() - 1 - dd;
        for (i, &di) in d.iter().enumerate() {
            let sub = c * di % p;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        fp_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn fp_inv_scalar(x: u64, p: u64) -> u64 {
    // Fermat: x^{p-2} mod p
    let mut result = 1u64;
    let mut base = x % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Inverse of `a` modulo the monic irreducible `g` over F_p, by the
/// extended Euclidean algorithm.
fn fp_inv_mod(a: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    // invariants: r0 = t0*a (mod g), r1 = t1*a (mod g)
    let mut r0: Vec<u64> = g.to_vec();
    let mut r1: Vec<u64> = fp_rem(a, g, p);
    let mut t0: Vec<u64> = vec![];
    let mut t1: Vec<u64> = vec![1];
    while !r1.is_empty() && r1.len() > 1 {
        let (q, r) = fp_divmod(&r0, &r1, p);
        let qt1 = fp_mul_plain(&q, &t1, p);
        let t2 = fp_sub(&t0, &qt1, p);
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t2;
    }
    assert!(!r1.is_empty(), "input not invertible mod g");
    let c_inv = fp_inv_scalar(r1[0], p);
    let mut out: Vec<u64> = t1.iter().map(|&x| x * c_inv % p).collect();
    fp_trim(&mut out);
    fp_rem(&out, g, p)
}

fn fp_divmod(a: &[u64], d: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r: Vec<u64> = a.to_vec();
    fp_trim(&mut r);
    let dd = d.len() - 1;
    let lead_inv = fp_inv_scalar(*d.last().unwrap(), p);
    let mut q = vec![0u64; r.len().saturating_sub(dd)];
    while r.len() > dd {
        let c = *r.last().unwrap() * lead_inv % p;
        let shift = r.len() - 1 - dd;
        q[shift] = c;
        for (i, &di) in d.iter().enumerate() {
            let sub = c * di % p;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        fp_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    fp_trim(&mut q);
    (q, r)
}

fn fp_mul_plain(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    fp_trim(&mut prod);
    prod
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + p - y) % p;
    }
    fp_trim(&mut out);
    out
}

/// Irreducibility over F_p: x^{p^f} = x mod g and gcd(x^{p^{f/q}} - x, g)
/// trivial for every prime q | f.
fn fp_is_irreducible(g: &[u64], p: u64) -> bool {
    let f = g.len() - 1;
    let x = vec![0u64, 1];
    let q_total = BigUint::from(p).pow(f as u32);
    let frob = fp_powmod(&x, &q_total, g, p);
    if frob != fp_rem(&x, g, p) {
        return false;
    }
    let mut rest = f;
    let mut prime_divs = Vec::new();
    let mut d = 2;
    while d * d <= rest {
        if rest % d == 0 {
            prime_divs.push(d);
            while rest % d == 0 {
                rest /= d;
            }
        }
        d += 1;
    }
    if rest > 1 {
        prime_divs.push(rest);
    }
    for q in prime_divs {
        let e = BigUint::from(p).pow((f / q) as u32);
        let sub = fp_powmod(&x, &e, g, p);
        let diff = fp_sub(&sub, &fp_rem(&x, g, p), p);
        let gcd = fp_gcd(&diff, g, p);
        if gcd.len() != 1 {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------
// the unramified field
// ---------------------------------------------------------------------

#[derive(Debug)]
struct FieldInner {
    ctx: PadicContext,
    degree: usize,
    /// Low coefficients c_0..c_{f-1} of the monic defining polynomial
    /// x^f + c_{f-1} x^{f-1} + ... + c_0, as exact integer lifts in [0, p).
    modulus: Vec<u64>,
}

/// The unramified extension of Q_p of a given degree, presented as
/// Q_p[x]/(g) with a deterministic irreducible g. Degree 1 degenerates to
/// Q_p itself.
#[derive(Clone, Debug)]
pub struct UnramifiedField {
    inner: Arc<FieldInner>,
}

impl PartialEq for UnramifiedField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.ctx == other.inner.ctx
                && self.inner.degree == other.inner.degree
                && self.inner.modulus == other.inner.modulus)
    }
}

impl UnramifiedField {
    /// Deterministic construction: the defining polynomial is the
    /// lexicographically smallest monic one (coefficients compared from the
    /// highest degree down, each in {0..p-1}) that is irreducible mod p.
    pub fn new(ctx: &PadicContext, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::domain("extension degree must be at least 1"));
        }
        let p = ctx.prime();
        if degree == 1 {
            return Ok(UnramifiedField {
                inner: Arc::new(FieldInner { ctx: ctx.clone(), degree: 1, modulus: vec![0] }),
            });
        }
        let mut coeffs = vec![0u64; degree];
        loop {
            // candidate x^f + sum coeffs[i] x^i, searched in lex order on
            // (c_{f-1}, ..., c_0)
            let mut g: Vec<u64> = coeffs.clone();
            g.push(1);
            if fp_is_irreducible(&g, p) {
                return Ok(UnramifiedField {
                    inner: Arc::new(FieldInner { ctx: ctx.clone(), degree, modulus: coeffs }),
                });
            }
            // increment the reversed-coefficient counter
            let mut i = 0;
            loop {
                coeffs[i] += 1;
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
                assert!(i < degree, "an irreducible polynomial of every degree exists over F_p");
            }
        }
    }

    pub fn context(&self) -> &PadicContext {
        &self.inner.ctx
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    /// Integer lifts of the non-leading defining coefficients.
    pub fn defining_coefficients(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn zero_elem(&self) -> ExtScalar {
        let ctx = self.context();
        ExtScalar {
            field: self.clone(),
            coeffs: vec![ctx.zero(); self.degree()],
        }
    }

    pub fn one_elem(&self) -> ExtScalar {
        self.embed(&self.context().one())
    }

    /// Embed a base-field scalar as the constant residue polynomial.
    pub fn embed(&self, x: &PadicScalar) -> ExtScalar {
        let ctx = self.context();
        let mut coeffs = vec![ctx.zero(); self.degree()];
        coeffs[0] = x.clone();
        ExtScalar { field: self.clone(), coeffs }
    }

    /// Element with the given residue-polynomial coefficients mod p.
    pub fn from_residue(&self, residue: &[u64]) -> ExtScalar {
        assert_eq!(residue.len(), self.degree());
        let ctx = self.context();
        let coeffs = residue.iter().map(|&c| ctx.from_i64(c as i64)).collect();
        ExtScalar { field: self.clone(), coeffs }
    }

    /// The distinct N-th roots of unity, for N coprime to p dividing
    /// p^f - 1: Teichmüller lifts of the order-dividing-N residues.
    pub fn roots_of_unity(&self, n: u64) -> Result<Vec<ExtScalar>> {
        let p = self.context().prime();
        if n == 0 {
            return Err(Error::domain("N must be positive"));
        }
        if n % p == 0 {
            return Err(Error::domain("N must be coprime to p"));
        }
        let f = self.degree();
        let q = p
            .checked_pow(f as u32)
            .ok_or_else(|| Error::domain("p^f overflows"))?;
        if (q - 1) % n != 0 {
            return Err(Error::domain(format!(
                "mu_{n} is not contained in this field (N must divide p^{f} - 1 = {})",
                q - 1
            )));
        }
        let g: Vec<u64> = {
            let mut g = self.inner.modulus.clone();
            g.push(1);
            g
        };
        let mut roots = Vec::with_capacity(n as usize);
        // enumerate residues in lexicographic order for determinism
        let mut counter = vec![0u64; f];
        loop {
            // advance to next residue tuple
            let mut i = 0;
            loop {
                counter[i] += 1;
                if counter[i] < p {
                    break;
                }
                counter[i] = 0;
                i += 1;
                if i == f {
                    // wrapped: enumeration finished
                    assert_eq!(roots.len() as u64, n, "cyclic group has exactly N solutions");
                    return Ok(roots);
                }
            }
            let mut residue: Vec<u64> = counter.clone();
            fp_trim(&mut residue);
            if residue.is_empty() {
                continue;
            }
            let pow = if f == 1 {
                // F_p directly
                let mut acc = 1u64;
                let mut base = residue[0];
                let mut e = n;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    e >>= 1;
                }
                vec![acc % p]
            } else {
                fp_powmod(&residue, &BigUint::from(n), &g, p)
            };
            if pow == vec![1u64] {
                let lift = self.from_residue(&counter).teichmuller()?;
                roots.push(lift);
            }
            if roots.len() as u64 == n {
                return Ok(roots);
            }
        }
    }
}

/// An element of the unramified extension: a residue polynomial with
/// p-adic scalar coefficients.
#[derive(Clone, PartialEq)]
pub struct ExtScalar {
    field: UnramifiedField,
    coeffs: Vec<PadicScalar>,
}

impl ExtScalar {
    pub fn field(&self) -> &UnramifiedField {
        &self.field
    }

    pub fn coefficients(&self) -> &[PadicScalar] {
        &self.coeffs
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

    pub fn is_zero_to_working(&self) -> bool {
        self.val_floor()
            .at_least(self.field.context().working_precision())
    }

    pub fn add(&self, other: &ExtScalar) -> ExtScalar {
        assert!(self.field == other.field, "mixed extension fields");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        ExtScalar { field: self.field.clone(), coeffs }
    }

    pub fn neg(&self) -> ExtScalar {
        ExtScalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, other: &ExtScalar) -> ExtScalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ExtScalar) -> ExtScalar {
        assert!(self.field == other.field, "mixed extension fields");
        let f = self.field.degree();
        let ctx = self.field.context().clone();
        if f == 1 {
            return ExtScalar {
                field: self.field.clone(),
                coeffs: vec![self.coeffs[0].mul(&other.coeffs[0])],
            };
        }
        let mut conv = vec![ctx.zero(); 2 * f - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                conv[i + j] = conv[i + j].add(&a.mul(b));
            }
        }
        // reduce by x^f = -(c_{f-1} x^{f-1} + ... + c_0)
        let modulus = self.field.defining_coefficients();
        for i in (f..=2 * f - 2).rev() {
            let lead = conv[i].clone();
            if lead.is_exact_zero() {
                continue;
            }
            conv[i] = ctx.zero();
            for (j, &m) in modulus.iter().enumerate() {
                if m == 0 {
                    continue;
                }
                let sub = lead.mul(&ctx.from_i64(m as i64));
                conv[i - f + j] = conv[i - f + j].sub(&sub);
            }
        }
        conv.truncate(f);
        ExtScalar { field: self.field.clone(), coeffs: conv }
    }

    pub fn pow(&self, e: u64) -> ExtScalar {
        let mut result = self.field.one_elem();
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

    /// Multiply every coefficient by p^k.
    pub fn shift(&self, k: i64) -> ExtScalar {
        ExtScalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c.shift(k)).collect(),
        }
    }

    fn residue(&self) -> Result<Vec<u64>> {
        let p = self.field.context().prime();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            if !c.val_floor().at_least(0) {
                return Err(Error::domain("not integral; no residue"));
            }
            let r = c.integer_residue(1)?;
            out.push((r % BigUint::from(p)).to_u64_digits().first().copied().unwrap_or(0));
        }
        Ok(out)
    }

    /// Inverse. A unit is inverted by lifting the residue-field inverse
    /// with Newton iteration y -> y(2 - xy); general nonzero elements are
    /// p-shifted units because the extension is unramified.
    pub fn inv(&self) -> Result<ExtScalar> {
        let v = match self.val_floor() {
            Valuation::Infinite => return Err(Error::domain("division by zero")),
            Valuation::Finite(v) => v,
        };
        if !self.abs_precision().at_least(v + 1) {
            return Err(Error::domain("cannot invert a value with no known digits"));
        }
        let unit = self.shift(-v);
        let p = self.field.context().prime();
        let f = self.field.degree();
        let residue = unit.residue()?;
        let mut g: Vec<u64> = self.field.defining_coefficients().to_vec();
        g.push(1);
        let mut r = residue.clone();
        fp_trim(&mut r);
        let inv_res = if f == 1 {
            vec![fp_inv_scalar(r[0], p)]
        } else {
            fp_inv_mod(&r, &g, p)
        };
        let mut padded = inv_res.clone();
        padded.resize(f, 0);
        let mut y = self.field.from_residue(&padded);
        let one = self.field.one_elem();
        let two = self.field.embed(&self.field.context().from_i64(2));
        let w = self.field.context().working_precision();
        let mut steps = 0;
        let mut digits = 1i64;
        while digits < w + 1 {
            // y <- y (2 - u y), doubling the number of correct digits
            let correction = two.sub(&unit.mul(&y));
            y = y.mul(&correction);
            digits *= 2;
            steps += 1;
            assert!(steps < 64, "Newton iteration must terminate");
        }
        debug_assert!(unit.mul(&y).sub(&one).is_zero_to_working());
        Ok(y.shift(-v))
    }

    pub fn div(&self, other: &ExtScalar) -> Result<ExtScalar> {
        Ok(self.mul(&other.inv()?))
    }

    /// Teichmüller lift inside the extension: iterate x -> x^{p^f} to its
    /// fixpoint, gaining at least one digit per step.
    pub fn teichmuller(&self) -> Result<ExtScalar> {
        if !matches!(self.val_floor(), Valuation::Finite(0)) {
            return Err(Error::domain("Teichmüller lift requires a unit"));
        }
        let p = self.field.context().prime();
        let f = self.field.degree();
        let q = p
            .checked_pow(f as u32)
            .ok_or_else(|| Error::domain("p^f overflows"))?;
        let w = self.field.context().working_precision();
        let mut x = self.clone();
        for _ in 0..=w {
            let next = x.pow(q);
            if next == x {
                break;
            }
            x = next;
        }
        Ok(x)
    }

    /// log_p extended to the unramified field (log_p p = 0 and log_p of
    /// every root of unity of order prime to p is 0).
    pub fn log(&self) -> Result<ExtScalar> {
        let ctx = self.field.context().clone();
        let v = match self.val_floor() {
            Valuation::Infinite => return Err(Error::domain("log of zero")),
            Valuation::Finite(v) => v,
        };
        if !self.abs_precision().at_least(v + 1) {
            return Err(Error::domain("log requires known digits"));
        }
        let unit = self.shift(-v);
        let omega = unit.teichmuller()?;
        let angle = unit.div(&omega)?;
        let x = angle.sub(&self.field.one_elem());
        if x.is_zero_to_working() {
            return Ok(self.field.zero_elem());
        }
        let v_x = x.val_floor().finite().expect("nonzero");
        debug_assert!(v_x >= 1);
        let target = ctx.target_precision() + 1;
        let m_max = tail_cutoff(ctx.prime(), v_x, 1, target);
        let mut sum = self.field.zero_elem();
        let mut power = self.field.one_elem();
        for m in 1..=m_max {
            power = power.mul(&x);
            let sign = if m % 2 == 1 { 1i64 } else { -1 };
            let coeff = ctx
                .from_ratio(&BigRational::new(sign.into(), (m as i64).into()))
                .expect("m nonzero");
            sum = sum.add(&power.mul(&self.field.embed(&coeff)));
        }
        let certified = sum.abs_precision().capped(target);
        Ok(ExtScalar {
            field: self.field.clone(),
            coeffs: sum.coeffs.iter().map(|c| c.truncate_abs(certified)).collect(),
        })
    }

    /// Project back to Q_p when the higher residue coordinates vanish; the
    /// certified claim is capped by how well they vanish.
    pub fn into_base_field(&self) -> Result<PadicScalar> {
        let w = self.field.context().working_precision();
        let mut cap = self.coeffs[0].abs_precision();
        for c in &self.coeffs[1..] {
            if c.is_exact_zero() {
                continue;
            }
            if c.rel_precision() > 0 && !c.val_floor().at_least(w) {
                return Err(Error::domain("value does not lie in the base field"));
            }
            cap = cap.meet(c.val_floor());
        }
        Ok(match cap {
            Valuation::Infinite => self.coeffs[0].clone(),
            Valuation::Finite(a) => self.coeffs[0].truncate_abs(a),
        })
    }
}

impl fmt::Debug for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtScalar[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.degree() == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*x^{i}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Evaluate a Laurent polynomial with Q_p coefficients at a tuple of unit
/// coordinates in the extension. Negative exponents go through inverses.
pub fn eval_laurent(
    f: &LaurentPoly<PadicContext>,
    point: &[ExtScalar],
) -> Result<ExtScalar> {
    if point.is_empty() {
        return Err(Error::domain("empty evaluation point"));
    }
    let field = point[0].field().clone();
    if point.len() != f.n_vars() {
        return Err(Error::domain(format!(
            "point has {} coordinates, polynomial has {} variables",
            point.len(),
            f.n_vars()
        )));
    }
    let mut inverses = Vec::with_capacity(point.len());
    for z in point {
        if !matches!(z.val_floor(), Valuation::Finite(0)) {
            return Err(Error::domain("evaluation point must have unit coordinates"));
        }
        inverses.push(z.inv()?);
    }
    let mut acc = field.zero_elem();
    for (exp, coeff) in f.iter() {
        let mut term = field.embed(coeff);
        for (i, &e) in exp.iter().enumerate() {
            if e > 0 {
                term = term.mul(&point[i].pow(e as u64));
            } else if e < 0 {
                term = term.mul(&inverses[i].pow(e.unsigned_abs()));
            }
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

impl Ring for UnramifiedField {
    type Elem = ExtScalar;

    fn zero(&self) -> ExtScalar {
        self.zero_elem()
    }

    fn one(&self) -> ExtScalar {
        self.one_elem()
    }

    fn is_zero(&self, x: &ExtScalar) -> bool {
        x.is_zero_to_working()
    }

    fn add(&self, a: &ExtScalar, b: &ExtScalar) -> ExtScalar {
        a.add(b)
    }

    fn neg(&self, a: &ExtScalar) -> ExtScalar {
        a.neg()
    }

    fn mul(&self, a: &ExtScalar, b: &ExtScalar) -> ExtScalar {
        a.mul(b)
    }

    fn inv(&self, a: &ExtScalar) -> Result<ExtScalar> {
        a.inv()
    }

    fn from_rational(&self, q: &BigRational) -> Result<ExtScalar> {
        Ok(self.embed(&self.context().from_ratio(q)?))
    }
}

impl ValuedRing for UnramifiedField {
    fn prime(&self) -> u64 {
        self.context().prime()
    }

    fn target_precision(&self) -> i64 {
        self.context().target_precision()
    }

    fn working_precision(&self) -> i64 {
        self.context().working_precision()
    }

    fn val_floor(&self, x: &ExtScalar) -> Valuation {
        x.val_floor()
    }

    fn abs_precision(&self, x: &ExtScalar) -> Valuation {
        x.abs_precision()
    }

    fn truncate_abs(&self, x: &ExtScalar, abs: i64) -> ExtScalar {
        ExtScalar {
            field: x.field.clone(),
            coeffs: x.coeffs.iter().map(|c| c.truncate_abs(abs)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::agreement_valuation;

    fn ctx() -> PadicContext {
        PadicContext::new(5, 4, 4).unwrap()
    }

    #[test]
    fn base_field_degenerates() {
        let ctx = ctx();
        let field = UnramifiedField::new(&ctx, 1).unwrap();
        assert_eq!(field.degree(), 1);
        let x = field.embed(&ctx.from_i64(7));
        let y = x.mul(&x);
        assert!(agreement_valuation(&y.coefficients()[0], &ctx.from_i64(49)).at_least(4));
    }

    #[test]
    fn rejects_degree_zero() {
        assert!(UnramifiedField::new(&ctx(), 0).is_err());
    }

    #[test]
    fn quadratic_extension_modulus_is_irreducible() {
        let ctx = ctx();
        let field = UnramifiedField::new(&ctx, 2).unwrap();
        let m = field.defining_coefficients();
        // oracle: no root in F_5
        for r in 0..5u64 {
            let value = (r * r + m[1] * r + m[0]) % 5;
            assert_ne!(value, 0, "x^2+{}x+{} has root {r} mod 5", m[1], m[0]);
        }
        // deterministic: search order makes x^2 + 2 the first hit
        assert_eq!(m, &[2, 0]);
    }

    #[test]
    fn roots_of_unity_in_base_field() {
        let ctx = ctx();
        let field = UnramifiedField::new(&ctx, 1).unwrap();

        let mu1 = field.roots_of_unity(1).unwrap();
        assert_eq!(mu1.len(), 1);
        assert!(mu1[0].sub(&field.one_elem()).is_zero_to_working());

        let mu4 = field.roots_of_unity(4).unwrap();
        let mut got: Vec<u64> = mu4
            .iter()
            .map(|z| {
                z.coefficients()[0]
                    .integer_residue(4)
                    .unwrap()
                    .to_u64_digits()
                    .first()
                    .copied()
                    .unwrap_or(0)
            })
            .collect();
        got.sort();
        assert_eq!(got, vec![1, 182, 443, 624]);

        assert!(field.roots_of_unity(24).is_err());
        assert!(field.roots_of_unity(5).is_err());
    }

    #[test]
    fn roots_of_unity_in_quadratic_extension() {
        let ctx = ctx();
        let field = UnramifiedField::new(&ctx, 2).unwrap();
        let mu24 = field.roots_of_unity(24).unwrap();
        assert_eq!(mu24.len(), 24);
        let one = field.one_elem();
        // pairwise distinct residues and each a genuine 24th root
        let mut residues: Vec<Vec<u64>> = Vec::new();
        for z in &mu24 {
            assert!(z.pow(24).sub(&one).is_zero_to_working());
            let r = z.residue().unwrap();
            assert!(!residues.contains(&r), "distinct mod p");
            residues.push(r);
        }
        // product of all elements of mu_N is (-1)^{N+1}
        let mut prod = one.clone();
        for z in &mu24 {
            prod = prod.mul(z);
        }
        let expect = field.embed(&ctx.from_i64(-1));
        assert!(prod.sub(&expect).is_zero_to_working());
    }

    #[test]
    fn root_sums_are_orthogonal() {
        let ctx = ctx();
        let field = UnramifiedField::new(&ctx, 1).unwrap();
        let mu4 = field.roots_of_unity(4).unwrap();
        for v in -12i64..=12 {
            let mut sum = field.zero_elem();
            for z in &mu4 {
                let zp = if v >= 0 {
                    z.pow(v as u64)
                } else {
                    z.inv().unwrap().pow(v.unsigned_abs())
                };
                sum = sum.add(&zp);
            }
            if v % 4 == 0 {
                let expect = field.embed(&ctx.from_i64(4));
                assert!(sum.sub(&expect).is_zero_to_working(), "v = {v}");
            } else {
                assert!(sum.is_zero_to_working(), "v = {v}");
            }
        }
    }

    #[test]
    fn log_vanishes_on_roots_of_unity() {
        let ctx = ctx();
        for degree in [1usize, 2] {
            let field = UnramifiedField::new(&ctx, degree).unwrap();
            let n = if degree == 1 { 4 } else { 24 };
            for z in field.roots_of_unity(n).unwrap() {
                let l = z.log().unwrap();
                assert!(
                    l.val_floor().at_least(ctx.target_precision()),
                    "log of a root of unity must vanish"
                );
            }
        }
    }

    #[test]
    fn eval_laurent_examples() {
        let ctx = ctx();
        let field = UnramifiedField::new(&ctx, 1).unwrap();

        // t + 1/t at -1 gives -2
        let f = LaurentPoly::from_terms(&ctx, 1, [(vec![1], ctx.one()), (vec![-1], ctx.one())]);
        let at = eval_laurent(&f, &[field.embed(&ctx.from_i64(-1))]).unwrap();
        assert!(at.sub(&field.embed(&ctx.from_i64(-2))).is_zero_to_working());

        // t^3 at 1
        let cube = LaurentPoly::monomial(&ctx, vec![3]);
        let at = eval_laurent(&cube, &[field.one_elem()]).unwrap();
        assert!(at.sub(&field.one_elem()).is_zero_to_working());

        // quadratic at the Teichmüller lift 182: direct modular oracle
        let quad = LaurentPoly::from_terms(
            &ctx,
            1,
            [
                (vec![2], ctx.one()),
                (vec![1], ctx.from_rational_parts(&(-26).into(), &5.into()).unwrap()),
                (vec![0], ctx.one()),
            ],
        );
        let zeta = field.embed(&ctx.from_i64(182));
        let got = eval_laurent(&quad, &[zeta]).unwrap();
        let expect = ctx
            .from_i64(182 * 182 + 1)
            .add(&ctx.from_rational_parts(&(-26 * 182).into(), &5.into()).unwrap());
        assert!(agreement_valuation(&got.coefficients()[0], &expect).at_least(4));

        // nonunit coordinates rejected
        assert!(eval_laurent(&cube, &[field.embed(&ctx.from_i64(5))]).is_err());
    }

    #[test]
    fn extension_inverse_round_trip() {
        let ctx = ctx();
        let field = UnramifiedField::new(&ctx, 2).unwrap();
        let x = ExtScalar {
            field: field.clone(),
            coeffs: vec![ctx.from_i64(3), ctx.from_i64(7)],
        };
        let xi = x.inv().unwrap();
        assert!(x.mul(&xi).sub(&field.one_elem()).is_zero_to_working());

        // p-shifted elements invert too
        let y = x.shift(2);
        let yi = y.inv().unwrap();
        assert!(y.mul(&yi).sub(&field.one_elem()).is_zero_to_working());

        assert!(field.zero_elem().inv().is_err());
    }
}
