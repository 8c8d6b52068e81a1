//! The word algebra on two letters over the exact rationals, in the
//! subalgebra spanned by words that are empty or start with e1. Such
//! words biject with indices (k_1, ..., k_r) of positive integers via
//! e_k = e1 e0^{k-1}; the harmonic product and its circled variant are
//! implemented on indices and extended bilinearly.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{LazyLock, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// One of the two letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    E0,
    E1,
}

/// A word over {e0, e1}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Empty or starting with e1.
    pub fn in_h1(&self) -> bool {
        self.letters.first() != Some(&Letter::E0)
    }

    /// Additionally ending with e0 (the convergent words).
    pub fn in_h0(&self) -> bool {
        self.in_h1() && (self.is_empty() || self.letters.last() == Some(&Letter::E0))
    }

    /// The index bijection, defined on words in H1.
    pub fn to_index(&self) -> Result<Index> {
        if !self.in_h1() {
            return Err(Error::domain("word does not lie in H1 (must start with e1)"));
        }
        let mut parts = Vec::new();
        for &l in &self.letters {
            match l {
                Letter::E1 => parts.push(1u32),
                Letter::E0 => {
                    let last = parts.last_mut().expect("word starts with e1");
                    *last += 1;
                }
            }
        }
        Ok(Index::new(parts))
    }
}

/// An index (k_1, ..., k_r) of positive integers; the empty index
/// corresponds to the empty word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Index {
    parts: Vec<u32>,
}

impl Index {
    pub fn new(parts: Vec<u32>) -> Self {
        assert!(parts.iter().all(|&k| k >= 1), "index parts are positive");
        Index { parts }
    }

    pub fn empty() -> Self {
        Index { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.parts.len()
    }

    /// e_{k_1} ... e_{k_r} with e_k = e1 e0^{k-1}.
    pub fn to_word(&self) -> Word {
        let mut letters = Vec::with_capacity(self.weight() as usize);
        for &k in &self.parts {
            letters.push(Letter::E1);
            for _ in 1..k {
                letters.push(Letter::E0);
            }
        }
        Word::new(letters)
    }

    /// Parse "(k1,k2,...)" or "()" for the empty index.
    pub fn parse(text: &str) -> Result<Index> {
        let t = text.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::parse(format!("index must look like (k1,k2,...): `{t}`")))?;
        let inner = inner.trim();
        if inner.is_empty() {
            return Ok(Index::empty());
        }
        let mut parts = Vec::new();
        for piece in inner.split(',') {
            let k: u32 = piece
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("bad index part `{piece}`")))?;
            if k == 0 {
                return Err(Error::parse("index parts must be positive"));
            }
            parts.push(k);
        }
        Ok(Index::new(parts))
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// Exact-rational linear combination of H1 monomials, keyed by index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WordPoly {
    terms: BTreeMap<Index, BigRational>,
}

impl WordPoly {
    pub fn zero() -> Self {
        WordPoly::default()
    }

    pub fn monomial(index: Index) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(index, BigRational::from_integer(1.into()));
        WordPoly { terms }
    }

    pub fn one() -> Self {
        Self::monomial(Index::empty())
    }

    pub fn from_word(word: &Word) -> Result<Self> {
        Ok(Self::monomial(word.to_index()?))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Index, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, index: &Index) -> BigRational {
        self.terms.get(index).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, index: Index, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&index) {
            Some(prev) => {
                let s = prev + coeff;
                if !s.is_zero() {
                    self.terms.insert(index, s);
                }
            }
            None => {
                self.terms.insert(index, coeff);
            }
        }
    }

    pub fn add(&self, other: &WordPoly) -> WordPoly {
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.add_term(i.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> WordPoly {
        if c.is_zero() {
            return WordPoly::zero();
        }
        WordPoly {
            terms: self
                .terms
                .iter()
                .map(|(i, x)| (i.clone(), x * c))
                .collect(),
        }
    }

    /// True when every monomial ends with a part >= 2 (or is empty), i.e.
    /// lies in the convergent subalgebra.
    pub fn in_h0(&self) -> bool {
        self.terms
            .keys()
            .all(|i| i.parts().last().map_or(true, |&k| k >= 2))
    }
}

impl fmt::Display for WordPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c} * {i}")?;
        }
        Ok(())
    }
}

type MonomialProduct = Vec<(Vec<u32>, BigInt)>;

/// Memo for monomial harmonic products, keyed with the smaller index
/// first (the product is commutative). Deterministic contents behind a
/// mutex, so concurrent use is safe.
static HARMONIC_MEMO: LazyLock<Mutex<HashMap<(Vec<u32>, Vec<u32>), MonomialProduct>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

fn harmonic_monomials(a: &[u32], b: &[u32]) -> MonomialProduct {
    if a.is_empty() {
        return vec![(b.to_vec(), BigInt::from(1))];
    }
    if b.is_empty() {
        return vec![(a.to_vec(), BigInt::from(1))];
    }
    let key = if a <= b {
        (a.to_vec(), b.to_vec())
    } else {
        (b.to_vec(), a.to_vec())
    };
    if let Some(hit) = HARMONIC_MEMO.lock().unwrap().get(&key) {
        return hit.clone();
    }
    // e_k v * e_l w = e_k (v * e_l w) + e_l (e_k v * w) + e_{k+l} (v * w)
    let (k, v) = (a[0], &a[1..]);
    let (l, w) = (b[0], &b[1..]);
    let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
    let mut absorb = |head: u32, inner: MonomialProduct| {
        for (rest, c) in inner {
            let mut idx = Vec::with_capacity(rest.len() + 1);
            idx.push(head);
            idx.extend(rest);
            *acc.entry(idx).or_insert_with(BigInt::zero) += c;
        }
    };
    absorb(k, harmonic_monomials(v, b));
    absorb(l, harmonic_monomials(a, w));
    absorb(k + l, harmonic_monomials(v, w));
    let mut out: MonomialProduct = acc.into_iter().collect();
    out.sort();
    HARMONIC_MEMO.lock().unwrap().insert(key, out.clone());
    out
}

/// The harmonic product, extended bilinearly from the monomial recurrence.
pub fn harmonic_product(a: &WordPoly, b: &WordPoly) -> WordPoly {
    let mut out = WordPoly::zero();
    for (ia, ca) in a.terms() {
        for (ib, cb) in b.terms() {
            let c = ca * cb;
            for (idx, n) in harmonic_monomials(ia.parts(), ib.parts()) {
                out.add_term(Index::new(idx), &c * BigRational::from_integer(n));
            }
        }
    }
    out
}

/// The circled variant: on monomials, (v e_k) ⊛ (w e_l) = (v * w) e_{k+l}.
/// Defined only for operands supported on nonempty words, and the output
/// always ends with a part >= 2.
pub fn circled_harmonic(a: &WordPoly, b: &WordPoly) -> Result<WordPoly> {
    let mut out = WordPoly::zero();
    for (ia, ca) in a.terms() {
        for (ib, cb) in b.terms() {
            if ia.depth() == 0 || ib.depth() == 0 {
                return Err(Error::domain(
                    "circled product is defined on nonempty words only",
                ));
            }
            let (ka, va) = ia.parts().split_last().map(|(k, v)| (*k, v)).unwrap();
            let (kb, vb) = ib.parts().split_last().map(|(k, v)| (*k, v)).unwrap();
            let c = ca * cb;
            for (mut idx, n) in harmonic_monomials(va, vb) {
                idx.push(ka + kb);
                out.add_term(Index::new(idx), &c * BigRational::from_integer(n));
            }
        }
    }
    Ok(out)
}

/// The combination ({1}^{i-1} * {1}^{j-1}) e_2 = e_1^i ⊛ e_1^j appearing
/// in the quadratic closed form.
pub fn ones_product_word(i: u32, j: u32) -> WordPoly {
    assert!(i >= 1 && j >= 1);
    let ones = |n: u32| WordPoly::monomial(Index::new(vec![1; n as usize]));
    circled_harmonic(&ones(i), &ones(j)).expect("operands are nonempty")
}

/// All H1 monomials of the given weight, in lexicographic order.
pub fn monomials_of_weight(weight: u32) -> Vec<Index> {
    fn go(remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Index>) {
        if remaining == 0 {
            out.push(Index::new(current.clone()));
            return;
        }
        for k in 1..=remaining {
            current.push(k);
            go(remaining - k, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(weight, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(parts: &[u32]) -> Index {
        Index::new(parts.to_vec())
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn word_index_bijection() {
        // (2) <-> e1 e0
        let w = idx(&[2]).to_word();
        assert_eq!(w.letters(), &[Letter::E1, Letter::E0]);
        assert_eq!(w.to_index().unwrap(), idx(&[2]));

        // (1,2) <-> e1 e1 e0
        let w = idx(&[1, 2]).to_word();
        assert_eq!(w.letters(), &[Letter::E1, Letter::E1, Letter::E0]);
        assert_eq!(w.to_index().unwrap(), idx(&[1, 2]));

        // e0 e1 is not in H1
        let bad = Word::new(vec![Letter::E0, Letter::E1]);
        assert!(!bad.in_h1());
        assert!(bad.to_index().is_err());

        assert!(Word::empty().in_h0());
        assert!(idx(&[1, 2]).to_word().in_h0());
        assert!(!idx(&[2, 1]).to_word().in_h0());
    }

    #[test]
    fn harmonic_examples() {
        let one = WordPoly::one();
        let e1 = WordPoly::monomial(idx(&[1]));
        let e2 = WordPoly::monomial(idx(&[2]));

        assert_eq!(harmonic_product(&one, &e2), e2);
        assert_eq!(harmonic_product(&e2, &one), e2);

        // e1 * e1 = 2 e1e1 + e2
        let sq = harmonic_product(&e1, &e1);
        assert_eq!(sq.coefficient(&idx(&[1, 1])), rat(2));
        assert_eq!(sq.coefficient(&idx(&[2])), rat(1));
        assert_eq!(sq.len(), 2);

        // e1 * e2 = e1e2 + e2e1 + e3
        let mixed = harmonic_product(&e1, &e2);
        assert_eq!(mixed.coefficient(&idx(&[1, 2])), rat(1));
        assert_eq!(mixed.coefficient(&idx(&[2, 1])), rat(1));
        assert_eq!(mixed.coefficient(&idx(&[3])), rat(1));
        assert_eq!(mixed.len(), 3);
    }

    #[test]
    fn circled_examples() {
        let e1 = WordPoly::monomial(idx(&[1]));
        let e11 = WordPoly::monomial(idx(&[1, 1]));

        let a = circled_harmonic(&e1, &e1).unwrap();
        assert_eq!(a, WordPoly::monomial(idx(&[2])));

        let b = circled_harmonic(&e1, &e11).unwrap();
        assert_eq!(b, WordPoly::monomial(idx(&[1, 2])));

        let c = circled_harmonic(&e11, &e11).unwrap();
        assert_eq!(c.coefficient(&idx(&[1, 1, 2])), rat(2));
        assert_eq!(c.coefficient(&idx(&[2, 2])), rat(1));

        assert!(circled_harmonic(&WordPoly::one(), &e1).is_err());
    }

    #[test]
    fn ones_product_examples() {
        assert_eq!(ones_product_word(1, 1), WordPoly::monomial(idx(&[2])));
        assert_eq!(ones_product_word(2, 1), WordPoly::monomial(idx(&[1, 2])));
        let w22 = ones_product_word(2, 2);
        assert_eq!(w22.coefficient(&idx(&[1, 1, 2])), rat(2));
        assert_eq!(w22.coefficient(&idx(&[2, 2])), rat(1));
    }

    #[test]
    fn product_is_commutative_and_associative_up_to_weight_five() {
        let mut monomials = vec![Index::empty()];
        for w in 1..=5u32 {
            monomials.extend(monomials_of_weight(w));
        }
        let polys: Vec<WordPoly> = monomials.iter().cloned().map(WordPoly::monomial).collect();

        for (i, a) in polys.iter().enumerate() {
            for b in &polys[i..] {
                if monomials[i].weight() + b.terms().next().unwrap().0.weight() > 5 {
                    continue;
                }
                assert_eq!(harmonic_product(a, b), harmonic_product(b, a));
            }
        }

        // associativity on triples of total weight <= 5
        for a in &polys {
            for b in &polys {
                for c in &polys {
                    let wa = a.terms().next().unwrap().0.weight();
                    let wb = b.terms().next().unwrap().0.weight();
                    let wc = c.terms().next().unwrap().0.weight();
                    if wa + wb + wc > 5 {
                        continue;
                    }
                    let lhs = harmonic_product(&harmonic_product(a, b), c);
                    let rhs = harmonic_product(a, &harmonic_product(b, c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn circled_output_lands_in_h0() {
        for i in 1..=4u32 {
            for j in 1..=4u32 {
                let w = ones_product_word(i, j);
                assert!(w.in_h0(), "({i},{j})");
                assert_eq!(w, ones_product_word(j, i));
            }
        }
    }

    #[test]
    fn index_text_round_trip() {
        for parts in [vec![], vec![2], vec![1, 2], vec![3, 1, 2]] {
            let i = Index::new(parts);
            let back = Index::parse(&i.to_string()).unwrap();
            assert_eq!(i, back);
        }
        assert!(Index::parse("1,2").is_err());
        assert!(Index::parse("(0)").is_err());
        assert!(Index::parse("(a)").is_err());
    }
}
