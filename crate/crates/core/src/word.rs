//! Alphabets, words, word polynomials, and the shuffle product with its
//! adjoint coproduct.
//!
//! Words are written `x0x1x2`; the empty word is `e`. Words compare by
//! length first and then lexicographically on letter indices, which fixes
//! the iteration and printing order of every polynomial and series.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// The alphabet `{x0, x1, ..., xm}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    m: usize,
}

impl Alphabet {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 || m > u8::MAX as usize {
            return Err(Error::InvalidArgument(format!(
                "alphabet needs 1 <= m <= 255 input letters, got m={m}"
            )));
        }
        Ok(Alphabet { m })
    }

    /// Number of input letters (excluding `x0`).
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn contains(&self, word: &Word) -> bool {
        word.letters().iter().all(|&l| (l as usize) <= self.m)
    }

    pub fn check(&self, word: &Word) -> Result<()> {
        match word.letters().iter().find(|&&l| (l as usize) > self.m) {
            Some(&l) => Err(Error::InvalidLetter { letter: l as usize, max: self.m }),
            None => Ok(()),
        }
    }

    /// All words of length at most `n`, in canonical order.
    pub fn words_up_to(&self, n: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(layer.len() * (self.m + 1));
            for w in &layer {
                for l in 0..=self.m as u8 {
                    next.push(w.push_right(l));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

/// A finite sequence of letter indices.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn letter(l: u8) -> Self {
        Word(vec![l])
    }

    /// `x_l^k`.
    pub fn power(l: u8, k: usize) -> Self {
        Word(vec![l; k])
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|w|_{x_l}`.
    pub fn count(&self, l: u8) -> usize {
        self.0.iter().filter(|&&x| x == l).count()
    }

    pub fn first(&self) -> Option<u8> {
        self.0.first().copied()
    }

    /// The word with its first letter removed.
    pub fn tail(&self) -> Word {
        Word(self.0.get(1..).unwrap_or_default().to_vec())
    }

    /// `x_l w`.
    pub fn push_left(&self, l: u8) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(l);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    /// `w x_l`.
    pub fn push_right(&self, l: u8) -> Word {
        let mut v = self.0.clone();
        v.push(l);
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn max_letter(&self) -> Option<u8> {
        self.0.iter().copied().max()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for l in &self.0 {
            write!(f, "x{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "e" {
            return Ok(Word::empty());
        }
        let bytes = s.as_bytes();
        if bytes.is_empty() {
            return Err(Error::parse(0, "empty word text (use `e` for the empty word)"));
        }
        let mut letters = Vec::new();
        let mut pos = 0;
        while pos < bytes.len() {
            if bytes[pos] != b'x' {
                return Err(Error::parse(0, format!("malformed word `{s}`")));
            }
            pos += 1;
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let index: usize = s[start..pos]
                .parse()
                .map_err(|_| Error::parse(0, format!("malformed word `{s}`")))?;
            if index > u8::MAX as usize {
                return Err(Error::InvalidLetter { letter: index, max: u8::MAX as usize });
            }
            letters.push(index as u8);
        }
        Ok(Word(letters))
    }
}

thread_local! {
    static SHUFFLE_CACHE: RefCell<HashMap<(Word, Word), Rc<Vec<(Word, u64)>>>> =
        RefCell::new(HashMap::new());
    static UNSHUFFLE_CACHE: RefCell<HashMap<Word, Rc<Vec<(Word, Word, u64)>>>> =
        RefCell::new(HashMap::new());
}

const CACHE_LIMIT: usize = 1 << 20;

/// Interleavings of `u` and `v` with multiplicities, memoized per word pair.
pub(crate) fn shuffle_counts(u: &Word, v: &Word) -> Rc<Vec<(Word, u64)>> {
    if u.is_empty() {
        return Rc::new(vec![(v.clone(), 1)]);
    }
    if v.is_empty() {
        return Rc::new(vec![(u.clone(), 1)]);
    }
    let key = if u <= v { (u.clone(), v.clone()) } else { (v.clone(), u.clone()) };
    if let Some(hit) = SHUFFLE_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let mut acc: HashMap<Word, u64> = HashMap::new();
    let (a, b) = (&key.0, &key.1);
    for (w, k) in shuffle_counts(&a.tail(), b).iter() {
        *acc.entry(w.push_left(a.0[0])).or_insert(0) += k;
    }
    for (w, k) in shuffle_counts(a, &b.tail()).iter() {
        *acc.entry(w.push_left(b.0[0])).or_insert(0) += k;
    }
    let mut terms: Vec<(Word, u64)> = acc.into_iter().collect();
    terms.sort_by(|x, y| x.0.cmp(&y.0));
    let terms = Rc::new(terms);
    SHUFFLE_CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() >= CACHE_LIMIT {
            c.clear();
        }
        c.insert(key, terms.clone());
    });
    terms
}

/// All splittings `(ξ, ν)` of `w` into complementary subsequences, with
/// multiplicity; the support of `⧢*(w)`.
pub(crate) fn unshuffle_counts(w: &Word) -> Rc<Vec<(Word, Word, u64)>> {
    if let Some(hit) = UNSHUFFLE_CACHE.with(|c| c.borrow().get(w).cloned()) {
        return hit;
    }
    let terms = match w.first() {
        None => vec![(Word::empty(), Word::empty(), 1)],
        Some(l) => {
            let mut acc: HashMap<(Word, Word), u64> = HashMap::new();
            for (a, b, k) in unshuffle_counts(&w.tail()).iter() {
                *acc.entry((a.push_left(l), b.clone())).or_insert(0) += k;
                *acc.entry((a.clone(), b.push_left(l))).or_insert(0) += k;
            }
            let mut v: Vec<_> = acc.into_iter().map(|((a, b), k)| (a, b, k)).collect();
            v.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
            v
        }
    };
    let terms = Rc::new(terms);
    UNSHUFFLE_CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() >= CACHE_LIMIT {
            c.clear();
        }
        c.insert(w.clone(), terms.clone());
    });
    terms
}

/// A finite linear combination of words with rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct WordPoly {
    terms: BTreeMap<Word, Rational>,
}

impl WordPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit `1 = 1·e`.
    pub fn one() -> Self {
        Self::monomial(Word::empty(), Rational::one())
    }

    pub fn monomial(w: Word, coeff: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(w, coeff);
        p
    }

    pub fn word(w: Word) -> Self {
        Self::monomial(w, Rational::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Rational)>) -> Self {
        let mut p = Self::zero();
        for (w, q) in terms {
            p.add_term(w, q);
        }
        p
    }

    pub fn add_term(&mut self, w: Word, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn get(&self, w: &Word) -> Option<&Rational> {
        self.terms.get(w)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Length of the longest word in the support.
    pub fn max_len(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::len)
    }

    /// Length of the shortest word in the support; `None` for zero.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().next().map(Word::len)
    }

    pub fn add(&self, other: &WordPoly) -> WordPoly {
        let mut out = self.clone();
        for (w, q) in &other.terms {
            out.add_term(w.clone(), q.clone());
        }
        out
    }

    pub fn sub(&self, other: &WordPoly) -> WordPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> WordPoly {
        WordPoly { terms: self.terms.iter().map(|(w, q)| (w.clone(), -q)).collect() }
    }

    pub fn scale(&self, k: &Rational) -> WordPoly {
        if k.is_zero() {
            return WordPoly::zero();
        }
        WordPoly { terms: self.terms.iter().map(|(w, q)| (w.clone(), q * k)).collect() }
    }

    /// Drops every word longer than `n`.
    pub fn truncate(&self, n: usize) -> WordPoly {
        WordPoly {
            terms: self
                .terms
                .iter()
                .take_while(|(w, _)| w.len() <= n)
                .map(|(w, q)| (w.clone(), q.clone()))
                .collect(),
        }
    }

    /// `x_l p`.
    pub fn left_multiply(&self, l: u8) -> WordPoly {
        WordPoly { terms: self.terms.iter().map(|(w, q)| (w.push_left(l), q.clone())).collect() }
    }

    /// Splits `p = (p, e) + Σ_l x_l p^l` and returns the constant term and
    /// the left quotients `p^l`, indexed by letter.
    pub fn left_quotients(&self, m: usize) -> (Rational, Vec<WordPoly>) {
        let mut quotients = vec![WordPoly::zero(); m + 1];
        let mut constant = Rational::zero();
        for (w, q) in &self.terms {
            match w.first() {
                None => constant = q.clone(),
                Some(l) => {
                    quotients[l as usize].terms.insert(w.tail(), q.clone());
                }
            }
        }
        (constant, quotients)
    }

    pub fn catenate(&self, other: &WordPoly) -> WordPoly {
        let mut out = WordPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }

    pub fn shuffle(&self, other: &WordPoly) -> WordPoly {
        self.shuffle_truncated(other, usize::MAX)
    }

    /// Shuffle product with every word longer than `n` discarded.
    pub fn shuffle_truncated(&self, other: &WordPoly, n: usize) -> WordPoly {
        let mut acc: HashMap<Word, Rational> = HashMap::new();
        for (u, a) in &self.terms {
            if u.len() > n {
                break;
            }
            for (v, b) in &other.terms {
                if u.len() + v.len() > n {
                    break;
                }
                let ab = a * b;
                for (w, k) in shuffle_counts(u, v).iter() {
                    let term = if *k == 1 { ab.clone() } else { &ab * Rational::from_integer(BigInt::from(*k)) };
                    *acc.entry(w.clone()).or_insert_with(Rational::zero) += term;
                }
            }
        }
        WordPoly { terms: acc.into_iter().filter(|(_, q)| !q.is_zero()).collect() }
    }

    /// The pairing `⟨p, q⟩ = Σ_w (p,w)(q,w)`.
    pub fn pairing(&self, other: &WordPoly) -> Rational {
        self.terms
            .iter()
            .filter_map(|(w, a)| other.terms.get(w).map(|b| a * b))
            .fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for WordPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, q)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{q} {w}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for WordPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An element of `R<X> ⊗ R<X>`.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct WordTensor {
    terms: BTreeMap<(Word, Word), Rational>,
}

impl WordTensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, left: Word, right: Word, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let key = (left, right);
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coeff(&self, left: &Word, right: &Word) -> Rational {
        self.terms.get(&(left.clone(), right.clone())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Word, Word), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Componentwise catenation `(a⊗b)(c⊗d) = ac⊗bd`.
    pub fn catenate(&self, other: &WordTensor) -> WordTensor {
        let mut out = WordTensor::zero();
        for ((a, b), p) in &self.terms {
            for ((c, d), q) in &other.terms {
                out.add_term(a.concat(c), b.concat(d), p * q);
            }
        }
        out
    }

    /// `⟨p ⊗ q, T⟩`.
    pub fn pairing(&self, p: &WordPoly, q: &WordPoly) -> Rational {
        self.terms
            .iter()
            .map(|((a, b), t)| t * p.coeff(a) * q.coeff(b))
            .fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// `u ⧢ v`.
pub fn shuffle_words(u: &Word, v: &Word) -> WordPoly {
    WordPoly::from_terms(
        shuffle_counts(u, v)
            .iter()
            .map(|(w, k)| (w.clone(), Rational::from_integer(BigInt::from(*k)))),
    )
}

/// The adjoint coproduct `⧢*(w)`, characterized by
/// `⧢*(x_i η) = (x_i⊗1 + 1⊗x_i) ⧢*(η)` and `⧢*(1) = 1⊗1`.
pub fn shuffle_adjoint(w: &Word) -> WordTensor {
    let mut out = WordTensor::zero();
    for (a, b, k) in unshuffle_counts(w).iter() {
        out.add_term(a.clone(), b.clone(), Rational::from_integer(BigInt::from(*k)));
    }
    out
}

/// Linear extension of [`shuffle_adjoint`] to polynomials.
pub fn shuffle_adjoint_poly(p: &WordPoly) -> WordTensor {
    let mut out = WordTensor::zero();
    for (w, q) in p.iter() {
        for ((a, b), k) in shuffle_adjoint(w).iter() {
            out.add_term(a.clone(), b.clone(), q * k);
        }
    }
    out
}

pub fn catenate(p: &WordPoly, q: &WordPoly) -> WordPoly {
    p.catenate(q)
}
