use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_traits::{One, Zero};

use super::coproduct::tilde_terms;
use super::{coproduct, CoordinateMap, HopfPoly, Monomial};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::series::Series;
use crate::word::{unshuffle_counts, Word, WordPoly};

thread_local! {
    static ANTIPODE_CACHE: RefCell<HashMap<(usize, usize, Word), Rc<HopfPoly>>> =
        RefCell::new(HashMap::new());
}

const CACHE_LIMIT: usize = 1 << 14;

/// `S a = −a − Σ S(a'₁) a'₂` over the reduced coproduct, memoized per
/// `(m, component, word)`.
pub fn antipode(a: &CoordinateMap, m: usize) -> Rc<HopfPoly> {
    let key = (m, a.component(), a.word().clone());
    if let Some(hit) = ANTIPODE_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let mut out = HopfPoly::monomial(Monomial::single(a.clone()), -Rational::one());
    for (zeta, right, q) in tilde_terms(m, a.component(), a.word()).iter() {
        if right.is_unit() {
            debug_assert!(zeta == a.word());
            continue;
        }
        let s = antipode(&CoordinateMap::new(a.component(), zeta.clone()), m);
        let neg = -q;
        for (mono, p) in s.iter() {
            out.add_term(mono.mul(right), p * &neg);
        }
    }
    let out = Rc::new(out);
    ANTIPODE_CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() >= CACHE_LIMIT {
            c.clear();
        }
        c.insert(key, out.clone());
    });
    out
}

/// `S` on a product of coordinate maps; `S` is an algebra map since `H` is
/// commutative.
pub fn antipode_monomial(mono: &Monomial, m: usize) -> HopfPoly {
    let mut out = HopfPoly::one();
    for a in mono.factors() {
        out = out.mul(&antipode(a, m));
    }
    out
}

pub fn antipode_poly(p: &HopfPoly, m: usize) -> HopfPoly {
    let mut out = HopfPoly::zero();
    for (mono, q) in p.iter() {
        out = out.add(&antipode_monomial(mono, m).scale(q));
    }
    out
}

/// `(μ(S⊗id)Δ a, μ(id⊗S)Δ a)`; both equal `ε(a)·1 = 0` for a coordinate map.
pub fn convolution_identity(a: &CoordinateMap, m: usize) -> (HopfPoly, HopfPoly) {
    let d = coproduct(a, m);
    let mut left = HopfPoly::zero();
    let mut right = HopfPoly::zero();
    for ((x, y), q) in d.iter() {
        left = left.add(&antipode_monomial(x, m).mul_monomial(y).scale(q));
        right = right.add(&antipode_monomial(y, m).mul_monomial(x).scale(q));
    }
    (left, right)
}

/// `Σ q · right(c) · [ζ]` over the terms `q · a^i_ζ ⊗ right` of
/// `tildeΔ a^i_η`. The right legs do not depend on `i`, so one word
/// polynomial per `η` serves every component. Follows the coproduct
/// recursion with the right legs already evaluated at `c`.
struct EvaluatedCoproduct<'a> {
    c: &'a Series,
    cache: HashMap<Word, Rc<WordPoly>>,
}

impl<'a> EvaluatedCoproduct<'a> {
    fn get(&mut self, eta: &Word) -> Rc<WordPoly> {
        if let Some(hit) = self.cache.get(eta) {
            return hit.clone();
        }
        let out = match eta.first() {
            None => WordPoly::one(),
            Some(j) if j > 0 => self.get(&eta.tail()).left_multiply(j),
            Some(_) => {
                let rest = eta.tail();
                let mut acc = self.get(&rest).left_multiply(0);
                for (xi, nu, k) in unshuffle_counts(&rest).iter() {
                    let inner = self.get(xi);
                    for j in 1..=self.c.m() {
                        let weight = self.c.coeff(j - 1, nu);
                        if weight.is_zero() {
                            continue;
                        }
                        let weight = weight * Rational::from_integer((*k).into());
                        for (zeta, q) in inner.iter() {
                            acc.add_term(zeta.push_left(j as u8), q * &weight);
                        }
                    }
                }
                acc
            }
        };
        let out = Rc::new(out);
        self.cache.insert(eta.clone(), out.clone());
        out
    }
}

/// The group inverse `c⁻¹` with coefficients `(c⁻¹_i, η) = (S a^i_η)(c)`
/// for `|η| <= n`.
///
/// The antipode recursion is run directly on the character `Φ_c`:
/// `(S a)(c) = −a(c) − Σ (S a'₁)(c) · a'₂(c)`, which avoids expanding the
/// symbolic antipode.
pub fn antipode_inverse(c: &Series, n: usize) -> Result<Series> {
    if c.m() != c.l() {
        return Err(Error::dimension(format!(
            "the feedback group needs m = l, got m={} l={}",
            c.m(),
            c.l()
        )));
    }
    let n = n.min(c.truncation());
    let m = c.m();
    let mut words = c.alphabet().words_up_to(n);
    // Left legs of the reduced coproduct have strictly lower degree.
    words.sort_by_key(|w| (w.len() + w.count(0), w.clone()));
    let mut tilde = EvaluatedCoproduct { c, cache: HashMap::new() };
    let mut components = vec![WordPoly::zero(); m];
    for w in &words {
        let t = tilde.get(w);
        for i in 0..m {
            let mut v = -c.coeff(i, w);
            for (zeta, q) in t.iter() {
                if zeta == w {
                    continue;
                }
                let s = components[i].get(zeta);
                if let Some(s) = s {
                    v -= q * s;
                }
            }
            components[i].add_term(w.clone(), v);
        }
    }
    Series::new(m, n, components)
}
