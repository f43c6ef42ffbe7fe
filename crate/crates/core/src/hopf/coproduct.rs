use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_traits::One;

use super::{CoordinateMap, HopfTensor, Monomial};
use crate::rational::Rational;
use crate::word::{unshuffle_counts, Word};

/// Terms `(ζ, right, q)` of `tildeΔ a^i_η`, standing for `q · a^i_ζ ⊗ right`.
pub(crate) type TildeTerms = Rc<Vec<(Word, Monomial, Rational)>>;

thread_local! {
    static TILDE_CACHE: RefCell<HashMap<(usize, usize, Word), TildeTerms>> =
        RefCell::new(HashMap::new());
}

const CACHE_LIMIT: usize = 1 << 18;

pub(crate) fn tilde_terms(m: usize, component: usize, eta: &Word) -> TildeTerms {
    let key = (m, component, eta.clone());
    if let Some(hit) = TILDE_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let terms = match eta.first() {
        None => vec![(Word::empty(), Monomial::unit(), Rational::one())],
        Some(j) if j > 0 => tilde_terms(m, component, &eta.tail())
            .iter()
            .map(|(zeta, right, q)| (zeta.push_left(j), right.clone(), q.clone()))
            .collect(),
        Some(_) => {
            let rest = eta.tail();
            let mut acc: HashMap<(Word, Monomial), Rational> = HashMap::new();
            for (zeta, right, q) in tilde_terms(m, component, &rest).iter() {
                *acc.entry((zeta.push_left(0), right.clone())).or_default() += q;
            }
            for (xi, nu, k) in unshuffle_counts(&rest).iter() {
                let k = Rational::from_integer((*k).into());
                let inner = tilde_terms(m, component, xi);
                for j in 1..=m {
                    let extra = CoordinateMap::new(j, nu.clone());
                    for (zeta, right, q) in inner.iter() {
                        *acc.entry((zeta.push_left(j as u8), right.mul_coord(&extra))).or_default() +=
                            q * &k;
                    }
                }
            }
            let mut v: Vec<_> = acc
                .into_iter()
                .filter(|(_, q)| *q != Rational::from_integer(0.into()))
                .map(|((zeta, right), q)| (zeta, right, q))
                .collect();
            v.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
            v
        }
    };
    let terms = Rc::new(terms);
    TILDE_CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() >= CACHE_LIMIT {
            c.clear();
        }
        c.insert(key, terms.clone());
    });
    terms
}

/// `Δ_⧢^j a^i_η = Σ (η, ξ ⧢ ν) a^i_ξ ⊗ a^j_ν`.
pub fn shuffle_coproduct(a: &CoordinateMap, j: usize) -> HopfTensor {
    let mut out = HopfTensor::zero();
    for (xi, nu, k) in unshuffle_counts(a.word()).iter() {
        out.add_term(
            Monomial::single(CoordinateMap::new(a.component(), xi.clone())),
            Monomial::single(CoordinateMap::new(j, nu.clone())),
            Rational::from_integer((*k).into()),
        );
    }
    out
}

/// `tildeΔ a`, the part of the coproduct dual to `c õ d`.
pub fn tilde_coproduct(a: &CoordinateMap, m: usize) -> HopfTensor {
    let mut out = HopfTensor::zero();
    for (zeta, right, q) in tilde_terms(m, a.component(), a.word()).iter() {
        out.add_term(Monomial::single(CoordinateMap::new(a.component(), zeta.clone())), right.clone(), q.clone());
    }
    out
}

/// `Δ' a = tildeΔ a − a ⊗ 1`.
pub fn reduced_coproduct(a: &CoordinateMap, m: usize) -> HopfTensor {
    let mut out = tilde_coproduct(a, m);
    out.add_term(Monomial::single(a.clone()), Monomial::unit(), -Rational::one());
    out
}

/// `Δ a = tildeΔ a + 1 ⊗ a`.
pub fn coproduct(a: &CoordinateMap, m: usize) -> HopfTensor {
    let mut out = tilde_coproduct(a, m);
    out.add_term(Monomial::unit(), Monomial::single(a.clone()), Rational::one());
    out
}

/// `Δ` extended multiplicatively to a monomial.
pub fn coproduct_monomial(mono: &Monomial, m: usize) -> HopfTensor {
    let mut out = HopfTensor::zero();
    out.add_term(Monomial::unit(), Monomial::unit(), Rational::one());
    for a in mono.factors() {
        out = out.mul(&coproduct(a, m));
    }
    out
}
