//! Checks shared by the property tests and the acceptance run. Each one
//! returns `Err` with a description of the first disagreement.

#![allow(dead_code)]

use fliess_core::composition::{compose, mod_compose};
use fliess_core::feedback::{
    compose_delta, feedback_product, feedback_product_with, group_inverse, DeltaSeries, InverseMethod,
};
use fliess_core::rational::int;
use fliess_core::word::{shuffle_adjoint, shuffle_words, WordTensor};
use fliess_core::{Alphabet, Rational, Series, Word, WordPoly};

pub type Check = Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// Builds a series from small integers, one per word of length `<= n`
/// in canonical order, cycling through `coeffs` component by component.
pub fn series_from_ints(m: usize, l: usize, n: usize, coeffs: &[i64]) -> Series {
    let words = Alphabet::new(m).unwrap().words_up_to(n);
    let mut it = coeffs.iter().cycle();
    let comps = (0..l)
        .map(|_| WordPoly::from_terms(words.iter().map(|w| (w.clone(), int(*it.next().unwrap())))))
        .collect();
    Series::new(m, n, comps).unwrap()
}

/// `x_i c` componentwise, with the truncation raised by one.
pub fn left_multiply(c: &Series, letter: u8) -> Series {
    let comps = c.components().iter().map(|p| p.left_multiply(letter)).collect();
    Series::new(c.m(), c.truncation() + 1, comps).unwrap()
}

pub fn word(letters: &[u8]) -> Word {
    Word::new(letters.to_vec())
}

/// `(u ⧢ v, w) = (u ⊗ v, ⧢*(w))`.
pub fn shuffle_adjointness(u: &Word, v: &Word, w: &Word) -> Check {
    let left = shuffle_words(u, v).coeff(w);
    let right = shuffle_adjoint(w).coeff(u, v);
    ensure(left == right, || format!("({u} ⧢ {v}, {w}) = {left} but ({u}⊗{v}, ⧢*{w}) = {right}"))
}

/// `⧢*(uv) = ⧢*(u) ⧢*(v)` in the catenation algebra of `X* ⊗ X*`.
pub fn shuffle_adjoint_morphism(u: &Word, v: &Word) -> Check {
    let whole = shuffle_adjoint(&u.concat(v));
    let parts: WordTensor = shuffle_adjoint(u).catenate(&shuffle_adjoint(v));
    ensure(whole == parts, || format!("⧢* is not a catenation morphism on {u}·{v}"))
}

/// Shuffle is commutative and associative, and `(u ⧢ v)` carries
/// `binom(|u|+|v|, |u|)` interleavings in total.
pub fn shuffle_algebra(u: &Word, v: &Word, w: &Word) -> Check {
    let uv = shuffle_words(u, v);
    ensure(uv == shuffle_words(v, u), || format!("{u} ⧢ {v} is not commutative"))?;
    let left = uv.shuffle(&WordPoly::word(w.clone()));
    let right = WordPoly::word(u.clone()).shuffle(&shuffle_words(v, w));
    ensure(left == right, || format!("({u} ⧢ {v}) ⧢ {w} is not associative"))?;
    let total: Rational = uv.iter().map(|(_, q)| q.clone()).sum();
    let (a, b) = (u.len() as i64, v.len() as i64);
    let binom = (1..=a).fold(int(1), |acc, k| acc * int(b + k) / int(k));
    ensure(total == binom, || format!("{u} ⧢ {v} has {total} interleavings, expected {binom}"))
}

/// `(x_i c) õ d = x_i (c õ d) + x0 (d_i ⧢ (c õ d))` for every letter,
/// and the analogue `(x_i c)∘d = x0 (d_i ⧢ (c∘d))` for composition.
pub fn left_letter_identities(c: &Series, d: &Series) -> Check {
    let n = c.truncation().min(d.truncation());
    let c = c.truncate(n - 1);
    let d = d.truncate(n);
    let cd = mod_compose(&c, &d).map_err(|e| e.to_string())?;
    let c_comp = compose(&c, &d).map_err(|e| e.to_string())?;
    for i in 0..=c.m() as u8 {
        let lhs = mod_compose(&left_multiply(&c, i), &d).map_err(|e| e.to_string())?;
        let inner = if i == 0 { cd.clone() } else { d.component_series((i - 1) as usize).shuffle_broadcast(&cd) };
        let mut rhs = left_multiply(&inner, 0);
        if i > 0 {
            rhs = rhs.add(&left_multiply(&cd, i)).unwrap();
        }
        ensure(lhs == rhs.truncate(n), || format!("(x{i} c) õ d identity fails"))?;

        let lhs = compose(&left_multiply(&c, i), &d).map_err(|e| e.to_string())?;
        let inner =
            if i == 0 { c_comp.clone() } else { d.component_series((i - 1) as usize).shuffle_broadcast(&c_comp) };
        ensure(lhs == left_multiply(&inner, 0).truncate(n), || format!("(x{i} c)∘d identity fails"))?;
    }
    Ok(())
}

/// `(c õ d) õ e = c õ (d õ e + e)` and `(c∘d)∘e = c∘(d∘e)`.
pub fn composition_laws(c: &Series, d: &Series, e: &Series) -> Check {
    let err = |e: fliess_core::Error| e.to_string();
    let left = mod_compose(&mod_compose(c, d).map_err(err)?, e).map_err(err)?;
    let right = mod_compose(c, &mod_compose(d, e).map_err(err)?.add(e).map_err(err)?).map_err(err)?;
    ensure(left == right, || "(c õ d) õ e ≠ c õ (d õ e + e)".into())?;
    let left = compose(&compose(c, d).map_err(err)?, e).map_err(err)?;
    let right = compose(c, &compose(d, e).map_err(err)?).map_err(err)?;
    ensure(left == right, || "(c∘d)∘e ≠ c∘(d∘e)".into())?;
    let zero = Series::zero(d.m(), d.l(), d.truncation()).unwrap();
    let plain = mod_compose(c, &zero).map_err(err)?;
    ensure(plain == c.truncate(plain.truncation()), || "c õ 0 ≠ c".into())
}

/// `y = c@d` solves `y = c õ (d∘y)`, and both inverse routes agree.
pub fn feedback_fixed_point(c: &Series, d: &Series) -> Check {
    let n = c.truncation().min(d.truncation());
    let y = feedback_product(c, d, n).map_err(|e| e.to_string())?;
    let again = mod_compose(c, &compose(d, &y).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(y == again, || "c@d is not a fixed point of y ↦ c õ (d∘y)".into())?;
    let fixed = feedback_product_with(c, d, n, InverseMethod::FixedPoint).map_err(|e| e.to_string())?;
    ensure(y == fixed, || "c@d differs between the inverse routes".into())
}

/// For `c` supported on words `x0^k x_j`, `c@d = (δ − c∘d)⁻¹∘c`.
pub fn linear_closed_form(c: &Series, d: &Series) -> Check {
    let n = c.truncation().min(d.truncation());
    let y = feedback_product(c, d, n).map_err(|e| e.to_string())?;
    let cd = compose(c, d).map_err(|e| e.to_string())?;
    let e = group_inverse(&DeltaSeries::new(cd.neg()).unwrap(), InverseMethod::Antipode).map_err(|e| e.to_string())?;
    let closed = compose_delta(&e, c).map_err(|e| e.to_string())?;
    ensure(y == closed, || "c@d ≠ (δ − c∘d)⁻¹∘c for a linear plant".into())
}

/// Keeps only the linear words `x0^k x_j`.
pub fn linear_part(c: &Series) -> Series {
    let comps = c
        .components()
        .iter()
        .map(|p| {
            WordPoly::from_terms(
                p.iter()
                    .filter(|(w, _)| {
                        let l = w.letters();
                        !l.is_empty() && l[..l.len() - 1].iter().all(|&x| x == 0) && l[l.len() - 1] > 0
                    })
                    .map(|(w, q)| (w.clone(), q.clone())),
            )
        })
        .collect();
    Series::new(c.m(), c.truncation(), comps).unwrap()
}

trait ShuffleBroadcast {
    fn shuffle_broadcast(&self, other: &Series) -> Series;
}

impl ShuffleBroadcast for Series {
    /// A single-component series shuffled into every component of `other`.
    fn shuffle_broadcast(&self, other: &Series) -> Series {
        let n = self.truncation().min(other.truncation());
        let p = self.component(0);
        let comps = other.components().iter().map(|q| p.shuffle_truncated(q, n)).collect();
        Series::new(other.m(), n, comps).unwrap()
    }
}
