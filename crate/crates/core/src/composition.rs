//! The composition product `c∘d`, the modified composition product `c õ d`
//! and the fixed-point route to the output-feedback group inverse.
//!
//! Both products are evaluated through the left-quotient decomposition
//! `c = (c,e) + Σ_i x_i c^i`. Since `ψ_d(x_i)` and `φ_d(x_i)` are linear,
//!
//! ```text
//! c∘d = (c,e) + Σ_i x0 (d_i ⧢ (c^i∘d)),                     d_0 := 1
//! c õ d = (c,e) + Σ_i [x_i (c^i õ d) + x0 (d_i ⧢ (c^i õ d))], d_0 := 0
//! ```
//!
//! Every letter of `c` contributes at least one letter to the result, so
//! a quotient at depth `k` only needs to be resolved to order `N - k`.

use crate::error::{Error, Result};
use crate::series::Series;
use crate::word::WordPoly;

fn compose_poly(p: &WordPoly, d: &Series, n: usize) -> WordPoly {
    let (constant, quotients) = p.left_quotients(d.l());
    let mut out = WordPoly::monomial(crate::word::Word::empty(), constant);
    if n == 0 {
        return out;
    }
    for (i, q) in quotients.iter().enumerate() {
        if q.is_zero() {
            continue;
        }
        let inner = compose_poly(q, d, n - 1);
        let term = if i == 0 { inner } else { d.component(i - 1).shuffle_truncated(&inner, n - 1) };
        out = out.add(&term.left_multiply(0));
    }
    out
}

fn mod_compose_poly(p: &WordPoly, d: &Series, n: usize) -> WordPoly {
    let (constant, quotients) = p.left_quotients(d.l());
    let mut out = WordPoly::monomial(crate::word::Word::empty(), constant);
    if n == 0 {
        return out;
    }
    for (i, q) in quotients.iter().enumerate() {
        if q.is_zero() {
            continue;
        }
        let inner = mod_compose_poly(q, d, n - 1);
        if i == 0 {
            out = out.add(&inner.left_multiply(0));
        } else {
            out = out.add(&inner.left_multiply(i as u8));
            let shuffled = d.component(i - 1).shuffle_truncated(&inner, n - 1);
            out = out.add(&shuffled.left_multiply(0));
        }
    }
    out
}

/// The composition product `c∘d`, realizing the cascade `F_c ∘ F_d`.
///
/// `c` must have one input letter per component of `d`; the result lives
/// on the alphabet of `d`, has the components of `c`, and is truncated at
/// `min(N_c, N_d)`.
pub fn compose(c: &Series, d: &Series) -> Result<Series> {
    if c.m() != d.l() {
        return Err(Error::dimension(format!(
            "compose: c has m={} input letters but d has l={} components",
            c.m(),
            d.l()
        )));
    }
    let n = c.truncation().min(d.truncation());
    let comps = c.components().iter().map(|p| compose_poly(&p.truncate(n), d, n)).collect();
    Series::new(d.m(), n, comps)
}

/// The modified composition product `c õ d`, realizing `F_c ∘ (I + F_d)`.
///
/// Requires `d` to be square on the alphabet of `c`.
pub fn mod_compose(c: &Series, d: &Series) -> Result<Series> {
    if c.m() != d.l() || d.m() != d.l() {
        return Err(Error::dimension(format!(
            "modified composition: c has m={} input letters, d has m={} and l={} (all must agree)",
            c.m(),
            d.m(),
            d.l()
        )));
    }
    let n = c.truncation().min(d.truncation());
    let comps = c.components().iter().map(|p| mod_compose_poly(&p.truncate(n), d, n)).collect();
    Series::new(c.m(), n, comps)
}

/// The group inverse `c⁻¹` as the fixed point of `e ↦ (-c) õ e`, iterated
/// from `e_0 = -c` until two iterates agree on all words of length `<= n`.
pub fn comp_inverse_fixed_point(c: &Series, n: usize) -> Result<Series> {
    if c.m() != c.l() {
        return Err(Error::dimension(format!(
            "group inverse needs a square series, got m={} and l={}",
            c.m(),
            c.l()
        )));
    }
    let minus_c = c.truncate(n).neg();
    let mut e = minus_c.clone();
    // Each pass fixes at least one more word length.
    for _ in 0..=n + 1 {
        let next = mod_compose(&minus_c, &e)?;
        if next == e {
            return Ok(next);
        }
        e = next;
    }
    unreachable!("(-c) õ e is a contraction; the iteration settles within N+1 passes")
}
