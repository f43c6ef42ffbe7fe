//! The Faà di Bruno type Hopf algebra of the output-feedback group.
//!
//! `H` is the free commutative algebra on the coordinate maps
//! `a^i_η : c ↦ (c_i, η)`, graded by
//! `deg a^i_η = 2|η|_{x0} + Σ_{j>=1} |η|_{xj} + 1`. Its coproduct is dual to
//! the group product `c ⊚ d = d + c õ d`, and its antipode evaluates the
//! group inverse coefficientwise: `a^i_η(c⁻¹) = (S a^i_η)(c)`.
//!
//! Text form, used for golden tests and the CLI: terms in canonical
//! monomial order, factors joined by `·`, e.g.
//! `-a[1,x0] + a[1,x1]·a[1,e] + a[1,x2]·a[2,e]`.

mod antipode;
mod coproduct;
mod grading;

pub use antipode::{antipode, antipode_inverse, antipode_monomial, antipode_poly, convolution_identity};
pub use coproduct::{coproduct, coproduct_monomial, reduced_coproduct, shuffle_coproduct, tilde_coproduct};
pub use grading::{basis_dimensions, coord_degree, coordinate_maps_of_degree, table_dimensions, BasisDimensions};

use std::cmp::{Ordering, Reverse};
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::series::Series;
use crate::word::Word;

/// The coordinate map `a^i_η` with a one-based component index `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoordinateMap {
    component: usize,
    word: Word,
}

impl CoordinateMap {
    pub fn new(component: usize, word: Word) -> Self {
        assert!(component >= 1, "coordinate map components are one-based");
        CoordinateMap { component, word }
    }

    pub fn component(&self) -> usize {
        self.component
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn degree(&self) -> usize {
        coord_degree(self)
    }

    /// `θ_k a^i_η = a^i_{x_k η}`.
    pub fn theta(&self, k: u8) -> CoordinateMap {
        CoordinateMap { component: self.component, word: self.word.push_left(k) }
    }

    /// `(c_i, η)`.
    pub fn evaluate(&self, c: &Series) -> Result<Rational> {
        if self.component > c.l() {
            return Err(Error::dimension(format!(
                "coordinate map {self} needs component {} but the series has l={}",
                self.component,
                c.l()
            )));
        }
        c.alphabet().check(&self.word)?;
        if self.word.len() > c.truncation() {
            return Err(Error::WordTooLong {
                word: self.word.to_string(),
                len: self.word.len(),
                order: c.truncation(),
            });
        }
        Ok(c.coeff(self.component - 1, &self.word))
    }
}

// Factors sort by decreasing degree, then component, then word.
impl Ord for CoordinateMap {
    fn cmp(&self, other: &Self) -> Ordering {
        (Reverse(self.degree()), self.component, &self.word).cmp(&(
            Reverse(other.degree()),
            other.component,
            &other.word,
        ))
    }
}

impl PartialOrd for CoordinateMap {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CoordinateMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a[{},{}]", self.component, self.word)
    }
}

impl fmt::Debug for CoordinateMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A commutative product of coordinate maps, kept as a sorted multiset.
/// The empty product is the unit `1`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<CoordinateMap>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_factors(mut factors: Vec<CoordinateMap>) -> Self {
        factors.sort();
        Monomial(factors)
    }

    pub fn single(a: CoordinateMap) -> Self {
        Monomial(vec![a])
    }

    pub fn factors(&self) -> &[CoordinateMap] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(CoordinateMap::degree).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if other.0.is_empty() {
            return self.clone();
        }
        if self.0.is_empty() {
            return other.clone();
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] <= other.0[j] {
                out.push(self.0[i].clone());
                i += 1;
            } else {
                out.push(other.0[j].clone());
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn mul_coord(&self, a: &CoordinateMap) -> Monomial {
        let pos = self.0.partition_point(|f| f <= a);
        let mut out = self.0.clone();
        out.insert(pos, a.clone());
        Monomial(out)
    }

    /// The character `Φ_c` applied to this monomial.
    pub fn evaluate(&self, c: &Series) -> Result<Rational> {
        let mut acc = Rational::one();
        for a in &self.0 {
            let v = a.evaluate(c)?;
            if v.is_zero() {
                return Ok(v);
            }
            acc *= v;
        }
        Ok(acc)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.len().cmp(&other.0.len()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("·")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn add_into<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, q: Rational) {
    if q.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(q);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += q;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// An element of `H`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct HopfPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl HopfPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::unit(), Rational::one())
    }

    pub fn coordinate(a: CoordinateMap) -> Self {
        Self::monomial(Monomial::single(a), Rational::one())
    }

    pub fn monomial(mono: Monomial, q: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(mono, q);
        p
    }

    pub fn add_term(&mut self, mono: Monomial, q: Rational) {
        add_into(&mut self.terms, mono, q);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &Monomial) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    /// The counit: the coefficient of `1`.
    pub fn counit(&self) -> Rational {
        self.coeff(&Monomial::unit())
    }

    pub fn add(&self, other: &HopfPoly) -> HopfPoly {
        let mut out = self.clone();
        for (mono, q) in &other.terms {
            out.add_term(mono.clone(), q.clone());
        }
        out
    }

    pub fn sub(&self, other: &HopfPoly) -> HopfPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, k: &Rational) -> HopfPoly {
        if k.is_zero() {
            return HopfPoly::zero();
        }
        HopfPoly { terms: self.terms.iter().map(|(m, q)| (m.clone(), q * k)).collect() }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> HopfPoly {
        HopfPoly { terms: self.terms.iter().map(|(m, q)| (m.mul(mono), q.clone())).collect() }
    }

    pub fn mul(&self, other: &HopfPoly) -> HopfPoly {
        let mut out = HopfPoly::zero();
        for (a, p) in &self.terms {
            for (b, q) in &other.terms {
                out.add_term(a.mul(b), p * q);
            }
        }
        out
    }

    /// Whether every term has total degree `n`.
    pub fn is_homogeneous(&self, n: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == n)
    }
}

impl fmt::Display for HopfPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (mono, q)) in self.terms.iter().enumerate() {
            let negative = q.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = q.abs();
            if mono.is_unit() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{magnitude} {mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HopfPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An element of `H ⊗ H`.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct HopfTensor {
    terms: BTreeMap<(Monomial, Monomial), Rational>,
}

impl HopfTensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, left: Monomial, right: Monomial, q: Rational) {
        add_into(&mut self.terms, (left, right), q);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Monomial, Monomial), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, left: &Monomial, right: &Monomial) -> Rational {
        self.terms.get(&(left.clone(), right.clone())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &HopfTensor) -> HopfTensor {
        let mut out = self.clone();
        for ((a, b), q) in &other.terms {
            out.add_term(a.clone(), b.clone(), q.clone());
        }
        out
    }

    /// `(a⊗b)(c⊗d) = ac ⊗ bd`.
    pub fn mul(&self, other: &HopfTensor) -> HopfTensor {
        let mut out = HopfTensor::zero();
        for ((a, b), p) in &self.terms {
            for ((c, d), q) in &other.terms {
                out.add_term(a.mul(c), b.mul(d), p * q);
            }
        }
        out
    }

    /// `μ`: multiply the two tensor legs together.
    pub fn multiply_legs(&self) -> HopfPoly {
        let mut out = HopfPoly::zero();
        for ((a, b), q) in &self.terms {
            out.add_term(a.mul(b), q.clone());
        }
        out
    }

    /// `(Δ ⊗ id)` applied to this tensor.
    pub fn coproduct_left(&self, m: usize) -> HopfTensor3 {
        let mut out = HopfTensor3::default();
        for ((a, b), q) in &self.terms {
            for ((a1, a2), p) in coproduct_monomial(a, m).iter() {
                add_into(&mut out.terms, (a1.clone(), a2.clone(), b.clone()), p * q);
            }
        }
        out
    }

    /// `(id ⊗ Δ)` applied to this tensor.
    pub fn coproduct_right(&self, m: usize) -> HopfTensor3 {
        let mut out = HopfTensor3::default();
        for ((a, b), q) in &self.terms {
            for ((b1, b2), p) in coproduct_monomial(b, m).iter() {
                add_into(&mut out.terms, (a.clone(), b1.clone(), b2.clone()), p * q);
            }
        }
        out
    }

    /// Evaluates `Σ q · left(c) · right(d)`.
    pub fn evaluate(&self, c: &Series, d: &Series) -> Result<Rational> {
        let mut acc = Rational::zero();
        for ((a, b), q) in &self.terms {
            let left = a.evaluate(c)?;
            if left.is_zero() {
                continue;
            }
            acc += q * left * b.evaluate(d)?;
        }
        Ok(acc)
    }

    /// Whether every term lies in `H_j ⊗ H_k` with `j + k = n` and a
    /// left leg that is a single coordinate map (`V₊ ⊗ H`).
    pub fn in_graded_component(&self, n: usize) -> bool {
        self.terms
            .keys()
            .all(|(a, b)| a.factors().len() == 1 && a.degree() + b.degree() == n)
    }
}

impl fmt::Display for HopfTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, ((a, b), q)) in self.terms.iter().enumerate() {
            let sign = if q.is_negative() { "-" } else { "+" };
            match k {
                0 if q.is_negative() => f.write_str("-")?,
                0 => {}
                _ => write!(f, " {sign} ")?,
            }
            let magnitude = q.abs();
            if !magnitude.is_one() {
                write!(f, "{magnitude} ")?;
            }
            write!(f, "{a}⊗{b}")?;
        }
        Ok(())
    }
}

/// An element of `H ⊗ H ⊗ H`, used for coassociativity checks.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct HopfTensor3 {
    terms: BTreeMap<(Monomial, Monomial, Monomial), Rational>,
}

impl HopfTensor3 {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Evaluates `p` at the character `Φ_c`, substituting `a^j_ξ ↦ (c_j, ξ)`.
pub fn eval_hopf(p: &HopfPoly, c: &Series) -> Result<Rational> {
    let mut acc = Rational::zero();
    for (mono, q) in p.iter() {
        let v = mono.evaluate(c)?;
        if !v.is_zero() {
            acc += q * v;
        }
    }
    Ok(acc)
}
