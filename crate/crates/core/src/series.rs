//! Truncated vector-valued formal power series.
//!
//! A [`Series`] with truncation order `N` stands for the class of all
//! series that agree with it on words of length at most `N`. Binary
//! operations take the minimum of the operands' truncation orders.

use std::fmt;
use std::fmt::Write as _;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::rational::{factorial, parse_rational, to_f64, Rational};
use crate::word::{Alphabet, Word, WordPoly};

/// The ultrametric base: `dist(c, d) = SIGMA^order(c - d)`.
pub const SIGMA: f64 = 0.5;

#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    alphabet: Alphabet,
    truncation: usize,
    components: Vec<WordPoly>,
}

impl Series {
    pub fn zero(m: usize, l: usize, truncation: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::InvalidArgument("a series needs at least one component".into()));
        }
        Ok(Series { alphabet: Alphabet::new(m)?, truncation, components: vec![WordPoly::zero(); l] })
    }

    /// Builds a series, rejecting foreign letters and words beyond the
    /// truncation order.
    pub fn new(m: usize, truncation: usize, components: Vec<WordPoly>) -> Result<Self> {
        let mut s = Series::zero(m, components.len().max(1), truncation)?;
        if components.is_empty() {
            return Err(Error::InvalidArgument("a series needs at least one component".into()));
        }
        for p in &components {
            for (w, _) in p.iter() {
                s.alphabet.check(w)?;
                if w.len() > truncation {
                    return Err(Error::WordTooLong { word: w.to_string(), len: w.len(), order: truncation });
                }
            }
        }
        s.components = components;
        Ok(s)
    }

    /// Like [`Series::new`] but silently drops words beyond the truncation.
    pub fn truncated(m: usize, truncation: usize, components: Vec<WordPoly>) -> Result<Self> {
        Series::new(m, truncation, components.iter().map(|p| p.truncate(truncation)).collect())
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Number of input letters `m` of the alphabet.
    pub fn m(&self) -> usize {
        self.alphabet.m()
    }

    /// Number of output components `ℓ`.
    pub fn l(&self) -> usize {
        self.components.len()
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn components(&self) -> &[WordPoly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &WordPoly {
        &self.components[i]
    }

    /// The `i`-th component as a single-output series.
    pub fn component_series(&self, i: usize) -> Series {
        Series { alphabet: self.alphabet, truncation: self.truncation, components: vec![self.components[i].clone()] }
    }

    /// `(c_i, w)` with `i` zero-based.
    pub fn coeff(&self, i: usize, w: &Word) -> Rational {
        self.components[i].coeff(w)
    }

    pub fn set_coeff(&mut self, i: usize, w: Word, q: Rational) -> Result<()> {
        self.alphabet.check(&w)?;
        if w.len() > self.truncation {
            return Err(Error::WordTooLong { word: w.to_string(), len: w.len(), order: self.truncation });
        }
        let current = self.components[i].coeff(&w);
        self.components[i].add_term(w, q - current);
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(WordPoly::is_zero)
    }

    pub fn truncate(&self, n: usize) -> Series {
        let n = n.min(self.truncation);
        Series {
            alphabet: self.alphabet,
            truncation: n,
            components: self.components.iter().map(|p| p.truncate(n)).collect(),
        }
    }

    fn check_same_shape(&self, other: &Series, op: &str) -> Result<()> {
        if self.alphabet != other.alphabet || self.l() != other.l() {
            return Err(Error::dimension(format!(
                "{op}: (m={}, l={}) vs (m={}, l={})",
                self.m(),
                self.l(),
                other.m(),
                other.l()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_same_shape(other, "add")?;
        let n = self.truncation.min(other.truncation);
        Ok(Series {
            alphabet: self.alphabet,
            truncation: n,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.truncate(n).add(&b.truncate(n)))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        self.map_components(WordPoly::neg)
    }

    pub fn scale(&self, k: &Rational) -> Series {
        self.map_components(|p| p.scale(k))
    }

    fn map_components(&self, f: impl Fn(&WordPoly) -> WordPoly) -> Series {
        Series {
            alphabet: self.alphabet,
            truncation: self.truncation,
            components: self.components.iter().map(f).collect(),
        }
    }

    /// Shuffle product of two single-output series.
    pub fn shuffle(&self, other: &Series) -> Result<Series> {
        if self.alphabet != other.alphabet || self.l() != 1 || other.l() != 1 {
            return Err(Error::dimension(format!(
                "shuffle needs two single-output series over one alphabet, got l={} and l={}",
                self.l(),
                other.l()
            )));
        }
        let n = self.truncation.min(other.truncation);
        Ok(Series {
            alphabet: self.alphabet,
            truncation: n,
            components: vec![self.components[0].shuffle_truncated(&other.components[0], n)],
        })
    }

    /// Length of the shortest word with a nonzero coefficient in any
    /// component; `None` stands for the zero series (order ∞).
    pub fn order(&self) -> Option<usize> {
        self.components.iter().filter_map(WordPoly::order).min()
    }

    /// Ultrametric distance `σ^order(c - d)` at the common truncation.
    pub fn distance(&self, other: &Series) -> Result<f64> {
        Ok(match self.sub(other)?.order() {
            None => 0.0,
            Some(k) => SIGMA.powi(k as i32),
        })
    }

    /// Parses the line-oriented `fps` text format.
    pub fn parse(text: &str) -> Result<Series> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `fps` header"))?;
        let (m, l, n) = parse_header(header).ok_or_else(|| {
            Error::parse(hline, format!("expected `fps m=<m> l=<l> N=<N>`, found `{header}`"))
        })?;
        let mut series = Series::zero(m, l, n).map_err(|e| Error::parse(hline, e.to_string()))?;
        let mut seen = std::collections::HashSet::new();
        for (lineno, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::parse(lineno, format!("expected `<component> <coefficient> <word>`, found `{line}`")));
            }
            let i: usize = fields[0]
                .parse()
                .ok()
                .filter(|i| (1..=l).contains(i))
                .ok_or_else(|| Error::parse(lineno, format!("component `{}` not in 1..{l}", fields[0])))?;
            let q = parse_rational(fields[1])
                .ok_or_else(|| Error::parse(lineno, format!("malformed rational `{}`", fields[1])))?;
            let w: Word = fields[2].parse().map_err(|e| match e {
                Error::Parse { message, .. } => Error::parse(lineno, message),
                other => other,
            })?;
            series.alphabet.check(&w)?;
            if w.len() > n {
                return Err(Error::WordTooLong { word: w.to_string(), len: w.len(), order: n });
            }
            if !seen.insert((i, w.clone())) {
                return Err(Error::parse(lineno, format!("duplicate coefficient for component {i}, word {w}")));
            }
            series.components[i - 1].add_term(w, q);
        }
        Ok(series)
    }

    /// Canonical `fps` text; `parse(format(c)) == c`.
    pub fn format(&self) -> String {
        let mut out = format!("fps m={} l={} N={}\n", self.m(), self.l(), self.truncation);
        for (i, p) in self.components.iter().enumerate() {
            for (w, q) in p.iter() {
                let _ = writeln!(out, "{} {} {}", i + 1, q, w);
            }
        }
        out
    }
}

fn parse_header(line: &str) -> Option<(usize, usize, usize)> {
    let mut parts = line.split_whitespace();
    if parts.next()? != "fps" {
        return None;
    }
    let mut get = |key: &str| -> Option<usize> { parts.next()?.strip_prefix(key)?.parse().ok() };
    let m = get("m=")?;
    let l = get("l=")?;
    let n = get("N=")?;
    if parts.next().is_some() {
        return None;
    }
    Some((m, l, n))
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series(m={}, N={}) [", self.m(), self.truncation)?;
        for (i, p) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

/// Growth constants `K, M > 0` of a bound `|(c,η)| <= K M^|η| |η|!`
/// (local) or `|(c,η)| <= K M^|η|` (global).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthConstants {
    pub k: f64,
    pub m: f64,
}

impl GrowthConstants {
    pub fn new(k: f64, m: f64) -> Result<Self> {
        if !(k > 0.0 && m > 0.0 && k.is_finite() && m.is_finite()) {
            return Err(Error::InvalidArgument(format!("growth constants must be positive, got K={k}, M={m}")));
        }
        Ok(GrowthConstants { k, m })
    }

    /// Checks the local bound on every stored coefficient.
    pub fn bounds_locally(&self, c: &Series) -> bool {
        self.check(c, true)
    }

    /// Checks the global bound on every stored coefficient.
    pub fn bounds_globally(&self, c: &Series) -> bool {
        self.check(c, false)
    }

    fn check(&self, c: &Series, local: bool) -> bool {
        c.components().iter().all(|p| {
            p.iter().all(|(w, q)| {
                let mut bound = self.k * self.m.powi(w.len() as i32);
                if local {
                    bound *= to_f64(&Rational::from_integer(factorial(w.len())));
                }
                to_f64(&q.abs()) <= bound * (1.0 + 1e-12)
            })
        })
    }

    /// Radius `1 / (M (m+1))` of the convergence domain of `F_c`.
    pub fn radius(&self, inputs: usize) -> f64 {
        1.0 / (self.m * (inputs as f64 + 1.0))
    }
}
