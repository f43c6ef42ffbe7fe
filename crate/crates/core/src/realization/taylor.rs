use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{factorial, Rational};

/// Exponent vector of a monomial `δ₁^e₁ ··· δₙ^eₙ`.
pub type MultiIndex = Vec<u16>;

fn total_degree(e: &[u16]) -> usize {
    e.iter().map(|&k| k as usize).sum()
}

/// A multivariate Taylor polynomial in deviations `δ = z - z0`, known up
/// to total degree `degree`.
#[derive(Clone, PartialEq, Eq)]
pub struct TaylorField {
    n_vars: usize,
    degree: usize,
    coeffs: BTreeMap<MultiIndex, Rational>,
}

impl TaylorField {
    pub fn zero(n_vars: usize, degree: usize) -> Self {
        TaylorField { n_vars, degree, coeffs: BTreeMap::new() }
    }

    pub fn constant(n_vars: usize, degree: usize, q: Rational) -> Self {
        let mut f = Self::zero(n_vars, degree);
        f.add_term(vec![0; n_vars], q);
        f
    }

    /// The deviation `δ_var`.
    pub fn variable(n_vars: usize, degree: usize, var: usize) -> Self {
        let mut e = vec![0; n_vars];
        e[var] = 1;
        let mut f = Self::zero(n_vars, degree);
        f.add_term(e, Rational::one());
        f
    }

    pub fn from_terms(
        n_vars: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Rational)>,
    ) -> Result<Self> {
        let mut f = Self::zero(n_vars, degree);
        for (e, q) in terms {
            if e.len() != n_vars {
                return Err(Error::dimension(format!(
                    "multi-index of length {} in a field over {n_vars} variables",
                    e.len()
                )));
            }
            f.add_term(e, q);
        }
        Ok(f)
    }

    /// `scale · δ_var` substituted into the power series `Σ a_k t^k`.
    pub fn univariate(n_vars: usize, degree: usize, var: usize, scale: &Rational, a: impl Fn(usize) -> Rational) -> Self {
        let mut f = Self::zero(n_vars, degree);
        let mut power = Rational::one();
        for k in 0..=degree {
            let mut e = vec![0; n_vars];
            e[var] = k as u16;
            f.add_term(e, a(k) * &power);
            power *= scale;
        }
        f
    }

    /// `cos(scale · δ_var)`.
    pub fn cos(n_vars: usize, degree: usize, var: usize, scale: &Rational) -> Self {
        Self::univariate(n_vars, degree, var, scale, |k| {
            if k % 2 == 1 {
                Rational::zero()
            } else {
                let sign = if k % 4 == 0 { 1 } else { -1 };
                Rational::new(BigInt::from(sign), factorial(k))
            }
        })
    }

    /// `sin(scale · δ_var)`.
    pub fn sin(n_vars: usize, degree: usize, var: usize, scale: &Rational) -> Self {
        Self::univariate(n_vars, degree, var, scale, |k| {
            if k % 2 == 0 {
                Rational::zero()
            } else {
                let sign = if k % 4 == 1 { 1 } else { -1 };
                Rational::new(BigInt::from(sign), factorial(k))
            }
        })
    }

    /// `exp(scale · δ_var)`.
    pub fn exp(n_vars: usize, degree: usize, var: usize, scale: &Rational) -> Self {
        Self::univariate(n_vars, degree, var, scale, |k| Rational::new(BigInt::one(), factorial(k)))
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Total degree through which the coefficients are known.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, e: MultiIndex, q: Rational) {
        debug_assert_eq!(e.len(), self.n_vars);
        if q.is_zero() || total_degree(&e) > self.degree {
            return;
        }
        match self.coeffs.entry(e) {
            Entry::Vacant(v) => {
                v.insert(q);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, e: &[u16]) -> Rational {
        self.coeffs.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// The value at the expansion point.
    pub fn value(&self) -> Rational {
        self.coeff(&vec![0; self.n_vars])
    }

    pub fn truncate(&self, degree: usize) -> TaylorField {
        let degree = degree.min(self.degree);
        TaylorField {
            n_vars: self.n_vars,
            degree,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(e, _)| total_degree(e) <= degree)
                .map(|(e, q)| (e.clone(), q.clone()))
                .collect(),
        }
    }

    fn check_vars(&self, other: &TaylorField) {
        assert_eq!(self.n_vars, other.n_vars, "Taylor fields over different state spaces");
    }

    pub fn add(&self, other: &TaylorField) -> TaylorField {
        self.check_vars(other);
        let mut out = self.truncate(other.degree);
        for (e, q) in &other.coeffs {
            out.add_term(e.clone(), q.clone());
        }
        out
    }

    pub fn sub(&self, other: &TaylorField) -> TaylorField {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, k: &Rational) -> TaylorField {
        let mut out = Self::zero(self.n_vars, self.degree);
        if !k.is_zero() {
            out.coeffs = self.coeffs.iter().map(|(e, q)| (e.clone(), q * k)).collect();
        }
        out
    }

    /// Product, known through the smaller of the two degrees.
    pub fn mul(&self, other: &TaylorField) -> TaylorField {
        self.check_vars(other);
        let degree = self.degree.min(other.degree);
        let mut acc: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
        for (a, p) in &self.coeffs {
            let da = total_degree(a);
            if da > degree {
                continue;
            }
            for (b, q) in &other.coeffs {
                if da + total_degree(b) > degree {
                    continue;
                }
                let e: MultiIndex = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_insert_with(Rational::zero) += p * q;
            }
        }
        acc.retain(|_, q| !q.is_zero());
        TaylorField { n_vars: self.n_vars, degree, coeffs: acc }
    }

    /// `∂f/∂δ_var`, known through one degree less.
    pub fn partial(&self, var: usize) -> Result<TaylorField> {
        if self.degree == 0 {
            return Err(Error::DegreeExhausted("cannot differentiate a degree-0 Taylor field".into()));
        }
        let mut out = Self::zero(self.n_vars, self.degree - 1);
        for (e, q) in &self.coeffs {
            if e[var] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[var] -= 1;
            out.coeffs.insert(d, q * Rational::from_integer(BigInt::from(e[var])));
        }
        Ok(out)
    }

    /// Embeds the field into a state space of `n_total` variables, with
    /// its own variables starting at `offset`.
    pub fn lift(&self, n_total: usize, offset: usize) -> TaylorField {
        assert!(offset + self.n_vars <= n_total);
        let coeffs = self
            .coeffs
            .iter()
            .map(|(e, q)| {
                let mut big = vec![0; n_total];
                big[offset..offset + self.n_vars].copy_from_slice(e);
                (big, q.clone())
            })
            .collect();
        TaylorField { n_vars: n_total, degree: self.degree, coeffs }
    }

    /// Re-expands about a point displaced by `shift` from the current
    /// expansion point. Exact for polynomials; for truncated series the
    /// shifted coefficients only see the known terms.
    pub fn recenter(&self, shift: &[Rational]) -> TaylorField {
        assert_eq!(shift.len(), self.n_vars);
        if shift.iter().all(Zero::is_zero) {
            return self.clone();
        }
        let mut out = Self::zero(self.n_vars, self.degree);
        for (e, q) in &self.coeffs {
            // Π_k (s_k + δ_k)^{e_k}
            let mut expansion: Vec<(MultiIndex, Rational)> = vec![(vec![0; self.n_vars], q.clone())];
            for (k, &ek) in e.iter().enumerate() {
                if ek == 0 {
                    continue;
                }
                let mut next = Vec::new();
                for (base, c) in &expansion {
                    let mut binom = BigInt::one();
                    for j in 0..=ek {
                        // binom = C(ek, j)
                        let mut idx = base.clone();
                        idx[k] = j;
                        let sp = num_traits::pow(shift[k].clone(), (ek - j) as usize);
                        next.push((idx, c * &sp * Rational::from_integer(binom.clone())));
                        binom = binom * BigInt::from(ek - j) / BigInt::from(j + 1);
                    }
                }
                expansion = next;
            }
            for (idx, c) in expansion {
                out.add_term(idx, c);
            }
        }
        out
    }
}

/// `L_g h = Σ_k g_k ∂h/∂δ_k`.
pub fn lie_derivative(g: &[TaylorField], h: &TaylorField) -> Result<TaylorField> {
    if g.len() != h.n_vars() {
        return Err(Error::dimension(format!(
            "vector field with {} entries on a {}-dimensional state space",
            g.len(),
            h.n_vars()
        )));
    }
    if h.degree() == 0 {
        return Err(Error::DegreeExhausted("Lie derivative of a degree-0 Taylor field".into()));
    }
    let degree = g.iter().map(TaylorField::degree).min().unwrap_or(h.degree()).min(h.degree() - 1);
    let mut out = TaylorField::zero(h.n_vars(), degree);
    for (k, gk) in g.iter().enumerate() {
        if gk.is_zero() {
            continue;
        }
        let d = h.partial(k)?;
        if d.is_zero() {
            continue;
        }
        out = out.add(&gk.mul(&d));
    }
    Ok(out.truncate(degree))
}

impl fmt::Debug for TaylorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TaylorField(n={}, deg={}) {{", self.n_vars, self.degree)?;
        for (k, (e, q)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, " {e:?}: {q}")?;
        }
        f.write_str(" }")
    }
}
