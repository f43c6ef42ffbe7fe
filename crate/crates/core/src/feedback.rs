//! The output-feedback group `δ + c`, the feedback product `c@d` and the
//! growth amplification of the inverse.
//!
//! `δ` is the generating symbol of the identity operator. It is never
//! stored: a [`DeltaSeries`] holds only its proper part `c`.

use std::fmt;
use std::str::FromStr;

use crate::composition::{comp_inverse_fixed_point, compose, mod_compose};
use crate::error::{Error, Result};
use crate::hopf::antipode_inverse;
use crate::series::Series;

/// `c_δ = δ + c` with a square proper part.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DeltaSeries {
    proper: Series,
}

impl DeltaSeries {
    pub fn new(proper: Series) -> Result<Self> {
        if proper.m() != proper.l() {
            return Err(Error::dimension(format!(
                "δ + c needs a square c, got m={} and l={}",
                proper.m(),
                proper.l()
            )));
        }
        Ok(DeltaSeries { proper })
    }

    /// `δ` itself.
    pub fn identity(m: usize, truncation: usize) -> Result<Self> {
        Self::new(Series::zero(m, m, truncation)?)
    }

    pub fn proper_part(&self) -> &Series {
        &self.proper
    }

    pub fn into_proper_part(self) -> Series {
        self.proper
    }

    pub fn is_identity(&self) -> bool {
        self.proper.is_zero()
    }

    pub fn m(&self) -> usize {
        self.proper.m()
    }

    pub fn truncation(&self) -> usize {
        self.proper.truncation()
    }
}

/// `(δ + c)∘(δ + d) = δ + c ⊚ d` with `c ⊚ d = d + c õ d`.
pub fn group_product(c: &DeltaSeries, d: &DeltaSeries) -> Result<DeltaSeries> {
    if c.m() != d.m() {
        return Err(Error::dimension(format!("group product of m={} and m={}", c.m(), d.m())));
    }
    let cd = mod_compose(&c.proper, &d.proper)?;
    DeltaSeries::new(d.proper.truncate(cd.truncation()).add(&cd)?)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InverseMethod {
    /// Iterate `e ↦ (-c) õ e` to its fixed point.
    FixedPoint,
    /// Evaluate the recursive antipode at `c`.
    #[default]
    Antipode,
}

impl FromStr for InverseMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixedpoint" | "fixed-point" | "fixed_point" => Ok(InverseMethod::FixedPoint),
            "antipode" => Ok(InverseMethod::Antipode),
            other => Err(Error::InvalidArgument(format!("unknown inverse method `{other}`"))),
        }
    }
}

impl fmt::Display for InverseMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InverseMethod::FixedPoint => "fixedpoint",
            InverseMethod::Antipode => "antipode",
        })
    }
}

/// Proper part of `(δ + c)⁻¹`, computed to the truncation of `c`.
pub fn inverse_proper(c: &Series, method: InverseMethod) -> Result<Series> {
    let n = c.truncation();
    match method {
        InverseMethod::FixedPoint => comp_inverse_fixed_point(c, n),
        InverseMethod::Antipode => antipode_inverse(c, n),
    }
}

pub fn group_inverse(c: &DeltaSeries, method: InverseMethod) -> Result<DeltaSeries> {
    DeltaSeries::new(inverse_proper(&c.proper, method)?)
}

/// `(δ + e)∘c = c + e∘c`.
pub fn compose_delta(e: &DeltaSeries, c: &Series) -> Result<Series> {
    let ec = compose(&e.proper, c)?;
    c.truncate(ec.truncation()).add(&ec)
}

/// The feedback product `c@d = c õ (-(d∘c))⁻¹`, the generating series of
/// the loop `y = F_c[u + F_d[y]]`.
///
/// `d` reads the outputs of `c` and feeds back one signal per input of
/// `c`, so `ℓ_c = m_d` and `ℓ_d = m_c`. `d∘c` then lives on the alphabet
/// of `c` and is square there.
pub fn feedback_product(c: &Series, d: &Series, n: usize) -> Result<Series> {
    feedback_product_with(c, d, n, InverseMethod::default())
}

pub fn feedback_product_with(c: &Series, d: &Series, n: usize, method: InverseMethod) -> Result<Series> {
    if c.l() != d.m() || d.l() != c.m() {
        return Err(Error::dimension(format!(
            "feedback needs l_c = m_d and l_d = m_c, got c: m={} l={}, d: m={} l={}",
            c.m(),
            c.l(),
            d.m(),
            d.l()
        )));
    }
    let c = c.truncate(n);
    let d = d.truncate(n);
    let dc = compose(&d, &c)?;
    let e = inverse_proper(&dc.neg(), method)?;
    mod_compose(&c, &e)
}

/// `c@δ = c õ (-c)⁻¹`, the loop closed through the identity operator.
pub fn feedback_through_identity(c: &Series, method: InverseMethod) -> Result<Series> {
    let e = inverse_proper(&c.neg(), method)?;
    mod_compose(c, &e)
}

/// `δ@d = (δ - d)⁻¹ = δ + (-d)⁻¹`.
pub fn identity_through_feedback(d: &Series, method: InverseMethod) -> Result<DeltaSeries> {
    DeltaSeries::new(inverse_proper(&d.neg(), method)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadiusMode {
    Local,
    Global,
}

impl FromStr for RadiusMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "local" => Ok(RadiusMode::Local),
            "global" => Ok(RadiusMode::Global),
            other => Err(Error::InvalidArgument(format!("unknown mode `{other}`, expected local or global"))),
        }
    }
}

/// Growth of the inverse series and the resulting convergence radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadiusReport {
    /// `𝒜(K)` (local) or `ℬ(K)` (global).
    pub amplification: f64,
    /// Amplification times `M`.
    pub geometric_constant: f64,
    /// `1 / (geometric_constant · (m+1))`.
    pub radius: f64,
}

fn check_growth(k: f64, m_growth: f64, inputs: usize) -> Result<f64> {
    if !(k > 0.0 && m_growth > 0.0 && k.is_finite() && m_growth.is_finite()) {
        return Err(Error::InvalidArgument(format!("K and M must be positive, got K={k}, M={m_growth}")));
    }
    if inputs == 0 {
        return Err(Error::InvalidArgument("the number of inputs must be at least 1".into()));
    }
    Ok(inputs as f64 * k)
}

fn report(amplification: f64, m_growth: f64, inputs: usize) -> RadiusReport {
    let geometric_constant = amplification * m_growth;
    RadiusReport { amplification, geometric_constant, radius: 1.0 / (geometric_constant * (inputs as f64 + 1.0)) }
}

/// `𝒜(K) = 1 / (1 - mK ln(1 + 1/(mK)))`.
pub fn radius_local_inverse(k: f64, m_growth: f64, inputs: usize) -> Result<RadiusReport> {
    let mk = check_growth(k, m_growth, inputs)?;
    let a = 1.0 / (1.0 - mk * (1.0 / mk).ln_1p());
    Ok(report(a, m_growth, inputs))
}

/// `ℬ(K) = 1 / ln(1 + 1/(mK))`.
pub fn radius_global_inverse(k: f64, m_growth: f64, inputs: usize) -> Result<RadiusReport> {
    let mk = check_growth(k, m_growth, inputs)?;
    let b = 1.0 / (1.0 / mk).ln_1p();
    Ok(report(b, m_growth, inputs))
}

pub fn radius_inverse(mode: RadiusMode, k: f64, m_growth: f64, inputs: usize) -> Result<RadiusReport> {
    match mode {
        RadiusMode::Local => radius_local_inverse(k, m_growth, inputs),
        RadiusMode::Global => radius_global_inverse(k, m_growth, inputs),
    }
}
