//! Numerical evaluation of Fliess operators
//!
//! ```text
//! F_c[u](t) = Σ_η (c, η) E_η[u](t, t0),
//! E_{x_i η}[u](t, t0) = ∫_{t0}^t u_i(τ) E_η[u](τ, t0) dτ,   u_0 := 1
//! ```
//!
//! Iterated integrals use the composite trapezoid rule on the sample grid.
//! For `u ≡ 0` only powers of `x0` survive and `E_{x0^k} = (t-t0)^k/k!` is
//! used in closed form.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{factorial, format_significant, ln_abs, to_f64, Rational};
use crate::series::Series;
use crate::word::Word;

/// `m` input channels sampled on a uniform grid over `[t0, t1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledSignal {
    t0: f64,
    t1: f64,
    /// One row per grid point.
    samples: Vec<Vec<f64>>,
}

impl SampledSignal {
    pub fn new(t0: f64, t1: f64, samples: Vec<Vec<f64>>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidArgument("a sampled signal needs at least two grid points".into()));
        }
        if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
            return Err(Error::InvalidArgument(format!("bad time interval [{t0}, {t1}]")));
        }
        let m = samples[0].len();
        if samples.iter().any(|r| r.len() != m) {
            return Err(Error::dimension("every sample must have the same number of channels"));
        }
        if samples.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite sample value".into()));
        }
        Ok(SampledSignal { t0, t1, samples })
    }

    pub fn zero(m: usize, t0: f64, t1: f64, points: usize) -> Result<Self> {
        Self::new(t0, t1, vec![vec![0.0; m]; points])
    }

    pub fn from_fn(m: usize, t0: f64, t1: f64, points: usize, f: impl Fn(f64) -> Vec<f64>) -> Result<Self> {
        let step = (t1 - t0) / (points.max(2) - 1) as f64;
        let samples = (0..points)
            .map(|k| {
                let row = f(t0 + step * k as f64);
                assert_eq!(row.len(), m, "input function returned the wrong number of channels");
                row
            })
            .collect();
        Self::new(t0, t1, samples)
    }

    /// CSV with a header line and columns `t,u1,...,um` on a uniform grid.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut times = Vec::new();
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let parsed: std::result::Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
            match parsed {
                Ok(values) => {
                    if values.len() < 2 {
                        return Err(Error::parse(lineno + 1, "expected t and at least one input column"));
                    }
                    times.push(values[0]);
                    rows.push(values[1..].to_vec());
                }
                Err(_) if times.is_empty() && rows.is_empty() => continue, // header
                Err(_) => return Err(Error::parse(lineno + 1, format!("malformed CSV row `{line}`"))),
            }
        }
        if times.len() < 2 {
            return Err(Error::parse(0, "an input signal needs at least two rows"));
        }
        let (t0, t1) = (times[0], times[times.len() - 1]);
        let step = (t1 - t0) / (times.len() - 1) as f64;
        for (k, t) in times.iter().enumerate() {
            if (t - (t0 + step * k as f64)).abs() > 1e-9 * step.abs().max(1.0) {
                return Err(Error::parse(k + 2, "input samples must be on a uniform time grid"));
            }
        }
        Self::new(t0, t1, rows)
    }

    pub fn m(&self) -> usize {
        self.samples[0].len()
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        (self.t1 - self.t0) / (self.samples.len() - 1) as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.samples.len()).map(|k| self.t0 + self.step() * k as f64).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().flatten().all(|&x| x == 0.0)
    }

    /// `max_i sup |u_i|`.
    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().flatten().fold(0.0, |a, &x| a.max(x.abs()))
    }

    fn channel(&self, letter: u8, k: usize) -> f64 {
        if letter == 0 {
            1.0
        } else {
            self.samples[k][letter as usize - 1]
        }
    }
}

/// `E_η[u]` at every grid point, sharing suffixes between words.
struct IntegralTable<'a> {
    u: &'a SampledSignal,
    cache: HashMap<Word, Vec<f64>>,
}

impl<'a> IntegralTable<'a> {
    fn new(u: &'a SampledSignal) -> Self {
        IntegralTable { u, cache: HashMap::new() }
    }

    fn get(&mut self, w: &Word) -> Vec<f64> {
        if let Some(v) = self.cache.get(w) {
            return v.clone();
        }
        let n = self.u.len();
        let values = match w.first() {
            None => vec![1.0; n],
            Some(letter) => {
                let inner = self.get(&w.tail());
                let h = self.u.step();
                let mut out = vec![0.0; n];
                for k in 1..n {
                    let a = self.u.channel(letter, k - 1) * inner[k - 1];
                    let b = self.u.channel(letter, k) * inner[k];
                    out[k] = out[k - 1] + 0.5 * h * (a + b);
                }
                out
            }
        };
        self.cache.insert(w.clone(), values.clone());
        values
    }
}

fn closed_form_zero_input(w: &Word, dt: f64) -> f64 {
    if w.count(0) != w.len() {
        return 0.0;
    }
    let k = w.len();
    dt.powi(k as i32) / to_f64(&Rational::from_integer(factorial(k)))
}

/// `E_η[u](t, t0)`; linear interpolation between grid points.
pub fn iterated_integral(w: &Word, u: &SampledSignal, t: f64) -> Result<f64> {
    if !(t >= u.t0 - 1e-12 && t <= u.t1 + 1e-12) {
        return Err(Error::InvalidArgument(format!("t={t} outside [{}, {}]", u.t0, u.t1)));
    }
    if let Some(l) = w.max_letter() {
        if l as usize > u.m() {
            return Err(Error::dimension(format!("word {w} needs input {l} but the signal has m={}", u.m())));
        }
    }
    if u.is_zero() {
        return Ok(closed_form_zero_input(w, t - u.t0));
    }
    let values = IntegralTable::new(u).get(w);
    let pos = ((t - u.t0) / u.step()).clamp(0.0, (u.len() - 1) as f64);
    let k = (pos.floor() as usize).min(u.len() - 2);
    let frac = pos - k as f64;
    Ok(values[k] * (1.0 - frac) + values[k + 1] * frac)
}

/// Output of [`eval_fliess`] on the input's sample grid.
#[derive(Clone, Debug, PartialEq)]
pub struct FliessOutput {
    pub times: Vec<f64>,
    /// `y[k][i]` is output `i` at `times[k]`.
    pub y: Vec<Vec<f64>>,
    /// Set when `max(R, T) >= 1/(M(m+1))` for the coefficient-based
    /// estimate of `M`; the sum is still evaluated.
    pub warning: Option<String>,
}

/// Smallest `M` with `|(c,η)| <= K M^|η|`, `K = max(1, |(c,e)|)`, over the
/// stored coefficients.
pub fn global_growth_estimate(c: &Series) -> f64 {
    let k = c
        .components()
        .iter()
        .map(|p| to_f64(&p.coeff(&Word::empty()).abs()))
        .fold(1.0, f64::max);
    let mut m: f64 = 0.0;
    for p in c.components() {
        for (w, q) in p.iter() {
            if w.is_empty() || q.is_zero() {
                continue;
            }
            m = m.max(((ln_abs(q) - k.ln()) / w.len() as f64).exp());
        }
    }
    m
}

/// `y(t) = Σ (c,η) E_η[u](t)` on the grid of `u`, through the truncation
/// of `c`.
pub fn eval_fliess(c: &Series, u: &SampledSignal) -> Result<FliessOutput> {
    if c.m() != u.m() {
        return Err(Error::dimension(format!("series has m={} inputs, signal has {}", c.m(), u.m())));
    }
    let times = u.times();
    let mut y = vec![vec![0.0; c.l()]; times.len()];
    let zero_input = u.is_zero();
    let mut table = IntegralTable::new(u);
    for (i, p) in c.components().iter().enumerate() {
        for (w, q) in p.iter() {
            let q = to_f64(q);
            if zero_input {
                for (k, t) in times.iter().enumerate() {
                    y[k][i] += q * closed_form_zero_input(w, t - u.t0);
                }
            } else {
                let e = table.get(w);
                for k in 0..times.len() {
                    y[k][i] += q * e[k];
                }
            }
        }
    }
    let m_est = global_growth_estimate(c);
    let bound = 1.0 / (m_est * (c.m() as f64 + 1.0));
    let (r, t) = (u.sup_norm(), u.t1 - u.t0);
    let warning = (m_est > 0.0 && r.max(t) >= bound).then(|| {
        format!(
            "max(R, T) = {} is outside the estimated convergence domain 1/(M(m+1)) = {} (M ≈ {})",
            format_significant(r.max(t), 9),
            format_significant(bound, 9),
            format_significant(m_est, 9)
        )
    });
    Ok(FliessOutput { times, y, warning })
}

/// `y_i(t) = Σ_k a_k t^k` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaylorResponse {
    pub coefficients: Vec<Rational>,
}

impl TaylorResponse {
    pub fn eval(&self, t: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, a| acc * t + to_f64(a))
    }
}

/// Natural response `F_{c_i}[0](t) = Σ_k (c_i, x0^k) t^k / k!` through
/// `t^order`, one per output.
pub fn natural_response_taylor(c: &Series, order: usize) -> Result<Vec<TaylorResponse>> {
    if order > c.truncation() {
        return Err(Error::DegreeExhausted(format!(
            "order {order} exceeds the series truncation {}",
            c.truncation()
        )));
    }
    Ok((0..c.l())
        .map(|i| TaylorResponse {
            coefficients: (0..=order)
                .map(|k| c.coeff(i, &Word::power(0, k)) / Rational::from_integer(factorial(k)))
                .collect(),
        })
        .collect())
}

/// `(c_i, x0^k)` for `k <= truncation`: the natural-response part.
pub fn natural_coefficients(c: &Series, component: usize) -> Vec<Rational> {
    (0..=c.truncation()).map(|k| c.coeff(component, &Word::power(0, k))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitMode {
    /// Fit `ln(|c_k| / k!)`.
    Local,
    /// Fit `ln |c_k|`.
    Global,
}

impl std::str::FromStr for FitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "local" => Ok(FitMode::Local),
            "global" => Ok(FitMode::Global),
            other => Err(Error::InvalidArgument(format!("unknown mode `{other}`, expected local or global"))),
        }
    }
}

/// Least-squares line through `(k, transformed c_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `exp(slope)`.
    pub m_estimate: f64,
    /// The points used, `(k, transformed value)`.
    pub points: Vec<(usize, f64)>,
}

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|j| (j as f64).ln()).sum()
}

/// Fits `coeffs[k]` for `k` in `from..=to`, skipping zeros.
pub fn growth_fit(coeffs: &[Rational], mode: FitMode, from: usize, to: usize) -> Result<GrowthFit> {
    let points: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(k, q)| *k >= from && *k <= to && !q.is_zero())
        .map(|(k, q)| {
            let v = ln_abs(q);
            (k, if mode == FitMode::Local { v - ln_factorial(k) } else { v })
        })
        .collect();
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "growth fit needs at least 3 nonzero coefficients in {from}..={to}, found {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0 as f64).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in &points {
        let (dx, dy) = (x as f64 - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(GrowthFit { slope, intercept, r_squared, m_estimate: slope.exp(), points })
}

/// CSV `t,y1,...,yl`.
pub fn trace_csv(out: &FliessOutput) -> String {
    let l = out.y.first().map_or(0, Vec::len);
    let mut s = String::from("t");
    for i in 1..=l {
        let _ = write!(s, ",y{i}");
    }
    s.push('\n');
    for (t, row) in out.times.iter().zip(&out.y) {
        s.push_str(&format_significant(*t, 9));
        for v in row {
            let _ = write!(s, ",{}", format_significant(*v, 9));
        }
        s.push('\n');
    }
    s
}

/// CSV `order,value,fit`: the transformed coefficients and the fitted line.
pub fn growth_csv(fit: &GrowthFit) -> String {
    let mut s = String::from("order,value,fit\n");
    for &(k, v) in &fit.points {
        let _ = writeln!(
            s,
            "{k},{},{}",
            format_significant(v, 9),
            format_significant(fit.intercept + fit.slope * k as f64, 9)
        );
    }
    s
}
