//! Control-affine state-space realizations
//!
//! ```text
//! ż = g₀(z) + Σ_j g_j(z) u_j,   y_i = h_i(z),   z(0) = z0
//! ```
//!
//! with analytic fields stored as truncated Taylor data about `z0`. The
//! generating series has coefficients `(c_i, η) = L_{g_η} h_i(z0)`, where
//! for `η = x_{j_k} ··· x_{j_1}` the Lie derivative of the first letter is
//! applied innermost: `L_{g_η} = L_{g_{j_1}} ··· L_{g_{j_k}}`.

mod json;
pub mod examples;
mod taylor;

pub use taylor::{lie_derivative, MultiIndex, TaylorField};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::series::Series;
use crate::word::{Word, WordPoly};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Realization {
    z0: Vec<Rational>,
    /// `g[0]` is the drift, `g[j]` multiplies `u_j`.
    g: Vec<Vec<TaylorField>>,
    h: Vec<TaylorField>,
}

impl Realization {
    /// Fields must already be expanded about `z0`.
    pub fn new(z0: Vec<Rational>, g: Vec<Vec<TaylorField>>, h: Vec<TaylorField>) -> Result<Self> {
        let n = z0.len();
        if g.is_empty() {
            return Err(Error::dimension("a realization needs at least the drift field g0"));
        }
        for (j, field) in g.iter().enumerate() {
            if field.len() != n {
                return Err(Error::dimension(format!("g{j} has {} entries, expected n={n}", field.len())));
            }
        }
        if h.is_empty() {
            return Err(Error::dimension("a realization needs at least one output"));
        }
        if g.iter().flatten().chain(h.iter()).any(|f| f.n_vars() != n) {
            return Err(Error::dimension(format!("every field must be over n={n} variables")));
        }
        Ok(Realization { z0, g, h })
    }

    /// `ż = Az + Σ_j B_j u_j`, `y = Cz`, `z0 = 0`. `b` is `n × m`, `c` is `l × n`.
    pub fn linear(a: &[Vec<Rational>], b: &[Vec<Rational>], c: &[Vec<Rational>], degree: usize) -> Result<Self> {
        let n = a.len();
        if a.iter().any(|r| r.len() != n) || b.len() != n || c.iter().any(|r| r.len() != n) {
            return Err(Error::dimension("linear realization needs A n×n, B n×m, C l×n"));
        }
        let m = b.first().map_or(0, Vec::len);
        if b.iter().any(|r| r.len() != m) {
            return Err(Error::dimension("ragged B matrix"));
        }
        let linear_form = |row: &[Rational]| {
            let mut f = TaylorField::zero(n, degree);
            for (k, q) in row.iter().enumerate() {
                let mut e = vec![0; n];
                e[k] = 1;
                f.add_term(e, q.clone());
            }
            f
        };
        let mut g = vec![a.iter().map(|r| linear_form(r)).collect::<Vec<_>>()];
        for j in 0..m {
            g.push((0..n).map(|k| TaylorField::constant(n, degree, b[k][j].clone())).collect());
        }
        let h = c.iter().map(|r| linear_form(r)).collect();
        Realization::new(vec![Rational::zero(); n], g, h)
    }

    pub fn n(&self) -> usize {
        self.z0.len()
    }

    pub fn m(&self) -> usize {
        self.g.len() - 1
    }

    pub fn l(&self) -> usize {
        self.h.len()
    }

    pub fn z0(&self) -> &[Rational] {
        &self.z0
    }

    pub fn g(&self) -> &[Vec<TaylorField>] {
        &self.g
    }

    pub fn h(&self) -> &[TaylorField] {
        &self.h
    }

    /// The smallest Taylor degree among all fields.
    pub fn degree(&self) -> usize {
        self.g.iter().flatten().chain(self.h.iter()).map(TaylorField::degree).min().unwrap_or(0)
    }

    /// Parses the JSON realization format; builtin fields are expanded to
    /// `degree`.
    pub fn from_json(text: &str, degree: usize) -> Result<Self> {
        json::from_json(text, degree)
    }

    /// Serializes with every field as Taylor data about `z0`.
    pub fn to_json(&self) -> String {
        json::to_json(self)
    }
}

fn check_degree(r: &Realization, n: usize) -> Result<()> {
    if r.degree() < n {
        return Err(Error::DegreeExhausted(format!(
            "word length {n} needs Taylor degree >= {n}, the realization has degree {}",
            r.degree()
        )));
    }
    Ok(())
}

/// The generating series through word length `n`.
pub fn series_from_realization(r: &Realization, n: usize) -> Result<Series> {
    check_degree(r, n)?;
    let mut components = vec![WordPoly::zero(); r.l()];
    for (i, h) in r.h.iter().enumerate() {
        let mut stack = vec![(Word::empty(), h.truncate(n))];
        while let Some((w, f)) = stack.pop() {
            components[i].add_term(w.clone(), f.value());
            if w.len() == n || f.is_zero() {
                continue;
            }
            for (j, g) in r.g.iter().enumerate() {
                let next = lie_derivative(g, &f)?.truncate(n - w.len() - 1);
                stack.push((w.push_right(j as u8), next));
            }
        }
    }
    Series::new(r.m(), n, components)
}

/// `(c_i, x0^k) = L_{g0}^k h_i(z0)` for `k <= order`, per output.
pub fn natural_response_coefficients(r: &Realization, order: usize) -> Result<Vec<Vec<Rational>>> {
    check_degree(r, order)?;
    r.h.iter()
        .map(|h| {
            let mut f = h.truncate(order);
            let mut out = Vec::with_capacity(order + 1);
            for k in 0..=order {
                out.push(f.value());
                if k < order {
                    f = lie_derivative(&r.g[0], &f)?.truncate(order - k - 1);
                }
            }
            Ok(out)
        })
        .collect()
}

/// Realization of the loop `u_plant = u + y_controller`,
/// `u_controller = y_plant`, with output `y_plant`. The state is
/// `(z_plant, z_controller)`.
pub fn closed_loop_realization(plant: &Realization, controller: &Realization) -> Result<Realization> {
    if plant.l() != controller.m() || controller.l() != plant.m() {
        return Err(Error::dimension(format!(
            "closed loop needs plant outputs = controller inputs and controller outputs = plant inputs, \
             got plant m={} l={}, controller m={} l={}",
            plant.m(),
            plant.l(),
            controller.m(),
            controller.l()
        )));
    }
    let (np, nc) = (plant.n(), controller.n());
    let n = np + nc;
    let lift_p = |f: &TaylorField| f.lift(n, 0);
    let lift_c = |f: &TaylorField| f.lift(n, np);
    let hp: Vec<TaylorField> = plant.h.iter().map(lift_p).collect();
    let hc: Vec<TaylorField> = controller.h.iter().map(lift_c).collect();

    let mut drift = Vec::with_capacity(n);
    for k in 0..np {
        let mut f = lift_p(&plant.g[0][k]);
        for j in 1..=plant.m() {
            f = f.add(&lift_p(&plant.g[j][k]).mul(&hc[j - 1]));
        }
        drift.push(f);
    }
    for k in 0..nc {
        let mut f = lift_c(&controller.g[0][k]);
        for j in 1..=controller.m() {
            f = f.add(&lift_c(&controller.g[j][k]).mul(&hp[j - 1]));
        }
        drift.push(f);
    }
    let mut g = vec![drift];
    for j in 1..=plant.m() {
        let mut field: Vec<TaylorField> = plant.g[j].iter().map(lift_p).collect();
        field.extend((0..nc).map(|_| TaylorField::zero(n, plant.g[j][0].degree())));
        g.push(field);
    }
    let z0 = plant.z0.iter().chain(controller.z0.iter()).cloned().collect();
    Realization::new(z0, g, hp)
}

/// For the unit-feedthrough system `y = h(z) + u`, the inverse system
/// `({g₀ - Σ_j g_j h_j, g_1, …, g_m}, -h, z0)`.
pub fn inverse_realization(r: &Realization) -> Result<Realization> {
    if r.m() != r.l() {
        return Err(Error::dimension(format!("inverse realization needs m = l, got m={} l={}", r.m(), r.l())));
    }
    let mut drift = r.g[0].clone();
    for j in 1..=r.m() {
        for (k, entry) in drift.iter_mut().enumerate() {
            *entry = entry.sub(&r.g[j][k].mul(&r.h[j - 1]));
        }
    }
    let mut g = vec![drift];
    g.extend(r.g[1..].iter().cloned());
    let h = r.h.iter().map(|f| f.scale(&-Rational::from_integer(1.into()))).collect();
    Realization::new(r.z0.clone(), g, h)
}
