use super::CoordinateMap;
use crate::word::{Alphabet, Word};

/// `deg a^i_η = 2|η|_{x0} + Σ_{j>=1} |η|_{xj} + 1`.
pub fn coord_degree(a: &CoordinateMap) -> usize {
    let w = a.word();
    w.len() + w.count(0) + 1
}

fn word_degree(w: &Word) -> usize {
    w.len() + w.count(0) + 1
}

/// Every coordinate map `a^i_η`, `1 <= i <= m`, of degree `k`.
pub fn coordinate_maps_of_degree(k: usize, m: usize) -> Vec<CoordinateMap> {
    if k == 0 || m == 0 {
        return Vec::new();
    }
    let alphabet = Alphabet::new(m).expect("m >= 1");
    let mut out = Vec::new();
    for w in alphabet.words_up_to(k - 1) {
        if word_degree(&w) == k {
            for i in 1..=m {
                out.push(CoordinateMap::new(i, w.clone()));
            }
        }
    }
    out
}

/// Dimensions of the degree-`k` pieces of `V` and `H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisDimensions {
    /// `dim V_k`: coordinate maps of degree `k`.
    pub v: u64,
    /// Index-labelled products: each multiset of factor shapes (words over
    /// `x0` and a generic input letter) counted once per independent choice
    /// of component and input indices for every factor. This is how the
    /// basis listing of the grading table counts.
    pub h: u64,
    /// Distinct commutative monomials of degree `k`, the dimension of `H_k`
    /// as a vector space.
    pub h_commutative: u64,
}

impl BasisDimensions {
    pub fn as_pair(&self) -> (u64, u64) {
        (self.v, self.h)
    }
}

/// Number of multisets of items with total degree `k`, each multiset
/// weighted by the product of its item weights.
fn weighted_multisets(items: &[(usize, u64)], k: usize) -> u64 {
    let mut f = vec![0u64; k + 1];
    f[0] = 1;
    for &(d, w) in items {
        if d == 0 || d > k {
            continue;
        }
        // unbounded knapsack: adding one more copy of the item
        for total in d..=k {
            f[total] += f[total - d] * w;
        }
    }
    f[k]
}

/// Enumerated `dim V_k` and `dim H_k` for `m` inputs.
pub fn basis_dimensions(k: usize, m: usize) -> BasisDimensions {
    if k == 0 {
        return BasisDimensions { v: 1, h: 1, h_commutative: 1 };
    }
    let coords: Vec<(usize, u64)> =
        (1..=k).flat_map(|d| coordinate_maps_of_degree(d, m)).map(|a| (a.degree(), 1)).collect();
    let v = coords.iter().filter(|(d, _)| *d == k).count() as u64;
    let h_commutative = weighted_multisets(&coords, k);
    // shapes: words over {x0, x1}, x1 standing for any input letter
    let shapes: Vec<(usize, u64)> = Alphabet::new(1)
        .expect("m >= 1")
        .words_up_to(k - 1)
        .into_iter()
        .map(|w| (word_degree(&w), (m as u64).pow(1 + w.count(1) as u32)))
        .collect();
    let h = weighted_multisets(&shapes, k);
    BasisDimensions { v, h, h_commutative }
}

/// The closed-form dimension polynomials of the grading table,
/// `(dim V_k, dim H_k)`, for `k <= 6`.
pub fn table_dimensions(k: usize, m: u64) -> Option<(u64, u64)> {
    let p = |c: &[(u64, u32)]| c.iter().map(|(a, e)| a * m.pow(*e)).sum::<u64>();
    Some(match k {
        0 => (1, 1),
        1 => (m, m),
        2 => (p(&[(1, 2)]), p(&[(2, 2)])),
        3 => (p(&[(1, 1), (1, 3)]), p(&[(1, 1), (3, 3)])),
        4 => (p(&[(2, 2), (1, 4)]), p(&[(3, 2), (5, 4)])),
        5 => (p(&[(1, 1), (3, 3), (1, 5)]), p(&[(1, 1), (7, 3), (7, 5)])),
        6 => (p(&[(3, 2), (4, 4), (1, 6)]), p(&[(5, 2), (14, 4), (11, 6)])),
        _ => return None,
    })
}
