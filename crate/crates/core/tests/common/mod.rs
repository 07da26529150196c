//! Independent reference model for integration tests.
//!
//! Builds the Hamiltonian by applying ladder operators to a hash-indexed
//! state list (ordered by `n1` first, unlike the library) and diagonalizes
//! it with nalgebra.

#![allow(dead_code)]

use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};

/// `(atom1, atom2, n1, n2)` with atoms as 0/1.
pub type State = (usize, usize, usize, usize);

#[derive(Debug, Clone, Copy)]
pub struct Params {
    pub omega_c: f64,
    pub delta: f64,
    pub lambda: f64,
    pub hopping: f64,
}

impl Params {
    pub fn new(delta: f64, hopping: f64) -> Self {
        Self {
            omega_c: 0.0,
            delta,
            lambda: 1.0,
            hopping,
        }
    }
}

pub struct Reference {
    pub states: Vec<State>,
    pub h: DMatrix<f64>,
}

pub fn states(n: usize) -> Vec<State> {
    let mut out = Vec::new();
    for n1 in 0..=n {
        for a1 in 0..=1 {
            for a2 in 0..=1 {
                if let Some(n2) = n.checked_sub(n1 + a1 + a2) {
                    out.push((a1, a2, n1, n2));
                }
            }
        }
    }
    out
}

pub fn build(n: usize, p: Params) -> Reference {
    let states = states(n);
    let index: HashMap<State, usize> = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let dim = states.len();
    let mut h = DMatrix::zeros(dim, dim);
    for (i, &(a1, a2, n1, n2)) in states.iter().enumerate() {
        let omega_a = p.omega_c + p.delta;
        h[(i, i)] += p.omega_c * (n1 + n2) as f64 + omega_a * (a1 + a2) as f64;
        // a_j σ_j⁺ absorbs a photon and excites the atom; its adjoint is
        // filled in by symmetry.
        if a1 == 0 && n1 > 0 {
            let j = index[&(1, a2, n1 - 1, n2)];
            let v = p.lambda * (n1 as f64).sqrt();
            h[(j, i)] += v;
            h[(i, j)] += v;
        }
        if a2 == 0 && n2 > 0 {
            let j = index[&(a1, 1, n1, n2 - 1)];
            let v = p.lambda * (n2 as f64).sqrt();
            h[(j, i)] += v;
            h[(i, j)] += v;
        }
        // a₁† a₂ moves a photon from site 2 to site 1.
        if n2 > 0 {
            let j = index[&(a1, a2, n1 + 1, n2 - 1)];
            let v = p.hopping * ((n1 + 1) as f64 * n2 as f64).sqrt();
            h[(j, i)] += v;
            h[(i, j)] += v;
        }
    }
    Reference { states, h }
}

pub struct Eigen {
    pub values: Vec<f64>,
    /// Column `k` of the nalgebra matrix, in `states` order.
    pub vectors: Vec<Vec<f64>>,
}

pub fn eigen(r: &Reference) -> Eigen {
    let e = SymmetricEigen::new(r.h.clone());
    let mut order: Vec<usize> = (0..e.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    Eigen {
        values: order.iter().map(|&k| e.eigenvalues[k]).collect(),
        vectors: order
            .iter()
            .map(|&k| e.eigenvectors.column(k).iter().copied().collect())
            .collect(),
    }
}

pub fn ground(n: usize, p: Params) -> (Reference, f64, Vec<f64>) {
    let r = build(n, p);
    let e = eigen(&r);
    (r, e.values[0], e.vectors[0].clone())
}

/// `⟨N₁²⟩ − ⟨N₁⟩²` with `N₁ = n₁ + a₁`.
pub fn site_variance(r: &Reference, v: &[f64]) -> f64 {
    let (mut m1, mut m2) = (0.0, 0.0);
    for (s, c) in r.states.iter().zip(v) {
        let x = (s.0 + s.2) as f64;
        m1 += c * c * x;
        m2 += c * c * x * x;
    }
    m2 - m1 * m1
}

pub fn atom_variance(r: &Reference, v: &[f64]) -> f64 {
    let p: f64 = r
        .states
        .iter()
        .zip(v)
        .filter(|(s, _)| s.0 == 1)
        .map(|(_, c)| c * c)
        .sum();
    p * (1.0 - p)
}

pub fn atomic_distribution(r: &Reference, v: &[f64]) -> [f64; 3] {
    let mut d = [0.0; 3];
    for (s, c) in r.states.iter().zip(v) {
        d[s.0 + s.1] += c * c;
    }
    d
}

/// Weight on the lowest eigenspace of the `h = 0` Hamiltonian at the same
/// detuning and coupling.
pub fn lowest_uncoupled_weight(n: usize, p: Params, v: &[f64]) -> f64 {
    let r = build(n, Params { hopping: 0.0, ..p });
    let e = eigen(&r);
    let e0 = e.values[0];
    e.values
        .iter()
        .zip(&e.vectors)
        .take_while(|(x, _)| **x - e0 < 1e-9)
        .map(|(_, u)| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>().powi(2))
        .sum()
}

/// `(b†)^m/√m!` on photons with fixed atoms; `sign = −1` for the
/// antisymmetric mode. Computed from factorials, not binomials.
pub fn photon_mode_state(r: &Reference, atoms: (usize, usize), sign: f64) -> Vec<f64> {
    let fact = |k: usize| (1..=k).map(|x| x as f64).product::<f64>();
    r.states
        .iter()
        .map(|&(a1, a2, n1, n2)| {
            if (a1, a2) != atoms {
                return 0.0;
            }
            let m = n1 + n2;
            // ⟨n1, n2| (a₁† + s a₂†)^m |0⟩ / √(2^m m!)
            let coeff = fact(m) / (fact(n1) * fact(n2)) * (fact(n1) * fact(n2)).sqrt();
            sign.powi(n2 as i32) * coeff / (2f64.powi(m as i32) * fact(m)).sqrt()
        })
        .collect()
}

pub fn overlap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
