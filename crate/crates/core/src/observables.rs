//! Order parameters of a state in the fixed-`N` basis.
//!
//! `N̂_j = a_j†a_j + |e_j⟩⟨e_j|` and `N̂_jA = |e_j⟩⟨e_j|` are diagonal in the
//! Fock basis, so every moment is a weighted sum over `|amplitude|²`.

use crate::analytic::{polariton_product_states, Level};
use crate::error::{Error, Result};
use crate::hilbert::{Basis, Site};
use crate::model::{dot, ModelParams};

/// Tolerance on `‖ψ‖ − 1` for inputs.
pub const NORM_TOL: f64 = 1e-8;

/// Group clustering tolerance for `h = 0` energies, in units of `λ`.
pub const GROUP_ENERGY_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteMoments {
    pub mean_excitation: f64,
    /// `ΔN_j = ⟨N̂_j²⟩ − ⟨N̂_j⟩²`.
    pub variance: f64,
    /// `ΔN_j / N`, zero for the vacuum block.
    pub relative_variance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomMoments {
    pub excited_prob: f64,
    /// `p(1 − p)`.
    pub variance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceProduct {
    /// `ΔN₁ · ΔN₁A`
    pub absolute: f64,
    /// `(ΔN₁ / N) · ΔN₁A`
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolaritonGroup {
    /// 1-based position in ascending energy order.
    pub label: usize,
    pub energy: f64,
    pub members: Vec<[Level; 2]>,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupDistribution {
    pub groups: Vec<PolaritonGroup>,
}

impl GroupDistribution {
    pub fn probabilities(&self) -> Vec<f64> {
        self.groups.iter().map(|g| g.probability).collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.members.len()).collect()
    }
}

fn checked_weights(state: &[f64], basis: &Basis) -> Result<Vec<f64>> {
    if state.len() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            got: state.len(),
        });
    }
    let norm = dot(state, state).sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    Ok(state.iter().map(|a| a * a).collect())
}

pub fn site_moments(state: &[f64], basis: &Basis, site: Site) -> Result<SiteMoments> {
    let w = checked_weights(state, basis)?;
    let mut mean = 0.0;
    for (p, s) in w.iter().zip(basis) {
        mean += p * s.site_excitations(site) as f64;
    }
    // central second moment; avoids ⟨N²⟩ − ⟨N⟩² cancellation
    let variance: f64 = w
        .iter()
        .zip(basis)
        .map(|(p, s)| p * (s.site_excitations(site) as f64 - mean).powi(2))
        .sum();
    let n = basis.n_total();
    Ok(SiteMoments {
        mean_excitation: mean,
        variance,
        relative_variance: if n == 0 { 0.0 } else { variance / n as f64 },
    })
}

pub fn atom_moments(state: &[f64], basis: &Basis, site: Site) -> Result<AtomMoments> {
    let w = checked_weights(state, basis)?;
    let p: f64 = w
        .iter()
        .zip(basis)
        .filter(|(_, s)| s.atom_excited(site))
        .map(|(p, _)| p)
        .sum();
    let p = p.clamp(0.0, 1.0);
    Ok(AtomMoments {
        excited_prob: p,
        variance: p * (1.0 - p),
    })
}

/// `P(N_A)` for `N_A = 0, 1, 2` excited atoms.
pub fn total_atomic_distribution(state: &[f64], basis: &Basis) -> Result<[f64; 3]> {
    let w = checked_weights(state, basis)?;
    let mut out = [0.0; 3];
    for (p, s) in w.iter().zip(basis) {
        out[s.atomic_excitations()] += p;
    }
    Ok(out)
}

/// Weight of `state` on each degenerate eigenspace of the `h = 0`
/// Hamiltonian at the same `Δ`, `λ`, ordered by energy.
///
/// Product polaritons are grouped when their energies agree within
/// `1e-9·λ`; accidental degeneracies therefore merge into one group that
/// lists all of its members.
pub fn polariton_group_distribution(
    state: &[f64],
    basis: &Basis,
    params: &ModelParams,
) -> Result<GroupDistribution> {
    checked_weights(state, basis)?;
    let mut products = polariton_product_states(basis, params);
    products.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    let tol = GROUP_ENERGY_RTOL
        * if params.lambda > 0.0 {
            params.lambda
        } else {
            1.0
        };

    let mut groups: Vec<PolaritonGroup> = Vec::new();
    for prod in products {
        let weight = dot(&prod.amplitudes, state).powi(2);
        match groups.last_mut() {
            Some(g) if prod.energy - g.energy <= tol => {
                g.members.push(prod.sites);
                g.probability += weight;
            }
            _ => groups.push(PolaritonGroup {
                label: groups.len() + 1,
                energy: prod.energy,
                members: vec![prod.sites],
                probability: weight,
            }),
        }
    }
    Ok(GroupDistribution { groups })
}

pub fn variance_product(site: &SiteMoments, atom: &AtomMoments) -> VarianceProduct {
    VarianceProduct {
        absolute: site.variance * atom.variance,
        relative: site.relative_variance * atom.variance,
    }
}
