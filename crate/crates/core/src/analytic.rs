//! Closed-form results for the two-site model: single-site polariton
//! energies, level spacings of the uncoupled (`h = 0`) array, and the limit
//! states reached for large detuning or vanishing atom-field coupling.
//!
//! Single-site polaritons with `n` excitations are
//!
//! ```text
//! |n−⟩ = sin(θ_n/2) |e, n−1⟩ − cos(θ_n/2) |g, n⟩
//! |n+⟩ = cos(θ_n/2) |e, n−1⟩ + sin(θ_n/2) |g, n⟩
//! E(n∓) = n ω_c + Δ/2 ∓ ½ √(Δ² + 4 n λ²),   θ_n = atan2(2λ√n, Δ) ∈ (0, π)
//! ```
//!
//! The `atan2` branch keeps `|n−⟩` the lower level on both sides of
//! resonance. Energies are evaluated in a cancellation-free form so the
//! large-`|Δ|` tails stay accurate.

use std::fmt;

use crate::error::{Error, Result};
use crate::hilbert::{Basis, BasisState};
use crate::model::{dot, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Minus,
    Plus,
}

/// Eigenstate of one uncoupled site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Vacuum,
    Minus(usize),
    Plus(usize),
}

impl Level {
    pub fn new(n: usize, branch: Branch) -> Self {
        match (n, branch) {
            (0, _) => Level::Vacuum,
            (n, Branch::Minus) => Level::Minus(n),
            (n, Branch::Plus) => Level::Plus(n),
        }
    }

    /// All levels carrying `n` local excitations, lower branch first.
    pub fn with_excitations(n: usize) -> Vec<Level> {
        if n == 0 {
            vec![Level::Vacuum]
        } else {
            vec![Level::Minus(n), Level::Plus(n)]
        }
    }

    pub fn excitations(&self) -> usize {
        match *self {
            Level::Vacuum => 0,
            Level::Minus(n) | Level::Plus(n) => n,
        }
    }

    pub fn energy(&self, params: &ModelParams) -> f64 {
        match *self {
            Level::Vacuum => 0.0,
            Level::Minus(n) => polariton_energy(n, Branch::Minus, params),
            Level::Plus(n) => polariton_energy(n, Branch::Plus, params),
        }
    }

    /// Amplitudes as `(atom excited, photons, amplitude)`.
    pub fn components(&self, params: &ModelParams) -> Vec<(bool, usize, f64)> {
        match *self {
            Level::Vacuum => vec![(false, 0, 1.0)],
            Level::Minus(n) => {
                let half = mixing_angle(n, params) / 2.0;
                vec![(true, n - 1, half.sin()), (false, n, -half.cos())]
            }
            Level::Plus(n) => {
                let half = mixing_angle(n, params) / 2.0;
                vec![(true, n - 1, half.cos()), (false, n, half.sin())]
            }
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Vacuum => write!(f, "0"),
            Level::Minus(n) => write!(f, "{n}-"),
            Level::Plus(n) => write!(f, "{n}+"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaritonLevel {
    pub n: usize,
    pub branch: Branch,
    pub energy: f64,
    pub theta: f64,
}

/// `θ_n = atan2(2λ√n, Δ)`.
pub fn mixing_angle(n: usize, params: &ModelParams) -> f64 {
    (2.0 * params.lambda * (n as f64).sqrt()).atan2(params.delta)
}

/// `E(n∓)`; zero for `n = 0`.
pub fn polariton_energy(n: usize, branch: Branch, params: &ModelParams) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let d = params.delta;
    let coupling = 4.0 * n as f64 * params.lambda * params.lambda;
    let r = (d * d + coupling).sqrt();
    // Δ/2 ∓ r/2 rewritten so the small root never subtracts nearly equal terms.
    let split = match branch {
        Branch::Minus if d > 0.0 => -coupling / (2.0 * (d + r)),
        Branch::Minus => 0.5 * (d - r),
        Branch::Plus if d < 0.0 => coupling / (2.0 * (r - d)),
        Branch::Plus => 0.5 * (d + r),
    };
    n as f64 * params.omega_c + split
}

pub fn polariton_level(n: usize, branch: Branch, params: &ModelParams) -> Result<PolaritonLevel> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "polariton levels need at least one excitation".into(),
        ));
    }
    Ok(PolaritonLevel {
        n,
        branch,
        energy: polariton_energy(n, branch, params),
        theta: mixing_angle(n, params),
    })
}

/// Product of two single-site eigenstates, expanded in a fixed-`N` basis.
#[derive(Debug, Clone)]
pub struct ProductPolariton {
    pub sites: [Level; 2],
    pub energy: f64,
    pub amplitudes: Vec<f64>,
}

/// Every product `|L₁⟩ ⊗ |L₂⟩` with `N` excitations in total. These are the
/// `h = 0` eigenstates and span the block.
pub fn polariton_product_states(basis: &Basis, params: &ModelParams) -> Vec<ProductPolariton> {
    let n = basis.n_total();
    let mut out = Vec::with_capacity(basis.dim());
    for n1 in 0..=n {
        for l1 in Level::with_excitations(n1) {
            for l2 in Level::with_excitations(n - n1) {
                let mut amplitudes = vec![0.0; basis.dim()];
                for (a1, p1, c1) in l1.components(params) {
                    for (a2, p2, c2) in l2.components(params) {
                        let i = basis
                            .index_of(&BasisState::new(a1, a2, p1, p2))
                            .expect("product of N-excitation levels lies in the N block");
                        amplitudes[i] += c1 * c2;
                    }
                }
                out.push(ProductPolariton {
                    sites: [l1, l2],
                    energy: l1.energy(params) + l2.energy(params),
                    amplitudes,
                });
            }
        }
    }
    out
}

/// The nine degenerate `h = 0` groups of the `N = 4` block, lowest first.
/// Members of a group are related by exchanging the sites; together they
/// cover all 16 states.
pub const N4_GROUPS: [&[[Level; 2]]; 9] = [
    &[[Level::Minus(2), Level::Minus(2)]],
    &[
        [Level::Minus(1), Level::Minus(3)],
        [Level::Minus(3), Level::Minus(1)],
    ],
    &[
        [Level::Vacuum, Level::Minus(4)],
        [Level::Minus(4), Level::Vacuum],
    ],
    &[
        [Level::Plus(1), Level::Minus(3)],
        [Level::Minus(3), Level::Plus(1)],
    ],
    &[
        [Level::Plus(2), Level::Minus(2)],
        [Level::Minus(2), Level::Plus(2)],
    ],
    &[
        [Level::Plus(3), Level::Minus(1)],
        [Level::Minus(1), Level::Plus(3)],
    ],
    &[
        [Level::Plus(4), Level::Vacuum],
        [Level::Vacuum, Level::Plus(4)],
    ],
    &[
        [Level::Plus(1), Level::Plus(3)],
        [Level::Plus(3), Level::Plus(1)],
    ],
    &[[Level::Plus(2), Level::Plus(2)]],
];

/// Energies of the nine `N = 4` groups in their fixed order.
pub fn n4_group_energies(params: &ModelParams) -> [f64; 9] {
    N4_GROUPS.map(|g| g[0][0].energy(params) + g[0][1].energy(params))
}

/// Spacings `E(Γ_{k+1}) − E(Γ_k)` between consecutive `N = 4` groups.
pub fn n4_group_spacings(params: &ModelParams) -> [f64; 8] {
    let e = n4_group_energies(params);
    std::array::from_fn(|k| e[k + 1] - e[k])
}

/// One row per detuning of the `N = 4`, `h = 0` spacing table.
pub fn n4_spacing_table(deltas: &[f64], base: &ModelParams) -> Vec<(f64, [f64; 8])> {
    deltas
        .iter()
        .map(|&delta| {
            let p = ModelParams { delta, ..*base };
            (delta, n4_group_spacings(&p))
        })
        .collect()
}

/// Gap between the two lowest `N = 4` levels at `h = 0`:
/// `½ |√(Δ²+12λ²) − 2√(Δ²+8λ²) + √(Δ²+4λ²)|`, evaluated as
/// `16λ⁴ / ((f₃+f₂)(f₂+f₁)(f₃+f₁))` with `f_k = √(Δ² + 4kλ²)`.
pub fn gap_lowest_two(params: &ModelParams) -> f64 {
    let l2 = params.lambda * params.lambda;
    if l2 == 0.0 {
        return 0.0;
    }
    let f = |k: f64| (params.delta * params.delta + 4.0 * k * l2).sqrt();
    let (f1, f2, f3) = (f(1.0), f(2.0), f(3.0));
    16.0 * l2 * l2 / ((f3 + f2) * (f2 + f1) * (f3 + f1))
}

/// Resonant (`Δ = 0`, `h = 0`) gap for even `N`, in terms of the per-site
/// excitation `n = N/2`: `(2√n − √(n−1) − √(n+1)) λ`.
pub fn gap_lowest_two_general(n_total: usize, lambda: f64) -> Result<f64> {
    if !n_total.is_multiple_of(2) || n_total < 2 {
        return Err(Error::InvalidParameter(format!(
            "resonant gap formula needs even N >= 2, got {n_total}"
        )));
    }
    let n = (n_total / 2) as f64;
    let (lo, mid, hi) = ((n - 1.0).sqrt(), n.sqrt(), (n + 1.0).sqrt());
    Ok(2.0 * lambda / ((hi + lo) * (mid + lo) * (hi + mid)))
}

/// The same expression written with the total `N` in place of `N/2`. It does
/// not reproduce the `N = 4` gap and is kept only so reports can show the
/// discrepancy.
pub fn gap_total_n_form(n_total: usize, lambda: f64) -> f64 {
    let n = n_total as f64;
    (2.0 * n.sqrt() - (n - 1.0).sqrt() - (n + 1.0).sqrt()) * lambda
}

/// Normal mode of the two coupled cavities, `b± = (a₁ ± a₂)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhotonMode {
    Symmetric,
    Antisymmetric,
}

impl PhotonMode {
    /// Lower-frequency mode for hopping `h`: `b₋` for `h ≥ 0`, `b₊` for `h < 0`.
    /// At `h = 0` the two are degenerate and `b₋` is returned.
    pub fn lower_for(hopping: f64) -> Self {
        if hopping < 0.0 {
            PhotonMode::Symmetric
        } else {
            PhotonMode::Antisymmetric
        }
    }
}

/// A named closed-form state over a fixed-`N` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticState {
    pub label: String,
    pub amplitudes: Vec<f64>,
}

impl AnalyticState {
    pub fn norm(&self) -> f64 {
        dot(&self.amplitudes, &self.amplitudes).sqrt()
    }

    pub fn overlap(&self, v: &[f64]) -> f64 {
        dot(&self.amplitudes, v)
    }

    /// `|⟨self|v⟩|²`.
    pub fn fidelity(&self, v: &[f64]) -> f64 {
        self.overlap(v).powi(2)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Atoms fixed as given and all remaining photons in one delocalized mode:
/// `(b†)^m / √m! |0,0⟩`, whose amplitude on `|m−k, k⟩` is
/// `(±1)^k √C(m,k) / 2^{m/2}`.
pub fn delocalized_photon_state(
    basis: &Basis,
    atoms: [bool; 2],
    mode: PhotonMode,
    label: &str,
) -> Result<AnalyticState> {
    let excited = atoms.iter().filter(|&&a| a).count();
    let m = basis.n_total().checked_sub(excited).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "{excited} atomic excitations exceed N = {}",
            basis.n_total()
        ))
    })?;
    let mut amplitudes = vec![0.0; basis.dim()];
    let norm = 2f64.powf(-(m as f64) / 2.0);
    for k in 0..=m {
        let sign = match mode {
            PhotonMode::Antisymmetric if k % 2 == 1 => -1.0,
            _ => 1.0,
        };
        let i = basis.index_of(&BasisState::new(atoms[0], atoms[1], m - k, k))?;
        amplitudes[i] = sign * binomial(m, k).sqrt() * norm;
    }
    Ok(AnalyticState {
        label: label.to_string(),
        amplitudes,
    })
}

/// Large-positive-detuning ground state: atoms in `g`, all `N` photons in `b₋`.
pub fn photonic_ground_state(basis: &Basis) -> AnalyticState {
    delocalized_photon_state(
        basis,
        [false, false],
        PhotonMode::Antisymmetric,
        "photonic superfluid",
    )
    .expect("no atomic excitations always fit")
}

/// Large-negative-detuning ground state: both atoms excited, the other `N − 2`
/// photons in the lower hopping mode.
pub fn coexisting_state_limit(basis: &Basis, hopping: f64) -> Result<AnalyticState> {
    if basis.n_total() < 2 {
        return Err(Error::InvalidParameter(
            "coexisting state needs N >= 2".into(),
        ));
    }
    delocalized_photon_state(
        basis,
        [true, true],
        PhotonMode::lower_for(hopping),
        "coexisting",
    )
}

/// The four degenerate `λ = 0`, `h = −Δ` ground states of the `N = 4` block:
/// `[φ_co, φ_ps, φ₁, φ₂]`, with `φ₁`/`φ₂` having the first/second atom
/// excited and three photons in the lower mode.
pub fn perturbative_states_n4(basis: &Basis, params: &ModelParams) -> Result<[AnalyticState; 4]> {
    if basis.n_total() != 4 {
        return Err(Error::InvalidParameter(format!(
            "four-fold degenerate states exist for N = 4, got N = {}",
            basis.n_total()
        )));
    }
    let mode = PhotonMode::lower_for(params.hopping);
    Ok([
        delocalized_photon_state(basis, [true, true], mode, "phi_co")?,
        delocalized_photon_state(basis, [false, false], mode, "phi_ps")?,
        delocalized_photon_state(basis, [true, false], mode, "phi_1")?,
        delocalized_photon_state(basis, [false, true], mode, "phi_2")?,
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetuningLimit {
    Positive,
    Negative,
}

/// `ΔN₁` in the large-detuning limits: `N/4` for `Δ → +∞` and `(N−2)/4`
/// for `Δ → −∞`, where both atoms are excited.
pub fn limit_variance(n_total: usize, limit: DetuningLimit) -> Result<f64> {
    match limit {
        DetuningLimit::Positive => Ok(n_total as f64 / 4.0),
        DetuningLimit::Negative if n_total >= 2 => Ok((n_total - 2) as f64 / 4.0),
        DetuningLimit::Negative => Err(Error::InvalidParameter(format!(
            "negative-detuning limit needs N >= 2, got {n_total}"
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonicEnergy {
    pub energy: f64,
    pub mode: PhotonMode,
    /// Set when `h ≤ 0`, where `b₋` is no longer the lower mode.
    pub hopping_not_positive: bool,
}

/// Ground energy `N(ω_c − |h|)` of the photon-only Hamiltonian.
pub fn hph_ground_energy(n_total: usize, params: &ModelParams) -> PhotonicEnergy {
    PhotonicEnergy {
        energy: n_total as f64 * (params.omega_c - params.hopping.abs()),
        mode: PhotonMode::lower_for(params.hopping),
        hopping_not_positive: params.hopping <= 0.0,
    }
}
