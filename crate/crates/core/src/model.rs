//! Two-site Jaynes-Cummings-Hubbard Hamiltonian in a fixed-`N` block.
//!
//! ```text
//! H = Σ_j [ ω_c a_j†a_j + ω_a |e_j⟩⟨e_j| + λ (a_j† σ_j⁻ + a_j σ_j⁺) ]
//!     + h (a_1† a_2 + a_1 a_2†),        Δ = ω_a − ω_c
//! ```
//!
//! Under the rotating-wave approximation every coupling is real, so the block
//! is a real symmetric matrix. With the default `ω_c = 0` energies are
//! reported relative to `N·ω_c`; setting `omega_c` re-adds that shift.
//! Negative `h` is allowed: the gauge change `a₂ → −a₂` maps it to `|h|`
//! with the roles of the symmetric and antisymmetric photon modes swapped.

use std::io::Write;

use crate::error::{Error, Result};
use crate::hilbert::{Basis, BasisState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Cavity frequency `ω_c`.
    pub omega_c: f64,
    /// Detuning `Δ = ω_a − ω_c`.
    pub delta: f64,
    /// Atom-field coupling `λ`, the unit of energy.
    pub lambda: f64,
    /// Photon hopping `h`.
    pub hopping: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            omega_c: 0.0,
            delta: 0.0,
            lambda: 1.0,
            hopping: 0.0,
        }
    }
}

impl ModelParams {
    /// `λ = 1`, `ω_c = 0`.
    pub fn new(delta: f64, hopping: f64) -> Self {
        Self {
            delta,
            hopping,
            ..Self::default()
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_omega_c(mut self, omega_c: f64) -> Self {
        self.omega_c = omega_c;
        self
    }

    /// Atomic transition frequency `ω_a = ω_c + Δ`.
    pub fn omega_a(&self) -> f64 {
        self.omega_c + self.delta
    }

    /// Multiplies every energy scale by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            omega_c: self.omega_c * c,
            delta: self.delta * c,
            lambda: self.lambda * c,
            hopping: self.hopping * c,
        }
    }

    /// `λ = 0` is accepted so the decoupled limit can be built exactly.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega_c", self.omega_c),
            ("delta", self.delta),
            ("lambda", self.lambda),
            ("hopping", self.hopping),
        ];
        if let Some((name, v)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "{name} = {v} is not finite"
            )));
        }
        if self.lambda < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "lambda = {} must be non-negative",
                self.lambda
            )));
        }
        Ok(())
    }

    /// Diagonal matrix element of `state`.
    pub fn diagonal(&self, state: &BasisState) -> f64 {
        let photons = (state.photons[0] + state.photons[1]) as f64;
        self.omega_c * photons + self.omega_a() * state.atomic_excitations() as f64
    }
}

/// Off-diagonal partners of `state`, each unordered pair produced once.
///
/// Jaynes-Cummings terms link `|e, n⟩` to `|g, n+1⟩` on the same site with
/// `λ√(n+1)`; hopping links `(n₁, n₂)` to `(n₁−1, n₂+1)` with `h√(n₁(n₂+1))`.
/// Zero couplings are skipped.
pub fn coupled_partners(params: &ModelParams, state: &BasisState) -> Vec<(BasisState, f64)> {
    let mut out = Vec::with_capacity(3);
    if params.lambda != 0.0 {
        for site in 0..2 {
            if state.atoms[site] {
                let mut target = *state;
                target.atoms[site] = false;
                target.photons[site] += 1;
                let amp = params.lambda * ((state.photons[site] + 1) as f64).sqrt();
                out.push((target, amp));
            }
        }
    }
    let [n1, n2] = state.photons;
    if params.hopping != 0.0 && n1 > 0 {
        let target = BasisState {
            atoms: state.atoms,
            photons: [n1 - 1, n2 + 1],
        };
        out.push((target, params.hopping * ((n1 * (n2 + 1)) as f64).sqrt()));
    }
    out
}

/// Real symmetric matrix stored as upper-triangle triplets `(row ≤ col)`.
#[derive(Debug, Clone)]
pub struct SparseHamiltonian {
    basis: Basis,
    params: ModelParams,
    entries: Vec<(usize, usize, f64)>,
}

impl SparseHamiltonian {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    /// `H·x`, applying each stored off-diagonal entry to both triangles.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let mut y = vec![0.0; x.len()];
        self.apply_into(x, &mut y);
        Ok(y)
    }

    /// Unchecked variant of [`apply`](Self::apply) writing into `y`.
    pub(crate) fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
            if r != c {
                y[c] += v * x[r];
            }
        }
    }

    /// `⟨x|H|x⟩` for a real vector.
    pub fn expectation(&self, x: &[f64]) -> Result<f64> {
        let hx = self.apply(x)?;
        Ok(dot(x, &hx))
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim();
        let mut m = vec![0.0; n * n];
        for &(r, c, v) in &self.entries {
            m[r * n + c] += v;
            if r != c {
                m[c * n + r] += v;
            }
        }
        m
    }

    /// Largest absolute row sum, an upper bound on the spectral radius.
    pub fn norm_bound(&self) -> f64 {
        let mut rows = vec![0.0_f64; self.dim()];
        for &(r, c, v) in &self.entries {
            rows[r] += v.abs();
            if r != c {
                rows[c] += v.abs();
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    /// Writes `row col value` lines with 17 significant digits.
    pub fn write_triplets<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# dim {} n_total {}", self.dim(), self.basis.n_total())?;
        for &(r, c, v) in &self.entries {
            writeln!(w, "{r} {c} {v:.16e}")?;
        }
        Ok(())
    }
}

/// Builds the `N`-block Hamiltonian for `params`.
pub fn build_hamiltonian(params: &ModelParams, basis: &Basis) -> Result<SparseHamiltonian> {
    params.validate()?;
    let mut entries = Vec::with_capacity(basis.dim() * 4);
    for (i, state) in basis.iter().enumerate() {
        entries.push((i, i, params.diagonal(state)));
        for (target, amp) in coupled_partners(params, state) {
            let j = basis.index_of(&target)?;
            entries.push((i.min(j), i.max(j), amp));
        }
    }
    entries.sort_by_key(|&(r, c, _)| (r, c));
    Ok(SparseHamiltonian {
        basis: basis.clone(),
        params: *params,
        entries,
    })
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn dense_eigenvalues(h: &SparseHamiltonian) -> Vec<f64> {
        let n = h.dim();
        let m = nalgebra::DMatrix::from_row_slice(n, n, &h.to_dense());
        let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    #[test]
    fn single_excitation_resonant_block() {
        let basis = Basis::new(1);
        let h = build_hamiltonian(&ModelParams::new(0.0, 0.0), &basis).unwrap();
        let dense = h.to_dense();
        for i in 0..4 {
            assert_eq!(dense[i * 4 + i], 0.0);
        }
        // |e g; 0,0⟩ (index 3) couples to |g g; 1,0⟩ (index 1)
        assert_eq!(dense[3 * 4 + 1], 1.0);
        // |g e; 0,0⟩ (index 2) couples to |g g; 0,1⟩ (index 0)
        assert_eq!(dense[2 * 4], 1.0);
        let ev = dense_eigenvalues(&h);
        for (got, want) in ev.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn decoupled_limit_is_diagonal() {
        let basis = Basis::new(3);
        let p = ModelParams::new(-0.7, 0.0).with_lambda(0.0);
        let h = build_hamiltonian(&p, &basis).unwrap();
        assert!(h.entries().iter().all(|&(r, c, _)| r == c));
        let min = basis
            .iter()
            .map(|s| -0.7 * s.atomic_excitations() as f64)
            .fold(f64::INFINITY, f64::min);
        assert_abs_diff_eq!(dense_eigenvalues(&h)[0], min, epsilon = 1e-15);
    }

    #[test]
    fn four_excitation_resonant_gap() {
        let h = build_hamiltonian(&ModelParams::new(0.0, 0.0), &Basis::new(4)).unwrap();
        let ev = dense_eigenvalues(&h);
        let s2 = 2f64.sqrt();
        let s3 = 3f64.sqrt();
        assert_abs_diff_eq!(ev[0], -2.0 * s2, epsilon = 1e-12);
        assert_abs_diff_eq!(ev[1], -1.0 - s3, epsilon = 1e-12);
        assert_abs_diff_eq!(ev[1] - ev[0], 2.0 * s2 - 1.0 - s3, epsilon = 1e-12);
    }

    #[test]
    fn omega_c_shifts_by_n() {
        let basis = Basis::new(5);
        let p = ModelParams::new(0.3, 0.8);
        let a = dense_eigenvalues(&build_hamiltonian(&p, &basis).unwrap());
        let b = dense_eigenvalues(&build_hamiltonian(&p.with_omega_c(2.5), &basis).unwrap());
        for (x, y) in a.iter().zip(&b) {
            assert_abs_diff_eq!(x + 5.0 * 2.5, *y, epsilon = 1e-11);
        }
    }

    #[test]
    fn apply_zero_and_diagonal_eigenvector() {
        let basis = Basis::new(4);
        let p = ModelParams::new(1.5, 0.0).with_lambda(0.0);
        let h = build_hamiltonian(&p, &basis).unwrap();
        assert!(h.apply(&[0.0; 16]).unwrap().iter().all(|&v| v == 0.0));
        for i in 0..16 {
            let mut e = vec![0.0; 16];
            e[i] = 1.0;
            let he = h.apply(&e).unwrap();
            let d = p.diagonal(basis.get(i).unwrap());
            for (k, v) in he.iter().enumerate() {
                assert_eq!(*v, if k == i { d } else { 0.0 });
            }
        }
    }

    #[test]
    fn length_mismatch() {
        let h = build_hamiltonian(&ModelParams::new(0.0, 1.0), &Basis::new(2)).unwrap();
        assert!(matches!(
            h.apply(&[1.0; 3]),
            Err(Error::DimensionMismatch {
                expected: 8,
                got: 3
            })
        ));
    }

    #[test]
    fn rejects_bad_params() {
        let b = Basis::new(2);
        assert!(build_hamiltonian(&ModelParams::new(f64::NAN, 0.0), &b).is_err());
        assert!(build_hamiltonian(&ModelParams::new(0.0, 0.0).with_lambda(-1.0), &b).is_err());
    }

    #[test]
    fn merged_blocks_never_couple() {
        // Apply the coupling rules to a basis spanning several N blocks; a
        // partner with a different excitation count would be a leak.
        let merged: Vec<BasisState> = (0..=8)
            .flat_map(|n| Basis::new(n).states().to_vec())
            .collect();
        let lookup: HashMap<BasisState, usize> =
            merged.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let p = ModelParams::new(0.4, -1.3).with_lambda(0.9);
        let mut couplings = 0;
        for s in &merged {
            for (t, _) in coupled_partners(&p, s) {
                assert_eq!(s.excitations(), t.excitations(), "{s} -> {t}");
                if t.excitations() <= 8 {
                    assert!(lookup.contains_key(&t));
                }
                couplings += 1;
            }
        }
        assert!(couplings > 0);
    }

    #[test]
    fn triplet_dump_format() {
        let h = build_hamiltonian(&ModelParams::new(0.0, 0.5), &Basis::new(1)).unwrap();
        let mut buf = Vec::new();
        h.write_triplets(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# dim 4 n_total 1"));
        assert!(text.contains("0 1 5.0000000000000000e-1"));
        assert!(text.contains("1 3 1.0000000000000000e0"));
    }

    proptest! {
        #[test]
        fn matrix_is_symmetric(
            n in 1usize..=12,
            delta in -10.0f64..10.0,
            hop in -5.0f64..5.0,
            v in prop::collection::vec(-1.0f64..1.0, 48),
            w in prop::collection::vec(-1.0f64..1.0, 48),
        ) {
            let h = build_hamiltonian(&ModelParams::new(delta, hop), &Basis::new(n)).unwrap();
            let d = h.dim();
            let (v, w) = (&v[..d], &w[..d]);
            let lhs = dot(v, &h.apply(w).unwrap());
            let rhs = dot(&h.apply(v).unwrap(), w);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }

        #[test]
        fn spectrum_scales_with_parameters(
            n in 1usize..=8,
            delta in -5.0f64..5.0,
            hop in -3.0f64..3.0,
            c in 0.1f64..10.0,
        ) {
            let b = Basis::new(n);
            let p = ModelParams::new(delta, hop).with_omega_c(0.25);
            let a = dense_eigenvalues(&build_hamiltonian(&p, &b).unwrap());
            let s = dense_eigenvalues(&build_hamiltonian(&p.scaled(c), &b).unwrap());
            let scale = a.iter().fold(1.0f64, |m, x| m.max(x.abs()));
            for (x, y) in a.iter().zip(&s) {
                prop_assert!((c * x - y).abs() <= 1e-12 * c * scale * 10.0);
            }
        }
    }
}
