//! Lowest eigenpairs of a fixed-`N` Hamiltonian.
//!
//! Blocks up to [`DEFAULT_DENSE_THRESHOLD`] states go through a dense
//! tridiagonal/QL decomposition; larger ones use Lanczos with full
//! reorthogonalization. Both paths are exposed so they can be compared.

mod dense;
mod lanczos;

use crate::error::{Error, Result};
use crate::model::SparseHamiltonian;

/// Every block with `N ≤ 128` is small enough to diagonalize densely.
pub const DEFAULT_DENSE_THRESHOLD: usize = 512;

/// Relative gap below which the ground state is reported as degenerate.
pub const DEGENERACY_RTOL: f64 = 1e-9;

/// Amplitudes smaller than this are skipped when fixing the global sign.
const PHASE_CUTOFF: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Auto,
    Dense,
    Lanczos,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Method::Auto),
            "dense" => Ok(Method::Dense),
            "lanczos" => Ok(Method::Lanczos),
            other => Err(format!("unknown solver method `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub method: Method,
    pub dense_threshold: usize,
    /// Absolute residual tolerance `‖Hv − Ev‖`. `None` uses
    /// `1e-10 · max(1, ‖H‖)`.
    pub tol: Option<f64>,
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            method: Method::Auto,
            dense_threshold: DEFAULT_DENSE_THRESHOLD,
            tol: None,
            max_iter: 5000,
        }
    }
}

impl SolveOptions {
    pub fn dense() -> Self {
        Self {
            method: Method::Dense,
            ..Self::default()
        }
    }

    pub fn lanczos() -> Self {
        Self {
            method: Method::Lanczos,
            ..Self::default()
        }
    }

    fn uses_dense(&self, dim: usize) -> bool {
        match self.method {
            Method::Auto => dim <= self.dense_threshold,
            Method::Dense => true,
            Method::Lanczos => false,
        }
    }

    fn residual_tol(&self, h: &SparseHamiltonian) -> f64 {
        self.tol.unwrap_or(1e-10 * h.norm_bound().max(1.0))
    }
}

#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// One unit vector per eigenvalue.
    pub eigenvectors: Vec<Vec<f64>>,
    pub residual_norms: Vec<f64>,
}

impl EigenResult {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    /// Unit-norm amplitudes over the basis; first significant entry positive.
    pub vector: Vec<f64>,
    pub degenerate: bool,
    /// `E₁ − E₀`, infinite for a one-state block.
    pub gap_to_first_excited: f64,
}

fn residual(h: &SparseHamiltonian, value: f64, v: &[f64]) -> Result<f64> {
    let hv = h.apply(v)?;
    Ok(hv
        .iter()
        .zip(v)
        .map(|(a, b)| (a - value * b).powi(2))
        .sum::<f64>()
        .sqrt())
}

/// Flips `v` so its first amplitude above the cutoff is positive.
pub fn fix_phase(v: &mut [f64]) {
    if let Some(&first) = v.iter().find(|x| x.abs() > PHASE_CUTOFF) {
        if first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// All eigenpairs through the dense path.
pub fn full_spectrum(h: &SparseHamiltonian) -> Result<EigenResult> {
    let n = h.dim();
    if n == 0 {
        return Err(Error::InvalidParameter("empty Hamiltonian".into()));
    }
    let eig = dense::symmetric_eigen(&h.to_dense(), n)?;
    let emax = eig.values.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let tol = 1e-10 * emax;
    let mut vectors = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    for k in 0..n {
        let mut v = eig.vector(k);
        fix_phase(&mut v);
        let r = residual(h, eig.values[k], &v)?;
        if r > tol {
            return Err(Error::NoConvergence(format!(
                "dense eigenpair {k} has residual {r:.3e} > {tol:.3e}"
            )));
        }
        residuals.push(r);
        vectors.push(v);
    }
    Ok(EigenResult {
        eigenvalues: eig.values,
        eigenvectors: vectors,
        residual_norms: residuals,
    })
}

/// The `k` lowest eigenpairs in ascending order.
pub fn lowest_k(h: &SparseHamiltonian, k: usize, opts: &SolveOptions) -> Result<EigenResult> {
    lowest_k_with_width(h, k, opts).map(|(r, _)| r)
}

/// Also returns an estimate of the spectral width used for the degeneracy
/// test: exact on the dense path, `top Ritz value − E₀` for Lanczos.
fn lowest_k_with_width(
    h: &SparseHamiltonian,
    k: usize,
    opts: &SolveOptions,
) -> Result<(EigenResult, f64)> {
    let n = h.dim();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "requested {k} eigenpairs from a block of dimension {n}"
        )));
    }
    if opts.uses_dense(n) {
        let mut all = full_spectrum(h)?;
        let width = all.eigenvalues[n - 1] - all.eigenvalues[0];
        all.eigenvalues.truncate(k);
        all.eigenvectors.truncate(k);
        all.residual_norms.truncate(k);
        return Ok((all, width));
    }

    let tol = opts.residual_tol(h);
    let pairs = lanczos::lowest(h, k, tol, opts.max_iter)?;
    let top = pairs
        .iter()
        .map(|p| p.top_ritz)
        .fold(f64::NEG_INFINITY, f64::max);
    let width = top - pairs[0].value;
    let mut result = EigenResult {
        eigenvalues: Vec::with_capacity(k),
        eigenvectors: Vec::with_capacity(k),
        residual_norms: Vec::with_capacity(k),
    };
    for mut p in pairs {
        fix_phase(&mut p.vector);
        let r = residual(h, p.value, &p.vector)?;
        if r > tol {
            return Err(Error::NoConvergence(format!(
                "Lanczos pair at {:.6} has residual {r:.3e} > {tol:.3e}",
                p.value
            )));
        }
        result.eigenvalues.push(p.value);
        result.eigenvectors.push(p.vector);
        result.residual_norms.push(r);
    }
    Ok((result, width))
}

/// Lowest eigenpair with its gap and degeneracy flag.
pub fn ground_state(h: &SparseHamiltonian, opts: &SolveOptions) -> Result<GroundState> {
    let k = h.dim().min(2);
    let (mut low, width) = lowest_k_with_width(h, k, opts)?;
    let energy = low.eigenvalues[0];
    let gap = if k == 2 {
        low.eigenvalues[1] - energy
    } else {
        f64::INFINITY
    };
    let tol_deg = DEGENERACY_RTOL * width.max(1.0);
    Ok(GroundState {
        energy,
        vector: low.eigenvectors.swap_remove(0),
        degenerate: gap < tol_deg,
        gap_to_first_excited: gap,
    })
}
