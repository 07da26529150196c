//! Lanczos iteration with full reorthogonalization and explicit locking.
//!
//! Each converged Ritz pair is locked and the next run is restricted to the
//! orthogonal complement of everything locked so far, so a single-vector
//! Krylov space still resolves degenerate eigenvalues one at a time.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dense::tridiagonal_eigen;
use crate::error::{Error, Result};
use crate::model::{dot, SparseHamiltonian};

pub(crate) struct RitzPair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// Largest Ritz value seen; a lower bound on the top of the spectrum.
    pub top_ritz: f64,
}

const START_SEED: u64 = 0x4a43_4855;

/// Breakdown threshold for `β`, relative to the spectral scale.
const BREAKDOWN: f64 = 1e-13;

/// Lowest `k` eigenpairs, sorted ascending.
pub(crate) fn lowest(
    h: &SparseHamiltonian,
    k: usize,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<RitzPair>> {
    let n = h.dim();
    let mut locked: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut pairs = Vec::with_capacity(k);
    for run in 0..k {
        let pair = lowest_in_complement(h, &locked, tol, max_iter, START_SEED + run as u64)?;
        locked.push(pair.vector.clone());
        pairs.push(pair);
        if locked.len() == n {
            break;
        }
    }
    pairs.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(pairs)
}

fn orthogonalize(w: &mut [f64], against: &[Vec<f64>]) {
    // Two passes of classical Gram-Schmidt.
    for _ in 0..2 {
        for q in against {
            let c = dot(w, q);
            w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
        }
    }
}

fn normalize(w: &mut [f64]) -> f64 {
    let norm = dot(w, w).sqrt();
    if norm > 0.0 {
        w.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

fn lowest_in_complement(
    h: &SparseHamiltonian,
    locked: &[Vec<f64>],
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<RitzPair> {
    let n = h.dim();
    let available = n - locked.len();
    let scale = h.norm_bound().max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut q: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    orthogonalize(&mut q, locked);
    if normalize(&mut q) <= BREAKDOWN {
        return Err(Error::NoConvergence(
            "starting vector lies in the locked subspace".into(),
        ));
    }

    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let steps = max_iter.min(available).max(1);

    for j in 0..steps {
        h.apply_into(&basis[j], &mut w);
        let a = dot(&w, &basis[j]);
        alpha.push(a);
        w.iter_mut().zip(&basis[j]).for_each(|(x, y)| *x -= a * y);
        if j > 0 {
            let b = beta[j - 1];
            w.iter_mut()
                .zip(&basis[j - 1])
                .for_each(|(x, y)| *x -= b * y);
        }
        orthogonalize(&mut w, locked);
        orthogonalize(&mut w, &basis);
        let b = dot(&w, &w).sqrt();

        let ritz = tridiagonal_eigen(&alpha, &beta)?;
        let m = alpha.len();
        let estimate = b * ritz.vectors[(m - 1) * m].abs();
        let exhausted = b <= BREAKDOWN * scale || m == steps;

        if estimate <= 0.1 * tol || exhausted {
            let coeffs: Vec<f64> = (0..m).map(|i| ritz.vectors[i * m]).collect();
            let mut y = vec![0.0; n];
            for (c, v) in coeffs.iter().zip(&basis) {
                y.iter_mut().zip(v).for_each(|(acc, x)| *acc += c * x);
            }
            orthogonalize(&mut y, locked);
            normalize(&mut y);
            let value = ritz.values[0];
            let hy = h.apply(&y)?;
            let residual = hy
                .iter()
                .zip(&y)
                .map(|(p, q)| (p - value * q).powi(2))
                .sum::<f64>()
                .sqrt();
            if residual <= tol {
                return Ok(RitzPair {
                    value,
                    vector: y,
                    top_ritz: *ritz.values.last().unwrap(),
                });
            }
            if exhausted {
                return Err(Error::NoConvergence(format!(
                    "Lanczos exhausted after {m} steps with residual {residual:.3e} > {tol:.3e}"
                )));
            }
        }

        beta.push(b);
        w.iter_mut().for_each(|x| *x /= b);
        basis.push(w.clone());
    }
    unreachable!("loop returns on the final step")
}
