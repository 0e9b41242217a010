//! Thick-restart Lanczos for the lowest eigenpairs of a real symmetric
//! operator.
//!
//! Every new Krylov vector is orthogonalized twice against the whole basis,
//! so the projected matrix is formed from the actual overlaps rather than
//! assumed tridiagonal. On restart the lowest Ritz vectors are kept together
//! with the residual direction. A Krylov space started from one vector holds
//! one direction per degenerate eigenspace, so after convergence the solver
//! re-runs in the complement of the found vectors to pick up missed copies.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::sparse::CsrMatrix;

pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        CsrMatrix::dim(self)
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.mul_vec(x, y)
    }
}

impl LinearOperator for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = (0..x.len()).map(|j| self[(i, j)] * x[j]).sum();
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Largest Krylov basis before a restart.
    pub max_basis: usize,
    pub max_restarts: usize,
    /// Residual tolerance relative to the largest Ritz value magnitude.
    pub tol: f64,
    pub seed: u64,
    /// Search the complement of converged vectors for missed degenerate copies.
    pub check_multiplicity: bool,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions { max_basis: 120, max_restarts: 400, tol: 1e-9, seed: 0x5eed, check_multiplicity: true }
    }
}

#[derive(Debug, Clone)]
pub struct Eigenpairs {
    /// Ascending.
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// `‖A x − λ x‖` for each pair.
    pub residuals: Vec<f64>,
    pub matvecs: usize,
    pub restarts: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn scale(v: &mut [f64], s: f64) {
    v.iter_mut().for_each(|x| *x *= s);
}

/// Two passes of classical Gram-Schmidt against `locked` and `basis`.
/// Returns the overlaps with `basis`.
fn orthogonalize(w: &mut [f64], locked: &[Vec<f64>], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut coeff = vec![0.0; basis.len()];
    for _ in 0..2 {
        for x in locked {
            let c = dot(x, w);
            axpy(-c, x, w);
        }
        let cs: Vec<f64> = basis.iter().map(|v| dot(v, w)).collect();
        for (v, &c) in basis.iter().zip(&cs) {
            axpy(-c, v, w);
        }
        coeff.iter_mut().zip(&cs).for_each(|(a, c)| *a += c);
    }
    coeff
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng, locked: &[Vec<f64>], basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    for _ in 0..8 {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        orthogonalize(&mut v, locked, basis);
        let nv = norm(&v);
        if nv > 1e-8 {
            scale(&mut v, 1.0 / nv);
            return Some(v);
        }
    }
    None
}

fn residual_norm<A: LinearOperator>(a: &A, x: &[f64], lambda: f64) -> f64 {
    let mut y = vec![0.0; x.len()];
    a.apply(x, &mut y);
    axpy(-lambda, x, &mut y);
    norm(&y)
}

/// Lowest `k` eigenpairs of `a`, orthogonal to `locked`.
fn restarted_lanczos<A: LinearOperator>(
    a: &A,
    k: usize,
    locked: &[Vec<f64>],
    opts: &LanczosOptions,
    rng: &mut ChaCha8Rng,
) -> Result<Eigenpairs> {
    let n = a.dim();
    let space = n - locked.len();
    let m = opts.max_basis.max(k + 2).min(space);
    let keep = (k + (m - k) / 3).min(m.saturating_sub(2)).max(k.min(m));
    let mut matvecs = 0;
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    let start = random_unit(n, rng, locked, &[])
        .ok_or_else(|| Error::InvalidParameter("no start vector outside the locked space".into()))?;
    basis.push(start);
    let mut t = DMatrix::<f64>::zeros(m, m);
    let mut first = 0;
    let mut w = vec![0.0; n];

    for restart in 0..=opts.max_restarts {
        let mut beta = 0.0;
        for j in first..m {
            a.apply(&basis[j], &mut w);
            matvecs += 1;
            let c = orthogonalize(&mut w, locked, &basis);
            for (i, &ci) in c.iter().enumerate() {
                t[(i, j)] = ci;
                t[(j, i)] = ci;
            }
            beta = norm(&w);
            if j + 1 < m {
                let next = if beta > 1e-12 * t[(j, j)].abs().max(1e-300) {
                    w.iter().map(|x| x / beta).collect()
                } else {
                    beta = 0.0;
                    match random_unit(n, rng, locked, &basis) {
                        Some(v) => v,
                        None => break,
                    }
                };
                basis.push(next);
            }
        }
        let size = basis.len();
        let eig = SymmetricEigen::new(t.view((0, 0), (size, size)).into_owned());
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
        let theta: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let y = DMatrix::from_fn(size, size, |r, c| eig.eigenvectors[(r, order[c])]);
        let spread = theta.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(f64::MIN_POSITIVE);
        let tol = opts.tol * spread;
        let want = k.min(size);
        let estimates: Vec<f64> = (0..want).map(|i| (beta * y[(size - 1, i)]).abs()).collect();

        let exhausted = size == space;
        if exhausted || estimates.iter().all(|&e| e <= tol) {
            let vectors: Vec<Vec<f64>> = (0..want)
                .map(|i| {
                    let mut x = vec![0.0; n];
                    for (r, v) in basis.iter().enumerate() {
                        axpy(y[(r, i)], v, &mut x);
                    }
                    let nx = norm(&x);
                    scale(&mut x, 1.0 / nx);
                    x
                })
                .collect();
            let values: Vec<f64> = theta[..want].to_vec();
            let residuals: Vec<f64> = vectors.iter().zip(&values).map(|(x, &l)| residual_norm(a, x, l)).collect();
            matvecs += want;
            if exhausted || residuals.iter().all(|&r| r <= tol) {
                return Ok(Eigenpairs { values, vectors, residuals, matvecs, restarts: restart });
            }
        }

        // Thick restart: lowest Ritz vectors plus the residual direction.
        let p = keep.min(size - 1);
        let mut kept: Vec<Vec<f64>> = (0..p)
            .map(|i| {
                let mut x = vec![0.0; n];
                for (r, v) in basis.iter().enumerate() {
                    axpy(y[(r, i)], v, &mut x);
                }
                x
            })
            .collect();
        let next = if beta > 0.0 {
            let mut r: Vec<f64> = w.iter().map(|x| x / beta).collect();
            orthogonalize(&mut r, locked, &kept);
            let nr = norm(&r);
            scale(&mut r, 1.0 / nr);
            Some(r)
        } else {
            None
        };
        let next = match next {
            Some(v) if v.iter().all(|x| x.is_finite()) => v,
            _ => random_unit(n, rng, locked, &kept)
                .ok_or_else(|| Error::InvalidParameter("Krylov space exhausted".into()))?,
        };
        t.fill(0.0);
        for i in 0..p {
            t[(i, i)] = theta[i];
        }
        kept.push(next);
        basis = kept;
        first = p;
    }
    Err(Error::NotConverged { what: "Lanczos eigenpairs", evaluations: matvecs, residual: f64::NAN })
}

/// Lowest `k` eigenpairs of a real symmetric operator.
pub fn lowest_eigenpairs<A: LinearOperator>(a: &A, k: usize, opts: &LanczosOptions) -> Result<Eigenpairs> {
    let n = a.dim();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("requested {k} eigenpairs of a {n}-dimensional operator")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut found = restarted_lanczos(a, k, &[], opts, &mut rng)?;
    if !opts.check_multiplicity {
        return Ok(found);
    }
    // Look for eigenvalues below the current k-th in the complement.
    loop {
        if found.vectors.len() >= n {
            return Ok(found);
        }
        let extra = restarted_lanczos(a, 1, &found.vectors, opts, &mut rng)?;
        found.matvecs += extra.matvecs;
        let top = *found.values.last().unwrap();
        let scale = found.values.iter().chain(&extra.values).fold(0.0f64, |s, v| s.max(v.abs()));
        if extra.values[0] >= top - opts.tol * scale {
            return Ok(found);
        }
        let pos = found.values.partition_point(|&v| v <= extra.values[0]);
        found.values.insert(pos, extra.values[0]);
        found.vectors.insert(pos, extra.vectors[0].clone());
        found.residuals.insert(pos, extra.residuals[0]);
        found.values.truncate(k);
        found.vectors.truncate(k);
        found.residuals.truncate(k);
    }
}
