//! Direct solution of the saddle-point system, rank utilities and inf-sup estimates.

mod infsup;
mod rank;

use faer::linalg::solvers::Solve;
use faer::Mat;
use thiserror::Error;

use crate::assembly::BlockSystem;
use crate::sparse::CsrMatrix;

pub use infsup::{infsup_estimate, InfSupBlocks};
pub use rank::{exact_rank, matrix_rank, singular_values, RANK_TOL};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("factorization failed: {0}")]
    Factorization(String),
    #[error("matrix is singular or nearly so: relative residual {residual:e} after {steps} refinement steps")]
    Singular { residual: f64, steps: usize },
    #[error("{0}")]
    InvalidInput(String),
}

/// Relative residual accepted by [`solve_saddle`].
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_REFINEMENT: usize = 3;

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub sigma: Vec<f64>,
    pub u: Vec<f64>,
    pub p: Vec<f64>,
    /// `‖Kx − b‖ / ‖b‖`, or `‖Kx‖` when `b = 0`.
    pub residual: f64,
    /// `max_i |(σ_h, q_i)| / (‖q_i‖ ‖σ_h‖)` over the rotation basis.
    pub weak_symmetry: f64,
    pub refinement_steps: usize,
    pub unknowns: usize,
    pub nonzeros: usize,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn residual(k: &CsrMatrix<f64>, x: &[f64], b: &[f64]) -> Vec<f64> {
    k.mul_vec(x).iter().zip(b).map(|(kx, bi)| bi - kx).collect()
}

/// Sparse LU with partial pivoting followed by iterative refinement.
pub fn solve_saddle(system: &BlockSystem, tol: f64) -> Result<SolveReport, SolverError> {
    let k = &system.matrix;
    let n = k.nrows();
    if system.rhs.len() != n {
        return Err(SolverError::InvalidInput(format!(
            "right-hand side has length {} for a system of size {n}",
            system.rhs.len()
        )));
    }
    let lu = k
        .to_faer()
        .sp_lu()
        .map_err(|e| SolverError::Factorization(format!("{e:?}")))?;
    let solve = |r: &[f64]| -> Vec<f64> {
        let rhs = Mat::from_fn(n, 1, |i, _| r[i]);
        let x = lu.solve(&rhs);
        (0..n).map(|i| x[(i, 0)]).collect()
    };
    let bnorm = norm(&system.rhs);
    let scale = if bnorm > 0.0 { bnorm } else { 1.0 };
    let mut x = solve(&system.rhs);
    let mut res = norm(&residual(k, &x, &system.rhs)) / scale;
    let mut steps = 0;
    while steps < MAX_REFINEMENT && !(res <= tol * 1e-3) {
        let r = residual(k, &x, &system.rhs);
        let dx = solve(&r);
        let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + b).collect();
        let trial_res = norm(&residual(k, &trial, &system.rhs)) / scale;
        steps += 1;
        if !(trial_res < res) {
            break;
        }
        x = trial;
        res = trial_res;
    }
    log::debug!("solve: n = {n}, nnz = {}, residual = {res:e}, refinement steps = {steps}", k.nnz());
    if !(res <= tol) {
        return Err(SolverError::Singular { residual: res, steps });
    }
    let [_, o1, o2, o3] = system.offsets;
    let (sigma, u, p) = (x[..o1].to_vec(), x[o1..o2].to_vec(), x[o2..o3].to_vec());
    let weak_symmetry = weak_symmetry_residual(&system.c, &system.sigma_gram, &system.q_mass, &sigma);
    Ok(SolveReport {
        sigma,
        u,
        p,
        residual: res,
        weak_symmetry,
        refinement_steps: steps,
        unknowns: n,
        nonzeros: k.nnz(),
    })
}

/// Largest normalized pairing of `σ_h` with a rotation basis function.
pub fn weak_symmetry_residual(c: &CsrMatrix<f64>, gram: &CsrMatrix<f64>, q_mass: &CsrMatrix<f64>, sigma: &[f64]) -> f64 {
    let gs = gram.mul_vec(sigma);
    let snorm = sigma.iter().zip(&gs).map(|(a, b)| a * b).sum::<f64>().max(0.0).sqrt();
    if snorm == 0.0 {
        return 0.0;
    }
    c.mul_vec(sigma)
        .iter()
        .enumerate()
        .map(|(i, v)| v.abs() / (q_mass.get(i, i).sqrt() * snorm))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{assemble_system, Loads, Material, MixedSpaces};
    use crate::mesh::build_box_mesh;
    use std::sync::Arc;

    #[test]
    fn zero_load_gives_zero_solution() {
        let s = MixedSpaces::new(Arc::new(build_box_mesh(1).unwrap()), 0, false).unwrap();
        let zero = |_: &[f64; 3]| [0.0; 3];
        let sys = assemble_system(&s, &Material::isotropic(1.0, 1.0).unwrap(), Loads { body: &zero, boundary: None }).unwrap();
        let rep = solve_saddle(&sys, DEFAULT_TOL).unwrap();
        assert!(rep.sigma.iter().chain(&rep.u).chain(&rep.p).all(|v| *v == 0.0));
        assert_eq!(rep.weak_symmetry, 0.0);
    }

    #[test]
    fn constant_load_solves_with_weak_symmetry() {
        let s = MixedSpaces::new(Arc::new(build_box_mesh(2).unwrap()), 0, false).unwrap();
        let f = |_: &[f64; 3]| [1.0, -2.0, 0.5];
        let sys = assemble_system(&s, &Material::isotropic(1.0, 1.0).unwrap(), Loads { body: &f, boundary: None }).unwrap();
        let rep = solve_saddle(&sys, DEFAULT_TOL).unwrap();
        assert!(rep.residual < 1e-12);
        assert!(rep.weak_symmetry < 1e-10);
    }

    #[test]
    fn singular_system_is_reported() {
        let s = MixedSpaces::new(Arc::new(build_box_mesh(1).unwrap()), 0, false).unwrap();
        let f = |_: &[f64; 3]| [1.0, 0.0, 0.0];
        let mut sys = assemble_system(&s, &Material::isotropic(1.0, 1.0).unwrap(), Loads { body: &f, boundary: None }).unwrap();
        // drop the coupling to the rotations: the p block becomes a zero row block
        let [_, _, o2, _] = sys.offsets;
        let mut t = crate::sparse::TripletBuilder::new(sys.matrix.nrows(), sys.matrix.ncols(), crate::sparse::Merge::Add);
        for (r, c, v) in sys.matrix.triplets() {
            if r < o2 && c < o2 {
                t.push(r, c, *v);
            }
        }
        sys.matrix = t.build();
        assert!(solve_saddle(&sys, DEFAULT_TOL).is_err());
    }
}
