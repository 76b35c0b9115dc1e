use faer::linalg::solvers::Solve;
use faer::linalg::triangular_solve::solve_lower_triangular_in_place;
use faer::{Mat, Par, Side};

use crate::sparse::CsrMatrix;

use super::SolverError;

/// Blocks defining the discrete inf-sup quotient
/// `sup_τ [(div τ, v) + (τ, q)] / (‖τ‖_div ‖(v, q)‖)`.
#[derive(Clone, Debug)]
pub struct InfSupBlocks {
    pub b: CsrMatrix<f64>,
    pub c: CsrMatrix<f64>,
    /// L² Gram matrix of the stress space.
    pub gram: CsrMatrix<f64>,
    /// `(div φ_i, div φ_j)`.
    pub div_div: CsrMatrix<f64>,
    pub mass_v: CsrMatrix<f64>,
    pub mass_q: CsrMatrix<f64>,
}

const CHUNK: usize = 256;

/// Smallest generalized singular value of `[B; C]` between the H(div) norm on the
/// stresses and the L² norm on displacement × rotation.
pub fn infsup_estimate(blocks: &InfSupBlocks) -> Result<f64, SolverError> {
    let l = CsrMatrix::vstack(&[&blocks.b, &blocks.c]);
    let (m, ns) = (l.nrows(), l.ncols());
    if blocks.gram.nrows() != ns || blocks.div_div.nrows() != ns {
        return Err(SolverError::InvalidInput("stress norm blocks do not match [B; C]".into()));
    }
    if blocks.mass_v.nrows() + blocks.mass_q.nrows() != m {
        return Err(SolverError::InvalidInput("multiplier mass blocks do not match [B; C]".into()));
    }
    let mut h = crate::sparse::TripletBuilder::new(ns, ns, crate::sparse::Merge::Add);
    for blk in [&blocks.gram, &blocks.div_div] {
        for (r, c, v) in blk.triplets() {
            h.push(r, c, *v);
        }
    }
    let hchol = h
        .build()
        .to_faer()
        .sp_cholesky(Side::Lower)
        .map_err(|e| SolverError::Factorization(format!("stress norm matrix is not positive definite: {e:?}")))?;

    // S = L H⁻¹ Lᵀ, built a block of columns at a time
    let mut s = Mat::<f64>::zeros(m, m);
    let mut start = 0;
    while start < m {
        let end = (start + CHUNK).min(m);
        let mut rhs = Mat::<f64>::zeros(ns, end - start);
        for (j, col) in (start..end).enumerate() {
            for (r, v) in l.row(col) {
                rhs[(r, j)] = *v;
            }
        }
        let x = hchol.solve(&rhs);
        for i in 0..m {
            for (c, v) in l.row(i) {
                for j in 0..end - start {
                    s[(i, start + j)] += v * x[(c, j)];
                }
            }
        }
        start = end;
    }

    let mut mass = Mat::<f64>::zeros(m, m);
    let nv = blocks.mass_v.nrows();
    for (r, c, v) in blocks.mass_v.triplets() {
        mass[(r, c)] = *v;
    }
    for (r, c, v) in blocks.mass_q.triplets() {
        mass[(nv + r, nv + c)] = *v;
    }
    let llt = mass
        .llt(Side::Lower)
        .map_err(|e| SolverError::Factorization(format!("multiplier mass matrix is not positive definite: {e:?}")))?;
    let lm = llt.L();
    // T = Lm⁻¹ S Lm⁻ᵀ
    solve_lower_triangular_in_place(lm, s.as_mut(), Par::rayon(0));
    let mut t = s.transpose().to_owned();
    solve_lower_triangular_in_place(lm, t.as_mut(), Par::rayon(0));
    let sym = Mat::from_fn(m, m, |i, j| 0.5 * (t[(i, j)] + t[(j, i)]));
    let eig = sym
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| SolverError::Factorization(format!("{e:?}")))?;
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(min.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{assemble_compliance, assemble_div, assemble_div_div, assemble_mass, assemble_skw, Material, MixedSpaces};
    use crate::mesh::build_box_mesh;
    use std::sync::Arc;

    #[test]
    fn positive_and_monotone_in_constraints() {
        let s = MixedSpaces::new(Arc::new(build_box_mesh(1).unwrap()), 0, false).unwrap();
        let blocks = InfSupBlocks {
            b: assemble_div(&s.sigma, &s.u).unwrap(),
            c: assemble_skw(&s.sigma, &s.p).unwrap(),
            gram: assemble_compliance(&s.sigma, &Material::isotropic(0.0, 0.5).unwrap(), None).unwrap(),
            div_div: assemble_div_div(&s.sigma).unwrap(),
            mass_v: assemble_mass(&s.u).unwrap(),
            mass_q: assemble_mass(&s.p).unwrap(),
        };
        let beta = infsup_estimate(&blocks).unwrap();
        assert!(beta > 1e-3, "beta = {beta}");
        let div_only = InfSupBlocks {
            c: CsrMatrix::zeros(0, blocks.b.ncols()),
            mass_q: CsrMatrix::zeros(0, 0),
            ..blocks
        };
        assert!(infsup_estimate(&div_only).unwrap() >= beta - 1e-12);
    }
}
