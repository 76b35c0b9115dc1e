//! Coupling blocks in exact arithmetic, integrating polynomial products on each cell.

use rayon::prelude::*;

use crate::fespace::FeSpace;
use crate::linalg::Dense;
use crate::polyform::{Poly, PolyForm, Scalar, ValueSpace};
use crate::sparse::{CsrMatrix, Merge, TripletBuilder};

use super::AssemblyError;

/// Shapes of cell `t` with physical form bases, coefficients left in reference variables.
fn physical_shapes<T: Scalar>(space: &FeSpace<T>, t: usize, derivative: bool) -> Result<Vec<PolyForm<T>>, AssemblyError> {
    let inv = &space.geometry(t).inverse;
    space
        .element(t)
        .shapes()
        .into_iter()
        .map(|s| {
            let s = if derivative { s.d().map_err(crate::fespace::FeError::from)? } else { s };
            Ok(s.transform_frame(inv))
        })
        .collect()
}

fn integrate_product<T: Scalar>(pairs: impl Iterator<Item = (T, Poly<T>, Poly<T>)>) -> T {
    let mut acc: Option<Poly<T>> = None;
    for (w, a, b) in pairs {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let prod = a.mul(&b).scale(&w);
        acc = Some(match acc {
            Some(p) => p.add(&prod),
            None => prod,
        });
    }
    acc.map_or_else(T::zero, |p| p.integrate_simplex())
}

fn assemble<T: Scalar>(
    rows: &FeSpace<T>,
    cols: &FeSpace<T>,
    local: impl Fn(usize) -> Result<Dense<T>, AssemblyError> + Sync,
) -> Result<CsrMatrix<T>, AssemblyError> {
    let blocks: Vec<Dense<T>> = (0..rows.num_cells()).into_par_iter().map(&local).collect::<Result<_, _>>()?;
    let mut b = TripletBuilder::new(rows.dim(), cols.dim(), Merge::Add);
    for (t, block) in blocks.iter().enumerate() {
        b.push_block(rows.dofs().cell(t), cols.dofs().cell(t), block);
    }
    Ok(b.build())
}

/// `B[i][j] = (div φ_j, ψ_i)` computed exactly.
pub fn div_matrix<T: Scalar>(sigma: &FeSpace<T>, v: &FeSpace<T>) -> Result<CsrMatrix<T>, AssemblyError> {
    assemble(v, sigma, |t| {
        let jac = sigma.geometry(t).abs_det();
        let ds = physical_shapes(sigma, t, true)?;
        let ps = physical_shapes(v, t, false)?;
        Ok(ps
            .iter()
            .map(|psi| {
                ds.iter()
                    .map(|d| {
                        let pairs = (0..3).map(|c| (T::one(), psi.coeff(c, 0).clone(), d.coeff(c, 0).clone()));
                        integrate_product(pairs) * jac.clone()
                    })
                    .collect()
            })
            .collect())
    })
}

/// `C[i][j] = (φ_j, q_i)` computed exactly, `q` a K-valued 3-form.
pub fn skw_matrix<T: Scalar>(sigma: &FeSpace<T>, q: &FeSpace<T>) -> Result<CsrMatrix<T>, AssemblyError> {
    if q.spec().values != ValueSpace::K {
        return Err(AssemblyError::Incompatible(format!("{} is not a rotation space", q.spec())));
    }
    assemble(q, sigma, |t| {
        let jac = sigma.geometry(t).abs_det();
        let ss = physical_shapes(sigma, t, false)?;
        let qs = physical_shapes(q, t, false)?;
        Ok(qs
            .iter()
            .map(|qi| {
                ss.iter()
                    .map(|s| {
                        // proxy row r of a V-valued 2-form is [a12, −a02, a01]
                        let f = |r: usize, c: usize| -> (T, Poly<T>) {
                            match c {
                                0 => (T::one(), s.coeff(r, 2).clone()),
                                1 => (-T::one(), s.coeff(r, 1).clone()),
                                _ => (T::one(), s.coeff(r, 0).clone()),
                            }
                        };
                        let skew = [(2, 1, 1, 2), (0, 2, 2, 0), (1, 0, 0, 1)];
                        let pairs = skew.iter().enumerate().flat_map(|(k, &(a, b, c, d))| {
                            let (s1, p1) = f(a, b);
                            let (s2, p2) = f(c, d);
                            let w = qi.coeff(k, 0).clone();
                            [(s1, w.clone(), p1), (-s2, w, p2)]
                        });
                        integrate_product(pairs) * jac.clone()
                    })
                    .collect()
            })
            .collect())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fespace::SpaceSpec;
    use crate::mesh::build_box_mesh;
    use crate::polyform::Rational;
    use std::sync::Arc;

    #[test]
    fn exact_blocks_match_quadrature() {
        let mesh = Arc::new(build_box_mesh(1).unwrap());
        let s = SpaceSpec::p(1, 2, ValueSpace::V);
        let v = SpaceSpec::p(0, 3, ValueSpace::V);
        let q = SpaceSpec::p(0, 3, ValueSpace::K);
        let (se, ve, qe) = (
            FeSpace::<Rational>::new(mesh.clone(), s).unwrap(),
            FeSpace::<Rational>::new(mesh.clone(), v).unwrap(),
            FeSpace::<Rational>::new(mesh.clone(), q).unwrap(),
        );
        let (sf, vf, qf) = (
            FeSpace::<f64>::new(mesh.clone(), s).unwrap(),
            FeSpace::<f64>::new(mesh.clone(), v).unwrap(),
            FeSpace::<f64>::new(mesh, q).unwrap(),
        );
        let be = div_matrix(&se, &ve).unwrap().to_f64().to_dense();
        let bf = super::super::assemble_div(&sf, &vf).unwrap().to_dense();
        let ce = skw_matrix(&se, &qe).unwrap().to_f64().to_dense();
        let cf = super::super::assemble_skw(&sf, &qf).unwrap().to_dense();
        for (x, y) in be.iter().flatten().zip(bf.iter().flatten()).chain(ce.iter().flatten().zip(cf.iter().flatten())) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
    }
}
