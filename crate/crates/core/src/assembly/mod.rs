//! Quadrature and assembly of the weak-symmetry saddle-point system.
//!
//! Unknowns are the stress `σ_h` (a V-valued 2-form), the displacement `u_h`
//! (a V-valued 3-form) and the rotation `p_h` (a K-valued 3-form). The system is
//!
//! ```text
//! (Aσ, τ) + (u, div τ) + (p, τ) = ∫_∂Ω g · τn
//! (div σ, v)                    = (f, v)
//! (σ, q)                        = 0
//! ```

pub mod exact;
pub mod material;
pub mod quadrature;

use rayon::prelude::*;
use thiserror::Error;

use crate::fespace::{FeError, FeSpace, LocalBasis, SpaceSpec};
use crate::linalg::Dense;
use crate::mesh::REF_FACES;
use crate::polyform::{cross, dot, Mat3, PolyForm, ValueSpace};
use crate::sparse::{CsrMatrix, Merge, TripletBuilder};

pub use material::{ComplianceFn, Material};
pub use quadrature::{quadrature_rule, simplex_rule, QuadratureRule};

#[derive(Debug, Error)]
pub enum AssemblyError {
    #[error("no quadrature rule of degree {0} (at most {max})", max = quadrature::MAX_DEGREE)]
    QuadratureDegree(usize),
    #[error("no quadrature rule on simplices of dimension {0}")]
    QuadratureDimension(usize),
    #[error("invalid material: {0}")]
    Material(String),
    #[error("{0}")]
    Incompatible(String),
    #[error(transparent)]
    Space(#[from] FeError),
}

/// A vector field evaluated pointwise.
pub type VectorFn<'a> = &'a (dyn Fn(&[f64; 3]) -> [f64; 3] + Sync);

/// Parent shape coefficients (and optionally their exterior derivatives) at the points of a rule.
#[derive(Clone, Debug)]
pub struct Tabulation {
    pub values: Vec<Vec<Vec<f64>>>,
    pub derivs: Vec<Vec<Vec<f64>>>,
}

pub fn tabulate(parent: &LocalBasis<f64>, points: &[[f64; 3]], with_d: bool) -> Tabulation {
    let dshapes: Vec<PolyForm<f64>> = if with_d {
        parent.shapes.iter().map(|s| s.d().expect("form degree below 3")).collect()
    } else {
        Vec::new()
    };
    Tabulation {
        values: points
            .iter()
            .map(|p| parent.shapes.iter().map(|s| s.eval_coeffs(p)).collect())
            .collect(),
        derivs: points
            .iter()
            .map(|p| dshapes.iter().map(|s| s.eval_coeffs(p)).collect())
            .collect(),
    }
}

/// Physical shape coefficients on one cell at the points of a rule.
#[derive(Clone, Debug)]
pub struct CellValues {
    pub points: Vec<[f64; 3]>,
    /// Quadrature weights scaled by the cell volume factor.
    pub weights: Vec<f64>,
    /// `values[q][i]`: coefficients of shape `i` at point `q`.
    pub values: Vec<Vec<Vec<f64>>>,
    pub derivs: Vec<Vec<Vec<f64>>>,
}

fn combine_rows(combo: Option<&Dense<f64>>, parent: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let Some(combo) = combo else { return parent };
    combo
        .iter()
        .map(|row| {
            let mut out = vec![0.0; parent.first().map_or(0, |p| p.len())];
            for (c, p) in row.iter().zip(&parent) {
                if *c != 0.0 {
                    for (o, v) in out.iter_mut().zip(p) {
                        *o += c * v;
                    }
                }
            }
            out
        })
        .collect()
}

/// Push tabulated parent values forward to cell `t`.
pub fn cell_values(space: &FeSpace<f64>, t: usize, rule: &QuadratureRule, tab: &Tabulation) -> CellValues {
    let geo = space.geometry(t);
    let spec = space.spec();
    let ncomp = spec.values.dim();
    let combo = space.element(t).combo();
    let jac = geo.abs_det();
    let push = |rows: &[Vec<f64>], k: usize| -> Vec<Vec<f64>> {
        let phys = rows.iter().map(|c| geo.push_forward_coeffs(c, k, ncomp)).collect();
        combine_rows(combo, phys)
    };
    CellValues {
        points: rule.points.iter().map(|p| geo.to_physical(p)).collect(),
        weights: rule.weights.iter().map(|w| w * jac).collect(),
        values: tab.values.iter().map(|v| push(v, spec.k)).collect(),
        derivs: tab.derivs.iter().map(|v| push(v, spec.k + 1)).collect(),
    }
}

/// Matrix proxy `F` of a V-valued 2-form: `μ(v₁, v₂) = F(v₁ × v₂)`.
pub fn stress_proxy(c: &[f64]) -> Mat3<f64> {
    std::array::from_fn(|r| [c[3 * r + 2], -c[3 * r + 1], c[3 * r]])
}

/// `F : vect⁻¹(w)`.
pub fn skew_pairing(f: &Mat3<f64>, w: &[f64]) -> f64 {
    w[0] * (f[2][1] - f[1][2]) + w[1] * (f[0][2] - f[2][0]) + w[2] * (f[1][0] - f[0][1])
}

fn frobenius(a: &Mat3<f64>, b: &Mat3<f64>) -> f64 {
    (0..3).map(|i| (0..3).map(|j| a[i][j] * b[i][j]).sum::<f64>()).sum()
}

/// L² inner product of proxies; K values carry the skew-matrix weight 2.
fn proxy_dot(values: ValueSpace, a: &[f64], b: &[f64]) -> f64 {
    let w = if values == ValueSpace::K { 2.0 } else { 1.0 };
    w * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()
}

/// Default rule degree for products of two fields of the given polynomial degrees.
pub fn product_degree(a: usize, b: usize) -> usize {
    (a + b + 2).min(quadrature::MAX_DEGREE)
}

/// Assemble `Σ_T local(T)` over cells in parallel, merged in cell order.
fn assemble_cells(
    rows: &FeSpace<f64>,
    cols: &FeSpace<f64>,
    local: impl Fn(usize) -> Dense<f64> + Sync,
) -> CsrMatrix<f64> {
    let blocks: Vec<Dense<f64>> = (0..rows.num_cells()).into_par_iter().map(&local).collect();
    let mut b = TripletBuilder::new(rows.dim(), cols.dim(), Merge::Add);
    for (t, block) in blocks.iter().enumerate() {
        b.push_block(rows.dofs().cell(t), cols.dofs().cell(t), block);
    }
    b.build()
}

fn rule_and_tab(space: &FeSpace<f64>, degree: usize, with_d: bool) -> Result<(std::sync::Arc<QuadratureRule>, Tabulation), AssemblyError> {
    let rule = quadrature_rule(degree)?;
    let tab = tabulate(space.element(0).parent(), &rule.points, with_d);
    Ok((rule, tab))
}

/// L² Gram matrix of the proxies of a space.
pub fn assemble_mass(space: &FeSpace<f64>) -> Result<CsrMatrix<f64>, AssemblyError> {
    let deg = space.spec().poly_degree();
    let (rule, tab) = rule_and_tab(space, product_degree(deg, deg), false)?;
    let values = space.spec().values;
    Ok(assemble_cells(space, space, |t| {
        let cv = cell_values(space, t, &rule, &tab);
        let n = space.element(t).len();
        let mut m = vec![vec![0.0; n]; n];
        for (q, w) in cv.weights.iter().enumerate() {
            let v = &cv.values[q];
            for i in 0..n {
                for j in i..n {
                    m[i][j] += w * proxy_dot(values, &v[i], &v[j]);
                }
            }
        }
        symmetrize(m)
    }))
}

fn symmetrize(mut m: Dense<f64>) -> Dense<f64> {
    for i in 0..m.len() {
        for j in 0..i {
            m[i][j] = m[j][i];
        }
    }
    m
}

fn check_stress(space: &FeSpace<f64>) -> Result<(), AssemblyError> {
    let s = space.spec();
    if s.k != 2 || s.values != ValueSpace::V {
        return Err(AssemblyError::Incompatible(format!("{s} is not a stress space")));
    }
    Ok(())
}

/// `(Aφ_i, φ_j)` over the stress space.
pub fn assemble_compliance(sigma: &FeSpace<f64>, material: &Material, degree: Option<usize>) -> Result<CsrMatrix<f64>, AssemblyError> {
    check_stress(sigma)?;
    let deg = sigma.spec().poly_degree();
    let (rule, tab) = rule_and_tab(sigma, degree.unwrap_or(product_degree(deg, deg)), false)?;
    Ok(assemble_cells(sigma, sigma, |t| {
        let cv = cell_values(sigma, t, &rule, &tab);
        let n = sigma.element(t).len();
        let mut m = vec![vec![0.0; n]; n];
        for (q, w) in cv.weights.iter().enumerate() {
            let f: Vec<Mat3<f64>> = cv.values[q].iter().map(|c| stress_proxy(c)).collect();
            let af: Vec<Mat3<f64>> = f.iter().map(|fi| material.apply(&cv.points[q], fi)).collect();
            for i in 0..n {
                for j in i..n {
                    m[i][j] += w * frobenius(&af[i], &f[j]);
                }
            }
        }
        symmetrize(m)
    }))
}

/// `(div φ_i, div φ_j)` over the stress space.
pub fn assemble_div_div(sigma: &FeSpace<f64>) -> Result<CsrMatrix<f64>, AssemblyError> {
    check_stress(sigma)?;
    let deg = sigma.spec().poly_degree();
    let (rule, tab) = rule_and_tab(sigma, product_degree(deg, deg), true)?;
    Ok(assemble_cells(sigma, sigma, |t| {
        let cv = cell_values(sigma, t, &rule, &tab);
        let n = sigma.element(t).len();
        let mut m = vec![vec![0.0; n]; n];
        for (q, w) in cv.weights.iter().enumerate() {
            let d = &cv.derivs[q];
            for i in 0..n {
                for j in i..n {
                    m[i][j] += w * dot(&d[i], &d[j]);
                }
            }
        }
        symmetrize(m)
    }))
}

/// `B[i][j] = (div φ_j, ψ_i)` with `ψ` spanning the displacement space.
pub fn assemble_div(sigma: &FeSpace<f64>, v: &FeSpace<f64>) -> Result<CsrMatrix<f64>, AssemblyError> {
    check_stress(sigma)?;
    if v.spec().k != 3 || v.spec().values != ValueSpace::V {
        return Err(AssemblyError::Incompatible(format!("{} is not a displacement space", v.spec())));
    }
    let degree = product_degree(sigma.spec().poly_degree(), v.spec().poly_degree());
    let (rule, tab_s) = rule_and_tab(sigma, degree, true)?;
    let tab_v = tabulate(v.element(0).parent(), &rule.points, false);
    Ok(assemble_cells(v, sigma, |t| {
        let cs = cell_values(sigma, t, &rule, &tab_s);
        let cv = cell_values(v, t, &rule, &tab_v);
        let (nv, ns) = (v.element(t).len(), sigma.element(t).len());
        let mut m = vec![vec![0.0; ns]; nv];
        for (q, w) in cs.weights.iter().enumerate() {
            for i in 0..nv {
                for j in 0..ns {
                    m[i][j] += w * dot(&cv.values[q][i], &cs.derivs[q][j]);
                }
            }
        }
        m
    }))
}

/// `C[i][j] = (φ_j, q_i)` with `q` spanning the skew multiplier space.
pub fn assemble_skw(sigma: &FeSpace<f64>, q: &FeSpace<f64>) -> Result<CsrMatrix<f64>, AssemblyError> {
    check_stress(sigma)?;
    if q.spec().k != 3 || q.spec().values != ValueSpace::K {
        return Err(AssemblyError::Incompatible(format!("{} is not a rotation space", q.spec())));
    }
    let degree = product_degree(sigma.spec().poly_degree(), q.spec().poly_degree());
    let (rule, tab_s) = rule_and_tab(sigma, degree, false)?;
    let tab_q = tabulate(q.element(0).parent(), &rule.points, false);
    Ok(assemble_cells(q, sigma, |t| {
        let cs = cell_values(sigma, t, &rule, &tab_s);
        let cq = cell_values(q, t, &rule, &tab_q);
        let (nq, ns) = (q.element(t).len(), sigma.element(t).len());
        let mut m = vec![vec![0.0; ns]; nq];
        for (k, w) in cs.weights.iter().enumerate() {
            let f: Vec<Mat3<f64>> = cs.values[k].iter().map(|c| stress_proxy(c)).collect();
            for i in 0..nq {
                for (j, fj) in f.iter().enumerate() {
                    m[i][j] += w * skew_pairing(fj, &cq.values[k][i]);
                }
            }
        }
        m
    }))
}

/// `(f, ψ_i)` over the displacement space.
pub fn assemble_load(v: &FeSpace<f64>, f: VectorFn, degree: Option<usize>) -> Result<Vec<f64>, AssemblyError> {
    let deg = degree.unwrap_or((v.spec().poly_degree() + 3).min(quadrature::MAX_DEGREE));
    let (rule, tab) = rule_and_tab(v, deg, false)?;
    let locals: Vec<Vec<f64>> = (0..v.num_cells())
        .into_par_iter()
        .map(|t| {
            let cv = cell_values(v, t, &rule, &tab);
            let mut out = vec![0.0; v.element(t).len()];
            for (q, w) in cv.weights.iter().enumerate() {
                let fx = f(&cv.points[q]);
                for (o, psi) in out.iter_mut().zip(&cv.values[q]) {
                    *o += w * dot(&fx, psi);
                }
            }
            out
        })
        .collect();
    Ok(scatter(v, locals))
}

fn scatter(space: &FeSpace<f64>, locals: Vec<Vec<f64>>) -> Vec<f64> {
    let mut out = vec![0.0; space.dim()];
    for (t, local) in locals.into_iter().enumerate() {
        for (&g, v) in space.dofs().cell(t).iter().zip(local) {
            out[g] += v;
        }
    }
    out
}

/// `∫_∂Ω g · φ_i n` over the stress space, `n` the outward unit normal.
pub fn assemble_boundary_displacement(sigma: &FeSpace<f64>, g: VectorFn, degree: Option<usize>) -> Result<Vec<f64>, AssemblyError> {
    check_stress(sigma)?;
    let mesh = sigma.mesh();
    let deg = degree.unwrap_or((sigma.spec().poly_degree() + 3).min(quadrature::MAX_DEGREE));
    let rule = simplex_rule(2, deg)?;
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for f in mesh.boundary_faces() {
        let t = mesh.face_tets(f)[0];
        let e = mesh.local_entities(t).faces.iter().position(|&x| x == f).expect("face of its cell");
        cells.push((t, e));
    }
    let mut out = vec![0.0; sigma.dim()];
    for (t, e) in cells {
        let geo = sigma.geometry(t);
        let coords = mesh.sorted_coords(t);
        let [a, b, c] = REF_FACES[e].map(|v| coords[v]);
        let opposite = coords[6 - REF_FACES[e].iter().sum::<usize>()];
        let sub = |p: [f64; 3], q: [f64; 3]| [p[0] - q[0], p[1] - q[1], p[2] - q[2]];
        let mut n = cross(&sub(b, a), &sub(c, a));
        let twice_area = dot(&n, &n).sqrt();
        if dot(&n, &sub(opposite, a)) > 0.0 {
            n = n.map(|x| -x);
        }
        let n = n.map(|x| x / twice_area);
        let (x0, lin) = crate::fespace::functional::entity_map::<f64>(2, e);
        let el = sigma.element(t);
        let parent = el.parent();
        let mut local = vec![0.0; el.len()];
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            let tref: Vec<f64> = (0..3).map(|r| x0[r] + lin[r][0] * p[0] + lin[r][1] * p[1]).collect();
            let x = geo.to_physical(&tref);
            let gx = g(&x);
            let phys: Vec<Vec<f64>> = parent
                .shapes
                .iter()
                .map(|s| geo.push_forward_coeffs(&s.eval_coeffs(&tref), 2, 3))
                .collect();
            let vals = combine_rows(el.combo(), phys);
            for (o, c) in local.iter_mut().zip(&vals) {
                let f = stress_proxy(c);
                let fn_: [f64; 3] = std::array::from_fn(|r| dot(&f[r], &n));
                *o += w * twice_area * dot(&gx, &fn_);
            }
        }
        for (&gi, v) in sigma.dofs().cell(t).iter().zip(local) {
            out[gi] += v;
        }
    }
    Ok(out)
}

/// The three discrete spaces of the method.
#[derive(Clone, Debug)]
pub struct MixedSpaces {
    pub sigma: FeSpace<f64>,
    pub u: FeSpace<f64>,
    pub p: FeSpace<f64>,
}

impl MixedSpaces {
    /// `Σ_h × V_h × Q_h` for degree `r`; `simplified` swaps in the reduced stress space (r = 0).
    pub fn new(mesh: std::sync::Arc<crate::mesh::TetMesh>, r: usize, simplified: bool) -> Result<Self, FeError> {
        let sigma_spec = if simplified {
            if r != 0 {
                return Err(FeError::Unsupported(format!(
                    "the simplified stress element exists only for degree 0, got {r}"
                )));
            }
            SpaceSpec::reduced_two()
        } else {
            SpaceSpec::p(r + 1, 2, ValueSpace::V)
        };
        Self::with_specs(
            mesh,
            sigma_spec,
            SpaceSpec::p(r, 3, ValueSpace::V),
            SpaceSpec::p(r, 3, ValueSpace::K),
        )
    }

    pub fn with_specs(
        mesh: std::sync::Arc<crate::mesh::TetMesh>,
        sigma: SpaceSpec,
        u: SpaceSpec,
        p: SpaceSpec,
    ) -> Result<Self, FeError> {
        Ok(MixedSpaces {
            sigma: FeSpace::new(mesh.clone(), sigma)?,
            u: FeSpace::new(mesh.clone(), u)?,
            p: FeSpace::new(mesh, p)?,
        })
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.sigma.dim(), self.u.dim(), self.p.dim()]
    }
}

/// The assembled symmetric indefinite system `[[A, Bᵀ, Cᵀ], [B, 0, 0], [C, 0, 0]]`.
#[derive(Clone, Debug)]
pub struct BlockSystem {
    pub matrix: CsrMatrix<f64>,
    pub rhs: Vec<f64>,
    /// Start of the σ, u and p unknowns, then the total size.
    pub offsets: [usize; 4],
    pub a: CsrMatrix<f64>,
    pub b: CsrMatrix<f64>,
    pub c: CsrMatrix<f64>,
    /// L² Gram matrix of the stress space.
    pub sigma_gram: CsrMatrix<f64>,
    /// L² Gram matrix of the rotation space.
    pub q_mass: CsrMatrix<f64>,
}

/// Loads: body force and, optionally, prescribed boundary displacement.
#[derive(Clone, Copy)]
pub struct Loads<'a> {
    pub body: VectorFn<'a>,
    pub boundary: Option<VectorFn<'a>>,
}

pub fn assemble_system(spaces: &MixedSpaces, material: &Material, loads: Loads) -> Result<BlockSystem, AssemblyError> {
    let a = assemble_compliance(&spaces.sigma, material, None)?;
    let b = assemble_div(&spaces.sigma, &spaces.u)?;
    let c = assemble_skw(&spaces.sigma, &spaces.p)?;
    let sigma_gram = assemble_compliance(&spaces.sigma, &Material::isotropic(0.0, 0.5)?, None)?;
    let q_mass = assemble_mass(&spaces.p)?;
    let [ns, nu, np] = spaces.dims();
    let offsets = [0, ns, ns + nu, ns + nu + np];
    let mut t = TripletBuilder::new(offsets[3], offsets[3], Merge::Add);
    for (r, col, v) in a.triplets() {
        t.push(r, col, *v);
    }
    for (block, off) in [(&b, offsets[1]), (&c, offsets[2])] {
        for (r, col, v) in block.triplets() {
            t.push(off + r, col, *v);
            t.push(col, off + r, *v);
        }
    }
    let mut rhs = vec![0.0; offsets[3]];
    if let Some(g) = loads.boundary {
        rhs[..ns].copy_from_slice(&assemble_boundary_displacement(&spaces.sigma, g, None)?);
    }
    let load = assemble_load(&spaces.u, loads.body, None)?;
    rhs[offsets[1]..offsets[2]].copy_from_slice(&load);
    Ok(BlockSystem {
        matrix: t.build(),
        rhs,
        offsets,
        a,
        b,
        c,
        sigma_gram,
        q_mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_box_mesh;
    use std::sync::Arc;

    fn spaces(n: usize, r: usize) -> MixedSpaces {
        MixedSpaces::new(Arc::new(build_box_mesh(n).unwrap()), r, false).unwrap()
    }

    #[test]
    fn system_is_symmetric_with_zero_blocks() {
        let s = spaces(1, 0);
        let m = Material::isotropic(1.0, 1.0).unwrap();
        let zero = |_: &[f64; 3]| [0.0; 3];
        let sys = assemble_system(&s, &m, Loads { body: &zero, boundary: None }).unwrap();
        assert!(sys.matrix.asymmetry() < 1e-14);
        for (r, c, _) in sys.matrix.triplets() {
            assert!(r < sys.offsets[1] || c < sys.offsets[1]);
        }
        assert!(sys.rhs.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn constant_load_pairs_with_unit_moments() {
        let s = spaces(1, 0);
        let load = assemble_load(&s.u, &|_| [1.0, 0.0, 0.0], None).unwrap();
        for t in 0..s.u.num_cells() {
            let d = s.u.dofs().cell(t);
            let sign = s.u.geometry(t).det.signum();
            assert!((load[d[0]] - sign).abs() < 1e-13);
            assert!(load[d[1]].abs() < 1e-14 && load[d[2]].abs() < 1e-14);
        }
    }

    #[test]
    fn compliance_block_is_spd_on_one_cell() {
        let mesh = Arc::new(crate::mesh::TetMesh::new(
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            vec![[0, 1, 2, 3]],
            crate::mesh::Orientation::Reject,
        )
        .unwrap());
        let s = MixedSpaces::new(mesh, 0, false).unwrap();
        let a = assemble_compliance(&s.sigma, &Material::isotropic(1.0, 1.0).unwrap(), None).unwrap();
        assert_eq!(a.nrows(), 36);
        let eig = a
            .to_faer_dense()
            .self_adjoint_eigenvalues(faer::Side::Lower)
            .unwrap();
        assert!(eig[0] > 0.0);
    }
}
