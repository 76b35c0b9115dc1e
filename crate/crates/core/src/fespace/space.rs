//! Global spaces: entity-based DOF numbering, element geometry and canonical interpolation.

use std::sync::Arc;

use rayon::prelude::*;

use crate::assembly::quadrature::simplex_rule;
use crate::linalg::{self, Dense};
use crate::mesh::{MeshError, TetMesh};
use crate::polyform::{form_basis, AltForm, PolyForm, Scalar, Vec3};
use crate::sparse::{CsrMatrix, Merge, TripletBuilder};

use super::basis::{combine, BasisScalar, LocalBasis};
use super::functional::{entity_count, entity_map, Functional};
use super::reduced::{reduced_element, ReducedElement};
use super::spec::SpaceSpec;
use super::FeError;

/// Affine map `x = origin + B t` from the reference tetrahedron onto a mesh cell,
/// with the cell's vertices in ascending global order.
#[derive(Clone, Debug)]
pub struct ElementGeometry<T> {
    pub origin: Vec3<T>,
    /// Columns are the edge vectors `X_i − X_0`.
    pub jacobian: Dense<T>,
    pub inverse: Dense<T>,
    /// `det B`; negative when the sorted vertex order is negatively oriented.
    pub det: T,
}

impl<T: Scalar> ElementGeometry<T> {
    pub fn from_coords(coords: &[Vec3<T>; 4]) -> Result<Self, FeError> {
        let jacobian: Dense<T> = (0..3)
            .map(|i| (1..4).map(|j| coords[j][i].clone() - coords[0][i].clone()).collect())
            .collect();
        let det = crate::polyform::form::minor(&jacobian, &[0, 1, 2], &[0, 1, 2]);
        let inverse = linalg::inverse(&jacobian).ok_or_else(|| FeError::Singular("degenerate cell".into()))?;
        Ok(ElementGeometry {
            origin: coords[0].clone(),
            jacobian,
            inverse,
            det,
        })
    }

    pub fn abs_det(&self) -> T {
        if self.det.to_f64() < 0.0 {
            -self.det.clone()
        } else {
            self.det.clone()
        }
    }

    pub fn to_reference(&self, x: &[T]) -> Vec3<T> {
        let d: Vec<T> = (0..3).map(|i| x[i].clone() - self.origin[i].clone()).collect();
        let t = linalg::matvec(&self.inverse, &d);
        std::array::from_fn(|i| t[i].clone())
    }

    pub fn to_physical(&self, t: &[T]) -> Vec3<T> {
        let y = linalg::matvec(&self.jacobian, &t[..3]);
        std::array::from_fn(|i| self.origin[i].clone() + y[i].clone())
    }

    /// Columns of `B`, the images of the reference axes.
    pub fn frame(&self) -> Vec<Vec3<T>> {
        (0..3)
            .map(|j| std::array::from_fn(|i| self.jacobian[i][j].clone()))
            .collect()
    }

    /// A form in physical coordinates expressed on the reference cell.
    pub fn pull_back(&self, w: &PolyForm<T>) -> PolyForm<T> {
        w.pullback(&self.origin, &self.jacobian, 3)
    }

    /// A reference form expressed in physical coordinates.
    pub fn push_forward(&self, w: &PolyForm<T>) -> PolyForm<T> {
        let offset: Vec<T> = linalg::matvec(&self.inverse, &self.origin).into_iter().map(|v| -v).collect();
        w.pullback(&offset, &self.inverse, 3)
    }

    /// Reference coefficients at a point mapped to physical coefficients.
    pub fn push_forward_coeffs(&self, coeffs: &[T], k: usize, ncomp: usize) -> Vec<T> {
        PolyForm::transform_basis(coeffs, 3, k, ncomp, &self.inverse)
    }

    /// Physical coefficients at a point mapped to reference coefficients.
    pub fn pull_back_coeffs(&self, coeffs: &[T], k: usize, ncomp: usize) -> Vec<T> {
        PolyForm::transform_basis(coeffs, 3, k, ncomp, &self.jacobian)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> ElementGeometry<U> {
        let m = |d: &Dense<T>| d.iter().map(|r| r.iter().map(f).collect()).collect();
        ElementGeometry {
            origin: std::array::from_fn(|i| f(&self.origin[i])),
            jacobian: m(&self.jacobian),
            inverse: m(&self.inverse),
            det: f(&self.det),
        }
    }
}

/// The local space on one cell.
#[derive(Clone, Debug)]
pub enum LocalElement<T> {
    Standard(Arc<LocalBasis<T>>),
    Reduced(Arc<ReducedElement<T>>),
}

impl<T: Scalar> LocalElement<T> {
    pub fn len(&self) -> usize {
        match self {
            LocalElement::Standard(b) => b.len(),
            LocalElement::Reduced(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dofs_per_entity(&self) -> [usize; 4] {
        match self {
            LocalElement::Standard(b) => b.dofs_per_entity,
            LocalElement::Reduced(r) => r.dofs_per_entity,
        }
    }

    /// The standard basis the shapes are expressed in.
    pub fn parent(&self) -> &Arc<LocalBasis<T>> {
        match self {
            LocalElement::Standard(b) => b,
            LocalElement::Reduced(r) => &r.parent,
        }
    }

    /// Rows of parent coordinates of each shape; `None` when the shapes are the parent's.
    pub fn combo(&self) -> Option<&Dense<T>> {
        match self {
            LocalElement::Standard(_) => None,
            LocalElement::Reduced(r) => Some(&r.combo),
        }
    }

    pub fn shapes(&self) -> Vec<PolyForm<T>> {
        match self {
            LocalElement::Standard(b) => b.shapes.clone(),
            LocalElement::Reduced(r) => r.shapes(),
        }
    }

    /// Parent coordinates of `Σ_i c_i φ_i`.
    pub fn parent_coeffs(&self, c: &[T]) -> Vec<T> {
        match self {
            LocalElement::Standard(_) => c.to_vec(),
            LocalElement::Reduced(r) => {
                let mut out = vec![T::zero(); r.parent.len()];
                for (ci, row) in c.iter().zip(&r.combo) {
                    if ci.is_zero() {
                        continue;
                    }
                    for (o, v) in out.iter_mut().zip(row) {
                        *o += ci.clone() * v.clone();
                    }
                }
                out
            }
        }
    }

    /// Local degrees of freedom from the values of the parent functionals.
    pub fn from_parent_dofs(&self, g: Vec<T>) -> Vec<T> {
        match self {
            LocalElement::Standard(_) => g,
            LocalElement::Reduced(r) => linalg::matvec(&r.functional_rows, &g),
        }
    }

    /// Degrees of freedom of a form on the reference cell.
    pub fn apply(&self, w: &PolyForm<T>) -> Vec<T> {
        match self {
            LocalElement::Standard(b) => b.functionals.iter().map(|f| f.apply(w)).collect(),
            LocalElement::Reduced(r) => r.apply(w),
        }
    }

    /// `Σ_i c_i φ_i` on the reference cell.
    pub fn combine(&self, c: &[T]) -> PolyForm<T> {
        let p = self.parent();
        let pc = self.parent_coeffs(c);
        let col: Dense<T> = pc.into_iter().map(|v| vec![v]).collect();
        combine(&p.shapes, &col).pop().expect("one column")
    }
}

/// Entity-based global numbering: DOFs of entity dimension `d` are grouped by global entity.
#[derive(Clone, Debug)]
pub struct DofMap {
    per_entity: [usize; 4],
    offsets: [usize; 4],
    len: usize,
    cells: Vec<Vec<usize>>,
}

impl DofMap {
    /// Local DOFs are ordered by entity dimension, then local entity, then index on the entity.
    pub fn new(mesh: &TetMesh, per_entity: [usize; 4]) -> Self {
        let mut offsets = [0; 4];
        let mut len = 0;
        for d in 0..4 {
            offsets[d] = len;
            len += per_entity[d] * mesh.num_entities(d);
        }
        let cells = (0..mesh.num_tets())
            .map(|t| {
                let ents = mesh.local_entities(t);
                let mut dofs = Vec::new();
                for d in 0..4 {
                    for e in 0..entity_count(d) {
                        let id = if d == 3 { t } else { ents.ids(d)[e] };
                        for j in 0..per_entity[d] {
                            dofs.push(offsets[d] + id * per_entity[d] + j);
                        }
                    }
                }
                dofs
            })
            .collect();
        DofMap {
            per_entity,
            offsets,
            len,
            cells,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn per_entity(&self) -> [usize; 4] {
        self.per_entity
    }

    pub fn cell(&self, t: usize) -> &[usize] {
        &self.cells[t]
    }

    /// Global DOFs attached to entity `id` of dimension `d`.
    pub fn entity_dofs(&self, d: usize, id: usize) -> std::ops::Range<usize> {
        let start = self.offsets[d] + id * self.per_entity[d];
        start..start + self.per_entity[d]
    }
}

/// A finite element space on a mesh.
#[derive(Clone, Debug)]
pub struct FeSpace<T> {
    spec: SpaceSpec,
    mesh: Arc<TetMesh>,
    dofs: DofMap,
    geometry: Vec<ElementGeometry<T>>,
    elements: Vec<LocalElement<T>>,
}

fn coords_as<T: Scalar>(c: [[f64; 3]; 4]) -> [Vec3<T>; 4] {
    c.map(|p| p.map(T::from_f64))
}

impl<T: BasisScalar> FeSpace<T> {
    pub fn new(mesh: Arc<TetMesh>, spec: SpaceSpec) -> Result<Self, FeError> {
        spec.validate()?;
        let geometry = (0..mesh.num_tets())
            .into_par_iter()
            .map(|t| ElementGeometry::from_coords(&coords_as(mesh.sorted_coords(t))))
            .collect::<Result<Vec<_>, _>>()?;
        let elements = if spec.is_reduced() {
            (0..mesh.num_tets())
                .into_par_iter()
                .map(|t| {
                    let el = reduced_element::<T>(spec, &coords_as(mesh.sorted_coords(t)))?;
                    Ok(LocalElement::Reduced(Arc::new(el)))
                })
                .collect::<Result<Vec<_>, FeError>>()?
        } else {
            let b = T::reference_basis(spec)?;
            vec![LocalElement::Standard(b); mesh.num_tets()]
        };
        let per_entity = elements[0].dofs_per_entity();
        let dofs = DofMap::new(&mesh, per_entity);
        Ok(FeSpace {
            spec,
            mesh,
            dofs,
            geometry,
            elements,
        })
    }
}

impl<T: Scalar> FeSpace<T> {
    pub fn spec(&self) -> SpaceSpec {
        self.spec
    }

    pub fn mesh(&self) -> &Arc<TetMesh> {
        &self.mesh
    }

    pub fn dofs(&self) -> &DofMap {
        &self.dofs
    }

    pub fn dim(&self) -> usize {
        self.dofs.len()
    }

    pub fn num_cells(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, t: usize) -> &LocalElement<T> {
        &self.elements[t]
    }

    pub fn geometry(&self, t: usize) -> &ElementGeometry<T> {
        &self.geometry[t]
    }

    pub fn local_coeffs(&self, t: usize, global: &[T]) -> Vec<T> {
        self.dofs.cell(t).iter().map(|&g| global[g].clone()).collect()
    }

    /// Canonical interpolant of a polynomial form given in physical coordinates.
    pub fn interpolate_poly(&self, w: &PolyForm<T>) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim()];
        for t in 0..self.num_cells() {
            let local = self.elements[t].apply(&self.geometry[t].pull_back(w));
            for (&g, v) in self.dofs.cell(t).iter().zip(local) {
                out[g] = v;
            }
        }
        out
    }

    /// The discrete field on cell `t` as a form on the reference cell.
    pub fn reference_form(&self, t: usize, global: &[T]) -> PolyForm<T> {
        self.elements[t].combine(&self.local_coeffs(t, global))
    }

    /// The discrete field on cell `t` as a polynomial form in physical coordinates.
    pub fn physical_form(&self, t: usize, global: &[T]) -> PolyForm<T> {
        self.geometry[t].push_forward(&self.reference_form(t, global))
    }

    /// Physical coefficients of the discrete field at a point of cell `t`.
    pub fn evaluate(&self, global: &[T], t: usize, x: &[T]) -> Result<Vec<T>, FeError> {
        let tref = self.geometry[t].to_reference(x);
        let bary = [
            1.0 - tref.iter().map(|v| v.to_f64()).sum::<f64>(),
            tref[0].to_f64(),
            tref[1].to_f64(),
            tref[2].to_f64(),
        ];
        if bary.iter().any(|&b| b < -1e-10) {
            let p = [x[0].to_f64(), x[1].to_f64(), x[2].to_f64()];
            return Err(FeError::Mesh(MeshError::PointOutside { point: p, tet: t }));
        }
        let c = self.reference_form(t, global).eval_coeffs(&tref);
        Ok(self.geometry[t].push_forward_coeffs(&c, self.spec.k, self.spec.values.dim()))
    }

    /// Global matrix of a per-cell operator from this space into `target`:
    /// `op(t, φ)` maps a reference shape of cell `t` to a reference form of the target
    /// space, whose degrees of freedom fill column `φ`. Shared DOFs are assigned.
    pub fn operator_matrix(
        &self,
        target: &FeSpace<T>,
        op: impl Fn(usize, &PolyForm<T>) -> Result<PolyForm<T>, FeError> + Sync,
        geometry_free: bool,
    ) -> Result<CsrMatrix<T>, FeError> {
        let standard = matches!(self.elements[0], LocalElement::Standard(_))
            && matches!(target.elements[0], LocalElement::Standard(_));
        let local = |t: usize| -> Result<Dense<T>, FeError> {
            let shapes = self.elements[t].shapes();
            let mut cols = Vec::with_capacity(shapes.len());
            for s in &shapes {
                cols.push(target.elements[t].apply(&op(t, s)?));
            }
            Ok(linalg::transpose(&cols, target.elements[t].len()))
        };
        let shared = if geometry_free && standard { Some(local(0)?) } else { None };
        let blocks: Vec<Dense<T>> = match shared {
            Some(_) => Vec::new(),
            None => (0..self.num_cells())
                .into_par_iter()
                .map(local)
                .collect::<Result<_, _>>()?,
        };
        let mut b = TripletBuilder::new(target.dim(), self.dim(), Merge::Assign);
        for t in 0..self.num_cells() {
            let block = shared.as_ref().unwrap_or_else(|| &blocks[t]);
            b.push_block(target.dofs.cell(t), self.dofs.cell(t), block);
        }
        Ok(b.build())
    }

    /// Matrix of the exterior derivative into `target`.
    pub fn exterior_derivative(&self, target: &FeSpace<T>) -> Result<CsrMatrix<T>, FeError> {
        self.operator_matrix(target, |_, s| Ok(s.d()?), true)
    }
}

impl FeSpace<f64> {
    /// Canonical interpolant of a form given pointwise by its physical coefficients,
    /// with the moments computed by quadrature exact to `extra` degrees beyond the tests.
    pub fn interpolate_fn(&self, f: impl Fn(&[f64; 3]) -> Vec<f64> + Sync, extra: usize) -> Result<Vec<f64>, FeError> {
        let (k, ncomp) = (self.spec.k, self.spec.values.dim());
        let locals: Vec<Vec<f64>> = (0..self.num_cells())
            .into_par_iter()
            .map(|t| {
                let geo = &self.geometry[t];
                let el = &self.elements[t];
                let parent = el.parent();
                let mut g = Vec::with_capacity(parent.len());
                let mut i = 0;
                while i < parent.functionals.len() {
                    let (d, e) = (parent.functionals[i].entity_dim, parent.functionals[i].entity);
                    let mut end = i;
                    while end < parent.functionals.len()
                        && (parent.functionals[end].entity_dim, parent.functionals[end].entity) == (d, e)
                    {
                        end += 1;
                    }
                    let group = &parent.functionals[i..end];
                    let deg = group.iter().filter_map(|f| f.test.degree()).max().unwrap_or(0);
                    let rule = simplex_rule(d, (deg + extra).min(crate::assembly::quadrature::MAX_DEGREE))
                        .map_err(|e| FeError::Unsupported(e.to_string()))?;
                    let (x0, lin) = entity_map::<f64>(d, e);
                    let mut vals = vec![0.0; group.len()];
                    for (p, w) in rule.points.iter().zip(&rule.weights) {
                        let tref: Vec<f64> = (0..3)
                            .map(|r| x0[r] + (0..d).map(|c| lin[r][c] * p[c]).sum::<f64>())
                            .collect();
                        let x = geo.to_physical(&tref);
                        let refc = geo.pull_back_coeffs(&f(&x), k, ncomp);
                        let trace = PolyForm::pullback_coeffs(&refc, 3, k, ncomp, &lin, d);
                        for (v, func) in vals.iter_mut().zip(group) {
                            *v += w * moment_density(func, &trace, k, d, &p[..d]);
                        }
                    }
                    g.extend(vals);
                    i = end;
                }
                Ok(el.from_parent_dofs(g))
            })
            .collect::<Result<_, FeError>>()?;
        let mut out = vec![0.0; self.dim()];
        for (t, local) in locals.into_iter().enumerate() {
            for (&gi, v) in self.dofs.cell(t).iter().zip(local) {
                out[gi] = v;
            }
        }
        Ok(out)
    }
}

/// Pointwise density of `∫ tr ω ∧ η` on a unit `d`-simplex.
fn moment_density(f: &Functional<f64>, trace: &[f64], k: usize, d: usize, s: &[f64]) -> f64 {
    let nb = form_basis(d, k).len();
    let ncomp = trace.len() / nb.max(1);
    let tr = match f.component {
        Some(c) => AltForm {
            dim: d,
            k,
            values: crate::polyform::ValueSpace::R,
            coeffs: trace[c * nb..(c + 1) * nb].to_vec(),
        },
        None => AltForm {
            dim: d,
            k,
            values: f.test.values(),
            coeffs: trace[..ncomp * nb].to_vec(),
        },
    };
    let test = f.test.at(s);
    tr.wedge(&test).expect("test pairs with the trace").coeffs[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_box_mesh;
    use crate::polyform::{Poly, Rational, ValueSpace};

    fn mesh(n: usize) -> Arc<TetMesh> {
        Arc::new(build_box_mesh(n).unwrap())
    }

    #[test]
    fn dof_counts_on_unit_box() {
        let m = mesh(1);
        let v = FeSpace::<f64>::new(m.clone(), SpaceSpec::p(0, 3, ValueSpace::V)).unwrap();
        assert_eq!(v.dim(), 18);
        let q = FeSpace::<f64>::new(m.clone(), SpaceSpec::p(0, 3, ValueSpace::K)).unwrap();
        assert_eq!(q.dim(), 18);
        let s = FeSpace::<f64>::new(m, SpaceSpec::p(1, 2, ValueSpace::V)).unwrap();
        assert_eq!(s.dim(), 162);
    }

    #[test]
    fn interpolation_reproduces_members() {
        let m = mesh(1);
        let s = FeSpace::<Rational>::new(m, SpaceSpec::p(1, 2, ValueSpace::R)).unwrap();
        // a linear 2-form lies in the space
        let x = Poly::<Rational>::var(3, 0);
        let w = PolyForm::monomial_form(3, x, &[1, 2]);
        let c = s.interpolate_poly(&w);
        for t in 0..s.num_cells() {
            assert_eq!(s.physical_form(t, &c), w);
        }
    }

    #[test]
    fn smooth_interpolation_matches_exact() {
        let m = mesh(1);
        let exact = FeSpace::<Rational>::new(m.clone(), SpaceSpec::p_plus(0, 1, ValueSpace::R)).unwrap();
        let float = FeSpace::<f64>::new(m, SpaceSpec::p_plus(0, 1, ValueSpace::R)).unwrap();
        // ω = y² dx + xz dz
        let y = Poly::<Rational>::var(3, 1);
        let w = PolyForm::monomial_form(3, y.mul(&y), &[0])
            .add(&PolyForm::monomial_form(3, Poly::var(3, 0).mul(&Poly::var(3, 2)), &[2]));
        let a = exact.interpolate_poly(&w);
        let b = float
            .interpolate_fn(|x| vec![x[1] * x[1], 0.0, x[0] * x[2]], 2)
            .unwrap();
        for (u, v) in a.iter().zip(&b) {
            assert!((u.to_f64() - v).abs() < 1e-13);
        }
    }

    #[test]
    fn evaluation_rejects_outside_points() {
        let m = mesh(1);
        let s = FeSpace::<f64>::new(m, SpaceSpec::p(0, 3, ValueSpace::R)).unwrap();
        let c = vec![1.0; s.dim()];
        assert!(s.evaluate(&c, 0, &[5.0, 5.0, 5.0]).is_err());
    }
}
