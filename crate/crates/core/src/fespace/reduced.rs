//! The reduced spaces `P⁺_{1,−}Λ¹(T;V)` and `P_{1,−}Λ²(T;V)`.
//!
//! Their face degrees of freedom use a tangent–normal frame of each physical face, so
//! the bases are built per element. Everything is expressed in the coordinates of a
//! standard parent space (`P_1⁺Λ¹(T;V)` and `P_1Λ²(T;V)` respectively), whose
//! canonical degrees of freedom serve as coordinates.

use std::sync::{Arc, OnceLock};

use crate::linalg::{self, Dense};
use crate::polyform::{cross, dot, PolyForm, Poly, Rational, Scalar, ValueSpace, Vec3};

use super::basis::{combine, reference_basis_exact, BasisScalar, LocalBasis};
use super::functional::{coefficient_vectors, dof_matrix, Functional};
use super::spec::{Family, SpaceSpec};
use super::FeError;
use crate::mesh::REF_FACES;

/// Geometry-independent data shared by all reduced elements.
#[derive(Clone, Debug)]
pub struct ReducedReference<T> {
    /// `P_1⁺Λ¹(T;V)`, 60 shapes.
    pub plus1: Arc<LocalBasis<T>>,
    /// Coordinates of the `P_1Λ¹(T;V)` shapes in `plus1` (60 × 36).
    pub p1_in_plus1: Dense<T>,
    /// `P_1Λ²(T;V)`, 36 shapes.
    pub p2: Arc<LocalBasis<T>>,
    /// Coordinates of the `P_0⁺Λ²(T;V)` shapes in `p2` (36 × 12).
    pub p0plus_in_p2: Dense<T>,
    /// Coordinates of `d` applied to the `plus1` shapes, in `p2` (36 × 60).
    pub d_plus1: Dense<T>,
}

fn build_reference() -> Result<ReducedReference<Rational>, FeError> {
    let plus1 = reference_basis_exact(SpaceSpec::p_plus(1, 1, ValueSpace::V))?;
    let p1 = reference_basis_exact(SpaceSpec::p(1, 1, ValueSpace::V))?;
    let p2 = reference_basis_exact(SpaceSpec::p(1, 2, ValueSpace::V))?;
    let p0plus = reference_basis_exact(SpaceSpec::p_plus(0, 2, ValueSpace::V))?;
    let dshapes: Vec<PolyForm<Rational>> = plus1.shapes.iter().map(|s| s.d().expect("1-form")).collect();
    Ok(ReducedReference {
        p1_in_plus1: dof_matrix(&plus1.functionals, &p1.shapes),
        p0plus_in_p2: dof_matrix(&p2.functionals, &p0plus.shapes),
        d_plus1: dof_matrix(&p2.functionals, &dshapes),
        plus1,
        p2,
    })
}

type Cell<T> = OnceLock<Result<Arc<ReducedReference<T>>, String>>;

pub(crate) fn reference_exact() -> Result<Arc<ReducedReference<Rational>>, FeError> {
    static CELL: Cell<Rational> = OnceLock::new();
    CELL.get_or_init(|| build_reference().map(Arc::new).map_err(|e| e.to_string()))
        .clone()
        .map_err(FeError::Unsupported)
}

pub(crate) fn reference_f64() -> Result<Arc<ReducedReference<f64>>, FeError> {
    static CELL: Cell<f64> = OnceLock::new();
    CELL.get_or_init(|| {
        let r = reference_exact().map_err(|e| e.to_string())?;
        let conv = |m: &Dense<Rational>| -> Dense<f64> {
            m.iter().map(|row| row.iter().map(|v| v.to_f64()).collect()).collect()
        };
        Ok(Arc::new(ReducedReference {
            plus1: Arc::new(r.plus1.map(|v| v.to_f64())),
            p1_in_plus1: conv(&r.p1_in_plus1),
            p2: Arc::new(r.p2.map(|v| v.to_f64())),
            p0plus_in_p2: conv(&r.p0plus_in_p2),
            d_plus1: conv(&r.d_plus1),
        }))
    })
    .clone()
    .map_err(FeError::Unsupported)
}

/// A reduced local space on one physical tetrahedron.
#[derive(Clone, Debug)]
pub struct ReducedElement<T> {
    pub spec: SpaceSpec,
    pub parent: Arc<LocalBasis<T>>,
    /// `φ_i = Σ_l combo[i][l] ψ_l` with `ψ` the parent shapes.
    pub combo: Dense<T>,
    /// `F_i(w) = Σ_l functional_rows[i][l] G_l(w)` with `G` the parent functionals.
    pub functional_rows: Dense<T>,
    /// Geometric test forms (in entity coordinates) behind each row, for reporting.
    pub functionals: Vec<Functional<T>>,
    pub dofs_per_entity: [usize; 4],
    /// The reduced functionals applied to the defining spanning set.
    pub span_dofs: Dense<T>,
}

impl<T: Scalar> ReducedElement<T> {
    pub fn len(&self) -> usize {
        self.combo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.combo.is_empty()
    }

    /// The shape functions as forms on the reference tetrahedron.
    pub fn shapes(&self) -> Vec<PolyForm<T>> {
        let cols = self.parent.len();
        combine(&self.parent.shapes, &linalg::transpose(&self.combo, cols))
    }

    /// Degrees of freedom of a form given on the reference tetrahedron.
    pub fn apply(&self, w: &PolyForm<T>) -> Vec<T> {
        let g: Vec<T> = self.parent.functionals.iter().map(|f| f.apply(w)).collect();
        linalg::matvec(&self.functional_rows, &g)
    }

    /// As a [`LocalBasis`] with materialized shapes and geometric functionals.
    pub fn to_local_basis(&self) -> LocalBasis<T> {
        LocalBasis {
            spec: self.spec,
            shapes: self.shapes(),
            functionals: self.functionals.clone(),
            dofs_per_entity: self.dofs_per_entity,
        }
    }
}

/// Tangent–normal frame `(t, s, n)` of a face with vertices `a, b, c`; orthogonal, not normalized.
pub fn face_frame<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>, c: &Vec3<T>) -> [Vec3<T>; 3] {
    let t: Vec3<T> = std::array::from_fn(|i| b[i].clone() - a[i].clone());
    let e2: Vec3<T> = std::array::from_fn(|i| c[i].clone() - a[i].clone());
    let n = cross(&t, &e2);
    let s = cross(&n, &t);
    [t, s, n]
}

fn vec_form<T: Scalar>(dim: usize, k_idx: Option<usize>, coeff: &Poly<T>, v: &Vec3<T>) -> PolyForm<T> {
    let idx: Vec<usize> = k_idx.into_iter().collect();
    PolyForm::monomial_form(dim, coeff.clone(), &idx).with_value_vector(ValueSpace::V, v)
}

fn scaled<T: Scalar>(v: &Vec3<T>, c: &T) -> Vec3<T> {
    std::array::from_fn(|i| v[i].clone() * c.clone())
}

fn add3<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    std::array::from_fn(|i| a[i].clone() + b[i].clone())
}

/// Constant V-valued 1-form `q ↦ Σ_i w_i (q · u_i)` pulled back to face coordinates.
fn face_one_form<T: Scalar>(terms: &[(Vec3<T>, Vec3<T>)], edges: &[Vec3<T>; 2]) -> PolyForm<T> {
    let mut out = PolyForm::zero(2, 1, ValueSpace::V);
    let one = Poly::constant(2, T::one());
    for (m, e) in edges.iter().enumerate() {
        let mut val: Vec3<T> = std::array::from_fn(|_| T::zero());
        for (w, u) in terms {
            val = add3(&val, &scaled(w, &dot(u, e)));
        }
        out.add_scaled(&vec_form(2, Some(m), &one, &val), &T::one());
    }
    out
}

/// Symmetric (3) and skew (3) face tests on `P_0Λ¹(f;V)`, in face coordinates.
pub fn face_one_form_tests<T: Scalar>(coords: &[Vec3<T>; 4], face: usize) -> (Vec<PolyForm<T>>, Vec<PolyForm<T>>) {
    let [a, b, c] = REF_FACES[face].map(|v| coords[v].clone());
    let [t, s, n] = face_frame(&a, &b, &c);
    let edges = [
        std::array::from_fn(|i| b[i].clone() - a[i].clone()),
        std::array::from_fn(|i| c[i].clone() - a[i].clone()),
    ];
    let neg = |v: &Vec3<T>| scaled(v, &-T::one());
    let sym = vec![
        face_one_form(&[(t.clone(), t.clone())], &edges),
        face_one_form(&[(s.clone(), t.clone()), (t.clone(), s.clone())], &edges),
        face_one_form(&[(s.clone(), s.clone())], &edges),
    ];
    // ν q for ν = t sᵀ − s tᵀ, n tᵀ − t nᵀ, n sᵀ − s nᵀ
    let skw = vec![
        face_one_form(&[(t.clone(), s.clone()), (neg(&s), t.clone())], &edges),
        face_one_form(&[(n.clone(), t.clone()), (neg(&t), n.clone())], &edges),
        face_one_form(&[(n.clone(), s.clone()), (neg(&s), n.clone())], &edges),
    ];
    (sym, skw)
}

/// The six tests `e_c, (x·t)n, (x·s)n, (x·t)s − (x·s)t` spanning `P_{1,skw}Λ⁰(f;V)`.
pub fn face_skw_zero_form_tests<T: Scalar>(coords: &[Vec3<T>; 4], face: usize) -> Vec<PolyForm<T>> {
    let [a, b, c] = REF_FACES[face].map(|v| coords[v].clone());
    let [t, s, n] = face_frame(&a, &b, &c);
    let edges: [Vec3<T>; 2] = [
        std::array::from_fn(|i| b[i].clone() - a[i].clone()),
        std::array::from_fn(|i| c[i].clone() - a[i].clone()),
    ];
    // x · u as a polynomial in face coordinates
    let along = |u: &Vec3<T>| -> Poly<T> {
        let mut p = Poly::constant(2, dot(&a, u));
        for (m, e) in edges.iter().enumerate() {
            p.add_scaled(&Poly::var(2, m), &dot(e, u));
        }
        p
    };
    let (xt, xs) = (along(&t), along(&s));
    let one = Poly::constant(2, T::one());
    let mut tests: Vec<PolyForm<T>> = (0..3)
        .map(|c| {
            let e: Vec3<T> = std::array::from_fn(|i| if i == c { T::one() } else { T::zero() });
            vec_form(2, None, &one, &e)
        })
        .collect();
    tests.push(vec_form(2, None, &xt, &n));
    tests.push(vec_form(2, None, &xs, &n));
    tests.push(vec_form(2, None, &xt, &s).sub(&vec_form(2, None, &xs, &t)));
    tests
}

/// Coordinates of a V-valued test form with respect to the parent's functionals on one entity.
fn expand_test<T: Scalar>(parent: &LocalBasis<T>, d: usize, e: usize, test: &PolyForm<T>) -> Result<Vec<T>, FeError> {
    let mut row = vec![T::zero(); parent.len()];
    let idx: Vec<usize> = (0..parent.len())
        .filter(|&i| parent.functionals[i].entity_dim == d && parent.functionals[i].entity == e)
        .collect();
    for c in 0..3 {
        let target = test.component(c);
        let own: Vec<usize> = idx
            .iter()
            .copied()
            .filter(|&i| parent.functionals[i].component == Some(c))
            .collect();
        let mut forms: Vec<PolyForm<T>> = own.iter().map(|&i| parent.functionals[i].test.clone()).collect();
        forms.push(target);
        let vecs = coefficient_vectors(&forms);
        let m = own.len();
        let ncoef = vecs[0].len();
        let a: Dense<T> = (0..ncoef).map(|r| (0..m).map(|i| vecs[i][r].clone()).collect()).collect();
        let b: Vec<T> = (0..ncoef).map(|r| vecs[m][r].clone()).collect();
        let x = linalg::solve_consistent(&a, &b)
            .ok_or_else(|| FeError::Unsupported("geometric test outside the parent test space".into()))?;
        for (&i, xi) in own.iter().zip(x) {
            row[i] = xi;
        }
    }
    Ok(row)
}

fn geometric_functional<T: Scalar>(d: usize, e: usize, test: PolyForm<T>) -> Functional<T> {
    Functional {
        entity_dim: d,
        entity: e,
        test,
        component: None,
    }
}

/// Build a reduced element for a tetrahedron with vertices in ascending global order.
pub fn reduced_element<T: BasisScalar>(spec: SpaceSpec, coords: &[Vec3<T>; 4]) -> Result<ReducedElement<T>, FeError> {
    spec.validate()?;
    let reference = T::reduced_reference()?;
    match spec.family {
        Family::ReducedOne => reduced_one(spec, &reference, coords),
        Family::ReducedTwo => reduced_two(spec, &reference, coords),
        _ => Err(FeError::Unsupported(format!("{spec} is not a reduced space"))),
    }
}

fn singular(spec: SpaceSpec) -> FeError {
    FeError::Singular(spec.to_string())
}

fn unit_row<T: Scalar>(n: usize, i: usize) -> Vec<T> {
    let mut r = vec![T::zero(); n];
    r[i] = T::one();
    r
}

/// Bubble coordinates in `plus1`: shapes dual to the skew face moments that vanish on
/// the edge moments and the symmetric face moments.
fn bubbles<T: Scalar>(
    spec: SpaceSpec,
    plus1: &LocalBasis<T>,
    coords: &[Vec3<T>; 4],
) -> Result<(Dense<T>, Vec<Functional<T>>, Dense<T>), FeError> {
    let n = plus1.len();
    let mut rows: Dense<T> = Vec::with_capacity(n);
    let mut skw_rows = Vec::new();
    let mut skw_functionals = Vec::new();
    for (i, f) in plus1.functionals.iter().enumerate() {
        if f.entity_dim == 1 {
            rows.push(unit_row(n, i));
        }
    }
    let n_edge = rows.len();
    for face in 0..4 {
        let (sym, skw) = face_one_form_tests(coords, face);
        for t in &sym {
            rows.push(expand_test(plus1, 2, face, t)?);
        }
        for t in skw {
            let r = expand_test(plus1, 2, face, &t)?;
            rows.push(r.clone());
            skw_rows.push(r);
            skw_functionals.push(geometric_functional(2, face, t));
        }
    }
    // rows are functionals in plus1 coordinates; their inverse gives the full dual basis
    let inv = linalg::inverse(&rows).ok_or_else(|| singular(spec))?;
    let mut cols = Vec::new();
    for face in 0..4 {
        for j in 0..3 {
            let idx = n_edge + face * 6 + 3 + j;
            cols.push(inv.iter().map(|r| r[idx].clone()).collect::<Vec<T>>());
        }
    }
    // cols: 12 bubbles as coordinate vectors (each of length n)
    Ok((cols, skw_functionals, skw_rows))
}

fn reduced_one<T: BasisScalar>(
    spec: SpaceSpec,
    reference: &ReducedReference<T>,
    coords: &[Vec3<T>; 4],
) -> Result<ReducedElement<T>, FeError> {
    let plus1 = &reference.plus1;
    let n = plus1.len();
    let (bubble_cols, skw_functionals, skw_rows) = bubbles(spec, plus1, coords)?;
    // spanning coordinates: P_1Λ¹(V) then bubbles, one column each
    let mut span_cols: Vec<Vec<T>> = (0..reference.p1_in_plus1[0].len())
        .map(|j| reference.p1_in_plus1.iter().map(|r| r[j].clone()).collect())
        .collect();
    span_cols.extend(bubble_cols);
    let mut f_rows: Dense<T> = Vec::new();
    let mut functionals = Vec::new();
    for (i, f) in plus1.functionals.iter().enumerate() {
        if f.entity_dim == 1 {
            f_rows.push(unit_row(n, i));
            functionals.push(f.clone());
        }
    }
    f_rows.extend(skw_rows);
    functionals.extend(skw_functionals);
    finish(spec, plus1.clone(), span_cols, f_rows, functionals, [0, 6, 3, 0])
}

fn reduced_two<T: BasisScalar>(
    spec: SpaceSpec,
    reference: &ReducedReference<T>,
    coords: &[Vec3<T>; 4],
) -> Result<ReducedElement<T>, FeError> {
    let p2 = &reference.p2;
    let (bubble_cols, _, _) = bubbles(spec, &reference.plus1, coords)?;
    let mut span_cols: Vec<Vec<T>> = (0..reference.p0plus_in_p2[0].len())
        .map(|j| reference.p0plus_in_p2.iter().map(|r| r[j].clone()).collect())
        .collect();
    for b in &bubble_cols {
        span_cols.push(linalg::matvec(&reference.d_plus1, b));
    }
    let mut f_rows = Vec::new();
    let mut functionals = Vec::new();
    for face in 0..4 {
        for t in face_skw_zero_form_tests(coords, face) {
            f_rows.push(expand_test(p2, 2, face, &t)?);
            functionals.push(geometric_functional(2, face, t));
        }
    }
    finish(spec, p2.clone(), span_cols, f_rows, functionals, [0, 0, 6, 0])
}

fn finish<T: Scalar>(
    spec: SpaceSpec,
    parent: Arc<LocalBasis<T>>,
    span_cols: Vec<Vec<T>>,
    functional_rows: Dense<T>,
    functionals: Vec<Functional<T>>,
    dofs_per_entity: [usize; 4],
) -> Result<ReducedElement<T>, FeError> {
    let n = functional_rows.len();
    if span_cols.len() != n {
        return Err(FeError::DimensionMismatch {
            spec: spec.to_string(),
            space: span_cols.len(),
            dofs: n,
        });
    }
    let x = linalg::transpose(&span_cols, parent.len());
    let d = linalg::matmul(&functional_rows, &x);
    let inv = linalg::inverse(&d).ok_or_else(|| singular(spec))?;
    let span_dofs = d;
    // shape coordinates: X · D⁻¹, stored transposed
    let shapes = linalg::matmul(&x, &inv);
    let combo = linalg::transpose(&shapes, n);
    Ok(ReducedElement {
        spec,
        parent,
        combo,
        functional_rows,
        functionals,
        dofs_per_entity,
        span_dofs,
    })
}

/// The square matrix of the reduced functionals applied to the reduced spanning set; it is
/// nonsingular exactly when the reduced degrees of freedom are unisolvent.
pub fn reduced_dof_matrix<T: BasisScalar>(spec: SpaceSpec, coords: &[Vec3<T>; 4]) -> Result<Dense<T>, FeError> {
    Ok(reduced_element(spec, coords)?.span_dofs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyform::{int, ratio};

    type Q = Rational;

    fn reference_coords() -> [Vec3<Q>; 4] {
        [
            [int(0), int(0), int(0)],
            [int(1), int(0), int(0)],
            [int(0), int(1), int(0)],
            [int(0), int(0), int(1)],
        ]
    }

    fn skewed_coords() -> [Vec3<Q>; 4] {
        [
            [ratio(1, 3), int(0), ratio(-1, 2)],
            [int(2), ratio(1, 5), int(0)],
            [int(0), int(1), ratio(1, 7)],
            [ratio(1, 2), ratio(1, 3), int(2)],
        ]
    }

    #[test]
    fn reduced_spaces_are_dual() {
        for coords in [reference_coords(), skewed_coords()] {
            for spec in [SpaceSpec::reduced_one(), SpaceSpec::reduced_two()] {
                let el = reduced_element(spec, &coords).unwrap();
                assert_eq!(el.len(), spec.local_dimension().unwrap());
                let d = dof_matrix(&el.functionals, &el.shapes());
                // edge functionals are shared with the parent; face ones are geometric
                assert_eq!(d, linalg::identity(el.len()), "{spec}");
                assert_eq!(linalg::rank(&reduced_dof_matrix(spec, &coords).unwrap()), el.len());
            }
        }
    }
}
