//! Reference-element shape functions dual to the moment degrees of freedom.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::linalg::{self, Dense};
use crate::polyform::{monomial_forms, PolyForm, Rational, Scalar, ValueSpace};

use super::reduced::ReducedReference;
use super::functional::{dof_matrix, independent_subset, standard_functionals, Functional};
use super::spec::{Family, SpaceSpec};
use super::FeError;

/// Shape functions on the reference tetrahedron together with their dual functionals.
#[derive(Clone, Debug)]
pub struct LocalBasis<T> {
    pub spec: SpaceSpec,
    pub shapes: Vec<PolyForm<T>>,
    pub functionals: Vec<Functional<T>>,
    /// Degrees of freedom attached to each subsimplex of dimension 0..=3.
    pub dofs_per_entity: [usize; 4],
}

impl<T: Scalar> LocalBasis<T> {
    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    /// `D[i][j] = F_i(φ_j)`; the identity for a correct dual basis.
    pub fn duality_matrix(&self) -> Dense<T> {
        dof_matrix(&self.functionals, &self.shapes)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> LocalBasis<U> {
        LocalBasis {
            spec: self.spec,
            shapes: self.shapes.iter().map(|s| s.map(f)).collect(),
            functionals: self
                .functionals
                .iter()
                .map(|g| Functional {
                    entity_dim: g.entity_dim,
                    entity: g.entity,
                    test: g.test.map(f),
                    component: g.component,
                })
                .collect(),
            dofs_per_entity: self.dofs_per_entity,
        }
    }
}

fn count_per_entity<T>(functionals: &[Functional<T>]) -> [usize; 4] {
    let mut counts = [0; 4];
    for f in functionals {
        if f.entity == 0 {
            counts[f.entity_dim] += 1;
        }
    }
    counts
}

/// Solve for the shapes dual to `functionals` within the span of `spanning`.
pub fn dual_basis<T: Scalar>(
    spec: SpaceSpec,
    spanning: Vec<PolyForm<T>>,
    functionals: Vec<Functional<T>>,
) -> Result<LocalBasis<T>, FeError> {
    let basis = independent_subset(spanning);
    if basis.len() != functionals.len() {
        return Err(FeError::DimensionMismatch {
            spec: spec.to_string(),
            space: basis.len(),
            dofs: functionals.len(),
        });
    }
    let d = dof_matrix(&functionals, &basis);
    let inv = linalg::inverse(&d).ok_or_else(|| FeError::Singular(spec.to_string()))?;
    let shapes = combine(&basis, &inv);
    Ok(LocalBasis {
        spec,
        dofs_per_entity: count_per_entity(&functionals),
        shapes,
        functionals,
    })
}

/// `out_j = Σ_l forms_l · coeffs[l][j]`.
pub fn combine<T: Scalar>(forms: &[PolyForm<T>], coeffs: &Dense<T>) -> Vec<PolyForm<T>> {
    let ncols = coeffs.first().map_or(0, |r| r.len());
    (0..ncols)
        .map(|j| {
            let mut acc = PolyForm::zero(forms[0].dim(), forms[0].k(), forms[0].values());
            for (l, w) in forms.iter().enumerate() {
                if !coeffs[l][j].is_zero() {
                    acc.add_scaled(w, &coeffs[l][j]);
                }
            }
            acc
        })
        .collect()
}

/// Scalar spanning set of `family_r Λ^k` on the reference tetrahedron.
pub fn spanning_set<T: Scalar>(family: Family, r: usize, k: usize) -> Vec<PolyForm<T>> {
    let mut forms = monomial_forms(3, r, k);
    if family == Family::PPlus && k < 3 {
        forms.extend(monomial_forms::<T>(3, r, k + 1).iter().map(|w| w.koszul().expect("k+1 ≥ 1")));
    }
    forms
}

/// Tensor a scalar basis with the value space basis, keeping the functional ordering.
fn tensor_basis<T: Scalar>(scalar: &LocalBasis<T>, spec: SpaceSpec) -> LocalBasis<T> {
    let ncomp = spec.values.dim();
    let mut shapes = Vec::with_capacity(scalar.len() * ncomp);
    let mut functionals = Vec::with_capacity(scalar.len() * ncomp);
    for (phi, f) in scalar.shapes.iter().zip(&scalar.functionals) {
        for c in 0..ncomp {
            shapes.push(phi.with_value(spec.values, c));
            functionals.push(Functional {
                entity_dim: f.entity_dim,
                entity: f.entity,
                test: f.test.clone(),
                component: Some(c),
            });
        }
    }
    LocalBasis {
        spec,
        shapes,
        functionals,
        dofs_per_entity: scalar.dofs_per_entity.map(|n| n * ncomp),
    }
}

fn build_standard(spec: SpaceSpec) -> Result<LocalBasis<Rational>, FeError> {
    spec.validate()?;
    if spec.is_reduced() {
        return Err(FeError::Unsupported(format!(
            "{spec} depends on the element geometry; build it per element"
        )));
    }
    if spec.values != ValueSpace::R {
        let scalar = reference_basis_exact(spec.with_values(ValueSpace::R))?;
        let b = tensor_basis(&scalar, spec);
        debug_assert_eq!(standard_functionals::<Rational>(&spec).len(), b.functionals.len());
        return Ok(b);
    }
    let spanning = spanning_set(spec.family, spec.r, spec.k);
    let basis = dual_basis(spec, spanning, standard_functionals(&spec))?;
    let expected = spec.local_dimension()?;
    if basis.len() != expected {
        return Err(FeError::DimensionMismatch {
            spec: spec.to_string(),
            space: basis.len(),
            dofs: expected,
        });
    }
    Ok(basis)
}

type Cache<T> = Mutex<HashMap<SpaceSpec, Arc<LocalBasis<T>>>>;

fn cached<T: Scalar>(
    cache: &'static OnceLock<Cache<T>>,
    spec: SpaceSpec,
    build: impl FnOnce() -> Result<LocalBasis<T>, FeError>,
) -> Result<Arc<LocalBasis<T>>, FeError> {
    let map = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = map.lock().expect("basis cache").get(&spec) {
        return Ok(b.clone());
    }
    // built outside the lock so nested lookups (scalar → tensor) do not deadlock
    let b = Arc::new(build()?);
    Ok(map.lock().expect("basis cache").entry(spec).or_insert(b).clone())
}

/// Exact reference basis of a standard space, cached.
pub fn reference_basis_exact(spec: SpaceSpec) -> Result<Arc<LocalBasis<Rational>>, FeError> {
    static CACHE: OnceLock<Cache<Rational>> = OnceLock::new();
    cached(&CACHE, spec, || build_standard(spec))
}

/// Floating-point copy of the exact reference basis, cached.
pub fn reference_basis_f64(spec: SpaceSpec) -> Result<Arc<LocalBasis<f64>>, FeError> {
    static CACHE: OnceLock<Cache<f64>> = OnceLock::new();
    cached(&CACHE, spec, || Ok(reference_basis_exact(spec)?.map(|v| v.to_f64())))
}

/// Scalars for which cached reference bases are available.
pub trait BasisScalar: Scalar {
    fn reference_basis(spec: SpaceSpec) -> Result<Arc<LocalBasis<Self>>, FeError>;
    fn reduced_reference() -> Result<Arc<ReducedReference<Self>>, FeError>;
}

impl BasisScalar for f64 {
    fn reference_basis(spec: SpaceSpec) -> Result<Arc<LocalBasis<f64>>, FeError> {
        reference_basis_f64(spec)
    }
    fn reduced_reference() -> Result<Arc<ReducedReference<f64>>, FeError> {
        super::reduced::reference_f64()
    }
}

impl BasisScalar for Rational {
    fn reference_basis(spec: SpaceSpec) -> Result<Arc<LocalBasis<Rational>>, FeError> {
        reference_basis_exact(spec)
    }
    fn reduced_reference() -> Result<Arc<ReducedReference<Rational>>, FeError> {
        super::reduced::reference_exact()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyform::int;

    fn is_identity(m: &Dense<Rational>) -> bool {
        m.iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, v)| *v == if i == j { int(1) } else { int(0) }))
    }

    #[test]
    fn whitney_one_forms() {
        let b = reference_basis_exact(SpaceSpec::p_plus(0, 1, ValueSpace::R)).unwrap();
        assert_eq!(b.len(), 6);
        assert_eq!(b.dofs_per_entity, [0, 1, 0, 0]);
        assert!(is_identity(&b.duality_matrix()));
        assert!(b.shapes.iter().all(|s| s.degree() == Some(1)));
    }

    #[test]
    fn p1_two_forms_have_three_face_moments() {
        let b = reference_basis_exact(SpaceSpec::p(1, 2, ValueSpace::R)).unwrap();
        assert_eq!(b.len(), 12);
        assert_eq!(b.dofs_per_entity, [0, 0, 3, 0]);
        assert!(is_identity(&b.duality_matrix()));
    }

    #[test]
    fn all_standard_specs_unisolvent() {
        for r in 0..=2 {
            for k in 0..=3 {
                for family in [Family::P, Family::PPlus] {
                    let spec = SpaceSpec::new(family, r, k, ValueSpace::R);
                    if spec.validate().is_err() {
                        continue;
                    }
                    let b = reference_basis_exact(spec).unwrap();
                    assert_eq!(b.len(), spec.local_dimension().unwrap(), "{spec}");
                    assert!(is_identity(&b.duality_matrix()), "{spec}");
                }
            }
        }
    }

    #[test]
    fn vector_basis_is_dual() {
        let b = reference_basis_exact(SpaceSpec::p(1, 2, ValueSpace::V)).unwrap();
        assert_eq!(b.len(), 36);
        assert!(is_identity(&b.duality_matrix()));
    }
}
