//! Moment degrees of freedom `ω ↦ ∫_f tr_f ω ∧ η` on subsimplices of the reference tetrahedron.

use crate::linalg::{self, Dense};
use crate::mesh::{REF_EDGES, REF_FACES};
use crate::polyform::{monomial_forms, PolyForm, Scalar, ValueSpace};

use super::spec::{Family, SpaceSpec};

/// Number of subsimplices of dimension `d` in a tetrahedron.
pub fn entity_count(d: usize) -> usize {
    [4, 6, 4, 1][d]
}

/// Vertices (local indices) of the `e`-th subsimplex of dimension `d`.
pub fn entity_vertices(d: usize, e: usize) -> Vec<usize> {
    match d {
        0 => vec![e],
        1 => REF_EDGES[e].to_vec(),
        2 => REF_FACES[e].to_vec(),
        _ => vec![0, 1, 2, 3],
    }
}

fn ref_vertex<T: Scalar>(v: usize) -> [T; 3] {
    std::array::from_fn(|i| if v > 0 && i == v - 1 { T::one() } else { T::zero() })
}

/// Affine parametrization `x = offset + lin · s` of a reference subsimplex over the
/// unit `d`-simplex, following its vertex order.
pub fn entity_map<T: Scalar>(d: usize, e: usize) -> (Vec<T>, Vec<Vec<T>>) {
    let verts = entity_vertices(d, e);
    let x0 = ref_vertex::<T>(verts[0]);
    let lin = (0..3)
        .map(|i| {
            verts[1..]
                .iter()
                .map(|&v| ref_vertex::<T>(v)[i].clone() - x0[i].clone())
                .collect()
        })
        .collect();
    (x0.to_vec(), lin)
}

/// A single moment functional on the reference tetrahedron.
#[derive(Clone, Debug, PartialEq)]
pub struct Functional<T> {
    pub entity_dim: usize,
    pub entity: usize,
    /// Test form in the coordinates of the unit `entity_dim`-simplex.
    pub test: PolyForm<T>,
    /// For scalar tests on vector- or skew-valued forms, the paired value component.
    pub component: Option<usize>,
}

impl<T: Scalar> Functional<T> {
    /// Apply to a form given on the reference tetrahedron.
    pub fn apply(&self, w: &PolyForm<T>) -> T {
        let (x0, lin) = entity_map::<T>(self.entity_dim, self.entity);
        let trace = w.pullback(&x0, &lin, self.entity_dim);
        self.apply_trace(&trace)
    }

    /// Apply to a form already pulled back to the entity.
    pub fn apply_trace(&self, trace: &PolyForm<T>) -> T {
        let part = match self.component {
            Some(c) => trace.component(c),
            None => trace.clone(),
        };
        let top = part.wedge(&self.test).expect("test form pairs with the space values");
        top.integrate().expect("top-degree moment")[0].clone()
    }
}

/// Matrix `D[i][j] = F_i(w_j)`, sharing entity pullbacks between functionals.
pub fn dof_matrix<T: Scalar>(functionals: &[Functional<T>], forms: &[PolyForm<T>]) -> Dense<T> {
    let mut out = linalg::zeros(functionals.len(), forms.len());
    let mut i = 0;
    while i < functionals.len() {
        let (d, e) = (functionals[i].entity_dim, functionals[i].entity);
        let mut end = i;
        while end < functionals.len() && (functionals[end].entity_dim, functionals[end].entity) == (d, e) {
            end += 1;
        }
        let (x0, lin) = entity_map::<T>(d, e);
        for (j, w) in forms.iter().enumerate() {
            let trace = w.pullback(&x0, &lin, d);
            for (row, f) in out[i..end].iter_mut().zip(&functionals[i..end]) {
                row[j] = f.apply_trace(&trace);
            }
        }
        i = end;
    }
    out
}

/// Flatten the coefficients of forms of a common shape into vectors.
pub fn coefficient_vectors<T: Scalar>(forms: &[PolyForm<T>]) -> Dense<T> {
    let mut index = std::collections::HashMap::new();
    let mut entries: Vec<Vec<(usize, T)>> = Vec::with_capacity(forms.len());
    for w in forms {
        let mut row = Vec::new();
        for (ci, p) in w.coeffs().iter().enumerate() {
            for (e, v) in p.terms() {
                let n = index.len();
                let col = *index.entry((ci, *e)).or_insert(n);
                row.push((col, v.clone()));
            }
        }
        entries.push(row);
    }
    let ncols = index.len();
    entries
        .into_iter()
        .map(|row| {
            let mut dense = vec![T::zero(); ncols];
            for (c, v) in row {
                dense[c] = v;
            }
            dense
        })
        .collect()
}

/// A maximal linearly independent subfamily, keeping the earliest members.
pub fn independent_subset<T: Scalar>(forms: Vec<PolyForm<T>>) -> Vec<PolyForm<T>> {
    if forms.is_empty() {
        return forms;
    }
    let keep = linalg::independent_rows(&coefficient_vectors(&forms));
    let mut out = Vec::with_capacity(keep.len());
    let mut forms: Vec<Option<PolyForm<T>>> = forms.into_iter().map(Some).collect();
    for i in keep {
        out.push(forms[i].take().expect("distinct indices"));
    }
    out
}

/// Basis of `P_s Λ^j` on the unit `d`-simplex; empty for negative `s`.
pub fn p_forms<T: Scalar>(d: usize, s: i64, j: usize) -> Vec<PolyForm<T>> {
    if s < 0 || j > d {
        return Vec::new();
    }
    monomial_forms(d, s as usize, j)
}

/// Basis of `P_s⁺ Λ^j = P_s Λ^j + κ P_s Λ^{j+1}` on the unit `d`-simplex.
pub fn p_plus_forms<T: Scalar>(d: usize, s: i64, j: usize) -> Vec<PolyForm<T>> {
    let mut forms = p_forms(d, s, j);
    if j < d {
        forms.extend(
            p_forms::<T>(d, s, j + 1)
                .iter()
                .map(|w| w.koszul().expect("positive form degree")),
        );
    }
    independent_subset(forms)
}

/// Scalar test forms on a `d`-dimensional subsimplex for a standard family.
pub fn standard_tests<T: Scalar>(spec: &SpaceSpec, d: usize) -> Vec<PolyForm<T>> {
    if d < spec.k {
        return Vec::new();
    }
    let (r, k, d_) = (spec.r as i64, spec.k as i64, d as i64);
    match spec.dof_family() {
        Family::P => p_plus_forms(d, r - d_ - 1 + k, d - spec.k),
        Family::PPlus => p_forms(d, r - d_ + k, d - spec.k),
        Family::ReducedOne | Family::ReducedTwo => unreachable!("reduced spaces use geometric tests"),
    }
}

/// Standard functionals ordered by entity dimension, entity, test, then value component.
pub fn standard_functionals<T: Scalar>(spec: &SpaceSpec) -> Vec<Functional<T>> {
    let ncomp = spec.values.dim();
    let mut out = Vec::new();
    for d in 0..=3 {
        let tests = standard_tests::<T>(spec, d);
        for e in 0..entity_count(d) {
            for t in &tests {
                for c in 0..ncomp {
                    out.push(Functional {
                        entity_dim: d,
                        entity: e,
                        test: t.clone(),
                        component: (spec.values != ValueSpace::R).then_some(c),
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyform::{int, Poly, Rational};

    #[test]
    fn test_space_sizes() {
        type Q = Rational;
        assert_eq!(p_plus_forms::<Q>(2, 0, 0).len(), 3);
        assert_eq!(p_plus_forms::<Q>(2, 0, 1).len(), 3);
        assert_eq!(p_plus_forms::<Q>(3, 1, 1).len(), 20);
        assert!(p_plus_forms::<Q>(2, -1, 0).is_empty());
        assert_eq!(p_forms::<Q>(0, 2, 0).len(), 1);
    }

    #[test]
    fn edge_moment_of_dx() {
        // ∫ over edge (0,1) of dx equals its length along x
        let f = Functional::<Rational> {
            entity_dim: 1,
            entity: 0,
            test: PolyForm::monomial_form(1, Poly::constant(1, int(1)), &[]),
            component: None,
        };
        let dx = PolyForm::monomial_form(3, Poly::constant(3, int(1)), &[0]);
        assert_eq!(f.apply(&dx), int(1));
        let dy = PolyForm::monomial_form(3, Poly::constant(3, int(1)), &[1]);
        assert_eq!(f.apply(&dy), int(0));
    }
}
