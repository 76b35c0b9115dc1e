//! Alternating forms and polynomial differential forms with values in R, V, K or M.

use std::sync::OnceLock;

use super::poly::{exponents_up_to, Poly};
use super::scalar::Scalar;
use super::FormError;

/// Value space of a form. K is stored through axial-vector coordinates, so the
/// basis element `c` of K is `vect⁻¹(e_c)`; M is stored row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValueSpace {
    R,
    V,
    K,
    M,
}

impl ValueSpace {
    pub fn dim(self) -> usize {
        match self {
            ValueSpace::R => 1,
            ValueSpace::V | ValueSpace::K => 3,
            ValueSpace::M => 9,
        }
    }
}

/// Sorted index tuples forming the canonical basis `dx_I` of `Alt^k(R^n)`.
pub fn form_basis(n: usize, k: usize) -> &'static [Vec<usize>] {
    static TABLE: OnceLock<Vec<Vec<Vec<Vec<usize>>>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        (0..=3)
            .map(|n| (0..=n).map(|k| combinations(n, k)).collect())
            .collect()
    });
    &table[n][k]
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn basis_index(n: usize, idx: &[usize]) -> usize {
    form_basis(n, idx.len())
        .iter()
        .position(|b| b.as_slice() == idx)
        .expect("sorted index tuple")
}

/// `dx_I ∧ dx_J = sign · dx_{I∪J}`; `None` when the tuples overlap.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(i64, Vec<usize>)> {
    let mut inversions = 0usize;
    for &i in a {
        for &j in b {
            if i == j {
                return None;
            }
            if i > j {
                inversions += 1;
            }
        }
    }
    let mut merged: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
    merged.sort_unstable();
    Some((if inversions % 2 == 0 { 1 } else { -1 }, merged))
}

/// Determinant of the square submatrix `m[rows][cols]`.
pub fn minor<T: Scalar>(m: &[Vec<T>], rows: &[usize], cols: &[usize]) -> T {
    match rows.len() {
        0 => T::one(),
        1 => m[rows[0]][cols[0]].clone(),
        2 => {
            m[rows[0]][cols[0]].clone() * m[rows[1]][cols[1]].clone()
                - m[rows[0]][cols[1]].clone() * m[rows[1]][cols[0]].clone()
        }
        _ => {
            // cofactor expansion along the first row
            let mut acc = T::zero();
            for (j, &c) in cols.iter().enumerate() {
                let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = m[rows[0]][c].clone() * minor(m, &rows[1..], &sub_cols);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

/// Value pairing used by the wedge product: `(a component, b component, output component, weight)`.
fn pairing(a: ValueSpace, b: ValueSpace) -> Result<(ValueSpace, Vec<(usize, usize, usize, i64)>), FormError> {
    use ValueSpace::*;
    Ok(match (a, b) {
        (R, x) => (x, (0..x.dim()).map(|c| (0, c, c, 1)).collect()),
        (x, R) => (x, (0..x.dim()).map(|c| (c, 0, c, 1)).collect()),
        (V, V) | (M, M) => (R, (0..a.dim()).map(|c| (c, c, 0, 1)).collect()),
        // Frobenius product of skew matrices in axial coordinates: vect⁻¹a : vect⁻¹b = 2 a·b
        (K, K) => (R, (0..3).map(|c| (c, c, 0, 2)).collect()),
        _ => return Err(FormError::IncompatibleValues(a, b)),
    })
}

/// A constant alternating `k`-form on `R^n` with values in a [`ValueSpace`].
#[derive(Clone, Debug, PartialEq)]
pub struct AltForm<T> {
    pub dim: usize,
    pub k: usize,
    pub values: ValueSpace,
    /// `coeffs[c * nbasis + b]` multiplies `e_c ⊗ dx_{I_b}`.
    pub coeffs: Vec<T>,
}

impl<T: Scalar> AltForm<T> {
    pub fn zero(dim: usize, k: usize, values: ValueSpace) -> Self {
        AltForm {
            dim,
            k,
            values,
            coeffs: vec![T::zero(); values.dim() * form_basis(dim, k).len()],
        }
    }

    /// The basis form `dx_{idx}` (scalar valued); `idx` must be sorted.
    pub fn basis(dim: usize, idx: &[usize]) -> Self {
        let mut f = Self::zero(dim, idx.len(), ValueSpace::R);
        f.coeffs[basis_index(dim, idx)] = T::one();
        f
    }

    /// Evaluate on `k` vectors; returns the value components.
    pub fn evaluate(&self, vectors: &[Vec<T>]) -> Vec<T> {
        assert_eq!(vectors.len(), self.k, "need exactly k argument vectors");
        let basis = form_basis(self.dim, self.k);
        let nb = basis.len();
        // columns of the argument matrix are the vectors
        let cols: Vec<usize> = (0..self.k).collect();
        let m: Vec<Vec<T>> = (0..self.dim)
            .map(|i| vectors.iter().map(|v| v[i].clone()).collect())
            .collect();
        let dets: Vec<T> = basis.iter().map(|idx| minor(&m, idx, &cols)).collect();
        (0..self.values.dim())
            .map(|c| {
                let mut acc = T::zero();
                for (b, d) in dets.iter().enumerate() {
                    acc += self.coeffs[c * nb + b].clone() * d.clone();
                }
                acc
            })
            .collect()
    }

    pub fn wedge(&self, other: &AltForm<T>) -> Result<AltForm<T>, FormError> {
        let a = PolyForm::constant_from(self);
        let b = PolyForm::constant_from(other);
        Ok(a.wedge(&b)?.at(&vec![T::zero(); self.dim]))
    }
}

/// A differential form on `R^n` whose coefficients are polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyForm<T> {
    dim: usize,
    k: usize,
    values: ValueSpace,
    coeffs: Vec<Poly<T>>,
}

impl<T: Scalar> PolyForm<T> {
    pub fn zero(dim: usize, k: usize, values: ValueSpace) -> Self {
        assert!(k <= dim && dim <= 3);
        let n = values.dim() * form_basis(dim, k).len();
        PolyForm {
            dim,
            k,
            values,
            coeffs: vec![Poly::zero(dim); n],
        }
    }

    /// Form with the given coefficient list (`coeffs[c * nbasis + b]`).
    pub fn from_coeffs(dim: usize, k: usize, values: ValueSpace, coeffs: Vec<Poly<T>>) -> Self {
        assert_eq!(coeffs.len(), values.dim() * form_basis(dim, k).len());
        assert!(coeffs.iter().all(|p| p.nvars() == dim));
        PolyForm {
            dim,
            k,
            values,
            coeffs,
        }
    }

    /// Scalar form `p dx_idx`.
    pub fn monomial_form(dim: usize, p: Poly<T>, idx: &[usize]) -> Self {
        let mut f = Self::zero(dim, idx.len(), ValueSpace::R);
        let b = basis_index(dim, idx);
        f.coeffs[b] = p;
        f
    }

    pub fn constant_from(a: &AltForm<T>) -> Self {
        PolyForm {
            dim: a.dim,
            k: a.k,
            values: a.values,
            coeffs: a.coeffs.iter().map(|c| Poly::constant(a.dim, c.clone())).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn values(&self) -> ValueSpace {
        self.values
    }
    pub fn nbasis(&self) -> usize {
        form_basis(self.dim, self.k).len()
    }
    pub fn coeffs(&self) -> &[Poly<T>] {
        &self.coeffs
    }

    /// Coefficient polynomial of `e_c ⊗ dx_{I_b}`.
    pub fn coeff(&self, c: usize, b: usize) -> &Poly<T> {
        &self.coeffs[c * self.nbasis() + b]
    }

    pub fn coeff_mut(&mut self, c: usize, b: usize) -> &mut Poly<T> {
        let nb = self.nbasis();
        &mut self.coeffs[c * nb + b]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|p| p.is_zero())
    }

    /// Polynomial degree, `None` for the zero form.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(|p| p.degree()).max()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|p| p.max_abs_coeff()).fold(0.0, f64::max)
    }

    fn assert_same_shape(&self, other: &PolyForm<T>) {
        assert_eq!(
            (self.dim, self.k, self.values),
            (other.dim, other.k, other.values),
            "form shapes differ"
        );
    }

    pub fn add_scaled(&mut self, other: &PolyForm<T>, c: &T) {
        self.assert_same_shape(other);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            a.add_scaled(b, c);
        }
    }

    pub fn add(&self, other: &PolyForm<T>) -> PolyForm<T> {
        let mut out = self.clone();
        out.add_scaled(other, &T::one());
        out
    }

    pub fn sub(&self, other: &PolyForm<T>) -> PolyForm<T> {
        let mut out = self.clone();
        out.add_scaled(other, &-T::one());
        out
    }

    pub fn scale(&self, c: &T) -> PolyForm<T> {
        PolyForm {
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
            ..self.clone_shape()
        }
    }

    /// Multiply every coefficient by a scalar polynomial.
    pub fn mul_poly(&self, p: &Poly<T>) -> PolyForm<T> {
        PolyForm {
            coeffs: self.coeffs.iter().map(|c| c.mul(p)).collect(),
            ..self.clone_shape()
        }
    }

    fn clone_shape(&self) -> PolyForm<T> {
        PolyForm {
            dim: self.dim,
            k: self.k,
            values: self.values,
            coeffs: Vec::new(),
        }
    }

    /// Scalar form of value component `c`.
    pub fn component(&self, c: usize) -> PolyForm<T> {
        let nb = self.nbasis();
        PolyForm {
            dim: self.dim,
            k: self.k,
            values: ValueSpace::R,
            coeffs: self.coeffs[c * nb..(c + 1) * nb].to_vec(),
        }
    }

    /// Embed a scalar form as value component `c` of `values`.
    pub fn with_value(&self, values: ValueSpace, c: usize) -> PolyForm<T> {
        assert_eq!(self.values, ValueSpace::R);
        let mut out = PolyForm::zero(self.dim, self.k, values);
        let nb = self.nbasis();
        out.coeffs[c * nb..(c + 1) * nb].clone_from_slice(&self.coeffs);
        out
    }

    /// Embed a scalar form tensored with a constant value vector.
    pub fn with_value_vector(&self, values: ValueSpace, v: &[T]) -> PolyForm<T> {
        assert_eq!(self.values, ValueSpace::R);
        assert_eq!(v.len(), values.dim());
        let mut out = PolyForm::zero(self.dim, self.k, values);
        let nb = self.nbasis();
        for (c, vc) in v.iter().enumerate() {
            for b in 0..nb {
                out.coeffs[c * nb + b] = self.coeffs[b].scale(vc);
            }
        }
        out
    }

    /// Apply a linear map to the values: `out_c = Σ_j map[c][j] in_j`.
    pub fn map_values(&self, map: &[Vec<T>], values: ValueSpace) -> PolyForm<T> {
        assert_eq!(map.len(), values.dim());
        let nb = self.nbasis();
        let mut out = PolyForm::zero(self.dim, self.k, values);
        for (c, row) in map.iter().enumerate() {
            assert_eq!(row.len(), self.values.dim());
            for (j, m) in row.iter().enumerate() {
                for b in 0..nb {
                    out.coeffs[c * nb + b].add_scaled(&self.coeffs[j * nb + b], m);
                }
            }
        }
        out
    }

    /// Exterior product with value pairing (scalar×any, V·V, K:K, M:M).
    pub fn wedge(&self, other: &PolyForm<T>) -> Result<PolyForm<T>, FormError> {
        if self.dim != other.dim {
            return Err(FormError::DimensionMismatch(self.dim, other.dim));
        }
        if self.k + other.k > self.dim {
            return Err(FormError::DegreeOverflow(self.k + other.k));
        }
        let (values, pairs) = pairing(self.values, other.values)?;
        let mut out = PolyForm::zero(self.dim, self.k + other.k, values);
        let ba = form_basis(self.dim, self.k);
        let bb = form_basis(self.dim, other.k);
        let (na, nb, no) = (ba.len(), bb.len(), out.nbasis());
        for (i, ia) in ba.iter().enumerate() {
            for (j, jb) in bb.iter().enumerate() {
                let Some((sign, merged)) = merge_sign(ia, jb) else {
                    continue;
                };
                let m = basis_index(self.dim, &merged);
                for &(ca, cb, co, w) in &pairs {
                    let pa = &self.coeffs[ca * na + i];
                    let pb = &other.coeffs[cb * nb + j];
                    if pa.is_zero() || pb.is_zero() {
                        continue;
                    }
                    out.coeffs[co * no + m].add_scaled(&pa.mul(pb), &T::from_i64(sign * w));
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn d(&self) -> Result<PolyForm<T>, FormError> {
        if self.k >= self.dim {
            return Err(FormError::DegreeOverflow(self.k + 1));
        }
        let mut out = PolyForm::zero(self.dim, self.k + 1, self.values);
        let basis = form_basis(self.dim, self.k);
        let (nb, no) = (basis.len(), out.nbasis());
        for c in 0..self.values.dim() {
            for (b, idx) in basis.iter().enumerate() {
                let p = &self.coeffs[c * nb + b];
                if p.is_zero() {
                    continue;
                }
                for l in 0..self.dim {
                    let Some((sign, merged)) = merge_sign(&[l], idx) else {
                        continue;
                    };
                    let m = basis_index(self.dim, &merged);
                    out.coeffs[c * no + m].add_scaled(&p.deriv(l), &T::from_i64(sign));
                }
            }
        }
        Ok(out)
    }

    /// Koszul differential `(κω)_x(v¹..v^{k-1}) = ω_x(x, v¹..v^{k-1})`.
    pub fn koszul(&self) -> Result<PolyForm<T>, FormError> {
        if self.k == 0 {
            return Err(FormError::DegreeUnderflow);
        }
        let mut out = PolyForm::zero(self.dim, self.k - 1, self.values);
        let basis = form_basis(self.dim, self.k);
        let (nb, no) = (basis.len(), out.nbasis());
        for c in 0..self.values.dim() {
            for (b, idx) in basis.iter().enumerate() {
                let p = &self.coeffs[c * nb + b];
                if p.is_zero() {
                    continue;
                }
                for (j, &i) in idx.iter().enumerate() {
                    let rest: Vec<usize> = idx.iter().copied().filter(|&x| x != i).collect();
                    let m = basis_index(self.dim, &rest);
                    let sign = if j % 2 == 0 { T::one() } else { -T::one() };
                    out.coeffs[c * no + m].add_scaled(&p.mul_var(i), &sign);
                }
            }
        }
        Ok(out)
    }

    /// Pullback under the affine map `x = offset + lin · t`, `lin` being `dim × m`.
    pub fn pullback(&self, offset: &[T], lin: &[Vec<T>], m: usize) -> PolyForm<T> {
        assert!(self.k <= m, "pullback of a {}-form to {} dimensions", self.k, m);
        let mut out = PolyForm::zero(m, self.k, self.values);
        let src = form_basis(self.dim, self.k);
        let dst = form_basis(m, self.k);
        let (nb, no) = (src.len(), dst.len());
        let dets: Vec<Vec<T>> = src
            .iter()
            .map(|i| dst.iter().map(|j| minor(lin, i, j)).collect())
            .collect();
        for c in 0..self.values.dim() {
            for (b, _) in src.iter().enumerate() {
                let p = &self.coeffs[c * nb + b];
                if p.is_zero() {
                    continue;
                }
                let q = p.substitute_affine(offset, lin, m);
                for (j, det) in dets[b].iter().enumerate() {
                    out.coeffs[c * no + j].add_scaled(&q, det);
                }
            }
        }
        out
    }

    /// Change of form basis by a constant map, keeping the coefficient polynomials'
    /// variables: every `dt_J` becomes `Σ_I det(g[J][I]) dx_I`.
    pub fn transform_frame(&self, g: &[Vec<T>]) -> PolyForm<T> {
        let basis = form_basis(self.dim, self.k);
        let nb = basis.len();
        let mut out = PolyForm::zero(self.dim, self.k, self.values);
        for (jb, j) in basis.iter().enumerate() {
            for (ib, i) in basis.iter().enumerate() {
                let det = minor(g, j, i);
                if det.is_zero() {
                    continue;
                }
                for c in 0..self.values.dim() {
                    out.coeffs[c * nb + ib].add_scaled(&self.coeffs[c * nb + jb], &det);
                }
            }
        }
        out
    }

    /// Pullback of constant coefficients under a linear map `lin` (`dim × m`).
    pub fn pullback_coeffs(coeffs: &[T], dim: usize, k: usize, ncomp: usize, lin: &[Vec<T>], m: usize) -> Vec<T> {
        let src = form_basis(dim, k);
        let dst = form_basis(m, k);
        let (nb, no) = (src.len(), dst.len());
        let mut out = vec![T::zero(); ncomp * no];
        for (b, i) in src.iter().enumerate() {
            for (j, jj) in dst.iter().enumerate() {
                let det = minor(lin, i, jj);
                if det.is_zero() {
                    continue;
                }
                for c in 0..ncomp {
                    out[c * no + j] += coeffs[c * nb + b].clone() * det.clone();
                }
            }
        }
        out
    }

    /// Pointwise transformation of the form basis by a constant linear map:
    /// replaces each `dt_J` by `Σ_I det(g[J][I]) dx_I` (pullback under `t = g x`).
    pub fn transform_basis(coeffs: &[T], dim: usize, k: usize, ncomp: usize, g: &[Vec<T>]) -> Vec<T> {
        let basis = form_basis(dim, k);
        let nb = basis.len();
        let mut out = vec![T::zero(); coeffs.len()];
        for (jb, j) in basis.iter().enumerate() {
            for (ib, i) in basis.iter().enumerate() {
                let det = minor(g, j, i);
                if det.is_zero() {
                    continue;
                }
                for c in 0..ncomp {
                    out[c * nb + ib] += coeffs[c * nb + jb].clone() * det.clone();
                }
            }
        }
        out
    }

    /// Integral over the reference `dim`-simplex of a top-degree form; one value per component.
    pub fn integrate(&self) -> Result<Vec<T>, FormError> {
        if self.k != self.dim {
            return Err(FormError::NotTopDegree(self.k, self.dim));
        }
        Ok(self.coeffs.iter().map(|p| p.integrate_simplex()).collect())
    }

    /// Evaluate the coefficients at a point.
    pub fn at(&self, x: &[T]) -> AltForm<T> {
        AltForm {
            dim: self.dim,
            k: self.k,
            values: self.values,
            coeffs: self.coeffs.iter().map(|p| p.eval(x)).collect(),
        }
    }

    /// Coefficients evaluated at a point, without building an [`AltForm`].
    pub fn eval_coeffs(&self, x: &[T]) -> Vec<T> {
        self.coeffs.iter().map(|p| p.eval(x)).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> PolyForm<U> {
        PolyForm {
            dim: self.dim,
            k: self.k,
            values: self.values,
            coeffs: self.coeffs.iter().map(|p| p.map(f)).collect(),
        }
    }

    pub fn to_f64(&self) -> PolyForm<f64> {
        self.map(|v| v.to_f64())
    }
}

/// Scalar monomial forms `x^α dx_I` spanning `P_r Λ^k(R^n)`.
pub fn monomial_forms<T: Scalar>(n: usize, r: usize, k: usize) -> Vec<PolyForm<T>> {
    let mut out = Vec::new();
    for idx in form_basis(n, k) {
        for e in exponents_up_to(n, r) {
            out.push(PolyForm::monomial_form(n, Poly::monomial(n, e, T::one()), idx));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyform::scalar::{ratio, Rational};

    type Q = Rational;

    fn x(i: usize) -> Poly<Q> {
        Poly::var(3, i)
    }

    #[test]
    fn dx_dy_on_unit_vectors() {
        let w = AltForm::<Q>::basis(3, &[0, 1]);
        let e1 = vec![ratio(1, 1), ratio(0, 1), ratio(0, 1)];
        let e2 = vec![ratio(0, 1), ratio(1, 1), ratio(0, 1)];
        assert_eq!(w.evaluate(&[e1.clone(), e2.clone()]), vec![ratio(1, 1)]);
        assert_eq!(w.evaluate(&[e2, e1]), vec![ratio(-1, 1)]);
    }

    #[test]
    fn dx_wedge_dx_vanishes() {
        let dx = PolyForm::<Q>::monomial_form(3, Poly::constant(3, ratio(1, 1)), &[0]);
        assert!(dx.wedge(&dx).unwrap().is_zero());
    }

    #[test]
    fn wedge_rejects_overflow() {
        let a = PolyForm::<Q>::monomial_form(3, x(0), &[0, 1]);
        assert!(matches!(a.wedge(&a), Err(FormError::DegreeOverflow(4))));
    }

    #[test]
    fn koszul_of_dx_dy() {
        let w = PolyForm::<Q>::monomial_form(3, Poly::constant(3, ratio(1, 1)), &[0, 1]);
        let expected = PolyForm::monomial_form(3, x(0), &[1]).sub(&PolyForm::monomial_form(3, x(1), &[0]));
        assert_eq!(w.koszul().unwrap(), expected);
    }

    #[test]
    fn koszul_of_dx_is_x() {
        let w = PolyForm::<Q>::monomial_form(3, Poly::constant(3, ratio(1, 1)), &[0]);
        assert_eq!(w.koszul().unwrap(), PolyForm::monomial_form(3, x(0), &[]));
    }

    #[test]
    fn koszul_of_volume_twice_then_again() {
        let vol = PolyForm::<Q>::monomial_form(3, Poly::constant(3, ratio(1, 1)), &[0, 1, 2]);
        let k1 = vol.koszul().unwrap();
        let k2 = k1.koszul().unwrap();
        assert!(k2.is_zero());
        assert!(k2.koszul().unwrap().is_zero());
        assert!(matches!(
            PolyForm::<Q>::zero(3, 0, ValueSpace::R).koszul(),
            Err(FormError::DegreeUnderflow)
        ));
    }

    #[test]
    fn d_of_x_squared() {
        let w = PolyForm::<Q>::monomial_form(3, x(0).mul(&x(0)), &[]);
        let expected = PolyForm::monomial_form(3, x(0).scale(&ratio(2, 1)), &[0]);
        assert_eq!(w.d().unwrap(), expected);
        assert!(PolyForm::<Q>::zero(3, 3, ValueSpace::R).d().is_err());
    }

    #[test]
    fn divergence_of_position_two_form() {
        // 2-form with vector proxy (x, y, z): x dy∧dz − y dx∧dz + z dx∧dy
        let w = PolyForm::<Q>::monomial_form(3, x(0), &[1, 2])
            .sub(&PolyForm::monomial_form(3, x(1), &[0, 2]))
            .add(&PolyForm::monomial_form(3, x(2), &[0, 1]));
        let dw = w.d().unwrap();
        assert_eq!(*dw.coeff(0, 0), Poly::constant(3, ratio(3, 1)));
    }

    #[test]
    fn pullback_to_face_and_integrate() {
        // ∫ over the face x+y+z=1 (vertices e1,e2,e3, ordered) of dx∧dy = 1/2 (projected area)
        let w = PolyForm::<Q>::monomial_form(3, Poly::constant(3, ratio(1, 1)), &[0, 1]);
        let offset = vec![ratio(1, 1), ratio(0, 1), ratio(0, 1)];
        let lin = vec![
            vec![ratio(-1, 1), ratio(-1, 1)],
            vec![ratio(1, 1), ratio(0, 1)],
            vec![ratio(0, 1), ratio(0, 1)],
        ];
        let p = w.pullback(&offset, &lin, 2);
        assert_eq!(p.integrate().unwrap(), vec![ratio(1, 2)]);
    }

    #[test]
    fn wedge_pairs_vector_values() {
        let a = PolyForm::<Q>::monomial_form(3, Poly::constant(3, ratio(1, 1)), &[0])
            .with_value_vector(ValueSpace::V, &[ratio(1, 1), ratio(2, 1), ratio(3, 1)]);
        let b = PolyForm::<Q>::monomial_form(3, Poly::constant(3, ratio(1, 1)), &[1])
            .with_value_vector(ValueSpace::V, &[ratio(1, 1), ratio(1, 1), ratio(1, 1)]);
        let w = a.wedge(&b).unwrap();
        assert_eq!(w.values(), ValueSpace::R);
        assert_eq!(*w.coeff(0, 0), Poly::constant(3, ratio(6, 1)));
        let k = a.map_values(&crate::polyform::algebra::identity_rows(3), ValueSpace::K);
        assert!(matches!(a.wedge(&k), Err(FormError::IncompatibleValues(_, _))));
    }
}
