//! Matrix algebra on V = R³ and the algebraic operators K, S, S′ between
//! vector- and skew-valued forms.

use super::form::{basis_index, PolyForm, ValueSpace};
use super::poly::Poly;
use super::scalar::Scalar;
use super::FormError;

pub type Vec3<T> = [T; 3];
pub type Mat3<T> = [[T; 3]; 3];

pub fn mat3<T: Scalar>(f: impl Fn(usize, usize) -> T) -> Mat3<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| f(i, j)))
}

pub fn identity3<T: Scalar>() -> Mat3<T> {
    mat3(|i, j| if i == j { T::one() } else { T::zero() })
}

/// Identity as nested rows, handy for [`PolyForm::map_values`].
pub fn identity_rows<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

pub fn transpose<T: Scalar>(m: &Mat3<T>) -> Mat3<T> {
    mat3(|i, j| m[j][i].clone())
}

pub fn trace<T: Scalar>(m: &Mat3<T>) -> T {
    m[0][0].clone() + m[1][1].clone() + m[2][2].clone()
}

pub fn mat_add<T: Scalar>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T> {
    mat3(|i, j| a[i][j].clone() + b[i][j].clone())
}

pub fn mat_sub<T: Scalar>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T> {
    mat3(|i, j| a[i][j].clone() - b[i][j].clone())
}

pub fn mat_scale<T: Scalar>(a: &Mat3<T>, c: &T) -> Mat3<T> {
    mat3(|i, j| a[i][j].clone() * c.clone())
}

pub fn mat_mul<T: Scalar>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T> {
    mat3(|i, j| {
        let mut acc = T::zero();
        for l in 0..3 {
            acc += a[i][l].clone() * b[l][j].clone();
        }
        acc
    })
}

pub fn mat_vec<T: Scalar>(a: &Mat3<T>, v: &Vec3<T>) -> Vec3<T> {
    std::array::from_fn(|i| {
        let mut acc = T::zero();
        for j in 0..3 {
            acc += a[i][j].clone() * v[j].clone();
        }
        acc
    })
}

pub fn outer<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> Mat3<T> {
    mat3(|i, j| a[i].clone() * b[j].clone())
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x.clone() * y.clone();
    }
    acc
}

/// Frobenius product `a : b`.
pub fn frobenius<T: Scalar>(a: &Mat3<T>, b: &Mat3<T>) -> T {
    let mut acc = T::zero();
    for i in 0..3 {
        acc += dot(&a[i], &b[i]);
    }
    acc
}

pub fn cross<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

pub fn sym<T: Scalar>(m: &Mat3<T>) -> Mat3<T> {
    let half = T::one() / T::from_i64(2);
    mat3(|i, j| (m[i][j].clone() + m[j][i].clone()) * half.clone())
}

pub fn skw<T: Scalar>(m: &Mat3<T>) -> Mat3<T> {
    let half = T::one() / T::from_i64(2);
    mat3(|i, j| (m[i][j].clone() - m[j][i].clone()) * half.clone())
}

pub fn is_skew<T: Scalar>(m: &Mat3<T>) -> bool {
    let scale = m.iter().flatten().map(|v| v.magnitude()).fold(1.0, f64::max);
    (0..3).all(|i| (0..3).all(|j| (m[i][j].clone() + m[j][i].clone()).negligible(scale)))
}

pub fn is_symmetric<T: Scalar>(m: &Mat3<T>) -> bool {
    let scale = m.iter().flatten().map(|v| v.magnitude()).fold(1.0, f64::max);
    (0..3).all(|i| (0..3).all(|j| (m[i][j].clone() - m[j][i].clone()).negligible(scale)))
}

/// Axial vector of a skew matrix.
pub fn vect<T: Scalar>(q: &Mat3<T>) -> Result<Vec3<T>, FormError> {
    if !is_skew(q) {
        return Err(FormError::NotSkew);
    }
    Ok(vect_unchecked(q))
}

/// Axial vector of the skew part's generator; no skewness check.
pub fn vect_unchecked<T: Scalar>(q: &Mat3<T>) -> Vec3<T> {
    [q[2][1].clone(), q[0][2].clone(), q[1][0].clone()]
}

/// The skew matrix `w ↦ v × w`.
pub fn vect_inv<T: Scalar>(v: &Vec3<T>) -> Mat3<T> {
    let z = T::zero;
    [
        [z(), -v[2].clone(), v[1].clone()],
        [v[2].clone(), z(), -v[0].clone()],
        [-v[1].clone(), v[0].clone(), z()],
    ]
}

/// `Ξμ = μᵀ − tr(μ) δ`.
pub fn xi<T: Scalar>(m: &Mat3<T>) -> Mat3<T> {
    let tr = trace(m);
    mat3(|i, j| {
        let t = m[j][i].clone();
        if i == j {
            t - tr.clone()
        } else {
            t
        }
    })
}

/// `Ξ⁻¹μ = μᵀ − ½ tr(μ) δ`.
pub fn xi_inv<T: Scalar>(m: &Mat3<T>) -> Mat3<T> {
    let tr = trace(m) / T::from_i64(2);
    mat3(|i, j| {
        let t = m[j][i].clone();
        if i == j {
            t - tr.clone()
        } else {
            t
        }
    })
}

/// Both sides of `a × b = −2 vect skw(a bᵀ)`, the right side computed with the supplied `vect`.
pub fn cross_skew_check_with<T: Scalar>(
    a: &Vec3<T>,
    b: &Vec3<T>,
    vect_fn: impl Fn(&Mat3<T>) -> Vec3<T>,
) -> (Vec3<T>, Vec3<T>) {
    let lhs = cross(a, b);
    let w = vect_fn(&skw(&outer(a, b)));
    let rhs = std::array::from_fn(|i| w[i].clone() * T::from_i64(-2));
    (lhs, rhs)
}

pub fn cross_skew_check<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> (Vec3<T>, Vec3<T>) {
    cross_skew_check_with(a, b, vect_unchecked)
}

/// Matrix of `v ↦ vect(2 skw(b vᵀ))` in axial coordinates.
fn k_matrix<T: Scalar>(b: &Vec3<T>) -> Vec<Vec<T>> {
    let mut rows = vec![vec![T::zero(); 3]; 3];
    for j in 0..3 {
        let mut e: Vec3<T> = std::array::from_fn(|_| T::zero());
        e[j] = T::one();
        let m = mat_scale(&skw(&outer(b, &e)), &T::from_i64(2));
        let col = vect_unchecked(&m);
        for i in 0..3 {
            rows[i][j] = col[i].clone();
        }
    }
    rows
}

fn expect_values<T: Scalar>(w: &PolyForm<T>, expected: ValueSpace) -> Result<(), FormError> {
    if w.values() != expected {
        return Err(FormError::WrongValues {
            expected,
            found: w.values(),
        });
    }
    Ok(())
}

fn unit<T: Scalar>(l: usize) -> Vec3<T> {
    std::array::from_fn(|i| if i == l { T::one() } else { T::zero() })
}

/// `(Kω)_x = K_x ω_x` with `K_x v = 2 skw(x vᵀ)`.
pub fn k_op<T: Scalar>(w: &PolyForm<T>) -> Result<PolyForm<T>, FormError> {
    expect_values(w, ValueSpace::V)?;
    if w.dim() != 3 {
        return Err(FormError::DimensionMismatch(w.dim(), 3));
    }
    let mut out = PolyForm::zero(3, w.k(), ValueSpace::K);
    for l in 0..3 {
        let mapped = w.map_values(&k_matrix(&unit(l)), ValueSpace::K);
        out.add_scaled(&mapped.mul_poly(&Poly::var(3, l)), &T::one());
    }
    Ok(out)
}

/// `S = dK − Kd`, evaluated algebraically: `Sω = Σ_l dx_l ∧ K_{b_l} ω`.
pub fn s_op<T: Scalar>(w: &PolyForm<T>) -> Result<PolyForm<T>, FormError> {
    let n = w.dim();
    let cols: Vec<Vec3<T>> = (0..n).map(unit).collect();
    s_op_frame(w, &cols)
}

/// `S` expressed in coordinates `t` with `x = x₀ + B t`; `frame[l]` is the column `B e_l`.
pub fn s_op_frame<T: Scalar>(w: &PolyForm<T>, frame: &[Vec3<T>]) -> Result<PolyForm<T>, FormError> {
    expect_values(w, ValueSpace::V)?;
    let n = w.dim();
    if w.k() >= n {
        return Err(FormError::DegreeOverflow(w.k() + 1));
    }
    let mut out = PolyForm::zero(n, w.k() + 1, ValueSpace::K);
    for (l, b) in frame.iter().enumerate().take(n) {
        let dxl = PolyForm::monomial_form(n, Poly::constant(n, T::one()), &[l]);
        let mapped = w.map_values(&k_matrix(b), ValueSpace::K);
        out.add_scaled(&dxl.wedge(&mapped)?, &T::one());
    }
    Ok(out)
}

/// `(S′μ)(v_1..v_{k+1}) = −2 Σ_j (−1)^{j+1} μ(.., v̂_j, ..) v_j`.
pub fn s_prime_op<T: Scalar>(w: &PolyForm<T>) -> Result<PolyForm<T>, FormError> {
    expect_values(w, ValueSpace::K)?;
    let n = w.dim();
    if w.k() >= n {
        return Err(FormError::DegreeOverflow(w.k() + 1));
    }
    let mut out = PolyForm::zero(n, w.k() + 1, ValueSpace::V);
    for l in 0..n {
        // value map q ↦ vect⁻¹(q) e_l
        let mut map = vec![vec![T::zero(); 3]; 3];
        for j in 0..3 {
            let col: Vec3<T> = mat_vec(&vect_inv(&unit(j)), &unit(l));
            for i in 0..3 {
                map[i][j] = col[i].clone() * T::from_i64(-2);
            }
        }
        let dxl = PolyForm::monomial_form(n, Poly::constant(n, T::one()), &[l]);
        out.add_scaled(&dxl.wedge(&w.map_values(&map, ValueSpace::V))?, &T::one());
    }
    Ok(out)
}

/// Inverse of `S₁: Λ¹(V) → Λ²(K)` on R³:
/// `(S₁⁻¹ω)(v₁) × v₂ · v₃ = ½[vect ω(v₂,v₃)·v₁ − vect ω(v₁,v₂)·v₃ + vect ω(v₁,v₃)·v₂]`.
pub fn s1_inv<T: Scalar>(w: &PolyForm<T>) -> Result<PolyForm<T>, FormError> {
    expect_values(w, ValueSpace::K)?;
    if w.dim() != 3 || w.k() != 2 {
        return Err(FormError::DegreeOverflow(w.k()));
    }
    // axial component c of ω(e_a, e_b)
    let pair = |a: usize, b: usize, c: usize| -> Poly<T> {
        if a == b {
            Poly::zero(3)
        } else if a < b {
            w.coeff(c, basis_index(3, &[a, b])).clone()
        } else {
            w.coeff(c, basis_index(3, &[b, a])).neg()
        }
    };
    let half = T::one() / T::from_i64(2);
    let mut out = PolyForm::zero(3, 1, ValueSpace::V);
    for a in 0..3 {
        for i in 0..3 {
            // e_b × e_c = e_i
            let (b, c) = ((i + 1) % 3, (i + 2) % 3);
            let val = pair(b, c, a).sub(&pair(a, b, c)).add(&pair(a, c, b));
            *out.coeff_mut(i, a) = val.scale(&half);
        }
    }
    Ok(out)
}

/// `Υ₁F(v) = Fv` as a V-valued 1-form.
pub fn upsilon1<T: Scalar>(f: &super::MatrixField<T>) -> PolyForm<T> {
    let mut out = PolyForm::zero(3, 1, ValueSpace::V);
    for c in 0..3 {
        for l in 0..3 {
            *out.coeff_mut(c, l) = f.entry(c, l).clone();
        }
    }
    out
}

/// `F ↦ ω` with `ω(v) = vect⁻¹(Fv)`, a K-valued 1-form.
pub fn matrix_proxy_1<T: Scalar>(f: &super::MatrixField<T>) -> PolyForm<T> {
    upsilon1(f).map_values(&identity_rows(3), ValueSpace::K)
}

/// `F ↦ μ` with `μ(v₁,v₂) = F(v₁ × v₂)`, a V-valued 2-form.
pub fn matrix_proxy_2<T: Scalar>(f: &super::MatrixField<T>) -> PolyForm<T> {
    let mut out = PolyForm::zero(3, 2, ValueSpace::V);
    for c in 0..3 {
        // basis order dx01, dx02, dx12 ↔ columns 2, −1, 0
        *out.coeff_mut(c, 0) = f.entry(c, 2).clone();
        *out.coeff_mut(c, 1) = f.entry(c, 1).neg();
        *out.coeff_mut(c, 2) = f.entry(c, 0).clone();
    }
    out
}

/// `Υ₂F(v₁,v₂) = vect⁻¹ F(v₁ × v₂)`, a K-valued 2-form.
pub fn upsilon2<T: Scalar>(f: &super::MatrixField<T>) -> PolyForm<T> {
    matrix_proxy_2(f).map_values(&identity_rows(3), ValueSpace::K)
}

fn expect_shape<T: Scalar>(w: &PolyForm<T>, k: usize, values: &[ValueSpace]) -> Result<(), FormError> {
    if !values.contains(&w.values()) {
        return Err(FormError::WrongValues {
            expected: values[0],
            found: w.values(),
        });
    }
    if w.dim() != 3 || w.k() != k {
        return Err(FormError::DegreeOverflow(w.k()));
    }
    Ok(())
}

/// Inverse of [`matrix_proxy_1`] / [`upsilon1`].
pub fn matrix_from_1form<T: Scalar>(w: &PolyForm<T>) -> Result<super::MatrixField<T>, FormError> {
    expect_shape(w, 1, &[ValueSpace::K, ValueSpace::V])?;
    Ok(super::MatrixField::from_fn(|c, l| w.coeff(c, l).clone()))
}

/// Inverse of [`matrix_proxy_2`] / [`upsilon2`].
pub fn matrix_from_2form<T: Scalar>(w: &PolyForm<T>) -> Result<super::MatrixField<T>, FormError> {
    expect_shape(w, 2, &[ValueSpace::V, ValueSpace::K])?;
    Ok(super::MatrixField::from_fn(|c, l| match l {
        0 => w.coeff(c, 2).clone(),
        1 => w.coeff(c, 1).neg(),
        _ => w.coeff(c, 0).clone(),
    }))
}

/// A vector field as the 3-form `u dx₀∧dx₁∧dx₂` with values in `values`.
pub fn vector_to_3form<T: Scalar>(u: &super::VectorField<T>, values: ValueSpace) -> PolyForm<T> {
    PolyForm::from_coeffs(3, 3, values, u.to_vec())
}

pub fn vector_from_3form<T: Scalar>(w: &PolyForm<T>) -> Result<super::VectorField<T>, FormError> {
    expect_shape(w, 3, &[ValueSpace::V, ValueSpace::K])?;
    Ok(std::array::from_fn(|c| w.coeff(c, 0).clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyform::scalar::{int, Rational};

    type Q = Rational;

    fn v(a: i64, b: i64, c: i64) -> Vec3<Q> {
        [int(a), int(b), int(c)]
    }

    #[test]
    fn vect_of_displayed_matrix() {
        let q: Mat3<Q> = [
            [int(0), int(-3), int(2)],
            [int(3), int(0), int(-1)],
            [int(-2), int(1), int(0)],
        ];
        assert_eq!(vect(&q).unwrap(), v(1, 2, 3));
        assert_eq!(vect_inv(&v(1, 2, 3)), q);
    }

    #[test]
    fn vect_rejects_non_skew() {
        assert_eq!(vect(&identity3::<Q>()), Err(FormError::NotSkew));
    }

    #[test]
    fn vect_inv_is_cross_product() {
        assert_eq!(mat_vec(&vect_inv(&v(0, 0, 1)), &v(1, 0, 0)), v(0, 1, 0));
    }

    #[test]
    fn xi_of_identity() {
        let d = identity3::<Q>();
        assert_eq!(xi(&d), mat_scale(&d, &int(-2)));
    }

    #[test]
    fn cross_skew_worked_instances() {
        let (l, r) = cross_skew_check(&v(1, 0, 0), &v(0, 1, 0));
        assert_eq!(l, v(0, 0, 1));
        assert_eq!(r, v(0, 0, 1));
        let (l, r) = cross_skew_check(&v(2, -1, 5), &v(2, -1, 5));
        assert_eq!(l, v(0, 0, 0));
        assert_eq!(r, v(0, 0, 0));
    }

    #[test]
    fn k_at_e1_of_e2() {
        let w = PolyForm::<Q>::monomial_form(3, Poly::constant(3, int(1)), &[])
            .with_value_vector(ValueSpace::V, &v(0, 1, 0));
        let kw = k_op(&w).unwrap();
        let at = kw.eval_coeffs(&v(1, 0, 0));
        let expected = vect(&mat_scale(&skw(&outer(&v(1, 0, 0), &v(0, 1, 0))), &int(2))).unwrap();
        assert_eq!(at, expected.to_vec());
        assert!(k_op(&PolyForm::<Q>::zero(3, 0, ValueSpace::V)).unwrap().is_zero());
        assert!(k_op(&kw).is_err());
    }

    #[test]
    fn s_equals_dk_minus_kd_on_constants() {
        let w = PolyForm::<Q>::monomial_form(3, Poly::constant(3, int(1)), &[])
            .with_value_vector(ValueSpace::V, &v(3, -1, 2));
        let dk = k_op(&w).unwrap().d().unwrap();
        let kd = k_op(&w.d().unwrap()).unwrap();
        assert_eq!(dk.sub(&kd), s_op(&w).unwrap());
    }

    #[test]
    fn s_rejects_top_degree() {
        assert!(s_op(&PolyForm::<Q>::zero(3, 3, ValueSpace::V)).is_err());
        assert!(s_prime_op(&PolyForm::<Q>::zero(3, 3, ValueSpace::K)).is_err());
    }

    #[test]
    fn s1_has_full_rank_on_constants() {
        for a in 0..3 {
            for c in 0..3 {
                let mut w = PolyForm::<Q>::zero(3, 1, ValueSpace::V);
                *w.coeff_mut(c, a) = Poly::constant(3, int(1));
                let back = s1_inv(&s_op(&w).unwrap()).unwrap();
                assert_eq!(back, w);
            }
        }
    }

    #[test]
    fn proxy2_of_identity() {
        let id = crate::polyform::MatrixField::<Q>::constant(&identity3());
        let mu = matrix_proxy_2(&id);
        let at = mu.at(&v(0, 0, 0));
        let val = at.evaluate(&[v(1, 0, 0).to_vec(), v(0, 1, 0).to_vec()]);
        assert_eq!(val, v(0, 0, 1).to_vec());
        assert_eq!(matrix_from_2form(&mu).unwrap(), id);
    }
}
