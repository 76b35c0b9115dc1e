//! Polynomial vector and matrix fields on R³ with the classical differential operators.

use super::algebra::Mat3;
use super::poly::Poly;
use super::scalar::Scalar;

pub type VectorField<T> = [Poly<T>; 3];

/// Gradient of a scalar polynomial.
pub fn grad<T: Scalar>(p: &Poly<T>) -> VectorField<T> {
    std::array::from_fn(|i| p.deriv(i))
}

pub fn curl<T: Scalar>(w: &VectorField<T>) -> VectorField<T> {
    [
        w[2].deriv(1).sub(&w[1].deriv(2)),
        w[0].deriv(2).sub(&w[2].deriv(0)),
        w[1].deriv(0).sub(&w[0].deriv(1)),
    ]
}

pub fn div<T: Scalar>(w: &VectorField<T>) -> Poly<T> {
    w[0].deriv(0).add(&w[1].deriv(1)).add(&w[2].deriv(2))
}

/// A 3×3 matrix of polynomials in three variables.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixField<T> {
    entries: [[Poly<T>; 3]; 3],
}

impl<T: Scalar> MatrixField<T> {
    pub fn from_fn(f: impl Fn(usize, usize) -> Poly<T>) -> Self {
        MatrixField {
            entries: std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))),
        }
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| Poly::zero(3))
    }

    pub fn constant(m: &Mat3<T>) -> Self {
        Self::from_fn(|i, j| Poly::constant(3, m[i][j].clone()))
    }

    pub fn from_rows(rows: [VectorField<T>; 3]) -> Self {
        MatrixField { entries: rows }
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly<T> {
        &self.entries[i][j]
    }

    pub fn row(&self, i: usize) -> &VectorField<T> {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|p| p.is_zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.entries.iter().flatten().filter_map(|p| p.degree()).max()
    }

    pub fn eval(&self, x: &[T]) -> Mat3<T> {
        std::array::from_fn(|i| std::array::from_fn(|j| self.entries[i][j].eval(x)))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j].add(&o.entries[i][j]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j].sub(&o.entries[i][j]))
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_fn(|i, j| self.entries[i][j].scale(c))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i].clone())
    }

    pub fn trace(&self) -> Poly<T> {
        self.entries[0][0].add(&self.entries[1][1]).add(&self.entries[2][2])
    }

    pub fn sym(&self) -> Self {
        let half = T::one() / T::from_i64(2);
        self.add(&self.transpose()).scale(&half)
    }

    pub fn skw(&self) -> Self {
        let half = T::one() / T::from_i64(2);
        self.sub(&self.transpose()).scale(&half)
    }

    pub fn is_symmetric(&self) -> bool {
        self.skw().is_zero()
    }

    /// `F − c·tr(F) δ`, shared by Ξ and Ξ⁻¹ after transposition.
    fn minus_trace(&self, c: &T) -> Self {
        let tr = self.trace().scale(c);
        Self::from_fn(|i, j| {
            if i == j {
                self.entries[i][j].sub(&tr)
            } else {
                self.entries[i][j].clone()
            }
        })
    }

    /// `ΞF = Fᵀ − tr(F) δ` pointwise.
    pub fn xi(&self) -> Self {
        self.transpose().minus_trace(&T::one())
    }

    /// `Ξ⁻¹F = Fᵀ − ½ tr(F) δ` pointwise.
    pub fn xi_inv(&self) -> Self {
        self.transpose().minus_trace(&(T::one() / T::from_i64(2)))
    }

    /// Row-wise gradient of a vector field.
    pub fn grad(u: &VectorField<T>) -> Self {
        MatrixField {
            entries: std::array::from_fn(|i| grad(&u[i])),
        }
    }

    /// Symmetric gradient `ε(u)`.
    pub fn eps(u: &VectorField<T>) -> Self {
        Self::grad(u).sym()
    }

    /// The skew field `vect⁻¹(u)`.
    pub fn skew_from_axial(u: &VectorField<T>) -> Self {
        let z = || Poly::zero(3);
        MatrixField {
            entries: [
                [z(), u[2].neg(), u[1].clone()],
                [u[2].clone(), z(), u[0].neg()],
                [u[1].neg(), u[0].clone(), z()],
            ],
        }
    }

    /// Row-wise divergence.
    pub fn div(&self) -> VectorField<T> {
        std::array::from_fn(|i| div(&self.entries[i]))
    }

    /// Row-wise curl.
    pub fn curl(&self) -> Self {
        MatrixField {
            entries: std::array::from_fn(|i| curl(&self.entries[i])),
        }
    }

    /// `Jτ = curl Ξ⁻¹ curl τ`.
    pub fn j_op(&self) -> Self {
        self.curl().xi_inv().curl()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.entries.iter().flatten().map(|p| p.max_abs_coeff()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyform::scalar::{int, Rational};

    type Q = Rational;

    fn x(i: usize) -> Poly<Q> {
        Poly::var(3, i)
    }

    #[test]
    fn j_of_symmetric_gradient_of_cubic() {
        let u: VectorField<Q> = [
            x(0).mul(&x(1)).mul(&x(2)),
            x(1).mul(&x(1)).mul(&x(0)).scale(&int(3)),
            x(2).mul(&x(2)).mul(&x(2)).sub(&x(0)),
        ];
        assert!(MatrixField::eps(&u).j_op().is_zero());
    }

    #[test]
    fn j_vanishes_on_skew_fields() {
        let u: VectorField<Q> = [x(0).mul(&x(1)), x(2).mul(&x(2)), x(0).mul(&x(0)).mul(&x(2))];
        assert!(MatrixField::skew_from_axial(&u).j_op().is_zero());
    }

    #[test]
    fn xi_pair_is_inverse() {
        let f = MatrixField::<Q>::from_fn(|i, j| x(i).mul(&x(j)).add(&Poly::constant(3, int((i * 3 + j) as i64))));
        assert_eq!(f.xi().xi_inv(), f);
        assert_eq!(f.xi_inv().xi(), f);
    }
}
