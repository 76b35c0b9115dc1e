//! Sparse multivariate polynomials in up to three variables.

use std::collections::BTreeMap;

use super::scalar::Scalar;

/// Exponent vector; entries beyond the polynomial's variable count are zero.
pub type Exponent = [u8; 3];

/// A polynomial in `nvars ≤ 3` variables with no stored zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T> {
    nvars: usize,
    terms: BTreeMap<Exponent, T>,
}

/// All exponents in `nvars` variables of total degree `≤ degree`, graded order.
pub fn exponents_up_to(nvars: usize, degree: usize) -> Vec<Exponent> {
    let mut out = Vec::new();
    for total in 0..=degree {
        exponents_of_degree(nvars, total, &mut out);
    }
    out
}

/// Exponents of total degree exactly `degree`.
pub fn exponents_of_degree(nvars: usize, degree: usize, out: &mut Vec<Exponent>) {
    match nvars {
        0 => {
            if degree == 0 {
                out.push([0, 0, 0]);
            }
        }
        1 => out.push([degree as u8, 0, 0]),
        2 => {
            for a in (0..=degree).rev() {
                out.push([a as u8, (degree - a) as u8, 0]);
            }
        }
        3 => {
            for a in (0..=degree).rev() {
                for b in (0..=degree - a).rev() {
                    out.push([a as u8, b as u8, (degree - a - b) as u8]);
                }
            }
        }
        _ => panic!("at most three variables are supported"),
    }
}

impl<T: Scalar> Poly<T> {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= 3, "at most three variables are supported");
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        Self::monomial(nvars, [0, 0, 0], c)
    }

    pub fn monomial(nvars: usize, exp: Exponent, c: T) -> Self {
        let mut p = Self::zero(nvars);
        debug_assert!(exp[nvars..].iter().all(|&e| e == 0));
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = [0u8; 3];
        e[i] = 1;
        Self::monomial(nvars, e, T::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &Exponent) -> T {
        self.terms.get(exp).cloned().unwrap_or_else(T::zero)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
    }

    pub fn add_term(&mut self, exp: Exponent, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Poly<T>, c: &T) {
        debug_assert_eq!(self.nvars, other.nvars);
        if c.is_zero() {
            return;
        }
        for (e, v) in &other.terms {
            self.add_term(*e, v.clone() * c.clone());
        }
    }

    pub fn add(&self, other: &Poly<T>) -> Poly<T> {
        let mut out = self.clone();
        out.add_scaled(other, &T::one());
        out
    }

    pub fn sub(&self, other: &Poly<T>) -> Poly<T> {
        let mut out = self.clone();
        out.add_scaled(other, &-T::one());
        out
    }

    pub fn neg(&self) -> Poly<T> {
        self.scale(&-T::one())
    }

    pub fn scale(&self, c: &T) -> Poly<T> {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (*e, v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly<T>) -> Poly<T> {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ea, va) in &self.terms {
            for (eb, vb) in &other.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(e, va.clone() * vb.clone());
            }
        }
        out
    }

    /// Multiplication by the coordinate `x_i`.
    pub fn mul_var(&self, i: usize) -> Poly<T> {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| {
                    let mut e = *e;
                    e[i] += 1;
                    (e, v.clone())
                })
                .collect(),
        }
    }

    /// Partial derivative with respect to `x_i`.
    pub fn deriv(&self, i: usize) -> Poly<T> {
        let mut out = Poly::zero(self.nvars);
        for (e, v) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = *e;
            d[i] -= 1;
            out.add_term(d, v.clone() * T::from_i64(e[i] as i64));
        }
        out
    }

    pub fn eval(&self, x: &[T]) -> T {
        let mut acc = T::zero();
        for (e, v) in &self.terms {
            let mut term = v.clone();
            for i in 0..self.nvars {
                for _ in 0..e[i] {
                    term *= x[i].clone();
                }
            }
            acc += term;
        }
        acc
    }

    /// Substitute `x_i = offset_i + Σ_j lin[i][j] t_j` (`m` new variables).
    pub fn substitute_affine(&self, offset: &[T], lin: &[Vec<T>], m: usize) -> Poly<T> {
        let mut out = Poly::zero(m);
        if self.terms.is_empty() {
            return out;
        }
        let max_deg = self
            .terms
            .keys()
            .flat_map(|e| e.iter().copied())
            .max()
            .unwrap_or(0) as usize;
        // powers[i][p] = (offset_i + lin_i · t)^p
        let mut powers: Vec<Vec<Poly<T>>> = Vec::with_capacity(self.nvars);
        for i in 0..self.nvars {
            let mut base = Poly::constant(m, offset[i].clone());
            for j in 0..m {
                base.add_scaled(&Poly::var(m, j), &lin[i][j]);
            }
            let mut row = vec![Poly::constant(m, T::one())];
            for p in 1..=max_deg {
                let next = row[p - 1].mul(&base);
                row.push(next);
            }
            powers.push(row);
        }
        for (e, v) in &self.terms {
            let mut term = Poly::constant(m, v.clone());
            for i in 0..self.nvars {
                if e[i] > 0 {
                    term = term.mul(&powers[i][e[i] as usize]);
                }
            }
            out.add_scaled(&term, &T::one());
        }
        out
    }

    /// Exact integral over the reference simplex `{t ≥ 0, Σ t ≤ 1}` in `nvars` dimensions.
    pub fn integrate_simplex(&self) -> T {
        let n = self.nvars;
        let mut acc = T::zero();
        for (e, v) in &self.terms {
            let total: usize = e.iter().map(|&x| x as usize).sum();
            let mut num = T::one();
            for &ei in e.iter().take(n) {
                num *= T::factorial(ei as usize);
            }
            acc += v.clone() * num / T::factorial(total + n);
        }
        acc
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        let mut out = Poly::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(*e, f(v));
        }
        out
    }

    pub fn to_f64(&self) -> Poly<f64> {
        self.map(|v| v.to_f64())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|v| v.magnitude()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyform::scalar::{ratio, Rational};

    #[test]
    fn exponent_counts_match_binomials() {
        assert_eq!(exponents_up_to(3, 2).len(), 10);
        assert_eq!(exponents_up_to(2, 3).len(), 10);
        assert_eq!(exponents_up_to(1, 4).len(), 5);
        assert_eq!(exponents_up_to(0, 4).len(), 1);
    }

    #[test]
    fn derivative_of_square() {
        let x = Poly::<Rational>::var(3, 0);
        let x2 = x.mul(&x);
        assert_eq!(x2.deriv(0), x.scale(&ratio(2, 1)));
        assert!(x2.deriv(1).is_zero());
    }

    #[test]
    fn simplex_integrals() {
        // ∫_T 1 = 1/6 and ∫_T x = 1/24 on the reference tetrahedron
        let one = Poly::<Rational>::constant(3, ratio(1, 1));
        assert_eq!(one.integrate_simplex(), ratio(1, 6));
        assert_eq!(Poly::<Rational>::var(3, 0).integrate_simplex(), ratio(1, 24));
        // ∫_0^1 t^3 = 1/4, triangle ∫ xy = 1/24
        assert_eq!(
            Poly::<Rational>::monomial(1, [3, 0, 0], ratio(1, 1)).integrate_simplex(),
            ratio(1, 4)
        );
        assert_eq!(
            Poly::<Rational>::monomial(2, [1, 1, 0], ratio(1, 1)).integrate_simplex(),
            ratio(1, 24)
        );
    }

    #[test]
    fn affine_substitution_matches_pointwise_evaluation() {
        let mut p = Poly::<Rational>::zero(3);
        p.add_term([2, 0, 1], ratio(3, 2));
        p.add_term([0, 1, 0], ratio(-1, 1));
        p.add_term([0, 0, 0], ratio(5, 1));
        let offset = vec![ratio(1, 2), ratio(1, 3), ratio(-1, 1)];
        let lin = vec![
            vec![ratio(1, 1), ratio(2, 1)],
            vec![ratio(0, 1), ratio(1, 1)],
            vec![ratio(3, 1), ratio(-1, 1)],
        ];
        let q = p.substitute_affine(&offset, &lin, 2);
        let t = [ratio::<Rational>(1, 5), ratio(2, 7)];
        let x: Vec<Rational> = (0..3)
            .map(|i| offset[i].clone() + lin[i][0].clone() * t[0].clone() + lin[i][1].clone() * t[1].clone())
            .collect();
        assert_eq!(q.eval(&t), p.eval(&x));
    }
}
