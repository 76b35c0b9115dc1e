//! Collapsed-coordinate Gauss–Jacobi rules on unit simplices.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use faer::{Mat, Side};

use super::AssemblyError;

/// Highest polynomial degree for which rules are provided.
pub const MAX_DEGREE: usize = 10;

/// Points and positive weights on the unit `dim`-simplex.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub dim: usize,
    pub degree: usize,
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(&[f64; 3]) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `n`-point Gauss–Jacobi rule on `[0, 1]` for the weight `(1 − s)^alpha`, by Golub–Welsch.
pub fn gauss_jacobi(n: usize, alpha: u32) -> (Vec<f64>, Vec<f64>) {
    let a = f64::from(alpha);
    let mut jac = Mat::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + a;
        // recurrence coefficients of Jacobi(α, 0) on [−1, 1]
        jac[(k, k)] = if k == 0 { -a / (a + 2.0) } else { -(a * a) / (s * (s + 2.0)) };
        if k + 1 < n {
            let m = kf + 1.0;
            let t = 2.0 * m + a;
            let off = (4.0 * m * (m + a) * m * (m + a) / (t * t * (t + 1.0) * (t - 1.0))).sqrt();
            jac[(k, k + 1)] = off;
            jac[(k + 1, k)] = off;
        }
    }
    let mu0 = 2f64.powf(a + 1.0) * factorial(alpha) / factorial(alpha + 1) ;
    let evd = jac.self_adjoint_eigen(Side::Lower).expect("tridiagonal eigenproblem");
    let (vals, vecs) = (evd.S(), evd.U());
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let x = vals.column_vector()[i];
        let v0 = vecs[(0, i)];
        nodes.push((1.0 + x) / 2.0);
        weights.push(mu0 * v0 * v0 / 2f64.powf(a + 1.0));
    }
    (nodes, weights)
}

fn build(dim: usize, degree: usize) -> QuadratureRule {
    let n = degree / 2 + 1;
    let mut points = Vec::new();
    let mut weights = Vec::new();
    match dim {
        0 => {
            points.push([0.0; 3]);
            weights.push(1.0);
        }
        1 => {
            let (x, w) = gauss_jacobi(n, 0);
            for (xi, wi) in x.into_iter().zip(w) {
                points.push([xi, 0.0, 0.0]);
                weights.push(wi);
            }
        }
        2 => {
            let (x1, w1) = gauss_jacobi(n, 1);
            let (x2, w2) = gauss_jacobi(n, 0);
            for (a, wa) in x1.iter().zip(&w1) {
                for (b, wb) in x2.iter().zip(&w2) {
                    points.push([*a, b * (1.0 - a), 0.0]);
                    weights.push(wa * wb);
                }
            }
        }
        _ => {
            let (x1, w1) = gauss_jacobi(n, 2);
            let (x2, w2) = gauss_jacobi(n, 1);
            let (x3, w3) = gauss_jacobi(n, 0);
            for (a, wa) in x1.iter().zip(&w1) {
                for (b, wb) in x2.iter().zip(&w2) {
                    for (c, wc) in x3.iter().zip(&w3) {
                        points.push([*a, b * (1.0 - a), c * (1.0 - a) * (1.0 - b)]);
                        weights.push(wa * wb * wc);
                    }
                }
            }
        }
    }
    QuadratureRule {
        dim,
        degree,
        points,
        weights,
    }
}

/// Rule on the unit `dim`-simplex exact for polynomials of degree `degree`, cached.
pub fn simplex_rule(dim: usize, degree: usize) -> Result<Arc<QuadratureRule>, AssemblyError> {
    if degree > MAX_DEGREE {
        return Err(AssemblyError::QuadratureDegree(degree));
    }
    if dim > 3 {
        return Err(AssemblyError::QuadratureDimension(dim));
    }
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<QuadratureRule>>>> = OnceLock::new();
    let mut map = CACHE.get_or_init(Default::default).lock().expect("quadrature cache");
    Ok(map.entry((dim, degree)).or_insert_with(|| Arc::new(build(dim, degree))).clone())
}

/// Rule on the reference tetrahedron.
pub fn quadrature_rule(degree: usize) -> Result<Arc<QuadratureRule>, AssemblyError> {
    simplex_rule(3, degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyform::{Poly, Rational, Scalar};
    use rand::{Rng, SeedableRng};

    #[test]
    fn volume_and_first_moment() {
        let q = quadrature_rule(1).unwrap();
        assert!((q.integrate(|_| 1.0) - 1.0 / 6.0).abs() < 1e-15);
        assert!((q.integrate(|p| p[0]) - 1.0 / 24.0).abs() < 1e-15);
        assert!(q.weights.iter().all(|w| *w > 0.0));
    }

    #[test]
    fn exact_on_random_polynomials() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for dim in 1..=3 {
            for degree in 0..=MAX_DEGREE {
                let mut p = Poly::<Rational>::zero(dim);
                for e in crate::polyform::poly::exponents_up_to(dim, degree) {
                    p.add_term(e, Rational::from_i64(rng.gen_range(-9..=9)));
                }
                let exact = p.integrate_simplex().to_f64();
                let pf = p.to_f64();
                let q = simplex_rule(dim, degree).unwrap();
                let approx = q.integrate(|x| pf.eval(&x[..dim]));
                assert!((approx - exact).abs() < 1e-13 * exact.abs().max(1.0), "dim {dim} degree {degree}");
            }
        }
    }

    #[test]
    fn degree_limit() {
        assert!(quadrature_rule(MAX_DEGREE + 1).is_err());
    }
}
