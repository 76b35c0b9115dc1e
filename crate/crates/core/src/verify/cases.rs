//! Manufactured solutions on the unit cube.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::assembly::Material;
use crate::polyform::{skw, vect_unchecked, Mat3, Poly};

use super::VerifyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseId {
    /// `u_i = c_i sin(πx) sin(πy) sin(πz)`.
    Trig,
    /// `u = c · x(1−x) y(1−y) z(1−z)`.
    PolyQuadratic,
    /// `u = ∇φ + a × x` with cubic `φ`: the stress is linear and the rotation constant.
    PolyLinear,
}

impl CaseId {
    pub const ALL: [CaseId; 3] = [CaseId::Trig, CaseId::PolyQuadratic, CaseId::PolyLinear];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::Trig => "trig",
            CaseId::PolyQuadratic => "poly-quadratic",
            CaseId::PolyLinear => "poly-linear",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseId {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| VerifyError::UnknownCase(s.to_string()))
    }
}

const TRIG_C: [f64; 3] = [1.0, 0.5, -0.75];
const BUBBLE_C: [f64; 3] = [64.0, -32.0, 48.0];
const ROTATION_A: [f64; 3] = [0.3, -0.2, 0.5];

#[derive(Clone, Debug)]
enum Field {
    Trig([f64; 3]),
    Poly {
        u: [Poly<f64>; 3],
        grad: [[Poly<f64>; 3]; 3],
        hess: [[[Poly<f64>; 3]; 3]; 3],
    },
}

impl Field {
    fn poly(u: [Poly<f64>; 3]) -> Self {
        let grad = std::array::from_fn(|i| std::array::from_fn(|j| u[i].deriv(j)));
        let hess = std::array::from_fn(|i| std::array::from_fn(|j| std::array::from_fn(|k| u[i].deriv(j).deriv(k))));
        Field::Poly { u, grad, hess }
    }
}

/// An analytic displacement with the derived stress, rotation and load.
#[derive(Clone, Debug)]
pub struct ManufacturedCase {
    pub id: CaseId,
    pub lambda: f64,
    pub mu: f64,
    field: Field,
}

fn x(i: usize) -> Poly<f64> {
    Poly::var(3, i)
}

fn one_minus(p: &Poly<f64>) -> Poly<f64> {
    Poly::constant(3, 1.0).sub(p)
}

impl ManufacturedCase {
    pub fn new(id: CaseId, lambda: f64, mu: f64) -> Result<Self, VerifyError> {
        Material::isotropic(lambda, mu)?;
        let field = match id {
            CaseId::Trig => Field::Trig(TRIG_C),
            CaseId::PolyQuadratic => {
                let bubble = (0..3).fold(Poly::constant(3, 1.0), |acc, i| acc.mul(&x(i)).mul(&one_minus(&x(i))));
                Field::poly(std::array::from_fn(|i| bubble.scale(&BUBBLE_C[i])))
            }
            CaseId::PolyLinear => {
                let (a, b, c) = (x(0), x(1), x(2));
                // ∇((x³+y³+z³)/3 + xyz) + a × x
                let grad_phi = [
                    a.mul(&a).add(&b.mul(&c)),
                    b.mul(&b).add(&a.mul(&c)),
                    c.mul(&c).add(&a.mul(&b)),
                ];
                let r = ROTATION_A;
                let rot = [
                    b.scale(&-r[2]).add(&c.scale(&r[1])),
                    c.scale(&-r[0]).add(&a.scale(&r[2])),
                    a.scale(&-r[1]).add(&b.scale(&r[0])),
                ];
                Field::poly(std::array::from_fn(|i| grad_phi[i].add(&rot[i])))
            }
        };
        Ok(ManufacturedCase { id, lambda, mu, field })
    }

    pub fn material(&self) -> Material {
        Material::Isotropic {
            lambda: self.lambda,
            mu: self.mu,
        }
    }

    /// Whether `u` vanishes on the boundary of the unit cube.
    pub fn is_clamped(&self) -> bool {
        self.id != CaseId::PolyLinear
    }

    pub fn u(&self, p: &[f64; 3]) -> [f64; 3] {
        match &self.field {
            Field::Trig(c) => {
                let s = (0..3).map(|i| (PI * p[i]).sin()).product::<f64>();
                c.map(|ci| ci * s)
            }
            Field::Poly { u, .. } => std::array::from_fn(|i| u[i].eval(p)),
        }
    }

    /// `∂_j u_i`.
    pub fn grad(&self, p: &[f64; 3]) -> Mat3<f64> {
        match &self.field {
            Field::Trig(c) => {
                let s: [f64; 3] = std::array::from_fn(|i| (PI * p[i]).sin());
                let co: [f64; 3] = std::array::from_fn(|i| PI * (PI * p[i]).cos());
                let ds: [f64; 3] = std::array::from_fn(|j| (0..3).map(|k| if k == j { co[k] } else { s[k] }).product());
                std::array::from_fn(|i| ds.map(|d| c[i] * d))
            }
            Field::Poly { grad, .. } => std::array::from_fn(|i| std::array::from_fn(|j| grad[i][j].eval(p))),
        }
    }

    /// `∂_j ∂_k u_i`.
    fn hessian(&self, p: &[f64; 3]) -> [[[f64; 3]; 3]; 3] {
        match &self.field {
            Field::Trig(c) => {
                let s: [f64; 3] = std::array::from_fn(|i| (PI * p[i]).sin());
                let co: [f64; 3] = std::array::from_fn(|i| PI * (PI * p[i]).cos());
                let factor = |l: usize, j: usize, k: usize| -> f64 {
                    match (l == j, l == k) {
                        (true, true) => -PI * PI * s[l],
                        (true, false) | (false, true) => co[l],
                        (false, false) => s[l],
                    }
                };
                let d2: Mat3<f64> = std::array::from_fn(|j| std::array::from_fn(|k| (0..3).map(|l| factor(l, j, k)).product()));
                std::array::from_fn(|i| d2.map(|row| row.map(|v| c[i] * v)))
            }
            Field::Poly { hess, .. } => {
                std::array::from_fn(|i| std::array::from_fn(|j| std::array::from_fn(|k| hess[i][j][k].eval(p))))
            }
        }
    }

    /// `σ = 2μ ε(u) + λ tr ε(u) I`.
    pub fn sigma(&self, p: &[f64; 3]) -> Mat3<f64> {
        let g = self.grad(p);
        let tr = g[0][0] + g[1][1] + g[2][2];
        std::array::from_fn(|i| {
            std::array::from_fn(|j| self.mu * (g[i][j] + g[j][i]) + if i == j { self.lambda * tr } else { 0.0 })
        })
    }

    /// `p = skw grad u`.
    pub fn rotation(&self, p: &[f64; 3]) -> Mat3<f64> {
        skw(&self.grad(p))
    }

    /// Axial vector of the rotation, the proxy of the K-valued 3-form.
    pub fn rotation_axial(&self, p: &[f64; 3]) -> [f64; 3] {
        vect_unchecked(&self.rotation(p))
    }

    /// `f = div σ`.
    pub fn load(&self, p: &[f64; 3]) -> [f64; 3] {
        let h = self.hessian(p);
        std::array::from_fn(|i| {
            let lap: f64 = (0..3).map(|j| h[i][j][j]).sum();
            let grad_div: f64 = (0..3).map(|j| h[j][i][j]).sum();
            self.mu * (lap + grad_div) + self.lambda * grad_div
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_div_sigma(c: &ManufacturedCase, p: [f64; 3]) -> [f64; 3] {
        let h = 1e-5;
        std::array::from_fn(|i| {
            (0..3)
                .map(|j| {
                    let (mut a, mut b) = (p, p);
                    a[j] += h;
                    b[j] -= h;
                    (c.sigma(&a)[i][j] - c.sigma(&b)[i][j]) / (2.0 * h)
                })
                .sum()
        })
    }

    #[test]
    fn load_is_divergence_of_stress() {
        for id in CaseId::ALL {
            let c = ManufacturedCase::new(id, 1.5, 0.7).unwrap();
            let p = [0.31, 0.62, 0.17];
            let f = c.load(&p);
            let fd = fd_div_sigma(&c, p);
            for i in 0..3 {
                assert!((f[i] - fd[i]).abs() < 1e-5 * (1.0 + f[i].abs()), "{id}: {f:?} vs {fd:?}");
            }
        }
    }

    #[test]
    fn clamped_cases_vanish_on_boundary() {
        for id in [CaseId::Trig, CaseId::PolyQuadratic] {
            let c = ManufacturedCase::new(id, 1.0, 1.0).unwrap();
            for p in [[0.0, 0.3, 0.4], [1.0, 0.5, 0.5], [0.2, 1.0, 0.9], [0.7, 0.1, 0.0]] {
                assert!(c.u(&p).iter().all(|v| v.abs() < 1e-14));
            }
        }
    }

    #[test]
    fn linear_case_has_linear_stress() {
        let c = ManufacturedCase::new(CaseId::PolyLinear, 1.0, 1.0).unwrap();
        let (a, b) = ([0.1, 0.2, 0.3], [0.5, 0.9, 0.4]);
        let mid = [0.3, 0.55, 0.35];
        let (sa, sb, sm) = (c.sigma(&a), c.sigma(&b), c.sigma(&mid));
        for i in 0..3 {
            for j in 0..3 {
                assert!((0.5 * (sa[i][j] + sb[i][j]) - sm[i][j]).abs() < 1e-14);
            }
        }
        let (ra, rb) = (c.rotation_axial(&a), c.rotation_axial(&b));
        assert!((0..3).all(|i| (ra[i] - rb[i]).abs() < 1e-14 && (ra[i] - ROTATION_A[i]).abs() < 1e-14));
        assert!("nope".parse::<CaseId>().is_err());
        assert_eq!("poly-linear".parse::<CaseId>().unwrap(), CaseId::PolyLinear);
    }
}
