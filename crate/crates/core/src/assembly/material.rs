use std::fmt;
use std::sync::Arc;

use faer::{Mat, Side};

use crate::polyform::{identity3, mat_add, mat_scale, trace, Mat3};

use super::AssemblyError;

/// Pointwise compliance `A(x)σ` for a general material.
pub type ComplianceFn = Arc<dyn Fn(&[f64; 3], &Mat3<f64>) -> Mat3<f64> + Send + Sync>;

/// Compliance tensor `A` mapping stress to strain.
#[derive(Clone)]
pub enum Material {
    Isotropic { lambda: f64, mu: f64 },
    General(ComplianceFn),
}

impl fmt::Debug for Material {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Material::Isotropic { lambda, mu } => write!(f, "Isotropic {{ lambda: {lambda}, mu: {mu} }}"),
            Material::General(_) => write!(f, "General(..)"),
        }
    }
}

impl Material {
    pub fn isotropic(lambda: f64, mu: f64) -> Result<Self, AssemblyError> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(AssemblyError::Material(format!("mu must be positive, got {mu}")));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(AssemblyError::Material(format!("lambda must be nonnegative, got {lambda}")));
        }
        Ok(Material::Isotropic { lambda, mu })
    }

    /// A general compliance, accepted after checking symmetry and positive definiteness
    /// at the given sample points.
    pub fn general(a: ComplianceFn, samples: &[[f64; 3]]) -> Result<Self, AssemblyError> {
        for x in samples {
            let m = compliance_matrix(&a, x);
            let mut asym = 0.0f64;
            for i in 0..9 {
                for j in 0..9 {
                    asym = asym.max((m[(i, j)] - m[(j, i)]).abs());
                }
            }
            let scale = (0..9).map(|i| m[(i, i)].abs()).fold(0.0, f64::max);
            if asym > 1e-12 * scale.max(1.0) {
                return Err(AssemblyError::Material(format!("compliance is not symmetric at {x:?}")));
            }
            let eig = m
                .self_adjoint_eigenvalues(Side::Lower)
                .map_err(|e| AssemblyError::Material(format!("{e:?}")))?;
            if eig[0] <= 0.0 {
                return Err(AssemblyError::Material(format!(
                    "compliance is not positive definite at {x:?} (smallest eigenvalue {:e})",
                    eig[0]
                )));
            }
        }
        Ok(Material::General(a))
    }

    /// `Aσ` at `x`.
    pub fn apply(&self, x: &[f64; 3], sigma: &Mat3<f64>) -> Mat3<f64> {
        match self {
            Material::Isotropic { lambda, mu } => {
                let c = lambda / (2.0 * mu + 3.0 * lambda);
                let shifted = mat_add(sigma, &mat_scale(&identity3(), &(-c * trace(sigma))));
                mat_scale(&shifted, &(1.0 / (2.0 * mu)))
            }
            Material::General(a) => a(x, sigma),
        }
    }

    /// `A⁻¹ε = 2μ ε + λ tr(ε) I`; only available for isotropic materials.
    pub fn stiffness(&self, eps: &Mat3<f64>) -> Option<Mat3<f64>> {
        match self {
            Material::Isotropic { lambda, mu } => Some(mat_add(
                &mat_scale(eps, &(2.0 * mu)),
                &mat_scale(&identity3(), &(lambda * trace(eps))),
            )),
            Material::General(_) => None,
        }
    }

    pub fn is_isotropic(&self) -> bool {
        matches!(self, Material::Isotropic { .. })
    }
}

fn compliance_matrix(a: &ComplianceFn, x: &[f64; 3]) -> Mat<f64> {
    let mut m = Mat::zeros(9, 9);
    for j in 0..9 {
        let mut e = [[0.0; 3]; 3];
        e[j / 3][j % 3] = 1.0;
        let col = a(x, &e);
        for i in 0..9 {
            m[(i, j)] = col[i / 3][i % 3];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_compliance() {
        let m = Material::isotropic(0.0, 0.5).unwrap();
        let s = [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]];
        assert_eq!(m.apply(&[0.0; 3], &s), s);
    }

    #[test]
    fn incompressible_limit_is_bounded() {
        let m = Material::isotropic(1e12, 1.0).unwrap();
        let a = m.apply(&[0.0; 3], &identity3());
        // (1/2μ)(1 − 3λ/(2μ+3λ)) → 0
        assert!(a[0][0].abs() < 1e-11);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Material::isotropic(1.0, 0.0).is_err());
        assert!(Material::isotropic(-1.0, 1.0).is_err());
        let bad: ComplianceFn = Arc::new(|_, s| mat_scale(s, &-1.0));
        assert!(Material::general(bad, &[[0.0; 3]]).is_err());
        let good: ComplianceFn = Arc::new(|_, s| *s);
        assert!(Material::general(good, &[[0.0; 3]]).is_ok());
    }
}
