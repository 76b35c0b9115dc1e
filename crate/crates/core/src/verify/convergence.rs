//! Convergence studies over a sequence of meshes.

use std::io::Write;
use std::sync::Arc;

use crate::mesh::TetMesh;

use super::cases::ManufacturedCase;
use super::{solve_manufactured, Discretization, ErrorReport, VerifyError};

pub const CONVERGENCE_HEADER: &str =
    "level,h,dof_sigma,dof_u,dof_p,err_sigma,err_div,err_u,err_p,rate_sigma,rate_div,rate_u,rate_p";

#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub level: usize,
    pub dofs: [usize; 3],
    pub errors: ErrorReport,
    /// Rates against the previous level, in the order σ, div σ, u, p.
    pub rates: Option<[f64; 4]>,
    pub residual: f64,
    pub weak_symmetry: f64,
}

#[derive(Clone, Debug)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slopes of log error against log h over all levels.
    pub fitted: [f64; 4],
}

/// Least-squares slope of `log e` against `log h`.
pub fn fit_rate(h: &[f64], e: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = h.iter().zip(e).map(|(h, e)| (h.ln(), e.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn pair_rate(h0: f64, h1: f64, e0: f64, e1: f64) -> f64 {
    (e0 / e1).ln() / (h0 / h1).ln()
}

/// Solve on every mesh in order and fit rates.
pub fn convergence_study(
    case: &ManufacturedCase,
    disc: Discretization,
    meshes: &[Arc<TetMesh>],
    tol: f64,
) -> Result<ConvergenceTable, VerifyError> {
    if meshes.len() < 2 {
        return Err(VerifyError::InvalidStudy(format!(
            "a convergence study needs at least two meshes, got {}",
            meshes.len()
        )));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(meshes.len());
    for (level, mesh) in meshes.iter().enumerate() {
        let solved = solve_manufactured(mesh.clone(), disc, case, tol)?;
        let e = solved.errors;
        log::info!(
            "level {level}: h = {:.4}, errors σ {:.3e} div {:.3e} u {:.3e} p {:.3e}",
            e.h,
            e.sigma,
            e.div,
            e.u,
            e.p
        );
        let rates = rows.last().map(|prev| {
            let (a, b) = (prev.errors.as_array(), e.as_array());
            std::array::from_fn(|i| pair_rate(prev.errors.h, e.h, a[i], b[i]))
        });
        rows.push(ConvergenceRow {
            level,
            dofs: solved.spaces.dims(),
            errors: e,
            rates,
            residual: solved.report.residual,
            weak_symmetry: solved.report.weak_symmetry,
        });
    }
    let h: Vec<f64> = rows.iter().map(|r| r.errors.h).collect();
    let fitted = std::array::from_fn(|i| {
        let e: Vec<f64> = rows.iter().map(|r| r.errors.as_array()[i]).collect();
        fit_rate(&h, &e)
    });
    Ok(ConvergenceTable { rows, fitted })
}

impl ConvergenceTable {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{CONVERGENCE_HEADER}")?;
        for r in &self.rows {
            let e = r.errors.as_array();
            let rates = match r.rates {
                Some(x) => x.map(|v| format!("{v:.6}")).join(","),
                None => ",,,".to_string(),
            };
            writeln!(
                w,
                "{},{:.6e},{},{},{},{:.6e},{:.6e},{:.6e},{:.6e},{}",
                r.level, r.errors.h, r.dofs[0], r.dofs[1], r.dofs[2], e[0], e[1], e[2], e[3], rates
            )?;
        }
        Ok(())
    }

    pub fn min_fitted(&self) -> f64 {
        self.fitted.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let h = [0.5, 0.25, 0.125];
        let e: Vec<f64> = h.iter().map(|h: &f64| 3.0 * h.powi(2)).collect();
        assert!((fit_rate(&h, &e) - 2.0).abs() < 1e-12);
    }
}
