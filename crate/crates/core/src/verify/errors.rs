//! L² and H(div) errors of a discrete solution against a manufactured one.

use rayon::prelude::*;

use crate::assembly::{cell_values, quadrature, quadrature_rule, stress_proxy, tabulate, CellValues, MixedSpaces};
use crate::solver::SolveReport;

use super::cases::ManufacturedCase;
use super::VerifyError;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ErrorReport {
    /// Largest edge length of the mesh.
    pub h: f64,
    pub sigma: f64,
    pub div: f64,
    pub u: f64,
    pub p: f64,
    /// `‖u_h − Π_h u‖`, with `Π_h` the canonical projection onto the displacement space.
    pub u_proj: f64,
}

impl ErrorReport {
    pub fn as_array(&self) -> [f64; 4] {
        [self.sigma, self.div, self.u, self.p]
    }
}

fn combine(cv_rows: &[Vec<f64>], local: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; cv_rows.first().map_or(0, |r| r.len())];
    for (c, row) in local.iter().zip(cv_rows) {
        for (o, v) in out.iter_mut().zip(row) {
            *o += c * v;
        }
    }
    out
}

fn sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Quadrature degree used for error norms.
pub fn error_degree(r: usize) -> usize {
    (2 * (r + 2) + 2).min(quadrature::MAX_DEGREE)
}

pub fn compute_errors(case: &ManufacturedCase, spaces: &MixedSpaces, sol: &SolveReport) -> Result<ErrorReport, VerifyError> {
    let r = spaces.u.spec().r;
    let rule = quadrature_rule(error_degree(r))?;
    let tab_s = tabulate(spaces.sigma.element(0).parent(), &rule.points, true);
    let tab_u = tabulate(spaces.u.element(0).parent(), &rule.points, false);
    let tab_p = tabulate(spaces.p.element(0).parent(), &rule.points, false);
    let proj = spaces
        .u
        .interpolate_fn(|x| case.u(x).to_vec(), quadrature::MAX_DEGREE.saturating_sub(r))?;
    let cell = |t: usize| -> [f64; 5] {
        let cs: CellValues = cell_values(&spaces.sigma, t, &rule, &tab_s);
        let cu = cell_values(&spaces.u, t, &rule, &tab_u);
        let cp = cell_values(&spaces.p, t, &rule, &tab_p);
        let ls = spaces.sigma.local_coeffs(t, &sol.sigma);
        let lu = spaces.u.local_coeffs(t, &sol.u);
        let lp = spaces.p.local_coeffs(t, &sol.p);
        let lproj = spaces.u.local_coeffs(t, &proj);
        let mut acc = [0.0; 5];
        for (q, w) in cs.weights.iter().enumerate() {
            let x = &cs.points[q];
            let sh = stress_proxy(&combine(&cs.values[q], &ls));
            let s = case.sigma(x);
            acc[0] += w * (0..3).map(|i| sq(&sh[i], &s[i])).sum::<f64>();
            acc[1] += w * sq(&combine(&cs.derivs[q], &ls), &case.load(x));
            let uh = combine(&cu.values[q], &lu);
            acc[2] += w * sq(&uh, &case.u(x));
            // ‖vect⁻¹ w‖² = 2|w|²
            acc[3] += w * 2.0 * sq(&combine(&cp.values[q], &lp), &case.rotation_axial(x));
            acc[4] += w * sq(&uh, &combine(&cu.values[q], &lproj));
        }
        acc
    };
    let parts: Vec<[f64; 5]> = (0..spaces.u.num_cells()).into_par_iter().map(cell).collect();
    let mut total = [0.0; 5];
    for p in parts {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    let [s, d, u, p, up] = total.map(f64::sqrt);
    Ok(ErrorReport {
        h: spaces.u.mesh().mesh_size(),
        sigma: s,
        div: d,
        u,
        p,
        u_proj: up,
    })
}
