//! Commuting projections: `dΠ_h = Π_h d` on both ladders and `S_{1,h} Π̃¹_h = Π²_h S₁`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fespace::{FeSpace, SpaceSpec};
use crate::mesh::TetMesh;
use crate::polyform::{s_op, s_op_frame, Rational, Scalar, ValueSpace};
use crate::solver::exact_rank;
use crate::sparse::CsrMatrix;

use super::identity::random_form;
use super::report::CheckReport;
use super::VerifyError;

type Q = Rational;

/// The two discrete de Rham ladders of degree `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    /// `P_r⁺Λ⁰ → P_r⁺Λ¹ → P_r⁺Λ² → P_rΛ³`.
    Standard,
    /// `P_{r+2}Λ⁰ → P_{r+1}⁺Λ¹ → P_{r+1}Λ² → P_rΛ³`.
    Tilde,
}

impl Ladder {
    pub fn name(self) -> &'static str {
        match self {
            Ladder::Standard => "standard",
            Ladder::Tilde => "tilde",
        }
    }

    pub fn specs(self, r: usize, values: ValueSpace) -> [SpaceSpec; 4] {
        match self {
            Ladder::Standard => std::array::from_fn(|k| SpaceSpec::p_plus(r, k, values)),
            Ladder::Tilde => [
                SpaceSpec::p(r + 2, 0, values),
                SpaceSpec::p_plus(r + 1, 1, values),
                SpaceSpec::p(r + 1, 2, values),
                SpaceSpec::p(r, 3, values),
            ],
        }
    }

    pub fn spaces(self, mesh: &Arc<TetMesh>, r: usize, values: ValueSpace) -> Result<Vec<FeSpace<Q>>, VerifyError> {
        self.specs(r, values)
            .into_iter()
            .map(|s| FeSpace::new(mesh.clone(), s).map_err(VerifyError::from))
            .collect()
    }
}

/// Matrix of `S_{1,h} = Π²_h S₁` from `P_{r+1}⁺Λ¹(V)` (or a subspace) into `target`.
pub fn s1_matrix(source: &FeSpace<Q>, target: &FeSpace<Q>) -> Result<CsrMatrix<Q>, VerifyError> {
    Ok(source.operator_matrix(target, |t, s| Ok(s_op_frame(s, &source.geometry(t).frame())?), false)?)
}

/// Largest coefficient of `a − b` relative to the largest coefficient of `b`.
fn relative_gap(a: &[Q], b: &[Q]) -> f64 {
    let scale = b.iter().map(|v| v.magnitude()).fold(1.0, f64::max);
    let gap = a.iter().zip(b).map(|(x, y)| (x.clone() - y.clone()).magnitude()).fold(0.0, f64::max);
    gap / scale
}

/// Residual threshold for the commuting checks.
pub const COMMUTING_TOL: f64 = 1e-10;

/// Commuting residuals on `trials` seeded random polynomial inputs of degree at most `r + 2`,
/// plus full row rank of `S_{1,h}`.
pub fn run_commuting_suite(mesh: &Arc<TetMesh>, r: usize, seed: u64, trials: usize) -> Result<CheckReport, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let deg = r + 2;
    let mut report = CheckReport::new();
    for ladder in [Ladder::Standard, Ladder::Tilde] {
        let spaces = ladder.spaces(mesh, r, ValueSpace::R)?;
        let ds: Vec<CsrMatrix<Q>> = (0..3)
            .map(|k| spaces[k].exterior_derivative(&spaces[k + 1]))
            .collect::<Result<_, _>>()?;
        let mut worst = 0.0f64;
        for trial in 0..trials {
            let k = trial % 3;
            let w = random_form(&mut rng, k, ValueSpace::R, deg);
            let lhs = ds[k].mul_vec(&spaces[k].interpolate_poly(&w));
            let rhs = spaces[k + 1].interpolate_poly(&w.d().map_err(crate::fespace::FeError::from)?);
            worst = worst.max(relative_gap(&lhs, &rhs));
        }
        report.push(
            format!("commuting.d_{}", ladder.name()),
            worst < COMMUTING_TOL,
            format!("max |dΠω − Πdω| = {worst:e} over {trials} inputs"),
        );
    }

    let source = FeSpace::<Q>::new(mesh.clone(), SpaceSpec::p_plus(r + 1, 1, ValueSpace::V))?;
    let target = FeSpace::<Q>::new(mesh.clone(), SpaceSpec::p_plus(r, 2, ValueSpace::K))?;
    let s1h = s1_matrix(&source, &target)?;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let w = random_form(&mut rng, 1, ValueSpace::V, deg);
        let lhs = s1h.mul_vec(&source.interpolate_poly(&w));
        let rhs = target.interpolate_poly(&s_op(&w).map_err(crate::fespace::FeError::from)?);
        worst = worst.max(relative_gap(&lhs, &rhs));
    }
    report.push(
        "commuting.s1",
        worst < COMMUTING_TOL,
        format!("max |S₁ₕΠ̃¹σ − Π²S₁σ| = {worst:e} over {trials} inputs"),
    );
    let rank = exact_rank(&s1h);
    report.push(
        "commuting.s1_onto",
        rank == target.dim(),
        format!("rank S₁ₕ = {rank}, dim Λ²ₕ(K) = {}", target.dim()),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_box_mesh;

    #[test]
    fn projections_commute_on_single_cube() {
        let mesh = Arc::new(build_box_mesh(1).unwrap());
        let report = run_commuting_suite(&mesh, 0, 3, 6).unwrap();
        assert!(report.passed(), "{report}");
    }
}
