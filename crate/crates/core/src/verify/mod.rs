//! Executable checks of the method: algebraic identities, commuting projections,
//! exactness, stability, the simplified element and convergence studies.

pub mod cases;
pub mod commuting;
pub mod convergence;
pub mod errors;
pub mod exactness;
pub mod identity;
pub mod report;
pub mod simplified;
pub mod stability;

use std::sync::Arc;

use thiserror::Error;

use crate::assembly::{assemble_system, AssemblyError, BlockSystem, Loads, MixedSpaces};
use crate::fespace::FeError;
use crate::mesh::{MeshError, TetMesh};
use crate::solver::{solve_saddle, SolveReport, SolverError};

pub use cases::{CaseId, ManufacturedCase};
pub use commuting::{run_commuting_suite, Ladder};
pub use convergence::{convergence_study, fit_rate, ConvergenceRow, ConvergenceTable, CONVERGENCE_HEADER};
pub use errors::{compute_errors, ErrorReport};
pub use exactness::{run_exactness_suite, Arithmetic};
pub use identity::{run_identity_suite, IdentityHooks};
pub use report::{CheckReport, CheckResult};
pub use simplified::run_simplified_suite;
pub use stability::{infsup_study, InfSupRow, InfSupTable, INFSUP_HEADER};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown manufactured case '{0}' (expected trig, poly-quadratic or poly-linear)")]
    UnknownCase(String),
    #[error("{0}")]
    InvalidStudy(String),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Space(#[from] FeError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Which discrete spaces to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Discretization {
    pub r: usize,
    pub simplified: bool,
}

/// A solved manufactured problem with its errors.
#[derive(Clone, Debug)]
pub struct SolvedCase {
    pub spaces: MixedSpaces,
    pub system: BlockSystem,
    pub report: SolveReport,
    pub errors: ErrorReport,
}

/// Assemble, solve to relative residual `tol` and measure the errors.
pub fn solve_manufactured(
    mesh: Arc<TetMesh>,
    disc: Discretization,
    case: &ManufacturedCase,
    tol: f64,
) -> Result<SolvedCase, VerifyError> {
    let spaces = MixedSpaces::new(mesh, disc.r, disc.simplified)?;
    let body = |x: &[f64; 3]| case.load(x);
    let boundary = |x: &[f64; 3]| case.u(x);
    let loads = Loads {
        body: &body,
        boundary: if case.is_clamped() { None } else { Some(&boundary) },
    };
    let system = assemble_system(&spaces, &case.material(), loads)?;
    let report = solve_saddle(&system, tol)?;
    let errors = compute_errors(case, &spaces, &report)?;
    Ok(SolvedCase {
        spaces,
        system,
        report,
        errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_box_mesh;
    use crate::solver::DEFAULT_TOL;

    #[test]
    fn linear_case_is_reproduced() {
        let case = ManufacturedCase::new(CaseId::PolyLinear, 1.0, 1.0).unwrap();
        let mesh = Arc::new(build_box_mesh(2).unwrap());
        let s = solve_manufactured(mesh, Discretization { r: 0, simplified: false }, &case, DEFAULT_TOL).unwrap();
        assert!(s.errors.sigma < 1e-9, "{:?}", s.errors);
        assert!(s.errors.div < 1e-9);
        assert!(s.errors.p < 1e-9);
        assert!(s.report.weak_symmetry < 1e-8);
    }
}
