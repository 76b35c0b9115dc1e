//! Local checks of the simplified element: unisolvency, dimensions and inclusion.

use crate::fespace::functional::coefficient_vectors;
use crate::fespace::{reduced_element, reference_basis_exact, SpaceSpec};
use crate::linalg;
use crate::polyform::{int, ratio, Rational, ValueSpace, Vec3};

use super::report::CheckReport;
use super::VerifyError;

type Q = Rational;

fn reference_coords() -> [Vec3<Q>; 4] {
    [
        [int(0), int(0), int(0)],
        [int(1), int(0), int(0)],
        [int(0), int(1), int(0)],
        [int(0), int(0), int(1)],
    ]
}

fn skewed_coords() -> [Vec3<Q>; 4] {
    [
        [ratio(1, 4), int(0), ratio(-1, 3)],
        [int(2), ratio(1, 2), int(0)],
        [int(0), int(1), ratio(1, 5)],
        [ratio(1, 3), ratio(1, 2), int(3)],
    ]
}

/// Exact-arithmetic checks on the reference tetrahedron and on one skewed cell.
pub fn run_simplified_suite() -> Result<CheckReport, VerifyError> {
    let mut report = CheckReport::new();
    for (label, coords) in [("reference", reference_coords()), ("skewed", skewed_coords())] {
        let two = reduced_element(SpaceSpec::reduced_two(), &coords)?;
        let n = two.span_dofs.len();
        let rank = linalg::rank(&two.span_dofs);
        report.push(
            format!("simplified.unisolvent_{label}"),
            n == 24 && rank == 24,
            format!("{n}×{n} degree of freedom matrix of P₁₋Λ²(V) has exact rank {rank}"),
        );

        let one = reduced_element(SpaceSpec::reduced_one(), &coords)?;
        let (edge, face) = (one.dofs_per_entity[1] * 6, one.dofs_per_entity[2] * 4);
        report.push(
            format!("simplified.dimensions_{label}"),
            one.len() == 48 && two.len() == 24 && edge == 36 && face == 12,
            format!(
                "P⁺₁₋Λ¹(V): {} ({edge} edge, {face} face), P₁₋Λ²(V): {}",
                one.len(),
                two.len()
            ),
        );
    }

    // the reference element is enough for the inclusion: both spaces are affine invariant
    let two = reduced_element(SpaceSpec::reduced_two(), &reference_coords())?;
    let lowest = reference_basis_exact(SpaceSpec::p_plus(0, 2, ValueSpace::V))?;
    let reduced = two.shapes();
    let mut stacked = reduced.clone();
    stacked.extend(lowest.shapes.iter().cloned());
    let (r_red, r_all) = (linalg::rank(&coefficient_vectors(&reduced)), linalg::rank(&coefficient_vectors(&stacked)));
    report.push(
        "simplified.inclusion",
        r_red == r_all,
        format!("rank P₁₋Λ²(V) = {r_red}, rank with P₀⁺Λ²(V) appended = {r_all}"),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplified_element_checks_pass() {
        let report = run_simplified_suite().unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.checks.len(), 5);
    }
}
