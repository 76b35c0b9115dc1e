//! Exactness of the discrete complexes and onto-ness of the stability map.

use std::sync::Arc;

use crate::assembly::{assemble_div, assemble_skw, exact};
use crate::fespace::{FeSpace, LocalElement, SpaceSpec};
use crate::mesh::TetMesh;
use crate::polyform::{Rational, ValueSpace};
use crate::solver::{exact_rank, matrix_rank, RANK_TOL};
use crate::sparse::CsrMatrix;

use super::commuting::{s1_matrix, Ladder};
use super::report::CheckReport;
use super::VerifyError;

type Q = Rational;

/// How ranks of the stability map are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arithmetic {
    /// Rational assembly and echelon rank.
    Exact,
    /// Floating assembly and singular values above `RANK_TOL · σ_max`.
    Float,
}

/// Betti numbers of `X⁰ → X¹ → X² → X³` from the dimensions and the ranks of `d`.
pub fn betti_numbers(dims: &[usize; 4], ranks: &[usize; 3]) -> [i64; 4] {
    std::array::from_fn(|k| {
        let out = if k < 3 { ranks[k] } else { 0 };
        let inc = if k > 0 { ranks[k - 1] } else { 0 };
        dims[k] as i64 - out as i64 - inc as i64
    })
}

/// Cells on which `d` of some local shape of `source` leaves the local span of `target`.
fn cells_escaping(source: &FeSpace<Q>, target: &FeSpace<Q>) -> Result<usize, VerifyError> {
    let mut bad = 0;
    for t in 0..source.num_cells() {
        let el: &LocalElement<Q> = target.element(t);
        for s in source.element(t).shapes() {
            let ds = s.d().map_err(crate::fespace::FeError::from)?;
            if el.combine(&el.apply(&ds)) != ds {
                bad += 1;
                break;
            }
        }
    }
    Ok(bad)
}

fn push_zero(report: &mut CheckReport, name: &str, m: &CsrMatrix<Q>, what: &str) {
    let zero = m.is_zero();
    report.push(name, zero, format!("{what}: {} nonzero entries", if zero { 0 } else { m.nnz() }));
}

/// Rank-nullity of both ladders, `d∘d = 0`, the reduced sequence and onto-ness of `[div; 2Π_Q skw]`.
pub fn run_exactness_suite(mesh: &Arc<TetMesh>, r: usize, arithmetic: Arithmetic) -> Result<CheckReport, VerifyError> {
    let mut report = CheckReport::new();
    for ladder in [Ladder::Standard, Ladder::Tilde] {
        let spaces = ladder.spaces(mesh, r, ValueSpace::R)?;
        let ds: Vec<CsrMatrix<Q>> = (0..3)
            .map(|k| spaces[k].exterior_derivative(&spaces[k + 1]))
            .collect::<Result<_, _>>()?;
        let dims: [usize; 4] = std::array::from_fn(|k| spaces[k].dim());
        let ranks: [usize; 3] = std::array::from_fn(|k| exact_rank(&ds[k]));
        let betti = betti_numbers(&dims, &ranks);
        report.push(
            format!("exactness.betti_{}", ladder.name()),
            betti == [1, 0, 0, 0],
            format!("dims {dims:?}, ranks {ranks:?}, Betti numbers {betti:?}"),
        );
        for k in 0..2 {
            push_zero(
                &mut report,
                &format!("exactness.dd_{}_{k}", ladder.name()),
                &ds[k + 1].matmul(&ds[k]),
                &format!("d{} d{k}", k + 1),
            );
        }
    }

    let one = FeSpace::<Q>::new(mesh.clone(), SpaceSpec::reduced_one())?;
    let two = FeSpace::<Q>::new(mesh.clone(), SpaceSpec::reduced_two())?;
    let three = FeSpace::<Q>::new(mesh.clone(), SpaceSpec::p(0, 3, ValueSpace::V))?;
    let into = cells_escaping(&one, &two)? + cells_escaping(&two, &three)?;
    report.push(
        "exactness.reduced_maps_into",
        into == 0,
        format!("{into} cells where d leaves the next reduced space"),
    );
    let d1 = one.exterior_derivative(&two)?;
    let d2 = two.exterior_derivative(&three)?;
    push_zero(&mut report, "exactness.reduced_dd", &d2.matmul(&d1), "d d on the reduced sequence");
    let (r1, r2) = (exact_rank(&d1), exact_rank(&d2));
    report.push(
        "exactness.reduced_onto",
        r2 == three.dim(),
        format!("rank d = {r2}, dim P₀Λ³(V) = {}", three.dim()),
    );
    report.push(
        "exactness.reduced_middle",
        r1 + r2 == two.dim(),
        format!("rank d¹ + rank d² = {} against dim P₁₋Λ²(V) = {}", r1 + r2, two.dim()),
    );
    let k_target = FeSpace::<Q>::new(mesh.clone(), SpaceSpec::p_plus(0, 2, ValueSpace::K))?;
    let sh = exact_rank(&s1_matrix(&one, &k_target)?);
    report.push(
        "exactness.reduced_s_onto",
        sh == k_target.dim(),
        format!("rank Sₕ on P⁺₁₋Λ¹(V) = {sh}, dim P₀⁺Λ²(K) = {}", k_target.dim()),
    );

    let sigma_spec = SpaceSpec::p(r + 1, 2, ValueSpace::V);
    let (v_spec, q_spec) = (SpaceSpec::p(r, 3, ValueSpace::V), SpaceSpec::p(r, 3, ValueSpace::K));
    let (rank, rows, cols) = match arithmetic {
        Arithmetic::Exact => {
            let sigma = FeSpace::<Q>::new(mesh.clone(), sigma_spec)?;
            let v = FeSpace::<Q>::new(mesh.clone(), v_spec)?;
            let q = FeSpace::<Q>::new(mesh.clone(), q_spec)?;
            let b = exact::div_matrix(&sigma, &v)?;
            let c = exact::skw_matrix(&sigma, &q)?;
            let stacked = CsrMatrix::vstack(&[&b, &c]);
            (exact_rank(&stacked), stacked.nrows(), stacked.ncols())
        }
        Arithmetic::Float => {
            let sigma = FeSpace::<f64>::new(mesh.clone(), sigma_spec)?;
            let v = FeSpace::<f64>::new(mesh.clone(), v_spec)?;
            let q = FeSpace::<f64>::new(mesh.clone(), q_spec)?;
            let b = assemble_div(&sigma, &v)?;
            let c = assemble_skw(&sigma, &q)?;
            let stacked = CsrMatrix::vstack(&[&b, &c]);
            (matrix_rank(&stacked, RANK_TOL), stacked.nrows(), stacked.ncols())
        }
    };
    report.push(
        "exactness.stability_onto",
        rank == rows,
        format!("rank [div; 2Π_Q skw] = {rank} of {rows} rows ({cols} columns, {arithmetic:?})"),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_box_mesh;

    #[test]
    fn betti_from_ranks() {
        // tetrahedron: 4 vertices, 6 edges, 4 faces, 1 cell
        assert_eq!(betti_numbers(&[4, 6, 4, 1], &[3, 3, 1]), [1, 0, 0, 0]);
        assert_eq!(betti_numbers(&[2, 1, 0, 0], &[0, 0, 0]), [2, 1, 0, 0]);
    }

    #[test]
    fn single_cube_is_exact() {
        let mesh = Arc::new(build_box_mesh(1).unwrap());
        let report = run_exactness_suite(&mesh, 0, Arithmetic::Exact).unwrap();
        assert!(report.passed(), "{report}");
        assert!(report.get("exactness.stability_onto").unwrap().detail.contains("36 of 36 rows"));
    }
}
