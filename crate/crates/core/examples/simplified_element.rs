//! The reduced stress element: local checks, then a convergence study using it.
//!
//! `cargo run --release --example simplified_element`

use std::sync::Arc;

use elastweak::mesh::build_box_mesh;
use elastweak::solver::DEFAULT_TOL;
use elastweak::verify::{convergence_study, run_simplified_suite, CaseId, Discretization, ManufacturedCase};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{}\n", run_simplified_suite()?);
    let case = ManufacturedCase::new(CaseId::Trig, 1.0, 1.0)?;
    let meshes = [2, 4, 8]
        .into_iter()
        .map(|n| build_box_mesh(n).map(Arc::new))
        .collect::<Result<Vec<_>, _>>()?;
    let disc = Discretization { r: 0, simplified: true };
    let table = convergence_study(&case, disc, &meshes, DEFAULT_TOL)?;
    table.write_csv(std::io::stdout())?;
    println!("fitted rates (sigma, div, u, p): {:?}", table.fitted);
    Ok(())
}
