//! Convergence study for the trigonometric manufactured solution.
//!
//! `cargo run --release --example convergence -- 0 2,4,8 [lambda]`

use std::sync::Arc;

use elastweak::mesh::build_box_mesh;
use elastweak::solver::DEFAULT_TOL;
use elastweak::verify::{convergence_study, CaseId, Discretization, ManufacturedCase};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    env_logger::init();
    let args: Vec<String> = std::env::args().collect();
    let r: usize = args.get(1).map_or(Ok(0), |s| s.parse())?;
    let levels: Vec<usize> = match args.get(2) {
        Some(s) => s.split(',').map(str::parse).collect::<Result<_, _>>()?,
        None if r == 0 => vec![2, 4, 8],
        None => vec![1, 2, 4],
    };
    let lambda: f64 = args.get(3).map_or(Ok(1.0), |s| s.parse())?;
    let simplified = args.iter().any(|a| a == "--simplified");
    let case = ManufacturedCase::new(CaseId::Trig, lambda, 1.0)?;
    let meshes = levels
        .iter()
        .map(|&n| build_box_mesh(n).map(Arc::new))
        .collect::<Result<Vec<_>, _>>()?;
    let start = std::time::Instant::now();
    let table = convergence_study(&case, Discretization { r, simplified }, &meshes, DEFAULT_TOL)?;
    table.write_csv(std::io::stdout())?;
    println!("fitted rates (sigma, div, u, p): {:?}", table.fitted);
    println!("elapsed: {:.1?}", start.elapsed());
    Ok(())
}
