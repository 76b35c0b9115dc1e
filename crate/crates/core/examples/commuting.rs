//! Commuting projections and onto-ness of the discrete S operator on box meshes.
//!
//! `cargo run --release --example commuting -- [r] [n]`

use std::sync::Arc;

use elastweak::mesh::build_box_mesh;
use elastweak::verify::run_commuting_suite;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    let r: usize = args.get(1).map_or(Ok(0), |s| s.parse())?;
    let n: usize = args.get(2).map_or(Ok(1), |s| s.parse())?;
    let mesh = Arc::new(build_box_mesh(n)?);
    println!("{}", run_commuting_suite(&mesh, r, 11, 20)?);
    Ok(())
}
