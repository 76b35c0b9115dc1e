//! Betti numbers of the discrete de Rham ladders, the reduced sequence and the
//! rank of the stability map, in exact arithmetic.
//!
//! `cargo run --release --example de_rham_exactness -- [r]`

use std::sync::Arc;

use elastweak::mesh::build_box_mesh;
use elastweak::verify::{run_exactness_suite, Arithmetic};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r: usize = std::env::args().nth(1).map_or(Ok(0), |s| s.parse())?;
    let mesh = Arc::new(build_box_mesh(1)?);
    println!("{}", run_exactness_suite(&mesh, r, Arithmetic::Exact)?);
    Ok(())
}
