//! Read a Gmsh 2.2 ASCII tetrahedral mesh and print its entity counts,
//! or round-trip a generated box mesh when no file is given.
//!
//! `cargo run --release --example read_msh -- [mesh.msh]`

use elastweak::mesh::{build_box_mesh, read_mesh_file, read_msh, write_msh};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mesh = match std::env::args().nth(1) {
        Some(path) => read_mesh_file(path)?,
        None => {
            let mut buf = Vec::new();
            write_msh(&build_box_mesh(2)?, &mut buf)?;
            read_msh(buf.as_slice())?
        }
    };
    println!(
        "vertices {}, edges {}, faces {}, tets {}",
        mesh.num_vertices(),
        mesh.num_edges(),
        mesh.num_faces(),
        mesh.num_tets()
    );
    println!("boundary faces {}", mesh.boundary_faces().count());
    println!("Euler characteristic {}", mesh.euler_characteristic());
    println!("mesh size h = {:.4}", mesh.mesh_size());
    Ok(())
}
