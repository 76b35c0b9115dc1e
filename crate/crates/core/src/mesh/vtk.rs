//! Legacy VTK ASCII output.

use std::io::Write;

use super::TetMesh;

/// Named data arrays attached to cells or points.
#[derive(Clone, Debug, Default)]
pub struct VtkData {
    pub cell_vectors: Vec<(String, Vec<[f64; 3]>)>,
    pub cell_scalars: Vec<(String, Vec<f64>)>,
    pub point_vectors: Vec<(String, Vec<[f64; 3]>)>,
}

const VTK_TETRA: u8 = 10;

pub fn write_vtk<W: Write>(mesh: &TetMesh, data: &VtkData, mut w: W) -> std::io::Result<()> {
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "elastweak solution")?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(w, "POINTS {} double", mesh.num_vertices())?;
    for x in mesh.vertices() {
        writeln!(w, "{:e} {:e} {:e}", x[0], x[1], x[2])?;
    }
    let nt = mesh.num_tets();
    writeln!(w, "CELLS {} {}", nt, 5 * nt)?;
    for t in mesh.tets() {
        writeln!(w, "4 {} {} {} {}", t[0], t[1], t[2], t[3])?;
    }
    writeln!(w, "CELL_TYPES {nt}")?;
    for _ in 0..nt {
        writeln!(w, "{VTK_TETRA}")?;
    }
    if !data.cell_vectors.is_empty() || !data.cell_scalars.is_empty() {
        writeln!(w, "CELL_DATA {nt}")?;
        for (name, vals) in &data.cell_scalars {
            assert_eq!(vals.len(), nt, "cell array {name} has wrong length");
            writeln!(w, "SCALARS {name} double 1\nLOOKUP_TABLE default")?;
            for v in vals {
                writeln!(w, "{v:e}")?;
            }
        }
        for (name, vals) in &data.cell_vectors {
            assert_eq!(vals.len(), nt, "cell array {name} has wrong length");
            writeln!(w, "VECTORS {name} double")?;
            for v in vals {
                writeln!(w, "{:e} {:e} {:e}", v[0], v[1], v[2])?;
            }
        }
    }
    if !data.point_vectors.is_empty() {
        writeln!(w, "POINT_DATA {}", mesh.num_vertices())?;
        for (name, vals) in &data.point_vectors {
            assert_eq!(vals.len(), mesh.num_vertices(), "point array {name} has wrong length");
            writeln!(w, "VECTORS {name} double")?;
            for v in vals {
                writeln!(w, "{:e} {:e} {:e}", v[0], v[1], v[2])?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_box_mesh;

    #[test]
    fn header_and_counts() {
        let m = build_box_mesh(1).unwrap();
        let data = VtkData {
            cell_vectors: vec![("u".into(), vec![[1.0, 0.0, 0.0]; 6])],
            point_vectors: vec![("stress_row_0".into(), vec![[0.0; 3]; 8])],
            ..Default::default()
        };
        let mut buf = Vec::new();
        write_vtk(&m, &data, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains("DATASET UNSTRUCTURED_GRID"));
        assert!(s.contains("CELLS 6 30"));
        assert_eq!(s.lines().filter(|l| *l == "10").count(), 6);
        assert!(s.contains("CELL_DATA 6\nVECTORS u double"));
        assert!(s.contains("POINT_DATA 8"));
    }
}
