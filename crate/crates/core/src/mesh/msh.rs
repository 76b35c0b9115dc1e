//! Reader and writer for the ASCII Gmsh 2.2 format (tetrahedra only).

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use log::warn;

use super::{MeshError, Orientation, TetMesh};

const TET4: i64 = 4;

struct Lines<R> {
    inner: std::io::Lines<BufReader<R>>,
    line: usize,
}

impl<R: Read> Lines<R> {
    fn next_line(&mut self) -> Result<Option<String>, MeshError> {
        match self.inner.next() {
            None => Ok(None),
            Some(l) => {
                self.line += 1;
                Ok(Some(l?.trim().to_string()))
            }
        }
    }

    fn expect_line(&mut self, what: &str) -> Result<String, MeshError> {
        self.next_line()?.ok_or_else(|| self.err(format!("unexpected end of file, expected {what}")))
    }

    fn err(&self, msg: impl Into<String>) -> MeshError {
        MeshError::Parse {
            line: self.line,
            msg: msg.into(),
        }
    }

    fn parse_count(&mut self, section: &str) -> Result<usize, MeshError> {
        let l = self.expect_line(section)?;
        l.parse().map_err(|_| self.err(format!("bad {section} count '{l}'")))
    }

    fn expect_end(&mut self, tag: &str) -> Result<(), MeshError> {
        let l = self.expect_line(tag)?;
        if l != tag {
            return Err(self.err(format!("expected {tag}, found '{l}'")));
        }
        Ok(())
    }
}

/// Read an MSH 2.2 ASCII mesh. Non-tetrahedral elements are skipped and
/// vertices not referenced by any tetrahedron are dropped.
pub fn read_msh<R: Read>(reader: R) -> Result<TetMesh, MeshError> {
    let mut lines = Lines {
        inner: BufReader::new(reader).lines(),
        line: 0,
    };
    let mut nodes: Vec<(i64, [f64; 3])> = Vec::new();
    let mut raw_tets: Vec<[i64; 4]> = Vec::new();
    let mut saw_format = false;
    let mut saw_nodes = false;
    let mut skipped = 0usize;
    while let Some(l) = lines.next_line()? {
        match l.as_str() {
            "" => continue,
            "$MeshFormat" => {
                let header = lines.expect_line("format header")?;
                let mut it = header.split_whitespace();
                let version = it.next().unwrap_or("");
                if !version.starts_with("2.") {
                    return Err(lines.err(format!("unsupported MSH version '{version}'")));
                }
                if it.next() != Some("0") {
                    return Err(lines.err("only ASCII MSH files are supported"));
                }
                lines.expect_end("$EndMeshFormat")?;
                saw_format = true;
            }
            "$Nodes" => {
                let n = lines.parse_count("$Nodes")?;
                nodes.reserve(n);
                for _ in 0..n {
                    let row = lines.expect_line("node")?;
                    let f: Vec<&str> = row.split_whitespace().collect();
                    if f.len() < 4 {
                        return Err(lines.err(format!("node line needs id and three coordinates: '{row}'")));
                    }
                    let id: i64 = f[0].parse().map_err(|_| lines.err(format!("bad node id '{}'", f[0])))?;
                    let mut x = [0.0f64; 3];
                    for i in 0..3 {
                        x[i] = f[i + 1]
                            .parse()
                            .map_err(|_| lines.err(format!("bad coordinate '{}'", f[i + 1])))?;
                        if !x[i].is_finite() {
                            return Err(lines.err("non-finite coordinate"));
                        }
                    }
                    nodes.push((id, x));
                }
                lines.expect_end("$EndNodes")?;
                saw_nodes = true;
            }
            "$Elements" => {
                let n = lines.parse_count("$Elements")?;
                for _ in 0..n {
                    let row = lines.expect_line("element")?;
                    let f: Result<Vec<i64>, _> = row.split_whitespace().map(str::parse).collect();
                    let f = f.map_err(|_| lines.err(format!("bad element line '{row}'")))?;
                    if f.len() < 3 {
                        return Err(lines.err(format!("element line too short: '{row}'")));
                    }
                    let (ty, ntags) = (f[1], f[2]);
                    if ntags < 0 || f.len() < 3 + ntags as usize {
                        return Err(lines.err(format!("bad tag count in '{row}'")));
                    }
                    let conn = &f[3 + ntags as usize..];
                    if ty != TET4 {
                        skipped += 1;
                        continue;
                    }
                    if conn.len() != 4 {
                        return Err(lines.err(format!("tetrahedron needs 4 nodes: '{row}'")));
                    }
                    raw_tets.push([conn[0], conn[1], conn[2], conn[3]]);
                }
                lines.expect_end("$EndElements")?;
            }
            s if s.starts_with('$') => {
                // skip unknown sections such as $PhysicalNames
                let end = format!("$End{}", &s[1..]);
                loop {
                    let l = lines.expect_line(&end)?;
                    if l == end {
                        break;
                    }
                }
            }
            other => return Err(lines.err(format!("unexpected content '{other}'"))),
        }
    }
    if !saw_format {
        return Err(lines.err("missing $MeshFormat section"));
    }
    if !saw_nodes {
        return Err(lines.err("missing $Nodes section"));
    }
    if skipped > 0 {
        warn!("skipped {skipped} non-tetrahedral elements");
    }
    if raw_tets.is_empty() {
        return Err(MeshError::NoTets);
    }
    let by_id: HashMap<i64, usize> = nodes.iter().enumerate().map(|(i, (id, _))| (*id, i)).collect();
    if by_id.len() != nodes.len() {
        return Err(lines.err("duplicate node ids"));
    }
    // renumber the referenced nodes in file order
    let mut used = vec![false; nodes.len()];
    let mut tets_local = Vec::with_capacity(raw_tets.len());
    for (t, tet) in raw_tets.iter().enumerate() {
        let mut local = [0; 4];
        for (k, id) in tet.iter().enumerate() {
            let &i = by_id.get(id).ok_or_else(|| MeshError::Parse {
                line: lines.line,
                msg: format!("tetrahedron {t} references unknown node {id}"),
            })?;
            used[i] = true;
            local[k] = i;
        }
        tets_local.push(local);
    }
    let mut new_index = vec![usize::MAX; nodes.len()];
    let mut vertices = Vec::new();
    for (i, (_, x)) in nodes.iter().enumerate() {
        if used[i] {
            new_index[i] = vertices.len();
            vertices.push(*x);
        }
    }
    let dropped = nodes.len() - vertices.len();
    if dropped > 0 {
        warn!("dropped {dropped} vertices not used by any tetrahedron");
    }
    let tets = tets_local.into_iter().map(|t| t.map(|i| new_index[i])).collect();
    TetMesh::new(vertices, tets, Orientation::Reject)
}

pub fn read_mesh_file(path: impl AsRef<Path>) -> Result<TetMesh, MeshError> {
    read_msh(std::fs::File::open(path)?)
}

/// Write the mesh as MSH 2.2 ASCII with 1-based ids.
pub fn write_msh<W: Write>(mesh: &TetMesh, mut w: W) -> std::io::Result<()> {
    writeln!(w, "$MeshFormat\n2.2 0 8\n$EndMeshFormat")?;
    writeln!(w, "$Nodes\n{}", mesh.num_vertices())?;
    for (i, x) in mesh.vertices().iter().enumerate() {
        writeln!(w, "{} {:?} {:?} {:?}", i + 1, x[0], x[1], x[2])?;
    }
    writeln!(w, "$EndNodes\n$Elements\n{}", mesh.num_tets())?;
    for (t, tet) in mesh.tets().iter().enumerate() {
        writeln!(w, "{} 4 2 0 1 {} {} {} {}", t + 1, tet[0] + 1, tet[1] + 1, tet[2] + 1, tet[3] + 1)?;
    }
    writeln!(w, "$EndElements")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_box_mesh;

    #[test]
    fn roundtrip_box() {
        let m = build_box_mesh(1).unwrap();
        let mut buf = Vec::new();
        write_msh(&m, &mut buf).unwrap();
        let r = read_msh(buf.as_slice()).unwrap();
        assert_eq!(
            (r.num_vertices(), r.num_edges(), r.num_faces(), r.num_tets()),
            (m.num_vertices(), m.num_edges(), m.num_faces(), m.num_tets())
        );
    }

    #[test]
    fn dangling_vertex_and_other_elements() {
        let src = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n5\n1 0 0 0\n2 1 0 0\n3 0 1 0\n4 0 0 1\n9 5 5 5\n$EndNodes\n\
                   $Elements\n2\n1 2 2 0 1 1 2 3\n2 4 2 0 1 1 2 3 4\n$EndElements\n";
        let m = read_msh(src.as_bytes()).unwrap();
        assert_eq!((m.num_vertices(), m.num_tets()), (4, 1));
    }

    #[test]
    fn malformed_inputs() {
        let bad_version = "$MeshFormat\n4.1 0 8\n$EndMeshFormat\n";
        assert!(matches!(read_msh(bad_version.as_bytes()), Err(MeshError::Parse { .. })));
        let truncated = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n3\n1 0 0 0\n";
        assert!(matches!(read_msh(truncated.as_bytes()), Err(MeshError::Parse { .. })));
        let unknown_node = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n1\n1 0 0 0\n$EndNodes\n\
                            $Elements\n1\n1 4 0 1 2 3 4\n$EndElements\n";
        assert!(matches!(read_msh(unknown_node.as_bytes()), Err(MeshError::Parse { .. })));
    }

    #[test]
    fn inverted_tet_reported() {
        let src = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n4\n1 0 0 0\n2 1 0 0\n3 0 1 0\n4 0 0 1\n$EndNodes\n\
                   $Elements\n1\n1 4 0 1 3 2 4\n$EndElements\n";
        assert!(matches!(read_msh(src.as_bytes()), Err(MeshError::Inverted(0))));
    }
}
