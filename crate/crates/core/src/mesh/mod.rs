//! Conforming tetrahedral meshes with globally oriented entities.

mod msh;
mod vtk;

pub use msh::{read_mesh_file, read_msh, write_msh};
pub use vtk::{write_vtk, VtkData};

use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("cannot read mesh: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("mesh contains no tetrahedra")]
    NoTets,
    #[error("box mesh needs at least one subdivision")]
    ZeroSubdivisions,
    #[error("tetrahedron {0} references vertex {1}, which does not exist")]
    BadVertex(usize, usize),
    #[error("tetrahedron {0} has zero volume")]
    ZeroVolume(usize),
    #[error("tetrahedron {0} is inverted (negative signed volume)")]
    Inverted(usize),
    #[error("face {face:?} is shared by {count} tetrahedra")]
    NonConforming { face: [usize; 3], count: usize },
    #[error("point {point:?} lies outside tetrahedron {tet}")]
    PointOutside { point: [f64; 3], tet: usize },
}

/// Reference edge ordering as vertex pairs of a tetrahedron.
pub const REF_EDGES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
/// Reference face ordering as vertex triples of a tetrahedron.
pub const REF_FACES: [[usize; 3]; 4] = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];

/// Global ids of the entities of one tetrahedron, listed for its vertices in
/// ascending global order and the reference edge/face ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalEntities {
    pub vertices: [usize; 4],
    pub edges: [usize; 6],
    pub faces: [usize; 4],
}

impl LocalEntities {
    pub fn ids(&self, dim: usize) -> &[usize] {
        match dim {
            0 => &self.vertices,
            1 => &self.edges,
            2 => &self.faces,
            _ => &[],
        }
    }
}

#[derive(Clone, Debug)]
pub struct TetMesh {
    vertices: Vec<[f64; 3]>,
    /// Positively oriented vertex quadruples.
    tets: Vec<[usize; 4]>,
    edges: Vec<[usize; 2]>,
    faces: Vec<[usize; 3]>,
    tet_edges: Vec<[usize; 6]>,
    tet_edge_signs: Vec<[i8; 6]>,
    tet_faces: Vec<[usize; 4]>,
    tet_face_signs: Vec<[i8; 4]>,
    face_tets: Vec<Vec<usize>>,
    edge_lookup: HashMap<[usize; 2], usize>,
    face_lookup: HashMap<[usize; 3], usize>,
}

fn signed_volume6(p: &[[f64; 3]; 4]) -> f64 {
    let a = sub(p[1], p[0]);
    let b = sub(p[2], p[0]);
    let c = sub(p[3], p[0]);
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Parity of the permutation sorting `v`: +1 for even, −1 for odd.
pub fn sort_sign(v: &[usize]) -> i8 {
    let mut inv = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn sorted<const N: usize>(mut v: [usize; N]) -> [usize; N] {
    v.sort_unstable();
    v
}

/// How tetrahedra with negative signed volume are treated on construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// Swap two vertices to make the volume positive.
    Repair,
    /// Report the tetrahedron as inverted.
    Reject,
}

impl TetMesh {
    /// Build and validate a mesh from raw vertex coordinates and tetrahedra.
    pub fn new(vertices: Vec<[f64; 3]>, tets: Vec<[usize; 4]>, orientation: Orientation) -> Result<Self, MeshError> {
        if tets.is_empty() {
            return Err(MeshError::NoTets);
        }
        let scale = vertices
            .iter()
            .flat_map(|v| v.iter())
            .fold(0.0f64, |m, x| m.max(x.abs()))
            .max(1.0);
        let mut oriented = Vec::with_capacity(tets.len());
        for (t, tet) in tets.into_iter().enumerate() {
            if let Some(&bad) = tet.iter().find(|&&v| v >= vertices.len()) {
                return Err(MeshError::BadVertex(t, bad));
            }
            let p = tet.map(|v| vertices[v]);
            let vol = signed_volume6(&p);
            if vol.abs() <= 1e-14 * scale.powi(3) || sorted(tet).windows(2).any(|w| w[0] == w[1]) {
                return Err(MeshError::ZeroVolume(t));
            }
            if vol < 0.0 {
                match orientation {
                    Orientation::Reject => return Err(MeshError::Inverted(t)),
                    Orientation::Repair => oriented.push([tet[0], tet[1], tet[3], tet[2]]),
                }
            } else {
                oriented.push(tet);
            }
        }
        let mut mesh = TetMesh {
            vertices,
            tets: oriented,
            edges: Vec::new(),
            faces: Vec::new(),
            tet_edges: Vec::new(),
            tet_edge_signs: Vec::new(),
            tet_faces: Vec::new(),
            tet_face_signs: Vec::new(),
            face_tets: Vec::new(),
            edge_lookup: HashMap::new(),
            face_lookup: HashMap::new(),
        };
        mesh.derive_entities();
        mesh.validate()?;
        Ok(mesh)
    }

    /// Enumerate edges and faces, and record per-tet orientation signs.
    fn derive_entities(&mut self) {
        let mut edges: Vec<[usize; 2]> = Vec::new();
        let mut faces: Vec<[usize; 3]> = Vec::new();
        for tet in &self.tets {
            for e in REF_EDGES {
                edges.push(sorted([tet[e[0]], tet[e[1]]]));
            }
            for f in REF_FACES {
                faces.push(sorted([tet[f[0]], tet[f[1]], tet[f[2]]]));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        faces.sort_unstable();
        faces.dedup();
        self.edge_lookup = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        self.face_lookup = faces.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        self.face_tets = vec![Vec::new(); faces.len()];
        self.tet_edges.clear();
        self.tet_edge_signs.clear();
        self.tet_faces.clear();
        self.tet_face_signs.clear();
        for (t, tet) in self.tets.iter().enumerate() {
            let mut te = [0; 6];
            let mut ts = [0; 6];
            for (i, e) in REF_EDGES.iter().enumerate() {
                let pair = [tet[e[0]], tet[e[1]]];
                te[i] = self.edge_lookup[&sorted(pair)];
                ts[i] = sort_sign(&pair);
            }
            let mut tf = [0; 4];
            let mut fs = [0; 4];
            for (i, f) in REF_FACES.iter().enumerate() {
                let tri = [tet[f[0]], tet[f[1]], tet[f[2]]];
                tf[i] = self.face_lookup[&sorted(tri)];
                fs[i] = sort_sign(&tri);
                self.face_tets[tf[i]].push(t);
            }
            self.tet_edges.push(te);
            self.tet_edge_signs.push(ts);
            self.tet_faces.push(tf);
            self.tet_face_signs.push(fs);
        }
        self.edges = edges;
        self.faces = faces;
    }

    /// Check the structural invariants: positive volumes and face conformity.
    pub fn validate(&self) -> Result<(), MeshError> {
        for (t, tet) in self.tets.iter().enumerate() {
            if signed_volume6(&tet.map(|v| self.vertices[v])) <= 0.0 {
                return Err(MeshError::Inverted(t));
            }
        }
        for (f, tets) in self.face_tets.iter().enumerate() {
            if tets.len() > 2 {
                return Err(MeshError::NonConforming {
                    face: self.faces[f],
                    count: tets.len(),
                });
            }
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }
    pub fn num_tets(&self) -> usize {
        self.tets.len()
    }

    /// Number of entities of dimension `d`.
    pub fn num_entities(&self, d: usize) -> usize {
        match d {
            0 => self.num_vertices(),
            1 => self.num_edges(),
            2 => self.num_faces(),
            3 => self.num_tets(),
            _ => 0,
        }
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.vertices
    }
    pub fn tets(&self) -> &[[usize; 4]] {
        &self.tets
    }
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }
    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }
    pub fn tet_edges(&self, t: usize) -> (&[usize; 6], &[i8; 6]) {
        (&self.tet_edges[t], &self.tet_edge_signs[t])
    }
    pub fn tet_faces(&self, t: usize) -> (&[usize; 4], &[i8; 4]) {
        (&self.tet_faces[t], &self.tet_face_signs[t])
    }
    /// Tetrahedra adjacent to a face (one on the boundary, two inside).
    pub fn face_tets(&self, f: usize) -> &[usize] {
        &self.face_tets[f]
    }
    pub fn is_boundary_face(&self, f: usize) -> bool {
        self.face_tets[f].len() == 1
    }
    pub fn boundary_faces(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.faces.len()).filter(|&f| self.is_boundary_face(f))
    }

    /// Orientation sign of the stored vertex order relative to ascending order.
    pub fn tet_sign(&self, t: usize) -> i8 {
        sort_sign(&self.tets[t])
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_lookup.get(&sorted([a, b])).copied()
    }

    pub fn face_id(&self, a: usize, b: usize, c: usize) -> Option<usize> {
        self.face_lookup.get(&sorted([a, b, c])).copied()
    }

    /// Entities of tetrahedron `t` with its vertices taken in ascending global order.
    pub fn local_entities(&self, t: usize) -> LocalEntities {
        let v = sorted(self.tets[t]);
        LocalEntities {
            vertices: v,
            edges: REF_EDGES.map(|e| self.edge_lookup[&[v[e[0]], v[e[1]]]]),
            faces: REF_FACES.map(|f| self.face_lookup[&[v[f[0]], v[f[1]], v[f[2]]]]),
        }
    }

    /// Vertex coordinates of tetrahedron `t` in ascending global vertex order.
    pub fn sorted_coords(&self, t: usize) -> [[f64; 3]; 4] {
        sorted(self.tets[t]).map(|v| self.vertices[v])
    }

    pub fn tet_volume(&self, t: usize) -> f64 {
        signed_volume6(&self.tets[t].map(|v| self.vertices[v])) / 6.0
    }

    pub fn centroid(&self, t: usize) -> [f64; 3] {
        let mut c = [0.0; 3];
        for &v in &self.tets[t] {
            for i in 0..3 {
                c[i] += 0.25 * self.vertices[v][i];
            }
        }
        c
    }

    /// Largest edge length over all tetrahedra.
    pub fn mesh_size(&self) -> f64 {
        self.edges
            .iter()
            .map(|e| {
                let d = sub(self.vertices[e[1]], self.vertices[e[0]]);
                (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// `V − E + F − T`.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64 - self.num_tets() as i64
    }
}

/// Unit cube split into `n³` subcubes, each cut into six tetrahedra sharing the main diagonal.
pub fn build_box_mesh(n: usize) -> Result<TetMesh, MeshError> {
    if n == 0 {
        return Err(MeshError::ZeroSubdivisions);
    }
    let m = n + 1;
    let id = |i: usize, j: usize, k: usize| i + m * (j + m * k);
    let mut vertices = Vec::with_capacity(m * m * m);
    for k in 0..m {
        for j in 0..m {
            for i in 0..m {
                vertices.push([i as f64 / n as f64, j as f64 / n as f64, k as f64 / n as f64]);
            }
        }
    }
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut tets = Vec::with_capacity(6 * n * n * n);
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                for perm in PERMS {
                    let mut c = [i, j, k];
                    let mut tet = [id(c[0], c[1], c[2]); 4];
                    for (s, &axis) in perm.iter().enumerate() {
                        c[axis] += 1;
                        tet[s + 1] = id(c[0], c[1], c[2]);
                    }
                    tets.push(tet);
                }
            }
        }
    }
    TetMesh::new(vertices, tets, Orientation::Repair)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_box_counts() {
        let m = build_box_mesh(1).unwrap();
        assert_eq!((m.num_vertices(), m.num_edges(), m.num_faces(), m.num_tets()), (8, 19, 18, 6));
        assert_eq!(m.euler_characteristic(), 1);
        assert!((m.mesh_size() - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(m.boundary_faces().count(), 12);
    }

    #[test]
    fn refined_box_counts() {
        let m = build_box_mesh(2).unwrap();
        assert_eq!((m.num_vertices(), m.num_edges(), m.num_faces(), m.num_tets()), (27, 98, 120, 48));
        assert_eq!(m.euler_characteristic(), 1);
        assert!((m.mesh_size() - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let total: f64 = (0..m.num_tets()).map(|t| m.tet_volume(t)).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_subdivisions_rejected() {
        assert!(matches!(build_box_mesh(0), Err(MeshError::ZeroSubdivisions)));
    }

    #[test]
    fn single_tet_entities() {
        let m = TetMesh::new(
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            vec![[0, 1, 2, 3]],
            Orientation::Reject,
        )
        .unwrap();
        assert_eq!((m.num_edges(), m.num_faces()), (6, 4));
        assert!((m.tet_volume(0) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn triple_shared_face_rejected() {
        let vertices = vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
            [0.3, 0.3, 1.0],
        ];
        let err = TetMesh::new(vertices, vec![[0, 1, 2, 3], [0, 1, 2, 4], [0, 1, 2, 5]], Orientation::Repair);
        assert!(matches!(err, Err(MeshError::NonConforming { count: 3, .. })));
    }

    #[test]
    fn degenerate_and_inverted_tets_rejected() {
        let v = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [2.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(matches!(
            TetMesh::new(v.clone(), vec![[0, 1, 2, 4], [0, 1, 3, 2]], Orientation::Repair),
            Err(MeshError::ZeroVolume(1)) | Err(MeshError::NonConforming { .. })
        ));
        assert!(matches!(
            TetMesh::new(v, vec![[0, 2, 1, 4]], Orientation::Reject),
            Err(MeshError::Inverted(0))
        ));
    }

    fn permutations4() -> Vec<[usize; 4]> {
        let mut out = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let p = [a, b, c, d];
                        let mut s = p;
                        s.sort_unstable();
                        if s == [0, 1, 2, 3] {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn orientation_signs_by_brute_force() {
        let base = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let perms = permutations4();
        assert_eq!(perms.len(), 24);
        for p in perms {
            let m = TetMesh::new(base.to_vec(), vec![p], Orientation::Repair).unwrap();
            let tet = m.tets()[0];
            let (edges, esigns) = m.tet_edges(0);
            for (i, e) in REF_EDGES.iter().enumerate() {
                let (a, b) = (tet[e[0]], tet[e[1]]);
                // sign agrees with whether the local direction runs along the global edge
                let expected = if a < b { 1 } else { -1 };
                assert_eq!(esigns[i], expected);
                assert_eq!(m.edges()[edges[i]], [a.min(b), a.max(b)]);
            }
            let (faces, fsigns) = m.tet_faces(0);
            for (i, f) in REF_FACES.iter().enumerate() {
                let tri = [tet[f[0]], tet[f[1]], tet[f[2]]];
                let g = m.faces()[faces[i]];
                // compare normals induced by both vertex orders
                let n = |v: [usize; 3]| {
                    let x = |k: usize| base[v[k]];
                    let a = sub(x(1), x(0));
                    let b = sub(x(2), x(0));
                    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
                };
                let (nl, ng) = (n(tri), n(g));
                let d: f64 = (0..3).map(|k| nl[k] * ng[k]).sum();
                assert_eq!(fsigns[i] as f64, d.signum());
            }
            // the stored order is positive, so it is an even rearrangement of the base
            assert_eq!(m.tet_sign(0), 1);
            assert_eq!(signed_volume6(&p.map(|v| base[v])).signum() as i8, sort_sign(&p));
        }
    }
}
