//! Triangulations with globally oriented edges.
//!
//! Every edge is stored as `(lo, hi)` with `lo < hi`; its tangent `t_e`
//! points from `lo` to `hi` and its normal is `n_e = Aᵀ t_e` (clockwise
//! quarter turn), so that `t_e = A n_e`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{rotate_cw, Point, Segment, Triangle};

#[derive(Clone, Debug)]
pub struct TriMesh {
    vertices: Vec<Point>,
    cells: Vec<[usize; 3]>,
    edges: Vec<[usize; 2]>,
    cell_edges: Vec<[(usize, i8); 3]>,
    edge_cells: Vec<[Option<usize>; 2]>,
    edge_tangent: Vec<Point>,
    edge_normal: Vec<Point>,
    boundary_edge: Vec<bool>,
    boundary_vertex: Vec<bool>,
}

impl TriMesh {
    /// Builds a mesh from vertices and cells. Clockwise cells are reordered;
    /// degenerate cells, dangling indices and non-manifold edges are rejected.
    pub fn new(vertices: Vec<Point>, mut cells: Vec<[usize; 3]>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::InvalidMesh("no cells".into()));
        }
        let nv = vertices.len();
        for (c, cell) in cells.iter_mut().enumerate() {
            if cell.iter().any(|&v| v >= nv) {
                return Err(Error::InvalidMesh(format!(
                    "cell {c} references a vertex outside 0..{nv}"
                )));
            }
            let tri = Triangle::new(vertices[cell[0]], vertices[cell[1]], vertices[cell[2]]);
            let scale = tri.diameter();
            let area = tri.signed_area();
            if area.is_nan() || area.abs() <= 1e-14 * scale * scale {
                return Err(Error::InvalidMesh(format!("cell {c} is degenerate")));
            }
            if area < 0.0 {
                cell.swap(1, 2);
            }
        }

        let mut lookup: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut edge_cells: Vec<[Option<usize>; 2]> = Vec::new();
        let mut cell_edges = Vec::with_capacity(cells.len());
        for (c, cell) in cells.iter().enumerate() {
            let mut local = [(0usize, 1i8); 3];
            for i in 0..3 {
                let (a, b) = (cell[i], cell[(i + 1) % 3]);
                let key = (a.min(b), a.max(b));
                let e = *lookup.entry(key).or_insert_with(|| {
                    edges.push([key.0, key.1]);
                    edge_cells.push([None, None]);
                    edges.len() - 1
                });
                let slot = &mut edge_cells[e];
                if slot[0].is_none() {
                    slot[0] = Some(c);
                } else if slot[1].is_none() {
                    slot[1] = Some(c);
                } else {
                    return Err(Error::InvalidMesh(format!(
                        "edge ({}, {}) is shared by more than two cells",
                        key.0, key.1
                    )));
                }
                local[i] = (e, if a < b { 1 } else { -1 });
            }
            cell_edges.push(local);
        }

        let mut edge_tangent = Vec::with_capacity(edges.len());
        let mut edge_normal = Vec::with_capacity(edges.len());
        let mut boundary_edge = Vec::with_capacity(edges.len());
        let mut boundary_vertex = vec![false; nv];
        for (e, &[a, b]) in edges.iter().enumerate() {
            let t = Segment::new(vertices[a], vertices[b]).tangent();
            edge_tangent.push(t);
            edge_normal.push(rotate_cw(t));
            let on_boundary = edge_cells[e][1].is_none();
            boundary_edge.push(on_boundary);
            if on_boundary {
                boundary_vertex[a] = true;
                boundary_vertex[b] = true;
            }
        }

        Ok(Self {
            vertices,
            cells,
            edges,
            cell_edges,
            edge_cells,
            edge_tangent,
            edge_normal,
            boundary_edge,
            boundary_vertex,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_interior_edges(&self) -> usize {
        self.boundary_edge.iter().filter(|b| !**b).count()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn cells(&self) -> &[[usize; 3]] {
        &self.cells
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// `(edge index, sign)` for each local edge of a cell; local edge `i`
    /// joins local vertices `i` and `i+1`.
    pub fn cell_edges(&self, cell: usize) -> [(usize, i8); 3] {
        self.cell_edges[cell]
    }

    /// The one or two cells adjacent to an edge.
    pub fn edge_cells(&self, edge: usize) -> [Option<usize>; 2] {
        self.edge_cells[edge]
    }

    pub fn edge_tangent(&self, edge: usize) -> Point {
        self.edge_tangent[edge]
    }

    pub fn edge_normal(&self, edge: usize) -> Point {
        self.edge_normal[edge]
    }

    pub fn is_boundary_edge(&self, edge: usize) -> bool {
        self.boundary_edge[edge]
    }

    pub fn is_boundary_vertex(&self, vertex: usize) -> bool {
        self.boundary_vertex[vertex]
    }

    pub fn triangle(&self, cell: usize) -> Triangle {
        let [a, b, c] = self.cells[cell];
        Triangle::new(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    /// The edge as a segment in its global orientation.
    pub fn segment(&self, edge: usize) -> Segment {
        let [a, b] = self.edges[edge];
        Segment::new(self.vertices[a], self.vertices[b])
    }

    /// Maximum cell diameter.
    pub fn h(&self) -> f64 {
        (0..self.num_cells())
            .map(|c| self.triangle(c).diameter())
            .fold(0.0, f64::max)
    }

    pub fn min_angle(&self) -> f64 {
        (0..self.num_cells())
            .map(|c| self.triangle(c).min_angle())
            .fold(f64::INFINITY, f64::min)
    }

    /// Signs relating each local edge to the global edge orientation: `+1`
    /// when the cell's outward normal equals `n_e`, `-1` when it is `-n_e`.
    pub fn edge_orientation_signs(&self, cell: usize) -> Result<[i8; 3]> {
        if cell >= self.num_cells() {
            return Err(Error::OutOfRange {
                index: cell,
                len: self.num_cells(),
            });
        }
        Ok(self.cell_edges[cell].map(|(_, s)| s))
    }

    /// Splits every triangle into four by connecting edge midpoints. The
    /// midpoint of edge `e` becomes vertex `#V + e`.
    pub fn refine_uniform(&self) -> TriMesh {
        let nv = self.num_vertices();
        let mut vertices = self.vertices.clone();
        for &[a, b] in &self.edges {
            vertices.push((self.vertices[a] + self.vertices[b]) * 0.5);
        }
        let mut cells = Vec::with_capacity(4 * self.num_cells());
        for (c, &[v0, v1, v2]) in self.cells.iter().enumerate() {
            let [(e0, _), (e1, _), (e2, _)] = self.cell_edges[c];
            let (m01, m12, m20) = (nv + e0, nv + e1, nv + e2);
            cells.push([v0, m01, m20]);
            cells.push([m01, v1, m12]);
            cells.push([m20, m12, v2]);
            cells.push([m01, m12, m20]);
        }
        TriMesh::new(vertices, cells).expect("refinement of a valid mesh is valid")
    }

    /// Parses the plain-text format: `x y` per vertex, a blank line, then
    /// `i j k` per cell (0-based).
    pub fn from_text(text: &str) -> Result<Self> {
        let mut vertices = Vec::new();
        let mut cells = Vec::new();
        let mut in_cells = false;
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = line.trim();
            if line.starts_with('#') {
                continue;
            }
            if line.is_empty() {
                if !vertices.is_empty() {
                    in_cells = true;
                }
                continue;
            }
            let parse_err = |msg: &str| Error::Parse {
                line: line_no,
                msg: msg.to_string(),
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if !in_cells {
                if fields.len() != 2 {
                    return Err(parse_err("expected `x y`"));
                }
                let x: f64 = fields[0].parse().map_err(|_| parse_err("bad x coordinate"))?;
                let y: f64 = fields[1].parse().map_err(|_| parse_err("bad y coordinate"))?;
                vertices.push(Point::new(x, y));
            } else {
                if fields.len() != 3 {
                    return Err(parse_err("expected `i j k`"));
                }
                let mut idx = [0usize; 3];
                for (slot, f) in idx.iter_mut().zip(&fields) {
                    *slot = f.parse().map_err(|_| parse_err("bad vertex index"))?;
                }
                cells.push(idx);
            }
        }
        TriMesh::new(vertices, cells)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for p in &self.vertices {
            let _ = writeln!(s, "{} {}", p.x, p.y);
        }
        s.push('\n');
        for c in &self.cells {
            let _ = writeln!(s, "{} {} {}", c[0], c[1], c[2]);
        }
        s
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Uniform `n × n` grid on the unit square, each square cut along its
/// positive-slope diagonal.
pub fn structured_unit_square(n: usize) -> Result<TriMesh> {
    if n == 0 {
        return Err(Error::InvalidParameter("grid size must be at least 1".into()));
    }
    let idx = |i: usize, j: usize| j * (n + 1) + i;
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            vertices.push(Point::new(i as f64 / n as f64, j as f64 / n as f64));
        }
    }
    let mut cells = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let (v00, v10, v11, v01) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            cells.push([v00, v10, v11]);
            cells.push([v00, v11, v01]);
        }
    }
    TriMesh::new(vertices, cells)
}

/// Resolves a `--mesh` argument: `square:n` or a path to a mesh file.
pub fn mesh_from_spec(spec: &str) -> Result<TriMesh> {
    if let Some(n) = spec.strip_prefix("square:") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad grid size in `{spec}`")))?;
        structured_unit_square(n)
    } else {
        TriMesh::read(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn euler(m: &TriMesh) -> bool {
        m.num_edges() + 1 == m.num_vertices() + m.num_cells()
    }

    #[test]
    fn small_square_counts() {
        let m = structured_unit_square(1).unwrap();
        assert_eq!((m.num_vertices(), m.num_cells(), m.num_edges()), (4, 2, 5));
        let m = structured_unit_square(2).unwrap();
        assert_eq!((m.num_vertices(), m.num_cells(), m.num_edges()), (9, 8, 16));
        assert!(euler(&m));
        assert!(structured_unit_square(0).is_err());
    }

    #[test]
    fn edge_count_matches_independent_enumeration() {
        let m = structured_unit_square(4).unwrap();
        let mut set = HashSet::new();
        for c in m.cells() {
            for i in 0..3 {
                let (a, b) = (c[i], c[(i + 1) % 3]);
                set.insert((a.min(b), a.max(b)));
            }
        }
        assert_eq!(set.len(), 56);
        assert_eq!(m.num_edges(), 56);
        assert!(euler(&m));
    }

    #[test]
    fn cells_are_counterclockwise_and_tangent_is_rotated_normal() {
        let m = structured_unit_square(3).unwrap();
        for c in 0..m.num_cells() {
            assert!(m.triangle(c).signed_area() > 0.0);
        }
        for e in 0..m.num_edges() {
            let t = crate::geometry::rotate_ccw(m.edge_normal(e));
            assert!((t - m.edge_tangent(e)).norm() < 1e-15);
        }
    }

    #[test]
    fn interior_edges_get_opposite_signs() {
        let m = structured_unit_square(2).unwrap();
        let mut sum = vec![0i32; m.num_edges()];
        let mut count = vec![0; m.num_edges()];
        for c in 0..m.num_cells() {
            let s = m.edge_orientation_signs(c).unwrap();
            for (i, &(e, _)) in m.cell_edges(c).iter().enumerate() {
                sum[e] += s[i] as i32;
                count[e] += 1;
                // sign agrees with the geometric outward normal
                let n = m.triangle(c).outward_normal(i);
                assert!((n - m.edge_normal(e) * s[i] as f64).norm() < 1e-14);
            }
        }
        for e in 0..m.num_edges() {
            assert_eq!(count[e], if m.is_boundary_edge(e) { 1 } else { 2 });
            if !m.is_boundary_edge(e) {
                assert_eq!(sum[e], 0);
            }
        }
        assert!(m.edge_orientation_signs(99).is_err());
    }

    #[test]
    fn refinement_counts_and_shape() {
        let m = structured_unit_square(1).unwrap();
        let r1 = m.refine_uniform();
        assert_eq!(r1.num_cells(), 8);
        let r2 = r1.refine_uniform();
        assert_eq!(r2.num_cells(), 32);
        assert!(euler(&r2));
        let m2 = structured_unit_square(2).unwrap().refine_uniform();
        assert!(euler(&m2));
        assert!((r2.min_angle() - m.min_angle()).abs() < 1e-12);
        assert!((r1.h() - 0.5 * m.h()).abs() < 1e-14);
    }

    #[test]
    fn text_roundtrip_and_orientation_fix() {
        let text = "0 0\n1 0\n0 1\n1 1\n\n0 2 1\n1 2 3\n";
        let m = TriMesh::from_text(text).unwrap();
        assert!(m.triangle(0).signed_area() > 0.0);
        let back = TriMesh::from_text(&m.to_text()).unwrap();
        assert_eq!(back.cells(), m.cells());
        assert!(TriMesh::from_text("0 0\n1 0\n2 0\n\n0 1 2\n").is_err());
        assert!(matches!(
            TriMesh::from_text("0 0\n1 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(mesh_from_spec("square:3").unwrap().num_cells(), 18);
        assert!(mesh_from_spec("square:z").is_err());
    }
}
