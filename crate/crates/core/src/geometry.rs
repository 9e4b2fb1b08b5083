//! Triangle and edge geometry shared by the mesh and element code.

use nalgebra::Vector2;

use crate::polyalg::Frame;

pub type Point = Vector2<f64>;

/// Rotation `A = [[0, -1], [1, 0]]`; tangents are `t = A n`.
pub fn rotate_ccw(v: Point) -> Point {
    Point::new(-v.y, v.x)
}

/// `Aᵀ v`, the clockwise quarter turn; normals are `n = Aᵀ t`.
pub fn rotate_cw(v: Point) -> Point {
    Point::new(v.y, -v.x)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Self { a, b }
    }

    pub fn length(&self) -> f64 {
        (self.b - self.a).norm()
    }

    /// Unit tangent from `a` to `b`.
    pub fn tangent(&self) -> Point {
        (self.b - self.a) / self.length()
    }

    /// Unit normal obtained by rotating the tangent clockwise.
    pub fn normal(&self) -> Point {
        rotate_cw(self.tangent())
    }

    pub fn at(&self, t: f64) -> Point {
        self.a + (self.b - self.a) * t
    }

    pub fn reversed(&self) -> Self {
        Self::new(self.b, self.a)
    }
}

/// A triangle with counterclockwise vertices.
///
/// Local edge `i` runs from vertex `i` to vertex `i+1 (mod 3)`, so its
/// clockwise-rotated tangent is the outward normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Triangle {
    pub vertices: [Point; 3],
}

impl Triangle {
    pub fn new(a: Point, b: Point, c: Point) -> Self {
        Self {
            vertices: [a, b, c],
        }
    }

    /// The reference triangle `{x, y ≥ 0, x + y ≤ 1}`.
    pub fn reference() -> Self {
        Self::new(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        )
    }

    pub fn signed_area(&self) -> f64 {
        let [a, b, c] = self.vertices;
        0.5 * ((b - a).x * (c - a).y - (b - a).y * (c - a).x)
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn centroid(&self) -> Point {
        let [a, b, c] = self.vertices;
        (a + b + c) / 3.0
    }

    /// Longest edge length.
    pub fn diameter(&self) -> f64 {
        (0..3).map(|i| self.edge(i).length()).fold(0.0, f64::max)
    }

    pub fn edge(&self, i: usize) -> Segment {
        Segment::new(self.vertices[i], self.vertices[(i + 1) % 3])
    }

    pub fn outward_normal(&self, i: usize) -> Point {
        self.edge(i).normal()
    }

    pub fn min_angle(&self) -> f64 {
        (0..3)
            .map(|i| {
                let p = self.vertices[i];
                let u = self.vertices[(i + 1) % 3] - p;
                let v = self.vertices[(i + 2) % 3] - p;
                (u.dot(&v) / (u.norm() * v.norm())).clamp(-1.0, 1.0).acos()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Local frame centered at the centroid with scale equal to the diameter.
    pub fn frame(&self) -> Frame {
        Frame::new(self.centroid(), self.diameter())
    }

    /// Affine map from reference coordinates.
    pub fn map(&self, xr: f64, yr: f64) -> Point {
        let [a, b, c] = self.vertices;
        a + (b - a) * xr + (c - a) * yr
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let c = self.centroid();
        let [a, b, d] = self.vertices;
        Self::new(
            c + (a - c) * factor,
            c + (b - c) * factor,
            c + (d - c) * factor,
        )
    }
}
