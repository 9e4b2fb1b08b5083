//! Shared fixtures for the benchmarks.

use divdiv::{Point, Triangle};

/// A fixed, moderately skewed triangle.
pub fn skewed_triangle() -> Triangle {
    Triangle::new(Point::new(0.1, -0.2), Point::new(1.3, 0.15), Point::new(0.45, 0.95))
}
