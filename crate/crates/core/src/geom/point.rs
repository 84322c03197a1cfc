use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat2 = nalgebra::Matrix2<f64>;

/// A point (or vector) of the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at angle `theta`.
    #[inline]
    pub fn polar(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, s)
    }

    #[inline]
    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    /// Counterclockwise quarter turn.
    #[inline]
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn normalized(self) -> Option<Point2> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self / n)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        self + (o - self) * t
    }

    /// `m · self`.
    pub fn transform(self, m: &Mat2) -> Point2 {
        Point2::new(
            m[(0, 0)] * self.x + m[(0, 1)] * self.y,
            m[(1, 0)] * self.x + m[(1, 1)] * self.y,
        )
    }
}

impl From<[f64; 2]> for Point2 {
    fn from(a: [f64; 2]) -> Self {
        Point2::new(a[0], a[1])
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point2 {
    fn add_assign(&mut self, o: Point2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl SubAssign for Point2 {
    fn sub_assign(&mut self, o: Point2) {
        self.x -= o.x;
        self.y -= o.y;
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Point2 {
    type Output = Point2;
    fn div(self, s: f64) -> Point2 {
        Point2::new(self.x / s, self.y / s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// The line `{x : ⟨x, normal⟩ = 1}`, i.e. the polar of the point `normal`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineStar {
    normal: Point2,
}

impl LineStar {
    pub fn new(normal: Point2) -> Result<Self> {
        if !normal.is_finite() {
            return Err(Error::NonFinite);
        }
        if normal == Point2::ORIGIN {
            return Err(Error::ZeroDirection);
        }
        Ok(Self { normal })
    }

    /// The line through `p` and `q`; fails when it passes through `o`.
    pub fn through(p: Point2, q: Point2) -> Result<Self> {
        let d = q - p;
        let c = p.cross(d);
        if c == 0.0 || !c.is_finite() {
            return Err(Error::OriginNotInterior);
        }
        // ⟨x, n⟩ = 1 with n ⟂ d and ⟨p, n⟩ = 1
        Self::new(Point2::new(d.y, -d.x) / c)
    }

    pub fn normal(&self) -> Point2 {
        self.normal
    }

    /// The pole of this line, which is `normal` itself.
    pub fn pole(&self) -> Point2 {
        self.normal
    }

    pub fn eval(&self, x: Point2) -> f64 {
        x.dot(self.normal) - 1.0
    }

    /// Intersection with another polar line; `None` when parallel.
    pub fn meet(&self, other: &LineStar) -> Option<Point2> {
        let (a, b) = (self.normal, other.normal);
        let det = a.cross(b);
        if det.abs() <= 1e-300 {
            return None;
        }
        // solve [a; b] x = [1; 1]
        Some(Point2::new((b.y - a.y) / det, (a.x - b.x) / det))
    }
}
