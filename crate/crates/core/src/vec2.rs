//! 2-D vector and world geometry primitives.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Length below which a vector is treated as zero.
pub const EPSILON: f64 = 1e-12;

/// A 2-D position or velocity in space units.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn length(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn length_squared(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    /// Unit vector in the same direction, or zero when the length is below
    /// [`EPSILON`].
    pub fn normalized(self) -> Vec2 {
        let len = self.length();
        if len < EPSILON {
            Vec2::ZERO
        } else {
            Vec2::new(self.x / len, self.y / len)
        }
    }

    /// Scales the vector down so its length does not exceed `max_len`.
    /// Direction is preserved.
    pub fn clamped(self, max_len: f64) -> Vec2 {
        let len = self.length();
        if len > max_len {
            self * (max_len / len)
        } else {
            self
        }
    }

    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).length()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// The rectangular space agents live in: `[0, width] x [0, length]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorldBounds {
    pub width: f64,
    pub length: f64,
}

impl WorldBounds {
    pub fn new(width: f64, length: f64) -> Self {
        assert!(width > 0.0 && length > 0.0, "bounds must be positive");
        WorldBounds { width, length }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= 0.0 && p.x <= self.width && p.y >= 0.0 && p.y <= self.length
    }

    /// The four corners, in a fixed order: (0,0), (w,0), (0,l), (w,l).
    pub fn corners(&self) -> [Vec2; 4] {
        [
            Vec2::ZERO,
            Vec2::new(self.width, 0.0),
            Vec2::new(0.0, self.length),
            Vec2::new(self.width, self.length),
        ]
    }
}
