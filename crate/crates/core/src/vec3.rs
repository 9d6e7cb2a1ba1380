//! Minimal 3-vector and 3×3 matrix types over a generic scalar.

use crate::scalar::Real;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

/// Velocity/position vector in ℝ³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec3<R>(pub [R; 3]);

impl<R: Real> Vec3<R> {
    pub fn new(x: R, y: R, z: R) -> Self {
        Vec3([x, y, z])
    }

    pub fn zero() -> Self {
        Vec3([R::zero(); 3])
    }

    pub fn splat(v: R) -> Self {
        Vec3([v; 3])
    }

    /// Standard basis vector, `i` in 0..3.
    pub fn axis(i: usize) -> Self {
        let mut a = [R::zero(); 3];
        a[i] = R::one();
        Vec3(a)
    }

    pub fn dot(self, o: Self) -> R {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn cross(self, o: Self) -> Self {
        Vec3([
            self.0[1] * o.0[2] - self.0[2] * o.0[1],
            self.0[2] * o.0[0] - self.0[0] * o.0[2],
            self.0[0] * o.0[1] - self.0[1] * o.0[0],
        ])
    }

    pub fn norm_sq(self) -> R {
        self.dot(self)
    }

    pub fn norm(self) -> R {
        self.norm_sq().sqrt()
    }

    pub fn scale(self, c: R) -> Self {
        Vec3([self.0[0] * c, self.0[1] * c, self.0[2] * c])
    }

    /// ⟨v⟩ = (1 + |v|²)^{1/2}.
    pub fn bracket(self) -> R {
        (R::one() + self.norm_sq()).sqrt()
    }

    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n > R::zero() {
            Some(self.scale(R::one() / n))
        } else {
            None
        }
    }

    /// Deterministic orthonormal pair completing `self/|self|` to a frame.
    ///
    /// `self` must be nonzero.
    pub fn orthonormal_complement(self) -> (Self, Self) {
        let e = self.normalized().expect("zero direction has no complement");
        // Pick the coordinate axis least aligned with e.
        let ax = e.0[0].abs();
        let ay = e.0[1].abs();
        let az = e.0[2].abs();
        let seed = if ax <= ay && ax <= az {
            Vec3::axis(0)
        } else if ay <= az {
            Vec3::axis(1)
        } else {
            Vec3::axis(2)
        };
        let u = e.cross(seed).normalized().expect("seed parallel to e");
        let w = e.cross(u);
        (u, w)
    }

    pub fn map_f64(self, f: impl Fn(R) -> f64) -> [f64; 3] {
        [f(self.0[0]), f(self.0[1]), f(self.0[2])]
    }
}

impl<R: Real> Add for Vec3<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl<R: Real> AddAssign for Vec3<R> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<R: Real> Sub for Vec3<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl<R: Real> Neg for Vec3<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Vec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl<R: Real> Mul<R> for Vec3<R> {
    type Output = Self;
    fn mul(self, c: R) -> Self {
        self.scale(c)
    }
}

impl<R> Index<usize> for Vec3<R> {
    type Output = R;
    fn index(&self, i: usize) -> &R {
        &self.0[i]
    }
}

/// Row-major 3×3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3<R>(pub [[R; 3]; 3]);

impl<R: Real> Mat3<R> {
    pub fn identity() -> Self {
        let mut m = [[R::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = R::one();
        }
        Mat3(m)
    }

    /// a·P_∥ + b·P_⊥ for the rank-one split along unit direction `e`.
    pub fn axial(e: Vec3<R>, parallel: R, perp: R) -> Self {
        let mut m = [[R::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let proj = e.0[i] * e.0[j];
                let kron = if i == j { R::one() } else { R::zero() };
                *entry = parallel * proj + perp * (kron - proj);
            }
        }
        Mat3(m)
    }

    pub fn apply(&self, v: Vec3<R>) -> Vec3<R> {
        let mut out = [R::zero(); 3];
        for (i, row) in self.0.iter().enumerate() {
            out[i] = row[0] * v.0[0] + row[1] * v.0[1] + row[2] * v.0[2];
        }
        Vec3(out)
    }

    pub fn matmul(&self, o: &Self) -> Self {
        let mut m = [[R::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let mut s = R::zero();
                for k in 0..3 {
                    s = s + self.0[i][k] * o.0[k][j];
                }
                *entry = s;
            }
        }
        Mat3(m)
    }

    pub fn max_abs_diff(&self, o: &Self) -> R {
        let mut m = R::zero();
        for i in 0..3 {
            for j in 0..3 {
                m = m.max((self.0[i][j] - o.0[i][j]).abs());
            }
        }
        m
    }
}
