//! Fixed-size 3×3 real/complex matrices.
//!
//! The mode matrices are 3×3; a handful of explicit routines beats a linear
//! algebra dependency here.

use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;

/// Real 3×3 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

/// Complex 3×3 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat3(pub [[C64; 3]; 3]);

impl Mat3 {
    pub fn zero() -> Self {
        Mat3([[0.0; 3]; 3])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.0[i][i] = 1.0;
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = self.0[j][i];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = self.0[i][0] * v[0] + self.0[i][1] * v[1] + self.0[i][2] * v[2];
        }
        out
    }

    pub fn mul_cvec(&self, v: [C64; 3]) -> [C64; 3] {
        let mut out = [C64::new(0.0, 0.0); 3];
        for i in 0..3 {
            out[i] = v[0] * self.0[i][0] + v[1] * self.0[i][1] + v[2] * self.0[i][2];
        }
        out
    }

    pub fn to_complex(&self) -> CMat3 {
        let mut m = CMat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = C64::new(self.0[i][j], 0.0);
            }
        }
        m
    }

    /// Operator ∞-norm (max absolute row sum).
    pub fn inf_norm(&self) -> f64 {
        self.0
            .iter()
            .map(|r| r.iter().map(|x| x.abs()).sum())
            .fold(0.0, f64::max)
    }
}

impl CMat3 {
    pub fn zero() -> Self {
        CMat3([[C64::new(0.0, 0.0); 3]; 3])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.0[i][i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_columns(c0: [C64; 3], c1: [C64; 3], c2: [C64; 3]) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.0[i][0] = c0[i];
            m.0[i][1] = c1[i];
            m.0[i][2] = c2[i];
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = self.0[j][i];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &CMat3) -> Self {
        let mut out = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = C64::new(0.0, 0.0);
                for k in 0..3 {
                    s += self.0[i][k] * rhs.0[k][j];
                }
                out.0[i][j] = s;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: [C64; 3]) -> [C64; 3] {
        let mut out = [C64::new(0.0, 0.0); 3];
        for i in 0..3 {
            out[i] = self.0[i][0] * v[0] + self.0[i][1] * v[1] + self.0[i][2] * v[2];
        }
        out
    }

    pub fn sub(&self, rhs: &CMat3) -> Self {
        let mut out = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = self.0[i][j] - rhs.0[i][j];
            }
        }
        out
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Exact adjugate inverse; errs when the determinant is negligible
    /// against the matrix scale.
    pub fn inverse(&self) -> Result<CMat3> {
        let m = &self.0;
        let det = self.det();
        let scale = self.inf_norm();
        if det.norm() <= 1e-14 * scale.powi(3).max(f64::MIN_POSITIVE) {
            return Err(Error::Singular(format!(
                "3x3 inverse: |det| = {:e} at scale {:e}",
                det.norm(),
                scale
            )));
        }
        let cof = |r1: usize, c1: usize, r2: usize, c2: usize| {
            m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]
        };
        let mut inv = CMat3::zero();
        inv.0[0][0] = cof(1, 1, 2, 2);
        inv.0[0][1] = -cof(0, 1, 2, 2);
        inv.0[0][2] = cof(0, 1, 1, 2);
        inv.0[1][0] = -cof(1, 0, 2, 2);
        inv.0[1][1] = cof(0, 0, 2, 2);
        inv.0[1][2] = -cof(0, 0, 1, 2);
        inv.0[2][0] = cof(1, 0, 2, 1);
        inv.0[2][1] = -cof(0, 0, 2, 1);
        inv.0[2][2] = cof(0, 0, 1, 1);
        for i in 0..3 {
            for j in 0..3 {
                inv.0[i][j] /= det;
            }
        }
        Ok(inv)
    }

    pub fn inf_norm(&self) -> f64 {
        self.0
            .iter()
            .map(|r| r.iter().map(|x| x.norm()).sum())
            .fold(0.0, f64::max)
    }

    pub fn max_entry_norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
    }

    /// ∞-norm condition estimate `‖A‖ ‖A⁻¹‖`.
    pub fn cond_inf(&self) -> f64 {
        match self.inverse() {
            Ok(inv) => self.inf_norm() * inv.inf_norm(),
            Err(_) => f64::INFINITY,
        }
    }
}

/// Dot product without conjugation (the projection convention).
pub fn cdot(a: [C64; 3], b: [C64; 3]) -> C64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cvec_from_real(v: [f64; 3]) -> [C64; 3] {
    [
        C64::new(v[0], 0.0),
        C64::new(v[1], 0.0),
        C64::new(v[2], 0.0),
    ]
}

pub fn cvec_inf_norm(v: [C64; 3]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}
