//! Matrix exponential and φ-functions for small dense matrices.
//!
//! Scaling-and-squaring with the degree-13 Padé approximant (Higham 2005).
//! `phi1`/`phi2` of a 3×3 block come from one exponential of the augmented
//! matrix `[[A, I, 0], [0, 0, I], [0, 0, 0]]`, whose top row blocks are
//! `e^A, φ₁(A), φ₂(A)`. Scalar complex φ's switch to their Taylor series
//! near zero to dodge cancellation.

use num_complex::Complex64;

use crate::linalg::Mat3;

const PADE_THETA_13: f64 = 5.371920351148152;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

type Dense = Vec<Vec<f64>>;

/// `e^A` for a square dense matrix.
pub fn expm_dense(a: &Dense) -> Dense {
    let n = a.len();
    debug_assert!(a.iter().all(|r| r.len() == n));
    let norm = one_norm(a);
    let s = if norm > PADE_THETA_13 {
        (norm / PADE_THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = scale(a, 0.5f64.powi(s as i32));
    let mut e = pade13(&scaled);
    for _ in 0..s {
        e = matmul(&e, &e);
    }
    e
}

/// `(e^{A}, φ₁(A), φ₂(A))` for a 3×3 block via the 9×9 augmented exponential.
pub fn expm_phi3(a: &Mat3) -> (Mat3, Mat3, Mat3) {
    let mut aug = vec![vec![0.0; 9]; 9];
    for i in 0..3 {
        for j in 0..3 {
            aug[i][j] = a.0[i][j];
        }
        aug[i][3 + i] = 1.0;
        aug[3 + i][6 + i] = 1.0;
    }
    let e = expm_dense(&aug);
    let mut exp_a = Mat3::zero();
    let mut phi1 = Mat3::zero();
    let mut phi2 = Mat3::zero();
    for i in 0..3 {
        for j in 0..3 {
            exp_a.0[i][j] = e[i][j];
            phi1.0[i][j] = e[i][3 + j];
            phi2.0[i][j] = e[i][6 + j];
        }
    }
    (exp_a, phi1, phi2)
}

/// Scalar `φ₁(z) = (e^z − 1)/z`.
pub fn phi1(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        phi_series(z, 1)
    } else {
        (z.exp() - 1.0) / z
    }
}

/// Scalar `φ₂(z) = (e^z − 1 − z)/z²`.
pub fn phi2(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        phi_series(z, 2)
    } else {
        (z.exp() - 1.0 - z) / (z * z)
    }
}

/// Taylor series `Σ_{k>=0} z^k / (k + order)!`, accurate to machine
/// precision for |z| <= 0.5 with 20 terms.
fn phi_series(z: Complex64, order: u32) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for k in 0..20u32 {
        sum += pow / factorial(k + order);
        pow *= z;
    }
    sum
}

fn factorial(k: u32) -> f64 {
    (1..=k as u64).map(|i| i as f64).product::<f64>().max(1.0)
}

fn one_norm(a: &Dense) -> f64 {
    let n = a.len();
    (0..n)
        .map(|j| (0..n).map(|i| a[i][j].abs()).sum())
        .fold(0.0, f64::max)
}

fn scale(a: &Dense, f: f64) -> Dense {
    a.iter()
        .map(|r| r.iter().map(|x| x * f).collect())
        .collect()
}

fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn matadd(a: &Dense, b: &Dense) -> Dense {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

fn identity(n: usize) -> Dense {
    let mut m = vec![vec![0.0; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

fn pade13(a: &Dense) -> Dense {
    let n = a.len();
    let eye = identity(n);
    let a2 = matmul(a, a);
    let a4 = matmul(&a2, &a2);
    let a6 = matmul(&a2, &a4);

    let mut w1 = scale(&a6, PADE13[13]);
    w1 = matadd(&w1, &scale(&a4, PADE13[11]));
    w1 = matadd(&w1, &scale(&a2, PADE13[9]));
    let mut w2 = matmul(&w1, &a6);
    w2 = matadd(&w2, &scale(&a6, PADE13[7]));
    w2 = matadd(&w2, &scale(&a4, PADE13[5]));
    w2 = matadd(&w2, &scale(&a2, PADE13[3]));
    w2 = matadd(&w2, &scale(&eye, PADE13[1]));
    let u = matmul(a, &w2);

    let mut v1 = scale(&a6, PADE13[12]);
    v1 = matadd(&v1, &scale(&a4, PADE13[10]));
    v1 = matadd(&v1, &scale(&a2, PADE13[8]));
    let mut v = matmul(&v1, &a6);
    v = matadd(&v, &scale(&a6, PADE13[6]));
    v = matadd(&v, &scale(&a4, PADE13[4]));
    v = matadd(&v, &scale(&a2, PADE13[2]));
    v = matadd(&v, &scale(&eye, PADE13[0]));

    // (V − U) X = (V + U)
    let num = matadd(&v, &u);
    let den = matadd(&v, &scale(&u, -1.0));
    solve(den, num)
}

/// Gaussian elimination with partial pivoting, multiple right-hand sides.
fn solve(mut a: Dense, mut b: Dense) -> Dense {
    let n = a.len();
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col][col].abs();
        for r in col + 1..n {
            if a[r][col].abs() > best {
                best = a[r][col].abs();
                piv = r;
            }
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let d = a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / d;
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                let v = a[col][j];
                a[r][j] -= f * v;
            }
            for j in 0..n {
                let v = b[col][j];
                b[r][j] -= f * v;
            }
        }
    }
    let mut x = vec![vec![0.0; n]; n];
    for col in (0..n).rev() {
        for j in 0..n {
            let mut s = b[col][j];
            for k in col + 1..n {
                s -= a[col][k] * x[k][j];
            }
            x[col][j] = s / a[col][col];
        }
    }
    x
}
