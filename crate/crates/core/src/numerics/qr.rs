//! Householder QR for tall complex matrices.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;

/// Solves the least-squares system `A X = B` for `A` of shape d×m (d ≥ m)
/// with full column rank, returning the m×p matrix `R⁻¹ (Q* B)[..m]`.
///
/// Rank is the caller's responsibility; a zero pivot yields non-finite output.
pub fn least_squares(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    debug_assert!(a.rows() >= a.cols());
    debug_assert_eq!(a.rows(), b.rows());
    let (d, m) = (a.rows(), a.cols());
    let mut r = a.clone();
    let mut qb = b.clone();

    for k in 0..m {
        let x: Vec<Complex64> = (k..d).map(|i| r[(i, k)]).collect();
        let norm_x = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * norm_x;
        let mut v = x;
        v[0] -= alpha;
        let v_norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if v_norm_sqr == 0.0 {
            continue;
        }
        reflect(&mut r, &v, k, k, v_norm_sqr);
        reflect(&mut qb, &v, k, 0, v_norm_sqr);
    }

    let p = b.cols();
    let mut x = ComplexMatrix::zeros(m, p);
    for col in 0..p {
        for i in (0..m).rev() {
            let mut acc = qb[(i, col)];
            for j in i + 1..m {
                acc -= r[(i, j)] * x[(j, col)];
            }
            x[(i, col)] = acc / r[(i, i)];
        }
    }
    x
}

/// Applies `I - 2 v v* / |v|²` to rows `k..` of columns `first_col..`.
fn reflect(m: &mut ComplexMatrix, v: &[Complex64], k: usize, first_col: usize, v_norm_sqr: f64) {
    for j in first_col..m.cols() {
        let s: Complex64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * m[(k + i, j)]).sum();
        let f = s * (2.0 / v_norm_sqr);
        for (i, vi) in v.iter().enumerate() {
            m[(k + i, j)] -= f * vi;
        }
    }
}
