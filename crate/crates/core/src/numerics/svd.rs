//! One-sided (Hestenes) Jacobi iteration for singular values of complex matrices.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;

const ORTHOGONALITY_TOL: f64 = 1e-15;
const MAX_SWEEPS: usize = 100;

/// Singular values in descending order, `min(rows, cols)` of them.
///
/// The iteration orthogonalizes column pairs with complex plane rotations
/// until every pair satisfies `|(a_p, a_q)| <= tol * |a_p| |a_q|`; the column
/// norms are then the singular values. Pair order and starting point are
/// fixed, so results are reproducible bit for bit.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    // Iterate on whichever orientation has fewer columns.
    let mut cols: Vec<Vec<Complex64>> = if a.cols() <= a.rows() {
        (0..a.cols()).map(|j| a.column(j)).collect()
    } else {
        (0..a.rows())
            .map(|i| (0..a.cols()).map(|j| a[(i, j)].conj()).collect())
            .collect()
    };
    let n = cols.len();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (head, tail) = cols.split_at_mut(q);
                if rotate_pair(&mut head[p], &mut tail[0]) {
                    rotated = true;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sigma.sort_by(|x, y| y.total_cmp(x));
    sigma
}

/// Applies one Jacobi rotation to the pair; returns false when already orthogonal.
fn rotate_pair(u: &mut [Complex64], v: &mut [Complex64]) -> bool {
    let alpha: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    let beta: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if alpha == 0.0 || beta == 0.0 {
        return false;
    }
    let gamma: Complex64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
    let g = gamma.norm();
    if g <= ORTHOGONALITY_TOL * (alpha * beta).sqrt() {
        return false;
    }
    // Rotating v by the conjugate phase makes the pair's inner product real.
    let phase = (gamma / g).conj();
    let zeta = (beta - alpha) / (2.0 * g);
    let t = zeta.signum() / (zeta.abs() + 1f64.hypot(zeta));
    let c = 1.0 / 1f64.hypot(t);
    let s = c * t;
    for (a, b) in u.iter_mut().zip(v.iter_mut()) {
        let bq = *b * phase;
        let ap = *a;
        *a = ap * c - bq * s;
        *b = ap * s + bq * c;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_values_sorted() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, -5.0, 0.0], &[0.0, 0.0, 3.0]]).unwrap();
        let s = singular_values(&m);
        assert_eq!(s.len(), 3);
        for (got, want) in s.iter().zip([5.0, 3.0, 1.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn wide_matrix_uses_adjoint() {
        // [3 4] has a single singular value 5.
        let m = ComplexMatrix::from_real_rows(&[&[3.0, 4.0]]).unwrap();
        let s = singular_values(&m);
        assert_eq!(s.len(), 1);
        assert!((s[0] - 5.0).abs() < 1e-14);
    }

    #[test]
    fn complex_rank_one() {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        // u v* with u = (1, i), v = (1, 1): singular value |u||v| = 2.
        let m = ComplexMatrix::from_row_major(2, 2, vec![one, one, i, i]).unwrap();
        let s = singular_values(&m);
        assert!((s[0] - 2.0).abs() < 1e-14);
        assert!(s[1].abs() < 1e-14);
    }
}
