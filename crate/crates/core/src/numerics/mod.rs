//! Dense complex linear algebra: operator norms, left inverses, linear solves.

mod matrix;
mod qr;
mod svd;

pub use matrix::{inner, vector_norm, ComplexMatrix, MatrixFile};
pub use svd::singular_values;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Columns whose `sigma_min / sigma_max` falls below this are treated as
/// linearly dependent.
pub const RANK_TOLERANCE: f64 = 1e-12;

fn check_usable(a: &ComplexMatrix) -> Result<()> {
    if a.is_empty() {
        return Err(Error::Empty);
    }
    a.check_finite()
}

/// Induced 2-norm, the largest singular value.
pub fn operator_norm(a: &ComplexMatrix) -> Result<f64> {
    check_usable(a)?;
    Ok(singular_values(a)[0])
}

/// `sigma_max / sigma_min`; infinite for rank-deficient input.
pub fn condition_number(a: &ComplexMatrix) -> Result<f64> {
    check_usable(a)?;
    let s = singular_values(a);
    let min = *s.last().expect("nonempty");
    Ok(if min == 0.0 { f64::INFINITY } else { s[0] / min })
}

/// Errors when `sigma_min / sigma_max` is below [`RANK_TOLERANCE`].
pub fn check_rank_ratio(sigma_max: f64, sigma_min: f64) -> Result<()> {
    let ratio = if sigma_max == 0.0 { 0.0 } else { sigma_min / sigma_max };
    if ratio < RANK_TOLERANCE {
        return Err(Error::RankDeficient { ratio });
    }
    Ok(())
}

fn check_full_column_rank(a: &ComplexMatrix) -> Result<()> {
    check_usable(a)?;
    if a.rows() < a.cols() {
        return Err(Error::RankDeficient { ratio: 0.0 });
    }
    let s = singular_values(a);
    check_rank_ratio(s[0], *s.last().expect("nonempty"))
}

/// Left inverse of a matrix already known to pass the rank tolerance.
pub(crate) fn left_inverse_unchecked(f: &ComplexMatrix) -> ComplexMatrix {
    qr::least_squares(f, &ComplexMatrix::identity(f.rows()))
}

/// A set of rows and columns of a matrix that no nonzero entry links to
/// the rest of the matrix. Indices are ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoupledBlock {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// Splits a matrix into the connected components of its nonzero pattern,
/// viewed as a bipartite graph between rows and columns. Up to a
/// permutation of rows and columns the matrix is block diagonal with these
/// blocks. Blocks are ordered by their smallest column; zero rows and
/// columns form singleton blocks.
pub fn coupled_blocks(a: &ComplexMatrix) -> Vec<CoupledBlock> {
    let (r, c) = (a.rows(), a.cols());
    // Union-find over rows 0..r and columns r..r+c.
    let mut parent: Vec<usize> = (0..r + c).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..r {
        for j in 0..c {
            if a[(i, j)] != Complex64::new(0.0, 0.0) {
                let (x, y) = (find(&mut parent, i), find(&mut parent, r + j));
                if x != y {
                    parent[x.max(y)] = x.min(y);
                }
            }
        }
    }
    let mut order: Vec<usize> = Vec::new();
    let mut blocks: Vec<CoupledBlock> = Vec::new();
    fn slot(root: usize, order: &mut Vec<usize>, blocks: &mut Vec<CoupledBlock>) -> usize {
        if let Some(k) = order.iter().position(|&x| x == root) {
            return k;
        }
        order.push(root);
        blocks.push(CoupledBlock {
            rows: Vec::new(),
            cols: Vec::new(),
        });
        blocks.len() - 1
    }
    for j in 0..c {
        let root = find(&mut parent, r + j);
        let k = slot(root, &mut order, &mut blocks);
        blocks[k].cols.push(j);
    }
    for i in 0..r {
        let root = find(&mut parent, i);
        let k = slot(root, &mut order, &mut blocks);
        blocks[k].rows.push(i);
    }
    blocks
}

/// Left inverse `G*` with `G* F = I` for `F` of full column rank.
///
/// For square `F` this is the inverse; for tall `F` it is the
/// Moore-Penrose pseudo-inverse.
pub fn left_inverse(f: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_full_column_rank(f)?;
    Ok(qr::least_squares(f, &ComplexMatrix::identity(f.rows())))
}

/// Solves `A x = y` for square, well-conditioned `A`.
pub fn solve(a: &ComplexMatrix, y: &[Complex64]) -> Result<Vec<Complex64>> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    if y.len() != a.rows() {
        return Err(Error::ShapeMismatch {
            expected: format!("right-hand side of length {}", a.rows()),
            found: format!("length {}", y.len()),
        });
    }
    check_full_column_rank(a)?;
    let rhs = ComplexMatrix::from_columns(&[y.to_vec()])?;
    Ok(qr::least_squares(a, &rhs).column(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn norm_of_identity_and_zero() {
        assert!((operator_norm(&ComplexMatrix::identity(3)).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(operator_norm(&ComplexMatrix::zeros(2, 2)).unwrap(), 0.0);
    }

    #[test]
    fn norm_rejects_empty() {
        assert_eq!(operator_norm(&ComplexMatrix::zeros(0, 0)), Err(Error::Empty));
    }

    /// Largest |Ax| over unit vectors sampled on a fine grid of the 2-sphere of C².
    fn sampled_norm_2x2(a: &ComplexMatrix) -> f64 {
        let mut best: f64 = 0.0;
        let steps = 400;
        for i in 0..=steps {
            let theta = (i as f64) * (PI / 2.0) / steps as f64;
            for j in 0..steps {
                let phi = (j as f64) * 2.0 * PI / steps as f64;
                let x = [c(theta.cos()), Complex64::from_polar(theta.sin(), phi)];
                best = best.max(vector_norm(&a.matvec(&x).unwrap()));
            }
        }
        best
    }

    #[test]
    fn first_projection_at_thirty_degrees_has_norm_two() {
        let theta = PI / 6.0;
        let f = ComplexMatrix::from_real_rows(&[&[1.0, theta.cos()], &[0.0, theta.sin()]]).unwrap();
        let g = left_inverse(&f).unwrap();
        let q1 = &f.leading_columns(1) * &g.leading_rows(1);
        let oracle = sampled_norm_2x2(&q1);
        assert!((oracle - 2.0).abs() < 1e-4, "sampled oracle {oracle}");
        assert!((operator_norm(&q1).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn left_inverse_examples() {
        let id = ComplexMatrix::identity(4);
        assert_eq!(left_inverse(&id).unwrap().max_abs(), 1.0);
        assert!((&left_inverse(&id).unwrap() - &id).max_abs() < 1e-15);

        let d = ComplexMatrix::from_diagonal(&[c(2.0), c(4.0)]);
        let g = left_inverse(&d).unwrap();
        let want = ComplexMatrix::from_diagonal(&[c(0.5), c(0.25)]);
        assert!((&g - &want).max_abs() < 1e-15);

        let theta = PI / 2.0;
        let f = ComplexMatrix::from_real_rows(&[&[1.0, theta.cos()], &[0.0, theta.sin()]]).unwrap();
        assert!((&left_inverse(&f).unwrap() - &ComplexMatrix::identity(2)).max_abs() < 1e-15);
    }

    #[test]
    fn left_inverse_of_tall_matrix() {
        let f = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0], &[0.0, 1.0]]).unwrap();
        let g = left_inverse(&f).unwrap();
        assert_eq!((g.rows(), g.cols()), (2, 3));
        assert!((&(&g * &f) - &ComplexMatrix::identity(2)).max_abs() < 1e-14);
    }

    #[test]
    fn left_inverse_rejects_dependent_columns() {
        let f = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[1.0, 2.0]]).unwrap();
        assert!(matches!(left_inverse(&f), Err(Error::RankDeficient { .. })));
        let wide = ComplexMatrix::from_real_rows(&[&[1.0, 0.0]]).unwrap();
        assert!(matches!(left_inverse(&wide), Err(Error::RankDeficient { .. })));
        let near = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1e-14]]).unwrap();
        assert!(matches!(left_inverse(&near), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn solve_examples() {
        let y = vec![c(3.0), Complex64::new(0.0, 1.0)];
        let x = solve(&ComplexMatrix::identity(2), &y).unwrap();
        assert!(x.iter().zip(&y).all(|(a, b)| (a - b).norm() < 1e-15));

        let x = solve(&ComplexMatrix::from_diagonal(&[c(2.0), c(2.0)]), &[c(2.0), c(4.0)]).unwrap();
        assert!((x[0] - c(1.0)).norm() < 1e-15 && (x[1] - c(2.0)).norm() < 1e-15);
    }

    #[test]
    fn solve_vandermonde_on_roots_of_unity() {
        // Rows (1, w) for w in {1, -1}; the right-hand side is a moment vector.
        let v = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]]).unwrap();
        let y = vec![Complex64::new(0.75, 0.1), Complex64::new(-0.25, 0.3)];
        let x = solve(&v, &y).unwrap();
        let residual: Vec<Complex64> = v.matvec(&x).unwrap().iter().zip(&y).map(|(a, b)| a - b).collect();
        let bound = 1e-9 * operator_norm(&v).unwrap() * vector_norm(&x);
        assert!(vector_norm(&residual) <= bound);
    }

    #[test]
    fn solve_rejects_singular_and_mismatched() {
        let s = ComplexMatrix::zeros(2, 2);
        assert!(matches!(solve(&s, &[c(1.0), c(1.0)]), Err(Error::RankDeficient { .. })));
        assert!(matches!(
            solve(&ComplexMatrix::identity(2), &[c(1.0)]),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn coupled_blocks_of_permuted_block_diagonal() {
        // Columns {0, 2} couple rows {1, 2}; column 1 lives alone on row 0.
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 3.0, 0.0], &[1.0, 0.0, 2.0], &[0.0, 0.0, 5.0]]).unwrap();
        let blocks = coupled_blocks(&m);
        assert_eq!(
            blocks,
            vec![
                CoupledBlock {
                    rows: vec![1, 2],
                    cols: vec![0, 2]
                },
                CoupledBlock {
                    rows: vec![0],
                    cols: vec![1]
                },
            ]
        );
        let dense = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(coupled_blocks(&dense).len(), 1);
    }

    #[test]
    fn condition_of_diagonal() {
        let d = ComplexMatrix::from_diagonal(&[c(2.0), c(-8.0)]);
        assert!((condition_number(&d).unwrap() - 4.0).abs() < 1e-14);
    }
}
