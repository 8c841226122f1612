//! Multiplication by `z` on `L²(ν)` for finitely many atoms, written as a
//! shift on the cyclic basis `f, M_z f, …, M_z^{d-1} f`.
//!
//! In that basis `M_z` maps each vector to the next one; the image of the
//! last vector is fixed by the characteristic polynomial, so the matrix of
//! `M_z` is a companion matrix. When the atoms are the d-th roots of unity
//! the companion matrix is the cyclic permutation.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{interleave_enumeration, monomial_system, DiscreteMeasure};
use crate::numerics::{left_inverse, vector_norm, ComplexMatrix};
use crate::schauder::{angle_bound, basis_constant, closest_pair, pair_lower_bound, SchauderSystem};

/// `diag(e^{2πi t_j})` over the first `d` atoms.
pub fn multiplication_matrix(nu: &DiscreteMeasure, d: usize) -> Result<ComplexMatrix> {
    nu.check_atom_count(d)?;
    let diag: Vec<Complex64> = nu.atoms()[..d].iter().map(|a| a.point()).collect();
    Ok(ComplexMatrix::from_diagonal(&diag))
}

#[derive(Debug, Clone)]
pub struct ShiftRepresentation {
    pub d: usize,
    pub multiplication: ComplexMatrix,
    pub cyclic_vector: Vec<Complex64>,
    pub basis: SchauderSystem,
    /// Matrix of `M_z` in the cyclic basis, `G* M_z F`.
    pub companion: ComplexMatrix,
}

impl ShiftRepresentation {
    /// Largest entrywise deviation of the first `d - 1` companion columns
    /// from the pure shift (ones on the subdiagonal, zeros elsewhere).
    pub fn shift_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for col in 0..self.d.saturating_sub(1) {
            for row in 0..self.d {
                let want = if row == col + 1 { 1.0 } else { 0.0 };
                worst = worst.max((self.companion[(row, col)] - Complex64::new(want, 0.0)).norm());
            }
        }
        worst
    }

    /// The last companion column, `-(c_0, …, c_{d-1})` for the monic
    /// characteristic polynomial `x^d + c_{d-1} x^{d-1} + … + c_0`.
    pub fn closing_column(&self) -> Vec<Complex64> {
        self.companion.column(self.d - 1)
    }

    /// `|F C - M_z F|`, entrywise maximum.
    pub fn similarity_residual(&self) -> f64 {
        let f = self.basis.matrix();
        (&(f * &self.companion) - &(&self.multiplication * f)).max_abs()
    }
}

/// Builds the cyclic basis `{M_z^k f}` on the first `d` atoms and the
/// matrix of `M_z` in it. `f` defaults to all ones in the embedded
/// coordinates and must have no zero coordinate.
pub fn shift_representation(nu: &DiscreteMeasure, d: usize, f: Option<&[Complex64]>) -> Result<ShiftRepresentation> {
    let multiplication = multiplication_matrix(nu, d)?;
    let cyclic_vector = match f {
        Some(v) => v.to_vec(),
        None => vec![Complex64::new(1.0, 0.0); d],
    };
    if cyclic_vector.len() != d {
        return Err(Error::ShapeMismatch {
            expected: format!("cyclic vector of length {d}"),
            found: format!("length {}", cyclic_vector.len()),
        });
    }
    if let Some(j) = cyclic_vector.iter().position(|z| z.norm() == 0.0) {
        return Err(Error::NotCyclic {
            atom: j + 1,
            t: nu.atoms()[j].t,
        });
    }

    let eigen: Vec<Complex64> = (0..d).map(|j| multiplication[(j, j)]).collect();
    let mut columns = Vec::with_capacity(d);
    let mut current = cyclic_vector.clone();
    for _ in 0..d {
        let next = current.iter().zip(&eigen).map(|(x, l)| x * l).collect();
        columns.push(std::mem::replace(&mut current, next));
    }
    let basis = SchauderSystem::from_columns(&columns)?;
    let g = left_inverse(basis.matrix())?;
    let companion = &(&g * &multiplication) * basis.matrix();
    Ok(ShiftRepresentation {
        d,
        multiplication,
        cyclic_vector,
        basis,
        companion,
    })
}

/// The n×n cyclic permutation `e_k ↦ e_{k+1 mod n}`.
pub fn cyclic_permutation(n: usize) -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        s[((k + 1) % n, k)] = Complex64::new(1.0, 0.0);
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CyclicSpectrum {
    /// `e^{2πik/n}` for `k = 1..=n`.
    pub eigenvalues: Vec<Complex64>,
    /// `|(S - λI) v_λ|` for the unit Fourier vector `v_λ = (λ^{-j})_j / sqrt(n)`.
    pub residuals: Vec<f64>,
}

/// The n distinct eigenvalues of the cyclic permutation, each checked by
/// its Fourier eigenvector.
pub fn cyclic_shift_eigenvalues(n: usize) -> Result<CyclicSpectrum> {
    if n == 0 {
        return Err(Error::domain("shiftrep", "dimension must be positive"));
    }
    let s = cyclic_permutation(n);
    let scale = 1.0 / (n as f64).sqrt();
    let mut eigenvalues = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    for k in 1..=n {
        let lambda = Complex64::from_polar(1.0, TAU * k as f64 / n as f64);
        let v: Vec<Complex64> = (0..n)
            .map(|j| Complex64::from_polar(scale, -TAU * ((k * j) % n) as f64 / n as f64))
            .collect();
        let sv = s.matvec(&v)?;
        let r: Vec<Complex64> = sv.iter().zip(&v).map(|(a, b)| a - lambda * b).collect();
        eigenvalues.push(lambda);
        residuals.push(vector_norm(&r));
    }
    Ok(CyclicSpectrum { eigenvalues, residuals })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceRow {
    pub d: usize,
    /// `None` when the truncated system failed the rank tolerance.
    pub basis_constant: Option<f64>,
    pub theta_min: f64,
    pub angle_bound: Option<f64>,
    /// Exponents of the closest pair.
    pub closest_pair: (i64, i64),
    /// `None` when the closest pair is numerically collinear.
    pub pair_bound: Option<f64>,
    pub conditioning_flag: bool,
}

impl DivergenceRow {
    /// `θ_min >= arccos(1 - 1/(8M²))` and `M >= pair bound`, each up to `tol`.
    pub fn consistent(&self, tol: f64) -> bool {
        match (self.basis_constant, self.angle_bound, self.pair_bound) {
            (Some(m), Some(bound), Some(pair)) => self.theta_min >= bound - tol && m >= pair - tol,
            _ => false,
        }
    }
}

/// Basis constants and angles of the monomials `z^m`, `m` running over
/// `interleave_enumeration(d)`, on the first `d` atoms, for even
/// `d = 2, 4, …, d_max`.
///
/// Every shift basis of `M_z` is such a monomial family times a fixed
/// vector, so these rows track how its finite sections degrade. Rows whose
/// system fails the rank tolerance are kept with `conditioning_flag` set.
pub fn shift_divergence_experiment(nu: &DiscreteMeasure, d_max: usize) -> Result<Vec<DivergenceRow>> {
    if d_max < 2 {
        return Err(Error::domain("shiftrep", "d_max must be at least 2"));
    }
    nu.check_atom_count(d_max)?;
    (2..=d_max)
        .step_by(2)
        .map(|d| {
            let exponents = interleave_enumeration(d);
            let sys = monomial_system(nu, &exponents)?;
            let (k, l, theta_min) = closest_pair(&sys)?;
            let pair_bound = pair_lower_bound(&sys, k, l).ok();
            let (basis_constant, conditioning_flag) = match basis_constant(&sys) {
                Ok(report) => (Some(report.basis_constant), false),
                Err(Error::RankDeficient { .. }) => (None, true),
                Err(e) => return Err(e),
            };
            Ok(DivergenceRow {
                d,
                basis_constant,
                theta_min,
                angle_bound: basis_constant.map(angle_bound).transpose()?,
                closest_pair: (exponents[k - 1], exponents[l - 1]),
                pair_bound,
                conditioning_flag,
            })
        })
        .collect()
}
