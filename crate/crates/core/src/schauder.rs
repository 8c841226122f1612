//! Finite Schauder systems: natural projections, basis constant, angles.
//!
//! A system is an ordered family of vectors `f_1, …, f_m` stored as the
//! columns of a d×m matrix `F`. For a square invertible `F` with inverse
//! `G*`, the n-th natural projection is `Q_n = F P_n G*`, where `P_n` keeps
//! the first n coordinates. The basis constant is `M = max_n |Q_n|`.
//!
//! Any Schauder system with basis constant `M` has all pairwise angles
//! bounded below by `arccos(1 - 1/(8M²))`: the difference projection
//! `Q_k - Q_{k-1}` has norm at most `2M`, yet it maps the unit vector
//! along `f_k - f_l` to a vector of length `1/|f_k - f_l|`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    check_rank_ratio, coupled_blocks, inner, left_inverse, left_inverse_unchecked, operator_norm, singular_values,
    vector_norm, ComplexMatrix, MatrixFile,
};

/// Slack used when comparing angles against the angle bound.
pub const ANGLE_SLACK: f64 = 1e-9;

/// An ordered family of vectors, stored as the columns of `F`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchauderSystem {
    matrix: ComplexMatrix,
    labels: Option<Vec<i64>>,
}

impl SchauderSystem {
    /// Wraps `F`, checking `m <= d` and that no column vanishes.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.is_empty() {
            return Err(Error::Empty);
        }
        matrix.check_finite()?;
        if matrix.cols() > matrix.rows() {
            return Err(Error::ShapeMismatch {
                expected: format!("at most {} vectors", matrix.rows()),
                found: format!("{} vectors", matrix.cols()),
            });
        }
        for j in 0..matrix.cols() {
            if vector_norm(&matrix.column(j)) == 0.0 {
                return Err(Error::ZeroVector { index: j + 1 });
            }
        }
        Ok(Self { matrix, labels: None })
    }

    pub fn from_columns(columns: &[Vec<Complex64>]) -> Result<Self> {
        Self::new(ComplexMatrix::from_columns(columns)?)
    }

    pub fn with_labels(mut self, labels: Vec<i64>) -> Result<Self> {
        if labels.len() != self.count() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} labels", self.count()),
                found: format!("{} labels", labels.len()),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Ambient dimension d.
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Number of vectors m.
    pub fn count(&self) -> usize {
        self.matrix.cols()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn labels(&self) -> Option<&[i64]> {
        self.labels.as_deref()
    }

    /// The n-th vector, 1-based.
    pub fn vector(&self, n: usize) -> Result<Vec<Complex64>> {
        self.check_index(n)?;
        Ok(self.matrix.column(n - 1))
    }

    /// Gram matrix `[(f_i, f_j)]`, inner product linear in the first slot.
    pub fn gram(&self) -> ComplexMatrix {
        let cols: Vec<_> = (0..self.count()).map(|j| self.matrix.column(j)).collect();
        let mut g = ComplexMatrix::zeros(self.count(), self.count());
        for i in 0..self.count() {
            for j in 0..self.count() {
                g[(i, j)] = inner(&cols[i], &cols[j]);
            }
        }
        g
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.count() {
            return Err(Error::IndexOutOfRange {
                index: n,
                len: self.count(),
            });
        }
        Ok(())
    }

    fn require_square(&self) -> Result<()> {
        if !self.matrix.is_square() {
            return Err(Error::ShapeMismatch {
                expected: "square system (m = d)".into(),
                found: format!("{}x{}", self.dim(), self.count()),
            });
        }
        Ok(())
    }

    /// Coordinate functionals `G*`, the left inverse of `F`.
    pub fn coefficient_functionals(&self) -> Result<ComplexMatrix> {
        left_inverse(&self.matrix)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemFile {
    #[serde(flatten)]
    pub matrix: MatrixFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<i64>>,
}

impl TryFrom<SystemFile> for SchauderSystem {
    type Error = Error;

    fn try_from(file: SystemFile) -> Result<Self> {
        let sys = SchauderSystem::new(ComplexMatrix::try_from(file.matrix)?)?;
        match file.labels {
            Some(labels) => sys.with_labels(labels),
            None => Ok(sys),
        }
    }
}

impl From<&SchauderSystem> for SystemFile {
    fn from(sys: &SchauderSystem) -> Self {
        SystemFile {
            matrix: MatrixFile::from(sys.matrix()),
            labels: sys.labels.clone(),
        }
    }
}

/// `F P_n G*` given `F` and `G*`, computed as a product of thin blocks.
fn projection_from(f: &ComplexMatrix, g: &ComplexMatrix, n: usize) -> ComplexMatrix {
    &f.leading_columns(n) * &g.leading_rows(n)
}

/// The n-th natural projection `Q_n = F P_n G*` (1-based n).
pub fn natural_projection(sys: &SchauderSystem, n: usize) -> Result<ComplexMatrix> {
    sys.require_square()?;
    sys.check_index(n)?;
    let g = sys.coefficient_functionals()?;
    Ok(projection_from(sys.matrix(), &g, n))
}

/// All natural projections `Q_1, …, Q_d`.
pub fn natural_projections(sys: &SchauderSystem) -> Result<Vec<ComplexMatrix>> {
    sys.require_square()?;
    let g = sys.coefficient_functionals()?;
    Ok((1..=sys.count())
        .map(|n| projection_from(sys.matrix(), &g, n))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionEntry {
    pub n: usize,
    /// Operator norm of `Q_n`.
    pub norm: f64,
    /// Frobenius norm of `Q_n² - Q_n`, an upper bound on its operator norm.
    pub idempotency_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionReport {
    pub projections: Vec<ProjectionEntry>,
    pub basis_constant: f64,
}

/// Norms and idempotency residuals of every natural projection; `M` is their maximum.
///
/// When `F` splits into coupled blocks, `G*` splits the same way and every
/// `Q_n` is the direct sum of the blocks' own natural projections, so the
/// work is done block by block.
pub fn basis_constant(sys: &SchauderSystem) -> Result<ProjectionReport> {
    sys.require_square()?;
    let blocks = coupled_blocks(sys.matrix());
    let mut sigma_max: f64 = 0.0;
    let mut sigma_min = f64::INFINITY;
    let mut subsystems = Vec::with_capacity(blocks.len());
    for block in &blocks {
        if block.rows.len() != block.cols.len() {
            return Err(Error::RankDeficient { ratio: 0.0 });
        }
        let sub = sys.matrix().submatrix(&block.rows, &block.cols);
        let s = singular_values(&sub);
        sigma_max = sigma_max.max(s[0]);
        sigma_min = sigma_min.min(*s.last().expect("nonempty block"));
        subsystems.push(sub);
    }
    check_rank_ratio(sigma_max, sigma_min)?;

    // Per block, norm and squared residual of its p-th projection; p = 0 is zero.
    let local: Vec<Vec<(f64, f64)>> = subsystems
        .iter()
        .map(|f| {
            let g = left_inverse_unchecked(f);
            let mut out = vec![(0.0, 0.0)];
            for p in 1..=f.cols() {
                let q = projection_from(f, &g, p);
                let residual = (&(&q * &q) - &q).frobenius_norm();
                out.push((operator_norm(&q)?, residual * residual));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut prefix = vec![0usize; blocks.len()];
    let owner: Vec<usize> = {
        let mut owner = vec![0; sys.count()];
        for (b, block) in blocks.iter().enumerate() {
            for &c in &block.cols {
                owner[c] = b;
            }
        }
        owner
    };
    let mut projections = Vec::with_capacity(sys.count());
    for n in 1..=sys.count() {
        prefix[owner[n - 1]] += 1;
        let mut norm: f64 = 0.0;
        let mut residual_sqr = 0.0;
        for (b, &p) in prefix.iter().enumerate() {
            norm = norm.max(local[b][p].0);
            residual_sqr += local[b][p].1;
        }
        projections.push(ProjectionEntry {
            n,
            norm,
            idempotency_residual: residual_sqr.sqrt(),
        });
    }
    let basis_constant = projections.iter().map(|p| p.norm).fold(0.0, f64::max);
    Ok(ProjectionReport {
        projections,
        basis_constant,
    })
}

/// `|(f_k, f_l)| / (|f_k| |f_l|)` clamped to `[0, 1]`.
fn normalized_cosine(sys: &SchauderSystem, k: usize, l: usize) -> Result<f64> {
    if k == l {
        return Err(Error::domain(
            "schauder",
            format!("angle needs two distinct indices, got {k} twice"),
        ));
    }
    let fk = sys.vector(k)?;
    let fl = sys.vector(l)?;
    let r = inner(&fk, &fl).norm() / (vector_norm(&fk) * vector_norm(&fl));
    Ok(r.clamp(0.0, 1.0))
}

/// Angle between `f_k` and `f_l` (1-based), in `[0, π/2]`.
pub fn angle(sys: &SchauderSystem, k: usize, l: usize) -> Result<f64> {
    Ok(normalized_cosine(sys, k, l)?.acos())
}

/// The pair attaining the smallest angle, as `(k, l, θ_kl)` with `k < l`.
pub fn closest_pair(sys: &SchauderSystem) -> Result<(usize, usize, f64)> {
    let m = sys.count();
    if m < 2 {
        return Err(Error::domain("schauder", "minimum angle needs at least two vectors"));
    }
    let cols: Vec<_> = (0..m).map(|j| sys.matrix().column(j)).collect();
    let norms: Vec<f64> = cols.iter().map(|c| vector_norm(c)).collect();
    let mut best = (1, 2, f64::INFINITY);
    for k in 0..m {
        for l in k + 1..m {
            let r = (inner(&cols[k], &cols[l]).norm() / (norms[k] * norms[l])).clamp(0.0, 1.0);
            let theta = r.acos();
            if theta < best.2 {
                best = (k + 1, l + 1, theta);
            }
        }
    }
    Ok(best)
}

/// Smallest pairwise angle.
pub fn min_angle(sys: &SchauderSystem) -> Result<f64> {
    Ok(closest_pair(sys)?.2)
}

/// Lower bound `arccos(1 - 1/(8M²))` on every angle of a system with basis constant `M`.
///
/// Values of `M` a hair under 1 (rounding on orthonormal systems) are
/// treated as 1.
pub fn angle_bound(m: f64) -> Result<f64> {
    if m.is_nan() || m < 1.0 - ANGLE_SLACK {
        return Err(Error::domain(
            "schauder",
            format!("basis constant must be at least 1, got {m}"),
        ));
    }
    let m = m.max(1.0);
    Ok((1.0 - 1.0 / (8.0 * m * m)).acos())
}

/// `1 / (2 sqrt(2 (1 - r)))` for a normalized absolute inner product `r < 1`.
pub fn pair_bound_from_cosine(r: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain("schauder", format!("cosine must lie in [0, 1), got {r}")));
    }
    Ok(1.0 / (2.0 * (2.0 * (1.0 - r)).sqrt()))
}

/// Lower bound on the basis constant of any Schauder system that contains
/// the normalized pair `f_k, f_l`.
pub fn pair_lower_bound(sys: &SchauderSystem, k: usize, l: usize) -> Result<f64> {
    let r = normalized_cosine(sys, k, l)?;
    if r >= 1.0 {
        return Err(Error::Collinear { k, l });
    }
    pair_bound_from_cosine(r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleTheoremReport {
    pub basis_constant: f64,
    pub min_angle: f64,
    pub closest_pair: (usize, usize),
    pub bound: f64,
    pub pass: bool,
}

/// Checks `θ_min >= arccos(1 - 1/(8M²))` on a square invertible system.
pub fn verify_angle_theorem(sys: &SchauderSystem) -> Result<AngleTheoremReport> {
    let m = basis_constant(sys)?.basis_constant;
    let (k, l, min_angle) = closest_pair(sys)?;
    let bound = angle_bound(m)?;
    Ok(AngleTheoremReport {
        basis_constant: m,
        min_angle,
        closest_pair: (k, l),
        bound,
        pass: min_angle >= bound - ANGLE_SLACK,
    })
}

/// Block-diagonal minimal system with `N` two-dimensional blocks whose
/// angles shrink to zero.
///
/// Block n holds `(1, 0)` and `(c_n, sqrt(1 - c_n²))` with `c_n = 1 - 1/n`;
/// the first block uses `c_1 = 1/2`.
pub fn example_minimal_sequence(blocks: usize) -> Result<SchauderSystem> {
    if blocks == 0 {
        return Err(Error::domain("schauder", "at least one block is required"));
    }
    let d = 2 * blocks;
    let mut f = ComplexMatrix::zeros(d, d);
    for n in 1..=blocks {
        let c = if n == 1 { 0.5 } else { 1.0 - 1.0 / n as f64 };
        let s = (1.0 - c * c).sqrt();
        let (row, col) = (2 * (n - 1), 2 * (n - 1));
        f[(row, col)] = Complex64::new(1.0, 0.0);
        f[(row, col + 1)] = Complex64::new(c, 0.0);
        f[(row + 1, col + 1)] = Complex64::new(s, 0.0);
    }
    SchauderSystem::new(f)
}

/// A random square system with unit columns drawn from the complex
/// Gaussian ensemble, resampled until it passes the rank tolerance.
pub fn random_normalized_system<R: Rng + ?Sized>(rng: &mut R, d: usize) -> SchauderSystem {
    loop {
        let columns: Vec<Vec<Complex64>> = (0..d)
            .map(|_| {
                let v: Vec<Complex64> = (0..d)
                    .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                    .collect();
                let norm = vector_norm(&v);
                v.into_iter().map(|z| z / norm).collect()
            })
            .collect();
        if let Ok(sys) = SchauderSystem::from_columns(&columns) {
            if sys.coefficient_functionals().is_ok() {
                return sys;
            }
        }
    }
}
