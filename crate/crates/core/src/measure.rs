//! Discrete measures on the unit circle and their trigonometric moments.
//!
//! A measure is a finite list of atoms `e^{2πi t_j}` with weights `w_j`,
//! optionally followed by an unrepresented tail of known total mass. The
//! moment of exponent `b` is `sum_j w_j e^{2πi b t_j}`, which is also the
//! inner product of `z^b` and `1` in `L²(ν)`. Exponents with
//! near-unimodular moments make `z^b` and `1` nearly collinear, which no
//! Schauder basis can tolerate for long.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;
use crate::schauder::SchauderSystem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    /// Position on the circle as a fraction of a full turn, in `[0, 1)`.
    pub t: f64,
    /// Positive mass.
    pub w: f64,
}

impl Atom {
    pub fn point(&self) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.t)
    }
}

/// A finite positive discrete measure on the circle.
///
/// Atoms are kept in order of descending weight; equal weights keep their
/// input order.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    atoms: Vec<Atom>,
    total_mass: f64,
    tail_mass: f64,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        for (j, a) in atoms.iter().enumerate() {
            if !a.t.is_finite() || !(0.0..1.0).contains(&a.t) {
                return Err(Error::InvalidMeasure(format!(
                    "atom {j}: position {} is outside [0, 1)",
                    a.t
                )));
            }
            if !a.w.is_finite() || a.w <= 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "atom {j}: weight {} is not positive",
                    a.w
                )));
            }
        }
        let mut sorted: Vec<f64> = atoms.iter().map(|a| a.t).collect();
        sorted.sort_by(f64::total_cmp);
        if let Some(pair) = sorted.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::InvalidMeasure(format!("duplicate atom position {}", pair[0])));
        }
        let mut atoms = atoms;
        atoms.sort_by(|x, y| y.w.total_cmp(&x.w));
        let total_mass = atoms.iter().map(|a| a.w).sum();
        Ok(Self {
            atoms,
            total_mass,
            tail_mass: 0.0,
        })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(t, w)| Atom { t, w }).collect())
    }

    /// Declares the mass of atoms beyond the represented ones.
    pub fn with_tail_mass(mut self, tail_mass: f64) -> Result<Self> {
        if !tail_mass.is_finite() || tail_mass < 0.0 {
            return Err(Error::InvalidMeasure(format!("tail mass {tail_mass} is negative")));
        }
        self.tail_mass = tail_mass;
        Ok(self)
    }

    /// Probability measure on `t_j = frac(j √2)`, `j = 1..=count`, with
    /// weights proportional to `ratio^j`.
    pub fn irrational_rotation(count: usize, ratio: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio <= 1.0) {
            return Err(Error::InvalidMeasure(format!("ratio {ratio} is outside (0, 1]")));
        }
        let raw: Vec<Atom> = (1..=count)
            .map(|j| Atom {
                t: (j as f64 * std::f64::consts::SQRT_2).fract(),
                w: ratio.powi(j as i32),
            })
            .collect();
        let mass: f64 = raw.iter().map(|a| a.w).sum();
        Self::new(raw.into_iter().map(|a| Atom { t: a.t, w: a.w / mass }).collect())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Sum of the represented weights.
    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// Represented mass plus tail.
    pub fn full_mass(&self) -> f64 {
        self.total_mass + self.tail_mass
    }

    /// Index of the atom at exactly `t`.
    pub fn position_of(&self, t: f64) -> Option<usize> {
        self.atoms.iter().position(|a| a.t == t)
    }

    /// The measure restricted to its first `d` atoms.
    pub fn head(&self, d: usize) -> Result<Self> {
        self.check_atom_count(d)?;
        Self::new(self.atoms[..d].to_vec())
    }

    pub(crate) fn check_atom_count(&self, d: usize) -> Result<()> {
        if d == 0 || d > self.len() {
            return Err(Error::domain(
                "measure",
                format!("dimension {d} needs 1..={} atoms", self.len()),
            ));
        }
        Ok(())
    }

    /// `L²` norm of a function given by its values on the atoms.
    pub fn l2_norm(&self, values: &[Complex64]) -> Result<f64> {
        if values.len() != self.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} values", self.len()),
                found: format!("{} values", values.len()),
            });
        }
        Ok(values
            .iter()
            .zip(&self.atoms)
            .map(|(g, a)| g.norm_sqr() * a.w)
            .sum::<f64>()
            .sqrt())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureFile {
    pub atoms: Vec<Atom>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_mass: Option<f64>,
}

impl TryFrom<MeasureFile> for DiscreteMeasure {
    type Error = Error;

    fn try_from(file: MeasureFile) -> Result<Self> {
        let nu = DiscreteMeasure::new(file.atoms)?;
        nu.with_tail_mass(file.tail_mass.unwrap_or(0.0))
    }
}

impl From<&DiscreteMeasure> for MeasureFile {
    fn from(nu: &DiscreteMeasure) -> Self {
        MeasureFile {
            atoms: nu.atoms.clone(),
            tail_mass: (nu.tail_mass > 0.0).then_some(nu.tail_mass),
        }
    }
}

/// `e^{2πi b t}` with the phase reduced to one turn before the trig call.
fn unimodular(b: i64, t: f64) -> Complex64 {
    let phase = (b as f64 * t).rem_euclid(1.0);
    Complex64::from_polar(1.0, TAU * phase)
}

/// `∫ z^b dν = sum_j w_j e^{2πi b t_j}` over the represented atoms.
pub fn moment(nu: &DiscreteMeasure, b: i64) -> Complex64 {
    if b == 0 {
        return Complex64::new(nu.total_mass, 0.0);
    }
    nu.atoms.iter().map(|a| a.w * unimodular(b, a.t)).sum()
}

/// Smallest `k >= 1` whose leading atoms carry at least `1 - ε` of the
/// normalized mass. `ε` is clamped to `(0, 1)`.
pub fn tail_cutoff(nu: &DiscreteMeasure, eps: f64) -> Result<usize> {
    let eps = eps.clamp(f64::EPSILON, 1.0 - f64::EPSILON);
    let need = (1.0 - eps) * nu.full_mass();
    let mut head = 0.0;
    for (k, a) in nu.atoms.iter().enumerate() {
        head += a.w;
        if head >= need {
            return Ok(k + 1);
        }
    }
    Err(Error::InvalidMeasure(format!(
        "represented atoms carry {head} of {} mass, short of 1 - {eps}",
        nu.full_mass()
    )))
}

/// Largest `δ` with `cos 2πx > 1 - ε` and `|sin 2πx| < ε` for all `|x| < δ`:
/// `min(arccos(1 - ε), arcsin ε) / 2π`. `ε` is clamped to `[0, 1]`.
pub fn delta_for(eps: f64) -> f64 {
    let eps = eps.clamp(0.0, 1.0);
    (1.0 - eps).acos().min(eps.asin()) / TAU
}

/// Smallest integer `n` with `n^(1/k) > 1/δ`, saturating at `u64::MAX`.
pub fn dirichlet_ceiling(k: usize, delta: f64) -> u64 {
    let bound = delta.recip().powi(k as i32);
    if !bound.is_finite() || bound >= u64::MAX as f64 {
        u64::MAX
    } else {
        bound.floor() as u64 + 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSearchResult {
    pub b: u64,
    pub moment_abs: f64,
    pub epsilon: f64,
    pub k: usize,
    pub delta: f64,
    /// Exponent ceiling below which a qualifying `b` must exist.
    pub n: u64,
    pub scanned: u64,
    pub satisfied: bool,
}

/// Finds the first exponent `b >= 1` with `|∫ z^b dν| > (1 - 4ε) ν(T)`.
///
/// The tail cutoff `k`, the width `δ` and the ceiling `n` that bound where
/// such a `b` must exist are computed and reported alongside; the scan
/// itself runs `b = 1..=cap` and stops at the first hit. Without a hit the
/// best exponent seen comes back with `satisfied = false`.
pub fn near_unimodular_exponent(nu: &DiscreteMeasure, eps: f64, cap: u64) -> Result<MomentSearchResult> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain("measure", format!("epsilon {eps} is outside (0, 1)")));
    }
    if cap == 0 {
        return Err(Error::domain("measure", "scan cap must be positive"));
    }
    let k = tail_cutoff(nu, eps)?;
    let delta = delta_for(eps);
    let n = dirichlet_ceiling(k, delta);
    let target = (1.0 - 4.0 * eps) * nu.full_mass();

    let mut best = (1u64, -1.0f64);
    for b in 1..=cap {
        let abs = moment(nu, b as i64).norm();
        if abs > target {
            return Ok(MomentSearchResult {
                b,
                moment_abs: abs,
                epsilon: eps,
                k,
                delta,
                n,
                scanned: b,
                satisfied: true,
            });
        }
        if abs > best.1 {
            best = (b, abs);
        }
    }
    Ok(MomentSearchResult {
        b: best.0,
        moment_abs: best.1,
        epsilon: eps,
        k,
        delta,
        n,
        scanned: cap,
        satisfied: false,
    })
}

/// The measure `μ` with weights `|f(t_j)|² w_j`, making `g ↦ g f` an
/// isometry `L²(μ) → L²(ν)`. Atoms where `f` vanishes are dropped; the
/// tail is not carried over.
pub fn pushforward(nu: &DiscreteMeasure, f_values: &[Complex64]) -> Result<DiscreteMeasure> {
    if f_values.len() != nu.len() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} values", nu.len()),
            found: format!("{} values", f_values.len()),
        });
    }
    if let Some(j) = f_values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::domain("measure", format!("f value {j} is not finite")));
    }
    let atoms: Vec<Atom> = nu
        .atoms
        .iter()
        .zip(f_values)
        .filter(|(_, f)| f.norm_sqr() > 0.0)
        .map(|(a, f)| Atom {
            t: a.t,
            w: f.norm_sqr() * a.w,
        })
        .collect();
    DiscreteMeasure::new(atoms)
}

/// The monomials `z^{m}` for the given exponents on the first `d` atoms,
/// embedded by `g ↦ (g(t_j) sqrt(w_j))_j` so Euclidean inner products are
/// `L²` inner products. `d` is the number of exponents.
pub fn monomial_system(nu: &DiscreteMeasure, exponents: &[i64]) -> Result<SchauderSystem> {
    let d = exponents.len();
    nu.check_atom_count(d)?;
    let mut seen = exponents.to_vec();
    seen.sort_unstable();
    if seen.windows(2).any(|p| p[0] == p[1]) {
        return Err(Error::domain("measure", "exponents must be pairwise distinct"));
    }
    let mut f = ComplexMatrix::zeros(d, d);
    for (j, atom) in nu.atoms[..d].iter().enumerate() {
        let scale = atom.w.sqrt();
        for (col, &m) in exponents.iter().enumerate() {
            f[(j, col)] = scale * unimodular(m, atom.t);
        }
    }
    SchauderSystem::new(f)?.with_labels(exponents.to_vec())
}

/// The first `d` integers in the order `0, 1, -1, 2, -2, …`.
pub fn interleave_enumeration(d: usize) -> Vec<i64> {
    (0..d as i64)
        .map(|i| if i % 2 == 1 { (i + 1) / 2 } else { -i / 2 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point() -> DiscreteMeasure {
        DiscreteMeasure::from_pairs(&[(0.0, 0.5), (0.5, 0.5)]).unwrap()
    }

    #[test]
    fn construction_validates() {
        assert_eq!(DiscreteMeasure::new(vec![]).unwrap_err(), Error::EmptyMeasure);
        assert!(DiscreteMeasure::from_pairs(&[(1.0, 1.0)]).is_err());
        assert!(DiscreteMeasure::from_pairs(&[(-0.1, 1.0)]).is_err());
        assert!(DiscreteMeasure::from_pairs(&[(0.2, 0.0)]).is_err());
        assert!(DiscreteMeasure::from_pairs(&[(0.2, 1.0), (0.2, 2.0)]).is_err());
        assert!(DiscreteMeasure::from_pairs(&[(0.2, f64::NAN)]).is_err());
    }

    #[test]
    fn atoms_sorted_by_descending_weight() {
        let nu = DiscreteMeasure::from_pairs(&[(0.1, 0.2), (0.3, 0.5), (0.7, 0.2), (0.9, 0.1)]).unwrap();
        let ts: Vec<f64> = nu.atoms().iter().map(|a| a.t).collect();
        assert_eq!(ts, vec![0.3, 0.1, 0.7, 0.9]);
        assert!((nu.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn moment_examples() {
        let single = DiscreteMeasure::from_pairs(&[(0.0, 1.0)]).unwrap();
        for b in [-3, 0, 1, 17] {
            assert!((moment(&single, b) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
        let nu = two_point();
        assert!(moment(&nu, 1).norm() < 1e-15);
        assert!((moment(&nu, 2) - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        let q = 7;
        let rational = DiscreteMeasure::from_pairs(&[(1.0 / 7.0, 0.3), (3.0 / 7.0, 0.9), (6.0 / 7.0, 0.4)]).unwrap();
        assert!((moment(&rational, q).re - rational.total_mass()).abs() < 1e-12);
        assert_eq!(moment(&rational, 0).re, rational.total_mass());
    }

    #[test]
    fn tail_cutoff_examples() {
        assert_eq!(tail_cutoff(&two_point(), 0.6).unwrap(), 1);
        assert_eq!(tail_cutoff(&two_point(), 1.5).unwrap(), 1);
        assert_eq!(tail_cutoff(&two_point(), 0.1).unwrap(), 2);

        let j_max = 20;
        let norm = 1.0 - 2f64.powi(-j_max);
        let pairs: Vec<(f64, f64)> = (1..=j_max)
            .map(|j| ((j as f64 * 0.618_033_988_749_895).fract(), 2f64.powi(-j) / norm))
            .collect();
        let nu = DiscreteMeasure::from_pairs(&pairs).unwrap();
        // Partial sums (1 - 2^-k)/(1 - 2^-20): k = 6 gives 0.98438, k = 7 gives 0.99219.
        assert_eq!(tail_cutoff(&nu, 0.01).unwrap(), 7);
    }

    #[test]
    fn tail_cutoff_respects_declared_tail() {
        let nu = DiscreteMeasure::from_pairs(&[(0.0, 0.5), (0.25, 0.25)])
            .unwrap()
            .with_tail_mass(0.25)
            .unwrap();
        assert_eq!(tail_cutoff(&nu, 0.5).unwrap(), 1);
        assert_eq!(tail_cutoff(&nu, 0.3).unwrap(), 2);
        assert!(tail_cutoff(&nu, 0.1).is_err());
    }

    #[test]
    fn delta_examples() {
        assert!((delta_for(1.0) - 0.25).abs() < 1e-15);
        assert!((delta_for(0.1) - 0.1_f64.asin() / TAU).abs() < 1e-15);
        assert!((delta_for(0.1) - 0.015_942_14).abs() < 1e-8);
        let mut prev = 0.0;
        for i in 1..=100 {
            let d = delta_for(i as f64 / 100.0);
            assert!(d > prev);
            prev = d;
        }
    }

    #[test]
    fn delta_meets_both_constraints() {
        for eps in [0.01, 0.1, 0.3, 0.7, 0.95] {
            let delta = delta_for(eps);
            for i in 0..1000 {
                let x = delta * i as f64 / 1000.0;
                assert!(1.0 < (TAU * x).cos() + eps + 1e-15);
                assert!((TAU * x).sin().abs() < eps + 1e-15);
            }
        }
    }

    #[test]
    fn dirichlet_ceiling_values() {
        assert_eq!(dirichlet_ceiling(1, 0.25), 5);
        assert_eq!(dirichlet_ceiling(2, 0.1), 101);
        assert_eq!(dirichlet_ceiling(40, 0.01), u64::MAX);
    }

    #[test]
    fn search_two_point() {
        let r = near_unimodular_exponent(&two_point(), 0.1, 100).unwrap();
        assert_eq!(r.b, 2);
        assert!((r.moment_abs - 1.0).abs() < 1e-12);
        assert!(r.satisfied);
        assert_eq!(r.scanned, 2);
    }

    #[test]
    fn search_flags_cap_exhaustion() {
        let nu = DiscreteMeasure::irrational_rotation(4, 0.5).unwrap();
        let r = near_unimodular_exponent(&nu, 0.001, 3).unwrap();
        assert!(!r.satisfied);
        assert_eq!(r.scanned, 3);
        assert!((moment(&nu, r.b as i64).norm() - r.moment_abs).abs() < 1e-12);
    }

    #[test]
    fn search_rejects_bad_parameters() {
        assert!(near_unimodular_exponent(&two_point(), 0.0, 10).is_err());
        assert!(near_unimodular_exponent(&two_point(), 1.0, 10).is_err());
        assert!(near_unimodular_exponent(&two_point(), 0.1, 0).is_err());
    }

    #[test]
    fn pushforward_examples() {
        let nu = DiscreteMeasure::from_pairs(&[(0.1, 1.0), (0.6, 1.0)]).unwrap();
        let ones = vec![Complex64::new(1.0, 0.0); 2];
        assert_eq!(pushforward(&nu, &ones).unwrap(), nu);

        let mu = pushforward(&nu, &[Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        assert_eq!(mu.atoms(), &[Atom { t: 0.1, w: 4.0 }]);

        let zeros = vec![Complex64::new(0.0, 0.0); 2];
        assert_eq!(pushforward(&nu, &zeros).unwrap_err(), Error::EmptyMeasure);
        assert!(pushforward(&nu, &ones[..1]).is_err());
    }

    #[test]
    fn monomial_system_examples() {
        let nu = DiscreteMeasure::from_pairs(&[(0.3, 0.49)]).unwrap();
        let sys = monomial_system(&nu, &[0]).unwrap();
        assert!((sys.matrix()[(0, 0)] - Complex64::new(0.7, 0.0)).norm() < 1e-15);

        let sys = monomial_system(&two_point(), &[0, 1]).unwrap();
        let theta = crate::schauder::angle(&sys, 1, 2).unwrap();
        assert!((theta - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert_eq!(sys.labels(), Some(&[0, 1][..]));

        assert!(monomial_system(&two_point(), &[0, 0]).is_err());
        assert!(monomial_system(&two_point(), &[0, 1, 2]).is_err());
    }

    #[test]
    fn interleave_examples() {
        assert_eq!(interleave_enumeration(1), vec![0]);
        assert_eq!(interleave_enumeration(5), vec![0, 1, -1, 2, -2]);
        let mut v = interleave_enumeration(101);
        v.sort_unstable();
        v.dedup();
        assert_eq!(v.len(), 101);
    }

    #[test]
    fn measure_file_round_trip() {
        let json = r#"{"atoms":[{"t":0.25,"w":0.75},{"t":0.5,"w":0.25}],"tail_mass":0.125}"#;
        let file: MeasureFile = serde_json::from_str(json).unwrap();
        let nu = DiscreteMeasure::try_from(file).unwrap();
        assert_eq!(nu.full_mass(), 1.125);
        assert_eq!(serde_json::to_string(&MeasureFile::from(&nu)).unwrap(), json);
    }
}
