use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;

use schauder::diophantine::{simultaneous_approx, verify_bound};
use schauder::measure::{near_unimodular_exponent, MeasureFile};
use schauder::numerics::condition_number;
use schauder::schauder::{
    angle, basis_constant, closest_pair, example_minimal_sequence, pair_lower_bound, random_normalized_system,
    verify_angle_theorem, SystemFile,
};
use schauder::shiftrep::{shift_divergence_experiment, shift_representation, DivergenceRow};
use schauder::{Complex64, DiscreteMeasure, Error, SchauderSystem};

use crate::{Command, Format};

const CONSISTENCY_TOL: f64 = 1e-9;

pub struct Outcome {
    pub output: String,
    pub flagged: bool,
}

pub struct CliError {
    pub code: String,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            code: e.code(),
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Rounds to 12 significant digits; angles are reported this way.
fn sig12(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError {
        code: "io.read".into(),
        message: format!("{}: {e}", path.display()),
    })?;
    serde_json::from_str(&text).map_err(|e| CliError {
        code: "io.parse".into(),
        message: format!("{}: {e}", path.display()),
    })
}

fn load_system(path: &Path) -> CliResult<SchauderSystem> {
    Ok(SchauderSystem::try_from(read_json::<SystemFile>(path)?)?)
}

fn load_measure(path: &Path) -> CliResult<DiscreteMeasure> {
    Ok(DiscreteMeasure::try_from(read_json::<MeasureFile>(path)?)?)
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

fn ok<T: Serialize>(value: &T, flagged: bool) -> CliResult<Outcome> {
    Ok(Outcome {
        output: json(value),
        flagged,
    })
}

pub fn run(command: &Command) -> CliResult<Outcome> {
    match command {
        Command::BasisConstant { system } => {
            let report = basis_constant(&load_system(system)?)?;
            ok(&report, false)
        }
        Command::Angles { system } => angles(&load_system(system)?),
        Command::VerifyTheorem { system: Some(path), .. } => {
            let mut report = verify_angle_theorem(&load_system(path)?)?;
            report.min_angle = sig12(report.min_angle);
            report.bound = sig12(report.bound);
            let flagged = !report.pass;
            ok(&report, flagged)
        }
        Command::VerifyTheorem {
            system: None,
            seed,
            trials,
        } => random_suite(*seed, *trials),
        Command::Approx { x, n } => {
            let result = simultaneous_approx(x, *n)?;
            #[derive(Serialize)]
            struct Report<'a> {
                #[serde(flatten)]
                result: &'a schauder::diophantine::ApproxResult,
                verified: bool,
            }
            let verified = verify_bound(x, &result, *n);
            ok(
                &Report {
                    result: &result,
                    verified,
                },
                !(result.satisfied && verified),
            )
        }
        Command::MomentSearch { measure, eps, cap } => {
            let result = near_unimodular_exponent(&load_measure(measure)?, *eps, *cap)?;
            ok(&result, !result.satisfied)
        }
        Command::Divergence { measure, dmax, format } => {
            let rows = shift_divergence_experiment(&load_measure(measure)?, *dmax)?;
            let flagged = rows.iter().any(|r| !r.consistent(CONSISTENCY_TOL));
            let output = match format {
                Format::Csv => divergence_csv(&rows),
                Format::Json => json(&rows.iter().map(RoundedRow::from).collect::<Vec<_>>()),
            };
            Ok(Outcome { output, flagged })
        }
        Command::ShiftRep { measure, d } => shift_rep(&load_measure(measure)?, *d),
        Command::Example22 { n } => example(*n),
    }
}

fn angles(sys: &SchauderSystem) -> CliResult<Outcome> {
    #[derive(Serialize)]
    struct Pair {
        k: usize,
        l: usize,
        angle: f64,
        pair_bound: Option<f64>,
    }
    #[derive(Serialize)]
    struct Report {
        min_angle: f64,
        closest_pair: (usize, usize),
        pairs: Vec<Pair>,
    }
    let (k, l, min_angle) = closest_pair(sys)?;
    let mut pairs = Vec::new();
    for i in 1..=sys.count() {
        for j in i + 1..=sys.count() {
            pairs.push(Pair {
                k: i,
                l: j,
                angle: sig12(angle(sys, i, j)?),
                pair_bound: pair_lower_bound(sys, i, j).ok(),
            });
        }
    }
    ok(
        &Report {
            min_angle: sig12(min_angle),
            closest_pair: (k, l),
            pairs,
        },
        false,
    )
}

fn random_suite(seed: u64, trials: usize) -> CliResult<Outcome> {
    #[derive(Serialize)]
    struct Report {
        seed: u64,
        trials: usize,
        failures: usize,
        /// Smallest `θ_min - bound` over all trials.
        worst_margin: f64,
        max_basis_constant: f64,
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut worst_margin = f64::INFINITY;
    let mut max_m: f64 = 0.0;
    for _ in 0..trials {
        let d = rng.random_range(2..=12);
        let sys = random_normalized_system(&mut rng, d);
        let report = verify_angle_theorem(&sys)?;
        if !report.pass {
            failures += 1;
        }
        worst_margin = worst_margin.min(report.min_angle - report.bound);
        max_m = max_m.max(report.basis_constant);
    }
    let report = Report {
        seed,
        trials,
        failures,
        worst_margin: if trials == 0 { 0.0 } else { sig12(worst_margin) },
        max_basis_constant: max_m,
    };
    ok(&report, failures > 0)
}

#[derive(Serialize)]
struct RoundedRow {
    d: usize,
    basis_constant: Option<f64>,
    theta_min: f64,
    angle_bound: Option<f64>,
    pair_bound: Option<f64>,
    closest_pair: (i64, i64),
    conditioning_flag: bool,
}

impl From<&DivergenceRow> for RoundedRow {
    fn from(r: &DivergenceRow) -> Self {
        RoundedRow {
            d: r.d,
            basis_constant: r.basis_constant,
            theta_min: sig12(r.theta_min),
            angle_bound: r.angle_bound.map(sig12),
            pair_bound: r.pair_bound,
            closest_pair: r.closest_pair,
            conditioning_flag: r.conditioning_flag,
        }
    }
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn divergence_csv(rows: &[DivergenceRow]) -> String {
    let mut out = String::from("d,M_d,theta_min,angle_bound,pair_bound,conditioning_flag");
    for row in rows.iter().map(RoundedRow::from) {
        let _ = write!(
            out,
            "\n{},{},{},{},{},{}",
            row.d,
            opt_cell(row.basis_constant),
            row.theta_min,
            opt_cell(row.angle_bound),
            opt_cell(row.pair_bound),
            row.conditioning_flag
        );
    }
    out
}

fn pairs(values: &[Complex64]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

fn shift_rep(nu: &DiscreteMeasure, d: usize) -> CliResult<Outcome> {
    #[derive(Serialize)]
    struct Report {
        d: usize,
        eigenvalues: Vec<[f64; 2]>,
        cyclic_vector: Vec<[f64; 2]>,
        closing_column: Vec<[f64; 2]>,
        shift_residual: f64,
        similarity_residual: f64,
        condition_number: f64,
    }
    let rep = shift_representation(nu, d, None)?;
    let eigen: Vec<_> = (0..d).map(|j| rep.multiplication[(j, j)]).collect();
    let report = Report {
        d,
        eigenvalues: pairs(&eigen),
        cyclic_vector: pairs(&rep.cyclic_vector),
        closing_column: pairs(&rep.closing_column()),
        shift_residual: rep.shift_residual(),
        similarity_residual: rep.similarity_residual(),
        condition_number: condition_number(rep.basis.matrix())?,
    };
    let flagged = report.shift_residual > CONSISTENCY_TOL || report.similarity_residual > CONSISTENCY_TOL;
    ok(&report, flagged)
}

fn example(blocks: usize) -> CliResult<Outcome> {
    #[derive(Serialize)]
    struct Report {
        blocks: usize,
        min_angle: f64,
        basis_constant: f64,
        pair_bound: f64,
        system: SystemFile,
    }
    let sys = example_minimal_sequence(blocks)?;
    let (k, l, min_angle) = closest_pair(&sys)?;
    let report = Report {
        blocks,
        min_angle: sig12(min_angle),
        basis_constant: basis_constant(&sys)?.basis_constant,
        pair_bound: pair_lower_bound(&sys, k, l)?,
        system: SystemFile::from(&sys),
    };
    ok(&report, false)
}
