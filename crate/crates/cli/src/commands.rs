use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use parity_bell::bell::{
    bell_operator, bell_square_identity_check, mermin_operator, quantum_bound, BellReport,
    MeasurementSettings,
};
use parity_bell::correlation::CorrelationTensor;
use parity_bell::fock::{apply, spectral_radius, SparseOperator, C64};
use parity_bell::lhv::{ghz_constraints, ghz_constraints_satisfiable, quantum_vs_lhv_gap};
use parity_bell::optimize::{optimize_settings, OptimizerConfig, SearchRegistry, SearchRequest};
use parity_bell::pseudospin::{build_pseudospin, UnitVector3};
use parity_bell::states::{
    ghz_state, nopa_state, GhzSpec, NopaParams, StateRegistry, StateRequest,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::{
    AlgebraArgs, ChshArgs, Command, GhzEigenArgs, MerminGapArgs, OperatorArgs, OptimizerArgs,
    ParadoxArgs, SweepArgs,
};
use crate::report::{Field, Record, Report};
use crate::CliError;

const ALGEBRA_TOL: f64 = 1e-12;
const EIGEN_TOL: f64 = 1e-10;
const SQUARE_TOL: f64 = 1e-10;
const BOUND_SLACK: f64 = 1e-9;
const SWEEP_TOL: f64 = 1e-4;
const POWER_ITERATIONS: usize = 100_000;

pub fn run(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::AlgebraCheck(a) => algebra_check(a),
        Command::GhzEigen(a) => ghz_eigen(a),
        Command::Paradox(a) => paradox(a),
        Command::MerminGap(a) => mermin_gap(a),
        Command::Chsh(a) => chsh(a),
        Command::Sweep(a) => sweep(a),
        Command::Spectral(a) => spectral(a),
        Command::SquareIdentity(a) => square_identity(a),
    }
}

fn optimizer_config(args: &OptimizerArgs) -> OptimizerConfig {
    OptimizerConfig {
        restarts: args.restarts,
        tol: args.tol,
        seed: args.seed,
        plane_constraint: args.plane,
        ..OptimizerConfig::default()
    }
}

fn vectors(vs: impl IntoIterator<Item = UnitVector3>) -> Field {
    Field::Vectors(vs.into_iter().map(|v| v.to_array()).collect())
}

/// Reads a JSON array of `[x, y, z]` unit vectors, `a_1, a'_1, a_2, …`.
pub fn read_settings(path: &Path) -> Result<MeasurementSettings, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let raw: Vec<[f64; 3]> = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("settings file {}: {e}", path.display())))?;
    let unit: Vec<UnitVector3> = raw
        .iter()
        .map(|[x, y, z]| UnitVector3::new(*x, *y, *z))
        .collect::<Result<_, _>>()?;
    if !unit.len().is_multiple_of(2) {
        return Err(CliError::Usage(format!(
            "settings file {}: expected 2N vectors, got {}",
            path.display(),
            unit.len()
        )));
    }
    Ok(MeasurementSettings::from_flat(&unit)?)
}

fn algebra_check(args: &AlgebraArgs) -> Result<Report, CliError> {
    let dims = match args.dim {
        Some(d) => vec![d],
        None => vec![2, 4, 8, 16],
    };
    let two_i = C64::new(0.0, 2.0);
    let mut max_residual: f64 = 0.0;
    for &dim in &dims {
        let s = build_pseudospin(dim)?;
        let zero = SparseOperator::zero(dim);
        let two = s.identity().scale(2.0);
        let spins = [&s.sx, &s.sy, &s.sz];
        let mut relations = vec![
            (s.sz.commutator(&s.s_plus)?, s.s_plus.scale(2.0)),
            (s.sz.commutator(&s.s_minus)?, s.s_minus.scale(-2.0)),
            (s.s_plus.commutator(&s.s_minus)?, s.sz.clone()),
            (s.sx.commutator(&s.sy)?, s.sz.scale_complex(two_i)),
            (s.sy.commutator(&s.sz)?, s.sx.scale_complex(two_i)),
            (s.sz.commutator(&s.sx)?, s.sy.scale_complex(two_i)),
        ];
        for (i, a) in spins.iter().enumerate() {
            for (j, b) in spins.iter().enumerate() {
                let expected = if i == j { two.clone() } else { zero.clone() };
                relations.push((a.anticommutator(b)?, expected));
            }
        }
        for (lhs, rhs) in relations {
            max_residual = max_residual.max(lhs.max_abs_distance(&rhs)?);
        }
    }
    let summary = Record::new()
        .with(
            "dims",
            dims.iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        )
        .with("max_residual", max_residual)
        .with("tolerance", ALGEBRA_TOL);
    Ok(Report::single(summary, max_residual < ALGEBRA_TOL))
}

fn ghz_eigen(args: &GhzEigenArgs) -> Result<Report, CliError> {
    let profile = args.profile.build(args.dim)?;
    let state = ghz_state(&GhzSpec::shared(args.modes, args.dim, profile)?)?;
    let mut summary = Record::new()
        .with("modes", args.modes)
        .with("dim", args.dim)
        .with("profile", args.profile.to_string());
    let mut worst: f64 = 0.0;
    if args.modes == 3 {
        let r = parity_bell::bell::ghz_eigen_check(&state, args.dim)?;
        for (key, value) in [
            "xxx_residual",
            "xyy_residual",
            "yxy_residual",
            "yyx_residual",
        ]
        .into_iter()
        .zip(r.as_array())
        {
            summary.push(key, value);
        }
        worst = r.max();
    }
    let a = mermin_operator(args.modes, args.dim)?;
    let eigenvalue = -(2f64.powi(args.modes as i32 - 1));
    let mermin_residual = apply(&a, &state)?
        .sub(&state.scale(C64::new(eigenvalue, 0.0)))?
        .norm();
    worst = worst.max(mermin_residual);
    summary.push("mermin_eigenvalue", eigenvalue);
    summary.push("mermin_residual", mermin_residual);
    summary.push("tolerance", EIGEN_TOL);
    Ok(Report::single(summary, worst < EIGEN_TOL))
}

fn paradox(args: &ParadoxArgs) -> Result<Report, CliError> {
    if args.modes != 3 {
        return Err(CliError::Usage(format!(
            "paradox is defined for 3 modes, got {}",
            args.modes
        )));
    }
    let report = ghz_constraints_satisfiable();
    let constraints = ghz_constraints();
    let mut witnesses_when_dropped = Vec::with_capacity(constraints.len());
    for skip in 0..constraints.len() {
        let rest: Vec<_> = constraints
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, c)| *c)
            .collect();
        witnesses_when_dropped.push(parity_bell::lhv::enumerate_constraints(&rest).satisfying);
    }
    let all_relaxations_satisfiable = witnesses_when_dropped.iter().all(|&n| n > 0);
    let summary = Record::new()
        .with("satisfiable", report.satisfiable)
        .with("assignments_checked", report.assignments_checked)
        .with("satisfying", report.satisfying)
        .with(
            "satisfying_without_each_constraint",
            Field::Ints(witnesses_when_dropped.iter().map(|&n| n as i64).collect()),
        );
    Ok(Report::single(
        summary,
        !report.satisfiable && all_relaxations_satisfiable,
    ))
}

fn mermin_gap(args: &MerminGapArgs) -> Result<Report, CliError> {
    let gap = quantum_vs_lhv_gap(args.modes, args.dim)?;
    let mut summary = Record::new()
        .with("modes", args.modes)
        .with("quantum", gap.quantum)
        .with("lhv_max", gap.lhv)
        .with("lhv_bound", gap.lhv_bound)
        .with("ratio", gap.ratio)
        .with("ratio_vs_bound", gap.ratio_vs_bound);
    let mut pass = gap.lhv <= gap.lhv_bound;
    if let Some(q) = gap.simulated_quantum {
        summary.push("simulated_quantum", q);
        pass &= (q - gap.quantum).abs() < EIGEN_TOL;
    } else if args.dim.is_some() {
        summary.push("simulated_quantum", "skipped: exceeds size budget");
    }
    Ok(Report::single(summary, pass))
}

fn chsh(args: &ChshArgs) -> Result<Report, CliError> {
    let (default_modes, default_dim) = match args.state.as_str() {
        "nopa" => (2, 32),
        _ => (3, 16),
    };
    let request = StateRequest {
        modes: args.modes.unwrap_or(default_modes),
        dim: args.dim.unwrap_or(default_dim),
        profile: args.profile,
        r: args.r,
    };
    let prepared = StateRegistry::default()
        .get(&args.state)?
        .prepare(&request)?;

    let report: BellReport = if let Some(path) = &args.settings_file {
        let settings = read_settings(path)?;
        let value = CorrelationTensor::of_state(&prepared.state)?.bell_value(&settings)?;
        BellReport::new(value, settings)
    } else {
        let search = SearchRequest {
            config: optimizer_config(&args.optimizer),
            grid_resolution: args.grid_step.to_radians(),
        };
        SearchRegistry::default()
            .get(&args.strategy)?
            .search(&prepared.state, &search)?
    };

    let mut summary = Record::new()
        .with("state", prepared.description.as_str())
        .with("modes", report.n_modes)
        .with("dim", request.dim)
        .with("value", report.value)
        .with("abs_value", report.abs_value)
        .with("local_bound", report.local_bound)
        .with("quantum_bound", report.quantum_bound)
        .with("violation_factor", report.violation_factor)
        .with("violates_local_bound", report.violates_local_bound());
    if let Some(deficit) = prepared.deficit {
        summary.push("truncation_deficit", deficit);
    }
    if args.optimize {
        summary.push("strategy", args.strategy.as_str());
        summary.push("seed", args.optimizer.seed);
    }
    summary.push("settings", vectors(report.settings.to_flat()));
    let pass = report.abs_value <= report.quantum_bound * (1.0 + BOUND_SLACK);
    Ok(Report::single(summary, pass))
}

fn sweep(args: &SweepArgs) -> Result<Report, CliError> {
    if args.state != "nopa" {
        return Err(CliError::Usage(format!(
            "sweep supports --state nopa only, got `{}`",
            args.state
        )));
    }
    if args.steps < 2 || args.r_max <= args.r_min || args.r_min <= 0.0 || !args.r_max.is_finite() {
        return Err(CliError::Usage(
            "sweep needs 0 < r-min < r-max and steps ≥ 2".into(),
        ));
    }
    let cfg = optimizer_config(&args.optimizer);
    let mut rows = Vec::with_capacity(args.steps);
    let mut max_error: f64 = 0.0;
    let mut max_deficit: f64 = 0.0;
    for i in 0..args.steps {
        let r = args.r_min + (args.r_max - args.r_min) * i as f64 / (args.steps - 1) as f64;
        let nopa = nopa_state(&NopaParams::new(r)?, args.dim)?;
        let report = optimize_settings(&nopa.state, 2, args.dim, &cfg)?;
        let closed_form = 2.0 * (1.0 + (2.0 * r).tanh().powi(2)).sqrt();
        let error = (report.abs_value - closed_form).abs();
        max_error = max_error.max(error);
        max_deficit = max_deficit.max(nopa.deficit);
        rows.push(
            Record::new()
                .with("r", r)
                .with("chsh_value", report.abs_value)
                .with("closed_form", closed_form)
                .with("abs_error", error)
                .with("truncation_deficit", nopa.deficit),
        );
    }
    let summary = Record::new()
        .with("state", "nopa")
        .with("dim", args.dim)
        .with("steps", args.steps)
        .with("max_abs_error", max_error)
        .with("max_truncation_deficit", max_deficit)
        .with("tolerance", SWEEP_TOL)
        .with("deficit_limit", args.max_deficit);
    Ok(Report {
        summary,
        rows,
        pass: max_error < SWEEP_TOL && max_deficit < args.max_deficit,
    })
}

fn operator_settings(args: &OperatorArgs) -> Result<Vec<MeasurementSettings>, CliError> {
    if let Some(path) = &args.settings_file {
        let settings = read_settings(path)?;
        if settings.num_modes() != args.modes {
            return Err(CliError::Usage(format!(
                "settings file has {} modes, --modes is {}",
                settings.num_modes(),
                args.modes
            )));
        }
        return Ok(vec![settings]);
    }
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut unit = || {
        let z: f64 = rng.gen_range(-1.0..=1.0);
        let phi: f64 = rng.gen_range(0.0..2.0 * PI);
        UnitVector3::from_angles(z.acos(), phi)
    };
    (0..args.samples)
        .map(|_| {
            let flat: Vec<UnitVector3> = (0..2 * args.modes).map(|_| unit()).collect();
            Ok(MeasurementSettings::from_flat(&flat)?)
        })
        .collect()
}

fn spectral(args: &OperatorArgs) -> Result<Report, CliError> {
    let bound = quantum_bound(args.modes);
    let mut worst: Option<(f64, MeasurementSettings)> = None;
    for settings in operator_settings(args)? {
        let b = bell_operator(&settings, args.dim)?;
        let rho = spectral_radius(&b, args.tol, POWER_ITERATIONS)?;
        if worst.as_ref().is_none_or(|(best, _)| rho > *best) {
            worst = Some((rho, settings));
        }
    }
    let (max_radius, worst) = worst.expect("at least one sample");
    let summary = Record::new()
        .with("modes", args.modes)
        .with("dim", args.dim)
        .with(
            "samples",
            args.settings_file.as_ref().map_or(args.samples, |_| 1),
        )
        .with("max_spectral_radius", max_radius)
        .with("quantum_bound", bound)
        .with("settings", vectors(worst.to_flat()));
    Ok(Report::single(
        summary,
        max_radius <= bound * (1.0 + BOUND_SLACK),
    ))
}

fn square_identity(args: &OperatorArgs) -> Result<Report, CliError> {
    let mut max_residual: f64 = 0.0;
    let all = operator_settings(args)?;
    for settings in &all {
        max_residual = max_residual.max(bell_square_identity_check(settings, args.dim)?);
    }
    let summary = Record::new()
        .with("modes", args.modes)
        .with("dim", args.dim)
        .with("samples", all.len())
        .with("max_residual", max_residual)
        .with("tolerance", SQUARE_TOL);
    Ok(Report::single(summary, max_residual < SQUARE_TOL))
}
