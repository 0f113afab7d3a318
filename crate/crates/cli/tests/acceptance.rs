//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Runs as a plain binary (`harness = false`) so the report
//! is always printed.

use std::f64::consts::{PI, SQRT_2, TAU};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use parity_bell::bell::{
    bell_operator, bell_square_identity_check, ghz_eigen_check, mermin_operator, quantum_bound,
    MeasurementSettings,
};
use parity_bell::fock::{apply, spectral_radius, SparseOperator, StateVector, C64};
use parity_bell::lhv::{
    enumerate_constraints, ghz_constraints, lhv_max_mermin, quantum_vs_lhv_gap,
};
use parity_bell::optimize::{grid_search_planar, optimize_settings, OptimizerConfig, Plane};
use parity_bell::pseudospin::{build_pseudospin, ParityProfile, UnitVector3};
use parity_bell::states::{ghz_state, nopa_state, GhzSpec, NopaParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, Duration, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn random_unit(rng: &mut ChaCha8Rng) -> UnitVector3 {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    UnitVector3::from_angles(z.acos(), rng.gen_range(0.0..TAU))
}

fn random_settings(rng: &mut ChaCha8Rng, n: usize) -> MeasurementSettings {
    MeasurementSettings::new(
        (0..n)
            .map(|_| (random_unit(rng), random_unit(rng)))
            .collect(),
    )
    .unwrap()
}

fn ghz(n: usize, dim: usize) -> StateVector {
    ghz_state(&GhzSpec::shared(n, dim, ParityProfile::fock0()).unwrap()).unwrap()
}

fn algebra_exactness() -> Outcome {
    let two_i = C64::new(0.0, 2.0);
    let mut worst: f64 = 0.0;
    for dim in [2, 4, 8, 16] {
        let s = build_pseudospin(dim).unwrap();
        let mut pairs = vec![
            (s.sz.commutator(&s.s_plus).unwrap(), s.s_plus.scale(2.0)),
            (s.sz.commutator(&s.s_minus).unwrap(), s.s_minus.scale(-2.0)),
            (s.s_plus.commutator(&s.s_minus).unwrap(), s.sz.clone()),
            (s.sx.commutator(&s.sy).unwrap(), s.sz.scale_complex(two_i)),
            (s.sy.commutator(&s.sz).unwrap(), s.sx.scale_complex(two_i)),
            (s.sz.commutator(&s.sx).unwrap(), s.sy.scale_complex(two_i)),
        ];
        let spins = [&s.sx, &s.sy, &s.sz];
        for (i, a) in spins.iter().enumerate() {
            for (j, b) in spins.iter().enumerate() {
                let expected = if i == j {
                    s.identity().scale(2.0)
                } else {
                    SparseOperator::zero(dim)
                };
                pairs.push((a.anticommutator(b).unwrap(), expected));
            }
        }
        for (lhs, rhs) in pairs {
            worst = worst.max(lhs.max_abs_distance(&rhs).unwrap());
        }
    }
    outcome(worst < 1e-12, format!("max residual {worst:.3e} < 1e-12"))
}

fn ghz_eigen_system() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for dim in [2, 4, 8] {
        for _ in 0..5 {
            let profiles = (0..3)
                .map(|_| {
                    let len = rng.gen_range(1..=dim / 2);
                    let c = (0..len)
                        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect();
                    ParityProfile::new(c).unwrap()
                })
                .collect();
            let state = ghz_state(&GhzSpec::new(3, dim, profiles).unwrap()).unwrap();
            worst = worst.max(ghz_eigen_check(&state, dim).unwrap().max());
        }
    }
    outcome(
        worst < 1e-10,
        format!("max of 4 residuals {worst:.3e} < 1e-10"),
    )
}

fn mermin_eigenvalue() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=5 {
        let state = ghz(n, 4);
        let a = mermin_operator(n, 4).unwrap();
        let eigen = 2f64.powi(n as i32 - 1);
        let residual = apply(&a, &state)
            .unwrap()
            .add(&state.scale(C64::new(eigen, 0.0)))
            .unwrap()
            .norm();
        worst = worst.max(residual);
    }
    outcome(
        worst < 1e-10,
        format!("N=2..5, D=4: max residual {worst:.3e} < 1e-10"),
    )
}

fn ghz_paradox() -> Outcome {
    let constraints = ghz_constraints();
    let full = enumerate_constraints(&constraints);
    let relaxed: Vec<u64> = (0..4)
        .map(|skip| {
            let rest: Vec<_> = constraints
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, c)| *c)
                .collect();
            enumerate_constraints(&rest).satisfying as u64
        })
        .collect();
    outcome(
        full.satisfying == 0 && full.assignments_checked == 64 && relaxed.iter().all(|&n| n >= 1),
        format!(
            "{} of {} assignments satisfy all four; dropping one leaves {relaxed:?}",
            full.satisfying, full.assignments_checked
        ),
    )
}

fn lhv_bound() -> Outcome {
    let mut pass = true;
    let mut found = Vec::new();
    for n in 2..=8usize {
        let max = lhv_max_mermin(n).unwrap().max_value;
        let expected = if n % 2 == 0 {
            2f64.powi(n as i32 / 2)
        } else {
            2f64.powi((n as i32 - 1) / 2)
        };
        let gap = quantum_vs_lhv_gap(n, None).unwrap();
        pass &= max == expected;
        pass &= max <= 2f64.powf(n as f64 / 2.0);
        pass &= (gap.ratio_vs_bound - 2f64.powf(n as f64 / 2.0 - 1.0)).abs() < 1e-12;
        found.push(format!("{n}:{max}"));
    }
    outcome(
        pass,
        format!("max per N [{}]; gap 2^(N/2-1)", found.join(" ")),
    )
}

fn quantum_bound_attainment() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, resolution) in [(2, PI / 180.0), (3, PI / 12.0), (4, PI / 4.0)] {
        let state = ghz(n, 4);
        let opt = optimize_settings(&state, n, 4, &OptimizerConfig::default()).unwrap();
        let grid = grid_search_planar(&state, n, 4, resolution, Plane::Xy).unwrap();
        let err = (opt.abs_value - quantum_bound(n)).abs();
        pass &= err < 1e-6 && opt.abs_value >= grid.abs_value - 1e-6;
        parts.push(format!(
            "N={n} {:.7} (err {err:.1e}, grid {:.7})",
            opt.abs_value, grid.abs_value
        ));
    }
    outcome(pass, parts.join("; "))
}

fn spectral_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let bound = quantum_bound(3);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let b = bell_operator(&random_settings(&mut rng, 3), 4).unwrap();
        worst = worst.max(spectral_radius(&b, 1e-12, 100_000).unwrap());
    }
    outcome(
        worst <= bound * (1.0 + 1e-9),
        format!("max spectral radius {worst:.9} <= {bound}"),
    )
}

fn square_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let worst = (0..20)
        .map(|_| bell_square_identity_check(&random_settings(&mut rng, 3), 4).unwrap())
        .fold(0.0, f64::max);
    outcome(
        worst < 1e-10,
        format!("max Frobenius residual {worst:.3e} < 1e-10"),
    )
}

fn nopa_curve() -> Outcome {
    let mut pass = true;
    let mut previous = 0.0;
    let mut parts = Vec::new();
    for r in [0.1, 0.3, 0.5, 0.8, 1.0, 1.2] {
        let nopa = nopa_state(&NopaParams::new(r).unwrap(), 32).unwrap();
        let value = optimize_settings(&nopa.state, 2, 32, &OptimizerConfig::default())
            .unwrap()
            .abs_value;
        let closed = 2.0 * (1.0 + (2.0 * r).tanh().powi(2)).sqrt();
        let value_ok = (value - closed).abs() < 1e-4
            && value > 2.0
            && value > previous
            && value < 2.0 * SQRT_2;
        let deficit_ok = nopa.deficit < 1e-8;
        pass &= value_ok && deficit_ok;
        previous = value;
        let mut part = format!("r={r} {value:.6}");
        if !value_ok {
            part.push_str(" [value off]");
        }
        if !deficit_ok {
            part.push_str(&format!(" [deficit {:.2e} >= 1e-8]", nopa.deficit));
        }
        parts.push(part);
    }
    outcome(pass, parts.join("; "))
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 8] = [
        &["algebra-check"],
        &["ghz-eigen", "--dim", "4"],
        &["paradox"],
        &["mermin-gap", "--modes", "5", "--dim", "4"],
        &[
            "chsh",
            "--state",
            "ghz",
            "--modes",
            "3",
            "--dim",
            "4",
            "--optimize",
            "--seed",
            "5",
        ],
        &["sweep", "--steps", "6", "--seed", "5", "--max-deficit", "1"],
        &["spectral", "--samples", "5", "--seed", "5"],
        &["square-identity", "--samples", "5", "--seed", "5"],
    ];
    let mut differing = Vec::new();
    for args in runs {
        let out = || {
            Command::new(env!("CARGO_BIN_EXE_parity-bell"))
                .args(args)
                .output()
                .expect("binary runs")
        };
        let (a, b) = (out(), out());
        if a.stdout != b.stdout || a.stdout.is_empty() || !a.status.success() {
            differing.push(args[0]);
        }
    }
    outcome(
        differing.is_empty(),
        if differing.is_empty() {
            format!("{} subcommands byte-identical across runs", runs.len())
        } else {
            format!("differing or failing: {differing:?}")
        },
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "algebra exactness",
            Duration::from_secs(1),
            algebra_exactness,
        ),
        (
            "GHZ eigenvalue system",
            Duration::from_secs(5),
            ghz_eigen_system,
        ),
        (
            "Mermin eigenvalue",
            Duration::from_secs(30),
            mermin_eigenvalue,
        ),
        ("GHZ paradox", Duration::from_secs(1), ghz_paradox),
        ("LHV bound", Duration::from_secs(10), lhv_bound),
        (
            "quantum bound attainment",
            Duration::from_secs(120),
            quantum_bound_attainment,
        ),
        ("spectral bound", Duration::from_secs(60), spectral_bound),
        ("square identity", Duration::from_secs(60), square_identity),
        ("NOPA CHSH curve", Duration::from_secs(120), nopa_curve),
        ("determinism", Duration::from_secs(120), determinism),
    ];
    let mut passed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *limit;
        let ok = result.pass && in_time;
        passed += usize::from(ok);
        println!(
            "{} {:>2} {name}: {} ({:.2} s, limit {} s{})",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            result.detail,
            elapsed.as_secs_f64(),
            limit.as_secs(),
            if in_time { "" } else { ", too slow" }
        );
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if passed == criteria.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
