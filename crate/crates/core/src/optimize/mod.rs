//! Maximization of `|⟨B_N⟩|` over measurement settings.
//!
//! Two interchangeable search strategies sit behind [`SettingsSearch`]:
//! multi-start Nelder–Mead over the angle parameterization (`simplex`) and an
//! exhaustive planar grid (`grid`). [`SearchRegistry`] looks them up by name.

mod grid;
mod params;
mod simplex;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bell::{coefficient_tensors, BellReport, MeasurementSettings};
use crate::correlation::CorrelationTensor;
use crate::error::{Error, Result};
use crate::fock::StateVector;

pub use grid::{grid_points, grid_search_planar, GRID_BUDGET};
pub use params::{AngleParameterization, Plane};
pub use simplex::{nelder_mead, SimplexResult};

const INITIAL_STEP: f64 = 0.5;
const POLISH_STEP: f64 = 0.05;
const POLISH_ROUNDS: usize = 8;
const XTOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
    pub plane_constraint: Plane,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 16,
            max_iters: 2000,
            tol: 1e-9,
            seed: 0,
            plane_constraint: Plane::None,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.tol <= 0.0 || !self.tol.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

pub(crate) fn check_state(state: &StateVector, num_modes: usize, dim: usize) -> Result<()> {
    if state.num_modes() != num_modes {
        return Err(Error::WrongModeCount {
            expected: num_modes,
            found: state.num_modes(),
        });
    }
    if state.space().dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: state.space().dim(),
        });
    }
    Ok(())
}

/// Signed `⟨B_N⟩` of a fixed state as a function of setting angles.
#[derive(Debug, Clone)]
pub struct BellObjective {
    tensor: CorrelationTensor,
    params: AngleParameterization,
}

impl BellObjective {
    pub fn new(state: &StateVector, plane: Plane) -> Result<Self> {
        Ok(Self {
            params: AngleParameterization::new(state.num_modes(), plane)?,
            tensor: CorrelationTensor::of_state(state)?,
        })
    }

    pub fn parameterization(&self) -> &AngleParameterization {
        &self.params
    }

    pub fn value(&self, angles: &[f64]) -> f64 {
        let (w, _) = coefficient_tensors(&self.params.settings(angles));
        self.tensor.contract(&w)
    }

    pub fn value_at(&self, settings: &MeasurementSettings) -> Result<f64> {
        self.tensor.bell_value(settings)
    }
}

/// Best `(signed value, angles)` from one restart.
fn run_restart(
    objective: &BellObjective,
    cfg: &OptimizerConfig,
    restart: usize,
) -> (f64, Vec<f64>) {
    let seed = cfg
        .seed
        .wrapping_add((restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = objective.params.random_start(&mut rng);
    let cost = |x: &[f64]| -objective.value(x).abs();

    let mut best = nelder_mead(cost, &start, INITIAL_STEP, cfg.tol, XTOL, cfg.max_iters);
    // restart from the incumbent with a fresh simplex until it stops improving
    for _ in 0..POLISH_ROUNDS {
        let next = nelder_mead(cost, &best.x, POLISH_STEP, cfg.tol, XTOL, cfg.max_iters);
        let improvement = best.fx - next.fx;
        if next.fx < best.fx {
            best = next;
        }
        if improvement <= cfg.tol {
            break;
        }
    }
    (objective.value(&best.x), best.x)
}

/// Multi-start simplex maximization of `|⟨B_N⟩|`.
///
/// Restarts run in parallel; the winner is the largest `|value|`, ties going
/// to the lowest restart index, so the result depends only on `cfg.seed`.
pub fn optimize_settings(
    state: &StateVector,
    num_modes: usize,
    dim: usize,
    cfg: &OptimizerConfig,
) -> Result<BellReport> {
    check_state(state, num_modes, dim)?;
    cfg.validate()?;
    let objective = BellObjective::new(state, cfg.plane_constraint)?;
    let results: Vec<(f64, Vec<f64>)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|k| run_restart(&objective, cfg, k))
        .collect();
    let (value, angles) = results
        .into_iter()
        .reduce(|best, next| {
            if next.0.abs() > best.0.abs() {
                next
            } else {
                best
            }
        })
        .expect("restarts ≥ 1");
    Ok(BellReport::new(value, objective.params.settings(&angles)))
}

/// Central-difference gradient of `objective` at `angles`.
pub fn finite_difference_gradient<F>(objective: F, angles: &[f64], step: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let mut x = angles.to_vec();
    (0..angles.len())
        .map(|i| {
            x[i] = angles[i] + step;
            let up = objective(&x);
            x[i] = angles[i] - step;
            let down = objective(&x);
            x[i] = angles[i];
            (up - down) / (2.0 * step)
        })
        .collect()
}

/// Inputs shared by all search strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchRequest {
    pub config: OptimizerConfig,
    /// Angular step of the planar grid, radians.
    pub grid_resolution: f64,
}

impl Default for SearchRequest {
    fn default() -> Self {
        Self {
            config: OptimizerConfig::default(),
            grid_resolution: std::f64::consts::PI / 36.0,
        }
    }
}

/// A named strategy for maximizing `|⟨B_N⟩|` over settings.
pub trait SettingsSearch: Send + Sync {
    fn name(&self) -> &'static str;

    fn search(&self, state: &StateVector, request: &SearchRequest) -> Result<BellReport>;
}

pub struct SimplexSearch;

impl SettingsSearch for SimplexSearch {
    fn name(&self) -> &'static str {
        "simplex"
    }

    fn search(&self, state: &StateVector, request: &SearchRequest) -> Result<BellReport> {
        optimize_settings(
            state,
            state.num_modes(),
            state.space().dim(),
            &request.config,
        )
    }
}

/// Planar grid; without a plane constraint it searches the x–y plane.
pub struct GridSearch;

impl SettingsSearch for GridSearch {
    fn name(&self) -> &'static str {
        "grid"
    }

    fn search(&self, state: &StateVector, request: &SearchRequest) -> Result<BellReport> {
        let plane = match request.config.plane_constraint {
            Plane::None => Plane::Xy,
            plane => plane,
        };
        grid_search_planar(
            state,
            state.num_modes(),
            state.space().dim(),
            request.grid_resolution,
            plane,
        )
    }
}

pub struct SearchRegistry {
    strategies: BTreeMap<&'static str, Box<dyn SettingsSearch>>,
}

impl SearchRegistry {
    pub fn empty() -> Self {
        Self {
            strategies: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, strategy: Box<dyn SettingsSearch>) {
        self.strategies.insert(strategy.name(), strategy);
    }

    pub fn get(&self, name: &str) -> Result<&dyn SettingsSearch> {
        self.strategies
            .get(name)
            .map(|s| s.as_ref())
            .ok_or_else(|| Error::UnknownName {
                kind: "search strategy",
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.strategies.keys().copied().collect()
    }
}

impl Default for SearchRegistry {
    fn default() -> Self {
        let mut registry = Self::empty();
        registry.register(Box::new(SimplexSearch));
        registry.register(Box::new(GridSearch));
        registry
    }
}
