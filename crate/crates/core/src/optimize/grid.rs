//! Exhaustive planar grid over all `2N` setting angles.
//!
//! `⟨B_N⟩` is linear in each of the last mode's two vectors separately:
//! `⟨B_N⟩ = p·a_N + q·a'_N` with `p, q` fixed by the first `N − 1` modes.
//! For every grid point of the first `2(N−1)` angles the maxima over `a_N` and
//! `a'_N` are therefore taken independently, which is exact and costs `O(G)`
//! rather than `O(G²)` per prefix.

use std::f64::consts::TAU;

use crate::bell::{coefficient_tensors_of, BellReport, MeasurementSettings};
use crate::correlation::CorrelationTensor;
use crate::error::{Error, Result};
use crate::fock::StateVector;
use crate::optimize::params::Plane;
use crate::pseudospin::UnitVector3;

/// Upper limit on `G^(2N−1)`, the number of (prefix, last-angle) pairs.
pub const GRID_BUDGET: u128 = 2_000_000_000;

/// Number of grid angles for a given `resolution`: `round(2π / resolution)`.
pub fn grid_points(resolution: f64) -> Result<usize> {
    if resolution <= 0.0 || !resolution.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "grid resolution {resolution}"
        )));
    }
    Ok(((TAU / resolution).round() as usize).max(1))
}

/// Maximizes `|⟨B_N⟩|` over all settings with every vector on `plane` at
/// angles `k·2π/G`.
pub fn grid_search_planar(
    state: &StateVector,
    num_modes: usize,
    dim: usize,
    resolution: f64,
    plane: Plane,
) -> Result<BellReport> {
    super::check_state(state, num_modes, dim)?;
    if plane == Plane::None {
        return Err(Error::InvalidConfig(
            "grid search needs a plane (xy or xz)".into(),
        ));
    }
    let g = grid_points(resolution)?;
    let points = (g as u128).saturating_pow(2 * num_modes as u32 - 1);
    if points > GRID_BUDGET {
        return Err(Error::GridBudget {
            points,
            budget: GRID_BUDGET,
        });
    }

    let tensor = CorrelationTensor::of_state(state)?;
    let vectors: Vec<UnitVector3> = (0..g)
        .map(|k| plane.vector(k as f64 * TAU / g as f64).expect("planar"))
        .collect();
    let prefix_len = 2 * (num_modes - 1);
    let last_weight = if num_modes == 2 { 1.0 } else { 0.5 };

    let mut best = f64::NEG_INFINITY;
    let mut best_signed = 0.0;
    let mut best_indices = vec![0usize; 2 * num_modes];
    let mut odometer = vec![0usize; prefix_len];
    let mut proj_p = vec![0.0; g];
    let mut proj_q = vec![0.0; g];
    loop {
        let pairs: Vec<(UnitVector3, UnitVector3)> = odometer
            .chunks(2)
            .map(|c| (vectors[c[0]], vectors[c[1]]))
            .collect();
        let (w, wp) = coefficient_tensors_of(&pairs);
        let u = contract_all_but_last(tensor.values(), &w);
        let up = contract_all_but_last(tensor.values(), &wp);
        let p = [0, 1, 2].map(|i| last_weight * (u[i] + up[i]));
        let q = [0, 1, 2].map(|i| last_weight * (u[i] - up[i]));
        for (k, v) in vectors.iter().enumerate() {
            let v = v.to_array();
            proj_p[k] = p[0] * v[0] + p[1] * v[1] + p[2] * v[2];
            proj_q[k] = q[0] * v[0] + q[1] * v[1] + q[2] * v[2];
        }
        let (p_max, p_argmax, p_min, p_argmin) = extremes(&proj_p);
        let (q_max, q_argmax, q_min, q_argmin) = extremes(&proj_q);
        for (value, ia, ib) in [
            (p_max + q_max, p_argmax, q_argmax),
            (p_min + q_min, p_argmin, q_argmin),
        ] {
            if value.abs() > best {
                best = value.abs();
                best_signed = value;
                best_indices[..prefix_len].copy_from_slice(&odometer);
                best_indices[prefix_len] = ia;
                best_indices[prefix_len + 1] = ib;
            }
        }
        if !advance(&mut odometer, g) {
            break;
        }
    }

    let flat: Vec<UnitVector3> = best_indices.iter().map(|&k| vectors[k]).collect();
    Ok(BellReport::new(
        best_signed,
        MeasurementSettings::from_flat(&flat)?,
    ))
}

/// `u_ν = Σ_{μ1…μ(N−1)} T_{μ1…μ(N−1) ν} W_{μ1…μ(N−1)}`.
fn contract_all_but_last(t: &[f64], w: &[f64]) -> [f64; 3] {
    let mut u = [0.0; 3];
    for (chunk, &wi) in t.chunks(3).zip(w) {
        for nu in 0..3 {
            u[nu] += chunk[nu] * wi;
        }
    }
    u
}

/// `(max, argmax, min, argmin)` with first-index tie breaking.
fn extremes(values: &[f64]) -> (f64, usize, f64, usize) {
    let mut out = (values[0], 0, values[0], 0);
    for (k, &v) in values.iter().enumerate().skip(1) {
        if v > out.0 {
            out.0 = v;
            out.1 = k;
        }
        if v < out.2 {
            out.2 = v;
            out.3 = k;
        }
    }
    out
}

fn advance(odometer: &mut [usize], base: usize) -> bool {
    for digit in odometer.iter_mut().rev() {
        *digit += 1;
        if *digit < base {
            return true;
        }
        *digit = 0;
    }
    false
}
