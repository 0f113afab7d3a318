//! Parity correlation tensor `T_{μ1…μN} = ⟨ψ| s_{μ1}⊗…⊗s_{μN} |ψ⟩`.
//!
//! Every Bell operator is a real combination of products of local pseudospin
//! components, so `⟨B_N⟩` is the contraction of `T` with the coefficient
//! tensor from [`coefficient_tensors`]. The optimizer evaluates the objective
//! this way instead of rebuilding `B_N` for every trial setting.

use crate::bell::{coefficient_tensors, MeasurementSettings};
use crate::error::{Error, Result};
use crate::fock::StateVector;
use crate::pseudospin::{build_pseudospin, Axis, PseudospinSet};

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTensor {
    num_modes: usize,
    /// `3^N` entries, first mode most significant, `x = 0, y = 1, z = 2`.
    values: Vec<f64>,
}

impl CorrelationTensor {
    pub fn of_state(state: &StateVector) -> Result<Self> {
        let spin = build_pseudospin(state.space().dim())?;
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized(norm));
        }
        let num_modes = state.num_modes();
        let mut values = Vec::with_capacity(3usize.pow(num_modes as u32));
        fill(state, state, 0, &spin, &mut values)?;
        Ok(Self { num_modes, values })
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, axes: &[Axis]) -> f64 {
        let idx = axes.iter().fold(0, |acc, a| {
            3 * acc
                + match a {
                    Axis::X => 0,
                    Axis::Y => 1,
                    Axis::Z => 2,
                }
        });
        self.values[idx]
    }

    /// `⟨B_N⟩` for the given settings.
    pub fn bell_value(&self, settings: &MeasurementSettings) -> Result<f64> {
        if settings.num_modes() != self.num_modes {
            return Err(Error::WrongModeCount {
                expected: self.num_modes,
                found: settings.num_modes(),
            });
        }
        let (w, _) = coefficient_tensors(settings);
        Ok(self.contract(&w))
    }

    pub fn contract(&self, weights: &[f64]) -> f64 {
        self.values.iter().zip(weights).map(|(t, w)| t * w).sum()
    }
}

fn fill(
    original: &StateVector,
    partial: &StateVector,
    mode: usize,
    spin: &PseudospinSet,
    out: &mut Vec<f64>,
) -> Result<()> {
    if mode == original.num_modes() {
        out.push(original.inner(partial)?.re);
        return Ok(());
    }
    for axis in Axis::ALL {
        let next = partial.apply_local(spin.component(axis), mode)?;
        fill(original, &next, mode + 1, spin, out)?;
    }
    Ok(())
}
