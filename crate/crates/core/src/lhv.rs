//! Exhaustive local-hidden-variable enumeration.
//!
//! An assignment fixes `p_x[m], p_y[m] ∈ {±1}` for every mode. Assignments are
//! indexed by a `2N`-bit integer: bit `2m` set means `p_x[m] = −1`, bit
//! `2m + 1` set means `p_y[m] = −1`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{expectation, ModeSpace};
use crate::pseudospin::{Axis, ParityProfile};
use crate::states::{ghz_state, GhzSpec};

pub const MAX_ENUMERATION_MODES: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LhvAssignment {
    px: Vec<i8>,
    py: Vec<i8>,
}

impl LhvAssignment {
    pub fn from_index(num_modes: usize, index: u64) -> Self {
        let sign = |bit: usize| if index >> bit & 1 == 1 { -1 } else { 1 };
        Self {
            px: (0..num_modes).map(|m| sign(2 * m)).collect(),
            py: (0..num_modes).map(|m| sign(2 * m + 1)).collect(),
        }
    }

    pub fn num_modes(&self) -> usize {
        self.px.len()
    }

    pub fn px(&self) -> &[i8] {
        &self.px
    }

    pub fn py(&self) -> &[i8] {
        &self.py
    }

    pub fn value(&self, mode: usize, axis: Axis) -> i8 {
        match axis {
            Axis::X => self.px[mode],
            Axis::Y => self.py[mode],
            Axis::Z => panic!("assignments carry only x and y values"),
        }
    }

    /// `∏_m (p_x[m] + i·p_y[m])` as an exact Gaussian integer `(re, im)`.
    pub fn mermin_product(&self) -> (i64, i64) {
        self.px
            .iter()
            .zip(&self.py)
            .fold((1, 0), |(re, im), (&x, &y)| {
                let (x, y) = (x as i64, y as i64);
                (re * x - im * y, re * y + im * x)
            })
    }
}

/// `p_{m1,μ1} · p_{m2,μ2} · p_{m3,μ3} = sign`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParityConstraint {
    pub factors: [(usize, Axis); 3],
    pub sign: i8,
}

impl ParityConstraint {
    pub fn holds(&self, p: &LhvAssignment) -> bool {
        self.factors
            .iter()
            .map(|&(m, axis)| p.value(m, axis))
            .product::<i8>()
            == self.sign
    }
}

/// The four relations local realism must reproduce for the three-mode GHZ
/// state: `xxx = −1`, `xyy = yxy = yyx = +1`.
pub fn ghz_constraints() -> [ParityConstraint; 4] {
    use Axis::{X, Y};
    [
        ParityConstraint {
            factors: [(0, X), (1, X), (2, X)],
            sign: -1,
        },
        ParityConstraint {
            factors: [(0, X), (1, Y), (2, Y)],
            sign: 1,
        },
        ParityConstraint {
            factors: [(0, Y), (1, X), (2, Y)],
            sign: 1,
        },
        ParityConstraint {
            factors: [(0, Y), (1, Y), (2, X)],
            sign: 1,
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatisfiabilityReport {
    pub satisfiable: bool,
    /// Lowest-index satisfying assignment.
    pub witness: Option<LhvAssignment>,
    /// Number of assignments satisfying every constraint.
    pub satisfying: u64,
    pub assignments_checked: u64,
}

/// Enumerates all `2^6` three-mode assignments against `constraints`.
pub fn enumerate_constraints(constraints: &[ParityConstraint]) -> SatisfiabilityReport {
    const MODES: usize = 3;
    let total = 1u64 << (2 * MODES);
    let mut witness = None;
    let mut satisfying = 0;
    for index in 0..total {
        let p = LhvAssignment::from_index(MODES, index);
        if constraints.iter().all(|c| c.holds(&p)) {
            satisfying += 1;
            witness.get_or_insert(p);
        }
    }
    SatisfiabilityReport {
        satisfiable: satisfying > 0,
        witness,
        satisfying,
        assignments_checked: total,
    }
}

pub fn ghz_constraints_satisfiable() -> SatisfiabilityReport {
    enumerate_constraints(&ghz_constraints())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MerminLhvMax {
    pub num_modes: usize,
    /// `max |Re ∏(p_x + i·p_y)|` over all assignments.
    pub max_value: f64,
    /// Lowest-index maximizer.
    pub argmax: LhvAssignment,
    /// `2^(N/2)`, the upper bound `|∏(±1 ± i)|`.
    pub modulus_bound: f64,
    pub assignments_checked: u64,
}

fn check_enumeration_range(num_modes: usize) -> Result<()> {
    if !(2..=MAX_ENUMERATION_MODES).contains(&num_modes) {
        return Err(Error::OutOfRange {
            what: "enumeration modes",
            value: num_modes,
            min: 2,
            max: MAX_ENUMERATION_MODES,
        });
    }
    Ok(())
}

/// Exact maximum of `|Re ∏_m (p_x[m] + i·p_y[m])|` by exhaustive enumeration.
///
/// The modes are split into a low and a high block; each block's Gaussian
/// integer product is tabulated once and the full product's real part is
/// `hr·lr − hi·li`, so every one of the `4^N` assignments is visited with one
/// integer multiply-subtract.
pub fn lhv_max_mermin(num_modes: usize) -> Result<MerminLhvMax> {
    check_enumeration_range(num_modes)?;
    let low_modes = num_modes / 2;
    let high_modes = num_modes - low_modes;
    let table = |modes: usize, shift: usize| -> Vec<(i64, i64)> {
        (0..1u64 << (2 * modes))
            .map(|i| {
                LhvAssignment::from_index(num_modes, i << shift).mermin_product_of(shift / 2, modes)
            })
            .collect()
    };
    let low = table(low_modes, 0);
    let high = table(high_modes, 2 * low_modes);

    // best (|re|, index) per high block; ties resolved towards lower index
    let (best, best_index) = high
        .par_iter()
        .enumerate()
        .map(|(h, &(hr, hi))| {
            let mut best = -1i64;
            let mut best_l = 0usize;
            for (l, &(lr, li)) in low.iter().enumerate() {
                let re = (hr * lr - hi * li).abs();
                if re > best {
                    best = re;
                    best_l = l;
                }
            }
            (best, ((h as u64) << (2 * low_modes)) | best_l as u64)
        })
        .reduce(
            || (-1, u64::MAX),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );

    Ok(MerminLhvMax {
        num_modes,
        max_value: best as f64,
        argmax: LhvAssignment::from_index(num_modes, best_index),
        modulus_bound: 2f64.powf(num_modes as f64 / 2.0),
        assignments_checked: 1u64 << (2 * num_modes),
    })
}

impl LhvAssignment {
    fn mermin_product_of(&self, first: usize, count: usize) -> (i64, i64) {
        LhvAssignment {
            px: self.px[first..first + count].to_vec(),
            py: self.py[first..first + count].to_vec(),
        }
        .mermin_product()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub num_modes: usize,
    /// `2^(N−1)`, the GHZ eigenvalue magnitude of the Mermin operator.
    pub quantum: f64,
    /// Enumerated LHV maximum.
    pub lhv: f64,
    /// `quantum / lhv`.
    pub ratio: f64,
    /// `2^(N/2)`.
    pub lhv_bound: f64,
    /// `quantum / lhv_bound = 2^(N/2 − 1)`.
    pub ratio_vs_bound: f64,
    /// `|⟨GHZ_N|A|GHZ_N⟩|` when a state of the requested truncation fits.
    pub simulated_quantum: Option<f64>,
}

/// Compares the quantum Mermin value with the LHV maximum; when `verify_dim`
/// is given and `D^N` fits the size budget, the quantum value is also
/// computed from the GHZ state.
pub fn quantum_vs_lhv_gap(num_modes: usize, verify_dim: Option<usize>) -> Result<GapReport> {
    let lhv = lhv_max_mermin(num_modes)?;
    let quantum = 2f64.powi(num_modes as i32 - 1);
    let simulated_quantum = match verify_dim {
        Some(dim) if ModeSpace::new(num_modes, dim).is_ok() => {
            let ghz = ghz_state(&GhzSpec::shared(num_modes, dim, ParityProfile::fock0())?)?;
            let a = crate::bell::mermin_operator(num_modes, dim)?;
            Some(expectation(&a, &ghz)?.abs())
        }
        _ => None,
    };
    Ok(GapReport {
        num_modes,
        quantum,
        lhv: lhv.max_value,
        ratio: quantum / lhv.max_value,
        lhv_bound: lhv.modulus_bound,
        ratio_vs_bound: quantum / lhv.modulus_bound,
        simulated_quantum,
    })
}
