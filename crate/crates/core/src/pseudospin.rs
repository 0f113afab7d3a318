//! Parity pseudospin operators for a single truncated bosonic mode.
//!
//! `s_z` is the photon-number parity, `s_+ = Σ_n |2n⟩⟨2n+1|` lowers the odd
//! level of each parity doublet, and `s_x = s_+ + s_-`, `s_y = −i(s_+ − s_-)`.
//! For an even truncation `D` every doublet `{2n, 2n+1}` is complete, so the
//! operators satisfy the Pauli algebra exactly.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fock::{zero, ModeSpace, SparseOperator, StateVector, C64};

const UNIT_TOL: f64 = 1e-9;

/// `s_x, s_y, s_z, s_+, s_-` for one mode of truncation `dim`.
#[derive(Debug, Clone)]
pub struct PseudospinSet {
    dim: usize,
    pub sx: SparseOperator,
    pub sy: SparseOperator,
    pub sz: SparseOperator,
    pub s_plus: SparseOperator,
    pub s_minus: SparseOperator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

pub fn build_pseudospin(dim: usize) -> Result<PseudospinSet> {
    if dim < 2 || !dim.is_multiple_of(2) {
        return Err(Error::InvalidDimension(dim));
    }
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let parity: Vec<C64> = (0..dim)
        .map(|n| if n % 2 == 0 { one } else { -one })
        .collect();
    let sz = SparseOperator::diagonal(&parity, "sz");
    let s_plus =
        SparseOperator::from_triplets(dim, (0..dim / 2).map(|n| (2 * n, 2 * n + 1, one)), "s+")?;
    let s_minus = s_plus.adjoint().with_label("s-");
    let sx = s_plus.add(&s_minus)?.with_label("sx");
    let sy = s_plus.sub(&s_minus)?.scale_complex(-i).with_label("sy");
    Ok(PseudospinSet {
        dim,
        sx,
        sy,
        sz,
        s_plus,
        s_minus,
    })
}

impl PseudospinSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn component(&self, axis: Axis) -> &SparseOperator {
        match axis {
            Axis::X => &self.sx,
            Axis::Y => &self.sy,
            Axis::Z => &self.sz,
        }
    }

    pub fn identity(&self) -> SparseOperator {
        SparseOperator::identity(self.dim)
    }

    /// `v_x·s_x + v_y·s_y + v_z·s_z` for an arbitrary real vector.
    pub fn linear_combination(&self, v: [f64; 3]) -> SparseOperator {
        let mut triplets = Vec::with_capacity(2 * self.dim);
        for (axis, coeff) in Axis::ALL.iter().zip(v) {
            if coeff != 0.0 {
                triplets.extend(
                    self.component(*axis)
                        .entries()
                        .map(|(r, c, value)| (r, c, value * coeff)),
                );
            }
        }
        SparseOperator::from_triplets(self.dim, triplets, format!("{v:?}·s"))
            .expect("entries come from dim×dim operators")
    }
}

/// Real 3-vector of unit length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector3 {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitVector3 {
    pub const X: UnitVector3 = UnitVector3 {
        x: 1.0,
        y: 0.0,
        z: 0.0,
    };
    pub const Y: UnitVector3 = UnitVector3 {
        x: 0.0,
        y: 1.0,
        z: 0.0,
    };
    pub const Z: UnitVector3 = UnitVector3 {
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    /// Accepts components whose norm is within 1e−9 of one and renormalizes.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnitVector { x, y, z });
        }
        Ok(Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    /// Normalizes any nonzero finite vector.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotUnitVector { x, y, z });
        }
        Ok(Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    /// From polar angle `theta` and azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self {
            x: st * cp,
            y: st * sp,
            z: ct,
        }
    }

    /// `(theta, phi)` with `theta ∈ [0, π]`, `phi ∈ [0, 2π)`.
    pub fn to_angles(&self) -> (f64, f64) {
        let theta = self.z.clamp(-1.0, 1.0).acos();
        let mut phi = self.y.atan2(self.x);
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        (theta, phi)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &UnitVector3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &UnitVector3) -> [f64; 3] {
        [
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        ]
    }

    /// Rotates about the z axis by `angle`.
    pub fn rotated_about_z(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            x: c * self.x - s * self.y,
            y: s * self.x + c * self.y,
            z: self.z,
        }
    }
}

/// `a·ŝ`; Hermitian, and squares to the identity.
pub fn dot_spin(a: &UnitVector3, spin: &PseudospinSet) -> SparseOperator {
    spin.linear_combination(a.to_array())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationParams {
    zeta: f64,
    axis: UnitVector3,
}

impl RotationParams {
    pub fn new(zeta: f64, axis: UnitVector3) -> Result<Self> {
        if !zeta.is_finite() {
            return Err(Error::InvalidSettings(format!("rotation angle {zeta}")));
        }
        Ok(Self { zeta, axis })
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn axis(&self) -> UnitVector3 {
        self.axis
    }
}

/// `U = cos(ζ/2)·I − i·sin(ζ/2)·n̂·ŝ`, the closed form of `exp(−i(ζ/2) n̂·ŝ)`.
pub fn rotation(p: &RotationParams, spin: &PseudospinSet) -> SparseOperator {
    let half = p.zeta / 2.0;
    let identity = spin.identity().scale(half.cos());
    let generator = dot_spin(&p.axis, spin).scale_complex(C64::new(0.0, -half.sin()));
    identity
        .add(&generator)
        .expect("same dimension")
        .with_label(format!("U({}, {:?})", p.zeta, p.axis.to_array()))
}

/// Coefficients `A_n` of a parity state, normalized to unit weight.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityProfile {
    coefficients: Vec<C64>,
}

impl ParityProfile {
    pub fn new(coefficients: Vec<C64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidProfile("no coefficients".into()));
        }
        let norm = coefficients
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidProfile(format!("weight {norm}")));
        }
        Ok(Self {
            coefficients: coefficients.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// `A_0 = 1`.
    pub fn fock0() -> Self {
        Self {
            coefficients: vec![C64::new(1.0, 0.0)],
        }
    }

    /// `A_n ∝ qⁿ` for `n < len`.
    pub fn geometric(q: f64, len: usize) -> Result<Self> {
        if !q.is_finite() || len == 0 {
            return Err(Error::InvalidProfile(format!(
                "geometric({q}) of length {len}"
            )));
        }
        Self::new((0..len).map(|n| C64::new(q.powi(n as i32), 0.0)).collect())
    }

    /// `A_n = 1/√M` for `n < M`.
    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidProfile("uniform(0)".into()));
        }
        Self::new(vec![C64::new(1.0, 0.0); m])
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// Named profile presets: `fock0`, `geometric:q`, `uniform:M`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ProfilePreset {
    #[default]
    Fock0,
    Geometric(f64),
    Uniform(usize),
}

impl ProfilePreset {
    /// Builds the profile for truncation `dim`; `geometric` fills all `dim/2`
    /// even levels.
    pub fn build(&self, dim: usize) -> Result<ParityProfile> {
        match *self {
            ProfilePreset::Fock0 => Ok(ParityProfile::fock0()),
            ProfilePreset::Geometric(q) => ParityProfile::geometric(q, (dim / 2).max(1)),
            ProfilePreset::Uniform(m) => ParityProfile::uniform(m),
        }
    }
}

impl fmt::Display for ProfilePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfilePreset::Fock0 => write!(f, "fock0"),
            ProfilePreset::Geometric(q) => write!(f, "geometric:{q}"),
            ProfilePreset::Uniform(m) => write!(f, "uniform:{m}"),
        }
    }
}

impl FromStr for ProfilePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidProfile(format!("cannot parse `{s}`"));
        match s.split_once(':') {
            None if s == "fock0" => Ok(ProfilePreset::Fock0),
            Some(("geometric", q)) => {
                let q: f64 = q.parse().map_err(|_| bad())?;
                if !q.is_finite() {
                    return Err(bad());
                }
                Ok(ProfilePreset::Geometric(q))
            }
            Some(("uniform", m)) => match m.parse() {
                Ok(m) if m > 0 => Ok(ProfilePreset::Uniform(m)),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// `|+⟩ = Σ A_n |2n⟩` or `|−⟩ = Σ A_n |2n+1⟩` as a one-mode state.
pub fn parity_state(profile: &ParityProfile, parity: Parity, dim: usize) -> Result<StateVector> {
    let space = ModeSpace::new(1, dim)?;
    let max = dim / 2;
    if profile.len() > max {
        return Err(Error::ProfileTooLong {
            len: profile.len(),
            dim,
            max,
        });
    }
    let offset = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let mut amplitudes = vec![zero(); dim];
    for (n, &a) in profile.coefficients().iter().enumerate() {
        amplitudes[2 * n + offset] = a;
    }
    StateVector::new(space, amplitudes)
}
