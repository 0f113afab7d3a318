use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::bell::MeasurementSettings;
use crate::error::{Error, Result};
use crate::pseudospin::UnitVector3;

/// Optional restriction of every setting vector to a coordinate plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Plane {
    Xy,
    Xz,
    #[default]
    None,
}

impl Plane {
    /// In-plane unit vector at `angle` from the x axis.
    pub fn vector(&self, angle: f64) -> Option<UnitVector3> {
        let (s, c) = angle.sin_cos();
        match self {
            Plane::Xy => Some(UnitVector3::from_angles(PI / 2.0, angle)),
            Plane::Xz => Some(UnitVector3::normalized(c, 0.0, s).expect("unit circle")),
            Plane::None => None,
        }
    }

    /// Angle of the projection of `v` onto the plane.
    pub fn angle_of(&self, v: &UnitVector3) -> Option<f64> {
        match self {
            Plane::Xy => Some(v.y().atan2(v.x())),
            Plane::Xz => Some(v.z().atan2(v.x())),
            Plane::None => None,
        }
    }
}

impl fmt::Display for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Plane::Xy => "xy",
            Plane::Xz => "xz",
            Plane::None => "none",
        })
    }
}

impl FromStr for Plane {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "xy" => Ok(Plane::Xy),
            "xz" => Ok(Plane::Xz),
            "none" => Ok(Plane::None),
            _ => Err(Error::InvalidConfig(format!("unknown plane `{s}`"))),
        }
    }
}

/// Maps a flat angle vector to measurement settings.
///
/// Unconstrained: `(θ, φ)` per vector, `4N` angles ordered
/// `θ(a_1), φ(a_1), θ(a'_1), φ(a'_1), …`. Planar: one in-plane angle per
/// vector, `2N` angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AngleParameterization {
    num_modes: usize,
    plane: Plane,
}

impl AngleParameterization {
    pub fn new(num_modes: usize, plane: Plane) -> Result<Self> {
        if num_modes < 2 {
            return Err(Error::InvalidSettings(format!(
                "need at least 2 modes, got {num_modes}"
            )));
        }
        Ok(Self { num_modes, plane })
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn plane(&self) -> Plane {
        self.plane
    }

    pub fn angles_per_vector(&self) -> usize {
        match self.plane {
            Plane::None => 2,
            _ => 1,
        }
    }

    pub fn num_params(&self) -> usize {
        2 * self.num_modes * self.angles_per_vector()
    }

    pub fn vectors(&self, params: &[f64]) -> Vec<UnitVector3> {
        debug_assert_eq!(params.len(), self.num_params());
        match self.plane {
            Plane::None => params
                .chunks(2)
                .map(|c| UnitVector3::from_angles(c[0], c[1]))
                .collect(),
            plane => params
                .iter()
                .map(|&a| plane.vector(a).expect("planar"))
                .collect(),
        }
    }

    pub fn settings(&self, params: &[f64]) -> MeasurementSettings {
        MeasurementSettings::from_flat(&self.vectors(params)).expect("2N vectors, N ≥ 2")
    }

    /// Inverse of [`Self::settings`]; planar settings are projected.
    pub fn params_of(&self, settings: &MeasurementSettings) -> Vec<f64> {
        settings
            .to_flat()
            .iter()
            .flat_map(|v| match self.plane {
                Plane::None => {
                    let (t, p) = v.to_angles();
                    vec![t, p]
                }
                plane => vec![plane.angle_of(v).expect("planar")],
            })
            .collect()
    }

    /// Start point with every vector uniform on the sphere (or circle).
    pub fn random_start<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        (0..2 * self.num_modes)
            .flat_map(|_| match self.plane {
                Plane::None => {
                    let z: f64 = rng.gen_range(-1.0..=1.0);
                    let phi: f64 = rng.gen_range(0.0..TAU);
                    vec![z.acos(), phi]
                }
                _ => vec![rng.gen_range(0.0..TAU)],
            })
            .collect()
    }
}
