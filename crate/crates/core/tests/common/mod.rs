#![allow(dead_code)]

use parity_bell::bell::MeasurementSettings;
use parity_bell::fock::{ModeSpace, StateVector, C64};
use parity_bell::pseudospin::{ParityProfile, UnitVector3};
use rand::Rng;

pub fn random_unit<R: Rng>(rng: &mut R) -> UnitVector3 {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    UnitVector3::from_angles(z.acos(), phi)
}

pub fn random_settings<R: Rng>(rng: &mut R, num_modes: usize) -> MeasurementSettings {
    let pairs = (0..num_modes)
        .map(|_| (random_unit(rng), random_unit(rng)))
        .collect();
    MeasurementSettings::new(pairs).unwrap()
}

pub fn random_state<R: Rng>(rng: &mut R, num_modes: usize, dim: usize) -> StateVector {
    let space = ModeSpace::new(num_modes, dim).unwrap();
    let amplitudes = (0..space.total_dim())
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    StateVector::new(space, amplitudes)
        .unwrap()
        .normalize()
        .unwrap()
}

pub fn random_profile<R: Rng>(rng: &mut R, max_len: usize) -> ParityProfile {
    let len = rng.gen_range(1..=max_len);
    let coefficients = (0..len)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ParityProfile::new(coefficients).unwrap()
}
