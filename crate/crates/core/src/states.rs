//! Parity-entangled GHZ states and the two-mode squeezed vacuum.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::fock::{ModeSpace, StateVector, C64};
use crate::pseudospin::{parity_state, Parity, ParityProfile, ProfilePreset};

#[derive(Debug, Clone, PartialEq)]
pub struct GhzSpec {
    num_modes: usize,
    dim: usize,
    profiles: Vec<ParityProfile>,
}

impl GhzSpec {
    /// `profiles` holds either one profile shared by all modes or one per mode.
    pub fn new(num_modes: usize, dim: usize, profiles: Vec<ParityProfile>) -> Result<Self> {
        if num_modes < 2 {
            return Err(Error::OutOfRange {
                what: "GHZ modes",
                value: num_modes,
                min: 2,
                max: usize::MAX,
            });
        }
        if profiles.len() != 1 && profiles.len() != num_modes {
            return Err(Error::InvalidProfile(format!(
                "{} profiles for {num_modes} modes",
                profiles.len()
            )));
        }
        Ok(Self {
            num_modes,
            dim,
            profiles,
        })
    }

    pub fn shared(num_modes: usize, dim: usize, profile: ParityProfile) -> Result<Self> {
        Self::new(num_modes, dim, vec![profile])
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn profile(&self, mode: usize) -> &ParityProfile {
        if self.profiles.len() == 1 {
            &self.profiles[0]
        } else {
            &self.profiles[mode]
        }
    }
}

/// `(|+⟩⊗…⊗|+⟩ − |−⟩⊗…⊗|−⟩)/√2`.
pub fn ghz_state(spec: &GhzSpec) -> Result<StateVector> {
    ModeSpace::new(spec.num_modes, spec.dim)?;
    let mut even = parity_state(spec.profile(0), Parity::Even, spec.dim)?;
    let mut odd = parity_state(spec.profile(0), Parity::Odd, spec.dim)?;
    for mode in 1..spec.num_modes {
        even = even.tensor(&parity_state(spec.profile(mode), Parity::Even, spec.dim)?)?;
        odd = odd.tensor(&parity_state(spec.profile(mode), Parity::Odd, spec.dim)?)?;
    }
    Ok(even.sub(&odd)?.scale(C64::new(FRAC_1_SQRT_2, 0.0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NopaParams {
    r: f64,
}

impl NopaParams {
    pub fn new(r: f64) -> Result<Self> {
        if r <= 0.0 || !r.is_finite() {
            return Err(Error::InvalidSqueezing(r));
        }
        Ok(Self { r })
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NopaState {
    /// Renormalized truncated state.
    pub state: StateVector,
    /// Probability weight of the discarded levels `n ≥ dim`.
    pub deficit: f64,
}

/// Two-mode squeezed vacuum `Σ tanh(r)ⁿ/cosh(r) |n,n⟩` truncated to `n < dim`.
pub fn nopa_state(p: &NopaParams, dim: usize) -> Result<NopaState> {
    let space = ModeSpace::new(2, dim)?;
    let lambda = p.r.tanh();
    let c0 = 1.0 / p.r.cosh();
    let mut amplitudes = vec![C64::new(0.0, 0.0); space.total_dim()];
    let mut kept = 0.0;
    let mut amp = c0;
    for n in 0..dim {
        amplitudes[n * dim + n] = C64::new(amp, 0.0);
        kept += amp * amp;
        amp *= lambda;
    }
    let raw = StateVector::new(space, amplitudes)?;
    Ok(NopaState {
        state: raw.normalize()?,
        deficit: (1.0 - kept).max(0.0),
    })
}

/// Parameters a [`StateFamily`] may draw on.
#[derive(Debug, Clone, PartialEq)]
pub struct StateRequest {
    pub modes: usize,
    pub dim: usize,
    pub profile: ProfilePreset,
    pub r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreparedState {
    pub state: StateVector,
    pub deficit: Option<f64>,
    pub description: String,
}

/// A named way of preparing a multi-mode state.
pub trait StateFamily: Send + Sync {
    fn name(&self) -> &'static str;

    fn prepare(&self, request: &StateRequest) -> Result<PreparedState>;
}

pub struct GhzFamily;

impl StateFamily for GhzFamily {
    fn name(&self) -> &'static str {
        "ghz"
    }

    fn prepare(&self, request: &StateRequest) -> Result<PreparedState> {
        let profile = request.profile.build(request.dim)?;
        let spec = GhzSpec::shared(request.modes, request.dim, profile)?;
        Ok(PreparedState {
            state: ghz_state(&spec)?,
            deficit: None,
            description: format!(
                "ghz(N={}, D={}, {})",
                request.modes, request.dim, request.profile
            ),
        })
    }
}

pub struct NopaFamily;

impl StateFamily for NopaFamily {
    fn name(&self) -> &'static str {
        "nopa"
    }

    fn prepare(&self, request: &StateRequest) -> Result<PreparedState> {
        if request.modes != 2 {
            return Err(Error::WrongModeCount {
                expected: 2,
                found: request.modes,
            });
        }
        let r = request.r.ok_or_else(|| {
            Error::InvalidSettings("nopa requires a squeezing parameter r".into())
        })?;
        let nopa = nopa_state(&NopaParams::new(r)?, request.dim)?;
        Ok(PreparedState {
            state: nopa.state,
            deficit: Some(nopa.deficit),
            description: format!("nopa(r={r}, D={})", request.dim),
        })
    }
}

/// State families keyed by name.
pub struct StateRegistry {
    families: BTreeMap<&'static str, Box<dyn StateFamily>>,
}

impl StateRegistry {
    pub fn empty() -> Self {
        Self {
            families: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, family: Box<dyn StateFamily>) {
        self.families.insert(family.name(), family);
    }

    pub fn get(&self, name: &str) -> Result<&dyn StateFamily> {
        self.families
            .get(name)
            .map(|f| f.as_ref())
            .ok_or_else(|| Error::UnknownName {
                kind: "state",
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.families.keys().copied().collect()
    }
}

impl Default for StateRegistry {
    fn default() -> Self {
        let mut registry = Self::empty();
        registry.register(Box::new(GhzFamily));
        registry.register(Box::new(NopaFamily));
        registry
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn ghz2_fock0() {
        let spec = GhzSpec::shared(2, 2, ParityProfile::fock0()).unwrap();
        let ghz = ghz_state(&spec).unwrap();
        let h = FRAC_1_SQRT_2;
        assert_eq!(ghz.amplitudes(), &[c(h), c(0.0), c(0.0), c(-h)]);
        assert!((ghz.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ghz_spec_validation() {
        assert!(GhzSpec::new(1, 4, vec![ParityProfile::fock0()]).is_err());
        let two = vec![ParityProfile::fock0(), ParityProfile::fock0()];
        assert!(GhzSpec::new(3, 4, two).is_err());
        let spec = GhzSpec::shared(6, 16, ParityProfile::fock0()).unwrap();
        assert!(matches!(ghz_state(&spec), Err(Error::SizeBudget { .. })));
    }

    #[test]
    fn ghz_per_mode_profiles() {
        let profiles = vec![
            ParityProfile::fock0(),
            ParityProfile::uniform(2).unwrap(),
            ParityProfile::geometric(0.3, 2).unwrap(),
        ];
        let ghz = ghz_state(&GhzSpec::new(3, 4, profiles).unwrap()).unwrap();
        assert!((ghz.norm() - 1.0).abs() < 1e-15);
        let space = ghz.space();
        // |0⟩|2⟩|0⟩ carries A_0·(1/√2)·A_0 / √2
        let idx = space.index_of(&[0, 2, 0]).unwrap();
        let g = ParityProfile::geometric(0.3, 2).unwrap().coefficients()[0].re;
        let expected = FRAC_1_SQRT_2 * FRAC_1_SQRT_2 * g;
        assert!((ghz.amplitudes()[idx].re - expected).abs() < 1e-15);
    }

    #[test]
    fn nopa_rejects_nonpositive_r() {
        for r in [0.0, -0.5, f64::NAN, f64::INFINITY] {
            assert!(NopaParams::new(r).is_err(), "{r}");
        }
    }

    #[test]
    fn nopa_small_r_is_vacuum() {
        let nopa = nopa_state(&NopaParams::new(1e-12).unwrap(), 4).unwrap();
        assert!((nopa.state.amplitudes()[0].re - 1.0).abs() < 1e-15);
        assert!(nopa.deficit < 1e-15);
    }

    #[test]
    fn nopa_deficit_matches_geometric_tail() {
        for &(r, dim) in &[(1.0, 32usize), (0.5, 8), (1.2, 32), (0.3, 4)] {
            let nopa = nopa_state(&NopaParams::new(r).unwrap(), dim).unwrap();
            let tail = f64::tanh(r).powi(2 * dim as i32);
            assert!((nopa.deficit - tail).abs() < 1e-14, "r={r} D={dim}");
        }
        let nopa = nopa_state(&NopaParams::new(1.0).unwrap(), 32).unwrap();
        assert!((nopa.deficit - 2.693_460_326_267e-8).abs() < 1e-14);
    }

    #[test]
    fn nopa_amplitudes_positive_decreasing_normalized() {
        let nopa = nopa_state(&NopaParams::new(0.8).unwrap(), 16).unwrap();
        let diag: Vec<f64> = (0..16)
            .map(|n| nopa.state.amplitudes()[n * 16 + n].re)
            .collect();
        assert!(diag.iter().all(|&a| a > 0.0));
        assert!(diag.windows(2).all(|w| w[1] < w[0]));
        assert!((nopa.state.norm() - 1.0).abs() < 1e-15);
        let off: f64 = nopa
            .state
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(i, _)| i / 16 != i % 16)
            .map(|(_, a)| a.norm())
            .sum();
        assert_eq!(off, 0.0);
    }

    #[test]
    fn registry_lookup() {
        let registry = StateRegistry::default();
        assert_eq!(registry.names(), vec!["ghz", "nopa"]);
        let req = StateRequest {
            modes: 2,
            dim: 4,
            profile: ProfilePreset::Fock0,
            r: Some(0.5),
        };
        let nopa = registry.get("nopa").unwrap().prepare(&req).unwrap();
        assert!(nopa.deficit.is_some());
        let ghz = registry.get("ghz").unwrap().prepare(&req).unwrap();
        assert!(ghz.deficit.is_none());
        assert!(matches!(registry.get("w"), Err(Error::UnknownName { .. })));
        let three = StateRequest {
            modes: 3,
            ..req.clone()
        };
        assert!(registry.get("nopa").unwrap().prepare(&three).is_err());
        let no_r = StateRequest { r: None, ..req };
        assert!(registry.get("nopa").unwrap().prepare(&no_r).is_err());
    }
}
