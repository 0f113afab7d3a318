//! Bell-CHSH and Mermin operators built from parity pseudospins.
//!
//! The two-mode operator is
//! `B_2 = (a_1·ŝ)⊗[(a_2·ŝ) + (a'_2·ŝ)] + (a'_1·ŝ)⊗[(a_2·ŝ) − (a'_2·ŝ)]`
//! and the `N`-mode operator follows the recursion
//! `B_N = B_{N−1}⊗½[(a_N·ŝ) + (a'_N·ŝ)] + B'_{N−1}⊗½[(a_N·ŝ) − (a'_N·ŝ)]`,
//! where `B'` is `B` with every `a_m ↔ a'_m`. Local realism bounds `|⟨B_N⟩|`
//! by 2; quantum mechanics by `2^((N+1)/2)`.

use crate::error::{Error, Result};
use crate::fock::{check_budget, kron, SparseOperator, StateVector, C64, DEFAULT_SIZE_BUDGET};
use crate::pseudospin::{build_pseudospin, dot_spin, PseudospinSet, UnitVector3};

pub const LOCAL_BOUND: f64 = 2.0;

/// `2^((N+1)/2)`.
pub fn quantum_bound(num_modes: usize) -> f64 {
    2f64.powf((num_modes as f64 + 1.0) / 2.0)
}

/// One `(a_m, a'_m)` pair per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSettings {
    pairs: Vec<(UnitVector3, UnitVector3)>,
}

impl MeasurementSettings {
    pub fn new(pairs: Vec<(UnitVector3, UnitVector3)>) -> Result<Self> {
        if pairs.len() < 2 {
            return Err(Error::InvalidSettings(format!(
                "need at least 2 modes, got {}",
                pairs.len()
            )));
        }
        Ok(Self { pairs })
    }

    /// From the flat list `[a_1, a'_1, a_2, a'_2, …]`.
    pub fn from_flat(vectors: &[UnitVector3]) -> Result<Self> {
        if !vectors.len().is_multiple_of(2) {
            return Err(Error::InvalidSettings(format!(
                "odd number of vectors ({})",
                vectors.len()
            )));
        }
        Self::new(vectors.chunks(2).map(|p| (p[0], p[1])).collect())
    }

    pub fn to_flat(&self) -> Vec<UnitVector3> {
        self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    pub fn pairs(&self) -> &[(UnitVector3, UnitVector3)] {
        &self.pairs
    }

    pub fn num_modes(&self) -> usize {
        self.pairs.len()
    }

    /// Exchanges `a_m ↔ a'_m` on every mode.
    pub fn swapped(&self) -> Self {
        Self {
            pairs: self.pairs.iter().map(|&(a, b)| (b, a)).collect(),
        }
    }

    /// Settings of the first `n` modes.
    pub fn prefix(&self, n: usize) -> Result<Self> {
        if n > self.pairs.len() {
            return Err(Error::InvalidSettings(format!(
                "prefix {n} of {} modes",
                self.pairs.len()
            )));
        }
        Self::new(self.pairs[..n].to_vec())
    }

    /// Rotates both vectors of mode `m` about z by `angles[m]`.
    pub fn rotated_about_z(&self, angles: &[f64]) -> Result<Self> {
        if angles.len() != self.pairs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.pairs.len(),
                found: angles.len(),
            });
        }
        Ok(Self {
            pairs: self
                .pairs
                .iter()
                .zip(angles)
                .map(|(&(a, b), &t)| (a.rotated_about_z(t), b.rotated_about_z(t)))
                .collect(),
        })
    }
}

/// Outcome of evaluating or optimizing `⟨B_N⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct BellReport {
    pub n_modes: usize,
    /// Signed `⟨B_N⟩`.
    pub value: f64,
    pub abs_value: f64,
    pub local_bound: f64,
    pub quantum_bound: f64,
    /// `|⟨B_N⟩| / 2`.
    pub violation_factor: f64,
    pub settings: MeasurementSettings,
}

impl BellReport {
    pub fn new(value: f64, settings: MeasurementSettings) -> Self {
        let n_modes = settings.num_modes();
        Self {
            n_modes,
            value,
            abs_value: value.abs(),
            local_bound: LOCAL_BOUND,
            quantum_bound: quantum_bound(n_modes),
            violation_factor: value.abs() / LOCAL_BOUND,
            settings,
        }
    }

    pub fn violates_local_bound(&self) -> bool {
        self.abs_value > self.local_bound
    }
}

fn spin_for(dim: usize, num_modes: usize) -> Result<PseudospinSet> {
    let spin = build_pseudospin(dim)?;
    check_budget(dim, num_modes, DEFAULT_SIZE_BUDGET)?;
    Ok(spin)
}

/// `(B_N, B'_N)` built together so each recursion level reuses both.
fn bell_pair(
    settings: &MeasurementSettings,
    spin: &PseudospinSet,
) -> Result<(SparseOperator, SparseOperator)> {
    let pairs = settings.pairs();
    let (a1, b1) = pairs[0];
    let (a2, b2) = pairs[1];
    let (a1, b1, a2, b2) = (
        dot_spin(&a1, spin),
        dot_spin(&b1, spin),
        dot_spin(&a2, spin),
        dot_spin(&b2, spin),
    );
    let sum2 = a2.add(&b2)?;
    let diff2 = a2.sub(&b2)?;
    let mut b = kron(&[&a1, &sum2])?.add(&kron(&[&b1, &diff2])?)?;
    // a ↔ a': sum is symmetric, difference flips sign
    let mut bp = kron(&[&b1, &sum2])?.sub(&kron(&[&a1, &diff2])?)?;

    for &(a, a_prime) in &pairs[2..] {
        let a = dot_spin(&a, spin);
        let a_prime = dot_spin(&a_prime, spin);
        let half_sum = a.add(&a_prime)?.scale(0.5);
        let half_diff = a.sub(&a_prime)?.scale(0.5);
        let next_b = kron(&[&b, &half_sum])?.add(&kron(&[&bp, &half_diff])?)?;
        let next_bp = kron(&[&bp, &half_sum])?.sub(&kron(&[&b, &half_diff])?)?;
        b = next_b;
        bp = next_bp;
    }
    let n = settings.num_modes();
    Ok((
        b.with_label(format!("B_{n}")),
        bp.with_label(format!("B'_{n}")),
    ))
}

/// The Bell-CHSH operator `B_N` for `N = settings.num_modes()`.
pub fn bell_operator(settings: &MeasurementSettings, dim: usize) -> Result<SparseOperator> {
    let spin = spin_for(dim, settings.num_modes())?;
    Ok(bell_pair(settings, &spin)?.0)
}

/// `B'_N`: `B_N` with every `a_m ↔ a'_m`.
pub fn bell_operator_prime(settings: &MeasurementSettings, dim: usize) -> Result<SparseOperator> {
    bell_operator(&settings.swapped(), dim).map(|op| {
        let n = settings.num_modes();
        op.with_label(format!("B'_{n}"))
    })
}

/// `A = ½[∏(s_x + i s_y) + ∏(s_x − i s_y)]`.
pub fn mermin_operator(num_modes: usize, dim: usize) -> Result<SparseOperator> {
    if num_modes < 2 {
        return Err(Error::OutOfRange {
            what: "Mermin modes",
            value: num_modes,
            min: 2,
            max: usize::MAX,
        });
    }
    let spin = spin_for(dim, num_modes)?;
    let raising = spin.sx.add(&spin.sy.scale_complex(C64::new(0.0, 1.0)))?;
    let factors = vec![&raising; num_modes];
    let k = kron(&factors)?;
    Ok(k.add(&k.adjoint())?
        .scale(0.5)
        .with_label(format!("A_{num_modes}")))
}

/// Residual norms of the four three-mode GHZ eigenvalue relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhzResiduals {
    /// `‖s_1x s_2x s_3x ψ + ψ‖`
    pub xxx: f64,
    /// `‖s_1x s_2y s_3y ψ − ψ‖`
    pub xyy: f64,
    /// `‖s_1y s_2x s_3y ψ − ψ‖`
    pub yxy: f64,
    /// `‖s_1y s_2y s_3x ψ − ψ‖`
    pub yyx: f64,
}

impl GhzResiduals {
    pub fn max(&self) -> f64 {
        [self.xxx, self.xyy, self.yxy, self.yyx]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.xxx, self.xyy, self.yxy, self.yyx]
    }
}

pub fn ghz_eigen_check(state: &StateVector, dim: usize) -> Result<GhzResiduals> {
    if state.num_modes() != 3 {
        return Err(Error::WrongModeCount {
            expected: 3,
            found: state.num_modes(),
        });
    }
    if state.space().dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: state.space().dim(),
        });
    }
    let spin = build_pseudospin(dim)?;
    let product = |ops: [&SparseOperator; 3]| -> Result<StateVector> {
        let mut out = state.clone();
        for (mode, op) in ops.into_iter().enumerate() {
            out = out.apply_local(op, mode)?;
        }
        Ok(out)
    };
    let (x, y) = (&spin.sx, &spin.sy);
    Ok(GhzResiduals {
        xxx: product([x, x, x])?.add(state)?.norm(),
        xyy: product([x, y, y])?.distance(state)?,
        yxy: product([y, x, y])?.distance(state)?,
        yyx: product([y, y, x])?.distance(state)?,
    })
}

/// Frobenius residual between `B_N²` and its decomposition over `B_{N−1}`:
///
/// `B_N² = B_{N−1}²⊗½(1 + a·a') + B'_{N−1}²⊗½(1 − a·a') + [B'_{N−1}, B_{N−1}]⊗(i/2)(a × a')·ŝ`
///
/// with `a, a'` the settings of mode `N`.
pub fn bell_square_identity_check(settings: &MeasurementSettings, dim: usize) -> Result<f64> {
    let n = settings.num_modes();
    if n < 3 {
        return Err(Error::OutOfRange {
            what: "square identity modes",
            value: n,
            min: 3,
            max: usize::MAX,
        });
    }
    let spin = spin_for(dim, n)?;
    let (b_n, _) = bell_pair(settings, &spin)?;
    let (b, bp) = bell_pair(&settings.prefix(n - 1)?, &spin)?;
    let (a, a_prime) = settings.pairs()[n - 1];

    let lhs = b_n.matmul(&b_n)?;
    let identity = spin.identity();
    let cos = a.dot(&a_prime);
    let cross = spin
        .linear_combination(a.cross(&a_prime))
        .scale_complex(C64::new(0.0, 0.5));
    let rhs = kron(&[&b.matmul(&b)?, &identity.scale(0.5 * (1.0 + cos))])?
        .add(&kron(&[
            &bp.matmul(&bp)?,
            &identity.scale(0.5 * (1.0 - cos)),
        ])?)?
        .add(&kron(&[&bp.commutator(&b)?, &cross])?)?;
    lhs.frobenius_distance(&rhs)
}

/// Coefficient tensors `(W_N, W'_N)` of `B_N` and `B'_N` in the product basis
/// `s_{μ1}⊗…⊗s_{μN}`, `μ ∈ {x, y, z}`, first mode most significant.
pub fn coefficient_tensors(settings: &MeasurementSettings) -> (Vec<f64>, Vec<f64>) {
    coefficient_tensors_of(settings.pairs())
}

/// As [`coefficient_tensors`] for any non-empty prefix of pairs. A single
/// pair yields `(a_1, a'_1)`, the seed from which `B_2` is assembled with unit
/// weights; later modes enter with weight ½.
pub(crate) fn coefficient_tensors_of(pairs: &[(UnitVector3, UnitVector3)]) -> (Vec<f64>, Vec<f64>) {
    let outer =
        |t: &[f64], v: [f64; 3]| -> Vec<f64> { t.iter().flat_map(|&x| v.map(|y| x * y)).collect() };
    let add = |p: Vec<f64>, q: Vec<f64>, sign: f64| -> Vec<f64> {
        p.into_iter().zip(q).map(|(x, y)| x + sign * y).collect()
    };

    let (a1, b1) = pairs[0];
    let mut w = a1.to_array().to_vec();
    let mut wp = b1.to_array().to_vec();
    for (step, &(a, a_prime)) in pairs.iter().enumerate().skip(1) {
        let scale = if step == 1 { 1.0 } else { 0.5 };
        let (a, b) = (a.to_array(), a_prime.to_array());
        let sum = [0, 1, 2].map(|i| scale * (a[i] + b[i]));
        let diff = [0, 1, 2].map(|i| scale * (a[i] - b[i]));
        let next_w = add(outer(&w, sum), outer(&wp, diff), 1.0);
        let next_wp = add(outer(&wp, sum), outer(&w, diff), -1.0);
        w = next_w;
        wp = next_wp;
    }
    (w, wp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{apply, expectation, ModeSpace};
    use crate::pseudospin::ParityProfile;
    use crate::states::{ghz_state, GhzSpec};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    fn planar(phi: f64) -> UnitVector3 {
        UnitVector3::from_angles(FRAC_PI_2, phi)
    }

    fn ghz(n: usize, dim: usize) -> StateVector {
        ghz_state(&GhzSpec::shared(n, dim, ParityProfile::fock0()).unwrap()).unwrap()
    }

    /// CHSH-optimal x–y settings for (|00⟩ − |11⟩)/√2, whose planar
    /// correlation is −cos(φ_1 + φ_2).
    fn chsh_optimal() -> MeasurementSettings {
        MeasurementSettings::new(vec![
            (planar(0.0), planar(FRAC_PI_2)),
            (planar(-FRAC_PI_4), planar(FRAC_PI_4)),
        ])
        .unwrap()
    }

    #[test]
    fn all_z_gives_twice_zz() {
        let z = UnitVector3::Z;
        let s = MeasurementSettings::new(vec![(z, z), (z, z)]).unwrap();
        let b = bell_operator(&s, 4).unwrap();
        let spin = build_pseudospin(4).unwrap();
        let zz = kron(&[&spin.sz, &spin.sz]).unwrap().scale(2.0);
        assert_eq!(b.max_abs_distance(&zz).unwrap(), 0.0);
        assert_eq!(
            bell_operator_prime(&s, 4)
                .unwrap()
                .max_abs_distance(&b)
                .unwrap(),
            0.0
        );
    }

    #[test]
    fn cirelson_value_on_ghz2() {
        let b = bell_operator(&chsh_optimal(), 2).unwrap();
        let v = expectation(&b, &ghz(2, 2)).unwrap();
        assert!((v.abs() - 2.0 * SQRT_2).abs() < 1e-12, "{v}");
        // B' at the swapped optimum reaches the same value
        let bp = bell_operator_prime(&chsh_optimal().swapped(), 2).unwrap();
        let vp = expectation(&bp, &ghz(2, 2)).unwrap();
        assert!((vp - v).abs() < 1e-12, "{vp}");
    }

    #[test]
    fn prime_is_an_involution() {
        let s = chsh_optimal();
        let twice = s.swapped().swapped();
        assert_eq!(twice, s);
        let b = bell_operator(&s, 4).unwrap();
        let b2 = bell_operator(&twice, 4).unwrap();
        assert_eq!(b.max_abs_distance(&b2).unwrap(), 0.0);
    }

    #[test]
    fn settings_validation() {
        let x = UnitVector3::X;
        assert!(MeasurementSettings::new(vec![(x, x)]).is_err());
        assert!(MeasurementSettings::from_flat(&[x, x, x]).is_err());
        let s = MeasurementSettings::from_flat(&[x, x, x, x, x, x]).unwrap();
        assert_eq!(s.num_modes(), 3);
        assert!(bell_operator(&s, 3).is_err());
        let big = MeasurementSettings::from_flat(&vec![x; 12]).unwrap();
        assert!(matches!(
            bell_operator(&big, 16),
            Err(Error::SizeBudget { .. })
        ));
    }

    #[test]
    fn mermin_two_mode_is_xx_minus_yy() {
        let spin = build_pseudospin(2).unwrap();
        let a = mermin_operator(2, 2).unwrap();
        let expected = kron(&[&spin.sx, &spin.sx])
            .unwrap()
            .sub(&kron(&[&spin.sy, &spin.sy]).unwrap())
            .unwrap();
        assert!(a.max_abs_distance(&expected).unwrap() < 1e-15);
        assert!(a.is_hermitian());
        let v = expectation(&a, &ghz(2, 2)).unwrap();
        assert!((v + 2.0).abs() < 1e-14);
    }

    #[test]
    fn mermin_eigenvalue_on_ghz() {
        for n in 2..=4 {
            let a = mermin_operator(n, 4).unwrap();
            let g = ghz(n, 4);
            let expected = g.scale(C64::new(-(2f64.powi(n as i32 - 1)), 0.0));
            let residual = apply(&a, &g).unwrap().distance(&expected).unwrap();
            assert!(residual < 1e-10, "N={n}: {residual}");
        }
        assert!(mermin_operator(1, 4).is_err());
    }

    #[test]
    fn mermin_vanishes_on_all_even_product() {
        let space = ModeSpace::new(3, 4).unwrap();
        let v = StateVector::basis(space, &[0, 2, 0]).unwrap();
        let a = mermin_operator(3, 4).unwrap();
        assert_eq!(expectation(&a, &v).unwrap(), 0.0);
    }

    #[test]
    fn ghz_eigen_relations() {
        let r = ghz_eigen_check(&ghz(3, 4), 4).unwrap();
        assert!(r.max() < 1e-12, "{r:?}");
    }

    #[test]
    fn product_state_is_not_xxx_eigenstate() {
        let space = ModeSpace::new(3, 2).unwrap();
        let plus = StateVector::basis(space, &[0, 0, 0]).unwrap();
        let r = ghz_eigen_check(&plus, 2).unwrap();
        assert!((r.xxx - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn ghz_eigen_check_wrong_modes() {
        assert!(matches!(
            ghz_eigen_check(&ghz(2, 4), 4),
            Err(Error::WrongModeCount {
                expected: 3,
                found: 2
            })
        ));
        assert!(ghz_eigen_check(&ghz(3, 4), 2).is_err());
    }

    #[test]
    fn square_identity_parallel_settings() {
        let a = UnitVector3::normalized(0.2, 0.5, -0.3).unwrap();
        let b = UnitVector3::normalized(-0.7, 0.1, 0.4).unwrap();
        let s = MeasurementSettings::new(vec![(a, b), (b, a), (a, a)]).unwrap();
        assert!(bell_square_identity_check(&s, 4).unwrap() < 1e-12);
        let two = s.prefix(2).unwrap();
        assert!(bell_square_identity_check(&two, 4).is_err());
    }

    /// With the commutator written as `[B_{N−1}, B'_{N−1}]` the identity fails
    /// for non-parallel settings.
    #[test]
    fn square_identity_commutator_order_matters() {
        let v = |x, y, z| UnitVector3::normalized(x, y, z).unwrap();
        let s = MeasurementSettings::new(vec![
            (v(0.1, 0.9, 0.2), v(0.8, -0.3, 0.1)),
            (v(-0.4, 0.2, 0.7), v(0.3, 0.3, -0.6)),
            (v(0.5, -0.5, 0.2), v(0.1, 0.7, 0.6)),
        ])
        .unwrap();
        assert!(bell_square_identity_check(&s, 2).unwrap() < 1e-12);

        let spin = build_pseudospin(2).unwrap();
        let (b, bp) = bell_pair(&s.prefix(2).unwrap(), &spin).unwrap();
        let (a, ap) = s.pairs()[2];
        let cross = spin
            .linear_combination(a.cross(&ap))
            .scale_complex(C64::new(0.0, 0.5));
        let with_correct = kron(&[&bp.commutator(&b).unwrap(), &cross]).unwrap();
        let with_reversed = kron(&[&b.commutator(&bp).unwrap(), &cross]).unwrap();
        let gap = with_correct.frobenius_distance(&with_reversed).unwrap();
        assert!(gap > 1.0, "{gap}");
    }

    #[test]
    fn coefficient_tensor_matches_operator() {
        let v = |x, y, z| UnitVector3::normalized(x, y, z).unwrap();
        let s = MeasurementSettings::new(vec![
            (v(0.1, 0.9, 0.2), v(0.8, -0.3, 0.1)),
            (v(-0.4, 0.2, 0.7), v(0.3, 0.3, -0.6)),
            (v(0.5, -0.5, 0.2), v(0.1, 0.7, 0.6)),
        ])
        .unwrap();
        let spin = build_pseudospin(2).unwrap();
        let (w, _) = coefficient_tensors(&s);
        let mut triplets = Vec::new();
        for (idx, &coeff) in w.iter().enumerate() {
            let mu = [idx / 9, (idx / 3) % 3, idx % 3];
            let ops: Vec<&SparseOperator> = mu
                .iter()
                .map(|&m| spin.component(crate::pseudospin::Axis::ALL[m]))
                .collect();
            triplets.extend(
                kron(&ops)
                    .unwrap()
                    .entries()
                    .map(|(r, c, x)| (r, c, x * coeff))
                    .collect::<Vec<_>>(),
            );
        }
        let from_tensor = SparseOperator::from_triplets(8, triplets, "W").unwrap();
        let b = bell_operator(&s, 2).unwrap();
        assert!(b.max_abs_distance(&from_tensor).unwrap() < 1e-14);
    }
}
