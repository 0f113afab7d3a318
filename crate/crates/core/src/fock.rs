//! Complex linear algebra over truncated multi-mode Fock spaces.
//!
//! Basis states of an `N`-mode space with per-mode truncation `D` are indexed
//! with mode 1 as the most significant digit:
//! `index = n_1·D^(N−1) + n_2·D^(N−2) + … + n_N`.
//! Every operator built by [`kron`] follows the same convention, so the first
//! factor acts on the first mode.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest state-vector length accepted by default (`D^N ≤ 2^20`).
pub const DEFAULT_SIZE_BUDGET: usize = 1 << 20;

const NORM_TOL: f64 = 1e-9;
const IMAG_TOL: f64 = 1e-10;
const POWER_ITERATION_SEED: u64 = 0x5EED_F0C5;

pub(crate) fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Number of modes and the per-mode truncation of a Fock space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeSpace {
    num_modes: usize,
    dim: usize,
}

impl ModeSpace {
    pub fn new(num_modes: usize, dim: usize) -> Result<Self> {
        Self::with_budget(num_modes, dim, DEFAULT_SIZE_BUDGET)
    }

    pub fn with_budget(num_modes: usize, dim: usize, budget: usize) -> Result<Self> {
        if num_modes == 0 {
            return Err(Error::InvalidModeCount(num_modes));
        }
        if dim < 2 || !dim.is_multiple_of(2) {
            return Err(Error::InvalidDimension(dim));
        }
        check_budget(dim, num_modes, budget)?;
        Ok(Self { num_modes, dim })
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    /// Per-mode truncation `D`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Total dimension `D^N`.
    pub fn total_dim(&self) -> usize {
        self.dim.pow(self.num_modes as u32)
    }

    /// Stride of `mode` (0-based) in the flattened index.
    pub fn stride(&self, mode: usize) -> usize {
        self.dim.pow((self.num_modes - 1 - mode) as u32)
    }

    /// Flattened index of the basis state `|n_1, …, n_N⟩`.
    pub fn index_of(&self, levels: &[usize]) -> Result<usize> {
        if levels.len() != self.num_modes {
            return Err(Error::DimensionMismatch {
                expected: self.num_modes,
                found: levels.len(),
            });
        }
        let mut index = 0;
        for &n in levels {
            if n >= self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: n,
                });
            }
            index = index * self.dim + n;
        }
        Ok(index)
    }
}

/// Rejects `base^exp` above `budget` without overflowing.
pub(crate) fn check_budget(base: usize, exp: usize, budget: usize) -> Result<()> {
    let mut total: u128 = 1;
    for _ in 0..exp {
        total = total.saturating_mul(base as u128);
        if total > budget as u128 {
            return Err(Error::SizeBudget {
                requested: total,
                budget,
            });
        }
    }
    Ok(())
}

/// Complex amplitude vector over a [`ModeSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: ModeSpace,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new(space: ModeSpace, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != space.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.total_dim(),
                found: amplitudes.len(),
            });
        }
        Ok(Self { space, amplitudes })
    }

    pub fn zeros(space: ModeSpace) -> Self {
        Self {
            space,
            amplitudes: vec![zero(); space.total_dim()],
        }
    }

    /// Fock basis state `|n_1, …, n_N⟩`.
    pub fn basis(space: ModeSpace, levels: &[usize]) -> Result<Self> {
        let index = space.index_of(levels)?;
        let mut state = Self::zeros(space);
        state.amplitudes[index] = C64::new(1.0, 0.0);
        Ok(state)
    }

    pub fn space(&self) -> ModeSpace {
        self.space
    }

    pub fn num_modes(&self) -> usize {
        self.space.num_modes
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn normalize(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(C64::new(1.0 / norm, 0.0)))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.check_same_len(other.len())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            space: self.space,
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn add(&self, other: &StateVector) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &StateVector) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Euclidean norm of `self − other`.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    /// Tensor product `self ⊗ other`; both factors must share the truncation.
    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        if self.space.dim != other.space.dim {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim,
                found: other.space.dim,
            });
        }
        let space = ModeSpace::new(self.space.num_modes + other.space.num_modes, self.space.dim)?;
        let mut amplitudes = Vec::with_capacity(space.total_dim());
        for a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|b| a * b));
        }
        Ok(Self { space, amplitudes })
    }

    /// Applies a single-mode operator to `mode` (0-based), identity elsewhere.
    pub fn apply_local(&self, op: &SparseOperator, mode: usize) -> Result<Self> {
        if op.dim() != self.space.dim {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim,
                found: op.dim(),
            });
        }
        if mode >= self.space.num_modes {
            return Err(Error::WrongModeCount {
                expected: mode + 1,
                found: self.space.num_modes,
            });
        }
        let stride = self.space.stride(mode);
        let block = stride * self.space.dim;
        let mut out = vec![zero(); self.len()];
        for outer in (0..self.len()).step_by(block) {
            for (row, col, value) in op.entries() {
                let dst = outer + row * stride;
                let src = outer + col * stride;
                for inner in 0..stride {
                    out[dst + inner] += value * self.amplitudes[src + inner];
                }
            }
        }
        Ok(Self {
            space: self.space,
            amplitudes: out,
        })
    }

    fn zip_with(&self, other: &StateVector, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        self.check_same_len(other.len())?;
        Ok(Self {
            space: self.space,
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    fn check_same_len(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: len,
            });
        }
        Ok(())
    }
}

/// Square sparse complex matrix in compressed-row form.
///
/// Entries are canonical: sorted by `(row, col)`, no duplicates, no stored
/// exact zeros. The Hermitian flag is computed at construction by an exact
/// comparison `entry(c, r) == conj(entry(r, c))`.
#[derive(Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<C64>,
    hermitian: bool,
    label: String,
}

impl fmt::Debug for SparseOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SparseOperator")
            .field("label", &self.label)
            .field("dim", &self.dim)
            .field("nnz", &self.nnz())
            .field("hermitian", &self.hermitian)
            .finish()
    }
}

impl SparseOperator {
    /// Builds an operator from coordinate triplets, summing duplicates.
    pub fn from_triplets<I>(dim: usize, triplets: I, label: impl Into<String>) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, C64)>,
    {
        let mut triplets: Vec<_> = triplets.into_iter().collect();
        for &(row, col, _) in &triplets {
            if row >= dim || col >= dim {
                return Err(Error::EntryOutOfRange { row, col, dim });
            }
        }
        // stable: duplicate entries are summed in insertion order
        triplets.sort_by_key(|&(r, c, _)| (r, c));

        let mut row_ptr = vec![0; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut values: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut rows = Vec::with_capacity(triplets.len());
        for (row, col, value) in triplets {
            if rows.last() == Some(&row) && cols.last() == Some(&col) {
                *values.last_mut().unwrap() += value;
            } else {
                rows.push(row);
                cols.push(col);
                values.push(value);
            }
        }
        let mut kept = 0;
        for i in 0..values.len() {
            if values[i] != zero() {
                rows[kept] = rows[i];
                cols[kept] = cols[i];
                values[kept] = values[i];
                kept += 1;
            }
        }
        rows.truncate(kept);
        cols.truncate(kept);
        values.truncate(kept);
        for &row in &rows {
            row_ptr[row + 1] += 1;
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }

        let mut op = Self {
            dim,
            row_ptr,
            cols,
            values,
            hermitian: false,
            label: label.into(),
        };
        op.hermitian = op.check_hermitian();
        Ok(op)
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![C64::new(1.0, 0.0); dim], "I")
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            row_ptr: vec![0; dim + 1],
            cols: Vec::new(),
            values: Vec::new(),
            hermitian: true,
            label: "0".into(),
        }
    }

    pub fn diagonal(values: &[C64], label: impl Into<String>) -> Self {
        Self::from_triplets(
            values.len(),
            values.iter().enumerate().map(|(i, &v)| (i, i, v)),
            label,
        )
        .expect("diagonal entries are in range")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Canonical `(row, col, value)` entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k], self.values[k]))
        })
    }

    fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (self.cols[k], self.values[k]))
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        if row >= self.dim || col >= self.dim {
            return zero();
        }
        let span = self.row_ptr[row]..self.row_ptr[row + 1];
        match self.cols[span.clone()].binary_search(&col) {
            Ok(k) => self.values[span.start + k],
            Err(_) => zero(),
        }
    }

    fn check_hermitian(&self) -> bool {
        self.entries().all(|(r, c, v)| self.get(c, r) == v.conj())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(
            self.dim,
            self.entries().map(|(r, c, v)| (c, r, v.conj())),
            format!("({})†", self.label),
        )
        .expect("adjoint preserves bounds")
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.scale_complex(C64::new(factor, 0.0))
    }

    pub fn scale_complex(&self, factor: C64) -> Self {
        Self::from_triplets(
            self.dim,
            self.entries().map(|(r, c, v)| (r, c, v * factor)),
            self.label.clone(),
        )
        .expect("scaling preserves bounds")
    }

    pub fn add(&self, other: &SparseOperator) -> Result<Self> {
        self.check_same_dim(other)?;
        Self::from_triplets(
            self.dim,
            self.entries().chain(other.entries()),
            format!("{} + {}", self.label, other.label),
        )
    }

    pub fn sub(&self, other: &SparseOperator) -> Result<Self> {
        self.check_same_dim(other)?;
        Self::from_triplets(
            self.dim,
            self.entries()
                .chain(other.entries().map(|(r, c, v)| (r, c, -v))),
            format!("{} - {}", self.label, other.label),
        )
    }

    /// Matrix product `self · other`.
    pub fn matmul(&self, other: &SparseOperator) -> Result<Self> {
        self.check_same_dim(other)?;
        let mut acc = vec![zero(); self.dim];
        let mut touched = vec![false; self.dim];
        let mut cols_in_row = Vec::new();
        let mut triplets = Vec::new();
        for r in 0..self.dim {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if !touched[c] {
                        touched[c] = true;
                        cols_in_row.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            for &c in &cols_in_row {
                triplets.push((r, c, acc[c]));
                acc[c] = zero();
                touched[c] = false;
            }
            cols_in_row.clear();
        }
        Self::from_triplets(
            self.dim,
            triplets,
            format!("({})·({})", self.label, other.label),
        )
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &SparseOperator) -> Result<Self> {
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    /// Anticommutator `{self, other}`.
    pub fn anticommutator(&self, other: &SparseOperator) -> Result<Self> {
        self.matmul(other)?.add(&other.matmul(self)?)
    }

    /// Frobenius norm of `self − other`.
    pub fn frobenius_distance(&self, other: &SparseOperator) -> Result<f64> {
        self.check_same_dim(other)?;
        let mut total = 0.0;
        for r in 0..self.dim {
            let mut a = self.row(r).peekable();
            let mut b = other.row(r).peekable();
            loop {
                let d = match (a.peek(), b.peek()) {
                    (None, None) => break,
                    (Some(&(ca, va)), Some(&(cb, vb))) if ca == cb => {
                        a.next();
                        b.next();
                        va - vb
                    }
                    (Some(&(ca, va)), Some(&(cb, _))) if ca < cb => {
                        a.next();
                        va
                    }
                    (Some(&(_, va)), None) => {
                        a.next();
                        va
                    }
                    (_, Some(&(_, vb))) => {
                        b.next();
                        -vb
                    }
                };
                total += d.norm_sqr();
            }
        }
        Ok(total.sqrt())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_distance(&self, other: &SparseOperator) -> Result<f64> {
        let diff = self.sub(other)?;
        Ok(diff.values.iter().map(|v| v.norm()).fold(0.0, f64::max))
    }

    pub fn apply_slice(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|r| self.row(r).map(|(c, a)| a * v[c]).sum())
            .collect())
    }

    fn check_same_dim(&self, other: &SparseOperator) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }
}

/// Kronecker product of `factors`, first factor most significant.
pub fn kron(factors: &[&SparseOperator]) -> Result<SparseOperator> {
    kron_with_budget(factors, DEFAULT_SIZE_BUDGET)
}

pub fn kron_with_budget(factors: &[&SparseOperator], budget: usize) -> Result<SparseOperator> {
    let (first, rest) = factors.split_first().ok_or(Error::EmptyKron)?;
    let total = factors
        .iter()
        .try_fold(1u128, |acc, f| acc.checked_mul(f.dim() as u128))
        .unwrap_or(u128::MAX);
    if total > budget as u128 {
        return Err(Error::SizeBudget {
            requested: total,
            budget,
        });
    }
    let mut out = (*first).clone();
    for f in rest {
        out = kron_pair(&out, f);
    }
    out.label = factors
        .iter()
        .map(|f| f.label())
        .collect::<Vec<_>>()
        .join("⊗");
    Ok(out)
}

fn kron_pair(a: &SparseOperator, b: &SparseOperator) -> SparseOperator {
    let db = b.dim;
    let dim = a.dim * db;
    let mut row_ptr = Vec::with_capacity(dim + 1);
    let mut cols = Vec::with_capacity(a.nnz() * b.nnz());
    let mut values = Vec::with_capacity(a.nnz() * b.nnz());
    row_ptr.push(0);
    for ra in 0..a.dim {
        for rb in 0..db {
            for (ca, va) in a.row(ra) {
                for (cb, vb) in b.row(rb) {
                    let v = va * vb;
                    if v != zero() {
                        cols.push(ca * db + cb);
                        values.push(v);
                    }
                }
            }
            row_ptr.push(cols.len());
        }
    }
    let mut op = SparseOperator {
        dim,
        row_ptr,
        cols,
        values,
        hermitian: false,
        label: String::new(),
    };
    op.hermitian = a.hermitian && b.hermitian;
    op
}

/// Exact sparse matrix–vector product.
pub fn apply(op: &SparseOperator, v: &StateVector) -> Result<StateVector> {
    StateVector::new(v.space(), op.apply_slice(v.amplitudes())?)
}

/// Raw `⟨v|op|v⟩` including any imaginary part.
pub fn raw_expectation(op: &SparseOperator, v: &StateVector) -> Result<C64> {
    let image = op.apply_slice(v.amplitudes())?;
    Ok(v.amplitudes()
        .iter()
        .zip(&image)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// `⟨v|op|v⟩` for a Hermitian operator and a normalized state.
pub fn expectation(op: &SparseOperator, v: &StateVector) -> Result<f64> {
    if !op.is_hermitian() {
        return Err(Error::NotHermitian(op.label().to_string()));
    }
    let norm = v.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let raw = raw_expectation(op, v)?;
    if raw.im.abs() >= IMAG_TOL {
        return Err(Error::ImaginaryResidue(raw.im));
    }
    Ok(raw.re)
}

/// Largest eigenvalue magnitude of a Hermitian operator by power iteration.
///
/// Stops when the relative change of `‖op·v‖` between iterates drops below
/// `tol`. The start vector is a fixed pseudo-random vector, so results are
/// reproducible.
pub fn spectral_radius(op: &SparseOperator, tol: f64, max_iter: usize) -> Result<f64> {
    if !op.is_hermitian() {
        return Err(Error::NotHermitian(op.label().to_string()));
    }
    if op.nnz() == 0 {
        return Ok(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(POWER_ITERATION_SEED);
    let mut v: Vec<C64> = (0..op.dim())
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    normalize_in_place(&mut v);

    let mut previous = f64::NAN;
    let mut estimate = 0.0;
    for _ in 0..max_iter {
        let mut w = op.apply_slice(&v)?;
        estimate = normalize_in_place(&mut w);
        if estimate == 0.0 {
            return Ok(0.0);
        }
        if ((estimate - previous) / estimate).abs() < tol {
            return Ok(estimate);
        }
        previous = estimate;
        v = w;
    }
    Err(Error::NotConverged {
        last: estimate,
        iterations: max_iter,
    })
}

fn normalize_in_place(v: &mut [C64]) -> f64 {
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|a| *a /= norm);
    }
    norm
}
