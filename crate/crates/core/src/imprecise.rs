//! Imprecise measurement with resolution amplitudes.
//!
//! `Y[ā][a]` is the amplitude for the apparatus to report `ā` when the true
//! eigenvalue is `a`. Each column is normalized: `Σ_ā |Y[ā][a]|² = 1`.
//! The reported-value probabilities are `P(ā) = Σ_a |Y[ā][a]|² |⟨a|ψ⟩|²`, and
//! after reading `ā` the state becomes `Σ_a |a⟩ Y[ā][a] ⟨a|ψ⟩ / √P(ā)`.

use num_complex::Complex;

use crate::born::{OrthonormalBasisMeasurement, ValueDistribution};
use crate::error::{Error, Result};
use crate::hilbert::{check_dims, StateVector};
use crate::linalg::Matrix;
use crate::scalar::Real;

/// Resolution amplitudes indexed by (reported value, true value).
#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionMatrix<T> {
    true_values: Vec<T>,
    reported_values: Vec<T>,
    /// Row-major: one row per reported value.
    amplitudes: Vec<Vec<Complex<T>>>,
}

impl<T: Real> ResolutionMatrix<T> {
    pub fn new(
        true_values: Vec<T>,
        reported_values: Vec<T>,
        amplitudes: Vec<Vec<Complex<T>>>,
    ) -> Result<Self> {
        if true_values.is_empty() || reported_values.is_empty() {
            return Err(Error::ResolutionShape("no values".into()));
        }
        if amplitudes.len() != reported_values.len() {
            return Err(Error::ResolutionShape(format!(
                "{} rows for {} reported values",
                amplitudes.len(),
                reported_values.len()
            )));
        }
        if let Some((i, row)) = amplitudes
            .iter()
            .enumerate()
            .find(|(_, r)| r.len() != true_values.len())
        {
            return Err(Error::ResolutionShape(format!(
                "row {i} has {} entries for {} true values",
                row.len(),
                true_values.len()
            )));
        }
        if has_repeats(&true_values) || has_repeats(&reported_values) {
            return Err(Error::ResolutionShape("values must be distinct".into()));
        }
        for (column, &value) in true_values.iter().enumerate() {
            let sum: T = amplitudes.iter().map(|row| row[column].norm_sqr()).sum();
            if (sum - T::one()).abs() > T::norm_tolerance() {
                return Err(Error::ResolutionNormalization {
                    column,
                    value: value.to_f64().unwrap_or(f64::NAN),
                    sum: sum.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(Self {
            true_values,
            reported_values,
            amplitudes,
        })
    }

    /// Precise apparatus: reports exactly the true value.
    pub fn identity(values: Vec<T>) -> Result<Self> {
        let n = values.len();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let x = if i == j { T::one() } else { T::zero() };
                        Complex::new(x, T::zero())
                    })
                    .collect()
            })
            .collect();
        Self::new(values.clone(), values, rows)
    }

    pub fn true_values(&self) -> &[T] {
        &self.true_values
    }

    pub fn reported_values(&self) -> &[T] {
        &self.reported_values
    }

    pub fn amplitude(&self, reported: usize, true_index: usize) -> Complex<T> {
        self.amplitudes[reported][true_index]
    }

    pub fn rows(&self) -> &[Vec<Complex<T>>] {
        &self.amplitudes
    }

    fn reported_index(&self, reported: T) -> Result<usize> {
        self.reported_values
            .iter()
            .position(|&v| v == reported)
            .ok_or_else(|| Error::UnknownReportedValue(reported.to_f64().unwrap_or(f64::NAN)))
    }

    /// Column of each basis eigenstate, by exact eigenvalue match.
    fn align(&self, basis: &OrthonormalBasisMeasurement<T>) -> Result<Vec<usize>> {
        if basis.is_degenerate() {
            return Err(Error::DegenerateBasis);
        }
        if basis.eigenvalues().len() != self.true_values.len() {
            return Err(Error::MisalignedEigenvalues);
        }
        basis
            .eigenvalues()
            .iter()
            .map(|v| {
                self.true_values
                    .iter()
                    .position(|t| t == v)
                    .ok_or(Error::MisalignedEigenvalues)
            })
            .collect()
    }
}

fn has_repeats<T: PartialEq>(values: &[T]) -> bool {
    values
        .iter()
        .enumerate()
        .any(|(i, v)| values[i + 1..].contains(v))
}

/// `P(ā) = Σ_a |Y[ā][a]|² |⟨a|ψ⟩|²`, in the matrix's reported-value order.
pub fn imprecise_distribution<T: Real>(
    psi: &StateVector<T>,
    basis: &OrthonormalBasisMeasurement<T>,
    y: &ResolutionMatrix<T>,
) -> Result<ValueDistribution<T>> {
    check_dims(basis.dim(), psi.dim())?;
    let columns = y.align(basis)?;
    let weights = basis
        .eigenstates()
        .iter()
        .map(|a| a.inner(psi).map(|c| c.norm_sqr()))
        .collect::<Result<Vec<T>>>()?;
    let entries = y
        .reported_values
        .iter()
        .zip(&y.amplitudes)
        .map(|(&reported, row)| {
            let p = columns
                .iter()
                .zip(&weights)
                .map(|(&col, &w)| row[col].norm_sqr() * w)
                .sum();
            (reported, p)
        })
        .collect();
    Ok(ValueDistribution::from_entries(entries))
}

/// Post-measurement state after the apparatus reports `reported`.
pub fn imprecise_collapse<T: Real>(
    psi: &StateVector<T>,
    basis: &OrthonormalBasisMeasurement<T>,
    y: &ResolutionMatrix<T>,
    reported: T,
) -> Result<StateVector<T>> {
    check_dims(basis.dim(), psi.dim())?;
    let columns = y.align(basis)?;
    let row = &y.amplitudes[y.reported_index(reported)?];
    let mut out = vec![Complex::new(T::zero(), T::zero()); psi.dim()];
    let mut probability = T::zero();
    for (a, &col) in basis.eigenstates().iter().zip(&columns) {
        let coefficient = row[col] * a.inner(psi)?;
        probability += coefficient.norm_sqr();
        for (o, e) in out.iter_mut().zip(a.amplitudes()) {
            *o += e * coefficient;
        }
    }
    if probability <= T::zero_tolerance() {
        return Err(Error::ImpossibleOutcome);
    }
    let scale = probability.sqrt();
    StateVector::normalize(out.into_iter().map(|c| c / scale).collect())
}

/// The coarse-grained operator assembled from 0/1 resolution amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedOperator<T> {
    /// `Ŷ_ā = Σ_a Y[ā][a] |a⟩⟨a|` for each reported value.
    pub projectors: Vec<(T, Matrix<T>)>,
    /// `Σ_ā Ŷ_ā`, with no weighting by the reported values.
    pub total: Matrix<T>,
    /// Whether `total` is the identity; always true for a valid 0/1 partition.
    pub equals_identity: bool,
}

/// Builds `Ŷ_ā` for every reported value and their plain sum.
pub fn reduced_operator<T: Real>(
    basis: &OrthonormalBasisMeasurement<T>,
    y: &ResolutionMatrix<T>,
) -> Result<ReducedOperator<T>> {
    let columns = y.align(basis)?;
    let tol = T::norm_tolerance();
    for (row, entries) in y.amplitudes.iter().enumerate() {
        for (column, c) in entries.iter().enumerate() {
            let zero = c.norm() <= tol;
            let one = (c.re - T::one()).abs() <= tol && c.im.abs() <= tol;
            if !zero && !one {
                return Err(Error::NotZeroOne { row, column });
            }
        }
    }
    // true-value columns in ascending value order
    let mut by_value: Vec<usize> = (0..y.true_values.len()).collect();
    by_value.sort_by(|&a, &b| {
        y.true_values[a]
            .partial_cmp(&y.true_values[b])
            .expect("finite values")
    });
    for (row, &reported) in y.amplitudes.iter().zip(&y.reported_values) {
        let hits: Vec<usize> = by_value
            .iter()
            .enumerate()
            .filter(|(_, &col)| row[col].norm() > tol)
            .map(|(rank, _)| rank)
            .collect();
        if let (Some(first), Some(last)) = (hits.first(), hits.last()) {
            if last - first + 1 != hits.len() {
                return Err(Error::NonContiguousRange(
                    reported.to_f64().unwrap_or(f64::NAN),
                ));
            }
        }
    }

    let dim = basis.dim();
    let projectors: Vec<(T, Matrix<T>)> = y
        .reported_values
        .iter()
        .zip(&y.amplitudes)
        .map(|(&reported, row)| {
            let mut m = Matrix::zeros(dim);
            for (a, &col) in basis.eigenstates().iter().zip(&columns) {
                let rank_one = Matrix::outer(a.amplitudes());
                for (dst, src) in (0..dim * dim)
                    .map(|k| (k / dim, k % dim))
                    .zip(rank_one.entries())
                {
                    m[dst] += src * row[col];
                }
            }
            (reported, m)
        })
        .collect();
    let total = projectors
        .iter()
        .fold(Matrix::zeros(dim), |acc, (_, m)| acc.add(m));
    let equals_identity = total.max_abs_diff(&Matrix::identity(dim)) <= T::norm_tolerance();
    Ok(ReducedOperator {
        projectors,
        total,
        equals_identity,
    })
}

/// Largest overlap `|Σ_ā conj(Y[ā][a]) Y[ā][a']|` between distinct
/// true-value columns. Zero for a precise apparatus, one when two true
/// values are indistinguishable.
pub fn orthogonality_metric<T: Real>(y: &ResolutionMatrix<T>) -> T {
    let n = y.true_values.len();
    let mut worst = T::zero();
    for a in 0..n {
        for b in (a + 1)..n {
            let overlap = y
                .amplitudes
                .iter()
                .fold(Complex::new(T::zero(), T::zero()), |acc, row| {
                    acc + row[a].conj() * row[b]
                });
            worst = worst.max(overlap.norm());
        }
    }
    worst
}
