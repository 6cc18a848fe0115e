//! Standard (single-application) Born rule and projective collapse.
//!
//! This is the textbook measurement model: an observable is given by an
//! orthonormal eigenbasis with real eigenvalues, possibly degenerate. It
//! serves as the reference the sequential engine must reduce to on
//! orthogonal devices.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hilbert::{check_dims, StateVector};
use crate::scalar::Real;

/// Observable given by an orthonormal eigenbasis and one eigenvalue per
/// eigenstate. Equal eigenvalues form a degenerate eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalBasisMeasurement<T> {
    eigenstates: Vec<StateVector<T>>,
    eigenvalues: Vec<T>,
}

impl<T: Real> OrthonormalBasisMeasurement<T> {
    pub fn new(eigenstates: Vec<StateVector<T>>, eigenvalues: Vec<T>) -> Result<Self> {
        let dim = eigenstates.first().ok_or(Error::EmptySpace)?.dim();
        for s in &eigenstates {
            check_dims(dim, s.dim())?;
        }
        if eigenstates.len() != dim {
            return Err(Error::IncompleteBasis {
                expected: dim,
                found: eigenstates.len(),
            });
        }
        if eigenvalues.len() != eigenstates.len() {
            return Err(Error::EigenvalueCount {
                values: eigenvalues.len(),
                states: eigenstates.len(),
            });
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if eigenstates[i].inner(&eigenstates[j])?.norm() > T::aggregation_tolerance() {
                    return Err(Error::NotOrthonormal {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(Self {
            eigenstates,
            eigenvalues,
        })
    }

    /// Standard basis `e_0 .. e_{d-1}` labelled by `eigenvalues`.
    pub fn standard(eigenvalues: Vec<T>) -> Result<Self> {
        let dim = eigenvalues.len();
        let states = (0..dim)
            .map(|i| StateVector::basis(dim, i))
            .collect::<Result<Vec<_>>>()?;
        Self::new(states, eigenvalues)
    }

    pub fn dim(&self) -> usize {
        self.eigenstates.len()
    }

    pub fn eigenstates(&self) -> &[StateVector<T>] {
        &self.eigenstates
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// Distinct eigenvalues in order of first appearance.
    pub fn distinct_eigenvalues(&self) -> Vec<T> {
        let mut out: Vec<T> = Vec::new();
        for &v in &self.eigenvalues {
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }

    pub fn is_degenerate(&self) -> bool {
        self.distinct_eigenvalues().len() != self.eigenvalues.len()
    }

    fn pairs(&self) -> impl Iterator<Item = (&StateVector<T>, T)> {
        self.eigenstates
            .iter()
            .zip(self.eigenvalues.iter().copied())
    }
}

/// Probability attached to each real measurement value, in a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueDistribution<T> {
    entries: Vec<(T, T)>,
}

impl<T: Real> ValueDistribution<T> {
    pub(crate) fn from_entries(entries: Vec<(T, T)>) -> Self {
        Self { entries }
    }

    /// Probability of `value`, if it is a possible measurement value.
    pub fn get(&self, value: T) -> Option<T> {
        self.entries
            .iter()
            .find(|(v, _)| *v == value)
            .map(|(_, p)| *p)
    }

    pub fn entries(&self) -> &[(T, T)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> T {
        self.entries.iter().map(|(_, p)| *p).sum()
    }
}

/// `P(ω) = Σ_{i: ω_i = ω} |⟨ω_i|ψ⟩|²`.
pub fn born_distribution<T: Real>(
    psi: &StateVector<T>,
    m: &OrthonormalBasisMeasurement<T>,
) -> Result<ValueDistribution<T>> {
    check_dims(m.dim(), psi.dim())?;
    let entries = m
        .distinct_eigenvalues()
        .into_iter()
        .map(|value| {
            let p = m
                .pairs()
                .filter(|(_, v)| *v == value)
                .map(|(s, _)| s.inner(psi).map(|c| c.norm_sqr()))
                .sum::<Result<T>>()?;
            Ok((value, p))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ValueDistribution::from_entries(entries))
}

/// Projects `ψ` onto the eigenspace of `omega` and renormalizes.
pub fn collapse_projective<T: Real>(
    psi: &StateVector<T>,
    m: &OrthonormalBasisMeasurement<T>,
    omega: T,
) -> Result<StateVector<T>> {
    check_dims(m.dim(), psi.dim())?;
    if !m.eigenvalues.contains(&omega) {
        return Err(Error::UnknownEigenvalue(omega.to_f64().unwrap_or(f64::NAN)));
    }
    let mut projected = vec![Complex::new(T::zero(), T::zero()); psi.dim()];
    for (state, _) in m.pairs().filter(|(_, v)| *v == omega) {
        let c = state.inner(psi)?;
        for (out, e) in projected.iter_mut().zip(state.amplitudes()) {
            *out += e * c;
        }
    }
    let probability: T = projected.iter().map(|c| c.norm_sqr()).sum();
    if probability <= T::zero_tolerance() {
        return Err(Error::ImpossibleOutcome);
    }
    StateVector::normalize(projected)
}
