//! Naive reference implementation of the measurement tree.
//!
//! Works with unnormalized branch vectors: a leaf's vector is the ordered
//! product of rank-one projectors `|a⟩⟨a|` (affirmative) and complements
//! `I - |a⟩⟨a|` (null) applied to `ψ`, and its probability is the squared
//! norm of that vector divided by `n!`. No per-step renormalization, no
//! pruning, no shared path bookkeeping with the exact engine.

use std::collections::BTreeSet;

use num_complex::Complex;

use super::aggregate::sort_outcomes;
use super::{DistributionMetadata, MeasurementDevice, Mode, Outcome, OutcomeDistribution};
use crate::error::{Error, Result};
use crate::hilbert::StateVector;
use crate::scalar::Real;

/// Largest device the oracle accepts.
pub const ORACLE_CAP: usize = 6;

pub fn brute_force_oracle<T: Real>(
    psi: &StateVector<T>,
    device: &MeasurementDevice<T>,
) -> Result<OutcomeDistribution<T>> {
    if device.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: device.dim(),
            found: psi.dim(),
        });
    }
    let n = device.len();
    if n > ORACLE_CAP {
        return Err(Error::CapacityExceeded {
            size: n,
            cap: ORACLE_CAP,
        });
    }

    let mut permutations = Vec::new();
    permute(&mut (0..n).collect::<Vec<_>>(), 0, &mut permutations);
    let count = T::from_count(permutations.len() as u64);
    // squared norms below this carry no recoverable direction
    let floor = T::zero_tolerance() * T::zero_tolerance();
    let tol = T::aggregation_tolerance();

    let mut outcomes: Vec<(BTreeSet<String>, Vec<Complex<T>>, T)> = Vec::new();
    for perm in &permutations {
        for choice in 0u32..(1u32 << n) {
            let mut v = psi.amplitudes().to_vec();
            let mut labels = BTreeSet::new();
            for (step, &k) in perm.iter().enumerate() {
                let (label, state) = &device.states()[k];
                let a = state.amplitudes();
                let c = a
                    .iter()
                    .zip(&v)
                    .fold(Complex::new(T::zero(), T::zero()), |s, (x, y)| {
                        s + x.conj() * y
                    });
                if choice & (1 << step) != 0 {
                    v = a.iter().map(|x| x * c).collect();
                    labels.insert(label.clone());
                } else {
                    v = v.iter().zip(a).map(|(y, x)| y - x * c).collect();
                }
            }
            let weight: T = v.iter().map(|x| x.norm_sqr()).sum();
            if weight <= floor {
                continue;
            }
            let norm = weight.sqrt();
            let unit: Vec<Complex<T>> = v.iter().map(|x| x / norm).collect();
            let probability = weight / count;
            let existing = outcomes.iter_mut().find(|(l, s, _)| {
                *l == labels && {
                    let f = s
                        .iter()
                        .zip(&unit)
                        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| {
                            acc + x.conj() * y
                        });
                    f.norm_sqr() >= T::one() - tol
                }
            });
            match existing {
                Some((_, _, p)) => *p += probability,
                None => outcomes.push((labels, unit, probability)),
            }
        }
    }

    let mut outcomes: Vec<Outcome<T>> = outcomes
        .into_iter()
        .map(|(labels, state, probability)| Outcome {
            affirmative_labels: labels,
            final_state: StateVector::normalize(state)
                .expect("unit vector")
                .canonical(),
            probability,
        })
        .collect();
    sort_outcomes(&mut outcomes);
    Ok(OutcomeDistribution {
        outcomes,
        metadata: DistributionMetadata {
            device_size: n,
            dimension: device.dim(),
            labels: device.labels(),
            mode: Mode::Exact,
            samples: None,
            seed: None,
        },
    })
}

fn permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}
