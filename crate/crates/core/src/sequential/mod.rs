//! Sequential Born rule over every ordering of a device's measurement states.
//!
//! A device is an ordered, labelled set of (possibly nonorthogonal, possibly
//! repeated) measurement states. For each of the `n!` orderings the object
//! state is measured by one state at a time; each step forks into an
//! affirmative branch (collapse onto the measurement state, probability
//! `|⟨a|ψ⟩|²`) and a null branch (collapse onto its orthogonal complement).
//! Every ordering carries weight `1/n!`. A leaf reports the labels that came
//! out affirmative along its path together with the final object state, and
//! leaves sharing both are merged into one [`Outcome`].
//!
//! [`measure_exact`] enumerates the full tree, [`measure_sampled`] draws
//! paths at random, and [`brute_force_oracle`] is a slow independent
//! implementation used for differential testing.

use std::collections::BTreeSet;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hilbert::{phase_equal, random_state_with, StateVector};
use crate::scalar::Real;

mod aggregate;
mod exact;
mod oracle;
mod sampled;

pub use exact::{measure_exact, measure_exact_with, trace_paths};
pub use oracle::{brute_force_oracle, ORACLE_CAP};
pub use sampled::{measure_sampled, measure_sampled_with};

/// Default limit on device size for exhaustive enumeration.
pub const DEFAULT_EXACT_CAP: usize = 8;

/// Hard limit on device size; labels are tracked in a 64-bit set.
pub const MAX_DEVICE_STATES: usize = 64;

/// Labelled measurement states of one device.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementDevice<T> {
    states: Vec<(String, StateVector<T>)>,
}

impl<T: Real> MeasurementDevice<T> {
    pub fn new(states: Vec<(String, StateVector<T>)>) -> Result<Self> {
        let dim = states.first().ok_or(Error::EmptyDevice)?.1.dim();
        if states.len() > MAX_DEVICE_STATES {
            return Err(Error::DeviceTooLarge {
                size: states.len(),
                max: MAX_DEVICE_STATES,
            });
        }
        let mut seen = BTreeSet::new();
        for (label, state) in &states {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
            if state.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: state.dim(),
                });
            }
        }
        Ok(Self { states })
    }

    pub fn dim(&self) -> usize {
        self.states[0].1.dim()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.states.iter().map(|(l, _)| l.clone()).collect()
    }

    pub fn states(&self) -> &[(String, StateVector<T>)] {
        &self.states
    }

    pub fn state(&self, label: &str) -> Option<&StateVector<T>> {
        self.states.iter().find(|(l, _)| l == label).map(|(_, s)| s)
    }

    /// Device with the same states listed in a different order.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        Self::new(order.iter().map(|&i| self.states[i].clone()).collect())
    }

    /// Device indices sorted by label.
    pub(crate) fn lexicographic_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.states[a].0.cmp(&self.states[b].0));
        order
    }
}

/// The two forks of one measurement step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Affirmative,
    Null,
}

/// One root-to-leaf path of the measurement tree.
#[derive(Debug, Clone, PartialEq)]
pub struct PathRecord<T> {
    pub permutation: Vec<String>,
    pub decisions: Vec<Decision>,
    /// Product of branch probabilities, including the `1/n!` ordering weight.
    pub probability: T,
    pub final_state: StateVector<T>,
}

/// Aggregated leaf class: affirmative labels plus the final object state.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<T> {
    pub affirmative_labels: BTreeSet<String>,
    /// Phase-canonical representative.
    pub final_state: StateVector<T>,
    pub probability: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Sampled,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Sampled => f.write_str("sample"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionMetadata {
    pub device_size: usize,
    pub dimension: usize,
    /// Device labels in device order.
    pub labels: Vec<String>,
    pub mode: Mode,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
}

/// All outcomes of one measurement, sorted by descending probability.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution<T> {
    pub outcomes: Vec<Outcome<T>>,
    pub metadata: DistributionMetadata,
}

impl<T: Real> OutcomeDistribution<T> {
    pub fn total_probability(&self) -> T {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    pub fn marginal_probability(&self, label: &str) -> Result<T> {
        marginal_probability(self, label)
    }

    /// Outcome with exactly `labels` affirmative whose final state matches
    /// `state` up to phase.
    pub fn find(&self, labels: &[&str], state: &StateVector<T>) -> Option<&Outcome<T>> {
        let wanted: BTreeSet<String> = labels.iter().map(|s| s.to_string()).collect();
        self.outcomes.iter().find(|o| {
            o.affirmative_labels == wanted
                && phase_equal(&o.final_state, state, T::aggregation_tolerance()).unwrap_or(false)
        })
    }

    /// Total probability of outcomes with exactly `labels` affirmative.
    pub fn probability_of_labels(&self, labels: &[&str]) -> T {
        let wanted: BTreeSet<String> = labels.iter().map(|s| s.to_string()).collect();
        self.outcomes
            .iter()
            .filter(|o| o.affirmative_labels == wanted)
            .map(|o| o.probability)
            .sum()
    }
}

/// Tunables shared by the exact and sampled engines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureOptions<T> {
    /// Largest device [`measure_exact_with`] will enumerate.
    pub exact_cap: usize,
    /// Forks at or below this probability are pruned.
    pub zero_tolerance: T,
    /// Fidelity slack when merging final states.
    pub aggregation_tolerance: T,
}

impl<T: Real> Default for MeasureOptions<T> {
    fn default() -> Self {
        Self {
            exact_cap: DEFAULT_EXACT_CAP,
            zero_tolerance: T::zero_tolerance(),
            aggregation_tolerance: T::aggregation_tolerance(),
        }
    }
}

/// Probability that `label` is among the affirmative results.
pub fn marginal_probability<T: Real>(dist: &OutcomeDistribution<T>, label: &str) -> Result<T> {
    if !dist.metadata.labels.iter().any(|l| l == label) {
        return Err(Error::UnknownLabel(label.to_string()));
    }
    Ok(dist
        .outcomes
        .iter()
        .filter(|o| o.affirmative_labels.contains(label))
        .map(|o| o.probability)
        .sum())
}

/// Pairs outcomes of `a` and `b` with equal label sets and phase-equal final
/// states; unmatched outcomes pair with probability zero.
fn matched_differences<T: Real>(
    a: &OutcomeDistribution<T>,
    b: &OutcomeDistribution<T>,
    tol: T,
) -> Vec<T> {
    let mut used = vec![false; b.outcomes.len()];
    let mut diffs = Vec::with_capacity(a.outcomes.len() + b.outcomes.len());
    for oa in &a.outcomes {
        let hit = b.outcomes.iter().enumerate().position(|(j, ob)| {
            !used[j]
                && ob.affirmative_labels == oa.affirmative_labels
                && phase_equal(&oa.final_state, &ob.final_state, tol).unwrap_or(false)
        });
        match hit {
            Some(j) => {
                used[j] = true;
                diffs.push((oa.probability - b.outcomes[j].probability).abs());
            }
            None => diffs.push(oa.probability),
        }
    }
    for (j, ob) in b.outcomes.iter().enumerate() {
        if !used[j] {
            diffs.push(ob.probability);
        }
    }
    diffs
}

/// Half the summed absolute probability differences over matched outcomes.
pub fn total_variation_distance<T: Real>(
    a: &OutcomeDistribution<T>,
    b: &OutcomeDistribution<T>,
) -> T {
    let sum: T = matched_differences(a, b, T::aggregation_tolerance())
        .into_iter()
        .sum();
    sum / T::lit(2.0)
}

/// Largest per-outcome probability difference over matched outcomes.
pub fn max_outcome_deviation<T: Real>(a: &OutcomeDistribution<T>, b: &OutcomeDistribution<T>) -> T {
    matched_differences(a, b, T::aggregation_tolerance())
        .into_iter()
        .fold(T::zero(), T::max)
}

/// Device of `count` Haar-random states labelled `a1 .. a{count}`, drawn
/// from one generator seeded with `seed`.
pub fn random_device<T: Real>(dim: usize, count: usize, seed: u64) -> Result<MeasurementDevice<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states = (1..=count)
        .map(|i| Ok((format!("a{i}"), random_state_with(dim, &mut rng)?)))
        .collect::<Result<Vec<_>>>()?;
    MeasurementDevice::new(states)
}

pub(crate) fn check_exact_capacity(size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::CapacityExceeded { size, cap })
    } else {
        Ok(())
    }
}

pub(crate) fn label_set(device_labels: &[String], mask: u64) -> BTreeSet<String> {
    device_labels
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1u64 << i) != 0)
        .map(|(_, l)| l.clone())
        .collect()
}
