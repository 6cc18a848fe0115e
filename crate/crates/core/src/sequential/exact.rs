use std::collections::HashMap;

use num_complex::Complex;
use rayon::prelude::*;

use super::aggregate::{aggregate, LeafClass};
use super::{
    check_exact_capacity, Decision, DistributionMetadata, MeasureOptions, MeasurementDevice, Mode,
    OutcomeDistribution, PathRecord,
};
use crate::error::Result;
use crate::hilbert::{canonicalize, check_dims, dot, StateVector};
use crate::scalar::Real;

const NO_AFFIRMATIVE: u8 = u8::MAX;

/// Enumerates every ordering and every fork with default options.
pub fn measure_exact<T: Real>(
    psi: &StateVector<T>,
    device: &MeasurementDevice<T>,
) -> Result<OutcomeDistribution<T>> {
    measure_exact_with(psi, device, &MeasureOptions::default())
}

pub fn measure_exact_with<T: Real>(
    psi: &StateVector<T>,
    device: &MeasurementDevice<T>,
    options: &MeasureOptions<T>,
) -> Result<OutcomeDistribution<T>> {
    check_dims(device.dim(), psi.dim())?;
    let n = device.len();
    check_exact_capacity(n, options.exact_cap)?;

    let states: Vec<Vec<Complex<T>>> = device
        .states()
        .iter()
        .map(|(_, s)| s.amplitudes().to_vec())
        .collect();
    let order = device.lexicographic_order();
    let weight = T::one() / factorial::<T>(n);

    // Subtrees rooted at different first states are independent; the merge
    // below walks them in a fixed order so the sums do not depend on the
    // thread count.
    let partials: Vec<HashMap<Vec<u8>, ClassAcc<T>>> = order
        .par_iter()
        .map(|&first| {
            let mut walker = Walker::new(&states, &order, psi.amplitudes(), options.zero_tolerance);
            walker.branch(0, first, 0, 0, None, weight);
            walker.classes
        })
        .collect();

    let mut merged: HashMap<Vec<u8>, ClassAcc<T>> = HashMap::new();
    for part in partials {
        for (key, acc) in part {
            match merged.get_mut(&key) {
                Some(m) => m.weight += acc.weight,
                None => {
                    merged.insert(key, acc);
                }
            }
        }
    }
    let classes = merged
        .into_iter()
        .map(|(key, acc)| LeafClass {
            mask: acc.mask,
            key,
            weight: acc.weight,
            state: acc.state,
        })
        .collect();

    let labels = device.labels();
    Ok(OutcomeDistribution {
        outcomes: aggregate(classes, &labels, options.aggregation_tolerance),
        metadata: DistributionMetadata {
            device_size: n,
            dimension: device.dim(),
            labels,
            mode: Mode::Exact,
            samples: None,
            seed: None,
        },
    })
}

pub(crate) fn factorial<T: Real>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, k| acc * T::from_count(k as u64))
}

struct ClassAcc<T> {
    mask: u64,
    weight: T,
    state: Vec<Complex<T>>,
}

/// Depth-first walk over (ordering prefix, fork decisions).
struct Walker<'a, T> {
    states: &'a [Vec<Complex<T>>],
    order: &'a [usize],
    n: usize,
    zero_tolerance: T,
    /// `levels[k]` is the object state after `k` steps.
    levels: Vec<Vec<Complex<T>>>,
    path: Vec<u8>,
    key: Vec<u8>,
    classes: HashMap<Vec<u8>, ClassAcc<T>>,
}

impl<'a, T: Real> Walker<'a, T> {
    fn new(
        states: &'a [Vec<Complex<T>>],
        order: &'a [usize],
        psi: &[Complex<T>],
        zero_tolerance: T,
    ) -> Self {
        let n = states.len();
        let mut levels = vec![psi.to_vec(); n + 1];
        levels[0].copy_from_slice(psi);
        Self {
            states,
            order,
            n,
            zero_tolerance,
            levels,
            path: vec![0; n],
            key: Vec::with_capacity(n + 9),
            classes: HashMap::new(),
        }
    }

    fn descend(&mut self, depth: usize, used: u64, affirmed: u64, last: Option<usize>, weight: T) {
        if depth == self.n {
            self.record(affirmed, last, weight);
            return;
        }
        let order = self.order;
        for &idx in order {
            if used & (1u64 << idx) == 0 {
                self.branch(depth, idx, used, affirmed, last, weight);
            }
        }
    }

    /// Measures the state at `depth` with device state `idx` and follows
    /// both forks.
    fn branch(
        &mut self,
        depth: usize,
        idx: usize,
        used: u64,
        affirmed: u64,
        last: Option<usize>,
        weight: T,
    ) {
        let a = &self.states[idx];
        let bit = 1u64 << idx;
        self.path[depth] = idx as u8;
        let (head, tail) = self.levels.split_at_mut(depth + 1);
        let current = &head[depth];
        let next = &mut tail[0];
        let overlap = dot(a, current);
        let p_affirm = overlap.norm_sqr();
        let p_null = T::one() - p_affirm;

        if p_null > self.zero_tolerance {
            for ((out, c), x) in next.iter_mut().zip(current).zip(a) {
                *out = c - x * overlap;
            }
            let norm = next.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt();
            for out in next.iter_mut() {
                *out /= norm;
            }
            self.descend(depth + 1, used | bit, affirmed, last, weight * p_null);
        }
        if p_affirm > self.zero_tolerance {
            self.levels[depth + 1].copy_from_slice(&self.states[idx]);
            self.descend(
                depth + 1,
                used | bit,
                affirmed | bit,
                Some(depth),
                weight * p_affirm,
            );
        }
    }

    fn record(&mut self, affirmed: u64, last: Option<usize>, weight: T) {
        self.key.clear();
        self.key.extend_from_slice(&affirmed.to_le_bytes());
        let tail_start = match last {
            Some(d) => {
                self.key.push(self.path[d]);
                d + 1
            }
            None => {
                self.key.push(NO_AFFIRMATIVE);
                0
            }
        };
        self.key.extend_from_slice(&self.path[tail_start..self.n]);
        if let Some(acc) = self.classes.get_mut(self.key.as_slice()) {
            acc.weight += weight;
        } else {
            self.classes.insert(
                self.key.clone(),
                ClassAcc {
                    mask: affirmed,
                    weight,
                    state: canonicalize(self.levels[self.n].clone()),
                },
            );
        }
    }
}

/// Every surviving root-to-leaf path, orderings in lexicographic label order
/// and the null fork before the affirmative one.
pub fn trace_paths<T: Real>(
    psi: &StateVector<T>,
    device: &MeasurementDevice<T>,
) -> Result<Vec<PathRecord<T>>> {
    check_dims(device.dim(), psi.dim())?;
    let n = device.len();
    check_exact_capacity(n, super::DEFAULT_EXACT_CAP)?;
    let order = device.lexicographic_order();
    let mut out = Vec::new();
    let mut perm = Vec::with_capacity(n);
    let mut decisions = Vec::with_capacity(n);
    trace(
        device,
        &order,
        psi,
        T::one() / factorial::<T>(n),
        &mut perm,
        &mut decisions,
        &mut out,
    );
    Ok(out)
}

fn trace<T: Real>(
    device: &MeasurementDevice<T>,
    order: &[usize],
    current: &StateVector<T>,
    weight: T,
    perm: &mut Vec<usize>,
    decisions: &mut Vec<Decision>,
    out: &mut Vec<PathRecord<T>>,
) {
    if perm.len() == device.len() {
        out.push(PathRecord {
            permutation: perm.iter().map(|&i| device.states()[i].0.clone()).collect(),
            decisions: decisions.clone(),
            probability: weight,
            final_state: current.canonical(),
        });
        return;
    }
    for &idx in order {
        if perm.contains(&idx) {
            continue;
        }
        let a = &device.states()[idx].1;
        let forks = [
            (Decision::Null, crate::hilbert::project_null(current, a)),
            (
                Decision::Affirmative,
                crate::hilbert::project_affirmative(current, a),
            ),
        ];
        for (decision, projection) in forks {
            let Ok(projection) = projection else { continue };
            let Some(next) = projection.collapsed else {
                continue;
            };
            perm.push(idx);
            decisions.push(decision);
            trace(
                device,
                order,
                &next,
                weight * projection.probability,
                perm,
                decisions,
                out,
            );
            perm.pop();
            decisions.pop();
        }
    }
}
