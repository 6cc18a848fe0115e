use std::collections::HashMap;

use num_complex::Complex;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::aggregate::{aggregate, LeafClass};
use super::{DistributionMetadata, MeasureOptions, MeasurementDevice, Mode, OutcomeDistribution};
use crate::error::{Error, Result};
use crate::hilbert::{canonicalize, check_dims, dot, StateVector};
use crate::scalar::Real;

/// Samples per independent generator stream. Fixed so results do not depend
/// on how many worker threads run.
const CHUNK: u64 = 1 << 14;

/// Monte Carlo realization of the measurement tree: each sample draws a
/// uniform ordering, then follows one fork per step with its branch
/// probability.
pub fn measure_sampled<T: Real>(
    psi: &StateVector<T>,
    device: &MeasurementDevice<T>,
    samples: u64,
    seed: u64,
) -> Result<OutcomeDistribution<T>> {
    measure_sampled_with(psi, device, samples, seed, &MeasureOptions::default())
}

pub fn measure_sampled_with<T: Real>(
    psi: &StateVector<T>,
    device: &MeasurementDevice<T>,
    samples: u64,
    seed: u64,
    options: &MeasureOptions<T>,
) -> Result<OutcomeDistribution<T>> {
    check_dims(device.dim(), psi.dim())?;
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let states: Vec<Vec<Complex<T>>> = device
        .states()
        .iter()
        .map(|(_, s)| s.amplitudes().to_vec())
        .collect();
    let chunks = samples.div_ceil(CHUNK);
    let partials: Vec<Tally<T>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let count = CHUNK.min(samples - chunk * CHUNK);
            sample_chunk(
                &states,
                psi.amplitudes(),
                count,
                options.zero_tolerance,
                &mut rng,
            )
        })
        .collect();

    let mut merged: Tally<T> = HashMap::new();
    for part in partials {
        for (key, (mask, count, state)) in part {
            merged
                .entry(key)
                .and_modify(|e| e.1 += count)
                .or_insert((mask, count, state));
        }
    }
    let total = T::from_count(samples);
    let classes = merged
        .into_iter()
        .map(|(key, (mask, count, state))| LeafClass {
            mask,
            key,
            weight: T::from_count(count) / total,
            state,
        })
        .collect();

    let labels = device.labels();
    Ok(OutcomeDistribution {
        outcomes: aggregate(classes, &labels, options.aggregation_tolerance),
        metadata: DistributionMetadata {
            device_size: device.len(),
            dimension: device.dim(),
            labels,
            mode: Mode::Sampled,
            samples: Some(samples),
            seed: Some(seed),
        },
    })
}

/// Class key to (affirmed mask, hit count, representative state).
type Tally<T> = HashMap<Vec<u8>, (u64, u64, Vec<Complex<T>>)>;

fn sample_chunk<T: Real>(
    states: &[Vec<Complex<T>>],
    psi: &[Complex<T>],
    count: u64,
    zero_tolerance: T,
    rng: &mut ChaCha8Rng,
) -> Tally<T> {
    let n = states.len();
    let mut classes: Tally<T> = HashMap::new();
    let mut order: Vec<usize> = (0..n).collect();
    let mut current = psi.to_vec();
    let mut key = Vec::with_capacity(n + 9);
    for _ in 0..count {
        order.shuffle(rng);
        current.copy_from_slice(psi);
        let mut affirmed = 0u64;
        let mut last: Option<usize> = None;
        for (step, &idx) in order.iter().enumerate() {
            let a = &states[idx];
            let overlap = dot(a, &current);
            let p_affirm = overlap.norm_sqr();
            let p_null = T::one() - p_affirm;
            let affirm = if p_affirm <= zero_tolerance {
                false
            } else if p_null <= zero_tolerance {
                true
            } else {
                T::sample_unit(rng) < p_affirm
            };
            if affirm {
                current.copy_from_slice(a);
                affirmed |= 1u64 << idx;
                last = Some(step);
            } else {
                for (c, x) in current.iter_mut().zip(a) {
                    *c -= x * overlap;
                }
                let norm = current.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt();
                for c in current.iter_mut() {
                    *c /= norm;
                }
            }
        }
        key.clear();
        key.extend_from_slice(&affirmed.to_le_bytes());
        let tail = match last {
            Some(s) => {
                key.push(order[s] as u8);
                s + 1
            }
            None => {
                key.push(u8::MAX);
                0
            }
        };
        key.extend(order[tail..].iter().map(|&i| i as u8));
        if let Some(entry) = classes.get_mut(key.as_slice()) {
            entry.1 += 1;
        } else {
            classes.insert(key.clone(), (affirmed, 1, canonicalize(current.clone())));
        }
    }
    classes
}
