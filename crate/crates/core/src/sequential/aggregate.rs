use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_complex::Complex;

use super::{label_set, Outcome};
use crate::hilbert::{dot, StateVector};
use crate::scalar::Real;

/// Leaves that are bitwise the same path class: same affirmative set and
/// same trailing sequence of null steps after the last affirmative one.
pub(crate) struct LeafClass<T> {
    pub mask: u64,
    pub key: Vec<u8>,
    pub weight: T,
    pub state: Vec<Complex<T>>,
}

/// Merges leaf classes into outcomes keyed by (affirmative set, ray of the
/// final state) and sorts them for output.
///
/// Within one affirmative set, candidates are sorted by `|ψ_0|²`, which is
/// phase invariant and moves by at most `sqrt(tol)` between states of
/// fidelity `1 - tol`; only neighbours inside that window are compared.
pub(crate) fn aggregate<T: Real>(
    classes: Vec<LeafClass<T>>,
    labels: &[String],
    tol: T,
) -> Vec<Outcome<T>> {
    let mut by_mask: BTreeMap<u64, Vec<LeafClass<T>>> = BTreeMap::new();
    for c in classes {
        by_mask.entry(c.mask).or_default().push(c);
    }
    let window = T::lit(2.0) * tol.sqrt() + T::epsilon();
    let mut outcomes = Vec::new();
    for (mask, mut group) in by_mask {
        let sort_key = |c: &LeafClass<T>| c.state[0].norm_sqr();
        group.sort_by(|a, b| {
            sort_key(a)
                .partial_cmp(&sort_key(b))
                .unwrap_or(Ordering::Equal)
                .then_with(|| a.key.cmp(&b.key))
        });
        // (anchor key, representative state, weight)
        let mut clusters: Vec<(T, Vec<Complex<T>>, T)> = Vec::new();
        for c in group {
            let k = sort_key(&c);
            let hit = clusters
                .iter_mut()
                .rev()
                .take_while(|(anchor, _, _)| *anchor >= k - window)
                .find(|(_, rep, _)| dot(rep, &c.state).norm_sqr() >= T::one() - tol);
            match hit {
                Some((_, _, w)) => *w += c.weight,
                None => clusters.push((k, c.state, c.weight)),
            }
        }
        let affirmative = label_set(labels, mask);
        for (_, state, weight) in clusters {
            outcomes.push(Outcome {
                affirmative_labels: affirmative.clone(),
                final_state: StateVector::normalize(state)
                    .expect("leaf states are normalized")
                    .canonical(),
                probability: weight,
            });
        }
    }
    sort_outcomes(&mut outcomes);
    outcomes
}

/// Descending probability, then label set, then amplitudes.
pub(crate) fn sort_outcomes<T: Real>(outcomes: &mut [Outcome<T>]) {
    outcomes.sort_by(|a, b| {
        b.probability
            .partial_cmp(&a.probability)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.affirmative_labels.cmp(&b.affirmative_labels))
            .then_with(|| {
                compare_amplitudes(a.final_state.amplitudes(), b.final_state.amplitudes())
            })
    });
}

fn compare_amplitudes<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            x.re.partial_cmp(&y.re)
                .unwrap_or(Ordering::Equal)
                .then(x.im.partial_cmp(&y.im).unwrap_or(Ordering::Equal))
        })
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}
