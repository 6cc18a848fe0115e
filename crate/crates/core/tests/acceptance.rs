//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test -p seqmeas-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use seqmeas_core::hilbert::random_orthonormal_basis;
use seqmeas_core::sequential::{max_outcome_deviation, random_device};
use seqmeas_core::{
    born_distribution, brute_force_oracle, build_example, collapse_projective, imprecise_collapse,
    imprecise_distribution, marginal_probability, measure_exact, measure_sampled, phase_equal,
    random_state, total_variation_distance, Error, ExampleId, ExampleParams,
    OrthonormalBasisMeasurement, OutcomeDistribution, ResolutionMatrix, StateVector,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn example(id: ExampleId) -> (StateVector, OutcomeDistribution) {
    let s = build_example(id, &ExampleParams::default()).expect("example builds");
    let dist = measure_exact(&s.initial_state, &s.device).expect("example measures");
    (s.initial_state, dist)
}

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

fn headline() -> Check {
    let s = build_example(ExampleId::Nonorthogonal, &ExampleParams::default()).unwrap();
    // first call starts the worker pool
    measure_exact(&s.initial_state, &s.device).unwrap();
    let mut times = Vec::new();
    let mut dist = None;
    for _ in 0..21 {
        let start = Instant::now();
        dist = Some(measure_exact(&s.initial_state, &s.device).map_err(|e| e.to_string())?);
        times.push(start.elapsed());
    }
    times.sort();
    let median = times[times.len() / 2];
    let dist = dist.unwrap();
    let a2 = s.device.state("a2").unwrap();
    let perp = StateVector::from_real(&[a2.amplitudes()[1].re, -a2.amplitudes()[0].re]).unwrap();
    let p = dist
        .find(&["a1"], &perp)
        .map(|o| o.probability)
        .ok_or("no outcome ({a1}, final state orthogonal to a2)")?;
    ensure((p - 0.36369).abs() <= 5e-5, || format!("probability {p}"))?;
    within(median, Duration::from_millis(1))?;
    Ok(format!("P = {p:.6}, median runtime {median:?}"))
}

fn born_reduction() -> Check {
    let (psi, dist) = example(ExampleId::Orthogonal);
    ensure(dist.outcomes.len() == 2, || {
        format!("{} outcomes", dist.outcomes.len())
    })?;
    let basis = OrthonormalBasisMeasurement::standard(vec![1.0, 2.0]).unwrap();
    let born = born_distribution(&psi, &basis).unwrap();
    for (label, value, expected) in [("a1", 1.0, 0.75), ("a2", 2.0, 0.25)] {
        let p = dist.probability_of_labels(&[label]);
        let b = born.get(value).unwrap();
        ensure(
            (p - expected).abs() <= 1e-12 && (p - b).abs() <= 1e-12,
            || format!("{label}: sequential {p}, Born {b}"),
        )?;
    }
    Ok("two outcomes, 0.75 / 0.25, equal to Born".into())
}

fn duplicates() -> Check {
    let (_, single) = example(ExampleId::Orthogonal);
    let (_, repeated) = example(ExampleId::RepeatedOrthogonal);
    for (label, reference) in [("a1", "a1"), ("a2", "a2"), ("a3", "a2")] {
        let p = marginal_probability(&repeated, label).unwrap();
        let q = marginal_probability(&single, reference).unwrap();
        ensure((p - q).abs() <= 1e-12, || {
            format!("marginal {label}: {p} vs {q}")
        })?;
    }
    for o in &repeated.outcomes {
        let a2 = o.affirmative_labels.contains("a2");
        let a3 = o.affirmative_labels.contains("a3");
        ensure(a2 == a3, || {
            format!("outcome {:?} splits the duplicates", o.affirmative_labels)
        })?;
    }
    Ok("marginals unchanged, a2 and a3 only affirmed together".into())
}

fn orthogonal_suite() -> Check {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for trial in 0..1000u64 {
        let dim = 1 + (trial % 5) as usize;
        let states = random_orthonormal_basis::<f64>(dim, 10_000 + trial).unwrap();
        let psi = random_state::<f64>(dim, 20_000 + trial).unwrap();
        let device = seqmeas_core::MeasurementDevice::new(
            states
                .iter()
                .enumerate()
                .map(|(i, s)| (format!("e{i}"), s.clone()))
                .collect(),
        )
        .unwrap();
        let dist = measure_exact(&psi, &device).unwrap();
        let values: Vec<f64> = (0..dim).map(|i| i as f64).collect();
        let basis = OrthonormalBasisMeasurement::new(states, values).unwrap();
        let born = born_distribution(&psi, &basis).unwrap();
        for i in 0..dim {
            let p = marginal_probability(&dist, &format!("e{i}")).unwrap();
            let b = born.get(i as f64).unwrap();
            worst = worst.max((p - b).abs());
        }
        ensure(
            dist.outcomes
                .iter()
                .all(|o| o.affirmative_labels.len() <= 1),
            || format!("trial {trial}: multi-affirmative outcome"),
        )?;
    }
    ensure(worst <= 1e-10, || {
        format!("max marginal deviation {worst:e}")
    })?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("max deviation {worst:.1e}, {elapsed:?}"))
}

fn normalization_suite() -> Check {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for trial in 0..1000u64 {
        let dim = 1 + (trial % 4) as usize;
        let count = 1 + ((trial / 4) % 6) as usize;
        let device = random_device::<f64>(dim, count, 30_000 + trial).unwrap();
        let psi = random_state::<f64>(dim, 40_000 + trial).unwrap();
        let dist = measure_exact(&psi, &device).unwrap();
        worst = worst.max((dist.total_probability() - 1.0).abs());
    }
    ensure(worst <= 1e-9, || format!("max |sum - 1| = {worst:e}"))?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!("max |sum - 1| = {worst:.1e}, {elapsed:?}"))
}

fn oracle_equivalence() -> Check {
    let mut worst = 0.0f64;
    let mut compare = |name: &str, psi: &StateVector, device: &seqmeas_core::MeasurementDevice| {
        let engine = measure_exact(psi, device).map_err(|e| e.to_string())?;
        let oracle = brute_force_oracle(psi, device).map_err(|e| e.to_string())?;
        let d = max_outcome_deviation(&engine, &oracle);
        worst = worst.max(d);
        ensure(d <= 1e-9, || format!("{name}: deviation {d:e}"))
    };
    for id in ExampleId::ALL {
        let s = build_example(id, &ExampleParams::default()).unwrap();
        compare(&format!("example {id}"), &s.initial_state, &s.device)?;
    }
    for trial in 0..200u64 {
        let dim = 1 + (trial % 4) as usize;
        let count = 1 + ((trial / 4) % 5) as usize;
        let device = random_device::<f64>(dim, count, 50_000 + trial).unwrap();
        let psi = random_state::<f64>(dim, 60_000 + trial).unwrap();
        compare(&format!("random config {trial}"), &psi, &device)?;
    }
    Ok(format!(
        "5 examples + 200 random, max deviation {worst:.1e}"
    ))
}

fn monte_carlo() -> Check {
    let s = build_example(ExampleId::Nonorthogonal, &ExampleParams::default()).unwrap();
    let exact = measure_exact(&s.initial_state, &s.device).unwrap();
    let start = Instant::now();
    let sampled = measure_sampled(&s.initial_state, &s.device, 1_000_000, 2024).unwrap();
    let elapsed = start.elapsed();
    let again = measure_sampled(&s.initial_state, &s.device, 1_000_000, 2024).unwrap();
    ensure(sampled == again, || "repeat run differs".into())?;
    let tvd = total_variation_distance(&sampled, &exact);
    ensure(tvd < 0.005, || format!("TVD {tvd}"))?;
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!("TVD {tvd:.2e}, deterministic, {elapsed:?}"))
}

fn precise_limit() -> Check {
    let mut worst = 0.0f64;
    for trial in 0..500u64 {
        let dim = 1 + (trial % 5) as usize;
        let states = random_orthonormal_basis::<f64>(dim, 70_000 + trial).unwrap();
        let psi = random_state::<f64>(dim, 80_000 + trial).unwrap();
        let values: Vec<f64> = (0..dim).map(|i| 1.5 * i as f64 - 2.0).collect();
        let basis = OrthonormalBasisMeasurement::new(states, values.clone()).unwrap();
        let y = ResolutionMatrix::identity(values.clone()).unwrap();
        let born = born_distribution(&psi, &basis).unwrap();
        let fuzzy = imprecise_distribution(&psi, &basis, &y).unwrap();
        for &v in &values {
            let p = born.get(v).unwrap();
            worst = worst.max((p - fuzzy.get(v).unwrap()).abs());
            if p <= 1e-12 {
                continue;
            }
            let a = collapse_projective(&psi, &basis, v).unwrap();
            let b = imprecise_collapse(&psi, &basis, &y, v).unwrap();
            ensure(phase_equal(&a, &b, 1e-10).unwrap(), || {
                format!("trial {trial}: collapsed states differ for value {v}")
            })?;
        }
    }
    ensure(worst <= 1e-10, || {
        format!("max probability deviation {worst:e}")
    })?;
    Ok(format!("500 trials, max deviation {worst:.1e}"))
}

fn tilted_duplicates() -> Check {
    let (_, three) = example(ExampleId::Nonorthogonal);
    let (_, four) = example(ExampleId::RepeatedNonorthogonal);
    let m3 = marginal_probability(&three, "a1").unwrap();
    let m4 = marginal_probability(&four, "a1").unwrap();
    ensure((m3 - m4).abs() > 1e-6, || {
        format!("marginals {m3} and {m4}")
    })?;
    let split: f64 = four
        .outcomes
        .iter()
        .filter(|o| o.affirmative_labels.contains("a3") && !o.affirmative_labels.contains("a2"))
        .map(|o| o.probability)
        .sum();
    ensure(split > 0.0, || {
        "no outcome with a3 affirmative and a2 null".into()
    })?;
    Ok(format!(
        "P(a1) {m3:.6} -> {m4:.6}, P(a3 and not a2) = {split:.6}"
    ))
}

fn capacity() -> Check {
    let device = random_device::<f64>(4, 8, 90_000).unwrap();
    let psi = random_state::<f64>(4, 90_001).unwrap();
    let start = Instant::now();
    let dist = measure_exact(&psi, &device).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure((dist.total_probability() - 1.0).abs() <= 1e-9, || {
        format!("total probability {}", dist.total_probability())
    })?;
    within(elapsed, Duration::from_secs(60))?;
    let nine = random_device::<f64>(4, 9, 90_002).unwrap();
    match measure_exact(&psi, &nine) {
        Err(e @ Error::CapacityExceeded { size: 9, .. }) => {
            ensure(e.to_string().contains("sampled mode"), || {
                format!("message: {e}")
            })?
        }
        other => return Err(format!("n = 9 gave {other:?}")),
    }
    Ok(format!(
        "n = 8, d = 4: {} outcomes in {elapsed:?}; n = 9 refused",
        dist.outcomes.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("example 3.3 headline outcome", headline),
        ("example 3.1 reduces to Born", born_reduction),
        ("example 3.2 duplicate states", duplicates),
        ("orthogonal devices match Born", orthogonal_suite),
        ("nonorthogonal devices normalize", normalization_suite),
        ("engine matches brute-force oracle", oracle_equivalence),
        ("sampled mode converges", monte_carlo),
        ("imprecise precise limit", precise_limit),
        ("example 3.4 tilted duplicate", tilted_duplicates),
        ("exact-mode capacity", capacity),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
