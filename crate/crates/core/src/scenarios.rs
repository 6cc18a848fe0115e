//! Ready-made measurement setups and multi-stage measurement chains.
//!
//! The five built-in examples all start from `ψ = (√3/2, 1/2)` in a real
//! plane:
//!
//! | id  | device                                                   |
//! |-----|----------------------------------------------------------|
//! | 3.1 | `a1 = x`, `a2 = y` (orthogonal)                          |
//! | 3.2 | 3.1 plus `a3 = y` (repeated state)                       |
//! | 3.3 | `a1 = x`, `a2 = y` tilted by 10° toward `x`              |
//! | 3.4 | 3.3 plus `a3 = y` tilted by 20°                          |
//! | 3.5 | Haar-random states from a seeded generator               |

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hilbert::{check_dims, evolve_unitary, HermitianOperator, StateVector};
use crate::scalar::Real;
use crate::sequential::{
    measure_exact_with, measure_sampled_with, random_device, MeasureOptions, MeasurementDevice,
    Mode, Outcome, OutcomeDistribution,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExampleId {
    Orthogonal,
    RepeatedOrthogonal,
    Nonorthogonal,
    RepeatedNonorthogonal,
    Random,
}

impl ExampleId {
    pub const ALL: [ExampleId; 5] = [
        ExampleId::Orthogonal,
        ExampleId::RepeatedOrthogonal,
        ExampleId::Nonorthogonal,
        ExampleId::RepeatedNonorthogonal,
        ExampleId::Random,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExampleId::Orthogonal => "3.1",
            ExampleId::RepeatedOrthogonal => "3.2",
            ExampleId::Nonorthogonal => "3.3",
            ExampleId::RepeatedNonorthogonal => "3.4",
            ExampleId::Random => "3.5",
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExampleId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

/// Knobs for the built-in examples. Angles are in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExampleParams<T> {
    /// Tilt of `a2` away from `y` in 3.3 and 3.4; positive tilts toward `x`.
    pub a2_tilt_deg: T,
    /// Tilt of `a3` away from `y` in 3.4.
    pub a3_tilt_deg: T,
    /// Number of random states in 3.5.
    pub random_count: usize,
    /// Hilbert-space dimension of the random states in 3.5.
    pub random_dim: usize,
    /// Seed for 3.5's states.
    pub seed: u64,
}

impl<T: Real> Default for ExampleParams<T> {
    fn default() -> Self {
        Self {
            a2_tilt_deg: T::lit(10.0),
            a3_tilt_deg: T::lit(20.0),
            random_count: 5,
            random_dim: 2,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioOptions<T> {
    pub mode: Mode,
    pub samples: u64,
    pub seed: u64,
    pub measure: MeasureOptions<T>,
}

impl<T: Real> Default for ScenarioOptions<T> {
    fn default() -> Self {
        Self {
            mode: Mode::Exact,
            samples: 1_000_000,
            seed: 0,
            measure: MeasureOptions::default(),
        }
    }
}

/// An initial state, a device, and how to measure one with the other.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<T> {
    pub name: String,
    pub initial_state: StateVector<T>,
    pub device: MeasurementDevice<T>,
    pub options: ScenarioOptions<T>,
}

impl<T: Real> Scenario<T> {
    pub fn new(
        name: impl Into<String>,
        initial_state: StateVector<T>,
        device: MeasurementDevice<T>,
        options: ScenarioOptions<T>,
    ) -> Result<Self> {
        check_dims(device.dim(), initial_state.dim())?;
        Ok(Self {
            name: name.into(),
            initial_state,
            device,
            options,
        })
    }

    /// Measures with the configured mode.
    pub fn run(&self) -> Result<OutcomeDistribution<T>> {
        match self.options.mode {
            Mode::Exact => {
                measure_exact_with(&self.initial_state, &self.device, &self.options.measure)
            }
            Mode::Sampled => measure_sampled_with(
                &self.initial_state,
                &self.device,
                self.options.samples,
                self.options.seed,
                &self.options.measure,
            ),
        }
    }
}

/// `(√3/2, 1/2)`, the initial state shared by the examples.
pub fn example_initial_state<T: Real>() -> StateVector<T> {
    let half = T::lit(0.5);
    StateVector::from_real(&[T::lit(3.0).sqrt() * half, half]).expect("unit vector")
}

/// Real plane rotation; positive angles turn `+y` toward `+x` (clockwise).
pub fn rotate_2d<T: Real>(v: &StateVector<T>, degrees: T) -> Result<StateVector<T>> {
    if v.dim() != 2 || !v.is_real(T::zero()) {
        return Err(Error::NotRealPlanar);
    }
    let (s, c) = degrees.to_radians().sin_cos();
    let x = v.amplitudes()[0].re;
    let y = v.amplitudes()[1].re;
    StateVector::normalize(vec![
        Complex::new(c * x + s * y, T::zero()),
        Complex::new(-s * x + c * y, T::zero()),
    ])
}

pub fn build_example<T: Real>(id: ExampleId, params: &ExampleParams<T>) -> Result<Scenario<T>> {
    let x = StateVector::basis(2, 0)?;
    let y = StateVector::basis(2, 1)?;
    let named = |pairs: Vec<(&str, StateVector<T>)>| {
        MeasurementDevice::new(pairs.into_iter().map(|(l, s)| (l.to_string(), s)).collect())
    };
    let (psi, device) = match id {
        ExampleId::Orthogonal => (example_initial_state(), named(vec![("a1", x), ("a2", y)])?),
        ExampleId::RepeatedOrthogonal => (
            example_initial_state(),
            named(vec![("a1", x), ("a2", y.clone()), ("a3", y)])?,
        ),
        ExampleId::Nonorthogonal => (
            example_initial_state(),
            named(vec![("a1", x), ("a2", rotate_2d(&y, params.a2_tilt_deg)?)])?,
        ),
        ExampleId::RepeatedNonorthogonal => (
            example_initial_state(),
            named(vec![
                ("a1", x),
                ("a2", rotate_2d(&y, params.a2_tilt_deg)?),
                ("a3", rotate_2d(&y, params.a3_tilt_deg)?),
            ])?,
        ),
        ExampleId::Random => {
            let psi = if params.random_dim == 2 {
                example_initial_state()
            } else {
                StateVector::basis(params.random_dim, 0)?
            };
            (
                psi,
                random_device(params.random_dim, params.random_count, params.seed)?,
            )
        }
    };
    Scenario::new(
        format!("example-{id}"),
        psi,
        device,
        ScenarioOptions {
            seed: params.seed,
            ..ScenarioOptions::default()
        },
    )
}

/// Evolution applied to the object before a stage is measured.
#[derive(Debug, Clone, PartialEq)]
pub struct Evolution<T> {
    pub hamiltonian: HermitianOperator<T>,
    pub time: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainStage<T> {
    pub device: MeasurementDevice<T>,
    pub evolution_before: Option<Evolution<T>>,
}

impl<T: Real> ChainStage<T> {
    pub fn new(device: MeasurementDevice<T>) -> Self {
        Self {
            device,
            evolution_before: None,
        }
    }

    pub fn after_evolution(mut self, hamiltonian: HermitianOperator<T>, time: T) -> Self {
        self.evolution_before = Some(Evolution { hamiltonian, time });
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainMode {
    /// Follow one randomly drawn outcome per stage.
    Sampled { seed: u64 },
    /// Follow every outcome of every stage.
    Enumerated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainStep<T> {
    /// Object state entering the stage, after any evolution.
    pub input_state: StateVector<T>,
    pub distribution: OutcomeDistribution<T>,
    /// Index into `distribution.outcomes` of the outcome followed.
    pub selected: usize,
}

impl<T: Real> ChainStep<T> {
    pub fn outcome(&self) -> &Outcome<T> {
        &self.distribution.outcomes[self.selected]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainBranch<T> {
    /// Product of the followed outcomes' probabilities.
    pub probability: T,
    pub steps: Vec<ChainStep<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainTrace<T> {
    pub branches: Vec<ChainBranch<T>>,
}

impl<T: Real> ChainTrace<T> {
    /// Probability that `label` is affirmative at stage `stage`.
    pub fn stage_marginal(&self, stage: usize, label: &str) -> T {
        self.branches
            .iter()
            .filter(|b| b.steps[stage].outcome().affirmative_labels.contains(label))
            .map(|b| b.probability)
            .sum()
    }

    pub fn total_probability(&self) -> T {
        self.branches.iter().map(|b| b.probability).sum()
    }
}

/// Runs measurement devices in succession, each acting on the state the
/// previous stage left behind.
pub fn chain_run<T: Real>(
    psi: &StateVector<T>,
    stages: &[ChainStage<T>],
    mode: ChainMode,
) -> Result<ChainTrace<T>> {
    for stage in stages {
        check_dims(psi.dim(), stage.device.dim())?;
        if let Some(e) = &stage.evolution_before {
            check_dims(psi.dim(), e.hamiltonian.dim())?;
        }
    }
    let options = MeasureOptions::default();
    let measure_stage = |stage: &ChainStage<T>, state: &StateVector<T>| -> Result<_> {
        let input = match &stage.evolution_before {
            Some(e) => evolve_unitary(state, &e.hamiltonian, e.time)?,
            None => state.clone(),
        };
        let dist = measure_exact_with(&input, &stage.device, &options)?;
        Ok((input, dist))
    };

    match mode {
        ChainMode::Sampled { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut state = psi.clone();
            let mut steps = Vec::with_capacity(stages.len());
            let mut probability = T::one();
            for stage in stages {
                let (input, distribution) = measure_stage(stage, &state)?;
                let u = T::sample_unit(&mut rng);
                let mut acc = T::zero();
                let mut selected = distribution.outcomes.len() - 1;
                for (i, o) in distribution.outcomes.iter().enumerate() {
                    acc += o.probability;
                    if u < acc {
                        selected = i;
                        break;
                    }
                }
                probability *= distribution.outcomes[selected].probability;
                state = distribution.outcomes[selected].final_state.clone();
                steps.push(ChainStep {
                    input_state: input,
                    distribution,
                    selected,
                });
            }
            Ok(ChainTrace {
                branches: vec![ChainBranch { probability, steps }],
            })
        }
        ChainMode::Enumerated => {
            let mut branches = Vec::new();
            let mut prefix = Vec::with_capacity(stages.len());
            enumerate_chain(
                psi,
                stages,
                T::one(),
                &mut prefix,
                &mut branches,
                &measure_stage,
            )?;
            Ok(ChainTrace { branches })
        }
    }
}

type StageFn<'a, T> = dyn Fn(&ChainStage<T>, &StateVector<T>) -> Result<(StateVector<T>, OutcomeDistribution<T>)>
    + 'a;

fn enumerate_chain<T: Real>(
    state: &StateVector<T>,
    stages: &[ChainStage<T>],
    probability: T,
    prefix: &mut Vec<ChainStep<T>>,
    out: &mut Vec<ChainBranch<T>>,
    measure_stage: &StageFn<'_, T>,
) -> Result<()> {
    let Some((stage, rest)) = stages.split_first() else {
        out.push(ChainBranch {
            probability,
            steps: prefix.clone(),
        });
        return Ok(());
    };
    let (input, distribution) = measure_stage(stage, state)?;
    for selected in 0..distribution.outcomes.len() {
        let outcome = &distribution.outcomes[selected];
        let next = outcome.final_state.clone();
        let p = probability * outcome.probability;
        prefix.push(ChainStep {
            input_state: input.clone(),
            distribution: distribution.clone(),
            selected,
        });
        enumerate_chain(&next, rest, p, prefix, out, measure_stage)?;
        prefix.pop();
    }
    Ok(())
}
