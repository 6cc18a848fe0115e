//! Scenario configuration files.
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "initial_state": [[0.8660254037844386, 0], [0.5, 0]],
//!   "measurement_states": [
//!     {"label": "a1", "amplitudes": [[1, 0], [0, 0]]},
//!     {"label": "a2", "amplitudes": [[0, 0], [1, 0]]}
//!   ],
//!   "options": {"mode": "exact", "tolerance": 1e-12}
//! }
//! ```

use num_complex::Complex64;
use serde::Deserialize;

use seqmeas_core::sequential::{MeasureOptions, Mode};
use seqmeas_core::{
    Error, MeasurementDevice, OrthonormalBasisMeasurement, ResolutionMatrix, Scenario,
    ScenarioOptions, StateVector,
};

use crate::CliError;

pub const DEFAULT_SAMPLES: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub dimension: usize,
    pub initial_state: Vec<[f64; 2]>,
    #[serde(default)]
    pub measurement_states: Vec<StateConfig>,
    #[serde(default)]
    pub resolution_matrix: Option<ResolutionConfig>,
    #[serde(default)]
    pub options: OptionsConfig,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    pub label: String,
    pub amplitudes: Vec<[f64; 2]>,
}

/// Rows follow `reported_values`, columns follow `true_values`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionConfig {
    pub true_values: Vec<f64>,
    pub reported_values: Vec<f64>,
    pub amplitudes: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConfigMode {
    Exact,
    Sample,
}

impl From<ConfigMode> for Mode {
    fn from(mode: ConfigMode) -> Self {
        match mode {
            ConfigMode::Exact => Mode::Exact,
            ConfigMode::Sample => Mode::Sampled,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsConfig {
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_mode")]
    pub mode: ConfigMode,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
}

fn default_tolerance() -> f64 {
    1e-12
}

fn default_mode() -> ConfigMode {
    ConfigMode::Exact
}

impl Default for OptionsConfig {
    fn default() -> Self {
        Self {
            tolerance: default_tolerance(),
            mode: default_mode(),
            samples: None,
            seed: None,
        }
    }
}

/// Command-line settings that take precedence over the file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    /// Used when neither the flag nor the file gives a seed.
    pub fallback_seed: Option<u64>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            CliError::Config {
                field: if field == "." { "config".into() } else { field },
                message: e.into_inner().to_string(),
            }
        })?;
        config.check_options()?;
        Ok(config)
    }

    fn check_options(&self) -> Result<(), CliError> {
        let tol = self.options.tolerance;
        if !(tol.is_finite() && tol > 0.0 && tol < 1.0) {
            return Err(CliError::Config {
                field: "options.tolerance".into(),
                message: format!("expected a value in (0, 1), got {tol}"),
            });
        }
        if self.options.samples == Some(0) {
            return Err(CliError::Config {
                field: "options.samples".into(),
                message: "must be at least 1".into(),
            });
        }
        Ok(())
    }

    pub fn initial_state(&self, normalize: bool) -> Result<StateVector, CliError> {
        build_state(
            "initial_state",
            &self.initial_state,
            self.dimension,
            normalize,
        )
    }

    pub fn device(&self, normalize: bool) -> Result<MeasurementDevice, CliError> {
        let states = self
            .measurement_states
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let field = format!("measurement_states[{i}] ({})", s.label);
                Ok((
                    s.label.clone(),
                    build_state(&field, &s.amplitudes, self.dimension, normalize)?,
                ))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        MeasurementDevice::new(states).map_err(|e| CliError::domain("measurement_states", e))
    }

    pub fn scenario(&self, normalize: bool, overrides: &Overrides) -> Result<Scenario, CliError> {
        let options = ScenarioOptions {
            mode: overrides.mode.unwrap_or(self.options.mode.into()),
            samples: overrides
                .samples
                .or(self.options.samples)
                .unwrap_or(DEFAULT_SAMPLES),
            seed: overrides
                .seed
                .or(self.options.seed)
                .or(overrides.fallback_seed)
                .unwrap_or(0),
            measure: MeasureOptions {
                zero_tolerance: self.options.tolerance,
                ..MeasureOptions::default()
            },
        };
        Scenario::new(
            "config",
            self.initial_state(normalize)?,
            self.device(normalize)?,
            options,
        )
        .map_err(|e| CliError::domain("measurement_states", e))
    }

    /// Basis and resolution amplitudes for an imprecise measurement. The
    /// basis is `measurement_states` (standard basis when absent) with
    /// eigenvalues taken from `true_values` in order.
    pub fn imprecise_setup(
        &self,
        normalize: bool,
    ) -> Result<(OrthonormalBasisMeasurement, ResolutionMatrix), CliError> {
        let rm = self
            .resolution_matrix
            .as_ref()
            .ok_or_else(|| CliError::Config {
                field: "resolution_matrix".into(),
                message: "required for imprecise measurement".into(),
            })?;
        let rows = rm
            .amplitudes
            .iter()
            .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect();
        let y = ResolutionMatrix::new(rm.true_values.clone(), rm.reported_values.clone(), rows)
            .map_err(|e| CliError::domain("resolution_matrix", e))?;
        let basis = if self.measurement_states.is_empty() {
            OrthonormalBasisMeasurement::standard(rm.true_values.clone())
        } else {
            let states = self
                .device(normalize)?
                .states()
                .iter()
                .map(|(_, s)| s.clone())
                .collect();
            OrthonormalBasisMeasurement::new(states, rm.true_values.clone())
        }
        .map_err(|e| CliError::domain("measurement_states", e))?;
        Ok((basis, y))
    }
}

fn build_state(
    field: &str,
    amplitudes: &[[f64; 2]],
    dimension: usize,
    normalize: bool,
) -> Result<StateVector, CliError> {
    if amplitudes.len() != dimension {
        return Err(CliError::domain(
            field,
            Error::DimensionMismatch {
                expected: dimension,
                found: amplitudes.len(),
            },
        ));
    }
    let raw: Vec<Complex64> = amplitudes
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    let state = if normalize {
        StateVector::normalize(raw)
    } else {
        StateVector::new(raw)
    };
    state.map_err(|e| CliError::domain(field, e))
}
