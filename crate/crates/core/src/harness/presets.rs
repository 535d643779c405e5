//! Shipped experiment configurations, one per figure of the evaluation.

use serde::{Deserialize, Serialize};

use super::{apply_parameter, SweepParameter, SweepSpec, SweepValue};
use crate::analysis::StatModelParams;
use crate::error::{invalid, Result};
use crate::model::ScenarioConfig;
use crate::online::AlgoConfig;

const SOURCES: &[(&str, &str)] = &[
    ("fig4", include_str!("../../presets/fig4.json")),
    ("fig5", include_str!("../../presets/fig5.json")),
    ("fig6", include_str!("../../presets/fig6.json")),
    ("fig7", include_str!("../../presets/fig7.json")),
    ("fig8", include_str!("../../presets/fig8.json")),
    ("fig9", include_str!("../../presets/fig9.json")),
    ("fig10", include_str!("../../presets/fig10.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    SOURCES.iter().map(|(n, _)| *n)
}

fn source(name: &str) -> Result<&'static str> {
    SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
        .ok_or_else(|| {
            invalid(format!(
                "unknown preset {name:?}; available: {}",
                names().collect::<Vec<_>>().join(", ")
            ))
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Override {
    pub parameter: SweepParameter,
    pub value: SweepValue,
}

/// A named variant of the base configuration, drawn as its own curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub label: String,
    #[serde(default)]
    pub overrides: Vec<Override>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPreset {
    pub name: String,
    pub description: String,
    pub parameter: SweepParameter,
    pub values: Vec<SweepValue>,
    pub trials_per_value: usize,
    pub master_seed: u64,
    pub scenario: ScenarioConfig,
    pub algo: AlgoConfig,
    /// Empty means a single curve with the base configuration.
    #[serde(default)]
    pub series: Vec<Series>,
}

impl SweepPreset {
    /// One sweep per series, labelled.
    pub fn specs(&self) -> Result<Vec<(String, SweepSpec)>> {
        let series = if self.series.is_empty() {
            vec![Series {
                label: String::new(),
                overrides: Vec::new(),
            }]
        } else {
            self.series.clone()
        };
        series
            .into_iter()
            .map(|s| {
                let mut scenario = self.scenario;
                let mut algo = self.algo;
                for o in &s.overrides {
                    (scenario, algo) = apply_parameter(&scenario, &algo, o.parameter, o.value)?;
                }
                let spec = SweepSpec {
                    parameter: self.parameter,
                    values: self.values.clone(),
                    trials_per_value: self.trials_per_value,
                    scenario,
                    algo,
                    master_seed: self.master_seed,
                };
                spec.validate()?;
                Ok((s.label, spec))
            })
            .collect()
    }

    pub fn series_spec(&self, label: &str) -> Result<SweepSpec> {
        self.specs()?
            .into_iter()
            .find(|(l, _)| l == label)
            .map(|(_, s)| s)
            .ok_or_else(|| invalid(format!("preset {} has no series {label:?}", self.name)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl KGrid {
    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0 && self.start.is_finite() && self.stop >= self.start) {
            return Err(invalid(format!(
                "k grid needs step > 0 and stop >= start, got {}..{} step {}",
                self.start, self.stop, self.step
            )));
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        Ok((0..=n).map(|i| self.start + i as f64 * self.step).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfPreset {
    pub name: String,
    pub description: String,
    pub stat: StatModelParams,
    pub grid: KGrid,
    pub task_count: usize,
}

pub fn sweep_preset(name: &str) -> Result<SweepPreset> {
    let p: SweepPreset = serde_json::from_str(source(name)?)
        .map_err(|e| invalid(format!("preset {name:?} is not a sweep preset: {e}")))?;
    Ok(p)
}

pub fn cdf_preset(name: &str) -> Result<CdfPreset> {
    let p: CdfPreset = serde_json::from_str(source(name)?)
        .map_err(|e| invalid(format!("preset {name:?} is not a cdf preset: {e}")))?;
    Ok(p)
}
