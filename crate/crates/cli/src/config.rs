//! Flat JSON run configuration.

use std::collections::BTreeSet;

use eoq_subst::sensitivity::{Axis, DEFAULT_CAP};
use eoq_subst::{FixedPointSettings, ItemParams, Model, ParamKey, Regime, SearchRegion, SystemParams};
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionOverride {
    pub tau_min: Option<f64>,
    pub tau_max: Option<f64>,
    pub cycle_min: Option<f64>,
    pub cycle_max: Option<f64>,
    pub resolution: Option<usize>,
    pub refine_tolerance: Option<f64>,
}

impl RegionOverride {
    pub fn apply(&self, mut region: SearchRegion) -> SearchRegion {
        region.tau_range.0 = self.tau_min.unwrap_or(region.tau_range.0);
        region.tau_range.1 = self.tau_max.unwrap_or(region.tau_range.1);
        region.cycle_range.0 = self.cycle_min.unwrap_or(region.cycle_range.0);
        region.cycle_range.1 = self.cycle_max.unwrap_or(region.cycle_range.1);
        region.coarse_resolution = self.resolution.unwrap_or(region.coarse_resolution);
        region.refine_tolerance = self.refine_tolerance.unwrap_or(region.refine_tolerance);
        region
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default)]
    pub axes: Vec<Axis>,
    #[serde(default = "default_regimes")]
    pub regimes: Vec<Regime>,
    #[serde(default = "default_cap")]
    pub cap: usize,
    #[serde(default)]
    pub verify_each: bool,
}

fn default_regimes() -> Vec<Regime> {
    vec![Regime::Auto]
}

fn default_cap() -> usize {
    DEFAULT_CAP
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: Model,
    pub regime: Regime,
    pub params: SystemParams,
    pub settings: FixedPointSettings,
    pub region: Option<RegionOverride>,
    pub ceiling: f64,
    pub format: Format,
    pub verify: bool,
    pub sweep: Option<SweepSection>,
}

const REQUIRED: [&str; 11] = ["model", "d1", "d2", "ch1", "ch2", "x1", "x2", "ep1", "ep2", "co", "ct"];
const OPTIONAL: [&str; 8] = [
    "regime",
    "tolerance",
    "max_iterations",
    "region",
    "ceiling",
    "format",
    "verify",
    "sweep",
];

fn field<T: serde::de::DeserializeOwned>(obj: &Map<String, Value>, key: &str) -> Result<Option<T>, String> {
    obj.get(key)
        .map(|v| serde_json::from_value(v.clone()).map_err(|e| format!("`{key}`: {e}")))
        .transpose()
}

impl RunConfig {
    /// Parses a config document. Every unknown, missing and mistyped key is
    /// reported in one error.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| CliError::Config(vec![format!("not valid JSON: {e}")]))?;
        let Value::Object(obj) = value else {
            return Err(CliError::Config(vec!["config must be a JSON object".into()]));
        };

        let mut problems = Vec::new();
        let known: BTreeSet<&str> = REQUIRED.iter().chain(OPTIONAL.iter()).copied().collect();
        for key in obj.keys() {
            if !known.contains(key.as_str()) {
                problems.push(format!("unknown key `{key}`"));
            }
        }
        let missing: Vec<&str> = REQUIRED.iter().copied().filter(|k| !obj.contains_key(*k)).collect();
        if !missing.is_empty() {
            problems.push(format!("missing keys: {}", missing.join(", ")));
        }

        let mut num = |key: &str| match field::<f64>(&obj, key) {
            Ok(v) => v.unwrap_or(f64::NAN),
            Err(e) => {
                problems.push(e);
                f64::NAN
            }
        };
        let (d1, d2, ch1, ch2) = (num("d1"), num("d2"), num("ch1"), num("ch2"));
        let (x1, x2, ep1, ep2) = (num("x1"), num("x2"), num("ep1"), num("ep2"));
        let (co, ct) = (num("co"), num("ct"));
        let params = SystemParams {
            item1: ItemParams::new(d1, ch1, x1, ep1),
            item2: ItemParams::new(d2, ch2, x2, ep2),
            ordering_cost: co,
            transfer_cost: ct,
        };

        macro_rules! opt {
            ($key:literal) => {
                field(&obj, $key).unwrap_or_else(|e| {
                    problems.push(e);
                    None
                })
            };
        }
        let model: Option<Model> = opt!("model");
        let regime: Option<Regime> = opt!("regime");
        let tolerance: Option<f64> = opt!("tolerance");
        let max_iterations: Option<usize> = opt!("max_iterations");
        let region: Option<RegionOverride> = opt!("region");
        let ceiling: Option<f64> = opt!("ceiling");
        let format: Option<Format> = opt!("format");
        let verify: Option<bool> = opt!("verify");
        let sweep: Option<SweepSection> = opt!("sweep");

        if !problems.is_empty() {
            return Err(CliError::Config(problems));
        }
        let defaults = FixedPointSettings::default();
        Ok(Self {
            model: model.expect("required key checked above"),
            regime: regime.unwrap_or(Regime::Auto),
            params,
            settings: FixedPointSettings {
                tolerance: tolerance.unwrap_or(defaults.tolerance),
                max_iterations: max_iterations.unwrap_or(defaults.max_iterations),
            },
            region,
            ceiling: ceiling.unwrap_or(eoq_subst::oracle::DEFAULT_CEILING),
            format: format.unwrap_or(Format::Json),
            verify: verify.unwrap_or(false),
            sweep,
        })
    }

    pub fn search_region(&self) -> SearchRegion {
        let base = SearchRegion::default_for(&self.params);
        self.region.as_ref().map_or(base, |r| r.apply(base))
    }

    /// Applies a `key=value` override to one of the flat parameters.
    pub fn set(&mut self, assignment: &str) -> Result<(), CliError> {
        let bad = || {
            CliError::Config(vec![format!(
                "expected KEY=VALUE with a parameter key, got `{assignment}`"
            )])
        };
        let (key, value) = assignment.split_once('=').ok_or_else(bad)?;
        let key: ParamKey = key.trim().parse().map_err(|e: String| CliError::Config(vec![e]))?;
        let value: f64 = value.trim().parse().map_err(|_| bad())?;
        key.set(&mut self.params, value);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const REFERENCE: &str = include_str!("../configs/reference.json");

    #[test]
    fn shipped_config_parses() {
        let c = RunConfig::parse(REFERENCE).unwrap();
        assert_eq!(c.params, SystemParams::reference());
        assert_eq!(c.model, Model::Basic);
        assert_eq!(c.regime, Regime::Auto);
        assert_eq!(c.sweep.unwrap().axes[0].points.len(), 4);
    }

    #[test]
    fn all_problems_reported_together() {
        let err = RunConfig::parse(r#"{"model": "basic", "d1": 1000, "ch1": "one", "zz": 1, "yy": 2}"#).unwrap_err();
        let CliError::Config(problems) = err else { panic!() };
        assert!(problems.iter().any(|p| p == "unknown key `yy`"));
        assert!(problems.iter().any(|p| p == "unknown key `zz`"));
        assert!(problems
            .iter()
            .any(|p| p == "missing keys: d2, ch2, x1, x2, ep1, ep2, co, ct"));
        assert!(problems.iter().any(|p| p.starts_with("`ch1`")));
    }

    #[test]
    fn nested_sections_reject_unknown_keys() {
        let mut v: Value = serde_json::from_str(REFERENCE).unwrap();
        v["region"] = serde_json::json!({"tau_mn": 0.0});
        assert!(RunConfig::parse(&v.to_string()).is_err());
    }

    #[test]
    fn overrides() {
        let mut c = RunConfig::parse(REFERENCE).unwrap();
        c.set("ch2=0.5").unwrap();
        assert_eq!(c.params.item2.holding_cost, 0.5);
        assert!(c.set("ch3=1").is_err());
        assert!(c.set("ch2").is_err());
    }
}
