//! Trait records to biotic parameters.

use crate::{EolError, TraitRecord};
use ecoloom::model::BioticParams;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

const BUILTIN: &str = include_str!("../data/trait_mapping.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitConversion {
    pub unit: String,
    pub multiply: f64,
    pub divide: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraitMapping {
    pub parameter: String,
    pub predicates: Vec<String>,
    pub units: Vec<UnitConversion>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappingTable {
    pub version: u32,
    pub mappings: Vec<TraitMapping>,
}

/// One parameter filled from the records.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub parameter: String,
    pub value: f64,
    pub records: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParameterEstimate {
    pub params: BioticParams,
    pub estimates: Vec<Estimate>,
    /// Records that matched a predicate but could not be used.
    pub notes: Vec<String>,
}

const WHOLE: [&str; 4] = [
    "lifespan",
    "reproductive_maturity",
    "reproductive_interval",
    "offspring_count",
];
const REAL: [&str; 1] = ["body_mass"];

fn norm(s: &str) -> String {
    s.trim().to_lowercase()
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

impl MappingTable {
    /// The table shipped with the crate.
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN).expect("bundled trait mapping is valid")
    }

    pub fn from_json(text: &str) -> Result<Self, EolError> {
        let table: MappingTable = serde_json::from_str(text).map_err(|e| EolError::Malformed(e.to_string()))?;
        for m in &table.mappings {
            if !WHOLE.contains(&m.parameter.as_str()) && !REAL.contains(&m.parameter.as_str()) {
                return Err(EolError::Malformed(format!("cannot map traits onto `{}`", m.parameter)));
            }
            if m.units.iter().any(|u| !(u.divide > 0.0) || !u.multiply.is_finite()) {
                return Err(EolError::Malformed(format!(
                    "bad unit conversion for `{}`",
                    m.parameter
                )));
            }
        }
        Ok(table)
    }

    fn mapping_for(&self, predicate: &str) -> Option<&TraitMapping> {
        let p = norm(predicate);
        self.mappings.iter().find(|m| m.predicates.iter().any(|q| norm(q) == p))
    }

    /// Deterministic and offline. Several usable records for one parameter
    /// are reduced to their median after unit conversion.
    pub fn apply(&self, traits: &[TraitRecord]) -> ParameterEstimate {
        let mut gathered: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        let mut notes = Vec::new();
        for t in traits {
            let Some(mapping) = self.mapping_for(&t.predicate) else {
                continue;
            };
            let Some(conv) = mapping.units.iter().find(|u| norm(&u.unit) == norm(&t.units)) else {
                notes.push(format!(
                    "skipped {} = {} `{}`: units not convertible for {}",
                    t.predicate, t.value, t.units, mapping.parameter
                ));
                continue;
            };
            if !t.value.is_finite() || t.value < 0.0 {
                notes.push(format!("skipped {} = {}: not a usable value", t.predicate, t.value));
                continue;
            }
            let position = self.mappings.iter().position(|m| std::ptr::eq(m, mapping)).unwrap();
            gathered
                .entry(position)
                .or_default()
                .push(t.value * conv.multiply / conv.divide);
        }

        let mut params = BioticParams::default();
        let mut estimates = Vec::new();
        for (position, mut values) in gathered {
            let parameter = &self.mappings[position].parameter;
            let records = values.len();
            let m = median(&mut values);
            let value = match parameter.as_str() {
                "body_mass" => {
                    params.body_mass = Some(m);
                    m
                }
                name => {
                    let whole = m.round();
                    if whole > f64::from(u32::MAX) {
                        notes.push(format!("skipped {name}: {m} out of range"));
                        continue;
                    }
                    let slot = match name {
                        "lifespan" => &mut params.lifespan,
                        "reproductive_maturity" => &mut params.reproductive_maturity,
                        "reproductive_interval" => &mut params.reproductive_interval,
                        _ => &mut params.offspring_count,
                    };
                    *slot = Some(whole as u32);
                    whole
                }
            };
            estimates.push(Estimate {
                parameter: parameter.clone(),
                value,
                records,
            });
        }
        ParameterEstimate {
            params,
            estimates,
            notes,
        }
    }
}

/// [`MappingTable::apply`] with the bundled table.
pub fn traits_to_parameters(traits: &[TraitRecord]) -> ParameterEstimate {
    MappingTable::builtin().apply(traits)
}
