//! Checks a model against the ecology meta-model.
//!
//! Violations are data: a model is runnable exactly when the report is empty.
//! Unset parameters are judged by the value they would default to.

use super::defaults::{default_abiotic, default_biotic};
use super::{ComponentKind, ComponentParams, ConceptualModel, Interaction, PopulationBasis, RelationshipKind};
use serde::Serialize;
use std::collections::HashSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    DuplicateComponentId,
    DuplicateRelationshipId,
    DuplicateRelationship,
    DanglingReference,
    NonFiniteValue,
    NegativeValue,
    FractionRange,
    DirectionRange,
    GrowthRateRange,
    OffspringRequiresInterval,
    InitialBiomassRequired,
    AreaDensityBioticOnly,
    SourceMustBeBiotic,
    TargetMustBeBiotic,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::DuplicateComponentId => "duplicate-component-id",
            Rule::DuplicateRelationshipId => "duplicate-relationship-id",
            Rule::DuplicateRelationship => "duplicate-relationship",
            Rule::DanglingReference => "dangling-reference",
            Rule::NonFiniteValue => "non-finite-value",
            Rule::NegativeValue => "negative-value",
            Rule::FractionRange => "fraction-range",
            Rule::DirectionRange => "direction-range",
            Rule::GrowthRateRange => "growth-rate-range",
            Rule::OffspringRequiresInterval => "offspring-requires-interval",
            Rule::InitialBiomassRequired => "initial-biomass-required",
            Rule::AreaDensityBioticOnly => "area-density-biotic-only",
            Rule::SourceMustBeBiotic => "source-must-be-biotic",
            Rule::TargetMustBeBiotic => "target-must-be-biotic",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// Component or relationship id.
    pub element: String,
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: [{}] {}", self.element, self.rule, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_rule(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    fn push(&mut self, element: &str, rule: Rule, message: impl Into<String>) {
        self.violations.push(Violation {
            element: element.to_string(),
            rule,
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "ok: no violations");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

fn check_real(report: &mut ValidationReport, element: &str, key: &str, value: f64) -> bool {
    if !value.is_finite() {
        report.push(element, Rule::NonFiniteValue, format!("{key} is not a finite number"));
        return false;
    }
    if value < 0.0 {
        report.push(element, Rule::NegativeValue, format!("{key} = {value} is negative"));
        return false;
    }
    true
}

fn check_fraction(report: &mut ValidationReport, element: &str, key: &str, value: f64) {
    if check_real(report, element, key, value) && value > 1.0 {
        report.push(
            element,
            Rule::FractionRange,
            format!("{key} = {value} is outside [0, 1]"),
        );
    }
}

pub fn validate_model(model: &ConceptualModel) -> ValidationReport {
    let mut report = ValidationReport::default();

    let mut seen = HashSet::new();
    for c in &model.components {
        if !seen.insert(c.id.as_str()) {
            report.push(&c.id, Rule::DuplicateComponentId, "component id is not unique");
        }
    }
    let mut seen = HashSet::new();
    for r in &model.relationships {
        if !seen.insert(r.id.as_str()) {
            report.push(&r.id, Rule::DuplicateRelationshipId, "relationship id is not unique");
        }
    }

    for c in &model.components {
        match &c.params {
            ComponentParams::Biotic(p) => {
                let mut resolved = default_biotic();
                resolved.merge_from(p);
                for (key, value) in resolved.entries() {
                    let value = value.as_f64();
                    match key {
                        "assimilation_efficiency" => check_fraction(&mut report, &c.id, key, value),
                        "move_direction" => {
                            if check_real(&mut report, &c.id, key, value) && value >= 360.0 {
                                report.push(
                                    &c.id,
                                    Rule::DirectionRange,
                                    format!("move_direction = {value} is outside [0, 360)"),
                                );
                            }
                        }
                        _ => {
                            check_real(&mut report, &c.id, key, value);
                        }
                    }
                }
                let offspring = resolved.offspring_count.unwrap_or(0);
                let interval = resolved.reproductive_interval.unwrap_or(0);
                if offspring > 0 && interval == 0 {
                    report.push(
                        &c.id,
                        Rule::OffspringRequiresInterval,
                        "offspring_count > 0 requires reproductive_interval > 0",
                    );
                }
                let carbon = resolved.carbon_biomass.unwrap_or(0.0);
                let body = resolved.body_mass.unwrap_or(0.0);
                if !(carbon > 0.0 || body > 0.0) {
                    report.push(
                        &c.id,
                        Rule::InitialBiomassRequired,
                        "carbon_biomass or body_mass must be positive",
                    );
                }
            }
            ComponentParams::Abiotic(p) => {
                let mut resolved = default_abiotic();
                resolved.merge_from(p);
                for (key, value) in resolved.entries() {
                    let value = value.as_f64();
                    if key == "growth_rate" {
                        check_growth(&mut report, &c.id, value);
                    } else {
                        check_real(&mut report, &c.id, key, value);
                    }
                }
                if c.population_basis == PopulationBasis::AreaDensity {
                    report.push(
                        &c.id,
                        Rule::AreaDensityBioticOnly,
                        "area_density population basis applies only to biotic components",
                    );
                }
            }
        }
    }

    let mut triples = HashSet::new();
    for r in &model.relationships {
        let source = model.component(&r.source);
        let target = model.component(&r.target);
        if source.is_none() {
            report.push(
                &r.id,
                Rule::DanglingReference,
                format!("source `{}` does not exist", r.source),
            );
        }
        if target.is_none() {
            report.push(
                &r.id,
                Rule::DanglingReference,
                format!("target `{}` does not exist", r.target),
            );
        }
        if !triples.insert((r.kind(), r.source.as_str(), r.target.as_str())) {
            report.push(
                &r.id,
                Rule::DuplicateRelationship,
                format!("another {} relationship joins {} to {}", r.kind(), r.source, r.target),
            );
        }

        let kind = r.kind();
        let source_kind = source.map(|c| c.kind());
        let target_kind = target.map(|c| c.kind());
        let source_biotic_required = matches!(
            kind,
            RelationshipKind::Consumes | RelationshipKind::Destroys | RelationshipKind::Produces
        );
        if source_biotic_required && source_kind == Some(ComponentKind::Abiotic) {
            report.push(&r.id, Rule::SourceMustBeBiotic, format!("{kind} source must be biotic"));
        }
        if kind == RelationshipKind::Consumes && target_kind == Some(ComponentKind::Abiotic) {
            report.push(&r.id, Rule::TargetMustBeBiotic, "consumes target must be biotic");
        }

        match r.interaction.with_defaults() {
            Interaction::Consumes {
                interaction_probability,
                consumption_rate,
            } => {
                check_fraction(
                    &mut report,
                    &r.id,
                    "interaction_probability",
                    interaction_probability.unwrap_or(0.0),
                );
                check_fraction(&mut report, &r.id, "consumption_rate", consumption_rate.unwrap_or(0.0));
            }
            Interaction::Destroys {
                interaction_probability,
                destruction_rate,
            } => {
                check_fraction(
                    &mut report,
                    &r.id,
                    "interaction_probability",
                    interaction_probability.unwrap_or(0.0),
                );
                check_fraction(&mut report, &r.id, "destruction_rate", destruction_rate.unwrap_or(0.0));
            }
            Interaction::Affects {
                interaction_probability,
                growth_rate,
            } => {
                check_fraction(
                    &mut report,
                    &r.id,
                    "interaction_probability",
                    interaction_probability.unwrap_or(0.0),
                );
                check_growth(&mut report, &r.id, growth_rate.unwrap_or(0.0));
            }
            Interaction::Produces { production_rate } => {
                check_real(&mut report, &r.id, "production_rate", production_rate.unwrap_or(0.0));
                if let Some(bp) = target.and_then(|t| t.biotic_params()) {
                    let mut t = default_biotic();
                    t.merge_from(bp);
                    if t.body_mass.unwrap_or(0.0) <= 0.0 {
                        report.push(
                            &r.id,
                            Rule::InitialBiomassRequired,
                            "produces into a biotic target needs a positive target body_mass",
                        );
                    }
                }
            }
        }
    }

    report
}

/// Growth rates may be negative (a degrading effect) but never below -1.
fn check_growth(report: &mut ValidationReport, element: &str, value: f64) {
    if !value.is_finite() {
        report.push(element, Rule::NonFiniteValue, "growth_rate is not a finite number");
    } else if value < -1.0 {
        report.push(
            element,
            Rule::GrowthRateRange,
            format!("growth_rate = {value} is below -1"),
        );
    }
}
