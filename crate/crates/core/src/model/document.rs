//! Model documents: JSON (canonical) and XML (element-for-element mirror).
//!
//! JSON layout:
//!
//! ```json
//! {
//!   "id": "pp-1", "name": "Predator-prey", "project_id": "", "notes": null,
//!   "components": [
//!     { "id": "wolf", "display_name": "Wolf", "kind": "biotic",
//!       "population_basis": "individuals", "params": { "lifespan": 180 } }
//!   ],
//!   "relationships": [
//!     { "id": "wolf-eats-sheep", "kind": "consumes", "source": "wolf",
//!       "target": "sheep", "params": { "interaction_probability": 0.1 } }
//!   ]
//! }
//! ```
//!
//! The XML form uses the same names as elements, with `<component>` and
//! `<relationship>` items inside `<components>` and `<relationships>` and
//! one child element per parameter inside `<params>`.

use super::{
    apply_defaults, AbioticParams, BioticParams, Component, ComponentKind, ComponentParams, ConceptualModel,
    Interaction, ParamValue, PopulationBasis, Relationship, RelationshipKind, Slot,
};
use quick_xml::events::{BytesDecl, BytesEnd, BytesStart, BytesText, Event};
use serde_json::{Map, Value};
use std::collections::HashSet;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Xml,
}

impl Format {
    /// Guess from a file extension; anything but `.xml` is JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("xml") => Format::Xml,
            _ => Format::Json,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("{element}: missing required field `{field}`")]
    MissingField { element: String, field: String },
    #[error("{element}: unknown {what} kind `{kind}`")]
    UnknownKind {
        element: String,
        what: &'static str,
        kind: String,
    },
    #[error("{element}: unknown parameter `{key}`")]
    UnknownParameter { element: String, key: String },
    #[error("{element}: parameter `{key}` out of range ({reason})")]
    ParameterOutOfRange {
        element: String,
        key: String,
        reason: String,
    },
    #[error("relationship {relationship}: {endpoint} `{id}` does not name a component")]
    DanglingReference {
        relationship: String,
        endpoint: &'static str,
        id: String,
    },
}

/// Parses a model document and fills unset parameters with defaults.
pub fn parse_model(document: &str, format: Format) -> Result<ConceptualModel, ParseError> {
    let doc = match format {
        Format::Json => read_json(document)?,
        Format::Xml => read_xml(document)?,
    };
    doc.into_model().map(apply_defaults)
}

pub fn serialize_model(model: &ConceptualModel, format: Format) -> String {
    match format {
        Format::Json => write_json(model),
        Format::Xml => write_xml(model),
    }
}

// Format-neutral document tree shared by both readers.

struct ModelDoc {
    id: Option<String>,
    name: String,
    project_id: Option<String>,
    notes: Option<String>,
    components: Vec<ComponentDoc>,
    relationships: Vec<RelationshipDoc>,
}

struct ComponentDoc {
    id: String,
    display_name: Option<String>,
    kind: String,
    population_basis: Option<String>,
    params: Vec<(String, f64)>,
}

struct RelationshipDoc {
    id: Option<String>,
    kind: String,
    source: String,
    target: String,
    params: Vec<(String, f64)>,
}

fn fill_slots<'a>(
    element: &str,
    slots: impl IntoIterator<Item = (&'static str, Slot<'a>)>,
    params: &[(String, f64)],
) -> Result<(), ParseError> {
    let mut slots: Vec<_> = slots.into_iter().collect();
    let mut seen = HashSet::new();
    for (key, value) in params {
        if !seen.insert(key.as_str()) {
            return Err(ParseError::Malformed(format!(
                "{element}: parameter `{key}` given twice"
            )));
        }
        let Some((_, slot)) = slots.iter_mut().find(|(k, _)| k == key) else {
            return Err(ParseError::UnknownParameter {
                element: element.to_string(),
                key: key.clone(),
            });
        };
        let out_of_range = |reason: &str| ParseError::ParameterOutOfRange {
            element: element.to_string(),
            key: key.clone(),
            reason: reason.to_string(),
        };
        if !value.is_finite() {
            return Err(out_of_range("not a finite number"));
        }
        match slot {
            Slot::Real(v) => **v = Some(*value),
            Slot::Count(v) => {
                if *value < 0.0 || value.fract() != 0.0 || *value > f64::from(u32::MAX) {
                    return Err(out_of_range("expected a non-negative whole number"));
                }
                **v = Some(*value as u32);
            }
        }
    }
    Ok(())
}

impl ModelDoc {
    fn into_model(self) -> Result<ConceptualModel, ParseError> {
        let mut components = Vec::with_capacity(self.components.len());
        for c in self.components {
            let kind = match c.kind.to_ascii_lowercase().as_str() {
                "biotic" => ComponentKind::Biotic,
                "abiotic" => ComponentKind::Abiotic,
                _ => {
                    return Err(ParseError::UnknownKind {
                        element: c.id,
                        what: "component",
                        kind: c.kind,
                    })
                }
            };
            let population_basis = match c.population_basis.as_deref() {
                None | Some("individuals") => PopulationBasis::Individuals,
                Some("area_density") => PopulationBasis::AreaDensity,
                Some(other) => {
                    return Err(ParseError::UnknownKind {
                        element: c.id,
                        what: "population basis",
                        kind: other.to_string(),
                    })
                }
            };
            let params = match kind {
                ComponentKind::Biotic => {
                    let mut p = BioticParams::default();
                    fill_slots(&c.id, p.slots(), &c.params)?;
                    ComponentParams::Biotic(p)
                }
                ComponentKind::Abiotic => {
                    let mut p = AbioticParams::default();
                    fill_slots(&c.id, p.slots(), &c.params)?;
                    ComponentParams::Abiotic(p)
                }
            };
            components.push(Component {
                display_name: c.display_name.unwrap_or_else(|| c.id.clone()),
                id: c.id,
                population_basis,
                params,
            });
        }

        let mut relationships = Vec::with_capacity(self.relationships.len());
        for r in self.relationships {
            let label =
                r.id.clone()
                    .unwrap_or_else(|| format!("{}-{}-{}", r.kind, r.source, r.target));
            let kind = RelationshipKind::parse(&r.kind).ok_or_else(|| ParseError::UnknownKind {
                element: label.clone(),
                what: "relationship",
                kind: r.kind.clone(),
            })?;
            for (endpoint, id) in [("source", &r.source), ("target", &r.target)] {
                if !components.iter().any(|c| &c.id == id) {
                    return Err(ParseError::DanglingReference {
                        relationship: label.clone(),
                        endpoint,
                        id: id.clone(),
                    });
                }
            }
            let mut interaction = Interaction::empty(kind);
            fill_slots(&label, interaction.slots(), &r.params)?;
            relationships.push(Relationship {
                id: label,
                source: r.source,
                target: r.target,
                interaction,
            });
        }

        Ok(ConceptualModel {
            id: self.id.unwrap_or_else(super::generate_id),
            name: self.name,
            project_id: self.project_id.unwrap_or_default(),
            components,
            relationships,
            notes: self.notes,
        })
    }
}

// JSON

fn take_string(obj: &mut Map<String, Value>, element: &str, field: &str) -> Result<Option<String>, ParseError> {
    match obj.remove(field) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(other) => Err(ParseError::Malformed(format!(
            "{element}: field `{field}` must be a string, found {other}"
        ))),
    }
}

fn require_string(obj: &mut Map<String, Value>, element: &str, field: &str) -> Result<String, ParseError> {
    take_string(obj, element, field)?.ok_or_else(|| ParseError::MissingField {
        element: element.to_string(),
        field: field.to_string(),
    })
}

fn reject_leftovers(obj: &Map<String, Value>, element: &str) -> Result<(), ParseError> {
    match obj.keys().next() {
        Some(key) => Err(ParseError::Malformed(format!("{element}: unknown field `{key}`"))),
        None => Ok(()),
    }
}

fn json_params(obj: &mut Map<String, Value>, element: &str) -> Result<Vec<(String, f64)>, ParseError> {
    let params = match obj.remove("params") {
        None | Some(Value::Null) => return Ok(Vec::new()),
        Some(Value::Object(p)) => p,
        Some(_) => return Err(ParseError::Malformed(format!("{element}: `params` must be an object"))),
    };
    params
        .into_iter()
        .map(|(key, value)| match value.as_f64() {
            Some(v) => Ok((key, v)),
            None => Err(ParseError::ParameterOutOfRange {
                element: element.to_string(),
                key,
                reason: format!("expected a number, found {value}"),
            }),
        })
        .collect()
}

fn json_array(obj: &mut Map<String, Value>, field: &str) -> Result<Vec<Map<String, Value>>, ParseError> {
    match obj.remove(field) {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::Array(items)) => items
            .into_iter()
            .map(|item| match item {
                Value::Object(o) => Ok(o),
                other => Err(ParseError::Malformed(format!(
                    "`{field}` entries must be objects, found {other}"
                ))),
            })
            .collect(),
        Some(_) => Err(ParseError::Malformed(format!("`{field}` must be an array"))),
    }
}

fn read_json(document: &str) -> Result<ModelDoc, ParseError> {
    let root: Value = serde_json::from_str(document).map_err(|e| ParseError::Malformed(e.to_string()))?;
    let Value::Object(mut root) = root else {
        return Err(ParseError::Malformed("top level must be an object".into()));
    };
    let mut components = Vec::new();
    for mut c in json_array(&mut root, "components")? {
        let id = require_string(&mut c, "component", "id")?;
        let display_name = take_string(&mut c, &id, "display_name")?;
        let kind = require_string(&mut c, &id, "kind")?;
        let population_basis = take_string(&mut c, &id, "population_basis")?;
        let params = json_params(&mut c, &id)?;
        reject_leftovers(&c, &id)?;
        components.push(ComponentDoc {
            id,
            display_name,
            kind,
            population_basis,
            params,
        });
    }
    let mut relationships = Vec::new();
    for mut r in json_array(&mut root, "relationships")? {
        let id = take_string(&mut r, "relationship", "id")?;
        let label = id.clone().unwrap_or_else(|| "relationship".into());
        let kind = require_string(&mut r, &label, "kind")?;
        let source = require_string(&mut r, &label, "source")?;
        let target = require_string(&mut r, &label, "target")?;
        let params = json_params(&mut r, &label)?;
        reject_leftovers(&r, &label)?;
        relationships.push(RelationshipDoc {
            id,
            kind,
            source,
            target,
            params,
        });
    }
    let doc = ModelDoc {
        id: take_string(&mut root, "model", "id")?,
        name: take_string(&mut root, "model", "name")?.unwrap_or_default(),
        project_id: take_string(&mut root, "model", "project_id")?,
        notes: take_string(&mut root, "model", "notes")?,
        components,
        relationships,
    };
    reject_leftovers(&root, "model")?;
    Ok(doc)
}

fn param_json(value: ParamValue) -> Value {
    match value {
        ParamValue::Real(v) => Value::from(v),
        ParamValue::Count(v) => Value::from(v),
    }
}

fn component_entries(c: &Component) -> Vec<(&'static str, ParamValue)> {
    match &c.params {
        ComponentParams::Biotic(p) => p.entries(),
        ComponentParams::Abiotic(p) => p.entries(),
    }
}

fn write_json(model: &ConceptualModel) -> String {
    let components: Vec<Value> = model
        .components
        .iter()
        .map(|c| {
            let params: Map<String, Value> = component_entries(c)
                .into_iter()
                .map(|(k, v)| (k.to_string(), param_json(v)))
                .collect();
            serde_json::json!({
                "id": c.id,
                "display_name": c.display_name,
                "kind": c.kind().as_str(),
                "population_basis": c.population_basis.as_str(),
                "params": params,
            })
        })
        .collect();
    let relationships: Vec<Value> = model
        .relationships
        .iter()
        .map(|r| {
            let params: Map<String, Value> = r
                .interaction
                .entries()
                .into_iter()
                .map(|(k, v)| (k.to_string(), param_json(v)))
                .collect();
            serde_json::json!({
                "id": r.id,
                "kind": r.kind().as_str(),
                "source": r.source,
                "target": r.target,
                "params": params,
            })
        })
        .collect();
    let doc = serde_json::json!({
        "id": model.id,
        "name": model.name,
        "project_id": model.project_id,
        "notes": model.notes,
        "components": components,
        "relationships": relationships,
    });
    let mut out = serde_json::to_string_pretty(&doc).expect("model document serializes");
    out.push('\n');
    out
}

// XML

fn element_text(node: roxmltree::Node<'_, '_>) -> String {
    node.text().unwrap_or("").trim().to_string()
}

fn elements<'a, 'i>(node: roxmltree::Node<'a, 'i>) -> impl Iterator<Item = roxmltree::Node<'a, 'i>> {
    node.children().filter(|n| n.is_element())
}

fn xml_params(node: roxmltree::Node<'_, '_>, element: &str) -> Result<Vec<(String, f64)>, ParseError> {
    elements(node)
        .map(|p| {
            let key = p.tag_name().name().to_string();
            let text = element_text(p);
            text.parse::<f64>()
                .map(|v| (key.clone(), v))
                .map_err(|_| ParseError::ParameterOutOfRange {
                    element: element.to_string(),
                    key,
                    reason: format!("expected a number, found `{text}`"),
                })
        })
        .collect()
}

fn unexpected(element: &str, node: roxmltree::Node<'_, '_>) -> ParseError {
    ParseError::Malformed(format!("{element}: unexpected element <{}>", node.tag_name().name()))
}

fn read_xml(document: &str) -> Result<ModelDoc, ParseError> {
    let tree = roxmltree::Document::parse(document).map_err(|e| ParseError::Malformed(e.to_string()))?;
    let root = tree.root_element();
    if root.tag_name().name() != "model" {
        return Err(ParseError::Malformed(format!(
            "root element must be <model>, found <{}>",
            root.tag_name().name()
        )));
    }
    let mut doc = ModelDoc {
        id: None,
        name: String::new(),
        project_id: None,
        notes: None,
        components: Vec::new(),
        relationships: Vec::new(),
    };
    for child in elements(root) {
        match child.tag_name().name() {
            "id" => doc.id = Some(element_text(child)),
            "name" => doc.name = element_text(child),
            "project_id" => doc.project_id = Some(element_text(child)),
            "notes" => doc.notes = Some(child.text().unwrap_or("").to_string()),
            "components" => {
                for c in elements(child) {
                    if c.tag_name().name() != "component" {
                        return Err(unexpected("components", c));
                    }
                    doc.components.push(xml_component(c)?);
                }
            }
            "relationships" => {
                for r in elements(child) {
                    if r.tag_name().name() != "relationship" {
                        return Err(unexpected("relationships", r));
                    }
                    doc.relationships.push(xml_relationship(r)?);
                }
            }
            _ => return Err(unexpected("model", child)),
        }
    }
    Ok(doc)
}

fn xml_component(node: roxmltree::Node<'_, '_>) -> Result<ComponentDoc, ParseError> {
    let mut id = None;
    let mut display_name = None;
    let mut kind = None;
    let mut population_basis = None;
    let mut params_node = None;
    for f in elements(node) {
        match f.tag_name().name() {
            "id" => id = Some(element_text(f)),
            "display_name" => display_name = Some(element_text(f)),
            "kind" => kind = Some(element_text(f)),
            "population_basis" => population_basis = Some(element_text(f)),
            "params" => params_node = Some(f),
            _ => return Err(unexpected("component", f)),
        }
    }
    let id = id.ok_or_else(|| ParseError::MissingField {
        element: "component".into(),
        field: "id".into(),
    })?;
    let kind = kind.ok_or_else(|| ParseError::MissingField {
        element: id.clone(),
        field: "kind".into(),
    })?;
    let params = match params_node {
        Some(p) => xml_params(p, &id)?,
        None => Vec::new(),
    };
    Ok(ComponentDoc {
        id,
        display_name,
        kind,
        population_basis,
        params,
    })
}

fn xml_relationship(node: roxmltree::Node<'_, '_>) -> Result<RelationshipDoc, ParseError> {
    let mut id = None;
    let mut kind = None;
    let mut source = None;
    let mut target = None;
    let mut params_node = None;
    for f in elements(node) {
        match f.tag_name().name() {
            "id" => id = Some(element_text(f)),
            "kind" => kind = Some(element_text(f)),
            "source" => source = Some(element_text(f)),
            "target" => target = Some(element_text(f)),
            "params" => params_node = Some(f),
            _ => return Err(unexpected("relationship", f)),
        }
    }
    let label = id.clone().unwrap_or_else(|| "relationship".into());
    let missing = |field: &str| ParseError::MissingField {
        element: label.clone(),
        field: field.to_string(),
    };
    let kind = kind.ok_or_else(|| missing("kind"))?;
    let source = source.ok_or_else(|| missing("source"))?;
    let target = target.ok_or_else(|| missing("target"))?;
    let params = match params_node {
        Some(p) => xml_params(p, &label)?,
        None => Vec::new(),
    };
    Ok(RelationshipDoc {
        id,
        kind,
        source,
        target,
        params,
    })
}

struct XmlOut {
    writer: quick_xml::Writer<Vec<u8>>,
}

impl XmlOut {
    fn event(&mut self, event: Event<'_>) {
        self.writer.write_event(event).expect("writing to a Vec cannot fail");
    }

    fn open(&mut self, name: &str) {
        self.event(Event::Start(BytesStart::new(name)));
    }

    fn close(&mut self, name: &str) {
        self.event(Event::End(BytesEnd::new(name)));
    }

    fn leaf(&mut self, name: &str, text: &str) {
        self.open(name);
        self.event(Event::Text(BytesText::new(text)));
        self.close(name);
    }

    fn params(&mut self, entries: Vec<(&'static str, ParamValue)>) {
        self.open("params");
        for (key, value) in entries {
            let text = match value {
                ParamValue::Real(v) => format_real(v),
                ParamValue::Count(v) => v.to_string(),
            };
            self.leaf(key, &text);
        }
        self.close("params");
    }
}

/// Shortest text that parses back to the same `f64`, keeping the decimal
/// point so reals stay distinguishable from counts.
fn format_real(v: f64) -> String {
    format!("{v:?}")
}

fn write_xml(model: &ConceptualModel) -> String {
    let mut out = XmlOut {
        writer: quick_xml::Writer::new_with_indent(Vec::new(), b' ', 2),
    };
    out.event(Event::Decl(BytesDecl::new("1.0", Some("UTF-8"), None)));
    out.open("model");
    out.leaf("id", &model.id);
    out.leaf("name", &model.name);
    out.leaf("project_id", &model.project_id);
    if let Some(notes) = &model.notes {
        out.leaf("notes", notes);
    }
    out.open("components");
    for c in &model.components {
        out.open("component");
        out.leaf("id", &c.id);
        out.leaf("display_name", &c.display_name);
        out.leaf("kind", c.kind().as_str());
        out.leaf("population_basis", c.population_basis.as_str());
        out.params(component_entries(c));
        out.close("component");
    }
    out.close("components");
    out.open("relationships");
    for r in &model.relationships {
        out.open("relationship");
        out.leaf("id", &r.id);
        out.leaf("kind", r.kind().as_str());
        out.leaf("source", &r.source);
        out.leaf("target", &r.target);
        out.params(r.interaction.entries());
        out.close("relationship");
    }
    out.close("relationships");
    out.close("model");
    let mut text = String::from_utf8(out.writer.into_inner()).expect("writer emits UTF-8");
    text.push('\n');
    text
}
