//! Canonical JSON interchange format (`.oodm.json`).

use serde::{Deserialize, Serialize};

use super::IngestError;
use crate::model::{ClassDef, ClassModel, Rule};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    classes: Vec<ClassDef>,
}

#[derive(Serialize)]
struct ModelFileRef<'a> {
    classes: &'a [ClassDef],
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for segment in path.iter() {
        out.push('/');
        match segment {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

/// Reads an interchange document. Parent references to undeclared classes
/// are left for [`super::merge_models`] to resolve.
pub fn load_model_file(text: &str) -> Result<ClassModel, IngestError> {
    let deserializer = &mut serde_json::Deserializer::from_str(text);
    let file: ModelFile = serde_path_to_error::deserialize(deserializer).map_err(|e| {
        IngestError::Format {
            pointer: pointer(e.path()),
            message: e.inner().to_string(),
        }
    })?;
    let raw_names: Vec<String> = file.classes.iter().map(|c| c.name.clone()).collect();
    let model = ClassModel::from_classes(file.classes);
    let report = model.validate().without(Rule::UnknownParent);
    if let Some(v) = report.violations.first() {
        let (pointer, message) = if v.rule == Rule::DuplicateClass {
            let index = raw_names
                .iter()
                .enumerate()
                .filter(|(_, n)| **n == v.class)
                .nth(1)
                .map_or(0, |(i, _)| i);
            (format!("/classes/{index}/name"), format!("duplicate class `{}`", v.class))
        } else {
            let index = raw_names.iter().position(|n| *n == v.class).unwrap_or(0);
            (format!("/classes/{index}"), v.to_string())
        };
        return Err(IngestError::Format { pointer, message });
    }
    Ok(model)
}

/// Serializes with classes in name order and members in declaration order.
pub fn write_model_file(model: &ClassModel) -> String {
    let mut text = serde_json::to_string_pretty(&ModelFileRef {
        classes: model.classes(),
    })
    .expect("model serialization cannot fail");
    text.push('\n');
    text
}
