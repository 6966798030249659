//! Front-ends that produce a [`ClassModel`]: the ODL parser, the interchange
//! file reader/writer, and multi-file merging.
//!
//! Both front-ends leave parent references to classes declared elsewhere
//! unresolved; [`merge_models`] resolves them and rejects any that remain.

mod interchange;
mod lexer;
mod parser;
mod writer;

use std::fmt;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::model::{ClassModel, Rule, ValidationReport};
use crate::par::Execution;

pub use interchange::{load_model_file, write_model_file};
pub use writer::write_odl;

pub const ODL_EXTENSION: &str = "odl";
pub const INTERCHANGE_SUFFIX: &str = ".oodm.json";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourcePosition {
    pub file: PathBuf,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourcePosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file.display(), self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{position}: expected {expected}, found {found}")]
pub struct ParseError {
    pub position: SourcePosition,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{source_name}: invalid model: {report}")]
    Invalid {
        source_name: String,
        report: ValidationReport,
    },
    #[error("format error at `{pointer}`: {message}")]
    Format { pointer: String, message: String },
    #[error("class `{class}` is declared in more than one input")]
    Conflict { class: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Parses ODL text. Unresolved parents are allowed here and checked on merge.
pub fn parse_source(text: &str, file: impl AsRef<Path>) -> Result<ClassModel, IngestError> {
    let file = file.as_ref();
    let label = file.display().to_string();
    let classes = parser::Parser::new(text, &label).parse_model()?;
    let model = ClassModel::from_classes(classes);
    let report = model.validate().without(Rule::UnknownParent);
    if report.is_empty() {
        Ok(model)
    } else {
        Err(IngestError::Invalid {
            source_name: label,
            report,
        })
    }
}

/// Unions the classes of every part and resolves cross-part edges. The
/// result must pass full validation.
pub fn merge_models(parts: Vec<ClassModel>) -> Result<ClassModel, IngestError> {
    let mut classes: Vec<_> = parts.into_iter().flat_map(ClassModel::into_classes).collect();
    classes.sort_by(|a, b| a.name.cmp(&b.name));
    if let Some(pair) = classes.windows(2).find(|w| w[0].name == w[1].name) {
        return Err(IngestError::Conflict {
            class: pair[0].name.clone(),
        });
    }
    let model = ClassModel::from_classes(classes);
    let report = model.validate();
    if report.is_empty() {
        Ok(model)
    } else {
        Err(IngestError::Invalid {
            source_name: "merged model".into(),
            report,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Odl,
    Interchange,
}

impl InputKind {
    pub fn of(path: &Path) -> Option<Self> {
        let name = path.file_name()?.to_str()?;
        if name.ends_with(INTERCHANGE_SUFFIX) {
            Some(InputKind::Interchange)
        } else if path.extension().is_some_and(|e| e == ODL_EXTENSION) {
            Some(InputKind::Odl)
        } else {
            None
        }
    }
}

/// One input file as it was read, with its SHA-256 content hash.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub path: PathBuf,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Expands directories into the `.odl` and `.oodm.json` files below them.
/// The result is sorted and free of duplicates.
pub fn collect_inputs(paths: &[PathBuf]) -> Result<Vec<PathBuf>, IngestError> {
    let mut out = Vec::new();
    for path in paths {
        if path.is_dir() {
            for entry in walkdir::WalkDir::new(path).sort_by_file_name() {
                let entry = entry.map_err(|e| IngestError::Io {
                    path: path.clone(),
                    source: e.into(),
                })?;
                if entry.file_type().is_file() && InputKind::of(entry.path()).is_some() {
                    out.push(entry.into_path());
                }
            }
        } else {
            out.push(path.clone());
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Reads and parses one file according to its extension.
pub fn load_path(path: &Path) -> Result<(ClassModel, SourceFile), IngestError> {
    let bytes = std::fs::read(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let text = String::from_utf8(bytes).map_err(|e| IngestError::Io {
        path: path.to_path_buf(),
        source: std::io::Error::new(std::io::ErrorKind::InvalidData, e.utf8_error()),
    })?;
    let model = match InputKind::of(path) {
        Some(InputKind::Interchange) => load_model_file(&text)?,
        _ => parse_source(&text, path)?,
    };
    let source = SourceFile {
        path: path.to_path_buf(),
        sha256: sha256_hex(text.as_bytes()),
    };
    Ok((model, source))
}

/// Loads every input (directories expanded), parsing files concurrently, and
/// merges them into one validated model.
pub fn load_inputs(
    paths: &[PathBuf],
    exec: Execution,
) -> Result<(ClassModel, Vec<SourceFile>), IngestError> {
    let files = collect_inputs(paths)?;
    let loaded = exec.map(&files, |p| load_path(p));
    let mut parts = Vec::with_capacity(loaded.len());
    let mut sources = Vec::with_capacity(loaded.len());
    for result in loaded {
        let (model, source) = result?;
        parts.push(model);
        sources.push(source);
    }
    Ok((merge_models(parts)?, sources))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unresolved_parent_is_deferred_to_merge() {
        let sub = parse_source("class B extends A {}", "b.odl").unwrap();
        assert!(sub.validate().has(Rule::UnknownParent));
        let err = merge_models(vec![sub.clone()]).unwrap_err();
        assert!(matches!(err, IngestError::Invalid { .. }));
        let base = parse_source("class A {}", "a.odl").unwrap();
        let merged = merge_models(vec![sub, base]).unwrap();
        assert_eq!(merged.inheritance_edges().len(), 1);
    }

    #[test]
    fn duplicate_class_in_one_source() {
        let err = parse_source("class A {} class A {}", "x.odl").unwrap_err();
        match err {
            IngestError::Invalid { report, .. } => assert!(report.has(Rule::DuplicateClass)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cycle_in_source_is_rejected() {
        let err = parse_source("class A extends B {} class B extends A {}", "x.odl");
        assert!(matches!(err, Err(IngestError::Invalid { .. })));
    }

    #[test]
    fn merge_conflict_names_class() {
        let a1 = parse_source("class A {}", "1.odl").unwrap();
        let a2 = parse_source("class A {}", "2.odl").unwrap();
        match merge_models(vec![a1, a2]).unwrap_err() {
            IngestError::Conflict { class } => assert_eq!(class, "A"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn input_kinds() {
        assert_eq!(InputKind::of(Path::new("a/f1.odl")), Some(InputKind::Odl));
        assert_eq!(
            InputKind::of(Path::new("m.oodm.json")),
            Some(InputKind::Interchange)
        );
        assert_eq!(InputKind::of(Path::new("m.json")), None);
    }
}
