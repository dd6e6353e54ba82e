//! JSON input files.
//!
//! - group: `{"table": [[...]]}` or `{"permutations": [[...]]}`, optionally
//!   with `"labels"`;
//! - action: a group plus `{"genus": g, "images": [...]}`;
//! - presentation: `{"generators": g, "relators": ["x1 x2 X1", ...]}`;
//! - diagram: `{"components": [{"label", "coeff": [a, b], "unknotted"}], "linking": [[...]]}`.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::{ActionError, HandlebodyAction};
use crate::group::{load_group, Element, FiniteGroup, GroupError, GroupSource, DEFAULT_SIZE_BOUND};
use crate::homology::{GroupPresentation, HomologyError};
use crate::surgery::SurgeryDiagram;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{path}: {source}")]
    Group { path: String, source: GroupError },
    #[error("{path}: {source}")]
    Action { path: String, source: ActionError },
    #[error("{path}: {source}")]
    Presentation { path: String, source: HomologyError },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    #[serde(flatten)]
    pub source: GroupSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl GroupFile {
    pub fn build(&self, size_bound: usize) -> Result<FiniteGroup, GroupError> {
        let g = load_group(&self.source, size_bound)?;
        match &self.labels {
            Some(l) => g.with_labels(l.clone()),
            None => Ok(g),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ActionFile {
    #[serde(flatten)]
    pub group: GroupFile,
    pub genus: usize,
    pub images: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationFile {
    pub generators: usize,
    pub relators: Vec<String>,
}

fn read<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, InputError> {
    let p = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| InputError::Io { path: p.clone(), source })?;
    serde_json::from_str(&text).map_err(|source| InputError::Json { path: p, source })
}

pub fn read_group(path: &Path) -> Result<FiniteGroup, InputError> {
    let file: GroupFile = read(path)?;
    file.build(DEFAULT_SIZE_BOUND).map_err(|source| InputError::Group { path: path.display().to_string(), source })
}

pub fn read_action(path: &Path) -> Result<HandlebodyAction, InputError> {
    let file: ActionFile = read(path)?;
    let p = path.display().to_string();
    let group = file
        .group
        .build(DEFAULT_SIZE_BOUND)
        .map_err(|source| InputError::Group { path: p.clone(), source })?;
    let images = file.images.iter().map(|&i| Element(i)).collect();
    HandlebodyAction::new(Arc::new(group), file.genus, images).map_err(|source| InputError::Action { path: p, source })
}

pub fn read_presentation(path: &Path) -> Result<GroupPresentation, InputError> {
    let file: PresentationFile = read(path)?;
    GroupPresentation::parse(file.generators, &file.relators)
        .map_err(|source| InputError::Presentation { path: path.display().to_string(), source })
}

pub fn read_diagram(path: &Path) -> Result<SurgeryDiagram, InputError> {
    read(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn action_file_shapes() {
        let f: ActionFile = serde_json::from_str(r#"{"table": [[0,1],[1,0]], "genus": 2, "images": [1, 0]}"#).unwrap();
        assert_eq!(f.group.source, GroupSource::Table(vec![vec![0, 1], vec![1, 0]]));
        assert_eq!(f.genus, 2);
        let f: ActionFile =
            serde_json::from_str(r#"{"permutations": [[1,0,2],[1,2,0]], "genus": 2, "images": [1, 2]}"#).unwrap();
        assert_eq!(f.group.build(100).unwrap().order(), 6);
        let g: GroupFile = serde_json::from_str(r#"{"table": [[0]], "labels": ["e"]}"#).unwrap();
        assert_eq!(g.build(10).unwrap().label(Element(0)), "e");
        assert!(serde_json::from_str::<GroupFile>(r#"{"cayley": [[0]]}"#).is_err());
    }

    #[test]
    fn presentation_file() {
        let f: PresentationFile = serde_json::from_str(r#"{"generators": 2, "relators": ["x1 x1", "x2 X1"]}"#).unwrap();
        let p = GroupPresentation::parse(f.generators, &f.relators).unwrap();
        assert_eq!(p.relators().len(), 2);
    }
}
