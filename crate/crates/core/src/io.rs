//! JSON file formats.
//!
//! * `.ea.json`: effect algebra tables, `null` for an undefined sum.
//! * `.imp.json`: implication tables; a cell is an element or a list of
//!   elements.
//! * `.prf.json`: derivations, with terms written in the surface syntax.
//! * identity files: one (quasi-)identity per line.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{EffectTables, OrderStructure};
use crate::implication::{ElementSet, ImplicationKind, ImplicationTable};
use crate::logic::{parse_identity_file, QuasiIdentity};
use crate::proof::Derivation;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{path}: {reason}")]
    Invalid { path: PathBuf, reason: String },
}

fn read(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read { path: path.into(), source })
}

fn json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|source| IoError::Json { path: path.into(), source })
}

fn invalid(path: &Path, reason: impl ToString) -> IoError {
    IoError::Invalid { path: path.into(), reason: reason.to_string() }
}

pub fn write(path: &Path, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|source| IoError::Read { path: path.into(), source })
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn effect_to_json(t: &EffectTables) -> String {
    pretty(t)
}

/// Read tables; only the shape is checked here.
pub fn read_effect(path: &Path) -> Result<EffectTables, IoError> {
    let t: EffectTables = json(path, &read(path)?)?;
    crate::algebra::check_shape(&t).map_err(|e| invalid(path, e))?;
    Ok(t)
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CellRepr {
    One(usize),
    Many(Vec<usize>),
}

#[derive(Serialize, Deserialize)]
struct ImpFile {
    size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
    zero: usize,
    kind: ImplicationKind,
    imp: Vec<Vec<CellRepr>>,
}

pub fn implication_to_json(t: &ImplicationTable) -> String {
    let imp = t
        .cells()
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| match c.len() {
                    1 => CellRepr::One(*c.first().unwrap()),
                    _ => CellRepr::Many(c.iter().copied().collect()),
                })
                .collect()
        })
        .collect();
    pretty(&ImpFile { size: t.size, names: t.names.clone(), zero: t.zero, kind: t.kind, imp })
}

pub fn parse_implication(path: &Path, text: &str) -> Result<ImplicationTable, IoError> {
    let f: ImpFile = json(path, text)?;
    if f.imp.len() != f.size {
        return Err(invalid(path, format!("imp has {} rows, size is {}", f.imp.len(), f.size)));
    }
    let cells = f
        .imp
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|c| match c {
                    CellRepr::One(v) => ElementSet::from([v]),
                    CellRepr::Many(vs) => vs.into_iter().collect(),
                })
                .collect()
        })
        .collect();
    ImplicationTable::new(f.zero, f.kind, cells, f.names).map_err(|e| invalid(path, e))
}

pub fn read_implication(path: &Path) -> Result<ImplicationTable, IoError> {
    parse_implication(path, &read(path)?)
}

/// Either kind of model file, told apart by its fields.
#[derive(Clone, Debug)]
pub enum ModelFile {
    Effect(EffectTables),
    Implication(ImplicationTable),
}

pub fn read_model(path: &Path) -> Result<ModelFile, IoError> {
    let text = read(path)?;
    let value: serde_json::Value = json(path, &text)?;
    if value.get("plus").is_some() {
        let t: EffectTables = json(path, &text)?;
        crate::algebra::check_shape(&t).map_err(|e| invalid(path, e))?;
        Ok(ModelFile::Effect(t))
    } else if value.get("imp").is_some() {
        Ok(ModelFile::Implication(parse_implication(path, &text)?))
    } else {
        Err(invalid(path, "neither `plus` nor `imp` present"))
    }
}

/// Model files (`.ea.json`, `.imp.json`) in a directory, sorted by name.
pub fn model_paths(dir: &Path) -> Result<Vec<PathBuf>, IoError> {
    let entries = std::fs::read_dir(dir).map_err(|source| IoError::Read { path: dir.into(), source })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            name.ends_with(".ea.json") || name.ends_with(".imp.json")
        })
        .collect();
    paths.sort();
    Ok(paths)
}

pub fn order_to_json(o: &OrderStructure) -> String {
    pretty(o)
}

pub fn read_order(path: &Path) -> Result<OrderStructure, IoError> {
    json(path, &read(path)?)
}

pub fn derivation_to_json(d: &Derivation) -> String {
    pretty(d)
}

pub fn read_derivation(path: &Path) -> Result<Derivation, IoError> {
    json(path, &read(path)?)
}

pub fn read_identities(path: &Path) -> Result<Vec<QuasiIdentity>, IoError> {
    parse_identity_file(&read(path)?).map_err(|e| invalid(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::implication::set_implication_table;
    use crate::models;
    use crate::transforms::effect_to_implication;

    #[test]
    fn tables_round_trip_through_json() {
        let dir = tempfile::tempdir().unwrap();
        let e = models::hs();
        let p = dir.path().join("hs.ea.json");
        write(&p, &effect_to_json(e.tables())).unwrap();
        assert_eq!(&read_effect(&p).unwrap(), e.tables());
        assert!(matches!(read_model(&p).unwrap(), ModelFile::Effect(_)));

        let t = effect_to_implication(&e);
        let p = dir.path().join("hs.imp.json");
        write(&p, &implication_to_json(&t)).unwrap();
        assert_eq!(read_implication(&p).unwrap(), t);
        assert_eq!(model_paths(dir.path()).unwrap().len(), 2);
    }

    #[test]
    fn set_valued_cells_use_lists() {
        let t = set_implication_table(&models::c4());
        let text = implication_to_json(&t);
        let back = parse_implication(Path::new("x"), &text).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn bad_files_are_reported() {
        let p = Path::new("bad.ea.json");
        assert!(matches!(parse_implication(p, "{}"), Err(IoError::Json { .. })));
        let text = r#"{"size": 2, "zero": 0, "kind": "natural_lattice", "imp": [[1, 1]]}"#;
        assert!(matches!(parse_implication(p, text), Err(IoError::Invalid { .. })));
    }
}
