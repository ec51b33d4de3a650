//! JSON form of finite simplicial sets and the canonical writer.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplicial::{Cell, FinSimplicialSet, SimplexRef};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileCell {
    id: String,
    dim: usize,
    faces: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSet {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    basepoint: Option<String>,
    cells: Vec<FileCell>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    level_cap: Option<usize>,
}

/// Parses and structurally resolves a simplicial set. Simplicial identities
/// are not checked here; call `validate`.
pub fn from_json(text: &str) -> Result<FinSimplicialSet> {
    let file: FileSet = serde_json::from_str(text)
        .map_err(|e| Error::Input(format!("line {} column {}: {e}", e.line(), e.column())))?;
    let mut index = HashMap::new();
    for (k, c) in file.cells.iter().enumerate() {
        if c.id.is_empty() || c.id.contains(char::is_whitespace) {
            return Err(Error::Input(format!("cell id {:?} must be nonempty without whitespace", c.id)));
        }
        if index.insert(c.id.clone(), k).is_some() {
            return Err(Error::Input(format!("duplicate cell id {:?}", c.id)));
        }
    }
    let mut cells = Vec::with_capacity(file.cells.len());
    for c in &file.cells {
        let mut faces = Vec::with_capacity(c.faces.len());
        for (i, f) in c.faces.iter().enumerate() {
            faces.push(parse_ref(f, &index).map_err(|e| Error::Input(format!("cell {:?} face d{i}: {e}", c.id)))?);
        }
        cells.push(Cell { id: c.id.clone(), dim: c.dim, faces });
    }
    let basepoint = match &file.basepoint {
        None => None,
        Some(b) => Some(*index.get(b).ok_or_else(|| Error::Input(format!("basepoint {b:?} is not a cell")))?),
    };
    let x = FinSimplicialSet { name: file.name, basepoint, cells, level_cap: file.level_cap };
    Ok(x.sorted_by_dim())
}

fn parse_ref(s: &str, index: &HashMap<String, usize>) -> std::result::Result<SimplexRef, String> {
    let toks: Vec<&str> = s.split_whitespace().collect();
    let Some((id, word)) = toks.split_last() else { return Err("empty face".into()) };
    let base = *index.get(*id).ok_or_else(|| format!("unknown cell {id:?}"))?;
    let mut degeneracy_word = Vec::with_capacity(word.len());
    for t in word {
        let j = t
            .strip_prefix('s')
            .and_then(|d| d.parse::<usize>().ok())
            .ok_or_else(|| format!("bad degeneracy token {t:?}"))?;
        degeneracy_word.push(j);
    }
    Ok(SimplexRef { degeneracy_word, base })
}

/// Canonical serialization: cells in stored order, two-space indentation,
/// trailing newline.
pub fn to_json(x: &FinSimplicialSet) -> String {
    let file = FileSet {
        name: x.name.clone(),
        basepoint: x.basepoint.map(|b| x.cells[b].id.clone()),
        cells: x
            .cells
            .iter()
            .map(|c| FileCell { id: c.id.clone(), dim: c.dim, faces: c.faces.iter().map(|f| x.ref_to_string(f)).collect() })
            .collect(),
        level_cap: x.level_cap,
    };
    let mut s = serde_json::to_string_pretty(&file).expect("serializable");
    s.push('\n');
    s
}

pub fn read_file(path: &std::path::Path) -> Result<FinSimplicialSet> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    from_json(&text)
}
