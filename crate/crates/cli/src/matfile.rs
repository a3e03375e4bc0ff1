//! On-disk matrix format: JSON with complex entries as [re, im] pairs.

use halmos_kit::numerics::{C64, CMatrix};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(m: &CMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix, String> {
        if self.entries.len() != self.rows * self.cols {
            return Err(format!(
                "expected {}x{} = {} entries, found {}",
                self.rows,
                self.cols,
                self.rows * self.cols,
                self.entries.len()
            ));
        }
        let entries: Vec<C64> = self.entries.iter().map(|e| C64::new(e[0], e[1])).collect();
        CMatrix::new(self.rows, self.cols, entries).map_err(|e| e.to_string())
    }
}

pub fn load_matrix(path: &Path) -> Result<CMatrix, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let file: MatrixFile = serde_json::from_str(&text)
        .map_err(|e| format!("cannot parse {}: {e}", path.display()))?;
    file.to_matrix()
        .map_err(|e| format!("invalid matrix in {}: {e}", path.display()))
}

pub fn save_matrix(path: &Path, m: &CMatrix) -> Result<(), String> {
    let file = MatrixFile::from_matrix(m);
    let text = serde_json::to_string_pretty(&file).expect("serializable");
    std::fs::write(path, text + "\n").map_err(|e| format!("cannot write {}: {e}", path.display()))
}
