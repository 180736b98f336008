//! Model checkpoints: a versioned JSON header next to raw little-endian
//! `f64` matrix files.
//!
//! `model.json` refers to `model.phi.f64`, `model.psi.f64` and
//! `model.theta.f64` in the same directory by file name.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{DocMeta, HyperParams, TrainedModel};
use crate::corpus::Vocabulary;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub const CHECKPOINT_VERSION: u32 = 1;
const FORMAT: &str = "chromatika-model";

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    hyperparams: HyperParams,
    num_colors: usize,
    vocabulary: Vocabulary,
    docs: Vec<DocMeta>,
    word_topic_weights: Vec<f64>,
    color_topic_weights: Vec<f64>,
    matrices: Vec<MatrixRef>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRef {
    name: String,
    file: String,
    rows: usize,
    cols: usize,
}

fn sibling(path: &Path, name: &str) -> (PathBuf, String) {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("model");
    let file = format!("{stem}.{name}.f64");
    (path.with_file_name(&file), file)
}

fn write_matrix(path: &Path, m: &Matrix) -> Result<()> {
    let bytes: Vec<u8> = m.as_slice().iter().flat_map(|x| x.to_le_bytes()).collect();
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn read_matrix(path: &Path, rows: usize, cols: usize) -> Result<Matrix> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.len() != rows * cols * 8 {
        return Err(Error::Checkpoint(format!(
            "{}: {} bytes, expected {rows}x{cols} f64",
            path.display(),
            bytes.len()
        )));
    }
    let data = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8"))).collect();
    Matrix::from_vec(rows, cols, data)
}

impl TrainedModel {
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut matrices = Vec::new();
        for (name, m) in [("phi", &self.phi), ("psi", &self.psi), ("theta", &self.theta)] {
            let (full, file) = sibling(path, name);
            write_matrix(&full, m)?;
            matrices.push(MatrixRef { name: name.into(), file, rows: m.rows(), cols: m.cols() });
        }
        let header = Header {
            format: FORMAT.into(),
            version: CHECKPOINT_VERSION,
            hyperparams: self.hyperparams.clone(),
            num_colors: self.num_colors(),
            vocabulary: self.vocabulary.clone(),
            docs: self.docs.clone(),
            word_topic_weights: self.word_topic_weights.clone(),
            color_topic_weights: self.color_topic_weights.clone(),
            matrices,
        };
        let text = serde_json::to_string_pretty(&header)?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    /// Load and validate a checkpoint (shapes and row sums).
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let header: Header = serde_json::from_str(&text)?;
        if header.format != FORMAT {
            return Err(Error::Checkpoint(format!("unknown format `{}`", header.format)));
        }
        if header.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!("unsupported version {}", header.version)));
        }
        let load = |name: &str| -> Result<Matrix> {
            let r = header
                .matrices
                .iter()
                .find(|m| m.name == name)
                .ok_or_else(|| Error::Checkpoint(format!("matrix `{name}` missing")))?;
            if Path::new(&r.file).components().count() != 1 {
                return Err(Error::Checkpoint(format!("matrix file `{}` must be a plain file name", r.file)));
            }
            read_matrix(&path.with_file_name(&r.file), r.rows, r.cols)
        };
        let model = TrainedModel {
            phi: load("phi")?,
            psi: load("psi")?,
            theta: load("theta")?,
            hyperparams: header.hyperparams,
            vocabulary: header.vocabulary,
            docs: header.docs,
            word_topic_weights: header.word_topic_weights,
            color_topic_weights: header.color_topic_weights,
        };
        if model.num_colors() != header.num_colors {
            return Err(Error::Checkpoint("phi width differs from declared color count".into()));
        }
        model.validate()?;
        Ok(model)
    }
}
