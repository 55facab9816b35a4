use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{create_file, open_file};
use crate::linalg::{check_vector, norm, Matrix};

/// Unit-norm tolerance enforced on stored rows.
pub const UNIT_TOL: f64 = 1e-8;

pub const STORE_FORMAT: &str = "embstore/1";

/// Id-tagged unit vectors of one shared dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingStore {
    ids: Vec<String>,
    dim: usize,
    data: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    dim: usize,
    count: usize,
}

#[derive(Serialize, Deserialize)]
struct Row<'a> {
    #[serde(borrow)]
    id: std::borrow::Cow<'a, str>,
    vec: Vec<f64>,
}

impl EmbeddingStore {
    pub fn new(ids: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if ids.len() != rows.len() {
            return Err(Error::IdMismatch(format!(
                "{} ids for {} vectors",
                ids.len(),
                rows.len()
            )));
        }
        let dim = rows.first().map(Vec::len).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * dim);
        for r in &rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::from_flat(ids, dim, data)
    }

    pub fn from_flat(ids: Vec<String>, dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != ids.len() * dim {
            return Err(Error::DimensionMismatch {
                expected: ids.len() * dim,
                found: data.len(),
            });
        }
        let store = EmbeddingStore { ids, dim, data };
        store.validate()?;
        Ok(store)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::with_capacity(self.ids.len());
        for id in &self.ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        if self.ids.is_empty() {
            return Ok(());
        }
        if self.dim == 0 {
            return Err(Error::EmptyVector);
        }
        for (i, r) in self.rows().enumerate() {
            check_vector(r)?;
            let n = norm(r);
            if (n - 1.0).abs() > UNIT_TOL {
                return Err(Error::config(
                    format!("vector {}", self.ids[i]),
                    format!("norm {n} is not 1"),
                ));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim.max(1))
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn index(&self) -> HashMap<&str, usize> {
        self.ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), i))
            .collect()
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        Matrix::from_flat(self.len(), self.dim, self.data.clone())
    }

    /// Rows at the given positions, in that order.
    pub fn select(&self, rows: &[usize]) -> Result<EmbeddingStore> {
        let mut data = Vec::with_capacity(rows.len() * self.dim);
        let mut ids = Vec::with_capacity(rows.len());
        for &i in rows {
            ids.push(self.ids[i].clone());
            data.extend_from_slice(self.row(i));
        }
        EmbeddingStore::from_flat(ids, self.dim, data)
    }

    /// Errors unless both stores carry the same ids in the same order.
    pub fn check_same_ids(&self, other: &EmbeddingStore) -> Result<()> {
        if self.ids != other.ids {
            let first = self
                .ids
                .iter()
                .zip(&other.ids)
                .position(|(a, b)| a != b)
                .unwrap_or(self.len().min(other.len()));
            return Err(Error::IdMismatch(format!(
                "stores differ at row {first} ({} vs {} rows)",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let reader = open_file(path)?;
        let fmt = |line: usize, msg: String| Error::Format {
            path: path.to_owned(),
            line,
            msg,
        };
        let mut lines = reader.lines().enumerate();
        let header: Header = match lines.next() {
            Some((_, l)) => {
                let l = l.map_err(|e| Error::io(path, e))?;
                serde_json::from_str(&l).map_err(|e| fmt(1, e.to_string()))?
            }
            None => return Err(fmt(1, "missing header".into())),
        };
        if header.format != STORE_FORMAT {
            return Err(fmt(1, format!("unknown format {:?}", header.format)));
        }
        let mut ids = Vec::with_capacity(header.count);
        let mut data = Vec::with_capacity(header.count * header.dim);
        for (i, line) in lines {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let row: Row = serde_json::from_str(&line).map_err(|e| fmt(i + 1, e.to_string()))?;
            if row.vec.len() != header.dim {
                return Err(fmt(
                    i + 1,
                    format!("vector has {} components, header says {}", row.vec.len(), header.dim),
                ));
            }
            ids.push(row.id.into_owned());
            data.extend_from_slice(&row.vec);
        }
        if ids.len() != header.count {
            return Err(fmt(
                1,
                format!("header count {} but {} rows", header.count, ids.len()),
            ));
        }
        EmbeddingStore::from_flat(ids, header.dim, data).map_err(|e| match e {
            Error::Io { .. } | Error::Format { .. } => e,
            other => fmt(0, other.to_string()),
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = create_file(path)?;
        let io = |e| Error::io(path, e);
        let header = Header {
            format: STORE_FORMAT.into(),
            dim: self.dim,
            count: self.len(),
        };
        writeln!(w, "{}", serde_json::to_string(&header).expect("header")).map_err(io)?;
        for (id, v) in self.ids.iter().zip(self.rows()) {
            let row = Row {
                id: id.as_str().into(),
                vec: v.to_vec(),
            };
            writeln!(w, "{}", serde_json::to_string(&row).expect("row")).map_err(io)?;
        }
        w.flush().map_err(io)
    }
}
