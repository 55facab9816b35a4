use std::collections::HashSet;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{create_file, open_file};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub tokens: Vec<String>,
}

impl Document {
    pub fn new(id: impl Into<String>, tokens: &[&str]) -> Self {
        Document {
            id: id.into(),
            tokens: tokens.iter().map(|t| t.to_string()).collect(),
        }
    }
}

/// Ordered documents with unique ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    docs: Vec<Document>,
}

impl Corpus {
    pub fn new(docs: Vec<Document>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(docs.len());
        for d in &docs {
            if !seen.insert(d.id.as_str()) {
                return Err(Error::DuplicateId(d.id.clone()));
            }
        }
        Ok(Corpus { docs })
    }

    pub fn docs(&self) -> &[Document] {
        &self.docs
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    /// One document per line, split on whitespace. Ids are `line000001`, ...
    pub fn from_raw_text(text: &str) -> Self {
        let docs = text
            .lines()
            .enumerate()
            .map(|(i, line)| Document {
                id: format!("line{:06}", i + 1),
                tokens: line.split_whitespace().map(str::to_owned).collect(),
            })
            .collect();
        Corpus { docs }
    }

    pub fn read_jsonl(path: &Path) -> Result<Self> {
        let reader = open_file(path)?;
        let mut docs = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let doc: Document = serde_json::from_str(&line).map_err(|e| Error::Format {
                path: path.to_owned(),
                line: i + 1,
                msg: e.to_string(),
            })?;
            docs.push(doc);
        }
        Corpus::new(docs)
    }

    pub fn write_jsonl(&self, path: &Path) -> Result<()> {
        let mut w = create_file(path)?;
        for d in &self.docs {
            let line = serde_json::to_string(d).expect("documents serialize");
            writeln!(w, "{line}").map_err(|e| Error::io(path, e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_ids_rejected() {
        let d = Document::new("a", &["x"]);
        assert!(matches!(
            Corpus::new(vec![d.clone(), d]),
            Err(Error::DuplicateId(id)) if id == "a"
        ));
    }

    #[test]
    fn raw_text_import() {
        let c = Corpus::from_raw_text("the cat  sat\n\nend\n");
        assert_eq!(c.len(), 3);
        assert_eq!(c.docs()[0].tokens, vec!["the", "cat", "sat"]);
        assert!(c.docs()[1].tokens.is_empty());
        assert_eq!(c.docs()[2].id, "line000003");
    }

    #[test]
    fn jsonl_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.jsonl");
        let c = Corpus::new(vec![Document::new("a", &["x", "y"]), Document::new("b", &[])]).unwrap();
        c.write_jsonl(&p).unwrap();
        assert_eq!(Corpus::read_jsonl(&p).unwrap(), c);
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(text.lines().next().unwrap(), r#"{"id":"a","tokens":["x","y"]}"#);
    }
}
