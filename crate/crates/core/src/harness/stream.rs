//! Line-oriented update streams.
//!
//! ```text
//! # comment
//! 4 3
//! I 0 1
//! I 1 2
//! D 0 1
//! ```
//!
//! The first non-comment line holds the vertex count and the number of
//! updates. Text after `#` is ignored on every line.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::StreamError;
use crate::graph::{DynamicGraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Op {
    #[serde(rename = "I")]
    Insert,
    #[serde(rename = "D")]
    Delete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Update {
    pub op: Op,
    pub u: VertexId,
    pub v: VertexId,
}

impl Update {
    pub fn insert(u: u32, v: u32) -> Self {
        Update {
            op: Op::Insert,
            u: VertexId(u),
            v: VertexId(v),
        }
    }

    pub fn delete(u: u32, v: u32) -> Self {
        Update {
            op: Op::Delete,
            u: VertexId(u),
            v: VertexId(v),
        }
    }
}

impl fmt::Display for Update {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.op {
            Op::Insert => 'I',
            Op::Delete => 'D',
        };
        write!(f, "{tag} {} {}", self.u, self.v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateStream {
    pub n: usize,
    pub updates: Vec<Update>,
}

impl UpdateStream {
    pub fn new(n: usize, updates: Vec<Update>) -> Self {
        UpdateStream { n, updates }
    }

    pub fn len(&self) -> usize {
        self.updates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.updates.is_empty()
    }

    pub fn insertions(&self) -> usize {
        self.updates.iter().filter(|u| u.op == Op::Insert).count()
    }

    pub fn deletions(&self) -> usize {
        self.len() - self.insertions()
    }

    /// Checks that every insertion targets an absent pair and every deletion
    /// a live edge. Returns the final graph.
    pub fn validate(&self) -> Result<DynamicGraph, StreamError> {
        let mut g = DynamicGraph::new(self.n)
            .map_err(|source| StreamError::Illegal { index: 0, source })?;
        for (index, up) in self.updates.iter().enumerate() {
            let res = match up.op {
                Op::Insert => g.insert_raw(up.u, up.v).map(|_| ()),
                Op::Delete => g.delete_raw(up.u, up.v).map(|_| ()),
            };
            res.map_err(|source| StreamError::Illegal { index, source })?;
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(12 * (self.updates.len() + 1));
        out.push_str(&format!("{} {}\n", self.n, self.updates.len()));
        for up in &self.updates {
            out.push_str(&up.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses and validates a stream.
    pub fn parse(text: &str) -> Result<Self, StreamError> {
        let mut header: Option<(usize, usize)> = None;
        let mut updates = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_err = |msg: String| StreamError::Parse { line: line_no, msg };
            if header.is_none() {
                if fields.len() != 2 {
                    return Err(parse_err(format!("expected `n t`, found `{line}`")));
                }
                let n = fields[0]
                    .parse::<usize>()
                    .map_err(|e| parse_err(format!("bad vertex count: {e}")))?;
                let t = fields[1]
                    .parse::<usize>()
                    .map_err(|e| parse_err(format!("bad update count: {e}")))?;
                header = Some((n, t));
                updates.reserve(t);
                continue;
            }
            if fields.len() != 3 {
                return Err(parse_err(format!(
                    "expected `I u v` or `D u v`, found `{line}`"
                )));
            }
            let op = match fields[0] {
                "I" | "i" => Op::Insert,
                "D" | "d" => Op::Delete,
                other => return Err(parse_err(format!("unknown operation `{other}`"))),
            };
            let endpoint = |s: &str| {
                s.parse::<u32>()
                    .map(VertexId)
                    .map_err(|e| parse_err(format!("bad vertex `{s}`: {e}")))
            };
            updates.push(Update {
                op,
                u: endpoint(fields[1])?,
                v: endpoint(fields[2])?,
            });
        }
        let (n, t) = header.ok_or(StreamError::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        if t != updates.len() {
            return Err(StreamError::LengthMismatch {
                declared: t,
                found: updates.len(),
            });
        }
        let stream = UpdateStream { n, updates };
        stream.validate()?;
        Ok(stream)
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self, StreamError> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<(), StreamError> {
        fs::write(path, self.to_text())?;
        Ok(())
    }
}

impl FromStr for UpdateStream {
    type Err = StreamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        UpdateStream::parse(s)
    }
}
