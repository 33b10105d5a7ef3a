//! Matrix JSON: `{"n": 2, "re": [[...], ...], "im": [[...], ...]}` with `im`
//! optional.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::CMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let (re, im) = m.to_parts();
        let im = im.iter().flatten().any(|&x| x != 0.0).then_some(im);
        Self { n: m.n(), re, im }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.re.len() != self.n {
            return Err(Error::Parse(format!(
                "\"n\" is {} but \"re\" has {} rows",
                self.n,
                self.re.len()
            )));
        }
        Ok(CMatrix::from_parts(&self.re, self.im.as_deref())?)
    }
}

/// Parses matrix JSON; syntax errors carry line and column.
pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    let doc: MatrixJson = serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!(
            "line {} column {}: {}",
            e.line(),
            e.column(),
            strip_position(&e.to_string())
        ))
    })?;
    doc.to_matrix()
}

fn strip_position(msg: &str) -> &str {
    msg.rfind(" at line ").map_or(msg, |i| &msg[..i])
}

pub fn matrix_to_json(m: &CMatrix) -> String {
    serde_json::to_string(&MatrixJson::from_matrix(m)).expect("plain data serializes")
}

pub fn read_matrix(path: &Path) -> Result<CMatrix> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_matrix(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => Error::Parse(format!("{}: {other}", path.display())),
    })
}

pub fn write_matrix(path: &Path, m: &CMatrix) -> Result<()> {
    fs::write(path, matrix_to_json(m)).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}
