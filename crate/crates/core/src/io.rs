//! JSON formats for elements and chain certificates.
//!
//! An element file looks like
//!
//! ```json
//! {"system": {"kind": "matrix", "rows": 2, "cols": 2},
//!  "entries": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}
//! ```
//!
//! with `kind` one of `matrix`, `symmetric`, `antisymmetric` (sized by `dim`,
//! or equal `rows`/`cols`) and `spin` (sized by `dim`, with a flat list of
//! `[re, im]` entries). An optional `system.tolerance` overrides the default.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::chains::{ChainCertificate, Claim};
use crate::error::{Error, Result};
use crate::linalg::{c64, CMatrix, CVector};
use crate::relations::RelationKind;
use crate::triples::{Element, Payload, SystemKind, TripleSystem, DEFAULT_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entries {
    Matrix(Vec<Vec<[f64; 2]>>),
    Vector(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementFile {
    pub system: SystemSpec,
    pub entries: Entries,
}

impl SystemSpec {
    pub fn from_system(sys: &TripleSystem) -> Self {
        let tolerance = (sys.tol() != DEFAULT_TOL).then_some(sys.tol());
        let (kind, rows, cols, dim) = match sys.kind() {
            SystemKind::Rectangular { rows, cols } => ("matrix", Some(rows), Some(cols), None),
            SystemKind::Symmetric { n } => ("symmetric", None, None, Some(n)),
            SystemKind::Antisymmetric { n } => ("antisymmetric", None, None, Some(n)),
            SystemKind::Spin { dim } => ("spin", None, None, Some(dim)),
        };
        SystemSpec { kind: kind.to_string(), rows, cols, dim, tolerance }
    }

    /// The declared system; `tol` overrides the declared tolerance when given.
    pub fn to_system(&self, tol: Option<f64>) -> Result<TripleSystem> {
        let square = || -> Result<usize> {
            match (self.dim, self.rows, self.cols) {
                (Some(n), _, _) => Ok(n),
                (None, Some(r), Some(c)) if r == c => Ok(r),
                _ => Err(Error::Parse(format!("{} system needs `dim` or equal `rows`/`cols`", self.kind))),
            }
        };
        let kind = match self.kind.to_ascii_lowercase().as_str() {
            "matrix" | "rectangular" => match (self.rows, self.cols, self.dim) {
                (Some(rows), Some(cols), _) => SystemKind::Rectangular { rows, cols },
                (None, None, Some(n)) => SystemKind::Rectangular { rows: n, cols: n },
                _ => return Err(Error::Parse("matrix system needs `rows` and `cols`".into())),
            },
            "symmetric" => SystemKind::Symmetric { n: square()? },
            "antisymmetric" => SystemKind::Antisymmetric { n: square()? },
            "spin" => SystemKind::Spin {
                dim: self.dim.ok_or_else(|| Error::Parse("spin system needs `dim`".into()))?,
            },
            other => return Err(Error::Parse(format!("unknown system kind {other:?}"))),
        };
        TripleSystem::new(kind, tol.or(self.tolerance).unwrap_or(DEFAULT_TOL))
    }
}

impl ElementFile {
    pub fn from_element(x: &Element) -> Self {
        let entries = match x.payload() {
            Payload::Matrix(m) => Entries::Matrix(
                (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect(),
            ),
            Payload::Vector(v) => Entries::Vector(v.iter().map(|z| [z.re, z.im]).collect()),
        };
        ElementFile { system: SystemSpec::from_system(x.system()), entries }
    }

    pub fn to_element(&self, tol: Option<f64>) -> Result<Element> {
        let sys = self.system.to_system(tol)?;
        match (&self.entries, sys.kind()) {
            (Entries::Vector(v), SystemKind::Spin { .. }) => {
                Element::from_vector(sys, CVector::from_iterator(v.len(), v.iter().map(|p| c64(p[0], p[1]))))
            }
            (Entries::Matrix(rows), kind) if !kind.is_spin() => {
                let r = rows.len();
                let c = rows.first().map_or(0, |row| row.len());
                if rows.iter().any(|row| row.len() != c) {
                    return Err(Error::Parse("ragged matrix rows".into()));
                }
                Element::from_matrix(sys, CMatrix::from_fn(r, c, |i, j| c64(rows[i][j][0], rows[i][j][1])))
            }
            // An empty vector parses as an empty matrix; let the shape check report it.
            (Entries::Matrix(rows), SystemKind::Spin { .. }) if rows.is_empty() => {
                Element::from_vector(sys, CVector::zeros(0))
            }
            _ => Err(Error::Parse(format!("entries do not match the layout of a {} system", self.system.kind))),
        }
    }
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn element_to_json(x: &Element) -> Value {
    serde_json::to_value(ElementFile::from_element(x)).expect("element files serialize")
}

pub fn element_from_json(v: Value, tol: Option<f64>) -> Result<Element> {
    let file: ElementFile = serde_json::from_value(v).map_err(parse_err)?;
    file.to_element(tol)
}

pub fn parse_element(text: &str, tol: Option<f64>) -> Result<Element> {
    let file: ElementFile = serde_json::from_str(text).map_err(parse_err)?;
    file.to_element(tol)
}

pub fn element_to_string(x: &Element) -> String {
    serde_json::to_string_pretty(&ElementFile::from_element(x)).expect("element files serialize")
}

pub fn read_element(path: &Path, tol: Option<f64>) -> Result<Element> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_element(&text, tol)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct CertificateFile {
    claim: Claim,
    system: SystemSpec,
    links: Vec<ElementFile>,
    link_relations: Vec<RelationKind>,
    residuals: Vec<f64>,
    #[serde(default)]
    verified: bool,
}

pub fn certificate_to_json(c: &ChainCertificate) -> Value {
    let file = CertificateFile {
        claim: c.claim,
        system: SystemSpec::from_system(&c.system),
        links: c.links.iter().map(ElementFile::from_element).collect(),
        link_relations: c.link_relations.clone(),
        residuals: c.residuals.clone(),
        verified: c.verified,
    };
    serde_json::to_value(file).expect("certificates serialize")
}

pub fn certificate_to_string(c: &ChainCertificate) -> String {
    serde_json::to_string_pretty(&certificate_to_json(c)).expect("certificates serialize")
}

/// Parses a certificate. The `verified` flag is carried over as written; use
/// [`crate::chains::verify_certificate`] to re-check it.
pub fn parse_certificate(text: &str, tol: Option<f64>) -> Result<ChainCertificate> {
    let file: CertificateFile = serde_json::from_str(text).map_err(parse_err)?;
    let system = file.system.to_system(tol)?;
    let links = file
        .links
        .iter()
        .map(|l| l.to_element(Some(system.tol())))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChainCertificate {
        claim: file.claim,
        system,
        links,
        link_relations: file.link_relations,
        residuals: file.residuals,
        verified: file.verified,
    })
}

pub fn read_certificate(path: &Path, tol: Option<f64>) -> Result<ChainCertificate> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_certificate(&text, tol)
}
