//! File formats: simplicial complexes and virtual-piece catalogs as JSON.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use skk_core::simplicial::{SimplicialComplex, SimplicialError, Vertex};
use skk_core::virtual_bordism::{
    BoundaryLabel, Catalog, Orientation, Recipe, VirtualError, VirtualPiece,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    /// serde_json errors carry line and column.
    #[error("{path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

fn read(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn invalid(path: &str, message: impl ToString) -> FormatError {
    FormatError::Invalid {
        path: path.into(),
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub dim: usize,
    pub facets: Vec<Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientations: Option<Vec<i8>>,
}

impl ComplexFile {
    pub fn from_complex(k: &SimplicialComplex) -> Self {
        ComplexFile {
            dim: k.dim(),
            facets: k.facets().to_vec(),
            orientations: k.orientation().map(<[i8]>::to_vec),
        }
    }

    pub fn to_complex(&self) -> Result<SimplicialComplex, SimplicialError> {
        match &self.orientations {
            Some(s) => {
                SimplicialComplex::with_orientation(self.dim, self.facets.clone(), s.clone())
            }
            None => SimplicialComplex::new(self.dim, self.facets.clone()),
        }
    }
}

pub fn parse_complex(text: &str, origin: &str) -> Result<SimplicialComplex, FormatError> {
    let file: ComplexFile = serde_json::from_str(text).map_err(|source| FormatError::Json {
        path: origin.into(),
        source,
    })?;
    file.to_complex().map_err(|e| invalid(origin, e))
}

pub fn load_complex(path: &Path) -> Result<SimplicialComplex, FormatError> {
    parse_complex(&read(path)?, &path.display().to_string())
}

pub fn complex_to_json(k: &SimplicialComplex) -> String {
    serde_json::to_string_pretty(&ComplexFile::from_complex(k)).expect("serializable") + "\n"
}

/// A boundary label: either `"S3+"` / `"S3-"` or an object with a χ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelFile {
    Short(String),
    Full {
        name: String,
        #[serde(default)]
        chi: i64,
        orientation: OrientationFile,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrientationFile {
    In,
    Out,
}

impl LabelFile {
    fn to_label(&self) -> Result<BoundaryLabel, String> {
        match self {
            LabelFile::Short(s) => {
                let (name, o) = if let Some(n) = s.strip_suffix('+') {
                    (n, Orientation::Positive)
                } else if let Some(n) = s.strip_suffix('-') {
                    (n, Orientation::Negative)
                } else {
                    return Err(format!("label {s:?} must end in + or -"));
                };
                if name.is_empty() {
                    return Err(format!("label {s:?} has no name"));
                }
                Ok(BoundaryLabel::new(name, 0, o))
            }
            LabelFile::Full {
                name,
                chi,
                orientation,
            } => {
                let o = match orientation {
                    OrientationFile::In => Orientation::Negative,
                    OrientationFile::Out => Orientation::Positive,
                };
                Ok(BoundaryLabel::new(name, *chi, o))
            }
        }
    }

    fn from_label(l: &BoundaryLabel) -> Self {
        if l.chi == 0 {
            LabelFile::Short(l.to_string())
        } else {
            LabelFile::Full {
                name: l.name.clone(),
                chi: l.chi,
                orientation: match l.orientation {
                    Orientation::Negative => OrientationFile::In,
                    Orientation::Positive => OrientationFile::Out,
                },
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceFile {
    pub name: String,
    pub chi: i64,
    #[serde(default)]
    pub sigma: i64,
    #[serde(default)]
    pub boundary: Vec<LabelFile>,
    /// Exact rationals written as strings, e.g. `"10"` or `"3/2"`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub attributes: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityFile {
    pub recipe: String,
    pub equals: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogFile {
    pub dim: u32,
    pub l: u32,
    pub pieces: Vec<PieceFile>,
    #[serde(default)]
    pub b_sigma: BTreeMap<String, String>,
    #[serde(default)]
    pub identities: Vec<IdentityFile>,
}

impl CatalogFile {
    pub fn from_catalog(c: &Catalog) -> Self {
        CatalogFile {
            dim: c.dim,
            l: c.l,
            pieces: c
                .pieces()
                .map(|p| PieceFile {
                    name: p.name.clone().unwrap_or_default(),
                    chi: p.chi,
                    sigma: p.sigma,
                    boundary: p.boundary.iter().map(LabelFile::from_label).collect(),
                    attributes: p
                        .attributes
                        .iter()
                        .map(|(k, v)| (k.clone(), v.to_string()))
                        .collect(),
                })
                .collect(),
            b_sigma: c.b_sigma().clone(),
            identities: c
                .identities()
                .iter()
                .map(|(r, n)| IdentityFile {
                    recipe: r.to_string(),
                    equals: n.clone(),
                })
                .collect(),
        }
    }

    pub fn to_catalog(&self) -> Result<Catalog, String> {
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for p in &self.pieces {
            let boundary = p
                .boundary
                .iter()
                .map(LabelFile::to_label)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| format!("piece {}: {e}", p.name))?;
            let mut attributes = BTreeMap::new();
            for (k, v) in &p.attributes {
                let q = BigRational::from_str(v.trim()).map_err(|_| {
                    format!("piece {}: attribute {k} = {v:?} is not a rational", p.name)
                })?;
                attributes.insert(k.clone(), q);
            }
            pieces.push(
                VirtualPiece::new(&p.name, self.dim, p.chi, p.sigma, boundary, attributes)
                    .map_err(|e| e.to_string())?,
            );
        }
        let identities = self
            .identities
            .iter()
            .map(|i| Recipe::parse(&i.recipe).map(|r| (r, i.equals.clone())))
            .collect::<Result<Vec<_>, VirtualError>>()
            .map_err(|e| e.to_string())?;
        Catalog::new(self.dim, self.l, pieces, self.b_sigma.clone(), identities)
            .map_err(|e| e.to_string())
    }
}

pub fn parse_catalog(text: &str, origin: &str) -> Result<Catalog, FormatError> {
    let file: CatalogFile = serde_json::from_str(text).map_err(|source| FormatError::Json {
        path: origin.into(),
        source,
    })?;
    file.to_catalog().map_err(|e| invalid(origin, e))
}

pub fn load_catalog(path: &Path) -> Result<Catalog, FormatError> {
    parse_catalog(&read(path)?, &path.display().to_string())
}

pub fn catalog_to_json(c: &Catalog) -> String {
    serde_json::to_string_pretty(&CatalogFile::from_catalog(c)).expect("serializable") + "\n"
}
