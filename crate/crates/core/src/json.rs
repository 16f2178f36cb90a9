//! JSON documents for complexes, games, value schemes and coefficient maps.
//!
//! Faces are written as comma-joined ascending vertex lists, with `""` for `∅`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::face::Face;
use crate::game::Game;
use crate::payoff::{CoefficientFamily, CoefficientLabel};
use crate::scheme::ValueScheme;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub n: usize,
    pub facets: Vec<Vec<usize>>,
}

impl ComplexDoc {
    pub fn from_complex(complex: &SimplicialComplex) -> Self {
        ComplexDoc {
            n: complex.n(),
            facets: complex
                .facets()
                .iter()
                .map(|f| f.vertices().collect())
                .collect(),
        }
    }

    pub fn build(&self) -> Result<SimplicialComplex> {
        SimplicialComplex::from_facets(self.n, self.facets.iter().map(|f| f.iter().copied()))
    }
}

/// A complex given inline or as a path relative to the referring document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexSource {
    Inline(ComplexDoc),
    Path(String),
}

impl ComplexSource {
    pub fn resolve(&self, base_dir: &Path) -> Result<SimplicialComplex> {
        match self {
            ComplexSource::Inline(doc) => doc.build(),
            ComplexSource::Path(p) => load_complex(&base_dir.join(p)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameKind {
    Table,
    Carrier,
    Cardinality,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarrierSpec {
    #[serde(rename = "T")]
    pub carrier: Vec<usize>,
    #[serde(default)]
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameDoc {
    pub complex: ComplexSource,
    pub kind: GameKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier: Option<CarrierSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<[f64; 2]>,
}

impl GameDoc {
    /// A `table` document listing every stored worth.
    pub fn from_game(game: &Game) -> Self {
        GameDoc {
            complex: ComplexSource::Inline(ComplexDoc::from_complex(game.complex())),
            kind: GameKind::Table,
            values: Some(game.entries().map(|(f, v)| (f.key(), v)).collect()),
            carrier: None,
            seed: None,
            range: None,
        }
    }

    pub fn build(&self, base_dir: &Path) -> Result<Game> {
        let complex = Arc::new(self.complex.resolve(base_dir)?);
        match self.kind {
            GameKind::Table => {
                let values = self
                    .values
                    .as_ref()
                    .ok_or_else(|| Error::Document("table game needs \"values\"".into()))?;
                let entries = values
                    .iter()
                    .map(|(k, v)| Ok((Face::parse_key(k)?, *v)))
                    .collect::<Result<Vec<_>>>()?;
                Game::from_table(complex, entries)
            }
            GameKind::Carrier => {
                let spec = self
                    .carrier
                    .as_ref()
                    .ok_or_else(|| Error::Document("carrier game needs \"carrier\"".into()))?;
                let face = face_in(&complex, &spec.carrier)?;
                Game::carrier(complex, face, spec.strict)
            }
            GameKind::Cardinality => Ok(Game::cardinality(complex)),
            GameKind::Random => {
                let [lo, hi] = self.range.unwrap_or([-1.0, 1.0]);
                Game::random(complex, self.seed.unwrap_or(0), lo, hi)
            }
        }
    }
}

fn face_in(complex: &SimplicialComplex, vertices: &[usize]) -> Result<Face> {
    if let Some(&v) = vertices.iter().find(|&&v| v == 0 || v > complex.n()) {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            n: complex.n(),
        });
    }
    Face::from_vertices(vertices.iter().copied())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeDoc {
    pub complex: ComplexSource,
    /// Player id to `{face key: p_T^i}`.
    pub p: BTreeMap<usize, BTreeMap<String, f64>>,
}

impl SchemeDoc {
    pub fn from_scheme(scheme: &ValueScheme) -> Self {
        let mut p: BTreeMap<usize, BTreeMap<String, f64>> = BTreeMap::new();
        for ((i, t), w) in scheme.entries() {
            p.entry(i).or_default().insert(t.key(), w);
        }
        SchemeDoc {
            complex: ComplexSource::Inline(ComplexDoc::from_complex(scheme.complex())),
            p,
        }
    }

    pub fn build(&self, base_dir: &Path) -> Result<ValueScheme> {
        let complex = Arc::new(self.complex.resolve(base_dir)?);
        let mut entries = Vec::new();
        for (&player, row) in &self.p {
            for (key, &w) in row {
                entries.push(((player, Face::parse_key(key)?), w));
            }
        }
        ValueScheme::new(complex, entries)
    }
}

/// `{face key: coefficient}`.
pub type CoefficientMap = BTreeMap<String, f64>;

pub fn coefficients_to_map(family: &CoefficientFamily) -> CoefficientMap {
    family.entries().map(|(f, c)| (f.key(), c)).collect()
}

/// Builds a family; `Probabilistic` additionally requires facet support.
pub fn coefficients_from_map(
    complex: Arc<SimplicialComplex>,
    map: &CoefficientMap,
    label: CoefficientLabel,
) -> Result<CoefficientFamily> {
    let entries = map
        .iter()
        .map(|(k, c)| Ok((Face::parse_key(k)?, *c)))
        .collect::<Result<Vec<_>>>()?;
    match label {
        CoefficientLabel::Probabilistic => CoefficientFamily::probabilistic(complex, entries),
        _ => CoefficientFamily::generic(complex, entries),
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Document(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Document(format!("{}: {e}", path.display())))
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

/// Reads a complex document, or the complex referenced by a game or scheme document.
pub fn load_complex(path: &Path) -> Result<SimplicialComplex> {
    let value: serde_json::Value = read_json(path)?;
    if value.get("facets").is_some() {
        let doc: ComplexDoc = serde_json::from_value(value)
            .map_err(|e| Error::Document(format!("{}: {e}", path.display())))?;
        return doc.build();
    }
    if let Some(inner) = value.get("complex") {
        let source: ComplexSource = serde_json::from_value(inner.clone())
            .map_err(|e| Error::Document(format!("{}: {e}", path.display())))?;
        return source.resolve(&base_dir(path));
    }
    Err(Error::Document(format!(
        "{}: expected a complex, game or scheme document",
        path.display()
    )))
}

pub fn load_game(path: &Path) -> Result<Game> {
    let doc: GameDoc = read_json(path)?;
    doc.build(&base_dir(path))
}

pub fn load_scheme(path: &Path) -> Result<ValueScheme> {
    let doc: SchemeDoc = read_json(path)?;
    doc.build(&base_dir(path))
}

pub fn load_coefficients(path: &Path) -> Result<CoefficientMap> {
    read_json(path)
}
