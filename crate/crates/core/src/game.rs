//! Characteristic functions on the faces of a complex.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{same_complex, SimplicialComplex, Subcomplex};
use crate::error::{Error, Result};
use crate::face::Face;

/// A game `v` on a complex, stored sparsely (unset faces are worth 0).
#[derive(Debug, Clone)]
pub struct Game {
    complex: Arc<SimplicialComplex>,
    values: BTreeMap<Face, f64>,
}

impl Game {
    /// The zero game.
    pub fn zero(complex: Arc<SimplicialComplex>) -> Self {
        Game {
            complex,
            values: BTreeMap::new(),
        }
    }

    /// A game from explicit worths. `∅` may appear only with worth 0.
    pub fn from_table<I>(complex: Arc<SimplicialComplex>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Face, f64)>,
    {
        let mut values = BTreeMap::new();
        for (face, value) in entries {
            if face.is_empty() {
                if value != 0.0 {
                    return Err(Error::NonzeroEmptyValue(value));
                }
                continue;
            }
            if !complex.contains(face) {
                return Err(Error::FaceNotInComplex(face));
            }
            if value != 0.0 {
                values.insert(face, value);
            } else {
                values.remove(&face);
            }
        }
        Ok(Game { complex, values })
    }

    /// `v(S) = |S|`.
    pub fn cardinality(complex: Arc<SimplicialComplex>) -> Self {
        let values = complex
            .nonempty_faces()
            .iter()
            .map(|&f| (f, f.len() as f64))
            .collect();
        Game { complex, values }
    }

    /// The carrier game `v_T` (`strict = false`, worth 1 on faces containing `T`)
    /// or `v̂_T` (`strict = true`, worth 1 on faces strictly containing `T`).
    pub fn carrier(complex: Arc<SimplicialComplex>, carrier: Face, strict: bool) -> Result<Self> {
        if !complex.contains(carrier) {
            return Err(Error::FaceNotInComplex(carrier));
        }
        if carrier.is_empty() && !strict {
            return Err(Error::EmptyCarrierNotStrict);
        }
        let values = complex
            .nonempty_faces()
            .iter()
            .filter(|s| {
                if strict {
                    carrier.is_proper_subset_of(**s)
                } else {
                    carrier.is_subset_of(**s)
                }
            })
            .map(|&s| (s, 1.0))
            .collect();
        Ok(Game { complex, values })
    }

    /// Independent uniform draws in `[lo, hi]` on every nonempty face, in
    /// canonical face order. Deterministic for a given seed.
    pub fn random(complex: Arc<SimplicialComplex>, seed: u64, lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::InvalidRange { lo, hi });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = complex
            .nonempty_faces()
            .iter()
            .map(|&f| (f, if lo == hi { lo } else { rng.gen_range(lo..=hi) }))
            .collect();
        Ok(Game { complex, values })
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    /// `v(S)`; infeasible coalitions are an error rather than 0.
    pub fn evaluate(&self, face: Face) -> Result<f64> {
        if face.is_empty() {
            return Ok(0.0);
        }
        if !self.complex.contains(face) {
            return Err(Error::FaceNotInComplex(face));
        }
        Ok(self.value(face))
    }

    /// Worth lookup for faces already known to be feasible.
    pub(crate) fn value(&self, face: Face) -> f64 {
        self.values.get(&face).copied().unwrap_or(0.0)
    }

    /// Stored nonzero worths in canonical face order.
    pub fn entries(&self) -> impl Iterator<Item = (Face, f64)> + '_ {
        self.values.iter().map(|(f, v)| (*f, *v))
    }

    /// Sum of `v` over the facets of `k`; the empty subcomplex is worth 0.
    pub fn complex_worth(&self, k: &Subcomplex) -> Result<f64> {
        if !same_complex(&self.complex, k.parent()) {
            return Err(Error::ParentMismatch);
        }
        Ok(k.facets().iter().map(|f| self.value(*f)).sum())
    }

    pub fn scale(&self, c: f64) -> Game {
        let values = self
            .values
            .iter()
            .map(|(f, v)| (*f, c * v))
            .filter(|(_, v)| *v != 0.0)
            .collect();
        Game {
            complex: self.complex.clone(),
            values,
        }
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Game) -> Result<Game> {
        if !same_complex(&self.complex, &other.complex) {
            return Err(Error::ComplexMismatch);
        }
        let mut values = self.values.clone();
        for (f, v) in &other.values {
            *values.entry(*f).or_insert(0.0) += v;
        }
        values.retain(|_, v| *v != 0.0);
        Ok(Game {
            complex: self.complex.clone(),
            values,
        })
    }
}
