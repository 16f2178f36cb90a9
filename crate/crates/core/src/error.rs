use thiserror::Error;

use crate::face::Face;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} is out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("a complex needs at least one generating face")]
    EmptyFacetList,
    #[error("vertex count {n} exceeds the capacity of {max}")]
    CapacityExceeded { n: usize, max: usize },
    #[error("vertex count must be at least 1")]
    ZeroVertices,
    #[error("face {0} is not a face of the complex")]
    FaceNotInComplex(Face),
    #[error("subcomplexes belong to different parent complexes")]
    ParentMismatch,
    #[error("operands are defined on different complexes")]
    ComplexMismatch,
    #[error("complex is not pure")]
    NotPure,
    #[error("complex is not a matroid: {independent} cannot be augmented from {larger}")]
    NotAMatroid { independent: Face, larger: Face },
    #[error("shelling verification failed at step {step}")]
    ShellingVerificationFailed { step: usize },
    #[error("facet order is not a permutation of the facets")]
    NotAPermutation,
    #[error("the carrier game on the empty face is only defined in strict form")]
    EmptyCarrierNotStrict,
    #[error("the empty coalition must have worth 0, got {0}")]
    NonzeroEmptyValue(f64),
    #[error("the complex is not the full simplex, so the grand coalition is infeasible")]
    NotFullSimplex,
    #[error("coefficient on {0} is not supported on a facet")]
    SupportNotFacets(Face),
    #[error("coefficient families cannot carry a weight on the empty face")]
    EmptyFaceCoefficient,
    #[error("{facets} facets exceed the enumeration cap of {cap}")]
    FacetCapExceeded { facets: usize, cap: usize },
    #[error("index {index} is out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("scheme entry for player {player} on {face}: face is not in the player's link")]
    NotInLink { player: usize, face: Face },
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("cannot parse face key {0:?}")]
    BadFaceKey(String),
    #[error("invalid document: {0}")]
    Document(String),
}
