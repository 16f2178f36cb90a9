//! Faces (coalitions) as fixed-width bit sets over the vertices `1..=MAX_VERTICES`.
//!
//! Vertex `i` is stored in bit `i - 1`. The empty face is a regular value and
//! is always distinguishable from "no face" (`Option<Face>`).

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 24;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Face(u32);

impl Face {
    pub const EMPTY: Face = Face(0);

    /// Builds a face from 1-based vertex labels. Repeated vertices are merged.
    pub fn from_vertices<I: IntoIterator<Item = usize>>(vertices: I) -> Result<Face> {
        let mut bits = 0u32;
        for v in vertices {
            if v == 0 || v > MAX_VERTICES {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: MAX_VERTICES,
                });
            }
            bits |= 1 << (v - 1);
        }
        Ok(Face(bits))
    }

    pub fn from_bits(bits: u32) -> Face {
        Face(bits & ((1u32 << MAX_VERTICES) - 1))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(v: usize) -> Result<Face> {
        Face::from_vertices([v])
    }

    /// The face `{1, ..., n}`.
    pub fn ground(n: usize) -> Face {
        Face::from_bits(if n >= 32 { u32::MAX } else { (1u32 << n) - 1 })
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        (1..=MAX_VERTICES).contains(&v) && self.0 & (1 << (v - 1)) != 0
    }

    pub fn is_subset_of(self, other: Face) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset_of(self, other: Face) -> bool {
        self != other && self.is_subset_of(other)
    }

    pub fn union(self, other: Face) -> Face {
        Face(self.0 | other.0)
    }

    pub fn intersection(self, other: Face) -> Face {
        Face(self.0 & other.0)
    }

    pub fn difference(self, other: Face) -> Face {
        Face(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Face) -> bool {
        self.0 & other.0 == 0
    }

    /// Adds vertex `v`; panics if `v` is outside `1..=MAX_VERTICES`.
    pub fn with(self, v: usize) -> Face {
        assert!((1..=MAX_VERTICES).contains(&v), "vertex {v} out of range");
        Face(self.0 | (1 << (v - 1)))
    }

    pub fn without(self, v: usize) -> Face {
        if v == 0 || v > MAX_VERTICES {
            return self;
        }
        Face(self.0 & !(1 << (v - 1)))
    }

    /// Largest vertex label, or 0 for the empty face.
    pub fn max_vertex(self) -> usize {
        (32 - self.0.leading_zeros()) as usize
    }

    /// Vertices in ascending order.
    pub fn vertices(self) -> Vertices {
        Vertices(self.0)
    }

    /// All subsets of this face, including the empty face and the face itself.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(self.0),
        }
    }

    /// Comma-joined ascending vertex list; `""` for the empty face.
    pub fn key(self) -> String {
        let parts: Vec<String> = self.vertices().map(|v| v.to_string()).collect();
        parts.join(",")
    }

    pub fn parse_key(key: &str) -> Result<Face> {
        let key = key.trim();
        if key.is_empty() {
            return Ok(Face::EMPTY);
        }
        let mut vertices = Vec::new();
        for part in key.split(',') {
            let v: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::BadFaceKey(key.to_string()))?;
            vertices.push(v);
        }
        Face::from_vertices(vertices)
    }

    /// Lexicographic comparison of the sorted vertex lists, for faces of equal size.
    fn lex_cmp_equal_len(self, other: Face) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        // The smallest vertex of the symmetric difference decides the order.
        let lowest = (self.0 ^ other.0) & (self.0 ^ other.0).wrapping_neg();
        if self.0 & lowest != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// Canonical facet order: larger faces first, ties broken lexicographically.
    pub fn facet_order(a: &Face, b: &Face) -> Ordering {
        b.len().cmp(&a.len()).then_with(|| a.lex_cmp_equal_len(*b))
    }
}

/// Faces order by cardinality, then lexicographically by vertex list.
impl Ord for Face {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.lex_cmp_equal_len(*other))
    }
}

impl PartialOrd for Face {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub struct Vertices(u32);

impl Iterator for Vertices {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize + 1;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Vertices {}

/// Submask enumeration, from the full mask down to the empty set.
pub struct Subsets {
    mask: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = Face;

    fn next(&mut self) -> Option<Face> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & self.mask)
        };
        Some(Face(cur))
    }
}
