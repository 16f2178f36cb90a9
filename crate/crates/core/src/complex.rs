//! Finite simplicial complexes on `[n]`, stored by their facet antichain.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::face::{Face, MAX_VERTICES};

/// Sorts into canonical facet order and drops duplicates and absorbed faces.
///
/// An empty input, or one holding only the empty face, normalizes to `[∅]`.
pub fn normalize_antichain(mut faces: Vec<Face>) -> Vec<Face> {
    faces.sort_by(Face::facet_order);
    faces.dedup();
    let mut kept: Vec<Face> = Vec::with_capacity(faces.len());
    for face in faces {
        // Anything that could contain `face` is at least as large and was seen already.
        if !kept.iter().any(|k| face.is_subset_of(*k)) {
            kept.push(face);
        }
    }
    if kept.is_empty() {
        kept.push(Face::EMPTY);
    }
    kept
}

fn check_vertex_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroVertices);
    }
    if n > MAX_VERTICES {
        return Err(Error::CapacityExceeded {
            n,
            max: MAX_VERTICES,
        });
    }
    Ok(())
}

pub struct SimplicialComplex {
    n: usize,
    facets: Vec<Face>,
    faces: OnceLock<Vec<Face>>,
}

impl SimplicialComplex {
    /// The complex generated by `sets` on the vertex set `[n]`.
    pub fn from_facets<I, S>(n: usize, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = usize>,
    {
        check_vertex_count(n)?;
        let mut faces = Vec::new();
        for set in sets {
            let mut bits = Face::EMPTY;
            for v in set {
                if v == 0 || v > n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                bits = bits.with(v);
            }
            faces.push(bits);
        }
        Self::from_faces(n, faces)
    }

    pub fn from_faces(n: usize, faces: Vec<Face>) -> Result<Self> {
        check_vertex_count(n)?;
        if faces.is_empty() {
            return Err(Error::EmptyFacetList);
        }
        if let Some(bad) = faces.iter().find(|f| f.max_vertex() > n) {
            return Err(Error::VertexOutOfRange {
                vertex: bad.max_vertex(),
                n,
            });
        }
        Ok(SimplicialComplex {
            n,
            facets: normalize_antichain(faces),
            faces: OnceLock::new(),
        })
    }

    /// The full simplex `2^[n]`.
    pub fn full_simplex(n: usize) -> Result<Self> {
        check_vertex_count(n)?;
        Self::from_faces(n, vec![Face::ground(n)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Facets in canonical order (cardinality descending, then lexicographic).
    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    /// All faces including `∅`, sorted by cardinality then lexicographically.
    pub fn faces(&self) -> &[Face] {
        self.faces.get_or_init(|| {
            let mut all = BTreeSet::new();
            for facet in &self.facets {
                all.extend(facet.subsets());
            }
            all.into_iter().collect()
        })
    }

    /// Nonempty faces in canonical order.
    pub fn nonempty_faces(&self) -> &[Face] {
        let faces = self.faces();
        // `∅` sorts first and is always present.
        &faces[1..]
    }

    pub fn contains(&self, face: Face) -> bool {
        self.facets.iter().any(|f| face.is_subset_of(*f))
    }

    pub fn is_facet(&self, face: Face) -> bool {
        self.facets.contains(&face)
    }

    pub fn is_pure(&self) -> bool {
        let first = self.facets[0].len();
        self.facets.iter().all(|f| f.len() == first)
    }

    /// Maximum facet cardinality minus one; `-1` for the complex `{∅}`.
    pub fn dimension(&self) -> isize {
        self.facets[0].len() as isize - 1
    }

    pub fn is_full_simplex(&self) -> bool {
        self.facets.len() == 1 && self.facets[0] == Face::ground(self.n)
    }

    fn check_vertex(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::VertexOutOfRange {
                vertex: i,
                n: self.n,
            });
        }
        Ok(())
    }

    fn check_face(&self, face: Face) -> Result<()> {
        if self.contains(face) {
            Ok(())
        } else {
            Err(Error::FaceNotInComplex(face))
        }
    }

    /// Faces `T` with `i ∉ T` and `T ∪ {i}` in the complex.
    pub fn link_vertex(&self, i: usize) -> Result<Vec<Face>> {
        self.check_vertex(i)?;
        let mut out = BTreeSet::new();
        for facet in self.facets.iter().filter(|f| f.contains(i)) {
            out.extend(facet.without(i).subsets());
        }
        Ok(out.into_iter().collect())
    }

    /// Faces disjoint from `s` whose union with `s` is a face.
    pub fn link(&self, s: Face) -> Result<Vec<Face>> {
        self.check_face(s)?;
        let mut out = BTreeSet::new();
        for facet in self.facets.iter().filter(|f| s.is_subset_of(**f)) {
            out.extend(facet.difference(s).subsets());
        }
        Ok(out.into_iter().collect())
    }

    /// Faces contained in some face that contains `s`.
    pub fn star(&self, s: Face) -> Result<Vec<Face>> {
        self.check_face(s)?;
        let mut out = BTreeSet::new();
        for facet in self.facets.iter().filter(|f| s.is_subset_of(**f)) {
            out.extend(facet.subsets());
        }
        Ok(out.into_iter().collect())
    }
}

impl Clone for SimplicialComplex {
    fn clone(&self) -> Self {
        SimplicialComplex {
            n: self.n,
            facets: self.facets.clone(),
            faces: OnceLock::new(),
        }
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.facets == other.facets
    }
}

impl Eq for SimplicialComplex {}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("n", &self.n)
            .field("facets", &self.facets)
            .finish()
    }
}

pub(crate) fn same_complex(a: &Arc<SimplicialComplex>, b: &Arc<SimplicialComplex>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A subcomplex of a parent complex, held as a normalized facet antichain.
///
/// The empty subcomplex is the facet list `[∅]`.
#[derive(Clone)]
pub struct Subcomplex {
    parent: Arc<SimplicialComplex>,
    facets: Vec<Face>,
}

impl Subcomplex {
    pub fn new(parent: Arc<SimplicialComplex>, faces: Vec<Face>) -> Result<Self> {
        if let Some(bad) = faces.iter().find(|f| !parent.contains(**f)) {
            return Err(Error::FaceNotInComplex(*bad));
        }
        Ok(Subcomplex {
            parent,
            facets: normalize_antichain(faces),
        })
    }

    /// The whole parent as a subcomplex of itself.
    pub fn whole(parent: Arc<SimplicialComplex>) -> Self {
        let facets = parent.facets().to_vec();
        Subcomplex { parent, facets }
    }

    /// The simplex `2^face`.
    pub fn simplex(parent: Arc<SimplicialComplex>, face: Face) -> Result<Self> {
        Self::new(parent, vec![face])
    }

    pub fn empty(parent: Arc<SimplicialComplex>) -> Self {
        Subcomplex {
            parent,
            facets: vec![Face::EMPTY],
        }
    }

    pub fn parent(&self) -> &Arc<SimplicialComplex> {
        &self.parent
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn is_empty(&self) -> bool {
        self.facets.len() == 1 && self.facets[0].is_empty()
    }

    pub fn contains(&self, face: Face) -> bool {
        self.facets.iter().any(|f| face.is_subset_of(*f))
    }

    fn check_parent(&self, other: &Subcomplex) -> Result<()> {
        if same_complex(&self.parent, &other.parent) {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }

    pub fn union(&self, other: &Subcomplex) -> Result<Subcomplex> {
        self.check_parent(other)?;
        let merged = self
            .facets
            .iter()
            .chain(other.facets.iter())
            .copied()
            .collect();
        Ok(Subcomplex {
            parent: self.parent.clone(),
            facets: normalize_antichain(merged),
        })
    }

    pub fn intersect(&self, other: &Subcomplex) -> Result<Subcomplex> {
        self.check_parent(other)?;
        let mut pairwise = Vec::with_capacity(self.facets.len() * other.facets.len());
        for a in &self.facets {
            for b in &other.facets {
                pairwise.push(a.intersection(*b));
            }
        }
        Ok(Subcomplex {
            parent: self.parent.clone(),
            facets: normalize_antichain(pairwise),
        })
    }
}

impl PartialEq for Subcomplex {
    fn eq(&self, other: &Self) -> bool {
        self.facets == other.facets && same_complex(&self.parent, &other.parent)
    }
}

impl fmt::Debug for Subcomplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Subcomplex").field(&self.facets).finish()
    }
}
