//! Matroid recognition and shelling orders of bases.

use std::sync::Arc;

use serde::Serialize;

use crate::complex::{SimplicialComplex, Subcomplex};
use crate::error::{Error, Result};
use crate::face::Face;

/// Outcome of the exchange-axiom scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatroidVerdict {
    /// `None` when the complex is a matroid; otherwise a pair `(a, b)` with
    /// `|a| < |b|` such that no `x ∈ b \ a` gives a face `a ∪ {x}`.
    pub witness: Option<(Face, Face)>,
}

impl MatroidVerdict {
    pub fn is_matroid(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks the independent-set exchange axiom over every pair of faces.
///
/// Smaller sets `a` are scanned by ascending cardinality with ties in reverse
/// lexicographic order, larger sets `b` in canonical order, so the reported
/// witness is deterministic.
pub fn is_matroid(complex: &SimplicialComplex) -> MatroidVerdict {
    let faces = complex.faces();
    let mut scan = faces.to_vec();
    scan.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| y.cmp(x)));
    for &a in &scan {
        for &b in faces.iter().filter(|b| b.len() > a.len()) {
            let augmentable = b
                .difference(a)
                .vertices()
                .any(|x| complex.contains(a.with(x)));
            if !augmentable {
                return MatroidVerdict {
                    witness: Some((a, b)),
                };
            }
        }
    }
    MatroidVerdict { witness: None }
}

/// Common facet cardinality of a pure complex.
pub fn rank(complex: &SimplicialComplex) -> Result<usize> {
    if complex.is_pure() {
        Ok(complex.facets()[0].len())
    } else {
        Err(Error::NotPure)
    }
}

/// One step `j ≥ 2` of a shelling: the facets of `B̃_{j-1} ∩ B_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellingStep {
    /// 1-based position of the basis in the order.
    pub index: usize,
    pub basis: Face,
    pub intersection: Subcomplex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShellingCheck {
    pub ok: bool,
    /// First 1-based index `j` whose intersection is not pure of cardinality `r - 1`.
    pub first_failure: Option<usize>,
}

/// A facet order whose codimension-one condition has been verified.
#[derive(Debug, Clone)]
pub struct ShellingOrder {
    complex: Arc<SimplicialComplex>,
    order: Vec<Face>,
    rank: usize,
    steps: Vec<ShellingStep>,
}

impl ShellingOrder {
    /// Verifies `order` and wraps it; fails if any step violates the condition.
    pub fn new(complex: Arc<SimplicialComplex>, order: Vec<Face>) -> Result<Self> {
        let check = verify_shelling(&complex, &order)?;
        if let Some(step) = check.first_failure {
            return Err(Error::ShellingVerificationFailed { step });
        }
        let rank = rank(&complex)?;
        let steps = partial_union_intersections(&complex, &order)?;
        Ok(ShellingOrder {
            complex,
            order,
            rank,
            steps,
        })
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn order(&self) -> &[Face] {
        &self.order
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Steps `j = 2..=k` with their intersection subcomplexes.
    pub fn steps(&self) -> &[ShellingStep] {
        &self.steps
    }
}

pub(crate) fn check_permutation(complex: &SimplicialComplex, order: &[Face]) -> Result<()> {
    let mut sorted = order.to_vec();
    sorted.sort_by(Face::facet_order);
    if sorted != complex.facets() {
        return Err(Error::NotAPermutation);
    }
    Ok(())
}

/// `B̃_{j-1} ∩ B̄_j` for every `j ≥ 2` of the given order.
pub(crate) fn partial_union_intersections(
    complex: &Arc<SimplicialComplex>,
    order: &[Face],
) -> Result<Vec<ShellingStep>> {
    let mut steps = Vec::with_capacity(order.len().saturating_sub(1));
    let Some(&first) = order.first() else {
        return Ok(steps);
    };
    let mut partial = Subcomplex::simplex(complex.clone(), first)?;
    for (pos, &basis) in order.iter().enumerate().skip(1) {
        let simplex = Subcomplex::simplex(complex.clone(), basis)?;
        let intersection = partial.intersect(&simplex)?;
        partial = partial.union(&simplex)?;
        steps.push(ShellingStep {
            index: pos + 1,
            basis,
            intersection,
        });
    }
    Ok(steps)
}

/// Checks that every `B̃_{j-1} ∩ B_j` has only facets of cardinality `r - 1`.
pub fn verify_shelling(complex: &Arc<SimplicialComplex>, order: &[Face]) -> Result<ShellingCheck> {
    check_permutation(complex, order)?;
    let r = rank(complex)?;
    for step in partial_union_intersections(complex, order)? {
        if step.intersection.facets().iter().any(|f| f.len() + 1 != r) {
            return Ok(ShellingCheck {
                ok: false,
                first_failure: Some(step.index),
            });
        }
    }
    Ok(ShellingCheck {
        ok: true,
        first_failure: None,
    })
}

/// The lexicographic order of the bases of a matroid, verified as a shelling.
pub fn shelling_order(complex: &Arc<SimplicialComplex>) -> Result<ShellingOrder> {
    if let Some((independent, larger)) = is_matroid(complex).witness {
        return Err(Error::NotAMatroid {
            independent,
            larger,
        });
    }
    // Bases share a cardinality, so canonical facet order is lexicographic order.
    let order = complex.facets().to_vec();
    ShellingOrder::new(complex.clone(), order)
}

/// All `r`-subsets of `[n]`.
pub fn uniform_matroid(r: usize, n: usize) -> Result<SimplicialComplex> {
    let bases: Vec<Face> = Face::ground(n).subsets().filter(|f| f.len() == r).collect();
    SimplicialComplex::from_faces(n, bases)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(v: &[usize]) -> Face {
        Face::from_vertices(v.iter().copied()).unwrap()
    }

    fn cx(n: usize, sets: &[&[usize]]) -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::from_facets(n, sets.iter().map(|s| s.iter().copied())).unwrap())
    }

    #[test]
    fn uniform_and_full_are_matroids() {
        for n in 1..=6 {
            assert!(is_matroid(&SimplicialComplex::full_simplex(n).unwrap()).is_matroid());
            for r in 1..=n {
                let u = uniform_matroid(r, n).unwrap();
                assert!(is_matroid(&u).is_matroid(), "U_{{{r},{n}}}");
                assert_eq!(rank(&u).unwrap(), r);
            }
        }
    }

    #[test]
    fn figure_b_witness() {
        let fig_b = cx(5, &[&[1, 2, 3], &[3, 4, 5]]);
        let verdict = is_matroid(&fig_b);
        assert_eq!(verdict.witness, Some((f(&[5]), f(&[1, 2]))));
    }

    #[test]
    fn figure_a_exchange_fails() {
        let fig_a = cx(5, &[&[1, 2, 3], &[2, 3, 5], &[3, 4, 5]]);
        let verdict = is_matroid(&fig_a);
        let (a, b) = verdict
            .witness
            .expect("exchange axiom fails on this complex");
        assert!(a.len() < b.len());
        assert!(b
            .difference(a)
            .vertices()
            .all(|x| !fig_a.contains(a.with(x))));
    }

    #[test]
    fn rank_requires_purity() {
        assert_eq!(rank(&cx(3, &[&[1, 2], &[3]])), Err(Error::NotPure));
        assert_eq!(
            rank(&SimplicialComplex::full_simplex(4).unwrap()).unwrap(),
            4
        );
        assert_eq!(
            rank(&cx(5, &[&[1, 2, 3], &[2, 3, 5], &[3, 4, 5]])).unwrap(),
            3
        );
    }

    #[test]
    fn lex_shelling_of_u23() {
        let u = Arc::new(uniform_matroid(2, 3).unwrap());
        let order = shelling_order(&u).unwrap();
        assert_eq!(order.order(), &[f(&[1, 2]), f(&[1, 3]), f(&[2, 3])]);
        assert_eq!(order.steps()[0].intersection.facets(), &[f(&[1])]);
        assert_eq!(order.steps()[1].intersection.facets(), &[f(&[2]), f(&[3])]);
        assert_eq!(order.rank(), 2);
    }

    #[test]
    fn lex_shelling_of_u24_and_full() {
        let u = Arc::new(uniform_matroid(2, 4).unwrap());
        let order = shelling_order(&u).unwrap();
        assert_eq!(order.order().len(), 6);
        assert!(verify_shelling(&u, order.order()).unwrap().ok);

        let full = Arc::new(SimplicialComplex::full_simplex(4).unwrap());
        let order = shelling_order(&full).unwrap();
        assert_eq!(order.order().len(), 1);
        assert!(order.steps().is_empty());
    }

    #[test]
    fn shelling_rejects_non_matroids_and_bad_orders() {
        let fig_b = cx(5, &[&[1, 2, 3], &[3, 4, 5]]);
        assert!(matches!(
            shelling_order(&fig_b),
            Err(Error::NotAMatroid { .. })
        ));

        let disconnected = cx(5, &[&[1, 2], &[4, 5]]);
        for order in [[f(&[1, 2]), f(&[4, 5])], [f(&[4, 5]), f(&[1, 2])]] {
            let check = verify_shelling(&disconnected, &order).unwrap();
            assert_eq!(
                check,
                ShellingCheck {
                    ok: false,
                    first_failure: Some(2)
                }
            );
        }

        let u = Arc::new(uniform_matroid(2, 3).unwrap());
        assert_eq!(
            verify_shelling(&u, &[f(&[1, 2]), f(&[1, 3])]),
            Err(Error::NotAPermutation)
        );
        assert_eq!(
            verify_shelling(&u, &[f(&[1, 2]), f(&[1, 2]), f(&[1, 3])]),
            Err(Error::NotAPermutation)
        );

        let single = cx(3, &[&[1, 3]]);
        assert!(verify_shelling(&single, &[f(&[1, 3])]).unwrap().ok);
    }

    #[test]
    fn bad_order_on_matroid_is_detected() {
        // 12, 34 first: the second basis meets the first in the empty face.
        let u = Arc::new(uniform_matroid(2, 4).unwrap());
        let order = [
            f(&[1, 2]),
            f(&[3, 4]),
            f(&[1, 3]),
            f(&[1, 4]),
            f(&[2, 3]),
            f(&[2, 4]),
        ];
        let check = verify_shelling(&u, &order).unwrap();
        assert_eq!(check.first_failure, Some(2));
        assert!(matches!(
            ShellingOrder::new(u, order.to_vec()),
            Err(Error::ShellingVerificationFailed { step: 2 })
        ));
    }
}
