//! Marginal-contribution value schemes `φ_i(v) = Σ_{T ∈ Link(i)} p_T^i (v(T ∪ i) - v(T))`
//! and their efficiency conditions.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::complex::{same_complex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::face::Face;
use crate::game::Game;
use crate::numeric::CompensatedSum;
use crate::payoff::{CoefficientFamily, CoefficientLabel, FACET_CAP};

/// Residual norm below which a solved system counts as feasible.
pub const FEASIBILITY_THRESHOLD: f64 = 1e-8;

/// Default tolerance for efficiency checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Coefficients `p_T^i`, keyed by `(player, T)` with `T ∈ Link(i, Δ)`.
#[derive(Debug, Clone)]
pub struct ValueScheme {
    complex: Arc<SimplicialComplex>,
    p: BTreeMap<(usize, Face), f64>,
}

/// Every `(i, T)` with `T ∈ Link(i, Δ)`, player ascending then face order.
pub fn incidences(complex: &SimplicialComplex) -> Vec<(usize, Face)> {
    (1..=complex.n())
        .flat_map(|i| {
            complex
                .link_vertex(i)
                .expect("player index is within 1..=n")
                .into_iter()
                .map(move |t| (i, t))
        })
        .collect()
}

impl ValueScheme {
    pub fn zero(complex: Arc<SimplicialComplex>) -> Self {
        ValueScheme {
            complex,
            p: BTreeMap::new(),
        }
    }

    /// Rejects entries whose face is not in the player's link.
    pub fn new<I>(complex: Arc<SimplicialComplex>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, Face), f64)>,
    {
        let mut p = BTreeMap::new();
        for ((player, face), weight) in entries {
            if player == 0 || player > complex.n() {
                return Err(Error::VertexOutOfRange {
                    vertex: player,
                    n: complex.n(),
                });
            }
            if face.contains(player) || !complex.contains(face.with(player)) {
                return Err(Error::NotInLink { player, face });
            }
            if weight != 0.0 {
                p.insert((player, face), weight);
            } else {
                p.remove(&(player, face));
            }
        }
        Ok(ValueScheme { complex, p })
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn get(&self, player: usize, face: Face) -> f64 {
        self.p.get(&(player, face)).copied().unwrap_or(0.0)
    }

    /// Nonzero entries, player ascending then face order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, Face), f64)> + '_ {
        self.p.iter().map(|(k, w)| (*k, *w))
    }

    /// Returns a copy with `p_T^i` replaced.
    pub fn with_entry(&self, player: usize, face: Face, weight: f64) -> Result<Self> {
        let mut entries: Vec<_> = self.entries().collect();
        entries.push(((player, face), weight));
        ValueScheme::new(self.complex.clone(), entries)
    }
}

fn check_same(a: &Arc<SimplicialComplex>, b: &Arc<SimplicialComplex>) -> Result<()> {
    if same_complex(a, b) {
        Ok(())
    } else {
        Err(Error::ComplexMismatch)
    }
}

/// The individual value of player `i`.
pub fn phi(v: &Game, s: &ValueScheme, i: usize) -> Result<f64> {
    check_same(v.complex(), s.complex())?;
    let n = s.complex().n();
    if i == 0 || i > n {
        return Err(Error::VertexOutOfRange { vertex: i, n });
    }
    let lo = (i, Face::EMPTY);
    let hi = (i + 1, Face::EMPTY);
    Ok(s.p
        .range(lo..hi)
        .map(|(&(_, t), &w)| w * (v.value(t.with(i)) - v.value(t)))
        .collect::<CompensatedSum>()
        .value())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupValue {
    pub values: Vec<f64>,
}

impl GroupValue {
    pub fn total(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .collect::<CompensatedSum>()
            .value()
    }
}

pub fn group_value(v: &Game, s: &ValueScheme) -> Result<GroupValue> {
    let values = (1..=s.complex().n())
        .map(|i| phi(v, s, i))
        .collect::<Result<_>>()?;
    Ok(GroupValue { values })
}

/// Coefficients of `v(T)` in `Σ_i φ_i(v)`:
/// `Σ_{i∈T} p^i_{T∖i} - Σ_{j : T ∈ Link(j)} p^j_T`.
pub fn induced_coefficients(s: &ValueScheme) -> CoefficientFamily {
    let mut coeffs: BTreeMap<Face, f64> = BTreeMap::new();
    for ((i, t), w) in s.entries() {
        *coeffs.entry(t.with(i)).or_insert(0.0) += w;
        if !t.is_empty() {
            *coeffs.entry(t).or_insert(0.0) -= w;
        }
    }
    CoefficientFamily::generic(s.complex().clone(), coeffs)
        .expect("induced faces belong to the complex")
}

#[derive(Debug, Clone, Serialize)]
pub struct EfficiencyReport {
    pub axiom: CoefficientLabel,
    /// Induced coefficient minus target, for every nonempty face (keyed by face key).
    pub residuals: BTreeMap<String, f64>,
    pub max_abs_residual: f64,
    /// Face attaining `max_abs_residual`.
    pub worst_face: Option<String>,
    pub tolerance: f64,
    pub pass: bool,
}

fn check_tolerance(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

/// Compares the induced coefficients of `s` with `target` face by face.
pub fn check_efficiency(
    s: &ValueScheme,
    target: &CoefficientFamily,
    tol: f64,
) -> Result<EfficiencyReport> {
    check_tolerance(tol)?;
    check_same(s.complex(), target.complex())?;
    let induced = induced_coefficients(s);
    let mut residuals = BTreeMap::new();
    let mut max_abs_residual = 0.0f64;
    let mut worst_face = None;
    for &t in s.complex().nonempty_faces() {
        let r = induced.get(t) - target.get(t);
        if r.abs() > max_abs_residual {
            max_abs_residual = r.abs();
            worst_face = Some(t.key());
        }
        residuals.insert(t.key(), r);
    }
    Ok(EfficiencyReport {
        axiom: target.label(),
        residuals,
        max_abs_residual,
        worst_face,
        tolerance: tol,
        pass: max_abs_residual <= tol,
    })
}

#[derive(Debug, Clone)]
pub struct SolvedScheme {
    pub scheme: ValueScheme,
    /// Euclidean norm of `A p - a` over all nonempty faces.
    pub residual_norm: f64,
}

impl SolvedScheme {
    pub fn feasible(&self) -> bool {
        self.residual_norm <= FEASIBILITY_THRESHOLD
    }
}

/// Minimum-norm least-squares scheme whose induced coefficients match `target`.
///
/// Unknowns are the incidences in canonical order; rows are the nonempty faces.
pub fn solve_scheme(
    complex: &Arc<SimplicialComplex>,
    target: &CoefficientFamily,
) -> Result<SolvedScheme> {
    check_same(complex, target.complex())?;
    if complex.num_facets() > FACET_CAP {
        return Err(Error::FacetCapExceeded {
            facets: complex.num_facets(),
            cap: FACET_CAP,
        });
    }
    let unknowns = incidences(complex);
    let rows = complex.nonempty_faces();
    if unknowns.is_empty() || rows.is_empty() {
        let residual_norm = target.entries().map(|(_, c)| c * c).sum::<f64>().sqrt();
        return Ok(SolvedScheme {
            scheme: ValueScheme::zero(complex.clone()),
            residual_norm,
        });
    }
    let row_of: BTreeMap<Face, usize> = rows.iter().enumerate().map(|(r, f)| (*f, r)).collect();

    let mut a = DMatrix::<f64>::zeros(rows.len(), unknowns.len());
    for (col, &(i, t)) in unknowns.iter().enumerate() {
        a[(row_of[&t.with(i)], col)] += 1.0;
        if !t.is_empty() {
            a[(row_of[&t], col)] -= 1.0;
        }
    }
    let b = DVector::from_iterator(rows.len(), rows.iter().map(|&t| target.get(t)));

    let svd = a.clone().svd(true, true);
    let largest = svd.singular_values.max();
    let eps = largest * (rows.len().max(unknowns.len()) as f64) * f64::EPSILON;
    let x = svd
        .solve(&b, eps)
        .map_err(|e| Error::Document(e.to_string()))?;
    let residual_norm = (&a * &x - &b).norm();

    let scheme = ValueScheme::new(
        complex.clone(),
        unknowns.iter().copied().zip(x.iter().copied()),
    )?;
    Ok(SolvedScheme {
        scheme,
        residual_norm,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConverseReport {
    pub pass: bool,
    pub max_abs_deviation: f64,
    /// First face whose carrier-game identity fails.
    pub witness: Option<String>,
    pub tolerance: f64,
}

/// Evaluates `Σ φ_i` on carrier games: `v_F` for facets and `v_T - v̂_T` otherwise,
/// and compares each against `target(T)`.
pub fn carrier_converse_check(
    s: &ValueScheme,
    target: &CoefficientFamily,
    tol: f64,
) -> Result<ConverseReport> {
    check_tolerance(tol)?;
    check_same(s.complex(), target.complex())?;
    let complex = s.complex();
    let mut max_abs_deviation = 0.0f64;
    let mut witness = None;
    for &t in complex.nonempty_faces() {
        let plain = group_value(&Game::carrier(complex.clone(), t, false)?, s)?.total();
        let observed = if complex.is_facet(t) {
            plain
        } else {
            plain - group_value(&Game::carrier(complex.clone(), t, true)?, s)?.total()
        };
        let deviation = (observed - target.get(t)).abs();
        max_abs_deviation = max_abs_deviation.max(deviation);
        if deviation > tol && witness.is_none() {
            witness = Some(t.key());
        }
    }
    Ok(ConverseReport {
        pass: witness.is_none(),
        max_abs_deviation,
        witness,
        tolerance: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::payoff::{d_coefficients, generic_payoff};

    fn f(v: &[usize]) -> Face {
        Face::from_vertices(v.iter().copied()).unwrap()
    }

    fn full(n: usize) -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::full_simplex(n).unwrap())
    }

    fn factorial(k: usize) -> f64 {
        (1..=k).map(|x| x as f64).product()
    }

    fn shapley(n: usize) -> ValueScheme {
        let c = full(n);
        let entries: Vec<_> = incidences(&c)
            .into_iter()
            .map(|(i, t)| {
                (
                    (i, t),
                    factorial(t.len()) * factorial(n - 1 - t.len()) / factorial(n),
                )
            })
            .collect();
        ValueScheme::new(c, entries).unwrap()
    }

    #[test]
    fn scheme_entries_must_lie_in_links() {
        let two =
            Arc::new(SimplicialComplex::from_facets(5, [vec![1, 2, 3], vec![3, 4, 5]]).unwrap());
        assert!(ValueScheme::new(two.clone(), [((1, f(&[2, 3])), 0.5)]).is_ok());
        assert_eq!(
            ValueScheme::new(two.clone(), [((1, f(&[4])), 0.5)]).unwrap_err(),
            Error::NotInLink {
                player: 1,
                face: f(&[4])
            }
        );
        assert!(ValueScheme::new(two.clone(), [((1, f(&[1, 2])), 0.5)]).is_err());
        assert!(ValueScheme::new(two, [((6, Face::EMPTY), 0.5)]).is_err());
    }

    #[test]
    fn phi_examples() {
        let c = full(2);
        let v = Game::carrier(c.clone(), f(&[1, 2]), false).unwrap();
        assert_eq!(phi(&v, &ValueScheme::zero(c.clone()), 1).unwrap(), 0.0);
        assert_eq!(phi(&v, &shapley(2), 1).unwrap(), 0.5);
        assert_eq!(phi(&Game::zero(c), &shapley(2), 2).unwrap(), 0.0);
    }

    #[test]
    fn group_value_examples() {
        let s = shapley(3);
        let v = Game::cardinality(s.complex().clone());
        let g = group_value(&v, &s).unwrap();
        for x in &g.values {
            assert!((x - 1.0).abs() < 1e-15);
        }
        assert!((g.total() - 3.0).abs() < 1e-15);
        let doubled = group_value(&v.scale(2.0), &s).unwrap();
        for (a, b) in doubled.values.iter().zip(&g.values) {
            assert_eq!(*a, 2.0 * b);
        }
    }

    #[test]
    fn induced_coefficients_examples() {
        assert!(induced_coefficients(&ValueScheme::zero(full(3))).is_empty());
        for n in 1..=5 {
            let induced = induced_coefficients(&shapley(n));
            for &t in full(n).nonempty_faces() {
                let expected = if t == Face::ground(n) { 1.0 } else { 0.0 };
                assert!((induced.get(t) - expected).abs() < 1e-12, "n={n} T={t}");
            }
        }
        let single = ValueScheme::new(full(2), [((1, Face::EMPTY), 1.0)]).unwrap();
        let induced = induced_coefficients(&single);
        assert_eq!(induced.entries().collect::<Vec<_>>(), vec![(f(&[1]), 1.0)]);
    }

    #[test]
    fn check_efficiency_examples() {
        let c = full(3);
        let trad = CoefficientFamily::traditional(c.clone()).unwrap();
        assert!(check_efficiency(&shapley(3), &trad, 1e-12).unwrap().pass);

        let report = check_efficiency(&ValueScheme::zero(c.clone()), &trad, 1e-9).unwrap();
        assert!(!report.pass);
        assert_eq!(report.residuals["1,2,3"], -1.0);
        assert_eq!(report.worst_face.as_deref(), Some("1,2,3"));

        let zero = CoefficientFamily::zero(c.clone());
        assert!(
            check_efficiency(&ValueScheme::zero(c.clone()), &zero, 1e-9)
                .unwrap()
                .pass
        );
        assert_eq!(
            check_efficiency(&ValueScheme::zero(c), &zero, 0.0).unwrap_err(),
            Error::InvalidTolerance(0.0)
        );
    }

    #[test]
    fn solver_examples() {
        let c = full(3);
        let trad = CoefficientFamily::traditional(c.clone()).unwrap();
        let solved = solve_scheme(&c, &trad).unwrap();
        assert!(solved.feasible());
        assert!(check_efficiency(&solved.scheme, &trad, 1e-8).unwrap().pass);

        let two =
            Arc::new(SimplicialComplex::from_facets(5, [vec![1, 2, 3], vec![3, 4, 5]]).unwrap());
        let zero = solve_scheme(&two, &CoefficientFamily::zero(two.clone())).unwrap();
        assert_eq!(zero.residual_norm, 0.0);
        assert_eq!(zero.scheme.entries().count(), 0);

        let d = d_coefficients(&two).unwrap();
        let solved = solve_scheme(&two, &d).unwrap();
        assert!(solved.feasible());
        assert!(check_efficiency(&solved.scheme, &d, 1e-8).unwrap().pass);
        let v = Game::random(two, 4, -1.0, 1.0).unwrap();
        let total = group_value(&v, &solved.scheme).unwrap().total();
        assert!((total - generic_payoff(&v, &d).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn converse_examples() {
        let c = full(3);
        let trad = CoefficientFamily::traditional(c.clone()).unwrap();
        assert!(
            carrier_converse_check(&shapley(3), &trad, 1e-9)
                .unwrap()
                .pass
        );
        let report = carrier_converse_check(&ValueScheme::zero(c), &trad, 1e-9).unwrap();
        assert!(!report.pass);
        assert_eq!(report.witness.as_deref(), Some("1,2,3"));
    }

    #[test]
    fn facet_coefficients_have_no_subtraction_term() {
        let chain =
            SimplicialComplex::from_facets(5, [vec![1, 2, 3], vec![2, 3, 5], vec![3, 4, 5]])
                .unwrap();
        for &facet in chain.facets() {
            for j in 1..=chain.n() {
                assert!(!chain.link_vertex(j).unwrap().contains(&facet));
            }
        }
    }
}
