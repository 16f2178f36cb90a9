//! Total-payoff functionals: generic, traditional, probabilistic and the
//! facet inclusion-exclusion (simplicial) payoff with its comparators.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{same_complex, SimplicialComplex, Subcomplex};
use crate::error::{Error, Result};
use crate::face::Face;
use crate::game::Game;
use crate::matroid::{self, check_permutation, partial_union_intersections, ShellingOrder};
use crate::numeric::CompensatedSum;

/// Maximum number of facets for any facet-subset enumeration.
pub const FACET_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientLabel {
    Generic,
    Probabilistic,
    Traditional,
    SimplicialD,
}

impl fmt::Display for CoefficientLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoefficientLabel::Generic => "generic",
            CoefficientLabel::Probabilistic => "probabilistic",
            CoefficientLabel::Traditional => "traditional",
            CoefficientLabel::SimplicialD => "simplicial-d",
        })
    }
}

/// A real weight per nonempty face, stored sparsely.
#[derive(Debug, Clone)]
pub struct CoefficientFamily {
    complex: Arc<SimplicialComplex>,
    coeffs: BTreeMap<Face, f64>,
    label: CoefficientLabel,
}

impl CoefficientFamily {
    /// Arbitrary weights on nonempty faces. Zero entries are dropped.
    pub fn generic<I>(complex: Arc<SimplicialComplex>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Face, f64)>,
    {
        let mut coeffs = BTreeMap::new();
        for (face, c) in entries {
            if face.is_empty() {
                return Err(Error::EmptyFaceCoefficient);
            }
            if !complex.contains(face) {
                return Err(Error::FaceNotInComplex(face));
            }
            *coeffs.entry(face).or_insert(0.0) += c;
        }
        coeffs.retain(|_, c| *c != 0.0);
        Ok(CoefficientFamily {
            complex,
            coeffs,
            label: CoefficientLabel::Generic,
        })
    }

    /// Weights supported on facets. Sign and normalization are not enforced.
    pub fn probabilistic<I>(complex: Arc<SimplicialComplex>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Face, f64)>,
    {
        let mut family = Self::generic(complex, entries)?;
        if let Some(bad) = family.coeffs.keys().find(|f| !family.complex.is_facet(**f)) {
            return Err(Error::SupportNotFacets(*bad));
        }
        family.label = CoefficientLabel::Probabilistic;
        Ok(family)
    }

    /// `1/k` on each of the `k` facets.
    pub fn uniform_probabilistic(complex: Arc<SimplicialComplex>) -> Self {
        let k = complex.num_facets() as f64;
        let coeffs = complex
            .facets()
            .iter()
            .filter(|f| !f.is_empty())
            .map(|&f| (f, 1.0 / k))
            .collect();
        CoefficientFamily {
            complex,
            coeffs,
            label: CoefficientLabel::Probabilistic,
        }
    }

    /// `{[n] ↦ 1}` on the full simplex.
    pub fn traditional(complex: Arc<SimplicialComplex>) -> Result<Self> {
        if !complex.is_full_simplex() {
            return Err(Error::NotFullSimplex);
        }
        let coeffs = BTreeMap::from([(Face::ground(complex.n()), 1.0)]);
        Ok(CoefficientFamily {
            complex,
            coeffs,
            label: CoefficientLabel::Traditional,
        })
    }

    pub fn zero(complex: Arc<SimplicialComplex>) -> Self {
        CoefficientFamily {
            complex,
            coeffs: BTreeMap::new(),
            label: CoefficientLabel::Generic,
        }
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn label(&self) -> CoefficientLabel {
        self.label
    }

    pub fn get(&self, face: Face) -> f64 {
        self.coeffs.get(&face).copied().unwrap_or(0.0)
    }

    /// Nonzero entries in canonical face order.
    pub fn entries(&self) -> impl Iterator<Item = (Face, f64)> + '_ {
        self.coeffs.iter().map(|(f, c)| (*f, *c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

fn check_facet_cap(complex: &SimplicialComplex, cap: usize) -> Result<()> {
    if complex.num_facets() > cap {
        return Err(Error::FacetCapExceeded {
            facets: complex.num_facets(),
            cap,
        });
    }
    Ok(())
}

/// `Σ_T a_T v(T)` over the support of `a`.
pub fn generic_payoff(v: &Game, a: &CoefficientFamily) -> Result<f64> {
    if !same_complex(v.complex(), a.complex()) {
        return Err(Error::ComplexMismatch);
    }
    Ok(a.entries()
        .map(|(t, c)| c * v.value(t))
        .collect::<CompensatedSum>()
        .value())
}

/// `v([n])`, defined only on the full simplex.
pub fn traditional_payoff(v: &Game) -> Result<f64> {
    if !v.complex().is_full_simplex() {
        return Err(Error::NotFullSimplex);
    }
    Ok(v.value(Face::ground(v.complex().n())))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbabilisticPayoff {
    pub value: f64,
    /// `Σ c_F = 1` within `1e-12`.
    pub normalized: bool,
    /// Every `c_F ≥ 0`.
    pub nonnegative: bool,
}

/// `Σ_F c_F v(F)`; normalization and sign are reported, never enforced.
pub fn probabilistic_payoff(v: &Game, c: &CoefficientFamily) -> Result<ProbabilisticPayoff> {
    if let Some((bad, _)) = c.entries().find(|(f, _)| !c.complex().is_facet(*f)) {
        return Err(Error::SupportNotFacets(bad));
    }
    let value = generic_payoff(v, c)?;
    let total: f64 = c.entries().map(|(_, x)| x).sum();
    Ok(ProbabilisticPayoff {
        value,
        normalized: (total - 1.0).abs() <= 1e-12,
        nonnegative: c.entries().all(|(_, x)| x >= 0.0),
    })
}

/// Signed counts `d_T = Σ (-1)^{l+1}` over sets of `l` distinct facets whose
/// intersection is exactly `T`. Zero counts and `∅` are omitted.
///
/// Facets are folded in one at a time while tracking, for every reachable
/// intersection, the signed number of facet subsets producing it; an
/// intersection that hits `∅` can never leave it, so it is dropped.
pub fn d_counts(complex: &SimplicialComplex) -> Result<BTreeMap<Face, i64>> {
    check_facet_cap(complex, FACET_CAP)?;
    let mut counts: BTreeMap<Face, i64> = BTreeMap::new();
    for &facet in complex.facets() {
        let mut next = counts.clone();
        for (&t, &c) in &counts {
            let meet = t.intersection(facet);
            if !meet.is_empty() {
                *next.entry(meet).or_insert(0) -= c;
            }
        }
        if !facet.is_empty() {
            *next.entry(facet).or_insert(0) += 1;
        }
        next.retain(|_, c| *c != 0);
        counts = next;
    }
    Ok(counts)
}

/// The `d` family as coefficients.
pub fn d_coefficients(complex: &Arc<SimplicialComplex>) -> Result<CoefficientFamily> {
    let coeffs = d_counts(complex)?
        .into_iter()
        .map(|(f, c)| (f, c as f64))
        .collect();
    Ok(CoefficientFamily {
        complex: complex.clone(),
        coeffs,
        label: CoefficientLabel::SimplicialD,
    })
}

/// Inclusion-exclusion over all facet subsets, evaluated through the `d` family.
pub fn simplicial_payoff(v: &Game) -> Result<f64> {
    generic_payoff(v, &d_coefficients(v.complex())?)
}

/// `Σ_j [v(F_j) - v(F̄_j ∩ (F̄_1 ∪ … ∪ F̄_{j-1}))]`, with subcomplex worth summed over facets.
pub fn sequential_payoff(v: &Game, order: &[Face]) -> Result<f64> {
    let complex = v.complex();
    check_permutation(complex, order)?;
    let mut acc = CompensatedSum::new();
    if let Some(&first) = order.first() {
        acc.add(v.value(first));
    }
    for step in partial_union_intersections(complex, order)? {
        acc.add(v.value(step.basis));
        acc.add(-v.complex_worth(&step.intersection)?);
    }
    Ok(acc.value())
}

/// Union of all `(j+1)`-fold intersections of distinct facets; `Δ^(0) = Δ`.
pub fn delta_j(complex: &Arc<SimplicialComplex>, j: usize) -> Result<Subcomplex> {
    check_facet_cap(complex, FACET_CAP)?;
    let k = complex.num_facets();
    if j >= k {
        return Err(Error::IndexOutOfRange {
            index: j,
            max: k - 1,
        });
    }
    let facets = complex.facets();
    let mut meets = Vec::new();
    for_each_combination(k, j + 1, &mut |idx| {
        let meet = idx.iter().fold(Face::ground(complex.n()), |acc, &i| {
            acc.intersection(facets[i])
        });
        meets.push(meet);
    });
    Subcomplex::new(complex.clone(), meets)
}

fn for_each_combination(k: usize, size: usize, visit: &mut dyn FnMut(&[usize])) {
    fn rec(
        start: usize,
        k: usize,
        size: usize,
        buf: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if buf.len() == size {
            visit(buf);
            return;
        }
        for i in start..=(k - (size - buf.len())) {
            buf.push(i);
            rec(i + 1, k, size, buf, visit);
            buf.pop();
        }
    }
    if size <= k {
        rec(0, k, size, &mut Vec::with_capacity(size), visit);
    }
}

/// `Σ_j (-1)^j v(Δ^(j))`, skipping empty `Δ^(j)`.
pub fn alternating_payoff(v: &Game) -> Result<f64> {
    let complex = v.complex();
    check_facet_cap(complex, FACET_CAP)?;
    let mut acc = CompensatedSum::new();
    for j in 0..complex.num_facets() {
        let layer = delta_j(complex, j)?;
        if layer.is_empty() {
            continue;
        }
        let worth = v.complex_worth(&layer)?;
        acc.add(if j % 2 == 0 { worth } else { -worth });
    }
    Ok(acc.value())
}

/// `Σ_B v(B) - Σ_{j≥2} v(B̃_{j-1} ∩ B̄_j)` along a verified shelling of a matroid.
pub fn matroid_reduction_payoff(v: &Game, shelling: &ShellingOrder) -> Result<f64> {
    if !same_complex(v.complex(), shelling.complex()) {
        return Err(Error::ComplexMismatch);
    }
    let check = matroid::verify_shelling(shelling.complex(), shelling.order())?;
    if let Some(step) = check.first_failure {
        return Err(Error::ShellingVerificationFailed { step });
    }
    let mut acc = CompensatedSum::new();
    for &basis in shelling.order() {
        acc.add(v.value(basis));
    }
    for step in shelling.steps() {
        acc.add(-v.complex_worth(&step.intersection)?);
    }
    Ok(acc.value())
}

/// Comma-joined facet keys separated by `|`, e.g. `"1,2,3|3,4,5"`.
pub fn order_id(order: &[Face]) -> String {
    order.iter().map(|f| f.key()).collect::<Vec<_>>().join("|")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequentialValue {
    pub order: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormulaComparison {
    pub closed: f64,
    pub sequential: Vec<SequentialValue>,
    pub alternating: f64,
    pub matroid_reduction: Option<f64>,
    pub max_pairwise_delta: f64,
}

/// `n` seeded random facet permutations.
pub fn random_orders(complex: &SimplicialComplex, count: usize, seed: u64) -> Vec<Vec<Face>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut order = complex.facets().to_vec();
            order.shuffle(&mut rng);
            order
        })
        .collect()
}

/// Evaluates every formula, with the sequential form taken over `orders`.
pub fn compare_formulas_with_orders(v: &Game, orders: &[Vec<Face>]) -> Result<FormulaComparison> {
    let complex = v.complex();
    let closed = simplicial_payoff(v)?;
    let alternating = alternating_payoff(v)?;
    let mut sequential = Vec::with_capacity(orders.len());
    for order in orders {
        sequential.push(SequentialValue {
            order: order_id(order),
            value: sequential_payoff(v, order)?,
        });
    }
    let matroid_reduction = if matroid::is_matroid(complex).is_matroid() {
        match matroid::shelling_order(complex) {
            Ok(shelling) => Some(matroid_reduction_payoff(v, &shelling)?),
            Err(Error::ShellingVerificationFailed { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let mut all = vec![closed, alternating];
    all.extend(sequential.iter().map(|s| s.value));
    all.extend(matroid_reduction);
    let max = all.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = all.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(FormulaComparison {
        closed,
        sequential,
        alternating,
        matroid_reduction,
        max_pairwise_delta: max - min,
    })
}

/// Canonical facet order plus `num_random_orders` seeded permutations.
pub fn compare_formulas(
    v: &Game,
    num_random_orders: usize,
    seed: u64,
) -> Result<FormulaComparison> {
    check_facet_cap(v.complex(), FACET_CAP)?;
    let mut orders = vec![v.complex().facets().to_vec()];
    orders.extend(random_orders(v.complex(), num_random_orders, seed));
    compare_formulas_with_orders(v, &orders)
}
