//! Brute-force recomputations that share no code path with the main
//! implementations: plain facet-subset loops, integer sign accumulation and
//! direct marginal summation.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::complex::{same_complex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::face::Face;
use crate::game::Game;
use crate::payoff::{self, CoefficientFamily};
use crate::scheme::ValueScheme;

/// Facet cap for the exhaustive oracle enumeration.
pub const ORACLE_FACET_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleFailure {
    pub input: String,
    pub expected: f64,
    pub got: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub subject: String,
    pub trials: usize,
    pub max_abs_deviation: f64,
    pub tolerance: f64,
    pub failures: Vec<OracleFailure>,
}

impl OracleReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `d_T` by visiting every nonempty facet subset as a bitmask.
pub fn oracle_d_counts(complex: &SimplicialComplex) -> Result<BTreeMap<Face, i64>> {
    let facets = complex.facets();
    let k = facets.len();
    if k > ORACLE_FACET_CAP {
        return Err(Error::FacetCapExceeded {
            facets: k,
            cap: ORACLE_FACET_CAP,
        });
    }
    let mut counts: BTreeMap<Face, i64> = BTreeMap::new();
    for mask in 1u32..(1u32 << k) {
        let mut meet = Face::ground(complex.n());
        for (idx, facet) in facets.iter().enumerate() {
            if mask & (1 << idx) != 0 {
                meet = meet.intersection(*facet);
            }
        }
        if meet.is_empty() {
            continue;
        }
        let sign = if mask.count_ones() % 2 == 1 { 1 } else { -1 };
        *counts.entry(meet).or_insert(0) += sign;
    }
    counts.retain(|_, c| *c != 0);
    Ok(counts)
}

pub fn oracle_d_coefficients(complex: &Arc<SimplicialComplex>) -> Result<CoefficientFamily> {
    let counts = oracle_d_counts(complex)?;
    CoefficientFamily::generic(
        complex.clone(),
        counts.into_iter().map(|(f, c)| (f, c as f64)),
    )
}

/// Compares the main `d` path with the oracle, entry by entry.
pub fn oracle_d_report(complex: &SimplicialComplex) -> Result<OracleReport> {
    let expected = oracle_d_counts(complex)?;
    let got = payoff::d_counts(complex)?;
    let mut failures = Vec::new();
    let mut faces: Vec<Face> = expected.keys().chain(got.keys()).copied().collect();
    faces.sort();
    faces.dedup();
    let mut max_abs_deviation = 0.0f64;
    for face in faces {
        let e = expected.get(&face).copied().unwrap_or(0);
        let g = got.get(&face).copied().unwrap_or(0);
        if e != g {
            max_abs_deviation = max_abs_deviation.max((e - g).abs() as f64);
            failures.push(OracleFailure {
                input: face.key(),
                expected: e as f64,
                got: g as f64,
            });
        }
    }
    Ok(OracleReport {
        subject: "d-coefficients".into(),
        trials: 1,
        max_abs_deviation,
        tolerance: 0.0,
        failures,
    })
}

fn direct_group_total(v: &Game, s: &ValueScheme) -> f64 {
    let mut total = 0.0;
    for ((i, t), w) in s.entries() {
        let with = v
            .evaluate(t.with(i))
            .expect("link faces extend to feasible coalitions");
        let without = v.evaluate(t).expect("link faces are feasible");
        total += w * (with - without);
    }
    total
}

fn direct_generic(v: &Game, a: &CoefficientFamily) -> f64 {
    a.entries()
        .map(|(t, c)| c * v.evaluate(t).expect("coefficient faces are feasible"))
        .sum()
}

/// `Σ_i φ_i(v)` against `Σ_T a_T v(T)` on every carrier game and `trials`
/// random games (uniform on `[-1, 1]`, seeds `seed + trial`).
pub fn oracle_characterization(
    complex: &Arc<SimplicialComplex>,
    target: &CoefficientFamily,
    s: &ValueScheme,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<OracleReport> {
    if !same_complex(complex, s.complex()) || !same_complex(complex, target.complex()) {
        return Err(Error::ComplexMismatch);
    }
    let mut games: Vec<(String, Game)> = Vec::new();
    for &t in complex.faces() {
        if !t.is_empty() {
            games.push((
                format!("carrier {t}"),
                Game::carrier(complex.clone(), t, false)?,
            ));
        }
        games.push((
            format!("strict carrier {t}"),
            Game::carrier(complex.clone(), t, true)?,
        ));
    }
    for trial in 0..trials {
        let game_seed = seed.wrapping_add(trial as u64);
        games.push((
            format!("random seed {game_seed}"),
            Game::random(complex.clone(), game_seed, -1.0, 1.0)?,
        ));
    }

    let mut max_abs_deviation = 0.0f64;
    let mut failures = Vec::new();
    for (input, v) in &games {
        let expected = direct_generic(v, target);
        let got = direct_group_total(v, s);
        let dev = (expected - got).abs();
        max_abs_deviation = max_abs_deviation.max(dev);
        if dev > tol {
            failures.push(OracleFailure {
                input: input.clone(),
                expected,
                got,
            });
        }
    }
    Ok(OracleReport {
        subject: format!("characterization ({})", target.label()),
        trials: games.len(),
        max_abs_deviation,
        tolerance: tol,
        failures,
    })
}

fn spread_report(v: &Game, orders: &[Vec<Face>], tol: f64) -> Result<OracleReport> {
    let mut values = Vec::with_capacity(orders.len());
    for order in orders {
        values.push((
            payoff::order_id(order),
            payoff::sequential_payoff(v, order)?,
        ));
    }
    let max = values.iter().map(|x| x.1).fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
    let reference = values.first().map(|x| x.1).unwrap_or(0.0);
    let failures = values
        .iter()
        .filter(|(_, x)| (x - reference).abs() > tol)
        .map(|(id, x)| OracleFailure {
            input: id.clone(),
            expected: reference,
            got: *x,
        })
        .collect();
    Ok(OracleReport {
        subject: "order-independence".into(),
        trials: values.len(),
        max_abs_deviation: if values.is_empty() { 0.0 } else { max - min },
        tolerance: tol,
        failures,
    })
}

/// Spread of the sequential payoff over `num_orders` seeded facet permutations.
pub fn oracle_order_independence(
    v: &Game,
    num_orders: usize,
    seed: u64,
    tol: f64,
) -> Result<OracleReport> {
    let orders = payoff::random_orders(v.complex(), num_orders, seed);
    spread_report(v, &orders, tol)
}

/// Same as [`oracle_order_independence`] over every facet permutation (at most 8 facets).
pub fn oracle_order_independence_exhaustive(v: &Game, tol: f64) -> Result<OracleReport> {
    const CAP: usize = 8;
    let facets = v.complex().facets().to_vec();
    if facets.len() > CAP {
        return Err(Error::FacetCapExceeded {
            facets: facets.len(),
            cap: CAP,
        });
    }
    let mut orders = Vec::new();
    permutations(&mut facets.clone(), 0, &mut orders);
    spread_report(v, &orders, tol)
}

fn permutations(items: &mut Vec<Face>, start: usize, out: &mut Vec<Vec<Face>>) {
    if start + 1 >= items.len() {
        out.push(items.clone());
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permutations(items, start + 1, out);
        items.swap(start, i);
    }
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
    fn oracle_d_examples() {
        let full = Arc::new(SimplicialComplex::full_simplex(4).unwrap());
        assert_eq!(
            oracle_d_counts(&full).unwrap(),
            BTreeMap::from([(Face::ground(4), 1)])
        );

        let two = cx(5, &[&[1, 2, 3], &[3, 4, 5]]);
        assert_eq!(
            oracle_d_counts(&two).unwrap(),
            BTreeMap::from([(f(&[1, 2, 3]), 1), (f(&[3, 4, 5]), 1), (f(&[3]), -1)])
        );

        let chain = cx(5, &[&[1, 2, 3], &[2, 3, 5], &[3, 4, 5]]);
        let d = oracle_d_counts(&chain).unwrap();
        assert!(!d.contains_key(&f(&[3])));
        assert_eq!(d, payoff::d_counts(&chain).unwrap());
        assert!(oracle_d_report(&chain).unwrap().pass());
    }

    #[test]
    fn oracle_cap() {
        let edges: Vec<Vec<usize>> = (1..=17).map(|i| vec![i, i + 1]).collect();
        let path = SimplicialComplex::from_facets(18, edges).unwrap();
        assert_eq!(
            oracle_d_counts(&path),
            Err(Error::FacetCapExceeded {
                facets: 17,
                cap: ORACLE_FACET_CAP
            })
        );
        // The main path still handles it.
        assert!(payoff::d_counts(&path).is_ok());
    }

    #[test]
    fn characterization_detects_zero_scheme() {
        let full = Arc::new(SimplicialComplex::full_simplex(3).unwrap());
        let trad = CoefficientFamily::traditional(full.clone()).unwrap();
        let report =
            oracle_characterization(&full, &trad, &ValueScheme::zero(full.clone()), 10, 0, 1e-9)
                .unwrap();
        assert!(!report.pass());
        let witness = report
            .failures
            .iter()
            .find(|x| x.input == "carrier {1,2,3}")
            .unwrap();
        assert_eq!((witness.expected, witness.got), (1.0, 0.0));
    }

    #[test]
    fn order_spreads() {
        let two = cx(5, &[&[1, 2, 3], &[3, 4, 5]]);
        let report =
            oracle_order_independence(&Game::random(two, 3, -1.0, 1.0).unwrap(), 10, 0, 1e-12)
                .unwrap();
        assert_eq!(report.max_abs_deviation, 0.0);
        assert!(report.pass());

        let chain = cx(5, &[&[1, 2, 3], &[2, 3, 5], &[3, 4, 5]]);
        let report =
            oracle_order_independence_exhaustive(&Game::cardinality(chain), 1e-12).unwrap();
        assert_eq!(report.trials, 6);
        assert_eq!(report.max_abs_deviation, 1.0);
        assert!(!report.pass());
    }
}
