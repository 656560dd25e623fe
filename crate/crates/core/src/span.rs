//! Disjointly supported generator families and exact quotient distances.
//!
//! When the generators of a subspace have pairwise disjoint supports,
//! the l1 distance from a point to the span separates into independent
//! one-dimensional piecewise-linear minimizations, each solved exactly
//! at its breakpoints. This covers every subspace used by the
//! constructions in this crate; a general exact LP is out of scope on
//! purpose.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::sparse::{norm_l1, SparseVec};

/// A finite family of pairwise disjointly supported unit vectors.
///
/// Generators are normalized to l1 norm 1 on construction (scaling
/// does not change the span).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointSpan {
    generators: Vec<SparseVec>,
}

impl DisjointSpan {
    pub fn new(generators: Vec<SparseVec>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(generators.len());
        for (i, g) in generators.into_iter().enumerate() {
            let n = norm_l1(&g);
            if n.is_zero() {
                return Err(Error::ZeroGenerator(i));
            }
            normalized.push(g.scale(&n.recip()));
        }
        for a in 0..normalized.len() {
            for b in a + 1..normalized.len() {
                if let Some(index) = normalized[a]
                    .support()
                    .find(|idx| !normalized[b].get(*idx).is_zero())
                {
                    return Err(Error::OverlappingSupports { a, b, index });
                }
            }
        }
        Ok(DisjointSpan {
            generators: normalized,
        })
    }

    pub fn generators(&self) -> &[SparseVec] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// The combination `sum_n a_n v_n` for given coefficients.
    pub fn combine(&self, coefficients: &[Rat]) -> SparseVec {
        let mut acc = SparseVec::zero();
        for (g, c) in self.generators.iter().zip(coefficients) {
            acc = acc.add(&g.scale(c));
        }
        acc
    }
}

/// Exact distance from `x` to the span, with a minimizing coefficient
/// vector.
///
/// Each generator contributes an independent objective
/// `a -> sum_j |x_j - a v_j|` over its support; the minimum of this
/// convex piecewise-linear map is attained at a breakpoint
/// `a = x_j / v_j` (or at 0). Coordinates outside every generator
/// support contribute `|x_j|` unconditionally. Among minimizing
/// breakpoints the coefficient 0 is preferred, then the smallest value
/// in ascending order.
pub fn dist_to_span(x: &SparseVec, span: &DisjointSpan) -> (Rat, Vec<Rat>) {
    let mut coefficients = Vec::with_capacity(span.len());
    let mut total = Rat::zero();
    let mut covered: std::collections::BTreeSet<u64> = std::collections::BTreeSet::new();

    for g in span.generators() {
        covered.extend(g.support());
        let (best, value) = minimize_line(x, g);
        coefficients.push(best);
        total += value;
    }
    for (idx, v) in x.iter() {
        if !covered.contains(&idx) {
            total += v.abs();
        }
    }
    (total, coefficients)
}

/// Minimizes `a -> sum_{j in supp(v)} |x_j - a v_j|` exactly.
fn minimize_line(x: &SparseVec, v: &SparseVec) -> (Rat, Rat) {
    let mut candidates: Vec<Rat> = vec![Rat::zero()];
    for (idx, vj) in v.iter() {
        candidates.push(x.get(idx) / vj);
    }
    candidates.sort();
    candidates.dedup();

    let objective = |a: &Rat| -> Rat {
        v.iter().map(|(idx, vj)| (x.get(idx) - a * vj).abs()).sum()
    };

    let mut best_a = Rat::zero();
    let mut best_val = objective(&best_a);
    for a in candidates {
        let val = objective(&a);
        if val < best_val {
            best_val = val;
            best_a = a;
        }
        // ties keep the earlier candidate; 0 is evaluated first
    }
    (best_a, best_val)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};
    use proptest::prelude::*;

    fn half_e12() -> SparseVec {
        SparseVec::from_entries([(1, rat(1, 2)), (2, rat(1, 2))]).unwrap()
    }

    // independent oracle: dense scan of the 1-d objective over all
    // breakpoints plus midpoints between them
    fn line_oracle(x: &SparseVec, v: &SparseVec) -> Rat {
        let mut points: Vec<Rat> = vec![Rat::zero()];
        for (idx, vj) in v.iter() {
            points.push(x.get(idx) / vj);
        }
        points.sort();
        points.dedup();
        let mut probes = points.clone();
        for w in points.windows(2) {
            probes.push((&w[0] + &w[1]) / rat_int(2));
        }
        probes
            .iter()
            .map(|a| -> Rat { v.iter().map(|(idx, vj)| (x.get(idx) - a * vj).abs()).sum() })
            .min()
            .unwrap()
    }

    #[test]
    fn member_has_distance_zero() {
        let span = DisjointSpan::new(vec![half_e12()]).unwrap();
        let x = half_e12();
        let (d, coeffs) = dist_to_span(&x, &span);
        assert_eq!(d, rat_int(0));
        assert_eq!(coeffs, vec![rat_int(1)]);
        assert_eq!(span.combine(&coeffs), x);
    }

    #[test]
    fn basis_vector_against_pair_generator() {
        // oracle: scan of |1 - a/2| + |a/2| over breakpoints {0, 2} gives 1
        let span = DisjointSpan::new(vec![half_e12()]).unwrap();
        let x = SparseVec::basis(1);
        assert_eq!(line_oracle(&x, &half_e12()), rat_int(1));
        let (d, coeffs) = dist_to_span(&x, &span);
        assert_eq!(d, rat_int(1));
        // returned coefficient must itself be minimizing
        let residual = x.sub(&span.combine(&coeffs));
        assert_eq!(norm_l1(&residual), rat_int(1));
        assert!(coeffs[0] >= rat_int(0) && coeffs[0] <= rat_int(2));
    }

    #[test]
    fn antisymmetric_vector_prefers_zero_coefficient() {
        let span = DisjointSpan::new(vec![half_e12()]).unwrap();
        let x = SparseVec::basis(1).sub(&SparseVec::basis(2));
        assert_eq!(line_oracle(&x, &half_e12()), rat_int(2));
        let (d, coeffs) = dist_to_span(&x, &span);
        assert_eq!(d, rat_int(2));
        assert_eq!(coeffs, vec![rat_int(0)]);
    }

    #[test]
    fn overlapping_generators_rejected() {
        let err = DisjointSpan::new(vec![SparseVec::basis(1), half_e12()]).unwrap_err();
        assert_eq!(
            err,
            Error::OverlappingSupports {
                a: 0,
                b: 1,
                index: 1
            }
        );
    }

    #[test]
    fn zero_generator_rejected() {
        assert_eq!(
            DisjointSpan::new(vec![SparseVec::zero()]),
            Err(Error::ZeroGenerator(0))
        );
    }

    #[test]
    fn generators_are_normalized() {
        let doubled = SparseVec::from_entries([(1, rat_int(1)), (2, rat_int(1))]).unwrap();
        let span = DisjointSpan::new(vec![doubled]).unwrap();
        assert_eq!(span.generators()[0], half_e12());
    }

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-9i64..=9, 1i64..=6).prop_map(|(p, q)| rat(p, q))
    }

    fn gen_span() -> impl Strategy<Value = DisjointSpan> {
        // generators on disjoint index blocks {1,2}, {3,4}, {5,6}
        proptest::collection::vec((small_rat(), small_rat()), 1..=3).prop_filter_map(
            "nonzero generators",
            |blocks| {
                let gens: Option<Vec<SparseVec>> = blocks
                    .iter()
                    .enumerate()
                    .map(|(i, (a, b))| {
                        let base = 2 * i as u64 + 1;
                        let g =
                            SparseVec::from_entries([(base, a.clone()), (base + 1, b.clone())])
                                .unwrap();
                        if g.is_zero() {
                            None
                        } else {
                            Some(g)
                        }
                    })
                    .collect();
                gens.map(|g| DisjointSpan::new(g).unwrap())
            },
        )
    }

    fn small_vec() -> impl Strategy<Value = SparseVec> {
        proptest::collection::vec((1u64..=8, small_rat()), 0..5)
            .prop_map(|pairs| SparseVec::from_entries(pairs).unwrap())
    }

    proptest! {
        #[test]
        fn distance_zero_iff_reconstructs(x in small_vec(), span in gen_span()) {
            let (d, coeffs) = dist_to_span(&x, &span);
            let reconstructs = span.combine(&coeffs) == x;
            prop_assert_eq!(d.is_zero(), reconstructs);
        }

        #[test]
        fn quotient_invariance(x in small_vec(), span in gen_span(),
                               shift in proptest::collection::vec(small_rat(), 3)) {
            let y = span.combine(&shift[..span.len()]);
            let (d1, _) = dist_to_span(&x, &span);
            let (d2, _) = dist_to_span(&x.add(&y), &span);
            prop_assert_eq!(d1, d2);
        }

        #[test]
        fn per_generator_scan_matches_oracle(x in small_vec(), span in gen_span()) {
            let (d, coeffs) = dist_to_span(&x, &span);
            let residual = norm_l1(&x.sub(&span.combine(&coeffs)));
            prop_assert_eq!(&d, &residual);
            let mut oracle = Rat::zero();
            let covered: std::collections::BTreeSet<u64> =
                span.generators().iter().flat_map(|g| g.support()).collect();
            for g in span.generators() {
                oracle += line_oracle(&x, g);
            }
            for (idx, v) in x.iter() {
                if !covered.contains(&idx) {
                    oracle += v.abs();
                }
            }
            prop_assert_eq!(d, oracle);
        }
    }
}
