//! Thickness-2 witnesses and the finite-dimensional contrast oracle.
//!
//! Any finite set of unit vectors in l1 misses a fresh basis
//! direction, and the point `-e_m` beyond the joint support sits at
//! distance exactly 2 from every net point, the diameter of the ball.
//! The brute-force covering radius of small nets in `l1^(d)` shows the
//! contrast: finite sections do admit nets with radius below 2.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{format_rat, rat_int, Rat};
use crate::renorm::{model_norm, EmbeddingModel};
use crate::sparse::{norm_l1, SparseVec};

/// A finite set of unit vectors, a candidate `eps`-net for the sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteNet {
    points: Vec<SparseVec>,
}

impl FiniteNet {
    pub fn new(points: Vec<SparseVec>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyNet);
        }
        for (i, x) in points.iter().enumerate() {
            if !norm_l1(x).is_one() {
                return Err(Error::NetPointNotUnit(i));
            }
        }
        Ok(FiniteNet { points })
    }

    pub fn points(&self) -> &[SparseVec] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max_support(&self) -> u64 {
        self.points.iter().map(SparseVec::max_support).max().unwrap_or(0)
    }
}

impl Serialize for FiniteNet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.points.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FiniteNet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let points = Vec::<SparseVec>::deserialize(deserializer)?;
        FiniteNet::new(points).map_err(serde::de::Error::custom)
    }
}

/// The fresh direction `y = -e_m`, `m = 1 + max` joint support, with
/// the exact distance to every net point. All distances are 2: no
/// finite net of unit vectors is a `(2 - eps)`-net for any `eps > 0`.
pub fn thickness_witness(net: &FiniteNet) -> (SparseVec, Vec<Rat>) {
    let m = net.max_support() + 1;
    let y = SparseVec::basis(m).neg();
    let distances: Vec<Rat> = net
        .points()
        .iter()
        .map(|x| norm_l1(&x.sub(&y)))
        .collect();
    debug_assert!(distances.iter().all(|d| *d == rat_int(2)));
    (y, distances)
}

#[derive(Clone, Copy)]
pub enum TrajectorySequence<'a> {
    /// `n -> e_n` in plain l1.
    Basis,
    /// `n -> y_n` under a renorm model, measured in `|||.|||`.
    ModelPairs(&'a EmbeddingModel),
}

/// The values `n -> ||x + e_n||` of the canonical l1-type, exact for
/// every `n`, constant at `base_norm + 1` past the stabilization
/// index.
#[derive(Clone, Debug, PartialEq)]
pub struct TypeTrajectory {
    pub base: SparseVec,
    pub base_norm: Rat,
    pub values: BTreeMap<u64, Rat>,
    pub stabilization: u64,
}

impl TypeTrajectory {
    /// The certified identity: `values(n) = base_norm + 1` for every
    /// recorded `n` past the stabilization index.
    pub fn stable_beyond_bound(&self) -> bool {
        let target = &self.base_norm + rat_int(1);
        self.values
            .iter()
            .filter(|(n, _)| **n > self.stabilization)
            .all(|(_, v)| *v == target)
    }
}

impl Serialize for TypeTrajectory {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let values: BTreeMap<String, String> = self
            .values
            .iter()
            .map(|(n, v)| (n.to_string(), format_rat(v)))
            .collect();
        let mut s = serializer.serialize_struct("TypeTrajectory", 4)?;
        s.serialize_field("base", &self.base)?;
        s.serialize_field("base_norm", &format_rat(&self.base_norm))?;
        s.serialize_field("values", &values)?;
        s.serialize_field("stabilization", &self.stabilization)?;
        s.end()
    }
}

pub fn type_trajectory(
    x: &SparseVec,
    n_max: u64,
    sequence: TrajectorySequence,
) -> Result<TypeTrajectory> {
    if n_max == 0 {
        return Err(Error::InvalidIndex);
    }
    let (base_norm, stabilization) = match sequence {
        TrajectorySequence::Basis => (norm_l1(x), x.max_support()),
        TrajectorySequence::ModelPairs(m) => (model_norm(x, m)?, m.stabilization_bound(x)),
    };
    let mut values = BTreeMap::new();
    for n in 1..=n_max {
        let v = match sequence {
            TrajectorySequence::Basis => norm_l1(&x.add(&SparseVec::basis(n))),
            TrajectorySequence::ModelPairs(m) => model_norm(&x.add(&m.generator(n)?), m)?,
        };
        if n > stabilization && v != &base_norm + rat_int(1) {
            return Err(Error::CertificationFailed(format!(
                "trajectory value {} at n = {n} misses {} + 1",
                format_rat(&v),
                format_rat(&base_norm)
            )));
        }
        values.insert(n, v);
    }
    Ok(TypeTrajectory {
        base: x.clone(),
        base_norm,
        values,
        stabilization,
    })
}

const MAX_DIM: u64 = 4;
const MAX_NET_POINTS: usize = 8;

/// Exact Gauss-Jordan solve; `None` when the system is singular.
fn solve_linear(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = &a[r][col] / &p;
                let scaled: Vec<Rat> = a[col][col..n].iter().map(|v| v * &factor).collect();
                for (dst, t) in a[r][col..n].iter_mut().zip(scaled) {
                    *dst -= t;
                }
                let t = &b[col] * &factor;
                b[r] -= t;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// `max_{y in S} min_k ||x_k - y||_1` over the sphere of `l1^(d)`,
/// with a maximizer.
///
/// The sphere splits into `2^d` facets `sum eps_i y_i = 1`,
/// `eps_i y_i >= 0`. On each facet the coordinate breakpoints
/// `x_{k,i}` cut a cell grid on which every distance is affine, so the
/// max-min is a small exact LP whose optimum sits at a basic point:
/// the facet equality, `p >= 1` active distances, and `d - p` cell
/// bounds. All bases are enumerated and solved over the rationals.
/// Ties keep the first maximizer in enumeration order (facets in sign
/// lex order, plus before minus).
pub fn net_radius_bruteforce(d: u64, net: &FiniteNet) -> Result<(Rat, SparseVec)> {
    if d == 0 || d > MAX_DIM {
        return Err(Error::DimensionTooLarge { got: d, max: MAX_DIM });
    }
    if net.len() > MAX_NET_POINTS {
        return Err(Error::NetTooLarge {
            got: net.len(),
            max: MAX_NET_POINTS,
        });
    }
    for (k, x) in net.points().iter().enumerate() {
        if let Some(index) = x.support().find(|&j| j > d) {
            return Err(Error::PointOutsideDimension {
                point: k,
                index,
                dim: d,
            });
        }
    }

    let dd = d as usize;
    let points: Vec<Vec<Rat>> = net
        .points()
        .iter()
        .map(|x| (1..=d).map(|j| x.get(j)).collect())
        .collect();
    let n_pts = points.len();
    let objective = |y: &[Rat]| -> Rat {
        points
            .iter()
            .map(|x| x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum::<Rat>())
            .min()
            .expect("net nonempty")
    };

    let mut best: Option<(Rat, Vec<Rat>)> = None;
    for mask in 0..1u32 << dd {
        // coordinate 1 is the most significant bit: facets in lex order
        let eps: Vec<Rat> = (0..dd)
            .map(|i| {
                if (mask >> (dd - 1 - i)) & 1 == 0 {
                    rat_int(1)
                } else {
                    rat_int(-1)
                }
            })
            .collect();

        let axes: Vec<Vec<Rat>> = (0..dd)
            .map(|i| {
                let (lo, hi) = if eps[i].is_positive() {
                    (rat_int(0), rat_int(1))
                } else {
                    (rat_int(-1), rat_int(0))
                };
                let mut cuts = vec![lo.clone(), hi.clone()];
                for x in &points {
                    if x[i] > lo && x[i] < hi {
                        cuts.push(x[i].clone());
                    }
                }
                cuts.sort();
                cuts.dedup();
                cuts
            })
            .collect();

        let mut cell = vec![0usize; dd];
        'cells: loop {
            let lo: Vec<&Rat> = (0..dd).map(|i| &axes[i][cell[i]]).collect();
            let hi: Vec<&Rat> = (0..dd).map(|i| &axes[i][cell[i] + 1]).collect();

            // the facet plane must cross the cell box
            let plane_min: Rat = (0..dd)
                .map(|i| (&eps[i] * lo[i]).min(&eps[i] * hi[i]))
                .sum();
            let plane_max: Rat = (0..dd)
                .map(|i| (&eps[i] * lo[i]).max(&eps[i] * hi[i]))
                .sum();
            let one = rat_int(1);
            if plane_min <= one && one <= plane_max {
                // sign of x_{k,i} - y_i on the open cell, from midpoints
                let signs: Vec<Vec<Rat>> = points
                    .iter()
                    .map(|x| {
                        (0..dd)
                            .map(|i| {
                                let mid = (lo[i] + hi[i]) / rat_int(2);
                                if x[i] > mid {
                                    rat_int(1)
                                } else {
                                    rat_int(-1)
                                }
                            })
                            .collect()
                    })
                    .collect();
                let offsets: Vec<Rat> = (0..n_pts)
                    .map(|k| (0..dd).map(|i| &signs[k][i] * &points[k][i]).sum())
                    .collect();

                // cheap cell bound: min_k max over the box of the
                // affine distance; skip cells that cannot improve
                let cell_cap = (0..n_pts)
                    .map(|k| {
                        &offsets[k]
                            - (0..dd)
                                .map(|i| {
                                    if signs[k][i].is_positive() {
                                        &signs[k][i] * lo[i]
                                    } else {
                                        &signs[k][i] * hi[i]
                                    }
                                })
                                .sum::<Rat>()
                    })
                    .min()
                    .expect("net nonempty");
                if best.as_ref().is_none_or(|(b, _)| cell_cap > *b) {
                    for amask in 1u32..1 << n_pts {
                        let p = amask.count_ones() as usize;
                        if p > dd {
                            continue;
                        }
                        let q = dd - p;
                        for cmask in 0..1u32 << dd {
                            if cmask.count_ones() as usize != q {
                                continue;
                            }
                            let coords: Vec<usize> =
                                (0..dd).filter(|i| cmask >> i & 1 == 1).collect();
                            for bmask in 0..1u32 << q {
                                let mut rows = Vec::with_capacity(dd + 1);
                                let mut rhs = Vec::with_capacity(dd + 1);
                                let mut row: Vec<Rat> = eps.clone();
                                row.push(rat_int(0));
                                rows.push(row);
                                rhs.push(rat_int(1));
                                for k in 0..n_pts {
                                    if amask >> k & 1 == 1 {
                                        let mut row = signs[k].clone();
                                        row.push(rat_int(1));
                                        rows.push(row);
                                        rhs.push(offsets[k].clone());
                                    }
                                }
                                for (slot, &i) in coords.iter().enumerate() {
                                    let mut row = vec![rat_int(0); dd + 1];
                                    row[i] = rat_int(1);
                                    rows.push(row);
                                    rhs.push(if bmask >> slot & 1 == 0 {
                                        lo[i].clone()
                                    } else {
                                        hi[i].clone()
                                    });
                                }
                                let Some(solution) = solve_linear(rows, rhs) else {
                                    continue;
                                };
                                let y = &solution[..dd];
                                if (0..dd).any(|i| (&eps[i] * &y[i]).is_negative()) {
                                    continue;
                                }
                                let value = objective(y);
                                if best.as_ref().is_none_or(|(b, _)| value > *b) {
                                    best = Some((value, y.to_vec()));
                                }
                            }
                        }
                    }
                }
            }

            for i in (0..dd).rev() {
                cell[i] += 1;
                if cell[i] < axes[i].len() - 1 {
                    continue 'cells;
                }
                cell[i] = 0;
            }
            break;
        }
    }

    let (radius, y) = best.expect("every facet has a basic feasible point");
    let maximizer = SparseVec::from_entries(
        y.into_iter()
            .enumerate()
            .map(|(i, v)| (i as u64 + 1, v)),
    )?;
    Ok((radius, maximizer))
}
