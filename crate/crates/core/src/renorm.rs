//! The constructive equivalent norm on l1 with a planted canonical
//! l1-type sequence.
//!
//! A model pairs coordinates into disjoint blocks; block `n` carries
//! the generator `y_n`, the average of its basis vectors, and the
//! operator `T` collapses every block coordinate onto the sign row
//! `g_n`. The norm is `|||x||| = ||T x||_inf + dist(x, Y)` with `Y`
//! the closed span of the generators. On this substrate the sequence
//! `(y_n)` satisfies `|||x + y_n||| = |||x||| + 1` exactly for every
//! `n` past the stabilization bound, and the seminorm transforms
//! `p_r`, `p-bar`, `q` collapse to eventual constants, so every limit
//! in sight is computed, not approximated.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};

use crate::cert::{CertReport, Claim, Witness};
use crate::error::{Error, Result};
use crate::rat::{format_rat, rat, rat_int, Rat};
use crate::signs::SignCombo;
use crate::span::{dist_to_span, DisjointSpan};
use crate::sparse::{norm_l1, SparseVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairingKind {
    Consecutive,
    Explicit,
}

/// Serialized model description: `{"pairing": "consecutive"}` or
/// `{"pairing": "explicit", "blocks": [[1,2,3],[7,9]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub pairing: PairingKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<Vec<u64>>>,
}

/// Finite presentation of a space containing l1: disjoint coordinate
/// blocks, one generator `y_n` per block, and the sign map
/// `T e_j = g_n` for `j` in block `n` (zero off the blocks).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingModel {
    blocks: Option<Vec<Vec<u64>>>,
    coord_block: BTreeMap<u64, u64>,
}

impl EmbeddingModel {
    /// The default pairing `n -> (2n-1, 2n)`.
    pub fn consecutive() -> Self {
        EmbeddingModel {
            blocks: None,
            coord_block: BTreeMap::new(),
        }
    }

    pub fn with_blocks(blocks: Vec<Vec<u64>>) -> Result<Self> {
        if blocks.is_empty() || blocks.iter().any(|b| b.is_empty()) {
            return Err(Error::InvalidBlocks);
        }
        let mut coord_block = BTreeMap::new();
        let mut sorted = Vec::with_capacity(blocks.len());
        for (i, block) in blocks.iter().enumerate() {
            let mut b = block.clone();
            b.sort_unstable();
            for &j in &b {
                if j == 0 || coord_block.insert(j, i as u64 + 1).is_some() {
                    return Err(Error::InvalidBlocks);
                }
            }
            sorted.push(b);
        }
        Ok(EmbeddingModel {
            blocks: Some(sorted),
            coord_block,
        })
    }

    pub fn from_config(cfg: &ModelConfig) -> Result<Self> {
        match (cfg.pairing, &cfg.blocks) {
            (PairingKind::Consecutive, None) => Ok(Self::consecutive()),
            (PairingKind::Explicit, Some(blocks)) => Self::with_blocks(blocks.clone()),
            _ => Err(Error::InvalidBlocks),
        }
    }

    pub fn to_config(&self) -> ModelConfig {
        match &self.blocks {
            None => ModelConfig {
                pairing: PairingKind::Consecutive,
                blocks: None,
            },
            Some(blocks) => ModelConfig {
                pairing: PairingKind::Explicit,
                blocks: Some(blocks.clone()),
            },
        }
    }

    pub fn is_consecutive(&self) -> bool {
        self.blocks.is_none()
    }

    /// Number of blocks, or `None` when the pairing is unbounded.
    pub fn num_blocks(&self) -> Option<u64> {
        self.blocks.as_ref().map(|b| b.len() as u64)
    }

    pub fn block_coords(&self, n: u64) -> Result<Vec<u64>> {
        if n == 0 {
            return Err(Error::UnknownBlock(n));
        }
        match &self.blocks {
            None => {
                let hi = n.checked_mul(2).ok_or(Error::UnknownBlock(n))?;
                Ok(vec![hi - 1, hi])
            }
            Some(blocks) => blocks
                .get((n - 1) as usize)
                .cloned()
                .ok_or(Error::UnknownBlock(n)),
        }
    }

    pub fn block_of(&self, j: u64) -> Option<u64> {
        match &self.blocks {
            None => {
                if j == 0 {
                    None
                } else {
                    Some(j / 2 + j % 2)
                }
            }
            Some(_) => self.coord_block.get(&j).copied(),
        }
    }

    /// `y_n`, the normalized average of the block's basis vectors.
    pub fn generator(&self, n: u64) -> Result<SparseVec> {
        let coords = self.block_coords(n)?;
        let weight = rat(1, coords.len() as i64);
        SparseVec::from_entries(coords.into_iter().map(|j| (j, weight.clone())))
    }

    /// `T x`: each block's coordinate sum lands on its sign row.
    pub fn apply_t(&self, x: &SparseVec) -> SignCombo {
        let mut sums: BTreeMap<u64, Rat> = BTreeMap::new();
        for (j, xj) in x.iter() {
            if let Some(n) = self.block_of(j) {
                *sums.entry(n).or_insert_with(Rat::zero) += xj;
            }
        }
        SignCombo::from_pairs(sums).expect("block indices are 1-based")
    }

    /// Least bound past which every block avoids `supp(x)`.
    pub fn stabilization_bound(&self, x: &SparseVec) -> u64 {
        x.support()
            .filter_map(|j| self.block_of(j))
            .max()
            .unwrap_or(0)
    }

    /// Span of the generators whose blocks meet `supp(x)`; distances
    /// to the full span only ever use these.
    pub fn span_for(&self, x: &SparseVec) -> Result<DisjointSpan> {
        let ns: std::collections::BTreeSet<u64> = x
            .support()
            .filter_map(|j| self.block_of(j))
            .collect();
        let mut gens = Vec::with_capacity(ns.len());
        for n in ns {
            gens.push(self.generator(n)?);
        }
        DisjointSpan::new(gens)
    }
}

/// `|||x|||` split into its two summands, with the operator-norm
/// witness and the optimal span coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelNormParts {
    pub t_norm: Rat,
    pub t_witness: u64,
    pub quotient_dist: Rat,
    pub total: Rat,
    pub span_blocks: Vec<u64>,
    pub span_coefficients: Vec<Rat>,
}

impl Serialize for ModelNormParts {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let span: BTreeMap<String, String> = self
            .span_blocks
            .iter()
            .zip(&self.span_coefficients)
            .map(|(n, c)| (n.to_string(), format_rat(c)))
            .collect();
        let mut s = serializer.serialize_struct("ModelNormParts", 5)?;
        s.serialize_field("t_norm", &format_rat(&self.t_norm))?;
        s.serialize_field("t_witness", &self.t_witness)?;
        s.serialize_field("quotient_dist", &format_rat(&self.quotient_dist))?;
        s.serialize_field("total", &format_rat(&self.total))?;
        s.serialize_field("span", &span)?;
        s.end()
    }
}

pub fn model_norm_parts(x: &SparseVec, model: &EmbeddingModel) -> Result<ModelNormParts> {
    let t = model.apply_t(x);
    let (t_norm, t_witness) = t.norm()?;
    let span = model.span_for(x)?;
    let (quotient_dist, span_coefficients) = dist_to_span(x, &span);
    let span_blocks: Vec<u64> = x
        .support()
        .filter_map(|j| model.block_of(j))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let total = &t_norm + &quotient_dist;
    Ok(ModelNormParts {
        t_norm,
        t_witness,
        quotient_dist,
        total,
        span_blocks,
        span_coefficients,
    })
}

/// `|||x||| = ||T x||_inf + dist(x, Y)`, exact.
pub fn model_norm(x: &SparseVec, model: &EmbeddingModel) -> Result<Rat> {
    Ok(model_norm_parts(x, model)?.total)
}

/// Certifies `|||x + y_n||| = |||x||| + 1` for `n` past the
/// stabilization bound, checking both summands separately: the
/// operator part grows by exactly 1 at a joint pattern witness and
/// the quotient part is untouched by the disjoint generator.
pub fn renorm_type_check(x: &SparseVec, n: u64, model: &EmbeddingModel) -> Result<CertReport> {
    let bound = model.stabilization_bound(x);
    if n <= bound {
        return Err(Error::BelowStabilizationBound { n, bound });
    }
    let y_n = model.generator(n)?;
    let base = model_norm_parts(x, model)?;
    let shifted = model_norm_parts(&x.add(&y_n), model)?;
    if shifted.t_norm != &base.t_norm + rat_int(1) {
        return Err(Error::CertificationFailed(format!(
            "operator part moved from {} to {}",
            format_rat(&base.t_norm),
            format_rat(&shifted.t_norm)
        )));
    }
    if shifted.quotient_dist != base.quotient_dist {
        return Err(Error::CertificationFailed(format!(
            "quotient part moved from {} to {}",
            format_rat(&base.quotient_dist),
            format_rat(&shifted.quotient_dist)
        )));
    }
    Ok(CertReport::new(
        Claim::RenormType,
        Witness::Index(n),
        shifted.total,
    ))
}

/// Extremes of `|||x||| / ||x||_1` over the samples; every ratio must
/// land in `[1/3, 2]`.
pub fn equivalence_scan(
    samples: &[SparseVec],
    model: &EmbeddingModel,
) -> Result<(Rat, Rat)> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let lo = rat(1, 3);
    let hi = rat_int(2);
    let mut extremes: Option<(Rat, Rat)> = None;
    for x in samples {
        let base = norm_l1(x);
        if base.is_zero() {
            return Err(Error::ZeroInput);
        }
        let ratio = model_norm(x, model)? / base;
        if ratio < lo || ratio > hi {
            return Err(Error::CertificationFailed(format!(
                "ratio {} escapes [1/3, 2] at x = {x}",
                format_rat(&ratio)
            )));
        }
        extremes = Some(match extremes {
            None => (ratio.clone(), ratio),
            Some((min, max)) => (min.min(ratio.clone()), max.max(ratio)),
        });
    }
    Ok(extremes.expect("samples nonempty"))
}

/// A seminorm whose translates along the generator sequence become
/// exactly constant past a computable index.
pub trait Seminorm {
    fn name(&self) -> &'static str;
    fn value(&self, x: &SparseVec, model: &EmbeddingModel) -> Result<Rat>;
    fn stabilization_bound(&self, x: &SparseVec, r: &Rat, model: &EmbeddingModel) -> Result<u64>;
}

/// `p = |||.|||`.
pub struct ModelSeminorm;

impl Seminorm for ModelSeminorm {
    fn name(&self) -> &'static str {
        "model"
    }

    fn value(&self, x: &SparseVec, model: &EmbeddingModel) -> Result<Rat> {
        model_norm(x, model)
    }

    fn stabilization_bound(&self, x: &SparseVec, _r: &Rat, model: &EmbeddingModel) -> Result<u64> {
        Ok(model.stabilization_bound(x))
    }
}

/// `p = ||.||_1` with the generators as a normalized basis sequence.
pub struct L1Seminorm;

impl Seminorm for L1Seminorm {
    fn name(&self) -> &'static str {
        "l1"
    }

    fn value(&self, x: &SparseVec, _model: &EmbeddingModel) -> Result<Rat> {
        Ok(norm_l1(x))
    }

    fn stabilization_bound(&self, x: &SparseVec, _r: &Rat, model: &EmbeddingModel) -> Result<u64> {
        Ok(model.stabilization_bound(x))
    }
}

/// `p_r(x) = p(x + r y_n) - r` at the first stable index, with the
/// eventual constancy verified over a window of 3 further indices.
pub fn p_r(x: &SparseVec, r: &Rat, p: &dyn Seminorm, model: &EmbeddingModel) -> Result<Rat> {
    if !r.is_positive() {
        return Err(Error::NonPositiveR {
            got: format_rat(r),
        });
    }
    let bound = p.stabilization_bound(x, r, model)?;
    let mut stable: Option<Rat> = None;
    for offset in 1..=4u64 {
        let n = bound.checked_add(offset).ok_or(Error::UnknownBlock(bound))?;
        let shifted = x.add(&model.generator(n)?.scale(r));
        let v = p.value(&shifted, model)?;
        match &stable {
            None => stable = Some(v),
            Some(v0) if *v0 != v => return Err(Error::NotStabilizing { n }),
            Some(_) => {}
        }
    }
    Ok(stable.expect("window nonempty") - r)
}

fn pbar_over_grid(
    x: &SparseVec,
    p: &dyn Seminorm,
    model: &EmbeddingModel,
    r_grid: &[Rat],
) -> Result<Rat> {
    let mut last: Option<(Rat, Rat)> = None; // (r, p_r)
    for r in r_grid {
        let v = p_r(x, r, p, model)?;
        if let Some((r_prev, v_prev)) = &last {
            if v > *v_prev {
                return Err(Error::NonMonotoneGrid {
                    r_lo: format_rat(r_prev),
                    r_hi: format_rat(r),
                });
            }
        }
        last = Some((r.clone(), v));
    }
    Ok(last.expect("grid nonempty").1)
}

/// `(p-bar(x), q(x))`: the inf over the grid (its last value, since
/// `p_r` is nonincreasing in `r`) and the symmetrization
/// `(p-bar(x) + p-bar(-x)) / 2`.
pub fn pbar_and_q(
    x: &SparseVec,
    p: &dyn Seminorm,
    model: &EmbeddingModel,
    r_grid: &[Rat],
) -> Result<(Rat, Rat)> {
    if r_grid.is_empty()
        || !r_grid[0].is_positive()
        || r_grid.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::BadGrid);
    }
    let pbar = pbar_over_grid(x, p, model, r_grid)?;
    let pbar_neg = pbar_over_grid(&x.neg(), p, model, r_grid)?;
    let q = (&pbar + &pbar_neg) / rat_int(2);
    Ok((pbar, q))
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma41Item {
    pub item: char,
    pub description: &'static str,
    pub checked: u64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma41Report {
    pub oracle: &'static str,
    pub items: Vec<Lemma41Item>,
}

impl Lemma41Report {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }
}

/// Exact check of the six seminorm-transform laws on all sampled
/// combinations: (a) `0 <= p_r <= p`, (b) `p_r = p` on the generator
/// span, (c) midpoint convexity in `x`, (d) convexity in `r` on
/// triples, (e) `p_r(tx) = t p_{r/t}(x)`, (f) `|p_r(x) - p_r(y)| <=
/// p(x - y)`.
pub fn lemma41_suite(
    samples: &[SparseVec],
    scalars: &[Rat],
    p: &dyn Seminorm,
    model: &EmbeddingModel,
) -> Result<Lemma41Report> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut rs: Vec<Rat> = scalars.iter().filter(|r| r.is_positive()).cloned().collect();
    rs.sort();
    rs.dedup();
    if rs.is_empty() {
        return Err(Error::BadGrid);
    }

    let mut items = Vec::new();
    let mut record =
        |item: char, description: &'static str, outcome: Result<(u64, Option<String>)>| match outcome
        {
            Ok((checked, counterexample)) => {
                items.push(Lemma41Item {
                    item,
                    description,
                    checked,
                    passed: counterexample.is_none(),
                    counterexample,
                });
                Ok(())
            }
            Err(e) => Err(e),
        };

    record('a', "0 <= p_r(x) <= p(x)", {
        (|| {
            let mut checked = 0;
            for x in samples {
                let px = p.value(x, model)?;
                for r in &rs {
                    let v = p_r(x, r, p, model)?;
                    checked += 1;
                    if v.is_negative() || v > px {
                        return Ok((
                            checked,
                            Some(format!("x = {x}, r = {}: p_r = {}", format_rat(r), format_rat(&v))),
                        ));
                    }
                }
            }
            Ok((checked, None))
        })()
    })?;

    record('b', "p_r = p on the generator span", {
        (|| {
            let span_blocks = match model.num_blocks() {
                None => 3,
                Some(m) => m.min(3),
            };
            let mut elements = Vec::new();
            for window in scalars.windows(span_blocks as usize).take(4) {
                let mut y = SparseVec::zero();
                for (i, c) in window.iter().enumerate() {
                    y = y.add(&model.generator(i as u64 + 1)?.scale(c));
                }
                elements.push(y);
            }
            elements.push(model.generator(1)?);
            let mut checked = 0;
            for y in &elements {
                let py = p.value(y, model)?;
                for r in &rs {
                    let v = p_r(y, r, p, model)?;
                    checked += 1;
                    if v != py {
                        return Ok((
                            checked,
                            Some(format!(
                                "span y = {y}, r = {}: p_r = {} but p = {}",
                                format_rat(r),
                                format_rat(&v),
                                format_rat(&py)
                            )),
                        ));
                    }
                }
            }
            Ok((checked, None))
        })()
    })?;

    record('c', "midpoint convexity in x", {
        (|| {
            let mut checked = 0;
            for pair in samples.windows(2) {
                let mid = pair[0].add(&pair[1]).scale(&rat(1, 2));
                for r in &rs {
                    let lhs = p_r(&mid, r, p, model)?;
                    let rhs =
                        (p_r(&pair[0], r, p, model)? + p_r(&pair[1], r, p, model)?) / rat_int(2);
                    checked += 1;
                    if lhs > rhs {
                        return Ok((
                            checked,
                            Some(format!(
                                "x = {}, y = {}, r = {}",
                                pair[0],
                                pair[1],
                                format_rat(r)
                            )),
                        ));
                    }
                }
            }
            Ok((checked, None))
        })()
    })?;

    record('d', "convexity in r on triples", {
        (|| {
            let mut checked = 0;
            for x in samples {
                for t in rs.windows(3) {
                    let (r1, r2, r3) = (&t[0], &t[1], &t[2]);
                    let lam = (r3 - r2) / (r3 - r1);
                    let rhs = &lam * p_r(x, r1, p, model)?
                        + (rat_int(1) - &lam) * p_r(x, r3, p, model)?;
                    checked += 1;
                    if p_r(x, r2, p, model)? > rhs {
                        return Ok((
                            checked,
                            Some(format!(
                                "x = {x}, r = ({}, {}, {})",
                                format_rat(r1),
                                format_rat(r2),
                                format_rat(r3)
                            )),
                        ));
                    }
                }
            }
            Ok((checked, None))
        })()
    })?;

    record('e', "p_r(tx) = t p_{r/t}(x)", {
        (|| {
            let mut checked = 0;
            for x in samples {
                for r in &rs {
                    for t in &rs {
                        let lhs = p_r(&x.scale(t), r, p, model)?;
                        let rhs = t * p_r(x, &(r / t), p, model)?;
                        checked += 1;
                        if lhs != rhs {
                            return Ok((
                                checked,
                                Some(format!(
                                    "x = {x}, r = {}, t = {}",
                                    format_rat(r),
                                    format_rat(t)
                                )),
                            ));
                        }
                    }
                }
            }
            Ok((checked, None))
        })()
    })?;

    record('f', "|p_r(x) - p_r(y)| <= p(x - y)", {
        (|| {
            let mut checked = 0;
            for pair in samples.windows(2) {
                let gap = p.value(&pair[0].sub(&pair[1]), model)?;
                for r in &rs {
                    let diff = (p_r(&pair[0], r, p, model)? - p_r(&pair[1], r, p, model)?).abs();
                    checked += 1;
                    if diff > gap {
                        return Ok((
                            checked,
                            Some(format!(
                                "x = {}, y = {}, r = {}",
                                pair[0],
                                pair[1],
                                format_rat(r)
                            )),
                        ));
                    }
                }
            }
            Ok((checked, None))
        })()
    })?;

    Ok(Lemma41Report {
        oracle: p.name(),
        items,
    })
}
