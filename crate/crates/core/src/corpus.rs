//! Seeded generation of random test inputs.
//!
//! Every generator draws from a ChaCha8 stream keyed by (seed,
//! stream id), so identical configuration produces bit-identical
//! corpora and reports. Rationals are `p/q` with `|p| <= max_denom`
//! and `1 <= q <= max_denom`.

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
pub use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{rat, Rat};
use crate::signs::DualVector;
use crate::sparse::{norm_l1, SparseVec};
use crate::thickness::FiniteNet;

/// Bounds and seed for suite runs and corpus generation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub cases: u64,
    /// Cap on nonzero entries per generated vector (and on combo rows
    /// per functional).
    pub max_support: u64,
    /// Cap on coordinate and generator indices.
    pub max_gen: u64,
    /// Cap on numerators and denominators of generated rationals.
    pub max_denom: i64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            cases: 100,
            max_support: 6,
            max_gen: 40,
            max_denom: 100,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.cases == 0 {
            return Err(Error::InvalidConfig("cases must be positive".into()));
        }
        if self.max_support == 0 {
            return Err(Error::InvalidConfig("max_support must be positive".into()));
        }
        if self.max_gen == 0 {
            return Err(Error::InvalidConfig("max_gen must be positive".into()));
        }
        if self.max_denom <= 0 {
            return Err(Error::InvalidConfig("max_denom must be positive".into()));
        }
        Ok(())
    }
}

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn rand_rat(rng: &mut ChaCha8Rng, max_denom: i64) -> Rat {
    let q = rng.gen_range(1..=max_denom);
    let p = rng.gen_range(-max_denom..=max_denom);
    rat(p, q)
}

pub fn rand_nonzero_rat(rng: &mut ChaCha8Rng, max_denom: i64) -> Rat {
    loop {
        let r = rand_rat(rng, max_denom);
        if !r.is_zero() {
            return r;
        }
    }
}

fn rand_indices(rng: &mut ChaCha8Rng, count: u64, max_index: u64) -> BTreeSet<u64> {
    let count = count.min(max_index);
    let mut indices = BTreeSet::new();
    while (indices.len() as u64) < count {
        indices.insert(rng.gen_range(1..=max_index));
    }
    indices
}

/// Sparse vector with `min_entries..=max_entries` nonzero entries.
pub fn rand_sparse(
    rng: &mut ChaCha8Rng,
    min_entries: u64,
    max_entries: u64,
    max_index: u64,
    max_denom: i64,
) -> SparseVec {
    let count = rng.gen_range(min_entries..=max_entries.max(min_entries));
    let indices = rand_indices(rng, count, max_index);
    SparseVec::from_entries(
        indices
            .into_iter()
            .map(|j| (j, rand_nonzero_rat(rng, max_denom))),
    )
    .expect("generated indices are 1-based")
}

pub fn rand_unit_sparse(
    rng: &mut ChaCha8Rng,
    max_entries: u64,
    max_index: u64,
    max_denom: i64,
) -> SparseVec {
    let v = rand_sparse(rng, 1, max_entries, max_index, max_denom);
    let n = norm_l1(&v);
    v.scale(&n.recip())
}

/// Nonzero pure-combo functional, not normalized.
pub fn rand_pure_combo(
    rng: &mut ChaCha8Rng,
    max_rows: u64,
    max_index: u64,
    max_denom: i64,
) -> DualVector {
    let count = rng.gen_range(1..=max_rows.max(1));
    let rows = rand_indices(rng, count, max_index);
    DualVector::from_combo(
        rows.into_iter()
            .map(|n| (n, rand_nonzero_rat(rng, max_denom))),
    )
    .expect("generated rows are 1-based")
}

/// Pure-combo functional scaled to sup norm exactly 1.
pub fn rand_unit_combo(
    rng: &mut ChaCha8Rng,
    max_rows: u64,
    max_index: u64,
    max_denom: i64,
) -> DualVector {
    let y = rand_pure_combo(rng, max_rows, max_index, max_denom);
    let n = y.combo_abs_sum();
    y.scale(&n.recip())
}

/// Functional with both a combo part and a sparse correction; either
/// part may be empty, but not both.
pub fn rand_mixed_functional(
    rng: &mut ChaCha8Rng,
    max_rows: u64,
    max_index: u64,
    max_denom: i64,
) -> DualVector {
    loop {
        let combo_rows = rng.gen_range(0..=max_rows);
        let combo: Vec<(u64, Rat)> = rand_indices(rng, combo_rows, max_index)
            .into_iter()
            .map(|n| (n, rand_nonzero_rat(rng, max_denom)))
            .collect();
        let correction = rand_sparse(rng, 0, max_rows, max_index, max_denom);
        let y = DualVector::new(combo, correction).expect("generated rows are 1-based");
        if y != DualVector::zero() {
            return y;
        }
    }
}

pub fn rand_net(
    rng: &mut ChaCha8Rng,
    max_points: u64,
    max_entries: u64,
    max_index: u64,
    max_denom: i64,
) -> FiniteNet {
    let count = rng.gen_range(1..=max_points.max(1));
    let points = (0..count)
        .map(|_| rand_unit_sparse(rng, max_entries, max_index, max_denom))
        .collect();
    FiniteNet::new(points).expect("generated points are unit vectors")
}

const STREAM_VECTORS: u64 = 10;
const STREAM_FUNCTIONALS: u64 = 11;
const STREAM_NETS: u64 = 12;

/// An in-memory corpus; serialization to files is the caller's job.
#[derive(Clone, Debug, PartialEq)]
pub struct Corpus {
    pub vectors: Vec<SparseVec>,
    pub functionals: Vec<DualVector>,
    pub nets: Vec<FiniteNet>,
}

impl Corpus {
    pub fn generate(cfg: &SuiteConfig) -> Result<Corpus> {
        cfg.validate()?;
        let mut rng = rng_for(cfg.seed, STREAM_VECTORS);
        let vectors = (0..cfg.cases)
            .map(|_| rand_sparse(&mut rng, 0, cfg.max_support, cfg.max_gen, cfg.max_denom))
            .collect();
        let mut rng = rng_for(cfg.seed, STREAM_FUNCTIONALS);
        let functionals = (0..cfg.cases)
            .map(|_| rand_mixed_functional(&mut rng, cfg.max_support, cfg.max_gen, cfg.max_denom))
            .collect();
        let mut rng = rng_for(cfg.seed, STREAM_NETS);
        let nets = (0..cfg.cases)
            .map(|_| rand_net(&mut rng, 8, cfg.max_support, cfg.max_gen, cfg.max_denom))
            .collect();
        Ok(Corpus {
            vectors,
            functionals,
            nets,
        })
    }
}
