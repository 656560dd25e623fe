//! Finitely supported rational sequences: the computable elements of l1.
//!
//! Indices are 1-based. A [`SparseVec`] never stores a zero entry, so
//! support queries and disjointness tests are exact.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rat::{format_rat, parse_rat, Rat};

/// Finitely supported sequence with exact rational entries.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseVec {
    entries: BTreeMap<u64, Rat>,
}

impl SparseVec {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Unit basis vector `e_n`.
    pub fn basis(n: u64) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(n, Rat::from_integer(1.into()));
        SparseVec { entries }
    }

    /// Builds a vector from `(index, value)` pairs. Duplicate indices are
    /// summed; zero results are dropped; index 0 is rejected.
    pub fn from_entries<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, Rat)>,
    {
        let mut entries: BTreeMap<u64, Rat> = BTreeMap::new();
        for (idx, val) in pairs {
            if idx == 0 {
                return Err(Error::InvalidIndex);
            }
            let slot = entries.entry(idx).or_insert_with(Rat::zero);
            *slot += val;
        }
        entries.retain(|_, v| !v.is_zero());
        Ok(SparseVec { entries })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry at `index`, zero when off-support.
    pub fn get(&self, index: u64) -> Rat {
        self.entries.get(&index).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &Rat)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// Largest support index, 0 for the zero vector.
    pub fn max_support(&self) -> u64 {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        let mut entries = self.entries.clone();
        for (idx, val) in &other.entries {
            let slot = entries.entry(*idx).or_insert_with(Rat::zero);
            *slot += val;
        }
        entries.retain(|_, v| !v.is_zero());
        SparseVec { entries }
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> SparseVec {
        if c.is_zero() {
            return SparseVec::zero();
        }
        SparseVec {
            entries: self.entries.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn disjoint_from(&self, other: &SparseVec) -> bool {
        self.support().all(|idx| !other.entries.contains_key(&idx))
    }
}

/// Exact l1 norm: sum of absolute values over the support.
pub fn norm_l1(x: &SparseVec) -> Rat {
    x.entries.values().map(|v| v.abs()).sum()
}

/// Exact pairing of a finitely supported functional with a vector:
/// sum of `f_i * x_i` over the common support.
pub fn pair_sparse(f: &SparseVec, x: &SparseVec) -> Rat {
    let (small, large) = if f.support_len() <= x.support_len() {
        (f, x)
    } else {
        (x, f)
    };
    small
        .entries
        .iter()
        .filter_map(|(idx, v)| large.entries.get(idx).map(|w| v * w))
        .sum()
}

impl fmt::Display for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .entries
            .iter()
            .map(|(idx, v)| format!("{}*e{}", format_rat(v), idx))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

// JSON form: object mapping index strings to "p/q" strings, indices
// ascending, fractions reduced. {"1": "3/2", "4": "-1/2"}
impl Serialize for SparseVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.entries.len()))?;
        for (idx, val) in &self.entries {
            map.serialize_entry(&idx.to_string(), &format_rat(val))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for SparseVec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct SparseVisitor;

        impl<'de> Visitor<'de> for SparseVisitor {
            type Value = SparseVec;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a map from index strings to rational strings")
            }

            fn visit_map<A: MapAccess<'de>>(
                self,
                mut access: A,
            ) -> std::result::Result<SparseVec, A::Error> {
                let mut pairs = Vec::new();
                while let Some((key, value)) = access.next_entry::<String, String>()? {
                    let idx: u64 = key
                        .parse()
                        .map_err(|_| serde::de::Error::custom(format!("bad index {key:?}")))?;
                    let val = parse_rat(&value).map_err(serde::de::Error::custom)?;
                    pairs.push((idx, val));
                }
                SparseVec::from_entries(pairs).map_err(serde::de::Error::custom)
            }
        }

        deserializer.deserialize_map(SparseVisitor)
    }
}
