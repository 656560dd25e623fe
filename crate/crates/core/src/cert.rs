//! Exact certificates: a claim, a witness, and the quantity it attains.

use serde::{Deserialize, Serialize};

use crate::rat::{rat_string, Rat};
use crate::signs::DualVector;
use crate::sparse::SparseVec;

/// What a [`CertReport`] asserts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    /// `1 + ||T|| - ||Id + T|| = 0` for a rank-one operator on l1.
    DefectZero,
    /// A unit vector in a functional's slice at l1 distance exactly 2
    /// from the given point.
    SlicePoint,
    /// A functional in a weak* slice at sup distance exactly 2 from
    /// the given functional.
    WeakstarSlice,
    /// An inf-sum functional with scalar part cannot satisfy the
    /// Daugavet equation; the value is the exact defect lower bound.
    InfSumFailure,
    /// `||sum a_s f_s + t f_{n+1}|| = sum |a_s| + |t|` exactly.
    EpsOrthogonality,
    /// `|||x + y_n||| = |||x||| + 1` exactly under the model norm.
    RenormType,
}

/// Witness payload: a coordinate index, a point, or a functional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Witness {
    Index(u64),
    Vector(SparseVec),
    Functional(DualVector),
}

/// A verified exact certificate. Re-evaluating the claim at the stored
/// witness reproduces `value` exactly; `exact` is always true and is
/// serialized for consumers that distinguish numeric modes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub claim: Claim,
    pub witness: Witness,
    #[serde(with = "rat_string")]
    pub value: Rat,
    pub exact: bool,
}

impl CertReport {
    pub fn new(claim: Claim, witness: Witness, value: Rat) -> Self {
        CertReport {
            claim,
            witness,
            value,
            exact: true,
        }
    }

    pub fn witness_index(&self) -> Option<u64> {
        match self.witness {
            Witness::Index(j) => Some(j),
            _ => None,
        }
    }

    pub fn witness_vector(&self) -> Option<&SparseVec> {
        match &self.witness {
            Witness::Vector(v) => Some(v),
            _ => None,
        }
    }

    pub fn witness_functional(&self) -> Option<&DualVector> {
        match &self.witness {
            Witness::Functional(f) => Some(f),
            _ => None,
        }
    }
}
