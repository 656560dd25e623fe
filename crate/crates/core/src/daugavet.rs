//! Exact Daugavet-equation evaluation for rank-one operators on l1.
//!
//! The operator norm of `Id + y* (x) x` on l1 is a supremum of column
//! norms `||e_j + v_j x||_1`. Columns up to the functional's
//! exceptional bound and inside the support of `x` are enumerated
//! explicitly; all later columns are disjoint from `x`, where the
//! supremum `1 + (sup tail |v_j|) ||x||_1` is attained at a sign
//! pattern witness. Everything is exact and every supremum comes with
//! the column that attains it.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cert::{CertReport, Claim, Witness};
use crate::error::{Error, Result};
use crate::rat::{format_rat, rat_int, rat_string, Rat};
use crate::signs::{sparse_pattern_witness, DualVector, Sign};
use crate::sparse::{norm_l1, SparseVec};

/// The rank-one operator `T = y* (x) x` on l1: `T z = y*(z) x`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOneOp {
    pub functional: DualVector,
    pub vector: SparseVec,
}

impl RankOneOp {
    pub fn new(functional: DualVector, vector: SparseVec) -> Self {
        RankOneOp { functional, vector }
    }

    /// `||T|| = ||y*||_inf * ||x||_1`, exact.
    pub fn operator_norm(&self) -> Result<Rat> {
        Ok(self.functional.norm()?.0 * norm_l1(&self.vector))
    }

    pub fn apply(&self, z: &SparseVec) -> SparseVec {
        self.vector.scale(&self.functional.eval(z))
    }
}

/// `||Id + T||` with the column index attaining it.
pub fn opnorm_id_plus_rank_one(op: &RankOneOp) -> Result<(Rat, u64)> {
    let y = &op.functional;
    let x = &op.vector;
    let x_norm = norm_l1(x);
    let bound = y.exceptional_bound();

    let mut explicit: std::collections::BTreeSet<u64> = (1..=bound).collect();
    explicit.extend(x.support());

    let mut best: Option<(Rat, u64)> = None;
    let mut push = |value: Rat, j: u64| {
        let better = match &best {
            None => true,
            Some((v, bj)) => value > *v || (value == *v && j < *bj),
        };
        if better {
            best = Some((value, j));
        }
    };

    for &j in &explicit {
        let column = SparseVec::basis(j).add(&x.scale(&y.coordinate(j)));
        push(norm_l1(&column), j);
    }

    let tail_start = bound.max(x.max_support()) + 1;
    if y.combo_indices().next().is_some() {
        let assignments: Vec<(u64, Sign)> =
            y.combo().map(|(n, a)| (n, Sign::of(a))).collect();
        let j = sparse_pattern_witness(&assignments, tail_start)?;
        push(rat_int(1) + y.combo_abs_sum() * &x_norm, j);
    } else {
        push(rat_int(1), tail_start);
    }

    Ok(best.expect("at least the tail column exists"))
}

/// The nonnegative gap `1 + ||T|| - ||Id + T||`; exactly zero whenever
/// the functional is a pure combination of the norming rows.
pub fn daugavet_defect(op: &RankOneOp) -> Result<Rat> {
    let (id_plus, _) = opnorm_id_plus_rank_one(op)?;
    Ok(rat_int(1) + op.operator_norm()? - id_plus)
}

fn require_unit_vector(x: &SparseVec) -> Result<()> {
    let n = norm_l1(x);
    if !n.is_one() {
        return Err(Error::NotUnitNorm {
            got: format_rat(&n),
        });
    }
    Ok(())
}

fn require_unit_pure_combo(y: &DualVector) -> Result<()> {
    if !y.is_pure_combo() {
        return Err(Error::NotPureCombo);
    }
    let n = y.combo_abs_sum();
    if !n.is_one() {
        return Err(Error::FunctionalNotUnit {
            got: format_rat(&n),
        });
    }
    Ok(())
}

fn require_nonneg_eps(eps: &Rat) -> Result<()> {
    if eps.is_negative() {
        return Err(Error::NegativeEpsilon {
            got: format_rat(eps),
        });
    }
    Ok(())
}

/// A unit vector `y` in the slice `S(y*, 0)` with `||x + y||_1 = 2`
/// exactly (so in particular `>= 2 - eps` for every requested `eps`).
///
/// The witness is `sigma e_j`: `sigma` is the sign of the lowest
/// nonzero combo coefficient and `j` is the first coordinate beyond
/// `supp(x)` and all planted prefixes whose `g`-pattern matches the
/// coefficient signs times `sigma`. Negating `y*` flips `sigma` and
/// keeps `j`.
pub fn slice_point_cert(x: &SparseVec, y_star: &DualVector, eps: &Rat) -> Result<CertReport> {
    require_nonneg_eps(eps)?;
    require_unit_vector(x)?;
    require_unit_pure_combo(y_star)?;

    let sigma = Sign::of(
        y_star
            .combo()
            .next()
            .map(|(_, a)| a)
            .expect("unit combo is nonempty"),
    );
    let assignments: Vec<(u64, Sign)> = y_star
        .combo()
        .map(|(n, a)| (n, Sign::of(a) * sigma))
        .collect();
    let j_min = y_star.exceptional_bound().max(x.max_support()) + 1;
    let j = sparse_pattern_witness(&assignments, j_min)?;

    let y = SparseVec::basis(j).scale(&sigma.to_rat());
    if !y_star.eval(&y).is_one() {
        return Err(Error::CertificationFailed(format!(
            "slice membership failed at column {j}"
        )));
    }
    let value = norm_l1(&x.add(&y));
    if value != rat_int(2) {
        return Err(Error::CertificationFailed(format!(
            "expected distance 2, got {}",
            format_rat(&value)
        )));
    }
    Ok(CertReport::new(Claim::SlicePoint, Witness::Vector(y), value))
}

/// A norming row `f_n` inside the weak* slice `S(x, 0)` with
/// `||x* + f_n||_inf = 2` exactly.
///
/// `n` comes from the double-norming witness for `x` (bumped past any
/// collision with the combo support of `x*`), so `f_n(x) = 1`; the sup
/// norm 2 is attained at a joint aligned pattern index.
pub fn weakstar_slice_cert(x_star: &DualVector, x: &SparseVec, eps: &Rat) -> Result<CertReport> {
    require_nonneg_eps(eps)?;
    require_unit_vector(x)?;
    require_unit_pure_combo(x_star)?;

    let taken: std::collections::BTreeSet<u64> = x_star.combo_indices().collect();
    let mut m = 1;
    let n = loop {
        let n = crate::signs::double_norming_witness(x, m)?;
        if !taken.contains(&n) {
            break n;
        }
        m = n + 1;
    };

    let row = DualVector::f_basis(n);
    if !row.eval(x).is_one() {
        return Err(Error::CertificationFailed(format!(
            "row {n} does not norm the point"
        )));
    }
    let (value, _) = x_star.add(&row).norm()?;
    if value != rat_int(2) {
        return Err(Error::CertificationFailed(format!(
            "expected sup norm 2, got {}",
            format_rat(&value)
        )));
    }
    Ok(CertReport::new(
        Claim::WeakstarSlice,
        Witness::Functional(row),
        value,
    ))
}

/// An element of `Z = l1 (+)_inf K`: an l1 part and a scalar part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfSumPoint {
    pub vector: SparseVec,
    #[serde(with = "rat_string")]
    pub scalar: Rat,
}

impl InfSumPoint {
    /// `max(||vector||_1, |scalar|)`.
    pub fn norm(&self) -> Rat {
        norm_l1(&self.vector).max(self.scalar.abs())
    }
}

/// A functional on `Z = l1 (+)_inf K`; its norm is the sum
/// `||x_part||_inf + |scalar_part|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfSumFunctional {
    pub x_part: DualVector,
    #[serde(with = "rat_string")]
    pub scalar_part: Rat,
}

impl InfSumFunctional {
    pub fn norm(&self) -> Result<Rat> {
        Ok(self.x_part.norm()?.0 + self.scalar_part.abs())
    }

    pub fn eval(&self, z: &InfSumPoint) -> Rat {
        self.x_part.eval(&z.vector) + &self.scalar_part * &z.scalar
    }
}

/// Why a functional with nonzero scalar part breaks the Daugavet
/// equation on `l1 (+)_inf K`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InfSumObstruction {
    /// The direction `z0 = (0, -|b0|/b0)` the equation would need.
    pub z0: InfSumPoint,
    /// `sup ||z + z*(z) z0||` over the extreme points `(+-e_j, +-1)`.
    #[serde(with = "rat_string")]
    pub extreme_sup: Rat,
    /// `max(1, ||x0*|| + 1 - |b0|)`; the supremum never exceeds it.
    #[serde(with = "rat_string")]
    pub sup_bound: Rat,
    /// `1 + ||z* (x) z0|| - extreme_sup = min(1, 2 |b0|) > 0`.
    #[serde(with = "rat_string")]
    pub defect_lower_bound: Rat,
    /// Extreme point attaining the supremum.
    pub witness: InfSumPoint,
}

impl InfSumObstruction {
    pub fn cert_report(&self) -> CertReport {
        CertReport::new(
            Claim::InfSumFailure,
            Witness::Vector(self.witness.vector.clone()),
            self.defect_lower_bound.clone(),
        )
    }
}

/// Evaluates the failure of the Daugavet equation for
/// `z* = (x0*, b0)` with `b0 != 0` and `||x0*|| + |b0| = 1`.
///
/// With `z0 = (0, -|b0|/b0)`, the norm of `z + z*(z) z0` at an extreme
/// point `(sigma e_j, tau)` is `max(1, |tau (1 - |b0|) - s sigma v_j|)`
/// where `s = sign(b0)` and `v_j` is the functional coordinate. The
/// supremum over all extreme points is computed exactly: explicit
/// columns up to the exceptional bound, then the aligned tail witness.
pub fn inf_sum_counterexample(z_star: &InfSumFunctional) -> Result<InfSumObstruction> {
    let b0 = &z_star.scalar_part;
    if b0.is_zero() {
        return Err(Error::ZeroScalarPart);
    }
    let x_part = &z_star.x_part;
    let (x_norm, _) = x_part.norm()?;
    let total = &x_norm + b0.abs();
    if !total.is_one() {
        return Err(Error::NotNormalizedSum {
            got: format_rat(&total),
        });
    }

    let s = Sign::of(b0);
    let z0 = InfSumPoint {
        vector: SparseVec::zero(),
        scalar: -s.to_rat(),
    };
    let one_minus_b = rat_int(1) - b0.abs();

    // |tau (1 - |b0|) - s sigma v_j| maximized over sigma, tau = +-1
    let column_value = |v: &Rat| -> Rat { &one_minus_b + v.abs() };

    let bound = x_part.exceptional_bound();
    let mut best_col: Option<(Rat, u64, Rat)> = None; // (value, j, v_j)
    for j in 1..=bound {
        let v = x_part.coordinate(j);
        let val = column_value(&v);
        if best_col.as_ref().is_none_or(|(b, _, _)| val > *b) {
            best_col = Some((val, j, v));
        }
    }
    let tail_sum = x_part.combo_abs_sum();
    let (col_sup, j, v_j) = if best_col
        .as_ref()
        .is_none_or(|(b, _, _)| column_value(&tail_sum) > *b)
    {
        let assignments: Vec<(u64, Sign)> =
            x_part.combo().map(|(n, a)| (n, Sign::of(a))).collect();
        let j = if assignments.is_empty() {
            bound + 1
        } else {
            sparse_pattern_witness(&assignments, bound + 1)?
        };
        (column_value(&tail_sum), j, tail_sum)
    } else {
        best_col.expect("explicit column exists")
    };

    let extreme_sup = rat_int(1).max(col_sup);
    let sup_bound = rat_int(1).max(&x_norm + &one_minus_b);
    debug_assert!(extreme_sup <= sup_bound);

    // sigma chosen so the scalar component reaches tau(1-|b0|) + |v_j|
    let sigma = s.flip() * Sign::of(&v_j);
    let witness = InfSumPoint {
        vector: SparseVec::basis(j).scale(&sigma.to_rat()),
        scalar: rat_int(1),
    };

    // ||z* (x) z0|| = ||z*|| ||z0|| = 1, so the defect is 2 - sup
    let defect_lower_bound = rat_int(2) - &extreme_sup;
    Ok(InfSumObstruction {
        z0,
        extreme_sup,
        sup_bound,
        defect_lower_bound,
        witness,
    })
}
