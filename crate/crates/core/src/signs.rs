//! Independent sign families and computable functionals on l1.
//!
//! Two deterministic ±1 families drive every certificate in this crate.
//!
//! The base family `g_n` is independent: every finite sign pattern
//! `(alpha_1, ..., alpha_n)` occurs at infinitely many coordinates, and
//! the witnesses form an explicit arithmetic progression. The rule is
//! `g(s, j) = +1` iff bit `s-1` of `j-1` is 0, so row `s` alternates
//! signs in blocks of length `2^(s-1)`.
//!
//! The modified family `f_n` plants every finite ±1 prefix: for
//! `n in (2^k, 2^(k+1)]` the first `k` coordinates of `f_n` enumerate
//! all `2^k` sign patterns (bit `j-1` of `n - 2^k - 1`, with 0 mapped
//! to +1), and beyond the prefix `f_n` agrees with `g_n`. Tails of
//! `(f_n)` therefore norm every finitely supported vector exactly,
//! while finite combinations keep the full `sum |a_n|` sup norm.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::de::{MapAccess, Visitor};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cert::{CertReport, Claim, Witness};
use crate::error::{Error, Result};
use crate::rat::{format_rat, parse_rat, Rat};
use crate::sparse::SparseVec;

/// A ±1 value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn to_rat(self) -> Rat {
        Rat::from_integer(self.to_i8().into())
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// Sign of a rational; zero maps to `Plus`.
    pub fn of(r: &Rat) -> Sign {
        if r.is_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if *self == Sign::Plus { '+' } else { '-' })
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Coordinate `j` of the independent row `g_s`: +1 iff bit `s-1` of
/// `j-1` is 0. Both indices are 1-based.
pub fn g_sign(s: u64, j: u64) -> Sign {
    debug_assert!(s >= 1 && j >= 1);
    if s > 64 {
        // j - 1 < 2^64, so every bit at position >= 64 is 0
        return Sign::Plus;
    }
    if (j - 1) >> (s - 1) & 1 == 0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Length of the planted prefix of `f_n`: 0 for `n <= 2`, otherwise
/// the block exponent `k = floor(log2(n-1))`.
pub fn prefix_len(n: u64) -> u64 {
    if n <= 2 {
        0
    } else {
        (n - 1).ilog2() as u64
    }
}

/// Coordinate `j` of the modified row `f_n`.
pub fn f_coord(n: u64, j: u64) -> Sign {
    debug_assert!(n >= 1 && j >= 1);
    let k = prefix_len(n);
    if j <= k {
        let offset = n - (1u64 << k) - 1;
        if offset >> (j - 1) & 1 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    } else {
        g_sign(n, j)
    }
}

/// Least `j >= j_min` whose `g`-signs match `assignments`: for each
/// `(s, alpha)`, `g(s, j) = alpha`. Witnesses form the arithmetic
/// progression of `j` with the constrained bits of `j-1` fixed, so the
/// minimum is found by a monotone search over the free bits.
///
/// A `-` constraint at row `s` forces bit `s-1` of `j-1`; rows past 64
/// with a `-` constraint have no representable witness and are
/// rejected.
pub fn sparse_pattern_witness(assignments: &[(u64, Sign)], j_min: u64) -> Result<u64> {
    let j_min = j_min.max(1);
    let mut mask: u64 = 0;
    let mut fixed: u64 = 0;
    for (s, alpha) in assignments {
        debug_assert!(*s >= 1);
        if *s >= 65 {
            match alpha {
                // bit s-1 of j-1 is 0 for every representable j
                Sign::Plus => continue,
                Sign::Minus => return Err(Error::WitnessOverflow { index: *s }),
            }
        }
        let bit = 1u64 << (s - 1);
        mask |= bit;
        if *alpha == Sign::Minus {
            fixed |= bit;
        }
    }

    let target = (j_min - 1) as u128;
    let value_at = |free: u128| -> u128 { expand_free_bits(free, mask) | fixed as u128 };

    // minimal free-bits field whose expansion reaches j_min - 1
    let (mut lo, mut hi) = (0u128, 1u128 << 66);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if value_at(mid) >= target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let m = value_at(lo);
    if m >= u64::MAX as u128 {
        let index = assignments
            .iter()
            .map(|(s, _)| *s)
            .max()
            .unwrap_or(64);
        return Err(Error::WitnessOverflow { index });
    }
    Ok(m as u64 + 1)
}

// Scatters the bits of `free` (LSB first) into the zero bits of
// `mask`, treating every position >= 64 as free.
fn expand_free_bits(free: u128, mask: u64) -> u128 {
    let mut out: u128 = 0;
    let mut src: u32 = 0;
    for pos in 0..128u32 {
        let is_free = pos >= 64 || mask >> pos & 1 == 0;
        if is_free {
            if free >> src & 1 == 1 {
                out |= 1u128 << pos;
            }
            src += 1;
            if src >= 128 || free >> src == 0 {
                break;
            }
        }
    }
    out
}

/// Least `j >= j_min` with `g(s, j) = pattern[s-1]` for every
/// `s = 1..=pattern.len()`.
pub fn pattern_witness(pattern: &[Sign], j_min: u64) -> Result<u64> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let assignments: Vec<(u64, Sign)> = pattern
        .iter()
        .enumerate()
        .map(|(i, alpha)| (i as u64 + 1, *alpha))
        .collect();
    sparse_pattern_witness(&assignments, j_min)
}

/// Row index `n >= m` with `f_n(x) = ||x||_1` exactly.
///
/// Picks the block `k = max(J, floor(log2 m) + 1)` covering the whole
/// support `J` of `x` and the unique row in that block whose prefix
/// matches the sign pattern of `x` (coordinates off the support get
/// `+`). Since `n > 2^k >= 2 * 2^(floor(log2 m)) > m`, the returned
/// row lies in the requested tail.
pub fn double_norming_witness(x: &SparseVec, m: u64) -> Result<u64> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let m = m.max(1);
    let j_bound = x.max_support();
    let k = j_bound.max(m.ilog2() as u64 + 1);
    if k >= 63 {
        return Err(Error::BlockIndexOverflow { k });
    }
    let mut offset: u64 = 0;
    for j in 1..=k {
        if Sign::of(&x.get(j)) == Sign::Minus {
            offset |= 1 << (j - 1);
        }
    }
    Ok((1u64 << k) + 1 + offset)
}

/// Coordinate index certifying `||sum a_s f_s|| = sum |a_s|` exactly:
/// beyond every planted prefix, with `g`-signs aligned to the
/// coefficient signs.
pub fn isometric_l1_witness(coefficients: &[Rat]) -> Result<u64> {
    let assignments: Vec<(u64, Sign)> = coefficients
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(i, a)| (i as u64 + 1, Sign::of(a)))
        .collect();
    if assignments.is_empty() {
        return Err(Error::ZeroInput);
    }
    let j_min = assignments
        .iter()
        .map(|(s, _)| prefix_len(*s))
        .max()
        .unwrap()
        + 1;
    sparse_pattern_witness(&assignments, j_min)
}

/// Certifies `||sum a_s f_s + t f_{n+1}|| = sum |a_s| + |t|` exactly,
/// the orthogonality of the next row against the span of the first `n`.
pub fn eps_orthogonality_check(coefficients: &[Rat], t: &Rat) -> Result<CertReport> {
    let mut all: Vec<Rat> = coefficients.to_vec();
    all.push(t.clone());
    let value: Rat = all.iter().map(|a| a.abs()).sum();
    let witness = if value.is_zero() {
        1
    } else {
        isometric_l1_witness(&all)?
    };
    Ok(CertReport::new(
        Claim::EpsOrthogonality,
        Witness::Index(witness),
        value,
    ))
}

/// A computable element of `l_infinity = (l1)*`: a finite combination
/// of the rows `f_n` plus a finitely supported correction.
///
/// Coordinates past the exceptional bound (planted prefixes and the
/// correction support) depend only on the `g`-pattern, which is what
/// makes the sup norm exactly computable.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DualVector {
    combo: BTreeMap<u64, Rat>,
    correction: SparseVec,
}

impl DualVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new<I>(combo: I, correction: SparseVec) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, Rat)>,
    {
        let mut map: BTreeMap<u64, Rat> = BTreeMap::new();
        for (n, a) in combo {
            if n == 0 {
                return Err(Error::InvalidIndex);
            }
            let slot = map.entry(n).or_insert_with(Rat::zero);
            *slot += a;
        }
        map.retain(|_, a| !a.is_zero());
        Ok(DualVector {
            combo: map,
            correction,
        })
    }

    /// The row functional `f_n`.
    pub fn f_basis(n: u64) -> Self {
        let mut combo = BTreeMap::new();
        combo.insert(n, Rat::from_integer(1.into()));
        DualVector {
            combo,
            correction: SparseVec::zero(),
        }
    }

    pub fn from_combo<I: IntoIterator<Item = (u64, Rat)>>(combo: I) -> Result<Self> {
        Self::new(combo, SparseVec::zero())
    }

    pub fn from_correction(correction: SparseVec) -> Self {
        DualVector {
            combo: BTreeMap::new(),
            correction,
        }
    }

    pub fn combo(&self) -> impl Iterator<Item = (u64, &Rat)> {
        self.combo.iter().map(|(n, a)| (*n, a))
    }

    pub fn combo_indices(&self) -> impl Iterator<Item = u64> + '_ {
        self.combo.keys().copied()
    }

    pub fn correction(&self) -> &SparseVec {
        &self.correction
    }

    pub fn is_pure_combo(&self) -> bool {
        self.correction.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.combo.is_empty() && self.correction.is_zero()
    }

    /// Sum of absolute combo coefficients: the tail sup norm.
    pub fn combo_abs_sum(&self) -> Rat {
        self.combo.values().map(|a| a.abs()).sum()
    }

    /// Bound past which coordinates depend only on the `g`-pattern.
    pub fn exceptional_bound(&self) -> u64 {
        let prefixes = self
            .combo
            .keys()
            .map(|n| prefix_len(*n))
            .max()
            .unwrap_or(0);
        prefixes.max(self.correction.max_support())
    }

    /// Exact coordinate value `v_j`.
    pub fn coordinate(&self, j: u64) -> Rat {
        let mut v = self.correction.get(j);
        for (n, a) in &self.combo {
            v += a * f_coord(*n, j).to_rat();
        }
        v
    }

    /// Exact pairing with a finitely supported vector.
    pub fn eval(&self, x: &SparseVec) -> Rat {
        x.iter().map(|(j, xj)| self.coordinate(j) * xj).sum()
    }

    /// Exact sup norm together with a coordinate attaining it.
    ///
    /// The maximum of the explicit coordinates up to the exceptional
    /// bound competes with the tail supremum `sum |a_n|`, attained at
    /// the aligned pattern witness beyond the bound. On ties the
    /// explicit coordinate wins.
    pub fn norm(&self) -> Result<(Rat, u64)> {
        let bound = self.exceptional_bound();
        let mut best: Option<(Rat, u64)> = None;
        for j in 1..=bound {
            let v = self.coordinate(j).abs();
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, j));
            }
        }
        if self.combo.is_empty() {
            return Ok(best.unwrap_or((Rat::zero(), 1)));
        }
        let tail = self.combo_abs_sum();
        match best {
            Some((v, j)) if v >= tail => Ok((v, j)),
            _ => {
                let assignments: Vec<(u64, Sign)> = self
                    .combo
                    .iter()
                    .map(|(n, a)| (*n, Sign::of(a)))
                    .collect();
                let j = sparse_pattern_witness(&assignments, bound + 1)?;
                Ok((tail, j))
            }
        }
    }

    pub fn add(&self, other: &DualVector) -> DualVector {
        let mut combo = self.combo.clone();
        for (n, a) in &other.combo {
            let slot = combo.entry(*n).or_insert_with(Rat::zero);
            *slot += a;
        }
        combo.retain(|_, a| !a.is_zero());
        DualVector {
            combo,
            correction: self.correction.add(&other.correction),
        }
    }

    pub fn neg(&self) -> DualVector {
        DualVector {
            combo: self.combo.iter().map(|(n, a)| (*n, -a)).collect(),
            correction: self.correction.neg(),
        }
    }

    pub fn scale(&self, c: &Rat) -> DualVector {
        if c.is_zero() {
            return DualVector::zero();
        }
        DualVector {
            combo: self.combo.iter().map(|(n, a)| (*n, a * c)).collect(),
            correction: self.correction.scale(c),
        }
    }
}

// JSON form: {"combo": {"n": "p/q", ...}, "correction": SparseVec-JSON}
impl Serialize for DualVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct ComboMap<'a>(&'a BTreeMap<u64, Rat>);
        impl Serialize for ComboMap<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (n, a) in self.0 {
                    map.serialize_entry(&n.to_string(), &format_rat(a))?;
                }
                map.end()
            }
        }
        let mut s = serializer.serialize_struct("DualVector", 2)?;
        s.serialize_field("combo", &ComboMap(&self.combo))?;
        s.serialize_field("correction", &self.correction)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for DualVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct DualVisitor;

        impl<'de> Visitor<'de> for DualVisitor {
            type Value = DualVector;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an object with combo and correction fields")
            }

            fn visit_map<A: MapAccess<'de>>(
                self,
                mut access: A,
            ) -> std::result::Result<DualVector, A::Error> {
                let mut combo: Option<BTreeMap<String, String>> = None;
                let mut correction: Option<SparseVec> = None;
                while let Some(key) = access.next_key::<String>()? {
                    match key.as_str() {
                        "combo" => combo = Some(access.next_value()?),
                        "correction" => correction = Some(access.next_value()?),
                        other => {
                            return Err(serde::de::Error::unknown_field(
                                other,
                                &["combo", "correction"],
                            ))
                        }
                    }
                }
                let mut pairs = Vec::new();
                for (key, value) in combo.unwrap_or_default() {
                    let n: u64 = key
                        .parse()
                        .map_err(|_| serde::de::Error::custom(format!("bad index {key:?}")))?;
                    let a = parse_rat(&value).map_err(serde::de::Error::custom)?;
                    pairs.push((n, a));
                }
                DualVector::new(pairs, correction.unwrap_or_default())
                    .map_err(serde::de::Error::custom)
            }
        }

        deserializer.deserialize_map(DualVisitor)
    }
}

/// A finite combination of the base rows `g_n`; the image of the model
/// operator lives here. The sup norm of `sum c_n g_n` is `sum |c_n|`,
/// attained at any coordinate whose `g`-pattern aligns with the
/// coefficient signs.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SignCombo {
    coefficients: BTreeMap<u64, Rat>,
}

impl SignCombo {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (u64, Rat)>>(pairs: I) -> Result<Self> {
        let mut coefficients: BTreeMap<u64, Rat> = BTreeMap::new();
        for (n, c) in pairs {
            if n == 0 {
                return Err(Error::InvalidIndex);
            }
            let slot = coefficients.entry(n).or_insert_with(Rat::zero);
            *slot += c;
        }
        coefficients.retain(|_, c| !c.is_zero());
        Ok(SignCombo { coefficients })
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &Rat)> {
        self.coefficients.iter().map(|(n, c)| (*n, c))
    }

    pub fn coordinate(&self, j: u64) -> Rat {
        self.coefficients
            .iter()
            .map(|(n, c)| c * g_sign(*n, j).to_rat())
            .sum()
    }

    pub fn eval(&self, x: &SparseVec) -> Rat {
        x.iter().map(|(j, xj)| self.coordinate(j) * xj).sum()
    }

    /// `(sum |c_n|, aligned witness index)`, with `j_min` as a lower
    /// bound on the witness.
    pub fn norm_from(&self, j_min: u64) -> Result<(Rat, u64)> {
        if self.coefficients.is_empty() {
            return Ok((Rat::zero(), j_min.max(1)));
        }
        let value = self.coefficients.values().map(|c| c.abs()).sum();
        let assignments: Vec<(u64, Sign)> = self
            .coefficients
            .iter()
            .map(|(n, c)| (*n, Sign::of(c)))
            .collect();
        let j = sparse_pattern_witness(&assignments, j_min)?;
        Ok((value, j))
    }

    pub fn norm(&self) -> Result<(Rat, u64)> {
        self.norm_from(1)
    }

    pub fn add(&self, other: &SignCombo) -> SignCombo {
        let mut coefficients = self.coefficients.clone();
        for (n, c) in &other.coefficients {
            let slot = coefficients.entry(*n).or_insert_with(Rat::zero);
            *slot += c;
        }
        coefficients.retain(|_, c| !c.is_zero());
        SignCombo { coefficients }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};
    use crate::sparse::norm_l1;
    use proptest::prelude::*;

    #[test]
    fn g_sign_examples() {
        assert_eq!(g_sign(1, 1), Sign::Plus);
        assert_eq!(g_sign(1, 2), Sign::Minus);
        assert_eq!(g_sign(2, 3), Sign::Minus);
        // row 700 has no set bit below 2^64
        assert_eq!(g_sign(700, 123456), Sign::Plus);
    }

    #[test]
    fn pattern_witness_examples() {
        assert_eq!(pattern_witness(&[Sign::Plus], 1).unwrap(), 1);
        assert_eq!(pattern_witness(&[Sign::Minus, Sign::Plus], 1).unwrap(), 2);
        assert_eq!(pattern_witness(&[Sign::Plus, Sign::Plus], 10).unwrap(), 13);
        assert_eq!(pattern_witness(&[], 1), Err(Error::EmptyPattern));
    }

    #[test]
    fn f_coord_examples() {
        assert_eq!(f_coord(3, 1), Sign::Plus);
        assert_eq!(f_coord(4, 1), Sign::Minus);
        for j in 1..=40 {
            assert_eq!(f_coord(1, j), g_sign(1, j));
            assert_eq!(f_coord(2, j), g_sign(2, j));
        }
    }

    #[test]
    fn prefix_blocks() {
        assert_eq!(prefix_len(1), 0);
        assert_eq!(prefix_len(2), 0);
        assert_eq!(prefix_len(3), 1);
        assert_eq!(prefix_len(4), 1);
        assert_eq!(prefix_len(5), 2);
        assert_eq!(prefix_len(8), 2);
        assert_eq!(prefix_len(9), 3);
    }

    #[test]
    fn prefix_bijection_per_block() {
        for k in 1u32..=10 {
            let mut seen = std::collections::BTreeSet::new();
            for n in (1u64 << k) + 1..=(1u64 << (k + 1)) {
                let prefix: Vec<Sign> = (1..=k as u64).map(|j| f_coord(n, j)).collect();
                assert!(seen.insert(prefix), "duplicate prefix in block k={k}");
            }
            assert_eq!(seen.len(), 1 << k);
        }
    }

    #[test]
    fn dualvec_eval_examples() {
        let e1 = SparseVec::basis(1);
        assert_eq!(DualVector::f_basis(1).eval(&e1), rat_int(1));
        assert_eq!(DualVector::f_basis(3).eval(&e1), rat_int(1));
        assert_eq!(DualVector::zero().eval(&e1), rat_int(0));
    }

    #[test]
    fn dualvec_norm_examples() {
        let (n, j) = DualVector::f_basis(1).norm().unwrap();
        assert_eq!((n, j), (rat_int(1), 1));

        let half = DualVector::from_combo([(1, rat(1, 2)), (2, rat(1, 2))]).unwrap();
        let (n, j) = half.norm().unwrap();
        assert_eq!(n, rat_int(1));
        assert_eq!(half.coordinate(j), rat_int(1));

        let bumped = DualVector::new(
            [(1, rat_int(1))],
            SparseVec::from_entries([(1, rat_int(5))]).unwrap(),
        )
        .unwrap();
        let (n, j) = bumped.norm().unwrap();
        assert_eq!((n, j), (rat_int(6), 1));
    }

    #[test]
    fn double_norming_examples() {
        let e1 = SparseVec::basis(1);
        assert_eq!(double_norming_witness(&e1, 1).unwrap(), 3);
        assert_eq!(double_norming_witness(&e1.neg(), 1).unwrap(), 4);
        let x = SparseVec::from_entries([(1, rat(1, 2)), (2, rat(-1, 2))]).unwrap();
        let n = double_norming_witness(&x, 100).unwrap();
        assert_eq!(prefix_len(n), 7);
        assert!(n >= 100);
        assert_eq!(f_coord(n, 1), Sign::Plus);
        assert_eq!(f_coord(n, 2), Sign::Minus);
        assert_eq!(
            DualVector::f_basis(n).eval(&x),
            norm_l1(&x)
        );
        assert_eq!(double_norming_witness(&SparseVec::zero(), 1), Err(Error::ZeroInput));
    }

    #[test]
    fn isometric_witness_examples() {
        assert_eq!(isometric_l1_witness(&[rat_int(1)]).unwrap(), 1);

        let j = isometric_l1_witness(&[rat_int(1), rat_int(-1)]).unwrap();
        assert_eq!(j, 3);
        assert_eq!(g_sign(1, j), Sign::Plus);
        assert_eq!(g_sign(2, j), Sign::Minus);

        let coeffs = [rat(1, 2), rat(1, 3), rat(1, 6)];
        let j = isometric_l1_witness(&coeffs).unwrap();
        let value: Rat = coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a * f_coord(i as u64 + 1, j).to_rat())
            .sum();
        assert_eq!(value, rat_int(1));
        assert!(j > prefix_len(3));
    }

    #[test]
    fn orthogonality_examples() {
        let r = eps_orthogonality_check(&[rat_int(1)], &rat_int(1)).unwrap();
        assert_eq!(r.value, rat_int(2));
        let j = r.witness_index().unwrap();
        assert_eq!(g_sign(1, j), Sign::Plus);
        assert_eq!(g_sign(2, j), Sign::Plus);

        let r = eps_orthogonality_check(&[rat_int(1)], &rat_int(-1)).unwrap();
        assert_eq!(r.value, rat_int(2));
        let j = r.witness_index().unwrap();
        assert_eq!(g_sign(1, j), Sign::Plus);
        assert_eq!(g_sign(2, j), Sign::Minus);

        let r = eps_orthogonality_check(&[], &rat_int(1)).unwrap();
        assert_eq!(r.value, rat_int(1));
    }

    #[test]
    fn minus_constraint_past_range_rejected() {
        let err = sparse_pattern_witness(&[(70, Sign::Minus)], 1).unwrap_err();
        assert_eq!(err, Error::WitnessOverflow { index: 70 });
        // + constraints far out are free
        assert_eq!(sparse_pattern_witness(&[(70, Sign::Plus)], 5).unwrap(), 5);
    }

    #[test]
    fn dualvec_json_round_trip() {
        let v = DualVector::new(
            [(2, rat(-1, 3)), (5, rat_int(2))],
            SparseVec::from_entries([(1, rat(1, 2))]).unwrap(),
        )
        .unwrap();
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(
            json,
            r#"{"combo":{"2":"-1/3","5":"2"},"correction":{"1":"1/2"}}"#
        );
        let back: DualVector = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
    }

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-30i64..=30, 1i64..=20).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        // independence: every pattern up to length 12 occurs at the
        // witness, at witness + period, and nowhere earlier
        #[test]
        fn independence(bits in proptest::collection::vec(proptest::bool::ANY, 1..=12),
                        j_min in 1u64..=1_000_000) {
            let pattern: Vec<Sign> = bits
                .iter()
                .map(|b| if *b { Sign::Plus } else { Sign::Minus })
                .collect();
            let j = pattern_witness(&pattern, j_min).unwrap();
            prop_assert!(j >= j_min);
            let matches = |jj: u64| pattern
                .iter()
                .enumerate()
                .all(|(i, alpha)| g_sign(i as u64 + 1, jj) == *alpha);
            prop_assert!(matches(j));
            prop_assert!(matches(j + (1 << pattern.len())));
            for jj in j_min..j {
                prop_assert!(!matches(jj));
            }
        }

        // isometry: ||sum a_s f_s|| = sum |a_s| exactly
        #[test]
        fn combo_norm_is_coefficient_sum(
            coeffs in proptest::collection::vec(small_rat(), 1..=10)
        ) {
            let expected: Rat = coeffs.iter().map(|a| a.abs()).sum();
            let v = DualVector::from_combo(
                coeffs.iter().cloned().enumerate().map(|(i, a)| (i as u64 + 1, a)),
            ).unwrap();
            let (norm, j) = v.norm().unwrap();
            prop_assert_eq!(&norm, &expected);
            prop_assert_eq!(v.coordinate(j).abs(), norm);
        }

        // double-norming: exact norming from arbitrarily late tails
        #[test]
        fn double_norming_tails(
            pairs in proptest::collection::vec((1u64..=12, small_rat()), 1..=5)
        ) {
            let x = SparseVec::from_entries(pairs).unwrap();
            prop_assume!(!x.is_zero());
            for m in [1u64, 10, 1_000, 100_000] {
                let n = double_norming_witness(&x, m).unwrap();
                prop_assert!(n >= m);
                prop_assert_eq!(DualVector::f_basis(n).eval(&x), norm_l1(&x));
            }
        }

        // sup norm with corrections: explicit coordinates never exceed
        // the reported norm, and the witness attains it
        #[test]
        fn norm_witness_attains(
            combo in proptest::collection::vec((1u64..=9, small_rat()), 0..=4),
            corr in proptest::collection::vec((1u64..=9, small_rat()), 0..=4),
        ) {
            let v = DualVector::new(
                combo,
                SparseVec::from_entries(corr).unwrap(),
            ).unwrap();
            let (norm, j) = v.norm().unwrap();
            prop_assert_eq!(v.coordinate(j).abs(), norm.clone());
            for jj in 1..=200u64 {
                prop_assert!(v.coordinate(jj).abs() <= norm);
            }
        }
    }
}
