//! Vectors over the alphabet `[0, q)` and the Hamming metric on them.
//!
//! A [`QVec`] is a fixed-length word whose digits lie in `[0, q)`. Rows and
//! columns of every array in this crate are labelled by such words, and the
//! symbol in a non-star cell is the coordinatewise sum of its row and column
//! label. Words print as digit strings with coordinate 0 first, so `110` is
//! the word `(1, 1, 0)`.
//!
//! Enumeration order is little-endian: coordinate 0 varies fastest. For
//! `q = 2, m = 3` this yields `000, 100, 010, 110, 001, 101, 011, 111`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported alphabet. Digits render as base-36 characters.
pub const MAX_ALPHABET: u8 = 36;

/// Environment variable that overrides [`CellCap::DEFAULT`].
pub const CELL_CAP_ENV: &str = "PDAFORGE_CELL_CAP";

/// Upper bound on the number of cells (or vectors) a single call may
/// materialize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellCap(pub u64);

impl CellCap {
    pub const DEFAULT: CellCap = CellCap(1 << 24);

    /// Reads the cap from `PDAFORGE_CELL_CAP`, falling back to the default
    /// when the variable is unset or unparsable.
    pub fn from_env() -> Self {
        std::env::var(CELL_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .map(CellCap)
            .unwrap_or(Self::DEFAULT)
    }

    pub fn check(self, needed: u128) -> Result<()> {
        if needed > u128::from(self.0) {
            Err(Error::SizeCap { needed, cap: self.0 })
        } else {
            Ok(())
        }
    }
}

impl Default for CellCap {
    fn default() -> Self {
        Self::DEFAULT
    }
}

fn check_alphabet(q: u8) -> Result<()> {
    if !(2..=MAX_ALPHABET).contains(&q) {
        return Err(Error::Parameter(format!(
            "alphabet size q={q} outside [2, {MAX_ALPHABET}]"
        )));
    }
    Ok(())
}

/// A word of length `m` over `[0, q)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QVec {
    q: u8,
    digits: Box<[u8]>,
}

impl QVec {
    pub fn new(q: u8, digits: Vec<u8>) -> Result<Self> {
        check_alphabet(q)?;
        if digits.is_empty() {
            return Err(Error::Dimension("vector length must be positive".into()));
        }
        if let Some(&bad) = digits.iter().find(|&&d| d >= q) {
            return Err(Error::Dimension(format!("digit {bad} not in [0,{q})")));
        }
        Ok(Self {
            q,
            digits: digits.into_boxed_slice(),
        })
    }

    pub fn zero(q: u8, m: usize) -> Result<Self> {
        Self::new(q, vec![0; m])
    }

    /// Parses a digit string such as `"0110"`, coordinate 0 first.
    pub fn parse(q: u8, s: &str) -> Result<Self> {
        let digits = s
            .chars()
            .map(|c| {
                c.to_digit(u32::from(MAX_ALPHABET))
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::Dimension(format!("'{c}' is not a digit")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(q, digits)
    }

    /// The word whose little-endian base-`q` value is `index`.
    pub fn from_index(q: u8, m: usize, mut index: u64) -> Result<Self> {
        let mut digits = Vec::with_capacity(m);
        for _ in 0..m {
            digits.push((index % u64::from(q)) as u8);
            index /= u64::from(q);
        }
        if index != 0 {
            return Err(Error::Dimension(format!(
                "index does not fit in {m} base-{q} digits"
            )));
        }
        Self::new(q, digits)
    }

    /// Little-endian base-`q` value: coordinate 0 is the least significant digit.
    pub fn index(&self) -> u64 {
        self.digits
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * u64::from(self.q) + u64::from(d))
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    fn compatible(&self, other: &QVec) -> Result<()> {
        if self.q != other.q || self.len() != other.len() {
            return Err(Error::Dimension(format!(
                "cannot combine a length-{} q={} vector with a length-{} q={} vector",
                self.len(),
                self.q,
                other.len(),
                other.q
            )));
        }
        Ok(())
    }

    /// Number of coordinates where the two words differ.
    pub fn hamming_distance(&self, other: &QVec) -> Result<usize> {
        self.compatible(other)?;
        Ok(self.distance(other))
    }

    // Callers guarantee matching shapes.
    pub(crate) fn distance(&self, other: &QVec) -> usize {
        debug_assert_eq!(self.len(), other.len());
        self.digits
            .iter()
            .zip(other.digits.iter())
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Number of nonzero coordinates.
    pub fn weight(&self) -> usize {
        self.digits.iter().filter(|&&d| d != 0).count()
    }

    pub fn add_mod(&self, other: &QVec) -> Result<QVec> {
        self.compatible(other)?;
        Ok(self.add(other))
    }

    pub(crate) fn add(&self, other: &QVec) -> QVec {
        let q = self.q;
        let digits = self
            .digits
            .iter()
            .zip(other.digits.iter())
            .map(|(&a, &b)| (a + b) % q)
            .collect();
        QVec { q, digits }
    }

    pub fn sub_mod(&self, other: &QVec) -> Result<QVec> {
        self.compatible(other)?;
        let q = self.q;
        let digits = self
            .digits
            .iter()
            .zip(other.digits.iter())
            .map(|(&a, &b)| (a + q - b) % q)
            .collect();
        Ok(QVec { q, digits })
    }

    /// Keeps only the coordinates listed in `positions`, in increasing order.
    pub fn restrict(&self, positions: &IndexSet) -> Result<QVec> {
        if positions.universe() != self.len() {
            return Err(Error::Dimension(format!(
                "index set over [0,{}) applied to a length-{} vector",
                positions.universe(),
                self.len()
            )));
        }
        if positions.is_empty() {
            return Err(Error::Dimension("restriction to an empty index set".into()));
        }
        let digits = positions.iter().map(|i| self.digits[i]).collect();
        Ok(QVec { q: self.q, digits })
    }

    /// Positions holding a zero digit.
    pub fn zero_positions(&self) -> IndexSet {
        IndexSet::from_sorted_unchecked(
            self.len(),
            (0..self.len()).filter(|&i| self.digits[i] == 0).collect(),
        )
    }

    /// Positions where the two words agree.
    pub fn agreement_set(&self, other: &QVec) -> Result<IndexSet> {
        self.compatible(other)?;
        Ok(IndexSet::from_sorted_unchecked(
            self.len(),
            (0..self.len())
                .filter(|&i| self.digits[i] == other.digits[i])
                .collect(),
        ))
    }
}

// Order follows enumeration order (little-endian value), so sorted
// collections of words list them the way `enumerate_space` does.
impl Ord for QVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.q
            .cmp(&other.q)
            .then(self.len().cmp(&other.len()))
            .then_with(|| self.digits.iter().rev().cmp(other.digits.iter().rev()))
    }
}

impl PartialOrd for QVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in self.digits.iter() {
            let c = char::from_digit(u32::from(d), u32::from(MAX_ALPHABET)).unwrap_or('?');
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QVec({self})")
    }
}

/// A strictly increasing set of positions drawn from `[0, m)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IndexSet {
    universe: usize,
    members: Vec<usize>,
}

impl IndexSet {
    pub fn new(universe: usize, members: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = members.iter().find(|&&i| i >= universe) {
            return Err(Error::Dimension(format!("position {bad} not in [0,{universe})")));
        }
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Dimension(
                "index set members must be strictly increasing".into(),
            ));
        }
        Ok(Self { universe, members })
    }

    fn from_sorted_unchecked(universe: usize, members: Vec<usize>) -> Self {
        Self { universe, members }
    }

    pub fn full(universe: usize) -> Self {
        Self::from_sorted_unchecked(universe, (0..universe).collect())
    }

    /// The set whose indicator is the bit pattern of `mask`.
    pub fn from_mask(universe: usize, mask: u64) -> Result<Self> {
        if universe < 64 && mask >> universe != 0 {
            return Err(Error::Dimension(format!("mask has bits beyond {universe}")));
        }
        Ok(Self::from_sorted_unchecked(
            universe,
            (0..universe.min(64)).filter(|&i| mask >> i & 1 == 1).collect(),
        ))
    }

    pub fn mask(&self) -> u64 {
        self.members.iter().fold(0, |acc, &i| acc | 1 << i)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn intersection_len(&self, other: &IndexSet) -> usize {
        (self.mask() & other.mask()).count_ones() as usize
    }

    /// Rank among all subsets of the same size in colexicographic order,
    /// via the combinatorial number system.
    pub fn colex_rank(&self) -> u64 {
        self.members
            .iter()
            .enumerate()
            .map(|(i, &c)| binomial_u64(c as u64, i as u64 + 1))
            .sum()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

fn binomial_u64(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// All `k`-subsets of `[0, m)` in colex order. Colex order coincides with
/// increasing value of the indicator bitmask.
pub fn subsets_colex(m: usize, k: usize) -> Result<Vec<IndexSet>> {
    if m >= 64 {
        return Err(Error::Parameter(format!("subset universe {m} too large")));
    }
    if k > m {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(binomial_u64(m as u64, k as u64) as usize);
    if k == 0 {
        out.push(IndexSet::from_sorted_unchecked(m, Vec::new()));
        return Ok(out);
    }
    // Gosper's hack walks same-popcount masks in increasing order.
    let mut mask: u64 = (1 << k) - 1;
    let limit: u64 = 1 << m;
    while mask < limit {
        out.push(IndexSet::from_mask(m, mask)?);
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    Ok(out)
}

/// Every word of `[0, q)^m` in little-endian enumeration order.
pub fn enumerate_space(q: u8, m: usize, cap: CellCap) -> Result<Vec<QVec>> {
    check_alphabet(q)?;
    if m == 0 {
        return Err(Error::Parameter("vector length m must be at least 1".into()));
    }
    let size = u128::from(q)
        .checked_pow(m as u32)
        .ok_or(Error::SizeCap {
            needed: u128::MAX,
            cap: cap.0,
        })?;
    cap.check(size)?;
    (0..size as u64)
        .map(|i| QVec::from_index(q, m, i))
        .collect()
}
