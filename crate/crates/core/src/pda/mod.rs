//! The placement delivery array data model.
//!
//! A [`PdaArray`] is an `F × K` grid whose rows index packets and whose
//! columns index users. Each cell is either a star (the user caches that
//! packet) or a label `(e, class)` naming one multicast signal. Row and column
//! headers are the words that produced the array.

mod format;
mod params;
mod verify;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::qvec::QVec;

pub use format::{parse, serialize};
pub use params::{SchemeParams, TrimmedParams};
pub use verify::{C1Violation, ColumnMismatch, UselessStars};

/// A symbol: the word `e` together with the class it was assigned to.
/// Two classes of the same word are distinct symbols.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Label {
    pub vector: QVec,
    pub class: u32,
}

impl Label {
    pub fn new(vector: QVec, class: u32) -> Self {
        Self { vector, class }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.vector, self.class)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Entry {
    Star,
    Symbol(Label),
}

impl Entry {
    pub fn is_star(&self) -> bool {
        matches!(self, Entry::Star)
    }

    pub fn label(&self) -> Option<&Label> {
        match self {
            Entry::Star => None,
            Entry::Symbol(l) => Some(l),
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Star => write!(f, "*"),
            Entry::Symbol(l) => write!(f, "{l}"),
        }
    }
}

/// An `F × K` array of stars and labels with its construction metadata.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PdaArray {
    q: u8,
    m: usize,
    omega: usize,
    rows: Vec<QVec>,
    cols: Vec<QVec>,
    grid: Vec<Entry>,
    symbol_count: usize,
}

impl PdaArray {
    /// Builds an array from row-major `grid`. The symbol count is derived
    /// from the labels actually present.
    pub fn new(
        q: u8,
        m: usize,
        omega: usize,
        rows: Vec<QVec>,
        cols: Vec<QVec>,
        grid: Vec<Entry>,
    ) -> Result<Self> {
        if rows.is_empty() || cols.is_empty() {
            return Err(Error::Dimension("an array needs at least one row and one column".into()));
        }
        if grid.len() != rows.len() * cols.len() {
            return Err(Error::Dimension(format!(
                "grid has {} cells but headers describe {}x{}",
                grid.len(),
                rows.len(),
                cols.len()
            )));
        }
        let shape_ok = |v: &QVec| v.q() == q && v.len() == m;
        if let Some(bad) = rows.iter().chain(cols.iter()).find(|v| !shape_ok(v)) {
            return Err(Error::Dimension(format!(
                "header {bad} does not have q={q} and length {m}"
            )));
        }
        let mut labels = BTreeSet::new();
        for entry in &grid {
            if let Entry::Symbol(l) = entry {
                if !shape_ok(&l.vector) {
                    return Err(Error::Dimension(format!(
                        "label {l} does not have q={q} and length {m}"
                    )));
                }
                labels.insert(l);
            }
        }
        let symbol_count = labels.len();
        Ok(Self {
            q,
            m,
            omega,
            rows,
            cols,
            grid,
            symbol_count,
        })
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn omega(&self) -> usize {
        self.omega
    }

    /// Number of rows (packets per file).
    pub fn f(&self) -> usize {
        self.rows.len()
    }

    /// Number of columns (users).
    pub fn k(&self) -> usize {
        self.cols.len()
    }

    /// Number of distinct labels.
    pub fn symbol_count(&self) -> usize {
        self.symbol_count
    }

    pub fn rows(&self) -> &[QVec] {
        &self.rows
    }

    pub fn cols(&self) -> &[QVec] {
        &self.cols
    }

    pub fn entry(&self, row: usize, col: usize) -> &Entry {
        &self.grid[row * self.cols.len() + col]
    }

    pub fn row(&self, row: usize) -> &[Entry] {
        let k = self.cols.len();
        &self.grid[row * k..(row + 1) * k]
    }

    pub fn entries(&self) -> &[Entry] {
        &self.grid
    }

    pub fn column_star_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.k()];
        for (i, e) in self.grid.iter().enumerate() {
            if e.is_star() {
                counts[i % self.k()] += 1;
            }
        }
        counts
    }

    /// Cells of every label in row-major order, keyed in canonical label order.
    pub fn occurrences(&self) -> BTreeMap<&Label, Vec<(usize, usize)>> {
        let k = self.k();
        let mut map: BTreeMap<&Label, Vec<(usize, usize)>> = BTreeMap::new();
        for (i, e) in self.grid.iter().enumerate() {
            if let Entry::Symbol(l) = e {
                map.entry(l).or_default().push((i / k, i % k));
            }
        }
        map
    }

    pub fn labels(&self) -> Vec<&Label> {
        self.occurrences().into_keys().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> QVec {
        QVec::parse(2, s).unwrap()
    }

    #[test]
    fn rejects_bad_shapes() {
        let rows = vec![v("0")];
        let cols = vec![v("0"), v("1")];
        assert!(PdaArray::new(2, 1, 0, rows.clone(), cols.clone(), vec![Entry::Star]).is_err());
        assert!(PdaArray::new(2, 1, 0, vec![], cols.clone(), vec![]).is_err());
        let wrong_len = vec![Entry::Symbol(Label::new(v("01"), 0)), Entry::Star];
        assert!(PdaArray::new(2, 1, 0, rows, cols, wrong_len).is_err());
    }

    #[test]
    fn counts_distinct_labels() {
        let a = Label::new(v("1"), 0);
        let b = Label::new(v("1"), 1);
        let grid = vec![
            Entry::Symbol(a.clone()),
            Entry::Star,
            Entry::Star,
            Entry::Symbol(a),
            Entry::Symbol(b),
            Entry::Star,
        ];
        let p = PdaArray::new(2, 1, 1, vec![v("0"), v("1"), v("0")], vec![v("0"), v("1")], grid)
            .unwrap();
        assert_eq!(p.symbol_count(), 2);
        assert_eq!(p.column_star_counts(), vec![1, 2]);
        assert_eq!(p.entry(1, 1).to_string(), "1:0");
        let occ = p.occurrences();
        let first = occ.values().next().unwrap();
        assert_eq!(first, &vec![(0, 0), (1, 1)]);
    }
}
