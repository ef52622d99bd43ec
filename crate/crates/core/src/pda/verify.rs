//! Checks for the two array conditions and the useless-star scan.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use super::{Entry, Label, PdaArray};
use crate::error::{Error, Result};

/// First pair of equal labels breaking the distinct-row/column rule or the
/// cross-star rule. Cells are `(row, column)` positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum C1Violation {
    SharedRow {
        label: Label,
        first: (usize, usize),
        second: (usize, usize),
    },
    SharedColumn {
        label: Label,
        first: (usize, usize),
        second: (usize, usize),
    },
    CrossNotStar {
        label: Label,
        first: (usize, usize),
        second: (usize, usize),
        cross: (usize, usize),
    },
}

impl C1Violation {
    pub fn label(&self) -> &Label {
        match self {
            C1Violation::SharedRow { label, .. }
            | C1Violation::SharedColumn { label, .. }
            | C1Violation::CrossNotStar { label, .. } => label,
        }
    }

    pub fn cells(&self) -> ((usize, usize), (usize, usize)) {
        match *self {
            C1Violation::SharedRow { first, second, .. }
            | C1Violation::SharedColumn { first, second, .. }
            | C1Violation::CrossNotStar { first, second, .. } => (first, second),
        }
    }
}

impl fmt::Display for C1Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            C1Violation::SharedRow { label, first, second } => write!(
                f,
                "C1-a: label {label} appears twice in row {} (cells {first:?} and {second:?})",
                first.0
            ),
            C1Violation::SharedColumn { label, first, second } => write!(
                f,
                "C1-a: label {label} appears twice in column {} (cells {first:?} and {second:?})",
                first.1
            ),
            C1Violation::CrossNotStar {
                label,
                first,
                second,
                cross,
            } => write!(
                f,
                "C1-b: label {label} at {first:?} and {second:?} but cell {cross:?} is not a star"
            ),
        }
    }
}

/// Two columns with different star counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnMismatch {
    pub first_col: usize,
    pub first_count: usize,
    pub second_col: usize,
    pub second_count: usize,
}

impl fmt::Display for ColumnMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "C2: column {} has {} stars but column {} has {}",
            self.first_col, self.first_count, self.second_col, self.second_count
        )
    }
}

impl From<ColumnMismatch> for Error {
    fn from(m: ColumnMismatch) -> Self {
        Error::NonUniformStars {
            first_col: m.first_col,
            first_count: m.first_count,
            second_col: m.second_col,
            second_count: m.second_count,
        }
    }
}

/// Result of the useless-star scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UselessStars {
    cols: usize,
    mask: Vec<bool>,
    per_column: Vec<usize>,
}

impl UselessStars {
    pub fn is_useless(&self, row: usize, col: usize) -> bool {
        self.mask[row * self.cols + col]
    }

    pub fn per_column(&self) -> &[usize] {
        &self.per_column
    }

    /// The shared per-column count, if every column has the same number.
    pub fn uniform(&self) -> Option<usize> {
        let first = *self.per_column.first()?;
        self.per_column.iter().all(|&c| c == first).then_some(first)
    }

    pub fn total(&self) -> usize {
        self.per_column.iter().sum()
    }

    /// Useless cells in row-major order.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &u)| u)
            .map(|(i, _)| (i / self.cols, i % self.cols))
            .collect()
    }
}

impl PdaArray {
    /// Checks that equal labels sit in distinct rows and columns and that
    /// both cross cells of every such pair are stars. Reports the first
    /// failure in canonical label order.
    pub fn verify_c1(&self) -> std::result::Result<(), C1Violation> {
        for (label, cells) in self.occurrences() {
            for (i, &first) in cells.iter().enumerate() {
                for &second in &cells[i + 1..] {
                    let label = label.clone();
                    if first.0 == second.0 {
                        return Err(C1Violation::SharedRow { label, first, second });
                    }
                    if first.1 == second.1 {
                        return Err(C1Violation::SharedColumn { label, first, second });
                    }
                    for cross in [(first.0, second.1), (second.0, first.1)] {
                        if !self.entry(cross.0, cross.1).is_star() {
                            return Err(C1Violation::CrossNotStar {
                                label,
                                first,
                                second,
                                cross,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Returns the common star count per column.
    pub fn verify_c2(&self) -> std::result::Result<usize, ColumnMismatch> {
        let counts = self.column_star_counts();
        let z = counts[0];
        match counts.iter().position(|&c| c != z) {
            None => Ok(z),
            Some(col) => Err(ColumnMismatch {
                first_col: 0,
                first_count: z,
                second_col: col,
                second_count: counts[col],
            }),
        }
    }

    /// Marks every star that completes no cross pattern. A star at `(r, c)`
    /// is useful exactly when some label occurs both in row `r` and in
    /// column `c`.
    pub fn find_useless_stars(&self) -> Result<UselessStars> {
        self.verify_c1().map_err(|v| {
            Error::InvalidInput(format!("useless-star scan needs a valid array: {v}"))
        })?;
        let (f, k) = (self.f(), self.k());
        let mut ids: HashMap<&Label, u32> = HashMap::new();
        let mut row_labels: Vec<Vec<u32>> = vec![Vec::new(); f];
        let mut col_labels: Vec<Vec<u32>> = vec![Vec::new(); k];
        for (i, e) in self.entries().iter().enumerate() {
            if let Entry::Symbol(l) = e {
                let next = ids.len() as u32;
                let id = *ids.entry(l).or_insert(next);
                row_labels[i / k].push(id);
                col_labels[i % k].push(id);
            }
        }
        for set in row_labels.iter_mut().chain(col_labels.iter_mut()) {
            set.sort_unstable();
        }
        let columns: Vec<Vec<bool>> = (0..k)
            .into_par_iter()
            .map(|c| {
                (0..f)
                    .map(|r| {
                        self.entry(r, c).is_star() && !sorted_intersect(&row_labels[r], &col_labels[c])
                    })
                    .collect()
            })
            .collect();
        let mut mask = vec![false; f * k];
        let mut per_column = vec![0; k];
        for (c, column) in columns.iter().enumerate() {
            for (r, &useless) in column.iter().enumerate() {
                if useless {
                    mask[r * k + c] = true;
                    per_column[c] += 1;
                }
            }
        }
        Ok(UselessStars {
            cols: k,
            mask,
            per_column,
        })
    }
}

fn sorted_intersect(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qvec::QVec;

    fn v(s: &str) -> QVec {
        QVec::parse(2, s).unwrap()
    }

    fn sym(s: &str, c: u32) -> Entry {
        Entry::Symbol(Label::new(v(s), c))
    }

    fn two_by_two(grid: Vec<Entry>) -> PdaArray {
        PdaArray::new(2, 1, 1, vec![v("0"), v("1")], vec![v("0"), v("1")], grid).unwrap()
    }

    #[test]
    fn single_star_passes() {
        let p = PdaArray::new(2, 1, 0, vec![v("0")], vec![v("0")], vec![Entry::Star]).unwrap();
        assert_eq!(p.verify_c1(), Ok(()));
        assert_eq!(p.verify_c2(), Ok(1));
        let useless = p.find_useless_stars().unwrap();
        assert_eq!(useless.per_column(), &[1]);
    }

    #[test]
    fn diagonal_pair_is_valid() {
        let p = two_by_two(vec![sym("1", 0), Entry::Star, Entry::Star, sym("1", 0)]);
        assert_eq!(p.verify_c1(), Ok(()));
        assert_eq!(p.verify_c2(), Ok(1));
        let useless = p.find_useless_stars().unwrap();
        assert_eq!(useless.total(), 0);
    }

    #[test]
    fn shared_row_and_column_are_reported() {
        let p = two_by_two(vec![sym("1", 0), sym("1", 0), Entry::Star, Entry::Star]);
        assert!(matches!(p.verify_c1(), Err(C1Violation::SharedRow { .. })));
        let p = two_by_two(vec![sym("1", 0), Entry::Star, sym("1", 0), Entry::Star]);
        assert!(matches!(p.verify_c1(), Err(C1Violation::SharedColumn { .. })));
    }

    #[test]
    fn cross_cell_must_be_star() {
        let p = two_by_two(vec![sym("1", 0), sym("0", 0), Entry::Star, sym("1", 0)]);
        let err = p.verify_c1().unwrap_err();
        assert_eq!(
            err,
            C1Violation::CrossNotStar {
                label: Label::new(v("1"), 0),
                first: (0, 0),
                second: (1, 1),
                cross: (0, 1),
            }
        );
        assert!(err.to_string().starts_with("C1-b"));
        assert!(matches!(p.find_useless_stars(), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn distinct_classes_are_distinct_symbols() {
        let p = two_by_two(vec![sym("1", 0), sym("1", 1), Entry::Star, Entry::Star]);
        assert_eq!(p.verify_c1(), Ok(()));
        assert_eq!(p.symbol_count(), 2);
    }

    #[test]
    fn column_mismatch() {
        let p = two_by_two(vec![Entry::Star, Entry::Star, Entry::Star, sym("1", 0)]);
        let m = p.verify_c2().unwrap_err();
        assert_eq!((m.first_count, m.second_col, m.second_count), (2, 1, 1));
    }

    #[test]
    fn all_star_array() {
        let p = two_by_two(vec![Entry::Star; 4]);
        assert_eq!(p.verify_c2(), Ok(2));
        assert_eq!(p.find_useless_stars().unwrap().uniform(), Some(2));
    }
}
