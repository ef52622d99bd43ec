//! Arrays built from Hamming distance.
//!
//! Given row words `A`, column words `B` over `[0,q)^m` and a distance `ω`,
//! the base array holds `a + b (mod q)` at `(a, b)` when `d(a, b) = ω` and a
//! star otherwise. Equal words in the base array never share a row or a
//! column, and the cross cells of two equal words are stars exactly when
//! `d(a1, b2) ≠ ω`. Splitting each word's occurrences into classes in which
//! every pair avoids distance `ω` therefore turns the base array into a
//! placement delivery array once each cell is labelled `(e, class)`.

mod partition;
mod theorems;

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::qvec::{enumerate_space, CellCap, QVec};

pub use partition::{
    label_pda, partition_primary_q2, partition_primary_q3, partition_trivial, SymbolClassMap,
    SymbolClasses,
};
pub use theorems::{
    closed_form, construct_pda, generate_theorem2, generate_theorem4, theorem2_closed_form,
    theorem4_closed_form, ClosedForm, Generated, PartitionKind,
};

/// Parameters of one construction: alphabet, length, distance, and the row
/// and column word sets.
#[derive(Clone, Debug)]
pub struct ConstructionConfig {
    q: u8,
    m: usize,
    omega: usize,
    rows: Vec<QVec>,
    cols: Vec<QVec>,
    full_space: bool,
}

pub(crate) fn check_params(q: u8, m: usize, omega: usize) -> Result<()> {
    if q < 2 {
        return Err(Error::Parameter(format!("q={q} must be at least 2")));
    }
    if omega == 0 || omega >= m {
        return Err(Error::Parameter(format!(
            "need 1 <= omega < m, got omega={omega}, m={m}"
        )));
    }
    Ok(())
}

impl ConstructionConfig {
    /// Rows and columns both range over all of `[0,q)^m`.
    pub fn full(q: u8, m: usize, omega: usize, cap: CellCap) -> Result<Self> {
        check_params(q, m, omega)?;
        let space = enumerate_space(q, m, cap)?;
        Ok(Self {
            q,
            m,
            omega,
            rows: space.clone(),
            cols: space,
            full_space: true,
        })
    }

    /// Arbitrary non-empty row and column sets without repeats.
    pub fn with_subsets(
        q: u8,
        m: usize,
        omega: usize,
        rows: Vec<QVec>,
        cols: Vec<QVec>,
    ) -> Result<Self> {
        check_params(q, m, omega)?;
        for (name, set) in [("row", &rows), ("column", &cols)] {
            if set.is_empty() {
                return Err(Error::Parameter(format!("{name} set is empty")));
            }
            let mut seen = HashSet::new();
            for v in set {
                if v.q() != q || v.len() != m {
                    return Err(Error::Dimension(format!(
                        "{name} word {v} is not in [0,{q})^{m}"
                    )));
                }
                if !seen.insert(v) {
                    return Err(Error::Parameter(format!("{name} word {v} repeated")));
                }
            }
        }
        let full_space = {
            let size = (q as usize).checked_pow(m as u32);
            Some(rows.len()) == size && Some(cols.len()) == size
        };
        Ok(Self {
            q,
            m,
            omega,
            rows,
            cols,
            full_space,
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

    pub fn rows(&self) -> &[QVec] {
        &self.rows
    }

    pub fn cols(&self) -> &[QVec] {
        &self.cols
    }

    /// True when both sets are the whole space, so closed forms apply.
    pub fn is_full_space(&self) -> bool {
        self.full_space
    }
}

/// The unlabelled array: each cell holds a word or a star (`None`).
#[derive(Clone, Debug)]
pub struct BaseArray {
    q: u8,
    m: usize,
    omega: usize,
    rows: Vec<QVec>,
    cols: Vec<QVec>,
    cells: Vec<Option<QVec>>,
    full_space: bool,
}

pub fn build_base_array(cfg: &ConstructionConfig, cap: CellCap) -> Result<BaseArray> {
    cap.check(cfg.rows.len() as u128 * cfg.cols.len() as u128)?;
    let mut cells = Vec::with_capacity(cfg.rows.len() * cfg.cols.len());
    for a in &cfg.rows {
        for b in &cfg.cols {
            cells.push((a.distance(b) == cfg.omega).then(|| a.add(b)));
        }
    }
    Ok(BaseArray {
        q: cfg.q,
        m: cfg.m,
        omega: cfg.omega,
        rows: cfg.rows.clone(),
        cols: cfg.cols.clone(),
        cells,
        full_space: cfg.full_space,
    })
}

impl BaseArray {
    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn omega(&self) -> usize {
        self.omega
    }

    pub fn rows(&self) -> &[QVec] {
        &self.rows
    }

    pub fn cols(&self) -> &[QVec] {
        &self.cols
    }

    pub fn f(&self) -> usize {
        self.rows.len()
    }

    pub fn k(&self) -> usize {
        self.cols.len()
    }

    pub fn is_full_space(&self) -> bool {
        self.full_space
    }

    pub fn cell(&self, row: usize, col: usize) -> Option<&QVec> {
        self.cells[row * self.cols.len() + col].as_ref()
    }

    /// Occurrence list of every word, in row-major order.
    pub fn occurrences(&self) -> BTreeMap<&QVec, Vec<(usize, usize)>> {
        let k = self.k();
        let mut map: BTreeMap<&QVec, Vec<(usize, usize)>> = BTreeMap::new();
        for (i, c) in self.cells.iter().enumerate() {
            if let Some(e) = c {
                map.entry(e).or_default().push((i / k, i % k));
            }
        }
        map
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(q: u8, s: &str) -> QVec {
        QVec::parse(q, s).unwrap()
    }

    #[test]
    fn parameter_checks() {
        assert!(ConstructionConfig::full(2, 3, 0, CellCap::DEFAULT).is_err());
        assert!(ConstructionConfig::full(2, 3, 3, CellCap::DEFAULT).is_err());
        assert!(ConstructionConfig::full(2, 3, 2, CellCap(7)).is_err());
        let dup = vec![v(2, "000"), v(2, "000")];
        assert!(ConstructionConfig::with_subsets(2, 3, 1, dup, vec![v(2, "000")]).is_err());
        assert!(ConstructionConfig::with_subsets(2, 3, 1, vec![], vec![v(2, "000")]).is_err());
        assert!(
            ConstructionConfig::with_subsets(2, 3, 1, vec![v(2, "00")], vec![v(2, "000")]).is_err()
        );
    }

    #[test]
    fn base_cells() {
        let cfg = ConstructionConfig::full(2, 3, 2, CellCap::DEFAULT).unwrap();
        let base = build_base_array(&cfg, CellCap::DEFAULT).unwrap();
        // (000, 100) has distance 1.
        assert_eq!(base.cell(0, 1), None);
        assert_eq!(base.cell(0, 3), Some(&v(2, "110")));
        assert!(base.is_full_space());

        let cfg = ConstructionConfig::full(3, 3, 2, CellCap::DEFAULT).unwrap();
        let base = build_base_array(&cfg, CellCap::DEFAULT).unwrap();
        let r = v(3, "201").index() as usize;
        let c = v(3, "212").index() as usize;
        assert_eq!(base.cell(r, c), Some(&v(3, "110")));
    }

    #[test]
    fn base_respects_cap() {
        let cfg = ConstructionConfig::full(2, 4, 1, CellCap::DEFAULT).unwrap();
        assert!(matches!(
            build_base_array(&cfg, CellCap(255)),
            Err(Error::SizeCap { needed: 256, .. })
        ));
    }
}
