//! Splitting each word's occurrences into classes and labelling the array.

use std::collections::{BTreeMap, HashMap};

use super::BaseArray;
use crate::error::{Error, Result};
use crate::pda::{Entry, Label, PdaArray};
use crate::qvec::QVec;

/// Class assignment for the occurrences of one word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolClasses {
    cells: Vec<(usize, usize)>,
    class_of: Vec<u32>,
    class_count: usize,
}

impl SymbolClasses {
    fn new(cells: Vec<(usize, usize)>, class_of: Vec<u32>) -> Self {
        let mut ids = class_of.clone();
        ids.sort_unstable();
        ids.dedup();
        Self {
            cells,
            class_of,
            class_count: ids.len(),
        }
    }

    /// Occurrences in row-major order.
    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }

    /// Class of the `i`-th occurrence.
    pub fn class_of(&self, i: usize) -> u32 {
        self.class_of[i]
    }

    /// Number of non-empty classes.
    pub fn class_count(&self) -> usize {
        self.class_count
    }

    /// Members of each class keyed by class id.
    pub fn classes(&self) -> BTreeMap<u32, Vec<(usize, usize)>> {
        let mut out: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
        for (&cell, &class) in self.cells.iter().zip(&self.class_of) {
            out.entry(class).or_default().push(cell);
        }
        out
    }
}

/// Class assignments for every word occurring in a base array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolClassMap {
    words: BTreeMap<QVec, SymbolClasses>,
}

impl SymbolClassMap {
    /// Assigns a class to every occurrence through `assign(e, (row, col))`.
    pub fn from_fn<F>(base: &BaseArray, mut assign: F) -> Result<Self>
    where
        F: FnMut(&QVec, (usize, usize)) -> Result<u32>,
    {
        let mut words = BTreeMap::new();
        for (e, cells) in base.occurrences() {
            let class_of = cells
                .iter()
                .map(|&cell| assign(e, cell))
                .collect::<Result<Vec<_>>>()?;
            words.insert(e.clone(), SymbolClasses::new(cells, class_of));
        }
        Ok(Self { words })
    }

    pub fn get(&self, e: &QVec) -> Option<&SymbolClasses> {
        self.words.get(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&QVec, &SymbolClasses)> {
        self.words.iter()
    }

    /// Number of distinct words that occur.
    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    /// Sum of class counts over all words; the symbol count of the labelled array.
    pub fn total_classes(&self) -> usize {
        self.words.values().map(SymbolClasses::class_count).sum()
    }

    /// Renames every class id through `f`; classes mapped to the same id merge.
    pub fn merge_classes(&self, mut f: impl FnMut(u32) -> u32) -> Self {
        let words = self
            .words
            .iter()
            .map(|(e, sc)| {
                let class_of = sc.class_of.iter().map(|&c| f(c)).collect();
                (e.clone(), SymbolClasses::new(sc.cells.clone(), class_of))
            })
            .collect();
        Self { words }
    }

    /// Checks that any two cells `(a1, b1)`, `(a2, b2)` sharing a class have
    /// `d(a1, b2) ≠ ω`.
    pub fn check_distance_property(&self, base: &BaseArray) -> Result<()> {
        let omega = base.omega();
        for (e, sc) in &self.words {
            for (class, cells) in sc.classes() {
                for (i, &(r1, c1)) in cells.iter().enumerate() {
                    for &(r2, c2) in &cells[i + 1..] {
                        for (a, b) in [(r1, c2), (r2, c1)] {
                            if base.rows()[a].distance(&base.cols()[b]) == omega {
                                return Err(Error::Partition(format!(
                                    "class {class} of {e} holds ({},{}) and ({},{}) but d({},{}) = {omega}",
                                    base.rows()[r1],
                                    base.cols()[c1],
                                    base.rows()[r2],
                                    base.cols()[c2],
                                    base.rows()[a],
                                    base.cols()[b],
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Every occurrence forms its own class, numbered in row-major order.
pub fn partition_trivial(base: &BaseArray) -> SymbolClassMap {
    let mut next: HashMap<QVec, u32> = HashMap::new();
    SymbolClassMap::from_fn(base, |e, _| {
        let n = next.entry(e.clone()).or_insert(0);
        *n += 1;
        Ok(*n - 1)
    })
    .expect("trivial assignment cannot fail")
}

/// Binary alphabet: cells of `e` are grouped by the common value `t` of
/// `a` and `b` on the zero positions of `e`. The class id is the
/// little-endian value of `t`.
pub fn partition_primary_q2(base: &BaseArray) -> Result<SymbolClassMap> {
    if base.q() != 2 {
        return Err(Error::UnsupportedAlphabet { q: base.q() });
    }
    SymbolClassMap::from_fn(base, |e, (r, _)| {
        let zeros = e.zero_positions();
        Ok(base.rows()[r].restrict(&zeros)?.index() as u32)
    })
}

/// Ternary alphabet: cells are grouped by the agreement set
/// `T = {i : a_i = b_i}`. The class id is the colex rank of `T` among the
/// `(m-ω)`-subsets of `[0,m)`.
pub fn partition_primary_q3(base: &BaseArray) -> Result<SymbolClassMap> {
    if base.q() != 3 {
        return Err(Error::UnsupportedAlphabet { q: base.q() });
    }
    SymbolClassMap::from_fn(base, |_, (r, c)| {
        Ok(base.rows()[r].agreement_set(&base.cols()[c])?.colex_rank() as u32)
    })
}

/// Replaces every word cell by the label `(e, class)`. The class map must
/// come from this base array and satisfy the distance property.
pub fn label_pda(base: &BaseArray, classes: &SymbolClassMap) -> Result<PdaArray> {
    classes.check_distance_property(base)?;
    let k = base.k();
    let mut grid = vec![Entry::Star; base.f() * k];
    let mut covered = 0usize;
    for (e, sc) in classes.iter() {
        for (i, &(r, c)) in sc.cells().iter().enumerate() {
            if base.cell(r, c) != Some(e) {
                return Err(Error::Partition(format!(
                    "class map places {e} at ({r},{c}) where the base array differs"
                )));
            }
            grid[r * k + c] = Entry::Symbol(Label::new(e.clone(), sc.class_of(i)));
            covered += 1;
        }
    }
    let occupied = (0..base.f())
        .flat_map(|r| (0..k).map(move |c| (r, c)))
        .filter(|&(r, c)| base.cell(r, c).is_some())
        .count();
    if covered != occupied {
        return Err(Error::Partition(format!(
            "class map covers {covered} cells but the base array has {occupied}"
        )));
    }
    PdaArray::new(
        base.q(),
        base.m(),
        base.omega(),
        base.rows().to_vec(),
        base.cols().to_vec(),
        grid,
    )
}
