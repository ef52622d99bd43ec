//! Placement delivery arrays for coded caching, built from Hamming distance.

pub mod coloring;
pub mod combinatorics;
pub mod construct;
pub mod error;
pub mod pda;
pub mod qvec;
pub mod report;
pub mod sim;

pub use error::{Error, Result};
pub use pda::{Entry, Label, PdaArray, SchemeParams};
pub use qvec::{CellCap, IndexSet, QVec};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/arrays.md")]
    mod arrays {}
    #[doc = include_str!("../../../book/src/construction.md")]
    mod construction {}
    #[doc = include_str!("../../../book/src/partitions.md")]
    mod partitions {}
    #[doc = include_str!("../../../book/src/delivery.md")]
    mod delivery {}
    #[doc = include_str!("../../../book/src/comparison.md")]
    mod comparison {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
