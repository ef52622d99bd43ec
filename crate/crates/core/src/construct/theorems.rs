//! Full-space generators and their closed-form parameters.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::partition::{label_pda, partition_primary_q2, partition_primary_q3, partition_trivial};
use super::{build_base_array, check_params, ConstructionConfig};
use crate::coloring::{partition_improved, ColoringStrategy};
use crate::combinatorics::{big, binomial, weighted_binomial_sum};
use crate::error::{Error, Result};
use crate::pda::{PdaArray, SchemeParams};
use crate::qvec::CellCap;

/// Predicted parameters of the full-space binary or ternary construction
/// with the primary partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub q: u8,
    pub m: usize,
    pub omega: usize,
    pub k: BigUint,
    pub f: BigUint,
    pub z: BigUint,
    pub s: BigUint,
    /// Useless stars in every column.
    pub useless_per_column: BigUint,
    pub trimmed_f: BigUint,
    pub trimmed_memory_fraction: BigRational,
    pub trimmed_rate: BigRational,
}

impl ClosedForm {
    fn new(q: u8, m: usize, omega: usize, z_loss: BigUint, s: BigUint, weight: u64) -> Self {
        let k = BigUint::from(q).pow(m as u32);
        let trimmed_f = weighted_binomial_sum(m as u64, 0, omega as u64, weight);
        let useless_per_column = &k - &trimmed_f;
        let tf = big(&trimmed_f);
        Self {
            q,
            m,
            omega,
            f: k.clone(),
            z: &k - &z_loss,
            trimmed_memory_fraction: BigRational::one() - BigRational::new(big(&z_loss), tf.clone()),
            trimmed_rate: BigRational::new(big(&s), tf),
            k,
            s,
            useless_per_column,
            trimmed_f,
        }
    }

    /// Compares counted parameters with the prediction. Returns the names of
    /// the fields that disagree.
    pub fn mismatches(&self, counted: &SchemeParams) -> Vec<&'static str> {
        let mut out = Vec::new();
        let as_big = |v: usize| BigUint::from(v);
        if as_big(counted.k) != self.k {
            out.push("K");
        }
        if as_big(counted.f) != self.f {
            out.push("F");
        }
        if as_big(counted.z) != self.z {
            out.push("Z");
        }
        if as_big(counted.s) != self.s {
            out.push("S");
        }
        if counted.z_prime.map(as_big) != Some(self.useless_per_column.clone()) {
            out.push("Zprime");
        }
        match &counted.trimmed {
            Some(t) => {
                if as_big(t.f) != self.trimmed_f {
                    out.push("trimmed F");
                }
                if t.memory_fraction != self.trimmed_memory_fraction {
                    out.push("trimmed memory_fraction");
                }
                if t.rate != self.trimmed_rate {
                    out.push("trimmed rate");
                }
            }
            None => out.push("trimmed"),
        }
        out
    }

    pub fn trimmed_f_u64(&self) -> Option<u64> {
        self.trimmed_f.to_u64()
    }
}

/// `(2^m, 2^m, 2^m - C(m,ω), C(m,ω)·2^(m-ω))`, `F' = Σ_{i≤ω} C(m,i)`.
pub fn theorem2_closed_form(m: usize, omega: usize) -> Result<ClosedForm> {
    check_params(2, m, omega)?;
    let c = binomial(m as u64, omega as u64);
    let s = &c << (m - omega);
    Ok(ClosedForm::new(2, m, omega, c, s, 1))
}

/// `(3^m, 3^m, 3^m - C(m,ω)·2^ω, C(m,ω)·3^m)`, `F' = Σ_{i≤ω} C(m,i)·2^i`.
pub fn theorem4_closed_form(m: usize, omega: usize) -> Result<ClosedForm> {
    check_params(3, m, omega)?;
    let c = binomial(m as u64, omega as u64);
    let loss = &c << omega;
    let s = c * BigUint::from(3u8).pow(m as u32);
    Ok(ClosedForm::new(3, m, omega, loss, s, 2))
}

/// A generated array with its counted parameters.
#[derive(Clone, Debug)]
pub struct Generated {
    pub pda: PdaArray,
    pub params: SchemeParams,
}

impl Generated {
    fn from_pda(pda: PdaArray) -> Result<Self> {
        let params = pda.scheme_params()?;
        Ok(Self { pda, params })
    }
}

/// How symbol occurrences are split into classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionKind {
    /// One class per occurrence; any alphabet.
    Trivial,
    /// Restricted-vector classes (q=2) or agreement-set classes (q=3).
    Primary,
    /// Primary classes merged along a coloring of the conflict graph.
    Improved(ColoringStrategy),
}

/// Builds the full-space array for `(q, m, ω)` and labels it.
pub fn construct_pda(q: u8, m: usize, omega: usize, kind: PartitionKind, cap: CellCap) -> Result<PdaArray> {
    let cfg = ConstructionConfig::full(q, m, omega, cap)?;
    let base = build_base_array(&cfg, cap)?;
    let classes = match (kind, q) {
        (PartitionKind::Trivial, _) => partition_trivial(&base),
        (PartitionKind::Primary, 2) => partition_primary_q2(&base)?,
        (PartitionKind::Primary, 3) => partition_primary_q3(&base)?,
        (PartitionKind::Primary, _) => return Err(Error::UnsupportedAlphabet { q }),
        (PartitionKind::Improved(strategy), _) => {
            let (graph, coloring) = strategy.color(q, m, omega, cap)?;
            partition_improved(&base, &graph, &coloring)?
        }
    };
    label_pda(&base, &classes)
}

/// Binary construction with the primary partition.
pub fn generate_theorem2(m: usize, omega: usize, cap: CellCap) -> Result<Generated> {
    Generated::from_pda(construct_pda(2, m, omega, PartitionKind::Primary, cap)?)
}

/// Ternary construction with the primary partition.
pub fn generate_theorem4(m: usize, omega: usize, cap: CellCap) -> Result<Generated> {
    Generated::from_pda(construct_pda(3, m, omega, PartitionKind::Primary, cap)?)
}

/// Closed form for `q` in {2, 3}, if the construction has one.
pub fn closed_form(q: u8, m: usize, omega: usize) -> Result<ClosedForm> {
    match q {
        2 => theorem2_closed_form(m, omega),
        3 => theorem4_closed_form(m, omega),
        _ => Err(Error::UnsupportedAlphabet { q }),
    }
}

impl ClosedForm {
    /// `Z/F` of the untrimmed array.
    pub fn memory_fraction(&self) -> BigRational {
        if self.f.is_zero() {
            return BigRational::zero();
        }
        BigRational::new(big(&self.z), big(&self.f))
    }

    pub fn rate(&self) -> BigRational {
        BigRational::new(big(&self.s), big(&self.f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{decimal, ratio};

    #[test]
    fn small_binary_instance() {
        let g = generate_theorem2(3, 2, CellCap::DEFAULT).unwrap();
        let p = &g.params;
        assert_eq!((p.k, p.f, p.z, p.s), (8, 8, 5, 6));
        assert_eq!(p.memory_fraction, ratio(5, 8));
        assert_eq!(p.rate, ratio(6, 8));
        assert_eq!(p.z_prime, Some(1));
        let t = p.trimmed.as_ref().unwrap();
        assert_eq!((t.f, t.memory_fraction.clone(), t.rate.clone()), (7, ratio(4, 7), ratio(6, 7)));
        assert!(theorem2_closed_form(3, 2).unwrap().mismatches(p).is_empty());
    }

    #[test]
    fn small_ternary_instance() {
        let g = generate_theorem4(3, 2, CellCap::DEFAULT).unwrap();
        let p = &g.params;
        assert_eq!((p.k, p.f, p.z, p.s), (27, 27, 15, 81));
        assert!(theorem4_closed_form(3, 2).unwrap().mismatches(p).is_empty());
    }

    #[test]
    fn closed_form_table_values() {
        let c = theorem2_closed_form(16, 6).unwrap();
        assert_eq!(c.trimmed_f, BigUint::from(14893u32));
        assert_eq!(decimal(&c.trimmed_memory_fraction, 4), "0.4623");
        assert_eq!(decimal(&c.trimmed_rate, 4), "550.6071");

        let c = theorem2_closed_form(11, 6).unwrap();
        assert_eq!(c.trimmed_f, BigUint::from(1486u32));
        assert_eq!(decimal(&c.trimmed_rate, 4), "9.9489");

        let c = theorem4_closed_form(10, 6).unwrap();
        assert_eq!(c.trimmed_f, BigUint::from(26025u32));
        assert_eq!(decimal(&c.trimmed_memory_fraction, 4), "0.4836");
        assert_eq!(decimal(&c.trimmed_rate, 4), "476.4761");

        let c = theorem4_closed_form(7, 5).unwrap();
        assert_eq!(c.trimmed_f, BigUint::from(1611u32));
        assert_eq!(decimal(&c.trimmed_memory_fraction, 4), "0.5829");
        assert_eq!(decimal(&c.trimmed_rate, 4), "28.5084");
    }

    #[test]
    fn bounds_are_checked() {
        assert!(matches!(theorem2_closed_form(3, 0), Err(Error::Parameter(_))));
        assert!(matches!(theorem4_closed_form(3, 3), Err(Error::Parameter(_))));
        assert!(matches!(generate_theorem2(4, 4, CellCap::DEFAULT), Err(Error::Parameter(_))));
        assert!(matches!(
            construct_pda(4, 2, 1, PartitionKind::Primary, CellCap::DEFAULT),
            Err(Error::UnsupportedAlphabet { q: 4 })
        ));
    }
}
