use num_rational::BigRational;
use serde_json::{json, Value};

use super::PdaArray;
use crate::combinatorics::{decimal, ratio};
use crate::error::{Error, Result};

/// Caching-scheme parameters realized by an array.
///
/// `memory_fraction = Z/F` and `rate = S/F`. When every column carries the
/// same number `Z'` of useless stars the trimmed variant is also filled in:
/// `F - Z'` packets, memory fraction `(Z - Z')/(F - Z')`, rate `S/(F - Z')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeParams {
    pub k: usize,
    pub f: usize,
    pub z: usize,
    pub s: usize,
    pub z_prime: Option<usize>,
    pub memory_fraction: BigRational,
    pub rate: BigRational,
    pub trimmed: Option<TrimmedParams>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrimmedParams {
    pub f: usize,
    pub memory_fraction: BigRational,
    pub rate: BigRational,
}

impl SchemeParams {
    /// Analysis document with exact fractions rendered as `"num/den"`.
    pub fn to_json(&self) -> Value {
        let frac = |r: &BigRational| Value::String(r.to_string());
        json!({
            "K": self.k,
            "F": self.f,
            "Z": self.z,
            "S": self.s,
            "Zprime": self.z_prime,
            "memory_fraction": frac(&self.memory_fraction),
            "rate": frac(&self.rate),
            "trimmed": self.trimmed.as_ref().map(|t| json!({
                "F": t.f,
                "memory_fraction": frac(&t.memory_fraction),
                "rate": frac(&t.rate),
            })),
        })
    }

    /// Human-readable summary with 4-place decimals.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "(K,F,Z,S) = ({},{},{},{})\nM/N = {} ({})\nR = {} ({})\n",
            self.k,
            self.f,
            self.z,
            self.s,
            self.memory_fraction,
            decimal(&self.memory_fraction, 4),
            self.rate,
            decimal(&self.rate, 4),
        );
        match (&self.z_prime, &self.trimmed) {
            (Some(zp), Some(t)) => out.push_str(&format!(
                "useless stars per column = {zp}\ntrimmed F = {}\ntrimmed M/N = {} ({})\ntrimmed R = {} ({})\n",
                t.f,
                t.memory_fraction,
                decimal(&t.memory_fraction, 4),
                t.rate,
                decimal(&t.rate, 4)
            )),
            (Some(zp), None) => out.push_str(&format!("useless stars per column = {zp}\n")),
            _ => {}
        }
        if let Some(note) = &self.note {
            out.push_str(&format!("note: {note}\n"));
        }
        out
    }
}

impl PdaArray {
    /// Derives the scheme parameters. The array must satisfy both conditions.
    pub fn scheme_params(&self) -> Result<SchemeParams> {
        self.verify_c1()
            .map_err(|v| Error::InvalidInput(v.to_string()))?;
        let z = self.verify_c2()?;
        let (k, f, s) = (self.k(), self.f(), self.symbol_count());
        let useless = self.find_useless_stars()?;
        let z_prime = useless.uniform();
        let (trimmed, note) = match z_prime {
            None => (
                None,
                Some("useless-star count differs between columns; trimmed parameters omitted".to_string()),
            ),
            Some(zp) if zp == f => (
                None,
                Some("every row is useless; trimmed parameters undefined".to_string()),
            ),
            Some(zp) => (
                Some(TrimmedParams {
                    f: f - zp,
                    memory_fraction: ratio(z as u64 - zp as u64, (f - zp) as u64),
                    rate: ratio(s as u64, (f - zp) as u64),
                }),
                None,
            ),
        };
        Ok(SchemeParams {
            k,
            f,
            z,
            s,
            z_prime,
            memory_fraction: ratio(z as u64, f as u64),
            rate: ratio(s as u64, f as u64),
            trimmed,
            note,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pda::{Entry, Label};
    use crate::qvec::QVec;

    fn v(s: &str) -> QVec {
        QVec::parse(2, s).unwrap()
    }

    #[test]
    fn all_star_rate_is_zero() {
        let p = PdaArray::new(2, 1, 1, vec![v("0"), v("1")], vec![v("0"), v("1")], vec![Entry::Star; 4])
            .unwrap();
        let params = p.scheme_params().unwrap();
        assert_eq!(params.rate, ratio(0, 1));
        assert_eq!(params.memory_fraction, ratio(1, 1));
        assert_eq!(params.z_prime, Some(2));
        assert!(params.trimmed.is_none());
        assert!(params.note.is_some());
        assert_eq!(params.to_json()["trimmed"], Value::Null);
    }

    #[test]
    fn non_uniform_columns_are_rejected() {
        let grid = vec![
            Entry::Star,
            Entry::Star,
            Entry::Star,
            Entry::Symbol(Label::new(v("1"), 0)),
        ];
        let p = PdaArray::new(2, 1, 1, vec![v("0"), v("1")], vec![v("0"), v("1")], grid).unwrap();
        assert!(matches!(p.scheme_params(), Err(Error::NonUniformStars { .. })));
    }

    #[test]
    fn json_schema_keys() {
        let l = Label::new(v("1"), 0);
        let grid = vec![
            Entry::Symbol(l.clone()),
            Entry::Star,
            Entry::Star,
            Entry::Symbol(l),
        ];
        let p = PdaArray::new(2, 1, 1, vec![v("0"), v("1")], vec![v("0"), v("1")], grid).unwrap();
        let json = p.scheme_params().unwrap().to_json();
        assert_eq!(json["K"], 2);
        assert_eq!(json["Z"], 1);
        assert_eq!(json["S"], 1);
        assert_eq!(json["Zprime"], 0);
        assert_eq!(json["memory_fraction"], "1/2");
        assert_eq!(json["rate"], "1/2");
        assert_eq!(json["trimmed"]["F"], 2);
    }
}
