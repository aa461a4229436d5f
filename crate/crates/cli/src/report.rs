//! Report serialization. Floats are written with 17 significant digits so
//! every value round-trips exactly.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

pub const COVARIANCE_CONVENTION: &str = "1/n";

/// An `f64` serialized with 17 significant digits; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Real {
    pub fn text(self) -> String {
        if self.0.is_finite() {
            format!("{:.16e}", self.0)
        } else {
            String::new()
        }
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(self.text()).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

pub fn reals(values: &[f64]) -> Vec<Real> {
    values.iter().copied().map(Real).collect()
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report types always serialize");
    out.push('\n');
    out
}

/// CSV document: `# key: value` metadata lines, a header row, then one row per record.
#[derive(Debug, Default)]
pub struct Csv {
    out: String,
}

impl Csv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) {
        self.out.push_str(&format!("# {key}: {value}\n"));
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let cells: Vec<String> = cells.into_iter().map(|c| escape(c.as_ref())).collect();
        self.out.push_str(&cells.join(","));
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

fn escape(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// Space-separated values rounded to 4 decimals, for terminal summaries.
pub fn rounded(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join(" ")
}

/// 1-based indices, comma-separated.
pub fn one_based(indices: &[usize]) -> String {
    indices
        .iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits_round_trip() {
        for v in [0.1, 14.722045, 1.0 / 3.0, 2244.0, -1e-300, 0.0] {
            let t = Real(v).text();
            assert_eq!(t.parse::<f64>().unwrap().to_bits(), v.to_bits());
            let mantissa = t.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
        }
    }

    #[test]
    fn json_uses_fixed_digits_and_null() {
        let s = serde_json::to_string(&vec![Real(0.5), Real(f64::NAN)]).unwrap();
        assert_eq!(s, "[5.0000000000000000e-1,null]");
        let parsed: Vec<Option<f64>> = serde_json::from_str(&s).unwrap();
        assert_eq!(parsed, vec![Some(0.5), None]);
    }

    #[test]
    fn csv_quotes_cells() {
        let mut c = Csv::new();
        c.meta("tool", "biaspca");
        c.row(["a", "b,c"]);
        assert_eq!(c.finish(), "# tool: biaspca\na,\"b,c\"\n");
    }
}
