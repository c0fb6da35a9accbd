//! The three reference tables, rebuilt from scratch, together with the
//! digits they are expected to print.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exact::{exact_p_value_fair, find_neutral_k, ln_exact_lr_uniform_vs_fair, standardize, Experiment, Sided};
use crate::families::max_lr_for_pvalue;

/// Sample sizes of the "likelihood ratio closest to one" table.
pub const TABLE1_SIZES: [u64; 6] = [20, 100, 1_000, 10_000, 100_000, 1_000_000];

/// Printed `(n, k, u, LR, p)` of the first table.
pub const TABLE1_PRINTED: [(u64, u64, &str, &str, &str); 6] = [
    (20, 6, "1.789", "1.288", "0.11532"),
    (100, 40, "2.000", "0.913", "0.05689"),
    (1_000, 460, "2.530", "0.972", "0.01244"),
    (10_000, 4852, "2.960", "1.002", "0.00318"),
    (100_000, 49474, "3.327", "1.003", "0.00089"),
    (1_000_000, 498172, "3.656", "1.001", "0.00026"),
];

/// The two experiments of the second table.
pub const TABLE2_EXPERIMENTS: [(&str, u64, u64); 2] = [("A", 10_000, 4815), ("B", 100_000_000_000, 49_999_214_176)];

/// Printed `(label, u, p, LR)` of the second table.
pub const TABLE2_PRINTED: [(&str, &str, &str, &str); 2] = [("A", "3.70", "2.2e-4", "11.8"), ("B", "4.97", "6.7e-7", "0.916")];

pub const TABLE3_PVALUES: [f64; 4] = [0.050, 0.010, 0.005, 0.001];

/// Printed `(sided, p, u, sup LR)` of the third table.
pub const TABLE3_PRINTED: [(Sided, &str, &str, &str); 8] = [
    (Sided::One, "0.050", "1.645", "3.9"),
    (Sided::One, "0.010", "2.326", "15.0"),
    (Sided::One, "0.005", "2.576", "27.6"),
    (Sided::One, "0.001", "3.090", "118.5"),
    (Sided::Two, "0.050", "1.960", "6.8"),
    (Sided::Two, "0.010", "2.576", "27.6"),
    (Sided::Two, "0.005", "2.807", "51.4"),
    (Sided::Two, "0.001", "3.291", "224.5"),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub n: u64,
    pub k: u64,
    pub u: f64,
    pub lr: f64,
    pub p: f64,
}

impl Table1Row {
    /// `(u, LR, p)` rounded as printed.
    pub fn printed(&self) -> (String, String, String) {
        (format!("{:.3}", self.u), format!("{:.3}", self.lr), format!("{:.5}", self.p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    pub label: &'static str,
    pub n: u64,
    pub k: u64,
    pub u: f64,
    pub p: f64,
    pub lr: f64,
}

impl Table2Row {
    /// `(u, p, LR)` rounded as printed.
    pub fn printed(&self) -> (String, String, String) {
        (format!("{:.2}", self.u), format!("{:.1e}", self.p), format_significant(self.lr, 3))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table3Row {
    pub sided: Sided,
    pub p: f64,
    pub u: f64,
    pub sup_lr: f64,
}

impl Table3Row {
    /// `(p, u, sup LR)` rounded as printed.
    pub fn printed(&self) -> (String, String, String) {
        (format!("{:.3}", self.p), format!("{:.3}", self.u), format!("{:.1}", self.sup_lr))
    }
}

/// `x` with `sig` significant digits in fixed notation.
pub fn format_significant(x: f64, sig: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (sig as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn row_values(e: Experiment) -> Result<(f64, f64, f64)> {
    let u = standardize(e, 0.5)?.u;
    Ok((u, ln_exact_lr_uniform_vs_fair(e).exp(), exact_p_value_fair(e, Sided::Two)))
}

/// For each size, the head count whose likelihood ratio is closest to one,
/// with its deviation, ratio and two-sided exact p-value.
pub fn table1() -> Result<Vec<Table1Row>> {
    TABLE1_SIZES
        .iter()
        .map(|&n| {
            let e = find_neutral_k(n)?;
            let (u, lr, p) = row_values(e)?;
            Ok(Table1Row { n, k: e.k(), u, lr, p })
        })
        .collect()
}

pub fn table2() -> Result<Vec<Table2Row>> {
    TABLE2_EXPERIMENTS
        .iter()
        .map(|&(label, n, k)| {
            let (u, lr, p) = row_values(Experiment::new(n, k)?)?;
            Ok(Table2Row { label, n, k, u, p, lr })
        })
        .collect()
}

pub fn table3() -> Result<Vec<Table3Row>> {
    [Sided::One, Sided::Two]
        .iter()
        .flat_map(|&sided| TABLE3_PVALUES.iter().map(move |&p| (sided, p)))
        .map(|(sided, p)| {
            let m = max_lr_for_pvalue(p, sided)?;
            Ok(Table3Row { sided, p, u: m.u, sup_lr: m.sup_lr })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(11.7802, 3), "11.8");
        assert_eq!(format_significant(0.915721, 3), "0.916");
        assert_eq!(format_significant(224.49, 3), "224");
    }

    #[test]
    fn third_table_matches_print() {
        for (row, printed) in table3().unwrap().iter().zip(TABLE3_PRINTED) {
            assert_eq!(row.sided, printed.0);
            assert_eq!(row.printed(), (printed.1.into(), printed.2.into(), printed.3.into()));
        }
    }

    #[test]
    fn second_table_matches_print() {
        for (row, printed) in table2().unwrap().iter().zip(TABLE2_PRINTED) {
            assert_eq!(row.printed(), (printed.1.into(), printed.2.into(), printed.3.into()), "{row:?}");
        }
    }
}
