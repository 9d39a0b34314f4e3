//! Benchmark run records and their CSV/JSON projections.

use serde::Serialize;

/// One solver run. CSV columns follow the field order here exactly.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub instance: String,
    pub seed: Option<u64>,
    pub epsilon: String,
    pub k: usize,
    pub r: usize,
    pub n: usize,
    pub m: usize,
    pub approx_cost: u64,
    pub oracle_cost: Option<u64>,
    pub ratio: Option<f64>,
    pub recursion_calls: u64,
    pub ell: u32,
    pub o: u32,
    pub wall_ms: f64,
}

pub const CSV_HEADER: &str =
    "instance,seed,epsilon,k,r,n,m,approx_cost,oracle_cost,ratio,recursion_calls,ell,o,wall_ms";

impl RunRecord {
    pub fn csv_row(&self) -> String {
        let opt_u64 = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{:.3}",
            self.instance,
            opt_u64(self.seed),
            self.epsilon,
            self.k,
            self.r,
            self.n,
            self.m,
            self.approx_cost,
            opt_u64(self.oracle_cost),
            self.ratio.map(|r| format!("{r:.6}")).unwrap_or_default(),
            self.recursion_calls,
            self.ell,
            self.o,
            self.wall_ms,
        )
    }

    /// Recursion-budget invariant `calls <= k * 2^(2 ell + o)`.
    pub fn within_call_budget(&self) -> bool {
        let shift = 2 * self.ell as u64 + self.o as u64;
        if shift >= 127 {
            return true;
        }
        (self.recursion_calls as u128) <= (self.k as u128) << shift
    }
}

pub fn to_csv(records: &[RunRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

pub fn to_json(records: &[RunRecord]) -> String {
    serde_json::to_string_pretty(records).expect("records serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> RunRecord {
        RunRecord {
            instance: "x".into(),
            seed: Some(7),
            epsilon: "1/2".into(),
            k: 4,
            r: 1,
            n: 30,
            m: 49,
            approx_cost: 21,
            oracle_cost: Some(18),
            ratio: Some(21.0 / 18.0),
            recursion_calls: 90,
            ell: 2,
            o: 9,
            wall_ms: 1.25,
        }
    }

    #[test]
    fn csv_columns_match_field_order() {
        let r = record();
        let row = r.csv_row();
        assert_eq!(row.split(',').count(), CSV_HEADER.split(',').count());
        assert!(row.starts_with("x,7,1/2,4,1,30,49,21,18,"));
    }

    #[test]
    fn optional_fields_are_empty_cells() {
        let mut r = record();
        r.oracle_cost = None;
        r.ratio = None;
        let row = r.csv_row();
        assert!(row.contains(",21,,,"), "{row}");
    }

    #[test]
    fn budget_invariant() {
        let mut r = record();
        assert!(r.within_call_budget()); // 90 <= 4 * 2^13
        r.recursion_calls = u64::MAX;
        assert!(!r.within_call_budget());
    }
}
