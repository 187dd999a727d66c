//! The output schema: one CSV row per run, fixed column order, reals at 17
//! significant digits.
//!
//! The `elapsed_ms` column is pinned to 0 so identical configurations
//! produce byte-identical files (the determinism contract covers every
//! byte); wall-clock timings are reported on stderr instead.

use crate::solvers::RunRecord;

pub const CSV_HEADER: &str =
    "algo,problem,n,d,T,m,b,B,seed,gamma,mean_gap,final_gap,output_gap,sfo,ifo,lo,gap_ifo,gap_lo,elapsed_ms";

/// 17 significant digits, scientific, sign-stable across platforms.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub algo: &'static str,
    pub problem: &'static str,
    pub n: u64,
    pub d: u64,
    pub t: u64,
    pub m: u64,
    pub b: u64,
    pub presample: u64,
    pub seed: u64,
    pub gamma: f64,
    pub mean_gap: f64,
    pub final_gap: f64,
    pub output_gap: f64,
    pub sfo: u64,
    pub ifo: u64,
    pub lo: u64,
    pub gap_ifo: u64,
    pub gap_lo: u64,
    pub elapsed_ms: u64,
}

impl CsvRow {
    /// Builds a row from a finished run. `t` is the requested iteration
    /// count (the sweep axis), not the epoch-rounded total.
    pub fn from_record(record: &RunRecord, problem: &'static str, t: u64, seed: u64) -> Self {
        Self {
            algo: record.algorithm.name(),
            problem,
            n: record.params.n,
            d: record.params.dim,
            t,
            m: record.params.epoch_len,
            b: record.params.batch,
            presample: record.params.presample,
            seed,
            gamma: record.gamma,
            mean_gap: record.mean_gap,
            final_gap: record.final_gap,
            output_gap: record.output_gap,
            sfo: record.counters.sfo,
            ifo: record.counters.ifo,
            lo: record.counters.lo,
            gap_ifo: record.counters.gap_ifo,
            gap_lo: record.counters.gap_lo,
            elapsed_ms: 0,
        }
    }

    pub fn to_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.algo,
            self.problem,
            self.n,
            self.d,
            self.t,
            self.m,
            self.b,
            self.presample,
            self.seed,
            format_real(self.gamma),
            format_real(self.mean_gap),
            format_real(self.final_gap),
            format_real(self.output_gap),
            self.sfo,
            self.ifo,
            self.lo,
            self.gap_ifo,
            self.gap_lo,
            self.elapsed_ms,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_column_count_matches_rows() {
        let row = CsvRow {
            algo: "fw",
            problem: "convexquad",
            n: 1,
            d: 3,
            t: 10,
            m: 0,
            b: 0,
            presample: 0,
            seed: 1,
            gamma: 0.1,
            mean_gap: 0.5,
            final_gap: 0.25,
            output_gap: 0.3,
            sfo: 0,
            ifo: 10,
            lo: 10,
            gap_ifo: 2,
            gap_lo: 2,
            elapsed_ms: 0,
        };
        let cols = CSV_HEADER.split(',').count();
        assert_eq!(row.to_line().split(',').count(), cols);
        assert_eq!(cols, 19);
    }

    #[test]
    fn reals_render_17_significant_digits() {
        assert_eq!(format_real(0.1), "1.0000000000000001e-1");
        assert_eq!(format_real(1.0), "1.0000000000000000e0");
        // Distinct adjacent doubles stay distinct in the output.
        let a = 0.1f64;
        let b = f64::from_bits(a.to_bits() + 1);
        assert_ne!(format_real(a), format_real(b));
    }
}
