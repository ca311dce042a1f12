//! Run reports as JSON documents or CSV rows.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::costmodel::CostConstants;
use crate::domain::{DatasetStats, FreqSource, ItemOrder};
use crate::error::{Error, Result};
use crate::intersect::IntersectMethod;
use crate::join::{Algorithm, DecisionRecord, JoinConfig, JoinOutput, LimitSpec, Paradigm};
use crate::scalar::Scalar;

pub const CSV_COLUMNS: [&str; 14] = [
    "algorithm",
    "paradigm",
    "ordering",
    "freq_source",
    "intersect",
    "limit_strategy",
    "limit_value",
    "n_results",
    "n_intersections",
    "n_candidates_direct",
    "n_candidates_verified",
    "build_ms",
    "join_ms",
    "peak_logical_bytes",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub algorithm: Algorithm,
    pub paradigm: Paradigm,
    pub ordering: ItemOrder,
    pub freq_source: FreqSource,
    pub intersect: IntersectMethod,
    /// `explicit`, `unlimited`, or an estimator name.
    pub limit_strategy: String,
    pub count_only: bool,
    pub faithful: bool,
    pub keep_empty: bool,
}

impl<T: Scalar> From<&JoinConfig<T>> for ConfigEcho {
    fn from(cfg: &JoinConfig<T>) -> Self {
        let limit_strategy = match cfg.limit {
            LimitSpec::Explicit(_) => "explicit".to_owned(),
            LimitSpec::Unlimited => "unlimited".to_owned(),
            LimitSpec::Strategy(_) if cfg.algorithm == Algorithm::Pretti => "unlimited".to_owned(),
            LimitSpec::Strategy(s) => s.name().to_owned(),
        };
        Self {
            algorithm: cfg.algorithm,
            paradigm: cfg.paradigm,
            ordering: cfg.ordering,
            freq_source: cfg.freq_source,
            intersect: cfg.intersect,
            limit_strategy,
            count_only: cfg.count_only,
            faithful: cfg.faithful,
            keep_empty: cfg.keep_empty,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ConfigEcho,
    /// Depth limit used; absent for an unlimited tree.
    pub limit_value: Option<u32>,
    pub n_results: u64,
    pub n_intersections: u64,
    pub n_candidates_direct: u64,
    pub n_candidates_verified: u64,
    pub build_ms: f64,
    pub join_ms: f64,
    pub peak_logical_bytes: u64,
    pub right_indexed: u64,
    pub left_stats: DatasetStats,
    pub right_stats: DatasetStats,
    pub costs: CostConstants<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub decisions: Vec<DecisionRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(u32, u32)>>,
}

impl RunReport {
    pub fn new<T: Scalar>(
        cfg: &JoinConfig<T>,
        out: &JoinOutput,
        left_stats: DatasetStats,
        right_stats: DatasetStats,
    ) -> Self {
        let c = &cfg.costs;
        let f = |v: T| v.as_f64();
        Self {
            config: ConfigEcho::from(cfg),
            limit_value: out.limit,
            n_results: out.n_results,
            n_intersections: out.n_intersections,
            n_candidates_direct: out.n_candidates_direct,
            n_candidates_verified: out.n_candidates_verified,
            build_ms: out.build_time.as_secs_f64() * 1e3,
            join_ms: out.join_time.as_secs_f64() * 1e3,
            peak_logical_bytes: out.peak_logical_bytes,
            right_indexed: out.right_indexed,
            left_stats,
            right_stats,
            costs: CostConstants {
                merge_cl: f(c.merge_cl),
                merge_postings: f(c.merge_postings),
                merge_fixed: f(c.merge_fixed),
                binary_probe: f(c.binary_probe),
                binary_fixed: f(c.binary_fixed),
                direct_pair: f(c.direct_pair),
                direct_fixed: f(c.direct_fixed),
                verify_left_suffix: f(c.verify_left_suffix),
                verify_right_suffix: f(c.verify_right_suffix),
                verify_fixed: f(c.verify_fixed),
            },
            decisions: out.decisions.clone(),
            pairs: out.pairs.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Report(e.to_string()))
    }

    /// Values in [`CSV_COLUMNS`] order.
    pub fn csv_record(&self) -> Vec<String> {
        fn name<S: Serialize>(v: &S) -> String {
            serde_json::to_value(v)
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_default()
        }
        let c = &self.config;
        vec![
            name(&c.algorithm),
            name(&c.paradigm),
            name(&c.ordering),
            name(&c.freq_source),
            name(&c.intersect),
            c.limit_strategy.clone(),
            self.limit_value.map(|v| v.to_string()).unwrap_or_default(),
            self.n_results.to_string(),
            self.n_intersections.to_string(),
            self.n_candidates_direct.to_string(),
            self.n_candidates_verified.to_string(),
            format!("{:.3}", self.build_ms),
            format!("{:.3}", self.join_ms),
            self.peak_logical_bytes.to_string(),
        ]
    }
}

/// Writes `report` to `path`, or to stdout when `path` is `None`.
///
/// JSON replaces the file. CSV appends one row, writing the header only when
/// the target is new or empty.
pub fn emit_report(report: &RunReport, format: ReportFormat, path: Option<&Path>) -> Result<()> {
    let stdout_name = Path::new("<stdout>");
    match (format, path) {
        (ReportFormat::Json, Some(p)) => {
            let text = report.to_json()?;
            std::fs::write(p, text + "\n").map_err(|e| Error::io(p, e))
        }
        (ReportFormat::Json, None) => {
            let text = report.to_json()?;
            writeln!(std::io::stdout(), "{text}").map_err(|e| Error::io(stdout_name, e))
        }
        (ReportFormat::Csv, Some(p)) => {
            let fresh = std::fs::metadata(p).map(|m| m.len() == 0).unwrap_or(true);
            let file = OpenOptions::new()
                .create(true)
                .append(true)
                .open(p)
                .map_err(|e| Error::io(p, e))?;
            write_csv(report, file, fresh).map_err(|e| match e {
                Error::Report(m) => Error::Parse {
                    path: p.to_owned(),
                    message: m,
                },
                e => e,
            })
        }
        (ReportFormat::Csv, None) => write_csv(report, std::io::stdout(), true),
    }
}

fn write_csv<W: Write>(report: &RunReport, w: W, header: bool) -> Result<()> {
    let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    let err = |e: csv::Error| Error::Report(e.to_string());
    if header {
        wr.write_record(CSV_COLUMNS).map_err(err)?;
    }
    wr.write_record(report.csv_record()).map_err(err)?;
    wr.flush().map_err(|e| Error::Report(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(count_only: bool) -> RunReport {
        let mut cfg = JoinConfig::<f64>::org_pretti();
        cfg.count_only = count_only;
        let out = JoinOutput {
            pairs: (!count_only).then(|| vec![(0, 1)]),
            n_results: 1,
            ..JoinOutput::default()
        };
        RunReport::new(&cfg, &out, DatasetStats::default(), DatasetStats::default())
    }

    #[test]
    fn json_omits_pairs_when_counting() {
        let j = report(true).to_json().unwrap();
        assert!(!j.contains("\"pairs\""));
        let j = report(false).to_json().unwrap();
        assert!(j.contains("\"pairs\""));
        let back: RunReport = serde_json::from_str(&j).unwrap();
        assert_eq!(back, report(false));
    }

    #[test]
    fn csv_appends_single_header() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.csv");
        emit_report(&report(true), ReportFormat::Csv, Some(&p)).unwrap();
        emit_report(&report(true), ReportFormat::Csv, Some(&p)).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], CSV_COLUMNS.join(","));
        assert!(lines[1].starts_with("pretti,bulk,decreasing,left_only,hybrid,unlimited,,1,"));
    }
}
