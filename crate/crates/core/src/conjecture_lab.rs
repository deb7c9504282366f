//! Corpus scans: run the full analysis over many graphs, check every proven
//! inequality, and track where `ε ≤ √var` and `S² ≥ n/2` stand.
//!
//! A [`ScanSummary`] only holds counts, sorted lists and extremal records,
//! so [`ScanSummary::merge`] is associative and commutative and a scan gives
//! the same summary however it was partitioned.

use std::cmp::Ordering;
use std::io::{self, BufRead};
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{self, Graph, GraphError};
use crate::irregularity::{self, BoundViolation, Inequality, IrregularityReport, BOUND_SLACK};
use crate::s2_bounds::{self, S2Error, S2Estimate};
use crate::spectral::{self, SolverConfig, SpectralError};

pub const SCHEMA_VERSION: u32 = 1;
pub const HISTOGRAM_BINS: usize = 20;
/// Slack when comparing an `S²` lower bound, or the cone identity, against
/// the solver's `S`.
pub const S2_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyzeError {
    #[error("graph is not connected")]
    NotConnected,
    #[error(transparent)]
    Spectral(SpectralError),
    #[error(transparent)]
    Bounds(S2Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl From<SpectralError> for AnalyzeError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::NotConnected => Self::NotConnected,
            other => Self::Spectral(other),
        }
    }
}

impl From<S2Error> for AnalyzeError {
    fn from(e: S2Error) -> Self {
        match e {
            S2Error::Spectral(s) => s.into(),
            other => Self::Bounds(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MergeError {
    #[error("summaries were produced with different solver configurations")]
    ConfigMismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub graph6: String,
    pub report: IrregularityReport,
    pub clique_number: Option<usize>,
    /// Largest applicable lower bound on `S²`.
    pub s2_estimate: S2Estimate,
    /// Every lower bound that was evaluated.
    pub s2_estimates: Vec<S2Estimate>,
    /// `S² − n/2`.
    pub conjecture_margin: f64,
    /// `ε / main_bound`, 1 when both vanish.
    pub tightness: f64,
    /// Report violations plus the soundness checks on `S²` bounds.
    pub violations: Vec<BoundViolation>,
}

impl GraphRecord {
    /// `ε > √var`: a counterexample to the variance conjecture.
    pub fn contradicts_variance_conjecture(&self) -> bool {
        self.report.epsilon > self.report.sqrt_variance + BOUND_SLACK
    }
}

/// Runs the full pipeline on one connected graph.
pub fn analyze(g: &Graph, cfg: &SolverConfig) -> Result<GraphRecord, AnalyzeError> {
    let sr = spectral::perron(g, cfg)?;
    let report = irregularity::build_report(g, &sr).expect("solver output matches graph order");
    let s2_estimates = s2_bounds::all_s2_estimates(g, &sr, cfg)?;
    let s2_estimate = s2_bounds::pick_best(&s2_estimates);
    let s_squared = sr.s_squared();

    let mut violations = report.violations.clone();
    for est in &s2_estimates {
        if !(est.value <= s_squared + S2_SLACK) {
            violations.push(BoundViolation {
                inequality: Inequality::S2Soundness,
                lhs: est.value,
                rhs: s_squared,
            });
        }
    }
    for apex in g.universal_vertices() {
        let s = s2_bounds::cone_entry_sum(g, &sr, apex)?;
        if !((s - sr.entry_sum).abs() <= S2_SLACK) {
            violations.push(BoundViolation {
                inequality: Inequality::ConeEntrySum,
                lhs: s,
                rhs: sr.entry_sum,
            });
        }
    }
    let clique_number = s2_bounds::clique_number(g).ok();
    if let Some(omega) = clique_number {
        if 2 * omega >= g.n() && !(report.epsilon <= report.sqrt_variance + BOUND_SLACK) {
            violations.push(BoundViolation {
                inequality: Inequality::CliqueHalfOrder,
                lhs: report.epsilon,
                rhs: report.sqrt_variance,
            });
        }
    }

    Ok(GraphRecord {
        graph6: g.to_graph6(),
        conjecture_margin: s_squared - g.n() as f64 / 2.0,
        tightness: report.tightness(),
        report,
        clique_number,
        s2_estimate,
        s2_estimates,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub value: f64,
    pub graph6: String,
}

impl Extremum {
    fn cmp_key(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then_with(|| self.graph6.cmp(&other.graph6))
    }
}

fn keep_min(slot: &mut Option<Extremum>, candidate: Extremum) {
    match slot {
        Some(current) if current.cmp_key(&candidate) != Ordering::Greater => {}
        _ => *slot = Some(candidate),
    }
}

/// Larger value wins; ties go to the smaller graph6 string.
fn keep_max(slot: &mut Option<Extremum>, candidate: Extremum) {
    match slot {
        Some(current)
            if current
                .value
                .total_cmp(&candidate.value)
                .then_with(|| candidate.graph6.cmp(&current.graph6))
                != Ordering::Less => {}
        _ => *slot = Some(candidate),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub graph6: String,
    pub inequality: Inequality,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticKind {
    Parse,
    Disconnected,
    Solver,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Diagnostic {
    /// 1-based input line, when the graph came from a stream.
    pub line: Option<u64>,
    pub kind: DiagnosticKind,
    pub graph6: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub schema: u32,
    pub config: SolverConfig,
    pub total: u64,
    pub skipped_disconnected: u64,
    pub diagnostics: Vec<Diagnostic>,
    pub violations: Vec<ViolationRecord>,
    /// Graphs with `ε > √var`.
    pub conjecture_counterexamples: Vec<String>,
    /// Graphs with `S² < n/2`; the sufficient condition for `ε ≤ √var` fails
    /// there, which is not by itself a counterexample.
    pub s2_below_half_order: Vec<String>,
    pub min_conjecture_margin: Option<Extremum>,
    pub min_tightness: Option<Extremum>,
    pub max_tightness: Option<Extremum>,
    /// Counts of tightness over `[0, 1]` in equal bins; values above 1 land in
    /// the last bin.
    pub tightness_histogram: Vec<u64>,
}

/// What one input line turned into.
#[derive(Debug, Clone, PartialEq)]
pub enum LineOutcome {
    Blank,
    Record(Box<GraphRecord>),
    SkippedDisconnected,
    Diagnostic(Diagnostic),
}

impl ScanSummary {
    pub fn empty(config: SolverConfig) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            config,
            total: 0,
            skipped_disconnected: 0,
            diagnostics: Vec::new(),
            violations: Vec::new(),
            conjecture_counterexamples: Vec::new(),
            s2_below_half_order: Vec::new(),
            min_conjecture_margin: None,
            min_tightness: None,
            max_tightness: None,
            tightness_histogram: vec![0; HISTOGRAM_BINS],
        }
    }

    pub fn absorb(&mut self, record: &GraphRecord) {
        self.total += 1;
        let g6 = &record.graph6;
        self.violations
            .extend(record.violations.iter().map(|v| ViolationRecord {
                graph6: g6.clone(),
                inequality: v.inequality,
                lhs: v.lhs,
                rhs: v.rhs,
            }));
        if record.contradicts_variance_conjecture() {
            self.conjecture_counterexamples.push(g6.clone());
        }
        if record.conjecture_margin < 0.0 {
            self.s2_below_half_order.push(g6.clone());
        }
        keep_min(
            &mut self.min_conjecture_margin,
            Extremum {
                value: record.conjecture_margin,
                graph6: g6.clone(),
            },
        );
        let t = Extremum {
            value: record.tightness,
            graph6: g6.clone(),
        };
        keep_min(&mut self.min_tightness, t.clone());
        keep_max(&mut self.max_tightness, t);
        self.tightness_histogram[histogram_bin(record.tightness)] += 1;
    }

    pub fn absorb_outcome(&mut self, outcome: LineOutcome) {
        match outcome {
            LineOutcome::Blank => {}
            LineOutcome::Record(r) => self.absorb(&r),
            LineOutcome::SkippedDisconnected => self.skipped_disconnected += 1,
            LineOutcome::Diagnostic(d) => self.diagnostics.push(d),
        }
    }

    /// Puts every list in canonical order.
    pub fn normalize(&mut self) {
        self.diagnostics.sort();
        self.violations.sort_by(|a, b| {
            a.graph6
                .cmp(&b.graph6)
                .then(a.inequality.cmp(&b.inequality))
                .then(a.lhs.total_cmp(&b.lhs))
                .then(a.rhs.total_cmp(&b.rhs))
        });
        self.conjecture_counterexamples.sort();
        self.s2_below_half_order.sort();
    }

    pub fn merge(mut self, other: Self) -> Result<Self, MergeError> {
        if self.config != other.config || self.schema != other.schema {
            return Err(MergeError::ConfigMismatch);
        }
        self.total += other.total;
        self.skipped_disconnected += other.skipped_disconnected;
        self.diagnostics.extend(other.diagnostics);
        self.violations.extend(other.violations);
        self.conjecture_counterexamples
            .extend(other.conjecture_counterexamples);
        self.s2_below_half_order.extend(other.s2_below_half_order);
        if let Some(e) = other.min_conjecture_margin {
            keep_min(&mut self.min_conjecture_margin, e);
        }
        if let Some(e) = other.min_tightness {
            keep_min(&mut self.min_tightness, e);
        }
        if let Some(e) = other.max_tightness {
            keep_max(&mut self.max_tightness, e);
        }
        for (a, b) in self
            .tightness_histogram
            .iter_mut()
            .zip(other.tightness_histogram)
        {
            *a += b;
        }
        self.normalize();
        Ok(self)
    }

    pub fn solver_failures(&self) -> usize {
        self.diagnostics
            .iter()
            .filter(|d| d.kind == DiagnosticKind::Solver)
            .count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

fn histogram_bin(tightness: f64) -> usize {
    let scaled = (tightness.clamp(0.0, 1.0) * HISTOGRAM_BINS as f64).floor();
    (scaled as usize).min(HISTOGRAM_BINS - 1)
}

fn solver_diagnostic(line: Option<u64>, graph6: String, err: AnalyzeError) -> Diagnostic {
    Diagnostic {
        line,
        kind: DiagnosticKind::Solver,
        graph6: Some(graph6),
        message: err.to_string(),
    }
}

/// Analyzes the connected graphs whose patterns fall in `patterns`.
pub fn scan_enumerated_range(
    n: usize,
    cfg: &SolverConfig,
    patterns: Range<u64>,
) -> Result<ScanSummary, GraphError> {
    scan_enumerated_range_with(n, cfg, patterns, |_| {})
}

/// [`scan_enumerated_range`], calling `on_record` for each analyzed graph in
/// enumeration order.
pub fn scan_enumerated_range_with<F>(
    n: usize,
    cfg: &SolverConfig,
    patterns: Range<u64>,
    mut on_record: F,
) -> Result<ScanSummary, GraphError>
where
    F: FnMut(&GraphRecord),
{
    let mut summary = ScanSummary::empty(*cfg);
    for g in graph::enumerate_connected_range(n, true, patterns)? {
        match analyze(&g, cfg) {
            Ok(record) => {
                on_record(&record);
                summary.absorb(&record);
            }
            Err(e) => summary
                .diagnostics
                .push(solver_diagnostic(None, g.to_graph6(), e)),
        }
    }
    summary.normalize();
    Ok(summary)
}

/// Scans every connected graph on `n` vertices, one per isomorphism class.
pub fn scan_enumerated(n: usize, cfg: &SolverConfig) -> Result<ScanSummary, GraphError> {
    scan_enumerated_range(
        n,
        cfg,
        0..graph::pattern_count(n.min(graph::MAX_ENUMERATION_ORDER)),
    )
}

/// Splits the pattern space for order `n` into `parts` contiguous ranges.
pub fn partition_patterns(n: usize, parts: usize) -> Vec<Range<u64>> {
    let total = graph::pattern_count(n) as u128;
    let parts = parts.max(1) as u128;
    (0..parts)
        .map(|k| (total * k / parts) as u64..(total * (k + 1) / parts) as u64)
        .collect()
}

/// Parses and analyzes one graph6 line. `line_no` is 1-based.
pub fn analyze_line(
    line_no: u64,
    line: &str,
    cfg: &SolverConfig,
    skip_disconnected: bool,
) -> LineOutcome {
    let text = line.trim_end_matches(['\n', '\r']);
    let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
    if text.trim().is_empty() {
        return LineOutcome::Blank;
    }
    let g = match graph::from_graph6(text) {
        Ok(g) => g,
        Err(e) => {
            return LineOutcome::Diagnostic(Diagnostic {
                line: Some(line_no),
                kind: DiagnosticKind::Parse,
                graph6: None,
                message: e.to_string(),
            })
        }
    };
    if !g.is_connected() {
        if skip_disconnected {
            return LineOutcome::SkippedDisconnected;
        }
        return LineOutcome::Diagnostic(Diagnostic {
            line: Some(line_no),
            kind: DiagnosticKind::Disconnected,
            graph6: Some(text.to_owned()),
            message: "graph is not connected".into(),
        });
    }
    match analyze(&g, cfg) {
        Ok(record) => LineOutcome::Record(Box::new(record)),
        Err(e) => LineOutcome::Diagnostic(solver_diagnostic(Some(line_no), text.to_owned(), e)),
    }
}

/// Scans a graph6 stream, calling `on_record` for each analyzed graph.
pub fn scan_graph6_stream_with<R, F>(
    reader: R,
    cfg: &SolverConfig,
    skip_disconnected: bool,
    mut on_record: F,
) -> io::Result<ScanSummary>
where
    R: BufRead,
    F: FnMut(&GraphRecord),
{
    let mut summary = ScanSummary::empty(*cfg);
    for (idx, line) in reader.lines().enumerate() {
        let outcome = analyze_line(idx as u64 + 1, &line?, cfg, skip_disconnected);
        if let LineOutcome::Record(record) = &outcome {
            on_record(record);
        }
        summary.absorb_outcome(outcome);
    }
    summary.normalize();
    Ok(summary)
}

pub fn scan_graph6_stream<R: BufRead>(
    reader: R,
    cfg: &SolverConfig,
    skip_disconnected: bool,
) -> io::Result<ScanSummary> {
    scan_graph6_stream_with(reader, cfg, skip_disconnected, |_| {})
}

/// Column names of the per-graph CSV.
pub const CSV_HEADER: [&str; 15] = [
    "graph6",
    "n",
    "m",
    "rho",
    "epsilon",
    "s",
    "var",
    "S2",
    "nik_lower",
    "nik_upper",
    "main_bound",
    "best_s2_method",
    "best_s2_value",
    "conjecture_margin",
    "tightness",
];

impl GraphRecord {
    pub fn csv_row(&self) -> Vec<String> {
        let r = &self.report;
        let mut row = vec![self.graph6.clone(), r.n.to_string(), r.m.to_string()];
        row.extend(
            [r.rho, r.epsilon, r.s_moment, r.variance, r.s_squared]
                .into_iter()
                .chain([r.nikiforov_lower, r.nikiforov_upper, r.main_bound])
                .map(format_significant),
        );
        row.push(self.s2_estimate.method.label().to_owned());
        row.extend(
            [
                self.s2_estimate.value,
                self.conjecture_margin,
                self.tightness,
            ]
            .into_iter()
            .map(format_significant),
        );
        row
    }
}

/// Formats with 12 significant digits, `%.12g` style.
pub fn format_significant(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    // rounding can carry into the next decade
    let rounded: f64 = format!("{:.*e}", (DIGITS - 1) as usize, x).parse().unwrap();
    let exponent = if rounded.abs() >= 10f64.powi(exponent + 1) {
        exponent + 1
    } else {
        exponent
    };
    if (-5..DIGITS).contains(&exponent) {
        let decimals = (DIGITS - 1 - exponent).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_owned()
        } else {
            s
        }
    } else {
        let s = format!("{:.*e}", (DIGITS - 1) as usize, x);
        let (mantissa, exp) = s.split_once('e').expect("exponent form");
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{exp}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn analyze_examples() {
        let r = analyze(&Graph::complete_bipartite(2, 3).unwrap(), &cfg()).unwrap();
        assert!((r.tightness - 1.0).abs() < 1e-6);
        assert!(r.violations.is_empty());

        let k = 6.0;
        let r = analyze(&Graph::harmonic_tk(6).unwrap(), &cfg()).unwrap();
        assert!((r.tightness - 1.0).abs() < 1e-6);
        assert!((r.conjecture_margin - 7.0 * k / 6.0).abs() < 1e-8);
        assert_eq!(r.s2_estimate.method, s2_bounds::S2Method::HarmonicExact);

        let r = analyze(&Graph::complete(4).unwrap(), &cfg()).unwrap();
        assert!(r.report.epsilon.abs() < 1e-12);
        assert!((r.conjecture_margin - 2.0).abs() < 1e-9);
        assert_eq!(r.tightness, 1.0);

        let disconnected = Graph::from_edge_list("4\n0 1\n2 3").unwrap();
        assert_eq!(
            analyze(&disconnected, &cfg()),
            Err(AnalyzeError::NotConnected)
        );
    }

    #[test]
    fn small_scans() {
        let s = scan_enumerated(4, &cfg()).unwrap();
        assert_eq!(s.total, 6);
        assert!(s.violations.is_empty());
        assert!(s.conjecture_counterexamples.is_empty());
        assert_eq!(s.tightness_histogram.iter().sum::<u64>(), 6);

        let s = scan_enumerated(1, &cfg()).unwrap();
        assert_eq!(s.total, 1);
        assert_eq!(s.min_conjecture_margin.unwrap().value, 0.5);
        assert!(scan_enumerated(8, &cfg()).is_err());
    }

    #[test]
    fn stream_handles_bad_lines() {
        let input = "A_\nnot graph6\r\nBw\n\n>>graph6<<Bg\r\nC?\n";
        let s = scan_graph6_stream(input.as_bytes(), &cfg(), true).unwrap();
        assert_eq!(s.total, 3);
        assert_eq!(s.skipped_disconnected, 1);
        assert_eq!(s.diagnostics.len(), 1);
        assert_eq!(s.diagnostics[0].line, Some(2));
        assert_eq!(s.diagnostics[0].kind, DiagnosticKind::Parse);

        let s = scan_graph6_stream(input.as_bytes(), &cfg(), false).unwrap();
        assert_eq!(s.skipped_disconnected, 0);
        let disc: Vec<_> = s
            .diagnostics
            .iter()
            .filter(|d| d.kind == DiagnosticKind::Disconnected)
            .collect();
        assert_eq!(disc.len(), 1);
        assert_eq!(disc[0].line, Some(6));
    }

    #[test]
    fn merge_identity_and_mismatch() {
        let s = scan_enumerated(4, &cfg()).unwrap();
        let merged = s.clone().merge(ScanSummary::empty(cfg())).unwrap();
        assert_eq!(merged, s);
        let other = ScanSummary::empty(SolverConfig {
            tolerance: 1e-10,
            ..cfg()
        });
        assert_eq!(s.merge(other), Err(MergeError::ConfigMismatch));
    }

    #[test]
    fn extremum_ties_are_order_independent() {
        let a = Extremum {
            value: 1.0,
            graph6: "B".into(),
        };
        let b = Extremum {
            value: 1.0,
            graph6: "A".into(),
        };
        let (mut x, mut y) = (None, None);
        keep_max(&mut x, a.clone());
        keep_max(&mut x, b.clone());
        keep_max(&mut y, b.clone());
        keep_max(&mut y, a.clone());
        assert_eq!(x, y);
        let (mut x, mut y) = (None, None);
        keep_min(&mut x, a.clone());
        keep_min(&mut x, b.clone());
        keep_min(&mut y, b);
        keep_min(&mut y, a);
        assert_eq!(x, y);
    }

    #[test]
    fn histogram_bins() {
        assert_eq!(histogram_bin(0.0), 0);
        assert_eq!(histogram_bin(0.049), 0);
        assert_eq!(histogram_bin(0.05), 1);
        assert_eq!(histogram_bin(1.0), 19);
        assert_eq!(histogram_bin(1.0 + 1e-10), 19);
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(0.0), "0");
        assert_eq!(format_significant(2.4), "2.4");
        assert_eq!(format_significant(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_significant(6f64.sqrt()), "2.44948974278");
        assert_eq!(format_significant(16.0), "16");
        assert_eq!(format_significant(-0.0494897427832), "-0.0494897427832");
        assert_eq!(format_significant(1.5e-7), "1.5e-7");
        assert_eq!(format_significant(9.9999999999999e2), "1000");
        assert_eq!(format_significant(123456789012345.0), "1.23456789012e14");
    }

    #[test]
    fn csv_row_shape() {
        let r = analyze(&Graph::complete_bipartite(2, 3).unwrap(), &cfg()).unwrap();
        let row = r.csv_row();
        assert_eq!(row.len(), CSV_HEADER.len());
        assert_eq!(row[0], "D]o");
        assert_eq!(&row[1..3], ["5", "6"]);
    }
}
