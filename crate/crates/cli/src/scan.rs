use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use rayon::prelude::*;
use specirr::conjecture_lab::{
    analyze_line, partition_patterns, scan_enumerated_range_with, LineOutcome, CSV_HEADER,
};
use specirr::graph::{GraphError, MAX_ENUMERATION_ORDER};
use specirr::spectral::SolverConfig;
use specirr::{GraphRecord, ScanSummary};

use crate::Failure;

const THREADS_VAR: &str = "SPECIRR_THREADS";
/// Lines analyzed in parallel before their results are written.
const BATCH_LINES: usize = 4096;
/// Pattern ranges handed to each worker thread for enumeration scans.
const CHUNKS_PER_THREAD: usize = 8;

pub struct Request {
    pub cfg: SolverConfig,
    pub per_graph: Option<PathBuf>,
    pub csv_to_stdout: bool,
    pub skip_disconnected: bool,
}

/// Sizes the global worker pool from `SPECIRR_THREADS` when it is set.
pub fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| anyhow!("{THREADS_VAR} must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("starting worker pool")?;
    Ok(())
}

/// Per-graph CSV output, to a file, to stdout, or both.
struct RowSink<'a, W: Write> {
    file: Option<csv::Writer<File>>,
    stdout: Option<csv::Writer<&'a mut W>>,
}

impl<'a, W: Write> RowSink<'a, W> {
    fn open(req: &Request, out: &'a mut W) -> Result<Self, Failure> {
        let file = match &req.per_graph {
            Some(path) => {
                let f =
                    File::create(path).with_context(|| format!("creating {}", path.display()))?;
                let mut w = csv::Writer::from_writer(f);
                w.write_record(CSV_HEADER)?;
                Some(w)
            }
            None => None,
        };
        let stdout = if req.csv_to_stdout {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_HEADER)?;
            Some(w)
        } else {
            None
        };
        Ok(Self { file, stdout })
    }

    fn wants_rows(&self) -> bool {
        self.file.is_some() || self.stdout.is_some()
    }

    fn write(&mut self, record: &GraphRecord) -> Result<(), Failure> {
        let row = record.csv_row();
        if let Some(w) = &mut self.file {
            w.write_record(&row)?;
        }
        if let Some(w) = &mut self.stdout {
            w.write_record(&row)?;
        }
        Ok(())
    }

    fn finish(self) -> Result<(), Failure> {
        if let Some(mut w) = self.file {
            w.flush()?;
        }
        if let Some(mut w) = self.stdout {
            w.flush()?;
        }
        Ok(())
    }
}

/// Scans every connected graph on `n` vertices, splitting the pattern space
/// across the worker pool and merging the partial summaries.
pub fn enumerated<W: Write>(n: usize, req: &Request, out: &mut W) -> Result<ScanSummary, Failure> {
    if n == 0 || n > MAX_ENUMERATION_ORDER {
        return Err(GraphError::OrderOutOfRange {
            n,
            min: 1,
            max: MAX_ENUMERATION_ORDER,
        }
        .into());
    }
    let mut sink = RowSink::open(req, out)?;
    let keep = sink.wants_rows();
    let parts = rayon::current_num_threads() * CHUNKS_PER_THREAD;
    let results: Vec<(ScanSummary, Vec<GraphRecord>)> = partition_patterns(n, parts)
        .into_par_iter()
        .map(|range| {
            let mut records = Vec::new();
            let summary = scan_enumerated_range_with(n, &req.cfg, range, |r| {
                if keep {
                    records.push(r.clone());
                }
            })?;
            Ok((summary, records))
        })
        .collect::<Result<_, GraphError>>()?;
    let mut total = ScanSummary::empty(req.cfg);
    for (summary, records) in results {
        for r in &records {
            sink.write(r)?;
        }
        total = total.merge(summary)?;
    }
    sink.finish()?;
    Ok(total)
}

pub fn corpus_file<W: Write>(
    path: &Path,
    req: &Request,
    out: &mut W,
) -> Result<ScanSummary, Failure> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    stream(BufReader::new(f), req, out)
}

/// Scans a graph6 stream in batches. Each batch is analyzed in parallel and
/// absorbed in input order, so output does not depend on the thread count.
pub fn stream<R: BufRead, W: Write>(
    reader: R,
    req: &Request,
    out: &mut W,
) -> Result<ScanSummary, Failure> {
    let mut sink = RowSink::open(req, out)?;
    let mut summary = ScanSummary::empty(req.cfg);
    let mut lines = reader.lines();
    let mut next_line: u64 = 1;
    loop {
        let mut batch = Vec::with_capacity(BATCH_LINES);
        for line in lines.by_ref().take(BATCH_LINES) {
            let text = line.with_context(|| format!("reading line {}", next_line))?;
            batch.push((next_line, text));
            next_line += 1;
        }
        if batch.is_empty() {
            break;
        }
        let outcomes: Vec<LineOutcome> = batch
            .par_iter()
            .map(|(no, text)| analyze_line(*no, text, &req.cfg, req.skip_disconnected))
            .collect();
        for outcome in outcomes {
            if let LineOutcome::Record(r) = &outcome {
                sink.write(r)?;
            }
            summary.absorb_outcome(outcome);
        }
    }
    sink.finish()?;
    summary.normalize();
    Ok(summary)
}
