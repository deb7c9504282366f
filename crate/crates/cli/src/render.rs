use std::io::Write;

use anyhow::Result;
use serde_json::json;
use specirr::conjecture_lab::{format_significant, DiagnosticKind, GraphRecord, CSV_HEADER};
use specirr::graph::Graph;
use specirr::s2_bounds::{
    clique_number, cone_s2_bound, cone_s2_parametric, harmonic_s2, hofmeister_lower, wilf_s2,
    S2Inputs,
};
use specirr::spectral::{perron, spectral_radius, SolverConfig};
use specirr::ScanSummary;

use crate::{Failure, Format};

/// `ε` and the residual bound count as equal within this.
const SHARP_TOLERANCE: f64 = 1e-8;

fn line(out: &mut impl Write, label: &str, value: impl std::fmt::Display) -> std::io::Result<()> {
    writeln!(out, "{label:<34}{value}")
}

/// Six decimals, without the sign of a value that rounds to zero.
fn fixed(x: f64) -> String {
    let text = format!("{x:.6}");
    match text.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_owned(),
        _ => text,
    }
}

fn inputs_text(inputs: &S2Inputs) -> String {
    match *inputs {
        S2Inputs::Wilf { omega, rho } => format!("ω = {omega}, ρ = {rho:.6}"),
        S2Inputs::Harmonic { zagreb, m } => format!("Z = {zagreb}, m = {m}"),
        S2Inputs::Cone { rho, rho_h, n } => format!("ρ = {rho:.6}, ρ_H = {rho_h:.6}, n = {n}"),
        S2Inputs::ConeParametric { a, b, n } => format!("a = {a:.6}, b = {b:.6}, n = {n}"),
        S2Inputs::Trivial => "no route applies".into(),
    }
}

pub fn record(out: &mut impl Write, rec: &GraphRecord, format: Format) -> Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(rec)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_HEADER)?;
            w.write_record(rec.csv_row())?;
            w.flush()?;
        }
        Format::Human => human_record(out, rec)?,
    }
    Ok(())
}

fn human_record(out: &mut impl Write, rec: &GraphRecord) -> std::io::Result<()> {
    let r = &rec.report;
    let sharp = (r.epsilon - r.main_bound).abs() <= SHARP_TOLERANCE * r.main_bound.max(1.0);
    line(out, "graph6", &rec.graph6)?;
    line(out, "vertices, edges", format!("n = {}, m = {}", r.n, r.m))?;
    line(out, "average degree 2m/n", fixed(r.avg_degree))?;
    line(out, "spectral radius ρ", fixed(r.rho))?;
    line(out, "irregularity ε = ρ − 2m/n", fixed(r.epsilon))?;
    line(out, "degree deviation s", fixed(r.s_moment))?;
    line(out, "degree variance var", fixed(r.variance))?;
    line(out, "√var", fixed(r.sqrt_variance))?;
    line(out, "Perron mass S²", fixed(r.s_squared))?;
    line(
        out,
        "Nikiforov lower var/(2√(2m))",
        fixed(r.nikiforov_lower),
    )?;
    line(out, "Nikiforov upper √s", fixed(r.nikiforov_upper))?;
    let main = format!(
        "{}{}",
        fixed(r.main_bound),
        if sharp { "  sharp" } else { "" }
    );
    line(out, "main bound √var·√(n/S² − 1)", main)?;
    line(
        out,
        "main bound via Rayleigh residual",
        fixed(r.main_bound_rayleigh),
    )?;
    line(out, "Popoviciu (Δ − δ)²/4 ≥ var", fixed(r.popoviciu))?;
    match rec.clique_number {
        Some(w) => line(out, "clique number ω", w)?,
        None => line(out, "clique number ω", "not computed")?,
    }
    let best = &rec.s2_estimate;
    line(
        out,
        "best S² lower bound",
        format!(
            "{:.6} ({}; {})",
            best.value,
            best.method.label(),
            inputs_text(&best.inputs)
        ),
    )?;
    line(out, "S² − n/2", fixed(rec.conjecture_margin))?;
    line(out, "tightness ε / main bound", fixed(rec.tightness))?;
    if rec.violations.is_empty() {
        line(out, "violated bounds", "none")?;
    } else {
        for v in &rec.violations {
            line(
                out,
                "VIOLATED",
                format!("{}: {} vs {}", v.inequality.label(), v.lhs, v.rhs),
            )?;
        }
    }
    Ok(())
}

struct BoundRow {
    method: &'static str,
    value: f64,
    inputs: String,
}

/// The S² comparison table: each bound instantiated with true spectral
/// radii and with the degree-only substitutes, against the true value.
pub fn bounds(
    out: &mut impl Write,
    g: &Graph,
    cfg: &SolverConfig,
    format: Format,
) -> Result<(), Failure> {
    let sr = perron(g, cfg)?;
    let hof = hofmeister_lower(g);
    let mut rows = Vec::new();
    let mut push = |method, est: specirr::S2Estimate| {
        rows.push(BoundRow {
            method,
            value: est.value,
            inputs: inputs_text(&est.inputs),
        })
    };
    if let Ok(omega) = clique_number(g) {
        if omega >= 2 {
            push("wilf (true ρ)", wilf_s2(omega, sr.rho)?);
            push("wilf (Hofmeister ρ)", wilf_s2(omega, hof)?);
        }
    }
    if let Ok(est) = harmonic_s2(g) {
        push("harmonic exact", est);
    }
    if let (Some(&apex), true) = (g.universal_vertices().first(), g.n() >= 2) {
        let h = g.delete_vertex(apex)?;
        let rho_h = spectral_radius(&h, cfg)?;
        push("cone (true ρ, ρ_H)", cone_s2_bound(sr.rho, rho_h, g.n())?);
        if let Ok(est) = cone_s2_parametric(hof, h.max_degree() as f64, g.n()) {
            push("cone (a = Hofmeister, b = Δ(H))", est);
        }
    }
    let s2 = sr.s_squared();
    match format {
        Format::Human => {
            writeln!(out, "{:<34}{:>12}  inputs", "method", "S² ≥")?;
            for r in &rows {
                let mark = if r.value <= s2 + 1e-8 {
                    ""
                } else {
                    "  EXCEEDS TRUE S²"
                };
                writeln!(out, "{:<34}{:>12.6}  {}{mark}", r.method, r.value, r.inputs)?;
            }
            writeln!(
                out,
                "{:<34}{:>12.6}  ρ = {:.6}, Hofmeister ρ ≥ {hof:.6}",
                "true S²", s2, sr.rho
            )?;
        }
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|r| json!({ "method": r.method, "value": r.value, "inputs": r.inputs }))
                .collect();
            let doc = json!({
                "graph6": g.to_graph6(),
                "rho": sr.rho,
                "hofmeister": hof,
                "s_squared": s2,
                "bounds": rows,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["method", "value", "inputs"])?;
            for r in &rows {
                w.write_record([r.method, &format_significant(r.value), &r.inputs])?;
            }
            w.write_record(["true S²", &format_significant(s2), ""])?;
            w.flush()?;
        }
    }
    Ok(())
}

pub fn summary(out: &mut impl Write, s: &ScanSummary, format: Format) -> Result<()> {
    if format == Format::Json {
        writeln!(out, "{}", s.to_json())?;
        return Ok(());
    }
    let extremum = |e: &Option<specirr::conjecture_lab::Extremum>| match e {
        Some(e) => format!("{:.6} ({})", e.value, e.graph6),
        None => "n/a".into(),
    };
    line(out, "graphs analyzed", s.total)?;
    line(out, "skipped (disconnected)", s.skipped_disconnected)?;
    line(out, "diagnostics", s.diagnostics.len())?;
    line(out, "bound violations", s.violations.len())?;
    line(
        out,
        "graphs with ε > √var",
        s.conjecture_counterexamples.len(),
    )?;
    line(out, "graphs with S² < n/2", s.s2_below_half_order.len())?;
    line(out, "min S² − n/2", extremum(&s.min_conjecture_margin))?;
    line(out, "min tightness", extremum(&s.min_tightness))?;
    line(out, "max tightness", extremum(&s.max_tightness))?;
    let hist: Vec<String> = s.tightness_histogram.iter().map(u64::to_string).collect();
    line(out, "tightness histogram (20 bins)", hist.join(" "))?;
    for v in &s.violations {
        line(
            out,
            "VIOLATED",
            format!(
                "{} {}: {} vs {}",
                v.graph6,
                v.inequality.label(),
                v.lhs,
                v.rhs
            ),
        )?;
    }
    Ok(())
}

/// Writes scan diagnostics to standard error.
pub fn diagnostics(s: &ScanSummary) {
    for d in &s.diagnostics {
        let kind = match d.kind {
            DiagnosticKind::Parse => "parse error",
            DiagnosticKind::Disconnected => "disconnected",
            DiagnosticKind::Solver => "solver failure",
        };
        let at = d.line.map(|l| format!("line {l}: ")).unwrap_or_default();
        let g6 = d
            .graph6
            .as_deref()
            .map(|g| format!(" [{g}]"))
            .unwrap_or_default();
        eprintln!("specirr: {at}{kind}{g6}: {}", d.message);
    }
}
