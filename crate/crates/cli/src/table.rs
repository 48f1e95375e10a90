//! CSV and markdown rendering of convergence records.

use std::fmt::Write as _;

use ifem_core::study::ConvergenceRecord;

use crate::config::OutputFormat;
use crate::error::CliError;

pub const CSV_HEADER: [&str; 9] = [
    "dim",
    "n_cells_per_axis",
    "h",
    "n_dofs",
    "alpha",
    "err_L2_alpha",
    "err_H1semi_alpha",
    "eoc_L2",
    "eoc_H1",
];

/// 13 significant digits, enough to recompute rates to 1e-12.
fn sci(x: f64) -> String {
    format!("{x:.12e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(sci).unwrap_or_default()
}

pub fn emit_table(records: &[ConvergenceRecord], format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Csv => emit_csv(records),
        OutputFormat::Markdown => Ok(emit_markdown(records)),
    }
}

fn emit_csv(records: &[ConvergenceRecord]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.dim.to_string(),
            r.n_cells_per_axis.to_string(),
            sci(r.h),
            r.n_dofs.to_string(),
            r.alpha.to_string(),
            sci(r.err_l2_alpha),
            sci(r.err_h1semi_alpha),
            opt(r.eoc_l2),
            opt(r.eoc_h1),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
}

fn emit_markdown(records: &[ConvergenceRecord]) -> String {
    let mut alphas: Vec<f64> = records.iter().map(|r| r.alpha).collect();
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    let fmt_eoc = |e: Option<f64>| e.map(|v| format!("{v:.2}")).unwrap_or_else(|| "-".into());
    let mut out = String::new();
    for (i, alpha) in alphas.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let mut rows: Vec<&ConvergenceRecord> = records.iter().filter(|r| r.alpha == *alpha).collect();
        rows.sort_by_key(|r| r.n_cells_per_axis);
        let _ = writeln!(out, "### alpha = {alpha}\n");
        out.push_str("| n_c | h | dofs | L2 error | EOC | H1 semi error | EOC |\n");
        out.push_str("|---:|---:|---:|---:|---:|---:|---:|\n");
        for r in rows {
            let _ = writeln!(
                out,
                "| {} | {:.4e} | {} | {:.4e} | {} | {:.4e} | {} |",
                r.n_cells_per_axis,
                r.h,
                r.n_dofs,
                r.err_l2_alpha,
                fmt_eoc(r.eoc_l2),
                r.err_h1semi_alpha,
                fmt_eoc(r.eoc_h1),
            );
        }
    }
    out
}

/// One parsed CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub dim: usize,
    pub n_cells_per_axis: usize,
    pub h: f64,
    pub n_dofs: usize,
    pub alpha: f64,
    pub err_l2_alpha: f64,
    pub err_h1semi_alpha: f64,
    pub eoc_l2: Option<f64>,
    pub eoc_h1: Option<f64>,
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize) -> Result<T, CliError> {
    let raw = rec.get(i).unwrap_or("");
    raw.parse()
        .map_err(|_| CliError::Arguments(format!("column {} holds `{raw}`", CSV_HEADER[i])))
}

fn opt_field(rec: &csv::StringRecord, i: usize) -> Result<Option<f64>, CliError> {
    match rec.get(i) {
        None | Some("") => Ok(None),
        Some(_) => field(rec, i).map(Some),
    }
}

/// Reads a table written by [`emit_table`] in CSV format.
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>, CliError> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    if rdr.headers()?.iter().ne(CSV_HEADER) {
        return Err(CliError::Arguments("unexpected CSV header".into()));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        rows.push(CsvRow {
            dim: field(&rec, 0)?,
            n_cells_per_axis: field(&rec, 1)?,
            h: field(&rec, 2)?,
            n_dofs: field(&rec, 3)?,
            alpha: field(&rec, 4)?,
            err_l2_alpha: field(&rec, 5)?,
            err_h1semi_alpha: field(&rec, 6)?,
            eoc_l2: opt_field(&rec, 7)?,
            eoc_h1: opt_field(&rec, 8)?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(n: usize, alpha: f64, e: f64, eoc: Option<f64>) -> ConvergenceRecord {
        ConvergenceRecord {
            dim: 2,
            n_cells_per_axis: n,
            h: 2f64.sqrt() / n as f64,
            n_dofs: (n + 1) * (n + 1),
            alpha,
            err_l2_alpha: e,
            err_h1semi_alpha: 10.0 * e,
            err_h1_alpha: 10.0 * e,
            eoc_l2: eoc,
            eoc_h1: eoc,
            cg_iterations: 0,
            n_layer_cells: 0,
        }
    }

    #[test]
    fn single_record_csv() {
        let text = emit_table(&[record(4, 0.0, 0.01, None)], OutputFormat::Csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER.join(","));
        assert!(lines[1].ends_with(",,"));
        assert!(lines[1].starts_with("2,4,3.535533905933e-1,25,0,1.000000000000e-2,"));
    }

    #[test]
    fn markdown_groups_by_alpha() {
        let recs = [
            record(4, 0.0, 0.01, None),
            record(4, 0.4, 0.008, None),
            record(8, 0.0, 0.004, Some(1.32)),
            record(8, 0.4, 0.002, Some(2.0)),
        ];
        let md = emit_table(&recs, OutputFormat::Markdown).unwrap();
        assert_eq!(md.matches("### alpha").count(), 2);
        assert_eq!(md.lines().filter(|l| l.starts_with("| 8 ")).count(), 2);
        assert!(md.contains("| 1.32 |"));
    }

    #[test]
    fn parse_rejects_foreign_header() {
        assert!(parse_csv("a,b\n1,2\n").is_err());
    }
}
