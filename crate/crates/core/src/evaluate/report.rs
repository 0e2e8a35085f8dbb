//! Report serialization. Every file starts with the reproducibility header.

use std::io::Write;
use std::path::{Path, PathBuf};

use super::experiment::{MetricReport, MetricRow};
use crate::error::{Error, Result};
use crate::provenance::ReportHeader;

fn cell(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.6}")).unwrap_or_default()
}

fn comment_header<W: Write>(out: &mut W, header: &ReportHeader, report: &MetricReport) -> std::io::Result<()> {
    writeln!(out, "# {}", serde_json::to_string(header)?)?;
    writeln!(out, "# {}", serde_json::to_string(&report.evaluation)?)
}

pub fn write_report_csv<W: Write>(report: &MetricReport, header: &ReportHeader, mut out: W) -> std::io::Result<()> {
    comment_header(&mut out, header, report)?;
    writeln!(out, "strategy,group_size,conflicts,sg,harmonic,avg_satisfaction")?;
    for r in &report.rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.strategy,
            r.group_size,
            r.conflicts,
            cell(r.sg),
            cell(r.harmonic),
            cell(r.avg_satisfaction)
        )?;
    }
    Ok(())
}

pub fn write_report_json<W: Write>(report: &MetricReport, header: &ReportHeader, mut out: W) -> std::io::Result<()> {
    let doc = serde_json::json!({ "header": header, "report": report });
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)
}

/// One TSV per metric: a row per group size, a column per strategy.
pub fn write_plot_data(report: &MetricReport, header: &ReportHeader, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    type Metric = fn(&MetricRow) -> Option<f64>;
    let metrics: [(&str, Metric); 3] = [
        ("satisfaction_gain", |r| r.sg),
        ("harmonic", |r| r.harmonic),
        ("avg_satisfaction", |r| r.avg_satisfaction),
    ];
    let mut sizes: Vec<usize> = report.rows.iter().map(|r| r.group_size).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let mut written = Vec::new();
    for (name, get) in metrics {
        let path = dir.join(format!("{name}.tsv"));
        let mut buf = Vec::new();
        comment_header(&mut buf, header, report).map_err(|e| Error::io(&path, e))?;
        let labels: Vec<&str> = report.evaluation.strategies.iter().map(|s| s.label()).collect();
        let mut lines = vec![format!("group_size\t{}", labels.join("\t"))];
        for g in &sizes {
            let cells: Vec<String> = report
                .evaluation
                .strategies
                .iter()
                .map(|s| {
                    let row = report.rows.iter().find(|r| r.strategy == *s && r.group_size == *g);
                    cell(row.and_then(get))
                })
                .collect();
            lines.push(format!("{g}\t{}", cells.join("\t")));
        }
        for l in lines {
            buf.extend_from_slice(l.as_bytes());
            buf.push(b'\n');
        }
        std::fs::write(&path, buf).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
