use crate::eval::EvalRecord;
use crate::{Failure, Format};
use htk_core::verify::CheckReport;
use serde::Serialize;
use std::io::Write;

pub fn line<W: Write>(out: &mut W, text: &str) -> Result<(), Failure> {
    writeln!(out, "{text}")?;
    Ok(())
}

pub fn write_json_lines<W: Write, T: Serialize>(out: &mut W, rows: &[T]) -> Result<(), Failure> {
    for r in rows {
        let text = serde_json::to_string(r).map_err(|e| Failure::Usage(format!("output: {e}")))?;
        line(out, &text)?;
    }
    Ok(())
}

pub fn write_csv<W: Write, T: Serialize>(out: &mut W, rows: &[T]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn joined(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Serialize)]
struct EvalRow<'a> {
    kernel: String,
    group: &'a str,
    z: String,
    sigma: String,
    t: Option<f64>,
    s: Option<f64>,
    y: Option<f64>,
    tau: Option<f64>,
    value: f64,
    error_estimate: f64,
}

pub fn write_records<W: Write>(out: &mut W, format: Format, records: &[EvalRecord]) -> Result<(), Failure> {
    match format {
        Format::Json => write_json_lines(out, records),
        Format::Csv => {
            let rows: Vec<EvalRow> = records
                .iter()
                .map(|r| EvalRow {
                    kernel: serde_json::to_value(r.kernel).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                    group: &r.group,
                    z: joined(&r.z),
                    sigma: joined(&r.sigma),
                    t: r.t,
                    s: r.s,
                    y: r.y,
                    tau: r.tau,
                    value: r.value,
                    error_estimate: r.error_estimate,
                })
                .collect();
            write_csv(out, &rows)
        }
    }
}

#[derive(Serialize)]
struct ReportRow<'a> {
    name: &'a str,
    m: usize,
    k: usize,
    measured_error: f64,
    tolerance: f64,
    passed: bool,
    wall_time: f64,
    parameters: String,
    notes: &'a str,
}

pub fn write_reports<W: Write>(out: &mut W, format: Format, reports: &[CheckReport]) -> Result<(), Failure> {
    match format {
        Format::Json => {
            for r in reports {
                line(out, &r.to_json_line())?;
            }
            Ok(())
        }
        Format::Csv => {
            let rows: Vec<ReportRow> = reports
                .iter()
                .map(|r| ReportRow {
                    name: &r.name,
                    m: r.group.m,
                    k: r.group.k,
                    measured_error: r.measured_error,
                    tolerance: r.tolerance,
                    passed: r.passed,
                    wall_time: r.wall_time,
                    parameters: serde_json::Value::from_iter(r.parameters.clone()).to_string(),
                    notes: &r.notes,
                })
                .collect();
            write_csv(out, &rows)
        }
    }
}
