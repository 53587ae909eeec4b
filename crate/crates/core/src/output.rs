//! CSV and JSON emitters.
//!
//! Curve CSV columns are `label,p,M,pt_dbm,avg_energy,avg_energy_normalized,avg_aoi`.
//! Numbers are written in plain decimal with 9 significant digits so that
//! parsing and re-emitting a file reproduces it byte for byte. JSON carries
//! the same fields as an array of objects, with full `f64` precision.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::analytic::MetricPoint;
use crate::error::{Error, Result};
use crate::simulator::SimResult;
use crate::sweep::TradeoffCurve;
use crate::validate::ValidationReport;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

pub const SIGNIFICANT_DIGITS: usize = 9;

pub const CURVE_HEADER: [&str; 7] = ["label", "p", "M", "pt_dbm", "avg_energy", "avg_energy_normalized", "avg_aoi"];

/// Plain decimal with [`SIGNIFICANT_DIGITS`] significant digits.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return format!("{:.*}", SIGNIFICANT_DIGITS - 1, 0.0);
    }
    // the exponent after rounding decides the number of decimals
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).clamp(0, 340) as usize;
    format!("{x:.decimals$}")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub label: String,
    pub p: Option<f64>,
    #[serde(rename = "M")]
    pub max_tx: Option<u64>,
    pub pt_dbm: Option<f64>,
    pub avg_energy: f64,
    pub avg_energy_normalized: f64,
    pub avg_aoi: f64,
}

impl CurveRow {
    pub fn from_point(label: &str, point: &MetricPoint, normalizer: f64) -> Self {
        CurveRow {
            label: label.to_string(),
            p: Some(point.p),
            max_tx: Some(point.max_tx),
            pt_dbm: point.pt_dbm,
            avg_energy: point.avg_energy,
            avg_energy_normalized: point.avg_energy / normalizer,
            avg_aoi: point.avg_aoi,
        }
    }

    fn record(&self) -> [String; 7] {
        let opt = |v: Option<f64>| v.map(fmt_num).unwrap_or_default();
        [
            self.label.clone(),
            opt(self.p),
            self.max_tx.map(|m| m.to_string()).unwrap_or_default(),
            opt(self.pt_dbm),
            fmt_num(self.avg_energy),
            fmt_num(self.avg_energy_normalized),
            fmt_num(self.avg_aoi),
        ]
    }
}

pub fn curve_rows(curves: &[TradeoffCurve]) -> Vec<CurveRow> {
    curves
        .iter()
        .flat_map(|c| c.points.iter().map(move |pt| CurveRow::from_point(&c.label, pt, c.normalizer)))
        .collect()
}

pub fn write_curve_rows<W: Write>(out: W, rows: &[CurveRow], format: Format) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CURVE_HEADER)?;
            for row in rows {
                w.write_record(row.record())?;
            }
            w.flush()?;
        }
        Format::Json => write_json(out, &rows)?,
    }
    Ok(())
}

/// Emits curves in order, one row per point.
pub fn emit_curves<W: Write>(out: W, curves: &[TradeoffCurve], format: Format) -> Result<()> {
    write_curve_rows(out, &curve_rows(curves), format)
}

pub fn parse_curve_rows<R: Read>(input: R, format: Format) -> Result<Vec<CurveRow>> {
    match format {
        Format::Json => Ok(serde_json::from_reader(input)?),
        Format::Csv => {
            let mut rd = csv::Reader::from_reader(input);
            if rd.headers()?.iter().ne(CURVE_HEADER) {
                return Err(Error::InvalidSpec("unexpected curve CSV header".into()));
            }
            let mut rows = Vec::new();
            for rec in rd.records() {
                let rec = rec?;
                let field = |i: usize| rec.get(i).unwrap_or("");
                rows.push(CurveRow {
                    label: field(0).to_string(),
                    p: parse_opt(field(1))?,
                    max_tx: parse_opt(field(2))?,
                    pt_dbm: parse_opt(field(3))?,
                    avg_energy: parse_req(field(4))?,
                    avg_energy_normalized: parse_req(field(5))?,
                    avg_aoi: parse_req(field(6))?,
                });
            }
            Ok(rows)
        }
    }
}

fn parse_opt<T: std::str::FromStr>(s: &str) -> Result<Option<T>> {
    if s.is_empty() {
        Ok(None)
    } else {
        parse_req(s).map(Some)
    }
}

fn parse_req<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::InvalidSpec(format!("cannot parse CSV field `{s}`")))
}

fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn emit_point<W: Write>(out: W, point: &MetricPoint, format: Format) -> Result<()> {
    write_curve_rows(out, &[CurveRow::from_point("analytic", point, 1.0)], format)
}

const SIM_HEADER: [&str; 9] = [
    "estimator",
    "avg_aoi_est",
    "stderr_aoi",
    "avg_energy_est",
    "stderr_energy",
    "slots",
    "packets_generated",
    "successes",
    "seed",
];

fn sim_record(r: &SimResult) -> Vec<String> {
    vec![
        r.estimator.to_string(),
        fmt_num(r.avg_aoi_est),
        fmt_num(r.stderr_aoi),
        fmt_num(r.avg_energy_est),
        fmt_num(r.stderr_energy),
        r.slots.to_string(),
        r.packets_generated.to_string(),
        r.successes.to_string(),
        r.seed.to_string(),
    ]
}

pub fn emit_sim_result<W: Write>(out: W, result: &SimResult, format: Format) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(SIM_HEADER)?;
            w.write_record(sim_record(result))?;
            w.flush()?;
        }
        Format::Json => write_json(out, result)?,
    }
    Ok(())
}

/// One row per grid point; the global verdict is in the JSON form only.
pub fn emit_validation<W: Write>(out: W, report: &ValidationReport, format: Format) -> Result<()> {
    match format {
        Format::Json => write_json(out, report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let mut header = vec!["p".to_string(), "M".into(), "analytic_aoi".into(), "analytic_energy".into()];
            for est in ["slot", "cycle"] {
                for col in ["aoi", "stderr_aoi", "energy", "stderr_energy", "pass"] {
                    header.push(format!("{est}_{col}"));
                }
            }
            header.push("pass".into());
            w.write_record(&header)?;
            for pt in &report.points {
                let mut rec = vec![
                    fmt_num(pt.p),
                    pt.max_tx.to_string(),
                    fmt_num(pt.analytic_aoi),
                    fmt_num(pt.analytic_energy),
                ];
                for chk in [&pt.slot, &pt.cycle] {
                    rec.push(fmt_num(chk.result.avg_aoi_est));
                    rec.push(fmt_num(chk.result.stderr_aoi));
                    rec.push(fmt_num(chk.result.avg_energy_est));
                    rec.push(fmt_num(chk.result.stderr_energy));
                    rec.push(chk.pass().to_string());
                }
                rec.push(pt.pass.to_string());
                w.write_record(&rec)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(8.04616), "8.04616000");
        assert_eq!(fmt_num(2.1666666666666667), "2.16666667");
        assert_eq!(fmt_num(0.0), "0.00000000");
        assert_eq!(fmt_num(1234.5), "1234.50000");
        assert_eq!(fmt_num(0.000123), "0.000123000000");
        assert_eq!(fmt_num(-2.5), "-2.50000000");
        assert_eq!(fmt_num(9.9999999996), "10.0000000");
        assert_eq!(fmt_num(1e12), "1000000000000");
    }

    #[test]
    fn empty_curve_list_is_header_only() {
        let mut buf = Vec::new();
        emit_curves(&mut buf, &[], Format::Csv).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "label,p,M,pt_dbm,avg_energy,avg_energy_normalized,avg_aoi\n"
        );
    }
}
