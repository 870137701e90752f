//! CSV and JSON rendering of reports.
//!
//! Every floating-point number is written with 17 significant digits, which
//! round-trips any `f64` exactly. Column orders are fixed.

use std::fmt::Write as _;
use std::io;

use num_complex::Complex64;
use serde::Serialize;

use crate::corpus::FunctionSummary;
use crate::functionals::LemmaReport;
use crate::harness::{ConvergenceReport, SweepReport};

/// 17 significant digits in scientific notation; non-finite values are
/// written as `nan`, `inf` or `-inf`.
pub fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

/// serde_json formatter that writes floats with 17 significant digits.
struct SeventeenDigits;

impl serde_json::ser::Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_num(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Compact JSON with lossless numbers, terminated by a newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// Reports with a fixed CSV layout.
pub trait ToCsv {
    fn csv_header(&self) -> &'static str;
    fn csv_rows(&self) -> Vec<String>;

    fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(self.csv_header());
        out.push('\n');
        for row in self.csv_rows() {
            out.push_str(&row);
            out.push('\n');
        }
        out
    }
}

impl ToCsv for LemmaReport {
    fn csv_header(&self) -> &'static str {
        "T,M,Q"
    }

    fn csv_rows(&self) -> Vec<String> {
        self.t_grid
            .iter()
            .zip(&self.m_values)
            .zip(&self.q_values)
            .map(|((&t, &m), &q)| format!("{},{},{}", fmt_num(t), fmt_num(m), fmt_opt(q)))
            .collect()
    }
}

impl ToCsv for SweepReport {
    fn csv_header(&self) -> &'static str {
        "x,h,re_D,im_D,budget"
    }

    fn csv_rows(&self) -> Vec<String> {
        let mut rows = Vec::with_capacity(self.x_grid.len() * self.h_seq.len());
        for (i, &x) in self.x_grid.iter().enumerate() {
            for (j, &h) in self.h_seq.iter().enumerate() {
                let d = self.d_matrix[i][j];
                rows.push(format!(
                    "{},{},{},{},{}",
                    fmt_num(x),
                    fmt_num(h),
                    fmt_opt(d.map(|d| d.re)),
                    fmt_opt(d.map(|d| d.im)),
                    fmt_opt(self.error_budget_matrix[i][j]),
                ));
            }
        }
        rows
    }
}

impl ToCsv for ConvergenceReport {
    fn csv_header(&self) -> &'static str {
        "series,param,re,im,budget"
    }

    fn csv_rows(&self) -> Vec<String> {
        let row = |series: &str, param: f64, v: Complex64, budget: f64| {
            format!(
                "{series},{},{},{},{}",
                fmt_num(param),
                fmt_num(v.re),
                fmt_num(v.im),
                fmt_num(budget)
            )
        };
        let mut rows = Vec::new();
        for ((&t, &v), &e) in self.t_seq.iter().zip(&self.i_values).zip(&self.i_errors) {
            rows.push(row("partial", t, v, e));
        }
        for ((&h, &m), &b) in self
            .h_seq
            .iter()
            .zip(&self.mean_values)
            .zip(&self.d_budgets)
        {
            rows.push(row("mean", h, m, b));
        }
        for ((&h, &d), &b) in self.h_seq.iter().zip(&self.d_values).zip(&self.d_budgets) {
            rows.push(row("diff", h, d, b));
        }
        rows
    }
}

impl ToCsv for [FunctionSummary] {
    fn csv_header(&self) -> &'static str {
        "name,support_radius,globally_integrable,condition_class,envelope_from,description"
    }

    fn csv_rows(&self) -> Vec<String> {
        self.iter()
            .map(|s| {
                let mut row = String::new();
                let _ = write!(
                    row,
                    "{},{},{},{},{},\"{}\"",
                    s.name,
                    s.support_radius
                        .map(fmt_num)
                        .unwrap_or_else(|| "inf".into()),
                    s.globally_integrable,
                    s.condition_class,
                    fmt_opt(s.envelope_from),
                    s.description.replace('"', "\"\"")
                );
                row
            })
            .collect()
    }
}
