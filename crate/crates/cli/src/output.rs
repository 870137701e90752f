//! Rendering of command results as CSV, JSON or an aligned table.

use lebesgue_core::corpus::FunctionSummary;
use lebesgue_core::functionals::{LemmaReport, LemmaVerdict};
use lebesgue_core::harness::{ConvergenceReport, SweepReport, Verdict};
use lebesgue_core::quad::QuadResult;
use lebesgue_core::report::{fmt_num, to_json, ToCsv};
use lebesgue_core::summability::{Difference, MeanResult};
use serde::Serialize;

use crate::config::{Check, Format};

#[derive(Debug, Serialize)]
pub struct PartialOutput {
    pub function: String,
    pub x: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub result: QuadResult,
}

#[derive(Debug, Serialize)]
pub struct MeanOutput {
    pub function: String,
    pub x: f64,
    pub h: f64,
    pub result: MeanResult,
}

#[derive(Debug, Serialize)]
pub struct DiffOutput {
    pub function: String,
    pub x: f64,
    pub h: f64,
    pub result: Difference,
}

pub enum Report {
    Corpus(Vec<FunctionSummary>),
    Conditions(LemmaReport),
    Lemma(Check, LemmaReport),
    Partial(PartialOutput),
    Mean(MeanOutput),
    Diff(DiffOutput),
    Sweep(SweepReport),
    Convergence(ConvergenceReport),
}

impl Report {
    /// False when a verdict-bearing report failed its check.
    pub fn passed(&self) -> bool {
        match self {
            Report::Lemma(check, r) => {
                let verdict = match check {
                    Check::Lemma2 => r.lemma2_verdict,
                    _ => r.lemma3_verdict,
                };
                verdict != LemmaVerdict::Fail
            }
            Report::Sweep(r) => r.verdict == Verdict::Converging,
            Report::Convergence(r) => r.verdict == Verdict::Converging,
            _ => true,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
            Format::Table => self.table(),
        }
    }

    fn csv(&self) -> String {
        match self {
            Report::Corpus(list) => list.as_slice().to_csv(),
            Report::Conditions(r) | Report::Lemma(_, r) => r.to_csv(),
            Report::Partial(p) => format!(
                "x,T,re,im,error\n{},{},{},{},{}\n",
                fmt_num(p.x),
                fmt_num(p.t),
                fmt_num(p.result.value.re),
                fmt_num(p.result.value.im),
                fmt_num(p.result.abs_error_estimate)
            ),
            Report::Mean(m) => format!(
                "x,h,T_trunc,re,im,budget\n{},{},{},{},{},{}\n",
                fmt_num(m.x),
                fmt_num(m.h),
                fmt_num(m.result.truncation_t),
                fmt_num(m.result.value.re),
                fmt_num(m.result.value.im),
                fmt_num(m.result.error_budget())
            ),
            Report::Diff(d) => format!(
                "x,h,re_D,im_D,budget\n{},{},{},{},{}\n",
                fmt_num(d.x),
                fmt_num(d.h),
                fmt_num(d.result.value.re),
                fmt_num(d.result.value.im),
                fmt_num(d.result.budget)
            ),
            Report::Sweep(r) => r.to_csv(),
            Report::Convergence(r) => r.to_csv(),
        }
    }

    fn json(&self) -> String {
        let out = match self {
            Report::Corpus(list) => to_json(list),
            Report::Conditions(r) | Report::Lemma(_, r) => to_json(r),
            Report::Partial(p) => to_json(p),
            Report::Mean(m) => to_json(m),
            Report::Diff(d) => to_json(d),
            Report::Sweep(r) => to_json(r),
            Report::Convergence(r) => to_json(r),
        };
        out.expect("reports serialize")
    }

    fn table(&self) -> String {
        match self {
            Report::Corpus(list) => {
                let rows = list
                    .iter()
                    .map(|s| {
                        vec![
                            s.name.clone(),
                            s.support_radius.map_or("inf".into(), short),
                            s.globally_integrable.to_string(),
                            s.condition_class.to_string(),
                            s.description.clone(),
                        ]
                    })
                    .collect();
                aligned(&["name", "support", "L1", "class", "description"], rows)
            }
            Report::Conditions(r) => {
                let head = format!(
                    "function: {}\nclassification: {}\nB_hat: {}\nT1: {}\n\n",
                    r.fn_name,
                    r.classification,
                    short(r.b_hat),
                    short(r.t1)
                );
                head + &csv_as_table(&r.to_csv())
            }
            Report::Lemma(check, r) => {
                let verdict = match check {
                    Check::Lemma2 => r.lemma2_verdict,
                    _ => r.lemma3_verdict,
                };
                let mut head = format!(
                    "function: {}\nclassification: {}\nverdict: {}\nB_hat: {}\n",
                    r.fn_name,
                    r.classification,
                    lemma_verdict(verdict),
                    short(r.b_hat)
                );
                if let Some(ratio) = r.bound_ratio {
                    head += &format!("max Q/(4 B_hat): {}\n", short(ratio));
                }
                head + "\n" + &csv_as_table(&r.to_csv())
            }
            Report::Partial(_) | Report::Mean(_) | Report::Diff(_) => csv_as_table(&self.csv()),
            Report::Sweep(r) => {
                let mut head = format!(
                    "function: {}\nverdict: {}\nwindow: [{}, {}] with {} points\n",
                    r.fn_name,
                    r.verdict.as_str(),
                    short(r.window.0),
                    short(r.window.1),
                    r.x_grid.len()
                );
                for note in &r.notes {
                    head += &format!("note: {note}\n");
                }
                let rows = r
                    .h_seq
                    .iter()
                    .zip(&r.sup_abs_d)
                    .zip(&r.sup_budget)
                    .map(|((&h, &d), &b)| vec![short(h), short(d), short(b)])
                    .collect();
                head + "\n" + &aligned(&["h", "sup|D|", "budget"], rows)
            }
            Report::Convergence(r) => {
                let mut head = format!(
                    "function: {}\nx0: {}\nverdict: {}\nell_hat: {} {:+e}i\nstability: {}\n",
                    r.fn_name,
                    short(r.x0),
                    r.verdict.as_str(),
                    short(r.ell_hat.re),
                    r.ell_hat.im,
                    short(r.stability)
                );
                for note in &r.notes {
                    head += &format!("note: {note}\n");
                }
                head + "\n" + &csv_as_table(&r.to_csv())
            }
        }
    }
}

fn lemma_verdict(v: LemmaVerdict) -> &'static str {
    match v {
        LemmaVerdict::Pass => "pass",
        LemmaVerdict::Fail => "fail",
        LemmaVerdict::NotApplicable => "not-applicable",
    }
}

fn short(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.6e}")
    } else {
        fmt_num(v)
    }
}

/// Re-render simple CSV (no quoted fields) with shortened numbers.
fn csv_as_table(csv: &str) -> String {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
    let rows = lines
        .map(|line| {
            line.split(',')
                .map(|cell| cell.parse::<f64>().map_or_else(|_| cell.to_string(), short))
                .collect()
        })
        .collect();
    aligned(&header, rows)
}

fn aligned(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    out += &line(
        widths
            .iter()
            .map(|&w| "-".repeat(w))
            .collect::<Vec<_>>()
            .iter()
            .map(String::as_str)
            .collect(),
    );
    for row in &rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_columns_line_up() {
        let t = aligned(&["a", "long"], vec![vec!["xyz".into(), "1".into()]]);
        assert_eq!(t, "a    long\n---  ----\nxyz  1\n");
    }

    #[test]
    fn csv_numbers_are_shortened_in_tables() {
        let t = csv_as_table("x,label\n1.0000000000000000e0,a\n");
        assert!(t.contains("1.000000e0"));
        assert!(t.contains(" a"));
    }
}
