//! Serialization of result tables.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::availability::Strategy;
use crate::search::Mode;

use super::harness::{ResultRow, ResultTable};

pub const COLUMNS: [&str; 10] = [
    "group",
    "n",
    "mode",
    "strategy",
    "budget",
    "mean_links",
    "solved",
    "blockages",
    "filtered",
    "elapsed",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Text,
}

impl FromStr for Format {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(ReportError::UnknownFormat(s.to_string())),
        }
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("unknown format `{0}` (expected csv, json or text)")]
    UnknownFormat(String),
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("json output failed: {0}")]
    Json(#[from] serde_json::Error),
}

pub fn emit(table: &ResultTable, format: Format) -> Result<String, ReportError> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            w.write_record(COLUMNS)?;
            for row in &table.rows {
                w.serialize(row)?;
            }
            let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        Format::Json => Ok(serde_json::to_string_pretty(&table.rows)? + "\n"),
        Format::Text => Ok(text(&table.rows)),
    }
}

fn distinct<T: PartialEq + Clone>(items: impl Iterator<Item = T>) -> Vec<T> {
    let mut out = Vec::new();
    for x in items {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

const CELL: usize = 12;

fn header(out: &mut String, lead: &str, columns: &[(Strategy, Mode)], with_n: bool) {
    let lead_width = if with_n { 16 } else { 10 };
    let _ = write!(out, "{:lead_width$}", "");
    let strategies = distinct(columns.iter().map(|c| c.0));
    for s in &strategies {
        let span = columns.iter().filter(|c| c.0 == *s).count() * CELL;
        let _ = write!(out, "{:<span$}", format!("| {}", s.name()));
    }
    out.push('\n');
    if with_n {
        let _ = write!(out, "{lead:<10}{:>5} ", "n");
    } else {
        let _ = write!(out, "{lead:<10}");
    }
    for (_, m) in columns {
        let _ = write!(out, "{:<CELL$}", format!("| {}", m.name()));
    }
    out.push('\n');
}

fn text(rows: &[ResultRow]) -> String {
    let mut out = String::new();
    let budgets = distinct(rows.iter().map(|r| r.budget.clone()));
    let groups = distinct(rows.iter().map(|r| (r.group.clone(), r.n)));
    let columns = distinct(rows.iter().map(|r| (r.strategy, r.mode)));
    let cell = |b: &str, g: &str, c: &(Strategy, Mode)| {
        rows.iter()
            .find(|r| r.budget == b && r.group == g && r.strategy == c.0 && r.mode == c.1)
    };
    let total = |b: &str, c: &(Strategy, Mode)| {
        let means: Vec<f64> = groups
            .iter()
            .filter_map(|(g, _)| cell(b, g, c).map(|r| r.mean_links))
            .collect();
        if means.is_empty() {
            0.0
        } else {
            means.iter().sum::<f64>() / means.len() as f64
        }
    };

    for b in &budgets {
        let _ = writeln!(out, "Assigned links, budget {b}");
        header(&mut out, "Instances", &columns, true);
        for (g, n) in &groups {
            let _ = write!(out, "{g:<10}{n:>5} ");
            for c in &columns {
                let text = cell(b, g, c).map_or("-".to_string(), |r| format!("{:.2} ({})", r.mean_links, r.solved));
                let _ = write!(out, "| {text:<w$}", w = CELL - 2);
            }
            out.push('\n');
        }
        let _ = write!(out, "{:<16}", "Total");
        for c in &columns {
            let _ = write!(out, "| {:<w$}", format!("{:.2}", total(b, c)), w = CELL - 2);
        }
        out.push_str("\n\n");

        let _ = writeln!(out, "Filtered values, budget {b}");
        header(&mut out, "Instances", &columns, true);
        for (g, n) in &groups {
            let _ = write!(out, "{g:<10}{n:>5} ");
            for c in &columns {
                let text = cell(b, g, c).map_or("-".to_string(), |r| format!("{:.1}", r.filtered));
                let _ = write!(out, "| {text:<w$}", w = CELL - 2);
            }
            out.push('\n');
        }
        out.push('\n');
    }

    out.push_str("Global means\n");
    header(&mut out, "Time", &columns, false);
    for b in &budgets {
        let _ = write!(out, "{b:<10}");
        for c in &columns {
            let _ = write!(out, "| {:<w$}", format!("{:.2}", total(b, c)), w = CELL - 2);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(group: &str, mode: Mode, strategy: Strategy, mean: f64) -> ResultRow {
        ResultRow {
            group: group.into(),
            n: 50,
            mode,
            strategy,
            budget: "5s".into(),
            mean_links: mean,
            solved: 1,
            blockages: 2.0,
            filtered: 0.0,
            elapsed: 0.25,
        }
    }

    #[test]
    fn empty_csv_is_header_only() {
        let s = emit(&ResultTable::default(), Format::Csv).unwrap();
        assert_eq!(s, COLUMNS.join(",") + "\n");
    }

    #[test]
    fn json_has_the_ten_keys() {
        let t = ResultTable {
            rows: vec![row("g10", Mode::Filtering, Strategy::Sync, 47.2)],
            runs: vec![],
        };
        let v: serde_json::Value = serde_json::from_str(&emit(&t, Format::Json).unwrap()).unwrap();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 1);
        let obj = arr[0].as_object().unwrap();
        assert_eq!(obj.len(), 10);
        for k in COLUMNS {
            assert!(obj.contains_key(k), "{k}");
        }
        assert_eq!(obj["mode"], "av-filt");
        assert_eq!(obj["strategy"], "sync");
    }

    #[test]
    fn csv_column_order() {
        let t = ResultTable {
            rows: vec![row("g10", Mode::Selection, Strategy::Async, 47.2)],
            runs: vec![],
        };
        let s = emit(&t, Format::Csv).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[1], "g10,50,av-sel,async,5s,47.2,1,2.0,0.0,0.25");
    }

    #[test]
    fn unknown_format() {
        assert!(matches!("xml".parse::<Format>(), Err(ReportError::UnknownFormat(_))));
    }

    #[test]
    fn total_is_mean_of_group_means() {
        let t = ResultTable {
            rows: vec![
                row("g10", Mode::Selection, Strategy::Async, 40.0),
                row("g20", Mode::Selection, Strategy::Async, 60.0),
            ],
            runs: vec![],
        };
        let s = emit(&t, Format::Text).unwrap();
        let total = s.lines().find(|l| l.starts_with("Total")).unwrap();
        assert!(total.contains("50.00"), "{total}");
    }
}
