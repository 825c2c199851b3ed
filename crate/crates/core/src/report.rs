//! Tabular reports with a provenance footer, rendered as aligned text, CSV
//! or DOT. Text and CSV renderings parse back to the same report.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{precondition, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Dot,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "dot" => Ok(Format::Dot),
            _ => Err(format!("unknown format '{s}'; expected text, csv or dot")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Settings that influence the result: policies, bounds, tolerances.
    pub footer: Vec<(String, String)>,
    pub dot: Option<String>,
}

const SEP: &str = " | ";

fn clean(s: &str) -> String {
    s.replace('\n', " ").replace(SEP, " / ")
}

impl Report {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Report {
        Report { title: title.into(), columns: columns.iter().map(|c| c.to_string()).collect(), ..Report::default() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells.iter().map(|c| clean(c)).collect());
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl ToString) {
        self.footer.push((key.into(), clean(&value.to_string())));
    }

    /// Value of `column` in the first row.
    pub fn get(&self, column: &str) -> Option<&str> {
        let i = self.columns.iter().position(|c| c == column)?;
        self.rows.first().map(|r| r[i].as_str())
    }

    pub fn footer_value(&self, key: &str) -> Option<&str> {
        self.footer.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Text => Ok(self.to_text()),
            Format::Csv => self.to_csv(),
            Format::Dot => match &self.dot {
                Some(d) => Ok(d.clone()),
                None => precondition(format!("no DOT rendering for '{}'", self.title)),
            },
        }
    }

    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| -> String {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            padded.join(SEP).trim_end().to_string()
        };
        let mut out = format!("# {}\n", self.title);
        let _ = writeln!(out, "{}", line(&self.columns));
        for r in &self.rows {
            let _ = writeln!(out, "{}", line(r));
        }
        if !self.footer.is_empty() {
            out.push('\n');
            for (k, v) in &self.footer {
                let _ = writeln!(out, "% {k}: {v}");
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Report> {
        let bad = |line: usize, msg: &str| Error::Parse { line, msg: msg.into() };
        let mut lines = text.lines().enumerate();
        let (_, first) = lines.next().ok_or_else(|| bad(1, "empty report"))?;
        let title = first.strip_prefix("# ").ok_or_else(|| bad(1, "missing title"))?.to_string();
        let (_, header) = lines.next().ok_or_else(|| bad(2, "missing header"))?;
        let split = |s: &str| -> Vec<String> { s.split(SEP).map(|c| c.trim().to_string()).collect() };
        let mut r = Report { title, columns: split(header), ..Report::default() };
        for (i, l) in lines {
            if l.is_empty() {
                continue;
            }
            if let Some(kv) = l.strip_prefix("% ") {
                let (k, v) = kv.split_once(": ").ok_or_else(|| bad(i + 1, "footer needs 'key: value'"))?;
                r.footer.push((k.to_string(), v.to_string()));
            } else {
                let cells = split(l);
                let mut cells = cells;
                cells.resize(r.columns.len(), String::new());
                r.rows.push(cells);
            }
        }
        Ok(r)
    }

    pub fn to_csv(&self) -> Result<String> {
        let io = |e: csv::Error| Error::Structural(e.to_string());
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        let mut out = String::from_utf8(w.into_inner().map_err(|e| Error::Structural(e.to_string()))?).expect("utf8");
        let mut f = csv::Writer::from_writer(Vec::new());
        f.write_record(["key", "value"]).map_err(io)?;
        f.write_record(["title", self.title.as_str()]).map_err(io)?;
        for (k, v) in &self.footer {
            f.write_record([k, v]).map_err(io)?;
        }
        out.push('\n');
        out.push_str(&String::from_utf8(f.into_inner().map_err(|e| Error::Structural(e.to_string()))?).expect("utf8"));
        Ok(out)
    }

    pub fn from_csv(text: &str) -> Result<Report> {
        let io = |e: csv::Error| Error::Parse { line: e.position().map_or(0, |p| p.line() as usize), msg: e.to_string() };
        let (table, footer) = text.split_once("\n\n").ok_or(Error::Parse { line: 0, msg: "missing footer table".into() })?;
        let mut rd = csv::Reader::from_reader(table.as_bytes());
        let columns = rd.headers().map_err(io)?.iter().map(str::to_string).collect();
        let mut r = Report { columns, ..Report::default() };
        for rec in rd.records() {
            r.rows.push(rec.map_err(io)?.iter().map(str::to_string).collect());
        }
        let mut fr = csv::Reader::from_reader(footer.as_bytes());
        for rec in fr.records() {
            let rec = rec.map_err(io)?;
            let (k, v) = (rec[0].to_string(), rec[1].to_string());
            if k == "title" && r.title.is_empty() {
                r.title = v;
            } else {
                r.footer.push((k, v));
            }
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("displacement", &["value", "witness"]);
        r.row(vec!["55/21".into(), "[a, {c} b]".into()]);
        r.row(vec!["3".into(), "a, \"quoted\"".into()]);
        r.note("candidate policy", "sausage-shape");
        r.note("tol", "1/1099511627776");
        r
    }

    #[test]
    fn text_and_csv_round_trip() {
        let r = sample();
        assert_eq!(Report::from_text(&r.to_text()).unwrap(), r);
        assert_eq!(Report::from_csv(&r.to_csv().unwrap()).unwrap(), r);
        assert_eq!(r.get("value"), Some("55/21"));
        assert_eq!(r.footer_value("tol"), Some("1/1099511627776"));
    }

    #[test]
    fn dot_needs_a_rendering() {
        let mut r = sample();
        assert!(r.render(Format::Dot).is_err());
        r.dot = Some("graph G {}\n".into());
        assert_eq!(r.render(Format::Dot).unwrap(), "graph G {}\n");
        assert_eq!("csv".parse::<Format>(), Ok(Format::Csv));
        assert!("json".parse::<Format>().is_err());
    }

    #[test]
    fn separators_inside_cells_are_neutralised() {
        let mut r = Report::new("t", &["a"]);
        r.row(vec!["x | y\nz".into()]);
        assert_eq!(Report::from_text(&r.to_text()).unwrap().rows[0][0], "x / y z");
    }
}
