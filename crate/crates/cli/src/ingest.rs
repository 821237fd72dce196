//! Loading one numeric column from CSV or whitespace-separated text.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};

/// Column by header name or 1-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    Name(String),
    Index(usize),
}

impl Default for ColumnSelector {
    fn default() -> Self {
        ColumnSelector::Index(1)
    }
}

impl FromStr for ColumnSelector {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err("empty column selector".into());
        }
        match s.parse::<usize>() {
            Ok(0) => Err("column indices are 1-based".into()),
            Ok(i) => Ok(ColumnSelector::Index(i)),
            Err(_) => Ok(ColumnSelector::Name(s.to_string())),
        }
    }
}

impl fmt::Display for ColumnSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnSelector::Name(n) => write!(f, "'{n}'"),
            ColumnSelector::Index(i) => write!(f, "{i}"),
        }
    }
}

pub fn ingest(path: &Path, column: &ColumnSelector) -> Result<Vec<f64>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_text(&text, column).with_context(|| format!("in {}", path.display()))
}

/// Text containing a comma is read as CSV; anything else is split on
/// whitespace. A first row with any non-numeric field is a header.
pub fn parse_text(text: &str, column: &ColumnSelector) -> Result<Vec<f64>> {
    let rows = if text.contains(',') {
        csv_rows(text)?
    } else {
        whitespace_rows(text)
    };
    let Some((first_line, first)) = rows.first() else {
        bail!("no data rows");
    };
    let has_header = first.iter().any(|f| parse_number(f).is_none());
    let idx = match column {
        ColumnSelector::Index(i) => {
            if *i > first.len() {
                bail!(
                    "line {first_line}: column {i} requested but the row has {} field(s)",
                    first.len()
                );
            }
            i - 1
        }
        ColumnSelector::Name(name) => {
            if !has_header {
                bail!("column '{name}' requested by name but the input has no header row");
            }
            first
                .iter()
                .position(|h| h.trim() == name)
                .with_context(|| {
                    format!("no column named '{name}' (header: {})", first.join(", "))
                })?
        }
    };
    let label = if has_header {
        format!("'{}'", first[idx].trim())
    } else {
        format!("{}", idx + 1)
    };

    let data = if has_header { &rows[1..] } else { &rows[..] };
    let mut out = Vec::with_capacity(data.len());
    for (line, fields) in data {
        let Some(raw) = fields.get(idx) else {
            bail!("line {line}: missing column {label}");
        };
        let raw = raw.trim();
        if raw.is_empty() {
            bail!("line {line}: empty value in column {label}");
        }
        match parse_number(raw) {
            Some(v) if v.is_finite() => out.push(v),
            Some(_) => bail!("line {line}: non-finite value '{raw}' in column {label}"),
            None => bail!("line {line}: '{raw}' in column {label} is not a number"),
        }
    }
    if out.is_empty() {
        bail!("no usable rows in column {label}");
    }
    Ok(out)
}

fn parse_number(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok()
}

type Rows = Vec<(u64, Vec<String>)>;

fn csv_rows(text: &str) -> Result<Rows> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.context("malformed CSV")?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        rows.push((line, record.iter().map(str::to_string).collect()));
    }
    Ok(rows)
}

fn whitespace_rows(text: &str) -> Rows {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            (
                i as u64 + 1,
                l.split_whitespace().map(str::to_string).collect(),
            )
        })
        .collect()
}
