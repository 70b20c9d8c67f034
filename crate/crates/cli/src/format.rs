//! Result files: CSV tables and JSON documents with a `meta` header.

use std::collections::BTreeMap;

use clap::ValueEnum;
use qwalk::{Coin, Mode, ModeDistribution};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// `printf("%.12g")`: 12 significant digits, trailing zeros removed,
/// scientific notation for exponents below -4 or from 12 up.
pub fn format_g12(v: f64) -> String {
    if v == 0.0 {
        return "0".to_owned();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if !(-4..12).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{v:.*}", (11 - exp) as usize)).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(f) => format_g12(*f),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Float(f) => json!(f),
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// CSV with a header row, or `{"meta": .., key: [rows]}`.
    pub fn render(&self, key: &str, format: Format, meta: &Value) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv))?;
                }
                w.into_inner().map_err(|e| CliError::Io(e.into_error()))
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        Value::Object(
                            self.columns
                                .iter()
                                .zip(row)
                                .map(|(c, v)| (c.to_string(), v.json()))
                                .collect::<Map<_, _>>(),
                        )
                    })
                    .collect();
                let mut doc = Map::new();
                doc.insert("meta".into(), meta.clone());
                doc.insert(key.into(), Value::Array(rows));
                let mut out = serde_json::to_vec_pretty(&Value::Object(doc))?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }
}

pub const DISTRIBUTION_COLUMNS: [&str; 4] = ["step", "x", "coin", "probability"];

/// Rows ordered by step, position, then `H` before `V`.
pub fn distribution_table(dists: &[ModeDistribution]) -> Table {
    let mut t = Table::new(&DISTRIBUTION_COLUMNS);
    let mut dists: Vec<&ModeDistribution> = dists.iter().collect();
    dists.sort_by_key(|d| d.step());
    for d in dists {
        for (m, p) in d.iter() {
            t.push(vec![
                Cell::Int(d.step() as i64),
                Cell::Int(m.x as i64),
                Cell::Text(m.coin.to_string()),
                Cell::Float(p),
            ]);
        }
    }
    t
}

#[derive(Debug, Deserialize)]
struct DistributionRow {
    step: usize,
    x: i32,
    coin: String,
    probability: f64,
}

#[derive(Debug, Deserialize)]
struct DistributionDoc {
    distribution: Vec<DistributionRow>,
}

/// Reads a distribution file written by [`distribution_table`], one table per
/// step. The format is taken from the leading byte.
pub fn read_distributions(bytes: &[u8]) -> Result<Vec<ModeDistribution>, CliError> {
    let rows: Vec<DistributionRow> =
        if bytes.iter().find(|b| !b.is_ascii_whitespace()) == Some(&b'{') {
            serde_json::from_slice::<DistributionDoc>(bytes)?.distribution
        } else {
            csv::Reader::from_reader(bytes)
                .deserialize()
                .collect::<Result<_, _>>()?
        };
    let mut by_step: BTreeMap<usize, Vec<(Mode, f64)>> = BTreeMap::new();
    for row in rows {
        let coin: Coin = row
            .coin
            .parse()
            .map_err(|_| CliError::Data(format!("bad coin `{}`", row.coin)))?;
        by_step
            .entry(row.step)
            .or_default()
            .push((Mode::new(row.x, coin), row.probability));
    }
    Ok(by_step
        .into_iter()
        .map(|(step, entries)| ModeDistribution::from_entries(step, entries))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g12_matches_printf() {
        let cases = [
            (0.5, "0.5"),
            (1.0, "1"),
            (0.25, "0.25"),
            (1.0 / 3.0, "0.333333333333"),
            (2.0 / 3.0, "0.666666666667"),
            (1e-5, "1e-05"),
            (1.23456789012345e-7, "1.23456789012e-07"),
            (0.0001, "0.0001"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (-0.125, "-0.125"),
            (0.99999999999999, "1"),
            (0.0, "0"),
        ];
        for (v, want) in cases {
            assert_eq!(format_g12(v), want, "{v}");
        }
    }

    #[test]
    fn empty_distribution_is_header_only() {
        let t = distribution_table(&[ModeDistribution::default()]);
        let bytes = t.render("distribution", Format::Csv, &Value::Null).unwrap();
        assert_eq!(bytes, b"step,x,coin,probability\n");
    }

    #[test]
    fn round_trip_both_formats() {
        let d = ModeDistribution::from_entries(
            3,
            [
                (Mode::new(-3, Coin::V), 1.0 / 3.0),
                (Mode::new(1, Coin::H), 1.0 / 7.0),
                (Mode::new(1, Coin::V), 1.0 - 1.0 / 3.0 - 1.0 / 7.0),
            ],
        );
        for format in [Format::Csv, Format::Json] {
            let bytes = distribution_table(std::slice::from_ref(&d))
                .render("distribution", format, &json!({"command": "test"}))
                .unwrap();
            let back = read_distributions(&bytes).unwrap();
            assert_eq!(back.len(), 1);
            assert_eq!(back[0].step(), 3);
            assert!(back[0].max_abs_diff(&d) < 1e-12);
        }
        let csv = distribution_table(&[d])
            .render("distribution", Format::Csv, &Value::Null)
            .unwrap();
        assert_eq!(
            String::from_utf8(csv).unwrap(),
            "step,x,coin,probability\n3,-3,V,0.333333333333\n3,1,H,0.142857142857\n\
             3,1,V,0.52380952381\n"
        );
    }
}
