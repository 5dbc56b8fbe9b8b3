//! Persistence: columnar CSV files with a one-line JSON header, JSON
//! reports, and serde helpers for non-finite floats.

use crate::coder::{CodingProblem, PosteriorChain};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

/// Header, column names and numeric rows of a table file.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    /// Columns whose names start with `prefix`, row by row.
    pub fn columns_with_prefix(&self, prefix: &str) -> Vec<Vec<f64>> {
        let idx: Vec<usize> =
            self.columns.iter().enumerate().filter(|(_, c)| c.starts_with(prefix)).map(|(i, _)| i).collect();
        self.rows.iter().map(|r| idx.iter().map(|&i| r[i]).collect()).collect()
    }

    fn header_usize(&self, key: &str) -> Option<usize> {
        self.header.get(key).and_then(Value::as_u64).map(|v| v as usize)
    }
}

/// SHA-256 of the compact JSON serialization, hex encoded.
pub fn config_hash<T: Serialize>(cfg: &T) -> Result<String> {
    let bytes = serde_json::to_vec(cfg)?;
    let digest = Sha256::digest(&bytes);
    let mut s = String::with_capacity(64);
    for b in digest {
        let _ = write!(s, "{b:02x}");
    }
    Ok(s)
}

/// `Debug` formatting of `f64` is the shortest string that parses back to
/// the same value.
fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

pub fn write_table(path: &Path, header: &Value, columns: &[String], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "{}", serde_json::to_string(header)?)?;
    writeln!(w, "{}", columns.join(","))?;
    for (i, r) in rows.iter().enumerate() {
        if r.len() != columns.len() {
            return Err(Error::Format(format!("row {i} has {} fields, expected {}", r.len(), columns.len())));
        }
        let line: Vec<String> = r.iter().map(|&v| fmt_f64(v)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_table(path: &Path) -> Result<Table> {
    let mut lines = BufReader::new(fs::File::open(path)?).lines();
    let header_line = lines.next().ok_or_else(|| Error::Format("missing JSON header line".into()))??;
    let header: Value = serde_json::from_str(&header_line)?;
    let col_line = lines.next().ok_or_else(|| Error::Format("missing column line".into()))??;
    let columns: Vec<String> = col_line.split(',').map(|s| s.trim().to_string()).collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::Format(format!("data line {}: {e}", i + 1)))?;
        if row.len() != columns.len() {
            return Err(Error::Format(format!(
                "data line {} has {} fields, expected {}",
                i + 1,
                row.len(),
                columns.len()
            )));
        }
        rows.push(row);
    }
    Ok(Table { header, columns, rows })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn indexed(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|j| format!("{prefix}{j}")).collect()
}

/// Problem file: one row per observation with columns `y, h0, …`.
/// `x_true` and any extra metadata go in the header.
pub fn write_problem(path: &Path, problem: &CodingProblem, x_true: Option<&[f64]>, meta: Value) -> Result<()> {
    let (m, n) = (problem.m(), problem.n());
    let header = json!({
        "kind": "problem",
        "m": m,
        "n": n,
        "hyper_a": problem.hyper_a(),
        "hyper_b": problem.hyper_b(),
        "x_true": x_true,
        "meta": meta,
    });
    let mut columns = vec!["y".to_string()];
    columns.extend(indexed("h", n));
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut r = vec![problem.y()[i]];
            r.extend((0..n).map(|j| problem.h()[(i, j)]));
            r
        })
        .collect();
    write_table(path, &header, &columns, &rows)
}

pub fn read_problem(path: &Path) -> Result<(CodingProblem, Option<Vec<f64>>)> {
    let t = read_table(path)?;
    if t.header.get("kind").and_then(Value::as_str) != Some("problem") {
        return Err(Error::Format("not a problem file".into()));
    }
    let y = t.column("y").ok_or_else(|| Error::Format("missing y column".into()))?;
    let hrows = t.columns_with_prefix("h");
    let (m, n) = (y.len(), hrows.first().map_or(0, Vec::len));
    let h = DMatrix::from_fn(m, n, |i, j| hrows[i][j]);
    let a = t.header.get("hyper_a").and_then(Value::as_f64).unwrap_or(CodingProblem::DEFAULT_HYPER);
    let b = t.header.get("hyper_b").and_then(Value::as_f64).unwrap_or(CodingProblem::DEFAULT_HYPER);
    let x_true: Option<Vec<f64>> = match t.header.get("x_true") {
        Some(Value::Null) | None => None,
        Some(v) => Some(serde_json::from_value(v.clone())?),
    };
    Ok((CodingProblem::with_hyper(DVector::from_vec(y), h, a, b)?, x_true))
}

/// Chain file: columns `iter, sigma2, mu, x0, …`.
pub fn write_posterior_chain(path: &Path, chain: &PosteriorChain, meta: Value) -> Result<()> {
    let n = chain.x_samples.first().map_or(0, Vec::len);
    let header = json!({
        "kind": "posterior_chain",
        "n": n,
        "burn_in": chain.burn_in,
        "coef_step_kind": chain.coef_step_kind,
        "mh_moves_per_iter": chain.mh_moves_per_iter,
        "acceptance_rate": chain.acceptance_rate,
        "final_step_size": chain.final_step_size,
        "meta": meta,
    });
    let mut columns = vec!["iter".to_string(), "sigma2".into(), "mu".into()];
    columns.extend(indexed("x", n));
    let rows: Vec<Vec<f64>> = chain
        .x_samples
        .iter()
        .enumerate()
        .map(|(t, x)| {
            let mut r = vec![t as f64, chain.sigma2_samples[t], chain.mu_samples[t]];
            r.extend_from_slice(x);
            r
        })
        .collect();
    write_table(path, &header, &columns, &rows)
}

/// Prior sample file: columns `iter, x0, …`.
pub fn write_samples(path: &Path, samples: &[Vec<f64>], burn_in: usize, meta: Value) -> Result<()> {
    let n = samples.first().map_or(0, Vec::len);
    let header = json!({ "kind": "samples", "n": n, "burn_in": burn_in, "meta": meta });
    let mut columns = vec!["iter".to_string()];
    columns.extend(indexed("x", n));
    let rows: Vec<Vec<f64>> = samples
        .iter()
        .enumerate()
        .map(|(t, x)| {
            let mut r = vec![t as f64];
            r.extend_from_slice(x);
            r
        })
        .collect();
    write_table(path, &header, &columns, &rows)
}

/// Coefficient vectors of any chain or sample file, with its burn-in.
pub fn read_samples(path: &Path) -> Result<(Vec<Vec<f64>>, usize)> {
    let t = read_table(path)?;
    let xs = t.columns_with_prefix("x");
    if xs.first().is_none_or(|r| r.is_empty()) {
        return Err(Error::Format("no x columns".into()));
    }
    let burn_in = t.header_usize("burn_in").unwrap_or(0);
    Ok((xs, burn_in))
}

/// Plot data: first column is the abscissa, the rest are series.
pub fn write_plot_csv(path: &Path, columns: &[String], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "{}", columns.join(","))?;
    for r in rows {
        let line: Vec<String> = r.iter().map(|&v| fmt_f64(v)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()?;
    Ok(())
}

/// `f64` that may be non-finite: numbers stay numbers, `±inf` and `NaN`
/// become the strings `"inf"`, `"-inf"`, `"nan"`.
pub mod extended_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("bad float {other:?}"))),
            },
        }
    }
}

pub mod opt_extended_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => super::extended_f64::serialize(x, s),
            None => s.serialize_none(),
        }
    }

    #[derive(Deserialize)]
    struct Wrap(#[serde(with = "super::extended_f64")] f64);

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}
