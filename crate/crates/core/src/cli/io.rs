use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::RunConfig;
use crate::error::{Error, Result};
use crate::matcore::{CMatrix, Unitary};
use crate::tolerances::Tolerances;
use crate::words::{parse_word, FreeWord, QuasiRep, QuasiRepJson};

pub enum Input {
    QuasiRep(QuasiRep),
    Matrix(Unitary),
}

/// A file holding either a quasi-representation or a single matrix.
pub fn load_input(path: &Path, tol: &Tolerances) -> Result<Input> {
    let text = fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("presentation").is_some() {
        let qj = QuasiRepJson::deserialize(value)?;
        Ok(Input::QuasiRep(qj.resolve(path.parent(), tol)?))
    } else {
        let m = CMatrix::deserialize(value)?;
        Ok(Input::Matrix(Unitary::new(m, tol.unitarity)?))
    }
}

pub fn load_quasirep(path: &Path, tol: &Tolerances) -> Result<QuasiRep> {
    match load_input(path, tol)? {
        Input::QuasiRep(q) => Ok(q),
        Input::Matrix(_) => Err(Error::InvalidArgument(format!(
            "{} holds a matrix, expected a quasi-representation",
            path.display()
        ))),
    }
}

/// Split on `sep` outside of brackets and parentheses.
pub fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(s[start..].trim());
    parts.into_iter().filter(|p| !p.is_empty()).collect()
}

pub fn parse_word_list(s: &str) -> Result<Vec<FreeWord>> {
    split_top_level(s, ',').into_iter().map(parse_word).collect()
}

/// `s1=a,t1=b,s2=1` into a generator → word map.
pub fn parse_map(s: &str) -> Result<BTreeMap<String, FreeWord>> {
    let mut map = BTreeMap::new();
    for entry in split_top_level(s, ',') {
        let (k, v) = entry
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("map entry `{entry}` needs the form gen=word")))?;
        if map.insert(k.trim().to_string(), parse_word(v)?).is_some() {
            return Err(Error::InvalidArgument(format!("generator `{}` mapped twice", k.trim())));
        }
    }
    Ok(map)
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp_unix: Option<u64>,
    config: &'a RunConfig,
    report: &'a T,
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

pub fn write_report<T: Serialize>(config: &RunConfig, report: &T) -> Result<()> {
    let timestamp_unix = if config.deterministic {
        None
    } else {
        SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
    };
    let env = Envelope {
        tool: "qrep",
        version: env!("CARGO_PKG_VERSION"),
        timestamp_unix,
        config,
        report,
    };
    let mut text = serde_json::to_string_pretty(&env)?;
    text.push('\n');
    write_text(config.out.as_deref().map(Path::new), &text)
}

/// Plain data files (quasi-representations) carry no envelope.
pub fn write_data<T: Serialize>(config: &RunConfig, data: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(data)?;
    text.push('\n');
    write_text(config.out.as_deref().map(Path::new), &text)
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidArgument(format!("csv: {other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_level_split() {
        assert_eq!(split_top_level("a, [a,b], (a b)^2,", ','), vec!["a", "[a,b]", "(a b)^2"]);
        let m = parse_map("s1=a,t1=b, s2=1,t2=[a,b]").unwrap();
        assert_eq!(m["t2"].to_string(), "a b a^-1 b^-1");
        assert!(m["s2"].is_empty());
        assert!(parse_map("s1=a,s1=b").is_err());
        assert!(parse_map("s1").is_err());
    }
}
