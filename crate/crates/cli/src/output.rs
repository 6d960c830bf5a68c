//! Tables, their CSV/JSON renderings, and atomic file output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{json, Map, Value};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl Cell {
    pub fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(_) => Value::Null,
            Cell::Int(n) => json!(n),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
        }
    }
}

/// 12 significant digits in scientific notation.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.11e}")
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub provenance: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("# ");
        let prov: Vec<String> = self.provenance.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push_str(&prov.join("; "));
        out.push('\n');
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let provenance: Map<String, Value> = self
            .provenance
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let doc = json!({
            "provenance": provenance,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json values serialize");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

fn tmp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".tmp");
    path.with_file_name(name)
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = tmp_path(path);
    let result = fs::File::create(&tmp)
        .and_then(|mut f| {
            f.write_all(contents.as_bytes())?;
            f.sync_all()
        })
        .and_then(|_| fs::rename(&tmp, path));
    if result.is_err() {
        fs::remove_file(&tmp).ok();
    }
    result.with_context(|| format!("writing {}", path.display()))
}

/// Sends rendered output to `out`, or to stdout when no path is given.
pub fn emit(contents: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, contents),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        Table {
            provenance: vec![("command".into(), "tcs".into()), ("mode".into(), "rel".into())],
            columns: vec![
                "energy_eV".into(),
                "tcs_A2".into(),
                "series_valid".into(),
                "status".into(),
            ],
            rows: vec![
                vec![
                    Cell::Num(1.0),
                    Cell::Num(39.445028429558),
                    Cell::Bool(true),
                    Cell::Text("ok".into()),
                ],
                vec![
                    Cell::Num(10.0),
                    Cell::Num(f64::NAN),
                    Cell::Bool(false),
                    Cell::Text("divergent".into()),
                ],
            ],
        }
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(39.445028429558), "3.94450284296e1");
        assert_eq!(fmt_num(-1e-11), "-1.00000000000e-11");
        assert_eq!(fmt_num(0.0), "0.00000000000e0");
        assert_eq!(fmt_num(f64::NAN), "nan");
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# command=tcs; mode=rel");
        assert_eq!(lines[1], "energy_eV,tcs_A2,series_valid,status");
        assert_eq!(lines[2], "1.00000000000e0,3.94450284296e1,true,ok");
        assert_eq!(lines[3], "1.00000000000e1,nan,false,divergent");
    }

    #[test]
    fn json_layout() {
        let v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(v["columns"][1], "tcs_A2");
        assert_eq!(v["rows"][0][1].as_f64().unwrap(), 39.445028429558);
        assert!(v["rows"][1][1].is_null());
        assert_eq!(v["provenance"]["mode"], "rel");
    }

    #[test]
    fn atomic_write_leaves_no_temp_file() {
        let dir = std::env::temp_dir().join(format!("ncyukawa-out-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.csv");
        write_atomic(&path, "a\n").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "a\n");
        assert!(!tmp_path(&path).exists());
        assert!(write_atomic(&dir.join("missing/t.csv"), "a\n").is_err());
        fs::remove_dir_all(dir).ok();
    }
}
