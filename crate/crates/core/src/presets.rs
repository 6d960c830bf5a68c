//! Molecular target presets and the `key=value` preset file format.
//!
//! A preset file holds one record per target. Records are separated by blank
//! lines; `#` starts a comment. Every record needs `name`, `Z` and
//! `alpha_inv_angstrom`:
//!
//! ```text
//! name=H2
//! Z=2
//! alpha_inv_angstrom=1.9426
//!
//! name=ScH
//! Z=22
//! alpha_inv_angstrom=1.41113
//! ```

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoleculePreset {
    pub name: String,
    #[serde(rename = "Z")]
    pub z: i64,
    pub alpha_inv_angstrom: f64,
}

impl MoleculePreset {
    pub fn new(name: impl Into<String>, z: i64, alpha_inv_angstrom: f64) -> Self {
        Self {
            name: name.into(),
            z,
            alpha_inv_angstrom,
        }
    }

    pub fn h2() -> Self {
        Self::new("H2", 2, 1.9426)
    }

    pub fn sch() -> Self {
        Self::new("ScH", 22, 1.41113)
    }
}

pub fn builtin() -> Vec<MoleculePreset> {
    vec![MoleculePreset::h2(), MoleculePreset::sch()]
}

/// Case-insensitive lookup.
pub fn find<'a>(presets: &'a [MoleculePreset], name: &str) -> Result<&'a MoleculePreset> {
    presets
        .iter()
        .find(|p| p.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownPreset {
            name: name.to_string(),
            available: presets.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join(", "),
        })
}

#[derive(Default)]
struct Partial {
    start_line: usize,
    name: Option<String>,
    z: Option<i64>,
    alpha: Option<f64>,
}

impl Partial {
    fn is_empty(&self) -> bool {
        self.name.is_none() && self.z.is_none() && self.alpha.is_none()
    }

    fn finish(self) -> Result<MoleculePreset> {
        let missing = |field: &str| Error::PresetParse {
            line: self.start_line,
            message: format!("record is missing '{field}'"),
        };
        let name = self.name.clone().ok_or_else(|| missing("name"))?;
        let z = self.z.ok_or_else(|| missing("Z"))?;
        let alpha = self.alpha.ok_or_else(|| missing("alpha_inv_angstrom"))?;
        Ok(MoleculePreset::new(name, z, alpha))
    }
}

pub fn parse(text: &str) -> Result<Vec<MoleculePreset>> {
    let mut out = Vec::new();
    let mut current = Partial::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            if raw.trim().is_empty() && !current.is_empty() {
                out.push(std::mem::take(&mut current).finish()?);
            }
            continue;
        }
        let err = |message: String| Error::PresetParse { line: line_no, message };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, got '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        if current.is_empty() {
            current.start_line = line_no;
        }
        match key {
            "name" => {
                if value.is_empty() {
                    return Err(err("empty name".into()));
                }
                current.name = Some(value.to_string());
            }
            "Z" | "z" => {
                let z: i64 = value.parse().map_err(|_| err(format!("invalid Z '{value}'")))?;
                if z < 1 {
                    return Err(err(format!("Z must be >= 1, got {z}")));
                }
                current.z = Some(z);
            }
            "alpha_inv_angstrom" => {
                let a: f64 = value
                    .parse()
                    .map_err(|_| err(format!("invalid alpha_inv_angstrom '{value}'")))?;
                if !(a >= 0.0) || !a.is_finite() {
                    return Err(err(format!("alpha_inv_angstrom must be finite and >= 0, got {a}")));
                }
                current.alpha = Some(a);
            }
            other => return Err(err(format!("unknown field '{other}'"))),
        }
    }
    if !current.is_empty() {
        out.push(current.finish()?);
    }
    Ok(out)
}

pub fn render(presets: &[MoleculePreset]) -> String {
    let mut s = String::new();
    for (i, p) in presets.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        let _ = writeln!(
            s,
            "name={}\nZ={}\nalpha_inv_angstrom={}",
            p.name, p.z, p.alpha_inv_angstrom
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_round_trips() {
        let text = render(&builtin());
        assert_eq!(parse(&text).unwrap(), builtin());
    }

    #[test]
    fn parses_comments_and_blank_lines() {
        let text = "# targets\n\nname = N2 # nitrogen\nZ=14\nalpha_inv_angstrom=2.5\n\n\n";
        let p = parse(text).unwrap();
        assert_eq!(p, vec![MoleculePreset::new("N2", 14, 2.5)]);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse("name=X\nZ=two\n").unwrap_err();
        assert_eq!(
            err,
            Error::PresetParse {
                line: 2,
                message: "invalid Z 'two'".into()
            }
        );
        let err = parse("name=X\nZ=2\n").unwrap_err();
        assert!(matches!(err, Error::PresetParse { line: 1, .. }));
        assert!(parse("bogus\n").is_err());
        assert!(parse("colour=red\n").is_err());
    }

    #[test]
    fn lookup() {
        let all = builtin();
        assert_eq!(find(&all, "sch").unwrap().z, 22);
        let err = find(&all, "CO").unwrap_err();
        assert!(err.to_string().contains("H2, ScH"));
    }
}
