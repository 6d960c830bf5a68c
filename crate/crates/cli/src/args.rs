//! Command-line arguments and the `key=value` config file that mirrors them.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::sweep::SweepSpec;

#[derive(Parser, Debug)]
#[command(
    name = "ncyukawa",
    version,
    about = "Born scattering off the NC Yukawa potential",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Potential curves V(r)
    Potential(CommonArgs),
    /// Born amplitudes f(θ)
    Amplitude(CommonArgs),
    /// Differential cross sections dσ/dΩ
    Dcs(CommonArgs),
    /// Total cross sections σ
    Tcs(CommonArgs),
    /// Lower bounds on √Θ
    Bound(CommonArgs),
    /// List molecule presets
    Presets(CommonArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Potential(_) => "potential",
            Command::Amplitude(_) => "amplitude",
            Command::Dcs(_) => "dcs",
            Command::Tcs(_) => "tcs",
            Command::Bound(_) => "bound",
            Command::Presets(_) => "presets",
        }
    }

    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Potential(a)
            | Command::Amplitude(a)
            | Command::Dcs(a)
            | Command::Tcs(a)
            | Command::Bound(a)
            | Command::Presets(a) => a,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Quadrature,
    PaperSeries,
    ClosedForm,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Quadrature => "quadrature",
            Method::PaperSeries => "paper_series",
            Method::ClosedForm => "closed_form",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Default)]
pub enum Mode {
    #[default]
    Rel,
    Nonrel,
}

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// key=value file mirroring these flags; flags given on the command line win
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Target preset name(s), comma separated
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["z", "alpha_inv_angstrom"])]
    pub preset: Vec<String>,

    /// Extra preset file (name/Z/alpha_inv_angstrom records)
    #[arg(long)]
    pub presets_file: Option<PathBuf>,

    /// Atomic number of an explicit target
    #[arg(long = "Z", id = "z", requires = "alpha_inv_angstrom")]
    pub z: Option<i64>,

    /// Screening parameter of an explicit target, 1/Å
    #[arg(long, requires = "z")]
    pub alpha_inv_angstrom: Option<f64>,

    /// Use V₀ = +Z·k_C e² (interaction with the atomic electrons)
    #[arg(long)]
    pub electron_target: bool,

    /// Kinetic energy (eV, keV, MeV, GeV suffixes), comma separated
    #[arg(long, value_delimiter = ',')]
    pub energy: Vec<String>,

    /// √Θ in meters, comma separated
    #[arg(long, value_delimiter = ',')]
    pub sqrt_theta_m: Vec<f64>,

    /// Scattering angle(s) in degrees, comma separated
    #[arg(long, value_delimiter = ',')]
    pub angle_deg: Vec<f64>,

    #[arg(long, value_enum)]
    pub mode: Option<Mode>,

    #[arg(long, value_enum)]
    pub method: Option<Method>,

    /// VAR:MIN:MAX:COUNT:{lin|log}
    #[arg(long, value_parser = SweepSpec::parse)]
    pub sweep: Option<SweepSpec>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Detectability threshold on the relative total-cross-section change
    #[arg(long, conflicts_with = "calibrate")]
    pub epsilon: Option<f64>,

    /// Calibrate ε to the H2 / 1 eV / √Θ = 1e-11 m anchor row
    #[arg(long)]
    pub calibrate: bool,
}

const VALUE_KEYS: &[&str] = &[
    "preset",
    "presets-file",
    "Z",
    "alpha-inv-angstrom",
    "energy",
    "sqrt-theta-m",
    "angle-deg",
    "mode",
    "method",
    "sweep",
    "format",
    "out",
    "epsilon",
];
const FLAG_KEYS: &[&str] = &["electron-target", "calibrate"];

/// Turns a config file into command-line tokens.
pub fn config_tokens(text: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("config line {line_no}: expected key=value, got '{line}'"))?;
        let key = key.trim().replace('_', "-");
        let key = if key.eq_ignore_ascii_case("z") {
            "Z".to_string()
        } else {
            key
        };
        let value = value.trim();
        if VALUE_KEYS.contains(&key.as_str()) {
            if value.is_empty() {
                bail!("config line {line_no}: field '{key}' has an empty value");
            }
            out.push(format!("--{key}"));
            out.push(value.to_string());
        } else if FLAG_KEYS.contains(&key.as_str()) {
            match value {
                "true" | "yes" | "1" => out.push(format!("--{key}")),
                "false" | "no" | "0" => {}
                other => bail!("config line {line_no}: field '{key}' expects true/false, got '{other}'"),
            }
        } else {
            bail!("config line {line_no}: unknown field '{key}'");
        }
    }
    Ok(out)
}

fn find_config(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(path) = a.strip_prefix("--config=") {
            return Some(path.to_string());
        }
    }
    None
}

// Options that exclude each other: a command-line choice from one side
// removes the config file's choice from the other.
const EXCLUSIVE: &[(&[&str], &[&str])] = &[
    (&["--preset"], &["--Z", "--alpha-inv-angstrom"]),
    (&["--epsilon"], &["--calibrate"]),
];

fn drop_overridden(tokens: Vec<String>, cli: &[String]) -> Vec<String> {
    let given = |keys: &[&str]| {
        cli.iter()
            .any(|a| keys.iter().any(|k| a == k || a.starts_with(&format!("{k}="))))
    };
    let mut banned: Vec<&str> = Vec::new();
    for (left, right) in EXCLUSIVE {
        if given(left) {
            banned.extend_from_slice(right);
        }
        if given(right) {
            banned.extend_from_slice(left);
        }
    }
    // list options append, so a repeated option would merge with the file
    for tok in &tokens {
        if tok.starts_with("--") && given(&[tok.as_str()]) {
            banned.push(tok.as_str());
        }
    }
    let banned: Vec<String> = banned.into_iter().map(String::from).collect();
    let mut out = Vec::with_capacity(tokens.len());
    let mut it = tokens.into_iter();
    while let Some(tok) = it.next() {
        if banned.contains(&tok) {
            // value-taking options carry their value in the next token
            if tok != "--calibrate" {
                it.next();
            }
            continue;
        }
        out.push(tok);
    }
    out
}

/// Inserts config-file tokens right after the subcommand so that later
/// command-line flags override them.
pub fn expand_config(argv: Vec<String>) -> Result<Vec<String>> {
    let Some(path) = find_config(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading config file {path}"))?;
    let tokens = config_tokens(&text).with_context(|| format!("in config file {path}"))?;
    let sub = argv
        .iter()
        .skip(1)
        .position(|a| !a.starts_with('-'))
        .map(|p| p + 1)
        .ok_or_else(|| anyhow!("--config given without a subcommand"))?;
    let tokens = drop_overridden(tokens, &argv[sub + 1..]);
    let mut out = argv[..=sub].to_vec();
    out.extend(tokens);
    out.extend_from_slice(&argv[sub + 1..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file_tokens() {
        let t = config_tokens("# comment\npreset=H2\nsqrt_theta_m = 0,1e-11\ncalibrate=true\nelectron-target=false\n")
            .unwrap();
        assert_eq!(t, ["--preset", "H2", "--sqrt-theta-m", "0,1e-11", "--calibrate"]);
        let t = config_tokens("z=3\n").unwrap();
        assert_eq!(t, ["--Z", "3"]);
    }

    #[test]
    fn config_errors_name_line_and_field() {
        let e = config_tokens("preset=H2\ncolour=blue\n").unwrap_err().to_string();
        assert!(e.contains("line 2") && e.contains("colour"), "{e}");
        let e = config_tokens("preset\n").unwrap_err().to_string();
        assert!(e.contains("line 1"));
        let e = config_tokens("calibrate=maybe\n").unwrap_err().to_string();
        assert!(e.contains("calibrate"));
    }

    #[test]
    fn flags_override_config() {
        let dir = std::env::temp_dir().join(format!("ncyukawa-args-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        std::fs::write(&path, "preset=ScH\nformat=json\n").unwrap();
        let argv: Vec<String> = ["ncyukawa", "tcs", "--config", path.to_str().unwrap(), "--preset", "H2"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let expanded = expand_config(argv).unwrap();
        let cli = Cli::try_parse_from(expanded).unwrap();
        let a = cli.command.args();
        assert_eq!(a.preset, ["H2"]);
        assert_eq!(a.format, Some(Format::Json));

        std::fs::write(&path, "preset=ScH\ncalibrate=true\n").unwrap();
        let argv: Vec<String> = [
            "ncyukawa",
            "bound",
            "--config",
            path.to_str().unwrap(),
            "--Z",
            "5",
            "--alpha-inv-angstrom",
            "1.0",
            "--epsilon",
            "0.1",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        let cli = Cli::try_parse_from(expand_config(argv).unwrap()).unwrap();
        let a = cli.command.args();
        assert!(a.preset.is_empty() && !a.calibrate);
        assert_eq!(a.z, Some(5));
        std::fs::remove_dir_all(dir).ok();
    }
}
