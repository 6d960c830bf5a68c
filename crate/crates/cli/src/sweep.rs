use std::fmt;

use anyhow::{anyhow, bail, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    /// radius, Å
    R,
    /// scattering angle, degrees
    Theta,
    /// kinetic energy, eV
    Energy,
    /// √Θ, meters
    ThetaNc,
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepVar::R => "r",
            SweepVar::Theta => "theta",
            SweepVar::Energy => "energy",
            SweepVar::ThetaNc => "theta_nc",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVar,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

/// Parses an energy like `1eV`, `2.5 keV`, `100GeV` or a bare number (eV).
pub fn parse_energy(s: &str) -> Result<f64> {
    let s = s.trim();
    let (num, scale) = [("GeV", 1e9), ("MeV", 1e6), ("keV", 1e3), ("eV", 1.0)]
        .iter()
        .find_map(|(unit, scale)| s.strip_suffix(unit).map(|n| (n, *scale)))
        .unwrap_or((s, 1.0));
    let value: f64 = num
        .trim()
        .parse()
        .map_err(|_| anyhow!("invalid energy '{s}' (expected a number with optional eV, keV, MeV or GeV suffix)"))?;
    Ok(value * scale)
}

impl SweepSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 5 {
            bail!("sweep '{s}' must look like VAR:MIN:MAX:COUNT:{{lin|log}}");
        }
        let variable = match parts[0] {
            "r" => SweepVar::R,
            "theta" => SweepVar::Theta,
            "energy" => SweepVar::Energy,
            "theta_nc" | "theta-nc" => SweepVar::ThetaNc,
            other => bail!("unknown sweep variable '{other}' (expected r, theta, energy, theta_nc)"),
        };
        let number = |field: &str, text: &str| -> Result<f64> {
            if variable == SweepVar::Energy {
                parse_energy(text)
            } else {
                text.parse()
                    .map_err(|_| anyhow!("sweep {field} '{text}' is not a number"))
            }
        };
        let min = number("min", parts[1])?;
        let max = number("max", parts[2])?;
        let count: usize = parts[3]
            .parse()
            .map_err(|_| anyhow!("sweep count '{}' is not a positive integer", parts[3]))?;
        let spacing = match parts[4] {
            "lin" | "linear" => Spacing::Linear,
            "log" => Spacing::Log,
            other => bail!("unknown sweep spacing '{other}' (expected lin or log)"),
        };
        let spec = Self {
            variable,
            min,
            max,
            count,
            spacing,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            bail!("sweep count must be at least 2, got {}", self.count);
        }
        if !(self.min < self.max) {
            bail!("sweep range is empty: min {} is not below max {}", self.min, self.max);
        }
        if self.spacing == Spacing::Log && !(self.min > 0.0) {
            bail!("log sweep needs min > 0, got {}", self.min);
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                let t = i as f64 / last;
                let x = match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * t,
                    Spacing::Log => {
                        let (a, b) = (self.min.ln(), self.max.ln());
                        (a + (b - a) * t).exp()
                    }
                };
                // pin the end points exactly
                if i == 0 {
                    self.min
                } else if i == n - 1 {
                    self.max
                } else {
                    x
                }
            })
            .collect()
    }
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spacing = match self.spacing {
            Spacing::Linear => "lin",
            Spacing::Log => "log",
        };
        write!(
            f,
            "{}:{}:{}:{}:{}",
            self.variable, self.min, self.max, self.count, spacing
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energies() {
        assert_eq!(parse_energy("1eV").unwrap(), 1.0);
        assert_eq!(parse_energy("2.5 keV").unwrap(), 2500.0);
        assert_eq!(parse_energy("100GeV").unwrap(), 1e11);
        assert_eq!(parse_energy("1e3").unwrap(), 1e3);
        assert_eq!(parse_energy("1e3MeV").unwrap(), 1e9);
        assert!(parse_energy("3 TeV").is_err());
        assert!(parse_energy("fast").is_err());
    }

    #[test]
    fn parse_and_points() {
        let s = SweepSpec::parse("r:0.1:10:3:log").unwrap();
        assert_eq!(s.variable, SweepVar::R);
        let p = s.points();
        assert_eq!(p[0], 0.1);
        assert!((p[1] - 1.0).abs() < 1e-12);
        assert_eq!(p[2], 10.0);
        let e = SweepSpec::parse("energy:1eV:1keV:4:log").unwrap();
        assert_eq!(e.max, 1e3);
        assert_eq!(SweepSpec::parse("theta:1:179:179:lin").unwrap().points()[178], 179.0);
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(SweepSpec::parse("r:10:1:5:lin").is_err());
        assert!(SweepSpec::parse("r:0:1:5:log").is_err());
        assert!(SweepSpec::parse("r:0:1:1:lin").is_err());
        assert!(SweepSpec::parse("x:0:1:5:lin").is_err());
        assert!(SweepSpec::parse("r:0:1:5").is_err());
        assert!(SweepSpec::parse("r:0:1:5:cubic").is_err());
    }
}
