use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use ncyukawa::amplitude::DEFAULT_ABS_TOL;
use ncyukawa::bounds::{CalibrationRow, DEFAULT_EPSILON};
use ncyukawa::cross_section::yukawa_total_cs_exact;
use ncyukawa::units::theta_from_sqrt_m;
use ncyukawa::{
    born_amplitude_closed, born_amplitude_quadrature, bound_table, differential_cs, presets, series_validity,
    total_cs_paper_series, total_cs_quadrature, DetectabilityCriterion, DispersionMode, Error, Interaction, Kinematics,
    MoleculePreset, PhysicalConstants, PotentialModel,
};

use crate::args::{Command, CommonArgs, Format, Method, Mode};
use crate::output::{emit, Cell, Table};
use crate::sweep::{parse_energy, SweepSpec, SweepVar};

const CONSTANTS: PhysicalConstants = PhysicalConstants::CODATA_2018;

pub fn run(command: &Command) -> Result<()> {
    let args = command.args();
    match command {
        Command::Presets(_) => return cmd_presets(args),
        Command::Bound(_) => return cmd_bound(args),
        _ => {}
    }
    let setup = Setup::new(command.name(), args)?;
    let table = match command {
        Command::Potential(_) => cmd_potential(&setup)?,
        Command::Amplitude(_) => cmd_amplitude(&setup)?,
        Command::Dcs(_) => cmd_dcs(&setup)?,
        Command::Tcs(_) => cmd_tcs(&setup)?,
        Command::Bound(_) | Command::Presets(_) => unreachable!(),
    };
    emit(&table.render(setup.format), args.out.as_deref())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    Target,
    Energy,
    SqrtTheta,
    Angle,
    R,
}

impl Axis {
    fn key(self) -> &'static str {
        match self {
            Axis::Target => "target",
            Axis::Energy => "energy_eV",
            Axis::SqrtTheta => "sqrt_theta_m",
            Axis::Angle => "theta_deg",
            Axis::R => "r_angstrom",
        }
    }

    fn of(var: SweepVar) -> Self {
        match var {
            SweepVar::R => Axis::R,
            SweepVar::Theta => Axis::Angle,
            SweepVar::Energy => Axis::Energy,
            SweepVar::ThetaNc => Axis::SqrtTheta,
        }
    }
}

#[derive(Debug, Clone)]
struct Point<'a> {
    target: &'a MoleculePreset,
    energy: f64,
    sqrt_theta_m: f64,
    angle_deg: f64,
    r: f64,
}

impl Point<'_> {
    fn set(&mut self, axis: Axis, x: f64) {
        match axis {
            Axis::Energy => self.energy = x,
            Axis::SqrtTheta => self.sqrt_theta_m = x,
            Axis::Angle => self.angle_deg = x,
            Axis::R => self.r = x,
            Axis::Target => unreachable!("targets are never swept"),
        }
    }
}

fn resolve_targets(args: &CommonArgs) -> Result<(Vec<MoleculePreset>, Vec<MoleculePreset>)> {
    let mut available = presets::builtin();
    if let Some(path) = &args.presets_file {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading presets file {}", path.display()))?;
        let extra = presets::parse(&text).with_context(|| format!("in presets file {}", path.display()))?;
        available.extend(extra);
    }
    let targets = if !args.preset.is_empty() {
        args.preset
            .iter()
            .map(|name| presets::find(&available, name).cloned())
            .collect::<ncyukawa::Result<Vec<_>>>()?
    } else if let (Some(z), Some(alpha)) = (args.z, args.alpha_inv_angstrom) {
        if z < 1 {
            return Err(Error::InvalidZ(z).into());
        }
        if !(alpha >= 0.0) {
            return Err(Error::NegativeScreening(alpha).into());
        }
        vec![MoleculePreset::new(format!("Z{z}"), z, alpha)]
    } else {
        Vec::new()
    };
    Ok((targets, available))
}

fn energies(args: &CommonArgs) -> Result<Vec<f64>> {
    args.energy.iter().map(|s| parse_energy(s)).collect()
}

fn dispersion(mode: Option<Mode>) -> DispersionMode {
    match mode.unwrap_or_default() {
        Mode::Rel => DispersionMode::Relativistic,
        Mode::Nonrel => DispersionMode::Nonrelativistic,
    }
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(",")
}

fn base_provenance(command: &str, args: &CommonArgs, targets: &[MoleculePreset]) -> Vec<(String, String)> {
    let target = targets
        .iter()
        .map(|t| format!("{}(Z={},alpha_inv_angstrom={})", t.name, t.z, t.alpha_inv_angstrom))
        .collect::<Vec<_>>()
        .join(",");
    let mut p = vec![
        ("program".to_string(), format!("ncyukawa {}", env!("CARGO_PKG_VERSION"))),
        ("command".to_string(), command.to_string()),
        ("target".to_string(), target),
        (
            "interaction".to_string(),
            if args.electron_target {
                "atomic_electrons"
            } else {
                "nucleus"
            }
            .to_string(),
        ),
        ("mode".to_string(), dispersion(args.mode).to_string()),
    ];
    p.push(("hbar_c_eV_A".into(), CONSTANTS.hbar_c.to_string()));
    p.push((
        "electron_rest_energy_eV".into(),
        CONSTANTS.electron_rest_energy.to_string(),
    ));
    p.push(("coulomb_coupling_eV_A".into(), CONSTANTS.coulomb_coupling.to_string()));
    p
}

/// Inputs shared by the tabulating subcommands.
struct Setup {
    command: &'static str,
    targets: Vec<MoleculePreset>,
    energies: Vec<f64>,
    sqrt_thetas: Vec<f64>,
    angles: Vec<f64>,
    mode: DispersionMode,
    interaction: Interaction,
    method: Option<Method>,
    sweep: Option<SweepSpec>,
    format: Format,
    provenance: Vec<(String, String)>,
}

impl Setup {
    fn new(command: &'static str, args: &CommonArgs) -> Result<Self> {
        let (targets, _) = resolve_targets(args)?;
        if targets.is_empty() {
            bail!("no target given: use --preset NAME or --Z with --alpha-inv-angstrom");
        }
        let sqrt_thetas = if args.sqrt_theta_m.is_empty() {
            vec![0.0]
        } else {
            args.sqrt_theta_m.clone()
        };
        if let Some(s) = sqrt_thetas.iter().find(|s| !(**s >= 0.0)) {
            return Err(Error::NegativeTheta(*s).into());
        }
        let provenance = base_provenance(command, args, &targets);
        Ok(Self {
            command,
            targets,
            energies: energies(args)?,
            sqrt_thetas,
            angles: args.angle_deg.clone(),
            mode: dispersion(args.mode),
            interaction: if args.electron_target {
                Interaction::AtomicElectrons
            } else {
                Interaction::Nucleus
            },
            method: args.method,
            sweep: args.sweep,
            format: args.format.unwrap_or_default(),
            provenance,
        })
    }

    fn model(&self, p: &Point, kin: &Kinematics) -> ncyukawa::Result<PotentialModel> {
        let theta = theta_from_sqrt_m(p.sqrt_theta_m)?;
        PotentialModel::nc_yukawa(
            p.target.z,
            p.target.alpha_inv_angstrom,
            theta,
            kin.total_energy,
            self.interaction,
            &CONSTANTS,
        )
    }

    fn kinematics(&self, p: &Point) -> ncyukawa::Result<Kinematics> {
        Kinematics::new(p.energy, self.mode, &CONSTANTS)
    }

    fn values(&self, axis: Axis) -> Vec<f64> {
        match axis {
            Axis::Energy => self.energies.clone(),
            Axis::SqrtTheta => self.sqrt_thetas.clone(),
            Axis::Angle => self.angles.clone(),
            Axis::R | Axis::Target => Vec::new(),
        }
    }

    /// Builds the table: one row per value of the row axis, one column group
    /// per combination of the remaining `axes`.
    fn tabulate<F>(&self, rows: Axis, row_values: Vec<f64>, axes: &[Axis], fields: &[&str], eval: F) -> Result<Table>
    where
        F: Fn(&Point) -> Result<Vec<Cell>> + Sync,
    {
        let mut combos: Vec<Point> = self
            .targets
            .iter()
            .map(|t| Point {
                target: t,
                energy: f64::NAN,
                sqrt_theta_m: f64::NAN,
                angle_deg: f64::NAN,
                r: f64::NAN,
            })
            .collect();
        let mut varying: Vec<Axis> = Vec::new();
        if self.targets.len() > 1 {
            varying.push(Axis::Target);
        }
        for &axis in axes.iter().filter(|a| **a != rows && **a != Axis::Target) {
            let values = self.values(axis);
            if values.is_empty() {
                bail!("{} needs --{}", self.command, flag_name(axis));
            }
            if values.len() > 1 {
                varying.push(axis);
            }
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    values.iter().map(move |&x| {
                        let mut c = c.clone();
                        c.set(axis, x);
                        c
                    })
                })
                .collect();
        }

        let mut columns = vec![rows.key().to_string()];
        for c in &combos {
            let label: Vec<String> = varying
                .iter()
                .map(|&a| match a {
                    Axis::Target => format!("target={}", c.target.name),
                    Axis::Energy => format!("energy_eV={:e}", c.energy),
                    Axis::SqrtTheta => format!("sqrt_theta_m={:e}", c.sqrt_theta_m),
                    Axis::Angle => format!("theta_deg={:e}", c.angle_deg),
                    Axis::R => format!("r_angstrom={:e}", c.r),
                })
                .collect();
            for field in fields {
                if label.is_empty() {
                    columns.push(field.to_string());
                } else {
                    columns.push(format!("{field}[{}]", label.join(";")));
                }
            }
        }

        let table_rows = row_values
            .par_iter()
            .map(|&x| {
                let mut row = vec![Cell::Num(x)];
                for c in &combos {
                    let mut p = c.clone();
                    p.set(rows, x);
                    let cells = eval(&p).with_context(|| format!("at {}={}", rows.key(), x))?;
                    row.extend(cells);
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;

        let mut provenance = self.provenance.clone();
        provenance.push(("energy_eV".into(), list(&self.energies)));
        provenance.push(("sqrt_theta_m".into(), list(&self.sqrt_thetas)));
        provenance.push(("angle_deg".into(), list(&self.angles)));
        provenance.push((
            "rows".into(),
            match self.sweep {
                Some(s) => s.to_string(),
                None => format!("{}={}", rows.key(), list(&row_values)),
            },
        ));
        Ok(Table {
            provenance,
            columns,
            rows: table_rows,
        })
    }

    /// Row axis and values: the sweep if given, else `default`.
    fn rows(&self, allowed: &[SweepVar], default: &str) -> Result<(Axis, Vec<f64>)> {
        let sweep = match self.sweep {
            Some(s) => s,
            None => SweepSpec::parse(default).expect("default sweeps are valid"),
        };
        if !allowed.contains(&sweep.variable) {
            let names: Vec<String> = allowed.iter().map(|v| v.to_string()).collect();
            bail!(
                "{} cannot sweep over {} (allowed: {})",
                self.command,
                sweep.variable,
                names.join(", ")
            );
        }
        let axis = Axis::of(sweep.variable);
        if !self.values(axis).is_empty() && (axis != Axis::SqrtTheta || self.sqrt_thetas != [0.0]) {
            bail!("--{} conflicts with a sweep over {}", flag_name(axis), sweep.variable);
        }
        Ok((axis, sweep.points()))
    }
}

fn flag_name(axis: Axis) -> &'static str {
    match axis {
        Axis::Target => "preset",
        Axis::Energy => "energy",
        Axis::SqrtTheta => "sqrt-theta-m",
        Axis::Angle => "angle-deg",
        Axis::R => "sweep r:...",
    }
}

fn cmd_potential(s: &Setup) -> Result<Table> {
    if s.method.is_some() {
        bail!("potential takes no --method");
    }
    let (axis, values) = s.rows(&[SweepVar::R], "r:0.1:10:100:log")?;
    let axes = [Axis::Target, Axis::Energy, Axis::SqrtTheta];
    s.tabulate(axis, values, &axes, &["V_eV"], |p| {
        let kin = s.kinematics(p)?;
        let v = s.model(p, &kin)?.evaluate(p.r)?;
        Ok(vec![Cell::Num(v)])
    })
}

fn amplitude_value(s: &Setup, p: &Point, method: Method) -> Result<f64> {
    let kin = s.kinematics(p)?;
    let model = s.model(p, &kin)?;
    let q = kin.momentum_transfer(p.angle_deg.to_radians())?;
    let f = match method {
        Method::ClosedForm => born_amplitude_closed(&model, q, &CONSTANTS)?,
        Method::Quadrature => born_amplitude_quadrature(&model, q, &CONSTANTS, DEFAULT_ABS_TOL)?,
        Method::PaperSeries => bail!("paper-series applies to total cross sections only"),
    };
    Ok(f.value)
}

fn with_method(mut t: Table, method: Method) -> Table {
    t.provenance.push(("method".into(), method.tag().into()));
    t
}

fn cmd_amplitude(s: &Setup) -> Result<Table> {
    let method = s.method.unwrap_or(Method::ClosedForm);
    let (axis, values) = s.rows(
        &[SweepVar::Theta, SweepVar::Energy, SweepVar::ThetaNc],
        "theta:1:179:179:lin",
    )?;
    let axes = [Axis::Target, Axis::Energy, Axis::SqrtTheta, Axis::Angle];
    let t = s.tabulate(axis, values, &axes, &["f_A"], |p| {
        Ok(vec![Cell::Num(amplitude_value(s, p, method)?)])
    })?;
    Ok(with_method(t, method))
}

fn cmd_dcs(s: &Setup) -> Result<Table> {
    let method = s.method.unwrap_or(Method::ClosedForm);
    let (axis, values) = s.rows(
        &[SweepVar::Theta, SweepVar::Energy, SweepVar::ThetaNc],
        "theta:1:179:179:lin",
    )?;
    let axes = [Axis::Target, Axis::Energy, Axis::SqrtTheta, Axis::Angle];
    let t = s.tabulate(axis, values, &axes, &["dcs_A2_per_sr"], |p| {
        let value = match method {
            Method::ClosedForm => {
                let kin = s.kinematics(p)?;
                let model = s.model(p, &kin)?;
                differential_cs(p.angle_deg.to_radians(), &kin, &model, &CONSTANTS)?.value
            }
            _ => amplitude_value(s, p, method)?.powi(2),
        };
        Ok(vec![Cell::Num(value)])
    })?;
    Ok(with_method(t, method))
}

fn status(e: &Error) -> &'static str {
    match e {
        Error::DivergentCrossSection(_) => "divergent",
        Error::ZeroScreening => "zero_screening",
        Error::QuadratureNonConvergence { .. } => "nonconvergent",
        Error::UnsupportedReduction { .. } => "unsupported",
        _ => "error",
    }
}

/// The exact Yukawa total cross section; only defined without the 1/r² term.
fn closed_total_cs(kin: &Kinematics, model: &PotentialModel) -> ncyukawa::Result<f64> {
    if model.alpha() == 0.0 {
        return Err(Error::DivergentCrossSection("coulomb"));
    }
    if model.v2() != 0.0 {
        return Err(Error::UnsupportedReduction {
            kind: model.kind().name(),
            limit: "closed form needs sqrt_theta_m=0",
        });
    }
    Ok(yukawa_total_cs_exact(kin, model.v1(), model.alpha(), &CONSTANTS))
}

fn cmd_tcs(s: &Setup) -> Result<Table> {
    let method = s.method.unwrap_or(Method::Quadrature);
    let (axis, values) = match (s.sweep, s.energies.is_empty()) {
        (None, false) => (Axis::Energy, s.energies.clone()),
        _ => s.rows(&[SweepVar::Energy, SweepVar::ThetaNc], "energy:1:100:20:log")?,
    };
    let axes = [Axis::Target, Axis::Energy, Axis::SqrtTheta];
    let fields = ["tcs_A2", "method", "series_valid", "status"];
    let t = s.tabulate(axis, values, &axes, &fields, |p| {
        let kin = s.kinematics(p)?;
        let model = s.model(p, &kin)?;
        let valid = series_validity(&kin, &model).valid;
        let sigma = match method {
            Method::Quadrature => total_cs_quadrature(&kin, &model, &CONSTANTS).map(|r| r.value),
            Method::PaperSeries => total_cs_paper_series(&kin, &model, &CONSTANTS).map(|r| r.value),
            Method::ClosedForm => closed_total_cs(&kin, &model),
        };
        let (value, state) = match sigma {
            Ok(v) => (v, "ok"),
            Err(e) => (f64::NAN, status(&e)),
        };
        Ok(vec![
            Cell::Num(value),
            Cell::Text(method.tag().into()),
            Cell::Bool(valid),
            Cell::Text(state.into()),
        ])
    })?;
    Ok(with_method(t, method))
}

fn cmd_bound(args: &CommonArgs) -> Result<()> {
    let (targets, _) = resolve_targets(args)?;
    if targets.is_empty() {
        bail!("no target given: use --preset NAME or --Z with --alpha-inv-angstrom");
    }
    let mut energies = energies(args)?;
    if let Some(sweep) = args.sweep {
        if sweep.variable != SweepVar::Energy {
            bail!("bound can only sweep over energy");
        }
        if !energies.is_empty() {
            bail!("--energy conflicts with a sweep over energy");
        }
        energies = sweep.points();
    }
    if energies.is_empty() {
        bail!("bound needs --energy or --sweep energy:...");
    }
    if args.method.is_some_and(|m| m != Method::Quadrature) {
        bail!("bound always uses quadrature cross sections");
    }
    let mode = dispersion(args.mode);
    let criterion = if args.calibrate {
        DetectabilityCriterion::calibrated(CalibrationRow::h2_one_ev(), mode, &CONSTANTS)?
    } else {
        DetectabilityCriterion::fixed(args.epsilon.unwrap_or(DEFAULT_EPSILON))?
    };
    let cells = bound_table(&targets, &energies, &criterion, mode, &CONSTANTS)?;

    let mut provenance = base_provenance("bound", args, &targets);
    provenance.push(("energy_eV".into(), list(&energies)));
    provenance.push(("method".into(), "quadrature".into()));
    provenance.push(("bound_search".into(), "bisection".into()));
    provenance.push((
        "criterion".into(),
        match &criterion.calibration_row {
            Some(row) => format!(
                "calibrated({} T={:e} eV sqrt_theta_m={:e})",
                row.target.name, row.energy, row.sqrt_theta_m
            ),
            None => "fixed".into(),
        },
    ));
    provenance.push(("epsilon".into(), format!("{:e}", criterion.epsilon)));

    let rows: Vec<Vec<Cell>> = cells
        .iter()
        .map(|c| {
            let (bound, iterations, state) = match &c.result {
                Ok(r) => (r.sqrt_theta_bound, r.iterations as u64, "ok"),
                Err(Error::NoBracket { .. }) => (f64::NAN, 0, "no_bracket"),
                Err(e) => (f64::NAN, 0, status(e)),
            };
            vec![
                Cell::Text(c.target.clone()),
                Cell::Num(c.energy),
                Cell::Num(bound),
                Cell::Num(criterion.epsilon),
                Cell::Int(iterations),
                Cell::Text(state.into()),
            ]
        })
        .collect();
    let table = Table {
        provenance,
        columns: ["target", "energy_eV", "sqrt_theta_m", "epsilon", "iterations", "status"]
            .map(String::from)
            .to_vec(),
        rows,
    };

    print!("{}", human_bound_table(&table));
    if let Some(out) = args.out.as_deref() {
        emit(&table.render(args.format.unwrap_or_default()), Some(out))?;
    }
    Ok(())
}

fn human_bound_table(t: &Table) -> String {
    let cells: Vec<Vec<String>> = t
        .rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| match c {
                    Cell::Num(x) => format!("{x:.3e}"),
                    other => other.csv(),
                })
                .collect()
        })
        .collect();
    let widths: Vec<usize> = (0..t.columns.len())
        .map(|i| {
            cells
                .iter()
                .map(|r| r[i].len())
                .chain([t.columns[i].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |items: &[String]| {
        let padded: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(&t.columns);
    for r in &cells {
        out.push_str(&line(r));
    }
    out
}

fn cmd_presets(args: &CommonArgs) -> Result<()> {
    let (targets, available) = resolve_targets(args)?;
    let shown = if targets.is_empty() { available } else { targets };
    let table = Table {
        provenance: vec![
            ("program".into(), format!("ncyukawa {}", env!("CARGO_PKG_VERSION"))),
            ("command".into(), "presets".into()),
        ],
        columns: ["name", "Z", "alpha_inv_angstrom"].map(String::from).to_vec(),
        rows: shown
            .iter()
            .map(|p| {
                vec![
                    Cell::Text(p.name.clone()),
                    Cell::Int(p.z as u64),
                    Cell::Num(p.alpha_inv_angstrom),
                ]
            })
            .collect(),
    };
    let text = match (args.format, args.out.as_deref()) {
        (None, None) => presets::render(&shown),
        (format, _) => table.render(format.unwrap_or_default()),
    };
    emit(&text, args.out.as_deref())
}
