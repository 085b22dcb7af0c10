//! Scenario drivers: turn a validated configuration into an output bundle.

use std::collections::BTreeMap;
use std::fmt;

use mobile_wall::cavity1d::{profile_1d, Density1DProfile};
use mobile_wall::cavity3d::{density_profile_3d, photon_spectrum, Density3DProfile, ModeSet3};
use mobile_wall::grid::{Grid, PeakInfo};
use mobile_wall::modesum::Truncation;
use serde::Serialize;

use crate::config::{CavitySpec, Diagnostics, RunConfig, Scenario};
use crate::output::{Cell, OutputBundle, Table};

#[derive(Debug)]
pub enum RunError {
    Config(Diagnostics),
    Compute(mobile_wall::Error),
    Io(std::io::Error),
}

impl RunError {
    /// Process exit status: 2 for anything the user must fix in the input,
    /// 3 when a sum fails to converge.
    pub fn exit_code(&self) -> u8 {
        use mobile_wall::Error as E;
        match self {
            RunError::Config(_) | RunError::Io(_) => 2,
            RunError::Compute(E::Config(_) | E::Domain(_)) => 2,
            RunError::Compute(E::NonConvergence { .. } | E::Overflow(_)) => 3,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(d) => write!(f, "configuration error:\n{d}"),
            RunError::Compute(e) => write!(f, "{e}"),
            RunError::Io(e) => write!(f, "cannot write output: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<mobile_wall::Error> for RunError {
    fn from(e: mobile_wall::Error) -> Self {
        RunError::Compute(e)
    }
}

impl From<mobile_wall::ConfigError> for RunError {
    fn from(e: mobile_wall::ConfigError) -> Self {
        RunError::Compute(e.into())
    }
}

impl From<Diagnostics> for RunError {
    fn from(e: Diagnostics) -> Self {
        RunError::Config(e)
    }
}

#[derive(Serialize)]
struct Sidecar<'a> {
    meta: Meta<'a>,
}

#[derive(Serialize)]
struct Meta<'a> {
    software: String,
    scenario: &'static str,
    units: BTreeMap<&'a str, &'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile1d: Option<Meta1D>,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile3d: Option<Meta3D>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spectrum: Option<MetaSpectrum>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    runs: Vec<MetaRun>,
}

#[derive(Serialize)]
struct Meta1D {
    truncation: Truncation,
    max_tail: f64,
    peak: PeakInfo,
}

#[derive(Serialize)]
struct Meta3D {
    casimir_constant: f64,
    px0_offset: f64,
    coefficients: usize,
    max_tail: f64,
    rho0_modes: ModeSet3,
    delta_modes: ModeSet3,
    peak: PeakInfo,
}

#[derive(Serialize)]
struct MetaSpectrum {
    modes: usize,
    max_partners: usize,
    max_tail: f64,
}

#[derive(Serialize)]
struct MetaRun {
    file: String,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile1d: Option<Meta1D>,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile3d: Option<Meta3D>,
}

impl<'a> Meta<'a> {
    fn new(scenario: Scenario, units: &[(&'a str, &'a str)]) -> Self {
        Self {
            software: format!("mobile-wall-cli {}", env!("CARGO_PKG_VERSION")),
            scenario: scenario.name(),
            units: units.iter().copied().collect(),
            profile1d: None,
            profile3d: None,
            spectrum: None,
            runs: Vec::new(),
        }
    }

    fn render(self, cfg: &RunConfig) -> String {
        let meta = toml::to_string(&Sidecar { meta: self }).expect("metadata is plain data");
        format!("{}\n{meta}", cfg.to_toml())
    }
}

const UNITS_1D: &[(&str, &str)] = &[
    ("x_m", "m"),
    ("e2_zeroth", "J/m"),
    ("b2_zeroth", "J/m"),
    ("e2_first", "J/m"),
    ("b2_first", "J/m"),
    ("rho_corr", "J/m"),
];
const UNITS_3D: &[(&str, &str)] = &[("x_m", "m"), ("rho0", "J/m^3"), ("delta_rho", "J/m^3")];

fn grid(cfg: &RunConfig, length: f64) -> Result<Grid, RunError> {
    Ok(match cfg.grid.window {
        Some(w) => Grid::window(length, cfg.grid.points, w)?,
        None => Grid::uniform(length, cfg.grid.points)?,
    })
}

fn expect_scenario(cfg: &RunConfig, want: Scenario) -> Result<(), RunError> {
    if cfg.scenario != want {
        return Err(Diagnostics::single(format!(
            "configuration is for scenario `{}`, not `{}`",
            cfg.scenario.name(),
            want.name()
        ))
        .into());
    }
    Ok(())
}

fn compute_1d(cfg: &RunConfig, cavity: &CavitySpec) -> Result<Density1DProfile, RunError> {
    let c = cavity.cavity_1d()?;
    Ok(profile_1d(&c, &cfg.control, &grid(cfg, c.length())?)?)
}

fn compute_3d(cfg: &RunConfig, cavity: &CavitySpec) -> Result<Density3DProfile, RunError> {
    let c = cavity.cavity_3d()?;
    Ok(density_profile_3d(&c, &cfg.control, &grid(cfg, c.length())?)?)
}

fn table_1d(p: &Density1DProfile) -> Table {
    let mut t = Table::new(UNITS_1D.iter().map(|u| u.0).collect());
    for i in 0..p.grid.len() {
        t.push(
            [p.grid[i], p.e2_0[i], p.b2_0[i], p.e2_1[i], p.b2_1[i], p.rho_corr[i]]
                .map(Cell::Float)
                .to_vec(),
        );
    }
    t
}

fn meta_1d(p: &Density1DProfile) -> Meta1D {
    Meta1D {
        truncation: p.meta.truncation,
        max_tail: p.meta.max_tail,
        peak: p.peak(),
    }
}

fn table_3d(p: &Density3DProfile) -> Table {
    let mut t = Table::new(UNITS_3D.iter().map(|u| u.0).collect());
    for i in 0..p.grid.len() {
        t.push([p.grid[i], p.rho0[i], p.delta_rho[i]].map(Cell::Float).to_vec());
    }
    t
}

fn meta_3d(p: &Density3DProfile) -> Meta3D {
    Meta3D {
        casimir_constant: p.casimir_constant,
        px0_offset: p.px0_offset,
        coefficients: p.meta.coefficients,
        max_tail: p.meta.max_tail,
        rho0_modes: p.meta.rho0_modes,
        delta_modes: p.meta.delta_modes,
        peak: p.meta.peak,
    }
}

fn single(cfg: &RunConfig, table: Table, meta: Meta<'_>) -> OutputBundle {
    OutputBundle {
        tables: vec![(format!("{}.csv", cfg.stem), table)],
        meta_name: format!("{}.meta.toml", cfg.stem),
        meta: meta.render(cfg),
    }
}

/// Columns `x_m, e2_zeroth, b2_zeroth, e2_first, b2_first, rho_corr`.
pub fn run_profile1d(cfg: &RunConfig) -> Result<OutputBundle, RunError> {
    expect_scenario(cfg, Scenario::Profile1D)?;
    let p = compute_1d(cfg, &cfg.cavity)?;
    let mut meta = Meta::new(cfg.scenario, UNITS_1D);
    meta.profile1d = Some(meta_1d(&p));
    Ok(single(cfg, table_1d(&p), meta))
}

/// Columns `x_m, rho0, delta_rho`. The sidecar carries the constant parts of
/// `rho0` and the peak of `delta_rho` on the mobile-wall half.
pub fn run_profile3d(cfg: &RunConfig) -> Result<OutputBundle, RunError> {
    expect_scenario(cfg, Scenario::Profile3D)?;
    let p = compute_3d(cfg, &cfg.cavity)?;
    let mut meta = Meta::new(cfg.scenario, UNITS_3D);
    meta.profile3d = Some(meta_3d(&p));
    Ok(single(cfg, table_3d(&p), meta))
}

/// Columns `m_x, m_y, m_z, occupation`.
pub fn run_spectrum(cfg: &RunConfig) -> Result<OutputBundle, RunError> {
    expect_scenario(cfg, Scenario::Spectrum)?;
    let c = cfg.cavity.cavity_3d()?;
    let modes = cfg.spectrum.as_ref().expect("validated spectrum block").modes();
    let s = photon_spectrum(&modes, &c, &cfg.control)?;
    let mut t = Table::new(vec!["m_x", "m_y", "m_z", "occupation"]);
    for (m, n) in &s.entries {
        t.push(vec![
            Cell::Int(m.nx() as i64),
            Cell::Int(m.ny() as i64),
            Cell::Int(m.nz() as i64),
            Cell::Float(*n),
        ]);
    }
    let mut meta = Meta::new(cfg.scenario, &[("occupation", "1")]);
    meta.spectrum = Some(MetaSpectrum {
        modes: s.entries.len(),
        max_partners: s.max_partners,
        max_tail: s.max_tail,
    });
    Ok(single(cfg, t, meta))
}

/// One profile per sweep value, `<stem>_<i>.csv`, and `<stem>_summary.csv`
/// with columns `sweep_value, peak_height, peak_location, fwhm`.
pub fn run_sweep(cfg: &RunConfig) -> Result<OutputBundle, RunError> {
    expect_scenario(cfg, Scenario::Sweep)?;
    let sweep = cfg.sweep.as_ref().expect("validated sweep block");
    let three_d = sweep.profile == Scenario::Profile3D;
    let param_unit = match sweep.parameter {
        crate::config::SweepParameter::OmegaCut | crate::config::SweepParameter::OmegaOsc => "1/s",
        crate::config::SweepParameter::Mass => "kg",
    };
    let (density_unit, profile_units) = if three_d { ("J/m^3", UNITS_3D) } else { ("J/m", UNITS_1D) };
    let mut units: Vec<(&str, &str)> = profile_units.to_vec();
    units.extend([
        ("sweep_value", param_unit),
        ("peak_height", density_unit),
        ("peak_location", "m"),
        ("fwhm", "m"),
    ]);
    let mut meta = Meta::new(cfg.scenario, &units);
    let mut summary = Table::new(vec!["sweep_value", "peak_height", "peak_location", "fwhm"]);
    let mut tables = Vec::new();
    for (i, &value) in sweep.values.iter().enumerate() {
        let cavity = cfg.cavity.with(sweep.parameter, value);
        let file = format!("{}_{i}.csv", cfg.stem);
        let (table, peak, run) = if three_d {
            let p = compute_3d(cfg, &cavity)?;
            let m = meta_3d(&p);
            (table_3d(&p), m.peak, MetaRun { file: file.clone(), value, profile1d: None, profile3d: Some(m) })
        } else {
            let p = compute_1d(cfg, &cavity)?;
            let m = meta_1d(&p);
            (table_1d(&p), m.peak, MetaRun { file: file.clone(), value, profile1d: Some(m), profile3d: None })
        };
        summary.push([value, peak.height, peak.location, peak.fwhm].map(Cell::Float).to_vec());
        tables.push((file, table));
        meta.runs.push(run);
    }
    tables.push((format!("{}_summary.csv", cfg.stem), summary));
    Ok(OutputBundle {
        tables,
        meta_name: format!("{}.meta.toml", cfg.stem),
        meta: meta.render(cfg),
    })
}

/// Dispatch on the configured scenario.
pub fn run(cfg: &RunConfig) -> Result<OutputBundle, RunError> {
    match cfg.scenario {
        Scenario::Profile1D => run_profile1d(cfg),
        Scenario::Profile3D => run_profile3d(cfg),
        Scenario::Spectrum => run_spectrum(cfg),
        Scenario::Sweep => run_sweep(cfg),
    }
}
