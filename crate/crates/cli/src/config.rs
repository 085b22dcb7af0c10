//! Run configuration: a TOML document with one scenario and its blocks.
//!
//! ```toml
//! scenario = "profile1d"        # profile1d | profile3d | spectrum | sweep
//!
//! [cavity]
//! L0 = 10e-6                    # m
//! M = 1e-11                     # kg
//! omega_osc = 1e5               # 1/s
//! omega_cut = 1e15              # 1/s
//! # Ly = 0.5e-4, Lz = 0.5e-4    # m, 3D scenarios only
//!
//! [sum]                         # optional
//! rel_tol = 1e-6
//! cutoff = "exponential"        # exponential | sharp
//!
//! [grid]
//! points = 1000
//! # window = 5e-7               # m, put every point in (L0 - window, L0)
//! ```
//!
//! Parsing never stops at the first problem: every error found is reported
//! with its line number.

use std::fmt;

use mobile_wall::{Cavity1D, Cavity1DParams, Cavity3D, Cavity3DParams, CutoffScheme, ModeIndex3, PhysicalConstants, SumControl};
use toml::de::{DeTable, DeValue};
use toml::Spanned;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    Profile1D,
    Profile3D,
    Spectrum,
    Sweep,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Profile1D => "profile1d",
            Scenario::Profile3D => "profile3d",
            Scenario::Spectrum => "spectrum",
            Scenario::Sweep => "sweep",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "profile1d" => Scenario::Profile1D,
            "profile3d" => Scenario::Profile3D,
            "spectrum" => Scenario::Spectrum,
            "sweep" => Scenario::Sweep,
            _ => return None,
        })
    }
}

/// Cavity block. `Ly`/`Lz` are required by the 3D scenarios only.
#[derive(Clone, Copy, Debug, PartialEq)]
#[allow(non_snake_case)]
pub struct CavitySpec {
    pub L0: f64,
    pub Ly: Option<f64>,
    pub Lz: Option<f64>,
    pub M: f64,
    pub omega_osc: f64,
    pub omega_cut: f64,
    pub constants: PhysicalConstants,
}

impl CavitySpec {
    pub fn params_1d(&self) -> Cavity1DParams {
        Cavity1DParams {
            L0: self.L0,
            M: self.M,
            omega_osc: self.omega_osc,
            omega_cut: self.omega_cut,
            constants: self.constants,
        }
    }

    pub fn params_3d(&self) -> Cavity3DParams {
        Cavity3DParams {
            L0: self.L0,
            Ly: self.Ly.unwrap_or(f64::NAN),
            Lz: self.Lz.unwrap_or(f64::NAN),
            M: self.M,
            omega_osc: self.omega_osc,
            omega_cut: self.omega_cut,
            constants: self.constants,
        }
    }

    pub fn cavity_1d(&self) -> Result<Cavity1D, mobile_wall::ConfigError> {
        self.params_1d().validate()
    }

    pub fn cavity_3d(&self) -> Result<Cavity3D, mobile_wall::ConfigError> {
        self.params_3d().validate()
    }

    fn set(&mut self, p: SweepParameter, v: f64) {
        match p {
            SweepParameter::OmegaCut => self.omega_cut = v,
            SweepParameter::Mass => self.M = v,
            SweepParameter::OmegaOsc => self.omega_osc = v,
        }
    }

    /// Copy with one parameter replaced.
    pub fn with(&self, p: SweepParameter, v: f64) -> Self {
        let mut c = *self;
        c.set(p, v);
        c
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub points: usize,
    pub window: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpectrumModes {
    /// Every mode with `1 ≤ m_x ≤ max_axial` and `|m_y|, |m_z| ≤ max_transverse`.
    Bounds { max_axial: u32, max_transverse: u32 },
    List(Vec<ModeIndex3>),
}

impl SpectrumModes {
    pub fn modes(&self) -> Vec<ModeIndex3> {
        match self {
            SpectrumModes::List(v) => v.clone(),
            SpectrumModes::Bounds {
                max_axial,
                max_transverse,
            } => {
                let t = *max_transverse as i32;
                let mut v = Vec::new();
                for nx in 1..=*max_axial {
                    for ny in -t..=t {
                        for nz in -t..=t {
                            v.push(ModeIndex3::new(nx, ny, nz).expect("n_x >= 1"));
                        }
                    }
                }
                v
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParameter {
    OmegaCut,
    Mass,
    OmegaOsc,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::OmegaCut => "omega_cut",
            SweepParameter::Mass => "M",
            SweepParameter::OmegaOsc => "omega_osc",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "omega_cut" => SweepParameter::OmegaCut,
            "M" => SweepParameter::Mass,
            "omega_osc" => SweepParameter::OmegaOsc,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    /// `Profile1D` or `Profile3D`.
    pub profile: Scenario,
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub cavity: CavitySpec,
    pub control: SumControl,
    pub grid: GridSpec,
    pub spectrum: Option<SpectrumModes>,
    pub sweep: Option<SweepSpec>,
    /// Base name of the output files.
    pub stem: String,
}

/// Every problem found in a configuration document.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    pub errors: Vec<Diagnostic>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostic {
    /// 1-based line, when the problem can be located.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.errors.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            match e.line {
                Some(l) => write!(f, "line {l}: {}", e.message)?,
                None => write!(f, "{}", e.message)?,
            }
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostics {}

impl Diagnostics {
    pub fn single(message: impl Into<String>) -> Self {
        Self {
            errors: vec![Diagnostic {
                line: None,
                message: message.into(),
            }],
        }
    }
}

struct Reader<'a> {
    text: &'a str,
    errors: Vec<Diagnostic>,
}

type Table<'i> = DeTable<'i>;
type Value<'i> = Spanned<DeValue<'i>>;

impl<'a> Reader<'a> {
    fn line(&self, offset: usize) -> usize {
        self.text[..offset.min(self.text.len())].matches('\n').count() + 1
    }

    fn error(&mut self, at: Option<usize>, message: impl Into<String>) {
        let line = at.map(|o| self.line(o));
        self.errors.push(Diagnostic {
            line,
            message: message.into(),
        });
    }

    fn reject_unknown(&mut self, table: &Table<'_>, section: &str, known: &[&str]) {
        for (k, _) in table.iter() {
            if !known.contains(&&**k.get_ref()) {
                let name = if section.is_empty() {
                    k.get_ref().to_string()
                } else {
                    format!("{section}.{}", k.get_ref())
                };
                self.error(Some(k.span().start), format!("unknown key `{name}`"));
            }
        }
    }

    fn table<'t, 'i>(&mut self, root: &'t Table<'i>, key: &str) -> Option<&'t Table<'i>> {
        let v = get(root, key)?;
        match v.get_ref() {
            DeValue::Table(t) => Some(t),
            other => {
                self.error(Some(v.span().start), format!("`{key}` must be a table, found {}", other.type_str()));
                None
            }
        }
    }

    fn float(&mut self, v: &Value<'_>, name: &str) -> Option<f64> {
        let parsed = match v.get_ref() {
            DeValue::Float(f) => f.as_str().replace('_', "").parse::<f64>().ok(),
            DeValue::Integer(i) => int_value(i).map(|n| n as f64),
            _ => None,
        };
        if parsed.is_none() {
            self.error(Some(v.span().start), format!("`{name}` must be a number, found {}", v.get_ref().type_str()));
        }
        parsed
    }

    fn integer(&mut self, v: &Value<'_>, name: &str) -> Option<i64> {
        let parsed = match v.get_ref() {
            DeValue::Integer(i) => int_value(i),
            _ => None,
        };
        if parsed.is_none() {
            self.error(Some(v.span().start), format!("`{name}` must be an integer, found {}", v.get_ref().type_str()));
        }
        parsed
    }

    fn count(&mut self, v: &Value<'_>, name: &str, min: i64) -> Option<usize> {
        let n = self.integer(v, name)?;
        if n < min {
            self.error(Some(v.span().start), format!("`{name}` must be >= {min}, got {n}"));
            return None;
        }
        Some(n as usize)
    }

    fn string<'v>(&mut self, v: &'v Value<'_>, name: &str) -> Option<&'v str> {
        match v.get_ref() {
            DeValue::String(s) => Some(s.as_ref()),
            other => {
                self.error(Some(v.span().start), format!("`{name}` must be a string, found {}", other.type_str()));
                None
            }
        }
    }

    fn required_float(&mut self, t: &Table<'_>, section: &str, key: &str, at: usize) -> Option<f64> {
        match get(t, key) {
            Some(v) => self.float(v, &format!("{section}.{key}")),
            None => {
                self.error(Some(at), format!("missing field `{section}.{key}`"));
                None
            }
        }
    }

    fn optional_float(&mut self, t: &Table<'_>, section: &str, key: &str) -> Option<Option<f64>> {
        match get(t, key) {
            Some(v) => self.float(v, &format!("{section}.{key}")).map(Some),
            None => Some(None),
        }
    }
}

fn int_value(i: &toml::de::DeInteger<'_>) -> Option<i64> {
    let raw = i.as_str().replace('_', "");
    let (neg, body) = match raw.strip_prefix('-') {
        Some(b) => (true, b.to_string()),
        None => (false, raw.trim_start_matches('+').to_string()),
    };
    let digits = match i.radix() {
        10 => body.as_str(),
        _ => body.get(2..)?,
    };
    let v = i64::from_str_radix(digits, i.radix()).ok()?;
    Some(if neg { -v } else { v })
}

fn get<'t, 'i>(t: &'t Table<'i>, key: &str) -> Option<&'t Value<'i>> {
    t.iter().find(|(k, _)| &**k.get_ref() == key).map(|(_, v)| v)
}

/// Span start of the value stored under `key`, for errors about the block.
fn key_offset(t: &Table<'_>, key: &str) -> Option<usize> {
    t.iter()
        .find(|(k, _)| &**k.get_ref() == key)
        .map(|(k, _)| k.span().start)
}

const TOP: &[&str] = &["scenario", "cavity", "sum", "grid", "spectrum", "sweep", "output", "meta"];
const CAVITY: &[&str] = &["L0", "Ly", "Lz", "M", "omega_osc", "omega_cut", "hbar", "c"];
const SUM: &[&str] = &["max_axial", "max_transverse", "rel_tol", "cutoff"];
const GRID: &[&str] = &["points", "window"];
const SPECTRUM: &[&str] = &["max_axial", "max_transverse", "modes"];
const SWEEP: &[&str] = &["profile", "parameter", "values"];
const OUTPUT: &[&str] = &["stem", "format"];

/// Parse and validate a configuration document. Keys under `[meta]` are
/// ignored, so a metadata sidecar parses back into the run that wrote it.
pub fn parse_config(text: &str) -> Result<RunConfig, Diagnostics> {
    let (doc, syntax) = DeTable::parse_recoverable(text);
    let mut r = Reader {
        text,
        errors: Vec::new(),
    };
    for e in &syntax {
        r.error(e.span().map(|s| s.start), e.message().to_string());
    }
    if !syntax.is_empty() {
        return Err(Diagnostics { errors: r.errors });
    }
    let root = doc.get_ref();
    r.reject_unknown(root, "", TOP);

    let scenario = match get(root, "scenario") {
        Some(v) => match r.string(v, "scenario") {
            Some(s) => match Scenario::from_name(s) {
                Some(sc) => Some(sc),
                None => {
                    r.error(
                        Some(v.span().start),
                        format!("unknown scenario `{s}` (expected profile1d, profile3d, spectrum or sweep)"),
                    );
                    None
                }
            },
            None => None,
        },
        None => {
            r.error(None, "missing field `scenario`");
            None
        }
    };

    let cavity = read_cavity(&mut r, root);
    let control = read_sum(&mut r, root);
    let grid = read_grid(&mut r, root);
    let spectrum = read_spectrum(&mut r, root);
    let sweep = read_sweep(&mut r, root);
    let stem = read_output(&mut r, root);

    if let Some(sc) = scenario {
        let at = key_offset(root, "scenario");
        let has_sweep = get(root, "sweep").is_some();
        if has_sweep && sc != Scenario::Sweep {
            r.error(key_offset(root, "sweep"), "`[sweep]` is only allowed with scenario = \"sweep\"");
        }
        if sc == Scenario::Sweep && !has_sweep {
            r.error(at, "scenario \"sweep\" needs a `[sweep]` block");
        }
        if get(root, "spectrum").is_some() && sc != Scenario::Spectrum {
            r.error(key_offset(root, "spectrum"), "`[spectrum]` is only allowed with scenario = \"spectrum\"");
        }
        let three_d = match sc {
            Scenario::Profile3D | Scenario::Spectrum => true,
            Scenario::Sweep => matches!(&sweep, Some(Some(s)) if s.profile == Scenario::Profile3D),
            Scenario::Profile1D => false,
        };
        if let Some(c) = &cavity {
            let cav_at = key_offset(root, "cavity");
            if three_d {
                if c.Ly.is_none() || c.Lz.is_none() {
                    r.error(cav_at, "3D scenarios need `cavity.Ly` and `cavity.Lz`");
                } else if let Err(e) = c.cavity_3d() {
                    for v in e.violations {
                        r.error(cav_at, format!("cavity: {v}"));
                    }
                }
            } else {
                if c.Ly.is_some() || c.Lz.is_some() {
                    r.error(cav_at, "`cavity.Ly`/`cavity.Lz` only apply to 3D scenarios");
                }
                if let Err(e) = c.cavity_1d() {
                    for v in e.violations {
                        r.error(cav_at, format!("cavity: {v}"));
                    }
                }
            }
            if let Some(Some(s)) = &sweep {
                for &v in &s.values {
                    let probe = c.with(s.parameter, v);
                    let bad = if three_d {
                        probe.cavity_3d().err()
                    } else {
                        probe.cavity_1d().err()
                    };
                    if let Some(e) = bad {
                        r.error(
                            key_offset(root, "sweep"),
                            format!("sweep value {}={v:e}: {}", s.parameter.name(), e.violations.join("; ")),
                        );
                    }
                }
            }
        }
        if sc == Scenario::Spectrum && matches!(spectrum, Some(None)) {
            r.error(at, "scenario \"spectrum\" needs a `[spectrum]` block");
        }
    }

    let mut errors = r.errors;
    errors.sort_by_key(|e| e.line);
    if !errors.is_empty() {
        return Err(Diagnostics { errors });
    }
    let scenario = scenario.expect("checked above");
    Ok(RunConfig {
        scenario,
        cavity: cavity.expect("checked above"),
        control: control.expect("checked above"),
        grid: grid.expect("checked above"),
        spectrum: spectrum.expect("checked above"),
        sweep: sweep.expect("checked above"),
        stem: stem.expect("checked above").unwrap_or_else(|| scenario.name().to_string()),
    })
}

#[allow(non_snake_case)]
fn read_cavity(r: &mut Reader<'_>, root: &Table<'_>) -> Option<CavitySpec> {
    let Some(t) = r.table(root, "cavity") else {
        if get(root, "cavity").is_none() {
            r.error(None, "missing table `[cavity]`");
        }
        return None;
    };
    let at = key_offset(root, "cavity").unwrap_or(0);
    r.reject_unknown(t, "cavity", CAVITY);
    let L0 = r.required_float(t, "cavity", "L0", at);
    let M = r.required_float(t, "cavity", "M", at);
    let omega_osc = r.required_float(t, "cavity", "omega_osc", at);
    let omega_cut = r.required_float(t, "cavity", "omega_cut", at);
    let Ly = r.optional_float(t, "cavity", "Ly");
    let Lz = r.optional_float(t, "cavity", "Lz");
    let defaults = PhysicalConstants::default();
    let hbar = r.optional_float(t, "cavity", "hbar");
    let c = r.optional_float(t, "cavity", "c");
    Some(CavitySpec {
        L0: L0?,
        Ly: Ly?,
        Lz: Lz?,
        M: M?,
        omega_osc: omega_osc?,
        omega_cut: omega_cut?,
        constants: PhysicalConstants {
            hbar: hbar?.unwrap_or(defaults.hbar),
            c: c?.unwrap_or(defaults.c),
        },
    })
}

fn read_sum(r: &mut Reader<'_>, root: &Table<'_>) -> Option<SumControl> {
    let mut control = SumControl::default();
    if get(root, "sum").is_none() {
        return Some(control);
    }
    let t = r.table(root, "sum")?;
    r.reject_unknown(t, "sum", SUM);
    let mut ok = true;
    if let Some(v) = get(t, "max_axial") {
        match r.count(v, "sum.max_axial", 1) {
            Some(n) => control.max_axial = n,
            None => ok = false,
        }
    }
    if let Some(v) = get(t, "max_transverse") {
        match r.count(v, "sum.max_transverse", 0) {
            Some(n) => control.max_transverse = n,
            None => ok = false,
        }
    }
    if let Some(v) = get(t, "rel_tol") {
        match r.float(v, "sum.rel_tol") {
            Some(x) if x > 0.0 && x.is_finite() => control.rel_tol = x,
            Some(x) => {
                r.error(Some(v.span().start), format!("`sum.rel_tol` must be > 0, got {x:e}"));
                ok = false;
            }
            None => ok = false,
        }
    }
    if let Some(v) = get(t, "cutoff") {
        match r.string(v, "sum.cutoff") {
            Some("exponential") => control.cutoff_scheme = CutoffScheme::Exponential,
            Some("sharp") => control.cutoff_scheme = CutoffScheme::Sharp,
            Some(s) => {
                r.error(Some(v.span().start), format!("unknown cutoff `{s}` (expected exponential or sharp)"));
                ok = false;
            }
            None => ok = false,
        }
    }
    ok.then_some(control)
}

fn read_grid(r: &mut Reader<'_>, root: &Table<'_>) -> Option<GridSpec> {
    let mut grid = GridSpec {
        points: 1000,
        window: None,
    };
    if get(root, "grid").is_none() {
        return Some(grid);
    }
    let t = r.table(root, "grid")?;
    r.reject_unknown(t, "grid", GRID);
    let mut ok = true;
    if let Some(v) = get(t, "points") {
        match r.count(v, "grid.points", 1) {
            Some(n) => grid.points = n,
            None => ok = false,
        }
    }
    if let Some(v) = get(t, "window") {
        match r.float(v, "grid.window") {
            Some(w) if w > 0.0 && w.is_finite() => grid.window = Some(w),
            Some(w) => {
                r.error(Some(v.span().start), format!("`grid.window` must be > 0, got {w:e}"));
                ok = false;
            }
            None => ok = false,
        }
    }
    ok.then_some(grid)
}

/// `Some(None)` when the block is absent.
fn read_spectrum(r: &mut Reader<'_>, root: &Table<'_>) -> Option<Option<SpectrumModes>> {
    if get(root, "spectrum").is_none() {
        return Some(None);
    }
    let t = r.table(root, "spectrum")?;
    r.reject_unknown(t, "spectrum", SPECTRUM);
    let at = key_offset(root, "spectrum");
    if let Some(v) = get(t, "modes") {
        if get(t, "max_axial").is_some() || get(t, "max_transverse").is_some() {
            r.error(Some(v.span().start), "`spectrum.modes` excludes `max_axial`/`max_transverse`");
            return None;
        }
        let DeValue::Array(items) = v.get_ref() else {
            r.error(Some(v.span().start), "`spectrum.modes` must be an array of [m_x, m_y, m_z]");
            return None;
        };
        if items.is_empty() {
            r.error(Some(v.span().start), "`spectrum.modes` is empty");
            return None;
        }
        let mut modes = Vec::new();
        let mut ok = true;
        for item in items.iter() {
            let triple = match item.get_ref() {
                DeValue::Array(a) if a.len() == 3 => {
                    let n: Vec<Option<i64>> = a.iter().map(|x| r.integer(x, "spectrum.modes entry")).collect();
                    match (n[0], n[1], n[2]) {
                        (Some(x), Some(y), Some(z)) => Some((x, y, z)),
                        _ => None,
                    }
                }
                _ => {
                    r.error(Some(item.span().start), "each mode must be [m_x, m_y, m_z]");
                    None
                }
            };
            match triple {
                Some((x, y, z)) if x >= 1 && x <= u32::MAX as i64 && y.abs() <= i32::MAX as i64 && z.abs() <= i32::MAX as i64 => {
                    modes.push(ModeIndex3::new(x as u32, y as i32, z as i32).expect("n_x >= 1"));
                }
                Some(_) => {
                    r.error(Some(item.span().start), "mode needs m_x >= 1 and indices in range");
                    ok = false;
                }
                None => ok = false,
            }
        }
        return ok.then_some(Some(SpectrumModes::List(modes)));
    }
    let ax = match get(t, "max_axial") {
        Some(v) => r.count(v, "spectrum.max_axial", 1),
        None => {
            r.error(at, "`[spectrum]` needs `modes` or `max_axial`");
            None
        }
    };
    let tr = match get(t, "max_transverse") {
        Some(v) => r.count(v, "spectrum.max_transverse", 0),
        None => Some(0),
    };
    let (ax, tr) = (ax?, tr?);
    if ax > u32::MAX as usize || tr > i32::MAX as usize {
        r.error(at, "spectrum bounds out of range");
        return None;
    }
    Some(Some(SpectrumModes::Bounds {
        max_axial: ax as u32,
        max_transverse: tr as u32,
    }))
}

fn read_sweep(r: &mut Reader<'_>, root: &Table<'_>) -> Option<Option<SweepSpec>> {
    if get(root, "sweep").is_none() {
        return Some(None);
    }
    let t = r.table(root, "sweep")?;
    r.reject_unknown(t, "sweep", SWEEP);
    let at = key_offset(root, "sweep");
    let profile = match get(t, "profile") {
        Some(v) => match r.string(v, "sweep.profile") {
            Some("profile1d") => Some(Scenario::Profile1D),
            Some("profile3d") => Some(Scenario::Profile3D),
            Some(s) => {
                r.error(Some(v.span().start), format!("`sweep.profile` must be profile1d or profile3d, got `{s}`"));
                None
            }
            None => None,
        },
        None => Some(Scenario::Profile1D),
    };
    let parameter = match get(t, "parameter") {
        Some(v) => match r.string(v, "sweep.parameter") {
            Some(s) => match SweepParameter::from_name(s) {
                Some(p) => Some(p),
                None => {
                    r.error(
                        Some(v.span().start),
                        format!("unknown sweep parameter `{s}` (expected omega_cut, M or omega_osc)"),
                    );
                    None
                }
            },
            None => None,
        },
        None => {
            r.error(at, "missing field `sweep.parameter`");
            None
        }
    };
    let values = match get(t, "values") {
        Some(v) => match v.get_ref() {
            DeValue::Array(items) if items.is_empty() => {
                r.error(Some(v.span().start), "`sweep.values` is empty");
                None
            }
            DeValue::Array(items) => {
                let vals: Vec<Option<f64>> = items.iter().map(|x| r.float(x, "sweep.values entry")).collect();
                vals.into_iter().collect::<Option<Vec<f64>>>()
            }
            other => {
                r.error(Some(v.span().start), format!("`sweep.values` must be an array, found {}", other.type_str()));
                None
            }
        },
        None => {
            r.error(at, "missing field `sweep.values`");
            None
        }
    };
    Some(Some(SweepSpec {
        profile: profile?,
        parameter: parameter?,
        values: values?,
    }))
}

/// `Some(None)` means no stem given.
fn read_output(r: &mut Reader<'_>, root: &Table<'_>) -> Option<Option<String>> {
    if get(root, "output").is_none() {
        return Some(None);
    }
    let t = r.table(root, "output")?;
    r.reject_unknown(t, "output", OUTPUT);
    let mut ok = true;
    if let Some(v) = get(t, "format") {
        match r.string(v, "output.format") {
            Some("csv") => {}
            Some(s) => {
                r.error(Some(v.span().start), format!("unsupported output format `{s}` (only csv)"));
                ok = false;
            }
            None => ok = false,
        }
    }
    let stem = match get(t, "stem") {
        Some(v) => match r.string(v, "output.stem") {
            Some(s) if valid_stem(s) => Some(s.to_string()),
            Some(s) => {
                r.error(Some(v.span().start), format!("`output.stem` must be a plain file name, got `{s}`"));
                ok = false;
                None
            }
            None => {
                ok = false;
                None
            }
        },
        None => None,
    };
    ok.then_some(stem)
}

fn valid_stem(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.')) && !s.starts_with('.')
}

/// Render a float so that TOML reads it back bit-exactly.
pub(crate) fn toml_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:e}")
    }
}

pub(crate) fn toml_string(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

impl RunConfig {
    /// The configuration as a document that [`parse_config`] reads back to
    /// an identical value.
    pub fn to_toml(&self) -> String {
        let mut s = String::new();
        let c = &self.cavity;
        s += &format!("scenario = {}\n\n[cavity]\n", toml_string(self.scenario.name()));
        s += &format!("L0 = {}\n", toml_float(c.L0));
        if let Some(v) = c.Ly {
            s += &format!("Ly = {}\n", toml_float(v));
        }
        if let Some(v) = c.Lz {
            s += &format!("Lz = {}\n", toml_float(v));
        }
        s += &format!("M = {}\n", toml_float(c.M));
        s += &format!("omega_osc = {}\n", toml_float(c.omega_osc));
        s += &format!("omega_cut = {}\n", toml_float(c.omega_cut));
        s += &format!("hbar = {}\n", toml_float(c.constants.hbar));
        s += &format!("c = {}\n", toml_float(c.constants.c));
        let k = &self.control;
        s += "\n[sum]\n";
        s += &format!("max_axial = {}\n", k.max_axial);
        s += &format!("max_transverse = {}\n", k.max_transverse);
        s += &format!("rel_tol = {}\n", toml_float(k.rel_tol));
        let cutoff = match k.cutoff_scheme {
            CutoffScheme::Exponential => "exponential",
            CutoffScheme::Sharp => "sharp",
        };
        s += &format!("cutoff = {}\n", toml_string(cutoff));
        s += &format!("\n[grid]\npoints = {}\n", self.grid.points);
        if let Some(w) = self.grid.window {
            s += &format!("window = {}\n", toml_float(w));
        }
        match &self.spectrum {
            Some(SpectrumModes::Bounds {
                max_axial,
                max_transverse,
            }) => {
                s += &format!("\n[spectrum]\nmax_axial = {max_axial}\nmax_transverse = {max_transverse}\n");
            }
            Some(SpectrumModes::List(modes)) => {
                let items: Vec<String> = modes
                    .iter()
                    .map(|m| format!("[{}, {}, {}]", m.nx(), m.ny(), m.nz()))
                    .collect();
                s += &format!("\n[spectrum]\nmodes = [{}]\n", items.join(", "));
            }
            None => {}
        }
        if let Some(sw) = &self.sweep {
            let values: Vec<String> = sw.values.iter().map(|&v| toml_float(v)).collect();
            s += &format!(
                "\n[sweep]\nprofile = {}\nparameter = {}\nvalues = [{}]\n",
                toml_string(sw.profile.name()),
                toml_string(sw.parameter.name()),
                values.join(", ")
            );
        }
        s += &format!("\n[output]\nstem = {}\nformat = \"csv\"\n", toml_string(&self.stem));
        s
    }
}
