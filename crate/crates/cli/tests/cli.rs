use std::fs;
use std::path::Path;
use std::process::Command;

use mobile_wall::cavity3d::photon_number_axial;
use mobile_wall_cli::config::{SpectrumModes, SweepParameter};
use mobile_wall_cli::output::Cell;
use mobile_wall_cli::{parse_config, preset, run, run_profile1d, run_spectrum, run_sweep, Scenario};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mobile-wall"))
}

fn float(c: &Cell) -> f64 {
    match c {
        Cell::Float(v) => *v,
        Cell::Int(v) => *v as f64,
    }
}

const SMALL_1D: &str = r#"
scenario = "profile1d"

[cavity]
L0 = 10e-6
M = 1e-11
omega_osc = 1e5
omega_cut = 1e15

[grid]
points = 50
"#;

const SPECTRUM: &str = r#"
scenario = "spectrum"

[cavity]
L0 = 10e-6
Ly = 0.5e-4
Lz = 0.5e-4
M = 1e-11
omega_osc = 1e5
omega_cut = 1e15

[spectrum]
max_axial = 4
max_transverse = 2
"#;

#[test]
fn fig1_preset_has_caption_parameters() {
    let cfg = parse_config(preset("fig1").unwrap()).unwrap();
    assert_eq!(cfg.scenario, Scenario::Profile1D);
    assert_eq!(cfg.cavity.L0, 10e-6);
    assert_eq!(cfg.cavity.M, 1e-11);
    assert_eq!(cfg.cavity.omega_osc, 1e5);
    assert_eq!(cfg.cavity.omega_cut, 1e15);
    assert_eq!(cfg.grid.points, 1000);
    for name in ["fig2", "fig3", "fig3-desk"] {
        parse_config(preset(name).unwrap()).unwrap();
    }
    let fig2 = parse_config(preset("fig2").unwrap()).unwrap();
    let sweep = fig2.sweep.unwrap();
    assert_eq!(sweep.parameter, SweepParameter::OmegaCut);
    assert_eq!(sweep.values, vec![6e15, 8e15, 9e15, 1e16]);
}

#[test]
fn missing_mass_is_a_single_diagnostic() {
    let text = SMALL_1D.replace("M = 1e-11\n", "");
    let err = parse_config(&text).unwrap_err();
    assert_eq!(err.errors.len(), 1, "{err}");
    assert!(err.errors[0].message.contains("cavity.M"));
    assert_eq!(err.errors[0].line, Some(4));
}

#[test]
fn every_error_is_reported_with_its_line() {
    let text = r#"scenario = "sweep"
[cavity]
L0 = 10e-6
M = "heavy"
omega_osc = 1e5
omega_cut = 1e15
colour = 1
[sweep]
parameter = "L9"
values = [1.0]
"#;
    let err = parse_config(text).unwrap_err();
    let lines: Vec<_> = err.errors.iter().map(|e| e.line).collect();
    assert_eq!(lines, vec![Some(4), Some(7), Some(9)], "{err}");
    assert!(err.to_string().contains("unknown sweep parameter `L9`"));
}

#[test]
fn sweep_block_only_with_sweep_scenario() {
    let extra = format!("{SMALL_1D}\n[sweep]\nparameter = \"M\"\nvalues = [1e-11]\n");
    assert!(parse_config(&extra).is_err());
    let missing = SMALL_1D.replace("\"profile1d\"", "\"sweep\"");
    assert!(parse_config(&missing).is_err());
    let empty = format!("{missing}\n[sweep]\nparameter = \"M\"\nvalues = []\n");
    let err = parse_config(&empty).unwrap_err();
    assert!(err.to_string().contains("empty"));
}

#[test]
fn invalid_values_and_syntax_are_rejected() {
    for bad in [
        SMALL_1D.replace("L0 = 10e-6", "L0 = -1.0"),
        SMALL_1D.replace("points = 50", "points = 0"),
        SMALL_1D.replace("scenario = \"profile1d\"", "scenario = \"movie\""),
        format!("{SMALL_1D}\n[sum]\ncutoff = \"gaussian\"\n"),
        format!("{SMALL_1D}\nLy = 1e-4\n"),
        SMALL_1D.replace("[grid]", "[grid"),
        SPECTRUM.replace("Ly = 0.5e-4\n", ""),
    ] {
        assert!(parse_config(&bad).is_err(), "accepted:\n{bad}");
    }
}

#[test]
fn sidecar_reproduces_the_run() {
    for text in [SMALL_1D.to_string(), SPECTRUM.to_string(), preset("fig3-desk").unwrap().replace("points = 200", "points = 8")] {
        let cfg = parse_config(&text).unwrap();
        let first = run(&cfg).unwrap();
        let echoed = parse_config(&first.meta).unwrap();
        assert_eq!(echoed, cfg);
        assert_eq!(run(&echoed).unwrap().files(), first.files());
    }
}

#[test]
fn profile1d_columns() {
    let mut cfg = parse_config(preset("fig1").unwrap()).unwrap();
    cfg.grid.points = 1000;
    let bundle = run_profile1d(&cfg).unwrap();
    let (name, table) = &bundle.tables[0];
    assert_eq!(name, "fig1.csv");
    assert_eq!(table.columns, ["x_m", "e2_zeroth", "b2_zeroth", "e2_first", "b2_first", "rho_corr"]);
    assert_eq!(table.len(), 1000);
    for row in table.rows() {
        let v: Vec<f64> = row.iter().map(float).collect();
        assert!(v[5] >= 0.0);
        assert_eq!(v[5], 0.5 * (v[3] + v[4]));
    }
    let csv = table.to_csv();
    assert!(csv.starts_with("x_m,e2_zeroth,b2_zeroth,e2_first,b2_first,rho_corr\n"));
    // shortest round-trip rendering
    for line in csv.lines().skip(1).take(20) {
        for field in line.split(',') {
            let v: f64 = field.parse().unwrap();
            assert_eq!(format!("{v:e}"), field);
        }
    }
}

#[test]
fn spectrum_rows_match_axial_form_and_scale_with_mass() {
    let cfg = parse_config(SPECTRUM).unwrap();
    let light = run_spectrum(&cfg).unwrap();
    let mut heavy_cfg = cfg.clone();
    heavy_cfg.cavity.M *= 2.0;
    let heavy = run_spectrum(&heavy_cfg).unwrap();
    let c = cfg.cavity.cavity_3d().unwrap();
    let (a, b) = (&light.tables[0].1, &heavy.tables[0].1);
    assert_eq!(a.columns, ["m_x", "m_y", "m_z", "occupation"]);
    let Some(SpectrumModes::Bounds { max_axial, max_transverse }) = cfg.spectrum else { panic!() };
    assert_eq!(a.len() as u32, max_axial * (2 * max_transverse + 1).pow(2));
    for (ra, rb) in a.rows().iter().zip(b.rows()) {
        let n = float(&ra[3]);
        assert!(n >= 0.0);
        assert!((n / float(&rb[3]) - 2.0).abs() < 1e-12);
        if float(&ra[1]) == 0.0 && float(&ra[2]) == 0.0 {
            let axial = photon_number_axial(float(&ra[0]) as u32, &c, &cfg.control).unwrap();
            assert!(((n - axial) / axial).abs() < 1e-10);
        }
    }
}

#[test]
fn mass_sweep_peak_ratio() {
    let text = format!(
        "{}\n[sweep]\nparameter = \"M\"\nvalues = [1e-11, 2e-11]\n",
        SMALL_1D.replace("\"profile1d\"", "\"sweep\"")
    );
    let bundle = run_sweep(&parse_config(&text).unwrap()).unwrap();
    let names: Vec<&str> = bundle.tables.iter().map(|t| t.0.as_str()).collect();
    assert_eq!(names, ["sweep_0.csv", "sweep_1.csv", "sweep_summary.csv"]);
    let summary = &bundle.tables[2].1;
    assert_eq!(summary.columns, ["sweep_value", "peak_height", "peak_location", "fwhm"]);
    let h: Vec<f64> = summary.rows().iter().map(|r| float(&r[1])).collect();
    assert!((h[0] / h[1] - 2.0).abs() < 1e-10);
}

fn ls(dir: &Path) -> Vec<String> {
    match fs::read_dir(dir) {
        Ok(d) => d.map(|e| e.unwrap().file_name().into_string().unwrap()).collect(),
        Err(_) => Vec::new(),
    }
}

#[test]
fn exit_codes_and_no_partial_output() {
    let tmp = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = tmp.path().join(name);
        fs::write(&p, text).unwrap();
        p
    };

    let ok = write("ok.toml", SMALL_1D);
    let out = tmp.path().join("ok");
    let s = bin().args(["profile1d", "--config"]).arg(&ok).arg("--out").arg(&out).output().unwrap();
    assert_eq!(s.status.code(), Some(0), "{}", String::from_utf8_lossy(&s.stderr));
    let mut files = ls(&out);
    files.sort();
    assert_eq!(files, ["profile1d.csv", "profile1d.meta.toml"]);

    let cases = [
        ("bad.toml", SMALL_1D.replace("M = 1e-11\n", ""), "profile1d", 2),
        ("wrong.toml", SMALL_1D.to_string(), "spectrum", 2),
        ("slow.toml", format!("{SMALL_1D}\n[sum]\nmax_axial = 5\n"), "profile1d", 3),
    ];
    for (name, text, sub, code) in cases {
        let cfg = write(name, &text);
        let out = tmp.path().join(format!("out-{name}"));
        let s = bin().arg(sub).arg("--config").arg(&cfg).arg("--out").arg(&out).output().unwrap();
        assert_eq!(s.status.code(), Some(code), "{name}: {}", String::from_utf8_lossy(&s.stderr));
        assert!(ls(&out).is_empty(), "{name} left output behind");
    }

    let s = bin().args(["profile1d", "--preset", "fig9"]).output().unwrap();
    assert_eq!(s.status.code(), Some(2));
    let s = bin().args(["profile1d"]).output().unwrap();
    assert_eq!(s.status.code(), Some(2));
}

#[test]
fn grid_flag_overrides_point_count() {
    let tmp = tempfile::tempdir().unwrap();
    let s = bin()
        .args(["profile1d", "--preset", "fig1", "--grid", "7", "--threads", "2", "--out"])
        .arg(tmp.path())
        .output()
        .unwrap();
    assert_eq!(s.status.code(), Some(0));
    let csv = fs::read_to_string(tmp.path().join("fig1.csv")).unwrap();
    assert_eq!(csv.lines().count(), 8);
    let meta = fs::read_to_string(tmp.path().join("fig1.meta.toml")).unwrap();
    assert_eq!(parse_config(&meta).unwrap().grid.points, 7);
}
