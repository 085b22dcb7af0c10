//! Command-line driver: configuration files, bundled presets and output
//! emission for the `mobile-wall` library.

pub mod config;
pub mod output;
pub mod run;

pub use config::{parse_config, Diagnostics, RunConfig, Scenario};
pub use output::OutputBundle;
pub use run::{run, run_profile1d, run_profile3d, run_spectrum, run_sweep, RunError};

/// Bundled configurations mirroring the published figures.
pub const PRESETS: &[(&str, &str)] = &[
    ("fig1", include_str!("../presets/fig1.toml")),
    ("fig2", include_str!("../presets/fig2.toml")),
    ("fig3", include_str!("../presets/fig3.toml")),
    ("fig3-desk", include_str!("../presets/fig3-desk.toml")),
];

pub fn preset(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|p| p.0 == name).map(|p| p.1)
}
