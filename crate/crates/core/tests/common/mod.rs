#![allow(dead_code)]

use std::path::PathBuf;

use automorph::config::load_map;
use automorph::MapSpec;

pub const FIXTURES: [&str; 7] = [
    "horseshoe",
    "horseshoe-dissipative",
    "attracting",
    "two-stage",
    "fw-h1",
    "fw-h2",
    "shift3",
];

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(format!("{name}.toml"))
}

pub fn fixture(name: &str) -> MapSpec {
    load_map(&config_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn fixtures() -> Vec<(&'static str, MapSpec)> {
    FIXTURES.iter().map(|&n| (n, fixture(n))).collect()
}
