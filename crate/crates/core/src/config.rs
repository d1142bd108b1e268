//! TOML map configuration.
//!
//! ```toml
//! family = "henon"            # henon | fornaess-wu-h1 | fornaess-wu-h2 | shift-like
//!
//! [[stages]]                  # henon only, applied in order
//! p = [[-6.0, 0.0], [0.0, 0.0], [1.0, 0.0]]   # c_0 .. c_m as [re, im]
//! a = [1.0, 0.0]
//! ```
//!
//! Fornæss–Wu maps take `p_terms = [{ x = 2, y = 0, c = [1.0, 0.0] }, ...]`,
//! `q`, `a` and (for H2) `b`. Shift-like maps take `n`, `p` and `a`.
//! A bare number is accepted wherever a complex `[re, im]` pair is expected.
//! Unknown fields are rejected.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::map::{FwKind, HenonStage, MapSpec, PTable};
use crate::poly::Poly1;

#[derive(Clone, Copy, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Cx {
    Pair([f64; 2]),
    Real(f64),
}

impl From<Cx> for Complex64 {
    fn from(c: Cx) -> Complex64 {
        match c {
            Cx::Pair([re, im]) => Complex64::new(re, im),
            Cx::Real(re) => Complex64::new(re, 0.0),
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StageConfig {
    pub p: Vec<Cx>,
    pub a: Cx,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub x: u32,
    pub y: u32,
    pub c: Cx,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MapConfig {
    pub family: String,
    pub n: Option<usize>,
    #[serde(default)]
    pub stages: Vec<StageConfig>,
    pub p_terms: Option<Vec<TermConfig>>,
    pub q: Option<Vec<Cx>>,
    pub p: Option<Vec<Cx>>,
    pub a: Option<Cx>,
    pub b: Option<Cx>,
}

fn poly(field: &str, coeffs: &[Cx]) -> Result<Poly1> {
    Poly1::new(coeffs.iter().map(|&c| c.into()).collect())
        .map_err(|e| Error::Config(format!("field `{field}`: {e}")))
}

fn require<T: Clone>(family: &str, field: &str, v: &Option<T>) -> Result<T> {
    v.clone()
        .ok_or_else(|| Error::Config(format!("family `{family}` requires field `{field}`")))
}

fn forbid(family: &str, fields: &[(&str, bool)]) -> Result<()> {
    match fields.iter().find(|f| f.1) {
        Some((name, _)) => Err(Error::Config(format!("field `{name}` is not used by family `{family}`"))),
        None => Ok(()),
    }
}

impl MapConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        MapConfig::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn build(&self) -> Result<MapSpec> {
        let fam = self.family.as_str();
        let n_ok = |expected: usize| match self.n {
            Some(n) if n != expected => {
                Err(Error::Config(format!("family `{fam}` has n = {expected}, got n = {n}")))
            }
            _ => Ok(()),
        };
        match fam {
            "henon" => {
                n_ok(2)?;
                forbid(fam, &[
                    ("p_terms", self.p_terms.is_some()),
                    ("q", self.q.is_some()),
                    ("p", self.p.is_some()),
                    ("a", self.a.is_some()),
                    ("b", self.b.is_some()),
                ])?;
                if self.stages.is_empty() {
                    return Err(Error::Config("family `henon` requires at least one [[stages]] entry".into()));
                }
                let stages = self
                    .stages
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        HenonStage::new(poly(&format!("stages[{i}].p"), &s.p)?, s.a.into())
                            .map_err(|e| Error::Config(format!("stages[{i}]: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                MapSpec::henon_composition(stages)
            }
            "fornaess-wu-h1" | "fornaess-wu-h2" => {
                n_ok(3)?;
                forbid(fam, &[("stages", !self.stages.is_empty()), ("p", self.p.is_some())])?;
                let kind = if fam.ends_with("h1") { FwKind::H1 } else { FwKind::H2 };
                let terms = require(fam, "p_terms", &self.p_terms)?
                    .iter()
                    .map(|t| (t.x, t.y, t.c.into()))
                    .collect();
                let p = PTable::new(terms).map_err(|e| Error::Config(format!("field `p_terms`: {e}")))?;
                let q = poly("q", &require(fam, "q", &self.q)?)?;
                let a: Complex64 = require(fam, "a", &self.a)?.into();
                let b: Complex64 = match kind {
                    FwKind::H1 => {
                        forbid(fam, &[("b", self.b.is_some())])?;
                        Complex64::new(0.0, 0.0)
                    }
                    FwKind::H2 => require(fam, "b", &self.b)?.into(),
                };
                MapSpec::fornaess_wu(kind, p, q, a, b)
            }
            "shift-like" => {
                forbid(fam, &[
                    ("stages", !self.stages.is_empty()),
                    ("p_terms", self.p_terms.is_some()),
                    ("q", self.q.is_some()),
                    ("b", self.b.is_some()),
                ])?;
                let n = require(fam, "n", &self.n)?;
                let p = poly("p", &require(fam, "p", &self.p)?)?;
                MapSpec::shift_like(n, p, require(fam, "a", &self.a)?.into())
            }
            other => Err(Error::Config(format!(
                "unknown family `{other}` (expected henon, fornaess-wu-h1, fornaess-wu-h2 or shift-like)"
            ))),
        }
    }
}

pub fn load_map(path: &Path) -> Result<MapSpec> {
    MapConfig::load(path)?.build()
}

pub fn parse_map(text: &str) -> Result<MapSpec> {
    MapConfig::parse(text)?.build()
}
