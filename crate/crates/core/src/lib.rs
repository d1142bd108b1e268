//! Numerical laboratory for regular polynomial automorphisms of `C^n`.

pub mod config;
pub mod dimension;
pub mod error;
pub mod filtration;
pub mod io;
pub mod linalg;
pub mod map;
pub mod orbit;
pub mod par;
pub mod poly;
pub mod potential;
pub mod rng;
pub mod thermo;

pub use error::{Error, Result};
pub use linalg::{CMat, CPoint, ScaledMat};
pub use map::{Direction, Dynamics, FwKind, HenonStage, MapSpec, PTable};
pub use poly::{MultiPoly, Poly1};
pub use thermo::Weight;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
