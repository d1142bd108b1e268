//! Counter-based random streams keyed by `(seed, task index)`.
//!
//! Every parallel task draws from its own stream, so results never depend on
//! how tasks are scheduled across workers.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TaskRng = ChaCha8Rng;

pub fn task_rng(seed: u64, task: u64) -> TaskRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}

/// Uniform point of the closed disk of radius `r`.
pub fn disk(rng: &mut TaskRng, r: f64) -> Complex64 {
    let rho = r * rng.random::<f64>().sqrt();
    let theta = std::f64::consts::TAU * rng.random::<f64>();
    Complex64::from_polar(rho, theta)
}

/// Modulus log-uniform on `[lo, hi]`, uniform phase.
pub fn log_annulus(rng: &mut TaskRng, lo: f64, hi: f64) -> Complex64 {
    let rho = (lo.ln() + (hi / lo).ln() * rng.random::<f64>()).exp();
    let theta = std::f64::consts::TAU * rng.random::<f64>();
    Complex64::from_polar(rho, theta)
}

pub fn uniform(rng: &mut TaskRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}
