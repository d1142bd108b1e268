//! wasm-bindgen bindings for the static demo page in `www/`.

use wasm_bindgen::prelude::*;

use automorph::config::parse_map;
use automorph::filtration::{choose_radius, FiltrationSpec, VerifyBudget};
use automorph::io::green_gray;
use automorph::orbit::{basin_map, census_range, find_attracting_cycles, GridWindow, NewtonOptions, PeriodicOrbit};
use automorph::potential::{green_grid, DEFAULT_BIG_RADIUS};
use automorph::thermo::{bowen_ruelle_root, pressure_curve, t_grid, DEFAULT_BRACKET};
use automorph::{Direction, MapSpec, Weight};

const RADIUS_SAMPLES: usize = 2000;
const BUDGET: usize = 200;

/// Seeds kept small so a census finishes in a browser tab.
fn newton() -> NewtonOptions {
    NewtonOptions { grid: 60, random_seeds: 2000, ..NewtonOptions::default() }
}

fn js(e: automorph::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// A map parsed from TOML with a verified filtration radius.
#[wasm_bindgen]
pub struct Demo {
    map: MapSpec,
    regions: FiltrationSpec,
    attractors: Vec<PeriodicOrbit>,
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(config: &str) -> Result<Demo, JsError> {
        let map = parse_map(config).map_err(js)?;
        if map.dim() != 2 {
            return Err(JsError::new("the demo draws the real (x, y) plane and needs n = 2"));
        }
        let regions = choose_radius(&map, VerifyBudget { samples: RADIUS_SAMPLES, ..VerifyBudget::default() }).map_err(js)?;
        Ok(Demo { map, regions, attractors: Vec::new() })
    }

    pub fn radius(&self) -> f64 {
        self.regions.radius
    }

    pub fn det(&self) -> f64 {
        self.map.det_df().norm()
    }

    /// Searches for attracting cycles of period up to `kmax`; returns how many.
    pub fn find_attractors(&mut self, kmax: usize) -> usize {
        self.attractors = find_attracting_cycles(&self.map, &self.regions, kmax, &newton());
        self.attractors.len()
    }

    /// Gray basin image of the square `[-half, half]^2`, row-major from the top.
    pub fn basins(&self, size: usize, half: f64) -> Vec<u8> {
        let window = GridWindow::real_plane(2, (-half, half), (-half, half), size, size);
        basin_map(&self.map, &self.regions, &self.attractors, &window, BUDGET, Direction::Forward).gray()
    }

    /// Gray image of `G+` (or `G-`) over the same square.
    pub fn green(&self, size: usize, half: f64, forward: bool) -> Vec<u8> {
        let window = GridWindow::real_plane(2, (-half, half), (-half, half), size, size);
        let dir = if forward { Direction::Forward } else { Direction::Backward };
        green_gray(&green_grid(&self.map, dir, &window, BUDGET, DEFAULT_BIG_RADIUS))
    }

    /// Pressure of the unstable weight at period `kmax` on `n` points of
    /// `[0, 2]`, followed by the root of the last census.
    pub fn pressure(&self, kmax: usize, n: usize) -> Result<Vec<f64>, JsError> {
        let censuses = census_range(&self.map, &self.regions, kmax, &newton());
        let last = censuses.last().ok_or_else(|| JsError::new("kmax must be at least 1"))?;
        let curve = pressure_curve(last, Weight::Unstable, &t_grid(0.0, 2.0, n)).map_err(js)?;
        let root = bowen_ruelle_root(&censuses, Weight::Unstable, DEFAULT_BRACKET).map_err(js)?;
        let mut out: Vec<f64> = curve.points.iter().map(|p| p.1).collect();
        out.push(root.t);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ATTRACTING: &str = "family = \"henon\"\n[[stages]]\np = [-0.1, 0.0, 1.0]\na = 0.3\n";

    #[test]
    fn basin_image_has_requested_size() {
        let mut d = Demo::new(ATTRACTING).unwrap();
        assert_eq!(d.find_attractors(2), 1);
        let img = d.basins(32, 2.0);
        assert_eq!(img.len(), 32 * 32);
        // gray 40 is the first cycle's basin, 95 and up is escape
        assert!(img.contains(&40));
        assert!(img.iter().any(|&v| v >= 95));
    }

    #[test]
    fn green_vanishes_somewhere_and_not_everywhere() {
        let d = Demo::new(ATTRACTING).unwrap();
        let img = d.green(32, 2.0, true);
        assert!(img.contains(&0));
        assert!(img.iter().any(|&v| v > 0));
    }

    #[test]
    fn pressure_decreases_to_its_root() {
        let d = Demo::new("family = \"henon\"\n[[stages]]\np = [-6.0, 0.0, 1.0]\na = 1.0\n").unwrap();
        let out = d.pressure(3, 5).unwrap();
        let (curve, root) = out.split_at(5);
        assert!(curve.windows(2).all(|w| w[1] < w[0]));
        assert!((curve[0] - std::f64::consts::LN_2).abs() < 1e-12);
        assert!(root[0] > 0.0 && root[0] < 2.0);
    }
}
