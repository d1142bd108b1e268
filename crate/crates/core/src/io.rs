//! Binary portable graymaps and gray-level scalings.

use crate::potential::GreenEval;

/// An 8-bit binary PGM (`P5`), row-major from the top-left corner.
pub fn pgm(width: usize, height: usize, pixels: &[u8]) -> Vec<u8> {
    assert_eq!(pixels.len(), width * height, "pixel buffer does not match {width}x{height}");
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(pixels);
    out
}

/// Gray levels for Green function values: 0 on `K`, brighter with `log(1 + G)`
/// scaled by the largest value on the grid.
pub fn green_gray(values: &[GreenEval]) -> Vec<u8> {
    let top = values.iter().map(|g| g.value.ln_1p()).fold(0.0, f64::max);
    values
        .iter()
        .map(|g| {
            if top == 0.0 || !g.escaped {
                0
            } else {
                (255.0 * g.value.ln_1p() / top).round().clamp(1.0, 255.0) as u8
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_payload() {
        let img = pgm(2, 1, &[0, 255]);
        assert_eq!(&img[..11], b"P5\n2 1\n255\n");
        assert_eq!(&img[11..], &[0, 255]);
    }
}
