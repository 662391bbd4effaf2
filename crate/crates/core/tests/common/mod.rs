//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use grcbir::barcode::BitCode;
use grcbir::gabor::ComplexPlane;
use grcbir::imaging::Plane;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_plane(rng: &mut ChaCha8Rng, w: usize, h: usize) -> Plane {
    Plane::from_fn(w, h, |_, _| rng.gen::<f64>())
}

pub fn random_code(rng: &mut ChaCha8Rng, len: usize) -> BitCode {
    BitCode::from_bools(&(0..len).map(|_| rng.gen()).collect::<Vec<bool>>())
}

/// Pixel value with zeros outside the grid.
fn pixel(img: &Plane, x: i64, y: i64) -> f64 {
    if x < 0 || y < 0 || x >= img.width() as i64 || y >= img.height() as i64 {
        0.0
    } else {
        img.data()[y as usize * img.width() + x as usize]
    }
}

/// Bilinear interpolation written out from the four-corner formula.
pub fn bilinear(img: &Plane, x: f64, y: f64) -> f64 {
    let (x0, y0) = (x.floor() as i64, y.floor() as i64);
    let (a, b) = (x - x0 as f64, y - y0 as f64);
    pixel(img, x0, y0) * (1.0 - a) * (1.0 - b)
        + pixel(img, x0 + 1, y0) * a * (1.0 - b)
        + pixel(img, x0, y0 + 1) * (1.0 - a) * b
        + pixel(img, x0 + 1, y0 + 1) * a * b
}

/// Line integrals of the interpolated image, one fine step at a time.
///
/// Returns `[bin][angle]` with the same bin count and angle grid as the
/// library transform: bin `b` is the line `x·cosθ + y·sinθ = b − n_bins/2`
/// with `y` pointing up and the origin at the image center.
pub fn radon_oracle(img: &Plane, n_angles: usize, step: f64) -> Vec<Vec<f64>> {
    let side = img.width();
    let mut n_bins = (side as f64 * 2f64.sqrt()).ceil() as usize;
    if n_bins % 2 == 0 {
        n_bins += 1;
    }
    let c = (side as f64 - 1.0) / 2.0;
    let half_len = side as f64;
    let steps = (2.0 * half_len / step).round() as usize;
    let mut out = vec![vec![0.0; n_angles]; n_bins];
    for k in 0..n_angles {
        let theta = (k as f64 * 180.0 / n_angles as f64).to_radians();
        let (s, co) = theta.sin_cos();
        for (b, row) in out.iter_mut().enumerate() {
            let rho = b as f64 - (n_bins / 2) as f64;
            let mut acc = 0.0;
            for i in 0..steps {
                let t = -half_len + (i as f64 + 0.5) * step;
                let x = rho * co - t * s;
                let y = rho * s + t * co;
                acc += bilinear(img, c + x, c - y);
            }
            row[k] = acc * step;
        }
    }
    out
}

/// Same-size zero-padded convolution, four nested loops.
pub fn naive_convolve(img: &Plane, kernel: &ComplexPlane) -> Vec<Complex64> {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let (kw, kh) = (kernel.width as i64, kernel.height as i64);
    let mut out = vec![Complex64::new(0.0, 0.0); (w * h) as usize];
    for y in 0..h {
        for x in 0..w {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..kh {
                for i in 0..kw {
                    let sx = x - (i - kw / 2);
                    let sy = y - (j - kh / 2);
                    acc += kernel.data[(j * kw + i) as usize] * pixel(img, sx, sy);
                }
            }
            out[(y * w + x) as usize] = acc;
        }
    }
    out
}

/// Hamming distance one bit at a time.
pub fn naive_hamming(a: &BitCode, b: &BitCode) -> u32 {
    (0..a.len()).filter(|&i| a.get(i) != b.get(i)).count() as u32
}

/// Resize by sampling the pixel-center-aligned bilinear surface.
pub fn resize_oracle(img: &Plane, out_w: usize, out_h: usize) -> Plane {
    let sx = img.width() as f64 / out_w as f64;
    let sy = img.height() as f64 / out_h as f64;
    Plane::from_fn(out_w, out_h, |x, y| {
        let u = ((x as f64 + 0.5) * sx - 0.5).clamp(0.0, (img.width() - 1) as f64);
        let v = ((y as f64 + 0.5) * sy - 0.5).clamp(0.0, (img.height() - 1) as f64);
        // Clamped coordinates never need the zero ring except at the exact
        // last row/column, where the neighbor weight is 0.
        bilinear(img, u, v)
    })
}

/// Relative error with an absolute floor for near-zero references.
pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-12)
}
