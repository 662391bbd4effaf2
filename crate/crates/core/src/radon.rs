//! Discrete Radon transform and Radon barcodes.
//!
//! Angles are sampled on `[0°, 180°)`. For each angle the image is rotated
//! by `-θ` about its center with bilinear interpolation and zero fill, then
//! summed along columns. Each column is sampled twice per pixel step, and
//! every projection is rescaled so that its total equals the image mass.

use crate::barcode::{median, BitCode};
use crate::error::{Error, Result};
use crate::imaging::{GrayImage, Plane};

/// Projection sums indexed by radial bin (rows) and angle (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct Sinogram {
    n_bins: usize,
    n_angles: usize,
    /// Row-major `n_bins x n_angles`.
    data: Vec<f64>,
    angles: Vec<f64>,
}

impl Sinogram {
    /// Builds a sinogram from raw values with evenly spaced angles.
    pub fn from_data(n_bins: usize, n_angles: usize, data: Vec<f64>) -> Result<Self> {
        if n_bins == 0 || n_angles == 0 || data.len() != n_bins * n_angles {
            return Err(Error::InvalidParameter(format!(
                "sinogram {n_bins}x{n_angles} cannot hold {} values",
                data.len()
            )));
        }
        Ok(Self {
            n_bins,
            n_angles,
            data,
            angles: angle_grid(n_angles),
        })
    }

    pub fn n_bins(&self) -> usize {
        self.n_bins
    }

    pub fn n_angles(&self) -> usize {
        self.n_angles
    }

    /// Projection angles in degrees.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn get(&self, bin: usize, angle: usize) -> f64 {
        self.data[bin * self.n_angles + angle]
    }

    pub fn projection(&self, angle: usize) -> Vec<f64> {
        (0..self.n_bins).map(|b| self.get(b, angle)).collect()
    }

    /// Index of the bin through the rotation center.
    pub fn center_bin(&self) -> usize {
        self.n_bins / 2
    }

    /// View as a plane: width = angles, height = radial bins.
    pub fn to_plane(&self) -> Plane {
        Plane::new(self.n_angles, self.n_bins, self.data.clone()).expect("consistent shape")
    }
}

pub fn angle_grid(n_angles: usize) -> Vec<f64> {
    (0..n_angles)
        .map(|k| k as f64 * 180.0 / n_angles as f64)
        .collect()
}

/// Radial bin count for a square image: `ceil(side·√2)`, bumped to odd.
pub fn bins_for_side(side: usize) -> usize {
    let n = (side as f64 * std::f64::consts::SQRT_2).ceil() as usize;
    if n % 2 == 0 {
        n + 1
    } else {
        n
    }
}

pub fn radon_transform(img: &GrayImage, n_angles: usize) -> Result<Sinogram> {
    radon_transform_plane(img.as_plane(), n_angles)
}

/// Same as [`radon_transform`] for an arbitrary non-negative plane.
pub fn radon_transform_plane(img: &Plane, n_angles: usize) -> Result<Sinogram> {
    if img.width() != img.height() {
        return Err(Error::NonSquareInput {
            width: img.width(),
            height: img.height(),
        });
    }
    if n_angles == 0 {
        return Err(Error::InvalidParameter(
            "n_angles must be at least 1".into(),
        ));
    }
    let side = img.width();
    let n_bins = bins_for_side(side);
    let center = (side as f64 - 1.0) / 2.0;
    let center_bin = (n_bins / 2) as f64;
    let angles = angle_grid(n_angles);
    let mass = img.sum();
    // Bilinear support of the image, in centered coordinates.
    let reach = center + 1.0;

    let mut data = vec![0.0; n_bins * n_angles];
    for (k, theta) in angles.iter().enumerate() {
        let (s, c) = theta.to_radians().sin_cos();
        let mut total = 0.0;
        for b in 0..n_bins {
            let rho = b as f64 - center_bin;
            let v = ray_sum(img, rho, s, c, center, reach, n_bins);
            data[b * n_angles + k] = v;
            total += v;
        }
        if total != 0.0 && mass != 0.0 {
            let scale = mass / total;
            for b in 0..n_bins {
                data[b * n_angles + k] *= scale;
            }
        }
    }
    Ok(Sinogram {
        n_bins,
        n_angles,
        data,
        angles,
    })
}

/// Samples taken per unit length along each ray.
const RAY_SAMPLES: usize = 2;

/// Midpoint-rule integral of the bilinear image along the line
/// `x·cosθ + y·sinθ = ρ` (y pointing up), over `n_bins` unit steps.
fn ray_sum(img: &Plane, rho: f64, s: f64, c: f64, center: f64, reach: f64, n_bins: usize) -> f64 {
    let n = n_bins * RAY_SAMPLES;
    let step = 1.0 / RAY_SAMPLES as f64;
    let half = (n as f64 - 1.0) / 2.0;
    // Point at parameter t: (rho·c − t·s, rho·s + t·c). Clip t to the support.
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for (p0, d) in [(rho * c, -s), (rho * s, c)] {
        if d.abs() < 1e-12 {
            if p0.abs() >= reach {
                return 0.0;
            }
        } else {
            let (a, b) = ((-reach - p0) / d, (reach - p0) / d);
            lo = lo.max(a.min(b));
            hi = hi.min(a.max(b));
        }
    }
    if lo >= hi {
        return 0.0;
    }
    let j0 = ((lo / step + half).floor().max(0.0)) as usize;
    let j1 = ((hi / step + half).ceil().min(n as f64 - 1.0)) as usize;
    let (w, h) = (img.width(), img.height());
    let data = img.data();
    let mut sum = 0.0;
    for j in j0..=j1 {
        let t = (j as f64 - half) * step;
        let px = center + rho * c - t * s;
        let py = center - rho * s - t * c;
        let (fx0, fy0) = (px.floor(), py.floor());
        let (x0, y0) = (fx0 as isize, fy0 as isize);
        if x0 >= 0 && y0 >= 0 && (x0 as usize) + 1 < w && (y0 as usize) + 1 < h {
            let (fx, fy) = (px - fx0, py - fy0);
            let i = y0 as usize * w + x0 as usize;
            let top = data[i] + fx * (data[i + 1] - data[i]);
            let bottom = data[i + w] + fx * (data[i + w + 1] - data[i + w]);
            sum += top + fy * (bottom - top);
        } else {
            sum += img.sample_zero_fill(px, py);
        }
    }
    sum * step
}

/// Classic Radon barcode: one binarized, resampled projection per angle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadonBarcode {
    pub bits: BitCode,
    pub n_angles: usize,
    pub bits_per_angle: usize,
}

/// Thresholds each projection at the median of its strictly positive
/// samples after resampling to `bits_per_angle` values.
pub fn radon_barcode(sino: &Sinogram, bits_per_angle: usize) -> RadonBarcode {
    assert!(bits_per_angle > 0, "bits_per_angle must be positive");
    let mut bits = BitCode::zeros(0);
    for k in 0..sino.n_angles {
        let column = Plane::new(1, sino.n_bins, sino.projection(k)).expect("column shape");
        let resampled = column.resize(1, bits_per_angle).into_data();
        for b in binarize_projection(&resampled) {
            bits.push(b);
        }
    }
    RadonBarcode {
        bits,
        n_angles: sino.n_angles,
        bits_per_angle,
    }
}

/// `v >= median(v > 0)`; an all-zero projection gives all-zero bits.
pub fn binarize_projection(values: &[f64]) -> Vec<bool> {
    let positive: Vec<f64> = values.iter().copied().filter(|&v| v > 0.0).collect();
    match median(&positive) {
        Some(threshold) => values.iter().map(|&v| v >= threshold).collect(),
        None => vec![false; values.len()],
    }
}
