use crate::barcode::{median, BitCode};
use crate::error::{Error, Result};
use crate::imaging::{GrayImage, Plane};
use crate::radon::{radon_transform, Sinogram};

use super::bank::GaborBank;
use super::convolve::convolve;

/// Default side of the resized sinogram.
pub const SINOGRAM_SIDE: usize = 32;

/// Gabor-Radon feature vector: pooled response magnitudes, one
/// row-major block per filter in scale-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f32>,
}

impl FeatureVector {
    pub fn new(values: Vec<f32>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.values
    }
}

impl From<Vec<f32>> for FeatureVector {
    fn from(values: Vec<f32>) -> Self {
        Self { values }
    }
}

/// Blockwise-median binarization of a [`FeatureVector`], same layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaborRadonBarcode {
    pub bits: BitCode,
}

/// `M·N·n_g / (d1·d2)`.
pub fn vector_dimension(m: usize, n: usize, n_g: usize, d1: usize, d2: usize) -> Result<usize> {
    let numerator = m * n * n_g;
    let denominator = d1 * d2;
    if denominator == 0 || numerator % denominator != 0 || numerator == 0 {
        return Err(Error::NonIntegerDimension {
            numerator,
            denominator,
        });
    }
    Ok(numerator / denominator)
}

/// Non-overlapping mean pooling with `d1 x d2` (rows x cols) blocks.
pub fn block_mean_pool(
    values: &[f64],
    width: usize,
    height: usize,
    d1: usize,
    d2: usize,
) -> Vec<f64> {
    assert!(
        height % d1 == 0 && width % d2 == 0,
        "block size must divide the plane"
    );
    let (ph, pw) = (height / d1, width / d2);
    let area = (d1 * d2) as f64;
    let mut out = vec![0.0; ph * pw];
    for by in 0..ph {
        for bx in 0..pw {
            let mut sum = 0.0;
            for y in by * d1..(by + 1) * d1 {
                sum += values[y * width + bx * d2..y * width + (bx + 1) * d2]
                    .iter()
                    .sum::<f64>();
            }
            out[by * pw + bx] = sum / area;
        }
    }
    out
}

/// Bits `v >= median(block)` for one block.
pub fn binarize_block(block: &[f64]) -> Vec<bool> {
    match median(block) {
        Some(t) => block.iter().map(|&v| v >= t).collect(),
        None => Vec::new(),
    }
}

/// Sinogram-to-descriptor pipeline for a fixed bank and geometry.
#[derive(Debug, Clone)]
pub struct GrfExtractor {
    bank: GaborBank,
    n_angles: usize,
    sinogram_side: usize,
    d1: usize,
    d2: usize,
}

/// Everything one extraction produces.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub sinogram: Sinogram,
    pub resized: Plane,
    pub features: FeatureVector,
    pub barcode: GaborRadonBarcode,
}

impl GrfExtractor {
    pub fn new(
        bank: GaborBank,
        n_angles: usize,
        sinogram_side: usize,
        d1: usize,
        d2: usize,
    ) -> Result<Self> {
        if n_angles == 0 {
            return Err(Error::InvalidParameter(
                "n_angles must be at least 1".into(),
            ));
        }
        if d1 == 0 || d2 == 0 || sinogram_side % d1 != 0 || sinogram_side % d2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "pooling {d1}x{d2} must divide the {sinogram_side}-pixel sinogram"
            )));
        }
        let p = &bank.params;
        if p.win_w > sinogram_side || p.win_h > sinogram_side {
            return Err(Error::KernelLargerThanImage {
                kernel_w: p.win_w,
                kernel_h: p.win_h,
                image_w: sinogram_side,
                image_h: sinogram_side,
            });
        }
        Ok(Self {
            bank,
            n_angles,
            sinogram_side,
            d1,
            d2,
        })
    }

    pub fn bank(&self) -> &GaborBank {
        &self.bank
    }

    pub fn vector_dim(&self) -> usize {
        vector_dimension(
            self.sinogram_side,
            self.sinogram_side,
            self.bank.len(),
            self.d1,
            self.d2,
        )
        .expect("validated at construction")
    }

    pub fn block_len(&self) -> usize {
        (self.sinogram_side / self.d1) * (self.sinogram_side / self.d2)
    }

    pub fn extract(&self, img: &GrayImage) -> Result<(FeatureVector, GaborRadonBarcode)> {
        let e = self.extract_full(img)?;
        Ok((e.features, e.barcode))
    }

    pub fn extract_full(&self, img: &GrayImage) -> Result<Extraction> {
        let sinogram = radon_transform(img, self.n_angles)?;
        let side = self.sinogram_side;
        let resized = sinogram.to_plane().resize(side, side);

        let dim = self.vector_dim();
        let mut values = Vec::with_capacity(dim);
        let mut bits = BitCode::zeros(0);
        for kernel in &self.bank.kernels {
            let response = convolve(&resized, &kernel.taps)?;
            let pooled = block_mean_pool(&response.magnitude(), side, side, self.d1, self.d2);
            // Threshold the stored (f32) values so bits are reproducible from the vector.
            let stored: Vec<f32> = pooled.iter().map(|&v| v as f32).collect();
            let as_f64: Vec<f64> = stored.iter().map(|&v| v as f64).collect();
            for b in binarize_block(&as_f64) {
                bits.push(b);
            }
            values.extend(stored);
        }
        debug_assert_eq!(values.len(), dim);
        Ok(Extraction {
            sinogram,
            resized,
            features: FeatureVector::new(values),
            barcode: GaborRadonBarcode { bits },
        })
    }
}

/// One-shot extraction with the default 32x32 sinogram.
pub fn extract_grf_grbf(
    img: &GrayImage,
    bank: &GaborBank,
    n_angles: usize,
    d1: usize,
    d2: usize,
) -> Result<(FeatureVector, GaborRadonBarcode)> {
    GrfExtractor::new(bank.clone(), n_angles, SINOGRAM_SIDE, d1, d2)?.extract(img)
}
