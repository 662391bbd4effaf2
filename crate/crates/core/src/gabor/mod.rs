//! Gabor filter banks and Gabor-Radon descriptors.
//!
//! A bank of `scales x orientations` complex kernels is convolved with the
//! resized sinogram of an image. The response magnitudes, pooled in
//! `d1 x d2` blocks, form the real-valued feature vector used for
//! classification; each pooled block thresholded at its median forms the
//! barcode used for Hamming search.

mod bank;
mod convolve;
mod features;

pub use bank::{build_bank, sigma_for, ComplexPlane, GaborBank, GaborKernel, GaborParams};
pub use convolve::convolve;
pub use features::{
    binarize_block, block_mean_pool, extract_grf_grbf, vector_dimension, Extraction, FeatureVector,
    GaborRadonBarcode, GrfExtractor, SINOGRAM_SIDE,
};
