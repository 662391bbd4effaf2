//! Two-stage content-based retrieval for radiographs.
//!
//! Images are reduced to Radon sinograms, filtered with a Gabor bank and
//! pooled into real features (for an SVM classifier) and binary codes (for
//! Hamming search inside the predicted class).

pub mod barcode;
pub mod config;
pub mod error;
pub mod gabor;
pub mod imaging;
pub mod irma;
pub mod pipeline;
pub mod radon;
pub mod retrieval;
pub mod store;
pub mod svm;
pub mod synth;

pub use error::{Error, Result};
