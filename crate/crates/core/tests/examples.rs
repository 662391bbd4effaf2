//! The quick examples run to completion.

#[path = "../examples/radon_barcode.rs"]
mod radon_barcode;

#[path = "../examples/gabor_features.rs"]
mod gabor_features;

#[path = "../examples/svm_xor.rs"]
mod svm_xor;

#[path = "../examples/barcode_search.rs"]
mod barcode_search;

#[path = "../examples/irma_error.rs"]
mod irma_error;

#[path = "../examples/synthetic_end_to_end.rs"]
mod synthetic_end_to_end;

#[test]
fn radon_barcode_runs() {
    radon_barcode::main().unwrap();
}

#[test]
fn gabor_features_runs() {
    gabor_features::main().unwrap();
}

#[test]
fn svm_xor_runs() {
    svm_xor::main().unwrap();
}

#[test]
fn barcode_search_runs() {
    barcode_search::main().unwrap();
}

#[test]
fn irma_error_runs() {
    irma_error::main().unwrap();
}

#[test]
fn synthetic_end_to_end_runs() {
    synthetic_end_to_end::main().unwrap();
}
