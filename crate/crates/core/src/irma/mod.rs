//! IRMA codes, dataset manifests and the hierarchical retrieval error.

mod code;
mod manifest;
mod metric;

pub use code::{parse_irma, IrmaCode, AXIS_LENGTHS, CODE_LEN};
pub use manifest::{
    format_manifest, load_manifest, parse_manifest, Manifest, ManifestRecord, Split,
};
pub use metric::{
    build_alphabets, irma_error, irma_error_with, max_error, total_error, AlphabetTable,
    ErrorOptions, PositionNumbering,
};
