//! Hierarchical IRMA error for a few code pairs.

use grcbir::irma::{build_alphabets, irma_error, irma_error_with, ErrorOptions, IrmaCode};

pub fn main() -> grcbir::Result<()> {
    let corpus: Vec<IrmaCode> = [
        "1121-120-200-700",
        "1121-220-200-700",
        "1121-127-700-500",
        "1123-211-520-000",
        "1121-115-700-400",
    ]
    .iter()
    .map(|s| s.parse())
    .collect::<Result<_, _>>()?;
    let table = build_alphabets(&corpus)?;
    println!("labels per position: {:?}", table.counts());

    let truth = corpus[0];
    for other in &corpus {
        let raw = irma_error(&truth, other, &table, false)?;
        let norm = irma_error(&truth, other, &table, true)?;
        println!("{truth} vs {other}: raw {raw:.4}  normalized {norm:.4}");
    }

    let literal = ErrorOptions {
        propagate: false,
        ..ErrorOptions::default()
    };
    let e = irma_error_with(&truth, &corpus[1], &table, &literal)?;
    println!("without propagation: {e:.4}");
    Ok(())
}
