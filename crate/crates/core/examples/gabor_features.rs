//! Gabor-Radon features and barcode for one image, with the default bank.

use grcbir::gabor::{build_bank, GaborParams, GrfExtractor, SINOGRAM_SIDE};
use grcbir::imaging::GrayImage;

pub fn main() -> grcbir::Result<()> {
    let params = GaborParams::default();
    let bank = build_bank(&params)?;
    println!(
        "bank: {} scales x {} orientations",
        params.scales, params.orientations
    );
    for k in &bank.kernels {
        println!(
            "  u={} v={}  f={:.4}  theta={:.3}  sigma={:.3}",
            k.scale, k.orient, k.frequency, k.theta, k.sigma
        );
    }

    let extractor = GrfExtractor::new(bank, 32, SINOGRAM_SIDE, 4, 4)?;
    let img = GrayImage::from_fn(128, 128, |x, y| {
        let (dx, dy) = (x as f64 - 60.0, y as f64 - 70.0);
        (-(dx * dx + dy * dy) / 600.0).exp()
    });
    let (grf, grbf) = extractor.extract(&img)?;
    println!("vector dimension: {}", extractor.vector_dim());
    let head: Vec<String> = grf.values[..8].iter().map(|v| format!("{v:.4}")).collect();
    println!("first values: [{}]", head.join(", "));
    println!(
        "ones in barcode: {} of {}",
        grbf.bits.count_ones(),
        grbf.bits.len()
    );
    Ok(())
}
