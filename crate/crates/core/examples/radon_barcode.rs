//! Sinogram and Radon barcode of a small synthetic image.

use grcbir::imaging::GrayImage;
use grcbir::radon::{radon_barcode, radon_transform};

pub fn main() -> grcbir::Result<()> {
    // A bright off-center bar on a dark background.
    let img = GrayImage::from_fn(64, 64, |x, y| {
        if (20..28).contains(&x) && (10..54).contains(&y) {
            1.0
        } else {
            0.05
        }
    });
    let sino = radon_transform(&img, 8)?;
    println!(
        "sinogram: {} bins x {} angles",
        sino.n_bins(),
        sino.n_angles()
    );
    for (a, theta) in sino.angles().iter().enumerate() {
        let p = sino.projection(a);
        let mass: f64 = p.iter().sum();
        let peak = p.iter().cloned().fold(f64::MIN, f64::max);
        println!("  theta {theta:6.2} deg  mass {mass:8.3}  peak {peak:7.3}");
    }
    let code = radon_barcode(&sino, 16);
    println!("barcode ({} bits):", code.bits.len());
    for a in 0..code.n_angles {
        let row: String = (0..code.bits_per_angle)
            .map(|i| {
                if code.bits.get(a * code.bits_per_angle + i) {
                    '1'
                } else {
                    '0'
                }
            })
            .collect();
        println!("  {row}");
    }
    Ok(())
}
