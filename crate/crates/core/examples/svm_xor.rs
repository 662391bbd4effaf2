//! XOR with an RBF kernel: one binary model, then a one-against-one ensemble.

use grcbir::svm::{train_binary, train_multiclass, KernelSpec, SmoParams};

pub fn main() -> grcbir::Result<()> {
    let points: [[f32; 2]; 4] = [[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]];
    let xs: Vec<&[f32]> = points.iter().map(|p| p.as_slice()).collect();
    let kernel = KernelSpec::rbf(2.0);
    let params = SmoParams::with_c(10.0);

    let model = train_binary(&xs, &[1, 1, -1, -1], &kernel, &params)?;
    println!(
        "support vectors: {}, bias {:.4}",
        model.support_vectors.len(),
        model.bias
    );
    for p in &points {
        println!("  f({p:?}) = {:+.4}", model.decision_value(&kernel, p)?);
    }

    let labels = ["same", "same", "diff", "diff"];
    let ensemble = train_multiclass(&xs, &labels, &kernel, &params)?;
    for p in &points {
        println!("  {p:?} -> {}", ensemble.predict(p)?);
    }
    Ok(())
}
