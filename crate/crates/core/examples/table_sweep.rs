//! Accuracy and total error across bank shapes and projection counts.

use grcbir::config::PipelineConfig;
use grcbir::irma::{load_manifest, Split};
use grcbir::pipeline::{sweep, sweep_csv};
use grcbir::synth::{generate, SynthSpec};

pub fn main() -> grcbir::Result<()> {
    let dir = tempfile::tempdir()?;
    let spec = SynthSpec {
        n_classes: 6,
        train_per_class: 8,
        test_per_class: 4,
        side: 64,
        ..SynthSpec::default()
    };
    let data = generate(dir.path(), &spec)?;
    let train = load_manifest(&data.train_manifest, Split::Train)?;
    let test = load_manifest(&data.test_manifest, Split::Test)?;

    let rows = sweep(
        &train,
        &test,
        &PipelineConfig::default(),
        &[(3, 4), (4, 5)],
        &[8, 32],
    )?;
    print!("{}", sweep_csv(&rows));
    Ok(())
}
