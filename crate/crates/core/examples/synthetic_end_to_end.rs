//! Synthesize a small corpus, then extract, train, index, query and evaluate.

use grcbir::config::PipelineConfig;
use grcbir::irma::{load_manifest, Split};
use grcbir::pipeline::{self, RunPaths};
use grcbir::store::{read_features, read_index, read_model};
use grcbir::synth::{generate, SynthSpec};

pub fn main() -> grcbir::Result<()> {
    let dir = tempfile::tempdir()?;
    let spec = SynthSpec {
        train_per_class: 10,
        test_per_class: 4,
        side: 64,
        ..SynthSpec::default()
    };
    let data = generate(dir.path(), &spec)?;
    let train = load_manifest(&data.train_manifest, Split::Train)?;
    let test = load_manifest(&data.test_manifest, Split::Test)?;

    let cfg = PipelineConfig::default();
    let paths = RunPaths::in_dir(dir.path());
    println!(
        "{}",
        pipeline::extract(&train, &cfg, &paths.features, &paths.barcodes, None)?
    );
    println!(
        "{}",
        pipeline::train(&read_features(&paths.features)?, &train, &cfg, &paths.model)?
    );
    println!(
        "{}",
        pipeline::build_index_file(&paths.barcodes, &train, &paths.index)?
    );

    let model = read_model(&paths.model)?;
    let index = read_index(&paths.index)?;
    let probe = &test.records[0];
    let result = pipeline::query(&probe.path, &cfg, &model, &index, 3)?;
    println!("query {} -> class {}", probe.id, result.predicted);
    for h in &result.hits {
        println!("  {} at distance {}", h.id, h.distance);
    }

    let report = pipeline::evaluate(&test, &cfg, &model, &index)?;
    println!("{report}");
    Ok(())
}
