//! End-to-end commands: extract, train, build-index, query, evaluate, sweep.
//!
//! Every command runs on its own worker pool. Parallel work is always a map
//! over images or class pairs whose results are collected in input order, so
//! outputs do not depend on the worker count.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use log::{info, warn};
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::barcode::BitCode;
use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::gabor::GrfExtractor;
use crate::imaging::{
    contact_sheet, load_image, normalize_input, to_display, write_pgm, GrayImage,
};
use crate::irma::{build_alphabets, irma_error_with, IrmaCode, Manifest, ManifestRecord};
use crate::retrieval::{build_index, ClassIndex, Hit, IndexRecord};
use crate::store::{
    read_barcodes, write_barcodes, write_features, write_index, write_model, BarcodeFile,
    ExtractionHeader, FeatureFile, ModelFile,
};
use crate::svm::{
    grid_search, train_multiclass_with, GridResult, KernelKind, KernelSpec, MulticlassModel,
    SmoParams,
};

/// Bank shapes `(scales, orientations)` of the sweep grid.
pub const SWEEP_BANKS: [(usize, usize); 8] = [
    (3, 4),
    (4, 3),
    (4, 5),
    (5, 4),
    (4, 6),
    (6, 4),
    (6, 8),
    (8, 6),
];
pub const SWEEP_ANGLES: [usize; 3] = [8, 16, 32];

pub fn worker_pool(workers: usize) -> Result<ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))
}

fn check_fingerprint(what: &str, expected: u64, found: u64) -> Result<()> {
    if expected != found {
        return Err(Error::FingerprintMismatch {
            what: what.to_owned(),
            expected,
            found,
        });
    }
    Ok(())
}

pub fn extraction_header(cfg: &PipelineConfig) -> Result<ExtractionHeader> {
    let as_u32 = |v: usize| {
        u32::try_from(v).map_err(|_| Error::InvalidParameter(format!("{v} exceeds u32")))
    };
    Ok(ExtractionHeader {
        scales: as_u32(cfg.gabor.scales)?,
        orientations: as_u32(cfg.gabor.orientations)?,
        d1: as_u32(cfg.d1)?,
        d2: as_u32(cfg.d2)?,
        n_angles: as_u32(cfg.n_angles)?,
        vector_dim: as_u32(cfg.vector_dim()?)?,
        fingerprint: cfg.fingerprint(),
    })
}

/// Loads an image and resizes it to the configured input side.
pub fn prepare_image(path: &Path, cfg: &PipelineConfig) -> Result<GrayImage> {
    Ok(normalize_input(&load_image(path)?, cfg.image_side))
}

/// Features and code of one prepared image.
#[derive(Debug, Clone, PartialEq)]
pub struct Descriptor {
    pub features: Vec<f32>,
    pub code: BitCode,
}

fn describe(extractor: &GrfExtractor, img: &GrayImage) -> Result<Descriptor> {
    let (f, b) = extractor.extract(img)?;
    Ok(Descriptor {
        features: f.values,
        code: b.bits,
    })
}

#[derive(Debug, Clone)]
pub struct ExtractReport {
    pub written: usize,
    pub skipped_uncategorized: usize,
    /// `(id, reason)` for images that could not be processed.
    pub failures: Vec<(String, String)>,
    pub vector_dim: usize,
    pub fingerprint: u64,
    pub elapsed: Duration,
}

impl ExtractReport {
    pub fn images_per_sec(&self) -> f64 {
        self.written as f64 / self.elapsed.as_secs_f64().max(1e-9)
    }
}

impl fmt::Display for ExtractReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "records written: {}", self.written)?;
        writeln!(f, "uncategorized skipped: {}", self.skipped_uncategorized)?;
        writeln!(f, "failures: {}", self.failures.len())?;
        writeln!(f, "vector dimension: {}", self.vector_dim)?;
        writeln!(f, "fingerprint: {:016x}", self.fingerprint)?;
        write!(
            f,
            "elapsed: {:.3} s ({:.1} images/s)",
            self.elapsed.as_secs_f64(),
            self.images_per_sec()
        )
    }
}

/// Extracts GRF and GRBF for every categorized record and writes both files.
///
/// Images that fail to load or extract are logged and left out; the caller
/// decides whether that is fatal. With `dump_dir`, each sinogram is also
/// written as a PGM.
pub fn extract(
    manifest: &Manifest,
    cfg: &PipelineConfig,
    features_out: &Path,
    barcodes_out: &Path,
    dump_dir: Option<&Path>,
) -> Result<ExtractReport> {
    cfg.validate()?;
    let start = Instant::now();
    let extractor = cfg.extractor()?;
    let header = extraction_header(cfg)?;
    let records: Vec<&ManifestRecord> = manifest.categorized().collect();
    if records.is_empty() {
        warn!("manifest has no categorized records; writing empty outputs");
    }
    if let Some(dir) = dump_dir {
        fs::create_dir_all(dir)?;
    }
    let pool = worker_pool(cfg.effective_workers())?;
    let results: Vec<Result<Descriptor>> = pool.install(|| {
        records
            .par_iter()
            .map(|r| {
                let img = prepare_image(&r.path, cfg)?;
                let e = extractor.extract_full(&img)?;
                if let Some(dir) = dump_dir {
                    write_pgm(
                        &dir.join(format!("{}.pgm", r.id)),
                        &to_display(&e.sinogram.to_plane()),
                    )?;
                }
                Ok(Descriptor {
                    features: e.features.values,
                    code: e.barcode.bits,
                })
            })
            .collect()
    });

    let mut features = FeatureFile {
        header,
        records: Vec::with_capacity(records.len()),
    };
    let mut barcodes = BarcodeFile {
        header,
        records: Vec::with_capacity(records.len()),
    };
    let mut failures = Vec::new();
    for (r, res) in records.iter().zip(results) {
        match res {
            Ok(d) => {
                features.records.push((r.id.clone(), d.features));
                barcodes.records.push((r.id.clone(), d.code));
            }
            Err(e) => {
                warn!("skipping {}: {e}", r.id);
                failures.push((r.id.clone(), e.to_string()));
            }
        }
    }
    write_features(features_out, &features)?;
    write_barcodes(barcodes_out, &barcodes)?;
    let report = ExtractReport {
        written: features.records.len(),
        skipped_uncategorized: manifest.uncategorized_count(),
        failures,
        vector_dim: header.vector_dim as usize,
        fingerprint: header.fingerprint,
        elapsed: start.elapsed(),
    };
    info!(
        "extracted {} images at {:.1} images/s",
        report.written,
        report.images_per_sec()
    );
    Ok(report)
}

/// Features of categorized manifest records, paired with their labels.
fn labeled_features<'a>(
    features: &'a FeatureFile,
    manifest: &'a Manifest,
) -> Vec<(&'a [f32], &'a str)> {
    let by_id: HashMap<&str, &[f32]> = features
        .records
        .iter()
        .map(|(id, v)| (id.as_str(), v.as_slice()))
        .collect();
    let mut out = Vec::new();
    for r in manifest.categorized() {
        match by_id.get(r.id.as_str()) {
            Some(v) => out.push((*v, r.label().expect("categorized"))),
            None => warn!("no features for {}; left out of training", r.id),
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct TrainReport {
    pub class_counts: Vec<(String, usize)>,
    pub binaries: usize,
    pub kernel: KernelSpec,
    pub c: f64,
    pub grid: Option<GridResult>,
    pub elapsed: Duration,
}

impl fmt::Display for TrainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "classes: {}", self.class_counts.len())?;
        for (label, n) in &self.class_counts {
            writeln!(f, "  {label}: {n}")?;
        }
        if let Some(grid) = &self.grid {
            writeln!(f, "grid search:")?;
            for p in &grid.points {
                writeln!(
                    f,
                    "  C={} gamma={:.6e} cv_accuracy={:.4}",
                    p.c, p.gamma, p.cv_accuracy
                )?;
            }
        }
        writeln!(f, "binary models: {}", self.binaries)?;
        writeln!(
            f,
            "kernel: {} gamma={:.6e} C={}",
            self.kernel.kind.name(),
            self.kernel.gamma,
            self.c
        )?;
        write!(f, "elapsed: {:.3} s", self.elapsed.as_secs_f64())
    }
}

/// Trains the one-against-one model in memory.
pub fn train_model(
    samples: &[(&[f32], &str)],
    cfg: &PipelineConfig,
    pool: &ThreadPool,
) -> Result<(MulticlassModel, Option<GridResult>, f64)> {
    let xs: Vec<&[f32]> = samples.iter().map(|s| s.0).collect();
    let ys: Vec<&str> = samples.iter().map(|s| s.1).collect();
    let mut kernel = cfg.kernel_spec()?;
    let mut params: SmoParams = cfg.smo.clone();
    let mut grid = None;
    if cfg.grid_search && kernel.kind == KernelKind::Rbf {
        let result = pool.install(|| grid_search(&xs, &ys, &cfg.grid(), &params))?;
        params.c = result.best.c;
        kernel = KernelSpec::rbf(result.best.gamma);
        grid = Some(result);
    }
    let model =
        pool.install(|| train_multiclass_with(&xs, &ys, &kernel, &params, cfg.scale_features))?;
    Ok((model, grid, params.c))
}

/// Trains on the features of every categorized manifest record.
pub fn train(
    features: &FeatureFile,
    manifest: &Manifest,
    cfg: &PipelineConfig,
    model_out: &Path,
) -> Result<TrainReport> {
    check_fingerprint(
        "feature file",
        cfg.fingerprint(),
        features.header.fingerprint,
    )?;
    let start = Instant::now();
    let samples = labeled_features(features, manifest);
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for (_, l) in &samples {
        *counts.entry(l).or_default() += 1;
    }
    let pool = worker_pool(cfg.effective_workers())?;
    let (model, grid, c) = train_model(&samples, cfg, &pool)?;
    let report = TrainReport {
        class_counts: counts.into_iter().map(|(k, v)| (k.to_owned(), v)).collect(),
        binaries: model.binaries.len(),
        kernel: model.kernel,
        c,
        grid,
        elapsed: start.elapsed(),
    };
    write_model(
        model_out,
        &ModelFile {
            fingerprint: cfg.fingerprint(),
            model,
        },
    )?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexReport {
    pub records: usize,
    pub classes: usize,
    pub code_len_bits: usize,
    pub fingerprint: u64,
}

impl fmt::Display for IndexReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "records: {}", self.records)?;
        writeln!(f, "classes: {}", self.classes)?;
        writeln!(f, "code length: {} bits", self.code_len_bits)?;
        write!(f, "fingerprint: {:016x}", self.fingerprint)
    }
}

/// Index records for categorized manifest entries, in manifest order.
pub fn index_records(barcodes: &BarcodeFile, manifest: &Manifest) -> Vec<IndexRecord> {
    let by_id: HashMap<&str, &BitCode> = barcodes
        .records
        .iter()
        .map(|(id, c)| (id.as_str(), c))
        .collect();
    let mut out = Vec::new();
    for r in manifest.categorized() {
        match by_id.get(r.id.as_str()) {
            Some(code) => out.push(IndexRecord {
                id: r.id.clone(),
                class: r.label().expect("categorized").to_owned(),
                code: (*code).clone(),
            }),
            None => warn!("no barcode for {}; left out of the index", r.id),
        }
    }
    out
}

pub fn build_index_file(
    barcodes_path: &Path,
    manifest: &Manifest,
    index_out: &Path,
) -> Result<IndexReport> {
    let barcodes = read_barcodes(barcodes_path)?;
    let index = build_index(
        &index_records(&barcodes, manifest),
        barcodes.header.fingerprint,
    )?;
    write_index(index_out, &index)?;
    Ok(IndexReport {
        records: index.len(),
        classes: index.class_count(),
        code_len_bits: index.code_len_bits(),
        fingerprint: index.fingerprint(),
    })
}

/// Refuses to combine artifacts extracted with different parameters.
pub fn check_artifacts(cfg: &PipelineConfig, model: &ModelFile, index: &ClassIndex) -> Result<()> {
    let expected = cfg.fingerprint();
    check_fingerprint("model file", expected, model.fingerprint)?;
    check_fingerprint("index file", expected, index.fingerprint())
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryResult {
    pub predicted: String,
    pub hits: Vec<Hit>,
    /// Set when fewer than `k` records were available.
    pub warning: Option<String>,
}

/// Classifies a descriptor, then searches the predicted class bucket.
pub fn classify_and_retrieve(
    d: &Descriptor,
    model: &MulticlassModel,
    index: &ClassIndex,
    k: usize,
) -> Result<QueryResult> {
    let predicted = model.predict(&d.features)?.to_owned();
    let (hits, _) = index.query_with_stats(&predicted, &d.code, k)?;
    let warning = (hits.len() < k).then(|| {
        format!(
            "class {predicted} holds {} record(s); returning all of them instead of {k}",
            hits.len()
        )
    });
    if let Some(w) = &warning {
        warn!("{w}");
    }
    Ok(QueryResult {
        predicted,
        hits,
        warning,
    })
}

/// Full query for one image file.
pub fn query(
    image: &Path,
    cfg: &PipelineConfig,
    model: &ModelFile,
    index: &ClassIndex,
    k: usize,
) -> Result<QueryResult> {
    check_artifacts(cfg, model, index)?;
    let extractor = cfg.extractor()?;
    let d = describe(&extractor, &prepare_image(image, cfg)?)?;
    classify_and_retrieve(&d, &model.model, index, k)
}

/// Query image followed by its retrieved images, as one strip.
pub fn query_contact_sheet(
    query: &Path,
    hits: &[Hit],
    manifest: &Manifest,
    thumb: usize,
) -> Result<GrayImage> {
    let mut images = vec![load_image(query)?];
    for h in hits {
        let rec = manifest
            .find(&h.id)
            .ok_or_else(|| Error::InvalidParameter(format!("{} is not in the manifest", h.id)))?;
        images.push(load_image(&rec.path)?);
    }
    Ok(contact_sheet(&images, thumb, 4))
}

/// One evaluated test query.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryRow {
    pub query_id: String,
    pub truth: IrmaCode,
    pub predicted: String,
    pub retrieved_id: String,
    pub retrieved_distance: u32,
    pub retrieved_code: IrmaCode,
    pub error: f64,
}

#[derive(Debug, Clone, Default)]
pub struct StageTimings {
    pub extract: Duration,
    pub classify_retrieve: Duration,
    pub score: Duration,
    pub total: Duration,
}

#[derive(Debug, Clone)]
pub struct EvalReport {
    pub rows: Vec<QueryRow>,
    pub accuracy: f64,
    pub e_total: f64,
    /// Fraction of queries whose rank-1 hit is the query itself at distance 0.
    pub self_retrieval_rate: f64,
    /// Truth label to predicted label counts.
    pub confusion: BTreeMap<String, BTreeMap<String, usize>>,
    pub timings: StageTimings,
}

impl EvalReport {
    /// Everything except timings, for comparing runs.
    pub fn numbers(&self) -> (f64, f64, f64, &[QueryRow]) {
        (
            self.accuracy,
            self.e_total,
            self.self_retrieval_rate,
            &self.rows,
        )
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "queries: {}", self.rows.len())?;
        writeln!(f, "accuracy: {:.4}", self.accuracy)?;
        writeln!(f, "E_total: {:.4}", self.e_total)?;
        writeln!(f, "self retrieval rate: {:.4}", self.self_retrieval_rate)?;
        writeln!(f, "per class (correct / total):")?;
        for (truth, row) in &self.confusion {
            let total: usize = row.values().sum();
            let correct = row.get(truth).copied().unwrap_or(0);
            let worst = row
                .iter()
                .filter(|(p, _)| *p != truth)
                .max_by_key(|(_, &n)| n)
                .map(|(p, n)| format!(", most often confused with {p} ({n})"))
                .unwrap_or_default();
            writeln!(f, "  {truth}: {correct} / {total}{worst}")?;
        }
        let t = &self.timings;
        write!(
            f,
            "timings: extract {:.3} s, classify+retrieve {:.3} s, score {:.3} s, total {:.3} s",
            t.extract.as_secs_f64(),
            t.classify_retrieve.as_secs_f64(),
            t.score.as_secs_f64(),
            t.total.as_secs_f64()
        )
    }
}

/// Scores already-described test queries against a model and index.
pub fn evaluate_descriptors(
    queries: &[(String, IrmaCode, Descriptor)],
    model: &MulticlassModel,
    index: &ClassIndex,
    cfg: &PipelineConfig,
    pool: &ThreadPool,
) -> Result<EvalReport> {
    if queries.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let t0 = Instant::now();
    let results: Vec<QueryResult> = pool.install(|| {
        queries
            .par_iter()
            .map(|(_, _, d)| classify_and_retrieve(d, model, index, 1))
            .collect::<Result<Vec<_>>>()
    })?;
    let classify_retrieve = t0.elapsed();

    let t1 = Instant::now();
    let model_codes = model
        .classes
        .iter()
        .map(|c| IrmaCode::parse(c))
        .collect::<Result<Vec<_>>>()?;
    let table = build_alphabets(model_codes.iter().chain(queries.iter().map(|q| &q.1)))?;
    let mut rows = Vec::with_capacity(queries.len());
    let mut confusion: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    let (mut correct, mut self_hits, mut e_total) = (0usize, 0usize, 0.0f64);
    for ((id, truth, _), res) in queries.iter().zip(results) {
        let hit = res.hits.first().expect("k = 1 on a non-empty bucket");
        let retrieved_code = IrmaCode::parse(&res.predicted)?;
        let error = irma_error_with(truth, &retrieved_code, &table, &cfg.error)?;
        e_total += error;
        if res.predicted == truth.raw() {
            correct += 1;
        }
        if hit.id == *id && hit.distance == 0 {
            self_hits += 1;
        }
        *confusion
            .entry(truth.raw().to_owned())
            .or_default()
            .entry(res.predicted.clone())
            .or_default() += 1;
        rows.push(QueryRow {
            query_id: id.clone(),
            truth: *truth,
            predicted: res.predicted,
            retrieved_id: hit.id.clone(),
            retrieved_distance: hit.distance,
            retrieved_code,
            error,
        });
    }
    let n = queries.len() as f64;
    Ok(EvalReport {
        rows,
        accuracy: correct as f64 / n,
        e_total,
        self_retrieval_rate: self_hits as f64 / n,
        confusion,
        timings: StageTimings {
            classify_retrieve,
            score: t1.elapsed(),
            ..StageTimings::default()
        },
    })
}

/// Describes every categorized record of `manifest`, failing on the first error.
pub fn describe_manifest(
    manifest: &Manifest,
    cfg: &PipelineConfig,
    pool: &ThreadPool,
) -> Result<Vec<(String, IrmaCode, Descriptor)>> {
    let extractor = cfg.extractor()?;
    let records: Vec<&ManifestRecord> = manifest.categorized().collect();
    pool.install(|| {
        records
            .par_iter()
            .map(|r| {
                let d = describe(&extractor, &prepare_image(&r.path, cfg)?)?;
                Ok((r.id.clone(), r.code.expect("categorized"), d))
            })
            .collect()
    })
}

/// Classifies and retrieves every categorized test record.
pub fn evaluate(
    test: &Manifest,
    cfg: &PipelineConfig,
    model: &ModelFile,
    index: &ClassIndex,
) -> Result<EvalReport> {
    check_artifacts(cfg, model, index)?;
    let start = Instant::now();
    let pool = worker_pool(cfg.effective_workers())?;
    let queries = describe_manifest(test, cfg, &pool)?;
    let extract = start.elapsed();
    let mut report = evaluate_descriptors(&queries, &model.model, index, cfg, &pool)?;
    report.timings.extract = extract;
    report.timings.total = start.elapsed();
    Ok(report)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

pub fn eval_csv(rows: &[QueryRow]) -> String {
    let mut out =
        String::from("query-id,truth,predicted-class,retrieved-id,retrieved-code,error\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            csv_field(&r.query_id),
            r.truth,
            csv_field(&r.predicted),
            csv_field(&r.retrieved_id),
            r.retrieved_code,
            r.error
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scales: usize,
    pub orientations: usize,
    pub n_angles: usize,
    pub vector_dim: usize,
    pub accuracy: f64,
    pub e_total: f64,
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("bank,n_p,VD,A,E_total\n");
    for r in rows {
        out.push_str(&format!(
            "GBF({};{}),{},{},{:.4},{:.4}\n",
            r.scales, r.orientations, r.n_angles, r.vector_dim, r.accuracy, r.e_total
        ));
    }
    out
}

/// Runs extract, train, index and evaluate in memory for each setting.
///
/// Images are decoded once and shared by every setting.
pub fn sweep(
    train: &Manifest,
    test: &Manifest,
    base: &PipelineConfig,
    banks: &[(usize, usize)],
    angles: &[usize],
) -> Result<Vec<SweepRow>> {
    let pool = worker_pool(base.effective_workers())?;
    let load = |m: &Manifest| -> Result<Vec<(String, IrmaCode, GrayImage)>> {
        let recs: Vec<&ManifestRecord> = m.categorized().collect();
        pool.install(|| {
            recs.par_iter()
                .map(|r| {
                    Ok((
                        r.id.clone(),
                        r.code.expect("categorized"),
                        prepare_image(&r.path, base)?,
                    ))
                })
                .collect()
        })
    };
    let train_imgs = load(train)?;
    let test_imgs = load(test)?;
    let mut rows = Vec::new();
    for &(scales, orientations) in banks {
        for &n_angles in angles {
            let mut cfg = base.clone();
            cfg.gabor.scales = scales;
            cfg.gabor.orientations = orientations;
            cfg.n_angles = n_angles;
            cfg.validate()?;
            let extractor = cfg.extractor()?;
            let describe_all = |imgs: &[(String, IrmaCode, GrayImage)]| -> Result<Vec<(String, IrmaCode, Descriptor)>> {
                pool.install(|| {
                    imgs.par_iter()
                        .map(|(id, code, img)| Ok((id.clone(), *code, describe(&extractor, img)?)))
                        .collect()
                })
            };
            let tr = describe_all(&train_imgs)?;
            let te = describe_all(&test_imgs)?;
            let samples: Vec<(&[f32], &str)> = tr
                .iter()
                .map(|(_, c, d)| (d.features.as_slice(), c.raw()))
                .collect();
            let (model, _, _) = train_model(&samples, &cfg, &pool)?;
            let records: Vec<IndexRecord> = tr
                .iter()
                .map(|(id, c, d)| IndexRecord {
                    id: id.clone(),
                    class: c.raw().to_owned(),
                    code: d.code.clone(),
                })
                .collect();
            let index = build_index(&records, cfg.fingerprint())?;
            let report = evaluate_descriptors(&te, &model, &index, &cfg, &pool)?;
            info!(
                "GBF({scales},{orientations}) n_p={n_angles}: A={:.4} E_total={:.4}",
                report.accuracy, report.e_total
            );
            rows.push(SweepRow {
                scales,
                orientations,
                n_angles,
                vector_dim: cfg.vector_dim()?,
                accuracy: report.accuracy,
                e_total: report.e_total,
            });
        }
    }
    Ok(rows)
}

/// Artifact paths of a full run rooted at `dir`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunPaths {
    pub features: PathBuf,
    pub barcodes: PathBuf,
    pub model: PathBuf,
    pub index: PathBuf,
}

impl RunPaths {
    pub fn in_dir(dir: &Path) -> Self {
        Self {
            features: dir.join("train.grf"),
            barcodes: dir.join("train.grb"),
            model: dir.join("model.svm"),
            index: dir.join("index.idx"),
        }
    }
}
