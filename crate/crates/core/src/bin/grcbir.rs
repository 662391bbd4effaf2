use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use grcbir::config::PipelineConfig;
use grcbir::imaging::write_pgm;
use grcbir::irma::{load_manifest, Split};
use grcbir::pipeline::{self, SWEEP_ANGLES, SWEEP_BANKS};
use grcbir::store::{read_features, read_index, read_model};
use grcbir::synth::{generate, SynthSpec};
use grcbir::{Error, Result};

#[derive(Parser)]
#[command(
    name = "grcbir",
    version,
    about = "Gabor-Radon image retrieval pipeline"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Config file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. `--set n_angles=16`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Worker threads (overrides config and environment).
    #[arg(long)]
    workers: Option<usize>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(p) => PipelineConfig::load(p)?,
            None => PipelineConfig::default(),
        };
        for o in &self.overrides {
            cfg.apply_override(o)?;
        }
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Extract GRF features and GRBF barcodes for a manifest.
    Extract {
        manifest: PathBuf,
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        barcodes: PathBuf,
        /// Write each sinogram as a PGM into this directory.
        #[arg(long)]
        dump_sinograms: Option<PathBuf>,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Train the one-against-one SVM on extracted features.
    Train {
        features: PathBuf,
        manifest: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Cross-validated search over C and gamma.
        #[arg(long)]
        grid_search: bool,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Build the class-partitioned barcode index.
    BuildIndex {
        barcodes: PathBuf,
        manifest: PathBuf,
        #[arg(long)]
        index: PathBuf,
    },
    /// Classify one image and list its nearest neighbours.
    Query {
        image: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        index: PathBuf,
        #[arg(short, long)]
        k: Option<usize>,
        /// Write the ranked list as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write query and retrieved thumbnails as a PGM strip.
        #[arg(long)]
        contact_sheet: Option<PathBuf>,
        /// Training manifest, needed to locate retrieved images.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Classify and retrieve every test image and report accuracy and error.
    Evaluate {
        manifest: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        index: PathBuf,
        /// Per-query CSV output.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Generate a synthetic shape corpus with train and test manifests.
    Synth {
        out_dir: PathBuf,
        #[arg(long, default_value_t = 4)]
        classes: usize,
        #[arg(long, default_value_t = 50)]
        per_class: usize,
        #[arg(long, default_value_t = 20)]
        test_per_class: usize,
        #[arg(long, default_value_t = 0)]
        uncategorized: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 128)]
        side: usize,
    },
    /// Evaluate every bank shape and projection count of the sweep grid.
    Sweep {
        train: PathBuf,
        test: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
}

fn print_config(cfg: &PipelineConfig) {
    println!("# config (fingerprint {:016x})", cfg.fingerprint());
    for line in cfg.to_text().lines() {
        println!("#   {line}");
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    Ok(fs::write(path, text)?)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Extract {
            manifest,
            features,
            barcodes,
            dump_sinograms,
            cfg,
        } => {
            let cfg = cfg.resolve()?;
            print_config(&cfg);
            let m = load_manifest(&manifest, Split::Train)?;
            let report =
                pipeline::extract(&m, &cfg, &features, &barcodes, dump_sinograms.as_deref())?;
            println!("{report}");
            if !report.failures.is_empty() {
                return Err(Error::PartialFailure(report.failures.len()));
            }
        }
        Command::Train {
            features,
            manifest,
            model,
            grid_search,
            cfg,
        } => {
            let mut cfg = cfg.resolve()?;
            cfg.grid_search |= grid_search;
            print_config(&cfg);
            let f = read_features(&features)?;
            let m = load_manifest(&manifest, Split::Train)?;
            println!("{}", pipeline::train(&f, &m, &cfg, &model)?);
        }
        Command::BuildIndex {
            barcodes,
            manifest,
            index,
        } => {
            let m = load_manifest(&manifest, Split::Train)?;
            println!("{}", pipeline::build_index_file(&barcodes, &m, &index)?);
        }
        Command::Query {
            image,
            model,
            index,
            k,
            csv,
            contact_sheet,
            manifest,
            cfg,
        } => {
            let cfg = cfg.resolve()?;
            let k = k.unwrap_or(cfg.k);
            let model = read_model(&model)?;
            let index = read_index(&index)?;
            let result = pipeline::query(&image, &cfg, &model, &index, k)?;
            println!("predicted: {}", result.predicted);
            let mut table = String::from("rank,id,distance\n");
            for (rank, h) in result.hits.iter().enumerate() {
                println!("{}\t{}\t{}", rank + 1, h.id, h.distance);
                table.push_str(&format!("{},{},{}\n", rank + 1, h.id, h.distance));
            }
            if let Some(path) = csv {
                write_text(&path, &table)?;
            }
            if let Some(out) = contact_sheet {
                let manifest = manifest
                    .ok_or_else(|| Error::Config("--contact-sheet needs --manifest".into()))?;
                let m = load_manifest(&manifest, Split::Train)?;
                write_pgm(
                    &out,
                    &pipeline::query_contact_sheet(&image, &result.hits, &m, 96)?,
                )?;
            }
        }
        Command::Evaluate {
            manifest,
            model,
            index,
            csv,
            cfg,
        } => {
            let cfg = cfg.resolve()?;
            print_config(&cfg);
            let m = load_manifest(&manifest, Split::Test)?;
            let model = read_model(&model)?;
            let index = read_index(&index)?;
            let report = pipeline::evaluate(&m, &cfg, &model, &index)?;
            println!("{report}");
            if let Some(path) = csv {
                write_text(&path, &pipeline::eval_csv(&report.rows))?;
            }
        }
        Command::Synth {
            out_dir,
            classes,
            per_class,
            test_per_class,
            uncategorized,
            seed,
            side,
        } => {
            let spec = SynthSpec {
                n_classes: classes,
                train_per_class: per_class,
                test_per_class,
                uncategorized,
                seed,
                side,
            };
            let s = generate(&out_dir, &spec)?;
            println!(
                "train: {} images -> {}",
                s.train_images,
                s.train_manifest.display()
            );
            println!(
                "test: {} images -> {}",
                s.test_images,
                s.test_manifest.display()
            );
        }
        Command::Sweep {
            train,
            test,
            csv,
            cfg,
        } => {
            let cfg = cfg.resolve()?;
            print_config(&cfg);
            let tr = load_manifest(&train, Split::Train)?;
            let te = load_manifest(&test, Split::Test)?;
            let rows = pipeline::sweep(&tr, &te, &cfg, &SWEEP_BANKS, &SWEEP_ANGLES)?;
            let text = pipeline::sweep_csv(&rows);
            print!("{text}");
            if let Some(path) = csv {
                write_text(&path, &text)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
