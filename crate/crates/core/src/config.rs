//! Pipeline configuration: flat `key = value` text with per-key overrides.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gabor::{build_bank, vector_dimension, GaborParams, GrfExtractor};
use crate::irma::{ErrorOptions, PositionNumbering};
use crate::svm::{GridSpec, KernelKind, KernelSpec, SmoParams};

/// Environment variable consulted when `workers = 0`.
pub const WORKERS_ENV: &str = "GRCBIR_WORKERS";

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Input images are resized to `image_side x image_side`.
    pub image_side: usize,
    pub sinogram_side: usize,
    pub n_angles: usize,
    pub gabor: GaborParams,
    pub d1: usize,
    pub d2: usize,
    pub kernel: KernelKind,
    /// RBF/polynomial gamma; 0 means `1 / vector_dim`.
    pub svm_gamma: f64,
    pub degree: u32,
    pub coef0: f64,
    pub smo: SmoParams,
    pub scale_features: bool,
    pub grid_search: bool,
    pub k: usize,
    pub error: ErrorOptions,
    /// 0 selects the environment variable, then the machine's core count.
    pub workers: usize,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            image_side: 128,
            sinogram_side: 32,
            n_angles: 32,
            gabor: GaborParams::default(),
            d1: 4,
            d2: 4,
            kernel: KernelKind::Rbf,
            svm_gamma: 0.0,
            degree: 3,
            coef0: 1.0,
            smo: SmoParams::default(),
            scale_features: true,
            grid_search: false,
            k: 1,
            error: ErrorOptions::default(),
            workers: 0,
            seed: 0,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!(
            "{key}: expected a boolean, got {value:?}"
        ))),
    }
}

fn on_off(v: bool) -> &'static str {
    if v {
        "on"
    } else {
        "off"
    }
}

impl PipelineConfig {
    /// Defaults overridden by every `key = value` line of `text`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.is_file() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Applies a `key=value` override as given on the command line.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override {assignment:?} is not key=value")))?;
        self.set(key.trim(), value.trim())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let g = &mut self.gabor;
        match key {
            "image_side" => self.image_side = parse_num(key, value)?,
            "sinogram_side" => self.sinogram_side = parse_num(key, value)?,
            "n_angles" => self.n_angles = parse_num(key, value)?,
            "gabor.scales" => g.scales = parse_num(key, value)?,
            "gabor.orientations" => g.orientations = parse_num(key, value)?,
            "gabor.win_h" => g.win_h = parse_num(key, value)?,
            "gabor.win_w" => g.win_w = parse_num(key, value)?,
            "gabor.f_max" => g.f_max = parse_num(key, value)?,
            "gabor.scale_factor" => g.scale_factor = parse_num(key, value)?,
            "gabor.gamma" => g.gamma = parse_num(key, value)?,
            "gabor.bandwidth" => g.bandwidth = parse_num(key, value)?,
            "gabor.phi" => g.phi = parse_num(key, value)?,
            "gabor.dc_correct" => g.dc_correct = parse_bool(key, value)?,
            "d1" => self.d1 = parse_num(key, value)?,
            "d2" => self.d2 = parse_num(key, value)?,
            "svm.kernel" => {
                self.kernel = KernelKind::parse(value).map_err(|e| Error::Config(e.to_string()))?
            }
            "svm.gamma" => self.svm_gamma = parse_num(key, value)?,
            "svm.degree" => self.degree = parse_num(key, value)?,
            "svm.coef0" => self.coef0 = parse_num(key, value)?,
            "svm.c" => self.smo.c = parse_num(key, value)?,
            "svm.tol" => self.smo.tol = parse_num(key, value)?,
            "svm.max_passes" => self.smo.max_passes = parse_num(key, value)?,
            "svm.cache_mb" => self.smo.cache_mb = parse_num(key, value)?,
            "svm.scale_features" => self.scale_features = parse_bool(key, value)?,
            "svm.grid_search" => self.grid_search = parse_bool(key, value)?,
            "k" => self.k = parse_num(key, value)?,
            "error.propagate" => self.error.propagate = parse_bool(key, value)?,
            "error.normalize" => self.error.normalize = parse_bool(key, value)?,
            "error.positions" => {
                self.error.numbering = match value {
                    "axis" => PositionNumbering::AxisLocal,
                    "global" => PositionNumbering::Global,
                    _ => {
                        return Err(Error::Config(format!(
                            "{key}: expected axis or global, got {value:?}"
                        )))
                    }
                }
            }
            "workers" => self.workers = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Every setting as `key = value` lines, parseable by [`PipelineConfig::parse`].
    pub fn to_text(&self) -> String {
        let g = &self.gabor;
        let positions = match self.error.numbering {
            PositionNumbering::AxisLocal => "axis",
            PositionNumbering::Global => "global",
        };
        let mut s = String::new();
        let pairs: Vec<(&str, String)> = vec![
            ("image_side", self.image_side.to_string()),
            ("sinogram_side", self.sinogram_side.to_string()),
            ("n_angles", self.n_angles.to_string()),
            ("gabor.scales", g.scales.to_string()),
            ("gabor.orientations", g.orientations.to_string()),
            ("gabor.win_h", g.win_h.to_string()),
            ("gabor.win_w", g.win_w.to_string()),
            ("gabor.f_max", g.f_max.to_string()),
            ("gabor.scale_factor", g.scale_factor.to_string()),
            ("gabor.gamma", g.gamma.to_string()),
            ("gabor.bandwidth", g.bandwidth.to_string()),
            ("gabor.phi", g.phi.to_string()),
            ("gabor.dc_correct", on_off(g.dc_correct).into()),
            ("d1", self.d1.to_string()),
            ("d2", self.d2.to_string()),
            ("svm.kernel", self.kernel.name().into()),
            ("svm.gamma", self.svm_gamma.to_string()),
            ("svm.degree", self.degree.to_string()),
            ("svm.coef0", self.coef0.to_string()),
            ("svm.c", self.smo.c.to_string()),
            ("svm.tol", self.smo.tol.to_string()),
            ("svm.max_passes", self.smo.max_passes.to_string()),
            ("svm.cache_mb", self.smo.cache_mb.to_string()),
            ("svm.scale_features", on_off(self.scale_features).into()),
            ("svm.grid_search", on_off(self.grid_search).into()),
            ("k", self.k.to_string()),
            ("error.propagate", on_off(self.error.propagate).into()),
            ("error.normalize", on_off(self.error.normalize).into()),
            ("error.positions", positions.into()),
            ("workers", self.workers.to_string()),
            ("seed", self.seed.to_string()),
        ];
        for (k, v) in pairs {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    pub fn validate(&self) -> Result<()> {
        if self.image_side == 0 || self.sinogram_side == 0 || self.n_angles == 0 {
            return Err(Error::InvalidParameter(
                "image_side, sinogram_side and n_angles must be positive".into(),
            ));
        }
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        self.extractor().map(|_| ())
    }

    pub fn vector_dim(&self) -> Result<usize> {
        vector_dimension(
            self.sinogram_side,
            self.sinogram_side,
            self.gabor.n_filters(),
            self.d1,
            self.d2,
        )
    }

    pub fn extractor(&self) -> Result<GrfExtractor> {
        let bank = build_bank(&self.gabor)?;
        GrfExtractor::new(bank, self.n_angles, self.sinogram_side, self.d1, self.d2)
    }

    /// Kernel with `gamma = 0` resolved to `1 / vector_dim`.
    pub fn kernel_spec(&self) -> Result<KernelSpec> {
        let gamma = if self.svm_gamma > 0.0 {
            self.svm_gamma
        } else {
            1.0 / self.vector_dim()? as f64
        };
        let spec = match self.kernel {
            KernelKind::Rbf => KernelSpec::rbf(gamma),
            KernelKind::Polynomial => KernelSpec {
                gamma,
                ..KernelSpec::polynomial(self.degree, self.coef0)
            },
            KernelKind::Linear => KernelSpec::linear(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn grid(&self) -> GridSpec {
        GridSpec::default()
    }

    /// Worker count after resolving `0` through the environment.
    pub fn effective_workers(&self) -> usize {
        if self.workers > 0 {
            return self.workers;
        }
        std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    /// Hash of every parameter that changes extracted features or codes.
    pub fn fingerprint(&self) -> u64 {
        let g = &self.gabor;
        let mut h = Sha256::new();
        for v in [
            self.image_side,
            self.sinogram_side,
            self.n_angles,
            g.scales,
            g.orientations,
            g.win_h,
            g.win_w,
            self.d1,
            self.d2,
            g.dc_correct as usize,
        ] {
            h.update((v as u64).to_le_bytes());
        }
        for v in [g.f_max, g.scale_factor, g.gamma, g.bandwidth, g.phi] {
            h.update(v.to_bits().to_le_bytes());
        }
        let digest = h.finalize();
        u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = PipelineConfig::default();
        assert_eq!(c.vector_dim().unwrap(), 1280);
        assert_eq!(c.kernel_spec().unwrap().gamma, 1.0 / 1280.0);
        assert_eq!(c.smo.c, 32.0);
        assert_eq!(c.k, 1);
        c.validate().unwrap();
    }

    #[test]
    fn text_round_trip() {
        let mut c = PipelineConfig::default();
        c.apply_override("gabor.orientations=3").unwrap();
        c.apply_override("error.positions = global").unwrap();
        c.apply_override("svm.c=8").unwrap();
        let back = PipelineConfig::parse(&c.to_text()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.vector_dim().unwrap(), 768);
    }

    #[test]
    fn bad_input() {
        assert!(matches!(
            PipelineConfig::parse("nonsense"),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            PipelineConfig::parse("bogus = 1"),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            PipelineConfig::parse("d1 = x"),
            Err(Error::Config(_))
        ));
        let c = PipelineConfig::parse("d1 = 5").unwrap();
        assert!(c.validate().is_err());
    }

    #[test]
    fn fingerprint_tracks_extraction_params_only() {
        let base = PipelineConfig::default();
        let mut svm_only = base.clone();
        svm_only.smo.c = 1.0;
        svm_only.workers = 7;
        assert_eq!(base.fingerprint(), svm_only.fingerprint());
        let mut other = base.clone();
        other.n_angles = 16;
        assert_ne!(base.fingerprint(), other.fingerprint());
        let mut phase = base.clone();
        phase.gabor.phi = 0.1;
        assert_ne!(base.fingerprint(), phase.fingerprint());
    }
}
