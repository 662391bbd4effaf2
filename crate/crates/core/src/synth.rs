//! Seeded synthetic corpus: parametric shapes with IRMA-style codes.
//!
//! Class `c` uses shape family `c % 4` (disk, bar, ring, cross) and variant
//! `c / 4`, which changes size or orientation. Every image draws its jitter
//! and noise from its own generator, so the output does not depend on
//! generation order.

use std::fs;
use std::io::Cursor;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::imaging::GrayImage;
use crate::irma::{format_manifest, IrmaCode, ManifestRecord};

pub const FAMILIES: [&str; 4] = ["disk", "bar", "ring", "cross"];

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub n_classes: usize,
    pub train_per_class: usize,
    pub test_per_class: usize,
    /// Extra images per split whose code is `*`.
    pub uncategorized: usize,
    pub seed: u64,
    pub side: usize,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            n_classes: 4,
            train_per_class: 50,
            test_per_class: 20,
            uncategorized: 0,
            seed: 7,
            side: 128,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSummary {
    pub train_manifest: PathBuf,
    pub test_manifest: PathBuf,
    pub train_images: usize,
    pub test_images: usize,
}

/// Synthetic code for class `c`: `1fvv-100-ccc-700`.
pub fn class_code(class: usize) -> IrmaCode {
    let family = class % FAMILIES.len();
    let variant = (class / FAMILIES.len()) % 100;
    IrmaCode::parse(&format!(
        "1{family}{variant:02}-100-{:03}-700",
        class % 1000
    ))
    .expect("synthetic code is valid")
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for one image, keyed by everything that identifies it.
fn image_rng(seed: u64, class: usize, split: u64, index: usize) -> ChaCha8Rng {
    let key = mix(mix(mix(seed) ^ class as u64) ^ split) ^ index as u64;
    ChaCha8Rng::seed_from_u64(mix(key))
}

/// Signed distance (pixels) to a centered, rotated rectangle.
fn rect_sd(x: f64, y: f64, half_len: f64, half_width: f64, angle: f64) -> f64 {
    let (s, c) = angle.sin_cos();
    let u = (x * c + y * s).abs() - half_len;
    let v = (-x * s + y * c).abs() - half_width;
    let outside = (u.max(0.0).powi(2) + v.max(0.0).powi(2)).sqrt();
    outside + u.max(v).min(0.0)
}

fn render(family: usize, variant: usize, rng: &mut ChaCha8Rng, side: usize) -> GrayImage {
    let s = side as f64;
    let cx = s / 2.0 + rng.gen_range(-0.08..0.08) * s;
    let cy = s / 2.0 + rng.gen_range(-0.08..0.08) * s;
    let scale = rng.gen_range(0.9..1.1) * s;
    let tilt = rng.gen_range(-5f64..5.0).to_radians();
    let fg = rng.gen_range(0.7..1.0);
    let bg = 0.1;
    let v = variant as f64;
    let sd = move |x: f64, y: f64| -> f64 {
        let (x, y) = (x - cx, y - cy);
        match family {
            0 => (x * x + y * y).sqrt() - scale * (0.18 + 0.06 * (v % 3.0)),
            1 => rect_sd(
                x,
                y,
                0.32 * scale,
                0.06 * scale,
                tilt + (v * 30f64).to_radians(),
            ),
            2 => {
                let r = (x * x + y * y).sqrt();
                (r - 0.26 * scale).abs() - scale * (0.03 + 0.02 * (v % 3.0))
            }
            _ => {
                let a = tilt + (v * 22.5f64).to_radians();
                let arm = |ang| rect_sd(x, y, 0.3 * scale, 0.05 * scale, ang);
                arm(a).min(arm(a + std::f64::consts::FRAC_PI_2))
            }
        }
    };
    let noise = Normal::new(0.0, 0.03).expect("valid sigma");
    let mut pixels = Vec::with_capacity(side * side);
    for y in 0..side {
        for x in 0..side {
            let cover = (0.5 - sd(x as f64 + 0.5, y as f64 + 0.5)).clamp(0.0, 1.0);
            pixels.push(bg + (fg - bg) * cover + noise.sample(rng));
        }
    }
    GrayImage::from_fn(side, side, |x, y| pixels[y * side + x])
}

/// Image `index` of `class` in a split (`0` train, `1` test).
pub fn synth_image(seed: u64, class: usize, split: u64, index: usize, side: usize) -> GrayImage {
    let mut rng = image_rng(seed, class, split, index);
    render(
        class % FAMILIES.len(),
        class / FAMILIES.len(),
        &mut rng,
        side,
    )
}

/// Uncategorized image: a random family drawn from the image's own generator.
fn synth_unlabeled(seed: u64, split: u64, index: usize, side: usize) -> GrayImage {
    let mut rng = image_rng(seed, usize::MAX, split, index);
    let family = rng.gen_range(0..FAMILIES.len());
    render(family, 0, &mut rng, side)
}

fn encode_png(img: &GrayImage) -> Result<Vec<u8>> {
    let buf = image::GrayImage::from_raw(img.width() as u32, img.height() as u32, img.to_u8())
        .ok_or_else(|| Error::InvalidImage("buffer size".into()))?;
    let mut out = Cursor::new(Vec::new());
    buf.write_to(&mut out, image::ImageFormat::Png)
        .map_err(|e| Error::InvalidImage(e.to_string()))?;
    Ok(out.into_inner())
}

/// Writes PNGs under `out_dir/images` and `train.tsv` / `test.tsv` manifests.
pub fn generate(out_dir: &Path, spec: &SynthSpec) -> Result<SynthSummary> {
    if spec.n_classes == 0 || spec.side < 8 {
        return Err(Error::InvalidParameter(
            "synth needs at least one class and side >= 8".into(),
        ));
    }
    let images = out_dir.join("images");
    fs::create_dir_all(&images)?;
    let mut counts = [0usize; 2];
    for (split, (name, per_class)) in [
        ("train", spec.train_per_class),
        ("test", spec.test_per_class),
    ]
    .into_iter()
    .enumerate()
    {
        let mut records = Vec::new();
        for class in 0..spec.n_classes {
            for i in 0..per_class {
                let id = format!("{name}-c{class:03}-{i:04}");
                let img = synth_image(spec.seed, class, split as u64, i, spec.side);
                records.push((id, Some(class_code(class)), img));
            }
        }
        for i in 0..spec.uncategorized {
            let id = format!("{name}-u-{i:04}");
            records.push((
                id,
                None,
                synth_unlabeled(spec.seed, split as u64, i, spec.side),
            ));
        }
        let mut rows = Vec::with_capacity(records.len());
        for (id, code, img) in records {
            let path = images.join(format!("{id}.png"));
            fs::write(&path, encode_png(&img)?)?;
            rows.push(ManifestRecord { id, path, code });
        }
        counts[split] = rows.len();
        fs::write(
            out_dir.join(format!("{name}.tsv")),
            format_manifest(&rows, out_dir),
        )?;
    }
    Ok(SynthSummary {
        train_manifest: out_dir.join("train.tsv"),
        test_manifest: out_dir.join("test.tsv"),
        train_images: counts[0],
        test_images: counts[1],
    })
}
