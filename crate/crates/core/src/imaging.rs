//! Grayscale image decoding, resizing and a few raster helpers.
//!
//! Everything here works on row-major `f64` buffers. [`Plane`] is an
//! unconstrained real-valued matrix (sinograms, filter responses) while
//! [`GrayImage`] additionally guarantees intensities in `[0, 1]`.

use std::io::Write;
use std::path::Path;

use image::DynamicImage;

use crate::error::{Error, Result};

/// Luminance weights (ITU-R BT.601) used for multichannel input.
pub const LUMA_WEIGHTS: [f64; 3] = [0.299, 0.587, 0.114];

/// Row-major real-valued matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Plane {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "zero-sized plane {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "plane {width}x{height} needs {} values, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        assert!(width > 0 && height > 0, "zero-sized plane");
        Self {
            width,
            height,
            data: vec![0.0; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut plane = Self::zeros(width, height);
        for y in 0..height {
            for x in 0..width {
                plane.data[y * width + x] = f(x, y);
            }
        }
        plane
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: f64) {
        self.data[y * self.width + x] = value;
    }

    /// Bilinear resize with pixel-center alignment.
    pub fn resize(&self, out_w: usize, out_h: usize) -> Plane {
        assert!(out_w > 0 && out_h > 0, "resize target must be non-empty");
        if out_w == self.width && out_h == self.height {
            return self.clone();
        }
        let cols = axis_taps(self.width, out_w);
        let rows = axis_taps(self.height, out_h);

        // Horizontal pass into an out_w x height buffer, then vertical.
        let mut horiz = vec![0.0; out_w * self.height];
        for y in 0..self.height {
            let src = &self.data[y * self.width..(y + 1) * self.width];
            let dst = &mut horiz[y * out_w..(y + 1) * out_w];
            for (d, tap) in dst.iter_mut().zip(&cols) {
                *d = tap.apply(src[tap.lo], src[tap.hi]);
            }
        }
        let mut data = vec![0.0; out_w * out_h];
        for (oy, tap) in rows.iter().enumerate() {
            let lo = &horiz[tap.lo * out_w..(tap.lo + 1) * out_w];
            let hi = &horiz[tap.hi * out_w..(tap.hi + 1) * out_w];
            for (ox, d) in data[oy * out_w..(oy + 1) * out_w].iter_mut().enumerate() {
                *d = tap.apply(lo[ox], hi[ox]);
            }
        }
        Plane {
            width: out_w,
            height: out_h,
            data,
        }
    }

    /// Bilinear sample at continuous pixel coordinates; zero outside the grid.
    pub fn sample_zero_fill(&self, x: f64, y: f64) -> f64 {
        let x0 = x.floor();
        let y0 = y.floor();
        let fx = x - x0;
        let fy = y - y0;
        let (x0, y0) = (x0 as i64, y0 as i64);
        let at = |xi: i64, yi: i64| -> f64 {
            if xi < 0 || yi < 0 || xi >= self.width as i64 || yi >= self.height as i64 {
                0.0
            } else {
                self.data[yi as usize * self.width + xi as usize]
            }
        };
        let top = at(x0, y0) * (1.0 - fx) + at(x0 + 1, y0) * fx;
        let bottom = at(x0, y0 + 1) * (1.0 - fx) + at(x0 + 1, y0 + 1) * fx;
        top * (1.0 - fy) + bottom * fy
    }

    /// Rotates the content counterclockwise by `degrees` about the center,
    /// keeping the same canvas. Bilinear sampling, zero fill.
    pub fn rotate(&self, degrees: f64) -> Plane {
        let (s, c) = degrees.to_radians().sin_cos();
        let cx = (self.width as f64 - 1.0) / 2.0;
        let cy = (self.height as f64 - 1.0) / 2.0;
        Plane::from_fn(self.width, self.height, |x, y| {
            // Output point in math coordinates (y up), mapped back by -angle.
            let u = x as f64 - cx;
            let v = cy - y as f64;
            let sx = c * u + s * v;
            let sy = -s * u + c * v;
            self.sample_zero_fill(cx + sx, cy - sy)
        })
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }
}

#[derive(Debug, Clone, Copy)]
struct Tap {
    lo: usize,
    hi: usize,
    w: f64,
}

impl Tap {
    #[inline]
    fn apply(&self, a: f64, b: f64) -> f64 {
        a + self.w * (b - a)
    }
}

fn axis_taps(input: usize, output: usize) -> Vec<Tap> {
    let scale = input as f64 / output as f64;
    let last = (input - 1) as f64;
    (0..output)
        .map(|o| {
            let src = ((o as f64 + 0.5) * scale - 0.5).clamp(0.0, last);
            let lo = src.floor() as usize;
            let hi = (lo + 1).min(input - 1);
            Tap {
                lo,
                hi,
                w: src - lo as f64,
            }
        })
        .collect()
}

/// Grayscale image with intensities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage(Plane);

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        let plane = Plane::new(width, height, pixels)?;
        Self::from_plane(plane)
    }

    pub fn from_plane(plane: Plane) -> Result<Self> {
        if let Some((i, v)) = plane
            .data
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::InvalidImage(format!(
                "pixel {i} has value {v} outside [0, 1]"
            )));
        }
        Ok(Self(plane))
    }

    /// Builds an image from a closure, clamping its output into `[0, 1]`.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self(Plane::from_fn(width, height, |x, y| clamp_unit(f(x, y))))
    }

    pub fn width(&self) -> usize {
        self.0.width
    }

    pub fn height(&self) -> usize {
        self.0.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.0.data
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.0.get(x, y)
    }

    pub fn as_plane(&self) -> &Plane {
        &self.0
    }

    pub fn into_plane(self) -> Plane {
        self.0
    }

    pub fn resize(&self, out_w: usize, out_h: usize) -> GrayImage {
        let mut plane = self.0.resize(out_w, out_h);
        // Convex combinations can overshoot by an ulp.
        plane.data.iter_mut().for_each(|v| *v = clamp_unit(*v));
        GrayImage(plane)
    }

    pub fn rotate(&self, degrees: f64) -> GrayImage {
        let mut plane = self.0.rotate(degrees);
        plane.data.iter_mut().for_each(|v| *v = clamp_unit(*v));
        GrayImage(plane)
    }

    /// 8-bit quantization, row-major.
    pub fn to_u8(&self) -> Vec<u8> {
        self.0
            .data
            .iter()
            .map(|v| (v * 255.0).round() as u8)
            .collect()
    }
}

#[inline]
fn clamp_unit(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}

pub fn resize(img: &GrayImage, out_w: usize, out_h: usize) -> GrayImage {
    img.resize(out_w, out_h)
}

/// Squashes the image to `side x side`; aspect ratio is not preserved.
pub fn normalize_input(img: &GrayImage, side: usize) -> GrayImage {
    img.resize(side, side)
}

/// Raster formats accepted by [`decode_image`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Png,
    Pgm,
    Bmp,
    Tiff,
}

impl ImageFormat {
    pub fn from_extension(ext: &str) -> Result<Self> {
        match ext.to_ascii_lowercase().as_str() {
            "png" => Ok(Self::Png),
            "pgm" | "pnm" => Ok(Self::Pgm),
            "bmp" => Ok(Self::Bmp),
            "tif" | "tiff" => Ok(Self::Tiff),
            other => Err(Error::UnsupportedFormat(other.to_owned())),
        }
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .ok_or_else(|| Error::UnsupportedFormat(path.display().to_string()))?;
        Self::from_extension(ext)
    }

    fn codec(self) -> image::ImageFormat {
        match self {
            Self::Png => image::ImageFormat::Png,
            Self::Pgm => image::ImageFormat::Pnm,
            Self::Bmp => image::ImageFormat::Bmp,
            Self::Tiff => image::ImageFormat::Tiff,
        }
    }
}

/// Decodes `bytes` to a [`GrayImage`], dividing by the format's maximum
/// sample value. Color input is reduced with [`LUMA_WEIGHTS`]; alpha is
/// ignored.
pub fn decode_image(bytes: &[u8], format: ImageFormat) -> Result<GrayImage> {
    let decoded = image::load_from_memory_with_format(bytes, format.codec())
        .map_err(|e| Error::MalformedImage(e.to_string()))?;
    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    let pixels: Vec<f64> = match &decoded {
        DynamicImage::ImageLuma8(b) => b.as_raw().iter().map(|&v| v as f64 / 255.0).collect(),
        DynamicImage::ImageLumaA8(b) => b.pixels().map(|p| p.0[0] as f64 / 255.0).collect(),
        DynamicImage::ImageLuma16(b) => b.as_raw().iter().map(|&v| v as f64 / 65535.0).collect(),
        DynamicImage::ImageLumaA16(b) => b.pixels().map(|p| p.0[0] as f64 / 65535.0).collect(),
        DynamicImage::ImageRgb8(b) => b.pixels().map(|p| luma(p.0, 255.0)).collect(),
        DynamicImage::ImageRgba8(b) => b.pixels().map(|p| luma(p.0, 255.0)).collect(),
        DynamicImage::ImageRgb16(b) => b.pixels().map(|p| luma(p.0, 65535.0)).collect(),
        DynamicImage::ImageRgba16(b) => b.pixels().map(|p| luma(p.0, 65535.0)).collect(),
        DynamicImage::ImageRgb32F(b) => b.pixels().map(|p| luma(p.0, 1.0)).collect(),
        DynamicImage::ImageRgba32F(b) => b.pixels().map(|p| luma(p.0, 1.0)).collect(),
        other => {
            let rgb = other.to_rgb32f();
            rgb.pixels().map(|p| luma(p.0, 1.0)).collect()
        }
    };
    let pixels = pixels.into_iter().map(clamp_unit).collect();
    GrayImage::new(w, h, pixels)
}

fn luma<T: Copy + Into<f64>, const N: usize>(px: [T; N], max: f64) -> f64 {
    let r: f64 = px[0].into();
    let g: f64 = px[1].into();
    let b: f64 = px[2].into();
    (LUMA_WEIGHTS[0] * r + LUMA_WEIGHTS[1] * g + LUMA_WEIGHTS[2] * b) / max
}

pub fn load_image(path: &Path) -> Result<GrayImage> {
    let format = ImageFormat::from_path(path)?;
    let bytes = std::fs::read(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_owned()),
        _ => Error::Io(e),
    })?;
    decode_image(&bytes, format)
}

/// Binary (P5) 8-bit PGM encoding.
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend(img.to_u8());
    out
}

pub fn write_pgm(path: &Path, img: &GrayImage) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(&encode_pgm(img))?;
    Ok(())
}

/// Rescales a plane linearly so its range maps to `[0, 1]` (for display).
pub fn to_display(plane: &Plane) -> GrayImage {
    let (lo, hi) = plane.min_max();
    let span = hi - lo;
    GrayImage::from_fn(plane.width(), plane.height(), |x, y| {
        if span > 0.0 {
            (plane.get(x, y) - lo) / span
        } else {
            0.0
        }
    })
}

/// Places images side by side on a black strip, each resized to `thumb`.
pub fn contact_sheet(images: &[GrayImage], thumb: usize, gap: usize) -> GrayImage {
    let n = images.len().max(1);
    let width = n * thumb + (n - 1) * gap;
    let mut sheet = Plane::zeros(width, thumb);
    for (i, img) in images.iter().enumerate() {
        let t = img.resize(thumb, thumb);
        let x0 = i * (thumb + gap);
        for y in 0..thumb {
            for x in 0..thumb {
                sheet.set(x0 + x, y, t.get(x, y));
            }
        }
    }
    GrayImage(sheet)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pgm(w: usize, h: usize, maxval: u16, px: &[u8]) -> Vec<u8> {
        let mut out = format!("P5\n{w} {h}\n{maxval}\n").into_bytes();
        out.extend_from_slice(px);
        out
    }

    #[test]
    fn pgm_endpoints_scale_to_unit_range() {
        let img = decode_image(&pgm(2, 2, 255, &[0, 255, 255, 0]), ImageFormat::Pgm).unwrap();
        assert_eq!(img.pixels(), &[0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn red_pixel_uses_bt601_weight() {
        let rgb = image::RgbImage::from_raw(1, 1, vec![255, 0, 0]).unwrap();
        let mut buf = std::io::Cursor::new(Vec::new());
        rgb.write_to(&mut buf, image::ImageFormat::Png).unwrap();
        let img = decode_image(buf.get_ref(), ImageFormat::Png).unwrap();
        assert!((img.pixels()[0] - 0.299).abs() < 1e-12);
    }

    #[test]
    fn sixteen_bit_gray_divides_by_max() {
        let buf16 =
            image::ImageBuffer::<image::Luma<u16>, _>::from_raw(2, 1, vec![0u16, 65535]).unwrap();
        let mut buf = std::io::Cursor::new(Vec::new());
        buf16.write_to(&mut buf, image::ImageFormat::Png).unwrap();
        let img = decode_image(buf.get_ref(), ImageFormat::Png).unwrap();
        assert_eq!(img.pixels(), &[0.0, 1.0]);
    }

    #[test]
    fn garbage_is_malformed() {
        let err = decode_image(&[1, 2, 3, 4], ImageFormat::Png).unwrap_err();
        assert!(matches!(err, Error::MalformedImage(_)));
    }

    #[test]
    fn unknown_extension_is_unsupported() {
        assert!(matches!(
            ImageFormat::from_extension("jpg"),
            Err(Error::UnsupportedFormat(_))
        ));
        assert_eq!(
            ImageFormat::from_extension("TIF").unwrap(),
            ImageFormat::Tiff
        );
    }

    #[test]
    fn decoding_twice_is_bit_identical() {
        let bytes = pgm(3, 2, 255, &[1, 2, 3, 200, 100, 50]);
        let a = decode_image(&bytes, ImageFormat::Pgm).unwrap();
        let b = decode_image(&bytes, ImageFormat::Pgm).unwrap();
        let bits = |g: &GrayImage| g.pixels().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn rejects_out_of_range_pixels() {
        assert!(GrayImage::new(1, 1, vec![1.5]).is_err());
        assert!(GrayImage::new(2, 1, vec![0.5]).is_err());
    }

    #[test]
    fn resize_identity() {
        let img = GrayImage::from_fn(5, 3, |x, y| (x * 3 + y) as f64 / 20.0);
        assert_eq!(img.resize(5, 3), img);
    }

    #[test]
    fn resize_preserves_constants() {
        let img = GrayImage::from_fn(7, 9, |_, _| 0.37);
        for (w, h) in [(3, 3), (16, 5), (1, 1), (100, 37)] {
            let out = img.resize(w, h);
            assert!(out.pixels().iter().all(|&v| v == 0.37));
        }
    }

    #[test]
    fn ramp_downsize_matches_hand_values() {
        // p(x, y) = (x + 4y) / 15; each output pixel averages a 2x2 block
        // because source coordinates land on block centers.
        let img = GrayImage::from_fn(4, 4, |x, y| (x + 4 * y) as f64 / 15.0);
        let out = img.resize(2, 2);
        let expected = [2.5 / 15.0, 4.5 / 15.0, 10.5 / 15.0, 12.5 / 15.0];
        for (a, b) in out.pixels().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
    }

    #[test]
    fn normalize_shapes() {
        let img = GrayImage::from_fn(256, 512, |x, _| x as f64 / 255.0);
        let out = normalize_input(&img, 128);
        assert_eq!((out.width(), out.height()), (128, 128));
        let same = GrayImage::from_fn(128, 128, |x, y| ((x ^ y) & 1) as f64);
        assert_eq!(normalize_input(&same, 128), same);
    }

    #[test]
    fn rotate_by_zero_is_identity() {
        let img = GrayImage::from_fn(6, 6, |x, y| ((x * 7 + y * 3) % 5) as f64 / 4.0);
        assert_eq!(img.rotate(0.0), img);
    }

    #[test]
    fn pgm_encoding_round_trips() {
        let img = GrayImage::from_fn(3, 2, |x, y| (x + y) as f64 / 3.0);
        let back = decode_image(&encode_pgm(&img), ImageFormat::Pgm).unwrap();
        assert_eq!(back.to_u8(), img.to_u8());
    }
}
