use num_complex::Complex64;

use super::bank::ComplexPlane;
use crate::error::{Error, Result};
use crate::imaging::Plane;

/// Same-size 2-D convolution of a real plane with a complex kernel:
/// `out(x, y) = Σ_s Σ_t img(x - s, y - t) · kernel(s, t)`, with `(s, t)`
/// measured from the kernel center and zero padding outside the image.
pub fn convolve(img: &Plane, kernel: &ComplexPlane) -> Result<ComplexPlane> {
    let (w, h) = (img.width(), img.height());
    let (kw, kh) = (kernel.width, kernel.height);
    if kw > w || kh > h {
        return Err(Error::KernelLargerThanImage {
            kernel_w: kw,
            kernel_h: kh,
            image_w: w,
            image_h: h,
        });
    }
    let (kcx, kcy) = ((kw / 2) as isize, (kh / 2) as isize);
    let src = img.data();
    let mut out = ComplexPlane::zeros(w, h);

    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut acc = Complex64::new(0.0, 0.0);
            // Kernel row index kr corresponds to t = kr - kcy; source row y - t.
            for kr in 0..kh as isize {
                let sy = y - (kr - kcy);
                if sy < 0 || sy >= h as isize {
                    continue;
                }
                let src_row = &src[sy as usize * w..(sy as usize + 1) * w];
                let k_row = &kernel.data[kr as usize * kw..(kr as usize + 1) * kw];
                // Valid kc satisfy 0 <= x - (kc - kcx) < w.
                let kc_lo = (x + kcx - w as isize + 1).max(0);
                let kc_hi = (x + kcx).min(kw as isize - 1);
                for kc in kc_lo..=kc_hi {
                    let sx = (x - (kc - kcx)) as usize;
                    acc += k_row[kc as usize] * src_row[sx];
                }
            }
            out.data[y as usize * w + x as usize] = acc;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel_3x3() -> ComplexPlane {
        ComplexPlane {
            width: 3,
            height: 3,
            data: (0..9)
                .map(|i| Complex64::new(i as f64, -(i as f64) / 2.0))
                .collect(),
        }
    }

    #[test]
    fn impulse_reproduces_kernel_about_impulse() {
        let mut img = Plane::zeros(7, 7);
        img.set(3, 3, 1.0);
        let k = kernel_3x3();
        let out = convolve(&img, &k).unwrap();
        for y in 0..7 {
            for x in 0..7 {
                let expected = if (2..=4).contains(&x) && (2..=4).contains(&y) {
                    k.get(x - 2, y - 2)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                assert_eq!(out.get(x, y), expected, "({x},{y})");
            }
        }
    }

    #[test]
    fn zero_image_gives_zero() {
        let out = convolve(&Plane::zeros(5, 4), &kernel_3x3()).unwrap();
        assert!(out.data.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn oversized_kernel_is_rejected() {
        let err = convolve(&Plane::zeros(2, 5), &kernel_3x3()).unwrap_err();
        assert!(matches!(err, Error::KernelLargerThanImage { .. }));
    }

    #[test]
    fn kernel_equal_to_image_size() {
        let img = Plane::from_fn(3, 3, |x, y| (x + y) as f64);
        let out = convolve(&img, &kernel_3x3()).unwrap();
        // Center output sees the whole flipped overlap.
        let mut want = Complex64::new(0.0, 0.0);
        for t in -1isize..=1 {
            for s in -1isize..=1 {
                let (sx, sy) = (1 - s, 1 - t);
                want += kernel_3x3().get((s + 1) as usize, (t + 1) as usize)
                    * img.get(sx as usize, sy as usize);
            }
        }
        assert!((out.get(1, 1) - want).norm() < 1e-12);
    }
}
