//! Property tests across modules.

mod common;

use grcbir::barcode::BitCode;
use grcbir::gabor::{
    block_mean_pool, build_bank, convolve, ComplexPlane, GaborParams, GrfExtractor,
};
use grcbir::imaging::{GrayImage, Plane};
use grcbir::irma::{
    build_alphabets, irma_error_with, ErrorOptions, IrmaCode, PositionNumbering, AXIS_LENGTHS,
};
use grcbir::radon::radon_transform_plane;
use grcbir::svm::KernelSpec;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn plane_strategy(max_side: usize) -> impl Strategy<Value = Plane> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(w, h)| {
        prop::collection::vec(0.0f64..1.0, w * h).prop_map(move |d| Plane::new(w, h, d).unwrap())
    })
}

fn bits_strategy(len: usize) -> impl Strategy<Value = BitCode> {
    prop::collection::vec(any::<bool>(), len).prop_map(|b| BitCode::from_bools(&b))
}

const CODE_CHARS: &[u8] = b"0123456789abc";

fn code_strategy() -> impl Strategy<Value = IrmaCode> {
    prop::collection::vec(0..CODE_CHARS.len(), 13).prop_map(|ix| {
        let s: String = ix.iter().map(|&i| CODE_CHARS[i] as char).collect();
        IrmaCode::parse(&s).unwrap()
    })
}

fn opts(propagate: bool, normalize: bool) -> ErrorOptions {
    ErrorOptions {
        propagate,
        normalize,
        numbering: PositionNumbering::AxisLocal,
    }
}

/// Copy of `code` with position `p` changed to a character it does not hold.
fn flip(code: &IrmaCode, p: usize) -> IrmaCode {
    let mut chars = *code.chars();
    chars[p] = if chars[p] == b'z' { b'y' } else { b'z' };
    IrmaCode::parse(std::str::from_utf8(&chars).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hamming_is_a_metric(a in bits_strategy(97), b in bits_strategy(97), c in bits_strategy(97)) {
        let d = |x: &BitCode, y: &BitCode| x.hamming(y).unwrap();
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert_eq!(d(&a, &a), 0);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
        prop_assert_eq!(d(&a, &b), common::naive_hamming(&a, &b));
        prop_assert_eq!(d(&a, &a.complement()), 97);
    }

    #[test]
    fn resize_stays_within_input_range(img in plane_strategy(12), w in 1usize..20, h in 1usize..20) {
        let out = img.resize(w, h);
        let (lo, hi) = img.min_max();
        prop_assert!(out.data().iter().all(|&v| v >= lo - 1e-12 && v <= hi + 1e-12));
    }

    #[test]
    fn resize_matches_bilinear_oracle(img in plane_strategy(12), w in 1usize..20, h in 1usize..20) {
        let got = img.resize(w, h);
        let want = common::resize_oracle(&img, w, h);
        for (g, r) in got.data().iter().zip(want.data()) {
            prop_assert!((g - r).abs() < 1e-12, "{} vs {}", g, r);
        }
    }

    #[test]
    fn resize_to_same_size_is_identity(img in plane_strategy(12)) {
        prop_assert_eq!(img.resize(img.width(), img.height()), img);
    }

    #[test]
    fn convolution_is_linear(
        a in prop::collection::vec(-1.0f64..1.0, 64),
        b in prop::collection::vec(-1.0f64..1.0, 64),
        k in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 9),
        s in -3.0f64..3.0,
    ) {
        let kernel = ComplexPlane {
            width: 3,
            height: 3,
            data: k.iter().map(|&(re, im)| Complex64::new(re, im)).collect(),
        };
        let pa = Plane::new(8, 8, a.clone()).unwrap();
        let pb = Plane::new(8, 8, b.clone()).unwrap();
        let mix = Plane::new(8, 8, a.iter().zip(&b).map(|(x, y)| x + s * y).collect()).unwrap();
        let (ca, cb, cm) = (
            convolve(&pa, &kernel).unwrap(),
            convolve(&pb, &kernel).unwrap(),
            convolve(&mix, &kernel).unwrap(),
        );
        for i in 0..64 {
            prop_assert!((cm.data[i] - (ca.data[i] + cb.data[i] * s)).norm() < 1e-12);
        }
    }

    #[test]
    fn block_pooling_preserves_the_mean(v in prop::collection::vec(0.0f64..1.0, 64)) {
        let pooled = block_mean_pool(&v, 8, 8, 4, 2);
        prop_assert_eq!(pooled.len(), 8);
        let mean = |x: &[f64]| x.iter().sum::<f64>() / x.len() as f64;
        prop_assert!((mean(&pooled) - mean(&v)).abs() < 1e-12);
    }

    #[test]
    fn irma_error_basic_laws(t in code_strategy(), r in code_strategy(), extra in code_strategy()) {
        let table = build_alphabets([&t, &r, &extra]).unwrap();
        for propagate in [true, false] {
            let raw = irma_error_with(&t, &r, &table, &opts(propagate, false)).unwrap();
            let norm = irma_error_with(&t, &r, &table, &opts(propagate, true)).unwrap();
            prop_assert!(raw >= 0.0);
            prop_assert_eq!(raw == 0.0, t == r);
            prop_assert!(norm <= 1.0 + 1e-12);
            prop_assert_eq!(irma_error_with(&t, &t, &table, &opts(propagate, true)).unwrap(), 0.0);
        }
        let with = irma_error_with(&t, &r, &table, &opts(true, false)).unwrap();
        let without = irma_error_with(&t, &r, &table, &opts(false, false)).unwrap();
        prop_assert!(with >= without - 1e-12);
    }

    #[test]
    fn earlier_mistakes_cost_more(t in code_strategy(), axis in 0usize..4, a in 0usize..4, b in 0usize..4) {
        let len = AXIS_LENGTHS[axis];
        let (a, b) = (a % len, b % len);
        prop_assume!(a < b);
        let start: usize = AXIS_LENGTHS[..axis].iter().sum();
        let early = flip(&t, start + a);
        let late = flip(&t, start + b);
        let table = build_alphabets([&t, &early, &late]).unwrap();
        let o = opts(true, false);
        prop_assert!(
            irma_error_with(&t, &early, &table, &o).unwrap() > irma_error_with(&t, &late, &table, &o).unwrap()
        );
    }

    #[test]
    fn irma_codes_round_trip(c in code_strategy()) {
        prop_assert_eq!(IrmaCode::parse(&c.to_string()).unwrap(), c);
        prop_assert_eq!(IrmaCode::parse(c.raw()).unwrap(), c);
        prop_assert_eq!(c.to_string().len(), 16);
    }

    #[test]
    fn rbf_gram_matrix_is_psd(
        pts in prop::collection::vec(prop::collection::vec(-2.0f32..2.0, 3), 2..12),
        gamma in 0.05f64..4.0,
    ) {
        let k = KernelSpec::rbf(gamma);
        let n = pts.len();
        let gram = DMatrix::from_fn(n, n, |i, j| k.eval(&pts[i], &pts[j]));
        prop_assert!((gram.clone() - gram.transpose()).abs().max() < 1e-12);
        let eig = gram.symmetric_eigenvalues();
        prop_assert!(eig.iter().all(|&e| e > -1e-9), "{:?}", eig);
    }
}

#[test]
fn barcode_bits_follow_block_medians() {
    let bank = build_bank(&GaborParams::with_shape(2, 3)).unwrap();
    let ex = GrfExtractor::new(bank, 16, 32, 4, 4).unwrap();
    let mut rng = common::rng(11);
    for _ in 0..4 {
        let img = GrayImage::from_plane(common::random_plane(&mut rng, 48, 48)).unwrap();
        let (grf, grbf) = ex.extract(&img).unwrap();
        let block = ex.block_len();
        assert_eq!(grf.len(), grbf.bits.len());
        for (f, chunk) in grf.as_slice().chunks(block).enumerate() {
            let mut sorted: Vec<f64> = chunk.iter().map(|&v| v as f64).collect();
            sorted.sort_by(f64::total_cmp);
            let median = (sorted[block / 2 - 1] + sorted[block / 2]) / 2.0;
            for (i, &v) in chunk.iter().enumerate() {
                assert_eq!(
                    grbf.bits.get(f * block + i),
                    v as f64 >= median,
                    "filter {f}, cell {i}"
                );
            }
        }
    }
}

#[test]
fn rotating_the_image_shifts_the_sinogram() {
    let side = 33;
    let c = (side as f64 - 1.0) / 2.0;
    let blob = Plane::from_fn(side, side, |x, y| {
        let (u, v) = (x as f64 - c - 3.0, y as f64 - c + 1.5);
        (-(u * u / 32.0 + v * v / 12.5)).exp()
    });
    let n_angles = 12;
    let step = 180.0 / n_angles as f64;
    let base = radon_transform_plane(&blob, n_angles).unwrap();
    let center = base.center_bin();
    let mut worst: f64 = 0.0;
    for shift in 1..4 {
        let rotated = radon_transform_plane(&blob.rotate(step * shift as f64), n_angles).unwrap();
        for k in shift..n_angles {
            let want = base.projection(k - shift);
            let got = rotated.projection(k);
            let peak = want.iter().cloned().fold(0.0, f64::max);
            for b in center - side / 3..=center + side / 3 {
                let err = (got[b] - want[b]).abs() / peak;
                worst = worst.max(err);
                assert!(err <= 5e-2, "shift {shift}, angle {k}, bin {b}: {err}");
            }
        }
    }
    println!("worst relative deviation {worst:.3e}");
}
