//! Saved models and indexes behave exactly like the in-memory ones.

mod common;

use grcbir::retrieval::{build_index, IndexRecord};
use grcbir::store::{
    decode_index, decode_model, encode_index, encode_model, read_index, write_index, ModelFile,
};
use grcbir::svm::{pair_count, train_multiclass, KernelSpec, SmoParams};
use rand::Rng;
use std::path::Path;

#[test]
fn index_round_trip_answers_queries_identically() {
    let mut rng = common::rng(21);
    let records: Vec<IndexRecord> = (0..300)
        .map(|i| IndexRecord {
            id: format!("img{i:03}"),
            class: format!("class{}", i % 7),
            code: common::random_code(&mut rng, 1280),
        })
        .collect();
    let index = build_index(&records, 0xFEED).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("i.idx");
    write_index(&path, &index).unwrap();
    let loaded = read_index(&path).unwrap();
    assert_eq!(
        encode_index(&loaded).unwrap(),
        encode_index(&index).unwrap()
    );
    for _ in 0..50 {
        let q = common::random_code(&mut rng, 1280);
        let class = format!("class{}", rng.gen_range(0..7));
        assert_eq!(
            loaded.query(&class, &q, 10).unwrap(),
            index.query(&class, &q, 10).unwrap()
        );
    }
}

#[test]
fn fifty_seven_classes_give_1596_binaries() {
    let mut rng = common::rng(57);
    let mut xs = Vec::new();
    let mut labels = Vec::new();
    for c in 0..57 {
        for _ in 0..3 {
            xs.push(vec![
                c as f32 + rng.gen_range(-0.1f32..0.1),
                rng.gen_range(-0.1f32..0.1),
            ]);
            labels.push(format!("{c:02}"));
        }
    }
    let refs: Vec<&[f32]> = xs.iter().map(|v| v.as_slice()).collect();
    let labs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    let model =
        train_multiclass(&refs, &labs, &KernelSpec::rbf(1.0), &SmoParams::default()).unwrap();
    assert_eq!(pair_count(57), 1596);
    assert_eq!(model.binaries.len(), 1596);

    let file = ModelFile {
        fingerprint: 9,
        model,
    };
    let bytes = encode_model(&file).unwrap();
    let back = decode_model(Path::new("m.svm"), &bytes).unwrap();
    assert_eq!(back.model, file.model);
    for x in &refs {
        assert_eq!(
            back.model.predict(x).unwrap(),
            file.model.predict(x).unwrap()
        );
    }
}

#[test]
fn truncated_index_is_rejected() {
    let records = vec![IndexRecord {
        id: "a".into(),
        class: "c".into(),
        code: common::random_code(&mut common::rng(1), 64),
    }];
    let bytes = encode_index(&build_index(&records, 1).unwrap()).unwrap();
    for cut in [0, 4, bytes.len() / 2, bytes.len() - 1] {
        assert!(decode_index(Path::new("x.idx"), &bytes[..cut]).is_err());
    }
}
