//! Binary artifact files: features (`GRF1`), barcodes (`GRB1`), SVM models
//! (`SVM1`) and class indexes (`IDX1`). Little-endian throughout; strings are
//! a `u32` byte length followed by UTF-8.

use std::fs;
use std::path::{Path, PathBuf};

use crate::barcode::BitCode;
use crate::error::{Error, Result};
use crate::retrieval::{build_index_with_len, ClassIndex, IndexRecord};
use crate::svm::{BinaryModel, FeatureScaling, KernelKind, KernelSpec, MulticlassModel};

pub const FEATURE_MAGIC: &[u8; 4] = b"GRF1";
pub const BARCODE_MAGIC: &[u8; 4] = b"GRB1";
pub const MODEL_MAGIC: &[u8; 4] = b"SVM1";
pub const INDEX_MAGIC: &[u8; 4] = b"IDX1";
pub const FORMAT_VERSION: u32 = 1;

/// Extraction parameters recorded in feature and barcode headers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtractionHeader {
    pub scales: u32,
    pub orientations: u32,
    pub d1: u32,
    pub d2: u32,
    pub n_angles: u32,
    pub vector_dim: u32,
    pub fingerprint: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureFile {
    pub header: ExtractionHeader,
    pub records: Vec<(String, Vec<f32>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BarcodeFile {
    pub header: ExtractionHeader,
    pub records: Vec<(String, BitCode)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub fingerprint: u64,
    pub model: MulticlassModel,
}

#[derive(Default)]
struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn bytes(&mut self, b: &[u8]) {
        self.buf.extend_from_slice(b);
    }

    fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    fn u32(&mut self, v: u32) {
        self.bytes(&v.to_le_bytes());
    }

    fn u64(&mut self, v: u64) {
        self.bytes(&v.to_le_bytes());
    }

    fn f32(&mut self, v: f32) {
        self.bytes(&v.to_le_bytes());
    }

    fn f64(&mut self, v: f64) {
        self.bytes(&v.to_le_bytes());
    }

    fn len(&mut self, n: usize) -> Result<()> {
        let n = u32::try_from(n)
            .map_err(|_| Error::InvalidParameter(format!("length {n} exceeds u32")))?;
        self.u32(n);
        Ok(())
    }

    fn str(&mut self, s: &str) -> Result<()> {
        self.len(s.len())?;
        self.bytes(s.as_bytes());
        Ok(())
    }

    fn header(&mut self, magic: &[u8; 4]) {
        self.bytes(magic);
        self.u32(FORMAT_VERSION);
    }
}

struct Reader<'a> {
    path: &'a Path,
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(path: &'a Path, data: &'a [u8]) -> Self {
        Self { path, data, pos: 0 }
    }

    fn bad(&self, reason: impl Into<String>) -> Error {
        Error::BadArtifact {
            path: self.path.to_path_buf(),
            reason: reason.into(),
        }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.data.len());
        match end {
            Some(end) => {
                let s = &self.data[self.pos..end];
                self.pos = end;
                Ok(s)
            }
            None => Err(self.bad(format!("truncated at byte {}", self.pos))),
        }
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().expect("length checked"))
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.array()?))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.array()?))
    }

    fn f32(&mut self) -> Result<f32> {
        Ok(f32::from_le_bytes(self.array()?))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.array()?))
    }

    fn usize(&mut self) -> Result<usize> {
        Ok(self.u32()? as usize)
    }

    fn str(&mut self) -> Result<String> {
        let n = self.usize()?;
        let bytes = self.take(n)?;
        String::from_utf8(bytes.to_vec()).map_err(|_| self.bad("string is not UTF-8"))
    }

    fn header(&mut self, magic: &[u8; 4]) -> Result<()> {
        let found = self
            .take(4)
            .map_err(|_| self.bad("file too short for a header"))?;
        if found != magic {
            return Err(self.bad(format!(
                "bad magic {:?}, expected {:?}",
                String::from_utf8_lossy(found),
                String::from_utf8_lossy(magic)
            )));
        }
        let version = self.u32()?;
        if version != FORMAT_VERSION {
            return Err(self.bad(format!("unsupported version {version}")));
        }
        Ok(())
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.data.len() {
            return Err(self.bad(format!("{} trailing bytes", self.data.len() - self.pos)));
        }
        Ok(())
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    if !path.is_file() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    Ok(fs::read(path)?)
}

fn write_extraction_header(w: &mut Writer, h: &ExtractionHeader, count: usize) -> Result<()> {
    for v in [
        h.scales,
        h.orientations,
        h.d1,
        h.d2,
        h.n_angles,
        h.vector_dim,
    ] {
        w.u32(v);
    }
    w.len(count)?;
    w.u64(h.fingerprint);
    Ok(())
}

fn read_extraction_header(r: &mut Reader) -> Result<(ExtractionHeader, usize)> {
    let mut v = [0u32; 6];
    for slot in &mut v {
        *slot = r.u32()?;
    }
    let count = r.usize()?;
    let fingerprint = r.u64()?;
    let h = ExtractionHeader {
        scales: v[0],
        orientations: v[1],
        d1: v[2],
        d2: v[3],
        n_angles: v[4],
        vector_dim: v[5],
        fingerprint,
    };
    Ok((h, count))
}

pub fn encode_features(file: &FeatureFile) -> Result<Vec<u8>> {
    let dim = file.header.vector_dim as usize;
    let mut w = Writer::default();
    w.header(FEATURE_MAGIC);
    write_extraction_header(&mut w, &file.header, file.records.len())?;
    for (id, values) in &file.records {
        if values.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: values.len(),
            });
        }
        w.str(id)?;
        values.iter().for_each(|&v| w.f32(v));
    }
    Ok(w.buf)
}

pub fn decode_features(path: &Path, data: &[u8]) -> Result<FeatureFile> {
    let mut r = Reader::new(path, data);
    r.header(FEATURE_MAGIC)?;
    let (header, count) = read_extraction_header(&mut r)?;
    let dim = header.vector_dim as usize;
    let mut records = Vec::with_capacity(count.min(1 << 20));
    for _ in 0..count {
        let id = r.str()?;
        let values = (0..dim).map(|_| r.f32()).collect::<Result<Vec<_>>>()?;
        records.push((id, values));
    }
    r.finish()?;
    Ok(FeatureFile { header, records })
}

pub fn write_features(path: &Path, file: &FeatureFile) -> Result<()> {
    Ok(fs::write(path, encode_features(file)?)?)
}

pub fn read_features(path: &Path) -> Result<FeatureFile> {
    decode_features(path, &read_file(path)?)
}

pub fn encode_barcodes(file: &BarcodeFile) -> Result<Vec<u8>> {
    let dim = file.header.vector_dim as usize;
    let mut w = Writer::default();
    w.header(BARCODE_MAGIC);
    write_extraction_header(&mut w, &file.header, file.records.len())?;
    for (id, code) in &file.records {
        if code.len() != dim {
            return Err(Error::LengthMismatch(dim, code.len()));
        }
        w.str(id)?;
        w.bytes(&code.to_bytes());
    }
    Ok(w.buf)
}

pub fn decode_barcodes(path: &Path, data: &[u8]) -> Result<BarcodeFile> {
    let mut r = Reader::new(path, data);
    r.header(BARCODE_MAGIC)?;
    let (header, count) = read_extraction_header(&mut r)?;
    let dim = header.vector_dim as usize;
    let mut records = Vec::with_capacity(count.min(1 << 20));
    for _ in 0..count {
        let id = r.str()?;
        let bytes = r.take(dim.div_ceil(8))?;
        records.push((id, BitCode::from_bytes(dim, bytes)?));
    }
    r.finish()?;
    Ok(BarcodeFile { header, records })
}

pub fn write_barcodes(path: &Path, file: &BarcodeFile) -> Result<()> {
    Ok(fs::write(path, encode_barcodes(file)?)?)
}

pub fn read_barcodes(path: &Path) -> Result<BarcodeFile> {
    decode_barcodes(path, &read_file(path)?)
}

fn kind_tag(kind: KernelKind) -> u8 {
    match kind {
        KernelKind::Rbf => 0,
        KernelKind::Polynomial => 1,
        KernelKind::Linear => 2,
    }
}

pub fn encode_model(file: &ModelFile) -> Result<Vec<u8>> {
    let m = &file.model;
    let dim = m.dim();
    let mut w = Writer::default();
    w.header(MODEL_MAGIC);
    w.u64(file.fingerprint);
    w.u8(kind_tag(m.kernel.kind));
    w.f64(m.kernel.gamma);
    w.u32(m.kernel.degree);
    w.f64(m.kernel.coef0);
    w.len(m.classes.len())?;
    for c in &m.classes {
        w.str(c)?;
    }
    w.len(dim)?;
    for &(lo, hi) in &m.scaling.ranges {
        w.f64(lo);
        w.f64(hi);
    }
    w.len(m.binaries.len())?;
    for b in &m.binaries {
        w.len(b.class_pair.0)?;
        w.len(b.class_pair.1)?;
        w.len(b.support_vectors.len())?;
        for sv in &b.support_vectors {
            if sv.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: sv.len(),
                });
            }
            sv.iter().for_each(|&v| w.f32(v));
        }
        b.alphas.iter().for_each(|&a| w.f64(a));
        w.f64(b.bias);
    }
    Ok(w.buf)
}

pub fn decode_model(path: &Path, data: &[u8]) -> Result<ModelFile> {
    let mut r = Reader::new(path, data);
    r.header(MODEL_MAGIC)?;
    let fingerprint = r.u64()?;
    let kind = match r.u8()? {
        0 => KernelKind::Rbf,
        1 => KernelKind::Polynomial,
        2 => KernelKind::Linear,
        t => return Err(r.bad(format!("unknown kernel tag {t}"))),
    };
    let kernel = KernelSpec {
        kind,
        gamma: r.f64()?,
        degree: r.u32()?,
        coef0: r.f64()?,
    };
    let k = r.usize()?;
    let classes = (0..k).map(|_| r.str()).collect::<Result<Vec<_>>>()?;
    let dim = r.usize()?;
    let ranges = (0..dim)
        .map(|_| Ok((r.f64()?, r.f64()?)))
        .collect::<Result<Vec<_>>>()?;
    let n_bin = r.usize()?;
    let mut binaries = Vec::with_capacity(n_bin.min(1 << 16));
    for _ in 0..n_bin {
        let pair = (r.usize()?, r.usize()?);
        if pair.0 >= k || pair.1 >= k {
            return Err(r.bad(format!("class pair {pair:?} out of range for {k} classes")));
        }
        let n_sv = r.usize()?;
        let support_vectors = (0..n_sv)
            .map(|_| (0..dim).map(|_| r.f32()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let alphas = (0..n_sv).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
        let bias = r.f64()?;
        binaries.push(BinaryModel {
            support_vectors,
            alphas,
            bias,
            class_pair: pair,
        });
    }
    r.finish()?;
    Ok(ModelFile {
        fingerprint,
        model: MulticlassModel {
            classes,
            binaries,
            kernel,
            scaling: FeatureScaling { ranges },
        },
    })
}

pub fn write_model(path: &Path, file: &ModelFile) -> Result<()> {
    Ok(fs::write(path, encode_model(file)?)?)
}

pub fn read_model(path: &Path) -> Result<ModelFile> {
    decode_model(path, &read_file(path)?)
}

pub fn encode_index(index: &ClassIndex) -> Result<Vec<u8>> {
    let mut w = Writer::default();
    w.header(INDEX_MAGIC);
    w.len(index.code_len_bits())?;
    w.len(index.class_count())?;
    w.u64(index.fingerprint());
    let records = index.records();
    for (class, bucket) in index.buckets() {
        w.str(class)?;
        w.len(bucket.len())?;
        for r in records.iter().filter(|r| r.class == class) {
            w.str(&r.id)?;
            w.bytes(&r.code.to_bytes());
        }
    }
    Ok(w.buf)
}

pub fn decode_index(path: &Path, data: &[u8]) -> Result<ClassIndex> {
    let mut r = Reader::new(path, data);
    r.header(INDEX_MAGIC)?;
    let bits = r.usize()?;
    let classes = r.usize()?;
    let fingerprint = r.u64()?;
    let mut records = Vec::new();
    for _ in 0..classes {
        let class = r.str()?;
        let n = r.usize()?;
        for _ in 0..n {
            let id = r.str()?;
            let code = BitCode::from_bytes(bits, r.take(bits.div_ceil(8))?)?;
            records.push(IndexRecord {
                id,
                class: class.clone(),
                code,
            });
        }
    }
    r.finish()?;
    build_index_with_len(&records, bits, fingerprint).map_err(|e| r.bad(e.to_string()))
}

pub fn write_index(path: &Path, index: &ClassIndex) -> Result<()> {
    Ok(fs::write(path, encode_index(index)?)?)
}

pub fn read_index(path: &Path) -> Result<ClassIndex> {
    decode_index(path, &read_file(path)?)
}

/// Path with `suffix` appended to the file name.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(suffix);
    path.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::retrieval::build_index;

    fn header(dim: u32) -> ExtractionHeader {
        ExtractionHeader {
            scales: 4,
            orientations: 5,
            d1: 4,
            d2: 4,
            n_angles: 32,
            vector_dim: dim,
            fingerprint: 0xDEAD_BEEF_0123_4567,
        }
    }

    #[test]
    fn features_round_trip() {
        let file = FeatureFile {
            header: header(3),
            records: vec![
                ("a".into(), vec![1.0, -2.5, 3.25]),
                ("é".into(), vec![0.0, f32::MAX, 1e-30]),
            ],
        };
        let bytes = encode_features(&file).unwrap();
        assert_eq!(&bytes[..4], b"GRF1");
        assert_eq!(decode_features(Path::new("f"), &bytes).unwrap(), file);
    }

    #[test]
    fn barcodes_round_trip() {
        let file = BarcodeFile {
            header: header(11),
            records: vec![("x".into(), BitCode::from_bit_str("10110011101"))],
        };
        let bytes = encode_barcodes(&file).unwrap();
        // header 4+4+6*4+4+8, id 4+1, code 2 bytes
        assert_eq!(bytes.len(), 44 + 5 + 2);
        assert_eq!(decode_barcodes(Path::new("b"), &bytes).unwrap(), file);
    }

    #[test]
    fn bad_magic_names_the_file() {
        let err = decode_barcodes(Path::new("codes.grb"), b"NOPE\x01\0\0\0").unwrap_err();
        assert!(matches!(err, Error::BadArtifact { .. }));
        assert!(err.to_string().contains("codes.grb"));
        assert_eq!(err.exit_code(), 3);
        let err = decode_index(Path::new("i"), b"IDX1").unwrap_err();
        assert!(err.to_string().contains("truncated"));
    }

    #[test]
    fn model_round_trip() {
        let model = MulticlassModel {
            classes: vec!["a".into(), "b".into(), "c".into()],
            binaries: vec![
                BinaryModel {
                    support_vectors: vec![vec![0.5, 1.0], vec![0.25, 0.0]],
                    alphas: vec![1.5, -1.5],
                    bias: 0.125,
                    class_pair: (0, 1),
                },
                BinaryModel {
                    support_vectors: vec![],
                    alphas: vec![],
                    bias: -1.0,
                    class_pair: (0, 2),
                },
            ],
            kernel: KernelSpec::rbf(0.75),
            scaling: FeatureScaling {
                ranges: vec![(0.0, 1.0), (-3.0, 2.0)],
            },
        };
        let file = ModelFile {
            fingerprint: 42,
            model,
        };
        let bytes = encode_model(&file).unwrap();
        assert_eq!(decode_model(Path::new("m"), &bytes).unwrap(), file);
    }

    #[test]
    fn index_round_trip() {
        let recs = vec![
            IndexRecord {
                id: "a".into(),
                class: "y".into(),
                code: BitCode::from_bit_str("1010101010"),
            },
            IndexRecord {
                id: "b".into(),
                class: "x".into(),
                code: BitCode::from_bit_str("0000011111"),
            },
            IndexRecord {
                id: "c".into(),
                class: "y".into(),
                code: BitCode::from_bit_str("1111100000"),
            },
        ];
        let idx = build_index(&recs, 9).unwrap();
        let bytes = encode_index(&idx).unwrap();
        assert_eq!(decode_index(Path::new("i"), &bytes).unwrap(), idx);
    }
}
