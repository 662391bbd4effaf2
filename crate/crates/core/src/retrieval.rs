//! Class-partitioned barcode index with exact Hamming k-NN.
//!
//! Each class bucket keeps its codes in one contiguous word buffer so a
//! query is a linear XOR-popcount scan over that bucket only.

use std::collections::{BTreeMap, HashSet};

use crate::barcode::{hamming_words, words_for, BitCode};
use crate::error::{Error, Result};

/// Hamming distance between equal-length bit vectors.
pub fn hamming(a: &BitCode, b: &BitCode) -> Result<u32> {
    a.hamming(b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bucket {
    ids: Vec<String>,
    words: Vec<u64>,
    stride: usize,
}

impl Bucket {
    fn new(stride: usize) -> Self {
        Self {
            ids: Vec::new(),
            words: Vec::new(),
            stride,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn code_words(&self, pos: usize) -> &[u64] {
        &self.words[pos * self.stride..(pos + 1) * self.stride]
    }
}

/// One indexed record, used to build an index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexRecord {
    pub id: String,
    pub class: String,
    pub code: BitCode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hit {
    pub id: String,
    pub distance: u32,
    /// Position within the class bucket.
    pub position: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScanStats {
    pub scanned: usize,
}

/// Immutable index of barcodes grouped by class label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassIndex {
    code_len_bits: usize,
    fingerprint: u64,
    buckets: BTreeMap<String, Bucket>,
}

/// Groups records by class, keeping input order within each bucket.
pub fn build_index(records: &[IndexRecord], fingerprint: u64) -> Result<ClassIndex> {
    let code_len_bits = records.first().map_or(0, |r| r.code.len());
    build_index_with_len(records, code_len_bits, fingerprint)
}

/// As [`build_index`] with the code length fixed up front.
pub fn build_index_with_len(
    records: &[IndexRecord],
    code_len_bits: usize,
    fingerprint: u64,
) -> Result<ClassIndex> {
    let stride = words_for(code_len_bits);
    let mut seen = HashSet::new();
    let mut buckets: BTreeMap<String, Bucket> = BTreeMap::new();
    for r in records {
        if r.code.len() != code_len_bits {
            return Err(Error::LengthMismatch(code_len_bits, r.code.len()));
        }
        if !seen.insert(r.id.as_str()) {
            return Err(Error::DuplicateId(r.id.clone()));
        }
        let bucket = buckets
            .entry(r.class.clone())
            .or_insert_with(|| Bucket::new(stride));
        bucket.ids.push(r.id.clone());
        bucket.words.extend_from_slice(r.code.words());
    }
    Ok(ClassIndex {
        code_len_bits,
        fingerprint,
        buckets,
    })
}

impl ClassIndex {
    pub fn code_len_bits(&self) -> usize {
        self.code_len_bits
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn class_count(&self) -> usize {
        self.buckets.len()
    }

    pub fn len(&self) -> usize {
        self.buckets.values().map(Bucket::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn classes(&self) -> impl Iterator<Item = &str> {
        self.buckets.keys().map(String::as_str)
    }

    pub fn bucket(&self, class: &str) -> Option<&Bucket> {
        self.buckets.get(class)
    }

    pub fn buckets(&self) -> impl Iterator<Item = (&str, &Bucket)> {
        self.buckets.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Records in bucket order, class by class.
    pub fn records(&self) -> Vec<IndexRecord> {
        let mut out = Vec::with_capacity(self.len());
        for (class, bucket) in &self.buckets {
            for (pos, id) in bucket.ids.iter().enumerate() {
                let bytes: Vec<u8> = bucket
                    .code_words(pos)
                    .iter()
                    .flat_map(|w| w.to_le_bytes())
                    .collect();
                let code = BitCode::from_bytes(
                    self.code_len_bits,
                    &bytes[..self.code_len_bits.div_ceil(8)],
                )
                .expect("stored code length");
                out.push(IndexRecord {
                    id: id.clone(),
                    class: class.clone(),
                    code,
                });
            }
        }
        out
    }

    pub fn check_fingerprint(&self, fingerprint: u64, what: &str) -> Result<()> {
        if fingerprint != self.fingerprint {
            return Err(Error::FingerprintMismatch {
                what: what.to_owned(),
                expected: self.fingerprint,
                found: fingerprint,
            });
        }
        Ok(())
    }

    /// The `k` nearest codes in `class`, ascending by (distance, position).
    pub fn query(&self, class: &str, code: &BitCode, k: usize) -> Result<Vec<Hit>> {
        self.query_with_stats(class, code, k).map(|(hits, _)| hits)
    }

    pub fn query_with_stats(
        &self,
        class: &str,
        code: &BitCode,
        k: usize,
    ) -> Result<(Vec<Hit>, ScanStats)> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        let bucket = self
            .buckets
            .get(class)
            .ok_or_else(|| Error::UnknownClass(class.to_owned()))?;
        if code.len() != self.code_len_bits {
            return Err(Error::LengthMismatch(self.code_len_bits, code.len()));
        }
        let query = code.words();
        let mut stats = ScanStats::default();
        // Sorted ascending by (distance, position); at most k entries.
        let mut best: Vec<(u32, usize)> = Vec::with_capacity(k + 1);
        for pos in 0..bucket.len() {
            stats.scanned += 1;
            let d = hamming_words(query, bucket.code_words(pos));
            if best.len() == k && d >= best[k - 1].0 {
                continue;
            }
            let at = best.partition_point(|&(bd, _)| bd <= d);
            best.insert(at, (d, pos));
            best.truncate(k);
        }
        let hits = best
            .into_iter()
            .map(|(distance, position)| Hit {
                id: bucket.ids[position].clone(),
                distance,
                position,
            })
            .collect();
        Ok((hits, stats))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, class: &str, bits: &str) -> IndexRecord {
        IndexRecord {
            id: id.into(),
            class: class.into(),
            code: BitCode::from_bit_str(bits),
        }
    }

    #[test]
    fn hamming_examples() {
        let a = BitCode::from_bit_str("10110010");
        let b = BitCode::from_bit_str("00110110");
        assert_eq!(hamming(&a, &b).unwrap(), 2);
        assert_eq!(hamming(&a, &a).unwrap(), 0);
        let long = BitCode::from_bools(&(0..768).map(|i| i % 5 == 0).collect::<Vec<_>>());
        assert_eq!(hamming(&long, &long.complement()).unwrap(), 768);
        assert!(matches!(
            hamming(&a, &BitCode::zeros(9)),
            Err(Error::LengthMismatch(8, 9))
        ));
    }

    #[test]
    fn empty_index() {
        let idx = build_index(&[], 7).unwrap();
        assert_eq!(idx.class_count(), 0);
        assert!(idx.is_empty());
    }

    #[test]
    fn partitions_by_class() {
        let idx = build_index(
            &[
                rec("a", "x", "0101"),
                rec("b", "y", "1111"),
                rec("c", "x", "0000"),
            ],
            0,
        )
        .unwrap();
        assert_eq!(idx.class_count(), 2);
        assert_eq!(idx.bucket("x").unwrap().ids(), &["a", "c"]);
        assert_eq!(idx.bucket("y").unwrap().len(), 1);
    }

    #[test]
    fn build_errors() {
        assert!(matches!(
            build_index(&[rec("a", "x", "01"), rec("a", "y", "10")], 0),
            Err(Error::DuplicateId(_))
        ));
        assert!(matches!(
            build_index(&[rec("a", "x", "01"), rec("b", "y", "100")], 0),
            Err(Error::LengthMismatch(2, 3))
        ));
    }

    #[test]
    fn query_orders_by_distance_then_position() {
        let idx = build_index(
            &[
                rec("far", "x", "1111"),
                rec("tie1", "x", "0001"),
                rec("same", "x", "0000"),
                rec("tie2", "x", "0010"),
                rec("other", "y", "0000"),
            ],
            0,
        )
        .unwrap();
        let (hits, stats) = idx
            .query_with_stats("x", &BitCode::from_bit_str("0000"), 3)
            .unwrap();
        let ids: Vec<_> = hits.iter().map(|h| h.id.as_str()).collect();
        assert_eq!(ids, vec!["same", "tie1", "tie2"]);
        assert_eq!(stats.scanned, 4);
        let all = idx.query("x", &BitCode::from_bit_str("0000"), 10).unwrap();
        assert_eq!(all.len(), 4);
        assert_eq!(all[3].id, "far");
    }

    #[test]
    fn query_errors() {
        let idx = build_index(&[rec("a", "x", "01")], 0).unwrap();
        assert!(matches!(
            idx.query("nope", &BitCode::from_bit_str("01"), 1),
            Err(Error::UnknownClass(c)) if c == "nope"
        ));
        assert!(matches!(
            idx.query("x", &BitCode::from_bit_str("011"), 1),
            Err(Error::LengthMismatch(2, 3))
        ));
        assert!(idx.check_fingerprint(1, "query").is_err());
    }

    #[test]
    fn singleton_bucket_returns_its_record() {
        let idx = build_index(&[rec("only", "x", "1111")], 0).unwrap();
        let hits = idx.query("x", &BitCode::from_bit_str("0000"), 1).unwrap();
        assert_eq!(hits[0].id, "only");
        assert_eq!(hits[0].distance, 4);
    }

    #[test]
    fn records_round_trip() {
        let input = vec![
            rec("a", "x", "0101101"),
            rec("b", "y", "1111000"),
            rec("c", "x", "0000001"),
        ];
        let idx = build_index(&input, 3).unwrap();
        let rebuilt = build_index(&idx.records(), 3).unwrap();
        assert_eq!(idx, rebuilt);
    }
}
