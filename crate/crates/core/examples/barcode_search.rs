//! Class-partitioned Hamming search over random 768-bit codes.

use grcbir::barcode::BitCode;
use grcbir::retrieval::{build_index, IndexRecord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn main() -> grcbir::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut random_code =
        || BitCode::from_bools(&(0..768).map(|_| rng.gen()).collect::<Vec<bool>>());
    let records: Vec<IndexRecord> = (0..300)
        .map(|i| IndexRecord {
            id: format!("img{i:03}"),
            class: format!("class{}", i % 3),
            code: random_code(),
        })
        .collect();
    let index = build_index(&records, 0)?;
    println!("{} records in {} classes", index.len(), index.class_count());

    // Perturb a stored code and look for it in its own class.
    let mut probe = records[42].code.clone();
    for i in (0..768).step_by(40) {
        probe.set(i, !probe.get(i));
    }
    let (hits, stats) = index.query_with_stats(&records[42].class, &probe, 5)?;
    println!("scanned {} codes of {}", stats.scanned, records[42].class);
    for h in hits {
        println!("  {}  distance {}", h.id, h.distance);
    }
    Ok(())
}
