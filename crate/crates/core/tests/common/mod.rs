#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use setjoin::domain::RawObject;
use setjoin::io::{generate_synthetic, read_transactions, GenSpec};
use setjoin::pipeline::{prepare, Prepared};
use setjoin::{FreqSource, ItemOrder};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn running_example_raw() -> (Vec<RawObject>, Vec<RawObject>) {
    (
        read_transactions(&fixture("running_r.dat")).unwrap(),
        read_transactions(&fixture("running_s.dat")).unwrap(),
    )
}

pub fn running_example(order: ItemOrder) -> Prepared {
    let (r, s) = running_example_raw();
    prepare(&r, Some(&s), order, FreqSource::Union).unwrap()
}

/// A small random instance: up to 64 objects per side, domain up to 32,
/// lengths 1..=12, Zipf skew from {0, 0.5, 1}.
#[derive(Debug, Clone)]
pub struct Instance {
    pub seed: u64,
    pub zipf: f64,
    pub left: Vec<RawObject>,
    pub right: Vec<RawObject>,
}

pub fn random_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_f1a5);
    let zipf = [0.0, 0.5, 1.0][rng.random_range(0..3)];
    let domain = rng.random_range(1..=32);
    let wavg = rng.random_range(1.0..8.0);
    let side = |rng: &mut ChaCha8Rng, salt: u64| -> Vec<RawObject> {
        let n = rng.random_range(1..=64);
        let spec = GenSpec::new(n, domain, wavg, zipf, seed.wrapping_mul(31).wrapping_add(salt));
        generate_synthetic(&spec)
            .unwrap()
            .into_iter()
            .map(|mut o| {
                o.truncate(12);
                o
            })
            .collect()
    };
    let left = side(&mut rng, 1);
    let mut right = side(&mut rng, 2);
    // plant some guaranteed matches: supersets of left objects
    for _ in 0..rng.random_range(0..8) {
        let mut o = left[rng.random_range(0..left.len())].clone();
        if o.len() < 12 {
            o.push(rng.random_range(0..domain).to_string());
            o.sort();
            o.dedup();
        }
        right.push(o);
    }
    right.truncate(64);
    Instance {
        seed,
        zipf,
        left,
        right,
    }
}
