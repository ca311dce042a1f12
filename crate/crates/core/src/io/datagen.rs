//! Synthetic collections with Zipf-distributed items.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Geometric, Zipf};
use serde::{Deserialize, Serialize};

use crate::domain::RawObject;
use crate::error::{Error, Result};

use super::write_transactions;

/// Objects per independently seeded block.
pub const BLOCK_SIZE: usize = 4096;

const RESAMPLE_ATTEMPTS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub cardinality: usize,
    pub domain_size: usize,
    /// Target Σ|o|² / Σ|o|.
    pub weighted_avg_len: f64,
    /// Zipf exponent; 0 is uniform.
    pub zipf: f64,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(cardinality: usize, domain_size: usize, weighted_avg_len: f64, zipf: f64, seed: u64) -> Self {
        Self {
            cardinality,
            domain_size,
            weighted_avg_len,
            zipf,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.cardinality == 0 {
            return Err(Error::InvalidGenSpec("cardinality must be >= 1".into()));
        }
        if self.domain_size == 0 {
            return Err(Error::InvalidGenSpec("domain size must be >= 1".into()));
        }
        if !(self.zipf.is_finite() && self.zipf >= 0.0) {
            return Err(Error::InvalidGenSpec("zipf exponent must be >= 0".into()));
        }
        if !(self.weighted_avg_len.is_finite() && self.weighted_avg_len > 0.0) {
            return Err(Error::InvalidGenSpec("weighted average length must be > 0".into()));
        }
        Ok(())
    }
}

/// Object lengths are `1 + Geometric(p)` with `p = 2 / (W + 1)`, whose
/// length-weighted mean E[L²]/E[L] is exactly `W`. Items are Zipf ranks
/// written as `0..domain_size`, rank 0 most frequent; repeats within an object
/// are resampled up to 50 times per slot before the slot is dropped.
///
/// Each block of [`BLOCK_SIZE`] objects draws from its own ChaCha stream keyed
/// by `(seed, block)`, so output depends only on the spec.
pub fn generate_synthetic(spec: &GenSpec) -> Result<Vec<RawObject>> {
    spec.validate()?;
    let zipf = Zipf::new(spec.domain_size as f64, spec.zipf)
        .map_err(|e| Error::InvalidGenSpec(e.to_string()))?;
    let geo = if spec.weighted_avg_len > 1.0 {
        Some(
            Geometric::new(2.0 / (spec.weighted_avg_len + 1.0))
                .map_err(|e| Error::InvalidGenSpec(e.to_string()))?,
        )
    } else {
        None
    };
    let tokens: Vec<String> = (0..spec.domain_size).map(|i| i.to_string()).collect();

    let mut out = Vec::with_capacity(spec.cardinality);
    let mut truncated = 0usize;
    let mut seen = vec![false; spec.domain_size];
    let mut items: Vec<usize> = Vec::new();
    for block in 0..spec.cardinality.div_ceil(BLOCK_SIZE) {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(block as u64);
        let n = BLOCK_SIZE.min(spec.cardinality - block * BLOCK_SIZE);
        for _ in 0..n {
            let mut len = 1 + geo.map_or(0, |g| rng.sample(g)) as usize;
            if len > spec.domain_size {
                len = spec.domain_size;
                truncated += 1;
            }
            items.clear();
            for _ in 0..len {
                for _ in 0..RESAMPLE_ATTEMPTS {
                    let item = rng.sample(zipf) as usize - 1;
                    if !seen[item] {
                        seen[item] = true;
                        items.push(item);
                        break;
                    }
                }
            }
            for &i in &items {
                seen[i] = false;
            }
            out.push(items.iter().map(|&i| tokens[i].clone()).collect());
        }
    }
    if truncated > 0 {
        log::warn!(
            "{truncated} object length(s) exceeded the domain of {} items and were truncated",
            spec.domain_size
        );
    }
    Ok(out)
}

pub fn write_synthetic(spec: &GenSpec, path: &Path) -> Result<Vec<RawObject>> {
    let objects = generate_synthetic(spec)?;
    write_transactions(path, &objects)?;
    Ok(objects)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_sized() {
        let spec = GenSpec::new(10, 5, 2.0, 0.0, 1);
        let a = generate_synthetic(&spec).unwrap();
        let b = generate_synthetic(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 10);
        for o in &a {
            assert!(!o.is_empty() && o.len() <= 5);
            let mut d = o.clone();
            d.sort();
            d.dedup();
            assert_eq!(d.len(), o.len());
        }
    }

    #[test]
    fn seed_changes_output() {
        let a = generate_synthetic(&GenSpec::new(50, 100, 5.0, 0.5, 1)).unwrap();
        let b = generate_synthetic(&GenSpec::new(50, 100, 5.0, 0.5, 2)).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn invalid_specs() {
        for spec in [
            GenSpec::new(0, 5, 2.0, 0.0, 1),
            GenSpec::new(5, 0, 2.0, 0.0, 1),
            GenSpec::new(5, 5, 2.0, -1.0, 1),
            GenSpec::new(5, 5, 0.0, 0.0, 1),
        ] {
            assert!(matches!(generate_synthetic(&spec), Err(Error::InvalidGenSpec(_))));
        }
    }

    #[test]
    fn tiny_domain_truncates() {
        let objs = generate_synthetic(&GenSpec::new(200, 2, 20.0, 0.0, 3)).unwrap();
        assert!(objs.iter().all(|o| o.len() <= 2));
    }

    #[test]
    fn unit_weighted_length() {
        let objs = generate_synthetic(&GenSpec::new(100, 50, 1.0, 1.0, 3)).unwrap();
        assert!(objs.iter().all(|o| o.len() == 1));
    }
}
