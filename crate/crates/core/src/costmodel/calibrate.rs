//! Regression calibration of [`CostConstants`] from micro-benchmarks.

use std::hint::black_box;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fit::least_squares;
use super::CostConstants;
use crate::intersect::{intersect_binary, intersect_merge, CandidateList};
use crate::join::verify_sorted;
use crate::scalar::Scalar;

const MIN_GRID: usize = 5;
const MIN_REPS: usize = 9;

/// Sizes exercised by [`measure`]. Grids shorter than 5 points are padded and
/// fewer than 9 repetitions are raised to 9.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CalibrationGrid {
    /// List lengths for the merge kernel (both sides) and postings lengths for
    /// the binary kernel.
    pub list_sizes: Vec<usize>,
    /// Candidate list lengths for the binary kernel.
    pub probe_sizes: Vec<usize>,
    /// Side lengths of the reported pair block.
    pub output_sizes: Vec<usize>,
    /// Suffix lengths of verified objects.
    pub suffix_lengths: Vec<usize>,
    /// Objects per side in a verification block.
    pub verify_block: usize,
    pub reps: usize,
    pub seed: u64,
}

impl Default for CalibrationGrid {
    fn default() -> Self {
        Self {
            list_sizes: vec![1_000, 4_000, 16_000, 64_000, 256_000],
            probe_sizes: vec![10, 40, 160, 640, 2_560],
            output_sizes: vec![16, 48, 128, 384, 1_024],
            suffix_lengths: vec![4, 16, 48, 128, 384],
            verify_block: 24,
            reps: 11,
            seed: 0x5eed,
        }
    }
}

impl CalibrationGrid {
    /// A small grid that finishes in well under a second.
    pub fn quick() -> Self {
        Self {
            list_sizes: vec![200, 500, 1_000, 2_000, 4_000],
            probe_sizes: vec![4, 8, 16, 32, 64],
            output_sizes: vec![8, 16, 24, 32, 48],
            suffix_lengths: vec![2, 4, 8, 16, 32],
            verify_block: 8,
            reps: MIN_REPS,
            seed: 7,
        }
    }

    fn normalized(&self) -> Self {
        fn pad(v: &[usize]) -> Vec<usize> {
            let mut v: Vec<usize> = v.iter().copied().filter(|&x| x > 0).collect();
            v.sort_unstable();
            v.dedup();
            let mut next = v.last().copied().unwrap_or(1);
            while v.len() < MIN_GRID {
                next *= 2;
                v.push(next);
            }
            v
        }
        Self {
            list_sizes: pad(&self.list_sizes),
            probe_sizes: pad(&self.probe_sizes),
            output_sizes: pad(&self.output_sizes),
            suffix_lengths: pad(&self.suffix_lengths),
            verify_block: self.verify_block.max(1),
            reps: self.reps.max(MIN_REPS),
            seed: self.seed,
        }
    }
}

/// Median timings in nanoseconds, keyed by the regressors of each formula.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Measurements<T> {
    /// `(|CL|, |postings|) → t`.
    pub merge: Vec<([T; 2], T)>,
    /// `|CL| · log2(|postings| + 1) → t`.
    pub binary: Vec<(T, T)>,
    /// `pairs → t`.
    pub direct: Vec<(T, T)>,
    /// `(|right| · Σ left suffix, |left| · Σ right suffix) → t`.
    pub verify: Vec<([T; 2], T)>,
}

/// Fitted constants plus per-primitive R² (`None` where the fit was
/// degenerate and unit constants were kept).
#[derive(Debug, Clone, PartialEq)]
pub struct Calibration<T> {
    pub constants: CostConstants<T>,
    pub merge_r2: Option<T>,
    pub binary_r2: Option<T>,
    pub direct_r2: Option<T>,
    pub verify_r2: Option<T>,
}

impl<T: Scalar> Calibration<T> {
    pub fn fell_back(&self) -> bool {
        self.merge_r2.is_none()
            || self.binary_r2.is_none()
            || self.direct_r2.is_none()
            || self.verify_r2.is_none()
    }
}

fn median_nanos<F: FnMut()>(reps: usize, mut f: F) -> f64 {
    let mut times: Vec<f64> = (0..reps)
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed().as_nanos() as f64
        })
        .collect();
    times.sort_by(|a, b| a.partial_cmp(b).expect("finite timings"));
    times[times.len() / 2]
}

fn random_sorted(rng: &mut ChaCha8Rng, len: usize, universe: u32) -> Vec<u32> {
    let mut v: Vec<u32> = (0..len).map(|_| rng.random_range(0..universe)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Runs every primitive over the grid.
pub fn measure<T: Scalar>(grid: &CalibrationGrid) -> Measurements<T> {
    let grid = grid.normalized();
    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
    let mut m = Measurements::default();

    let universe = (*grid.list_sizes.last().expect("padded") as u32).saturating_mul(4).max(16);
    let lengths = vec![0u32; universe as usize];

    for &a in &grid.list_sizes {
        for &b in &grid.list_sizes {
            let cl = CandidateList::from_oids(random_sorted(&mut rng, a, universe), 0, &lengths);
            let postings = random_sorted(&mut rng, b, universe);
            let t = median_nanos(grid.reps, || {
                black_box(intersect_merge(black_box(&cl), black_box(&postings), 0, &lengths));
            });
            m.merge.push(([T::of_usize(cl.len()), T::of_usize(postings.len())], T::of(t)));
        }
    }

    for &a in &grid.probe_sizes {
        for &b in &grid.list_sizes {
            let cl = CandidateList::from_oids(random_sorted(&mut rng, a, universe), 0, &lengths);
            let postings = random_sorted(&mut rng, b, universe);
            let t = median_nanos(grid.reps, || {
                black_box(intersect_binary(black_box(&cl), black_box(&postings), 0, &lengths));
            });
            let x = cl.len() as f64 * ((postings.len() + 1) as f64).log2();
            m.binary.push((T::of(x), T::of(t)));
        }
    }

    let mut sink: Vec<(u32, u32)> = Vec::new();
    for &a in &grid.output_sizes {
        for &b in &grid.output_sizes {
            let left: Vec<u32> = (0..a as u32).collect();
            let right: Vec<u32> = (0..b as u32).collect();
            let t = median_nanos(grid.reps, || {
                sink.clear();
                for &r in &left {
                    for &s in &right {
                        sink.push((r, s));
                    }
                }
                black_box(&sink);
            });
            m.direct.push((T::of_usize(a * b), T::of(t)));
        }
    }

    let n = grid.verify_block;
    for &ll in &grid.suffix_lengths {
        for &lr in &grid.suffix_lengths {
            let u = (ll.max(lr) * 2) as u32;
            // right objects cover half the universe; left ones draw from it so
            // most checks scan deep before failing
            let rights: Vec<Vec<u32>> = (0..n)
                .map(|_| random_sorted(&mut rng, lr * 2, u))
                .collect();
            let lefts: Vec<Vec<u32>> = (0..n)
                .map(|k| {
                    let src = &rights[k % n];
                    let mut v: Vec<u32> = (0..ll).map(|_| src[rng.random_range(0..src.len())]).collect();
                    v.sort_unstable();
                    v.dedup();
                    v
                })
                .collect();
            let left_ss: usize = lefts.iter().map(Vec::len).sum();
            let right_ss: usize = rights.iter().map(Vec::len).sum();
            let t = median_nanos(grid.reps, || {
                let mut hits = 0usize;
                for r in &lefts {
                    for s in &rights {
                        hits += verify_sorted(black_box(r), black_box(s), 0) as usize;
                    }
                }
                black_box(hits);
            });
            m.verify.push((
                [T::of_usize(n * left_ss), T::of_usize(n * right_ss)],
                T::of(t),
            ));
        }
    }
    m
}

fn clamp<T: Scalar>(v: T) -> T {
    if v.is_finite() && v > T::zero() {
        v
    } else {
        T::zero()
    }
}

/// Least-squares fit of each cost formula. Negative coefficients are clamped
/// to zero; a singular system keeps the unit constants for that primitive.
pub fn fit_measurements<T: Scalar>(m: &Measurements<T>) -> Calibration<T> {
    let mut k = CostConstants::<T>::default();
    let one = T::one();

    let rows: Vec<[T; 3]> = m.merge.iter().map(|(x, _)| [x[0], x[1], one]).collect();
    let y: Vec<T> = m.merge.iter().map(|(_, t)| *t).collect();
    let merge_r2 = least_squares(&rows, &y).map(|f| {
        k.merge_cl = clamp(f.coefficients[0]);
        k.merge_postings = clamp(f.coefficients[1]);
        k.merge_fixed = clamp(f.coefficients[2]);
        f.r_squared
    });

    let rows: Vec<[T; 2]> = m.binary.iter().map(|(x, _)| [*x, one]).collect();
    let y: Vec<T> = m.binary.iter().map(|(_, t)| *t).collect();
    let binary_r2 = least_squares(&rows, &y).map(|f| {
        k.binary_probe = clamp(f.coefficients[0]);
        k.binary_fixed = clamp(f.coefficients[1]);
        f.r_squared
    });

    let rows: Vec<[T; 2]> = m.direct.iter().map(|(x, _)| [*x, one]).collect();
    let y: Vec<T> = m.direct.iter().map(|(_, t)| *t).collect();
    let direct_r2 = least_squares(&rows, &y).map(|f| {
        k.direct_pair = clamp(f.coefficients[0]);
        k.direct_fixed = clamp(f.coefficients[1]);
        f.r_squared
    });

    let rows: Vec<[T; 3]> = m.verify.iter().map(|(x, _)| [x[0], x[1], one]).collect();
    let y: Vec<T> = m.verify.iter().map(|(_, t)| *t).collect();
    let verify_r2 = least_squares(&rows, &y).map(|f| {
        k.verify_left_suffix = clamp(f.coefficients[0]);
        k.verify_right_suffix = clamp(f.coefficients[1]);
        k.verify_fixed = clamp(f.coefficients[2]);
        f.r_squared
    });

    let cal = Calibration {
        constants: k,
        merge_r2,
        binary_r2,
        direct_r2,
        verify_r2,
    };
    if cal.fell_back() {
        log::warn!("degenerate calibration fit; unit constants kept for some primitives");
    }
    cal
}

pub fn calibrate<T: Scalar>(grid: &CalibrationGrid) -> Calibration<T> {
    fit_measurements(&measure(grid))
}
