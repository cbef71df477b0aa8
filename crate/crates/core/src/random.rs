//! Seeded random instances for property runs.
//!
//! Masses: a uniform number of focal sets in `1..=min(2^n - 1, 8)`, distinct
//! nonempty subsets drawn uniformly, and masses proportional to integer
//! weights drawn from `1..=WEIGHT_GRID`. The same seed always gives the same
//! instance.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::frame::{Frame, SubsetMask};
use crate::mass::{MassFunction, WorldMode};
use crate::scalar::Scalar;
use crate::scenario::Scenario;
use crate::source::MultivaluedSource;

pub const MAX_RANDOM_FOCAL: usize = 8;
pub const WEIGHT_GRID: i64 = 12;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Frame labelled `a`, `b`, `c`, ....
pub fn letter_frame(n: usize) -> Frame {
    Frame::new((0..n).map(|i| ((b'a' + i as u8) as char).to_string())).expect("1 <= n <= 20")
}

/// Integer weights scaled to sum to one. At least one weight must be positive.
fn normalize_weights<T: Scalar>(weights: &[i64]) -> Vec<T> {
    let total: i64 = weights.iter().sum();
    weights.iter().map(|&w| T::from_ratio(w, total)).collect()
}

fn random_nonempty<R: Rng>(rng: &mut R, n: usize) -> SubsetMask {
    SubsetMask::from_bits(rng.gen_range(1..(1u32 << n)))
}

/// Closed-world random mass on [`letter_frame`]`(n)`.
pub fn random_mass<T: Scalar, R: Rng>(rng: &mut R, n: usize) -> MassFunction<T> {
    let frame = letter_frame(n);
    let subsets: Vec<u32> = (1..(1u32 << n)).collect();
    let count = rng.gen_range(1..=subsets.len().min(MAX_RANDOM_FOCAL));
    let chosen: Vec<u32> = subsets.choose_multiple(rng, count).copied().collect();
    let weights: Vec<i64> = chosen.iter().map(|_| rng.gen_range(1..=WEIGHT_GRID)).collect();
    let masses = normalize_weights::<T>(&weights);
    MassFunction::new(
        frame,
        chosen.into_iter().map(SubsetMask::from_bits).zip(masses),
        WorldMode::Closed,
    )
    .expect("normalized weights")
}

/// Open-world random mass: like [`random_mass`], with ∅ added as a focal set
/// about half the time.
pub fn random_open_mass<T: Scalar, R: Rng>(rng: &mut R, n: usize) -> MassFunction<T> {
    let frame = letter_frame(n);
    let subsets: Vec<u32> = (0..(1u32 << n)).collect();
    let count = rng.gen_range(1..=subsets.len().min(MAX_RANDOM_FOCAL));
    let chosen: Vec<u32> = subsets.choose_multiple(rng, count).copied().collect();
    let weights: Vec<i64> = chosen.iter().map(|_| rng.gen_range(1..=WEIGHT_GRID)).collect();
    let masses = normalize_weights::<T>(&weights);
    MassFunction::new(
        frame,
        chosen.into_iter().map(SubsetMask::from_bits).zip(masses),
        WorldMode::Open,
    )
    .expect("normalized weights")
}

/// Random multivalued source with `1..=max_states` states over
/// [`letter_frame`]`(n)`. Images may be empty and probabilities may be zero.
pub fn random_source<T: Scalar, R: Rng>(rng: &mut R, max_states: usize, n: usize) -> MultivaluedSource<T> {
    let frame = letter_frame(n);
    let states = rng.gen_range(1..=max_states);
    let mut weights: Vec<i64> = (0..states).map(|_| rng.gen_range(0..=4)).collect();
    if weights.iter().all(|&w| w == 0) {
        weights[0] = 1;
    }
    let probabilities = normalize_weights::<T>(&weights);
    let entries: Vec<(String, T, SubsetMask)> = probabilities
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            let image = SubsetMask::from_bits(rng.gen_range(0..(1u32 << n)));
            (format!("x{}", i + 1), p, image)
        })
        .collect();
    MultivaluedSource::new(frame, entries).expect("valid random source")
}

/// Random scenario with `1..=max_sources` sources over
/// [`letter_frame`]`(n)`, each with a nonempty option set.
pub fn random_scenario<T: Scalar, R: Rng>(rng: &mut R, max_sources: usize, n: usize) -> Scenario<T> {
    let frame = letter_frame(n);
    let sources = rng.gen_range(1..=max_sources);
    let weights: Vec<i64> = (0..sources).map(|_| rng.gen_range(1..=4)).collect();
    let probabilities = normalize_weights::<T>(&weights);
    let entries: Vec<(String, T, SubsetMask)> = probabilities
        .into_iter()
        .enumerate()
        .map(|(i, p)| (format!("S{}", i + 1), p, random_nonempty(rng, n)))
        .collect();
    Scenario::build(frame, entries).expect("valid random scenario")
}

/// A random nonempty subset of the frame.
pub fn random_subset<R: Rng>(rng: &mut R, frame: &Frame) -> SubsetMask {
    random_nonempty(rng, frame.len())
}

/// Distinct random subsets, for picking evidence sets in property runs.
pub fn random_subsets<R: Rng>(rng: &mut R, frame: &Frame, count: usize) -> Vec<SubsetMask> {
    let mut seen = BTreeSet::new();
    let limit = count.min(frame.powerset_len() - 1);
    while seen.len() < limit {
        seen.insert(random_subset(rng, frame));
    }
    seen.into_iter().collect()
}
