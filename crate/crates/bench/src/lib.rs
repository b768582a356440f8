//! Input fixtures shared by the criterion benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hullselect::oracle::SignalVector;
use hullselect::ObservationVector;

/// Sparse signal plus unit Gaussian-ish noise: `s` spikes of height 6 and
/// uniform `[-2, 2]` clutter elsewhere.
pub fn observation(n: usize, s: usize, seed: u64) -> ObservationVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = (0..n)
        .map(|i| {
            let base = if i < s { 6.0 } else { 0.0 };
            base + rng.random_range(-2.0..2.0)
        })
        .collect();
    ObservationVector::new(x, 1.0).expect("valid fixture")
}

pub fn signal(n: usize, seed: u64) -> SignalVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SignalVector::new((0..n).map(|_| rng.random_range(-5.0..5.0)).collect()).expect("valid fixture")
}
