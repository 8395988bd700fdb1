//! Seeded random inputs for probes and property tests.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{GradedPoly, Term};
use crate::Q;

pub type KtRng = ChaCha8Rng;

pub fn rng(seed: u64) -> KtRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero rational `p/q` with `|p| ≤ 9`, `1 ≤ q ≤ 4`.
pub fn rational<R: Rng + ?Sized>(rng: &mut R) -> Q {
    let mut p: i64 = rng.random_range(1..=9);
    if rng.random_bool(0.5) {
        p = -p;
    }
    let q: i64 = rng.random_range(1..=4);
    Q::new(p.into(), q.into())
}

/// Random combination of up to `count` distinct terms from `pool`.
pub fn combination<R: Rng + ?Sized>(rng: &mut R, pool: &[Term], count: usize) -> GradedPoly {
    let picked: Vec<Term> = pool.choose_multiple(rng, count).cloned().collect();
    picked.into_iter().map(|t| (t, rational(rng))).collect()
}
