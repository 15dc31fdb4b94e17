//! Seeded randomness: one ChaCha stream per (seed, trial) pair.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::field::{Fe, Gf};

pub type TrialRng = ChaCha20Rng;

/// Independent stream for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Child generator for a named sub-component, drawn from a parent stream.
pub fn fork<R: RngCore + ?Sized>(parent: &mut R) -> TrialRng {
    ChaCha20Rng::seed_from_u64(parent.next_u64())
}

pub fn uniform<R: RngCore + ?Sized>(gf: &Gf, rng: &mut R) -> Fe {
    gf.elem(rng.gen_range(0..gf.p()) as i64)
}

pub fn uniform_nonzero<R: RngCore + ?Sized>(gf: &Gf, rng: &mut R) -> Fe {
    gf.elem(rng.gen_range(1..gf.p()) as i64)
}
