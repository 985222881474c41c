//! Exact scalars and dense linear algebra over prime fields and the rationals.

pub mod field;
pub mod matrix;
pub mod subspace;

pub use field::{is_prime, Field, FieldSpec, FiniteField, PrimeField, Rationals, DEFAULT_LARGE_PRIME};
pub use matrix::{matrix_json, Matrix, Rref};
pub use subspace::{
    count_all_subspaces, enumerate_all_subspaces, enumerate_subspaces, gaussian_binomial, random_subspace,
    random_subspace_with, Subspace, SubspaceIter,
};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for trial `trial` of a run seeded with `seed`: the ChaCha stream
/// keyed by `seed ^ trial`, with `stream` selecting an independent substream.
pub fn trial_rng(seed: u64, trial: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ trial);
    rng.set_stream(stream);
    rng
}
