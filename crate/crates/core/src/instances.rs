//! Seeded random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::perm::{parity, BooleanMapping, Parity, Permutation};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform permutation of `Z_2^n`.
pub fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Permutation {
    let mut images: Vec<usize> = (0..1usize << n).collect();
    images.shuffle(rng);
    Permutation::from_images(n, images).expect("shuffle is a bijection")
}

/// Uniform permutation, composed with the transposition (0, 1) when odd.
pub fn random_even_permutation<R: Rng>(n: usize, rng: &mut R) -> Permutation {
    let p = random_permutation(n, rng);
    if parity(&p) == Parity::Even {
        return p;
    }
    let mut images = p.images().to_vec();
    images.swap(0, 1);
    Permutation::from_images(n, images).expect("swap keeps a bijection")
}

/// Uniform odd permutation, for rejection tests.
pub fn random_odd_permutation<R: Rng>(n: usize, rng: &mut R) -> Permutation {
    let p = random_even_permutation(n, rng);
    let mut images = p.images().to_vec();
    images.swap(0, 1);
    Permutation::from_images(n, images).expect("swap keeps a bijection")
}

/// Uniform mapping `Z_2^n -> Z_2^n`.
pub fn random_mapping<R: Rng>(n: usize, rng: &mut R) -> BooleanMapping {
    let size = 1usize << n;
    let images = (0..size).map(|_| rng.gen_range(0..size)).collect();
    BooleanMapping::new(n, images).expect("images in range")
}
