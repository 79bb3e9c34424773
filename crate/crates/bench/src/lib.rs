//! Fixtures shared by the benchmarks.

use lindquant::classical::catalog;
use lindquant::{Complex64, ComplexSystem, Lindbladian};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Printed generator of a catalog system at default parameters.
pub fn generator(name: &str) -> Lindbladian {
    catalog(name, &Default::default())
        .and_then(|e| e.published.ok_or_else(|| lindquant::Error::UnknownSystem(name.into())))
        .expect("catalog system with a printed generator")
}

/// Dense random system of the given degree with coefficients in the unit square.
pub fn random_system(degree: u32, seed: u64) -> ComplexSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::new();
    for n in 0..=degree {
        for j in 0..=n {
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            entries.push((j as i64, (n - j) as i64, c));
        }
    }
    ComplexSystem::from_entries(entries).expect("nonnegative powers")
}
