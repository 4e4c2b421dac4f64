#![allow(dead_code)]

use d4lab_core::{ClassificationInput, Sign, UnfoldingSpec};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random normalized spec: positive linear diagonal in `[0.5, 1.5]`, free
/// linear entries and all quadratic and cubic coefficients in `[−1, 1]`.
pub fn random_spec(rng: &mut impl Rng, epsilon1: Sign) -> UnfoldingSpec {
    let mut spec = UnfoldingSpec::new(epsilon1, 3).unwrap();
    for (n, i, j, k) in [(1, 1, 0, 0), (2, 0, 1, 0), (3, 0, 0, 1)] {
        spec = spec.with(n, i, j, k, rng.gen_range(0.5..1.5));
    }
    for (n, i, j, k) in [(2, 1, 0, 0), (3, 1, 0, 0), (3, 0, 1, 0)] {
        spec = spec.with(n, i, j, k, rng.gen_range(-1.0..1.0));
    }
    for n in 1..=3u8 {
        for d in 2..=3u8 {
            for i in 0..=d {
                for j in 0..=d - i {
                    spec = spec.with(n, i, j, d - i - j, rng.gen_range(-1.0..1.0));
                }
            }
        }
    }
    spec
}

pub fn both_signs() -> [Sign; 2] {
    [Sign::Minus, Sign::Plus]
}

/// A random `(ξ, η, ζ)`: direction uniform on the half-sphere `ζ² > 0` in
/// `(ξ, η, ζ²)`, which carries all the sign quantities, times a random scale.
pub fn random_input(rng: &mut impl Rng, epsilon1: Sign) -> ClassificationInput {
    loop {
        let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.0..1.0)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 && n <= 1.0 {
            let scale = rng.gen_range(0.2..5.0) / n;
            return ClassificationInput::new(v[0] * scale, v[1] * scale, (v[2] * scale).sqrt(), epsilon1);
        }
    }
}
