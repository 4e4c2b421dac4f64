use std::fs;

use d4lab_core::{validate_normal_form, Sign, UnfoldingSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::SpecSource;
use crate::error::CliError;

pub fn load_spec(source: &SpecSource) -> Result<UnfoldingSpec, CliError> {
    match source {
        SpecSource::File(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            UnfoldingSpec::from_json(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        SpecSource::Seed(seed) => Ok(random_spec(*seed)),
    }
}

/// Loads the spec and rejects it unless it is in normal form.
pub fn load_normal_spec(source: &SpecSource) -> Result<UnfoldingSpec, CliError> {
    let spec = load_spec(source)?;
    let report = validate_normal_form(&spec);
    if !report.is_normal {
        return Err(CliError::Invalid(format!("spec is not in normal form: {}", report.violated_conditions.join(", "))));
    }
    Ok(spec)
}

/// A normalized cubic spec; `ε₁ = −1` for even seeds and `+1` for odd ones.
pub fn random_spec(seed: u64) -> UnfoldingSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e1 = if seed % 2 == 0 { Sign::Minus } else { Sign::Plus };
    let mut spec = UnfoldingSpec::canonical(e1);
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
