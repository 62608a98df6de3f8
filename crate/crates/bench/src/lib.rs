//! Benchmark fixtures shared by the bench targets.

use weave_core::diagram::{fixture_sigma, fixture_tau, gen_beta, random_multistring};
use weave_core::pairing::multistring_based_matrix;
use weave_core::WovenBasedMatrix;

/// Named matrices of increasing size.
pub fn fixtures() -> Vec<(&'static str, WovenBasedMatrix)> {
    let diagrams = [
        ("sigma", fixture_sigma()),
        ("tau", fixture_tau()),
        ("beta_2_3_3_2_2_1", gen_beta(2, 3, 3, 2, 2, 1)),
        ("random_3x12", random_multistring(3, 12, 42).expect("valid parameters")),
    ];
    diagrams
        .into_iter()
        .map(|(name, ms)| (name, multistring_based_matrix(&ms).expect("diagram matrix")))
        .collect()
}
