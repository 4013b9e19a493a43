//! Benchmarks live in `benches/`; run them with `cargo bench -p galmub-bench`.

use galmub_core::PhaseSpace;

/// Phase spaces used across the benchmarks, d = 3, 5, 7, 9, 11, 27.
pub fn spaces() -> Vec<PhaseSpace> {
    [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (3, 3)]
        .into_iter()
        .map(|(p, n)| PhaseSpace::new(p, n).expect("valid dimension"))
        .collect()
}
