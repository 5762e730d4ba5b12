//! Fixtures shared by the criterion benches in `benches/`.

use unigraph::{ChainRing, Extension, Ring};

/// Chain ring from a spec string; panics on a malformed fixture.
pub fn chain(spec: &str) -> ChainRing {
    unigraph::ring::parse_chain(spec).expect("valid chain ring fixture")
}

pub fn ring(spec: &str) -> Ring {
    unigraph::ring::parse_ring(spec).expect("valid ring fixture")
}

pub fn extension(spec: &str, degree: usize) -> Extension {
    Extension::new(&chain(spec), degree).expect("valid extension fixture")
}

/// Deterministic dense symmetric matrix of order `n` with a spread spectrum.
pub fn symmetric_matrix(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (((i * 7 + j * 7 + i * j) % 13) as f64) - 6.0
                        + if i == j { i as f64 } else { 0.0 }
                })
                .collect()
        })
        .collect()
}
