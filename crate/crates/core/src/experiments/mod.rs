//! Monte Carlo resonance experiments (placeholder while lower layers build).
