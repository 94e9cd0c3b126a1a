//! IID disorder: laws, deterministic samplers, the sample-mean and
//! fluctuation decomposition, and conditional-mean continuity handles.
//!
//! Samplers are pure in `(model, region, master_seed, trial)`; concurrent
//! trials must use distinct trial indices and share no generator state.

mod ccm;
mod model;
mod sample;

pub use ccm::{empirical_conditional_modulus, ModulusBin, MIN_BIN_SAMPLES};
pub use model::{
    gaussian_ccm_constants, gaussian_mean_density_bound, CcmConstants, ExceptionalBound,
    FieldModel,
};
pub use sample::{mean_fluctuation_split, sample_field, FieldSample, MeanFluctuationSplit};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("invalid field model: {0}")]
    InvalidModel(String),
    #[error("sampled region is empty")]
    EmptyRegion,
    #[error("sample does not cover site {site}")]
    CoverageGap { site: String },
    #[error("constants are analytic for the Gaussian law only")]
    NotGaussian,
    #[error("increment s must be positive and finite, got {s}")]
    InvalidIncrement { s: f64 },
    #[error("estimator needs at least 10^4 trials, got {trials}")]
    TooFewTrials { trials: u64 },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Parallelepiped;

    #[test]
    fn xi_variance_and_independence_gaussian() {
        // variance of the sample mean is σ²/|Q|; mean and fluctuations
        // are uncorrelated
        let model = FieldModel::standard_gaussian();
        let q = Parallelepiped::new(vec![0], vec![4]).unwrap();
        let trials = 100_000u64;
        let mut xis = Vec::with_capacity(trials as usize);
        let mut etas0 = Vec::with_capacity(trials as usize);
        for trial in 0..trials {
            let sample = sample_field(&model, q.lattice_points(), 31337, trial).unwrap();
            let split = mean_fluctuation_split(&sample, &q).unwrap();
            xis.push(split.xi);
            etas0.push(split.eta[&crate::geometry::LatticePoint::from(0)]);
        }
        let n = trials as f64;
        let mean = xis.iter().sum::<f64>() / n;
        let var = xis.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let expected = 1.0 / 5.0;
        // sample variance of a Gaussian: sd ≈ var·√(2/n)
        let tol = 3.0 * expected * (2.0 / n).sqrt();
        assert!(
            (var - expected).abs() < tol,
            "xi variance {var}, expected {expected} ± {tol}"
        );

        let mean_eta = etas0.iter().sum::<f64>() / n;
        let sd_eta = (etas0.iter().map(|e| (e - mean_eta).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        let sd_xi = var.sqrt();
        let cov = xis
            .iter()
            .zip(&etas0)
            .map(|(x, e)| (x - mean) * (e - mean_eta))
            .sum::<f64>()
            / (n - 1.0);
        let corr = cov / (sd_eta * sd_xi);
        assert!(corr.abs() < 4.0 / n.sqrt(), "corr(xi, eta) = {corr}");
    }
}
