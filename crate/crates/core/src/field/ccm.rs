//! Empirical probes of conditional-mean continuity.
//!
//! Conditioning is by binning a scalar fluctuation coordinate: the
//! fluctuation at the lexicographically first site of the box. That is a
//! coarsening of the full fluctuation sigma-algebra, so any bound that
//! holds conditionally on the fluctuations also holds for the binned
//! estimates, and for a two-site box the scalar determines the whole
//! fluctuation vector.

use std::collections::BTreeMap;

use crate::geometry::Parallelepiped;

use super::model::FieldModel;
use super::sample::draw_site_values;
use super::FieldError;

/// Bins with fewer samples than this are flagged, not dropped.
pub const MIN_BIN_SAMPLES: usize = 100;

/// Conditional estimates for one fluctuation bin.
#[derive(Clone, Debug, PartialEq)]
pub struct ModulusBin {
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub count: usize,
    /// `sup_t [F̂(t+s) − F̂(t)]` of the binned sample means; `None` when
    /// undersampled.
    pub sup_increment: Option<f64>,
    /// Interquartile density estimate `0.5 / (q75 − q25)`; exact in
    /// expectation for a conditionally uniform law. `None` when
    /// undersampled or degenerate.
    pub density_iqr: Option<f64>,
    pub undersampled: bool,
}

/// Monte Carlo estimate of the conditional distribution increment of the
/// sample mean over `q`, conditioned on binned fluctuations.
///
/// For each trial the field is drawn on `q` with the counter-based
/// scheme, split into mean and fluctuations, and recorded under the bin
/// of its first-site fluctuation. Per bin the sup over `t` of the
/// empirical CDF increment at width `s` is returned, together with an
/// interquartile density estimate.
pub fn empirical_conditional_modulus(
    model: &FieldModel,
    q: &Parallelepiped,
    s: f64,
    bin_width: f64,
    trials: u64,
    master_seed: u64,
) -> Result<Vec<ModulusBin>, FieldError> {
    model.validate()?;
    if !(s > 0.0) || !s.is_finite() {
        return Err(FieldError::InvalidIncrement { s });
    }
    if !(bin_width > 0.0) || !bin_width.is_finite() {
        return Err(FieldError::InvalidModel(format!(
            "bin width must be positive, got {bin_width}"
        )));
    }
    if trials < 10_000 {
        return Err(FieldError::TooFewTrials { trials });
    }

    let site_count = q.cardinality();
    if site_count > 4096 {
        return Err(FieldError::InvalidModel(format!(
            "box with {site_count} sites is too large for the estimator"
        )));
    }
    let site_count = site_count as usize;

    let mut bins: BTreeMap<i64, Vec<f64>> = BTreeMap::new();
    for trial in 0..trials {
        let values = draw_site_values(model, site_count, master_seed, trial);
        let xi = values.iter().sum::<f64>() / site_count as f64;
        let eta_first = values[0] - xi;
        let key = (eta_first / bin_width).floor() as i64;
        bins.entry(key).or_default().push(xi);
    }

    Ok(bins
        .into_iter()
        .map(|(key, mut xis)| {
            let count = xis.len();
            let undersampled = count < MIN_BIN_SAMPLES;
            let (sup_increment, density_iqr) = if undersampled {
                (None, None)
            } else {
                xis.sort_by(|a, b| a.partial_cmp(b).expect("finite draws"));
                (Some(sup_window_fraction(&xis, s)), iqr_density(&xis))
            };
            ModulusBin {
                bin_lo: key as f64 * bin_width,
                bin_hi: (key + 1) as f64 * bin_width,
                count,
                sup_increment,
                density_iqr,
                undersampled,
            }
        })
        .collect())
}

/// Largest fraction of the sorted sample inside any closed window of
/// width `s`. Two-pointer, O(n).
fn sup_window_fraction(sorted: &[f64], s: f64) -> f64 {
    let n = sorted.len();
    let mut best = 0usize;
    let mut lo = 0usize;
    for hi in 0..n {
        while sorted[hi] - sorted[lo] > s {
            lo += 1;
        }
        best = best.max(hi - lo + 1);
    }
    best as f64 / n as f64
}

fn iqr_density(sorted: &[f64]) -> Option<f64> {
    let n = sorted.len();
    let q25 = sorted[n / 4];
    let q75 = sorted[(3 * n) / 4];
    let spread = q75 - q25;
    (spread > 0.0).then(|| 0.5 / spread)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::model::{gaussian_ccm_constants, gaussian_mean_density_bound};

    fn two_site_box() -> Parallelepiped {
        Parallelepiped::new(vec![0], vec![1]).unwrap()
    }

    #[test]
    fn rejects_bad_arguments() {
        let model = FieldModel::standard_gaussian();
        let q = two_site_box();
        assert!(empirical_conditional_modulus(&model, &q, 0.0, 0.05, 20_000, 1).is_err());
        assert!(empirical_conditional_modulus(&model, &q, 0.1, 0.05, 100, 1).is_err());
    }

    #[test]
    fn gaussian_increment_below_analytic_bound() {
        let model = FieldModel::standard_gaussian();
        let q = two_site_box();
        let s = 0.2;
        let bins =
            empirical_conditional_modulus(&model, &q, s, 0.25, 40_000, 99).unwrap();
        let ccm = gaussian_ccm_constants(&model, 1).unwrap();
        // diameter 1 in d = 1: two sites
        let bound = ccm.modulus_bound(q.diameter(), s);
        assert!((bound - gaussian_mean_density_bound(1.0, 2) * s).abs() < 1e-12);
        let mut checked = 0;
        for bin in bins.iter().filter(|b| !b.undersampled) {
            let inc = bin.sup_increment.unwrap();
            let se = 3.0 * (inc * (1.0 - inc) / bin.count as f64).sqrt().max(1e-3);
            assert!(
                inc <= bound + se,
                "bin [{}, {}): increment {inc} above bound {bound} + {se}",
                bin.bin_lo,
                bin.bin_hi
            );
            checked += 1;
        }
        assert!(checked >= 3, "too few populated bins");
    }

    #[test]
    fn uniform_two_sites_reproduces_conditional_density() {
        // v1, v2 uniform on [0,1]: given the fluctuation e, the mean is
        // uniform on [|e|, 1−|e|] with density (1−2|e|)^{-1}
        let model = FieldModel::Uniform { a: 0.0, b: 1.0 };
        let q = two_site_box();
        let bins =
            empirical_conditional_modulus(&model, &q, 0.05, 0.02, 200_000, 7).unwrap();
        let mut checked = 0;
        for bin in bins.iter().filter(|b| !b.undersampled) {
            let e = (bin.bin_lo + bin.bin_hi) / 2.0;
            if e.abs() > 0.3 {
                continue;
            }
            let expected = 1.0 / (1.0 - 2.0 * e.abs());
            let got = bin.density_iqr.unwrap();
            assert!(
                (got - expected).abs() / expected < 0.10,
                "bin center {e}: density {got}, expected {expected}"
            );
            checked += 1;
        }
        assert!(checked >= 10, "too few informative bins: {checked}");
    }

    #[test]
    fn uniform_degenerate_bin_concentrates() {
        // as |e| → 1/2 the conditional support [|e|, 1−|e|] collapses, so
        // the mixture density in a near-degenerate bin is at least the
        // widest component's density 1/(1 − 2·bin_lo)
        let model = FieldModel::Uniform { a: 0.0, b: 1.0 };
        let q = two_site_box();
        let bins =
            empirical_conditional_modulus(&model, &q, 0.05, 0.02, 400_000, 13).unwrap();
        let density_at = |lo: f64| {
            bins.iter()
                .find(|b| (b.bin_lo - lo).abs() < 1e-9 && !b.undersampled)
                .and_then(|b| b.density_iqr)
        };
        let central = density_at(0.0).expect("central bin populated");
        let degenerate = density_at(0.46).expect("near-degenerate bin populated");
        assert!(
            degenerate > 0.8 / (1.0 - 2.0 * 0.46),
            "degenerate-bin density {degenerate} below the component floor"
        );
        assert!(
            degenerate > 5.0 * central,
            "no concentration: degenerate {degenerate} vs central {central}"
        );
    }

    #[test]
    fn undersampled_bins_flagged_not_dropped() {
        let model = FieldModel::standard_gaussian();
        let q = two_site_box();
        let bins = empirical_conditional_modulus(&model, &q, 0.1, 0.01, 10_000, 3).unwrap();
        assert!(bins.iter().any(|b| b.undersampled));
        for b in bins.iter().filter(|b| b.undersampled) {
            assert!(b.sup_increment.is_none());
            assert!(b.count < MIN_BIN_SAMPLES);
        }
    }
}
