//! Disorder laws and their conditional-mean continuity constants.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::FieldError;

/// Marginal law of the IID disorder, in potential-energy units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldModel {
    Gaussian { mean: f64, variance: f64 },
    Uniform { a: f64, b: f64 },
    /// Density is `densities[i]` on `[breakpoints[i], breakpoints[i+1])`.
    PiecewiseConstant {
        breakpoints: Vec<f64>,
        densities: Vec<f64>,
    },
}

impl FieldModel {
    pub fn standard_gaussian() -> Self {
        FieldModel::Gaussian { mean: 0.0, variance: 1.0 }
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        match self {
            FieldModel::Gaussian { mean, variance } => {
                if !mean.is_finite() || !variance.is_finite() || *variance <= 0.0 {
                    return Err(FieldError::InvalidModel(format!(
                        "gaussian needs finite mean and variance > 0, got mean={mean}, variance={variance}"
                    )));
                }
            }
            FieldModel::Uniform { a, b } => {
                if !a.is_finite() || !b.is_finite() || a >= b {
                    return Err(FieldError::InvalidModel(format!(
                        "uniform needs a < b, got a={a}, b={b}"
                    )));
                }
            }
            FieldModel::PiecewiseConstant { breakpoints, densities } => {
                if breakpoints.len() != densities.len() + 1 || densities.is_empty() {
                    return Err(FieldError::InvalidModel(
                        "piecewise_constant needs one more breakpoint than densities".into(),
                    ));
                }
                if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
                    return Err(FieldError::InvalidModel(
                        "breakpoints must be strictly increasing".into(),
                    ));
                }
                if densities.iter().any(|d| !d.is_finite() || *d < 0.0) {
                    return Err(FieldError::InvalidModel(
                        "densities must be nonnegative and finite".into(),
                    ));
                }
                let mass: f64 = densities
                    .iter()
                    .zip(breakpoints.windows(2))
                    .map(|(d, w)| d * (w[1] - w[0]))
                    .sum();
                if (mass - 1.0).abs() > 1e-9 {
                    return Err(FieldError::InvalidModel(format!(
                        "densities integrate to {mass}, expected 1"
                    )));
                }
            }
        }
        Ok(())
    }

    /// One draw. Consumes a fixed number of generator words per law, so a
    /// counter-positioned stream yields the same value regardless of what
    /// was drawn before.
    pub(crate) fn draw(&self, rng: &mut impl RngCore) -> f64 {
        match self {
            FieldModel::Gaussian { mean, variance } => {
                // Box-Muller with exactly two uniforms
                let u1 = unit_open_closed(rng);
                let u2 = unit_half_open(rng);
                let z = (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
                mean + variance.sqrt() * z
            }
            FieldModel::Uniform { a, b } => a + (b - a) * unit_half_open(rng),
            FieldModel::PiecewiseConstant { breakpoints, densities } => {
                let u = unit_half_open(rng);
                let mut cum = 0.0;
                let mut last_positive = None;
                for (i, d) in densities.iter().enumerate() {
                    let mass = d * (breakpoints[i + 1] - breakpoints[i]);
                    if mass > 0.0 {
                        last_positive = Some(i);
                        if u < cum + mass {
                            let pos = (u - cum) / mass;
                            return breakpoints[i] + pos * (breakpoints[i + 1] - breakpoints[i]);
                        }
                        cum += mass;
                    }
                }
                // u landed in the rounding slack past the last bin
                let i = last_positive.expect("validated model has positive mass");
                breakpoints[i + 1]
            }
        }
    }
}

/// Uniform on [0, 1) from the top 53 bits of one u64.
fn unit_half_open(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform on (0, 1]: safe as a log argument.
fn unit_open_closed(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Exceptional-event clause of the conditional-mean continuity condition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExceptionalBound {
    /// The continuity bound holds almost surely (Gaussian case).
    Never,
    /// Probability at most `coeff · R^power · s^holder`; constants fitted
    /// empirically, never treated as proven.
    Fitted { coeff: f64, power: f64, holder: f64 },
}

/// Constants `(C', A', b')` plus the exceptional clause: except on an
/// event controlled by [`ExceptionalBound`], the conditional distribution
/// function of the sample mean over any box of diameter at most `R` moves
/// by at most `C' (R+1)^{A'} s^{b'}` on an increment `s ∈ (0, 1)`.
///
/// The `R+1` convention: a lattice box of max-norm diameter `R` holds at
/// most `(R+1)^d` sites.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CcmConstants {
    pub scale_coeff: f64,
    pub scale_power: f64,
    pub holder_power: f64,
    pub exceptional: ExceptionalBound,
}

impl CcmConstants {
    /// `C' (R+1)^{A'} s^{b'}`.
    pub fn modulus_bound(&self, diameter: i64, s: f64) -> f64 {
        self.scale_coeff * ((diameter + 1) as f64).powf(self.scale_power) * s.powf(self.holder_power)
    }

    pub fn exceptional_probability(&self, diameter: i64, s: f64) -> f64 {
        match &self.exceptional {
            ExceptionalBound::Never => 0.0,
            ExceptionalBound::Fitted { coeff, power, holder } => {
                coeff * ((diameter + 1) as f64).powf(*power) * s.powf(*holder)
            }
        }
    }
}

/// Density bound for the sample mean of a Gaussian field over `|Q|` sites:
/// `|Q|^{1/2} / (σ √(2π))`.
pub fn gaussian_mean_density_bound(variance: f64, q_cardinality: u128) -> f64 {
    (q_cardinality as f64).sqrt() / (variance.sqrt() * std::f64::consts::TAU.sqrt())
}

/// Continuity constants for a Gaussian law in dimension `dim`.
///
/// The sample mean over `Q` is Gaussian with variance `σ²/|Q|` and
/// independent of the fluctuations, so the conditional distribution
/// function is Lipschitz with constant `|Q|^{1/2}/(σ√(2π))` almost
/// surely: `C' = 1/(σ√(2π))`, `A' = d/2`, `b' = 1`, no exceptional event.
pub fn gaussian_ccm_constants(model: &FieldModel, dim: usize) -> Result<CcmConstants, FieldError> {
    let FieldModel::Gaussian { variance, .. } = model else {
        return Err(FieldError::NotGaussian);
    };
    model.validate()?;
    Ok(CcmConstants {
        scale_coeff: 1.0 / (variance.sqrt() * std::f64::consts::TAU.sqrt()),
        scale_power: dim as f64 / 2.0,
        holder_power: 1.0,
        exceptional: ExceptionalBound::Never,
    })
}
