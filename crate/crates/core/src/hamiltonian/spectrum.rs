//! Dense symmetric eigensolve, spectral distances, and the exact
//! spectral-shift check licensed by a separability certificate.

use nalgebra::SymmetricEigen;

use crate::field::FieldSample;
use crate::geometry::{validate_certificate, MultiCube, SeparabilityCertificate};

use super::basis::CubeBasis;
use super::operator::{assemble, AssembledOperator, Interaction};
use super::HamiltonianError;

/// Residual gate for the extremal eigenpairs, relative to ‖M‖.
const RESIDUAL_TOLERANCE: f64 = 1e-8;

/// Tolerance of the certificate-licensed eigenvalue shifts.
pub const SHIFT_TOLERANCE: f64 = 1e-9;

/// All eigenvalues of one finite-volume operator, ascending, with
/// multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty")
    }

    /// `dist(E, σ) = min_i |λ_i − E|` by binary search.
    pub fn distance_to_energy(&self, energy: f64) -> f64 {
        let idx = self
            .eigenvalues
            .partition_point(|&v| v < energy)
            .min(self.eigenvalues.len() - 1);
        let mut best = (self.eigenvalues[idx] - energy).abs();
        if idx > 0 {
            best = best.min((self.eigenvalues[idx - 1] - energy).abs());
        }
        best
    }
}

/// Full eigensolve of an assembled operator.
///
/// The matrix must be exactly symmetric (anything else signals an
/// assembly bug). The extremal eigenpairs are checked against
/// `‖Mv − λv‖ ≤ 1e−8 ‖M‖` before the spectrum is returned.
pub fn spectrum(op: &AssembledOperator) -> Result<Spectrum, HamiltonianError> {
    let m = op.matrix();
    if m != &m.transpose() {
        return Err(HamiltonianError::NotSymmetric);
    }

    let eigen = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eigen.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[a]
            .partial_cmp(&eigen.eigenvalues[b])
            .expect("finite eigenvalues")
    });

    let norm = op.inf_norm().max(1.0);
    for &i in [order[0], *order.last().expect("nonempty")].iter() {
        let lambda = eigen.eigenvalues[i];
        let v = eigen.eigenvectors.column(i);
        let residual = (m * v - lambda * v).norm();
        if residual > RESIDUAL_TOLERANCE * norm {
            return Err(HamiltonianError::EigensolverResidual {
                residual,
                bound: RESIDUAL_TOLERANCE * norm,
            });
        }
    }

    Ok(Spectrum {
        eigenvalues: order.iter().map(|&i| eigen.eigenvalues[i]).collect(),
    })
}

/// `dist(σ_a, σ_b) = min_{i,j} |λ_i − μ_j|`, two-pointer over the sorted
/// lists.
pub fn spectral_distance(a: &Spectrum, b: &Spectrum) -> Result<f64, HamiltonianError> {
    if a.is_empty() || b.is_empty() {
        return Err(HamiltonianError::EmptySpectrum);
    }
    let (xs, ys) = (a.eigenvalues(), b.eigenvalues());
    let mut best = f64::INFINITY;
    let (mut i, mut j) = (0usize, 0usize);
    while i < xs.len() && j < ys.len() {
        best = best.min((xs[i] - ys[j]).abs());
        if xs[i] < ys[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    Ok(best)
}

/// Outcome of the spectral-shift decomposition check at one `t`.
#[derive(Clone, Debug)]
pub struct ShiftReport {
    pub t: f64,
    /// Constant occupancy of Q over the x-cube (`n1` or `n2` by side).
    pub occupancy_x: usize,
    /// Constant occupancy of Q over the y-cube.
    pub occupancy_y: usize,
    pub max_deviation_x: f64,
    pub max_deviation_y: f64,
    pub tolerance: f64,
}

impl ShiftReport {
    pub fn passed(&self) -> bool {
        self.max_deviation_x <= self.tolerance && self.max_deviation_y <= self.tolerance
    }
}

/// Recomputes both spectra after adding the constant `t` to the field on
/// the certificate's box and verifies that every eigenvalue of the x-cube
/// moved by exactly `occupancy_x · t` and of the y-cube by
/// `occupancy_y · t` (sorted comparison, multiplicity included).
///
/// The certificate must validate at its own scale, which must dominate
/// both cube radii: the clean cube splits then make the occupancy of the
/// box constant over each cube, so the diagonal of each operator gains a
/// global constant and the shift is exact up to eigensolver noise.
#[allow(clippy::too_many_arguments)]
pub fn shift_decomposition_check(
    x_cube: &MultiCube,
    y_cube: &MultiCube,
    cert: &SeparabilityCertificate,
    sample: &FieldSample,
    interaction: &Interaction,
    t: f64,
    cap: usize,
) -> Result<ShiftReport, HamiltonianError> {
    let check = validate_certificate(cert, x_cube.center(), y_cube.center(), cert.scale);
    if let Some(violation) = check.violation {
        return Err(HamiltonianError::InvalidCertificate(violation.to_string()));
    }
    for cube in [x_cube, y_cube] {
        if cube.radius() > cert.scale {
            return Err(HamiltonianError::ScaleMismatch {
                cube_radius: cube.radius(),
                certificate_scale: cert.scale,
            });
        }
    }

    let basis_x = CubeBasis::new(x_cube.clone(), cap)?;
    let basis_y = CubeBasis::new(y_cube.clone(), cap)?;

    let shifted = sample.shifted_on(&cert.q, t);

    let spec_x = spectrum(&assemble(&basis_x, sample, interaction)?)?;
    let spec_y = spectrum(&assemble(&basis_y, sample, interaction)?)?;
    let spec_x_shifted = spectrum(&assemble(&basis_x, &shifted, interaction)?)?;
    let spec_y_shifted = spectrum(&assemble(&basis_y, &shifted, interaction)?)?;

    let occupancy_x = cert.occupancy_of_x();
    let occupancy_y = cert.occupancy_of_y();

    let max_dev = |before: &Spectrum, after: &Spectrum, occupancy: usize| {
        before
            .eigenvalues()
            .iter()
            .zip(after.eigenvalues())
            .map(|(b, a)| (a - (b + occupancy as f64 * t)).abs())
            .fold(0.0f64, f64::max)
    };

    Ok(ShiftReport {
        t,
        occupancy_x,
        occupancy_y,
        max_deviation_x: max_dev(&spec_x, &spec_x_shifted, occupancy_x),
        max_deviation_y: max_dev(&spec_y, &spec_y_shifted, occupancy_y),
        tolerance: SHIFT_TOLERANCE,
    })
}
