//! Assembly of finite-volume N-particle operators.
//!
//! The kinetic part is pure lattice adjacency: entry 1 between basis
//! points differing by a unit step of a single particle, no diagonal
//! contribution. Hops leaving the cube are dropped, which is the
//! Dirichlet restriction. An assembly option adds the conventional
//! `−2Nd` on-site term for cross-checks, default off.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::field::FieldSample;
use crate::geometry::Configuration;

use super::basis::CubeBasis;
use super::HamiltonianError;

/// Interaction potential `U` acting by multiplication. Boundedness is
/// part of the contract; symmetry is not required.
#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Interaction {
    None,
    /// `u0` on every unordered pair at max-norm distance ≤ `r0`.
    PairwiseContact { strength: f64, range: i64 },
    /// `values[dist]` per unordered pair, zero beyond the table.
    PairwiseTable { values: Vec<f64> },
    /// Caller-supplied bounded potential.
    #[serde(skip)]
    Custom(CustomInteraction),
}

#[derive(Clone)]
pub struct CustomInteraction {
    pub bound: f64,
    pub symmetric: bool,
    pub f: Arc<dyn Fn(&Configuration) -> f64 + Send + Sync>,
}

impl fmt::Debug for Interaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interaction::None => write!(f, "none"),
            Interaction::PairwiseContact { strength, range } => {
                write!(f, "pairwise_contact(u0={strength}, r0={range})")
            }
            Interaction::PairwiseTable { values } => {
                write!(f, "pairwise_table({values:?})")
            }
            Interaction::Custom(c) => write!(f, "custom(bound={})", c.bound),
        }
    }
}

impl Interaction {
    pub fn evaluate(&self, x: &Configuration) -> f64 {
        match self {
            Interaction::None => 0.0,
            Interaction::PairwiseContact { strength, range } => {
                pair_sum(x, |dist| if dist <= *range { *strength } else { 0.0 })
            }
            Interaction::PairwiseTable { values } => pair_sum(x, |dist| {
                usize::try_from(dist)
                    .ok()
                    .and_then(|i| values.get(i))
                    .copied()
                    .unwrap_or(0.0)
            }),
            Interaction::Custom(c) => (c.f)(x),
        }
    }

    /// Metadata flag; position exchange symmetry holds by construction
    /// for the pairwise kinds.
    pub fn is_symmetric(&self) -> bool {
        match self {
            Interaction::Custom(c) => c.symmetric,
            _ => true,
        }
    }

    /// Upper bound for `|U|` on N-particle configurations.
    pub fn bound(&self, n: usize) -> f64 {
        let pairs = (n * n.saturating_sub(1) / 2) as f64;
        match self {
            Interaction::None => 0.0,
            Interaction::PairwiseContact { strength, .. } => strength.abs() * pairs,
            Interaction::PairwiseTable { values } => {
                values.iter().fold(0.0f64, |m, v| m.max(v.abs())) * pairs
            }
            Interaction::Custom(c) => c.bound,
        }
    }
}

fn pair_sum(x: &Configuration, f: impl Fn(i64) -> f64) -> f64 {
    let particles = x.particles();
    let mut total = 0.0;
    for i in 0..particles.len() {
        for j in (i + 1)..particles.len() {
            let dist = particles[i]
                .max_norm_distance(&particles[j])
                .expect("one configuration");
            total += f(dist);
        }
    }
    total
}

impl fmt::Display for Interaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AssemblyOptions {
    /// Add the conventional `−2Nd` on-site Laplacian term.
    pub conventional_laplacian_diagonal: bool,
}

/// Dense symmetric operator on a cube basis, immutable once built.
#[derive(Clone, Debug)]
pub struct AssembledOperator {
    basis: CubeBasis,
    matrix: DMatrix<f64>,
    interaction_label: String,
    sample_id: (u64, u64),
}

impl AssembledOperator {
    pub fn basis(&self) -> &CubeBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn interaction_label(&self) -> &str {
        &self.interaction_label
    }

    /// `(master_seed, trial)` of the field realization used.
    pub fn sample_id(&self) -> (u64, u64) {
        self.sample_id
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().sum()
    }

    /// Max row sum; bounds the spectral radius.
    pub fn inf_norm(&self) -> f64 {
        (0..self.matrix.nrows())
            .map(|i| self.matrix.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0f64, f64::max)
    }

    /// Coordinate-format text export (matrix-market style, symmetric,
    /// lower triangle).
    pub fn matrix_market(&self) -> String {
        let n = self.dim();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..=i {
                let v = self.matrix[(i, j)];
                if v != 0.0 {
                    entries.push((i + 1, j + 1, v));
                }
            }
        }
        let mut out = String::from("%%MatrixMarket matrix coordinate real symmetric\n");
        out.push_str(&format!("{n} {n} {}\n", entries.len()));
        for (i, j, v) in entries {
            out.push_str(&format!("{i} {j} {v}\n"));
        }
        out
    }
}

/// Builds the operator on `basis` from one field realization.
///
/// Off-diagonal entries are 1 exactly when the two basis points differ by
/// ±1 in a single coordinate of `Z^{Nd}`; the diagonal carries
/// `Σ_j V(x_j) + U(x)`.
pub fn assemble(
    basis: &CubeBasis,
    sample: &FieldSample,
    interaction: &Interaction,
) -> Result<AssembledOperator, HamiltonianError> {
    assemble_with(basis, sample, interaction, AssemblyOptions::default())
}

pub fn assemble_with(
    basis: &CubeBasis,
    sample: &FieldSample,
    interaction: &Interaction,
    options: AssemblyOptions,
) -> Result<AssembledOperator, HamiltonianError> {
    let cube = basis.cube();
    let n = cube.center().n();
    let d = cube.center().dim();
    let nd = n * d;
    let radius = cube.radius();
    let dim = basis.len();
    let side = 2 * radius + 1;

    let mut matrix = DMatrix::<f64>::zeros(dim, dim);

    // strides of each flat coordinate in the lexicographic index
    let mut strides = vec![1usize; nd];
    for k in (0..nd.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * side as usize;
    }

    let onsite_shift = if options.conventional_laplacian_diagonal {
        -2.0 * nd as f64
    } else {
        0.0
    };

    for a in 0..dim {
        let flat = basis.flat_coords(a);
        let x = basis.configuration(a);

        let mut diag = interaction.evaluate(&x) + onsite_shift;
        for p in x.particles() {
            let v = sample.value(p).ok_or_else(|| HamiltonianError::SampleCoverage {
                site: format!("{p:?}"),
            })?;
            diag += v;
        }
        matrix[(a, a)] = diag;

        // hops within the cube; those leaving it are dropped
        for (k, stride) in strides.iter().enumerate() {
            let center = cube.center().particles()[k / d].coord(k % d);
            if flat[k] + 1 <= center + radius {
                matrix[(a, a + stride)] = 1.0;
            }
            if flat[k] - 1 >= center - radius {
                matrix[(a, a - stride)] = 1.0;
            }
        }
    }

    Ok(AssembledOperator {
        basis: basis.clone(),
        matrix,
        interaction_label: interaction.to_string(),
        sample_id: (sample.master_seed(), sample.trial()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{sample_field, FieldModel, FieldSample};
    use crate::geometry::{LatticePoint, MultiCube};
    use std::collections::BTreeMap;

    pub(crate) fn constant_sample(sites: impl IntoIterator<Item = LatticePoint>, c: f64) -> FieldSample {
        let values: BTreeMap<LatticePoint, f64> = sites.into_iter().map(|s| (s, c)).collect();
        FieldSample::from_values(values, 0, 0)
    }

    fn basis1(coords: &[i64], l: i64) -> CubeBasis {
        let cfg = Configuration::new(coords.iter().map(|&c| LatticePoint::from(c)).collect())
            .unwrap();
        CubeBasis::with_default_cap(MultiCube::new(cfg, l).unwrap()).unwrap()
    }

    #[test]
    fn path_graph_adjacency() {
        let basis = basis1(&[0], 1);
        let sample = constant_sample((-1..=1).map(LatticePoint::from), 0.0);
        let op = assemble(&basis, &sample, &Interaction::None).unwrap();
        let m = op.matrix();
        assert_eq!(m[(0, 1)], 1.0);
        assert_eq!(m[(1, 2)], 1.0);
        assert_eq!(m[(0, 2)], 0.0);
        assert_eq!(m[(0, 0)], 0.0);
        assert_eq!(op.matrix(), &op.matrix().transpose());
    }

    #[test]
    fn hopping_counts() {
        // interior points have exactly 2Nd neighbors, all points at most
        let basis = basis1(&[0, 10], 2);
        let sites: Vec<LatticePoint> = (-2..=2)
            .chain(8..=12)
            .map(LatticePoint::from)
            .collect();
        let op = assemble(&basis, &constant_sample(sites, 0.0), &Interaction::None).unwrap();
        let nd = 2;
        for a in 0..op.dim() {
            let row_ones = (0..op.dim())
                .filter(|&b| b != a && op.matrix()[(a, b)] != 0.0)
                .count();
            assert!(row_ones <= 2 * nd);
            let flat = op.basis().flat_coords(a);
            let interior = flat[0].abs() < 2 && (flat[1] - 10).abs() < 2;
            if interior {
                assert_eq!(row_ones, 2 * nd);
            }
        }
    }

    #[test]
    fn contact_interaction_hits_coincident_pairs() {
        let basis = basis1(&[0, 0], 1);
        let sites: Vec<LatticePoint> = (-1..=1).map(LatticePoint::from).collect();
        let u0 = 2.5;
        let inter = Interaction::PairwiseContact { strength: u0, range: 0 };
        let op = assemble(&basis, &constant_sample(sites, 0.0), &inter).unwrap();
        for a in 0..op.dim() {
            let cfg = op.basis().configuration(a);
            let expected = if cfg.particles()[0] == cfg.particles()[1] {
                u0
            } else {
                0.0
            };
            assert_eq!(op.matrix()[(a, a)], expected);
        }
    }

    #[test]
    fn conventional_diagonal_option_shifts_uniformly() {
        let basis = basis1(&[0, 3], 1);
        let sites: Vec<LatticePoint> = (-1..=4).map(LatticePoint::from).collect();
        let sample = constant_sample(sites, 0.4);
        let plain = assemble(&basis, &sample, &Interaction::None).unwrap();
        let conv = assemble_with(
            &basis,
            &sample,
            &Interaction::None,
            AssemblyOptions { conventional_laplacian_diagonal: true },
        )
        .unwrap();
        let nd = 2.0;
        for a in 0..plain.dim() {
            assert_eq!(conv.matrix()[(a, a)], plain.matrix()[(a, a)] - 2.0 * nd);
        }
    }

    #[test]
    fn coverage_gap_detected() {
        let basis = basis1(&[0], 2);
        let sample = constant_sample((-1..=1).map(LatticePoint::from), 0.0);
        assert!(matches!(
            assemble(&basis, &sample, &Interaction::None),
            Err(HamiltonianError::SampleCoverage { .. })
        ));
    }

    #[test]
    fn interaction_table_and_bounds() {
        let x = Configuration::new(vec![LatticePoint::from(0), LatticePoint::from(2)]).unwrap();
        let table = Interaction::PairwiseTable { values: vec![1.0, 0.5, 0.25] };
        assert_eq!(table.evaluate(&x), 0.25);
        assert!(table.bound(2) >= 0.25);
        let far = Configuration::new(vec![LatticePoint::from(0), LatticePoint::from(9)]).unwrap();
        assert_eq!(table.evaluate(&far), 0.0);

        let custom = Interaction::Custom(CustomInteraction {
            bound: 1.0,
            symmetric: false,
            f: Arc::new(|cfg: &Configuration| {
                if cfg.particles()[0].coord(0) > cfg.particles()[1].coord(0) {
                    1.0
                } else {
                    0.0
                }
            }),
        });
        assert!(!custom.is_symmetric());
        assert_eq!(custom.evaluate(&x), 0.0);
    }

    #[test]
    fn matrix_market_round_shape() {
        let basis = basis1(&[0], 1);
        let sample = sample_field(
            &FieldModel::standard_gaussian(),
            (-1..=1).map(LatticePoint::from),
            3,
            0,
        )
        .unwrap();
        let op = assemble(&basis, &sample, &Interaction::None).unwrap();
        let text = op.matrix_market();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("%%MatrixMarket"));
        let header: Vec<usize> = lines
            .next()
            .unwrap()
            .split_whitespace()
            .map(|t| t.parse().unwrap())
            .collect();
        assert_eq!(header[0], 3);
        assert_eq!(header[1], 3);
        assert_eq!(text.lines().count(), 2 + header[2]);
    }
}
