//! Lattice points, particle configurations, and the distances between them.
//!
//! Everything here is exact integer arithmetic. Coordinates are `i64`; the
//! target regime (N ≤ 4, d ≤ 2, |coords| ≤ a few hundred) is nowhere near
//! overflow even after expanding by cube radii.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::GeometryError;

/// Hard cap on particle count for permutation / bipartition enumeration.
/// Exactness beats scalability in this regime.
pub const MAX_PARTICLES: usize = 8;

/// A point of `Z^d`, `d ≥ 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint {
    coords: Vec<i64>,
}

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Result<Self, GeometryError> {
        if coords.is_empty() {
            return Err(GeometryError::ZeroDimension);
        }
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn coord(&self, axis: usize) -> i64 {
        self.coords[axis]
    }

    /// Max-norm distance to another point of the same dimension.
    pub fn max_norm_distance(&self, other: &Self) -> Result<i64, GeometryError> {
        if self.dim() != other.dim() {
            return Err(GeometryError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .max()
            .expect("d >= 1"))
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

impl From<i64> for LatticePoint {
    fn from(x: i64) -> Self {
        Self { coords: vec![x] }
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((x, y): (i64, i64)) -> Self {
        Self { coords: vec![x, y] }
    }
}

/// An ordered N-tuple of lattice points: one site per distinguishable
/// particle. Order is significant.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<LatticePoint>", into = "Vec<LatticePoint>")]
pub struct Configuration {
    particles: Vec<LatticePoint>,
}

impl Configuration {
    pub fn new(particles: Vec<LatticePoint>) -> Result<Self, GeometryError> {
        if particles.is_empty() {
            return Err(GeometryError::EmptyConfiguration);
        }
        if particles.len() > MAX_PARTICLES {
            return Err(GeometryError::TooManyParticles {
                n: particles.len(),
                max: MAX_PARTICLES,
            });
        }
        let d = particles[0].dim();
        if particles.iter().any(|p| p.dim() != d) {
            return Err(GeometryError::RaggedConfiguration);
        }
        Ok(Self { particles })
    }

    /// Particle count N.
    pub fn n(&self) -> usize {
        self.particles.len()
    }

    /// One-particle dimension d.
    pub fn dim(&self) -> usize {
        self.particles[0].dim()
    }

    pub fn particles(&self) -> &[LatticePoint] {
        &self.particles
    }

    /// 1-based particle access, matching the index-set convention.
    pub fn particle(&self, index: usize) -> &LatticePoint {
        &self.particles[index - 1]
    }

    /// The support `Π x = {x_1, …, x_N}` (duplicates collapse).
    pub fn support(&self) -> BTreeSet<LatticePoint> {
        self.particles.iter().cloned().collect()
    }

    /// Applies a relabeling: `τ(x) = (x_{τ(1)}, …, x_{τ(N)})` with `perm`
    /// giving τ as 0-based positions.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, GeometryError> {
        if perm.len() != self.n() {
            return Err(GeometryError::BadPermutation);
        }
        let mut seen = vec![false; self.n()];
        for &p in perm {
            if p >= self.n() || seen[p] {
                return Err(GeometryError::BadPermutation);
            }
            seen[p] = true;
        }
        let particles = perm.iter().map(|&p| self.particles[p].clone()).collect();
        Ok(Self { particles })
    }

    fn check_compatible(&self, other: &Self) -> Result<(), GeometryError> {
        if self.n() != other.n() {
            return Err(GeometryError::ParticleCountMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        if self.dim() != other.dim() {
            return Err(GeometryError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.particles)
    }
}

impl TryFrom<Vec<LatticePoint>> for Configuration {
    type Error = GeometryError;
    fn try_from(v: Vec<LatticePoint>) -> Result<Self, Self::Error> {
        Configuration::new(v)
    }
}

impl From<Configuration> for Vec<LatticePoint> {
    fn from(c: Configuration) -> Self {
        c.particles
    }
}

/// A subset of the particle indices `[[1, N]]`, kept sorted. May be empty.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSet {
    indices: Vec<usize>,
}

impl IndexSet {
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<Self, GeometryError> {
        indices.sort_unstable();
        indices.dedup();
        if indices.iter().any(|&i| i < 1 || i > n) {
            return Err(GeometryError::IndexOutOfRange { n });
        }
        Ok(Self { indices })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full(n: usize) -> Self {
        Self {
            indices: (1..=n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    /// `[[1, N]] \ J`.
    pub fn complement(&self, n: usize) -> Self {
        Self {
            indices: (1..=n).filter(|i| !self.contains(*i)).collect(),
        }
    }
}

/// Max-norm between two configurations viewed as vectors of `Z^{Nd}`.
pub fn max_norm(x: &Configuration, y: &Configuration) -> Result<i64, GeometryError> {
    x.check_compatible(y)?;
    let mut best = 0;
    for (a, b) in x.particles().iter().zip(y.particles()) {
        best = best.max(a.max_norm_distance(b)?);
    }
    Ok(best)
}

/// Symmetrized distance `d_S(x, y) = min_τ ‖τ(x) − y‖_∞` over all particle
/// relabelings τ.
///
/// Exact: enumerates permutations with branch-and-bound pruning on the
/// running max. N is capped at [`MAX_PARTICLES`], so the worst case is 8!.
pub fn sym_distance(x: &Configuration, y: &Configuration) -> Result<i64, GeometryError> {
    x.check_compatible(y)?;
    let n = x.n();

    // Pairwise max-norm table: cost[i][j] = ‖x_{i+1} − y_{j+1}‖.
    let mut cost = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            cost[i][j] = x.particles()[i].max_norm_distance(&y.particles()[j])?;
        }
    }

    // Bottleneck assignment by DFS over slots, pruning on the running max.
    fn dfs(slot: usize, used: &mut [bool], cost: &[Vec<i64>], running: i64, best: &mut i64) {
        if running >= *best {
            return;
        }
        let n = cost.len();
        if slot == n {
            *best = running;
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                dfs(slot + 1, used, cost, running.max(cost[i][slot]), best);
                used[i] = false;
            }
        }
    }

    let mut best = i64::MAX;
    let mut used = vec![false; n];
    dfs(0, &mut used, &cost, 0, &mut best);
    Ok(best)
}

/// Set distance `ρ(A, B) = min over pairs of max-norm distances`.
pub fn rho_distance(a: &[LatticePoint], b: &[LatticePoint]) -> Result<i64, GeometryError> {
    if a.is_empty() || b.is_empty() {
        return Err(GeometryError::EmptyPointSet);
    }
    let mut best = i64::MAX;
    for p in a {
        for q in b {
            best = best.min(p.max_norm_distance(q)?);
        }
    }
    Ok(best)
}

/// `Π_J x`: the support of the subconfiguration of `x` on `J`
/// (empty set for `J = ∅`).
pub fn projections(x: &Configuration, j: &IndexSet) -> Result<BTreeSet<LatticePoint>, GeometryError> {
    if let Some(&max) = j.indices().last() {
        if max > x.n() {
            return Err(GeometryError::IndexOutOfRange { n: x.n() });
        }
    }
    Ok(j.iter().map(|i| x.particle(i).clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg1(coords: &[i64]) -> Configuration {
        Configuration::new(coords.iter().map(|&c| LatticePoint::from(c)).collect()).unwrap()
    }

    #[test]
    fn max_norm_identity_and_coordinate_max() {
        let z = Configuration::new(vec![(0, 0).into()]).unwrap();
        assert_eq!(max_norm(&z, &z).unwrap(), 0);

        let a = Configuration::new(vec![(3, -1).into()]).unwrap();
        let b = Configuration::new(vec![(0, 2).into()]).unwrap();
        assert_eq!(max_norm(&a, &b).unwrap(), 3);
    }

    #[test]
    fn max_norm_translation() {
        for l in [0, 1, 5, 17] {
            let x = cfg1(&[4, -3, 11]);
            let shifted = cfg1(&[4 + l, -3 + l, 11 + l]);
            assert_eq!(max_norm(&x, &shifted).unwrap(), l);
        }
    }

    #[test]
    fn max_norm_rejects_mismatch() {
        let a = cfg1(&[0]);
        let b = Configuration::new(vec![(0, 0).into()]).unwrap();
        assert!(max_norm(&a, &b).is_err());
        let c = cfg1(&[0, 1]);
        assert!(max_norm(&a, &c).is_err());
    }

    #[test]
    fn sym_distance_frozen_example() {
        // min over all 6 permutations, by hand: 10.
        let x = cfg1(&[0, 0, 10]);
        let y = cfg1(&[0, 10, 10]);
        assert_eq!(sym_distance(&x, &y).unwrap(), 10);
    }

    #[test]
    fn sym_distance_identity() {
        let x = cfg1(&[3, -7, 42, 3]);
        assert_eq!(sym_distance(&x, &x).unwrap(), 0);
    }

    #[test]
    fn sym_distance_permutation_invariance() {
        let x = cfg1(&[0, 5, -3]);
        let y = cfg1(&[2, 2, 9]);
        let base = sym_distance(&x, &y).unwrap();
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        for p in perms {
            let tx = x.permuted(&p).unwrap();
            assert_eq!(sym_distance(&tx, &y).unwrap(), base);
            let sy = y.permuted(&p).unwrap();
            assert_eq!(sym_distance(&x, &sy).unwrap(), base);
        }
    }

    #[test]
    fn rho_basics() {
        let a = vec![LatticePoint::from(0)];
        let b = vec![LatticePoint::from(5)];
        assert_eq!(rho_distance(&a, &b).unwrap(), 5);

        let c = vec![LatticePoint::from(0), LatticePoint::from(3)];
        let d = vec![LatticePoint::from(3), LatticePoint::from(9)];
        assert_eq!(rho_distance(&c, &d).unwrap(), 0);

        let p = vec![LatticePoint::from((0, 0))];
        let q = vec![LatticePoint::from((3, 1))];
        assert_eq!(rho_distance(&p, &q).unwrap(), 3);

        assert!(rho_distance(&[], &a).is_err());
    }

    #[test]
    fn projections_collapse_duplicates() {
        let x = cfg1(&[0, 0, 10]);
        let j = IndexSet::new(vec![1, 2], 3).unwrap();
        let proj = projections(&x, &j).unwrap();
        assert_eq!(proj.len(), 1);
        assert!(proj.contains(&LatticePoint::from(0)));

        let full = projections(&x, &IndexSet::full(3)).unwrap();
        assert_eq!(full, x.support());

        assert!(projections(&x, &IndexSet::empty()).unwrap().is_empty());
    }

    #[test]
    fn index_set_bounds() {
        assert!(IndexSet::new(vec![0], 3).is_err());
        assert!(IndexSet::new(vec![4], 3).is_err());
        let j = IndexSet::new(vec![3, 1, 3], 3).unwrap();
        assert_eq!(j.indices(), &[1, 3]);
        assert_eq!(j.complement(3).indices(), &[2]);
    }
}
