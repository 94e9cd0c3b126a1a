//! Cluster decomposition of particle configurations and decoupling widths.
//!
//! An R-cluster is a maximal group of particles whose R-cubes chain
//! together. Merging runs on canonical envelopes, not just pairwise box
//! intersections: in d ≥ 2 a connected chain of cubes can curl around a
//! separate cube whose envelope it overlaps, and such groups are not
//! envelope-separated until they are merged too. The fixed point of
//! envelope merging is unique because envelopes only grow.

use serde::{Deserialize, Serialize};

use super::boxes::{canonical_envelope, MultiCube, Parallelepiped};
use super::lattice::{Configuration, IndexSet, LatticePoint};
use super::GeometryError;

/// One cluster: the particle indices it carries and the canonical envelope
/// of the bare particle positions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cluster {
    pub members: IndexSet,
    pub envelope: Parallelepiped,
}

impl Cluster {
    /// Envelope of `∪_{k∈members} C_L(x_k)`: the particle envelope grown
    /// by the cube radius.
    pub fn cube_envelope(&self, l: i64) -> Parallelepiped {
        self.envelope.expanded(l)
    }
}

/// The full R-cluster decomposition of a configuration. Clusters are
/// sorted by smallest member index, so output is deterministic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterDecomposition {
    pub radius: i64,
    pub clusters: Vec<Cluster>,
}

impl ClusterDecomposition {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Index (0-based) of the cluster containing particle `j` (1-based).
    pub fn cluster_of(&self, j: usize) -> Option<usize> {
        self.clusters.iter().position(|c| c.members.contains(j))
    }
}

/// Envelope-closure grouping at the given radius, shared by the public
/// decomposition and the separability code (which clusters the combined
/// supports of two configurations). Accepts radius 0, where cubes
/// degenerate to points.
pub(crate) fn envelope_closure_groups(
    points: &[LatticePoint],
    radius: i64,
) -> Vec<(Vec<usize>, Parallelepiped)> {
    // state: (member positions into `points`, envelope of member R-cubes)
    let mut groups: Vec<(Vec<usize>, Parallelepiped)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (vec![i], Parallelepiped::cube(p, radius)))
        .collect();

    loop {
        let mut merged_any = false;
        'outer: for a in 0..groups.len() {
            for b in (a + 1)..groups.len() {
                if groups[a].1.gap(&groups[b].1) == 0 {
                    let (members_b, env_b) = groups.swap_remove(b);
                    groups[a].0.extend(members_b);
                    groups[a].1 = groups[a].1.hull(&env_b);
                    merged_any = true;
                    break 'outer;
                }
            }
        }
        if !merged_any {
            break;
        }
    }

    for (members, _) in groups.iter_mut() {
        members.sort_unstable();
    }
    groups.sort_by_key(|(members, _)| members[0]);
    groups
}

/// Decomposes `x` into its R-clusters.
///
/// The returned clusters partition `[[1, N]]`, have pairwise envelope gap
/// (d_CH) strictly above `2R`, and each has diameter at most `2(N−1)R`.
pub fn cluster_decompose(
    x: &Configuration,
    radius: i64,
) -> Result<ClusterDecomposition, GeometryError> {
    if radius < 1 {
        return Err(GeometryError::InvalidRadius { radius });
    }
    let groups = envelope_closure_groups(x.particles(), radius);
    let clusters = groups
        .into_iter()
        .map(|(members, _)| {
            let pts: Vec<LatticePoint> = members
                .iter()
                .map(|&i| x.particles()[i].clone())
                .collect();
            let envelope = canonical_envelope(&pts).expect("cluster is nonempty");
            let members = IndexSet::new(members.iter().map(|i| i + 1).collect(), x.n())
                .expect("positions are in range");
            Cluster { members, envelope }
        })
        .collect();
    Ok(ClusterDecomposition { radius, clusters })
}

fn nontrivial_bipartitions(n: usize) -> impl Iterator<Item = (IndexSet, IndexSet)> {
    // fix particle 1 on the left side so each unordered pair appears once
    (0u32..(1 << (n - 1))).skip(1).map(move |mask| {
        let mut left = vec![1usize];
        let mut right = Vec::new();
        for j in 2..=n {
            if mask & (1 << (j - 2)) != 0 {
                right.push(j);
            } else {
                left.push(j);
            }
        }
        (
            IndexSet::new(left, n).expect("in range"),
            IndexSet::new(right, n).expect("in range"),
        )
    })
}

/// Decoupling width of a configuration: the largest d_CH over the
/// `2^{N−1} − 1` nontrivial bipartitions of the particles.
pub fn decoupling_width(x: &Configuration) -> Result<i64, GeometryError> {
    if x.n() < 2 {
        return Err(GeometryError::NeedsTwoParticles { n: x.n() });
    }
    let mut best = 0;
    for (j, jc) in nontrivial_bipartitions(x.n()) {
        let left: Vec<LatticePoint> = j.iter().map(|i| x.particle(i).clone()).collect();
        let right: Vec<LatticePoint> = jc.iter().map(|i| x.particle(i).clone()).collect();
        best = best.max(canonical_envelope(&left)?.gap(&canonical_envelope(&right)?));
    }
    Ok(best)
}

/// Decoupling width of a cube: same maximization, but between the unions
/// of one-particle cubes `∪_{i∈J} C_L(u_i)` and `∪_{j∈J^c} C_L(u_j)`.
pub fn decoupling_width_cube(cube: &MultiCube) -> Result<i64, GeometryError> {
    let n = cube.center().n();
    if n < 2 {
        return Err(GeometryError::NeedsTwoParticles { n });
    }
    let mut best = 0;
    for (j, jc) in nontrivial_bipartitions(n) {
        let left = cube.projection(&j)?;
        let right = cube.projection(&jc)?;
        best = best.max(left.envelope()?.gap(&right.envelope()?));
    }
    Ok(best)
}
