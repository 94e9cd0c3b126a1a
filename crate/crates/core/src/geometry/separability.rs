//! Weak-separability certificates for pairs of multi-particle cubes.
//!
//! A certificate is a one-particle box `Q` that cleanly splits both cube
//! families: every one-particle cube of either configuration is fully
//! inside `Q` or misses it entirely, and `Q` holds strictly more cubes of
//! the separable configuration than of the other. Clean splits on *both*
//! sides make the occupancy of `Q` constant over each multi-cube, which
//! is what turns the sample-mean shift into an exact spectral shift.
//!
//! The constructive search clusters the combined supports of the two
//! configurations at radius `L`. Each cluster's grown envelope splits all
//! cubes cleanly by construction; an unbalanced cluster of diameter at
//! most `2NL` is a certificate. A cluster holding more than `N` particles
//! can outgrow the diameter bound, but at most one cluster can do so, and
//! the occupancy counts sum to zero, so whenever any cluster is
//! unbalanced a small unbalanced one exists on one of the two sides.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::boxes::{canonical_envelope, Parallelepiped};
use super::clusters::envelope_closure_groups;
use super::lattice::{Configuration, IndexSet, LatticePoint};
use super::GeometryError;

/// Which cube the certificate separates from which.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// `C_L(x)` is weakly separable from `C_L(y)`: J1 indexes x-particles.
    XFromY,
    /// `C_L(y)` is weakly separable from `C_L(x)`: J1 indexes y-particles.
    YFromX,
}

/// Witness of weak separability at scale `L`.
///
/// With `(s, t)` the separable/other configuration per [`Side`]:
/// * (a) `Π_{J1} C_L(s) ∪ Π_{J2} C_L(t) ⊆ Q`
/// * (b) `Π_{J2^c} C_L(t) ∩ Q = ∅`
/// * (c) `|J1| > |J2|`
/// * (d) `Π_{J1^c} C_L(s) ∩ Q = ∅`
/// * (e) `diam(Q) ≤ 2NL`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparabilityCertificate {
    pub side: Side,
    /// The separating box `Q` in the one-particle space.
    pub q: Parallelepiped,
    /// Particles of the separable configuration whose cubes fill `Q`.
    pub j1: IndexSet,
    /// Particles of the other configuration whose cubes sit inside `Q`.
    pub j2: IndexSet,
    /// Cube radius `L` the certificate was built at.
    pub scale: i64,
}

impl SeparabilityCertificate {
    pub fn n1(&self) -> usize {
        self.j1.len()
    }

    pub fn n2(&self) -> usize {
        self.j2.len()
    }

    /// Occupancy of `Q` over the whole cube around `x`: every point of
    /// `C_L(x)` puts exactly this many particles in `Q`.
    pub fn occupancy_of_x(&self) -> usize {
        match self.side {
            Side::XFromY => self.n1(),
            Side::YFromX => self.n2(),
        }
    }

    /// Occupancy of `Q` over the whole cube around `y`.
    pub fn occupancy_of_y(&self) -> usize {
        match self.side {
            Side::XFromY => self.n2(),
            Side::YFromX => self.n1(),
        }
    }
}

/// Certificate clauses, in the order they are checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateClause {
    /// structural: index ranges, scale, dimensions
    Structure,
    /// (a) J1- and J2-cubes contained in Q
    Containment,
    /// (b) cubes outside J2 miss Q
    Exterior,
    /// (c) |J1| > |J2|
    Majority,
    /// (d) cubes outside J1 miss Q
    ComplementExterior,
    /// (e) diam(Q) ≤ 2NL
    Diameter,
}

impl fmt::Display for CertificateClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CertificateClause::Structure => "structure",
            CertificateClause::Containment => "(a) containment",
            CertificateClause::Exterior => "(b) exterior",
            CertificateClause::Majority => "(c) majority",
            CertificateClause::ComplementExterior => "(d) complement exterior",
            CertificateClause::Diameter => "(e) diameter",
        };
        f.write_str(s)
    }
}

/// First violated clause, with a human-readable account.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateViolation {
    pub clause: CertificateClause,
    pub detail: String,
}

impl fmt::Display for CertificateViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "clause {} violated: {}", self.clause, self.detail)
    }
}

/// Outcome of [`validate_certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateCheck {
    pub violation: Option<CertificateViolation>,
}

impl CertificateCheck {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }

    fn fail(clause: CertificateClause, detail: String) -> Self {
        Self {
            violation: Some(CertificateViolation { clause, detail }),
        }
    }

    fn pass() -> Self {
        Self { violation: None }
    }
}

/// Checks clauses (a)–(e) by exact box arithmetic and reports the first
/// violation. Never samples lattice points.
pub fn validate_certificate(
    cert: &SeparabilityCertificate,
    x: &Configuration,
    y: &Configuration,
    l: i64,
) -> CertificateCheck {
    let n = x.n();
    if y.n() != n || x.dim() != y.dim() || x.dim() != cert.q.dim() {
        return CertificateCheck::fail(
            CertificateClause::Structure,
            "configuration/certificate dimensions disagree".into(),
        );
    }
    if l < 0 || cert.scale != l {
        return CertificateCheck::fail(
            CertificateClause::Structure,
            format!("certificate scale {} does not match L = {}", cert.scale, l),
        );
    }
    if cert.j1.indices().last().is_some_and(|&i| i > n)
        || cert.j2.indices().last().is_some_and(|&i| i > n)
    {
        return CertificateCheck::fail(
            CertificateClause::Structure,
            "index set outside [[1, N]]".into(),
        );
    }

    let (s, t) = match cert.side {
        Side::XFromY => (x, y),
        Side::YFromX => (y, x),
    };

    // (a)
    for j in cert.j1.iter() {
        let cube = Parallelepiped::cube(s.particle(j), l);
        if !cert.q.contains_box(&cube) {
            return CertificateCheck::fail(
                CertificateClause::Containment,
                format!("J1 cube of particle {j} is not contained in Q"),
            );
        }
    }
    for j in cert.j2.iter() {
        let cube = Parallelepiped::cube(t.particle(j), l);
        if !cert.q.contains_box(&cube) {
            return CertificateCheck::fail(
                CertificateClause::Containment,
                format!("J2 cube of particle {j} is not contained in Q"),
            );
        }
    }

    // (b)
    for j in cert.j2.complement(n).iter() {
        let cube = Parallelepiped::cube(t.particle(j), l);
        if cube.intersects(&cert.q) {
            return CertificateCheck::fail(
                CertificateClause::Exterior,
                format!("cube of particle {j} outside J2 meets Q"),
            );
        }
    }

    // (c)
    if cert.n1() <= cert.n2() {
        return CertificateCheck::fail(
            CertificateClause::Majority,
            format!("n1 = {} is not above n2 = {}", cert.n1(), cert.n2()),
        );
    }

    // (d)
    for j in cert.j1.complement(n).iter() {
        let cube = Parallelepiped::cube(s.particle(j), l);
        if cube.intersects(&cert.q) {
            return CertificateCheck::fail(
                CertificateClause::ComplementExterior,
                format!("cube of particle {j} outside J1 meets Q"),
            );
        }
    }

    // (e)
    let bound = 2 * n as i64 * l;
    if cert.q.diameter() > bound {
        return CertificateCheck::fail(
            CertificateClause::Diameter,
            format!("diam(Q) = {} exceeds 2NL = {}", cert.q.diameter(), bound),
        );
    }

    CertificateCheck::pass()
}

struct CombinedCluster {
    q: Parallelepiped,
    x_members: Vec<usize>, // 1-based particle indices of x
    y_members: Vec<usize>, // 1-based particle indices of y
}

/// Clusters the union of the two supports at radius `l` and grows each
/// cluster envelope by `l`. The grown envelopes are pairwise disjoint and
/// every one-particle cube of either configuration lies inside exactly
/// one of them.
fn combined_clusters(x: &Configuration, y: &Configuration, l: i64) -> Vec<CombinedCluster> {
    let n = x.n();
    let mut points: Vec<LatticePoint> = Vec::with_capacity(2 * n);
    points.extend(x.particles().iter().cloned());
    points.extend(y.particles().iter().cloned());

    envelope_closure_groups(&points, l)
        .into_iter()
        .map(|(members, _)| {
            let pts: Vec<LatticePoint> = members.iter().map(|&i| points[i].clone()).collect();
            let q = canonical_envelope(&pts).expect("cluster is nonempty").expanded(l);
            let x_members = members.iter().filter(|&&i| i < n).map(|&i| i + 1).collect();
            let y_members = members
                .iter()
                .filter(|&&i| i >= n)
                .map(|&i| i - n + 1)
                .collect();
            CombinedCluster { q, x_members, y_members }
        })
        .collect()
}

fn certificate_from_cluster(
    cluster: &CombinedCluster,
    side: Side,
    n: usize,
    l: i64,
) -> SeparabilityCertificate {
    let (j1_members, j2_members) = match side {
        Side::XFromY => (&cluster.x_members, &cluster.y_members),
        Side::YFromX => (&cluster.y_members, &cluster.x_members),
    };
    SeparabilityCertificate {
        side,
        q: cluster.q.clone(),
        j1: IndexSet::new(j1_members.clone(), n).expect("members in range"),
        j2: IndexSet::new(j2_members.clone(), n).expect("members in range"),
        scale: l,
    }
}

/// Exhaustive backstop: every valid separating box can be shrunk to the
/// envelope of the cubes it contains without breaking any clause, so it
/// suffices to scan envelopes of subsets of the 2N one-particle cubes.
/// With N ≤ 8 that is at most 2^16 candidates; in practice this path runs
/// only when the cluster construction finds nothing.
fn exhaustive_certificate(
    x: &Configuration,
    y: &Configuration,
    l: i64,
    side: Side,
) -> Option<SeparabilityCertificate> {
    let n = x.n();
    let (s, t) = match side {
        Side::XFromY => (x, y),
        Side::YFromX => (y, x),
    };
    let s_cubes: Vec<Parallelepiped> = (1..=n)
        .map(|j| Parallelepiped::cube(s.particle(j), l))
        .collect();
    let t_cubes: Vec<Parallelepiped> = (1..=n)
        .map(|j| Parallelepiped::cube(t.particle(j), l))
        .collect();
    let diameter_bound = 2 * n as i64 * l;

    for mask in 1u32..(1 << (2 * n)) {
        let mut q: Option<Parallelepiped> = None;
        for (i, cube) in s_cubes.iter().chain(t_cubes.iter()).enumerate() {
            if mask & (1 << i) != 0 {
                q = Some(match q {
                    None => cube.clone(),
                    Some(acc) => acc.hull(cube),
                });
            }
        }
        let q = q.expect("mask is nonzero");
        if q.diameter() > diameter_bound {
            continue;
        }
        // maximal clean splits
        let mut j1 = Vec::new();
        let mut clean = true;
        for (j, cube) in s_cubes.iter().enumerate() {
            if q.contains_box(cube) {
                j1.push(j + 1);
            } else if cube.intersects(&q) {
                clean = false;
                break;
            }
        }
        if !clean {
            continue;
        }
        let mut j2 = Vec::new();
        for (j, cube) in t_cubes.iter().enumerate() {
            if q.contains_box(cube) {
                j2.push(j + 1);
            } else if cube.intersects(&q) {
                clean = false;
                break;
            }
        }
        if !clean || j1.len() <= j2.len() {
            continue;
        }
        return Some(SeparabilityCertificate {
            side,
            q,
            j1: IndexSet::new(j1, n).expect("in range"),
            j2: IndexSet::new(j2, n).expect("in range"),
            scale: l,
        });
    }
    None
}

/// Searches for a weak-separability certificate at scale `l`, trying
/// `C_L(x)` separable from `C_L(y)` first and the swapped orientation
/// second. Guaranteed to succeed when `d_S(x, y) > 2(N+1)L`.
///
/// Deterministic: clusters are scanned sorted by least member, and the
/// first qualifying one wins.
pub fn weak_separability(
    x: &Configuration,
    y: &Configuration,
    l: i64,
) -> Result<Option<SeparabilityCertificate>, GeometryError> {
    if x.n() != y.n() {
        return Err(GeometryError::ParticleCountMismatch {
            left: x.n(),
            right: y.n(),
        });
    }
    if x.dim() != y.dim() {
        return Err(GeometryError::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    if l < 0 {
        return Err(GeometryError::InvalidRadius { radius: l });
    }

    let n = x.n();
    let diameter_bound = 2 * n as i64 * l;
    let clusters = combined_clusters(x, y, l);

    for side in [Side::XFromY, Side::YFromX] {
        for cluster in &clusters {
            let (mine, theirs) = match side {
                Side::XFromY => (cluster.x_members.len(), cluster.y_members.len()),
                Side::YFromX => (cluster.y_members.len(), cluster.x_members.len()),
            };
            if mine > theirs && cluster.q.diameter() <= diameter_bound {
                return Ok(Some(certificate_from_cluster(cluster, side, n, l)));
            }
        }
    }

    // Rarely reached: all eligible clusters balanced. Fall back to the
    // exhaustive envelope scan before giving up.
    for side in [Side::XFromY, Side::YFromX] {
        if let Some(cert) = exhaustive_certificate(x, y, l, side) {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// Occupancy profile of the separating boxes built from the 2L-clusters
/// of `x` alone: for each cluster, the envelope of its L-cubes together
/// with the number of x- and y-particles it contains (with multiplicity).
///
/// The boxes are pairwise disjoint and jointly hold every x-particle, so
/// the counts obey `Σ_i (n_i(x) − n_i(y)) = N − Σ_i n_i(y) ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccupancyEntry {
    pub region: Parallelepiped,
    pub count_x: usize,
    pub count_y: usize,
}

pub fn occupancy_numbers(
    x: &Configuration,
    y: &Configuration,
    l: i64,
) -> Result<Vec<OccupancyEntry>, GeometryError> {
    if x.n() != y.n() {
        return Err(GeometryError::ParticleCountMismatch {
            left: x.n(),
            right: y.n(),
        });
    }
    if x.dim() != y.dim() {
        return Err(GeometryError::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    if l < 0 {
        return Err(GeometryError::InvalidRadius { radius: l });
    }
    let groups = envelope_closure_groups(x.particles(), 2 * l);
    Ok(groups
        .into_iter()
        .map(|(members, _)| {
            let pts: Vec<LatticePoint> = members
                .iter()
                .map(|&i| x.particles()[i].clone())
                .collect();
            let region = canonical_envelope(&pts).expect("nonempty").expanded(l);
            let count_x = x.particles().iter().filter(|p| region.contains(p)).count();
            let count_y = y.particles().iter().filter(|p| region.contains(p)).count();
            OccupancyEntry { region, count_x, count_y }
        })
        .collect())
}
