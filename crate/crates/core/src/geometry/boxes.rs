//! Axis-aligned lattice boxes: canonical envelopes, box-to-box gaps,
//! separating layers, and unions of one-particle cubes.
//!
//! Box arithmetic is the workhorse of the cluster and separability code:
//! membership, intersection, and gap queries all run per axis in O(d),
//! independent of the cube radius.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::lattice::{Configuration, IndexSet, LatticePoint};
use super::GeometryError;

/// Axis-aligned box `[lo_1, hi_1] × … × [lo_d, hi_d]` in `Z^d`, inclusive
/// bounds. Never empty: `lo_i ≤ hi_i` on every axis.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Parallelepiped {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl Parallelepiped {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self, GeometryError> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(GeometryError::ZeroDimension);
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(GeometryError::EmptyBox);
        }
        Ok(Self { lo, hi })
    }

    /// Cube of the given radius around a single lattice point.
    pub fn cube(center: &LatticePoint, radius: i64) -> Self {
        debug_assert!(radius >= 0);
        Self {
            lo: center.coords().iter().map(|c| c - radius).collect(),
            hi: center.coords().iter().map(|c| c + radius).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    /// Max-norm diameter: `max_i (hi_i − lo_i)`.
    pub fn diameter(&self) -> i64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| h - l)
            .max()
            .expect("d >= 1")
    }

    /// Number of lattice points, `Π_i (hi_i − lo_i + 1)`.
    pub fn cardinality(&self) -> u128 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| (h - l + 1) as u128)
            .product()
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        p.dim() == self.dim()
            && p.coords()
                .iter()
                .enumerate()
                .all(|(i, &c)| self.lo[i] <= c && c <= self.hi[i])
    }

    pub fn contains_box(&self, other: &Self) -> bool {
        self.dim() == other.dim()
            && (0..self.dim()).all(|i| self.lo[i] <= other.lo[i] && other.hi[i] <= self.hi[i])
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.gap(other) == 0
    }

    /// Max-norm distance between the two boxes as point sets: the largest
    /// per-axis gap, zero when they intersect. Coordinates decouple under
    /// the max-norm, so this is exact.
    pub fn gap(&self, other: &Self) -> i64 {
        debug_assert_eq!(self.dim(), other.dim());
        (0..self.dim())
            .map(|i| {
                let g1 = other.lo[i] - self.hi[i];
                let g2 = self.lo[i] - other.hi[i];
                g1.max(g2).max(0)
            })
            .max()
            .expect("d >= 1")
    }

    /// Smallest box containing both.
    pub fn hull(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| *a.min(b)).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| *a.max(b)).collect(),
        }
    }

    /// Box grown by `r` on every side.
    pub fn expanded(&self, r: i64) -> Self {
        Self {
            lo: self.lo.iter().map(|c| c - r).collect(),
            hi: self.hi.iter().map(|c| c + r).collect(),
        }
    }

    /// All lattice points of the box in lexicographic order.
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        let d = self.dim();
        let mut out = Vec::new();
        let mut cur: Vec<i64> = self.lo.clone();
        loop {
            out.push(LatticePoint::new(cur.clone()).expect("d >= 1"));
            // odometer increment, last axis fastest
            let mut axis = d;
            loop {
                if axis == 0 {
                    return out;
                }
                axis -= 1;
                if cur[axis] < self.hi[axis] {
                    cur[axis] += 1;
                    for (k, c) in cur.iter_mut().enumerate().skip(axis + 1) {
                        *c = self.lo[k];
                    }
                    break;
                }
            }
        }
    }
}

/// Canonical envelope `Q(X)`: the smallest axis-aligned box containing `X`.
pub fn canonical_envelope(points: &[LatticePoint]) -> Result<Parallelepiped, GeometryError> {
    let first = points.first().ok_or(GeometryError::EmptyPointSet)?;
    let d = first.dim();
    let mut lo = first.coords().to_vec();
    let mut hi = lo.clone();
    for p in &points[1..] {
        if p.dim() != d {
            return Err(GeometryError::DimensionMismatch {
                left: d,
                right: p.dim(),
            });
        }
        for (i, &c) in p.coords().iter().enumerate() {
            lo[i] = lo[i].min(c);
            hi[i] = hi[i].max(c);
        }
    }
    Parallelepiped::new(lo, hi)
}

/// `d_CH(X, Y) = ρ(Q(X), Q(Y))`: the gap between canonical envelopes.
/// Zero for interleaved sets even when they are disjoint.
pub fn dch_distance(x: &[LatticePoint], y: &[LatticePoint]) -> Result<i64, GeometryError> {
    let qx = canonical_envelope(x)?;
    let qy = canonical_envelope(y)?;
    if qx.dim() != qy.dim() {
        return Err(GeometryError::DimensionMismatch {
            left: qx.dim(),
            right: qy.dim(),
        });
    }
    Ok(qx.gap(&qy))
}

/// A coordinate-axis slab of width `width` with `X` on one side and `Y` on
/// the other: every point of `X` has `coord(axis) ≤ lo` and every point of
/// `Y` has `coord(axis) ≥ lo + width` (or with the roles swapped).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatingLayer {
    pub axis: usize,
    pub lo: i64,
    pub hi: i64,
    /// true when X is on the low side of the slab
    pub x_below: bool,
}

/// Searches for a width-`R` separating layer between `X` and `Y`, axis by
/// axis. Returns one exactly when `d_CH(X, Y) ≥ R`.
pub fn separating_layer(
    x: &[LatticePoint],
    y: &[LatticePoint],
    width: i64,
) -> Result<Option<SeparatingLayer>, GeometryError> {
    if width < 1 {
        return Err(GeometryError::InvalidRadius { radius: width });
    }
    let qx = canonical_envelope(x)?;
    let qy = canonical_envelope(y)?;
    if qx.dim() != qy.dim() {
        return Err(GeometryError::DimensionMismatch {
            left: qx.dim(),
            right: qy.dim(),
        });
    }
    for axis in 0..qx.dim() {
        if qy.lo()[axis] - qx.hi()[axis] >= width {
            return Ok(Some(SeparatingLayer {
                axis,
                lo: qx.hi()[axis],
                hi: qx.hi()[axis] + width,
                x_below: true,
            }));
        }
        if qx.lo()[axis] - qy.hi()[axis] >= width {
            return Ok(Some(SeparatingLayer {
                axis,
                lo: qy.hi()[axis],
                hi: qy.hi()[axis] + width,
                x_below: false,
            }));
        }
    }
    Ok(None)
}

/// A finite union of axis-aligned boxes, kept as the box list. Membership
/// and gap queries cost O(#boxes), independent of the cube radius.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxUnion {
    boxes: Vec<Parallelepiped>,
}

impl BoxUnion {
    pub fn new(boxes: Vec<Parallelepiped>) -> Self {
        Self { boxes }
    }

    pub fn empty() -> Self {
        Self { boxes: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn boxes(&self) -> &[Parallelepiped] {
        &self.boxes
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.boxes.iter().any(|b| b.contains(p))
    }

    pub fn intersects_box(&self, q: &Parallelepiped) -> bool {
        self.boxes.iter().any(|b| b.intersects(q))
    }

    pub fn contained_in(&self, q: &Parallelepiped) -> bool {
        self.boxes.iter().all(|b| q.contains_box(b))
    }

    pub fn envelope(&self) -> Result<Parallelepiped, GeometryError> {
        let mut iter = self.boxes.iter();
        let first = iter.next().ok_or(GeometryError::EmptyPointSet)?.clone();
        Ok(iter.fold(first, |acc, b| acc.hull(b)))
    }

    /// ρ between the two unions: min over box pairs of box gaps.
    pub fn gap(&self, other: &Self) -> Result<i64, GeometryError> {
        if self.is_empty() || other.is_empty() {
            return Err(GeometryError::EmptyPointSet);
        }
        let mut best = i64::MAX;
        for a in &self.boxes {
            for b in &other.boxes {
                best = best.min(a.gap(b));
            }
        }
        Ok(best)
    }

    /// All lattice points of the union, deduplicated.
    pub fn lattice_points(&self) -> BTreeSet<LatticePoint> {
        let mut out = BTreeSet::new();
        for b in &self.boxes {
            out.extend(b.lattice_points());
        }
        out
    }
}

/// The N-particle cube `C_L(u) = {x ∈ Z^{Nd} : |x − u|_∞ ≤ L}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiCube {
    center: Configuration,
    radius: i64,
}

impl MultiCube {
    pub fn new(center: Configuration, radius: i64) -> Result<Self, GeometryError> {
        if radius < 0 {
            return Err(GeometryError::InvalidRadius { radius });
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> &Configuration {
        &self.center
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    /// Cardinality `(2L+1)^{Nd}`.
    pub fn cardinality(&self) -> u128 {
        let side = (2 * self.radius + 1) as u128;
        let exp = (self.center.n() * self.center.dim()) as u32;
        side.pow(exp)
    }

    /// The one-particle cube `C_L(u_j)` of the j-th particle (1-based).
    pub fn particle_cube(&self, j: usize) -> Parallelepiped {
        Parallelepiped::cube(self.center.particle(j), self.radius)
    }

    /// `Π_J C_L(u) = ∪_{j∈J} C_L(u_j)` as an explicit union of
    /// one-particle boxes. Empty union for `J = ∅`.
    pub fn projection(&self, j: &IndexSet) -> Result<BoxUnion, GeometryError> {
        if let Some(&max) = j.indices().last() {
            if max > self.center.n() {
                return Err(GeometryError::IndexOutOfRange { n: self.center.n() });
            }
        }
        Ok(BoxUnion::new(
            j.iter().map(|i| self.particle_cube(i)).collect(),
        ))
    }

    /// Full support `Π C_L(u)` as a box union.
    pub fn support(&self) -> BoxUnion {
        self.projection(&IndexSet::full(self.center.n()))
            .expect("full index set is in range")
    }

    pub fn contains(&self, x: &Configuration) -> bool {
        x.n() == self.center.n()
            && x.dim() == self.center.dim()
            && x.particles()
                .iter()
                .zip(self.center.particles())
                .all(|(a, b)| a.max_norm_distance(b).expect("same dim") <= self.radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts1(coords: &[i64]) -> Vec<LatticePoint> {
        coords.iter().map(|&c| LatticePoint::from(c)).collect()
    }

    fn pts2(coords: &[(i64, i64)]) -> Vec<LatticePoint> {
        coords.iter().map(|&c| LatticePoint::from(c)).collect()
    }

    #[test]
    fn envelope_basics() {
        let q = canonical_envelope(&pts2(&[(0, 0), (3, 1)])).unwrap();
        assert_eq!(q.lo(), &[0, 0]);
        assert_eq!(q.hi(), &[3, 1]);
        assert_eq!(q.diameter(), 3);

        let single = canonical_envelope(&pts1(&[7])).unwrap();
        assert_eq!(single.diameter(), 0);

        assert!(canonical_envelope(&[]).is_err());
    }

    #[test]
    fn envelope_idempotent() {
        let q = canonical_envelope(&pts2(&[(0, 5), (4, -1), (2, 2)])).unwrap();
        let again = canonical_envelope(&q.lattice_points()).unwrap();
        assert_eq!(q, again);
    }

    #[test]
    fn dch_frozen_examples() {
        // box gap [0,2] vs [10,10]
        assert_eq!(dch_distance(&pts1(&[0, 2]), &pts1(&[10])).unwrap(), 8);
        // Y inside envelope of X although the sets are disjoint
        assert_eq!(dch_distance(&pts1(&[0, 10]), &pts1(&[5])).unwrap(), 0);
    }

    #[test]
    fn dch_below_rho() {
        let x = pts2(&[(0, 0), (6, 0)]);
        let y = pts2(&[(3, 4), (9, 9)]);
        let rho = crate::geometry::rho_distance(&x, &y).unwrap();
        assert!(dch_distance(&x, &y).unwrap() <= rho);
    }

    #[test]
    fn separating_layer_frozen() {
        let x = pts1(&[0]);
        let y = pts1(&[5]);
        let layer = separating_layer(&x, &y, 5).unwrap().unwrap();
        assert_eq!(layer.axis, 0);
        assert_eq!((layer.lo, layer.hi), (0, 5));
        assert!(layer.x_below);
        assert!(separating_layer(&x, &y, 6).unwrap().is_none());
        assert!(separating_layer(&x, &y, 0).is_err());
    }

    #[test]
    fn lattice_points_lexicographic() {
        let q = Parallelepiped::new(vec![0, 0], vec![1, 2]).unwrap();
        let pts = q.lattice_points();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], (0, 0).into());
        assert_eq!(pts[1], (0, 1).into());
        assert_eq!(pts[5], (1, 2).into());
        assert_eq!(q.cardinality(), 6);
    }

    #[test]
    fn cube_projection_cases() {
        let u = Configuration::new(pts1(&[0, 4])).unwrap();
        let cube = MultiCube::new(u.clone(), 0).unwrap();
        // L = 0 reduces to the center's projections
        let j = IndexSet::full(2);
        let proj = cube.projection(&j).unwrap();
        let pts = proj.lattice_points();
        assert_eq!(pts, crate::geometry::projections(&u, &j).unwrap());

        // single particle at L = 2: box [u_j − 2, u_j + 2]
        let cube2 = MultiCube::new(u, 2).unwrap();
        let one = cube2.projection(&IndexSet::new(vec![2], 2).unwrap()).unwrap();
        assert_eq!(one.boxes().len(), 1);
        assert_eq!(one.boxes()[0].lo(), &[2]);
        assert_eq!(one.boxes()[0].hi(), &[6]);

        // empty J gives the empty-union sentinel
        assert!(cube2.projection(&IndexSet::empty()).unwrap().is_empty());
    }

    #[test]
    fn cube_projection_membership_matches_enumeration() {
        // brute-force point enumeration oracle on a small 2d instance
        let u = Configuration::new(pts2(&[(0, 0), (3, 2)])).unwrap();
        let cube = MultiCube::new(u, 1).unwrap();
        let j = IndexSet::full(2);
        let union = cube.projection(&j).unwrap();

        let mut expected = BTreeSet::new();
        for particle in cube.center().particles() {
            for dx in -1..=1 {
                for dy in -1..=1 {
                    expected.insert(LatticePoint::from((
                        particle.coord(0) + dx,
                        particle.coord(1) + dy,
                    )));
                }
            }
        }
        assert_eq!(union.lattice_points(), expected);
        for x in -3..=6i64 {
            for y in -3..=5i64 {
                let p = LatticePoint::from((x, y));
                assert_eq!(union.contains(&p), expected.contains(&p));
            }
        }
    }

    #[test]
    fn multicube_cardinality() {
        let u = Configuration::new(pts1(&[0, 0])).unwrap();
        let cube = MultiCube::new(u, 1).unwrap();
        assert_eq!(cube.cardinality(), 9);
    }
}
