//! Lexicographic enumeration of multi-cube lattice points.

use crate::geometry::{Configuration, LatticePoint, MultiCube};

use super::HamiltonianError;

/// Default guard on the basis dimension `(2L+1)^{Nd}`.
pub const DEFAULT_DIM_CAP: usize = 100_000;

/// Ordered basis of `C_L(u)`: the cube's points in lexicographic order of
/// their `Nd` coordinate offsets, with an index ↔ configuration bijection.
#[derive(Clone, Debug)]
pub struct CubeBasis {
    cube: MultiCube,
    center_flat: Vec<i64>,
    side: i64,
    len: usize,
}

impl CubeBasis {
    pub fn new(cube: MultiCube, cap: usize) -> Result<Self, HamiltonianError> {
        let dimension = cube.cardinality();
        if dimension > cap as u128 {
            return Err(HamiltonianError::CapExceeded { dimension, cap });
        }
        let center_flat = cube
            .center()
            .particles()
            .iter()
            .flat_map(|p| p.coords().iter().copied())
            .collect();
        Ok(Self {
            side: 2 * cube.radius() + 1,
            len: dimension as usize,
            center_flat,
            cube,
        })
    }

    pub fn with_default_cap(cube: MultiCube) -> Result<Self, HamiltonianError> {
        Self::new(cube, DEFAULT_DIM_CAP)
    }

    pub fn cube(&self) -> &MultiCube {
        &self.cube
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Flat coordinates (length `Nd`) of the basis point at `index`.
    pub(crate) fn flat_coords(&self, index: usize) -> Vec<i64> {
        debug_assert!(index < self.len);
        let nd = self.center_flat.len();
        let mut out = vec![0i64; nd];
        let mut rest = index;
        for k in (0..nd).rev() {
            let digit = (rest % self.side as usize) as i64;
            rest /= self.side as usize;
            out[k] = self.center_flat[k] - self.cube.radius() + digit;
        }
        out
    }

    /// The configuration at `index`.
    pub fn configuration(&self, index: usize) -> Configuration {
        let d = self.cube.center().dim();
        let flat = self.flat_coords(index);
        let particles = flat
            .chunks_exact(d)
            .map(|c| LatticePoint::new(c.to_vec()).expect("d >= 1"))
            .collect();
        Configuration::new(particles).expect("cube center is valid")
    }

    /// Index of a configuration, `None` if it lies outside the cube.
    pub fn index_of(&self, x: &Configuration) -> Option<usize> {
        if x.n() != self.cube.center().n() || x.dim() != self.cube.center().dim() {
            return None;
        }
        let mut index = 0usize;
        let mut k = 0usize;
        for p in x.particles() {
            for &c in p.coords() {
                let offset = c - self.center_flat[k];
                if offset.abs() > self.cube.radius() {
                    return None;
                }
                index = index * self.side as usize + (offset + self.cube.radius()) as usize;
                k += 1;
            }
        }
        Some(index)
    }

    pub fn iter(&self) -> impl Iterator<Item = Configuration> + '_ {
        (0..self.len).map(|i| self.configuration(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube1(coords: &[i64], l: i64) -> MultiCube {
        let cfg = Configuration::new(coords.iter().map(|&c| LatticePoint::from(c)).collect())
            .unwrap();
        MultiCube::new(cfg, l).unwrap()
    }

    #[test]
    fn one_particle_line() {
        let basis = CubeBasis::with_default_cap(cube1(&[0], 1)).unwrap();
        assert_eq!(basis.len(), 3);
        let points: Vec<i64> = (0..3)
            .map(|i| basis.configuration(i).particles()[0].coord(0))
            .collect();
        assert_eq!(points, vec![-1, 0, 1]);
    }

    #[test]
    fn two_particle_count() {
        let basis = CubeBasis::with_default_cap(cube1(&[0, 5], 1)).unwrap();
        assert_eq!(basis.len(), 9);
    }

    #[test]
    fn index_round_trip() {
        use rand::{Rng, SeedableRng};
        let basis = CubeBasis::with_default_cap(cube1(&[0, 7, -4], 2)).unwrap();
        assert_eq!(basis.len(), 125);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let i = rng.gen_range(0..basis.len());
            let cfg = basis.configuration(i);
            assert_eq!(basis.index_of(&cfg), Some(i));
            assert!(basis.cube().contains(&cfg));
        }
        // outside the cube
        let outside = Configuration::new(vec![
            LatticePoint::from(10),
            LatticePoint::from(7),
            LatticePoint::from(-4),
        ])
        .unwrap();
        assert_eq!(basis.index_of(&outside), None);
    }

    #[test]
    fn cap_guard() {
        let err = CubeBasis::new(cube1(&[0, 0], 2), 10).unwrap_err();
        match err {
            HamiltonianError::CapExceeded { dimension, cap } => {
                assert_eq!(dimension, 25);
                assert_eq!(cap, 10);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }
}
