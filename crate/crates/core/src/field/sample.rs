//! Deterministic field realizations and the sample-mean split.
//!
//! Seeding is counter-based: the generator key comes from the master seed,
//! the stream from the trial index, and each site reads from a fixed
//! word offset given by its lexicographic rank in the sampled region.
//! Values therefore do not depend on traversal order, thread count, or
//! platform.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{LatticePoint, Parallelepiped};

use super::model::FieldModel;
use super::FieldError;

/// Generator words reserved per site; the widest law (Gaussian) consumes
/// four.
const WORDS_PER_SITE: u128 = 8;

/// One realization of the disorder on a finite region, with its seed
/// provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    values: BTreeMap<LatticePoint, f64>,
    master_seed: u64,
    trial: u64,
}

impl FieldSample {
    /// Wraps externally supplied values (snapshot re-import, constant
    /// fields in tests). The provenance fields are stored as given.
    pub fn from_values(
        values: BTreeMap<LatticePoint, f64>,
        master_seed: u64,
        trial: u64,
    ) -> Self {
        Self {
            values,
            master_seed,
            trial,
        }
    }

    pub fn value(&self, site: &LatticePoint) -> Option<f64> {
        self.values.get(site).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, f64)> {
        self.values.iter().map(|(k, v)| (k, *v))
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn trial(&self) -> u64 {
        self.trial
    }

    /// Covers every lattice point of the box?
    pub fn covers(&self, q: &Parallelepiped) -> bool {
        q.lattice_points().iter().all(|p| self.values.contains_key(p))
    }

    /// Copy with `t` added to the value at every site of `q` present in
    /// the sample.
    pub fn shifted_on(&self, q: &Parallelepiped, t: f64) -> FieldSample {
        let values = self
            .values
            .iter()
            .map(|(site, &v)| {
                let v = if q.contains(site) { v + t } else { v };
                (site.clone(), v)
            })
            .collect();
        FieldSample {
            values,
            master_seed: self.master_seed,
            trial: self.trial,
        }
    }
}

/// Raw per-rank draws for a region of the given size. Split out so bulk
/// estimators can skip the site map.
pub(crate) fn draw_site_values(
    model: &FieldModel,
    site_count: usize,
    master_seed: u64,
    trial: u64,
) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    (0..site_count)
        .map(|rank| {
            rng.set_word_pos(rank as u128 * WORDS_PER_SITE);
            model.draw(&mut rng)
        })
        .collect()
}

/// Draws one IID realization over `region`, deterministically in
/// `(model, region, master_seed, trial)`.
pub fn sample_field<I>(
    model: &FieldModel,
    region: I,
    master_seed: u64,
    trial: u64,
) -> Result<FieldSample, FieldError>
where
    I: IntoIterator<Item = LatticePoint>,
{
    model.validate()?;
    // BTreeSet order on equal-length coordinate vectors is lexicographic
    let sites: std::collections::BTreeSet<LatticePoint> = region.into_iter().collect();
    if sites.is_empty() {
        return Err(FieldError::EmptyRegion);
    }
    if let Some(first) = sites.iter().next() {
        let d = first.dim();
        if sites.iter().any(|p| p.dim() != d) {
            return Err(FieldError::InvalidModel("region mixes dimensions".into()));
        }
    }
    let draws = draw_site_values(model, sites.len(), master_seed, trial);
    let values = sites.into_iter().zip(draws).collect();
    Ok(FieldSample {
        values,
        master_seed,
        trial,
    })
}

/// Sample mean over a box and the zero-sum fluctuations around it.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanFluctuationSplit {
    pub region: Parallelepiped,
    /// Sample mean `ξ_Q`.
    pub xi: f64,
    /// Fluctuations `η_x = V(x) − ξ_Q`, one per site of the box.
    pub eta: BTreeMap<LatticePoint, f64>,
}

/// Splits the field on `q` into its sample mean and fluctuations.
pub fn mean_fluctuation_split(
    sample: &FieldSample,
    q: &Parallelepiped,
) -> Result<MeanFluctuationSplit, FieldError> {
    let sites = q.lattice_points();
    let mut values = Vec::with_capacity(sites.len());
    for site in &sites {
        match sample.value(site) {
            Some(v) => values.push(v),
            None => {
                return Err(FieldError::CoverageGap {
                    site: format!("{site:?}"),
                })
            }
        }
    }
    let xi = values.iter().sum::<f64>() / values.len() as f64;
    let eta = sites
        .into_iter()
        .zip(values)
        .map(|(site, v)| (site, v - xi))
        .collect();
    Ok(MeanFluctuationSplit {
        region: q.clone(),
        xi,
        eta,
    })
}
