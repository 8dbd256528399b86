//! Index sets and finite sampling prefixes `η_0, …, η_{L−1}` with
//! `η_m ⊆ {m, m+1, …}`.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite set of sequence positions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSet(BTreeSet<usize>);

impl IndexSet {
    pub fn new() -> Self {
        IndexSet(BTreeSet::new())
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.contains(&index)
    }

    pub fn insert(&mut self, index: usize) -> bool {
        self.0.insert(index)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn min(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        IndexSet(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[usize; N]> for IndexSet {
    fn from(value: [usize; N]) -> Self {
        value.into_iter().collect()
    }
}

/// A validated finite prefix of a sampling of ω.
///
/// JSON form: `{"levels": [[0, 1], [1, 2], …]}`; validity is checked when
/// deserializing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSampling")]
pub struct SamplingPrefix {
    levels: Vec<IndexSet>,
}

#[derive(Deserialize)]
struct RawSampling {
    levels: Vec<IndexSet>,
}

impl TryFrom<RawSampling> for SamplingPrefix {
    type Error = Error;

    fn try_from(raw: RawSampling) -> Result<Self> {
        SamplingPrefix::new(raw.levels)
    }
}

impl SamplingPrefix {
    pub fn new(levels: Vec<IndexSet>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::MalformedSampling("a sampling prefix needs at least one level".into()));
        }
        for (level, set) in levels.iter().enumerate() {
            if let Some(index) = set.min().filter(|&i| i < level) {
                return Err(Error::InvalidSampling { level, index });
            }
        }
        Ok(SamplingPrefix { levels })
    }

    pub fn from_levels<I, S>(levels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = usize>,
    {
        Self::new(levels.into_iter().map(|s| s.into_iter().collect()).collect())
    }

    /// `η_m = {m, m+1}` for `m < len`.
    pub fn pairs(len: usize) -> Result<Self> {
        Self::intervals(1, len)
    }

    /// `η_m = {m, …, m+width}` for `m < len`.
    pub fn intervals(width: usize, len: usize) -> Result<Self> {
        Self::from_levels((0..len).map(|m| m..=m + width))
    }

    /// `η_m = {m, centre}` for `m ≤ centre`, then `{m, m+1}` up to `len`.
    /// `len` must be at least `centre + 1`.
    pub fn straddle(centre: usize, len: usize) -> Result<Self> {
        if len <= centre {
            return Err(Error::MalformedSampling(format!(
                "straddle around {centre} needs at least {} levels, got {len}",
                centre + 1
            )));
        }
        Self::from_levels((0..len).map(|m| if m <= centre { vec![m, centre] } else { vec![m, m + 1] }))
    }

    /// A seeded random valid prefix: each `η_m` draws up to `max_size`
    /// indices from `[m, bound)`. Needs `len ≤ bound`.
    pub fn random(len: usize, bound: usize, max_size: usize, seed: u64) -> Result<Self> {
        if len == 0 || len > bound {
            return Err(Error::MalformedSampling(format!(
                "random sampling needs 1 ≤ length ≤ index bound, got length {len}, bound {bound}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::new(Self::random_levels(&mut rng, len, bound, max_size))
    }

    pub(crate) fn random_levels(rng: &mut impl Rng, len: usize, bound: usize, max_size: usize) -> Vec<IndexSet> {
        (0..len)
            .map(|m| {
                let size = rng.random_range(0..=max_size);
                (0..size).map(|_| rng.random_range(m..bound)).collect()
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[IndexSet] {
        &self.levels
    }

    pub fn level(&self, m: usize) -> &IndexSet {
        &self.levels[m]
    }

    /// Largest index referenced anywhere in the prefix.
    pub fn max_index(&self) -> Option<usize> {
        self.levels.iter().filter_map(IndexSet::max).max()
    }

    /// `max η_0`, with an empty `η_0` counting as 0.
    pub fn max_eta0(&self) -> usize {
        IndexSet::max(&self.levels[0]).unwrap_or(0)
    }

    pub fn truncated(&self, len: usize) -> Result<Self> {
        Self::new(self.levels.iter().take(len).cloned().collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sampling serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}
