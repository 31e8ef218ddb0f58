use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::Interval;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("bar {bar} leaves [0,{length}]")]
    OutOfRange { bar: Interval, length: usize },
    #[error("bars alive at {vertex} add up to {found}, but the space has dimension {expected}")]
    Mismatch { vertex: usize, expected: usize, found: usize },
}

/// A multiset of intervals. Iteration is in ⊴ order.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Barcode {
    bars: BTreeMap<Interval, usize>,
}

impl Barcode {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `count` copies of `bar`; a zero count is a no-op.
    pub fn insert(&mut self, bar: Interval, count: usize) {
        if count > 0 {
            *self.bars.entry(bar).or_insert(0) += count;
        }
    }

    pub fn multiplicity(&self, bar: Interval) -> usize {
        self.bars.get(&bar).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Interval, usize)> + '_ {
        self.bars.iter().map(|(&bar, &count)| (bar, count))
    }

    pub fn classes(&self) -> impl Iterator<Item = Interval> + '_ {
        self.bars.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Number of bars counted with multiplicity.
    pub fn total(&self) -> usize {
        self.bars.values().sum()
    }

    /// Σ of multiplicities of bars containing `k`.
    pub fn dimension_at(&self, k: usize) -> usize {
        self.iter().filter(|(bar, _)| bar.contains(k)).map(|(_, d)| d).sum()
    }

    /// Checks that the bars fit in `[0, ℓ]` and account for every dimension.
    pub fn check_census(&self, dims: &[usize]) -> Result<(), CensusError> {
        let length = dims.len().saturating_sub(1);
        if let Some(bar) = self.classes().find(|bar| bar.end() > length) {
            return Err(CensusError::OutOfRange { bar, length });
        }
        for (vertex, &expected) in dims.iter().enumerate() {
            let found = self.dimension_at(vertex);
            if found != expected {
                return Err(CensusError::Mismatch { vertex, expected, found });
            }
        }
        Ok(())
    }
}

impl FromIterator<(Interval, usize)> for Barcode {
    fn from_iter<I: IntoIterator<Item = (Interval, usize)>>(iter: I) -> Self {
        let mut b = Barcode::new();
        for (bar, count) in iter {
            b.insert(bar, count);
        }
        b
    }
}

impl fmt::Debug for Barcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.bars.iter()).finish()
    }
}

/// One `start end multiplicity` line per class.
impl fmt::Display for Barcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (bar, count) in self.iter() {
            writeln!(f, "{} {} {}", bar.start(), bar.end(), count)?;
        }
        Ok(())
    }
}
