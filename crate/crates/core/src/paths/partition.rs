use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported refinement level; 2^26 intervals is the memory guard.
pub const MAX_LEVEL: u32 = 26;

/// Strictly increasing finite set of times `0 = t_0 < ... < t_n = T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    times: Arc<[f64]>,
}

impl Partition {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::invalid("a partition needs at least two times"));
        }
        if times[0] != 0.0 {
            return Err(Error::invalid("a partition must start at 0"));
        }
        if !times.iter().all(|t| t.is_finite()) {
            return Err(Error::invalid("partition times must be finite"));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("partition times must be strictly increasing"));
        }
        Ok(Self { times: times.into() })
    }

    /// `n` equal steps on `[0, horizon]`.
    pub fn uniform(horizon: f64, n: usize) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::invalid("horizon must be positive"));
        }
        if n == 0 {
            return Err(Error::invalid("a partition needs at least one interval"));
        }
        // i/n is correctly rounded, so equal rationals give equal times and
        // nested uniform partitions share their points bit for bit.
        let times: Vec<f64> = (0..=n)
            .map(|i| {
                if i == n {
                    horizon
                } else {
                    horizon * (i as f64 / n as f64)
                }
            })
            .collect();
        Self::new(times)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn intervals(&self) -> usize {
        self.times.len() - 1
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest consecutive gap.
    pub fn mesh(&self) -> f64 {
        self.times.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// Consecutive pairs `[u, v]`.
    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times.windows(2).map(|w| (w[0], w[1]))
    }

    /// Position of each of `self`'s times inside `grid`; fails unless every
    /// time is exactly a grid time.
    pub fn indices_in(&self, grid: &Partition) -> Result<Vec<usize>> {
        let g = grid.times();
        let mut out = Vec::with_capacity(self.len());
        let mut j = 0;
        for &t in self.times.iter() {
            while j < g.len() && g[j] < t {
                j += 1;
            }
            if j == g.len() || g[j] != t {
                return Err(Error::PartitionNotOnGrid { time: t });
            }
            out.push(j);
        }
        Ok(out)
    }

    pub fn is_subset_of(&self, grid: &Partition) -> bool {
        self.indices_in(grid).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionKind {
    /// Level `N` has `2^N` equal intervals.
    Dyadic,
    /// Level `N` has `base * 2^(N-1)` equal intervals.
    Uniform { base: usize },
}

/// Nested refining partitions of `[0, T]`, levels `1..=max_level`.
///
/// Levels are built on demand; only the horizon and the rule are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionSequence {
    horizon: f64,
    max_level: u32,
    kind: PartitionKind,
}

impl PartitionSequence {
    pub fn dyadic(horizon: f64, max_level: u32) -> Result<Self> {
        Self::new(horizon, max_level, PartitionKind::Dyadic)
    }

    pub fn uniform(horizon: f64, base: usize, max_level: u32) -> Result<Self> {
        if base == 0 {
            return Err(Error::invalid("uniform base must be at least 1"));
        }
        Self::new(horizon, max_level, PartitionKind::Uniform { base })
    }

    fn new(horizon: f64, max_level: u32, kind: PartitionKind) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::invalid(format!("horizon must be positive, got {horizon}")));
        }
        if !(1..=MAX_LEVEL).contains(&max_level) {
            return Err(Error::invalid(format!(
                "max level must be in 1..={MAX_LEVEL}, got {max_level}"
            )));
        }
        let seq = Self {
            horizon,
            max_level,
            kind,
        };
        if seq.intervals_at(max_level) > 1usize << MAX_LEVEL {
            return Err(Error::invalid("finest level exceeds 2^26 intervals"));
        }
        Ok(seq)
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    pub fn kind(&self) -> PartitionKind {
        self.kind
    }

    pub fn intervals_at(&self, level: u32) -> usize {
        match self.kind {
            PartitionKind::Dyadic => 1usize << level,
            PartitionKind::Uniform { base } => base << (level - 1),
        }
    }

    pub fn level(&self, level: u32) -> Result<Partition> {
        if !(1..=self.max_level).contains(&level) {
            return Err(Error::invalid(format!("level {level} outside 1..={}", self.max_level)));
        }
        Partition::uniform(self.horizon, self.intervals_at(level))
    }

    pub fn finest(&self) -> Partition {
        self.level(self.max_level).expect("max level is valid")
    }

    pub fn mesh(&self, level: u32) -> f64 {
        self.horizon / self.intervals_at(level) as f64
    }

    /// Stride of level `level` inside the finest grid.
    pub fn stride(&self, level: u32) -> usize {
        self.intervals_at(self.max_level) / self.intervals_at(level)
    }
}
