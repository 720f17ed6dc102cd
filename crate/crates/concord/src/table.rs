//! Contingency tables: k x k cross-classification counts of two raters.

use serde::{Deserialize, Serialize};

use crate::categories::{CategorySet, RatingPair};
use crate::error::{Error, Result};

/// Cross-classification counts; cell (i, j) counts units rated class `i` by
/// rater A and class `j` by rater B.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable {
    k: usize,
    counts: Vec<u64>,
    n: u64,
}

impl ContingencyTable {
    /// Build from a square grid of counts. Requires k >= 2 and n >= 1.
    pub fn from_counts(rows: &[Vec<u64>]) -> Result<Self> {
        let k = rows.len();
        if k < 2 {
            return Err(Error::InvalidCategoryCount(k));
        }
        let mut counts = Vec::with_capacity(k * k);
        for row in rows {
            if row.len() != k {
                return Err(Error::DimensionMismatch {
                    table_k: k,
                    weights_k: row.len(),
                });
            }
            counts.extend_from_slice(row);
        }
        let n: u64 = counts.iter().sum();
        if n == 0 {
            return Err(Error::NoObservations);
        }
        Ok(Self { k, counts, n })
    }

    /// Tally rating pairs over a category ladder.
    pub fn from_pairs(pairs: &[RatingPair], cats: &CategorySet) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::NoObservations);
        }
        let k = cats.k();
        let mut counts = vec![0u64; k * k];
        for p in pairs {
            for &idx in &[p.rating_a, p.rating_b] {
                if idx >= k {
                    return Err(Error::RatingOutOfRange {
                        unit_id: p.unit_id.clone(),
                        index: idx,
                        k,
                    });
                }
            }
            counts[p.rating_a * k + p.rating_b] += 1;
        }
        Ok(Self {
            k,
            counts,
            n: pairs.len() as u64,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.k + j]
    }

    /// Cell proportions p_ij = counts_ij / n.
    pub fn proportion(&self, i: usize, j: usize) -> f64 {
        self.count(i, j) as f64 / self.n as f64
    }

    /// Row marginals p_i. (rater A).
    pub fn row_marginals(&self) -> Vec<f64> {
        (0..self.k)
            .map(|i| (0..self.k).map(|j| self.count(i, j)).sum::<u64>() as f64 / self.n as f64)
            .collect()
    }

    /// Column marginals p_.j (rater B).
    pub fn col_marginals(&self) -> Vec<f64> {
        (0..self.k)
            .map(|j| (0..self.k).map(|i| self.count(i, j)).sum::<u64>() as f64 / self.n as f64)
            .collect()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        (0..self.k)
            .map(|i| (0..self.k).map(|j| self.count(i, j)).sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        (0..self.k)
            .map(|j| (0..self.k).map(|i| self.count(i, j)).sum())
            .collect()
    }

    /// Swap the raters.
    pub fn transposed(&self) -> Self {
        let mut counts = vec![0u64; self.k * self.k];
        for i in 0..self.k {
            for j in 0..self.k {
                counts[j * self.k + i] = self.count(i, j);
            }
        }
        Self {
            k: self.k,
            counts,
            n: self.n,
        }
    }

    /// Relabel categories: row and column `i` of the result hold the counts
    /// of category `perm[i]` of the original.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.k {
            return Err(Error::DimensionMismatch {
                table_k: self.k,
                weights_k: perm.len(),
            });
        }
        let mut counts = vec![0u64; self.k * self.k];
        for i in 0..self.k {
            for j in 0..self.k {
                counts[i * self.k + j] = self.count(perm[i], perm[j]);
            }
        }
        Ok(Self {
            k: self.k,
            counts,
            n: self.n,
        })
    }
}
