//! Disagreement-weight schemes for weighted kappa.
//!
//! A scheme stores disagreement weights d_ij with zero diagonal, symmetry,
//! and maximum 1; agreement weights are v_ij = 1 - d_ij. Three schemes are
//! built in: 0/1 (unweighted), linear |i-j|/(k-1), and the VQR ladder
//! (0, 0.5, 0.8, 1) by class distance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WEIGHT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightScheme {
    name: String,
    k: usize,
    d: Vec<f64>,
}

impl WeightScheme {
    /// 0/1 disagreement: plain (unweighted) Cohen's kappa.
    pub fn unweighted(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidCategoryCount(k));
        }
        let d = (0..k * k)
            .map(|c| if c / k == c % k { 0.0 } else { 1.0 })
            .collect();
        Ok(Self {
            name: "unweighted".into(),
            k,
            d,
        })
    }

    /// Linear disagreement d_ij = |i-j| / (k-1), exact in thirds for k = 4.
    pub fn linear(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidCategoryCount(k));
        }
        let d = (0..k * k)
            .map(|c| {
                let (i, j) = (c / k, c % k);
                i.abs_diff(j) as f64 / (k - 1) as f64
            })
            .collect();
        Ok(Self {
            name: "linear".into(),
            k,
            d,
        })
    }

    /// Linear weights rounded to two decimals, reproducing the values the
    /// VQR reports print for k = 4: (0, 0.33, 0.67, 1).
    pub fn linear_rounded(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidCategoryCount(k));
        }
        let d = (0..k * k)
            .map(|c| {
                let (i, j) = (c / k, c % k);
                let exact = i.abs_diff(j) as f64 / (k - 1) as f64;
                (exact * 100.0).round() / 100.0
            })
            .collect();
        Ok(Self {
            name: "linear_rounded".into(),
            k,
            d,
        })
    }

    /// The VQR weights over the four merit classes: disagreement 0, 0.5,
    /// 0.8, 1 at class distance 0, 1, 2, 3.
    pub fn vqr() -> Self {
        const BY_DISTANCE: [f64; 4] = [0.0, 0.5, 0.8, 1.0];
        let k = 4usize;
        let d = (0..k * k)
            .map(|c| BY_DISTANCE[(c / k).abs_diff(c % k)])
            .collect();
        Self {
            name: "vqr".into(),
            k,
            d,
        }
    }

    /// Validate and wrap a user-supplied disagreement matrix.
    pub fn from_disagreement(name: impl Into<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let k = rows.len();
        if k < 2 {
            return Err(Error::InvalidCategoryCount(k));
        }
        let mut d = Vec::with_capacity(k * k);
        for row in rows {
            if row.len() != k {
                return Err(Error::InvalidWeights(format!(
                    "expected {k} entries per row, got {}",
                    row.len()
                )));
            }
            d.extend_from_slice(row);
        }
        let mut max = f64::NEG_INFINITY;
        for i in 0..k {
            for j in 0..k {
                let w = d[i * k + j];
                if !w.is_finite() || !(0.0..=1.0 + WEIGHT_TOL).contains(&w) {
                    return Err(Error::InvalidWeights(format!(
                        "weight ({i},{j}) = {w} outside [0, 1]"
                    )));
                }
                if i == j && w != 0.0 {
                    return Err(Error::InvalidWeights(format!(
                        "diagonal weight ({i},{i}) must be 0, got {w}"
                    )));
                }
                if (w - d[j * k + i]).abs() > WEIGHT_TOL {
                    return Err(Error::InvalidWeights(format!(
                        "asymmetric at ({i},{j}): {w} vs {}",
                        d[j * k + i]
                    )));
                }
                max = max.max(w);
            }
        }
        if (max - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidWeights(format!(
                "maximum disagreement weight must be 1, got {max}"
            )));
        }
        Ok(Self {
            name: name.into(),
            k,
            d,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Disagreement weight d_ij.
    pub fn disagreement(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.k + j]
    }

    /// Agreement weight v_ij = 1 - d_ij.
    pub fn agreement(&self, i: usize, j: usize) -> f64 {
        1.0 - self.disagreement(i, j)
    }

    /// Apply the same relabeling to both axes.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.k {
            return Err(Error::DimensionMismatch {
                table_k: self.k,
                weights_k: perm.len(),
            });
        }
        let mut d = vec![0.0; self.k * self.k];
        for i in 0..self.k {
            for j in 0..self.k {
                d[i * self.k + j] = self.disagreement(perm[i], perm[j]);
            }
        }
        Ok(Self {
            name: self.name.clone(),
            k: self.k,
            d,
        })
    }
}
