//! Ordered rating categories.
//!
//! The VQR exercise graded research outputs on a four-step merit ladder
//! (A "Excellent" 1.0, B "Good" 0.8, C "Acceptable" 0.5, D "Limited" 0.0).
//! `CategorySet` generalizes that ladder to any k >= 2 ordered categories.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One rung of the merit ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeritClass {
    /// 0-based ordinal position, 0 = best.
    pub index: usize,
    pub label: String,
    /// Unitless score attached to the class (strictly decreasing with index).
    pub score: f64,
}

/// An ordered set of k >= 2 merit classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategorySet {
    classes: Vec<MeritClass>,
}

impl CategorySet {
    pub fn new(classes: Vec<MeritClass>) -> Result<Self> {
        if classes.len() < 2 {
            return Err(Error::InvalidCategoryCount(classes.len()));
        }
        for (i, c) in classes.iter().enumerate() {
            if c.index != i {
                return Err(Error::InvalidCategorySet(format!(
                    "class '{}' has index {}, expected {}",
                    c.label, c.index, i
                )));
            }
        }
        for w in classes.windows(2) {
            if w[1].score >= w[0].score {
                return Err(Error::InvalidCategorySet(format!(
                    "scores must strictly decrease: '{}' ({}) >= '{}' ({})",
                    w[1].label, w[1].score, w[0].label, w[0].score
                )));
            }
        }
        let mut labels: Vec<&str> = classes.iter().map(|c| c.label.as_str()).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCategorySet("duplicate labels".into()));
        }
        Ok(Self { classes })
    }

    /// The VQR merit ladder: A/B/C/D scored 1.0/0.8/0.5/0.0.
    pub fn vqr_default() -> Self {
        let classes = [("A", 1.0), ("B", 0.8), ("C", 0.5), ("D", 0.0)]
            .iter()
            .enumerate()
            .map(|(index, &(label, score))| MeritClass {
                index,
                label: label.to_string(),
                score,
            })
            .collect();
        Self::new(classes).expect("built-in ladder is valid")
    }

    /// Build a ladder from bare labels, assigning evenly spaced descending
    /// scores from 1.0 down to 0.0.
    pub fn from_labels(labels: &[&str]) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::InvalidCategoryCount(labels.len()));
        }
        let k = labels.len();
        let classes = labels
            .iter()
            .enumerate()
            .map(|(index, &label)| MeritClass {
                index,
                label: label.to_string(),
                score: 1.0 - index as f64 / (k - 1) as f64,
            })
            .collect();
        Self::new(classes)
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[MeritClass] {
        &self.classes
    }

    pub fn class(&self, index: usize) -> Option<&MeritClass> {
        self.classes.get(index)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }
}

/// One unit rated by the two raters (A = bibliometrics, B = informed review).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatingPair {
    pub unit_id: String,
    pub rating_a: usize,
    pub rating_b: usize,
}

impl RatingPair {
    pub fn new(unit_id: impl Into<String>, rating_a: usize, rating_b: usize) -> Self {
        Self {
            unit_id: unit_id.into(),
            rating_a,
            rating_b,
        }
    }
}
