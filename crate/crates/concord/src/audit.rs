//! Consensus-group audit arithmetic.
//!
//! Starting from four published per-class distributions (bibliometric
//! grades, informed-review grades, concordant referee pairs, and
//! biblio/review agreements) the audit derives how many articles must have
//! been scored by the panel's consensus groups rather than by concordant
//! referees. The derivation rests on stated assumptions that make every
//! derived row a lower bound; those assumptions travel with the output.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CLASS_LABELS: [&str; 4] = ["A", "B", "C", "D"];

/// Modeling assumptions attached to every audit table.
pub const AUDIT_ASSUMPTIONS: [&str; 3] = [
    "H1: no article was graded D outright by both panel members (such articles would have skipped external review), so all units are treated as refereed",
    "H2: consensus groups never overturned a concordant referee judgment, so row 5 is a lower bound on panel-decided articles",
    "H3: every concordant referee judgment coincided with the bibliometric class, so row 7 is a lower bound on panel decisions that matched bibliometrics",
];

/// Non-negative article counts per merit class A-D.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub counts: [u64; 4],
}

impl ClassCounts {
    pub fn new(counts: [u64; 4]) -> Self {
        Self { counts }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// The seven-row audit table (four merit classes plus totals).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditTable {
    /// Row 1: articles per class under bibliometric evaluation.
    pub biblio: ClassCounts,
    /// Row 2: articles per class under informed peer review.
    pub ir: ClassCounts,
    /// Row 3: articles whose two referees agreed.
    pub concordant_peers: ClassCounts,
    /// Row 4: articles where bibliometrics and informed review agreed.
    pub concordant_biblio_ir: ClassCounts,
    /// Row 5 = row 2 - row 3: articles necessarily decided by consensus groups.
    pub gev_evaluated: ClassCounts,
    /// Row 6 = row 5 / row 2 per class; None where row 2 is zero.
    pub gev_share: [Option<f64>; 4],
    /// Row 6 total = row 5 total / row 2 total.
    pub gev_share_total: f64,
    /// Row 7 = row 4 - row 3 per class (signed; a negative entry means
    /// concordant referees outnumbered biblio/review agreements).
    pub gev_concordant_with_biblio: [i64; 4],
    /// Row 7 total: sum of the positive class entries only, since a
    /// negative class cannot contribute to the lower bound.
    pub gev_concordant_total: u64,
    /// The assumptions under which rows 5-7 are lower bounds.
    pub assumptions: Vec<String>,
}

/// Derive rows 5-7 from the four input rows.
pub fn consensus_estimate(
    biblio: ClassCounts,
    ir: ClassCounts,
    concordant_peers: ClassCounts,
    concordant_biblio_ir: ClassCounts,
) -> Result<AuditTable> {
    if biblio.total() != ir.total() {
        return Err(Error::InvalidCounts(format!(
            "bibliometric total {} != informed-review total {}",
            biblio.total(),
            ir.total()
        )));
    }
    for c in 0..4 {
        if concordant_peers.counts[c] > ir.counts[c] {
            return Err(Error::InvalidCounts(format!(
                "class {}: concordant referee count {} exceeds informed-review count {}",
                CLASS_LABELS[c], concordant_peers.counts[c], ir.counts[c]
            )));
        }
    }
    let mut gev = [0u64; 4];
    let mut share = [None; 4];
    let mut row7 = [0i64; 4];
    let mut row7_total = 0u64;
    for c in 0..4 {
        gev[c] = ir.counts[c] - concordant_peers.counts[c];
        if ir.counts[c] > 0 {
            share[c] = Some(gev[c] as f64 / ir.counts[c] as f64);
        }
        row7[c] = concordant_biblio_ir.counts[c] as i64 - concordant_peers.counts[c] as i64;
        if row7[c] > 0 {
            row7_total += row7[c] as u64;
        }
    }
    let gev_evaluated = ClassCounts::new(gev);
    let gev_share_total = gev_evaluated.total() as f64 / ir.total() as f64;
    Ok(AuditTable {
        biblio,
        ir,
        concordant_peers,
        concordant_biblio_ir,
        gev_evaluated,
        gev_share: share,
        gev_share_total,
        gev_concordant_with_biblio: row7,
        gev_concordant_total: row7_total,
        assumptions: AUDIT_ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
    })
}

/// Exact concordance fraction with its 1-decimal percent rendering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcordanceRate {
    pub concordant: u64,
    pub total: u64,
    pub value: f64,
}

impl ConcordanceRate {
    /// Percentage rounded to one decimal, e.g. 44.3 for 117/264.
    pub fn percent_1dp(&self) -> f64 {
        (self.value * 1000.0).round() / 10.0
    }
}

pub fn concordance_rate(concordant: u64, total: u64) -> Result<ConcordanceRate> {
    if total == 0 {
        return Err(Error::InvalidCounts("zero total".into()));
    }
    if concordant > total {
        return Err(Error::InvalidCounts(format!(
            "concordant {concordant} exceeds total {total}"
        )));
    }
    Ok(ConcordanceRate {
        concordant,
        total,
        value: concordant as f64 / total as f64,
    })
}
