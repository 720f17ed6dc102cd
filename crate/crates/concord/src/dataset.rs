//! Embedded reference data from the Italian VQR 2004-2010 dual-evaluation
//! experiment, plus the VQR classification rules.
//!
//! The experiment double-scored a stratified random sample of journal
//! articles (9,199 of 99,005 submitted) with both bibliometrics and
//! informed peer review, and published linear- and VQR-weighted kappas per
//! area and sub-area. Those published statistics, the audit inputs, and the
//! reference outlier-test p-values are embedded here; raw ratings were
//! never released, so the kappas are inputs rather than recomputable
//! outputs.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::categories::{CategorySet, MeritClass};
use crate::error::{Error, Result};
use crate::meta::{AreaGroups, GroupKappa};

/// One published group row: label, optional parent area, sample size, and
/// the kappa under each weighting ("na" rows carry `None`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub label: String,
    pub parent: Option<String>,
    pub m: u64,
    pub kappa_linear: Option<f64>,
    pub kappa_vqr: Option<f64>,
}

impl GroupRecord {
    pub fn available(&self) -> bool {
        self.kappa_linear.is_some() && self.kappa_vqr.is_some()
    }

    pub fn kappa(&self, weighting: Weighting) -> Option<f64> {
        match weighting {
            Weighting::Linear => self.kappa_linear,
            Weighting::Vqr => self.kappa_vqr,
        }
    }

    /// View as a meta-analysis group under one weighting; `None` for
    /// unavailable rows.
    pub fn to_group(&self, weighting: Weighting) -> Option<GroupKappa> {
        self.kappa(weighting).map(|kappa| GroupKappa {
            label: self.label.clone(),
            m: self.m,
            kappa,
            parent: self.parent.clone(),
        })
    }
}

/// Which published kappa column to analyze.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    Linear,
    Vqr,
}

impl Weighting {
    pub fn name(&self) -> &'static str {
        match self {
            Weighting::Linear => "linear",
            Weighting::Vqr => "vqr",
        }
    }
}

impl std::str::FromStr for Weighting {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Weighting::Linear),
            "vqr" => Ok(Weighting::Vqr),
            other => Err(Error::Parse {
                line: 0,
                message: format!("unknown weighting '{other}' (valid: linear, vqr)"),
            }),
        }
    }
}

/// Reference one-sided p-values for the published outlier tests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferencePValue {
    pub label: String,
    pub linear: f64,
    pub vqr: f64,
}

/// Audit inputs: the four published per-class distributions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditInputs {
    pub biblio: [u64; 4],
    pub ir: [u64; 4],
    pub concordant_peers: [u64; 4],
    pub concordant_biblio_ir: [u64; 4],
}

/// A published concordant-D comparison rate with the percent the source
/// reports printed (which does not always equal the quotient).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrintedRate {
    pub concordant: u64,
    pub total: u64,
    pub printed_percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedDataset {
    /// The ten area rows.
    pub areas: Vec<GroupRecord>,
    /// The 43 sub-area rows (one flagged unavailable).
    pub sub_areas: Vec<GroupRecord>,
    /// Whole-sample summary row.
    pub whole_sample: GroupRecord,
    /// Total articles submitted to the exercise (sampling denominator).
    pub total_submitted: u64,
    pub audit_inputs: AuditInputs,
    pub reference_pvalues: Vec<ReferencePValue>,
    /// Concordant-D rate reported for the nine other areas (its printed
    /// percent, 21.1, disagrees with the quotient, 20.5).
    pub other_areas_concordant_d: PrintedRate,
    /// Concordant-D rate reported for the economics/statistics area.
    pub area13_concordant_d: PrintedRate,
    /// Alternative whole-sample VQR-weighted kappa printed in a companion
    /// release of the same experiment.
    pub alternate_whole_sample_vqr: f64,
    /// Alternative economics/statistics VQR-weighted kappa printed in the
    /// general report (the area report's 0.54 is the operative value).
    pub alternate_area13_vqr: f64,
}

pub const AREA13_LABEL: &str = "Area 13 Economics and Statistics";

impl EmbeddedDataset {
    /// Usable groups (available rows) at the area level, under a weighting.
    pub fn area_groups(&self, weighting: Weighting) -> Vec<GroupKappa> {
        self.areas
            .iter()
            .filter_map(|r| r.to_group(weighting))
            .collect()
    }

    /// Usable sub-area groups under a weighting (drops "na" rows).
    pub fn sub_area_groups(&self, weighting: Weighting) -> Vec<GroupKappa> {
        self.sub_areas
            .iter()
            .filter_map(|r| r.to_group(weighting))
            .collect()
    }

    /// Areas paired with their usable sub-areas, for leave-one-out sweeps.
    pub fn area_families(&self, weighting: Weighting) -> Vec<AreaGroups> {
        self.areas
            .iter()
            .filter_map(|area| {
                let area_group = area.to_group(weighting)?;
                let sub_areas = self
                    .sub_areas
                    .iter()
                    .filter(|s| s.parent.as_deref() == Some(area.label.as_str()))
                    .filter_map(|s| s.to_group(weighting))
                    .collect();
                Some(AreaGroups {
                    area: area_group,
                    sub_areas,
                })
            })
            .collect()
    }

    /// All area and sub-area rows in publication order.
    pub fn all_records(&self) -> Vec<GroupRecord> {
        let mut out = Vec::with_capacity(self.areas.len() + self.sub_areas.len());
        for area in &self.areas {
            out.push(area.clone());
            for sub in &self.sub_areas {
                if sub.parent.as_deref() == Some(area.label.as_str()) {
                    out.push(sub.clone());
                }
            }
        }
        out
    }

    /// Fraction of submitted articles covered by the experiment sample.
    pub fn sampling_fraction(&self) -> f64 {
        self.whole_sample.m as f64 / self.total_submitted as f64
    }

    /// Check the embedded table against its own published totals.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::DatasetInvariant(msg));
        if self.areas.len() != 10 {
            return fail(format!("expected 10 areas, got {}", self.areas.len()));
        }
        if self.sub_areas.len() != 43 {
            return fail(format!(
                "expected 43 sub-areas, got {}",
                self.sub_areas.len()
            ));
        }
        let area_m: u64 = self.areas.iter().map(|a| a.m).sum();
        if area_m != self.whole_sample.m {
            return fail(format!(
                "area sample sizes sum to {area_m}, whole sample says {}",
                self.whole_sample.m
            ));
        }
        for area in &self.areas {
            let sub_m: u64 = self
                .sub_areas
                .iter()
                .filter(|s| s.parent.as_deref() == Some(area.label.as_str()))
                .map(|s| s.m)
                .sum();
            if sub_m != area.m {
                return fail(format!(
                    "sub-areas of '{}' sum to {sub_m}, area says {}",
                    area.label, area.m
                ));
            }
        }
        for r in self.areas.iter().chain(self.sub_areas.iter()) {
            if r.m == 0 {
                return fail(format!("'{}' has zero sample size", r.label));
            }
            for kappa in [r.kappa_linear, r.kappa_vqr].into_iter().flatten() {
                if !(-1.0..=1.0).contains(&kappa) {
                    return fail(format!("'{}' kappa {kappa} outside [-1, 1]", r.label));
                }
            }
        }
        let unavailable = self.sub_areas.iter().filter(|s| !s.available()).count();
        if unavailable != 1 {
            return fail(format!("expected 1 unavailable sub-area, got {unavailable}"));
        }
        let audit = &self.audit_inputs;
        let sum = |xs: &[u64; 4]| xs.iter().sum::<u64>();
        if sum(&audit.biblio) != 590 || sum(&audit.ir) != 590 {
            return fail("audit rows 1-2 must each total 590".into());
        }
        if sum(&audit.concordant_peers) != 264 || sum(&audit.concordant_biblio_ir) != 311 {
            return fail("audit rows 3-4 must total 264 and 311".into());
        }
        Ok(())
    }
}

fn area(label: &str, m: u64, linear: f64, vqr: f64) -> GroupRecord {
    GroupRecord {
        label: label.to_string(),
        parent: None,
        m,
        kappa_linear: Some(linear),
        kappa_vqr: Some(vqr),
    }
}

fn sub(label: &str, parent: &str, m: u64, linear: f64, vqr: f64) -> GroupRecord {
    GroupRecord {
        label: label.to_string(),
        parent: Some(parent.to_string()),
        m,
        kappa_linear: Some(linear),
        kappa_vqr: Some(vqr),
    }
}

fn build_embedded() -> EmbeddedDataset {
    let a1 = "Area 1 Mathematics and Informatics";
    let a2 = "Area 2 Physics";
    let a3 = "Area 3 Chemistry";
    let a4 = "Area 4 Earth sciences";
    let a5 = "Area 5 Biology";
    let a6 = "Area 6 Medicine";
    let a7 = "Area 7 Agricultural and Veterinary sciences";
    let a8 = "Area 8 Civil engineering and Architecture";
    let a9 = "Area 9 Industrial and Information Engineering";
    let a13 = AREA13_LABEL;

    let areas = vec![
        area(a1, 631, 0.3176, 0.3173),
        area(a2, 1412, 0.2302, 0.2515),
        area(a3, 927, 0.2246, 0.2296),
        area(a4, 458, 0.2776, 0.2985),
        area(a5, 1310, 0.3287, 0.3453),
        area(a6, 1984, 0.303, 0.3351),
        area(a7, 532, 0.2776, 0.3437),
        area(a8, 225, 0.1994, 0.2261),
        area(a9, 1130, 0.1615, 0.171),
        area(a13, 590, 0.54, 0.54),
    ];

    let sub_areas = vec![
        sub("Informatics", a1, 164, 0.3794, 0.3896),
        sub("Mathematics", a1, 121, 0.3218, 0.3102),
        sub("Analysis and probability", a1, 179, 0.2551, 0.2755),
        sub("Applied Mathematics", a1, 167, 0.2426, 0.2403),
        sub("Experimental Physics", a2, 139, 0.1957, 0.2049),
        sub("Theoretical Physics", a2, 499, 0.2428, 0.2559),
        sub("Physics of matter", a2, 349, 0.1862, 0.2099),
        sub("Nuclear and sub-nuclear physics", a2, 45, 0.0951, 0.1001),
        sub("Astronomy and astrophysics", a2, 270, 0.2708, 0.3048),
        sub("Geophysics", a2, 28, 0.3671, 0.3975),
        sub("Applied physics, teaching and history", a2, 82, 0.2153, 0.2715),
        sub("Analytical chemistry", a3, 276, 0.2261, 0.2192),
        sub("Inorganic and industrial chemistry", a3, 283, 0.2024, 0.2158),
        sub("Organic and pharmaceutical chemistry", a3, 368, 0.2304, 0.2368),
        sub("Geochemistry etc.", a4, 123, 0.287, 0.2996),
        sub("Structural geology", a4, 96, 0.1891, 0.1932),
        sub("Applied geology", a4, 56, 0.2736, 0.3375),
        sub("Geophysics", a4, 183, 0.277, 0.3125),
        sub("Integrated biology", a5, 325, 0.3451, 0.3648),
        sub("Morfo-functional sciences", a5, 216, 0.3629, 0.3775),
        sub("Biochemistry and molecular biology", a5, 410, 0.2998, 0.304),
        sub("Genetics and pharmacology", a5, 359, 0.296, 0.3248),
        sub("Experimental medicine", a6, 347, 0.2407, 0.2602),
        sub("Clinical medicine", a6, 968, 0.2883, 0.3128),
        sub("Surgical sciences", a6, 554, 0.3368, 0.385),
        sub("Public health", a6, 115, 0.2023, 0.2176),
        sub("Agricultural sciences", a7, 387, 0.2741, 0.3354),
        sub("Veterinary", a7, 145, 0.2747, 0.3514),
        sub("Infrastructural engineering", a8, 99, 0.2106, 0.2052),
        sub("Structural engineering", a8, 126, 0.2037, 0.2544),
        sub("Mechanical engineering", a9, 125, 0.1355, 0.1401),
        sub("Industrial engineering", a9, 81, 0.1325, 0.1514),
        sub("Nuclear engineering", a9, 117, 0.1606, 0.1668),
        sub("Chemical engineering", a9, 201, 0.0996, 0.1186),
        sub("Electronic engineering", a9, 210, 0.1105, 0.0904),
        sub("Telecommunication engineering", a9, 135, 0.1117, 0.1203),
        sub("Bio-engineering", a9, 110, 0.1214, 0.1332),
        sub("Informatics", a9, 145, 0.4052, 0.4204),
        // the published table marks this row's kappas as unavailable
        GroupRecord {
            label: "Infrastructur engineering".to_string(),
            parent: Some(a9.to_string()),
            m: 6,
            kappa_linear: None,
            kappa_vqr: None,
        },
        sub("Economics", a13, 235, 0.56, 0.56),
        sub("Economic history", a13, 37, 0.32, 0.29),
        sub("Management", a13, 175, 0.49, 0.5),
        sub("Statistics", a13, 143, 0.55, 0.55),
    ];

    EmbeddedDataset {
        areas,
        sub_areas,
        whole_sample: area("All Areas", 9199, 0.32, 0.38),
        total_submitted: 99_005,
        audit_inputs: AuditInputs {
            biblio: [198, 102, 103, 187],
            ir: [116, 174, 129, 171],
            concordant_peers: [53, 73, 21, 117],
            concordant_biblio_ir: [98, 56, 39, 118],
        },
        reference_pvalues: vec![
            ReferencePValue {
                label: a13.to_string(),
                linear: 0.0036,
                vqr: 0.0086,
            },
            ReferencePValue {
                label: "Economics".to_string(),
                linear: 0.0001,
                vqr: 0.0005,
            },
            ReferencePValue {
                label: "Economic history".to_string(),
                linear: 0.3571,
                vqr: 0.4711,
            },
            ReferencePValue {
                label: "Management".to_string(),
                linear: 0.0034,
                vqr: 0.0096,
            },
            ReferencePValue {
                label: "Statistics".to_string(),
                linear: 0.0012,
                vqr: 0.0051,
            },
        ],
        other_areas_concordant_d: PrintedRate {
            concordant: 705,
            total: 3441,
            printed_percent: 21.1,
        },
        area13_concordant_d: PrintedRate {
            concordant: 117,
            total: 264,
            printed_percent: 44.3,
        },
        alternate_whole_sample_vqr: 0.3441,
        alternate_area13_vqr: 0.6104,
    }
}

/// The embedded dataset, validated on first access.
pub fn load_embedded() -> &'static EmbeddedDataset {
    static DATA: OnceLock<EmbeddedDataset> = OnceLock::new();
    DATA.get_or_init(|| {
        let data = build_embedded();
        data.validate().expect("embedded dataset invariants");
        data
    })
}

/// The percentile cut points of the VQR distribution rule (20-20-10-50):
/// the top 20 percent is Excellent, 60-80 Good, 50-60 Acceptable, and the
/// bottom half Limited. Intervals are closed at their lower bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqrDistributionRule {
    /// Lower percentile bound of each class except the last, best first.
    pub lower_bounds: [f64; 3],
    pub ladder: CategorySet,
}

impl VqrDistributionRule {
    pub fn standard() -> Self {
        Self {
            lower_bounds: [80.0, 60.0, 50.0],
            ladder: CategorySet::vqr_default(),
        }
    }
}

impl Default for VqrDistributionRule {
    fn default() -> Self {
        Self::standard()
    }
}

/// Map a percentile rank (fraction of the world distribution below the
/// item, in [0, 100]) to a merit class under the distribution rule.
pub fn percentile_to_class(percentile: f64, rule: &VqrDistributionRule) -> Result<MeritClass> {
    if !(0.0..=100.0).contains(&percentile) || percentile.is_nan() {
        return Err(Error::PercentileOutOfRange(percentile));
    }
    let index = rule
        .lower_bounds
        .iter()
        .position(|&lb| percentile >= lb)
        .unwrap_or(rule.lower_bounds.len());
    Ok(rule.ladder.class(index).expect("ladder has 4 classes").clone())
}

/// Outcome of a dual-indicator matrix lookup: a merit class, or the
/// informed-review sentinel for discordant indicator pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixCell {
    Class(usize),
    InformedReview,
}

impl MatrixCell {
    pub fn token(&self) -> &'static str {
        match self {
            MatrixCell::Class(0) => "A",
            MatrixCell::Class(1) => "B",
            MatrixCell::Class(2) => "C",
            MatrixCell::Class(3) => "D",
            MatrixCell::Class(_) => "?",
            MatrixCell::InformedReview => "IR",
        }
    }
}

/// A 4x4 grid over (citation class x journal-indicator class), each cell a
/// merit class or the IR sentinel routing the article to informed review.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationMatrix {
    cells: [[MatrixCell; 4]; 4],
}

impl ClassificationMatrix {
    /// The published panel-5 matrix for 2004-2008: concordant indicator
    /// pairs score directly, discordant ones go to informed review.
    pub fn gev5_2004_2008() -> Self {
        use MatrixCell::{Class, InformedReview as IR};
        Self {
            cells: [
                [Class(0), Class(0), Class(0), IR],
                [Class(1), Class(1), Class(1), IR],
                [IR, Class(2), Class(2), Class(2)],
                [IR, Class(3), Class(3), Class(3)],
            ],
        }
    }

    /// Parse 4 lines of 4 whitespace-separated tokens from {A, B, C, D, IR}.
    pub fn parse(text: &str) -> Result<Self> {
        let rows: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        if rows.len() != 4 {
            return Err(Error::InvalidMatrix(format!(
                "expected 4 rows, got {}",
                rows.len()
            )));
        }
        let mut cells = [[MatrixCell::InformedReview; 4]; 4];
        for (i, row) in rows.iter().enumerate() {
            let tokens: Vec<&str> = row.split_whitespace().collect();
            if tokens.len() != 4 {
                return Err(Error::InvalidMatrix(format!(
                    "row {}: expected 4 tokens, got {}",
                    i + 1,
                    tokens.len()
                )));
            }
            for (j, tok) in tokens.iter().enumerate() {
                cells[i][j] = match *tok {
                    "A" => MatrixCell::Class(0),
                    "B" => MatrixCell::Class(1),
                    "C" => MatrixCell::Class(2),
                    "D" => MatrixCell::Class(3),
                    "IR" => MatrixCell::InformedReview,
                    other => {
                        return Err(Error::InvalidMatrix(format!(
                            "row {}: unknown token '{other}' (valid: A, B, C, D, IR)",
                            i + 1
                        )))
                    }
                };
            }
        }
        Ok(Self { cells })
    }

    /// Look up by 1-based citation class (rows) and indicator class (columns).
    pub fn classify(&self, citation_class: usize, indicator_class: usize) -> Result<MatrixCell> {
        if !(1..=4).contains(&citation_class) || !(1..=4).contains(&indicator_class) {
            return Err(Error::MatrixIndexOutOfRange {
                citation: citation_class,
                indicator: indicator_class,
            });
        }
        Ok(self.cells[citation_class - 1][indicator_class - 1])
    }
}
