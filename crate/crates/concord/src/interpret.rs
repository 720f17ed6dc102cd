//! Verbal interpretation of kappa values under the published guidelines
//! (Landis-Koch, Altman, George-Mallery, Stemler-Tsai, Fleiss).
//!
//! Each guideline is stored as its printed bands. Bands are closed at their
//! printed endpoints; a value falling in the gap between two printed bands
//! (the scales skip e.g. from 0.20 to 0.21) attaches to the upper band, and
//! anything below the lowest printed bound takes the lowest descriptor, so
//! interpretation is total and monotone on [-1, 1].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Guideline {
    LandisKoch,
    Altman,
    GeorgeMallery,
    StemlerTsai,
    Fleiss,
}

impl Guideline {
    pub const ALL: [Guideline; 5] = [
        Guideline::LandisKoch,
        Guideline::Altman,
        Guideline::GeorgeMallery,
        Guideline::StemlerTsai,
        Guideline::Fleiss,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Guideline::LandisKoch => "landis_koch",
            Guideline::Altman => "altman",
            Guideline::GeorgeMallery => "george_mallery",
            Guideline::StemlerTsai => "stemler_tsai",
            Guideline::Fleiss => "fleiss",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "landis_koch" => Ok(Guideline::LandisKoch),
            "altman" => Ok(Guideline::Altman),
            "george_mallery" => Ok(Guideline::GeorgeMallery),
            "stemler_tsai" => Ok(Guideline::StemlerTsai),
            "fleiss" => Ok(Guideline::Fleiss),
            other => Err(Error::UnknownGuideline(other.to_string())),
        }
    }

    /// Bands as (bound, descriptor). The first band holds for values
    /// strictly below its bound (the scales print it as "<bound"); each
    /// later band holds up to and including its bound.
    pub fn bands(&self) -> &'static [(f64, &'static str)] {
        match self {
            Guideline::LandisKoch => &[
                (0.00, "Poor"),
                (0.20, "Slight"),
                (0.40, "Fair"),
                (0.60, "Moderate"),
                (0.80, "Substantial"),
                (1.00, "Almost perfect"),
            ],
            Guideline::Altman => &[
                (0.20, "Poor"),
                (0.40, "Fair"),
                (0.60, "Moderate"),
                (0.80, "Good"),
                (1.00, "Very good"),
            ],
            Guideline::GeorgeMallery => &[
                (0.51, "Unacceptable"),
                (0.60, "Poor"),
                (0.70, "Questionable"),
                (0.80, "Acceptable"),
                (0.90, "Good"),
                (1.00, "Excellent"),
            ],
            Guideline::StemlerTsai => &[(0.50, "Unacceptable"), (1.00, "Acceptable")],
            Guideline::Fleiss => &[
                (0.40, "Poor"),
                (0.75, "Fair to good"),
                (1.00, "Excellent"),
            ],
        }
    }
}

/// Descriptor for `kappa` under `guideline`. Total on [-1, 1] (and tolerant
/// of values a hair outside through floating-point noise).
pub fn interpret(kappa: f64, guideline: Guideline) -> &'static str {
    let bands = guideline.bands();
    if kappa < bands[0].0 {
        return bands[0].1;
    }
    for &(bound, descriptor) in &bands[1..] {
        if kappa <= bound {
            return descriptor;
        }
    }
    bands[bands.len() - 1].1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_fixtures() {
        assert_eq!(interpret(0.32, Guideline::LandisKoch), "Fair");
        assert_eq!(interpret(0.54, Guideline::Altman), "Moderate");
        assert_eq!(interpret(0.54, Guideline::GeorgeMallery), "Poor");
        assert_eq!(interpret(1.0, Guideline::Fleiss), "Excellent");
        assert_eq!(interpret(0.54, Guideline::StemlerTsai), "Acceptable");
        assert_eq!(interpret(0.09, Guideline::LandisKoch), "Slight");
        assert_eq!(interpret(0.09, Guideline::GeorgeMallery), "Unacceptable");
    }

    #[test]
    fn gaps_attach_to_the_upper_band() {
        assert_eq!(interpret(0.205, Guideline::Altman), "Fair");
        assert_eq!(interpret(0.20, Guideline::Altman), "Fair");
        assert_eq!(interpret(0.50, Guideline::StemlerTsai), "Acceptable");
        // printed endpoints stay closed
        assert_eq!(interpret(0.20, Guideline::LandisKoch), "Slight");
        assert_eq!(interpret(0.40, Guideline::Fleiss), "Fair to good");
        assert_eq!(interpret(0.75, Guideline::Fleiss), "Fair to good");
        assert_eq!(interpret(0.51, Guideline::GeorgeMallery), "Poor");
    }

    #[test]
    fn below_lowest_bound_takes_lowest_descriptor() {
        assert_eq!(interpret(-0.5, Guideline::LandisKoch), "Poor");
        assert_eq!(interpret(-1.0, Guideline::Altman), "Poor");
        assert_eq!(interpret(-1.0, Guideline::Fleiss), "Poor");
    }

    #[test]
    fn unknown_guideline_lists_valid_names() {
        let err = Guideline::parse("cohen").unwrap_err().to_string();
        assert!(err.contains("landis_koch") && err.contains("fleiss"));
        for g in Guideline::ALL {
            assert_eq!(Guideline::parse(g.name()).unwrap(), g);
        }
    }

    #[test]
    fn total_and_monotone_on_grid() {
        for g in Guideline::ALL {
            let mut last_rank = 0usize;
            let descriptors: Vec<&str> = g.bands().iter().map(|b| b.1).collect();
            let mut kappa = -1.0;
            while kappa <= 1.0 + 1e-9 {
                let d = interpret(kappa, g);
                let rank = descriptors.iter().position(|&x| x == d).unwrap();
                assert!(rank >= last_rank, "{} not monotone at {kappa}", g.name());
                last_rank = rank;
                kappa += 0.01;
            }
        }
    }
}
