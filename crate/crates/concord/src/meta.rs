//! Cross-group meta-analysis of agreement statistics.
//!
//! Group kappas k_j with m_j evaluated products are modeled as draws from
//! N(mu, sigma^2 / m_j). The fit weights each group by m_j; prediction
//! intervals for a new group use Student-t quantiles with n-1 degrees of
//! freedom, which makes the held-out test exact under the model. Funnel
//! plots are the graphical face of the same interval.

use serde::{Deserialize, Serialize};

use crate::dist;
use crate::error::{Error, Result};
use crate::kappa::Sided;

/// One group's agreement summary: `m` evaluated products, observed kappa.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupKappa {
    pub label: String,
    pub m: u64,
    pub kappa: f64,
    /// Parent area label for sub-groups.
    pub parent: Option<String>,
}

impl GroupKappa {
    pub fn new(label: impl Into<String>, m: u64, kappa: f64) -> Self {
        Self {
            label: label.into(),
            m,
            kappa,
            parent: None,
        }
    }

    pub fn with_parent(mut self, parent: impl Into<String>) -> Self {
        self.parent = Some(parent.into());
        self
    }
}

/// Fitted heteroscedastic normal model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaModel {
    pub mu_hat: f64,
    pub sigma2_hat: f64,
    pub n_groups: usize,
    pub total_m: u64,
}

impl MetaModel {
    pub fn df(&self) -> usize {
        self.n_groups - 1
    }

    /// Standard error of (k_new - mu_hat) for a new group of size `m`.
    pub fn prediction_se(&self, m: u64) -> f64 {
        self.sigma2_hat.sqrt() * (1.0 / m as f64 + 1.0 / self.total_m as f64).sqrt()
    }
}

/// Weighted fit: mu_hat = sum(m_j k_j) / sum(m_j) and
/// sigma2_hat = sum(m_j (k_j - mu_hat)^2) / (n - 1). Needs >= 3 groups.
pub fn fit(groups: &[GroupKappa]) -> Result<MetaModel> {
    if groups.len() < 3 {
        return Err(Error::InsufficientGroups {
            needed: 3,
            got: groups.len(),
        });
    }
    for g in groups {
        if g.m < 1 {
            return Err(Error::InvalidGroup {
                label: g.label.clone(),
                reason: "m must be >= 1".into(),
            });
        }
    }
    let total_m: u64 = groups.iter().map(|g| g.m).sum();
    let mu_hat = groups
        .iter()
        .map(|g| g.m as f64 * g.kappa)
        .sum::<f64>()
        / total_m as f64;
    let ss = groups
        .iter()
        .map(|g| g.m as f64 * (g.kappa - mu_hat).powi(2))
        .sum::<f64>();
    let sigma2_hat = ss / (groups.len() - 1) as f64;
    Ok(MetaModel {
        mu_hat,
        sigma2_hat,
        n_groups: groups.len(),
        total_m,
    })
}

/// Two-sided prediction interval for a new group of size `m`.
pub fn prediction_interval(model: &MetaModel, m: u64, level: f64) -> Result<(f64, f64)> {
    if m < 1 {
        return Err(Error::InvalidGroup {
            label: String::new(),
            reason: "m must be >= 1".into(),
        });
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidLevel(level));
    }
    let t = dist::t_quantile((1.0 + level) / 2.0, model.df() as f64)?;
    let half = t * model.prediction_se(m);
    Ok((model.mu_hat - half, model.mu_hat + half))
}

/// A funnel band sampled on an m grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionBand {
    pub level: f64,
    pub mean: f64,
    pub points: Vec<BandPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandPoint {
    pub m: u64,
    pub lo: f64,
    pub hi: f64,
}

/// Evaluate the prediction interval on an ascending, non-empty m grid.
pub fn funnel_points(model: &MetaModel, m_grid: &[u64], level: f64) -> Result<PredictionBand> {
    if m_grid.is_empty() {
        return Err(Error::InvalidGroup {
            label: String::new(),
            reason: "empty m grid".into(),
        });
    }
    if m_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGroup {
            label: String::new(),
            reason: "m grid must be strictly ascending".into(),
        });
    }
    let mut points = Vec::with_capacity(m_grid.len());
    for &m in m_grid {
        let (lo, hi) = prediction_interval(model, m, level)?;
        points.push(BandPoint { m, lo, hi });
    }
    Ok(PredictionBand {
        level,
        mean: model.mu_hat,
        points,
    })
}

/// Default rendering grid: `count` log-spaced values from min(m)/2 to
/// max(m) * 1.1, deduplicated after rounding to integers.
pub fn default_m_grid(m_values: &[u64], count: usize) -> Vec<u64> {
    let lo = m_values.iter().copied().min().unwrap_or(1).max(2) as f64 / 2.0;
    let hi = m_values.iter().copied().max().unwrap_or(1) as f64 * 1.1;
    let mut grid = Vec::with_capacity(count);
    for i in 0..count {
        let t = i as f64 / (count - 1).max(1) as f64;
        let m = (lo.ln() + t * (hi.ln() - lo.ln())).exp().round() as u64;
        let m = m.max(1);
        if grid.last() != Some(&m) {
            grid.push(m);
        }
    }
    grid
}

/// Studentized outlier test of one group against a fitted model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierTest {
    pub label: String,
    pub t_stat: f64,
    pub df: usize,
    pub p_value: f64,
    pub sided: Sided,
    /// p < 0.05 for the requested sidedness.
    pub outside_band: bool,
}

/// Test a held-out group. One-sided tests report the upper tail; the group
/// must not have been part of the fit. A zero-dispersion model yields t = 0
/// (no evidence against the model).
pub fn test_group(model: &MetaModel, g: &GroupKappa, sided: Sided) -> Result<OutlierTest> {
    if g.m < 1 {
        return Err(Error::InvalidGroup {
            label: g.label.clone(),
            reason: "m must be >= 1".into(),
        });
    }
    let se = model.prediction_se(g.m);
    let t_stat = if se > 0.0 {
        (g.kappa - model.mu_hat) / se
    } else {
        0.0
    };
    let df = model.df() as f64;
    let p_value = match sided {
        Sided::One => dist::t_sf(t_stat, df),
        Sided::Two => 2.0 * dist::t_sf(t_stat.abs(), df),
    }
    .min(1.0);
    Ok(OutlierTest {
        label: g.label.clone(),
        t_stat,
        df: model.df(),
        p_value,
        sided,
        outside_band: p_value < 0.05,
    })
}

/// Where a point sits relative to a two-sided prediction band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BandPosition {
    Inside,
    Above,
    Below,
}

impl std::fmt::Display for BandPosition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BandPosition::Inside => "inside",
            BandPosition::Above => "above",
            BandPosition::Below => "below",
        };
        f.write_str(s)
    }
}

/// Classify a point against the two-sided band at `level`.
pub fn band_position(model: &MetaModel, g: &GroupKappa, level: f64) -> Result<BandPosition> {
    let (lo, hi) = prediction_interval(model, g.m, level)?;
    Ok(if g.kappa > hi {
        BandPosition::Above
    } else if g.kappa < lo {
        BandPosition::Below
    } else {
        BandPosition::Inside
    })
}

/// An area with its sub-groups, as used by the leave-one-out sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaGroups {
    pub area: GroupKappa,
    pub sub_areas: Vec<GroupKappa>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeaveOneOutReport {
    pub held_out: String,
    /// Test of the held-out area against the model fitted on the other areas.
    pub area_test: OutlierTest,
    pub area_position: BandPosition,
    /// Tests of the held-out area's sub-groups against the model fitted on
    /// the other areas' sub-groups.
    pub sub_tests: Vec<(OutlierTest, BandPosition)>,
}

/// Hold out each area in turn: refit on the remaining areas (and on their
/// sub-groups), then test the held-out area's kappa and each of its
/// sub-group kappas against the two-sided band at `level`.
pub fn leave_one_out(areas: &[AreaGroups], level: f64) -> Result<Vec<LeaveOneOutReport>> {
    if areas.len() < 3 {
        return Err(Error::InsufficientGroups {
            needed: 3,
            got: areas.len(),
        });
    }
    let mut reports = Vec::with_capacity(areas.len());
    for (hold, held) in areas.iter().enumerate() {
        let area_fit: Vec<GroupKappa> = areas
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != hold)
            .map(|(_, a)| a.area.clone())
            .collect();
        let sub_fit: Vec<GroupKappa> = areas
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != hold)
            .flat_map(|(_, a)| a.sub_areas.iter().cloned())
            .collect();
        let area_model = fit(&area_fit)?;
        let area_test = test_group(&area_model, &held.area, Sided::One)?;
        let area_position = band_position(&area_model, &held.area, level)?;
        let mut sub_tests = Vec::with_capacity(held.sub_areas.len());
        if !held.sub_areas.is_empty() {
            let sub_model = fit(&sub_fit)?;
            for sub in &held.sub_areas {
                let test = test_group(&sub_model, sub, Sided::One)?;
                let position = band_position(&sub_model, sub, level)?;
                sub_tests.push((test, position));
            }
        }
        reports.push(LeaveOneOutReport {
            held_out: held.area.label.clone(),
            area_test,
            area_position,
            sub_tests,
        });
    }
    Ok(reports)
}

/// Exact probability that at least `exceed` of `trials` independent groups
/// each exceed a limit of single-group probability `p_single`.
pub fn multi_exceedance_probability(trials: u64, exceed: u64, p_single: f64) -> Result<f64> {
    dist::binomial_upper_tail(trials, exceed, p_single)
}
