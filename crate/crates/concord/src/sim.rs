//! Monte Carlo harness: multinomial table sampling, standard-error
//! calibration, and prediction-interval coverage studies.
//!
//! Randomness comes from ChaCha8 seeded with a user seed; replication `i`
//! runs on stream `i` of the generator, so results are reproducible and do
//! not depend on scheduling. Multinomial draws use sequential conditional
//! binomials, which is exact.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dist;
use crate::error::{Error, Result};
use crate::kappa::weighted_kappa;
use crate::meta::{fit, GroupKappa};
use crate::table::ContingencyTable;
use crate::weights::WeightScheme;

const PROB_TOL: f64 = 1e-12;

/// A k x k joint cell-probability grid summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    k: usize,
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        let k = rows.len();
        if k < 2 {
            return Err(Error::InvalidJoint(format!(
                "need at least 2 categories, got {k}"
            )));
        }
        let mut probs = Vec::with_capacity(k * k);
        for row in rows {
            if row.len() != k {
                return Err(Error::InvalidJoint(format!(
                    "expected {k} entries per row, got {}",
                    row.len()
                )));
            }
            for &p in row {
                if !p.is_finite() || p < 0.0 {
                    return Err(Error::InvalidJoint(format!("negative cell {p}")));
                }
                probs.push(p);
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidJoint(format!("cells sum to {total}, not 1")));
        }
        Ok(Self { k, probs })
    }

    /// The empirical joint of an observed table.
    pub fn from_table(table: &ContingencyTable) -> Self {
        let k = table.k();
        let probs = (0..k * k)
            .map(|c| table.proportion(c / k, c % k))
            .collect();
        Self { k, probs }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.probs[i * self.k + j]
    }

    /// True when all mass sits in a single row and a single column, which
    /// makes every sampled table marginally degenerate.
    pub fn is_degenerate(&self) -> bool {
        let k = self.k;
        let live_rows = (0..k)
            .filter(|&i| (0..k).any(|j| self.prob(i, j) > 0.0))
            .count();
        let live_cols = (0..k)
            .filter(|&j| (0..k).any(|i| self.prob(i, j) > 0.0))
            .count();
        live_rows <= 1 && live_cols <= 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub seed: u64,
    pub replications: u64,
    pub n_per_table: u64,
}

impl SimConfig {
    pub fn new(seed: u64, replications: u64, n_per_table: u64) -> Result<Self> {
        if replications < 1 {
            return Err(Error::InvalidSimConfig("replications must be >= 1".into()));
        }
        if n_per_table < 1 {
            return Err(Error::InvalidSimConfig("n_per_table must be >= 1".into()));
        }
        Ok(Self {
            seed,
            replications,
            n_per_table,
        })
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn sample_counts(joint: &JointDistribution, n: u64, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let cells = joint.probs.len();
    // tail[c] = sum of probs from cell c on
    let mut tail = vec![0.0f64; cells + 1];
    for c in (0..cells).rev() {
        tail[c] = tail[c + 1] + joint.probs[c];
    }
    let mut counts = vec![0u64; cells];
    let mut remaining = n;
    for c in 0..cells {
        if remaining == 0 {
            break;
        }
        if tail[c + 1] <= 0.0 {
            counts[c] = remaining;
            remaining = 0;
            break;
        }
        let ratio = (joint.probs[c] / tail[c]).clamp(0.0, 1.0);
        let draw = if ratio >= 1.0 {
            remaining
        } else if ratio <= 0.0 {
            0
        } else {
            Binomial::new(remaining, ratio)
                .expect("ratio in (0, 1)")
                .sample(rng)
        };
        counts[c] = draw;
        remaining -= draw;
    }
    if remaining > 0 {
        // numerically possible when trailing probabilities underflow
        *counts.last_mut().unwrap() += remaining;
    }
    counts
}

/// Draw one table of `n` units from the joint; deterministic in `seed`.
pub fn sample_table(joint: &JointDistribution, n: u64, seed: u64) -> Result<ContingencyTable> {
    if n < 1 {
        return Err(Error::InvalidSimConfig("n must be >= 1".into()));
    }
    let mut rng = rng_for(seed, 0);
    let counts = sample_counts(joint, n, &mut rng);
    let k = joint.k;
    let rows: Vec<Vec<u64>> = (0..k)
        .map(|i| counts[i * k..(i + 1) * k].to_vec())
        .collect();
    ContingencyTable::from_counts(&rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeCalibrationReport {
    pub weights: String,
    pub replications: u64,
    pub n_per_table: u64,
    pub seed: u64,
    /// Sample standard deviation of the kappa estimates.
    pub empirical_sd: f64,
    /// Mean of the per-table asymptotic standard errors.
    pub mean_asymptotic_se: f64,
    /// |empirical - asymptotic| / empirical (0 when both vanish).
    pub relative_gap: f64,
    /// Raised when the gap exceeds 5% on a run large enough to trust
    /// (>= 10^4 replications of tables with n >= 1000).
    pub flagged: bool,
}

/// Calibrate the asymptotic standard error against the Monte Carlo spread
/// of the kappa estimator under a fixed joint distribution.
pub fn se_calibration(
    joint: &JointDistribution,
    w: &WeightScheme,
    cfg: &SimConfig,
) -> Result<SeCalibrationReport> {
    if joint.k() != w.k() {
        return Err(Error::DimensionMismatch {
            table_k: joint.k(),
            weights_k: w.k(),
        });
    }
    if joint.is_degenerate() {
        return Err(Error::InvalidJoint(
            "all mass in a single row and column: kappa undefined on every sample".into(),
        ));
    }
    let reps = cfg.replications;
    let mut kappas = Vec::with_capacity(reps as usize);
    let mut ses = Vec::with_capacity(reps as usize);
    let k = joint.k();
    for rep in 0..reps {
        let mut rng = rng_for(cfg.seed, rep);
        let counts = sample_counts(joint, cfg.n_per_table, &mut rng);
        let rows: Vec<Vec<u64>> = (0..k)
            .map(|i| counts[i * k..(i + 1) * k].to_vec())
            .collect();
        let table = ContingencyTable::from_counts(&rows)?;
        let est = weighted_kappa(&table, w)?;
        kappas.push(est.kappa);
        ses.push(est.se);
    }
    let nf = kappas.len() as f64;
    let mean = kappas.iter().sum::<f64>() / nf;
    let empirical_sd = if kappas.len() > 1 {
        (kappas.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0)).sqrt()
    } else {
        0.0
    };
    let mean_asymptotic_se = ses.iter().sum::<f64>() / nf;
    // spreads at the femto scale are summation noise, not variability
    const SD_FLOOR: f64 = 1e-12;
    let relative_gap = if empirical_sd > SD_FLOOR {
        (empirical_sd - mean_asymptotic_se).abs() / empirical_sd
    } else if mean_asymptotic_se > SD_FLOOR {
        1.0
    } else {
        0.0
    };
    let flagged = relative_gap > 0.05 && cfg.replications >= 10_000 && cfg.n_per_table >= 1000;
    Ok(SeCalibrationReport {
        weights: w.name().to_string(),
        replications: cfg.replications,
        n_per_table: cfg.n_per_table,
        seed: cfg.seed,
        empirical_sd,
        mean_asymptotic_se,
        relative_gap,
        flagged,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub replications: u64,
    pub rejections: u64,
    pub rejection_rate: f64,
    pub level: f64,
    pub seed: u64,
    /// Mean shift applied to the held-out group (0 for coverage runs).
    pub held_out_shift: f64,
}

/// Coverage of the two-sided 95% held-out test under the fitted model's own
/// assumptions: per replication, draw a kappa for every entry of `m_list`
/// from N(mu, sigma2/m), fit on all but the last, and test the last.
/// Under the model the rejection rate converges to 1 - level.
pub fn coverage_study(
    mu: f64,
    sigma2: f64,
    m_list: &[u64],
    cfg: &SimConfig,
) -> Result<CoverageReport> {
    coverage_study_with_shift(mu, sigma2, m_list, 0.0, cfg)
}

/// Power variant: the held-out group (the last entry of `m_list`) is drawn
/// with its mean shifted by `shift`.
pub fn coverage_study_with_shift(
    mu: f64,
    sigma2: f64,
    m_list: &[u64],
    shift: f64,
    cfg: &SimConfig,
) -> Result<CoverageReport> {
    if sigma2 < 0.0 {
        return Err(Error::InvalidSimConfig("sigma2 must be >= 0".into()));
    }
    if m_list.len() < 4 {
        return Err(Error::InsufficientGroups {
            needed: 4,
            got: m_list.len(),
        });
    }
    if m_list.iter().any(|&m| m < 1) {
        return Err(Error::InvalidSimConfig("every m must be >= 1".into()));
    }
    let level = 0.95;
    let fit_count = m_list.len() - 1;
    let df = fit_count - 1;
    let t_crit = dist::t_quantile((1.0 + level) / 2.0, df as f64)?;
    let sigma = sigma2.sqrt();
    let mut rejections = 0u64;
    for rep in 0..cfg.replications {
        let mut rng = rng_for(cfg.seed, rep);
        let mut groups = Vec::with_capacity(fit_count);
        let mut held_out_kappa = 0.0;
        for (i, &m) in m_list.iter().enumerate() {
            let z: f64 = StandardNormal.sample(&mut rng);
            let center = if i == fit_count { mu + shift } else { mu };
            let kappa = center + sigma / (m as f64).sqrt() * z;
            if i == fit_count {
                held_out_kappa = kappa;
            } else {
                groups.push(GroupKappa::new(format!("g{i}"), m, kappa));
            }
        }
        let model = fit(&groups)?;
        let se = model.prediction_se(m_list[fit_count]);
        let t = if se > 0.0 {
            (held_out_kappa - model.mu_hat) / se
        } else {
            0.0
        };
        if t.abs() > t_crit {
            rejections += 1;
        }
    }
    Ok(CoverageReport {
        replications: cfg.replications,
        rejections,
        rejection_rate: rejections as f64 / cfg.replications as f64,
        level,
        seed: cfg.seed,
        held_out_shift: shift,
    })
}

/// The three fixed full-support 4x4 joints used by the calibration suite.
pub fn calibration_joints() -> Vec<(&'static str, JointDistribution)> {
    let m = [0.35, 0.30, 0.20, 0.15];
    let agreement: Vec<Vec<f64>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| 0.4 * m[i] * m[j] + if i == j { 0.6 * m[i] } else { 0.0 })
                .collect()
        })
        .collect();
    let row = [0.4, 0.3, 0.2, 0.1];
    let independence: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|_| row[i] * 0.25).collect()).collect();
    let banded = vec![
        vec![0.16, 0.06, 0.02, 0.01],
        vec![0.06, 0.12, 0.05, 0.02],
        vec![0.02, 0.05, 0.10, 0.06],
        vec![0.01, 0.02, 0.06, 0.18],
    ];
    vec![
        ("agreement", JointDistribution::new(&agreement).expect("valid")),
        ("independence", JointDistribution::new(&independence).expect("valid")),
        ("banded", JointDistribution::new(&banded).expect("valid")),
    ]
}
