//! Weighted Cohen's kappa with asymptotic standard errors, confidence
//! intervals, and the (deliberately caveated) significance test.

use serde::{Deserialize, Serialize};

use crate::dist;
use crate::error::{Error, Result};
use crate::table::ContingencyTable;
use crate::weights::WeightScheme;

/// Structured reminder attached to every significance test: a significant
/// z only rules out zero agreement, it says nothing about the strength of
/// agreement.
pub const SIGNIFICANCE_CAVEAT: &str = "significance is not agreement";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaEstimate {
    pub kappa: f64,
    /// Weighted observed agreement sum(v_ij p_ij).
    pub p_o_w: f64,
    /// Weighted chance agreement sum(v_ij p_i. p_.j).
    pub p_e_w: f64,
    pub n: u64,
    /// Asymptotic non-null standard error.
    pub se: f64,
    /// Asymptotic standard error under the kappa = 0 null.
    pub se_null: f64,
    /// Name of the weight scheme used.
    pub weights: String,
    /// Set when a negative SE radicand was clamped to zero.
    pub se_clamped: bool,
    pub se_null_clamped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sided {
    One,
    Two,
}

impl std::str::FromStr for Sided {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one" => Ok(Sided::One),
            "two" => Ok(Sided::Two),
            other => Err(Error::Parse {
                line: 0,
                message: format!("unknown sidedness '{other}' (valid: one, two)"),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificanceTest {
    pub z: f64,
    pub p_value: f64,
    pub sided: Sided,
    /// Always set; see [`SIGNIFICANCE_CAVEAT`].
    pub caveat: &'static str,
}

struct Moments {
    p_o_w: f64,
    p_e_w: f64,
    q_o: f64,
    q_e: f64,
    row: Vec<f64>,
    col: Vec<f64>,
}

fn moments(table: &ContingencyTable, w: &WeightScheme) -> Result<Moments> {
    if table.k() != w.k() {
        return Err(Error::DimensionMismatch {
            table_k: table.k(),
            weights_k: w.k(),
        });
    }
    let k = table.k();
    let n = table.n() as f64;
    let row_sums = table.row_sums();
    let col_sums = table.col_sums();
    // accumulate in count space and divide once, so that e.g. an
    // all-diagonal table yields p_o_w = 1 exactly
    let mut o_w = 0.0;
    let mut e_w = 0.0;
    let mut o_d = 0.0;
    let mut e_d = 0.0;
    for i in 0..k {
        for j in 0..k {
            let c = table.count(i, j) as f64;
            let marg = row_sums[i] as f64 * col_sums[j] as f64;
            let d = w.disagreement(i, j);
            let v = w.agreement(i, j);
            o_w += v * c;
            e_w += v * marg;
            o_d += d * c;
            e_d += d * marg;
        }
    }
    Ok(Moments {
        p_o_w: o_w / n,
        p_e_w: e_w / (n * n),
        q_o: o_d / n,
        q_e: e_d / (n * n),
        row: row_sums.iter().map(|&r| r as f64 / n).collect(),
        col: col_sums.iter().map(|&c| c as f64 / n).collect(),
    })
}

/// Weighted Cohen's kappa with both asymptotic standard errors.
///
/// kappa = (p_o_w - p_e_w) / (1 - p_e_w), identically 1 - q_o/q_e in the
/// disagreement-sum form; the two routes agree to within floating-point
/// noise and both are computed here (the second is exposed through
/// [`kappa_disagreement_form`] for cross-checking).
pub fn weighted_kappa(table: &ContingencyTable, w: &WeightScheme) -> Result<KappaEstimate> {
    let m = moments(table, w)?;
    if m.q_e <= 0.0 {
        return Err(Error::DegenerateMarginals);
    }
    let kappa = (m.p_o_w - m.p_e_w) / (1.0 - m.p_e_w);
    let (se, se_clamped) = se_from_moments(table, w, &m, Some(kappa))?;
    let (se_null, se_null_clamped) = se_from_moments(table, w, &m, None)?;
    Ok(KappaEstimate {
        kappa,
        p_o_w: m.p_o_w,
        p_e_w: m.p_e_w,
        n: table.n(),
        se,
        se_null,
        weights: w.name().to_string(),
        se_clamped,
        se_null_clamped,
    })
}

/// The algebraically equivalent disagreement-sum route 1 - q_o/q_e, kept as
/// an independent cross-check of [`weighted_kappa`].
pub fn kappa_disagreement_form(table: &ContingencyTable, w: &WeightScheme) -> Result<f64> {
    let m = moments(table, w)?;
    if m.q_e <= 0.0 {
        return Err(Error::DegenerateMarginals);
    }
    Ok(1.0 - m.q_o / m.q_e)
}

/// Asymptotic standard error of the weighted kappa.
///
/// `under_null` selects the variance evaluated at kappa = 0 with joint cell
/// probabilities replaced by the product of the marginals (the form a
/// significance test needs); otherwise the non-null large-sample variance
/// at the estimate is returned. A negative radicand (possible only through
/// rounding) clamps to zero; [`weighted_kappa`] records the clamp flags.
pub fn standard_error(table: &ContingencyTable, w: &WeightScheme, under_null: bool) -> Result<f64> {
    let m = moments(table, w)?;
    if m.q_e <= 0.0 {
        return Err(Error::DegenerateMarginals);
    }
    let kappa_hat = if under_null {
        None
    } else {
        Some((m.p_o_w - m.p_e_w) / (1.0 - m.p_e_w))
    };
    Ok(se_from_moments(table, w, &m, kappa_hat)?.0)
}

fn se_from_moments(
    table: &ContingencyTable,
    w: &WeightScheme,
    m: &Moments,
    kappa_hat: Option<f64>,
) -> Result<(f64, bool)> {
    let k = table.k();
    // row-averaged and column-averaged agreement weights:
    // vbar_row[i] = sum_j p_.j v_ij, vbar_col[j] = sum_i p_i. v_ij
    let mut vbar_row = vec![0.0; k];
    let mut vbar_col = vec![0.0; k];
    for i in 0..k {
        for j in 0..k {
            let v = w.agreement(i, j);
            vbar_row[i] += m.col[j] * v;
            vbar_col[j] += m.row[i] * v;
        }
    }
    let n = table.n() as f64;
    let numerator = match kappa_hat {
        Some(kh) => {
            let shrink = 1.0 - kh;
            let mut acc = 0.0;
            for i in 0..k {
                for j in 0..k {
                    let v = w.agreement(i, j);
                    let term = v - (vbar_row[i] + vbar_col[j]) * shrink;
                    acc += table.count(i, j) as f64 * term * term;
                }
            }
            acc / n - (kh - m.p_e_w * shrink).powi(2)
        }
        None => {
            let mut acc = 0.0;
            for i in 0..k {
                for j in 0..k {
                    let v = w.agreement(i, j);
                    let term = v - (vbar_row[i] + vbar_col[j]);
                    acc += m.row[i] * m.col[j] * term * term;
                }
            }
            acc - m.p_e_w * m.p_e_w
        }
    };
    let denom = table.n() as f64 * (1.0 - m.p_e_w).powi(2);
    let var = numerator / denom;
    if var < 0.0 {
        Ok((0.0, true))
    } else {
        Ok((var.sqrt(), false))
    }
}

/// Normal-approximation confidence interval; the upper bound is capped at 1.
pub fn confidence_interval(est: &KappaEstimate, level: f64) -> Result<(f64, f64)> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidLevel(level));
    }
    let z = dist::normal_quantile((1.0 + level) / 2.0)?;
    let half = z * est.se;
    Ok((est.kappa - half, (est.kappa + half).min(1.0)))
}

/// z-test of kappa = 0 using the null standard error.
pub fn significance_test(est: &KappaEstimate, sided: Sided) -> Result<SignificanceTest> {
    if est.se_null <= 0.0 {
        return Err(Error::ZeroNullSe);
    }
    let z = est.kappa / est.se_null;
    let p_value = match sided {
        Sided::One => dist::normal_sf(z),
        Sided::Two => 2.0 * dist::normal_sf(z.abs()),
    }
    .min(1.0);
    Ok(SignificanceTest {
        z,
        p_value,
        sided,
        caveat: SIGNIFICANCE_CAVEAT,
    })
}
