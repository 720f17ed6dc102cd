//! Distribution helpers: standard normal and Student-t tails and quantiles,
//! plus the exact binomial upper tail used by the multi-exceedance bound.

use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use crate::error::{Error, Result};

fn standard_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

pub fn normal_cdf(x: f64) -> f64 {
    standard_normal().cdf(x)
}

/// Upper tail P(Z > x).
pub fn normal_sf(x: f64) -> f64 {
    standard_normal().sf(x)
}

/// Quantile of the standard normal; `p` must lie strictly in (0, 1).
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidLevel(p));
    }
    Ok(standard_normal().inverse_cdf(p))
}

fn student_t(df: f64) -> StudentsT {
    StudentsT::new(0.0, 1.0, df).expect("positive degrees of freedom")
}

pub fn t_cdf(x: f64, df: f64) -> f64 {
    student_t(df).cdf(x)
}

/// Upper tail P(T > x) for a Student-t with `df` degrees of freedom.
pub fn t_sf(x: f64, df: f64) -> f64 {
    student_t(df).sf(x)
}

pub fn t_quantile(p: f64, df: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidLevel(p));
    }
    Ok(student_t(df).inverse_cdf(p))
}

/// Exact upper tail P(X >= exceed) for X ~ Binomial(trials, p), summed in
/// closed form over the tail terms. Binomial coefficients are accumulated
/// multiplicatively; exact in double precision for the small trial counts
/// this toolkit deals in.
pub fn binomial_upper_tail(trials: u64, exceed: u64, p: f64) -> Result<f64> {
    if exceed > trials {
        return Err(Error::ExceedOverTrials { trials, exceed });
    }
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::InvalidProbability(p));
    }
    if exceed == 0 {
        return Ok(1.0);
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(1.0);
    }
    let q = 1.0 - p;
    let n = trials;
    let mut tail = 0.0f64;
    for x in exceed..=n {
        tail += binomial_term(n, x, p, q);
    }
    Ok(tail.min(1.0))
}

/// C(n, x) p^x q^(n-x), with coefficient and probability factors
/// interleaved so partial products stay in range even for large n.
fn binomial_term(n: u64, x: u64, p: f64, q: f64) -> f64 {
    let mut acc = 1.0f64;
    let mut i = 0u64; // combined C(n,x) * p^x factors consumed
    let mut j = 0u64; // q factors consumed
    while i < x || j < n - x {
        if i < x && (acc <= 1.0 || j >= n - x) {
            acc *= (n - i) as f64 / (x - i) as f64 * p;
            i += 1;
        } else {
            acc *= q;
            j += 1;
        }
    }
    acc
}
