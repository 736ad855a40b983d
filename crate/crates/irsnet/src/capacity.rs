//! Information rates: log-det multi-user capacity, per-user SINR sum-rates,
//! and the closed-form single-surface upper bound.
//!
//! All rates are in bits (base-2 logarithms).

use crate::error::{Error, Result};
use crate::linalg::{singular_values, CMat};

/// Transmit power and noise power, both linear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateParams {
    pub power: f64,
    pub noise: f64,
}

impl RateParams {
    pub fn new(power: f64, noise: f64) -> Result<Self> {
        if !(power.is_finite() && power >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "power",
                reason: format!("must be finite and non-negative, got {power}"),
            });
        }
        if !(noise.is_finite() && noise > 0.0) {
            return Err(Error::InvalidParameter {
                name: "noise",
                reason: format!("must be finite and positive, got {noise}"),
            });
        }
        Ok(RateParams { power, noise })
    }

    /// Params with the given SNR in dB and unit noise.
    pub fn from_snr_db(snr_db: f64) -> Result<Self> {
        Self::new(10f64.powf(snr_db / 10.0), 1.0)
    }

    pub fn snr(&self) -> f64 {
        self.power / self.noise
    }
}

/// Joint capacity `log2 det(I + (P/N0) H H^H)` in bits, evaluated through
/// the singular values of `H` for numerical stability. Never negative.
pub fn logdet_capacity(h: &CMat, params: &RateParams) -> Result<f64> {
    let (rows, cols) = h.dim();
    if rows != cols {
        return Err(Error::DimensionMismatch {
            context: "capacity channel",
            expected: rows,
            got: cols,
        });
    }
    let snr = params.snr();
    Ok(singular_values(h)
        .iter()
        .map(|s| (1.0 + snr * s * s).log2())
        .sum())
}

/// Per-user rates treating all cross-gains as noise:
/// `log2(1 + P |h_ii|^2 / (N0 + P sum_{u != i} |h_iu|^2))`, plus their sum.
pub fn sinr_sum_rate(h: &CMat, params: &RateParams) -> Result<(Vec<f64>, f64)> {
    let (rows, cols) = h.dim();
    if rows != cols {
        return Err(Error::DimensionMismatch {
            context: "sum-rate channel",
            expected: rows,
            got: cols,
        });
    }
    let mut per_user = Vec::with_capacity(rows);
    for i in 0..rows {
        let signal = params.power * h[(i, i)].norm_sqr();
        let interference: f64 = (0..cols)
            .filter(|&u| u != i)
            .map(|u| params.power * h[(i, u)].norm_sqr())
            .sum();
        per_user.push((1.0 + signal / (params.noise + interference)).log2());
    }
    let sum = per_user.iter().sum();
    Ok((per_user, sum))
}

/// Closed-form sum-rate upper bound of one `elements`-element surface serving
/// `pairs` optimally placed pairs: `N log2(1 + P M^2 / N0)`. Undefined when
/// the pairs outnumber the elements (interference becomes unavoidable).
pub fn single_irs_bound(elements: usize, pairs: usize, params: &RateParams) -> Result<f64> {
    if pairs > elements {
        return Err(Error::BoundUndefined { pairs, elements });
    }
    let m = elements as f64;
    Ok(pairs as f64 * (1.0 + params.snr() * m * m).log2())
}
