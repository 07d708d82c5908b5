use super::{rank_ordering, DistortionTable};
use crate::channel::{ChannelMatrix, QueryTable, StochasticMatrix};
use crate::error::{Error, Result};

/// Below this rate the closed-form entropy switches to its series expansion
/// to dodge 0/0 cancellation.
const SERIES_THRESHOLD: f64 = 1e-6;

/// Exponential-decay channel: p(y | x) proportional to exp(-rank_x(y) / n),
/// where rank_x orders outputs by distortion from the query answer.
///
/// Every column is a permutation of the same geometric shape, so the channel
/// is data-independent; larger `n` means flatter columns.
pub fn exponential_channel(
    query: &QueryTable,
    distortion: &DistortionTable,
    n: f64,
) -> Result<ChannelMatrix> {
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::Domain(format!(
            "noise parameter must be positive and finite, got {n}"
        )));
    }
    let ranks = rank_ordering(query, distortion)?;
    let k = query.output_size();
    let weights: Vec<f64> = (0..k).map(|r| (-(r as f64) / n).exp()).collect();
    let alpha: f64 = weights.iter().sum();
    let total = query.universe().total();
    let mut entries = Vec::with_capacity(k * total);
    for x in 0..total {
        for y in 0..k {
            entries.push(weights[ranks.rank(x, y)] / alpha);
        }
    }
    ChannelMatrix::new(
        query.universe().clone(),
        StochasticMatrix::new(k, total, entries)?,
    )
}

/// Entropy in nats of the truncated geometric distribution with weights
/// proportional to exp(-lambda * r) for ranks r = 0..k-1:
///
///   H = log((1 - e^{-k lambda}) / (1 - e^{-lambda}))
///       + lambda / (e^lambda - 1) - k lambda / (e^{k lambda} - 1)
///
/// evaluated through exp_m1 for stability, with a second-order series
/// H = log k - lambda^2 (k^2 - 1) / 24 below lambda = 1e-6.
pub fn exponential_entropy(k: usize, lambda: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("output alphabet is empty".into()));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!(
            "rate must be positive and finite, got {lambda}"
        )));
    }
    let kf = k as f64;
    if lambda < SERIES_THRESHOLD {
        return Ok(kf.ln() - lambda * lambda * (kf * kf - 1.0) / 24.0);
    }
    let klam = kf * lambda;
    let numer = -f64::exp_m1(-klam);
    let denom = -f64::exp_m1(-lambda);
    let mut h = (numer / denom).ln() + lambda / f64::exp_m1(lambda);
    // the final term vanishes as e^{k lambda} overflows
    let tail = f64::exp_m1(klam);
    if tail.is_finite() {
        h -= klam / tail;
    }
    Ok(h)
}

/// Largest rate whose output entropy still meets the capacity budget:
/// solves H(lambda) = log k - epsilon (nats) on the strictly decreasing
/// entropy curve by bracketed bisection. Budgets of log k or more admit
/// every rate; the sentinel +infinity is returned.
pub fn exponential_calibrate(epsilon: f64, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("output alphabet is empty".into()));
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Domain(format!(
            "capacity budget must be positive, got {epsilon}"
        )));
    }
    let log_k = (k as f64).ln();
    if epsilon >= log_k {
        return Ok(f64::INFINITY);
    }
    let target = log_k - epsilon;
    // entropy falls from log k toward 0; expand until it crosses the target
    let mut hi = 1.0f64;
    while exponential_entropy(k, hi)? > target {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Domain(
                "calibration bracket failed to close".into(),
            ));
        }
    }
    let mut lo = hi / 2.0f64.powi(40); // entropy there is above the target
    while exponential_entropy(k, lo)? < target {
        lo /= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if exponential_entropy(k, mid)? >= target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi.max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
