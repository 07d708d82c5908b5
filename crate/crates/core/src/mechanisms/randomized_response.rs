use std::f64::consts::LN_2;

use crate::channel::{ChannelMatrix, QueryTable, StochasticMatrix};
use crate::dist::InfoUnit;
use crate::error::{Error, Result};

/// Randomized response over a binary query: report the true answer with
/// probability 1 - p and its complement with probability p.
///
/// The flip probability must lie strictly inside (0, 1) unless
/// `allow_deterministic` is set, which additionally admits the endpoint
/// values and hence a deterministic channel.
pub fn randomized_response_channel(
    query: &QueryTable,
    p: f64,
    allow_deterministic: bool,
) -> Result<ChannelMatrix> {
    if query.output_size() != 2 {
        return Err(Error::Domain(format!(
            "randomized response needs a binary query, got {} outputs",
            query.output_size()
        )));
    }
    let open = p > 0.0 && p < 1.0;
    let closed = p >= 0.0 && p <= 1.0;
    if !(open || (allow_deterministic && closed)) {
        return Err(Error::Domain(format!(
            "flip probability {p} outside (0, 1); endpoints need the deterministic flag"
        )));
    }
    let total = query.universe().total();
    let mut entries = Vec::with_capacity(2 * total);
    for x in 0..total {
        // p(y | x) = (1 - p) when y = f(x), p otherwise
        if query.value(x) == 0 {
            entries.extend_from_slice(&[1.0 - p, p]);
        } else {
            entries.extend_from_slice(&[p, 1.0 - p]);
        }
    }
    ChannelMatrix::new(
        query.universe().clone(),
        StochasticMatrix::new(2, total, entries)?,
    )
}

/// Flip probability calibrated to a capacity target.
#[derive(Debug, Clone, PartialEq)]
pub struct RrCalibration {
    /// Smallest admissible flip probability.
    pub p_star: f64,
    /// Open interval of flip probabilities meeting the target.
    pub interval: (f64, f64),
}

/// Largest-capacity flip probability for a capacity budget epsilon: solves
/// H(p) = log 2 - epsilon on [0, 1/2] by bisection. Any p in
/// (p_star, 1 - p_star) keeps individual channel capacity at or below the
/// budget; budgets of log 2 and above admit every p in (0, 1).
pub fn rr_calibrate(epsilon: f64, unit: InfoUnit) -> Result<RrCalibration> {
    let eps_nats = unit.to_nats(epsilon);
    if !(eps_nats > 0.0) {
        return Err(Error::Domain(format!(
            "capacity budget must be positive, got {epsilon}"
        )));
    }
    if eps_nats >= LN_2 {
        return Ok(RrCalibration {
            p_star: 0.0,
            interval: (0.0, 1.0),
        });
    }
    let target = LN_2 - eps_nats;
    let h = |p: f64| -> f64 {
        if p <= 0.0 {
            0.0
        } else {
            -p * p.ln() - (1.0 - p) * (1.0 - p).ln()
        }
    };
    // H is 0 at p = 0 and log 2 at p = 1/2, strictly increasing between
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p_star = 0.5 * (lo + hi);
    Ok(RrCalibration {
        p_star,
        interval: (p_star, 1.0 - p_star),
    })
}
