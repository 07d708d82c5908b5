use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    blahut_arimoto, enumerate_selections, individual_channel_capacity, reduce_channel,
    CapacityOptions,
};
use crate::channel::ChannelMatrix;
use crate::dist::entropy_nats;
use crate::error::{Error, Result};

/// Agreement required between the unconstrained estimate and the capacity
/// pipeline before the balance curve is pinned to zero at b = 0.
const B0_CROSSCHECK_TOL: f64 = 1e-4;

const ASCENT_ROUNDS: usize = 400;
const MIN_STEP: f64 = 1e-12;

/// Lower bound on the capacity of individual i restricted to dataset
/// distributions with entropy at least b (nats).
///
/// The bound is the best exact objective value seen by projected gradient
/// ascent over the simplex, with the entropy floor enforced by mixing toward
/// the uniform distribution (feasibility is bisected to floating-point
/// resolution, so iterates can sit within that resolution of the floor).
/// Starts: the uniform dataset distribution, the optimizer of the best
/// reduced channel placed on its selected complements, and `restarts` seeded
/// random interior points. This estimates from below only; it never
/// certifies the restricted capacity itself.
pub fn restricted_capacity_lower_bound(
    channel: &ChannelMatrix,
    individual: usize,
    b: f64,
    restarts: u32,
    seed: u64,
) -> Result<f64> {
    let u = channel.universe();
    if individual >= u.individuals() {
        return Err(Error::Index(format!(
            "individual {individual} out of range (n = {})",
            u.individuals()
        )));
    }
    let total = u.total();
    let ln_total = (total as f64).ln();
    if !b.is_finite() || b < 0.0 || b > ln_total + 1e-12 {
        return Err(Error::Domain(format!(
            "entropy floor {b} outside [0, log {total} = {ln_total:.6}]"
        )));
    }
    let b = b.min(ln_total);

    let mut starts: Vec<Vec<f64>> = Vec::new();
    starts.push(vec![1.0 / total as f64; total]);

    // place the best reduced-channel optimizer on its selected complements
    let opts = CapacityOptions::default();
    let mut best_member: Option<(f64, Vec<f64>)> = None;
    for selection in enumerate_selections(channel, individual, opts.enum_cap)? {
        let reduced = reduce_channel(channel, &selection)?;
        let result = blahut_arimoto(&reduced, opts.tol, opts.max_iter)?;
        if best_member.as_ref().map_or(true, |(v, _)| result.value > *v) {
            let mut joint = vec![0.0; total];
            for (j, &comp) in selection.choices.iter().enumerate() {
                joint[u.joint_index(individual, j, comp)?] = result.optimizer.weight(j);
            }
            best_member = Some((result.value, joint));
        }
    }
    if let Some((_, joint)) = best_member {
        starts.push(joint);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts {
        let mut w: Vec<f64> = (0..total).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let s: f64 = w.iter().sum();
        for v in w.iter_mut() {
            *v /= s;
        }
        starts.push(w);
    }

    let mut best = 0.0f64;
    let mut grad = vec![0.0; total];
    for mut p in starts {
        raise_entropy_to(&mut p, b);
        let mut cur_val = objective_nats(channel, individual, &p)?;
        best = best.max(cur_val);
        let mut step = 0.25;
        for _ in 0..ASCENT_ROUNDS {
            gradient_nats(channel, individual, &p, &mut grad)?;
            let mut candidate: Vec<f64> = p.iter().zip(&grad).map(|(&v, &g)| v + step * g).collect();
            project_to_simplex(&mut candidate);
            raise_entropy_to(&mut candidate, b);
            let val = objective_nats(channel, individual, &candidate)?;
            if val > cur_val + 1e-15 {
                p = candidate;
                cur_val = val;
                best = best.max(val);
                step *= 1.6;
            } else {
                step *= 0.5;
                if step < MIN_STEP {
                    break;
                }
            }
        }
    }
    Ok(best)
}

/// One evaluation point of the balance curve.
#[derive(Debug, Clone, PartialEq)]
pub struct BalancePoint {
    pub b_nats: f64,
    /// Estimated restricted capacity max_i (lower bound), in nats.
    pub lower_bound_nats: f64,
    /// Estimated capacity loss at this entropy floor (clamped at 0).
    pub delta_nats: f64,
    /// Cumulative maximum of `delta_nats` along the grid.
    pub envelope_nats: f64,
}

/// Balance curve estimate over an ascending entropy-floor grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceReport {
    /// Unconstrained individual channel capacity, in nats.
    pub capacity_nats: f64,
    /// Whether the b = 0 estimate agreed with the capacity pipeline within
    /// 1e-4 (present only when the grid contains b = 0). On agreement the
    /// b = 0 delta is pinned to exactly zero.
    pub b0_crosscheck: Option<bool>,
    pub points: Vec<BalancePoint>,
}

/// Estimate the capacity loss delta(b) = C - C^b over a grid of entropy
/// floors. Deltas come from lower-bound estimates of C^b, so each point is an
/// upper-bound estimate subject to optimizer success; the monotone envelope
/// is reported alongside the raw values.
pub fn balance_delta_bound(
    channel: &ChannelMatrix,
    b_grid: &[f64],
    restarts: u32,
    seed: u64,
) -> Result<BalanceReport> {
    if b_grid.is_empty() {
        return Err(Error::Domain("entropy-floor grid is empty".into()));
    }
    if b_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("entropy-floor grid must be ascending".into()));
    }
    let u = channel.universe();
    let report = individual_channel_capacity(channel, &CapacityOptions::default())?;
    let capacity = report.value_nats;

    let mut points = Vec::with_capacity(b_grid.len());
    let mut b0_crosscheck = None;
    let mut envelope = 0.0f64;
    for (idx, &b) in b_grid.iter().enumerate() {
        let mut lower = 0.0f64;
        for i in 0..u.individuals() {
            let call_seed = seed
                ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
                ^ (idx as u64).wrapping_mul(0xd1b5_4a32_d192_ed03);
            lower = lower.max(restricted_capacity_lower_bound(channel, i, b, restarts, call_seed)?);
        }
        let mut delta = (capacity - lower).max(0.0);
        if b == 0.0 {
            let agreed = (capacity - lower).abs() <= B0_CROSSCHECK_TOL;
            b0_crosscheck = Some(agreed);
            if agreed {
                delta = 0.0;
            }
        }
        envelope = envelope.max(delta);
        points.push(BalancePoint {
            b_nats: b,
            lower_bound_nats: lower,
            delta_nats: delta,
            envelope_nats: envelope,
        });
    }
    Ok(BalanceReport {
        capacity_nats: capacity,
        b0_crosscheck,
        points,
    })
}

// ---------------------------------------------------------------------------
// objective, gradient, and feasibility helpers

/// Exact I(X_i; Y) in nats at a dataset weight vector (zeros allowed).
fn objective_nats(channel: &ChannelMatrix, individual: usize, p: &[f64]) -> Result<f64> {
    let u = channel.universe();
    let m = u.size(individual);
    let ny = channel.output_size();
    let mut p_xi = vec![0.0; m];
    let mut joint_iy = vec![0.0; m * ny];
    for (x, &w) in p.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let j = u.coordinate(x, individual)?;
        p_xi[j] += w;
        for (y, &k) in channel.column(x).iter().enumerate() {
            joint_iy[j * ny + y] += w * k;
        }
    }
    let mut q = vec![0.0; ny];
    for j in 0..m {
        for y in 0..ny {
            q[y] += joint_iy[j * ny + y];
        }
    }
    let mut nats = 0.0;
    for j in 0..m {
        for y in 0..ny {
            let a = joint_iy[j * ny + y];
            if a > 0.0 {
                nats += a * (a / (p_xi[j] * q[y])).ln();
            }
        }
    }
    Ok(nats.max(0.0))
}

/// Ascent direction d/dp(x) of I(X_i; Y), clamped away from the boundary.
fn gradient_nats(
    channel: &ChannelMatrix,
    individual: usize,
    p: &[f64],
    grad: &mut [f64],
) -> Result<()> {
    let u = channel.universe();
    let m = u.size(individual);
    let ny = channel.output_size();
    let mut p_xi = vec![0.0; m];
    let mut joint_iy = vec![0.0; m * ny];
    for (x, &w) in p.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let j = u.coordinate(x, individual)?;
        p_xi[j] += w;
        for (y, &k) in channel.column(x).iter().enumerate() {
            joint_iy[j * ny + y] += w * k;
        }
    }
    let mut q = vec![0.0; ny];
    for j in 0..m {
        for y in 0..ny {
            q[y] += joint_iy[j * ny + y];
        }
    }
    for (x, g) in grad.iter_mut().enumerate() {
        let j = u.coordinate(x, individual)?;
        let pj = p_xi[j].max(1e-300);
        let mut acc = 0.0;
        for (y, &k) in channel.column(x).iter().enumerate() {
            if k > 0.0 {
                let cond = (joint_iy[j * ny + y] / pj).max(1e-300);
                acc += k * (cond / q[y].max(1e-300)).ln();
            }
        }
        *g = acc;
    }
    Ok(())
}

/// Euclidean projection onto the probability simplex.
fn project_to_simplex(v: &mut [f64]) {
    let n = v.len();
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumsum = 0.0;
    let mut tau = 0.0;
    for (k, &s) in sorted.iter().enumerate() {
        cumsum += s;
        let t = (cumsum - 1.0) / (k + 1) as f64;
        if s - t > 0.0 {
            tau = t;
        }
    }
    let mut sum = 0.0;
    for x in v.iter_mut() {
        *x = (*x - tau).max(0.0);
        sum += *x;
    }
    // guard against degenerate rounding
    if sum > 0.0 {
        for x in v.iter_mut() {
            *x /= sum;
        }
    } else {
        for x in v.iter_mut() {
            *x = 1.0 / n as f64;
        }
    }
}

/// Mix toward uniform until the entropy floor holds (bisected on the mixing
/// weight; concavity of entropy makes the feasible set an interval ending at
/// the uniform distribution).
fn raise_entropy_to(p: &mut Vec<f64>, b: f64) {
    if b <= 0.0 || entropy_nats(p) >= b {
        return;
    }
    let n = p.len();
    let uniform = 1.0 / n as f64;
    let mix = |alpha: f64, p: &[f64]| -> Vec<f64> {
        p.iter().map(|&v| (1.0 - alpha) * v + alpha * uniform).collect()
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if entropy_nats(&mix(mid, p)) >= b {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    *p = mix(hi, p);
}
