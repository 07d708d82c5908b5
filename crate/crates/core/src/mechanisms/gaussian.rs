use statrs::distribution::{ContinuousCDF, Normal};

use crate::channel::{ChannelMatrix, StochasticMatrix};
use crate::error::{Error, Result};
use crate::universe::RecordUniverse;

/// Largest probability mass allowed to fall outside the discretization grid
/// before folding is considered a misuse of the grid.
const TAIL_TOLERANCE: f64 = 1e-6;

/// Real-valued query released through additive Gaussian noise: output
/// value(x) + Z with Z ~ N(0, noise), values clamped to [-t, t].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSpec {
    values: Vec<f64>,
    t: f64,
    noise: f64,
}

impl GaussianSpec {
    /// Clamp bound t and noise variance must be positive; query values are
    /// clamped into [-t, t].
    pub fn new(values: Vec<f64>, t: f64, noise: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("clamp bound must be positive, got {t}")));
        }
        if !(noise > 0.0) || !noise.is_finite() {
            return Err(Error::Domain(format!(
                "noise variance must be positive, got {noise}"
            )));
        }
        if values.is_empty() {
            return Err(Error::Domain("no query values given".into()));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("query value {v} is not finite")));
        }
        Ok(Self {
            values: values.into_iter().map(|v| v.clamp(-t, t)).collect(),
            t,
            noise,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }
}

/// Uniform output grid [lo, hi) split into cells of width `step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Grid {
    /// Number of cells; the step must tile the span.
    pub fn cells(&self) -> Result<usize> {
        if !self.lo.is_finite() || !self.hi.is_finite() || self.hi <= self.lo {
            return Err(Error::Domain(format!(
                "grid [{}, {}] is not a forward interval",
                self.lo, self.hi
            )));
        }
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::Domain(format!(
                "grid step must be positive, got {}",
                self.step
            )));
        }
        let span = self.hi - self.lo;
        let n = (span / self.step).round();
        if n < 1.0 || ((span - n * self.step) / span).abs() > 1e-6 {
            return Err(Error::Domain(format!(
                "grid step {} does not tile the span {span}",
                self.step
            )));
        }
        Ok(n as usize)
    }
}

/// Smallest noise variance meeting an information budget of `epsilon` nats
/// for values clamped to [-t, t]: t^2 / (e^{2 epsilon} - 1).
pub fn gaussian_calibrate(epsilon: f64, t: f64) -> Result<f64> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Domain(format!(
            "capacity budget must be positive, got {epsilon}"
        )));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("clamp bound must be positive, got {t}")));
    }
    Ok(t * t / f64::exp_m1(2.0 * epsilon))
}

/// Capacity bound of the clamped Gaussian release:
/// (1/2) log(1 + t^2 / noise) nats.
pub fn gaussian_capacity_bound(t: f64, noise: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("clamp bound must be positive, got {t}")));
    }
    if !(noise > 0.0) || !noise.is_finite() {
        return Err(Error::Domain(format!(
            "noise variance must be positive, got {noise}"
        )));
    }
    Ok(0.5 * f64::ln_1p(t * t / noise))
}

/// Finite channel over grid cells: column x holds the Gaussian cell masses
/// of N(value(x), noise), with the tails beyond the grid folded into the two
/// boundary cells. Grids leaving more than 1e-6 of any column's mass outside
/// are rejected; cover [-t - 6 sqrt(noise), t + 6 sqrt(noise)] to be safe.
pub fn discretize_gaussian(
    spec: &GaussianSpec,
    universe: &RecordUniverse,
    grid: &Grid,
) -> Result<ChannelMatrix> {
    if spec.values().len() != universe.total() {
        return Err(Error::Dimension(format!(
            "{} query values for a universe of {} datasets",
            spec.values().len(),
            universe.total()
        )));
    }
    let cells = grid.cells()?;
    let sigma = spec.noise().sqrt();
    let std_normal = Normal::new(0.0, 1.0).expect("unit normal");

    let mut columns = Vec::with_capacity(universe.total());
    for &mu in spec.values() {
        let below = std_normal.cdf((grid.lo - mu) / sigma);
        let above = 1.0 - std_normal.cdf((grid.hi - mu) / sigma);
        if below + above > TAIL_TOLERANCE {
            return Err(Error::Grid(format!(
                "{:.3e} of the mass at mean {mu} lies outside [{}, {}]",
                below + above,
                grid.lo,
                grid.hi
            )));
        }
        // cumulative masses with folded tails: exactly 0 at the left edge
        // and 1 at the right edge, interior edges by the normal CDF
        let mut column = Vec::with_capacity(cells);
        let mut prev = 0.0;
        for j in 1..=cells {
            let cum = if j == cells {
                1.0
            } else {
                std_normal.cdf((grid.lo + j as f64 * grid.step - mu) / sigma)
            };
            column.push((cum - prev).max(0.0));
            prev = cum;
        }
        columns.push(column);
    }
    ChannelMatrix::new(
        universe.clone(),
        StochasticMatrix::from_columns(&columns)?,
    )
}

/// Inputs for the noise-scale comparison across release regimes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseScaleInputs {
    /// Differential-privacy budget (nats).
    pub epsilon_dp: f64,
    /// Failure mass of the approximate-DP Gaussian mechanism.
    pub delta_prime: f64,
    /// Query sensitivity.
    pub sensitivity: f64,
    /// Clamp bound on the query value.
    pub t: f64,
    /// Information-privacy budget (nats).
    pub epsilon_ip: f64,
    /// Balance slack added to the information budget.
    pub balance_slack: f64,
}

/// Noise scales (standard deviations) needed by each regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseScaleReport {
    /// Laplace mechanism for pure epsilon-DP: sensitivity / epsilon.
    pub laplace_scale: f64,
    /// Gaussian mechanism for (epsilon, delta')-DP:
    /// sqrt(2 log(1.25 / delta')) sensitivity / epsilon.
    pub gaussian_mechanism_scale: f64,
    /// Gaussian channel for epsilon-IP with balance slack delta:
    /// t / sqrt(e^{2 (epsilon + delta)} - 1).
    pub channel_scale: f64,
}

/// Compare the noise scale a query needs under pure DP (Laplace), approximate
/// DP (Gaussian mechanism), and information privacy (Gaussian channel).
pub fn noise_scale_report(inputs: &NoiseScaleInputs) -> Result<NoiseScaleReport> {
    let NoiseScaleInputs {
        epsilon_dp,
        delta_prime,
        sensitivity,
        t,
        epsilon_ip,
        balance_slack,
    } = *inputs;
    if !(epsilon_dp > 0.0) {
        return Err(Error::Domain(format!(
            "DP budget must be positive, got {epsilon_dp}"
        )));
    }
    if !(delta_prime > 0.0 && delta_prime < 1.0) {
        return Err(Error::Domain(format!(
            "failure mass must lie in (0, 1), got {delta_prime}"
        )));
    }
    if !(sensitivity > 0.0) {
        return Err(Error::Domain(format!(
            "sensitivity must be positive, got {sensitivity}"
        )));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("clamp bound must be positive, got {t}")));
    }
    if !(epsilon_ip > 0.0) {
        return Err(Error::Domain(format!(
            "IP budget must be positive, got {epsilon_ip}"
        )));
    }
    if !(balance_slack >= 0.0) {
        return Err(Error::Domain(format!(
            "balance slack must be nonnegative, got {balance_slack}"
        )));
    }
    Ok(NoiseScaleReport {
        laplace_scale: sensitivity / epsilon_dp,
        gaussian_mechanism_scale: (2.0 * (1.25 / delta_prime).ln()).sqrt() * sensitivity
            / epsilon_dp,
        channel_scale: t / f64::exp_m1(2.0 * (epsilon_ip + balance_slack)).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::{individual_channel_capacity, CapacityOptions};
    use crate::channel::validate_channel;

    #[test]
    fn calibration_matches_the_closed_form() {
        // 1 / (e - 1) = 0.581977 at a half-nat budget with unit clamp
        let n = gaussian_calibrate(0.5, 1.0).unwrap();
        assert!((n - 1.0 / f64::exp_m1(1.0)).abs() < 1e-15);
        assert!((n - 0.581977).abs() < 1e-6);
    }

    #[test]
    fn bound_matches_the_closed_form() {
        let b = gaussian_capacity_bound(2.0, 4.0).unwrap();
        assert!((b - 0.5 * std::f64::consts::LN_2).abs() < 1e-15);
        assert!((b - 0.346574).abs() < 1e-6);
    }

    #[test]
    fn calibration_and_bound_invert_each_other() {
        for eps in [0.1, 0.5, 1.0, 2.0] {
            for t in [0.5, 1.0, 3.0] {
                let n = gaussian_calibrate(eps, t).unwrap();
                let back = gaussian_capacity_bound(t, n).unwrap();
                assert!(
                    (back - eps).abs() <= 1e-12,
                    "eps = {eps}, t = {t}: {back}"
                );
            }
        }
        // the reference pair round-trips exactly
        let n = gaussian_calibrate(0.5, 1.0).unwrap();
        assert_eq!(gaussian_capacity_bound(1.0, n).unwrap(), 0.5);
    }

    #[test]
    fn calibration_domain_is_checked() {
        assert!(gaussian_calibrate(0.0, 1.0).is_err());
        assert!(gaussian_calibrate(0.5, 0.0).is_err());
        assert!(gaussian_capacity_bound(1.0, -1.0).is_err());
    }

    #[test]
    fn spec_clamps_values_into_the_bound() {
        let s = GaussianSpec::new(vec![-3.0, 0.25, 3.0], 1.0, 0.5).unwrap();
        assert_eq!(s.values(), &[-1.0, 0.25, 1.0]);
        assert!(GaussianSpec::new(vec![0.0], 0.0, 1.0).is_err());
        assert!(GaussianSpec::new(vec![0.0], 1.0, 0.0).is_err());
        assert!(GaussianSpec::new(vec![f64::NAN], 1.0, 1.0).is_err());
    }

    #[test]
    fn grid_cell_count_requires_tiling() {
        assert_eq!(Grid { lo: -7.0, hi: 7.0, step: 0.01 }.cells().unwrap(), 1400);
        assert!(Grid { lo: 0.0, hi: 1.0, step: 0.3 }.cells().is_err());
        assert!(Grid { lo: 1.0, hi: 0.0, step: 0.1 }.cells().is_err());
    }

    #[test]
    fn discretized_columns_are_stochastic_and_centered() {
        let u = RecordUniverse::new(vec![2]).unwrap();
        let spec = GaussianSpec::new(vec![-1.0, 1.0], 1.0, 1.0).unwrap();
        let grid = Grid { lo: -7.0, hi: 7.0, step: 0.01 };
        let ch = discretize_gaussian(&spec, &u, &grid).unwrap();
        let report = validate_channel(&ch).unwrap();
        assert!(report.max_column_deviation <= 1e-9);
        // mass of column 0 below its mean -1: half
        let cells_below: usize = ((-1.0 - grid.lo) / grid.step).round() as usize;
        let below: f64 = (0..cells_below).map(|y| ch.entry(y, 0)).sum();
        assert!((below - 0.5).abs() < 1e-3);
    }

    #[test]
    fn narrow_grids_are_rejected() {
        let u = RecordUniverse::new(vec![2]).unwrap();
        let spec = GaussianSpec::new(vec![-1.0, 1.0], 1.0, 1.0).unwrap();
        let grid = Grid { lo: -2.0, hi: 2.0, step: 0.01 };
        assert!(matches!(
            discretize_gaussian(&spec, &u, &grid),
            Err(Error::Grid(_))
        ));
    }

    #[test]
    fn value_count_must_match_the_universe() {
        let u = RecordUniverse::new(vec![3]).unwrap();
        let spec = GaussianSpec::new(vec![0.0, 1.0], 1.0, 1.0).unwrap();
        let grid = Grid { lo: -7.0, hi: 7.0, step: 0.1 };
        assert!(matches!(
            discretize_gaussian(&spec, &u, &grid),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn discretized_capacity_stays_under_the_continuous_bound() {
        let u = RecordUniverse::new(vec![2]).unwrap();
        let spec = GaussianSpec::new(vec![-1.0, 1.0], 1.0, 1.0).unwrap();
        let grid = Grid { lo: -7.0, hi: 7.0, step: 0.02 };
        let ch = discretize_gaussian(&spec, &u, &grid).unwrap();
        let report = individual_channel_capacity(&ch, &CapacityOptions::default()).unwrap();
        let bound = gaussian_capacity_bound(1.0, 1.0).unwrap();
        assert!(report.value_nats <= bound + 1e-9);
        // the two-point +-t release at this noise comes close to the bound
        assert!(report.value_nats > bound - 0.05);
    }

    #[test]
    fn reference_noise_scales() {
        let r = noise_scale_report(&NoiseScaleInputs {
            epsilon_dp: 1.0,
            delta_prime: 1e-5,
            sensitivity: 1.0,
            t: 1.0,
            epsilon_ip: 1.0,
            balance_slack: 0.0,
        })
        .unwrap();
        assert_eq!(r.laplace_scale, 1.0);
        assert!((r.gaussian_mechanism_scale - 4.8448).abs() < 1e-3);
        assert!((r.channel_scale - 0.39558).abs() < 1e-4);
    }

    #[test]
    fn channel_scale_is_the_calibrated_deviation() {
        let inputs = NoiseScaleInputs {
            epsilon_dp: 1.0,
            delta_prime: 1e-5,
            sensitivity: 1.0,
            t: 2.0,
            epsilon_ip: 0.7,
            balance_slack: 0.1,
        };
        let r = noise_scale_report(&inputs).unwrap();
        let n = gaussian_calibrate(inputs.epsilon_ip + inputs.balance_slack, inputs.t).unwrap();
        assert!((r.channel_scale - n.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn noise_report_domain_is_checked() {
        let ok = NoiseScaleInputs {
            epsilon_dp: 1.0,
            delta_prime: 1e-5,
            sensitivity: 1.0,
            t: 1.0,
            epsilon_ip: 1.0,
            balance_slack: 0.0,
        };
        for bad in [
            NoiseScaleInputs { epsilon_dp: 0.0, ..ok },
            NoiseScaleInputs { delta_prime: 0.0, ..ok },
            NoiseScaleInputs { delta_prime: 1.0, ..ok },
            NoiseScaleInputs { sensitivity: -1.0, ..ok },
            NoiseScaleInputs { t: 0.0, ..ok },
            NoiseScaleInputs { epsilon_ip: 0.0, ..ok },
            NoiseScaleInputs { balance_slack: -0.1, ..ok },
        ] {
            assert!(noise_scale_report(&bad).is_err());
        }
    }
}
