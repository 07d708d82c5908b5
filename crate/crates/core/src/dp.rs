//! Differential-privacy audits of channel matrices.
//!
//! The exact privacy level of a finite channel is the largest log-ratio
//! between two transition probabilities whose datasets differ in exactly one
//! coordinate: scanning every axis-parallel line of the matrix extracts it
//! together with a witness pair. A sampling crosscheck confirms the verdict
//! against the leakage actually observable under independent-record priors:
//! passing channels must bound every sampled per-individual log-ratio, and
//! failing channels must leak above the budget under two-point priors
//! concentrated on the witness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::ChannelMatrix;
use crate::error::{Error, Result};
use crate::universe::RecordUniverse;

/// Slack allowed when comparing the exact privacy level against a budget.
const CHECK_TOLERANCE: f64 = 1e-12;

/// Slack above the budget before a sampled leakage counts as a violation.
const FORWARD_TOLERANCE: f64 = 1e-9;

/// Two-point prior weights swept by the converse search, from balanced down
/// to nearly degenerate (where the leakage approaches the exact level).
const CONVERSE_GRID: [f64; 12] = [
    1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 1e-11, 1e-12,
];

/// Entry pair attaining the maximal transition-probability ratio. The two
/// datasets differ in exactly the `axis` coordinate, and the ratio is
/// entry(output, numerator) / entry(output, denominator).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpWitness {
    pub axis: usize,
    pub output: usize,
    pub numerator: usize,
    pub denominator: usize,
}

/// Exact privacy level of a channel, with the pair attaining it and, when a
/// budget was checked, the verdict against that budget.
#[derive(Debug, Clone, PartialEq)]
pub struct DpAuditReport {
    /// Largest log-ratio over one-coordinate dataset pairs; may be +infinity.
    pub epsilon_star_nats: f64,
    /// Pair attaining the level; absent only when the universe holds a
    /// single dataset (no pairs exist).
    pub witness: Option<DpWitness>,
    /// Budget the channel was checked against, if any.
    pub budget_nats: Option<f64>,
    /// Verdict against the budget, if one was checked.
    pub pass: Option<bool>,
}

/// Exact privacy level: the maximum of ln(a/b) over all entry pairs (a, b)
/// lying on a line parallel to one coordinate axis, i.e. over transition
/// probabilities of dataset pairs differing in exactly one coordinate.
/// Pairs with a > 0 and b = 0 force the level to +infinity; pairs with both
/// entries zero contribute nothing. Ties resolve to the first pair in
/// (axis, complement, output, pair) scan order.
pub fn dp_epsilon(channel: &ChannelMatrix) -> DpAuditReport {
    let universe = channel.universe();
    let ny = channel.output_size();
    let mut best = f64::NEG_INFINITY;
    let mut witness = None;

    for axis in 0..universe.individuals() {
        let k = universe.size(axis);
        let comp_total = universe
            .complement_total(axis)
            .expect("axis is in range");
        for comp in 0..comp_total {
            let line: Vec<usize> = (0..k)
                .map(|j| {
                    universe
                        .joint_index(axis, j, comp)
                        .expect("loop bounds keep indices in range")
                })
                .collect();
            for y in 0..ny {
                for (j, &x) in line.iter().enumerate() {
                    let a = channel.entry(y, x);
                    if a <= 0.0 {
                        continue;
                    }
                    for (jp, &xp) in line.iter().enumerate() {
                        if j == jp {
                            continue;
                        }
                        let b = channel.entry(y, xp);
                        let ratio = if b > 0.0 { (a / b).ln() } else { f64::INFINITY };
                        if ratio > best {
                            best = ratio;
                            witness = Some(DpWitness {
                                axis,
                                output: y,
                                numerator: x,
                                denominator: xp,
                            });
                            if best == f64::INFINITY {
                                return DpAuditReport {
                                    epsilon_star_nats: best,
                                    witness,
                                    budget_nats: None,
                                    pass: None,
                                };
                            }
                        }
                    }
                }
            }
        }
    }

    DpAuditReport {
        epsilon_star_nats: if witness.is_some() { best.max(0.0) } else { 0.0 },
        witness,
        budget_nats: None,
        pass: None,
    }
}

/// Audit the channel against a privacy budget in nats: passes iff the exact
/// level is at most `epsilon_nats` + 1e-12.
pub fn check_dp(channel: &ChannelMatrix, epsilon_nats: f64) -> Result<DpAuditReport> {
    if epsilon_nats.is_nan() || epsilon_nats < 0.0 {
        return Err(Error::Domain(format!(
            "privacy budget must be nonnegative, got {epsilon_nats}"
        )));
    }
    let mut report = dp_epsilon(channel);
    report.budget_nats = Some(epsilon_nats);
    report.pass = Some(report.epsilon_star_nats <= epsilon_nats + CHECK_TOLERANCE);
    Ok(report)
}

/// Sampled leakage exceeding the budget on a channel the audit passed —
/// an inconsistency between the audit and observable leakage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakageViolation {
    pub trial: u64,
    pub individual: usize,
    pub leakage_nats: f64,
}

/// Outcome of crosschecking the audit verdict against leakage under
/// independent-record priors.
#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckReport {
    /// Budget the audit was checked against.
    pub budget_nats: f64,
    /// Exact privacy level found by the audit.
    pub epsilon_star_nats: f64,
    /// Audit verdict at the budget.
    pub dp_pass: bool,
    /// Product priors sampled on the forward branch (0 when the audit
    /// failed and the converse search ran instead).
    pub forward_trials: u64,
    /// Largest per-individual leakage observed by whichever branch ran;
    /// +infinity when the witness pair mixes zero and positive entries,
    /// since nearly degenerate priors then leak without bound.
    pub max_leakage_nats: f64,
    /// Forward-branch leakages above budget + 1e-9. Any entry here means
    /// the audit and the sampled leakage disagree; never ignore them.
    pub violations: Vec<LeakageViolation>,
    /// Converse branch only: whether the search leaked above the budget,
    /// demonstrating the failure is real.
    pub converse_exceeds_budget: Option<bool>,
}

impl CrosscheckReport {
    /// True when the branch that ran supports the audit verdict: no forward
    /// violations on a pass, leakage above budget on a fail.
    pub fn consistent(&self) -> bool {
        if self.dp_pass {
            self.violations.is_empty()
        } else {
            self.converse_exceeds_budget == Some(true)
        }
    }
}

/// Crosscheck the audit verdict at `epsilon_nats` against leakage under
/// priors that treat records independently. If the audit passes, draw
/// `trials` random product priors (simplex-uniform marginal per record) and
/// record any per-individual leakage above the budget as a violation. If it
/// fails, sweep two-point marginals concentrated on the witness pair and
/// report the largest leakage found, which is expected to exceed the budget.
/// Deterministic for a fixed seed.
pub fn crosscheck_independent_priors(
    channel: &ChannelMatrix,
    epsilon_nats: f64,
    trials: u64,
    seed: u64,
) -> Result<CrosscheckReport> {
    if trials == 0 {
        return Err(Error::Domain("crosscheck needs at least one trial".into()));
    }
    let audit = check_dp(channel, epsilon_nats)?;
    let dp_pass = audit.pass.expect("check_dp sets the verdict");
    let universe = channel.universe();

    if dp_pass {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut max_leakage = 0.0_f64;
        let mut violations = Vec::new();
        for trial in 0..trials {
            let marginals: Vec<Vec<f64>> = universe
                .sizes()
                .iter()
                .map(|&k| sample_simplex_uniform(&mut rng, k))
                .collect();
            for (individual, leakage) in
                per_individual_leakage(channel, &marginals)?.into_iter().enumerate()
            {
                max_leakage = max_leakage.max(leakage);
                if leakage > epsilon_nats + FORWARD_TOLERANCE {
                    violations.push(LeakageViolation {
                        trial,
                        individual,
                        leakage_nats: leakage,
                    });
                }
            }
        }
        return Ok(CrosscheckReport {
            budget_nats: epsilon_nats,
            epsilon_star_nats: audit.epsilon_star_nats,
            dp_pass,
            forward_trials: trials,
            max_leakage_nats: max_leakage,
            violations,
            converse_exceeds_budget: None,
        });
    }

    // failing audit: leakage concentrated on the witness pair
    let witness = audit
        .witness
        .expect("a failing audit has a positive level, hence a witness");
    let achieved = converse_leakage(channel, &witness)?;
    Ok(CrosscheckReport {
        budget_nats: epsilon_nats,
        epsilon_star_nats: audit.epsilon_star_nats,
        dp_pass,
        forward_trials: 0,
        max_leakage_nats: achieved,
        violations: Vec::new(),
        converse_exceeds_budget: Some(achieved > epsilon_nats),
    })
}

/// Largest leakage reachable by product priors that fix every coordinate at
/// the witness values except the witness axis, which carries a two-point
/// marginal on the witness pair. Sweeping the two-point weight toward zero
/// drives the leakage to the entry log-ratio itself; when one entry of the
/// pair is zero and the other positive the supremum is unbounded and
/// +infinity is reported directly.
fn converse_leakage(channel: &ChannelMatrix, witness: &DpWitness) -> Result<f64> {
    let universe = channel.universe();
    let coords = universe.decode(witness.numerator)?;
    let coords_alt = universe.decode(witness.denominator)?;
    let j = coords[witness.axis];
    let j_alt = coords_alt[witness.axis];

    for y in 0..channel.output_size() {
        let a = channel.entry(y, witness.numerator) > 0.0;
        let b = channel.entry(y, witness.denominator) > 0.0;
        if a != b {
            return Ok(f64::INFINITY);
        }
    }

    let mut achieved = 0.0_f64;
    for &t in &CONVERSE_GRID {
        for (heavy, light) in [(j, j_alt), (j_alt, j)] {
            let marginals: Vec<Vec<f64>> = universe
                .sizes()
                .iter()
                .enumerate()
                .map(|(k, &size)| {
                    let mut m = vec![0.0; size];
                    if k == witness.axis {
                        m[heavy] = 1.0 - t;
                        m[light] = t;
                    } else {
                        m[coords[k]] = 1.0;
                    }
                    m
                })
                .collect();
            for leakage in per_individual_leakage(channel, &marginals)? {
                achieved = achieved.max(leakage);
            }
        }
    }
    Ok(achieved)
}

/// Per-individual leakage max over supported inputs and outputs of
/// ln(p(y | x_i) / p(y)) under a product prior given by one marginal per
/// record, where p(y | x_i) mixes the channel over the other records.
fn per_individual_leakage(
    channel: &ChannelMatrix,
    marginals: &[Vec<f64>],
) -> Result<Vec<f64>> {
    let universe = channel.universe();
    if marginals.len() != universe.individuals() {
        return Err(Error::Dimension(format!(
            "{} marginals for {} records",
            marginals.len(),
            universe.individuals()
        )));
    }
    for (k, m) in marginals.iter().enumerate() {
        if m.len() != universe.size(k) {
            return Err(Error::Dimension(format!(
                "marginal {k} has {} weights for a domain of {}",
                m.len(),
                universe.size(k)
            )));
        }
    }
    let ny = channel.output_size();
    let mut leakages = Vec::with_capacity(universe.individuals());

    for i in 0..universe.individuals() {
        let k = universe.size(i);
        let comp_sizes: Vec<usize> = universe
            .sizes()
            .iter()
            .enumerate()
            .filter(|&(idx, _)| idx != i)
            .map(|(_, &s)| s)
            .collect();
        // complement weights under the product prior, indexed like joint_index
        let comp_weights: Vec<f64> = if comp_sizes.is_empty() {
            vec![1.0]
        } else {
            let comp_universe = RecordUniverse::new(comp_sizes)?;
            (0..comp_universe.total())
                .map(|c| {
                    let digits = comp_universe.decode(c).expect("c is in range");
                    digits
                        .iter()
                        .enumerate()
                        .map(|(pos, &d)| {
                            let original = if pos < i { pos } else { pos + 1 };
                            marginals[original][d]
                        })
                        .product()
                })
                .collect()
        };

        // induced kernel p(y | x_i) and output law p(y)
        let mut induced = vec![0.0_f64; ny * k];
        for j in 0..k {
            for (c, &w) in comp_weights.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let x = universe.joint_index(i, j, c)?;
                for y in 0..ny {
                    induced[j * ny + y] += w * channel.entry(y, x);
                }
            }
        }
        let mut output = vec![0.0_f64; ny];
        for (j, &pj) in marginals[i].iter().enumerate() {
            if pj == 0.0 {
                continue;
            }
            for y in 0..ny {
                output[y] += pj * induced[j * ny + y];
            }
        }

        let mut leakage = 0.0_f64;
        for (j, &pj) in marginals[i].iter().enumerate() {
            if pj == 0.0 {
                continue;
            }
            for y in 0..ny {
                let m = induced[j * ny + y];
                if m > 0.0 && output[y] > 0.0 {
                    leakage = leakage.max((m / output[y]).ln());
                }
            }
        }
        leakages.push(leakage);
    }
    Ok(leakages)
}

/// Simplex-uniform weights of the given length.
fn sample_simplex_uniform(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..len)
        .map(|_| -f64::ln_1p(-rng.gen::<f64>()))
        .collect();
    let total: f64 = w.iter().sum();
    if total > 0.0 {
        for v in &mut w {
            *v /= total;
        }
    } else {
        w = vec![1.0 / len as f64; len];
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{QueryTable, StochasticMatrix};
    use crate::mechanisms::randomized_response_channel;

    fn equality_query() -> QueryTable {
        let u = RecordUniverse::new(vec![3, 2]).unwrap();
        QueryTable::new(u, 2, vec![1, 0, 0, 0, 1, 0]).unwrap()
    }

    fn random_channel(universe: &RecordUniverse, ny: usize, seed: u64) -> ChannelMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let columns: Vec<Vec<f64>> = (0..universe.total())
            .map(|_| sample_simplex_uniform(&mut rng, ny))
            .collect();
        ChannelMatrix::new(
            universe.clone(),
            StochasticMatrix::from_columns(&columns).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn constant_channel_has_level_zero() {
        let u = RecordUniverse::new(vec![2, 3]).unwrap();
        let col = vec![0.3, 0.7];
        let ch = ChannelMatrix::new(
            u.clone(),
            StochasticMatrix::from_columns(&vec![col; u.total()]).unwrap(),
        )
        .unwrap();
        let report = dp_epsilon(&ch);
        assert_eq!(report.epsilon_star_nats, 0.0);
        // equal positive entries witness the (vacuous) maximum
        assert!(report.witness.is_some());
    }

    #[test]
    fn flip_channel_level_is_the_odds_ratio() {
        let ch = randomized_response_channel(&equality_query(), 0.25, false).unwrap();
        let report = dp_epsilon(&ch);
        assert!((report.epsilon_star_nats - 3.0_f64.ln()).abs() <= 1e-12);
        assert!((report.epsilon_star_nats - 1.098612).abs() < 1e-6);
        let w = report.witness.unwrap();
        let coords_num = ch.universe().decode(w.numerator).unwrap();
        let coords_den = ch.universe().decode(w.denominator).unwrap();
        let differing: Vec<usize> = (0..coords_num.len())
            .filter(|&k| coords_num[k] != coords_den[k])
            .collect();
        assert_eq!(differing, vec![w.axis]);
        let ratio = ch.entry(w.output, w.numerator) / ch.entry(w.output, w.denominator);
        assert!((ratio.ln() - report.epsilon_star_nats).abs() <= 1e-15);
    }

    #[test]
    fn deterministic_nonconstant_channel_is_unbounded() {
        let u = RecordUniverse::new(vec![2]).unwrap();
        let ch = ChannelMatrix::new(
            u,
            StochasticMatrix::from_columns(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap(),
        )
        .unwrap();
        let report = dp_epsilon(&ch);
        assert_eq!(report.epsilon_star_nats, f64::INFINITY);
        let w = report.witness.unwrap();
        assert_eq!((w.output, w.numerator, w.denominator), (0, 0, 1));
    }

    #[test]
    fn singleton_universe_has_no_pairs() {
        let u = RecordUniverse::new(vec![1]).unwrap();
        let ch = ChannelMatrix::new(
            u,
            StochasticMatrix::from_columns(&[vec![0.5, 0.5]]).unwrap(),
        )
        .unwrap();
        let report = dp_epsilon(&ch);
        assert_eq!(report.epsilon_star_nats, 0.0);
        assert!(report.witness.is_none());
    }

    #[test]
    fn budget_check_brackets_the_exact_level() {
        let ch = randomized_response_channel(&equality_query(), 0.25, false).unwrap();
        let pass = check_dp(&ch, 1.1).unwrap();
        assert_eq!(pass.pass, Some(true));
        assert_eq!(pass.budget_nats, Some(1.1));
        let fail = check_dp(&ch, 1.0).unwrap();
        assert_eq!(fail.pass, Some(false));
        assert!(fail.witness.is_some());
        assert!(check_dp(&ch, -0.1).is_err());
        assert!(check_dp(&ch, f64::NAN).is_err());
    }

    #[test]
    fn constant_channel_passes_a_zero_budget() {
        let u = RecordUniverse::new(vec![2, 2]).unwrap();
        let ch = ChannelMatrix::new(
            u.clone(),
            StochasticMatrix::from_columns(&vec![vec![0.5, 0.5]; u.total()]).unwrap(),
        )
        .unwrap();
        assert_eq!(check_dp(&ch, 0.0).unwrap().pass, Some(true));
    }

    #[test]
    fn flip_channel_level_matches_the_closed_form() {
        let query = equality_query();
        for k in 1..=9 {
            let p = 0.1 * k as f64;
            let ch = randomized_response_channel(&query, p, false).unwrap();
            let expected = ((1.0 - p) / p).ln().abs();
            let got = dp_epsilon(&ch).epsilon_star_nats;
            assert!(
                (got - expected).abs() <= 1e-12,
                "p = {p}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn level_is_invariant_under_output_and_value_relabeling() {
        let u = RecordUniverse::new(vec![2, 3]).unwrap();
        for seed in 0..30u64 {
            let ch = random_channel(&u, 3, 0x5d00 + seed);
            let base = dp_epsilon(&ch).epsilon_star_nats;

            // swap outputs 0 and 2
            let perm_cols: Vec<Vec<f64>> = (0..u.total())
                .map(|x| {
                    let c = ch.column(x);
                    vec![c[2], c[1], c[0]]
                })
                .collect();
            let permuted = ChannelMatrix::new(
                u.clone(),
                StochasticMatrix::from_columns(&perm_cols).unwrap(),
            )
            .unwrap();
            assert_eq!(dp_epsilon(&permuted).epsilon_star_nats, base);

            // cycle the values of coordinate 1
            let relabel_cols: Vec<Vec<f64>> = (0..u.total())
                .map(|x| {
                    let mut coords = u.decode(x).unwrap();
                    coords[1] = (coords[1] + 1) % 3;
                    ch.column(u.encode(&coords).unwrap()).to_vec()
                })
                .collect();
            let relabeled = ChannelMatrix::new(
                u.clone(),
                StochasticMatrix::from_columns(&relabel_cols).unwrap(),
            )
            .unwrap();
            assert_eq!(dp_epsilon(&relabeled).epsilon_star_nats, base);
        }
    }

    /// Adding the same constant to every entry of the matrix and
    /// renormalizing contracts every ratio, so the level never rises.
    #[test]
    fn uniform_smoothing_never_raises_the_level() {
        let u = RecordUniverse::new(vec![2, 2]).unwrap();
        for seed in 0..50u64 {
            let ch = random_channel(&u, 2, 0x530 + seed);
            let base = dp_epsilon(&ch).epsilon_star_nats;
            for c in [0.01, 0.1, 1.0] {
                let cols: Vec<Vec<f64>> = (0..u.total())
                    .map(|x| {
                        let col = ch.column(x);
                        let s: f64 = col.iter().map(|v| v + c).sum();
                        col.iter().map(|v| (v + c) / s).collect()
                    })
                    .collect();
                let smoothed = ChannelMatrix::new(
                    u.clone(),
                    StochasticMatrix::from_columns(&cols).unwrap(),
                )
                .unwrap();
                let after = dp_epsilon(&smoothed).epsilon_star_nats;
                assert!(
                    after <= base + 1e-12,
                    "seed {seed}, c = {c}: {after} > {base}"
                );
            }
        }
    }

    /// Smoothing only one adjacent column pair is NOT monotone: the smoothed
    /// entries can outgrow untouched neighbors on a crossing line.
    #[test]
    fn smoothing_a_single_column_pair_can_raise_the_level() {
        let u = RecordUniverse::new(vec![2, 2]).unwrap();
        let cols = [
            vec![0.1, 0.9],
            vec![0.1, 0.9],
            vec![0.05, 0.95],
            vec![0.05, 0.95],
        ];
        let ch = ChannelMatrix::new(
            u.clone(),
            StochasticMatrix::from_columns(&cols).unwrap(),
        )
        .unwrap();
        let base = dp_epsilon(&ch).epsilon_star_nats;
        assert!((base - 2.0_f64.ln()).abs() <= 1e-12);

        // smooth only the axis-0 pair {0, 1} with c = 1
        let smoothed_col: Vec<f64> = cols[0].iter().map(|v| (v + 1.0) / 3.0).collect();
        let smoothed = ChannelMatrix::new(
            u,
            StochasticMatrix::from_columns(&[
                smoothed_col.clone(),
                smoothed_col,
                cols[2].clone(),
                cols[3].clone(),
            ])
            .unwrap(),
        )
        .unwrap();
        let after = dp_epsilon(&smoothed).epsilon_star_nats;
        assert!((after - (1.1_f64 / 3.0 / 0.05).ln()).abs() <= 1e-12);
        assert!(after > base + 0.5);
    }

    #[test]
    fn forward_crosscheck_bounds_every_sampled_leakage() {
        let ch = randomized_response_channel(&equality_query(), 0.25, false).unwrap();
        let report =
            crosscheck_independent_priors(&ch, 3.0_f64.ln(), 200, 0xdab).unwrap();
        assert!(report.dp_pass);
        assert_eq!(report.forward_trials, 200);
        assert!(report.violations.is_empty());
        assert!(report.consistent());
        assert!(report.max_leakage_nats <= 3.0_f64.ln() + 1e-9);
        assert!(report.max_leakage_nats > 0.0);
        assert_eq!(report.converse_exceeds_budget, None);
    }

    #[test]
    fn crosscheck_is_deterministic_for_a_seed() {
        let ch = randomized_response_channel(&equality_query(), 0.3, false).unwrap();
        let eps = dp_epsilon(&ch).epsilon_star_nats;
        let a = crosscheck_independent_priors(&ch, eps, 50, 7).unwrap();
        let b = crosscheck_independent_priors(&ch, eps, 50, 7).unwrap();
        assert_eq!(a, b);
        let c = crosscheck_independent_priors(&ch, eps, 50, 8).unwrap();
        assert!(a.max_leakage_nats != c.max_leakage_nats);
    }

    #[test]
    fn converse_search_leaks_above_a_failing_budget() {
        let ch = randomized_response_channel(&equality_query(), 0.25, false).unwrap();
        let report = crosscheck_independent_priors(&ch, 1.0, 10, 0).unwrap();
        assert!(!report.dp_pass);
        assert_eq!(report.forward_trials, 0);
        assert_eq!(report.converse_exceeds_budget, Some(true));
        assert!(report.consistent());
        // the two-point sweep approaches the exact level from below
        assert!(report.max_leakage_nats > 1.0);
        assert!(report.max_leakage_nats <= report.epsilon_star_nats + 1e-9);
        assert!((report.max_leakage_nats - 3.0_f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn converse_search_reports_unbounded_leakage_on_deterministic_channels() {
        let u = RecordUniverse::new(vec![2]).unwrap();
        let ch = ChannelMatrix::new(
            u,
            StochasticMatrix::from_columns(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap(),
        )
        .unwrap();
        let report = crosscheck_independent_priors(&ch, 1.0, 10, 0).unwrap();
        assert!(!report.dp_pass);
        assert_eq!(report.max_leakage_nats, f64::INFINITY);
        assert_eq!(report.converse_exceeds_budget, Some(true));
        assert!(report.consistent());
    }

    #[test]
    fn constant_channel_forward_leakage_is_exactly_zero() {
        let u = RecordUniverse::new(vec![2, 2]).unwrap();
        let ch = ChannelMatrix::new(
            u.clone(),
            StochasticMatrix::from_columns(&vec![vec![0.4, 0.6]; u.total()]).unwrap(),
        )
        .unwrap();
        let report = crosscheck_independent_priors(&ch, 0.0, 25, 3).unwrap();
        assert!(report.dp_pass);
        // identical columns leak nothing beyond marginal renormalization ulps
        assert!(report.max_leakage_nats <= 1e-12);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn crosscheck_requires_at_least_one_trial() {
        let ch = randomized_response_channel(&equality_query(), 0.25, false).unwrap();
        assert!(crosscheck_independent_priors(&ch, 2.0, 0, 0).is_err());
    }
}
