//! Individual channel capacity over a finite record universe.
//!
//! The capacity of a channel with respect to individual i is the largest
//! mutual information between coordinate i and the output, maximized over
//! dataset distributions. It suffices to scan the finite family of reduced
//! channels obtained by fixing, for every value of coordinate i, a single
//! assignment of the other coordinates; each member is solved by alternating
//! maximization and the best value over members and individuals is reported.

mod blahut;
mod oracle;
mod restricted;

pub use blahut::{blahut_arimoto, CapacityResult};
pub use oracle::brute_force_capacity_oracle;
pub use restricted::{
    balance_delta_bound, restricted_capacity_lower_bound, BalancePoint, BalanceReport,
};

use std::collections::HashSet;

use crate::channel::{ChannelMatrix, StochasticMatrix};
use crate::dist::InfoUnit;
use crate::error::{Error, Result};

/// A reduced channel is an ordinary column-stochastic matrix whose inputs are
/// the values of a single coordinate.
pub type ReducedChannel = StochasticMatrix;

/// Default cap on the number of enumerated selections per individual.
pub const DEFAULT_ENUM_CAP: u64 = 10_000_000;

/// Resolution at which reduced channels are considered duplicates.
const DEDUP_ROUNDING: f64 = 1e-12;

/// One assignment of the non-target coordinates per value of the target
/// coordinate: `choices[j]` is the complement index used when coordinate
/// `individual` takes value j.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SelectionMap {
    pub individual: usize,
    pub choices: Vec<usize>,
}

/// Reduced channel of a selection: column j is the channel column at the
/// dataset combining coordinate value j with the selected complement.
pub fn reduce_channel(channel: &ChannelMatrix, selection: &SelectionMap) -> Result<ReducedChannel> {
    let u = channel.universe();
    let i = selection.individual;
    if i >= u.individuals() {
        return Err(Error::Index(format!(
            "individual {i} out of range (n = {})",
            u.individuals()
        )));
    }
    if selection.choices.len() != u.size(i) {
        return Err(Error::Dimension(format!(
            "selection for individual {i} has {} choices, coordinate domain is {}",
            selection.choices.len(),
            u.size(i)
        )));
    }
    let ny = channel.output_size();
    let mut entries = Vec::with_capacity(ny * u.size(i));
    for (j, &comp) in selection.choices.iter().enumerate() {
        let x = u.joint_index(i, j, comp)?;
        entries.extend_from_slice(channel.column(x));
    }
    StochasticMatrix::new(ny, u.size(i), entries)
}

/// All selections for individual i in lexicographic order of `choices`,
/// deduplicated by the resulting reduced channel (entries rounded at 1e-12).
///
/// The projected pre-dedup count is complement^|X_i|; exceeding `cap` is an
/// error rather than a long walk.
pub fn enumerate_selections(
    channel: &ChannelMatrix,
    individual: usize,
    cap: u64,
) -> Result<Vec<SelectionMap>> {
    let u = channel.universe();
    if individual >= u.individuals() {
        return Err(Error::Index(format!(
            "individual {individual} out of range (n = {})",
            u.individuals()
        )));
    }
    let m = u.size(individual);
    let comp = u.complement_total(individual)?;

    let projected = (comp as u128).saturating_pow(u32::try_from(m).unwrap_or(u32::MAX));
    if projected > cap as u128 {
        return Err(Error::EnumerationTooLarge { projected, cap });
    }

    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut out = Vec::new();
    let mut choices = vec![0usize; m];
    loop {
        let selection = SelectionMap {
            individual,
            choices: choices.clone(),
        };
        let reduced = reduce_channel(channel, &selection)?;
        let key: Vec<i64> = (0..m)
            .flat_map(|x| reduced.column(x).iter().map(|&v| (v / DEDUP_ROUNDING).round() as i64))
            .collect();
        if seen.insert(key) {
            out.push(selection);
        }
        // next choices tuple in lexicographic order (last position fastest)
        let mut k = m;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            choices[k] += 1;
            if choices[k] < comp {
                break;
            }
            choices[k] = 0;
        }
    }
}

/// Solver and enumeration settings for the capacity pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityOptions {
    /// Bracket-width termination for the alternating solver, in nats.
    pub tol: f64,
    pub max_iter: u64,
    /// Cap on enumerated selections per individual.
    pub enum_cap: u64,
}

impl Default for CapacityOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            // nearly degenerate kernels need a deep budget to close the
            // bracket to the default tolerance; evaluations are cheap
            max_iter: 1_000_000,
            enum_cap: DEFAULT_ENUM_CAP,
        }
    }
}

/// Capacity evidence for one individual.
#[derive(Debug, Clone, PartialEq)]
pub struct IndividualSummary {
    pub individual: usize,
    /// Best capacity over this individual's reduced channels, in nats.
    pub capacity_nats: f64,
    /// Pre-dedup selection count.
    pub selections_total: u64,
    /// Selections actually solved after dedup.
    pub selections_distinct: usize,
}

/// Capacity of a channel: the per-individual maxima and the global argmax.
#[derive(Debug, Clone, PartialEq)]
pub struct IndividualCapacityReport {
    /// max_i of the per-individual capacities, in nats.
    pub value_nats: f64,
    pub argmax_individual: usize,
    pub argmax_selection: SelectionMap,
    /// Solver result on the winning reduced channel.
    pub argmax_result: CapacityResult,
    pub per_individual: Vec<IndividualSummary>,
}

impl IndividualCapacityReport {
    pub fn value(&self, unit: InfoUnit) -> f64 {
        unit.from_nats(self.value_nats)
    }
}

/// Individual channel capacity: solve every deduplicated reduced channel of
/// every individual and keep the maximum.
///
/// Ties go to the smaller individual and then to the lexicographically
/// smaller selection, by scanning in that order with strict improvement.
pub fn individual_channel_capacity(
    channel: &ChannelMatrix,
    options: &CapacityOptions,
) -> Result<IndividualCapacityReport> {
    let u = channel.universe();
    let mut per_individual = Vec::with_capacity(u.individuals());
    let mut best: Option<(usize, SelectionMap, CapacityResult)> = None;

    for i in 0..u.individuals() {
        let selections = enumerate_selections(channel, i, options.enum_cap)?;
        let total = (u.complement_total(i)? as u128).pow(u.size(i) as u32) as u64;
        let mut individual_best = f64::NEG_INFINITY;
        for selection in selections.iter() {
            let reduced = reduce_channel(channel, selection)?;
            let result = blahut_arimoto(&reduced, options.tol, options.max_iter)?;
            individual_best = individual_best.max(result.value);
            let improves = match &best {
                None => true,
                Some((_, _, cur)) => result.value > cur.value,
            };
            if improves {
                best = Some((i, selection.clone(), result));
            }
        }
        per_individual.push(IndividualSummary {
            individual: i,
            capacity_nats: individual_best,
            selections_total: total,
            selections_distinct: selections.len(),
        });
    }

    let (argmax_individual, argmax_selection, argmax_result) =
        best.expect("universe has at least one individual and one selection");
    Ok(IndividualCapacityReport {
        value_nats: argmax_result.value,
        argmax_individual,
        argmax_selection,
        argmax_result,
        per_individual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Distribution;
    use crate::info::mutual_information;
    use crate::universe::RecordUniverse;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::LN_2;

    fn binary_entropy_nats(p: f64) -> f64 {
        -p * p.ln() - (1.0 - p) * (1.0 - p).ln()
    }

    /// Channel over X1 x X2 = {0,1,2} x {0,1} answering "x1 == x2?" through a
    /// binary symmetric flip with crossover p.
    fn equality_flip_channel(p: f64) -> ChannelMatrix {
        let u = RecordUniverse::new(vec![3, 2]).unwrap();
        let mut cols = Vec::new();
        for x in 0..u.total() {
            let c = u.decode(x).unwrap();
            let f = if c[0] == c[1] { 1 } else { 0 };
            cols.push(if f == 1 {
                vec![p, 1.0 - p]
            } else {
                vec![1.0 - p, p]
            });
        }
        ChannelMatrix::new(u, StochasticMatrix::from_columns(&cols).unwrap()).unwrap()
    }

    #[test]
    fn reduction_picks_columns_along_the_selected_plane() {
        let ch = equality_flip_channel(0.25);
        let sel = SelectionMap {
            individual: 0,
            choices: vec![0, 0, 0],
        };
        let r = reduce_channel(&ch, &sel).unwrap();
        assert_eq!(r.column(0), &[0.25, 0.75]);
        assert_eq!(r.column(1), &[0.75, 0.25]);
        assert_eq!(r.column(2), &[0.75, 0.25]);
    }

    #[test]
    fn reduction_of_single_individual_is_the_channel_itself() {
        let u = RecordUniverse::new(vec![3]).unwrap();
        let cols = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.5, 0.5]];
        let m = StochasticMatrix::from_columns(&cols).unwrap();
        let ch = ChannelMatrix::new(u, m.clone()).unwrap();
        let sel = SelectionMap {
            individual: 0,
            choices: vec![0, 0, 0],
        };
        assert_eq!(reduce_channel(&ch, &sel).unwrap(), m);
    }

    #[test]
    fn reduction_rejects_bad_selections() {
        let ch = equality_flip_channel(0.25);
        assert!(reduce_channel(
            &ch,
            &SelectionMap { individual: 2, choices: vec![0] }
        )
        .is_err());
        assert!(reduce_channel(
            &ch,
            &SelectionMap { individual: 0, choices: vec![0, 0] }
        )
        .is_err());
    }

    #[test]
    fn enumeration_counts_match_complement_powers() {
        let ch = equality_flip_channel(0.25);
        // pre-dedup: individual 0 has 2^3 = 8 tuples, individual 1 has 3^2 = 9
        let s0 = enumerate_selections(&ch, 0, 100).unwrap();
        let s1 = enumerate_selections(&ch, 1, 100).unwrap();
        // the quarter-flip equality channel has only two distinct columns, so
        // reduced channels collapse: answers (j == c_j) vary freely for j in
        // {0,1} and are constant for j = 2
        assert_eq!(s0.len(), 4);
        assert_eq!(s1.len(), 4);
        // first selection is all-zeros, order lexicographic
        assert_eq!(s0[0].choices, vec![0, 0, 0]);
        assert!(s0.windows(2).all(|w| w[0].choices < w[1].choices));
        assert!(s1.windows(2).all(|w| w[0].choices < w[1].choices));
    }

    #[test]
    fn enumeration_collapses_when_a_coordinate_is_ignored() {
        // query depends only on x1: every selection for individual 0 reduces
        // to the same channel
        let u = RecordUniverse::new(vec![2, 2]).unwrap();
        let mut cols = Vec::new();
        for x in 0..u.total() {
            let c = u.decode(x).unwrap();
            cols.push(if c[0] == 1 {
                vec![0.2, 0.8]
            } else {
                vec![0.8, 0.2]
            });
        }
        let ch = ChannelMatrix::new(u, StochasticMatrix::from_columns(&cols).unwrap()).unwrap();
        assert_eq!(enumerate_selections(&ch, 0, 100).unwrap().len(), 1);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let u = RecordUniverse::new(vec![10, 10]).unwrap();
        let cols = vec![vec![0.5, 0.5]; 100];
        let ch = ChannelMatrix::new(u, StochasticMatrix::from_columns(&cols).unwrap()).unwrap();
        match enumerate_selections(&ch, 0, DEFAULT_ENUM_CAP) {
            Err(Error::EnumerationTooLarge { projected, cap }) => {
                assert_eq!(projected, 10_000_000_000);
                assert_eq!(cap, DEFAULT_ENUM_CAP);
            }
            other => panic!("expected enumeration cap error, got {other:?}"),
        }
    }

    #[test]
    fn equality_flip_capacity_matches_closed_form_at_both_individuals() {
        let ch = equality_flip_channel(0.25);
        let report = individual_channel_capacity(&ch, &CapacityOptions::default()).unwrap();
        let closed = LN_2 - binary_entropy_nats(0.25);
        assert!((report.value(InfoUnit::Bits) - 0.188722).abs() < 1e-6);
        for s in &report.per_individual {
            assert!((s.capacity_nats - closed).abs() < 1e-6);
        }
        // tie broken toward the smaller individual, lexicographic selection
        assert_eq!(report.argmax_individual, 0);
    }

    #[test]
    fn constant_channel_has_zero_capacity_and_uniform_optimizer() {
        let u = RecordUniverse::new(vec![2, 2]).unwrap();
        let cols = vec![vec![0.6, 0.4]; 4];
        let ch = ChannelMatrix::new(u, StochasticMatrix::from_columns(&cols).unwrap()).unwrap();
        let report = individual_channel_capacity(&ch, &CapacityOptions::default()).unwrap();
        assert_eq!(report.value_nats, 0.0);
        for w in report.argmax_result.optimizer.weights() {
            assert!((w - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn single_individual_capacity_equals_plain_solver() {
        let u = RecordUniverse::new(vec![3]).unwrap();
        let cols = vec![vec![0.9, 0.1], vec![0.2, 0.8], vec![0.5, 0.5]];
        let m = StochasticMatrix::from_columns(&cols).unwrap();
        let ch = ChannelMatrix::new(u, m.clone()).unwrap();
        let report = individual_channel_capacity(&ch, &CapacityOptions::default()).unwrap();
        let direct = blahut_arimoto(&m, 1e-10, 100_000).unwrap();
        assert!((report.value_nats - direct.value).abs() <= 1e-12);
    }

    #[test]
    fn capacity_is_invariant_under_relabelings() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xca9);
        for _ in 0..20 {
            let u = RecordUniverse::new(vec![2, 3]).unwrap();
            let cols: Vec<Vec<f64>> = (0..6)
                .map(|_| {
                    let w: Vec<f64> = (0..2).map(|_| rng.gen::<f64>() + 0.01).collect();
                    let s: f64 = w.iter().sum();
                    w.into_iter().map(|v| v / s).collect()
                })
                .collect();
            let ch =
                ChannelMatrix::new(u.clone(), StochasticMatrix::from_columns(&cols).unwrap())
                    .unwrap();
            let base = individual_channel_capacity(&ch, &CapacityOptions::default()).unwrap();

            // swap the two output symbols
            let swapped: Vec<Vec<f64>> = cols.iter().map(|c| vec![c[1], c[0]]).collect();
            let ch2 =
                ChannelMatrix::new(u.clone(), StochasticMatrix::from_columns(&swapped).unwrap())
                    .unwrap();
            let r2 = individual_channel_capacity(&ch2, &CapacityOptions::default()).unwrap();
            assert!((base.value_nats - r2.value_nats).abs() < 1e-9);

            // relabel coordinate 2 (swap its two planes)
            let mut relabeled = cols.clone();
            for x1 in 0..2 {
                for x2 in 0..3 {
                    let from = u.encode(&[x1, x2]).unwrap();
                    let to = u.encode(&[x1, (x2 + 1) % 3]).unwrap();
                    relabeled[to] = cols[from].clone();
                }
            }
            let ch3 =
                ChannelMatrix::new(u.clone(), StochasticMatrix::from_columns(&relabeled).unwrap())
                    .unwrap();
            let r3 = individual_channel_capacity(&ch3, &CapacityOptions::default()).unwrap();
            assert!((base.value_nats - r3.value_nats).abs() < 1e-9);
        }
    }

    #[test]
    fn mutual_information_is_convex_in_the_kernel() {
        // for a fixed input, I(p, .) is convex: mixing kernels never beats
        // mixing their informations
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0);
        for _ in 0..200 {
            let nx = rng.gen_range(2..=4);
            let ny = rng.gen_range(2..=4);
            let mk = |rng: &mut ChaCha8Rng| {
                let cols: Vec<Vec<f64>> = (0..nx)
                    .map(|_| {
                        let w: Vec<f64> = (0..ny).map(|_| rng.gen::<f64>() + 1e-9).collect();
                        let s: f64 = w.iter().sum();
                        w.into_iter().map(|v| v / s).collect()
                    })
                    .collect();
                StochasticMatrix::from_columns(&cols).unwrap()
            };
            let k0 = mk(&mut rng);
            let k1 = mk(&mut rng);
            let input =
                Distribution::normalized((0..nx).map(|_| rng.gen::<f64>() + 1e-9).collect())
                    .unwrap();
            for lambda in [0.25, 0.5, 0.75] {
                let mixed: Vec<Vec<f64>> = (0..nx)
                    .map(|x| {
                        (0..ny)
                            .map(|y| lambda * k0.entry(y, x) + (1.0 - lambda) * k1.entry(y, x))
                            .collect()
                    })
                    .collect();
                let km = StochasticMatrix::from_columns(&mixed).unwrap();
                let im = mutual_information(&input, &km, InfoUnit::Nats).unwrap();
                let i0 = mutual_information(&input, &k0, InfoUnit::Nats).unwrap();
                let i1 = mutual_information(&input, &k1, InfoUnit::Nats).unwrap();
                assert!(im <= lambda * i0 + (1.0 - lambda) * i1 + 1e-12);
            }
        }
    }
}
