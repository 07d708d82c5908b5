//! Channel constructors and calibrators for concrete mechanisms, plus
//! structure checks (data independence, weak symmetry) that admit closed-form
//! capacity bounds.

mod exponential;
mod gaussian;
mod randomized_response;

pub use exponential::{exponential_calibrate, exponential_channel, exponential_entropy};
pub use gaussian::{
    discretize_gaussian, gaussian_calibrate, gaussian_capacity_bound, noise_scale_report,
    GaussianSpec, Grid, NoiseScaleInputs, NoiseScaleReport,
};
pub use randomized_response::{randomized_response_channel, rr_calibrate, RrCalibration};

use crate::capacity::{enumerate_selections, reduce_channel, SelectionMap};
use crate::channel::{ChannelMatrix, QueryTable};
use crate::dist::{Distribution, InfoUnit};
use crate::error::{Error, Result};

/// Entry-wise tolerance for structural column comparisons.
const STRUCTURE_TOL: f64 = 1e-9;

/// Nonnegative cost of reporting symbol y when the true answer is y'.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionTable {
    size: usize,
    costs: Vec<f64>,
}

impl DistortionTable {
    /// Square table of nonnegative finite costs, row y, column y'.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 {
            return Err(Error::Domain("distortion table is empty".into()));
        }
        let mut costs = Vec::with_capacity(size * size);
        for (y, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::Dimension(format!(
                    "distortion row {y} has {} entries, expected {size}",
                    row.len()
                )));
            }
            for (yp, &c) in row.iter().enumerate() {
                if !c.is_finite() || c < 0.0 {
                    return Err(Error::Domain(format!(
                        "distortion({y}, {yp}) is {c}, must be finite and nonnegative"
                    )));
                }
                costs.push(c);
            }
        }
        Ok(Self { size, costs })
    }

    /// Absolute-difference distortion |y - y'| on k symbols.
    pub fn absolute_difference(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("distortion table is empty".into()));
        }
        Ok(Self {
            size: k,
            costs: (0..k * k)
                .map(|i| ((i / k) as f64 - (i % k) as f64).abs())
                .collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn cost(&self, y: usize, y_prime: usize) -> f64 {
        self.costs[y * self.size + y_prime]
    }
}

/// Per-dataset ranking of output symbols: `rank(x, y)` is the position of y
/// when outputs are sorted by distortion from the true answer f(x).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankOrdering {
    ranks: Vec<Vec<usize>>,
}

impl RankOrdering {
    pub fn rank(&self, x: usize, y: usize) -> usize {
        self.ranks[x][y]
    }

    pub fn row(&self, x: usize) -> &[usize] {
        &self.ranks[x]
    }
}

/// Rank outputs per dataset by distortion from the query answer, ties broken
/// by ascending output index; every row is a bijection on outputs.
pub fn rank_ordering(query: &QueryTable, distortion: &DistortionTable) -> Result<RankOrdering> {
    let k = query.output_size();
    if distortion.size() != k {
        return Err(Error::Dimension(format!(
            "distortion table is {}x{}, query has {k} outputs",
            distortion.size(),
            distortion.size()
        )));
    }
    let mut ranks = Vec::with_capacity(query.universe().total());
    for x in 0..query.universe().total() {
        let fx = query.value(x);
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| {
            distortion
                .cost(a, fx)
                .partial_cmp(&distortion.cost(b, fx))
                .unwrap()
                .then(a.cmp(&b))
        });
        let mut row = vec![0usize; k];
        for (r, &y) in order.iter().enumerate() {
            row[y] = r;
        }
        ranks.push(row);
    }
    Ok(RankOrdering { ranks })
}

/// A channel is data-independent when every column is a permutation of the
/// first (the output distribution has a fixed shape, only relabeled).
pub fn is_data_independent(channel: &ChannelMatrix) -> bool {
    let sorted = |x: usize| {
        let mut c = channel.column(x).to_vec();
        c.sort_by(|a, b| a.partial_cmp(b).unwrap());
        c
    };
    let first = sorted(0);
    (1..channel.input_size()).all(|x| {
        sorted(x)
            .iter()
            .zip(&first)
            .all(|(a, b)| (a - b).abs() <= STRUCTURE_TOL)
    })
}

/// Capacity bound log |Y| - H(Z) for a data-independent channel, where Z is
/// the shared column shape.
pub fn data_independent_capacity_bound(channel: &ChannelMatrix, unit: InfoUnit) -> Result<f64> {
    if !is_data_independent(channel) {
        return Err(Error::Domain(
            "capacity bound needs a data-independent channel".into(),
        ));
    }
    let z = Distribution::new(channel.column(0).to_vec())?;
    let nats = (channel.output_size() as f64).ln() - z.entropy(InfoUnit::Nats);
    Ok(unit.from_nats(nats))
}

/// Search a data-independent channel for a reduced member with constant row
/// sums. Returns the first witness in enumeration order (individuals
/// ascending, selections lexicographic), or None. Such a member attains the
/// data-independent capacity bound at the uniform input.
pub fn is_weakly_symmetric(channel: &ChannelMatrix, enum_cap: u64) -> Result<Option<SelectionMap>> {
    if !is_data_independent(channel) {
        return Err(Error::Domain(
            "weak-symmetry check needs a data-independent channel".into(),
        ));
    }
    let u = channel.universe();
    for i in 0..u.individuals() {
        for selection in enumerate_selections(channel, i, enum_cap)? {
            let reduced = reduce_channel(channel, &selection)?;
            let ny = reduced.output_size();
            let mut sums = vec![0.0; ny];
            for x in 0..reduced.input_size() {
                for (y, &v) in reduced.column(x).iter().enumerate() {
                    sums[y] += v;
                }
            }
            let constant = sums[1..]
                .iter()
                .all(|&s| (s - sums[0]).abs() <= STRUCTURE_TOL);
            if constant {
                return Ok(Some(selection));
            }
        }
    }
    Ok(None)
}
