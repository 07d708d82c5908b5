use crate::dist::MASS_TOLERANCE;
use crate::error::{Error, Result};
use crate::universe::RecordUniverse;

/// Column-stochastic matrix: column x holds the output distribution p(y | x).
///
/// Entries are stored column-major so that a column is a contiguous slice.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    output_size: usize,
    input_size: usize,
    entries: Vec<f64>,
}

/// Outcome of a stochasticity check.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// Largest |column sum - 1| over all columns.
    pub max_column_deviation: f64,
    /// Smallest entry of the matrix.
    pub min_entry: f64,
    pub output_size: usize,
    pub input_size: usize,
}

impl StochasticMatrix {
    /// Build from column-major entries, validating shape and stochasticity.
    pub fn new(output_size: usize, input_size: usize, entries: Vec<f64>) -> Result<Self> {
        if output_size == 0 || input_size == 0 {
            return Err(Error::Dimension("matrix must be nonempty".into()));
        }
        if entries.len() != output_size * input_size {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                output_size * input_size,
                output_size,
                input_size,
                entries.len()
            )));
        }
        let m = Self {
            output_size,
            input_size,
            entries,
        };
        m.validate()?;
        Ok(m)
    }

    /// Build from per-input columns.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        if columns.is_empty() || columns[0].is_empty() {
            return Err(Error::Dimension("matrix must be nonempty".into()));
        }
        let output_size = columns[0].len();
        let mut entries = Vec::with_capacity(output_size * columns.len());
        for (x, col) in columns.iter().enumerate() {
            if col.len() != output_size {
                return Err(Error::Dimension(format!(
                    "column {x} has {} rows, expected {output_size}",
                    col.len()
                )));
            }
            entries.extend_from_slice(col);
        }
        Self::new(output_size, columns.len(), entries)
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    pub fn input_size(&self) -> usize {
        self.input_size
    }

    /// Output distribution of input x as a slice of length `output_size`.
    pub fn column(&self, x: usize) -> &[f64] {
        &self.entries[x * self.output_size..(x + 1) * self.output_size]
    }

    /// p(y | x).
    pub fn entry(&self, y: usize, x: usize) -> f64 {
        self.entries[x * self.output_size + y]
    }

    /// Check every column is a probability distribution within the
    /// stochasticity tolerance of 1e-9.
    pub fn validate(&self) -> Result<ValidationReport> {
        let mut max_dev = 0.0f64;
        let mut min_entry = f64::INFINITY;
        for x in 0..self.input_size {
            let mut sum = 0.0;
            for &v in self.column(x) {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::NonStochastic(format!(
                        "column {x} has entry {v}"
                    )));
                }
                min_entry = min_entry.min(v);
                sum += v;
            }
            let dev = (sum - 1.0).abs();
            if dev > MASS_TOLERANCE {
                return Err(Error::NonStochastic(format!(
                    "column {x} sums to {sum}, deviation {dev:.3e} exceeds {MASS_TOLERANCE:.0e}"
                )));
            }
            max_dev = max_dev.max(dev);
        }
        Ok(ValidationReport {
            max_column_deviation: max_dev,
            min_entry,
            output_size: self.output_size,
            input_size: self.input_size,
        })
    }
}

/// Channel from the joint record space of a universe to a finite output set.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    universe: RecordUniverse,
    matrix: StochasticMatrix,
}

impl ChannelMatrix {
    pub fn new(universe: RecordUniverse, matrix: StochasticMatrix) -> Result<Self> {
        if matrix.input_size() != universe.total() {
            return Err(Error::Dimension(format!(
                "matrix has {} columns, universe has {} datasets",
                matrix.input_size(),
                universe.total()
            )));
        }
        Ok(Self { universe, matrix })
    }

    pub fn universe(&self) -> &RecordUniverse {
        &self.universe
    }

    pub fn matrix(&self) -> &StochasticMatrix {
        &self.matrix
    }

    pub fn output_size(&self) -> usize {
        self.matrix.output_size()
    }

    /// Number of datasets (columns).
    pub fn input_size(&self) -> usize {
        self.matrix.input_size()
    }

    pub fn column(&self, x: usize) -> &[f64] {
        self.matrix.column(x)
    }

    pub fn entry(&self, y: usize, x: usize) -> f64 {
        self.matrix.entry(y, x)
    }
}

/// Re-run the stochasticity check on a constructed channel.
pub fn validate_channel(channel: &ChannelMatrix) -> Result<ValidationReport> {
    channel.matrix().validate()
}

/// Deterministic query: one output symbol per dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryTable {
    universe: RecordUniverse,
    output_size: usize,
    table: Vec<usize>,
}

impl QueryTable {
    pub fn new(universe: RecordUniverse, output_size: usize, table: Vec<usize>) -> Result<Self> {
        if output_size == 0 {
            return Err(Error::Domain("query needs a nonempty output set".into()));
        }
        if table.len() != universe.total() {
            return Err(Error::Dimension(format!(
                "query table has {} entries, universe has {} datasets",
                table.len(),
                universe.total()
            )));
        }
        if let Some((x, &y)) = table.iter().enumerate().find(|(_, &y)| y >= output_size) {
            return Err(Error::Index(format!(
                "query value {y} at dataset {x} out of range (output size {output_size})"
            )));
        }
        Ok(Self {
            universe,
            output_size,
            table,
        })
    }

    pub fn universe(&self) -> &RecordUniverse {
        &self.universe
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    /// Query value f(x) at a joint dataset index.
    pub fn value(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }
}
