use crate::error::{Error, Result};

/// Finite record universe of a dataset with one coordinate per individual.
///
/// A dataset is a tuple (x_1, ..., x_n) where coordinate i ranges over
/// {0, ..., sizes[i] - 1}. Datasets are also addressed by a single joint
/// index in [0, total) using mixed-radix encoding with coordinate 0 varying
/// fastest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordUniverse {
    sizes: Vec<usize>,
}

impl RecordUniverse {
    /// At least one individual; every coordinate domain nonempty; the joint
    /// space must fit in `usize`.
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::Domain("universe needs at least one individual".into()));
        }
        if let Some(pos) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::Domain(format!("coordinate {pos} has empty domain")));
        }
        let mut total: usize = 1;
        for &s in &sizes {
            total = total
                .checked_mul(s)
                .ok_or_else(|| Error::Domain("joint space overflows usize".into()))?;
        }
        Ok(Self { sizes })
    }

    /// Number of individuals n.
    pub fn individuals(&self) -> usize {
        self.sizes.len()
    }

    /// Domain size of coordinate i.
    pub fn size(&self, i: usize) -> usize {
        self.sizes[i]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Size of the joint space, the product of the coordinate sizes.
    pub fn total(&self) -> usize {
        self.sizes.iter().product()
    }

    /// Joint index of a coordinate tuple (coordinate 0 fastest-varying).
    pub fn encode(&self, coords: &[usize]) -> Result<usize> {
        if coords.len() != self.sizes.len() {
            return Err(Error::Index(format!(
                "expected {} coordinates, got {}",
                self.sizes.len(),
                coords.len()
            )));
        }
        let mut idx = 0usize;
        let mut stride = 1usize;
        for (k, (&c, &s)) in coords.iter().zip(&self.sizes).enumerate() {
            if c >= s {
                return Err(Error::Index(format!(
                    "coordinate {k} is {c}, domain size {s}"
                )));
            }
            idx += c * stride;
            stride *= s;
        }
        Ok(idx)
    }

    /// Coordinate tuple of a joint index.
    pub fn decode(&self, index: usize) -> Result<Vec<usize>> {
        if index >= self.total() {
            return Err(Error::Index(format!(
                "joint index {index} out of range (total {})",
                self.total()
            )));
        }
        let mut rest = index;
        let coords = self
            .sizes
            .iter()
            .map(|&s| {
                let c = rest % s;
                rest /= s;
                c
            })
            .collect();
        Ok(coords)
    }

    /// Coordinate i of a joint index, without materializing the full tuple.
    pub fn coordinate(&self, index: usize, i: usize) -> Result<usize> {
        self.check_individual(i)?;
        if index >= self.total() {
            return Err(Error::Index(format!(
                "joint index {index} out of range (total {})",
                self.total()
            )));
        }
        let stride: usize = self.sizes[..i].iter().product();
        Ok((index / stride) % self.sizes[i])
    }

    /// Size of the complement space of individual i (product of the other
    /// coordinate sizes; 1 when n = 1).
    pub fn complement_total(&self, i: usize) -> Result<usize> {
        self.check_individual(i)?;
        Ok(self.total() / self.sizes[i])
    }

    /// Joint index of the dataset with coordinate i set to `xi` and the
    /// remaining coordinates given by `complement`, a mixed-radix index over
    /// the other coordinates in their original order (first of them fastest).
    pub fn joint_index(&self, i: usize, xi: usize, complement: usize) -> Result<usize> {
        self.check_individual(i)?;
        if xi >= self.sizes[i] {
            return Err(Error::Index(format!(
                "coordinate {i} is {xi}, domain size {}",
                self.sizes[i]
            )));
        }
        if complement >= self.total() / self.sizes[i] {
            return Err(Error::Index(format!(
                "complement index {complement} out of range for individual {i}"
            )));
        }
        let mut rest = complement;
        let mut idx = 0usize;
        let mut stride = 1usize;
        for (k, &s) in self.sizes.iter().enumerate() {
            let c = if k == i {
                xi
            } else {
                let c = rest % s;
                rest /= s;
                c
            };
            idx += c * stride;
            stride *= s;
        }
        Ok(idx)
    }

    fn check_individual(&self, i: usize) -> Result<()> {
        if i >= self.sizes.len() {
            return Err(Error::Index(format!(
                "individual {i} out of range (n = {})",
                self.sizes.len()
            )));
        }
        Ok(())
    }
}
