use crate::channel::StochasticMatrix;
use crate::dist::{Distribution, InfoUnit};
use crate::error::{Error, Result};

/// Output distribution p(y) = sum_x p(x) p(y | x).
pub fn output_distribution(input: &Distribution, kernel: &StochasticMatrix) -> Result<Distribution> {
    check_dims(input, kernel)?;
    let mut out = vec![0.0; kernel.output_size()];
    for x in 0..kernel.input_size() {
        let px = input.weight(x);
        if px == 0.0 {
            continue;
        }
        for (y, &k) in kernel.column(x).iter().enumerate() {
            out[y] += px * k;
        }
    }
    Distribution::new(out)
}

/// Mutual information I(X; Y) between the input and the kernel output.
///
/// Computed as sum_x p(x) KL(p(. | x) || p(.)), with zero terms skipped.
pub fn mutual_information(
    input: &Distribution,
    kernel: &StochasticMatrix,
    unit: InfoUnit,
) -> Result<f64> {
    check_dims(input, kernel)?;
    let out = output_distribution(input, kernel)?;
    let mut nats = 0.0;
    for x in 0..kernel.input_size() {
        let px = input.weight(x);
        if px == 0.0 {
            continue;
        }
        let mut kl = 0.0;
        for (y, &k) in kernel.column(x).iter().enumerate() {
            if k > 0.0 {
                kl += k * (k / out.weight(y)).ln();
            }
        }
        nats += px * kl;
    }
    Ok(unit.from_nats(nats.max(0.0)))
}

/// Max-mutual information: the largest log ratio log(p(y | x) / p(y)) over
/// pairs in the support (p(x) > 0, p(y | x) > 0).
pub fn max_mutual_information(
    input: &Distribution,
    kernel: &StochasticMatrix,
    unit: InfoUnit,
) -> Result<f64> {
    check_dims(input, kernel)?;
    let out = output_distribution(input, kernel)?;
    let mut best = 0.0f64;
    for x in 0..kernel.input_size() {
        if input.weight(x) == 0.0 {
            continue;
        }
        for (y, &k) in kernel.column(x).iter().enumerate() {
            if k > 0.0 {
                best = best.max((k / out.weight(y)).ln());
            }
        }
    }
    Ok(unit.from_nats(best))
}

fn check_dims(input: &Distribution, kernel: &StochasticMatrix) -> Result<()> {
    if input.len() != kernel.input_size() {
        return Err(Error::Dimension(format!(
            "input distribution has {} entries, kernel has {} columns",
            input.len(),
            kernel.input_size()
        )));
    }
    Ok(())
}
