//! Command grammar and the report built by each subcommand. Reports are
//! value trees rendered canonically (JSON) or flattened (table); identical
//! invocations produce identical bytes. Information quantities are nats
//! internally and convert at the edge via `--unit`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use privchan_core::{
    balance_delta_bound, brute_force_capacity_oracle, check_dp, crosscheck_independent_priors,
    discretize_gaussian, dp_epsilon, exponential_calibrate, exponential_channel,
    exponential_entropy, gaussian_calibrate, gaussian_capacity_bound, individual_channel_capacity,
    noise_scale_report, randomized_response_channel, rr_calibrate, CapacityOptions, ChannelMatrix,
    GaussianSpec, Grid, InfoUnit, NoiseScaleInputs,
};
use serde_json::{json, Value};

use crate::error::{CliError, Result};
use crate::files::{channel_to_file, load_channel, load_query, save};
use crate::json::{canonical_json, render_table};

#[derive(Debug, Parser)]
#[command(
    name = "privchan",
    version,
    about = "Privacy channels over finite dataset universes: construction, calibration, capacity, audits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct a mechanism channel from a query file
    #[command(subcommand)]
    Mech(MechCommand),
    /// Solve a mechanism's noise parameter for a capacity budget
    #[command(subcommand)]
    Calibrate(CalibrateCommand),
    /// Individual channel capacity with per-individual detail
    Capacity(CapacityArgs),
    /// Audit a channel against a privacy budget
    #[command(subcommand)]
    Audit(AuditCommand),
    /// Capacity gap against entropy-restricted adversaries on a grid
    Balance(BalanceArgs),
    /// Noise scales of classic mechanisms at matched budgets
    CompareNoise(CompareNoiseArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitArg {
    Nats,
    Bits,
}

impl UnitArg {
    fn unit(self) -> InfoUnit {
        match self {
            UnitArg::Nats => InfoUnit::Nats,
            UnitArg::Bits => InfoUnit::Bits,
        }
    }

    fn label(self) -> &'static str {
        match self {
            UnitArg::Nats => "nats",
            UnitArg::Bits => "bits",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Table,
}

/// Unit and format flags shared by the reporting subcommands.
#[derive(Debug, Args)]
pub struct ReportStyle {
    /// Unit for information quantities, inputs and outputs alike
    #[arg(long, value_enum, default_value_t = UnitArg::Nats)]
    pub unit: UnitArg,
    /// Report rendering
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
}

/// Output flags for the channel-constructing subcommands.
#[derive(Debug, Args)]
pub struct MechOut {
    /// Also write the channel file here (canonical JSON regardless of --format)
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Report rendering on standard output
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
}

#[derive(Debug, Subcommand)]
pub enum MechCommand {
    /// Binary randomized response: the answer is flipped with probability p
    Rr {
        /// Query file with a binary output
        query: PathBuf,
        /// Flip probability in (0, 1); endpoints need --allow-deterministic
        #[arg(long)]
        flip: f64,
        /// Permit the deterministic endpoints p = 0 and p = 1
        #[arg(long)]
        allow_deterministic: bool,
        #[command(flatten)]
        out: MechOut,
    },
    /// Geometric decay over distortion ranks: p(y|x) proportional to exp(-rank/noise)
    Exp {
        /// Query file carrying a distortion table
        query: PathBuf,
        /// Decay scale; larger is flatter
        #[arg(long)]
        noise: f64,
        #[command(flatten)]
        out: MechOut,
    },
    /// Clamped real query plus Gaussian noise, discretized onto a cell grid
    Gauss {
        /// Query file carrying real values
        query: PathBuf,
        /// Noise variance
        #[arg(long)]
        noise: f64,
        /// Clamp bound: query values are clipped to [-t, t]
        #[arg(long)]
        t: f64,
        /// Output grid as lo,hi,step
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        grid: (f64, f64, f64),
        #[command(flatten)]
        out: MechOut,
    },
}

#[derive(Debug, Subcommand)]
pub enum CalibrateCommand {
    /// Flip probability whose channel capacity meets the budget
    Rr {
        /// Capacity budget in --unit
        #[arg(long)]
        epsilon: f64,
        #[command(flatten)]
        style: ReportStyle,
    },
    /// Decay rate whose k-output channel capacity bound meets the budget
    Exp {
        /// Capacity budget in --unit
        #[arg(long)]
        epsilon: f64,
        /// Output alphabet size
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        style: ReportStyle,
    },
    /// Noise variance whose capacity bound at clamp t meets the budget
    Gauss {
        /// Capacity budget in --unit
        #[arg(long)]
        epsilon: f64,
        /// Clamp bound on the query values
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        style: ReportStyle,
    },
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    /// Channel file to analyse
    pub channel: PathBuf,
    /// Cross-check the value against the sampled-prior oracle
    #[arg(long)]
    pub oracle: bool,
    /// Oracle samples per individual
    #[arg(long, default_value_t = 1000, requires = "oracle")]
    pub samples: u64,
    /// Seed for the oracle's sampled priors
    #[arg(long, default_value_t = 0, requires = "oracle")]
    pub seed: u64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub style: ReportStyle,
}

/// Capacity-solver knobs shared by the subcommands that run the pipeline.
#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Solver bracket tolerance in nats
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Solver iteration budget
    #[arg(long, default_value_t = 1_000_000)]
    pub max_iter: u64,
    /// Abort if a selection enumeration would exceed this many kernels
    #[arg(long, default_value_t = 10_000_000)]
    pub enum_cap: u64,
}

impl SolverArgs {
    fn options(&self) -> CapacityOptions {
        CapacityOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            enum_cap: self.enum_cap,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum AuditCommand {
    /// Exact privacy level over one-coordinate dataset pairs
    Dp(DpArgs),
    /// Individual channel capacity compared against a budget
    Ip(IpArgs),
}

#[derive(Debug, Args)]
pub struct DpArgs {
    /// Channel file to audit
    pub channel: PathBuf,
    /// Budget to check against, in --unit
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Corroborate the verdict by sampling independent-record priors
    #[arg(long, requires = "epsilon")]
    pub crosscheck: bool,
    /// Prior samples for the crosscheck
    #[arg(long, default_value_t = 100, requires = "crosscheck")]
    pub samples: u64,
    /// Seed for the crosscheck's sampled priors
    #[arg(long, default_value_t = 0, requires = "crosscheck")]
    pub seed: u64,
    #[command(flatten)]
    pub style: ReportStyle,
}

#[derive(Debug, Args)]
pub struct IpArgs {
    /// Channel file to audit
    pub channel: PathBuf,
    /// Capacity budget in --unit
    #[arg(long)]
    pub epsilon: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub style: ReportStyle,
}

#[derive(Debug, Args)]
pub struct BalanceArgs {
    /// Channel file to analyse
    pub channel: PathBuf,
    /// Ascending entropy floors in --unit, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    pub b_grid: Vec<f64>,
    /// Ascent restarts per grid point and individual
    #[arg(long, default_value_t = 8)]
    pub restarts: u32,
    /// Seed for the ascent restarts
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub style: ReportStyle,
}

#[derive(Debug, Args)]
pub struct CompareNoiseArgs {
    /// Budget for the Laplace mechanism's pure guarantee
    #[arg(long)]
    pub epsilon_dp: f64,
    /// Failure mass of the approximate Gaussian-mechanism guarantee
    #[arg(long)]
    pub delta_prime: f64,
    /// Worst-case change of the query between one-coordinate neighbours
    #[arg(long)]
    pub sensitivity: f64,
    /// Clamp bound on the query values
    #[arg(long)]
    pub t: f64,
    /// Capacity budget for the Gaussian channel, in nats
    #[arg(long)]
    pub epsilon_ip: f64,
    /// Extra capacity headroom for restricted adversaries, in nats
    #[arg(long, default_value_t = 0.0)]
    pub slack: f64,
    /// Report rendering
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
}

fn parse_grid(s: &str) -> std::result::Result<(f64, f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected lo,hi,step (three comma-separated reals), got `{s}`"));
    }
    let mut nums = [0.0f64; 3];
    for (slot, part) in nums.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("`{part}`: {e}"))?;
    }
    Ok((nums[0], nums[1], nums[2]))
}

/// Run a parsed command line and return what belongs on standard output.
pub fn run(cli: Cli) -> Result<String> {
    let (value, format) = match cli.command {
        Command::Mech(mech) => mech_value(mech)?,
        Command::Calibrate(cal) => calibrate_value(cal)?,
        Command::Capacity(args) => {
            let format = args.style.format;
            (capacity_value(&args)?, format)
        }
        Command::Audit(AuditCommand::Dp(args)) => {
            let format = args.style.format;
            (audit_dp_value(&args)?, format)
        }
        Command::Audit(AuditCommand::Ip(args)) => {
            let format = args.style.format;
            (audit_ip_value(&args)?, format)
        }
        Command::Balance(args) => {
            let format = args.style.format;
            (balance_value(&args)?, format)
        }
        Command::CompareNoise(args) => {
            let format = args.format;
            (compare_noise_value(&args)?, format)
        }
    };
    Ok(match format {
        FormatArg::Json => canonical_json(&value),
        FormatArg::Table => render_table(&value),
    })
}

/// A float that may be the +infinity sentinel: rendered as null alongside
/// an explicit boolean, since JSON numbers cannot say "infinite".
fn finite_or_null(value: f64) -> Value {
    if value.is_finite() {
        Value::from(value)
    } else {
        Value::Null
    }
}

fn channel_value(channel: &ChannelMatrix, out: &MechOut) -> Result<(Value, FormatArg)> {
    let file = channel_to_file(channel);
    if let Some(path) = &out.output {
        save(path, &file)?;
    }
    let value = serde_json::to_value(&file).expect("file structs always convert");
    Ok((value, out.format))
}

fn mech_value(mech: MechCommand) -> Result<(Value, FormatArg)> {
    match mech {
        MechCommand::Rr {
            query,
            flip,
            allow_deterministic,
            out,
        } => {
            let loaded = load_query(&query)?;
            let channel = randomized_response_channel(&loaded.query, flip, allow_deterministic)?;
            channel_value(&channel, &out)
        }
        MechCommand::Exp { query, noise, out } => {
            let loaded = load_query(&query)?;
            let distortion = loaded.distortion.ok_or_else(|| {
                CliError::Validation(format!(
                    "{}: /distortion: required for the exponential channel",
                    query.display()
                ))
            })?;
            let channel = exponential_channel(&loaded.query, &distortion, noise)?;
            channel_value(&channel, &out)
        }
        MechCommand::Gauss {
            query,
            noise,
            t,
            grid,
            out,
        } => {
            let loaded = load_query(&query)?;
            let values = loaded.values.ok_or_else(|| {
                CliError::Validation(format!(
                    "{}: /values: required for the gaussian channel",
                    query.display()
                ))
            })?;
            let spec = GaussianSpec::new(values, t, noise)?;
            let grid = Grid {
                lo: grid.0,
                hi: grid.1,
                step: grid.2,
            };
            let channel = discretize_gaussian(&spec, loaded.query.universe(), &grid)?;
            channel_value(&channel, &out)
        }
    }
}

fn calibrate_value(cal: CalibrateCommand) -> Result<(Value, FormatArg)> {
    match cal {
        CalibrateCommand::Rr { epsilon, style } => {
            let calibration = rr_calibrate(epsilon, style.unit.unit())?;
            let doc = json!({
                "epsilon": epsilon,
                "interval": [calibration.interval.0, calibration.interval.1],
                "p_star": calibration.p_star,
                "unit": style.unit.label(),
            });
            Ok((doc, style.format))
        }
        CalibrateCommand::Exp { epsilon, k, style } => {
            let unit = style.unit.unit();
            let lambda = exponential_calibrate(unit.to_nats(epsilon), k)?;
            let bound_nats = if lambda.is_finite() {
                (k as f64).ln() - exponential_entropy(k, lambda)?
            } else {
                // beyond log k even the noiseless channel meets the budget
                (k as f64).ln()
            };
            let doc = json!({
                "capacity_bound": unit.from_nats(bound_nats),
                "epsilon": epsilon,
                "k": k,
                "lambda_star": finite_or_null(lambda),
                "lambda_star_infinite": !lambda.is_finite(),
                "noise": if lambda.is_finite() { Value::from(1.0 / lambda) } else { Value::Null },
                "unit": style.unit.label(),
            });
            Ok((doc, style.format))
        }
        CalibrateCommand::Gauss { epsilon, t, style } => {
            let unit = style.unit.unit();
            let noise = gaussian_calibrate(unit.to_nats(epsilon), t)?;
            let bound = gaussian_capacity_bound(t, noise)?;
            let doc = json!({
                "capacity_bound": unit.from_nats(bound),
                "epsilon": epsilon,
                "noise": noise,
                "t": t,
                "unit": style.unit.label(),
            });
            Ok((doc, style.format))
        }
    }
}

fn capacity_value(args: &CapacityArgs) -> Result<Value> {
    let (channel, _) = load_channel(&args.channel)?;
    let report = individual_channel_capacity(&channel, &args.solver.options())?;
    let unit = args.style.unit.unit();
    let individuals: Vec<Value> = report
        .per_individual
        .iter()
        .map(|s| {
            json!({
                "capacity": unit.from_nats(s.capacity_nats),
                "individual": s.individual,
                "selections_distinct": s.selections_distinct,
                "selections_total": s.selections_total,
            })
        })
        .collect();
    let mut doc = json!({
        "argmax_individual": report.argmax_individual,
        "argmax_selection": {
            "choices": report.argmax_selection.choices,
            "individual": report.argmax_selection.individual,
        },
        "gap": unit.from_nats(report.argmax_result.gap),
        "individuals": individuals,
        "iterations": report.argmax_result.iterations,
        "optimizer": report.argmax_result.optimizer.weights(),
        "unit": args.style.unit.label(),
        "value": unit.from_nats(report.value_nats),
    });
    if args.oracle {
        let mut per_individual = Vec::new();
        for i in 0..channel.universe().individuals() {
            let value = brute_force_capacity_oracle(&channel, i, args.samples, args.seed)?;
            per_individual.push(unit.from_nats(value));
        }
        let max = per_individual
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        doc.as_object_mut()
            .expect("capacity report is an object")
            .insert(
                "oracle".into(),
                json!({
                    "max": max,
                    "per_individual": per_individual,
                    "samples": args.samples,
                    "seed": args.seed,
                }),
            );
    }
    Ok(doc)
}

fn audit_dp_value(args: &DpArgs) -> Result<Value> {
    let (channel, _) = load_channel(&args.channel)?;
    let unit = args.style.unit.unit();
    let report = match args.epsilon {
        Some(epsilon) => check_dp(&channel, unit.to_nats(epsilon))?,
        None => dp_epsilon(&channel),
    };
    let level = report.epsilon_star_nats;
    let witness = match report.witness {
        Some(w) => json!({
            "axis": w.axis,
            "denominator": w.denominator,
            "numerator": w.numerator,
            "output": w.output,
        }),
        None => Value::Null,
    };
    let mut doc = json!({
        "budget": args.epsilon,
        "epsilon_star": finite_or_null(if level.is_finite() { unit.from_nats(level) } else { level }),
        "epsilon_star_infinite": !level.is_finite(),
        "pass": report.pass,
        "unit": args.style.unit.label(),
        "witness": witness,
    });
    if args.crosscheck {
        let epsilon = args
            .epsilon
            .expect("the parser enforces --crosscheck requires --epsilon");
        let cc =
            crosscheck_independent_priors(&channel, unit.to_nats(epsilon), args.samples, args.seed)?;
        let violations: Vec<Value> = cc
            .violations
            .iter()
            .map(|v| {
                json!({
                    "individual": v.individual,
                    "leakage": unit.from_nats(v.leakage_nats),
                    "trial": v.trial,
                })
            })
            .collect();
        let leakage = cc.max_leakage_nats;
        doc.as_object_mut()
            .expect("audit report is an object")
            .insert(
                "crosscheck".into(),
                json!({
                    "consistent": cc.consistent(),
                    "converse_exceeds_budget": cc.converse_exceeds_budget,
                    "dp_pass": cc.dp_pass,
                    "forward_trials": cc.forward_trials,
                    "max_leakage": finite_or_null(if leakage.is_finite() { unit.from_nats(leakage) } else { leakage }),
                    "max_leakage_infinite": !leakage.is_finite(),
                    "seed": args.seed,
                    "violations": violations,
                }),
            );
    }
    Ok(doc)
}

fn audit_ip_value(args: &IpArgs) -> Result<Value> {
    let (channel, _) = load_channel(&args.channel)?;
    let unit = args.style.unit.unit();
    let report = individual_channel_capacity(&channel, &args.solver.options())?;
    Ok(json!({
        "argmax_individual": report.argmax_individual,
        "budget": args.epsilon,
        "gap": unit.from_nats(report.argmax_result.gap),
        "pass": report.value_nats <= unit.to_nats(args.epsilon),
        "unit": args.style.unit.label(),
        "value": unit.from_nats(report.value_nats),
    }))
}

fn balance_value(args: &BalanceArgs) -> Result<Value> {
    let (channel, _) = load_channel(&args.channel)?;
    let unit = args.style.unit.unit();
    let grid_nats: Vec<f64> = args.b_grid.iter().map(|&b| unit.to_nats(b)).collect();
    let report = balance_delta_bound(&channel, &grid_nats, args.restarts, args.seed)?;
    let points: Vec<Value> = report
        .points
        .iter()
        .map(|p| {
            json!({
                "b": unit.from_nats(p.b_nats),
                "delta": unit.from_nats(p.delta_nats),
                "envelope": unit.from_nats(p.envelope_nats),
                "lower_bound": unit.from_nats(p.lower_bound_nats),
            })
        })
        .collect();
    Ok(json!({
        "b0_crosscheck": report.b0_crosscheck,
        "capacity": unit.from_nats(report.capacity_nats),
        "points": points,
        "restarts": args.restarts,
        "seed": args.seed,
        "unit": args.style.unit.label(),
    }))
}

fn compare_noise_value(args: &CompareNoiseArgs) -> Result<Value> {
    let inputs = NoiseScaleInputs {
        epsilon_dp: args.epsilon_dp,
        delta_prime: args.delta_prime,
        sensitivity: args.sensitivity,
        t: args.t,
        epsilon_ip: args.epsilon_ip,
        balance_slack: args.slack,
    };
    let report = noise_scale_report(&inputs)?;
    Ok(json!({
        "channel_scale": report.channel_scale,
        "gaussian_mechanism_scale": report.gaussian_mechanism_scale,
        "inputs": {
            "balance_slack": args.slack,
            "delta_prime": args.delta_prime,
            "epsilon_dp": args.epsilon_dp,
            "epsilon_ip": args.epsilon_ip,
            "sensitivity": args.sensitivity,
            "t": args.t,
        },
        "laplace_scale": report.laplace_scale,
    }))
}
