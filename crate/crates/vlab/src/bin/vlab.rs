//! Experiment driver: structural verification, expectation tables,
//! removal-rule comparisons, removal-depth structure counts, dimension-1
//! canonicalization, and instance generation.
//!
//! Exit codes: 0 = all requested checks passed, 1 = a bound or structure
//! check reported a finding, 2 = usage, regime, or budget error.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use vlab::bitset::binomial_u128;
use vlab::dim1::{canonicalize_dim1, verify_reconstruction, EmptySetReading};
use vlab::error::SpaceError;
use vlab::fileio;
use vlab::instances::all_extreme::AllExtremeSpace;
use vlab::instances::dsmallest::DSmallestSpace;
use vlab::instances::random_consistent::{RandomConsistentParams, RandomConsistentSpace};
use vlab::instances::repetitions::RepetitionsSpace;
use vlab::instances::seb::SebSpaceExact;
use vlab::removal::{check_upper_bounds, BoundEnvelope, EvalMode, RemovalRule};
use vlab::sampling::{
    delta_k, exact_expectation, monte_carlo_expectation, rational_to_f64, Budget, ExpectationValue,
    Quantity,
};
use vlab::space::Oracle;
use vlab::stream::{domain, rng_for};
use vlab::structure::{is_nondegenerate, run_diagnostics, CheckMode};

#[derive(Parser)]
#[command(name = "vlab", version, about = "Sampling and removal experiments on consistent spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run consistency, locality, dimension, and nondegeneracy checks
    Verify {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Trials per sampled check when n is too large for exhaustion
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Accepted for symmetry; verification always picks the strongest
        /// mode the ground set size permits
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tabulate E[|V(R)|], E[|X(R)|], or their removal-union variants
    Sample {
        #[command(flatten)]
        instance: InstanceArgs,
        /// v, x, vk, or xk
        #[arg(long, default_value = "v")]
        quantity: String,
        /// Sample size; repeatable
        #[arg(long = "r")]
        r: Vec<usize>,
        /// Removal budget for vk/xk; repeatable
        #[arg(long = "k")]
        k: Vec<usize>,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Apply a removal rule and compare E[|V(R \ K)|] with its envelopes
    Removal {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long = "r")]
        r: Vec<usize>,
        #[arg(long = "k")]
        k: Vec<usize>,
        /// random, smallest, adversarial, objective-min, or basis-avoiding
        #[arg(long, default_value = "smallest")]
        rule: String,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Count distinct extreme sets over k-element removals
    #[command(name = "delta-k")]
    DeltaK {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long = "k")]
        k: Vec<usize>,
        /// Accepted for symmetry; this count is always exact
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Canonicalize a dimension-1 space into layers and verify it
    #[command(name = "canon-dim1")]
    CanonDim1 {
        /// Explicit-space JSON file
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Write a replayable instance file with an embedded seed
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        /// Removal budget baked into random-consistent parameters
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    DSmallest,
    Repetitions,
    AllExtreme,
    Seb,
    RandomConsistent,
    Explicit,
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Points CSV (seb), integers one per line (repetitions), JSON
    /// (explicit, random-consistent parameters)
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Order statistic for d-smallest
    #[arg(long)]
    d: Option<usize>,
    /// Dimension parameter (random-consistent) or envelope override
    #[arg(long)]
    delta: Option<usize>,
    /// Pair count for all-extreme (ground set size 2m)
    #[arg(long)]
    m: Option<usize>,
    /// Sample-size exponent: r = round(n^alpha)
    #[arg(long)]
    alpha: Option<f64>,
    /// Planted-size fraction for random-consistent
    #[arg(long)]
    eps: Option<f64>,
}

#[derive(Args)]
struct ModeArgs {
    /// Exact enumeration of all r-subsets
    #[arg(long, conflicts_with = "mc")]
    exact: bool,
    /// Monte Carlo estimation (requires --seed)
    #[arg(long)]
    mc: bool,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
}

impl ModeArgs {
    fn resolve(&self, n: usize, seed: Option<u64>) -> Result<EvalMode, SpaceError> {
        let want_mc = self.mc || (!self.exact && n > 20);
        if want_mc {
            let seed = seed.ok_or_else(|| {
                SpaceError::InvalidInstance("--seed is required in Monte Carlo mode".into())
            })?;
            Ok(EvalMode::MonteCarlo { trials: self.trials, seed })
        } else {
            Ok(EvalMode::Exact)
        }
    }
}

#[derive(Args)]
struct BudgetArgs {
    /// Cap on enumerated k-subsets per removal union
    #[arg(long = "budget-ksubsets", default_value_t = 1_000_000)]
    budget_ksubsets: u64,
    /// Cap on estimated oracle calls per table cell
    #[arg(long = "budget-calls", default_value_t = 200_000_000)]
    budget_calls: u64,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget { ksubsets: self.budget_ksubsets }
    }

    fn check_calls(&self, op: &'static str, estimate: Option<u128>) -> Result<(), SpaceError> {
        let needed = estimate.unwrap_or(u128::MAX);
        if needed > self.budget_calls as u128 {
            return Err(SpaceError::BudgetExceeded {
                op,
                needed,
                budget: self.budget_calls,
                unit: "oracle calls",
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    /// Drop the generation-time header line and zero the wall-time column
    /// so reruns are byte-identical
    #[arg(long = "no-header-timestamp")]
    no_header_timestamp: bool,
}

struct Instance {
    oracle: Oracle,
    /// Known dimension (family parameter), if any.
    delta: Option<usize>,
    /// Known-nondegenerate family.
    nondegenerate: Option<bool>,
    /// Natural sample size when the user gives none.
    default_r: Option<usize>,
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T, SpaceError> {
    value.ok_or_else(|| SpaceError::InvalidInstance(format!("{flag} is required here")))
}

fn build_instance(args: &InstanceArgs, seed: u64) -> Result<Instance, SpaceError> {
    match args.family {
        Family::DSmallest => {
            let n = require(args.n, "--n")?;
            let d = require(args.d, "--d")?;
            Ok(Instance {
                oracle: Oracle::from_space(DSmallestSpace::new(n, d)?),
                delta: Some(d),
                nondegenerate: Some(true),
                default_r: None,
            })
        }
        Family::Repetitions => {
            let file = require(args.file.as_ref(), "--file")?;
            let values = fileio::read_multiset(file)?;
            Ok(Instance {
                oracle: Oracle::from_space(RepetitionsSpace::new(values)?),
                delta: Some(1),
                nondegenerate: None,
                default_r: None,
            })
        }
        Family::AllExtreme => {
            let m = require(args.m, "--m")?;
            Ok(Instance {
                oracle: Oracle::from_space(AllExtremeSpace::new(m)?),
                delta: Some(1),
                nondegenerate: None,
                default_r: None,
            })
        }
        Family::Seb => {
            let file = require(args.file.as_ref(), "--file")?;
            let points = fileio::read_points_csv(file)?;
            Ok(Instance {
                oracle: Oracle::from_space(SebSpaceExact::new(points)),
                delta: None,
                nondegenerate: None,
                default_r: None,
            })
        }
        Family::RandomConsistent => {
            let params = match &args.file {
                Some(file) => fileio::read_params_json(file)?,
                None => {
                    let n = require(args.n, "--n")?;
                    let alpha = require(args.alpha, "--alpha")?;
                    let delta = require(args.delta, "--delta")?;
                    let eps = require(args.eps, "--eps")?;
                    RandomConsistentParams {
                        n,
                        r: (n as f64).powf(alpha).round() as usize,
                        k: 0,
                        delta,
                        eps,
                        seed,
                        scan_budget: 10_000_000,
                    }
                }
            };
            let space = RandomConsistentSpace::new(params)?;
            Ok(Instance {
                oracle: Oracle::from_space(space),
                delta: Some(params.delta),
                nondegenerate: None,
                default_r: Some(params.r),
            })
        }
        Family::Explicit => {
            let file = require(args.file.as_ref(), "--file")?;
            Ok(Instance {
                oracle: Oracle::from_space(fileio::read_explicit_json(file)?),
                delta: None,
                nondegenerate: None,
                default_r: None,
            })
        }
    }
}

/// Effective dimension for envelopes: explicit override, family knowledge,
/// else computed when the ground set is small enough.
fn resolve_delta(instance: &Instance, args: &InstanceArgs) -> Result<usize, SpaceError> {
    if let Some(d) = args.delta.or(instance.delta) {
        return Ok(d);
    }
    vlab::structure::combinatorial_dimension(&instance.oracle)
}

fn resolve_nondegenerate(instance: &Instance) -> Option<bool> {
    if let Some(v) = instance.nondegenerate {
        return Some(v);
    }
    if instance.oracle.n() <= 16 {
        return is_nondegenerate(&instance.oracle, CheckMode::Exhaustive).ok().map(|r| r.ok);
    }
    None
}

const ROW_HEADER: &[&str] = &[
    "n",
    "r",
    "k",
    "delta",
    "rule",
    "quantity",
    "mode",
    "trials",
    "seed",
    "value",
    "value_exact",
    "std_error",
    "general_bound",
    "nondegenerate_bound",
    "smallest_rule_bound",
    "chain_ok",
    "general_ok",
    "nondegenerate_ok",
    "error",
    "wall_ms",
];

#[derive(Default)]
struct Row {
    n: usize,
    r: Option<usize>,
    k: Option<usize>,
    delta: Option<usize>,
    rule: Option<String>,
    quantity: Option<&'static str>,
    mode: Option<&'static str>,
    trials: Option<u64>,
    seed: Option<u64>,
    value: Option<f64>,
    value_exact: Option<String>,
    std_error: Option<f64>,
    general_bound: Option<f64>,
    nondegenerate_bound: Option<f64>,
    smallest_rule_bound: Option<f64>,
    chain_ok: Option<bool>,
    general_ok: Option<bool>,
    nondegenerate_ok: Option<bool>,
    error: Option<String>,
    wall_ms: u64,
}

fn cell<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

impl Row {
    fn csv_cells(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            cell(&self.r),
            cell(&self.k),
            cell(&self.delta),
            cell(&self.rule),
            cell(&self.quantity),
            cell(&self.mode),
            cell(&self.trials),
            cell(&self.seed),
            cell(&self.value),
            cell(&self.value_exact),
            cell(&self.std_error),
            cell(&self.general_bound),
            cell(&self.nondegenerate_bound),
            cell(&self.smallest_rule_bound),
            cell(&self.chain_ok),
            cell(&self.general_ok),
            cell(&self.nondegenerate_ok),
            self.error.as_deref().unwrap_or("").replace(',', ";"),
            self.wall_ms.to_string(),
        ]
    }

    fn json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "r": self.r,
            "k": self.k,
            "delta": self.delta,
            "rule": self.rule,
            "quantity": self.quantity,
            "mode": self.mode,
            "trials": self.trials,
            "seed": self.seed,
            "value": self.value,
            "value_exact": self.value_exact,
            "std_error": self.std_error,
            "general_bound": self.general_bound,
            "nondegenerate_bound": self.nondegenerate_bound,
            "smallest_rule_bound": self.smallest_rule_bound,
            "chain_ok": self.chain_ok,
            "general_ok": self.general_ok,
            "nondegenerate_ok": self.nondegenerate_ok,
            "error": self.error,
            "wall_ms": self.wall_ms,
        })
    }

    fn record_value(&mut self, value: &ExpectationValue) {
        match value {
            ExpectationValue::Exact(q) => {
                self.mode = Some("exact");
                self.value = Some(rational_to_f64(q));
                self.value_exact = Some(q.to_string());
            }
            ExpectationValue::MonteCarlo { estimate, std_error, trials, seed } => {
                self.mode = Some("mc");
                self.value = Some(*estimate);
                self.std_error = Some(*std_error);
                self.trials = Some(*trials);
                self.seed = Some(*seed);
            }
        }
    }
}

fn emit_rows(rows: &[Row], output: &OutputArgs) -> Result<(), SpaceError> {
    let text = match output.format {
        OutFormat::Csv => {
            let mut body = String::new();
            if !output.no_header_timestamp {
                let now = std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0);
                body.push_str(&format!("# generated-at-unix {now}\n"));
            }
            let cells: Vec<Vec<String>> = rows.iter().map(Row::csv_cells).collect();
            body.push_str(&fileio::format_csv(ROW_HEADER, &cells));
            body
        }
        OutFormat::Json => {
            let array: Vec<serde_json::Value> = rows.iter().map(Row::json).collect();
            let mut text = serde_json::to_string_pretty(&array).expect("rows serialize");
            text.push('\n');
            text
        }
    };
    emit_text(&text, output)
}

fn emit_text(text: &str, output: &OutputArgs) -> Result<(), SpaceError> {
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            SpaceError::InvalidInstance(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn rows_exit_code(rows: &[Row]) -> i32 {
    if rows.iter().any(|r| r.error.is_some()) {
        return 2;
    }
    let finding = rows.iter().any(|r| {
        r.chain_ok == Some(false)
            || r.general_ok == Some(false)
            || r.nondegenerate_ok == Some(false)
    });
    if finding {
        1
    } else {
        0
    }
}

fn elapsed_ms(start: Instant, suppress: bool) -> u64 {
    if suppress {
        0
    } else {
        start.elapsed().as_millis() as u64
    }
}

/// Oracle-call estimate for one expectation cell; `None` means overflow.
fn estimate_calls(n: usize, r: usize, k: usize, mode: EvalMode, removal: bool) -> Option<u128> {
    let per_set = if removal { binomial_u128(r as u64, k as u64)? } else { 1 };
    match mode {
        EvalMode::Exact => binomial_u128(n as u64, r as u64)?.checked_mul(per_set),
        EvalMode::MonteCarlo { trials, .. } => (trials as u128).checked_mul(per_set),
    }
}

fn schedule_r(
    explicit: &[usize],
    alpha: Option<f64>,
    n: usize,
    default_r: Option<usize>,
) -> Result<Vec<usize>, SpaceError> {
    if !explicit.is_empty() {
        return Ok(explicit.to_vec());
    }
    if let Some(a) = alpha {
        return Ok(vec![(n as f64).powf(a).round() as usize]);
    }
    if let Some(r) = default_r {
        return Ok(vec![r]);
    }
    Err(SpaceError::InvalidInstance("no sample size: pass --r or --alpha".into()))
}

#[allow(clippy::too_many_arguments)]
fn cmd_sample(
    instance_args: InstanceArgs,
    quantity: String,
    r_list: Vec<usize>,
    k_list: Vec<usize>,
    mode_args: ModeArgs,
    seed: Option<u64>,
    budget_args: BudgetArgs,
    output: OutputArgs,
) -> Result<i32, SpaceError> {
    let quantity = Quantity::parse(&quantity).ok_or_else(|| {
        SpaceError::InvalidInstance(format!("unknown quantity {quantity:?} (use v, x, vk, xk)"))
    })?;
    let instance = build_instance(&instance_args, seed.unwrap_or(0))?;
    let n = instance.oracle.n();
    let delta = instance_args.delta.or(instance.delta);
    let budget = budget_args.budget();
    let r_list = schedule_r(&r_list, instance_args.alpha, n, instance.default_r)?;
    let k_list = if quantity.uses_removal() {
        if k_list.is_empty() {
            vec![1]
        } else {
            k_list
        }
    } else {
        vec![0]
    };
    let mut rows = Vec::new();
    for &r in &r_list {
        for &k in &k_list {
            let start = Instant::now();
            let mut row = Row {
                n,
                r: Some(r),
                k: quantity.uses_removal().then_some(k),
                delta,
                quantity: Some(quantity.name()),
                ..Row::default()
            };
            let outcome = (|| -> Result<(), SpaceError> {
                if r > n {
                    return Err(SpaceError::InvalidInstance(format!("r = {r} exceeds n = {n}")));
                }
                let mode = mode_args.resolve(n, seed)?;
                budget_args.check_calls(
                    "sample",
                    estimate_calls(n, r, k, mode, quantity.uses_removal()),
                )?;
                let result = match mode {
                    EvalMode::Exact => {
                        exact_expectation(&instance.oracle, quantity, r, k, &budget)?
                    }
                    EvalMode::MonteCarlo { trials, seed } => monte_carlo_expectation(
                        &instance.oracle,
                        quantity,
                        r,
                        k,
                        trials,
                        seed,
                        &budget,
                    )?,
                };
                row.record_value(&result.value);
                if matches!(quantity, Quantity::V | Quantity::Vk) && r > 0 {
                    if let Some(d) = delta {
                        let envelope = BoundEnvelope::for_params(n, r, k, d);
                        row.general_bound = Some(envelope.general);
                        let slack = 3.0 * row.std_error.unwrap_or(0.0);
                        row.general_ok = Some(row.value.unwrap_or(0.0) <= envelope.general + slack);
                    }
                }
                Ok(())
            })();
            if let Err(e) = outcome {
                row.error = Some(e.to_string());
            }
            row.wall_ms = elapsed_ms(start, output.no_header_timestamp);
            rows.push(row);
        }
    }
    emit_rows(&rows, &output)?;
    Ok(rows_exit_code(&rows))
}

#[allow(clippy::too_many_arguments)]
fn cmd_removal(
    instance_args: InstanceArgs,
    r_list: Vec<usize>,
    k_list: Vec<usize>,
    rule_name: String,
    mode_args: ModeArgs,
    seed: Option<u64>,
    budget_args: BudgetArgs,
    output: OutputArgs,
) -> Result<i32, SpaceError> {
    let rule = RemovalRule::parse(&rule_name, seed.unwrap_or(0)).ok_or_else(|| {
        SpaceError::InvalidInstance(format!(
            "unknown rule {rule_name:?} (use random, smallest, adversarial, objective-min, basis-avoiding)"
        ))
    })?;
    let instance = build_instance(&instance_args, seed.unwrap_or(0))?;
    let n = instance.oracle.n();
    let budget = budget_args.budget();
    let r_list = schedule_r(&r_list, instance_args.alpha, n, instance.default_r)?;
    let k_list = if k_list.is_empty() { vec![1] } else { k_list };
    let nondegenerate = resolve_nondegenerate(&instance);
    let mut rows = Vec::new();
    for &r in &r_list {
        for &k in &k_list {
            let start = Instant::now();
            let mut row = Row {
                n,
                r: Some(r),
                k: Some(k),
                rule: Some(rule.name().to_string()),
                quantity: Some("v"),
                ..Row::default()
            };
            let outcome = (|| -> Result<(), SpaceError> {
                let delta = resolve_delta(&instance, &instance_args)?;
                row.delta = Some(delta);
                let mode = mode_args.resolve(n, seed)?;
                let enumerates = matches!(
                    rule,
                    RemovalRule::AdversarialMaxViolators
                        | RemovalRule::ObjectiveMin
                        | RemovalRule::RandomK { .. }
                );
                budget_args.check_calls("removal", estimate_calls(n, r, k, mode, enumerates))?;
                let report = check_upper_bounds(
                    &instance.oracle,
                    &rule,
                    r,
                    k,
                    Some(delta),
                    nondegenerate.unwrap_or(false),
                    mode,
                    &budget,
                )?;
                row.record_value(&report.measured.value);
                row.general_bound = Some(report.envelope.general);
                row.nondegenerate_bound = Some(rational_to_f64(&report.envelope.nondegenerate));
                row.smallest_rule_bound =
                    Some(rational_to_f64(&report.envelope.smallest_rule_exact));
                row.chain_ok = report.chain_ok;
                row.general_ok = Some(report.general_ok);
                row.nondegenerate_ok = report.nondegenerate_ok;
                Ok(())
            })();
            if let Err(e) = outcome {
                row.error = Some(e.to_string());
            }
            row.wall_ms = elapsed_ms(start, output.no_header_timestamp);
            rows.push(row);
        }
    }
    emit_rows(&rows, &output)?;
    Ok(rows_exit_code(&rows))
}

const DELTA_K_HEADER: &[&str] =
    &["n", "k", "delta", "delta_k", "power_sum_bound", "within_bound", "error", "wall_ms"];

fn cmd_delta_k(
    instance_args: InstanceArgs,
    k_list: Vec<usize>,
    budget_args: BudgetArgs,
    output: OutputArgs,
) -> Result<i32, SpaceError> {
    let instance = build_instance(&instance_args, 0)?;
    let n = instance.oracle.n();
    let budget = budget_args.budget();
    let k_list = if k_list.is_empty() { vec![1] } else { k_list };
    let delta = instance_args.delta.or(instance.delta).or_else(|| {
        (n <= 20).then(|| vlab::structure::combinatorial_dimension(&instance.oracle).ok()).flatten()
    });
    let nondegenerate = resolve_nondegenerate(&instance);
    let mut cells = Vec::new();
    let mut any_error = false;
    let mut any_finding = false;
    for &k in &k_list {
        let start = Instant::now();
        let mut error = None;
        let mut measured = None;
        match delta_k(&instance.oracle, k, &budget) {
            Ok(v) => measured = Some(v),
            Err(e) => {
                any_error = true;
                error = Some(e.to_string().replace(',', ";"));
            }
        }
        // the power-sum cap only binds for nondegenerate spaces
        let bound = match (delta, nondegenerate) {
            (Some(d), Some(true)) => Some((0..=k).map(|i| d.pow(i as u32)).sum::<usize>()),
            _ => None,
        };
        let within = match (measured, bound) {
            (Some(m), Some(b)) => {
                if m > b {
                    any_finding = true;
                }
                Some(m <= b)
            }
            _ => None,
        };
        let wall = elapsed_ms(start, output.no_header_timestamp);
        cells.push((k, measured, bound, within, error, wall));
    }
    let text = match output.format {
        OutFormat::Csv => {
            let rows: Vec<Vec<String>> = cells
                .iter()
                .map(|(k, measured, bound, within, error, wall)| {
                    vec![
                        n.to_string(),
                        k.to_string(),
                        cell(&delta),
                        cell(measured),
                        cell(bound),
                        cell(within),
                        error.clone().unwrap_or_default(),
                        wall.to_string(),
                    ]
                })
                .collect();
            let mut body = String::new();
            if !output.no_header_timestamp {
                let now = std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0);
                body.push_str(&format!("# generated-at-unix {now}\n"));
            }
            body.push_str(&fileio::format_csv(DELTA_K_HEADER, &rows));
            body
        }
        OutFormat::Json => {
            let array: Vec<serde_json::Value> = cells
                .iter()
                .map(|(k, measured, bound, within, error, wall)| {
                    serde_json::json!({
                        "n": n,
                        "k": k,
                        "delta": delta,
                        "delta_k": measured,
                        "power_sum_bound": bound,
                        "within_bound": within,
                        "error": error,
                        "wall_ms": wall,
                    })
                })
                .collect();
            let mut text = serde_json::to_string_pretty(&array).expect("rows serialize");
            text.push('\n');
            text
        }
    };
    emit_text(&text, &output)?;
    Ok(if any_error {
        2
    } else if any_finding {
        1
    } else {
        0
    })
}

fn cmd_verify(
    instance_args: InstanceArgs,
    trials: u64,
    seed: Option<u64>,
    output: OutputArgs,
) -> Result<i32, SpaceError> {
    let instance = build_instance(&instance_args, seed.unwrap_or(0))?;
    let diagnostics = run_diagnostics(&instance.oracle, trials, seed.unwrap_or(0))?;
    let all_ok = diagnostics.all_ok();
    let mut doc = serde_json::to_value(&diagnostics).expect("diagnostics serialize");
    doc["all_ok"] = serde_json::Value::Bool(all_ok);
    let mut text = serde_json::to_string_pretty(&doc).expect("diagnostics serialize");
    text.push('\n');
    emit_text(&text, &output)?;
    Ok(if all_ok { 0 } else { 1 })
}

fn cmd_canon_dim1(file: PathBuf, output: OutputArgs) -> Result<i32, SpaceError> {
    let space = fileio::read_explicit_json(&file)?;
    let oracle = Oracle::from_space(space);
    let n = oracle.n();
    match canonicalize_dim1(&oracle) {
        Ok(canon) => {
            let verified =
                if n <= 16 { Some(verify_reconstruction(&oracle, &canon)?) } else { None };
            let mut doc = canon.to_json();
            doc["n"] = serde_json::json!(n);
            doc["verified"] = serde_json::json!(verified.as_ref().map(|r| r.ok));
            doc["empty_set"] = serde_json::json!(verified.as_ref().and_then(|r| {
                r.empty_set.map(|reading| match reading {
                    EmptySetReading::AllViolate => "all-violate".to_string(),
                    EmptySetReading::SameAsSingleton(i) => format!("same-as-singleton-{i}"),
                })
            }));
            let mut text = serde_json::to_string_pretty(&doc).expect("canonical form serialize");
            text.push('\n');
            emit_text(&text, &output)?;
            Ok(if verified.is_none_or(|r| r.ok) { 0 } else { 1 })
        }
        Err(err @ SpaceError::StructureViolation { .. }) => {
            let doc = serde_json::json!({ "n": n, "error": err.to_string() });
            let mut text = serde_json::to_string_pretty(&doc).expect("error serialize");
            text.push('\n');
            emit_text(&text, &output)?;
            Ok(1)
        }
        Err(other) => Err(other),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    family: Family,
    n: Option<usize>,
    d: Option<usize>,
    delta: Option<usize>,
    alpha: Option<f64>,
    eps: Option<f64>,
    k: Option<usize>,
    seed: u64,
    out: PathBuf,
) -> Result<i32, SpaceError> {
    use rand::Rng;
    let text = match family {
        Family::RandomConsistent => {
            let n = require(n, "--n")?;
            let params = RandomConsistentParams {
                n,
                r: (n as f64).powf(require(alpha, "--alpha")?).round() as usize,
                k: k.unwrap_or(0),
                delta: require(delta, "--delta")?,
                eps: require(eps, "--eps")?,
                seed,
                scan_budget: 10_000_000,
            };
            // constructing validates the regime before anything is written
            RandomConsistentSpace::new(params)?;
            fileio::params_to_json(&params)
        }
        Family::Seb => {
            let n = require(n, "--n")?;
            let dim = require(d, "--d")?;
            let mut rng = rng_for(seed, domain::GEN, &[n as u64, dim as u64]);
            let points: Vec<Vec<i64>> =
                (0..n).map(|_| (0..dim).map(|_| rng.gen_range(-50..=50)).collect()).collect();
            let rows: Vec<&[i64]> = points.iter().map(|p| p.as_slice()).collect();
            fileio::points_to_csv(&vlab::instances::seb::PointSet::from_integers(dim, &rows)?)
        }
        Family::Repetitions => {
            let n = require(n, "--n")?;
            let mut rng = rng_for(seed, domain::GEN, &[n as u64]);
            let hi = (n / 2).max(2) as i64;
            let values: Vec<String> = (0..n).map(|_| rng.gen_range(1..=hi).to_string()).collect();
            format!("# seed {seed}\n{}\n", values.join("\n"))
        }
        _ => {
            return Err(SpaceError::InvalidInstance(
                "gen supports random-consistent, seb, and repetitions".into(),
            ))
        }
    };
    std::fs::write(&out, text)
        .map_err(|e| SpaceError::InvalidInstance(format!("cannot write {}: {e}", out.display())))?;
    eprintln!("wrote {}", out.display());
    Ok(0)
}

fn init_threads() {
    if let Ok(raw) = std::env::var("VLAB_THREADS") {
        if let Ok(threads) = raw.parse::<usize>() {
            if threads >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
            }
        }
    }
}

fn run(cli: Cli) -> Result<i32, SpaceError> {
    match cli.command {
        Command::Verify { instance, trials, seed, exact: _, output } => {
            cmd_verify(instance, trials, seed, output)
        }
        Command::Sample { instance, quantity, r, k, mode, seed, budget, output } => {
            cmd_sample(instance, quantity, r, k, mode, seed, budget, output)
        }
        Command::Removal { instance, r, k, rule, mode, seed, budget, output } => {
            cmd_removal(instance, r, k, rule, mode, seed, budget, output)
        }
        Command::DeltaK { instance, k, exact: _, budget, output } => {
            cmd_delta_k(instance, k, budget, output)
        }
        Command::CanonDim1 { file, output } => cmd_canon_dim1(file, output),
        Command::Gen { family, n, d, delta, alpha, eps, k, seed, out } => {
            cmd_gen(family, n, d, delta, alpha, eps, k, seed, out)
        }
    }
}

fn main() {
    init_threads();
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    };
    std::process::exit(code);
}
