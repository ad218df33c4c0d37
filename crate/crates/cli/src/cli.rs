//! Argument grammar, dispatch and output rendering for the `coprime` binary.
//!
//! [`run`] is the whole program minus process plumbing: it takes argv and
//! returns the exit status together with everything destined for stdout and
//! stderr, which keeps the binary testable in-process.

use std::fmt::Write as _;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coprime_core::counting::{
    count_coprime_brute, count_coprime_mobius, density, density_table, BRUTE_FORCE_CAP,
};
use coprime_core::crt::{crt_solve, shift_witness, verify_shift_witness, CongruenceSystem};
use coprime_core::measure::{
    euler_product, euler_product_gap_bound, measure, sample_coprime_estimate,
};
use coprime_core::residue::{
    construct_coprime_in_rect, r_count, rect_coprime_search, rect_nonempty_criterion,
    residue_upper_bound, ResidueRect,
};
use coprime_core::sieve::{build_mobius_table, build_prime_table, PrimeTable};
use coprime_core::Error;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::expr::{format_expression, parse_expression, ParseError};
use crate::reproduce::{self, ReproduceConfig};
use crate::wire::{
    self, DensityJson, DensityRow, Exact, RectRow, ResidueBoundRow, SampleRow, ShiftWitnessJson,
};

pub const DEFAULT_PRIME_LIMIT: u64 = 1_000_000;
pub const DEFAULT_SEARCH_CAP: u64 = 8;

/// Exit status for computation errors (caps, tables, unsolvable input).
pub const EXIT_COMPUTATION: i32 = 1;
/// Exit status for malformed command lines.
pub const EXIT_USAGE: i32 = 2;
/// Exit status of `reproduce` when some criterion fails; the table is still printed.
pub const EXIT_CRITERIA_FAILED: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Plain,
}

/// `--mobius-limit`: `auto` sizes the table to what the command needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableLimit {
    Auto,
    Fixed(u64),
}

impl FromStr for TableLimit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(Self::Auto);
        }
        s.parse()
            .map(Self::Fixed)
            .map_err(|_| format!("expected `auto` or a nonnegative integer, got `{s}`"))
    }
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Möbius table size; `auto` uses the smallest size the command needs.
    #[arg(long, global = true, default_value = "auto")]
    pub mobius_limit: TableLimit,
    /// Upper limit of the prime table.
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME_LIMIT)]
    pub prime_limit: u64,
    /// Maximum number of pairs a brute-force count may evaluate.
    #[arg(long, global = true, default_value_t = BRUTE_FORCE_CAP)]
    pub brute_cap: u64,
    /// Seed for every randomized operation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Parser)]
#[command(
    name = "coprime",
    version,
    about = "Exact densities of coprime pairs, residue-class bounds and cylinder measures"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Mobius,
    Brute,
    /// Run both and require agreement.
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Möbius values μ(1..=n).
    Mobius {
        #[arg(long)]
        n: u64,
    },
    /// Primes from the prime table.
    Primes {
        /// The first `count` primes.
        #[arg(long, conflicts_with = "upto", required_unless_present = "upto")]
        count: Option<usize>,
        /// Every prime up to `upto`.
        #[arg(long)]
        upto: Option<u64>,
    },
    /// Number of coprime pairs in [n1] x [n2].
    Count {
        #[arg(long)]
        n1: u64,
        #[arg(long)]
        n2: u64,
        #[arg(long, value_enum, default_value = "mobius")]
        method: Method,
    },
    /// Exact coprime density of [n1] x [n2] with its error envelope.
    Density {
        /// Square side; shorthand for `--n1 N --n2 N`.
        #[arg(long, conflicts_with_all = ["n1", "n2"], required_unless_present_all = ["n1", "n2"])]
        n: Option<u64>,
        #[arg(long, requires = "n2")]
        n1: Option<u64>,
        #[arg(long, requires = "n1")]
        n2: Option<u64>,
    },
    /// Density rows for square sides.
    DensityTable {
        /// Comma-separated side lengths.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        n: Vec<u64>,
    },
    /// Nonemptiness of R_{j1,k1} x R_{j2,k2} on the coprime set.
    Rect {
        #[arg(long)]
        j1: u64,
        #[arg(long)]
        k1: u64,
        #[arg(long)]
        j2: u64,
        #[arg(long)]
        k2: u64,
        /// Also build the constructive witness.
        #[arg(long)]
        construct: bool,
        /// The search covers x, y <= cap * k1 * k2.
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
        search_cap: u64,
    },
    /// r_{t1,t2}: residue pairs whose rectangle meets the coprime set.
    RCount {
        #[arg(long)]
        t1: u64,
        #[arg(long)]
        t2: u64,
    },
    /// The residue bound along the primorial of the first K primes.
    ResidueBound {
        #[arg(long)]
        primes: usize,
    },
    /// Solve x ≡ r (mod m) for pairwise coprime moduli.
    Crt {
        /// `r:m`; repeat for each congruence.
        #[arg(long = "congruence", value_parser = parse_congruence, required = true)]
        congruences: Vec<(u64, u64)>,
    },
    /// A point whose every listed shift has both coordinates sharing a factor.
    ShiftWitness {
        /// `a,b`; repeat for each shift.
        #[arg(long = "pair", value_parser = parse_pair, required = true)]
        pairs: Vec<(u64, u64)>,
    },
    /// Exact measure of a union of cylinder sets, e.g. "A{2|;3∤} U A{5|}".
    Measure {
        #[arg(long)]
        expr: String,
    },
    /// Π (1 - p⁻²) over the first K primes.
    EulerProduct {
        #[arg(long)]
        primes: usize,
    },
    /// Seeded Monte Carlo estimate of the truncated product measure.
    Sample {
        #[arg(long)]
        primes: usize,
        #[arg(long)]
        samples: u64,
    },
    /// Run every acceptance check and print the comparison table.
    Reproduce {
        /// Include wall-clock times (makes the output machine dependent).
        #[arg(long)]
        timings: bool,
    },
}

fn parse_congruence(s: &str) -> Result<(u64, u64), String> {
    let (r, m) = s
        .split_once(':')
        .ok_or_else(|| format!("expected `r:m`, got `{s}`"))?;
    let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("`{t}`: {e}"));
    Ok((num(r)?, num(m)?))
}

fn parse_pair(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("`{t}`: {e}"));
    Ok((num(a)?, num(b)?))
}

/// Everything a run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A finished computation, before rendering.
pub struct Report {
    /// The JSON `result` object.
    pub result: Value,
    /// Flat rows for CSV and plain output; every row has the same keys.
    pub rows: Vec<Value>,
}

impl Report {
    fn single<T: Serialize>(record: &T) -> Self {
        let v = to_value(record);
        Self {
            result: v.clone(),
            rows: vec![v],
        }
    }

    fn table<T: Serialize>(records: &[T]) -> Self {
        let rows: Vec<Value> = records.iter().map(to_value).collect();
        Self {
            result: json!({ "rows": rows }),
            rows,
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("records serialize to JSON")
}

enum Failure {
    Usage(String),
    Compute(Error),
    Parse(ParseError),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            // Bad values on an otherwise well-formed command line.
            Error::InvalidArgument(msg) => Failure::Usage(msg),
            e => Failure::Compute(e),
        }
    }
}

/// The fully resolved configuration echoed with every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub params: Map<String, Value>,
    pub format: Format,
    pub mobius_limit: String,
    pub prime_limit: String,
    pub brute_cap: String,
    pub seed: String,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Mobius { .. } => "mobius",
        Command::Primes { .. } => "primes",
        Command::Count { .. } => "count",
        Command::Density { .. } => "density",
        Command::DensityTable { .. } => "density-table",
        Command::Rect { .. } => "rect",
        Command::RCount { .. } => "r-count",
        Command::ResidueBound { .. } => "residue-bound",
        Command::Crt { .. } => "crt",
        Command::ShiftWitness { .. } => "shift-witness",
        Command::Measure { .. } => "measure",
        Command::EulerProduct { .. } => "euler-product",
        Command::Sample { .. } => "sample",
        Command::Reproduce { .. } => "reproduce",
    }
}

fn params(c: &Command) -> Map<String, Value> {
    let s = |v: u64| Value::String(v.to_string());
    let list = |vs: &[(u64, u64)], sep: char| {
        Value::Array(
            vs.iter()
                .map(|(a, b)| Value::String(format!("{a}{sep}{b}")))
                .collect(),
        )
    };
    let mut m = Map::new();
    match c {
        Command::Mobius { n } => {
            m.insert("n".into(), s(*n));
        }
        Command::Primes { count, upto } => {
            if let Some(c) = count {
                m.insert("count".into(), s(*c as u64));
            }
            if let Some(u) = upto {
                m.insert("upto".into(), s(*u));
            }
        }
        Command::Count { n1, n2, method } => {
            m.insert("n1".into(), s(*n1));
            m.insert("n2".into(), s(*n2));
            m.insert("method".into(), method_name(*method).into());
        }
        Command::Density { n, n1, n2 } => {
            let (a, b) = square_or_pair(*n, *n1, *n2);
            m.insert("n1".into(), s(a));
            m.insert("n2".into(), s(b));
        }
        Command::DensityTable { n } => {
            m.insert("n".into(), Value::Array(n.iter().map(|&v| s(v)).collect()));
        }
        Command::Rect {
            j1,
            k1,
            j2,
            k2,
            construct,
            search_cap,
        } => {
            m.insert("j1".into(), s(*j1));
            m.insert("k1".into(), s(*k1));
            m.insert("j2".into(), s(*j2));
            m.insert("k2".into(), s(*k2));
            m.insert("construct".into(), Value::Bool(*construct));
            m.insert("search_cap".into(), s(*search_cap));
        }
        Command::RCount { t1, t2 } => {
            m.insert("t1".into(), s(*t1));
            m.insert("t2".into(), s(*t2));
        }
        Command::ResidueBound { primes } | Command::EulerProduct { primes } => {
            m.insert("primes".into(), s(*primes as u64));
        }
        Command::Crt { congruences } => {
            m.insert("congruences".into(), list(congruences, ':'));
        }
        Command::ShiftWitness { pairs } => {
            m.insert("pairs".into(), list(pairs, ','));
        }
        Command::Measure { expr } => {
            m.insert("expr".into(), expr.clone().into());
        }
        Command::Sample { primes, samples } => {
            m.insert("primes".into(), s(*primes as u64));
            m.insert("samples".into(), s(*samples));
        }
        Command::Reproduce { timings } => {
            m.insert("timings".into(), Value::Bool(*timings));
        }
    }
    m
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Mobius => "mobius",
        Method::Brute => "brute",
        Method::Both => "both",
    }
}

fn square_or_pair(n: Option<u64>, n1: Option<u64>, n2: Option<u64>) -> (u64, u64) {
    match n {
        Some(n) => (n, n),
        None => (n1.unwrap_or(0), n2.unwrap_or(0)),
    }
}

/// Möbius table size the command needs, if it uses one.
fn mobius_needed(c: &Command) -> Option<u64> {
    match c {
        Command::Mobius { n } => Some(*n),
        Command::Count { n1, n2, method } if *method != Method::Brute => Some(*n1.min(n2)),
        Command::Density { n, n1, n2 } => {
            let (a, b) = square_or_pair(*n, *n1, *n2);
            Some(a.min(b))
        }
        Command::DensityTable { n } => Some(n.iter().copied().max().unwrap_or(0)),
        Command::Reproduce { .. } => Some(reproduce::MOBIUS_LIMIT),
        _ => None,
    }
}

fn resolve_config(cli: &Cli) -> RunConfig {
    let g = &cli.global;
    let mobius_limit = match (mobius_needed(&cli.command), g.mobius_limit) {
        (None, _) => "unused".to_string(),
        (Some(needed), TableLimit::Auto) => needed.to_string(),
        (Some(_), TableLimit::Fixed(limit)) => limit.to_string(),
    };
    RunConfig {
        command: command_name(&cli.command).into(),
        params: params(&cli.command),
        format: g.format,
        mobius_limit,
        prime_limit: g.prime_limit.to_string(),
        brute_cap: g.brute_cap.to_string(),
        seed: g.seed.to_string(),
    }
}

/// Runs the program on `argv` (including the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome {
                        code: 0,
                        stdout: text,
                        stderr: String::new(),
                    }
                }
                _ => usage_failure(text),
            };
        }
    };
    let config = resolve_config(&cli);
    match execute(&cli) {
        Ok((report, code)) => Outcome {
            code,
            stdout: render(&config, &report),
            stderr: String::new(),
        },
        Err(Failure::Usage(msg)) => usage_failure(format!("error: {msg}\n")),
        Err(Failure::Parse(e)) => match e {
            ParseError::BeyondTable { .. } => {
                compute_failure(&config, "table_too_small", &e.to_string())
            }
            e => usage_failure(format!("error: invalid --expr: {e}\n")),
        },
        Err(Failure::Compute(e)) => compute_failure(&config, error_kind(&e), &e.to_string()),
    }
}

fn usage_failure(diagnostic: String) -> Outcome {
    Outcome {
        code: EXIT_USAGE,
        stdout: String::new(),
        stderr: diagnostic,
    }
}

fn compute_failure(config: &RunConfig, kind: &str, message: &str) -> Outcome {
    let body = json!({
        "error": { "kind": kind, "message": message },
        "config": config,
    });
    Outcome {
        code: EXIT_COMPUTATION,
        stdout: String::new(),
        stderr: format!(
            "{}\n",
            serde_json::to_string(&body).expect("error serializes")
        ),
    }
}

/// Stable machine-readable name of an error.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidArgument(_) => "invalid_argument",
        Error::TableTooSmall { .. } => "table_too_small",
        Error::UnfactoredCofactor { .. } => "unfactored_cofactor",
        Error::BruteForceCap { .. } => "brute_force_cap",
        Error::EnumerationCap { .. } => "enumeration_cap",
        Error::Overflow(_) => "overflow",
        Error::Unsolvable { .. } => "unsolvable",
        Error::NonCoprimeModuli { .. } => "non_coprime_moduli",
        Error::Precondition(_) => "precondition",
        Error::ResourceLimit { .. } => "resource_limit",
        Error::Internal(_) => "internal",
        Error::Row { source, .. } => error_kind(source),
    }
}

fn mobius_table(cli: &Cli, needed: u64) -> Result<coprime_core::sieve::MobiusTable, Failure> {
    let limit = match cli.global.mobius_limit {
        TableLimit::Auto => needed,
        TableLimit::Fixed(limit) => limit,
    };
    Ok(build_mobius_table(limit)?)
}

fn prime_table(cli: &Cli) -> Result<PrimeTable, Failure> {
    Ok(build_prime_table(cli.global.prime_limit)?)
}

#[derive(Serialize)]
struct MobiusRow {
    k: String,
    mu: String,
}

#[derive(Serialize)]
struct PrimeRow {
    rank: String,
    prime: String,
}

#[derive(Serialize)]
struct CountRow {
    n1: String,
    n2: String,
    count: String,
    method: &'static str,
}

#[derive(Serialize)]
struct CrtRow {
    solution: String,
    modulus: String,
}

#[derive(Serialize)]
struct MeasureRow {
    expr: String,
    normalized_terms: String,
    measure_num: String,
    measure_den: String,
    measure_decimal: String,
}

#[derive(Serialize)]
struct EulerRow {
    primes: String,
    largest_prime: String,
    product_num: String,
    product_den: String,
    product_decimal: String,
    gap_bound_num: String,
    gap_bound_den: String,
}

fn execute(cli: &Cli) -> Result<(Report, i32), Failure> {
    let g = &cli.global;
    let report = match &cli.command {
        Command::Mobius { n } => {
            let mu = mobius_table(cli, *n)?;
            if mu.limit() < *n {
                return Err(Error::TableTooSmall {
                    table: "Möbius",
                    needed: *n,
                    limit: mu.limit(),
                }
                .into());
            }
            let rows: Vec<MobiusRow> = (1..=*n)
                .map(|k| MobiusRow {
                    k: k.to_string(),
                    mu: mu.get(k).expect("within limit").to_string(),
                })
                .collect();
            Report::table(&rows)
        }
        Command::Primes { count, upto } => {
            let table = prime_table(cli)?;
            let list: &[u64] = match (count, upto) {
                (Some(c), _) => table.first(*c)?,
                (None, Some(u)) => {
                    if *u > table.limit() {
                        return Err(Error::TableTooSmall {
                            table: "prime",
                            needed: *u,
                            limit: table.limit(),
                        }
                        .into());
                    }
                    let end = table.primes().partition_point(|&p| p <= *u);
                    &table.primes()[..end]
                }
                (None, None) => unreachable!("clap requires one of --count/--upto"),
            };
            let rows: Vec<PrimeRow> = list
                .iter()
                .enumerate()
                .map(|(i, p)| PrimeRow {
                    rank: (i + 1).to_string(),
                    prime: p.to_string(),
                })
                .collect();
            Report::table(&rows)
        }
        Command::Count { n1, n2, method } => {
            let count = match method {
                Method::Brute => count_coprime_brute(*n1, *n2, g.brute_cap)? as u128,
                Method::Mobius => count_coprime_mobius(*n1, *n2, &mobius_table(cli, *n1.min(n2))?)?,
                Method::Both => {
                    let fast = count_coprime_mobius(*n1, *n2, &mobius_table(cli, *n1.min(n2))?)?;
                    let slow = count_coprime_brute(*n1, *n2, g.brute_cap)? as u128;
                    if fast != slow {
                        return Err(Error::Internal(format!(
                            "Möbius count {fast} disagrees with enumeration {slow}"
                        ))
                        .into());
                    }
                    fast
                }
            };
            Report::single(&CountRow {
                n1: n1.to_string(),
                n2: n2.to_string(),
                count: count.to_string(),
                method: method_name(*method),
            })
        }
        Command::Density { n, n1, n2 } => {
            let (a, b) = square_or_pair(*n, *n1, *n2);
            let report = density(a, b, &mobius_table(cli, a.min(b))?)?;
            Report {
                result: to_value(&DensityJson::from(&report)),
                rows: vec![to_value(&DensityRow::from(&report))],
            }
        }
        Command::DensityTable { n } => {
            let needed = n.iter().copied().max().unwrap_or(0);
            let reports = density_table(n, &mobius_table(cli, needed)?)?;
            let json: Vec<DensityJson> = reports.iter().map(DensityJson::from).collect();
            let rows: Vec<DensityRow> = reports.iter().map(DensityRow::from).collect();
            Report {
                result: json!({ "rows": json }),
                rows: rows.iter().map(to_value).collect(),
            }
        }
        Command::Rect {
            j1,
            k1,
            j2,
            k2,
            construct,
            search_cap,
        } => {
            let rect = ResidueRect::new(*j1, *k1, *j2, *k2)?;
            let criterion = rect_nonempty_criterion(&rect);
            let search = rect_coprime_search(&rect, *search_cap);
            let witness = if *construct && criterion {
                Some(construct_coprime_in_rect(&rect, &prime_table(cli)?)?)
            } else {
                None
            };
            Report::single(&RectRow::new(
                &rect,
                criterion,
                *search_cap,
                search,
                witness.as_ref(),
            ))
        }
        Command::RCount { t1, t2 } => {
            let report = r_count(*t1, *t2, &prime_table(cli)?)?;
            let row = ResidueBoundRow::from(&report);
            let mut result = to_value(&row);
            result["ratio_decimal"] = wire::Exact::from(&report.ratio).decimal.into();
            Report {
                result,
                rows: vec![to_value(&row)],
            }
        }
        Command::ResidueBound { primes } => {
            let table = prime_table(cli)?;
            let bound = residue_upper_bound(*primes, &table)?;
            let primorial = table
                .first(*primes)?
                .iter()
                .try_fold(1u64, |acc, &p| acc.checked_mul(p))
                .map(|v| v.to_string())
                .unwrap_or_default();
            let exact = Exact::from(&bound);
            Report::single(&json!({
                "primes": primes.to_string(),
                "primorial": primorial,
                "bound_num": exact.num,
                "bound_den": exact.den,
                "bound_decimal": exact.decimal,
            }))
        }
        Command::Crt { congruences } => {
            let system = CongruenceSystem::from_pairs(congruences)?;
            let x = crt_solve(&system)?;
            let modulus = system
                .modulus_product()
                .ok_or(Error::Overflow("modulus product"))?;
            Report::single(&CrtRow {
                solution: x.to_string(),
                modulus: modulus.to_string(),
            })
        }
        Command::ShiftWitness { pairs } => {
            let report = shift_witness(pairs, &prime_table(cli)?)?;
            let verified = verify_shift_witness(&report);
            if !verified {
                return Err(Error::Internal("shift witness failed verification".into()).into());
            }
            let rows = wire::shift_rows(&report);
            Report {
                result: to_value(&ShiftWitnessJson::new(&report, verified)),
                rows: rows.iter().map(to_value).collect(),
            }
        }
        Command::Measure { expr } => {
            let table = prime_table(cli)?;
            let e = parse_expression(expr, &table).map_err(Failure::Parse)?;
            let normalized = coprime_core::measure::normalize(&e)?;
            let value = measure(&e, &table)?;
            let exact = Exact::from(&value);
            Report::single(&MeasureRow {
                expr: format_expression(&e, &table),
                normalized_terms: normalized.terms().len().to_string(),
                measure_num: exact.num,
                measure_den: exact.den,
                measure_decimal: exact.decimal,
            })
        }
        Command::EulerProduct { primes } => {
            let table = prime_table(cli)?;
            let product = euler_product(*primes, &table)?;
            let gap = euler_product_gap_bound(*primes, &table)?;
            let exact = Exact::from(&product);
            Report::single(&EulerRow {
                primes: primes.to_string(),
                largest_prime: table
                    .nth(*primes)
                    .map(|p| p.to_string())
                    .unwrap_or_default(),
                product_num: exact.num,
                product_den: exact.den,
                product_decimal: exact.decimal,
                gap_bound_num: gap.numer().to_string(),
                gap_bound_den: gap.denom().to_string(),
            })
        }
        Command::Sample { primes, samples } => {
            let table = prime_table(cli)?;
            let estimate = sample_coprime_estimate(*primes, *samples, g.seed, &table)?;
            let exact = euler_product(*primes, &table)?;
            Report::single(&SampleRow::new(&estimate, &exact))
        }
        Command::Reproduce { timings } => {
            let config = ReproduceConfig {
                seed: g.seed,
                prime_limit: g.prime_limit,
                brute_cap: g.brute_cap,
                mobius_limit: match g.mobius_limit {
                    TableLimit::Auto => reproduce::MOBIUS_LIMIT,
                    TableLimit::Fixed(l) => l,
                },
            };
            let outcomes = reproduce::run_all(&config);
            let all_passed = outcomes.iter().all(|c| c.passed());
            let rows: Vec<Value> = outcomes
                .iter()
                .flat_map(|c| c.rows(*timings))
                .map(|r| to_value(&r))
                .collect();
            let code = if all_passed { 0 } else { EXIT_CRITERIA_FAILED };
            return Ok((
                Report {
                    result: json!({ "all_passed": all_passed, "rows": rows }),
                    rows,
                },
                code,
            ));
        }
    };
    Ok((report, 0))
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn config_lines(config: &RunConfig) -> Vec<String> {
    let value = to_value(config);
    let mut lines = Vec::new();
    for (k, v) in value.as_object().expect("config is an object") {
        match v {
            Value::Object(params) => {
                for (pk, pv) in params {
                    lines.push(format!("{k}.{pk}={}", cell(pv)));
                }
            }
            v => lines.push(format!("{k}={}", cell(v))),
        }
    }
    lines
}

/// Renders a report in the configured format. Output always ends with a newline.
pub fn render(config: &RunConfig, report: &Report) -> String {
    match config.format {
        Format::Json => {
            let envelope = json!({ "config": config, "result": report.result });
            let mut s = serde_json::to_string_pretty(&envelope).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut out = String::new();
            for line in config_lines(config) {
                writeln!(out, "# {line}").unwrap();
            }
            let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
            if let Some(Value::Object(first)) = report.rows.first() {
                w.write_record(first.keys()).expect("in-memory write");
            }
            for row in &report.rows {
                let obj = row.as_object().expect("rows are objects");
                w.write_record(obj.values().map(cell))
                    .expect("in-memory write");
            }
            let bytes = w.into_inner().expect("in-memory flush");
            out.push_str(std::str::from_utf8(&bytes).expect("CSV of UTF-8 cells"));
            out
        }
        Format::Plain => {
            let mut out = String::new();
            writeln!(out, "# {}", config_lines(config).join(" ")).unwrap();
            for (i, row) in report.rows.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let obj = row.as_object().expect("rows are objects");
                let width = obj.keys().map(|k| k.chars().count()).max().unwrap_or(0);
                for (k, v) in obj {
                    writeln!(out, "{k:<width$}  {}", cell(v)).unwrap();
                }
            }
            out
        }
    }
}
