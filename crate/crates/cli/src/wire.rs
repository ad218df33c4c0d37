//! Serialized forms of the library reports.
//!
//! Every number is written as a decimal string so nothing is lost to
//! floating point; exact rationals become a numerator/denominator pair plus
//! a truncated decimal rendering for reading. CSV rows use the same field
//! names as the JSON records.

use coprime_core::counting::DensityReport;
use coprime_core::crt::ShiftWitnessReport;
use coprime_core::measure::MonteCarloEstimate;
use coprime_core::rational::to_decimal_string;
use coprime_core::residue::{RectWitness, ResidueBoundReport, WitnessPath};
use coprime_core::BigRational;
use serde::Serialize;

/// Places shown in the decimal rendering of exact values.
pub const DECIMAL_PLACES: u32 = 30;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Exact {
    pub num: String,
    pub den: String,
    pub decimal: String,
}

impl From<&BigRational> for Exact {
    fn from(r: &BigRational) -> Self {
        Self {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
            decimal: to_decimal_string(r, DECIMAL_PLACES),
        }
    }
}

/// One density row; the CSV columns, in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityRow {
    pub n1: String,
    pub n2: String,
    pub count: String,
    pub ratio_num: String,
    pub ratio_den: String,
    pub partial_sum_num: String,
    pub partial_sum_den: String,
    pub error_num: String,
    pub error_den: String,
}

impl From<&DensityReport> for DensityRow {
    fn from(r: &DensityReport) -> Self {
        Self {
            n1: r.n1.to_string(),
            n2: r.n2.to_string(),
            count: r.count.to_string(),
            ratio_num: r.ratio.numer().to_string(),
            ratio_den: r.ratio.denom().to_string(),
            partial_sum_num: r.mobius_partial_sum.numer().to_string(),
            partial_sum_den: r.mobius_partial_sum.denom().to_string(),
            error_num: r.error_bound.numer().to_string(),
            error_den: r.error_bound.denom().to_string(),
        }
    }
}

/// JSON form of a density report: the CSV fields plus decimal renderings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityJson {
    #[serde(flatten)]
    pub row: DensityRow,
    pub ratio_decimal: String,
    pub partial_sum_decimal: String,
    pub error_decimal: String,
    pub limit_reference: String,
}

impl From<&DensityReport> for DensityJson {
    fn from(r: &DensityReport) -> Self {
        Self {
            row: r.into(),
            ratio_decimal: to_decimal_string(&r.ratio, DECIMAL_PLACES),
            partial_sum_decimal: to_decimal_string(&r.mobius_partial_sum, DECIMAL_PLACES),
            error_decimal: to_decimal_string(&r.error_bound, DECIMAL_PLACES),
            limit_reference: r.limit_reference().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueBoundRow {
    pub t1: String,
    pub t2: String,
    pub r_count: String,
    pub ratio_num: String,
    pub ratio_den: String,
    pub closed_form_num: String,
    pub closed_form_den: String,
    /// Space-separated.
    pub common_primes: String,
}

impl From<&ResidueBoundReport> for ResidueBoundRow {
    fn from(r: &ResidueBoundReport) -> Self {
        Self {
            t1: r.t1.to_string(),
            t2: r.t2.to_string(),
            r_count: r.r_count.to_string(),
            ratio_num: r.ratio.numer().to_string(),
            ratio_den: r.ratio.denom().to_string(),
            closed_form_num: r.closed_form.numer().to_string(),
            closed_form_den: r.closed_form.denom().to_string(),
            common_primes: join(&r.common_primes),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RectRow {
    pub j1: String,
    pub k1: String,
    pub j2: String,
    pub k2: String,
    pub criterion: bool,
    pub search_cap: String,
    pub search_x: String,
    pub search_y: String,
    pub construct_x: String,
    pub construct_y: String,
    pub construct_path: String,
}

pub fn path_name(path: WitnessPath) -> &'static str {
    match path {
        WitnessPath::Constructive => "constructive",
        WitnessPath::Fallback => "fallback",
    }
}

impl RectRow {
    pub fn new(
        rect: &coprime_core::residue::ResidueRect,
        criterion: bool,
        search_cap: u64,
        search: Option<(u64, u64)>,
        construct: Option<&RectWitness>,
    ) -> Self {
        let opt = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
        Self {
            j1: rect.j1.to_string(),
            k1: rect.k1.to_string(),
            j2: rect.j2.to_string(),
            k2: rect.k2.to_string(),
            criterion,
            search_cap: search_cap.to_string(),
            search_x: opt(search.map(|s| s.0)),
            search_y: opt(search.map(|s| s.1)),
            construct_x: opt(construct.map(|w| w.x)),
            construct_y: opt(construct.map(|w| w.y)),
            construct_path: construct.map(|w| path_name(w.path)).unwrap_or("").into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftRow {
    pub a_i: String,
    pub b_i: String,
    pub prime: String,
    pub certificate: String,
    pub witness_a: String,
    pub witness_b: String,
    pub shifted_gcd: String,
}

pub fn shift_rows(r: &ShiftWitnessReport) -> Vec<ShiftRow> {
    r.shift_set
        .iter()
        .zip(&r.assigned_primes)
        .zip(&r.certificates)
        .map(|((&(a_i, b_i), &p), &d)| ShiftRow {
            a_i: a_i.to_string(),
            b_i: b_i.to_string(),
            prime: p.to_string(),
            certificate: d.to_string(),
            witness_a: r.witness.0.to_string(),
            witness_b: r.witness.1.to_string(),
            shifted_gcd: coprime_core::sieve::gcd(r.witness.0 + a_i, r.witness.1 + b_i).to_string(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftWitnessJson {
    pub shift_set: Vec<[String; 2]>,
    pub assigned_primes: Vec<String>,
    pub witness: [String; 2],
    pub certificates: Vec<String>,
    pub verified: bool,
    pub rows: Vec<ShiftRow>,
}

impl ShiftWitnessJson {
    pub fn new(r: &ShiftWitnessReport, verified: bool) -> Self {
        Self {
            shift_set: r
                .shift_set
                .iter()
                .map(|&(a, b)| [a.to_string(), b.to_string()])
                .collect(),
            assigned_primes: strings(&r.assigned_primes),
            witness: [r.witness.0.to_string(), r.witness.1.to_string()],
            certificates: strings(&r.certificates),
            verified,
            rows: shift_rows(r),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRow {
    pub prime_count: String,
    pub samples: String,
    pub seed: String,
    pub hits: String,
    pub estimate: String,
    pub standard_error: String,
    pub euler_product_num: String,
    pub euler_product_den: String,
    pub euler_product_decimal: String,
    pub z_score: String,
}

impl SampleRow {
    pub fn new(r: &MonteCarloEstimate, exact: &BigRational) -> Self {
        let reference = coprime_core::rational::to_f64(exact);
        let z = if r.standard_error > 0.0 {
            (r.estimate - reference) / r.standard_error
        } else {
            f64::NAN
        };
        Self {
            prime_count: r.prime_count.to_string(),
            samples: r.samples.to_string(),
            seed: r.seed.to_string(),
            hits: r.hits.to_string(),
            estimate: format!("{:.12}", r.estimate),
            standard_error: format!("{:.12}", r.standard_error),
            euler_product_num: exact.numer().to_string(),
            euler_product_den: exact.denom().to_string(),
            euler_product_decimal: to_decimal_string(exact, DECIMAL_PLACES),
            z_score: format!("{z:.6}"),
        }
    }
}

pub fn strings(values: &[u64]) -> Vec<String> {
    values.iter().map(u64::to_string).collect()
}

pub fn join(values: &[u64]) -> String {
    strings(values).join(" ")
}
