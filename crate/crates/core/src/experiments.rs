//! Scans over consecutive primes: leading-ones classes, periods without ones,
//! counts of ones, period lengths, and digit statistics.
//!
//! Every scan sieves primes in order, expands chunks of them in parallel and
//! merges results in index order, so output does not depend on thread count.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::continuants::{self, DigitTuple, ExactRational};
use crate::error::{CfError, Result};
use crate::families::{self, FamilyId};
use crate::primes::{self, PrimeRange, SieveConfig};
use crate::surd;

/// Primes expanded per parallel batch.
const CHUNK: usize = 1 << 15;

/// Runs `work` on every prime of `range` in parallel batches and feeds the
/// results to `merge` in increasing index order.
pub fn scan_primes<R, W, M>(range: PrimeRange, cfg: &SieveConfig, work: W, mut merge: M) -> Result<()>
where
    R: Send,
    W: Fn(u64, u64) -> Result<R> + Sync,
    M: FnMut(u64, u64, R) -> Result<()>,
{
    let mut stream = primes::primes_stream(range, cfg)?;
    loop {
        let chunk: Vec<(u64, u64)> = stream.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return Ok(());
        }
        let results: Vec<R> = chunk.par_iter().map(|&(m, p)| work(m, p)).collect::<Result<_>>()?;
        for ((m, p), r) in chunk.into_iter().zip(results) {
            merge(m, p, r)?;
        }
    }
}

/// Primes whose period opens with exactly `k` ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AkRow {
    pub k: u32,
    pub smallest_prime: Option<u64>,
    #[serde(rename = "period")]
    pub period_of_smallest: Option<u64>,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AkScan {
    pub primes: u64,
    pub rows: Vec<AkRow>,
    pub not_starting_with_one: u64,
    /// Primes with more than `kmax` leading ones.
    pub beyond_kmax: u64,
}

/// Number of leading ones of the period of `√n`, capped at `cap`.
///
/// The period ends in `2a₀ ≥ 2`, so the run always ends inside it and no
/// wrap-around is needed.
pub fn leading_ones(n: u64, cap: usize) -> Result<usize> {
    let prefix = surd::expand_prefix_while(n, cap, |d| *d == 1)?;
    Ok(prefix.digits.iter().take_while(|d| **d == 1).count())
}

pub fn scan_ak(kmax: u32, range: PrimeRange, cfg: &SieveConfig, period_budget: u64) -> Result<AkScan> {
    if !(1..=64).contains(&kmax) {
        return Err(CfError::DomainError(format!("kmax must lie in 1..=64, got {kmax}")));
    }
    let cap = kmax as usize + 1;
    let mut counts = vec![0u64; cap + 1];
    let mut smallest = vec![None; cap + 1];
    scan_primes(range, cfg, |_, p| leading_ones(p, cap), |_, p, ones| {
        counts[ones] += 1;
        smallest[ones].get_or_insert(p);
        Ok(())
    })?;
    let rows = (1..=kmax as usize)
        .map(|k| {
            let period = smallest[k].map(|p| surd::period_length(p, period_budget)).transpose()?;
            Ok(AkRow { k: k as u32, smallest_prime: smallest[k], period_of_smallest: period, count: counts[k] })
        })
        .collect::<Result<_>>()?;
    Ok(AkScan { primes: range.count, rows, not_starting_with_one: counts[0], beyond_kmax: counts[cap] })
}

/// Primes whose whole period avoids the digit 1, by period length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct L0Row {
    pub i: u64,
    pub count: u64,
    pub smallest: Option<u64>,
}

/// Period length of `√n` when the period has no digit 1, else `None`.
///
/// The first `prefix_len` digits are screened with early exit; only survivors
/// are expanded in full.
pub fn period_without_ones(n: u64, prefix_len: usize, period_budget: u64) -> Result<Option<u64>> {
    let prefix = surd::expand_prefix_while(n, prefix_len.max(1), |d| *d != 1)?;
    if prefix.digits.contains(&1) {
        return Ok(None);
    }
    if prefix.complete {
        return Ok(Some(prefix.digits.len() as u64));
    }
    let e = surd::expand_full(n, period_budget)?;
    Ok((e.ones() == 0).then_some(e.period_len() as u64))
}

pub fn scan_l0(range: PrimeRange, cfg: &SieveConfig, prefix_len: usize, period_budget: u64) -> Result<Vec<L0Row>> {
    let mut rows: BTreeMap<u64, L0Row> = BTreeMap::new();
    scan_primes(range, cfg, |_, p| period_without_ones(p, prefix_len, period_budget), |_, p, hit| {
        if let Some(i) = hit {
            let row = rows.entry(i).or_insert(L0Row { i, count: 0, smallest: Some(p) });
            row.count += 1;
        }
        Ok(())
    })?;
    Ok(rows.into_values().collect())
}

/// Primes with exactly `i` ones in the period.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct L1Row {
    pub i: u64,
    pub count: u64,
    pub smallest: Option<u64>,
}

/// `(m, ones, T)` for one prime `p_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OnesSample {
    pub m: u64,
    pub ones: u64,
    #[serde(rename = "T")]
    pub period: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct L1Scan {
    pub rows: Vec<L1Row>,
    /// `covered[j]` says some ratio `ones/T` fell in `[j/B, (j+1)/B)`.
    pub covered: Vec<bool>,
    pub samples: Vec<OnesSample>,
}

impl L1Scan {
    pub fn members(&self, i: u64) -> Option<&L1Row> {
        self.rows.iter().find(|r| r.i == i)
    }

    pub fn covered_fraction(&self) -> f64 {
        self.covered.iter().filter(|c| **c).count() as f64 / self.covered.len() as f64
    }
}

/// Counts ones per full period. `buckets` sets the covering grid of `[0, 1]`;
/// samples are kept only when `keep_samples` is set.
pub fn scan_l1(
    range: PrimeRange,
    cfg: &SieveConfig,
    period_budget: u64,
    buckets: usize,
    keep_samples: bool,
) -> Result<L1Scan> {
    if buckets == 0 {
        return Err(CfError::DomainError("covering needs at least one bucket".into()));
    }
    let mut rows: BTreeMap<u64, L1Row> = BTreeMap::new();
    let mut covered = vec![false; buckets];
    let mut samples = Vec::new();
    scan_primes(
        range,
        cfg,
        |_, p| {
            let e = surd::expand_full(p, period_budget)?;
            Ok((e.ones() as u64, e.period_len() as u64))
        },
        |m, p, (ones, period)| {
            let row = rows.entry(ones).or_insert(L1Row { i: ones, count: 0, smallest: Some(p) });
            row.count += 1;
            // ones < T because the last digit is 2a₀
            covered[(ones as u128 * buckets as u128 / period as u128) as usize] = true;
            if keep_samples {
                samples.push(OnesSample { m, ones, period });
            }
            Ok(())
        },
    )?;
    Ok(L1Scan { rows: rows.into_values().collect(), covered, samples })
}

/// Base of the logarithm in the period bound `√m · log m`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Binary,
    Natural,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Binary => x.log2(),
            LogBase::Natural => x.ln(),
        }
    }
}

impl std::str::FromStr for LogBase {
    type Err = CfError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" | "binary" => Ok(LogBase::Binary),
            "e" | "natural" => Ok(LogBase::Natural),
            _ => Err(CfError::DomainError(format!("unknown log base {s:?}, expected 2 or e"))),
        }
    }
}

/// `√m · log m`.
pub fn period_bound(m: u64, base: LogBase) -> f64 {
    let m = m as f64;
    m.sqrt() * base.log(m)
}

/// Period length of `√p_m` against `√m · log m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PeriodStats {
    pub m: u64,
    pub p: u64,
    #[serde(rename = "T")]
    pub period: u64,
    /// `T / (√m · log m)`; absent at `m = 1` where the bound vanishes.
    pub ratio: Option<f64>,
}

impl PeriodStats {
    pub fn new(m: u64, p: u64, period: u64, base: LogBase) -> Self {
        let bound = period_bound(m, base);
        Self { m, p, period, ratio: (m > 1).then(|| period as f64 / bound) }
    }

    /// True when `T < √m · log m` fails. Never true at `m = 1`.
    pub fn exceeds_bound(&self) -> bool {
        self.ratio.is_some_and(|r| r >= 1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodScan {
    pub log_base: LogBase,
    pub series: Vec<PeriodStats>,
    /// Period length to number of primes with it.
    pub histogram: BTreeMap<u64, u64>,
    pub exceedances: Vec<u64>,
    /// Largest ratio seen, first occurrence.
    pub max_ratio: Option<PeriodStats>,
}

/// Streams [`PeriodStats`] for every prime of `range` to `sink`, in order.
pub fn for_each_period<S>(range: PrimeRange, cfg: &SieveConfig, period_budget: u64, base: LogBase, mut sink: S) -> Result<()>
where
    S: FnMut(PeriodStats) -> Result<()>,
{
    scan_primes(range, cfg, |_, p| surd::period_length(p, period_budget), |m, p, t| sink(PeriodStats::new(m, p, t, base)))
}

pub fn scan_periods(
    range: PrimeRange,
    cfg: &SieveConfig,
    period_budget: u64,
    base: LogBase,
    keep_series: bool,
) -> Result<PeriodScan> {
    let mut scan =
        PeriodScan { log_base: base, series: Vec::new(), histogram: BTreeMap::new(), exceedances: Vec::new(), max_ratio: None };
    for_each_period(range, cfg, period_budget, base, |s| {
        *scan.histogram.entry(s.period).or_insert(0) += 1;
        if s.exceeds_bound() {
            scan.exceedances.push(s.m);
        }
        if s.ratio > scan.max_ratio.and_then(|b| b.ratio) {
            scan.max_ratio = Some(s);
        }
        if keep_series {
            scan.series.push(s);
        }
        Ok(())
    })?;
    Ok(scan)
}

/// Predicted share of primes whose period starts with `pattern`:
/// `1 / ((q_k + q_{k−1}) q_k)`.
pub fn density_predict(pattern: &DigitTuple<u64>) -> ExactRational {
    let xs = pattern.entries();
    let qk = continuants::continuant(&xs.iter().map(|&x| BigUint::from(x)).collect::<Vec<_>>());
    let qk1 = continuants::continuant(&xs[..xs.len() - 1].iter().map(|&x| BigUint::from(x)).collect::<Vec<_>>());
    Ratio::new(BigInt::one(), BigInt::from((qk1 + &qk) * qk))
}

/// Predicted share of primes with exactly `k` leading ones, `1 / (F_{k+3} F_{k+1})`.
pub fn density_ak(k: u64) -> ExactRational {
    let den = continuants::fibonacci(k + 3) * continuants::fibonacci(k + 1);
    Ratio::new(BigInt::one(), BigInt::from(den))
}

/// Digit value or the pooled tail above the largest tracked digit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DigitBucket {
    Exactly(u64),
    AtLeast(u64),
}

impl std::fmt::Display for DigitBucket {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DigitBucket::Exactly(d) => write!(f, "{d}"),
            DigitBucket::AtLeast(d) => write!(f, ">={d}"),
        }
    }
}

impl Serialize for DigitBucket {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FreqRow {
    pub position: u64,
    pub digit: DigitBucket,
    #[serde(skip)]
    pub count: u64,
    #[serde(skip)]
    pub total: u64,
    pub empirical: f64,
    pub gauss_kuzmin: f64,
}

impl FreqRow {
    pub fn exact(&self) -> ExactRational {
        Ratio::new(BigInt::from(self.count), BigInt::from(self.total))
    }
}

/// Limiting frequency of digit `k` for almost all reals.
pub fn gauss_kuzmin(k: u64) -> f64 {
    let k = k as f64;
    (1.0 + 1.0 / (k * (k + 2.0))).log2()
}

/// Limiting frequency of all digits `≥ k`.
pub fn gauss_kuzmin_tail(k: u64) -> f64 {
    ((k + 1) as f64 / k as f64).log2()
}

/// Digits at 1-based `positions` of the period of `√n`, wrapping around the period.
pub fn digits_at(n: u64, positions: usize) -> Result<Vec<u64>> {
    let prefix = surd::expand_prefix(n, positions)?;
    let period = &prefix.digits;
    Ok((0..positions).map(|i| period[i % period.len()]).collect())
}

/// Distribution of the digit at `position` over the primes of `range`.
/// Digits above `max_digit` are pooled into one bucket.
pub fn digit_frequency(position: u64, range: PrimeRange, cfg: &SieveConfig, max_digit: u64) -> Result<Vec<FreqRow>> {
    if position == 0 || max_digit == 0 {
        return Err(CfError::DomainError("position and max_digit must be positive".into()));
    }
    let mut counts = vec![0u64; max_digit as usize + 1];
    scan_primes(
        range,
        cfg,
        |_, p| Ok(digits_at(p, position as usize)?[position as usize - 1]),
        |_, _, d| {
            counts[(d.min(max_digit + 1) - 1) as usize] += 1;
            Ok(())
        },
    )?;
    let total = range.count;
    Ok(counts
        .iter()
        .enumerate()
        .map(|(i, &count)| {
            let d = i as u64 + 1;
            let (digit, gk) =
                if d > max_digit { (DigitBucket::AtLeast(d), gauss_kuzmin_tail(d)) } else { (DigitBucket::Exactly(d), gauss_kuzmin(d)) };
            FreqRow { position, digit, count, total, empirical: count as f64 / total as f64, gauss_kuzmin: gk }
        })
        .collect())
}

/// How many primes of `range` have a period (read cyclically) opening with each pattern.
pub fn prefix_counts(patterns: &[DigitTuple<u64>], range: PrimeRange, cfg: &SieveConfig) -> Result<Vec<u64>> {
    let depth = patterns.iter().map(DigitTuple::len).max().unwrap_or(0);
    let mut counts = vec![0u64; patterns.len()];
    if depth == 0 {
        return Ok(counts);
    }
    scan_primes(range, cfg, |_, p| digits_at(p, depth), |_, _, digits| {
        for (c, pat) in counts.iter_mut().zip(patterns) {
            if digits.starts_with(pat.entries()) {
                *c += 1;
            }
        }
        Ok(())
    })?;
    Ok(counts)
}

/// Prime values taken by a family over a parameter box.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Census {
    pub family: FamilyId,
    pub bound: u64,
    pub points: u64,
    /// Points whose value exceeds 64 bits and was not tested.
    pub untested: u64,
    pub prime_points: u64,
    pub distinct_primes: u64,
    pub smallest_prime: Option<u64>,
    #[serde(serialize_with = "decimal")]
    pub largest_value: Option<BigUint>,
    /// Prime points whose expansion breaks the family's pattern.
    pub mismatches: Vec<String>,
    /// Prime points with four leading ones.
    pub four_ones: Vec<u64>,
    /// `N / ln^{3/2} N` at the largest value, for the main family.
    pub reference: Option<f64>,
}

fn decimal<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

pub fn family_prime_census(family: FamilyId, bound: u64, period_budget: u64) -> Result<Census> {
    let points = families::family_points(family, bound);
    let checked: Vec<(Option<u64>, Option<String>, bool)> = points
        .par_iter()
        .map(|pt| -> Result<_> {
            let Some(v) = pt.radicand_u64() else { return Ok((None, None, false)) };
            if !primes::is_prime(v) {
                return Ok((Some(0), None, false));
            }
            let mismatch = pt.verify(period_budget).err().map(|e| format!("{}: {e}", pt.params_string()));
            let four = leading_ones(v, 4)? >= 4;
            Ok((Some(v), mismatch, four))
        })
        .collect::<Result<_>>()?;
    let mut census = Census {
        family,
        bound,
        points: points.len() as u64,
        untested: 0,
        prime_points: 0,
        distinct_primes: 0,
        smallest_prime: None,
        largest_value: points.iter().map(|p| p.radicand.clone()).max(),
        mismatches: Vec::new(),
        four_ones: Vec::new(),
        reference: None,
    };
    let mut distinct = BTreeSet::new();
    for (value, mismatch, four) in checked {
        match value {
            None => census.untested += 1,
            Some(0) => {}
            Some(p) => {
                census.prime_points += 1;
                distinct.insert(p);
                census.mismatches.extend(mismatch);
                if four {
                    census.four_ones.push(p);
                }
            }
        }
    }
    census.distinct_primes = distinct.len() as u64;
    census.smallest_prime = distinct.first().copied();
    census.four_ones.sort_unstable();
    census.four_ones.dedup();
    if family == FamilyId::MainD {
        census.reference = census.largest_value.as_ref().and_then(|n| n.to_f64()).map(|n| n / n.ln().powf(1.5));
    }
    Ok(census)
}
