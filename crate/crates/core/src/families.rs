//! Parametric radicand families whose square-root expansions have a known
//! digit pattern.
//!
//! Every constructor evaluates the defining polynomial exactly. Where two
//! algebraic routes to the same radicand exist, both are computed and
//! compared; the period shape itself is checked by [`FamilyPoint::verify`]
//! through the expansion engine.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CfError, Result};
use crate::surd::{self, Expansion};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FamilyId {
    #[serde(rename = "L21_case2")]
    L21Case2,
    #[serde(rename = "L21_case3")]
    L21Case3,
    #[serde(rename = "L21_case4")]
    L21Case4,
    #[serde(rename = "L21_case5")]
    L21Case5,
    #[serde(rename = "L21_case6")]
    L21Case6,
    #[serde(rename = "MAIN_D")]
    MainD,
    #[serde(rename = "PERIOD8")]
    Period8,
    #[serde(rename = "PERIOD9_F")]
    Period9F,
}

impl FamilyId {
    pub const ALL: [FamilyId; 8] = [
        FamilyId::L21Case2,
        FamilyId::L21Case3,
        FamilyId::L21Case4,
        FamilyId::L21Case5,
        FamilyId::L21Case6,
        FamilyId::MainD,
        FamilyId::Period8,
        FamilyId::Period9F,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::L21Case2 => "L21_case2",
            FamilyId::L21Case3 => "L21_case3",
            FamilyId::L21Case4 => "L21_case4",
            FamilyId::L21Case5 => "L21_case5",
            FamilyId::L21Case6 => "L21_case6",
            FamilyId::MainD => "MAIN_D",
            FamilyId::Period8 => "PERIOD8",
            FamilyId::Period9F => "PERIOD9_F",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = CfError;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| CfError::DomainError(format!("unknown family {s:?}")))
    }
}

/// One radicand of a family, with the parameters that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyPoint {
    pub family: FamilyId,
    pub params: BTreeMap<&'static str, BigInt>,
    pub radicand: BigUint,
    /// `⌊√D⌋`.
    pub a0: BigUint,
}

impl FamilyPoint {
    fn new(family: FamilyId, params: &[(&'static str, &BigInt)], radicand: BigInt) -> Result<Self> {
        let radicand = radicand
            .to_biguint()
            .filter(|d| !d.is_zero())
            .ok_or_else(|| CfError::DomainError(format!("{family} produced a non-positive radicand")))?;
        let a0 = radicand.sqrt();
        let params = params.iter().map(|(k, v)| (*k, (*v).clone())).collect();
        Ok(Self { family, params, radicand, a0 })
    }

    pub fn param(&self, name: &str) -> Option<&BigInt> {
        self.params.get(name)
    }

    fn small_param(&self, name: &str) -> u64 {
        self.params[name].to_u64().expect("family parameters are validated as positive u64")
    }

    pub fn radicand_u64(&self) -> Option<u64> {
        self.radicand.to_u64()
    }

    /// The full period the family guarantees, if it pins one down.
    pub fn expected_period(&self) -> Option<Vec<BigUint>> {
        let one = || BigUint::one();
        let two_a = &self.a0 * 2u32;
        let mut period: Vec<BigUint> = match self.family {
            FamilyId::MainD => return None,
            FamilyId::L21Case2 => vec![one(); 3],
            FamilyId::L21Case3 => vec![one(); 4],
            FamilyId::L21Case4 => {
                let x = BigUint::from(2 * self.small_param("u"));
                vec![one(), one(), x, one(), one()]
            }
            FamilyId::L21Case5 => {
                let x = BigUint::from(self.small_param("x"));
                vec![one(), one(), x.clone(), x, one(), one()]
            }
            FamilyId::L21Case6 | FamilyId::Period8 => {
                let x = BigUint::from(self.small_param("x"));
                vec![one(), one(), one(), x, one(), one(), one()]
            }
            FamilyId::Period9F => {
                let x = BigUint::from(2 * self.small_param("n"));
                vec![one(), one(), one(), x.clone(), x, one(), one(), one()]
            }
        };
        period.push(two_a);
        Some(period)
    }

    /// Digits every member of the family starts its period with.
    pub fn expected_prefix(&self) -> Vec<BigUint> {
        match self.expected_period() {
            Some(p) => p,
            None => vec![BigUint::one(); 3],
        }
    }

    /// Expands `√D` and checks it against the advertised pattern.
    pub fn verify(&self, period_budget: u64) -> Result<Expansion<BigUint>> {
        let e = surd::expand_full(self.radicand.clone(), period_budget)?;
        let mismatch = |what: &str| {
            Err(CfError::InternalInvariantViolation(format!(
                "{} point {:?}: {what}; got sqrt({}) = {e}",
                self.family, self.params, self.radicand
            )))
        };
        if *e.a0() != self.a0 {
            return mismatch("a0 differs");
        }
        match self.expected_period() {
            Some(p) if e.period() != &p[..] => mismatch("period differs from the family pattern"),
            None if !e.period().starts_with(&self.expected_prefix()) => mismatch("prefix differs from (1,1,1)"),
            _ => Ok(e),
        }
    }
}

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(CfError::DomainError(msg()))
    }
}

fn exact_div(num: &BigInt, den: &BigInt, what: &str) -> Result<BigInt> {
    let (q, r) = num.div_rem(den);
    require(r.is_zero(), || format!("{what}: {den} does not divide {num}"))?;
    Ok(q)
}

fn main_d_big(d: &BigInt, t: &BigInt) -> BigInt {
    let a0: BigInt = 4 * t + 3 * d + 5;
    &a0 * &a0 + 5 * t + 4 * d + 6
}

/// `D(d, t) = (4t + 3d + 5)² + 5t + 4d + 6`, with `a0 = 4t + 3d + 5`.
pub fn main_d(d: u64, t: u64) -> Result<FamilyPoint> {
    require(d >= 1 && t >= 1, || format!("main family needs d, t >= 1, got ({d}, {t})"))?;
    let (d, t) = (big(d), big(t));
    let point = FamilyPoint::new(FamilyId::MainD, &[("d", &d), ("t", &t)], main_d_big(&d, &t))?;
    debug_assert_eq!(BigInt::from(point.a0.clone()), 4 * &t + 3 * &d + 5);
    Ok(point)
}

/// Parameters of the radicand characterisations with short all-but-one periods.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lemma21 {
    /// `√D = [a; (1,1,1,2a)‾]`, `a = 3t − 1`, `D = t(9t − 2)`.
    Case2 { t: u64 },
    /// `√D = [a; (1,1,1,1,2a)‾]`, `a = 5t − 2`, `D = 25t² − 14t + 2`.
    Case3 { t: u64 },
    /// `√D = [a; (1,1,2u,1,1,2a)‾]`, `a = 2(2u+1)v − u − 1`.
    Case4 { u: u64, v: u64 },
    /// `√D = [a; (1,1,x,x,1,1,2a)‾]`.
    Case5 { x: u64, t: u64 },
    /// `√D = [a; (1,1,1,x,1,1,1,2a)‾]`; `t` may be zero.
    Case6 { x: u64, t: u64 },
}

pub fn lemma21_d(case: Lemma21) -> Result<FamilyPoint> {
    match case {
        Lemma21::Case2 { t } => {
            require(t >= 1, || "case 2 needs t >= 1".into())?;
            let t = big(t);
            let a: BigInt = 3 * &t - 1;
            let d = &t * (9 * &t - 2);
            check_a0(FamilyPoint::new(FamilyId::L21Case2, &[("t", &t)], d)?, &a)
        }
        Lemma21::Case3 { t } => {
            require(t >= 1, || "case 3 needs t >= 1".into())?;
            let t = big(t);
            let a: BigInt = 5 * &t - 2;
            let d: BigInt = 25 * &t * &t - 14 * &t + 2;
            check_a0(FamilyPoint::new(FamilyId::L21Case3, &[("t", &t)], d)?, &a)
        }
        Lemma21::Case4 { u, v } => {
            require(u >= 1 && v >= 1, || "case 4 needs u, v >= 1".into())?;
            let (u, v) = (big(u), big(v));
            let x: BigInt = 2 * &u;
            let a: BigInt = 2 * (2 * &u + 1) * &v - &u - 1;
            let two_u1: BigInt = 2 * &u + 1;
            let d: BigInt = (4 * &v - 1) * (&two_u1 * &two_u1 * &v - &u * (&u + 1));
            // Second route: D = (2a+1)(2(x+1)a + x + 2) / (4(x+1)).
            let alt = exact_div(&((2 * &a + 1) * (2 * (&x + 1) * &a + &x + 2)), &(4 * (&x + 1)), "case 4")?;
            if alt != d {
                return Err(CfError::InternalInvariantViolation(format!("case 4 routes disagree: {d} vs {alt}")));
            }
            check_a0(FamilyPoint::new(FamilyId::L21Case4, &[("u", &u), ("v", &v)], d)?, &a)
        }
        Lemma21::Case5 { x, t } => {
            require(x >= 1, || "case 5 needs x >= 1".into())?;
            let (x, t) = (big(x), big(t));
            let m: BigInt = 4 * &x * &x + 4 * &x + 5;
            let c: BigInt = (2 * &x + 1) * (&x * &x + &x + 1) * (&x * &x + 2 * &x + 2);
            let a = &m * &t - &c;
            require(a.is_positive(), || format!("case 5 needs t > {c}/{m}, got t = {t}"))?;
            let num: BigInt = 2 * (2 * &x * &x + 3 * &x + 3) * &a + &x * &x + 2 * &x + 2;
            let d = &a * &a + exact_div(&num, &m, "case 5")?;
            check_a0(FamilyPoint::new(FamilyId::L21Case5, &[("x", &x), ("t", &t)], d)?, &a)
        }
        Lemma21::Case6 { x, t } => {
            require(x >= 1, || "case 6 needs x >= 1".into())?;
            let (x, t) = (big(x), big(t));
            let m: BigInt = 3 * (3 * &x + 4);
            let coef: BigInt = 2 * (6 * &x + 7);
            let g = coef.gcd(&m);
            let a = exact_div(&(&m * &t), &g, "case 6 a")? + exact_div(&((&x + 1) * (3 * &x + 8)), &big(2), "case 6 a")?;
            require(a.is_positive(), || "case 6 needs a > 0".into())?;
            let num: BigInt = &coef * &a + 4 * (&x + 1);
            let d = &a * &a + exact_div(&num, &m, "case 6")?;
            check_a0(FamilyPoint::new(FamilyId::L21Case6, &[("x", &x), ("t", &t)], d)?, &a)
        }
    }
}

fn check_a0(point: FamilyPoint, a: &BigInt) -> Result<FamilyPoint> {
    if BigInt::from(point.a0.clone()) != *a {
        return Err(CfError::DomainError(format!(
            "{} point {:?}: floor(sqrt({})) = {} but the pattern needs a = {a}",
            point.family, point.params, point.radicand, point.a0
        )));
    }
    Ok(point)
}

/// The `(d, t)` of the main family whose expansions have period 8,
/// `d = (3x − 4)u + 3 + x − x²`, `t = 2(3u − x − 2)`.
pub fn period8_param(x: u64, u: u64) -> Result<FamilyPoint> {
    require(x >= 1 && 3 * u > x + 2, || format!("period-8 family needs x >= 1 and 3u > x + 2, got x={x}, u={u}"))?;
    let (x, u) = (big(x), big(u));
    let d: BigInt = (3 * &x - 4) * &u + 3 + &x - &x * &x;
    let t: BigInt = 2 * (3 * &u - &x - 2);
    require(d.is_positive() && t.is_positive(), || format!("period-8 family gives d={d}, t={t}"))?;
    let lead: BigInt = 3 * &x + 4;
    let product: BigInt = (9 * &u - 3 * &x - 1) * (&lead * &lead * &u - (&x + 1) * (3 * &x * &x + 6 * &x + 2));
    let direct = main_d_big(&d, &t);
    if product != direct {
        return Err(CfError::InternalInvariantViolation(format!("period-8 routes disagree: {product} vs {direct}")));
    }
    FamilyPoint::new(FamilyId::Period8, &[("x", &x), ("u", &u), ("d", &d), ("t", &t)], direct)
}

/// The middle digit `x` for which `D(d, t) = [a; (1,1,1,x,1,1,1,2a)]`, if any.
///
/// Solves `6d − (3x − 4)t = 2(5x + 1)` for `x`. Unlike [`period8_param`] this
/// also covers odd `t`, which occurs for even `x`.
pub fn period8_middle(d: u64, t: u64) -> Option<u64> {
    let num = 6 * d + 4 * t;
    let den = 3 * t + 10;
    (num >= 2 + den && (num - 2).is_multiple_of(den)).then(|| (num - 2) / den)
}

fn poly(coeffs: &[i64], n: &BigInt) -> BigInt {
    coeffs.iter().fold(BigInt::zero(), |acc, &c| acc * n + c)
}

/// `(P₀(n), P₁(n), P₂(n))` with `F(n, u) = P₀u² + P₁u + P₂`.
pub fn period9_coefficients(n: u64) -> (BigInt, BigInt, BigInt) {
    let n = big(n);
    let p0 = poly(&[36, 24, 13], &n).pow(2);
    let p1 = 2 * poly(&[255744, 314064, 265824, 96196, 24300, -1898, 437], &n);
    let p2 = 2 * poly(&[25233408, 28330752, 23296712, 7136448, 1742464, -315412, 94262, -6994, 565], &n);
    (p0, p1, p2)
}

/// The period-9 subfamily `F(n, u)` of the main family.
pub fn period9_f(n: u64, u: u64) -> Result<FamilyPoint> {
    require(n >= 1 && u >= 1, || format!("period-9 family needs n, u >= 1, got n={n}, u={u}"))?;
    let (nb, ub) = (big(n), big(u));
    let d0: BigInt = 4 * nb.pow(3) * (592 * &nb - 457);
    let t0: BigInt = poly(&[2368, 540, -52, 7], &nb);
    let d: BigInt = poly(&[12, -8, -1], &nb) * &ub + d0;
    let t: BigInt = 4 * (3 * &nb + 1) * &ub + t0;
    let (p0, p1, p2) = period9_coefficients(n);
    let via_poly = p0 * &ub * &ub + p1 * &ub + p2;
    let via_main = main_d_big(&d, &t);
    if via_poly != via_main {
        return Err(CfError::InternalInvariantViolation(format!("period-9 routes disagree: {via_poly} vs {via_main}")));
    }
    FamilyPoint::new(FamilyId::Period9F, &[("n", &nb), ("u", &ub), ("d", &d), ("t", &t)], via_main)
}

/// Reducibility data for `D(d, t)` as a polynomial in `d` or in `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscriminantReport {
    pub d: i64,
    pub t: i64,
    /// `Disc_d(D) = 4(10 + 3t)`.
    pub disc_d: i64,
    pub disc_d_square: bool,
    /// `Disc_t(D) = 41 − 16d`.
    pub disc_t: i64,
    pub disc_t_square: bool,
    /// `(c, e)` with `D(d, t) = (t + c)(16t + e)`, present for `d ∈ {1, 2}`.
    pub t_factors: Option<(i64, i64)>,
}

fn square_root(v: i64) -> Option<i64> {
    if v < 0 {
        return None;
    }
    let r = v.sqrt();
    (r * r == v).then_some(r)
}

pub fn discriminant_checks(d: i64, t: i64) -> DiscriminantReport {
    let disc_d = 4 * (10 + 3 * t);
    let disc_t = 41 - 16 * d;
    let t_factors = match d {
        1 => Some((2, 37)),
        2 => Some((3, 45)),
        _ => None,
    };
    DiscriminantReport {
        d,
        t,
        disc_d,
        disc_d_square: square_root(disc_d).is_some(),
        disc_t,
        disc_t_square: square_root(disc_t).is_some(),
        t_factors,
    }
}

/// Splits `9·D(d, t) = (9d + 4u² − u − 23)(9d + 4u² + u − 23)` for `t = (u² − 10)/3`.
pub fn split_in_d(d: i64, u: i64) -> (i64, i64) {
    let base = 9 * d + 4 * u * u - 23;
    (base - u, base + u)
}

/// Outcome of checking the main family over `1 ≤ d, t ≤ grid`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GridReport {
    pub grid: u64,
    pub points: u64,
    pub violations: Vec<String>,
    pub period7: Vec<(u64, u64)>,
    pub period8: Vec<(u64, u64)>,
    /// `(d, t)` reached by the period-8 parametrisation inside the grid.
    pub period8_param: Vec<(u64, u64)>,
    /// Period-8 points the parametrisation does not reach.
    pub period8_unparametrised: Vec<(u64, u64)>,
    pub four_ones: u64,
}

impl GridReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

struct GridCell {
    d: u64,
    t: u64,
    period: u64,
    prefix: Vec<u64>,
    value: u64,
}

/// Checks, for every `1 ≤ d, t ≤ grid`: the period starts with three ones;
/// `T ≥ 7` with `T = 7` only at `(1, 3)`; four leading ones exactly when
/// `d ∈ {1, 2}`, where `D` factors; period 8 exactly where [`period8_middle`]
/// has a solution, with that digit fourth; and every [`period8_param`] point in
/// the grid has period 8. Period-8 points outside the parametrisation are
/// listed in `period8_unparametrised` rather than counted as violations.
pub fn verify_main_grid(grid: u64, period_budget: u64) -> Result<GridReport> {
    require(grid >= 1, || "grid bound must be positive".into())?;
    let cells: Vec<GridCell> = (1..=grid)
        .into_par_iter()
        .flat_map_iter(|d| (1..=grid).map(move |t| (d, t)))
        .map(|(d, t)| -> Result<GridCell> {
            let value = main_d(d, t)?
                .radicand_u64()
                .ok_or_else(|| CfError::DomainError(format!("D({d},{t}) exceeds 64 bits")))?;
            let prefix = surd::expand_prefix(value, 4)?.digits;
            let period = surd::period_length(value, period_budget)?;
            Ok(GridCell { d, t, period, prefix, value })
        })
        .collect::<Result<_>>()?;

    let mut report = GridReport { grid, points: cells.len() as u64, ..Default::default() };
    for c in &cells {
        let (d, t) = (c.d, c.t);
        if c.prefix.len() < 3 || c.prefix[..3] != [1, 1, 1] {
            report.violations.push(format!("({d},{t}): prefix {:?} does not start with 1,1,1", c.prefix));
        }
        if c.period < 7 {
            report.violations.push(format!("({d},{t}): period {} < 7", c.period));
        }
        if (c.period == 7) != ((d, t) == (1, 3)) {
            report.violations.push(format!("({d},{t}): period {} breaks the T = 7 characterisation", c.period));
        }
        let four = c.prefix.len() >= 4 && c.prefix[..4] == [1, 1, 1, 1];
        if four {
            report.four_ones += 1;
        }
        if four != (d <= 2) {
            report.violations.push(format!("({d},{t}): four leading ones = {four} with d = {d}"));
        }
        if d <= 2 {
            let (c1, c2) = if d == 1 { (2, 37) } else { (3, 45) };
            if c.value != (t + c1) * (16 * t + c2) {
                report.violations.push(format!("({d},{t}): D = {} does not factor as (t+{c1})(16t+{c2})", c.value));
            }
        }
        if c.period == 7 {
            report.period7.push((d, t));
        }
        if c.period == 8 {
            report.period8.push((d, t));
        }
        match period8_middle(d, t) {
            Some(x) if c.period != 8 || c.prefix.get(3) != Some(&x) => report
                .violations
                .push(format!("({d},{t}): middle digit {x} predicted but period {} with prefix {:?}", c.period, c.prefix)),
            None if c.period == 8 => report.violations.push(format!("({d},{t}): period 8 without a middle digit")),
            _ => {}
        }
    }

    // Inside the grid t ≤ grid forces 3u ≤ x + 2 + grid/2, and d ≥ (5x + 1)/3.
    let mut hits = BTreeSet::new();
    for x in 1..=3 * grid {
        for u in x.div_ceil(3) + 1..=(x + 2 + grid / 2) / 3 + 1 {
            let point = match period8_param(x, u) {
                Ok(p) => p,
                Err(CfError::DomainError(_)) => continue,
                Err(e) => return Err(e),
            };
            let d = point.param("d").and_then(|v| v.to_u64()).unwrap_or(u64::MAX);
            let t = point.param("t").and_then(|v| v.to_u64()).unwrap_or(u64::MAX);
            if d <= grid && t <= grid {
                hits.insert((d, t));
            }
        }
    }
    report.period8_param = hits.iter().copied().collect();
    let found: BTreeSet<_> = report.period8.iter().copied().collect();
    report.period8_unparametrised = found.difference(&hits).copied().collect();
    for extra in hits.difference(&found) {
        report.violations.push(format!("{extra:?}: produced by the period-8 parametrisation but period != 8"));
    }
    Ok(report)
}

/// Checks both routes and the period pattern of `F(n, u)` over a box.
pub fn verify_period9(n_max: u64, u_max: u64, period_budget: u64) -> Result<Vec<String>> {
    let mut violations = Vec::new();
    for n in 1..=n_max {
        for u in 1..=u_max {
            match period9_f(n, u).and_then(|p| p.verify(period_budget).map(|_| ())) {
                Ok(()) => {}
                Err(e) => violations.push(format!("(n={n}, u={u}): {e}")),
            }
        }
    }
    Ok(violations)
}

/// `gcd(P₀(n), P₁(n), P₂(n))`.
pub fn period9_content(n: u64) -> BigInt {
    let (p0, p1, p2) = period9_coefficients(n);
    p0.gcd(&p1).gcd(&p2)
}

/// Iterates the family over a parameter box `1..=bound` per parameter.
/// Points outside the family's domain are skipped.
pub fn family_points(family: FamilyId, bound: u64) -> Vec<FamilyPoint> {
    let pairs = |f: &dyn Fn(u64, u64) -> Result<FamilyPoint>| -> Vec<FamilyPoint> {
        (1..=bound).flat_map(|i| (1..=bound).map(move |j| (i, j))).filter_map(|(i, j)| f(i, j).ok()).collect()
    };
    match family {
        FamilyId::L21Case2 => (1..=bound).filter_map(|t| lemma21_d(Lemma21::Case2 { t }).ok()).collect(),
        FamilyId::L21Case3 => (1..=bound).filter_map(|t| lemma21_d(Lemma21::Case3 { t }).ok()).collect(),
        FamilyId::L21Case4 => pairs(&|u, v| lemma21_d(Lemma21::Case4 { u, v })),
        FamilyId::L21Case5 => {
            // t runs over the first `bound` admissible values for each x.
            let mut out = Vec::new();
            for x in 1..=bound {
                let m = 4 * x * x + 4 * x + 5;
                let c = (2 * x + 1) * (x * x + x + 1) * (x * x + 2 * x + 2);
                let t_min = c / m + 1;
                out.extend((t_min..t_min + bound).filter_map(|t| lemma21_d(Lemma21::Case5 { x, t }).ok()));
            }
            out
        }
        FamilyId::L21Case6 => (1..=bound)
            .flat_map(|x| (0..bound).map(move |t| (x, t)))
            .filter_map(|(x, t)| lemma21_d(Lemma21::Case6 { x, t }).ok())
            .collect(),
        FamilyId::MainD => pairs(&main_d),
        FamilyId::Period8 => pairs(&period8_param),
        FamilyId::Period9F => pairs(&period9_f),
    }
}

impl FamilyPoint {
    /// `name=value` pairs joined by commas, e.g. `d=1,t=3`.
    pub fn params_string(&self) -> String {
        self.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUDGET: u64 = 100_000;

    fn small(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn main_family_values() {
        let p = main_d(1, 3).unwrap();
        assert_eq!(p.radicand, small(425));
        assert_eq!(p.a0, small(20));
        assert_eq!(main_d(1, 1).unwrap().radicand, small(159));
        let prefix = surd::expand_prefix(159u64, 3).unwrap();
        assert_eq!(prefix.digits, [1, 1, 1]);
        for t in 1..=100u64 {
            assert_eq!(main_d(1, t).unwrap().radicand, small((t + 2) * (16 * t + 37)));
            assert_eq!(main_d(2, t).unwrap().radicand, small((t + 3) * (16 * t + 45)));
        }
        assert!(main_d(0, 1).is_err());
    }

    #[test]
    fn lemma21_examples() {
        let p = lemma21_d(Lemma21::Case2 { t: 1 }).unwrap();
        assert_eq!(p.radicand, small(7));
        p.verify(BUDGET).unwrap();
        let p = lemma21_d(Lemma21::Case3 { t: 1 }).unwrap();
        assert_eq!(p.radicand, small(13));
        p.verify(BUDGET).unwrap();
        let p = lemma21_d(Lemma21::Case4 { u: 1, v: 1 }).unwrap();
        assert_eq!(p.radicand, small(21));
        assert_eq!(p.a0, small(4));
        let e = p.verify(BUDGET).unwrap();
        assert_eq!(e.period(), [1u64, 1, 2, 1, 1, 8].map(small));
        // x = 1 collapses case 5 and case 6 to all-ones periods.
        assert_eq!(lemma21_d(Lemma21::Case5 { x: 1, t: 4 }).unwrap().radicand, small(58));
        assert_eq!(lemma21_d(Lemma21::Case6 { x: 1, t: 0 }).unwrap().radicand, small(135));
    }

    #[test]
    fn lemma21_domains() {
        assert!(matches!(lemma21_d(Lemma21::Case2 { t: 0 }), Err(CfError::DomainError(_))));
        assert!(matches!(lemma21_d(Lemma21::Case5 { x: 1, t: 3 }), Err(CfError::DomainError(_))));
        assert!(matches!(lemma21_d(Lemma21::Case4 { u: 0, v: 3 }), Err(CfError::DomainError(_))));
    }

    #[test]
    fn lemma21_cases_expand_as_advertised() {
        for p in family_points(FamilyId::L21Case2, 30)
            .into_iter()
            .chain(family_points(FamilyId::L21Case3, 30))
            .chain(family_points(FamilyId::L21Case4, 12))
            .chain(family_points(FamilyId::L21Case5, 8))
            .chain(family_points(FamilyId::L21Case6, 12))
        {
            p.verify(BUDGET).unwrap();
        }
    }

    #[test]
    fn case5_coprimality_identity() {
        for x in 1..=200i64 {
            let u = (2 * x + 1) * (x * x + x + 1);
            let v = 2 * x * x * x + 4 * x * x + 4 * x + 1;
            assert_eq!(2 * (2 * x * x + 3 * x + 3) * u - (4 * x * x + 4 * x + 5) * v, 1);
        }
    }

    #[test]
    fn case6_gcd_by_parity() {
        for x in 1..=200i64 {
            let g = (2 * (6 * x + 7)).gcd(&(3 * (3 * x + 4)));
            assert_eq!(g, if x % 2 == 0 { 2 } else { 1 }, "x = {x}");
        }
    }

    #[test]
    fn period8_examples() {
        let p = period8_param(1, 2).unwrap();
        assert_eq!(p.param("d"), Some(&BigInt::from(1)));
        assert_eq!(p.param("t"), Some(&BigInt::from(6)));
        assert_eq!(p.radicand, small(1064));
        assert_eq!(main_d(1, 6).unwrap().radicand, small(1064));
        let e = p.verify(BUDGET).unwrap();
        assert_eq!(e.period_len(), 8);

        let p = period8_param(2, 2).unwrap();
        assert_eq!(p.param("d"), Some(&BigInt::from(5)));
        assert_eq!(p.param("t"), Some(&BigInt::from(4)));
        let e = p.verify(BUDGET).unwrap();
        assert_eq!(e.period_len(), 8);
        assert_eq!(e.digit(4), Some(&small(2)));

        assert!(matches!(period8_param(1, 1), Err(CfError::DomainError(_))));
    }

    #[test]
    fn period9_examples() {
        let p = period9_f(1, 1).unwrap();
        assert_eq!(p.param("d"), Some(&BigInt::from(543)));
        assert_eq!(p.param("t"), Some(&BigInt::from(2879)));
        assert_eq!(p.radicand, small(13150 * 13150 + 16573));
        assert_eq!(p.verify(BUDGET).unwrap().period_len(), 9);
        for n in 1..=50 {
            assert!(period9_content(n).is_one(), "n = {n}");
        }
    }

    #[test]
    fn discriminants() {
        let r = discriminant_checks(1, 1);
        assert_eq!(r.disc_t, 25);
        assert!(r.disc_t_square);
        assert_eq!(r.t_factors, Some((2, 37)));
        let r = discriminant_checks(3, 1);
        assert_eq!(r.disc_t, -7);
        assert!(!r.disc_t_square);
        assert_eq!(r.t_factors, None);
        let r = discriminant_checks(1, 2);
        assert_eq!(r.disc_d, 64);
        assert!(r.disc_d_square);
        // t = (u² − 10)/3 with u = 8 gives t = 18.
        for d in 1..=20 {
            let (l, r) = split_in_d(d, 8);
            let dv = main_d(d as u64, 18).unwrap().radicand.to_i64().unwrap();
            assert_eq!(9 * dv, l * r);
        }
    }

    #[test]
    fn small_grid_is_clean() {
        let r = verify_main_grid(40, BUDGET).unwrap();
        assert!(r.is_clean(), "{:?}", r.violations);
        assert_eq!(r.period7, vec![(1, 3)]);
        assert!(r.period8.contains(&(1, 6)));
        // The parametrisation only yields even t; every odd-t period-8 point has an even middle digit.
        assert!(r.period8_param.iter().all(|&(_, t)| t % 2 == 0));
        assert!(!r.period8_unparametrised.is_empty());
        for &(d, t) in &r.period8_unparametrised {
            assert_eq!(t % 2, 1);
            assert_eq!(period8_middle(d, t).unwrap() % 2, 0);
        }
        assert!(r.period8.iter().filter(|(_, t)| t % 2 == 0).eq(r.period8_param.iter()));
    }

    #[test]
    fn family_names_round_trip() {
        for id in FamilyId::ALL {
            assert_eq!(id.name().parse::<FamilyId>().unwrap(), id);
        }
        assert!("nope".parse::<FamilyId>().is_err());
    }
}
