//! Exact continued-fraction expansion of `√D` for non-square `D`.
//!
//! The engine runs the integer PQa recursion: the complete quotient at step
//! `k` is `(√D + P_k) / Q_k`, and
//!
//! ```text
//! P' = a·Q − P,   Q' = (D − P'²) / Q,   a' = ⌊(⌊√D⌋ + P') / Q'⌋
//! ```
//!
//! Nothing is ever evaluated in floating point. The period ends when the
//! state `(P₁, Q₁)` reached after the first step recurs.

use std::fmt;

use num_bigint::{BigInt, BigUint};

use crate::continuants;
use crate::error::{CfError, Result};
use crate::scalar::Radicand;

/// Default cap on the number of period digits produced by a full expansion.
pub const DEFAULT_PERIOD_BUDGET: u64 = 1_000_000;

/// `⌊√n⌋`, exact for every width of `T`.
pub fn isqrt<T: Radicand>(n: &T) -> T {
    n.sqrt()
}

pub fn is_square<T: Radicand>(n: &T) -> bool {
    let r = isqrt(n);
    r.clone() * r == *n
}

/// One state of the PQa recursion for `√D`.
///
/// The complete quotient represented is `(√D + p) / q`; the digit emitted
/// at this index is `⌊(a0 + p) / q⌋`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurdState<T> {
    radicand: T,
    a0: T,
    p: T,
    q: T,
    index: u64,
}

impl<T: Radicand> SurdState<T> {
    /// Initial state `(P, Q) = (0, 1)` at index 0.
    pub fn new(radicand: T) -> Result<Self> {
        Self::from_parts(radicand, T::zero(), T::one(), 0)
    }

    /// Builds a state from raw parts. Only the radicand is validated; use
    /// [`SurdState::check_invariants`] to validate the rest.
    pub fn from_parts(radicand: T, p: T, q: T, index: u64) -> Result<Self> {
        let a0 = isqrt(&radicand);
        if a0.clone() * a0.clone() == radicand {
            return Err(CfError::SquareInput(radicand.to_string()));
        }
        Ok(Self { radicand, a0, p, q, index })
    }

    pub fn radicand(&self) -> &T {
        &self.radicand
    }

    pub fn a0(&self) -> &T {
        &self.a0
    }

    pub fn p(&self) -> &T {
        &self.p
    }

    pub fn q(&self) -> &T {
        &self.q
    }

    /// Number of digits emitted so far.
    pub fn index(&self) -> u64 {
        self.index
    }

    /// Digit of the complete quotient held by this state.
    pub fn digit(&self) -> T {
        (self.a0.clone() + self.p.clone()) / self.q.clone()
    }

    fn same_point(&self, p: &T, q: &T) -> bool {
        self.p == *p && self.q == *q
    }

    pub fn check_invariants(&self) -> Result<()> {
        let violation = |what: &str| {
            Err(CfError::InternalInvariantViolation(format!(
                "{what} at index {} of sqrt({}): P={}, Q={}",
                self.index, self.radicand, self.p, self.q
            )))
        };
        if self.q.is_zero() {
            return violation("Q = 0");
        }
        let p_sq = self.p.clone() * self.p.clone();
        if p_sq > self.radicand {
            return violation("P^2 > D");
        }
        if !(self.radicand.clone() - p_sq).is_multiple_of(&self.q) {
            return violation("Q does not divide D - P^2");
        }
        if self.index >= 1 {
            let two_a0 = self.a0.clone() + self.a0.clone();
            if self.p.is_zero() || self.p > self.a0 || self.q > two_a0 {
                return violation("state outside 0 < P <= a0, 0 < Q <= 2a0");
            }
        }
        Ok(())
    }

    /// Advances in place and returns the digit of the new state.
    pub fn advance(&mut self) -> Result<T> {
        if self.q.is_zero() {
            return Err(self.corrupt("Q = 0"));
        }
        let a = self.digit();
        let aq = a * self.q.clone();
        if aq < self.p {
            return Err(self.corrupt("a*Q < P"));
        }
        let p_next = aq - self.p.clone();
        let p_sq = p_next.clone() * p_next.clone();
        if p_sq >= self.radicand {
            return Err(self.corrupt("P'^2 >= D"));
        }
        let (q_next, rem) = (self.radicand.clone() - p_sq).div_rem(&self.q);
        if !rem.is_zero() {
            return Err(self.corrupt("inexact division (D - P'^2) / Q"));
        }
        self.p = p_next;
        self.q = q_next;
        self.index += 1;
        Ok(self.digit())
    }

    /// One recursion step: the emitted digit and the successor state.
    pub fn step(&self) -> Result<(T, Self)> {
        let mut next = self.clone();
        let digit = next.advance()?;
        Ok((digit, next))
    }

    fn corrupt(&self, what: &str) -> CfError {
        CfError::InternalInvariantViolation(format!(
            "{what} at index {} of sqrt({}): P={}, Q={}",
            self.index, self.radicand, self.p, self.q
        ))
    }
}

/// Full expansion `√D = [a0; (a1, …, aT)‾]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Expansion<T> {
    radicand: T,
    a0: T,
    period: Vec<T>,
}

impl<T: Radicand> Expansion<T> {
    /// Validates the shape every `√D` period has: the block ends in `2a0` and
    /// the rest of it is a palindrome.
    fn checked(radicand: T, a0: T, period: Vec<T>) -> Result<Self> {
        let two_a0 = a0.clone() + a0.clone();
        match period.last() {
            Some(last) if *last == two_a0 => {}
            _ => {
                return Err(CfError::InternalInvariantViolation(format!(
                    "period of sqrt({radicand}) does not end in 2a0"
                )))
            }
        }
        let interior = &period[..period.len() - 1];
        if !interior.iter().eq(interior.iter().rev()) {
            return Err(CfError::InternalInvariantViolation(format!(
                "period of sqrt({radicand}) is not palindromic"
            )));
        }
        Ok(Self { radicand, a0, period })
    }

    pub fn radicand(&self) -> &T {
        &self.radicand
    }

    pub fn a0(&self) -> &T {
        &self.a0
    }

    pub fn period(&self) -> &[T] {
        &self.period
    }

    /// Period length `T`.
    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// `a_i` for `i ≥ 1`, continuing cyclically past the end of the period.
    pub fn digit(&self, i: usize) -> Option<&T> {
        if i == 0 {
            return None;
        }
        self.period.get((i - 1) % self.period.len())
    }

    /// Number of digits equal to 1 in the period.
    pub fn ones(&self) -> usize {
        self.period.iter().filter(|d| d.is_one()).count()
    }

    pub fn is_palindromic(&self) -> bool {
        let interior = &self.period[..self.period.len() - 1];
        interior.iter().eq(interior.iter().rev())
    }
}

impl<T: fmt::Display> fmt::Display for Expansion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; (", self.a0)?;
        for (i, d) in self.period.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(")]")
    }
}

/// The first digits of the period of `√D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrefixExpansion<T> {
    pub radicand: T,
    pub a0: T,
    pub digits: Vec<T>,
    /// True when the whole period fits in `digits`.
    pub complete: bool,
}

pub fn expand_full<T: Radicand>(radicand: T, period_budget: u64) -> Result<Expansion<T>> {
    let mut state = SurdState::new(radicand)?;
    let first = state.advance()?;
    let (p1, q1) = (state.p.clone(), state.q.clone());
    let mut period = vec![first];
    loop {
        let digit = state.advance()?;
        if state.same_point(&p1, &q1) {
            break;
        }
        if period.len() as u64 >= period_budget {
            return Err(budget_error(&state.radicand, period_budget));
        }
        period.push(digit);
    }
    let SurdState { radicand, a0, .. } = state;
    Expansion::checked(radicand, a0, period)
}

/// Period length without storing digits.
pub fn period_length<T: Radicand>(radicand: T, period_budget: u64) -> Result<u64> {
    let mut state = SurdState::new(radicand)?;
    let two_a0 = state.a0.clone() + state.a0.clone();
    let mut last = state.advance()?;
    let (p1, q1) = (state.p.clone(), state.q.clone());
    let mut len = 1u64;
    loop {
        let digit = state.advance()?;
        if state.same_point(&p1, &q1) {
            break;
        }
        if len >= period_budget {
            return Err(budget_error(&state.radicand, period_budget));
        }
        len += 1;
        last = digit;
    }
    if last != two_a0 {
        return Err(CfError::InternalInvariantViolation(format!(
            "period of sqrt({}) does not end in 2a0",
            state.radicand
        )));
    }
    Ok(len)
}

pub fn expand_prefix<T: Radicand>(radicand: T, k: usize) -> Result<PrefixExpansion<T>> {
    expand_prefix_while(radicand, k, |_| true)
}

/// Like [`expand_prefix`], but stops right after the first digit for which
/// `keep_going` returns false. That digit is kept in the output.
pub fn expand_prefix_while<T, F>(radicand: T, k: usize, mut keep_going: F) -> Result<PrefixExpansion<T>>
where
    T: Radicand,
    F: FnMut(&T) -> bool,
{
    let mut state = SurdState::new(radicand)?;
    let mut digits = Vec::with_capacity(k.min(64));
    if k == 0 {
        let SurdState { radicand, a0, .. } = state;
        return Ok(PrefixExpansion { radicand, a0, digits, complete: false });
    }
    let first = state.advance()?;
    let (p1, q1) = (state.p.clone(), state.q.clone());
    let mut go = keep_going(&first);
    digits.push(first);
    let mut complete = false;
    while go && digits.len() < k {
        let digit = state.advance()?;
        if state.same_point(&p1, &q1) {
            complete = true;
            break;
        }
        go = keep_going(&digit);
        digits.push(digit);
    }
    if !complete {
        // One more step tells whether the digits held are exactly one period.
        state.advance()?;
        complete = state.same_point(&p1, &q1);
    }
    let SurdState { radicand, a0, .. } = state;
    Ok(PrefixExpansion { radicand, a0, digits, complete })
}

/// `p_{T−1}² − D·q_{T−1}²` from the convergents of `[a0; a1, …, a_{T−1}]`.
/// Always `(−1)^T` for a valid expansion.
pub fn pell_check<T: Radicand>(e: &Expansion<T>) -> BigInt {
    let a0 = e.a0.to_big();
    let head: Vec<BigUint> = e.period[..e.period.len() - 1].iter().map(Radicand::to_big).collect();
    let (p, q) = continuants::convergent(&a0, &head);
    let d = BigInt::from(e.radicand.to_big());
    let p = BigInt::from(p);
    let q = BigInt::from(q);
    &p * &p - d * &q * &q
}

fn budget_error<T: Radicand>(radicand: &T, limit: u64) -> CfError {
    CfError::BudgetExceeded { what: format!("period of sqrt({radicand})"), limit }
}
