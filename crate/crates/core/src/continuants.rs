//! Continuant polynomials, palindromic argument tuples and the identities
//! they satisfy.
//!
//! Index conventions: `q₋₁ = 0`, `q₀ = 1`, `qₖ = xₖ·qₖ₋₁ + qₖ₋₂`, and
//! `p₋₁ = 1`, `p₀ = a₀`. Tuple positions passed to [`build_x`] and
//! [`build_y`] are 1-based.

use std::ops::{Add, Mul};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{CfError, Result};
use crate::scalar::Radicand;

/// Exact value of a continuant.
pub type Continuant = BigUint;

/// Exact rational, always held in lowest terms with a positive denominator.
pub type ExactRational = Ratio<BigInt>;

/// Non-empty tuple of positive digits `(x₁, …, xₙ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitTuple<T = u64>(Vec<T>);

impl<T: Radicand> DigitTuple<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        if entries.is_empty() {
            return Err(CfError::DomainError("digit tuple must be non-empty".into()));
        }
        if entries.iter().any(Zero::is_zero) {
            return Err(CfError::DomainError("digit tuple entries must be positive".into()));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().cloned().collect())
    }

    fn to_big(&self) -> Vec<BigUint> {
        self.0.iter().map(Radicand::to_big).collect()
    }
}

/// The continuant recurrence over any ring-like scalar; returns `q_k` for
/// `xs = (x₁, …, x_k)`, with `q₀ = 1` for the empty slice.
pub fn continuant<N>(xs: &[N]) -> N
where
    N: Clone + Zero + One + Add<Output = N> + Mul<Output = N>,
{
    continuant_pair(xs).0
}

/// `(q_k, q_{k−1})` for `xs = (x₁, …, x_k)`.
fn continuant_pair<N>(xs: &[N]) -> (N, N)
where
    N: Clone + Zero + One + Add<Output = N> + Mul<Output = N>,
{
    let mut prev = N::zero();
    let mut cur = N::one();
    for x in xs {
        let next = x.clone() * cur.clone() + prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

pub fn continuant_q<T: Radicand>(xs: &DigitTuple<T>) -> Continuant {
    continuant(&xs.to_big())
}

/// `p_k(a₀, x₁, …, x_k)`; `xs` may be empty, giving `p₀ = a₀`.
pub fn continuant_p<T: Radicand>(a0: &T, xs: &[T]) -> Continuant {
    let mut all = Vec::with_capacity(xs.len() + 1);
    all.push(a0.to_big());
    all.extend(xs.iter().map(Radicand::to_big));
    continuant(&all)
}

/// Convergent `p_k / q_k` of `[a₀; x₁, …, x_k]`.
pub fn convergent(a0: &BigUint, xs: &[BigUint]) -> (BigUint, BigUint) {
    let q = continuant(xs);
    let mut p_prev = BigUint::one();
    let mut p = a0.clone();
    for x in xs {
        let next = x * &p + &p_prev;
        p_prev = std::mem::replace(&mut p, next);
    }
    (p, q)
}

/// `X_{i,j} = (x_i, …, x_{n−1}, x_n, x_{n−1}, …, x_j)`, single peak.
pub fn build_x<T: Radicand>(xs: &DigitTuple<T>, i: usize, j: usize) -> Result<DigitTuple<T>> {
    check_indices(xs.len(), i, j)?;
    Ok(DigitTuple(mirror(&xs.0, i, j, false)))
}

/// `Y_{i,j} = (x_i, …, x_{n−1}, x_n, x_n, x_{n−1}, …, x_j)`, doubled peak.
pub fn build_y<T: Radicand>(xs: &DigitTuple<T>, i: usize, j: usize) -> Result<DigitTuple<T>> {
    check_indices(xs.len(), i, j)?;
    Ok(DigitTuple(mirror(&xs.0, i, j, true)))
}

fn check_indices(n: usize, i: usize, j: usize) -> Result<()> {
    if i == 0 || i > j || j > n {
        return Err(CfError::IndexError(format!("need 1 <= i <= j <= n, got i={i}, j={j}, n={n}")));
    }
    Ok(())
}

/// Ascending run `x_i..x_n` followed by the descending run back to `x_j`.
/// Accepts `i, j ≤ n + 1`, where an index past the peak yields an empty run.
fn mirror<T: Clone>(xs: &[T], i: usize, j: usize, doubled: bool) -> Vec<T> {
    let n = xs.len();
    let mut out: Vec<T> = xs[(i - 1).min(n)..].to_vec();
    let top = if doubled { n } else { n.saturating_sub(1) };
    if j <= top {
        out.extend(xs[j - 1..top].iter().rev().cloned());
    }
    out
}

fn big_continuant<T: Radicand>(xs: &[T]) -> BigInt {
    let big: Vec<BigUint> = xs.iter().map(Radicand::to_big).collect();
    BigInt::from(continuant(&big))
}

/// `q_{2n−2}(X_{1,2})² − q_{2n−1}(X_{1,1})·q_{2n−3}(X_{2,2})`; always 1.
pub fn cassini_even<T: Radicand>(xs: &DigitTuple<T>) -> BigInt {
    let (cross, peak, inner) = single_peak_terms(&xs.0);
    &cross * &cross - peak * inner
}

/// `q_{2n−1}(Y_{1,2})² − q_{2n}(Y_{1,1})·q_{2n−2}(Y_{2,2})`; always −1.
pub fn cassini_odd<T: Radicand>(xs: &DigitTuple<T>) -> BigInt {
    let (cross, peak, inner) = double_peak_terms(&xs.0);
    &cross * &cross - peak * inner
}

/// `(q(X_{1,2}), q(X_{1,1}), q(X_{2,2}))`.
fn single_peak_terms<T: Radicand>(xs: &[T]) -> (BigInt, BigInt, BigInt) {
    if xs.len() == 1 {
        // X_{1,2} has length 0 and X_{2,2} length −1: q₀ = 1 and q₋₁ = 0.
        return (BigInt::one(), big_continuant(xs), BigInt::zero());
    }
    (
        big_continuant(&mirror(xs, 1, 2, false)),
        big_continuant(&mirror(xs, 1, 1, false)),
        big_continuant(&mirror(xs, 2, 2, false)),
    )
}

/// `(q(Y_{1,2}), q(Y_{1,1}), q(Y_{2,2}))`.
fn double_peak_terms<T: Radicand>(xs: &[T]) -> (BigInt, BigInt, BigInt) {
    (
        big_continuant(&mirror(xs, 1, 2, true)),
        big_continuant(&mirror(xs, 1, 1, true)),
        big_continuant(&mirror(xs, 2, 2, true)),
    )
}

pub fn fibonacci(k: u64) -> Continuant {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..k {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// `[a; 1, …, 1, 2a‾]²` with `k − 1` ones, as `(F_k a² + 2F_{k−1} a + F_{k−2}) / F_k`.
pub fn golden_square<T: Radicand>(a: &T, k: u64) -> Result<ExactRational> {
    if k < 2 {
        return Err(CfError::DomainError(format!("golden_square needs k >= 2, got {k}")));
    }
    let a = BigInt::from(a.to_big());
    let fk = BigInt::from(fibonacci(k));
    let fk1 = BigInt::from(fibonacci(k - 1));
    let fk2 = BigInt::from(fibonacci(k - 2));
    let num = &fk * &a * &a + BigInt::from(2) * fk1 * &a + fk2;
    Ok(Ratio::new(num, fk))
}

/// `[a; X_{1,1}, 2a‾]²` in the factored form
/// `(a + (q(X_{1,2}) + 1)/q(X_{1,1}))·(a + (q(X_{1,2}) − 1)/q(X_{1,1}))`.
pub fn f_closed<T: Radicand>(a: &T, xs: &DigitTuple<T>) -> ExactRational {
    let (cross, peak, _) = single_peak_terms(&xs.0);
    let a = Ratio::from_integer(BigInt::from(a.to_big()));
    let hi = a.clone() + Ratio::new(&cross + 1, peak.clone());
    let lo = a + Ratio::new(&cross - 1, peak);
    hi * lo
}

/// `[a; Y_{1,1}, 2a‾]² = (a + q(Y_{1,2})/q(Y_{1,1}))² + 1/q(Y_{1,1})²`.
pub fn g_closed<T: Radicand>(a: &T, xs: &DigitTuple<T>) -> ExactRational {
    let (cross, peak, _) = double_peak_terms(&xs.0);
    let a = Ratio::from_integer(BigInt::from(a.to_big()));
    let shifted = a + Ratio::new(cross, peak.clone());
    let inv = Ratio::new(BigInt::one(), peak);
    &shifted * &shifted + &inv * &inv
}

/// Which palindrome sits between `a` and `2a` in the period.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PeakShape {
    /// `X_{1,1}`, odd length `2n − 1`.
    Single,
    /// `Y_{1,1}`, even length `2n`.
    Double,
}

impl PeakShape {
    /// The interior of the period for this shape.
    pub fn block<T: Radicand>(self, xs: &DigitTuple<T>) -> DigitTuple<T> {
        DigitTuple(mirror(&xs.0, 1, 1, self == PeakShape::Double))
    }
}

/// `θ² = a² + (2a·cross + tail) / denom` for `θ = [a; block, 2a‾]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareForm {
    pub cross: BigInt,
    pub tail: BigInt,
    pub denom: BigInt,
}

impl SquareForm {
    pub fn new<T: Radicand>(xs: &DigitTuple<T>, shape: PeakShape) -> Self {
        let (cross, denom, tail) = match shape {
            PeakShape::Single => single_peak_terms(&xs.0),
            PeakShape::Double => double_peak_terms(&xs.0),
        };
        Self { cross, tail, denom }
    }

    pub fn value(&self, a: &BigInt) -> ExactRational {
        let frac = Ratio::new(BigInt::from(2) * a * &self.cross + &self.tail, self.denom.clone());
        Ratio::from_integer(a * a) + frac
    }

    /// Smallest positive `a` and the step between consecutive `a` for which
    /// the value is an integer, or `None` when it never is.
    pub fn integral_progression(&self) -> Option<(BigInt, BigInt)> {
        solve_linear_congruence(&(BigInt::from(2) * &self.cross), &(-&self.tail), &self.denom)
    }
}

/// Solves `coef·a ≡ rhs (mod modulus)`; returns the least positive solution
/// and the period of the solution set.
pub fn solve_linear_congruence(coef: &BigInt, rhs: &BigInt, modulus: &BigInt) -> Option<(BigInt, BigInt)> {
    let m = modulus.abs();
    if m.is_zero() {
        return None;
    }
    let ext = coef.mod_floor(&m).extended_gcd(&m);
    let g = ext.gcd;
    if !rhs.is_multiple_of(&g) {
        return None;
    }
    let step = &m / &g;
    let mut a = (ext.x * (rhs / &g)).mod_floor(&step);
    if a.is_zero() {
        a = step.clone();
    }
    Some((a, step))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(v: &[u64]) -> DigitTuple {
        DigitTuple::new(v.to_vec()).unwrap()
    }

    fn int(v: i64) -> ExactRational {
        Ratio::from_integer(BigInt::from(v))
    }

    fn rat(n: i64, d: i64) -> ExactRational {
        Ratio::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn q_values() {
        assert_eq!(continuant_q(&tuple(&[1, 1, 1])), BigUint::from(3u32));
        assert_eq!(continuant_q(&tuple(&[1])), BigUint::from(1u32));
        assert_eq!(continuant_q(&tuple(&[3, 6])), BigUint::from(19u32));
        assert_eq!(continuant::<u64>(&[]), 1);
    }

    #[test]
    fn p_values() {
        assert_eq!(continuant_p(&2u64, &[1, 1, 1]), BigUint::from(8u32));
        assert_eq!(continuant_p(&1u64, &[]), BigUint::from(1u32));
        assert_eq!(continuant_p(&3u64, &[1, 1, 1, 1]), BigUint::from(18u32));
    }

    #[test]
    fn tuple_validation() {
        assert!(DigitTuple::<u64>::new(vec![]).is_err());
        assert!(DigitTuple::new(vec![1u64, 0]).is_err());
    }

    #[test]
    fn x_and_y_builders() {
        assert_eq!(build_x(&tuple(&[4, 9]), 1, 1).unwrap(), tuple(&[4, 9, 4]));
        assert_eq!(build_x(&tuple(&[5]), 1, 1).unwrap(), tuple(&[5]));
        assert_eq!(build_x(&tuple(&[1, 2, 3]), 2, 2).unwrap(), tuple(&[2, 3, 2]));
        assert_eq!(build_y(&tuple(&[7]), 1, 1).unwrap(), tuple(&[7, 7]));
        assert_eq!(build_y(&tuple(&[1, 2]), 1, 1).unwrap(), tuple(&[1, 2, 2, 1]));
        assert_eq!(build_y(&tuple(&[1, 2]), 1, 2).unwrap(), tuple(&[1, 2, 2]));
        let xs = tuple(&[1, 2, 3, 4]);
        for (i, j) in [(1, 1), (1, 3), (2, 4), (4, 4)] {
            assert_eq!(build_x(&xs, i, j).unwrap().len(), (4 - i + 1) + (4 - j));
            assert_eq!(build_y(&xs, i, j).unwrap().len(), (4 - i + 1) + (4 - j + 1));
        }
    }

    #[test]
    fn builder_index_errors() {
        let xs = tuple(&[1, 2]);
        assert!(matches!(build_x(&xs, 2, 1), Err(CfError::IndexError(_))));
        assert!(matches!(build_x(&xs, 1, 3), Err(CfError::IndexError(_))));
        assert!(matches!(build_y(&xs, 0, 1), Err(CfError::IndexError(_))));
    }

    #[test]
    fn cassini_examples() {
        assert_eq!(cassini_even(&tuple(&[7])), BigInt::one());
        assert_eq!(cassini_even(&tuple(&[1, 1])), BigInt::one());
        assert_eq!(cassini_even(&tuple(&[2, 5, 3])), BigInt::one());
        assert_eq!(cassini_odd(&tuple(&[1])), BigInt::from(-1));
        assert_eq!(cassini_odd(&tuple(&[3, 4])), BigInt::from(-1));
        assert_eq!(cassini_odd(&tuple(&[1, 1, 1])), BigInt::from(-1));
    }

    #[test]
    fn cassini_even_by_hand() {
        // xs = (2,5,3): X12 = (2,5,3,5), X11 = (2,5,3,5,2), X22 = (5,3,5).
        let x12 = continuant::<i64>(&[2, 5, 3, 5]);
        let x11 = continuant::<i64>(&[2, 5, 3, 5, 2]);
        let x22 = continuant::<i64>(&[5, 3, 5]);
        assert_eq!((x12, x11, x22), (186, 407, 85));
        assert_eq!(x12 * x12 - x11 * x22, 1);
    }

    #[test]
    fn fibonacci_values() {
        assert_eq!(fibonacci(0), BigUint::zero());
        assert_eq!(fibonacci(10), BigUint::from(55u32));
        for k in 1..30u64 {
            let ones = tuple(&vec![1; k as usize]);
            assert_eq!(fibonacci(k + 1), continuant_q(&ones));
        }
    }

    #[test]
    fn golden_squares() {
        assert_eq!(golden_square(&2u64, 4).unwrap(), int(7));
        assert_eq!(golden_square(&3u64, 5).unwrap(), int(13));
        assert_eq!(golden_square(&1u64, 2).unwrap(), int(3));
        assert_eq!(golden_square(&32u64, 8).unwrap(), int(1064));
        assert!(golden_square(&2u64, 1).is_err());
        for a in 1..=10_000u64 {
            assert!(!golden_square(&a, 3).unwrap().is_integer());
        }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(f_closed(&2u64, &tuple(&[1])), int(8));
        assert_eq!(f_closed(&2u64, &tuple(&[1, 1])), int(7));
        assert_eq!(g_closed(&1u64, &tuple(&[1])), rat(5, 2));
        assert_eq!(g_closed(&3u64, &tuple(&[3])), rat(109, 10));
        for a in 1..=100i64 {
            // a² + a + 1/2
            assert_eq!(g_closed(&(a as u64), &tuple(&[1])), rat(2 * a * a + 2 * a + 1, 2));
        }
    }

    #[test]
    fn factorisation_restated() {
        // (a·q(X11) + q(X12))² − 1 = F·q(X11)²
        for (a, xs) in [(2u64, vec![1u64]), (5, vec![2, 3]), (9, vec![1, 4, 2])] {
            let xs = tuple(&xs);
            let (cross, peak, _) = single_peak_terms(xs.entries());
            let a_big = BigInt::from(a);
            let lhs = (&a_big * &peak + &cross).pow(2) - 1;
            let rhs = f_closed(&a, &xs) * Ratio::from_integer(&peak * &peak);
            assert_eq!(Ratio::from_integer(lhs), rhs);
        }
    }

    #[test]
    fn square_form_matches_closed_forms() {
        for xs in [vec![1u64], vec![2, 3], vec![1, 1, 4], vec![3, 1, 2, 5]] {
            let xs = tuple(&xs);
            let single = SquareForm::new(&xs, PeakShape::Single);
            let double = SquareForm::new(&xs, PeakShape::Double);
            for a in 1..30u64 {
                assert_eq!(single.value(&BigInt::from(a)), f_closed(&a, &xs));
                assert_eq!(double.value(&BigInt::from(a)), g_closed(&a, &xs));
            }
        }
    }

    #[test]
    fn congruences() {
        assert_eq!(
            solve_linear_congruence(&BigInt::from(4), &BigInt::from(2), &BigInt::from(6)),
            Some((BigInt::from(2), BigInt::from(3)))
        );
        assert_eq!(solve_linear_congruence(&BigInt::from(2), &BigInt::from(1), &BigInt::from(4)), None);
        assert_eq!(
            solve_linear_congruence(&BigInt::from(3), &BigInt::from(0), &BigInt::from(1)),
            Some((BigInt::one(), BigInt::one()))
        );
        // Single peak (1,1): value = a² + (4a + 1)/3, integral iff a ≡ 2 (mod 3).
        let form = SquareForm::new(&tuple(&[1, 1]), PeakShape::Single);
        assert_eq!(form.integral_progression(), Some((BigInt::from(2), BigInt::from(3))));
    }
}
