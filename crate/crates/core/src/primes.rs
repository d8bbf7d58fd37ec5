//! Prime enumeration and 64-bit primality.

use crate::error::{CfError, Result};

/// Sieve segment size when nothing else is configured.
pub const DEFAULT_SEGMENT_BYTES: usize = 8 << 20;

/// Environment variable capping sieve memory, in MiB.
pub const MEM_ENV: &str = "CFPRIME_MEM_MB";

/// Witnesses making strong-pseudoprime testing exact below 3.3·10²⁴.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    if n < 41 * 41 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Sieve sizing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SieveConfig {
    pub segment_bytes: usize,
    pub memory_limit_bytes: Option<usize>,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self { segment_bytes: DEFAULT_SEGMENT_BYTES, memory_limit_bytes: None }
    }
}

impl SieveConfig {
    /// Default segments, capped by `CFPRIME_MEM_MB` when it is set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = Self::default();
        if let Ok(raw) = std::env::var(MEM_ENV) {
            let mb: usize = raw
                .trim()
                .parse()
                .map_err(|_| CfError::DomainError(format!("{MEM_ENV}={raw:?} is not a whole number of MiB")))?;
            cfg.memory_limit_bytes = Some(mb << 20);
        }
        Ok(cfg)
    }
}

/// Indices `start_index ..= start_index + count − 1` into the primes, with `p₁ = 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeRange {
    pub start_index: u64,
    pub count: u64,
}

impl PrimeRange {
    pub fn new(start_index: u64, count: u64) -> Result<Self> {
        if start_index == 0 || count == 0 {
            return Err(CfError::DomainError(format!(
                "prime range needs start_index >= 1 and count >= 1, got ({start_index}, {count})"
            )));
        }
        Ok(Self { start_index, count })
    }

    /// The first `count` primes.
    pub fn first(count: u64) -> Result<Self> {
        Self::new(1, count)
    }

    pub fn end_index(&self) -> u64 {
        self.start_index + self.count - 1
    }
}

/// Upper bound on `p_n` (Rosser–Schoenfeld for `n ≥ 6`).
pub fn nth_prime_upper_bound(n: u64) -> u64 {
    if n < 6 {
        return 13;
    }
    let x = n as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64 + 1
}

/// Plain sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Ordered `(m, p_m)` pairs over a [`PrimeRange`], sieved segment by segment.
pub struct PrimeStream {
    base: Vec<u64>,
    sieve: Vec<bool>,
    segment_len: usize,
    /// Odd number represented by `sieve[0]`.
    low: u64,
    pos: usize,
    /// Index the next emitted prime will carry.
    next_index: u64,
    start_index: u64,
    end_index: u64,
}

pub fn primes_stream(range: PrimeRange, cfg: &SieveConfig) -> Result<PrimeStream> {
    let bound = nth_prime_upper_bound(range.end_index());
    let base: Vec<u64> = primes_up_to(bound.isqrt() + 1).into_iter().skip(1).collect();
    let needed = cfg.segment_bytes + base.len() * std::mem::size_of::<u64>();
    if cfg.segment_bytes == 0 {
        return Err(CfError::DomainError("sieve segment size must be positive".into()));
    }
    if let Some(limit) = cfg.memory_limit_bytes {
        if needed > limit {
            return Err(CfError::BudgetExceeded { what: format!("sieve memory ({needed} bytes)"), limit: limit as u64 });
        }
    }
    Ok(PrimeStream {
        base,
        sieve: Vec::new(),
        segment_len: cfg.segment_bytes,
        low: 3,
        pos: 0,
        next_index: 1,
        start_index: range.start_index,
        end_index: range.end_index(),
    })
}

impl PrimeStream {
    fn refill(&mut self, capacity: usize) {
        if !self.sieve.is_empty() {
            self.low += 2 * self.sieve.len() as u64;
        }
        let low = self.low;
        self.sieve.clear();
        self.sieve.resize(capacity, true);
        let high = low + 2 * capacity as u64;
        for &p in &self.base {
            let sq = p * p;
            if sq >= high {
                break;
            }
            let mut m = if sq >= low { sq } else { low.div_ceil(p) * p };
            if m % 2 == 0 {
                m += p;
            }
            let mut i = ((m - low) / 2) as usize;
            while i < capacity {
                self.sieve[i] = false;
                i += p as usize;
            }
        }
        self.pos = 0;
    }

    fn next_prime(&mut self) -> u64 {
        if self.next_index == 1 {
            return 2;
        }
        loop {
            if self.pos >= self.sieve.len() {
                self.refill(self.segment_len);
            }
            while self.pos < self.sieve.len() {
                let i = self.pos;
                self.pos += 1;
                if self.sieve[i] {
                    return self.low + 2 * i as u64;
                }
            }
        }
    }
}

impl Iterator for PrimeStream {
    type Item = (u64, u64);

    fn next(&mut self) -> Option<(u64, u64)> {
        while self.next_index <= self.end_index {
            let p = self.next_prime();
            let m = self.next_index;
            self.next_index += 1;
            if m >= self.start_index {
                return Some((m, p));
            }
        }
        None
    }
}

pub fn nth_prime(m: u64) -> Result<u64> {
    let range = PrimeRange::new(m, 1)?;
    let cfg = SieveConfig { segment_bytes: (nth_prime_upper_bound(m) as usize / 2 + 64).min(DEFAULT_SEGMENT_BYTES), ..SieveConfig::default() };
    primes_stream(range, &cfg)?
        .next()
        .map(|(_, p)| p)
        .ok_or_else(|| CfError::InternalInvariantViolation(format!("sieve ended before p_{m}")))
}
