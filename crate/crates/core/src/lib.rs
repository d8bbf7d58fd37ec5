//! Exact continued fractions of square roots, parametric radicand families
//! with prescribed digit patterns, and scans over the primes.

pub mod continuants;
pub mod error;
pub mod experiments;
pub mod families;
pub mod primes;
pub mod report;
pub mod scalar;
pub mod surd;

pub use continuants::{Continuant, DigitTuple, ExactRational};
pub use error::{CfError, Result};
pub use scalar::Radicand;
pub use surd::{Expansion, PrefixExpansion, SurdState};

use num_bigint::BigUint;

pub type Surd64 = SurdState<u64>;
pub type SurdBig = SurdState<BigUint>;
pub type Expansion64 = Expansion<u64>;
pub type ExpansionBig = Expansion<BigUint>;
pub type Prefix64 = PrefixExpansion<u64>;
