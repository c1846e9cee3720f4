//! Arithmetic modulo a prime that fits in 63 bits.

use serde::Serialize;

use crate::error::{Error, Result};

/// The Mersenne prime `2^61 - 1`, the default evaluation modulus.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PrimeField {
    prime: u64,
}

impl PrimeField {
    pub fn new(prime: u64) -> Result<Self> {
        if prime >= 1 << 63 || !primal_check::miller_rabin(prime) {
            return Err(Error::NotPrime(prime));
        }
        Ok(PrimeField { prime })
    }

    pub fn prime(self) -> u64 {
        self.prime
    }

    pub fn reduce(self, x: u64) -> u64 {
        x % self.prime
    }

    pub fn add(self, x: u64, y: u64) -> u64 {
        ((u128::from(x) + u128::from(y)) % u128::from(self.prime)) as u64
    }

    pub fn mul(self, x: u64, y: u64) -> u64 {
        ((u128::from(x) * u128::from(y)) % u128::from(self.prime)) as u64
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { prime: MERSENNE_61 }
    }
}
