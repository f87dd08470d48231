//! Primes in half-open intervals `(m/2, m]`.
//!
//! The Grassmannian argument needs an odd prime `p` with `m/2 < p <= m` that
//! does not divide `m + 1`. Bertrand's postulate supplies one prime in the
//! interval; when it divides `m + 1` a second one is needed, which exists for
//! every `m >= 11` and is checked directly for `m = 5` and `m = 9`.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_SIEVE_CAP: usize = 1_000_000;

/// Sieve of Eratosthenes up to a fixed cap, with prime counts.
#[derive(Debug, Clone)]
pub struct Sieve {
    is_prime: Vec<bool>,
    // pi[n] = number of primes <= n
    pi: Vec<u32>,
}

impl Sieve {
    pub fn new(cap: usize) -> Self {
        let mut is_prime = vec![true; cap + 1];
        is_prime[0] = false;
        if cap >= 1 {
            is_prime[1] = false;
        }
        let mut i = 2;
        while i * i <= cap {
            if is_prime[i] {
                let mut j = i * i;
                while j <= cap {
                    is_prime[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        let mut pi = Vec::with_capacity(cap + 1);
        let mut count = 0;
        for &p in &is_prime {
            if p {
                count += 1;
            }
            pi.push(count);
        }
        Self { is_prime, pi }
    }

    /// Shared sieve up to [`DEFAULT_SIEVE_CAP`], built on first use.
    pub fn shared() -> &'static Sieve {
        static SIEVE: OnceLock<Sieve> = OnceLock::new();
        SIEVE.get_or_init(|| Sieve::new(DEFAULT_SIEVE_CAP))
    }

    /// The shared sieve if it is large enough, else a fresh one.
    fn covering(cap: usize) -> std::borrow::Cow<'static, Sieve> {
        if cap <= DEFAULT_SIEVE_CAP {
            std::borrow::Cow::Borrowed(Self::shared())
        } else {
            std::borrow::Cow::Owned(Sieve::new(cap))
        }
    }

    pub fn cap(&self) -> usize {
        self.is_prime.len() - 1
    }

    pub fn is_prime(&self, n: usize) -> bool {
        self.is_prime[n]
    }

    /// Number of primes in `(m/2, m]`.
    pub fn count_in_half_interval(&self, m: usize) -> u32 {
        self.pi[m] - self.pi[m / 2]
    }
}

/// Sorted primes `q` with `m/2 < q <= m`.
pub fn primes_in_interval(m: u64) -> Result<Vec<u64>> {
    if m < 2 {
        return Err(Error::invalid(format!("interval (m/2, m] needs m >= 2, got {m}")));
    }
    let sieve = Sieve::covering(m as usize);
    Ok((m / 2 + 1..=m).filter(|&q| sieve.is_prime(q as usize)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Justification {
    /// The largest odd prime in the interval already avoids `m + 1`.
    Bertrand,
    /// A larger prime divided `m + 1`, so a second prime in the interval was used.
    SecondPrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimeChoice {
    pub m: u64,
    pub p: u64,
    /// `m/2` for even `m`, `(m+1)/2` for odd `m`.
    pub k: u64,
    pub justification: Justification,
}

/// Largest odd prime `p` in `(m/2, m]` with `p ∤ m + 1`.
pub fn choose_p(m: u64) -> Result<PrimeChoice> {
    if m < 3 {
        return Err(Error::invalid(format!("choose_p needs m >= 3, got {m}")));
    }
    let odd: Vec<u64> = primes_in_interval(m)?.into_iter().filter(|&q| q != 2).collect();
    let (rejected, p) = odd
        .iter()
        .rev()
        .enumerate()
        .find(|&(_, &q)| !(m + 1).is_multiple_of(q))
        .map(|(i, &q)| (i > 0, q))
        .ok_or(Error::NoAdmissiblePrime(m))?;
    Ok(PrimeChoice {
        m,
        p,
        k: m.div_ceil(2),
        justification: if rejected {
            Justification::SecondPrime
        } else {
            Justification::Bertrand
        },
    })
}

/// Whether every `m` with `11 <= m <= limit` has at least two primes in
/// `(m/2, m]`.
pub fn verify_r2(limit: u64) -> Result<bool> {
    if limit < 11 {
        return Err(Error::invalid(format!("verify_r2 needs limit >= 11, got {limit}")));
    }
    let sieve = Sieve::covering(limit as usize);
    Ok((11..=limit as usize).all(|m| sieve.count_in_half_interval(m) >= 2))
}

/// Values of `m` in `[2, limit]` with fewer than two primes in `(m/2, m]`.
pub fn single_prime_intervals(limit: u64) -> Vec<u64> {
    let sieve = Sieve::covering(limit as usize);
    (2..=limit)
        .filter(|&m| sieve.count_in_half_interval(m as usize) < 2)
        .collect()
}
