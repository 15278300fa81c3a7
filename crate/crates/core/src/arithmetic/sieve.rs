//! Smallest-prime-factor sieve and factorization.

use crate::error::{Error, Result};

pub const DEFAULT_SIEVE_LIMIT: u64 = 10_000_000;

/// `n = prod p^e`, primes strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredInteger {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// `Some((p, k))` when `n = p^k` with `k >= 1`.
    pub fn prime_power(&self) -> Option<(u64, u32)> {
        match self.factors.as_slice() {
            [(p, e)] => Some((*p, *e)),
            _ => None,
        }
    }

    pub fn is_prime(&self) -> bool {
        matches!(self.factors.as_slice(), [(_, 1)])
    }
}

/// Sieve table up to `limit`.
#[derive(Clone, Debug)]
pub struct ArithmeticTable {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u64>,
}

impl ArithmeticTable {
    /// Linear sieve of smallest prime factors on `[0, limit]`.
    pub fn new(limit: u64) -> Self {
        let limit = limit.max(2);
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u64> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u64);
            }
            let si = spf[i];
            for &p in &primes {
                let p32 = p as u32;
                let j = i * p as usize;
                if p32 > si || j > n {
                    break;
                }
                spf[j] = p32;
            }
        }
        Self { limit, spf, primes }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes in `(lo, hi]`. Errors if `hi` is beyond the sieve.
    pub fn primes_in(&self, lo: f64, hi: f64) -> Result<&[u64]> {
        if hi >= self.limit as f64 + 1.0 {
            return Err(Error::SieveLimit {
                needed: hi.floor().min(u64::MAX as f64) as u64,
                limit: self.limit,
            });
        }
        let a = self.primes.partition_point(|&p| (p as f64) <= lo);
        let b = self.primes.partition_point(|&p| (p as f64) <= hi);
        Ok(&self.primes[a..b.max(a)])
    }

    pub fn smallest_prime_factor(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit {
            return None;
        }
        Some(self.spf[n as usize] as u64)
    }

    pub fn is_prime(&self, n: u64) -> bool {
        self.smallest_prime_factor(n) == Some(n)
    }

    /// Factorization of `1 <= n <= limit^2`; `O(log n)` inside the sieve,
    /// trial division by the sieved primes beyond it.
    pub fn factorize(&self, n: u64) -> Result<FactoredInteger> {
        if n == 0 {
            return Err(Error::Domain("cannot factor 0".into()));
        }
        let mut factors = Vec::new();
        let mut m = n;
        if m > self.limit {
            if (self.limit as u128) * (self.limit as u128) < m as u128 {
                return Err(Error::SieveLimit {
                    needed: n,
                    limit: self.limit,
                });
            }
            for &p in &self.primes {
                if p * p > m || m <= self.limit {
                    break;
                }
                if m % p == 0 {
                    let mut e = 0;
                    while m % p == 0 {
                        m /= p;
                        e += 1;
                    }
                    factors.push((p, e));
                }
            }
            if m > self.limit {
                // No factor up to sqrt(m): m is prime.
                factors.push((m, 1));
                m = 1;
            }
        }
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            match factors.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => factors.push((p, e)),
            }
        }
        Ok(FactoredInteger { n, factors })
    }
}

/// Factorization by trial division; used where no table is at hand.
pub fn factorize_trial(n: u64) -> FactoredInteger {
    assert!(n >= 1, "cannot factor 0");
    let mut factors = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        factors.push((m, 1));
    }
    FactoredInteger { n, factors }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_matches_trial_division() {
        let t = ArithmeticTable::new(10_000);
        for n in 1..=10_000u64 {
            assert_eq!(t.factorize(n).unwrap(), factorize_trial(n), "n = {n}");
        }
        assert_eq!(t.primes().len(), 1229);
    }

    #[test]
    fn beyond_the_sieve() {
        let t = ArithmeticTable::new(1000);
        assert_eq!(t.factorize(999_983).unwrap().factors, vec![(999_983, 1)]);
        assert_eq!(t.factorize(2 * 3 * 99_991).unwrap().factors, vec![(2, 1), (3, 1), (99_991, 1)]);
        assert_eq!(t.factorize(1_000_000).unwrap().factors, vec![(2, 6), (5, 6)]);
        assert!(t.factorize(1_000_002).is_err());
        assert!(t.primes_in(10.0, 2000.0).is_err());
        assert_eq!(t.primes_in(2.0, 10.0).unwrap(), &[3, 5, 7]);
        assert!(t.primes_in(24.0, 28.0).unwrap().is_empty());
    }
}
