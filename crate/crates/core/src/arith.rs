//! Exact integer arithmetic: prime sieve, factorization, squarefree kernels,
//! smoothness and the window properties of consecutive kernels.
//!
//! Everything here works on `u64` with checked arithmetic.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::error::{invalid, Error, Result};

/// Primes below this bound are kept in a process-wide table for trial division.
const SMALL_PRIME_LIMIT: u64 = 1 << 16;

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve_primes(SMALL_PRIME_LIMIT))
}

/// All primes `p` with `2 <= p <= limit`, ascending.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = usize::try_from(limit).expect("sieve limit exceeds address space");
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Prime factorization `n = prod p^e`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn largest_prime(&self) -> Option<u64> {
        self.factors.last().map(|&(p, _)| p)
    }

    /// Product of the primes carrying an odd exponent.
    pub fn squarefree_part(&self) -> u64 {
        self.factors
            .iter()
            .filter(|&&(_, e)| e % 2 == 1)
            .map(|&(p, _)| p)
            .product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn is_smooth(&self, k: u64) -> bool {
        self.largest_prime().is_none_or(|p| p <= k)
    }
}

/// Factorizes `n` by trial division with sieved primes up to `sqrt(n)`.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(invalid("cannot factorize 0"));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut push = |p: u64, rest: &mut u64| {
        let mut e = 0;
        while *rest % p == 0 {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    for &p in small_primes() {
        if p > rest / p {
            break;
        }
        push(p, &mut rest);
    }
    // Past the table: odd trial divisors. Only reached for n >= 2^32.
    let mut d = SMALL_PRIME_LIMIT + 1;
    while d <= rest / d {
        push(d, &mut rest);
        d += 2;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { n, factors })
}

/// The squarefree `b` with `n = a^2 b`.
///
/// Panics if `n == 0`.
pub fn squarefree_kernel(n: u64) -> u64 {
    factorize(n).expect("squarefree kernel of 0").squarefree_part()
}

/// True iff every prime factor of `n` is at most `k`. Panics if `n == 0`.
pub fn is_smooth(n: u64, k: u64) -> bool {
    factorize(n).expect("smoothness of 0").is_smooth(k)
}

pub fn is_perfect_square(n: u64) -> bool {
    let r = n.isqrt();
    r * r == n
}

/// Smallest-prime-factor table for bulk factorization of `1..=limit`.
#[derive(Debug, Clone)]
pub struct FactorSieve {
    spf: Vec<u32>,
}

impl FactorSieve {
    pub fn new(limit: u64) -> Result<Self> {
        if limit > u32::MAX as u64 {
            return Err(invalid("factor sieve limit must fit in 32 bits"));
        }
        let limit = limit as usize;
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] != 0 {
                continue;
            }
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
        Ok(Self { spf })
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 {
            return Err(invalid("cannot factorize 0"));
        }
        if n > self.limit() {
            return factorize(n);
        }
        let mut rest = n as usize;
        let mut factors: Vec<(u64, u32)> = Vec::new();
        while rest > 1 {
            let p = self.spf[rest] as usize;
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p as u64, e));
        }
        Ok(Factorization { n, factors })
    }

    pub fn window_report(&self, n: u64, k: u64) -> Result<WindowReport> {
        window_report_with(n, k, |m| self.factorize(m))
    }
}

/// Kernels `r(n), r(n-1), ..., r(n-k)` of a window of consecutive integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelWindow {
    pub n: u64,
    pub k: u64,
    /// `kernels[j]` is `r(n - j)`.
    pub kernels: Vec<u64>,
    /// Factorization of each kernel, same indexing.
    pub factorizations: Vec<Factorization>,
}

impl KernelWindow {
    pub fn new(n: u64, k: u64) -> Result<Self> {
        kernel_window_with(n, k, factorize)
    }
}

fn check_window(n: u64, k: u64) -> Result<()> {
    if k == 0 || k >= n {
        return Err(invalid(format!("window needs 1 <= k < n, got n = {n}, k = {k}")));
    }
    Ok(())
}

fn kernel_window_with<F>(n: u64, k: u64, factor: F) -> Result<KernelWindow>
where
    F: Fn(u64) -> Result<Factorization>,
{
    check_window(n, k)?;
    let mut kernels = Vec::with_capacity(k as usize + 1);
    let mut factorizations = Vec::with_capacity(k as usize + 1);
    for j in 0..=k {
        let f = factor(n - j)?;
        let r = f.squarefree_part();
        // Factorization of r itself: the odd-exponent primes.
        let kernel = Factorization {
            n: r,
            factors: f
                .factors
                .iter()
                .filter(|&&(_, e)| e % 2 == 1)
                .map(|&(p, _)| (p, 1))
                .collect(),
        };
        kernels.push(r);
        factorizations.push(kernel);
    }
    Ok(KernelWindow { n, k, kernels, factorizations })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowReport {
    pub n: u64,
    pub k: u64,
    pub kernels: Vec<u64>,
    /// Kernels pairwise distinct.
    pub distinct: bool,
    /// Indices `j` with `r(n - j)` k-smooth.
    pub smooth_indices: BTreeSet<u64>,
    /// Every prime `p > k` divides at most one kernel of the window.
    pub large_prime_unique: bool,
}

pub fn window_report(n: u64, k: u64) -> Result<WindowReport> {
    window_report_with(n, k, factorize)
}

fn window_report_with<F>(n: u64, k: u64, factor: F) -> Result<WindowReport>
where
    F: Fn(u64) -> Result<Factorization>,
{
    let window = kernel_window_with(n, k, factor)?;
    let mut sorted = window.kernels.clone();
    sorted.sort_unstable();
    let distinct = sorted.windows(2).all(|w| w[0] != w[1]);

    let smooth_indices = window
        .factorizations
        .iter()
        .enumerate()
        .filter(|(_, f)| f.is_smooth(k))
        .map(|(j, _)| j as u64)
        .collect();

    let mut large: Vec<u64> = window
        .factorizations
        .iter()
        .flat_map(|f| f.primes().filter(|&p| p > k))
        .collect();
    large.sort_unstable();
    let large_prime_unique = large.windows(2).all(|w| w[0] != w[1]);

    Ok(WindowReport {
        n,
        k,
        kernels: window.kernels,
        distinct,
        smooth_indices,
        large_prime_unique,
    })
}

/// Product of all primes `<= k`, if it fits in a `u64`.
pub fn primorial(k: u64) -> Result<u64> {
    sieve_primes(k)
        .into_iter()
        .try_fold(1u64, |acc, p| acc.checked_mul(p))
        .ok_or(Error::Overflow("primorial"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn is_prime_naive(n: u64) -> bool {
        n >= 2 && (2..n).all(|d| n % d != 0)
    }

    #[test]
    fn sieve_small_limits() {
        assert!(sieve_primes(1).is_empty());
        assert_eq!(sieve_primes(10), vec![2, 3, 5, 7]);
        let p30 = sieve_primes(30);
        assert_eq!(p30.len(), 10);
        assert_eq!(*p30.last().unwrap(), 29);
        let oracle: Vec<u64> = (1..=500).filter(|&n| is_prime_naive(n)).collect();
        assert_eq!(sieve_primes(500), oracle);
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().factors().is_empty());
        assert_eq!(factorize(60).unwrap().factors(), &[(2, 2), (3, 1), (5, 1)]);
        assert_eq!(factorize(97).unwrap().factors(), &[(97, 1)]);
        assert!(factorize(0).is_err());
        // semiprime above the small-prime table
        let big = 4_294_967_311u64 * 3;
        assert_eq!(factorize(big).unwrap().factors(), &[(3, 1), (4_294_967_311, 1)]);
    }

    #[test]
    fn kernel_and_smoothness_examples() {
        assert_eq!(squarefree_kernel(1), 1);
        assert_eq!(squarefree_kernel(12), 3);
        assert_eq!(squarefree_kernel(49), 1);
        assert!(is_smooth(1, 3));
        assert!(is_smooth(6, 3));
        assert!(!is_smooth(14, 3));
    }

    #[test]
    fn window_examples() {
        let r = window_report(8, 3).unwrap();
        assert_eq!(r.kernels, vec![2, 7, 6, 5]);
        assert!(r.distinct);
        assert_eq!(r.smooth_indices, BTreeSet::from([0, 2]));
        assert!(r.large_prime_unique);

        let r = window_report(8, 6).unwrap();
        assert!(!r.distinct);

        assert!(window_report(5, 5).is_err());
        assert!(window_report(5, 0).is_err());
    }

    #[test]
    fn sieve_backed_window_matches_trial_division() {
        let sieve = FactorSieve::new(2000).unwrap();
        for n in 2..=2000 {
            for k in 1..n.min(8) {
                assert_eq!(sieve.window_report(n, k).unwrap(), window_report(n, k).unwrap());
            }
        }
    }

    #[test]
    fn primorial_values() {
        assert_eq!(primorial(1).unwrap(), 1);
        assert_eq!(primorial(10).unwrap(), 210);
        assert!(primorial(100).is_err());
    }

    proptest! {
        #[test]
        fn factorization_invariants(n in 1u64..10_000_000) {
            let f = factorize(n).unwrap();
            let prod: u64 = f.factors().iter().map(|&(p, e)| p.pow(e)).product();
            prop_assert_eq!(prod, n);
            prop_assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert!(f.factors().iter().all(|&(p, e)| e >= 1 && is_prime_naive_fast(p)));
            prop_assert_eq!(n == 1, f.factors().is_empty());
        }

        #[test]
        fn kernel_is_squarefree_cofactor_square(n in 1u64..10_000_000) {
            let r = squarefree_kernel(n);
            prop_assert!(factorize(r).unwrap().is_squarefree());
            prop_assert_eq!(n % r, 0);
            prop_assert!(is_perfect_square(n / r));
        }

        #[test]
        fn kernel_ignores_square_factors(a in 1u64..1000, b in 1u64..100_000) {
            prop_assert_eq!(squarefree_kernel(a * a * b), squarefree_kernel(b));
        }

        #[test]
        fn window_invariants(n in 2u64..200_000, k in 1u64..11) {
            prop_assume!(k < n);
            let r = window_report(n, k).unwrap();
            prop_assert!(r.large_prime_unique);
            prop_assert!(r.smooth_indices.iter().all(|&j| j <= k));
            if n >= k * k + k {
                prop_assert!(r.distinct);
            }
            for (j, &kern) in r.kernels.iter().enumerate() {
                let m = n - j as u64;
                prop_assert_eq!(m % kern, 0);
                prop_assert!(is_perfect_square(m / kern));
            }
        }
    }

    fn is_prime_naive_fast(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }
}
