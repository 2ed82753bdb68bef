//! Completely multiplicative functions `chi: N* -> {-1, +1}` realizing the
//! sign pattern
//!
//! ```text
//! chi(n) = e,  chi(n-1) = chi(n-2) = ... = chi(n-k) = -e
//! ```
//!
//! on a window of consecutive integers. Such a `chi` dominates `zeta_{n,k}`
//! coefficientwise (`e chi(m) <= c_m`), which is what carries the real zeros
//! of `zeta_{n,k}` over to the twisted partial sum.
//!
//! [`construct_chi`] follows the two-case construction on squarefree kernels
//! and falls back to [`brute_force_chi`] when the case analysis does not
//! apply (small `n`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::arith::{factorize, Factorization, KernelWindow};
use crate::dirichlet::SignedDirichletPolynomial;
use crate::error::{invalid, Error, Result};

/// Default cap on the number of primes enumerated by [`brute_force_chi`].
pub const DEFAULT_PRIME_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// A prime `p > k` divides `r(n)`; `chi(p) = -1`.
    Case1 { p: u64 },
    /// `r(n)` is k-smooth and `p | r(n)`, `p` not dividing `r(n - j0)`.
    Case2Sub1 { p: u64, j0: u64, large_primes: Vec<(u64, u64)> },
    /// `r(n)` is k-smooth and `p | r(n - j0)`, `p` not dividing `r(n)`.
    Case2Sub2 { p: u64, j0: u64, large_primes: Vec<(u64, u64)> },
    BruteForce,
    /// Built directly from prime values.
    Manual,
}

impl Provenance {
    pub fn name(&self) -> &'static str {
        match self {
            Provenance::Case1 { .. } => "Case1",
            Provenance::Case2Sub1 { .. } => "Case2Sub1",
            Provenance::Case2Sub2 { .. } => "Case2Sub2",
            Provenance::BruteForce => "BruteForce",
            Provenance::Manual => "Manual",
        }
    }
}

/// Prime values of a completely multiplicative sign function; primes not
/// listed map to `+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiAssignment {
    overrides: BTreeMap<u64, i8>,
    provenance: Provenance,
}

impl ChiAssignment {
    pub fn trivial() -> Self {
        Self { overrides: BTreeMap::new(), provenance: Provenance::Manual }
    }

    /// Checks that every key is prime and every value is `+-1`. `+1` entries
    /// are dropped since they equal the default.
    pub fn new(values: impl IntoIterator<Item = (u64, i8)>, provenance: Provenance) -> Result<Self> {
        let mut overrides = BTreeMap::new();
        for (p, v) in values {
            if v != 1 && v != -1 {
                return Err(invalid(format!("chi({p}) must be +1 or -1")));
            }
            let f = factorize(p)?;
            if f.factors() != [(p, 1)] {
                return Err(invalid(format!("{p} is not prime")));
            }
            if v == -1 {
                overrides.insert(p, -1);
            }
        }
        Ok(Self { overrides, provenance })
    }

    pub fn from_negative_primes(primes: &[u64]) -> Result<Self> {
        Self::new(primes.iter().map(|&p| (p, -1)), Provenance::Manual)
    }

    /// Primes with value `-1`, ascending.
    pub fn overrides(&self) -> &BTreeMap<u64, i8> {
        &self.overrides
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn prime_value(&self, p: u64) -> i8 {
        self.overrides.get(&p).copied().unwrap_or(1)
    }

    /// Canonical id, e.g. `"3:-1,7:-1"`; empty for the trivial assignment.
    pub fn id(&self) -> String {
        self.overrides
            .iter()
            .map(|(p, v)| format!("{p}:{v}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn value_of(&self, f: &Factorization) -> i8 {
        let negatives: u32 = f
            .factors()
            .iter()
            .filter(|&&(p, _)| self.prime_value(p) < 0)
            .map(|&(_, e)| e)
            .sum();
        if negatives % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `chi(m)`. Panics if `m == 0`.
    pub fn value(&self, m: u64) -> i8 {
        self.value_of(&factorize(m).expect("chi is defined on positive integers"))
    }

    /// `zeta_{n,chi}(s) = sum_{m <= n} chi(m) m^{-s}`.
    pub fn polynomial(&self, n: u64) -> Result<SignedDirichletPolynomial> {
        SignedDirichletPolynomial::zeta_chi(n, self.id(), |m| self.value(m))
    }
}

impl fmt::Display for ChiAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}} ({})", self.id(), self.provenance.name())
    }
}

pub fn chi_value(assignment: &ChiAssignment, m: u64) -> i8 {
    assignment.value(m)
}

fn check_window(n: u64, k: u64) -> Result<()> {
    if k == 0 || k >= n {
        return Err(invalid(format!("need 1 <= k < n, got n = {n}, k = {k}")));
    }
    Ok(())
}

/// `chi(n-1) = ... = chi(n-k) = -chi(n)`.
pub fn verify_pattern(assignment: &ChiAssignment, n: u64, k: u64) -> bool {
    if check_window(n, k).is_err() {
        return false;
    }
    let e = assignment.value(n);
    (1..=k).all(|j| assignment.value(n - j) == -e)
}

/// `chi(n) * chi(m) <= c_m(zeta_{n,k})` for every `m <= n`.
pub fn domination_check(assignment: &ChiAssignment, n: u64, k: u64) -> bool {
    let Ok(poly) = SignedDirichletPolynomial::zeta_nk(n, k) else {
        return false;
    };
    let e = assignment.value(n);
    (1..=n).all(|m| e * assignment.value(m) <= poly.coeff(m))
}

/// Orientation `e = chi(n)` of a verified witness.
pub fn orientation(assignment: &ChiAssignment, n: u64) -> i8 {
    assignment.value(n)
}

/// Runs the two-case construction, verifies it, and falls back to the
/// exhaustive search when the construction does not apply.
pub fn construct_chi(n: u64, k: u64) -> Result<ChiAssignment> {
    construct_chi_with_cap(n, k, DEFAULT_PRIME_CAP)
}

pub fn construct_chi_with_cap(n: u64, k: u64, cap: usize) -> Result<ChiAssignment> {
    check_window(n, k)?;
    if let Some(chi) = case_analysis(n, k)? {
        if verify_pattern(&chi, n, k) {
            return Ok(chi);
        }
    }
    match brute_force_chi_with_cap(n, k, cap) {
        Ok(chi) => Ok(chi),
        Err(Error::CapExceeded { .. }) | Err(Error::NoWitness { .. }) => Err(Error::NoWitness { n, k }),
        Err(e) => Err(e),
    }
}

/// The explicit construction; `None` when its hypotheses fail for this `n`.
pub fn case_analysis(n: u64, k: u64) -> Result<Option<ChiAssignment>> {
    let window = KernelWindow::new(n, k)?;
    let kernel_primes = |j: u64| window.factorizations[j as usize].primes().collect::<BTreeSet<u64>>();

    // Case 1: a prime p > k divides r(n).
    if let Some(p) = window.factorizations[0].largest_prime().filter(|&p| p > k) {
        return ChiAssignment::new([(p, -1)], Provenance::Case1 { p }).map(Some);
    }

    // Case 2: r(n) is k-smooth.
    let smooth: Vec<u64> = (1..=k).filter(|&j| window.factorizations[j as usize].is_smooth(k)).collect();
    let j0 = match smooth.as_slice() {
        [j] => *j,
        [] => match (1..=k).rev().find(|&j| window.kernels[j as usize] != window.kernels[0]) {
            Some(j) => j,
            None => return Ok(None),
        },
        _ => return Ok(None),
    };

    let primes_n = kernel_primes(0);
    let primes_j0 = kernel_primes(j0);
    let Some(&p) = primes_n.symmetric_difference(&primes_j0).min() else {
        return Ok(None);
    };
    let p_divides_rn = primes_n.contains(&p);

    let mut values = vec![(p, -1i8)];
    let mut large_primes = Vec::new();
    for j in (1..=k).filter(|&j| j != j0) {
        let Some(pj) = window.factorizations[j as usize].largest_prime().filter(|&q| q > k) else {
            return Ok(None);
        };
        let p_divides = window.kernels[j as usize] % p == 0;
        // Sub-case 1 wants chi(n-j) = +1, sub-case 2 wants chi(n-j) = -1.
        let value = match (p_divides_rn, p_divides) {
            (true, true) | (false, false) => -1,
            (true, false) | (false, true) => 1,
        };
        values.push((pj, value));
        large_primes.push((j, pj));
    }
    let provenance = if p_divides_rn {
        Provenance::Case2Sub1 { p, j0, large_primes }
    } else {
        Provenance::Case2Sub2 { p, j0, large_primes }
    };
    ChiAssignment::new(values, provenance).map(Some)
}

/// Primes dividing some kernel `r(n - j)`, `0 <= j <= k`, ascending.
pub fn window_primes(n: u64, k: u64) -> Result<Vec<u64>> {
    let window = KernelWindow::new(n, k)?;
    let set: BTreeSet<u64> = window.factorizations.iter().flat_map(|f| f.primes()).collect();
    Ok(set.into_iter().collect())
}

pub fn brute_force_chi(n: u64, k: u64) -> Result<ChiAssignment> {
    brute_force_chi_with_cap(n, k, DEFAULT_PRIME_CAP)
}

/// Exhaustive search over the signs of the window primes, in lexicographic
/// order (smallest prime first, `+1` before `-1`).
pub fn brute_force_chi_with_cap(n: u64, k: u64, cap: usize) -> Result<ChiAssignment> {
    check_window(n, k)?;
    let primes = window_primes(n, k)?;
    if primes.len() > cap {
        return Err(Error::CapExceeded { primes: primes.len(), cap });
    }
    let window = KernelWindow::new(n, k)?;
    // Bit (len - 1 - i) of the mask is set iff chi(primes[i]) = -1, so that
    // counting up the mask enumerates the lexicographic order.
    let len = primes.len();
    let masks: Vec<u64> = window
        .factorizations
        .iter()
        .map(|f| {
            f.primes()
                .map(|p| {
                    let i = primes.binary_search(&p).expect("window prime");
                    1u64 << (len - 1 - i)
                })
                .fold(0, |acc, b| acc | b)
        })
        .collect();
    let parity = |assignment: u64, mask: u64| (assignment & mask).count_ones() % 2;
    let satisfies = |a: u64| {
        let e = parity(a, masks[0]);
        masks[1..].iter().all(|&m| parity(a, m) != e)
    };

    let total = 1u64 << len;
    let half = total / 2;
    // The two halves fix the sign of the smallest prime; the + half wins ties.
    let search = |range: std::ops::Range<u64>| range.into_iter().find(|&a| satisfies(a));
    let (plus, minus) = if len == 0 {
        (search(0..1), None)
    } else {
        rayon::join(|| search(0..half), || search(half..total))
    };
    let Some(found) = plus.or(minus) else {
        return Err(Error::NoWitness { n, k });
    };
    let values = primes
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, if found & (1u64 << (len - 1 - i)) != 0 { -1 } else { 1 }));
    ChiAssignment::new(values, Provenance::BruteForce)
}

/// Every assignment on the window primes satisfying the pattern.
pub fn all_witnesses(n: u64, k: u64, cap: usize) -> Result<Vec<BTreeSet<u64>>> {
    check_window(n, k)?;
    let primes = window_primes(n, k)?;
    if primes.len() > cap {
        return Err(Error::CapExceeded { primes: primes.len(), cap });
    }
    let mut out = Vec::new();
    for a in 0..(1u64 << primes.len()) {
        let neg: Vec<u64> = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| a & (1 << i) != 0)
            .map(|(_, &p)| p)
            .collect();
        let chi = ChiAssignment::from_negative_primes(&neg)?;
        if verify_pattern(&chi, n, k) {
            out.push(neg.into_iter().collect());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn negatives(chi: &ChiAssignment) -> Vec<u64> {
        chi.overrides().keys().copied().collect()
    }

    #[test]
    fn values() {
        let chi = ChiAssignment::from_negative_primes(&[3]).unwrap();
        assert_eq!(chi.value(1), 1);
        assert_eq!(ChiAssignment::trivial().value(1), 1);
        assert_eq!(chi.value(12), -1);
        assert_eq!(chi.value(9), 1);
        assert!(ChiAssignment::from_negative_primes(&[4]).is_err());
        assert!(ChiAssignment::new([(5, 0)], Provenance::Manual).is_err());
    }

    #[test]
    fn construct_case1() {
        let chi = construct_chi(6, 1).unwrap();
        assert_eq!(chi.provenance(), &Provenance::Case1 { p: 3 });
        assert_eq!(negatives(&chi), vec![3]);
        assert_eq!(chi.value(6), -1);
        assert_eq!(chi.value(5), 1);
    }

    #[test]
    fn construct_case2_sub2_at_16() {
        let chi = construct_chi(16, 3).unwrap();
        assert!(matches!(chi.provenance(), Provenance::Case2Sub2 { p: 13, j0: 3, .. }));
        assert_eq!(negatives(&chi), vec![5, 7, 13]);
        assert_eq!(chi.value(16), 1);
        for m in [13, 14, 15] {
            assert_eq!(chi.value(m), -1);
        }
    }

    #[test]
    fn construct_case2_sub2_at_8() {
        let chi = construct_chi(8, 3).unwrap();
        assert!(matches!(chi.provenance(), Provenance::Case2Sub2 { p: 3, j0: 2, .. }));
        assert_eq!(negatives(&chi), vec![3, 5, 7]);
        assert_eq!(chi.value(8), 1);
        assert!((5..8).all(|m| chi.value(m) == -1));
    }

    #[test]
    fn brute_force_examples() {
        let chi = brute_force_chi(3, 1).unwrap();
        assert!(verify_pattern(&chi, 3, 1));
        assert_eq!(negatives(&chi), vec![3]);

        let chi = brute_force_chi(2, 1).unwrap();
        assert_eq!(negatives(&chi), vec![2]);
        assert_eq!(chi.value(2), -1);

        let constructed = construct_chi(8, 3).unwrap();
        let witnesses = all_witnesses(8, 3, DEFAULT_PRIME_CAP).unwrap();
        let set: BTreeSet<u64> = negatives(&constructed).into_iter().collect();
        assert!(witnesses.contains(&set));
        assert!(verify_pattern(&brute_force_chi(8, 3).unwrap(), 8, 3));
    }

    #[test]
    fn brute_force_cap() {
        assert!(matches!(brute_force_chi_with_cap(100, 4, 2), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn brute_force_is_first_in_lexicographic_order() {
        for n in 3..60 {
            for k in 1..n.min(4) {
                let all = all_witnesses(n, k, DEFAULT_PRIME_CAP).unwrap();
                let primes = window_primes(n, k).unwrap();
                let key = |neg: &BTreeSet<u64>| primes.iter().map(|p| neg.contains(p)).collect::<Vec<_>>();
                let first = all.iter().min_by_key(|s| key(s));
                let bf = brute_force_chi(n, k).ok().map(|c| negatives(&c).into_iter().collect::<BTreeSet<_>>());
                assert_eq!(first.cloned(), bf, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn pattern_and_domination() {
        assert!(!verify_pattern(&ChiAssignment::trivial(), 6, 1));
        let chi = ChiAssignment::from_negative_primes(&[3]).unwrap();
        assert!(verify_pattern(&chi, 6, 1));
        assert!(domination_check(&chi, 6, 1));
        let chi = ChiAssignment::from_negative_primes(&[13, 5, 7]).unwrap();
        assert!(verify_pattern(&chi, 16, 3));
        assert!(domination_check(&chi, 16, 3));
        let chi = ChiAssignment::from_negative_primes(&[2]).unwrap();
        assert!(domination_check(&chi, 2, 1));

        // flip the large prime of 14 = 2 * 7: chi(14) turns +1 and breaks the block
        let broken = ChiAssignment::from_negative_primes(&[13, 5]).unwrap();
        assert!(!verify_pattern(&broken, 16, 3));
        assert!(!domination_check(&broken, 16, 3));
    }

    #[test]
    fn polynomial_coefficients_follow_chi() {
        let chi = ChiAssignment::from_negative_primes(&[3]).unwrap();
        let p = chi.polynomial(6).unwrap();
        assert_eq!(p.coeffs(), &[1, 1, -1, 1, 1, -1]);
        assert_eq!(p.label(), &crate::dirichlet::Label::ZetaChi("3:-1".into()));
    }
}
