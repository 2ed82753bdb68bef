//! Quadratic systems `u1 x^2 + k1 = u2 y^2 + k2 = u3 z^2 + k3` and their
//! reduction to integral points on `Y^2 = X (X - alpha) (X - beta)`.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::arith::FactorSieve;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadSystem {
    u: [u64; 3],
    k: [u64; 3],
}

impl QuadSystem {
    pub fn new(u: [u64; 3], k: [u64; 3]) -> Result<Self> {
        if u.contains(&0) {
            return Err(invalid("u1, u2, u3 must be positive"));
        }
        if !(k[0] < k[1] && k[1] < k[2]) {
            return Err(invalid(format!("need k1 < k2 < k3, got {k:?}")));
        }
        Ok(Self { u, k })
    }

    pub fn u(&self) -> [u64; 3] {
        self.u
    }

    pub fn k(&self) -> [u64; 3] {
        self.k
    }

    fn side(&self, i: usize, v: u64) -> BigUint {
        BigUint::from(self.u[i]) * BigUint::from(v) * BigUint::from(v) + BigUint::from(self.k[i])
    }

    /// Both equalities, checked exactly.
    pub fn is_solution(&self, x: u64, y: u64, z: u64) -> bool {
        let a = self.side(0, x);
        a == self.side(1, y) && a == self.side(2, z)
    }

    pub fn alpha(&self) -> BigInt {
        self.u_product() * BigInt::from(self.k[1] - self.k[0])
    }

    pub fn beta(&self) -> BigInt {
        self.u_product() * BigInt::from(self.k[2] - self.k[0])
    }

    fn u_product(&self) -> BigInt {
        self.u.iter().map(|&u| BigInt::from(u)).product()
    }
}

/// `v` with `u v^2 + k = target`, if any.
fn solve_side(target: &BigUint, u: u64, k: u64) -> Option<BigUint> {
    let k = BigUint::from(k);
    if *target < k {
        return None;
    }
    let rest = target - k;
    let u = BigUint::from(u);
    if !(&rest % &u).is_zero() {
        return None;
    }
    let sq = rest / u;
    let root = sq.sqrt();
    (&root * &root == sq).then_some(root)
}

/// All non-negative solutions with `x, y, z <= bound`, ascending by `x`.
pub fn search_solutions(system: &QuadSystem, bound: u64) -> Vec<(u64, u64, u64)> {
    let [u1, u2, u3] = system.u;
    let [k1, k2, k3] = system.k;
    let bound_big = BigUint::from(bound);
    (0..=bound)
        .into_par_iter()
        .filter_map(|x| {
            let target = BigUint::from(u1) * BigUint::from(x) * BigUint::from(x) + BigUint::from(k1);
            let y = solve_side(&target, u2, k2)?;
            let z = solve_side(&target, u3, k3)?;
            if y > bound_big || z > bound_big {
                return None;
            }
            let to_u64 = |v: BigUint| u64::try_from(v).ok();
            Some((x, to_u64(y)?, to_u64(z)?))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvePoint {
    pub x: BigInt,
    pub y: BigInt,
    pub alpha: BigInt,
    pub beta: BigInt,
}

impl CurvePoint {
    pub fn on_curve(&self) -> bool {
        &self.y * &self.y == &self.x * (&self.x - &self.alpha) * (&self.x - &self.beta)
    }
}

/// `(X, Y) = (u2 u3 u1^2 x^2, u1^2 u2^2 u3^2 x y z)` with
/// `alpha = u1 u2 u3 (k2 - k1)` and `beta = u1 u2 u3 (k3 - k1)`.
pub fn weierstrass_map(system: &QuadSystem, solution: (u64, u64, u64)) -> Result<CurvePoint> {
    let (x, y, z) = solution;
    if !system.is_solution(x, y, z) {
        return Err(invalid(format!("{solution:?} does not solve {system:?}")));
    }
    let [u1, u2, u3] = system.u.map(BigInt::from);
    let (x, y, z) = (BigInt::from(x), BigInt::from(y), BigInt::from(z));
    let big_x = &u2 * &u3 * &u1 * &u1 * &x * &x;
    let u123 = &u1 * &u2 * &u3;
    let big_y = &u123 * &u123 * &x * &y * &z;
    let point = CurvePoint { x: big_x, y: big_y, alpha: system.alpha(), beta: system.beta() };
    if !point.on_curve() || !point.alpha.is_positive() || point.alpha >= point.beta {
        return Err(Error::IdentityViolation(format!("{point:?} from {solution:?}")));
    }
    Ok(point)
}

/// Integers `n` in `(k, n_max]` for which at least three of
/// `r(n), ..., r(n - k)` are k-smooth.
pub fn smooth_triple_scan(k: u64, n_max: u64) -> Result<Vec<u64>> {
    if k == 0 {
        return Err(invalid("k must be positive"));
    }
    if n_max <= k {
        return Err(invalid("n_max must exceed k"));
    }
    let sieve = FactorSieve::new(n_max)?;
    // smooth[m] <=> r(m) is k-smooth; a kernel is smooth iff m is.
    let smooth: Vec<bool> = (0..=n_max)
        .map(|m| m > 0 && sieve.factorize(m).map(|f| f.is_smooth(k)).unwrap_or(false))
        .collect();
    Ok(((k + 1)..=n_max)
        .filter(|&n| (0..=k).filter(|&j| smooth[(n - j) as usize]).count() >= 3)
        .collect())
}

/// `max + 1` of a scan, the empirical lower bound for the threshold past
/// which no window has three smooth kernels. `None` for an empty scan.
pub fn empirical_n0(scan: &[u64]) -> Option<u64> {
    scan.iter().max().map(|m| m + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pythagorean_instance() {
        let sys = QuadSystem::new([1, 1, 1], [0, 9, 16]).unwrap();
        let sols = search_solutions(&sys, 100);
        assert!(sols.contains(&(5, 4, 3)));
        let pt = weierstrass_map(&sys, (5, 4, 3)).unwrap();
        assert_eq!(pt.x, BigInt::from(25));
        assert_eq!(pt.y, BigInt::from(60));
        assert_eq!(pt.alpha, BigInt::from(9));
        assert_eq!(pt.beta, BigInt::from(16));
        assert_eq!(BigInt::from(3600), BigInt::from(25 * 16 * 9));
    }

    #[test]
    fn empty_systems() {
        let sys = QuadSystem::new([1, 1, 1], [0, 1, 2]).unwrap();
        assert!(search_solutions(&sys, 1000).is_empty());
        let sys = QuadSystem::new([2, 3, 5], [1, 4, 9]).unwrap();
        assert!(search_solutions(&sys, 0).is_empty());
    }

    #[test]
    fn rejects_bad_systems() {
        assert!(QuadSystem::new([1, 1, 1], [0, 9, 9]).is_err());
        assert!(QuadSystem::new([1, 1, 1], [9, 0, 16]).is_err());
        assert!(QuadSystem::new([0, 1, 1], [0, 1, 2]).is_err());
        let sys = QuadSystem::new([1, 1, 1], [0, 9, 16]).unwrap();
        assert!(weierstrass_map(&sys, (5, 4, 4)).is_err());
    }

    #[test]
    fn scaled_system_maps_on_curve() {
        // 2x^2 = y^2 + 1 = z^2 + 25 holds at (5, 7, 5)
        let sys = QuadSystem::new([2, 1, 1], [0, 1, 25]).unwrap();
        let sols = search_solutions(&sys, 10_000);
        assert!(!sols.is_empty());
        for s in sols {
            assert!(weierstrass_map(&sys, s).unwrap().on_curve());
        }
    }

    #[test]
    fn degenerate_zero_coordinate() {
        // x = 0 is impossible (k2 > k1 would force y^2 < 0); z = 0 is not.
        let sys = QuadSystem::new([1, 1, 1], [0, 7, 16]).unwrap();
        let sols = search_solutions(&sys, 100);
        assert!(sols.contains(&(4, 3, 0)));
        let pt = weierstrass_map(&sys, (4, 3, 0)).unwrap();
        assert!(pt.y.is_zero() && pt.on_curve());
    }

    #[test]
    fn brute_force_agrees_on_small_bound() {
        let sys = QuadSystem::new([3, 2, 1], [1, 3, 10]).unwrap();
        let bound = 60;
        let mut brute = Vec::new();
        for x in 0..=bound {
            for y in 0..=bound {
                for z in 0..=bound {
                    if sys.is_solution(x, y, z) {
                        brute.push((x, y, z));
                    }
                }
            }
        }
        assert_eq!(search_solutions(&sys, bound), brute);
    }

    #[test]
    fn smooth_scans() {
        assert!(smooth_triple_scan(2, 50).unwrap().is_empty());
        assert_eq!(smooth_triple_scan(3, 10).unwrap(), vec![4, 5, 6, 9]);
        assert_eq!(empirical_n0(&[4, 5, 6, 9]), Some(10));
        assert!(smooth_triple_scan(3, 3).is_err());
    }
}
