//! Certified isolation of the leftmost real zero of a signed Dirichlet
//! polynomial, and of `rho_{n,k}` in particular.
//!
//! Real zeros of a polynomial with `c_n = +1` lie in
//! `[left_barrier(n), right_barrier(n)]`: left of `-n ln 2` the normalized
//! value `1 + sum_{m<n} c_m (m/n)^{-sigma}` is bounded below by
//! `1 - sum_{i >= 1} 2^{-i} > 0`, and right of `log2(n - 1) + 1` the tail
//! `sum_{m >= 2} |m^{-sigma}|` is below `|c_1| = 1`.
//!
//! The search scans that interval with certified signs, bisects the first
//! sign change, and repeats the scan with half the step until two successive
//! scans agree on the bracket.

use std::f64::consts::LN_2;

use rayon::prelude::*;
use rug::Float;

use crate::dirichlet::{PrecisionPolicy, Sign, SignCertificate, SignedDirichletPolynomial};
use crate::error::{invalid, Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const MAX_SCAN_STEP: f64 = 0.25;
/// Grid points with `|value| < TANGENTIAL_FACTOR * error_bound` are reported.
pub const TANGENTIAL_FACTOR: f64 = 1e3;
/// Extra step halvings tried when two scans disagree.
const MAX_EXTRA_REFINEMENTS: usize = 4;

pub fn left_barrier(n: u64) -> f64 {
    -(n as f64) * LN_2
}

pub fn right_barrier(n: u64) -> f64 {
    if n < 2 {
        return 1.0;
    }
    ((n - 1) as f64).log2() + 1.0
}

/// One eighth of the barrier interval, capped at [`MAX_SCAN_STEP`].
pub fn default_scan_step(n: u64) -> f64 {
    ((right_barrier(n) - left_barrier(n)) / 8.0).min(MAX_SCAN_STEP)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootConfig {
    pub policy: PrecisionPolicy,
    pub tolerance: f64,
    /// `None` selects [`default_scan_step`].
    pub scan_step: Option<f64>,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self { policy: PrecisionPolicy::default(), tolerance: DEFAULT_TOLERANCE, scan_step: None }
    }
}

impl RootConfig {
    pub fn with_tolerance(tolerance: f64) -> Self {
        Self { tolerance, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// A certified sign change on `[lo, hi]`; `value` is the midpoint.
    Root { value: f64, lo: f64, hi: f64 },
    /// No sign change anywhere between the barriers.
    NoRealZero { left_barrier: f64, right_barrier: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// Grid point where the value is within `TANGENTIAL_FACTOR` error bounds
    /// of zero; an even-multiplicity zero could hide there.
    TangentialSuspect { sigma: f64, margin: f64 },
    /// Two successive scans located different first sign changes.
    UnstableScan { coarse_step: f64, fine_step: f64 },
    /// Grid point whose sign could not be certified; it was skipped.
    IndeterminatePoint { sigma: f64, precision_bits: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootResult {
    pub n: u64,
    /// `Some(k)` for `zeta_{n,k}`.
    pub k: Option<u64>,
    pub verdict: Verdict,
    /// Highest precision used by the final scan.
    pub precision_bits: u32,
    pub warnings: Vec<Warning>,
}

impl RootResult {
    /// The zero, or `+inf` when there is none (infimum of the empty set).
    pub fn rho(&self) -> f64 {
        match self.verdict {
            Verdict::Root { value, .. } => value,
            Verdict::NoRealZero { .. } => f64::INFINITY,
        }
    }

    pub fn bracket(&self) -> Option<(f64, f64)> {
        match self.verdict {
            Verdict::Root { lo, hi, .. } => Some((lo, hi)),
            Verdict::NoRealZero { .. } => None,
        }
    }

    pub fn width(&self) -> Option<f64> {
        self.bracket().map(|(lo, hi)| hi - lo)
    }

    pub fn is_root(&self) -> bool {
        matches!(self.verdict, Verdict::Root { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Bracket {
    lo: f64,
    hi: f64,
}

struct Scan {
    bracket: Option<Bracket>,
    warnings: Vec<Warning>,
    precision_bits: u32,
}

struct Searcher<'a> {
    poly: &'a SignedDirichletPolynomial,
    config: &'a RootConfig,
}

impl Searcher<'_> {
    fn certify(&self, sigma: f64, max_prec: &mut u32) -> Result<SignCertificate> {
        let cert = self.poly.certify_sign(sigma, &self.config.policy)?;
        *max_prec = (*max_prec).max(cert.precision_bits);
        Ok(cert)
    }

    fn scan(&self, step: f64) -> Result<Scan> {
        let n = self.poly.n();
        let lb = left_barrier(n);
        let rb = right_barrier(n);
        let mut warnings = Vec::new();
        let mut suspects = Vec::new();
        let mut max_prec = 0;
        let mut prev: Option<(f64, i8)> = None;

        let mut i = 0u64;
        loop {
            let sigma = (lb + i as f64 * step).min(rb);
            let cert = self.certify(sigma, &mut max_prec)?;
            match cert.sign.as_i8() {
                None => warnings.push(Warning::IndeterminatePoint {
                    sigma,
                    precision_bits: cert.precision_bits,
                }),
                Some(sign) => {
                    let margin = cert.margin();
                    if margin < TANGENTIAL_FACTOR {
                        suspects.push(Warning::TangentialSuspect { sigma, margin });
                    }
                    if let Some((prev_sigma, prev_sign)) = prev {
                        if prev_sign != sign {
                            let bracket = self.bisect(prev_sigma, prev_sign, sigma, &mut max_prec)?;
                            return Ok(Scan { bracket: Some(bracket), warnings, precision_bits: max_prec });
                        }
                    }
                    prev = Some((sigma, sign));
                }
            }
            if sigma >= rb {
                break;
            }
            i += 1;
        }
        warnings.extend(suspects);
        Ok(Scan { bracket: None, warnings, precision_bits: max_prec })
    }

    /// Shrinks `[lo, hi]` (signs `sign_lo` and `-sign_lo`) to the tolerance.
    fn bisect(&self, mut lo: f64, sign_lo: i8, mut hi: f64, max_prec: &mut u32) -> Result<Bracket> {
        while hi - lo > self.config.tolerance {
            let mid = lo + (hi - lo) / 2.0;
            if mid <= lo || mid >= hi {
                break;
            }
            let cert = self.certify(mid, max_prec)?;
            match cert.sign.as_i8() {
                Some(s) if s == sign_lo => lo = mid,
                Some(_) => hi = mid,
                None => {
                    // Likely an exact zero at `mid`: step to either side of it.
                    let delta = (hi - lo) / 8.0;
                    let left = self.certify(mid - delta, max_prec)?;
                    let right = self.certify(mid + delta, max_prec)?;
                    match (left.sign.as_i8(), right.sign.as_i8()) {
                        (Some(l), _) if l != sign_lo => hi = mid - delta,
                        (Some(_), Some(r)) if r != sign_lo => {
                            lo = mid - delta;
                            hi = mid + delta;
                        }
                        (Some(_), Some(_)) => lo = mid + delta,
                        _ => {
                            return Err(Error::PrecisionExhausted {
                                sigma: mid,
                                precision_bits: self.config.policy.cap_bits,
                            })
                        }
                    }
                }
            }
        }
        Ok(Bracket { lo, hi })
    }
}

/// Leftmost real zero of `poly` between the barriers.
pub fn leftmost_real_zero(poly: &SignedDirichletPolynomial, config: &RootConfig) -> Result<RootResult> {
    if !(config.tolerance > 0.0) {
        return Err(invalid("tolerance must be positive"));
    }
    let n = poly.n();
    let k = match poly.label() {
        crate::dirichlet::Label::ZetaNK(k) => Some(*k),
        _ => None,
    };
    let lb = left_barrier(n);
    let rb = right_barrier(n);
    let no_zero = Verdict::NoRealZero { left_barrier: lb, right_barrier: rb };
    if n < 2 {
        return Ok(RootResult { n, k, verdict: no_zero, precision_bits: 0, warnings: Vec::new() });
    }
    let mut step = config.scan_step.unwrap_or_else(|| default_scan_step(n));
    if !(step > 0.0) {
        return Err(invalid("scan step must be positive"));
    }

    let searcher = Searcher { poly, config };
    let mut previous = searcher.scan(step)?;
    let mut warnings = Vec::new();
    for attempt in 0..=MAX_EXTRA_REFINEMENTS {
        let fine_step = step / 2.0;
        let current = searcher.scan(fine_step)?;
        let stable = match (previous.bracket, current.bracket) {
            (None, None) => true,
            (Some(a), Some(b)) => a.lo <= b.hi && b.lo <= a.hi,
            _ => false,
        };
        if stable || attempt == MAX_EXTRA_REFINEMENTS {
            warnings.extend(current.warnings);
            let verdict = match current.bracket {
                Some(b) => Verdict::Root { value: b.lo + (b.hi - b.lo) / 2.0, lo: b.lo, hi: b.hi },
                None => no_zero,
            };
            return Ok(RootResult { n, k, verdict, precision_bits: current.precision_bits, warnings });
        }
        warnings.push(Warning::UnstableScan { coarse_step: step, fine_step });
        step = fine_step;
        previous = current;
    }
    unreachable!("refinement loop always returns")
}

/// `rho_{n,k}`: leftmost real zero of `zeta_{n,k}`.
pub fn rho(n: u64, k: u64, config: &RootConfig) -> Result<RootResult> {
    let poly = SignedDirichletPolynomial::zeta_nk(n, k)?;
    leftmost_real_zero(&poly, config)
}

/// True iff the endpoint signs of `[lo, hi]` are certified and opposite.
pub fn verify_bracket(
    poly: &SignedDirichletPolynomial,
    lo: f64,
    hi: f64,
    policy: &PrecisionPolicy,
) -> Result<bool> {
    let a = poly.certified_sign(lo, policy)?;
    let b = poly.certified_sign(hi, policy)?;
    Ok(matches!((a, b), (Sign::Positive, Sign::Negative) | (Sign::Negative, Sign::Positive)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KSpec {
    Fixed(u64),
    /// `k = n - 1` on every row.
    Full,
}

impl KSpec {
    pub fn for_n(self, n: u64) -> u64 {
        match self {
            KSpec::Fixed(k) => k,
            KSpec::Full => n.saturating_sub(1),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RhoRow {
    pub n: u64,
    pub k: u64,
    pub result: Result<RootResult>,
}

impl RhoRow {
    /// `rho`, `+inf` for no zero, `NaN` for a failed row.
    pub fn rho(&self) -> f64 {
        self.result.as_ref().map_or(f64::NAN, RootResult::rho)
    }

    pub fn rho_over_n(&self) -> f64 {
        self.rho() / self.n as f64
    }
}

/// One row per `n` in `n_from..=n_to` by `step`; rows are computed in parallel
/// and returned in ascending `n`.
pub fn rho_table(k: KSpec, n_from: u64, n_to: u64, step: u64, config: &RootConfig) -> Result<Vec<RhoRow>> {
    if n_from > n_to {
        return Err(invalid("n_from must not exceed n_to"));
    }
    if step == 0 {
        return Err(invalid("step must be positive"));
    }
    match k {
        KSpec::Fixed(k) if k == 0 || k >= n_from => {
            return Err(invalid(format!("need 0 < k < n for every row, got k = {k}, n_from = {n_from}")))
        }
        KSpec::Full if n_from < 2 => return Err(invalid("full tables start at n = 2")),
        _ => {}
    }
    let ns: Vec<u64> = (n_from..=n_to).step_by(step as usize).collect();
    Ok(ns
        .par_iter()
        .map(|&n| {
            let kk = k.for_n(n);
            RhoRow { n, k: kk, result: rho(n, kk, config) }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    pub n: u64,
    pub k: u64,
    pub c: f64,
    /// `n^{-cn} zeta_{n,k}(-cn)`.
    pub value: f64,
    /// `(e^c - 2) / (e^c - 1)`.
    pub limit: f64,
    pub abs_err: f64,
}

pub fn scaled_limit(c: f64, precision_bits: u32) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(invalid("c must be positive"));
    }
    let e = Float::with_val(precision_bits, c).exp();
    let num = Float::with_val(precision_bits, &e - 2u32);
    let den = Float::with_val(precision_bits, &e - 1u32);
    Ok((num / den).to_f64())
}

pub fn scaled_value(n: u64, k: u64, c: f64, precision_bits: u32) -> Result<ScaledValue> {
    let limit = scaled_limit(c, precision_bits)?;
    let poly = SignedDirichletPolynomial::zeta_nk(n, k)?;
    let sigma = -c * n as f64;
    let value = poly.eval_normalized_real(sigma, precision_bits)?.re_f64();
    Ok(ScaledValue { n, k, c, value, limit, abs_err: (value - limit).abs() })
}
