//! Signed Dirichlet polynomials `P(s) = sum_{m <= n} c_m m^{-s}` with
//! `c_m = +-1`, evaluated in MPFR arithmetic with a rigorous error bound.
//!
//! Two evaluation forms are provided:
//!
//! * [`SignedDirichletPolynomial::eval`] computes `sum c_m (-ln m)^d m^{-s}`
//!   directly. It is the form used for derivatives (Newton steps).
//! * [`SignedDirichletPolynomial::eval_normalized`] computes
//!   `F(s) = n^s P(s) = sum c_m exp(s (ln n - ln m))`. For `Re s <= 0` every
//!   term has modulus at most one, so the form stays in range even at
//!   `sigma ~ -n ln 2`, where the leftmost real zeros live.
//!
//! # Error model
//!
//! With working precision `p` every term carries a relative error of at most
//! `2^-p * (8 (1 + |s| ln n) + 2 d)` (logarithm, scaling, exponential and trig
//! roundings), and left-to-right summation of `n` terms adds at most
//! `2 (n + 1) 2^-p` times the sum of term moduli. The reported bound is the
//! sum of both contributions, inflated by `1 + 2^-10` and rounded upward.

use std::fmt;
use std::sync::OnceLock;

use rug::float::Round;
use rug::ops::PowAssign;
use rug::{Assign, Float};

use crate::error::{invalid, Error, Result};
use crate::mp::{self, BigComplex, BOUND_PRECISION};

pub const DEFAULT_PRECISION: u32 = 256;
pub const DEFAULT_PRECISION_CAP: u32 = 16384;
pub const MIN_PRECISION: u32 = 64;

/// Largest `|Re(exponent)|` accepted before reporting an overflow risk.
/// MPFR's default exponent range is about `2^30` bits, i.e. `7.4e8` nats.
pub const MAX_EXPONENT_ARG: f64 = 5.0e8;

/// Log tables are cached for precisions `64 * 2^i`, `i < LADDER_LEVELS`.
const LADDER_LEVELS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub cap_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self { start_bits: DEFAULT_PRECISION, cap_bits: DEFAULT_PRECISION_CAP }
    }
}

impl PrecisionPolicy {
    pub fn new(start_bits: u32, cap_bits: u32) -> Result<Self> {
        if start_bits < MIN_PRECISION {
            return Err(invalid(format!("precision must be at least {MIN_PRECISION} bits")));
        }
        if start_bits > cap_bits {
            return Err(invalid("precision exceeds precision cap"));
        }
        Ok(Self { start_bits, cap_bits })
    }

    /// Working precisions tried in order: start, 2 start, ... up to the cap.
    pub fn ladder(&self) -> impl Iterator<Item = u32> {
        let cap = self.cap_bits;
        std::iter::successors(Some(self.start_bits), move |&p| p.checked_mul(2))
            .take_while(move |&p| p <= cap)
    }

    /// Same ladder shape at twice the precision.
    pub fn doubled(&self) -> Self {
        Self { start_bits: self.start_bits * 2, cap_bits: self.cap_bits * 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Label {
    ZetaN,
    ZetaNK(u64),
    /// Twist by a completely multiplicative sign function, identified by a
    /// canonical string of its non-default prime values.
    ZetaChi(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::ZetaN => write!(f, "zeta_n"),
            Label::ZetaNK(k) => write!(f, "zeta_nk(k={k})"),
            Label::ZetaChi(id) => write!(f, "zeta_chi({id})"),
        }
    }
}

#[derive(Clone)]
struct LogTable {
    /// `ln m`, index `m - 1`.
    ln: Vec<Float>,
    /// `ln n - ln m`, index `m - 1`.
    gap: Vec<Float>,
}

impl LogTable {
    fn new(n: u64, prec: u32) -> Self {
        let ln: Vec<Float> = (1..=n).map(|m| Float::with_val(prec, m).ln()).collect();
        let ln_n = ln[n as usize - 1].clone();
        let gap = ln.iter().map(|l| Float::with_val(prec, &ln_n - l)).collect();
        Self { ln, gap }
    }
}

fn ladder_slot(prec: u32) -> Option<usize> {
    if prec % MIN_PRECISION != 0 {
        return None;
    }
    let ratio = prec / MIN_PRECISION;
    ratio
        .is_power_of_two()
        .then(|| ratio.trailing_zeros() as usize)
        .filter(|&i| i < LADDER_LEVELS)
}

/// Value of an evaluation together with a bound on its absolute error.
#[derive(Debug, Clone)]
pub struct EvalResult {
    pub value: BigComplex,
    /// Majorizes `|computed - exact|`; 64-bit, rounded up.
    pub error_bound: Float,
    pub precision_bits: u32,
}

impl EvalResult {
    pub fn abs(&self) -> Float {
        self.value.abs()
    }

    pub fn re_f64(&self) -> f64 {
        self.value.re.to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.value.im.to_f64()
    }

    pub fn error_bound_f64(&self) -> f64 {
        self.error_bound.to_f64_round(Round::Up)
    }

    /// `|value| > error_bound`, i.e. the exact value is certainly nonzero.
    pub fn certainly_nonzero(&self) -> bool {
        self.value.abs() > self.error_bound
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
    /// No precision up to `precision_bits` separated the value from zero.
    Indeterminate { precision_bits: u32 },
}

impl Sign {
    pub fn as_i8(self) -> Option<i8> {
        match self {
            Sign::Positive => Some(1),
            Sign::Negative => Some(-1),
            Sign::Indeterminate { .. } => None,
        }
    }

    pub fn is_determinate(self) -> bool {
        !matches!(self, Sign::Indeterminate { .. })
    }
}

/// Outcome of a certified sign determination at a real point.
#[derive(Debug, Clone)]
pub struct SignCertificate {
    pub sign: Sign,
    /// Precision of the last evaluation.
    pub precision_bits: u32,
    /// Real value of the last evaluation (normalized form for `sigma <= 0`).
    pub value: Float,
    pub error_bound: Float,
}

impl SignCertificate {
    /// `|value| / error_bound`, saturating; used to flag near-tangential zeros.
    pub fn margin(&self) -> f64 {
        if self.error_bound.is_zero() {
            return f64::INFINITY;
        }
        let ratio = Float::with_val(BOUND_PRECISION, &*self.value.as_abs()) / &self.error_bound;
        ratio.to_f64()
    }
}

#[derive(Clone, Copy)]
enum Form {
    Normalized,
    Plain { derivative: u32 },
}

/// `sum_{m=1}^{n} c_m m^{-s}` with `c_m in {-1, +1}`.
#[derive(Clone)]
pub struct SignedDirichletPolynomial {
    n: u64,
    coeffs: Vec<i8>,
    label: Label,
    ln_n: f64,
    tables: [OnceLock<LogTable>; LADDER_LEVELS],
}

impl fmt::Debug for SignedDirichletPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SignedDirichletPolynomial")
            .field("n", &self.n)
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

impl PartialEq for SignedDirichletPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.coeffs == other.coeffs && self.label == other.label
    }
}

impl SignedDirichletPolynomial {
    /// Builds a polynomial from explicit coefficients `c_1..c_n`.
    pub fn from_coefficients(coeffs: Vec<i8>, label: Label) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("polynomial needs at least one coefficient"));
        }
        if coeffs.iter().any(|&c| c != 1 && c != -1) {
            return Err(invalid("coefficients must be +1 or -1"));
        }
        let n = coeffs.len() as u64;
        let poly = Self {
            n,
            coeffs,
            label,
            ln_n: (n as f64).ln(),
            tables: Default::default(),
        };
        // Eager default-precision table: concurrent readers never initialize.
        poly.log_table(DEFAULT_PRECISION);
        Ok(poly)
    }

    /// `zeta_n(s) = sum_{m <= n} m^{-s}`.
    pub fn zeta_n(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n must be positive"));
        }
        Self::from_coefficients(vec![1; n as usize], Label::ZetaN)
    }

    /// `n^{-s} - sum_{n-k <= j < n} j^{-s} + sum_{1 <= j < n-k} j^{-s}`.
    pub fn zeta_nk(n: u64, k: u64) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(invalid(format!("zeta_nk needs 0 < k < n, got n = {n}, k = {k}")));
        }
        Self::from_coefficients(nk_coefficients(n, k), Label::ZetaNK(k))
    }

    /// `sum_{m <= n} chi(m) m^{-s}` for a sign function given pointwise.
    pub fn zeta_chi(n: u64, id: impl Into<String>, chi: impl Fn(u64) -> i8) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n must be positive"));
        }
        let coeffs = (1..=n).map(chi).collect();
        Self::from_coefficients(coeffs, Label::ZetaChi(id.into()))
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn label(&self) -> &Label {
        &self.label
    }

    pub fn coeffs(&self) -> &[i8] {
        &self.coeffs
    }

    /// `c_m`, for `1 <= m <= n`.
    pub fn coeff(&self, m: u64) -> i8 {
        self.coeffs[(m - 1) as usize]
    }

    pub fn coefficient_sum(&self) -> i64 {
        self.coeffs.iter().map(|&c| c as i64).sum()
    }

    fn log_table(&self, prec: u32) -> std::borrow::Cow<'_, LogTable> {
        match ladder_slot(prec) {
            Some(i) => std::borrow::Cow::Borrowed(
                self.tables[i].get_or_init(|| LogTable::new(self.n, prec)),
            ),
            None => std::borrow::Cow::Owned(LogTable::new(self.n, prec)),
        }
    }

    /// `n^s P(s)`.
    pub fn eval_normalized(&self, s: &BigComplex, precision_bits: u32) -> Result<EvalResult> {
        self.evaluate(s, precision_bits, Form::Normalized)
    }

    /// `d`-th derivative `sum c_m (-ln m)^d m^{-s}`.
    pub fn eval(&self, s: &BigComplex, precision_bits: u32, derivative: u32) -> Result<EvalResult> {
        self.evaluate(s, precision_bits, Form::Plain { derivative })
    }

    pub fn eval_normalized_real(&self, sigma: f64, precision_bits: u32) -> Result<EvalResult> {
        self.eval_normalized(&BigComplex::from_f64(sigma, 0.0, precision_bits), precision_bits)
    }

    pub fn eval_real(&self, sigma: f64, precision_bits: u32, derivative: u32) -> Result<EvalResult> {
        self.eval(&BigComplex::from_f64(sigma, 0.0, precision_bits), precision_bits, derivative)
    }

    fn evaluate(&self, s: &BigComplex, prec: u32, form: Form) -> Result<EvalResult> {
        if prec < MIN_PRECISION {
            return Err(invalid(format!("precision must be at least {MIN_PRECISION} bits")));
        }
        let (sigma, tau) = s.to_f64();
        if !sigma.is_finite() || !tau.is_finite() {
            return Err(invalid("evaluation point must be finite"));
        }
        let exponent_reach = sigma.abs() * self.ln_n;
        let overflow = match form {
            Form::Normalized => sigma > 0.0 && exponent_reach > MAX_EXPONENT_ARG,
            Form::Plain { .. } => exponent_reach > MAX_EXPONENT_ARG,
        };
        if overflow || tau.abs() * self.ln_n > MAX_EXPONENT_ARG {
            return Err(Error::OverflowRisk { n: self.n, sigma });
        }

        let table = self.log_table(prec);
        let sig = Float::with_val(prec, &s.re);
        let tau_f = Float::with_val(prec, &s.im);
        let is_real = s.is_real();
        let derivative = match form {
            Form::Normalized => 0,
            Form::Plain { derivative } => derivative,
        };

        let mut re = Float::new(prec);
        let mut im = Float::new(prec);
        let mut moduli = Float::new(BOUND_PRECISION);
        let mut exponent = Float::new(prec);
        let mut weight = Float::new(prec);

        for (idx, &c) in self.coeffs.iter().enumerate() {
            // exp(s * g): g = ln n - ln m (normalized) or -ln m (plain).
            let g: &Float = match form {
                Form::Normalized => &table.gap[idx],
                Form::Plain { .. } => &table.ln[idx],
            };
            let sign_g = match form {
                Form::Normalized => 1,
                Form::Plain { .. } => -1,
            };
            if derivative > 0 {
                if idx == 0 {
                    continue; // (ln 1)^d = 0
                }
                // (-ln m)^d
                weight.assign(&table.ln[idx]);
                weight.pow_assign(derivative);
                if derivative % 2 == 1 {
                    weight = -weight;
                }
            }

            exponent.assign(&sig * g);
            if sign_g < 0 {
                exponent = -exponent;
            }
            let mut magnitude = exponent.clone().exp();
            if derivative > 0 {
                magnitude *= &weight;
            }
            if c < 0 {
                magnitude = -magnitude;
            }
            mp::add_up(&mut moduli, &mp::abs_up(&magnitude));

            if is_real {
                re += &magnitude;
            } else {
                let mut angle = Float::with_val(prec, &tau_f * g);
                if sign_g < 0 {
                    angle = -angle;
                }
                let (sin, cos) = angle.sin_cos(Float::new(prec));
                re += Float::with_val(prec, &magnitude * &cos);
                im += Float::with_val(prec, &magnitude * &sin);
            }
        }

        if !re.is_finite() || !im.is_finite() {
            return Err(Error::OverflowRisk { n: self.n, sigma });
        }

        let s_abs = sigma.hypot(tau);
        let relative = 8.0 * (1.0 + s_abs * self.ln_n)
            + 2.0 * derivative as f64
            + 2.0 * (self.n as f64 + 1.0);
        let mut bound = moduli;
        mp::mul_up(&mut bound, relative * (1.0 + 1.0 / 1024.0));
        bound >>= prec;

        Ok(EvalResult { value: BigComplex { re, im }, error_bound: bound, precision_bits: prec })
    }

    /// Sign of `P(sigma)` certified by `|value| > error_bound`, escalating
    /// precision along `policy`. Fails only on overflow risk.
    pub fn certify_sign(&self, sigma: f64, policy: &PrecisionPolicy) -> Result<SignCertificate> {
        let mut last = None;
        for prec in policy.ladder() {
            let r = if sigma <= 0.0 {
                self.eval_normalized_real(sigma, prec)?
            } else {
                self.eval_real(sigma, prec, 0)?
            };
            let value = r.value.re;
            let certified = Float::with_val(BOUND_PRECISION, &*value.as_abs()) > r.error_bound;
            if certified {
                let sign = if value.is_sign_positive() { Sign::Positive } else { Sign::Negative };
                return Ok(SignCertificate { sign, precision_bits: prec, value, error_bound: r.error_bound });
            }
            last = Some((prec, value, r.error_bound));
        }
        let (prec, value, error_bound) = last.ok_or_else(|| invalid("empty precision ladder"))?;
        Ok(SignCertificate {
            sign: Sign::Indeterminate { precision_bits: prec },
            precision_bits: prec,
            value,
            error_bound,
        })
    }

    pub fn certified_sign(&self, sigma: f64, policy: &PrecisionPolicy) -> Result<Sign> {
        self.certify_sign(sigma, policy).map(|c| c.sign)
    }
}

fn nk_coefficients(n: u64, k: u64) -> Vec<i8> {
    (1..=n)
        .map(|m| if m == n { 1 } else if m >= n - k { -1 } else { 1 })
        .collect()
}
