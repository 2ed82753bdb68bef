//! Complex zeros of signed Dirichlet polynomials by the argument principle.
//!
//! The winding number of the normalized value `n^s P(s)` around a rectangle
//! is obtained by tracking its phase along the boundary. Samples are refined
//! until consecutive phase steps are below `pi / 2` and every sample is
//! certified nonzero. Rectangles are quadrisected until each piece winds at
//! most once; a winding-one piece is then refined by Newton's method.
//!
//! The phase-step criterion is the usual heuristic, not a proof: a zero
//! hugging an edge can in principle slip between two samples. Subdivision
//! additivity is checked at every split and any failure clears the
//! completeness flag of the result.

use std::f64::consts::{PI, TAU};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::dirichlet::{PrecisionPolicy, SignedDirichletPolynomial, DEFAULT_PRECISION};
use crate::error::{invalid, Error, Result};
use crate::mp::BigComplex;
use crate::realroots::{self, left_barrier, right_barrier, RootConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    pub tau_lo: f64,
    pub tau_hi: f64,
}

impl Rectangle {
    pub fn new(sigma_lo: f64, sigma_hi: f64, tau_lo: f64, tau_hi: f64) -> Result<Self> {
        let finite = [sigma_lo, sigma_hi, tau_lo, tau_hi].iter().all(|v| v.is_finite());
        if !finite || !(sigma_lo < sigma_hi) || !(tau_lo < tau_hi) {
            return Err(invalid(format!(
                "degenerate rectangle [{sigma_lo}, {sigma_hi}] x [{tau_lo}, {tau_hi}]"
            )));
        }
        Ok(Self { sigma_lo, sigma_hi, tau_lo, tau_hi })
    }

    pub fn width(&self) -> f64 {
        self.sigma_hi - self.sigma_lo
    }

    pub fn height(&self) -> f64 {
        self.tau_hi - self.tau_lo
    }

    pub fn center(&self) -> (f64, f64) {
        (
            self.sigma_lo + self.width() / 2.0,
            self.tau_lo + self.height() / 2.0,
        )
    }

    pub fn contains(&self, sigma: f64, tau: f64) -> bool {
        self.sigma_lo <= sigma && sigma <= self.sigma_hi && self.tau_lo <= tau && tau <= self.tau_hi
    }

    pub fn conj(&self) -> Self {
        Self { tau_lo: -self.tau_hi, tau_hi: -self.tau_lo, ..*self }
    }

    /// Four quarters split at the center shifted by `offset` times the size.
    pub fn quadrisect(&self, offset: f64) -> [Rectangle; 4] {
        let sm = self.sigma_lo + self.width() * (0.5 + offset);
        let tm = self.tau_lo + self.height() * (0.5 + offset);
        [
            Rectangle { sigma_hi: sm, tau_hi: tm, ..*self },
            Rectangle { sigma_lo: sm, tau_hi: tm, ..*self },
            Rectangle { sigma_hi: sm, tau_lo: tm, ..*self },
            Rectangle { sigma_lo: sm, tau_lo: tm, ..*self },
        ]
    }

    /// Grown on every side by `delta` times its size (shrunk for negative `delta`).
    pub fn perturbed(&self, delta: f64) -> Self {
        let (dw, dh) = (self.width() * delta, self.height() * delta);
        Self {
            sigma_lo: self.sigma_lo - dw,
            sigma_hi: self.sigma_hi + dw,
            tau_lo: self.tau_lo - dh,
            tau_hi: self.tau_hi + dh,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    pub precision_bits: u32,
    /// Newton step-size tolerance.
    pub tolerance: f64,
    /// Largest accepted `|n^s P(s)|` at a reported zero.
    pub residual_bound: f64,
    /// Boxes examined per `isolate_zeros` call before giving up.
    pub max_boxes: usize,
    /// Boundary samples per winding-number computation.
    pub sample_cap: usize,
    pub newton_max_iter: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            precision_bits: DEFAULT_PRECISION,
            tolerance: 1e-9,
            residual_bound: 1e-20,
            max_boxes: 20_000,
            sample_cap: 200_000,
            newton_max_iter: 64,
        }
    }
}

/// Maximal bisection depth of a boundary segment (segments of `2^-40` of an
/// initial step are treated as touching a zero).
const MAX_SEGMENT_DEPTH: u32 = 40;
/// Relative split offsets tried when a subdivision line meets a zero.
const SPLIT_OFFSETS: [f64; 4] = [0.0, 1e-6, -1e-6, 2e-6];
/// Relative perturbations of a top-level rectangle.
const RECT_PERTURBATIONS: [f64; 4] = [0.0, 1e-6, -1e-6, 2e-6];

struct PhaseTracker<'a> {
    poly: &'a SignedDirichletPolynomial,
    rect: Rectangle,
    config: &'a ScanConfig,
    samples: AtomicUsize,
}

impl PhaseTracker<'_> {
    fn too_close(&self) -> Error {
        Error::BoundaryTooClose { rect: self.rect }
    }

    fn arg_at(&self, sigma: f64, tau: f64) -> Result<f64> {
        if self.samples.fetch_add(1, Ordering::Relaxed) >= self.config.sample_cap {
            return Err(self.too_close());
        }
        let prec = self.config.precision_bits;
        let r = self.poly.eval_normalized(&BigComplex::from_f64(sigma, tau, prec), prec)?;
        if !r.certainly_nonzero() {
            return Err(self.too_close());
        }
        Ok(r.value.arg())
    }

    /// Continuous phase change along the segment `a -> b`.
    fn edge(&self, a: (f64, f64), b: (f64, f64)) -> Result<f64> {
        let len = (b.0 - a.0).hypot(b.1 - a.1);
        let ln_n = (self.poly.n().max(2) as f64).ln();
        let h0 = (PI / (8.0 * ln_n)).min(0.25);
        let pieces = ((len / h0).ceil() as usize).max(4);
        let point = |t: f64| (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));

        let mut total = 0.0;
        let mut t0 = 0.0;
        let mut arg0 = self.arg_at(a.0, a.1)?;
        for i in 1..=pieces {
            let t1 = i as f64 / pieces as f64;
            let (s1, u1) = point(t1);
            let arg1 = self.arg_at(s1, u1)?;
            total += self.refine(&point, t0, arg0, t1, arg1, 0)?;
            t0 = t1;
            arg0 = arg1;
        }
        Ok(total)
    }

    fn refine(
        &self,
        point: &dyn Fn(f64) -> (f64, f64),
        t0: f64,
        arg0: f64,
        t1: f64,
        arg1: f64,
        depth: u32,
    ) -> Result<f64> {
        let step = wrap(arg1 - arg0);
        if step.abs() < PI / 2.0 {
            return Ok(step);
        }
        if depth >= MAX_SEGMENT_DEPTH {
            return Err(self.too_close());
        }
        let tm = t0 + (t1 - t0) / 2.0;
        let (s, u) = point(tm);
        let argm = self.arg_at(s, u)?;
        Ok(self.refine(point, t0, arg0, tm, argm, depth + 1)?
            + self.refine(point, tm, argm, t1, arg1, depth + 1)?)
    }
}

/// Wraps an angle difference into `(-pi, pi]`.
fn wrap(d: f64) -> f64 {
    let r = d.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Number of zeros of `poly` inside `rect`, counted with multiplicity.
pub fn winding_number(poly: &SignedDirichletPolynomial, rect: &Rectangle, config: &ScanConfig) -> Result<u32> {
    let tracker = PhaseTracker { poly, rect: *rect, config, samples: AtomicUsize::new(0) };
    let Rectangle { sigma_lo: a, sigma_hi: b, tau_lo: c, tau_hi: d } = *rect;
    let total = tracker.edge((a, c), (b, c))?
        + tracker.edge((b, c), (b, d))?
        + tracker.edge((b, d), (a, d))?
        + tracker.edge((a, d), (a, c))?;
    let turns = total / TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() > 0.25 || rounded < 0.0 {
        return Err(Error::WindingInconsistent { rect: *rect, detail: format!("phase turns {turns}") });
    }
    Ok(rounded as u32)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroRecord {
    pub sigma: f64,
    pub tau: f64,
    /// `|n^s P(s)|` at the refined location.
    pub residual: f64,
    /// Box with winding number one containing the zero.
    pub rect: Rectangle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Isolation {
    /// Sorted by `(tau, sigma)`.
    pub zeros: Vec<ZeroRecord>,
    /// False when some box could not be resolved; the list may then miss zeros.
    pub complete: bool,
    pub issues: Vec<String>,
}

fn newton(
    poly: &SignedDirichletPolynomial,
    rect: &Rectangle,
    config: &ScanConfig,
) -> Result<Option<ZeroRecord>> {
    let prec = config.precision_bits;
    let (cs, ct) = rect.center();
    let mut s = BigComplex::from_f64(cs, ct, prec);
    s.set_prec(prec);
    let reach = 2.0 * rect.width().hypot(rect.height());
    for _ in 0..config.newton_max_iter {
        let value = poly.eval(&s, prec, 0)?;
        let slope = poly.eval(&s, prec, 1)?;
        let Some(step) = value.value.div(&slope.value) else {
            return Ok(None);
        };
        s = s.sub(&step);
        let (sig, tau) = s.to_f64();
        if !sig.is_finite() || !tau.is_finite() || (sig - cs).hypot(tau - ct) > reach {
            return Ok(None);
        }
        let step_size = step.abs().to_f64();
        if step_size < config.tolerance {
            let f = poly.eval_normalized(&s, prec)?;
            let residual = f.abs().to_f64();
            if residual < 10.0 * f.error_bound_f64() {
                if !rect.contains(sig, tau) || residual > config.residual_bound {
                    return Ok(None);
                }
                return Ok(Some(ZeroRecord { sigma: sig, tau, residual, rect: *rect }));
            }
        }
    }
    Ok(None)
}

fn subdivide(
    poly: &SignedDirichletPolynomial,
    rect: &Rectangle,
    winding: u32,
    config: &ScanConfig,
) -> std::result::Result<Vec<(Rectangle, u32)>, String> {
    let mut last = String::new();
    for offset in SPLIT_OFFSETS {
        let quarters = rect.quadrisect(offset);
        let windings: Vec<Result<u32>> = quarters.par_iter().map(|q| winding_number(poly, q, config)).collect();
        match windings.into_iter().collect::<Result<Vec<u32>>>() {
            Ok(ws) if ws.iter().sum::<u32>() == winding => {
                return Ok(quarters.into_iter().zip(ws).collect());
            }
            Ok(ws) => last = format!("{rect:?}: quarter windings {ws:?} do not sum to {winding}"),
            Err(e) => last = e.to_string(),
        }
    }
    Err(last)
}

/// Isolates and refines every zero inside `rect`.
pub fn isolate_zeros(
    poly: &SignedDirichletPolynomial,
    rect: &Rectangle,
    max_boxes: usize,
    config: &ScanConfig,
) -> Result<Isolation> {
    let mut outer = None;
    let mut last_err = None;
    for delta in RECT_PERTURBATIONS {
        let r = if delta == 0.0 { *rect } else { rect.perturbed(delta) };
        match winding_number(poly, &r, config) {
            Ok(w) => {
                outer = Some((r, w));
                break;
            }
            Err(e @ Error::BoundaryTooClose { .. }) | Err(e @ Error::WindingInconsistent { .. }) => {
                last_err = Some(e)
            }
            Err(e) => return Err(e),
        }
    }
    let Some((root_rect, root_winding)) = outer else {
        return Err(last_err.unwrap_or(Error::BoundaryTooClose { rect: *rect }));
    };

    let mut zeros = Vec::new();
    let mut issues = Vec::new();
    let mut stack = vec![(root_rect, root_winding)];
    let mut boxes = 0usize;
    while let Some((r, w)) = stack.pop() {
        if w == 0 {
            continue;
        }
        boxes += 1;
        if boxes > max_boxes {
            issues.push(format!("box budget {max_boxes} exhausted"));
            break;
        }
        if w == 1 {
            if let Some(z) = newton(poly, &r, config)? {
                zeros.push(z);
                continue;
            }
        }
        let scale = r.width().max(r.height()).max(1.0);
        if r.width() < 1e-12 * scale || r.height() < 1e-12 * scale {
            issues.push(format!("{r:?} with winding {w} shrank below resolution"));
            continue;
        }
        match subdivide(poly, &r, w, config) {
            Ok(children) => stack.extend(children.into_iter().rev()),
            Err(msg) => issues.push(msg),
        }
    }
    sort_zeros(&mut zeros);
    Ok(Isolation { complete: issues.is_empty(), zeros, issues })
}

fn sort_zeros(zeros: &mut [ZeroRecord]) {
    zeros.sort_by(|a, b| a.tau.total_cmp(&b.tau).then(a.sigma.total_cmp(&b.sigma)));
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhiEstimate {
    pub n: u64,
    pub tau_max: f64,
    /// Smallest real part among the located zeros; `+inf` if none.
    pub phi_hat: f64,
    /// `rho_{n,n-1}`, the proven lower bound for every real part.
    pub rho_full: f64,
    pub search_region: Rectangle,
    pub zeros: Vec<ZeroRecord>,
    pub complete: bool,
    pub issues: Vec<String>,
}

/// Unit-height rectangles covering `[0, tau_max]`, grouped in strips of
/// height `2 pi / ln(n / (n - 1))`, the beat period of the two largest terms.
pub fn strip_rectangles(n: u64, sigma_lo: f64, sigma_hi: f64, tau_max: f64) -> Vec<Rectangle> {
    let period = if n >= 2 { TAU / ((n as f64) / ((n - 1) as f64)).ln() } else { tau_max };
    let mut rects = Vec::new();
    let mut strip_lo = 0.0;
    while strip_lo < tau_max {
        let strip_hi = (strip_lo + period).min(tau_max);
        let mut lo = strip_lo;
        while lo < strip_hi {
            let hi = (lo + 1.0).min(strip_hi);
            if hi - lo > 1e-9 {
                rects.push(Rectangle { sigma_lo, sigma_hi, tau_lo: lo, tau_hi: hi });
            } else if let Some(last) = rects.last_mut() {
                last.tau_hi = hi;
            }
            lo = hi;
        }
        strip_lo = strip_hi;
    }
    rects
}

/// Bounded scan for zeros of `zeta_n` with `0 <= tau <= tau_max`, between
/// `max(left_barrier, rho_{n,n-1} - sigma_pad)` and the right barrier.
///
/// The returned `phi_hat` is an upper bound for the infimum of real parts over
/// the whole plane, restricted to the scanned height.
pub fn phi_hat(n: u64, tau_max: f64, sigma_pad: f64, config: &ScanConfig) -> Result<PhiEstimate> {
    if n < 2 {
        return Err(invalid("phi_hat needs n >= 2"));
    }
    if !(tau_max > 0.0) || !tau_max.is_finite() {
        return Err(invalid("tau_max must be positive"));
    }
    if !(sigma_pad >= 0.0) {
        return Err(invalid("sigma_pad must be non-negative"));
    }
    let root_config = RootConfig {
        policy: PrecisionPolicy::new(config.precision_bits, config.precision_bits.max(crate::dirichlet::DEFAULT_PRECISION_CAP))?,
        tolerance: config.tolerance,
        scan_step: None,
    };
    let rho_full = realroots::rho(n, n - 1, &root_config)?.rho();
    let sigma_lo = left_barrier(n).max(rho_full - sigma_pad);
    let sigma_hi = right_barrier(n);
    let region = Rectangle::new(sigma_lo, sigma_hi, 0.0, tau_max)?;
    let poly = SignedDirichletPolynomial::zeta_n(n)?;

    let rects = strip_rectangles(n, sigma_lo, sigma_hi, tau_max);
    let parts: Vec<Result<Isolation>> = rects
        .par_iter()
        .map(|r| isolate_zeros(&poly, r, config.max_boxes, config))
        .collect();

    let mut zeros = Vec::new();
    let mut issues = Vec::new();
    for (r, part) in rects.iter().zip(parts) {
        match part {
            Ok(iso) => {
                zeros.extend(iso.zeros);
                issues.extend(iso.issues);
            }
            Err(e) => issues.push(format!("{r:?}: {e}")),
        }
    }
    sort_zeros(&mut zeros);
    let phi = zeros.iter().map(|z| z.sigma).fold(f64::INFINITY, f64::min);
    Ok(PhiEstimate {
        n,
        tau_max,
        phi_hat: phi,
        rho_full,
        search_region: region,
        zeros,
        complete: issues.is_empty(),
        issues,
    })
}
