//! Entire functions of genus zero, represented by a leading coefficient, an
//! origin order, an explicit zero multiset, and an optional parametric tail:
//!
//! ```text
//! P(z) = a * z^alpha * prod_j (1 - z/z_j)
//! ```
//!
//! All per-function quantities are computed from this factorization:
//! log-evaluation, sup-norms on circles, the Jensen geometric mean (closed
//! form and circle quadrature), zero counting, reciprocal tail sums, the
//! `d*` degree, and factor splits at a radius.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::tail::TailModel;

const TAU: f64 = std::f64::consts::TAU;

/// One zero of the factorization, with multiplicity.
///
/// Serializes as `[re, im, multiplicity]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64, u32)", into = "(f64, f64, u32)")]
pub struct Zero {
    pub position: Complex64,
    pub multiplicity: u32,
}

impl Zero {
    pub fn new(position: Complex64, multiplicity: u32) -> Self {
        Zero {
            position,
            multiplicity,
        }
    }

    pub fn simple(position: Complex64) -> Self {
        Zero::new(position, 1)
    }
}

impl From<(f64, f64, u32)> for Zero {
    fn from((re, im, m): (f64, f64, u32)) -> Self {
        Zero::new(Complex64::new(re, im), m)
    }
}

impl From<Zero> for (f64, f64, u32) {
    fn from(z: Zero) -> Self {
        (z.position.re, z.position.im, z.multiplicity)
    }
}

/// A logarithm of a modulus. `NegInfinite` is the typed sentinel for
/// log|P(z)| at a zero of P; it never leaks as a raw floating infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogAbs {
    Finite(f64),
    NegInfinite,
}

impl LogAbs {
    pub fn finite(self) -> Option<f64> {
        match self {
            LogAbs::Finite(v) => Some(v),
            LogAbs::NegInfinite => None,
        }
    }

    /// exp of the log-modulus; the sentinel maps to 0.
    pub fn exp(self) -> f64 {
        match self {
            LogAbs::Finite(v) => v.exp(),
            LogAbs::NegInfinite => 0.0,
        }
    }
}

/// Options for the boundary-circle sup-norm search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SupNormOptions {
    /// Initial uniform angular grid size.
    pub initial_angles: usize,
    /// Golden-section refinement stops once the bracketing interval is
    /// below this fraction of the full circle.
    pub refine_rel_tol: f64,
}

impl Default for SupNormOptions {
    fn default() -> Self {
        SupNormOptions {
            initial_angles: 4096,
            refine_rel_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SupNormResult {
    pub value: f64,
    pub log_value: f64,
    /// Angle (radians) where the maximum was found.
    pub angle: f64,
    /// Grid resolution the search started from.
    pub grid_angles: usize,
}

/// Options for the Jensen-mean circle quadrature.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadratureOptions {
    pub initial_nodes: usize,
    pub max_nodes: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            initial_nodes: 256,
            max_nodes: 1 << 22,
        }
    }
}

/// Result of the Jensen-mean quadrature.
#[derive(Debug, Clone, Copy)]
pub struct JensenQuadrature {
    pub value: f64,
    pub log_mean: f64,
    pub nodes: usize,
    /// Set when the radius was nudged outward because a zero sat within
    /// relative distance 1e-9 of the circle.
    pub perturbed_radius: Option<f64>,
}

/// Zeros closer to the circle than this (relative) have their circle
/// average taken in closed form instead of being integrated; the trapezoid
/// rule cannot converge across a near-singularity at tight tolerances.
const DEFLATE_REL: f64 = 1e-5;
const PERTURB_REL: f64 = 1e-9;

/// An entire function of genus zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SerializedFunction", into = "SerializedFunction")]
pub struct GenusZeroFunction {
    leading_coeff: Complex64,
    origin_order: u32,
    zeros: Vec<Zero>,
    tail: Option<TailModel>,
}

/// JSON shape: leading_coeff as [re, im], zeros as [re, im, multiplicity].
#[derive(Serialize, Deserialize)]
struct SerializedFunction {
    leading_coeff: [f64; 2],
    origin_order: u32,
    zeros: Vec<Zero>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail: Option<TailModel>,
}

impl TryFrom<SerializedFunction> for GenusZeroFunction {
    type Error = CoreError;
    fn try_from(s: SerializedFunction) -> Result<Self> {
        GenusZeroFunction::new(
            Complex64::new(s.leading_coeff[0], s.leading_coeff[1]),
            s.origin_order,
            s.zeros,
            s.tail,
        )
    }
}

impl From<GenusZeroFunction> for SerializedFunction {
    fn from(f: GenusZeroFunction) -> Self {
        SerializedFunction {
            leading_coeff: [f.leading_coeff.re, f.leading_coeff.im],
            origin_order: f.origin_order,
            zeros: f.zeros,
            tail: f.tail,
        }
    }
}

impl GenusZeroFunction {
    pub fn new(
        leading_coeff: Complex64,
        origin_order: u32,
        zeros: Vec<Zero>,
        tail: Option<TailModel>,
    ) -> Result<Self> {
        if !leading_coeff.re.is_finite() || !leading_coeff.im.is_finite() {
            return Err(CoreError::InvalidFunction(
                "leading coefficient must be finite".into(),
            ));
        }
        if leading_coeff.norm_sqr() == 0.0 {
            return Err(CoreError::InvalidFunction(
                "leading coefficient must be nonzero".into(),
            ));
        }
        let mut max_abs: f64 = 0.0;
        for (i, z) in zeros.iter().enumerate() {
            if !z.position.re.is_finite() || !z.position.im.is_finite() {
                return Err(CoreError::InvalidFunction(format!(
                    "zero #{i} is not finite"
                )));
            }
            if z.position.norm_sqr() == 0.0 {
                return Err(CoreError::InvalidFunction(format!(
                    "zero #{i} is at the origin; origin zeros belong to origin_order"
                )));
            }
            if z.multiplicity == 0 {
                return Err(CoreError::InvalidFunction(format!(
                    "zero #{i} has multiplicity 0"
                )));
            }
            max_abs = max_abs.max(z.position.norm());
        }
        if let Some(t) = &tail {
            t.validate()?;
            if !t.is_empty() && t.cutoff <= max_abs {
                return Err(CoreError::InvalidFunction(format!(
                    "tail cutoff {} must strictly exceed the largest explicit zero ({max_abs})",
                    t.cutoff
                )));
            }
        }
        Ok(GenusZeroFunction {
            leading_coeff,
            origin_order,
            zeros,
            tail,
        })
    }

    /// The constant function `a`.
    pub fn constant(a: Complex64) -> Result<Self> {
        Self::new(a, 0, Vec::new(), None)
    }

    /// `a * z^alpha`.
    pub fn monomial(a: Complex64, alpha: u32) -> Result<Self> {
        Self::new(a, alpha, Vec::new(), None)
    }

    /// `a * z^alpha * prod (1 - z/z_j)` with simple zeros.
    pub fn from_zeros(a: Complex64, alpha: u32, zeros: &[Complex64]) -> Result<Self> {
        Self::new(a, alpha, zeros.iter().map(|&z| Zero::simple(z)).collect(), None)
    }

    /// Same, with real zeros.
    pub fn from_real_zeros(a: f64, alpha: u32, zeros: &[f64]) -> Result<Self> {
        Self::from_zeros(
            Complex64::new(a, 0.0),
            alpha,
            &zeros
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect::<Vec<_>>(),
        )
    }

    pub fn leading_coeff(&self) -> Complex64 {
        self.leading_coeff
    }

    pub fn origin_order(&self) -> u32 {
        self.origin_order
    }

    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    pub fn tail(&self) -> Option<&TailModel> {
        self.tail.as_ref()
    }

    fn tail_nonempty(&self) -> Option<&TailModel> {
        self.tail.as_ref().filter(|t| !t.is_empty())
    }

    /// Polynomial degree (origin order plus zero count with multiplicity);
    /// `None` when a nonempty tail makes the function transcendental.
    pub fn degree(&self) -> Option<u64> {
        if self.tail_nonempty().is_some() {
            return None;
        }
        Some(
            self.origin_order as u64
                + self
                    .zeros
                    .iter()
                    .map(|z| z.multiplicity as u64)
                    .sum::<u64>(),
        )
    }

    /// The degree surrogate
    /// `d*(P) = alpha + sum_{|z_j|<=1} 1 + sum_{|z_j|>1} 1/|z_j|`,
    /// zeros counted with multiplicity, tail included. Zeros exactly on the
    /// unit circle land in the unit bucket (inclusive `<=`).
    pub fn d_star(&self) -> f64 {
        let mut acc = self.origin_order as f64;
        for z in &self.zeros {
            let m = z.multiplicity as f64;
            let r = z.position.norm();
            if r <= 1.0 {
                acc += m;
            } else {
                acc += m / r;
            }
        }
        if let Some(t) = self.tail_nonempty() {
            acc += t.count(1.0) as f64;
            // reciprocal part over |z| strictly above 1
            acc += t.abs_reciprocal_sum(next_after_one());
        }
        acc
    }

    /// log|P(z)|, with the tail contribution evaluated by a certified
    /// series (requires |z| <= cutoff/2 when a tail is present).
    pub fn log_abs_eval(&self, z: Complex64) -> Result<LogAbs> {
        let z_abs = z.norm();
        if let Some(t) = self.tail_nonempty() {
            let limit = t.cutoff / 2.0;
            if z_abs > limit {
                return Err(CoreError::TailTooClose {
                    radius: z_abs,
                    limit,
                });
            }
        }
        if z_abs == 0.0 {
            if self.origin_order > 0 {
                return Ok(LogAbs::NegInfinite);
            }
            return Ok(LogAbs::Finite(self.leading_coeff.norm().ln()));
        }
        let mut acc = self.leading_coeff.norm().ln() + self.origin_order as f64 * z_abs.ln();
        for zero in &self.zeros {
            let w = Complex64::new(1.0, 0.0) - z / zero.position;
            let n2 = w.norm_sqr();
            if n2 == 0.0 {
                return Ok(LogAbs::NegInfinite);
            }
            acc += zero.multiplicity as f64 * 0.5 * n2.ln();
        }
        if let Some(t) = self.tail_nonempty() {
            acc += t.log_abs_contribution(z)?;
        }
        Ok(LogAbs::Finite(acc))
    }

    /// sup over |z| <= r of |P(z)|, found on the boundary circle
    /// (maximum principle) by a uniform angular grid plus golden-section
    /// refinement around the grid maximum.
    pub fn sup_norm(&self, r: f64) -> Result<f64> {
        Ok(self.sup_norm_with(r, &SupNormOptions::default())?.value)
    }

    pub fn log_sup_norm(&self, r: f64, opts: &SupNormOptions) -> Result<f64> {
        Ok(self.sup_norm_with(r, opts)?.log_value)
    }

    pub fn sup_norm_with(&self, r: f64, opts: &SupNormOptions) -> Result<SupNormResult> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(CoreError::InvalidArgument(format!(
                "sup_norm radius must be positive, got {r}"
            )));
        }
        // fail fast with the same error log_abs_eval would produce
        if let Some(t) = self.tail_nonempty() {
            if r > t.cutoff / 2.0 {
                return Err(CoreError::TailTooClose {
                    radius: r,
                    limit: t.cutoff / 2.0,
                });
            }
        }
        let m = opts.initial_angles.max(8);
        let eval = |t: f64| -> Result<f64> {
            let z = Complex64::from_polar(r, t);
            Ok(match self.log_abs_eval(z)? {
                LogAbs::Finite(v) => v,
                LogAbs::NegInfinite => f64::NEG_INFINITY,
            })
        };
        let mut best = f64::NEG_INFINITY;
        let mut best_k = 0usize;
        for k in 0..m {
            let v = eval(TAU * k as f64 / m as f64)?;
            if v > best {
                best = v;
                best_k = k;
            }
        }
        // golden-section refinement on the bracketing interval
        let h = TAU / m as f64;
        let mut a = TAU * best_k as f64 / m as f64 - h;
        let mut b = a + 2.0 * h;
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut x1 = b - phi * (b - a);
        let mut x2 = a + phi * (b - a);
        let mut f1 = eval(x1)?;
        let mut f2 = eval(x2)?;
        let tol = opts.refine_rel_tol * TAU;
        while b - a > tol {
            if f1 < f2 {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + phi * (b - a);
                f2 = eval(x2)?;
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - phi * (b - a);
                f1 = eval(x1)?;
            }
        }
        let mut angle = TAU * best_k as f64 / m as f64;
        for (x, f) in [(x1, f1), (x2, f2)] {
            if f > best {
                best = f;
                angle = x;
            }
        }
        Ok(SupNormResult {
            value: best.exp(),
            log_value: best,
            angle,
            grid_angles: m,
        })
    }

    /// log of the Jensen mean in closed form:
    /// `log C(P, r) = log|a| + alpha*log r + sum m_j * max(0, log(r/|z_j|))`.
    ///
    /// Requires r <= cutoff when a tail is present (tail factors are then 1).
    pub fn log_jensen_mean_closed(&self, r: f64) -> Result<f64> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(CoreError::InvalidArgument(format!(
                "jensen mean radius must be positive, got {r}"
            )));
        }
        if let Some(t) = self.tail_nonempty() {
            if r > t.cutoff {
                return Err(CoreError::TailTooClose {
                    radius: r,
                    limit: t.cutoff,
                });
            }
        }
        let mut acc = self.leading_coeff.norm().ln() + self.origin_order as f64 * r.ln();
        for z in &self.zeros {
            let ratio = r / z.position.norm();
            if ratio > 1.0 {
                acc += z.multiplicity as f64 * ratio.ln();
            }
        }
        Ok(acc)
    }

    /// `C(P, r) = |a| r^alpha prod max(1, r/|z_j|)`, the exponential of the
    /// circle average of log|P|.
    pub fn jensen_mean_closed(&self, r: f64) -> Result<f64> {
        Ok(self.log_jensen_mean_closed(r)?.exp())
    }

    /// Jensen mean by trapezoidal quadrature of log|P| over the circle,
    /// with node doubling until two successive averages differ by < tol.
    pub fn jensen_mean_quadrature(&self, r: f64, tol: f64) -> Result<JensenQuadrature> {
        self.jensen_mean_quadrature_with(r, tol, &QuadratureOptions::default())
    }

    pub fn jensen_mean_quadrature_with(
        &self,
        r: f64,
        tol: f64,
        opts: &QuadratureOptions,
    ) -> Result<JensenQuadrature> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(CoreError::InvalidArgument(format!(
                "quadrature radius must be positive, got {r}"
            )));
        }
        if !(tol > 0.0) {
            return Err(CoreError::InvalidArgument(format!(
                "quadrature tol must be positive, got {tol}"
            )));
        }
        if let Some(t) = self.tail_nonempty() {
            if r > t.cutoff / 2.0 {
                return Err(CoreError::TailTooClose {
                    radius: r,
                    limit: t.cutoff / 2.0,
                });
            }
        }
        // nudge the radius outward if a zero sits essentially on the circle
        let mut r_eff = r;
        let mut perturbed = None;
        if self
            .zeros
            .iter()
            .any(|z| ((z.position.norm() - r).abs() / r) < PERTURB_REL)
        {
            r_eff = r * (1.0 + PERTURB_REL);
            perturbed = Some(r_eff);
        }
        // closed-form deflation of near-circle zeros; the rest is smooth
        let mut deflated = 0.0;
        let mut active: Vec<Zero> = Vec::with_capacity(self.zeros.len());
        for z in &self.zeros {
            let zr = z.position.norm();
            if ((zr - r_eff).abs() / r_eff) < DEFLATE_REL {
                let ratio = r_eff / zr;
                if ratio > 1.0 {
                    deflated += z.multiplicity as f64 * ratio.ln();
                }
            } else {
                active.push(*z);
            }
        }
        let base = self.leading_coeff.norm().ln() + self.origin_order as f64 * r_eff.ln();

        let node_value = |t: f64| -> Result<f64> {
            let z = Complex64::from_polar(r_eff, t);
            let mut acc = 0.0;
            for zero in &active {
                let w = Complex64::new(1.0, 0.0) - z / zero.position;
                acc += zero.multiplicity as f64 * 0.5 * w.norm_sqr().ln();
            }
            if let Some(tail) = self.tail_nonempty() {
                acc += tail.log_abs_contribution(z)?;
            }
            Ok(acc)
        };

        let mut m = opts.initial_nodes.max(16);
        let mut sum = 0.0;
        for k in 0..m {
            sum += node_value(TAU * k as f64 / m as f64)?;
        }
        let mut avg = sum / m as f64;
        loop {
            if 2 * m > opts.max_nodes {
                return Err(CoreError::NoConvergence {
                    tol,
                    max_nodes: opts.max_nodes,
                });
            }
            // doubling nests: add the odd nodes of the finer grid
            let mut odd_sum = 0.0;
            for k in 0..m {
                odd_sum += node_value(TAU * (2 * k + 1) as f64 / (2 * m) as f64)?;
            }
            let next = (sum + odd_sum) / (2 * m) as f64;
            let done = (next - avg).abs() < tol;
            sum += odd_sum;
            m *= 2;
            avg = next;
            if done {
                break;
            }
        }
        let log_mean = base + deflated + avg;
        Ok(JensenQuadrature {
            value: log_mean.exp(),
            log_mean,
            nodes: m,
            perturbed_radius: perturbed,
        })
    }

    /// `eta(P, r)`: number of zeros with 0 < |z| <= r, with multiplicity.
    /// Origin zeros are excluded by the strict lower bound.
    pub fn zero_count(&self, r: f64) -> u64 {
        let explicit: u64 = self
            .zeros
            .iter()
            .filter(|z| z.position.norm() <= r)
            .map(|z| z.multiplicity as u64)
            .sum();
        explicit
            + self
                .tail_nonempty()
                .map(|t| t.count(r))
                .unwrap_or(0)
    }

    /// `sum_{|z_j| >= r} m_j / z_j`, explicit part exact, tail in closed form.
    pub fn tail_reciprocal_sum(&self, r: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for z in &self.zeros {
            if z.position.norm() >= r {
                acc += z.multiplicity as f64 / z.position;
            }
        }
        if let Some(t) = self.tail_nonempty() {
            acc += t.reciprocal_sum(r);
        }
        acc
    }

    /// Absolute variant: `sum_{|z_j| >= r} m_j / |z_j|`.
    pub fn abs_tail_reciprocal_sum(&self, r: f64) -> f64 {
        let mut acc = 0.0;
        for z in &self.zeros {
            let zr = z.position.norm();
            if zr >= r {
                acc += z.multiplicity as f64 / zr;
            }
        }
        if let Some(t) = self.tail_nonempty() {
            acc += t.abs_reciprocal_sum(r);
        }
        acc
    }

    /// Split `P = Q * H` at radius r: Q keeps the coefficient, origin order,
    /// and zeros with |z_j| <= r; H gets the rest (and the tail).
    pub fn split_at(&self, r: f64) -> Result<(GenusZeroFunction, GenusZeroFunction)> {
        if let Some(t) = self.tail_nonempty() {
            if r >= t.cutoff {
                return Err(CoreError::InvalidArgument(format!(
                    "split radius {r} must lie below the tail cutoff {}",
                    t.cutoff
                )));
            }
        }
        let (inner, outer): (Vec<Zero>, Vec<Zero>) = self
            .zeros
            .iter()
            .partition(|z| z.position.norm() <= r);
        let q = GenusZeroFunction::new(self.leading_coeff, self.origin_order, inner, None)?;
        let h = GenusZeroFunction::new(Complex64::new(1.0, 0.0), 0, outer, self.tail.clone())?;
        Ok((q, h))
    }
}

fn next_after_one() -> f64 {
    // smallest f64 strictly above 1
    f64::from_bits(1.0f64.to_bits() + 1)
}

/// Finite-window surrogate for the growth order
/// `rho = limsup n log n / log(1/|a_n|)`:
/// the maximum of that expression over the upper half of the provided
/// indices, skipping zero coefficients and coefficients with |a_n| >= 1.
/// This is an estimate of the limsup, not a limit.
pub fn order_estimate(coeffs: &[Complex64]) -> Result<f64> {
    let nonzero = coeffs.iter().filter(|c| c.norm_sqr() > 0.0).count();
    if nonzero < 8 {
        return Err(CoreError::InsufficientData(format!(
            "order_estimate needs at least 8 nonzero coefficients, got {nonzero}"
        )));
    }
    let top = coeffs.len() - 1;
    let lo = top.div_ceil(2);
    let mut best = 0.0f64;
    for (n, c) in coeffs.iter().enumerate().skip(lo.max(2)) {
        let a = c.norm();
        if a == 0.0 || a >= 1.0 {
            continue;
        }
        let v = (n as f64) * (n as f64).ln() / -a.ln();
        best = best.max(v);
    }
    Ok(best)
}
