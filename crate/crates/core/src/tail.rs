//! Parametric tails: zeros beyond an explicit cutoff radius, described in
//! closed form so that reciprocal sums, counts, and log-modulus
//! contributions can be evaluated without enumerating the tail.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// Sum_{j >= j0} j^{-s} for s > 1, via explicit terms plus Euler-Maclaurin.
///
/// With 24 explicit terms the remainder of the correction series is far
/// below 1e-15 for every s > 1 reachable from a valid tail.
pub(crate) fn zeta_tail(s: f64, j0: u64) -> f64 {
    debug_assert!(s > 1.0, "zeta_tail needs s > 1, got {s}");
    debug_assert!(j0 >= 1);
    const EXPLICIT: u64 = 24;
    let mut sum = 0.0;
    for j in j0..j0 + EXPLICIT {
        sum += (j as f64).powf(-s);
    }
    let a = (j0 + EXPLICIT) as f64;
    sum += a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s) + s * a.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * a.powf(-s - 3.0) / 720.0;
    sum
}

/// The shape of a tail. Zeros are indexed j = start_index, start_index+1, ...
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailKind {
    /// No zeros beyond the cutoff.
    Empty,
    /// Real positive zeros at scale * j^exponent.
    PowerLaw {
        scale: f64,
        exponent: f64,
        start_index: u64,
    },
    /// Conjugate pairs scale * j^exponent * exp(+-i*angle); two zeros per index.
    ConjugatePairPowerLaw {
        scale: f64,
        exponent: f64,
        start_index: u64,
        angle: f64,
    },
}

/// Zeros beyond `cutoff`, described parametrically.
///
/// Invariants (checked by [`TailModel::validate`]): every tail zero has
/// modulus >= cutoff, the exponent exceeds 1 so reciprocal sums converge,
/// and the cutoff strictly exceeds the largest explicit zero of the owning
/// function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailModel {
    pub cutoff: f64,
    #[serde(flatten)]
    pub kind: TailKind,
}

impl TailModel {
    pub fn empty(cutoff: f64) -> Self {
        TailModel {
            cutoff,
            kind: TailKind::Empty,
        }
    }

    pub fn power_law(cutoff: f64, scale: f64, exponent: f64, start_index: u64) -> Self {
        TailModel {
            cutoff,
            kind: TailKind::PowerLaw {
                scale,
                exponent,
                start_index,
            },
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.cutoff.is_finite() && self.cutoff > 0.0) {
            return Err(CoreError::InvalidFunction(format!(
                "tail cutoff must be positive and finite, got {}",
                self.cutoff
            )));
        }
        match self.kind {
            TailKind::Empty => Ok(()),
            TailKind::PowerLaw {
                scale,
                exponent,
                start_index,
            }
            | TailKind::ConjugatePairPowerLaw {
                scale,
                exponent,
                start_index,
                ..
            } => {
                if !(scale.is_finite() && scale > 0.0) {
                    return Err(CoreError::InvalidFunction(format!(
                        "tail scale must be positive, got {scale}"
                    )));
                }
                if !(exponent.is_finite() && exponent > 1.0) {
                    return Err(CoreError::InvalidFunction(format!(
                        "tail exponent must exceed 1 for a summable tail, got {exponent}"
                    )));
                }
                if start_index == 0 {
                    return Err(CoreError::InvalidFunction(
                        "tail start_index must be >= 1".into(),
                    ));
                }
                let first = scale * (start_index as f64).powf(exponent);
                if first < self.cutoff {
                    return Err(CoreError::InvalidFunction(format!(
                        "first tail zero modulus {first} lies inside the cutoff {}",
                        self.cutoff
                    )));
                }
                Ok(())
            }
        }
    }

    fn params(&self) -> Option<(f64, f64, u64, f64, f64)> {
        // (scale, exponent, start_index, zeros-per-index, angle)
        match self.kind {
            TailKind::Empty => None,
            TailKind::PowerLaw {
                scale,
                exponent,
                start_index,
            } => Some((scale, exponent, start_index, 1.0, 0.0)),
            TailKind::ConjugatePairPowerLaw {
                scale,
                exponent,
                start_index,
                angle,
            } => Some((scale, exponent, start_index, 2.0, angle)),
        }
    }

    /// Smallest index j >= start with scale * j^p >= r.
    fn first_index_at_or_beyond(scale: f64, p: f64, start: u64, r: f64) -> u64 {
        if scale * (start as f64).powf(p) >= r {
            return start;
        }
        let mut j = (r / scale).powf(1.0 / p).ceil() as u64;
        j = j.max(start);
        // float-boundary correction
        while j > start && scale * ((j - 1) as f64).powf(p) >= r {
            j -= 1;
        }
        while scale * (j as f64).powf(p) < r {
            j += 1;
        }
        j
    }

    /// Number of tail zeros with modulus <= r (a nondecreasing step function).
    pub fn count(&self, r: f64) -> u64 {
        let Some((scale, p, start, per, _)) = self.params() else {
            return 0;
        };
        if r < scale * (start as f64).powf(p) {
            return 0;
        }
        let mut j = (r / scale).powf(1.0 / p).floor() as u64;
        while scale * ((j + 1) as f64).powf(p) <= r {
            j += 1;
        }
        while j >= start && scale * (j as f64).powf(p) > r {
            j -= 1;
        }
        if j < start {
            0
        } else {
            (j - start + 1) * per as u64
        }
    }

    /// Sum of 1/|z| over tail zeros with |z| >= r. Nonincreasing in r.
    pub fn abs_reciprocal_sum(&self, r: f64) -> f64 {
        let Some((scale, p, start, per, _)) = self.params() else {
            return 0.0;
        };
        let j = Self::first_index_at_or_beyond(scale, p, start, r);
        per * zeta_tail(p, j) / scale
    }

    /// Sum of 1/z over tail zeros with |z| >= r.
    pub fn reciprocal_sum(&self, r: f64) -> Complex64 {
        let Some((scale, p, start, per, angle)) = self.params() else {
            return Complex64::new(0.0, 0.0);
        };
        let j = Self::first_index_at_or_beyond(scale, p, start, r);
        let base = zeta_tail(p, j) / scale;
        if per == 1.0 {
            Complex64::new(base, 0.0)
        } else {
            // 1/z + 1/conj(z) = 2 cos(angle) / |z|
            Complex64::new(2.0 * angle.cos() * base, 0.0)
        }
    }

    /// Sum over all tail zeros of log|1 - z/z_j|, valid for |z| <= cutoff/2.
    ///
    /// Expands log(1-w) = -sum_k w^k / k; with |w| <= 1/2 the truncated
    /// remainder is bounded by a geometric series and the loop stops once
    /// that bound drops below 1e-17 relative.
    pub fn log_abs_contribution(&self, z: Complex64) -> Result<f64> {
        let Some((scale, p, start, per, angle)) = self.params() else {
            return Ok(0.0);
        };
        let z_abs = z.norm();
        if z_abs == 0.0 {
            return Ok(0.0);
        }
        let limit = self.cutoff / 2.0;
        if z_abs > limit {
            return Err(CoreError::TailTooClose {
                radius: z_abs,
                limit,
            });
        }
        let mut acc = 0.0;
        let mut zk = Complex64::new(1.0, 0.0);
        let mut scale_k = 1.0;
        let mut z_abs_k = 1.0;
        for k in 1..=256u32 {
            zk *= z;
            scale_k /= scale;
            z_abs_k *= z_abs;
            let zeta_k = zeta_tail(p * k as f64, start);
            let s_k = if per == 1.0 {
                zeta_k * scale_k
            } else {
                2.0 * (k as f64 * angle).cos() * zeta_k * scale_k
            };
            acc -= (zk * s_k).re / k as f64;
            let abs_k = per * zeta_k * scale_k;
            let bound = z_abs_k * abs_k / k as f64;
            // remaining terms decay at least like (|z|/cutoff)^k <= 2^-k
            if bound < 1e-17 * (1.0 + acc.abs()) {
                break;
            }
        }
        Ok(acc)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.kind, TailKind::Empty)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_tail_matches_brute_force() {
        for &(s, j0) in &[(2.0, 1u64), (2.0, 5), (1.1, 1), (1.1, 13), (3.5, 2)] {
            let mut brute = 0.0;
            let big = 2_000_000u64;
            for j in j0..big {
                brute += (j as f64).powf(-s);
            }
            // integral remainder for the truncation
            brute += (big as f64).powf(1.0 - s) / (s - 1.0);
            let val = zeta_tail(s, j0);
            assert!(
                (val - brute).abs() < 1e-7 * brute.abs().max(1.0),
                "s={s} j0={j0}: {val} vs {brute}"
            );
        }
    }

    #[test]
    fn zeta_tail_basel() {
        let pi = std::f64::consts::PI;
        assert!((zeta_tail(2.0, 1) - pi * pi / 6.0).abs() < 1e-14);
    }

    #[test]
    fn count_steps_and_boundaries() {
        // zeros at j^2 for j >= 3: 9, 16, 25, ...
        let t = TailModel::power_law(9.0, 1.0, 2.0, 3);
        t.validate().unwrap();
        assert_eq!(t.count(8.9), 0);
        assert_eq!(t.count(9.0), 1);
        assert_eq!(t.count(15.9), 1);
        assert_eq!(t.count(16.0), 2);
        assert_eq!(t.count(1e6), 998); // j from 3 to 1000
    }

    #[test]
    fn reciprocal_sums_respect_modulus_bound() {
        let t = TailModel {
            cutoff: 9.0,
            kind: TailKind::ConjugatePairPowerLaw {
                scale: 1.0,
                exponent: 2.0,
                start_index: 3,
                angle: 2.0,
            },
        };
        t.validate().unwrap();
        for &r in &[1.0, 9.0, 20.0, 100.0] {
            let abs = t.abs_reciprocal_sum(r);
            let c = t.reciprocal_sum(r);
            assert!(c.norm() <= abs + 1e-15);
        }
        // nonincreasing in r
        assert!(t.abs_reciprocal_sum(10.0) >= t.abs_reciprocal_sum(50.0));
    }

    #[test]
    fn log_contribution_certified_region() {
        let t = TailModel::power_law(9.0, 1.0, 2.0, 3);
        let err = t
            .log_abs_contribution(Complex64::new(5.0, 0.0))
            .unwrap_err();
        assert!(matches!(err, CoreError::TailTooClose { .. }));

        // brute force at z = -1: sum over j>=3 of log|1 + 1/j^2|
        let mut brute = 0.0;
        for j in 3..2_000_000u64 {
            brute += (1.0 + 1.0 / (j as f64 * j as f64)).ln();
        }
        let got = t.log_abs_contribution(Complex64::new(-1.0, 0.0)).unwrap();
        assert!((got - brute).abs() < 1e-9, "{got} vs {brute}");
    }
}
