//! Indexed families (P_n, k_n) with known asymptotics, and finite-window
//! surrogates for the sequence quantities C_0, C_0*, and eta(R).
//!
//! A family is a deterministic generator n -> (P_n, k_n) over a finite
//! horizon N. Limsup/liminf statements are approximated by the max/min over
//! the trailing window [ceil(N/2), N] together with a least-squares trend
//! slope of the statistic against 1/n, so divergence stays visible.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::genus_zero::{GenusZeroFunction, SupNormOptions, Zero};

/// Built-in family descriptors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyKind {
    /// P_n(z) = (1 - z/n)^n with k_n = n.
    Binomial,
    /// P_n(z) = (1 + z)^{floor(gamma n)}; k_n = n for gamma <= 1, otherwise
    /// k_n = ceil(gamma) * n so that k_n >= d*(P_n) always holds. The
    /// family reports its effective exponent m_n / k_n.
    RayGrowth { gamma: f64 },
    /// P_n with the n Chebyshev nodes of [-length/2, length/2] as zeros,
    /// normalized to sup 1 on that segment; k_n = n.
    ChebyshevOnSegment { length: f64 },
    /// P_n(z) = prod_{j=1..n} (1 - z / (scale j^exponent)), exponent > 1;
    /// k_n = max(d*(P_n), 1).
    PowerLawZeros { scale: f64, exponent: f64 },
    /// n zeros drawn uniformly from the disk of the given radius;
    /// k_n = d*(P_n). Fully determined by the seed.
    RandomDiskZeros { radius: f64, seed: u64 },
    /// P_n = exp(-rate n^2), a pure coefficient family with k_n = n, so
    /// C(P_n,1)^{1/k_n} = exp(-rate n) -> 0.
    CoeffDecay { rate: f64 },
}

/// A family over a finite horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSequence {
    name: String,
    kind: FamilyKind,
    horizon: usize,
}

/// Window statistic standing in for a limsup or liminf: the max (or min)
/// over the trailing window, where it was attained, and the least-squares
/// slope of the statistic against 1/n over the window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurrogateStat {
    pub value: f64,
    pub attained_at: usize,
    pub trend_slope: f64,
    pub window: (usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileRow {
    pub n: usize,
    pub weight: f64,
    pub radius: f64,
    pub value: f64,
}

/// Rows of ||P_n||_R^{1/k_n} over (window index) x (radius grid).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileTable {
    pub rows: Vec<ProfileRow>,
}

impl FunctionSequence {
    /// Build a family and validate the standing assumption k_n >= d*(P_n)
    /// for every n <= horizon.
    pub fn make(kind: FamilyKind, horizon: usize, name: impl Into<String>) -> Result<Self> {
        if horizon == 0 {
            return Err(CoreError::InvalidDescriptor {
                field: "horizon",
                message: "horizon must be at least 1".into(),
            });
        }
        match &kind {
            FamilyKind::Binomial => {}
            FamilyKind::RayGrowth { gamma } => {
                if !(*gamma > 0.0 && gamma.is_finite()) {
                    return Err(CoreError::InvalidDescriptor {
                        field: "gamma",
                        message: format!("gamma must be positive, got {gamma}"),
                    });
                }
            }
            FamilyKind::ChebyshevOnSegment { length } => {
                if !(*length > 0.0 && length.is_finite()) {
                    return Err(CoreError::InvalidDescriptor {
                        field: "length",
                        message: format!("segment length must be positive, got {length}"),
                    });
                }
            }
            FamilyKind::PowerLawZeros { scale, exponent } => {
                if !(*scale > 0.0 && scale.is_finite()) {
                    return Err(CoreError::InvalidDescriptor {
                        field: "scale",
                        message: format!("scale must be positive, got {scale}"),
                    });
                }
                if !(*exponent > 1.0 && exponent.is_finite()) {
                    return Err(CoreError::InvalidDescriptor {
                        field: "exponent",
                        message: format!("exponent must exceed 1, got {exponent}"),
                    });
                }
            }
            FamilyKind::RandomDiskZeros { radius, .. } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(CoreError::InvalidDescriptor {
                        field: "radius",
                        message: format!("disk radius must be positive, got {radius}"),
                    });
                }
            }
            FamilyKind::CoeffDecay { rate } => {
                if !(*rate > 0.0 && rate.is_finite()) {
                    return Err(CoreError::InvalidDescriptor {
                        field: "rate",
                        message: format!("decay rate must be positive, got {rate}"),
                    });
                }
                // exp(-rate n^2) must stay representable in f64
                if rate * (horizon as f64).powi(2) > 700.0 {
                    return Err(CoreError::InvalidDescriptor {
                        field: "horizon",
                        message: format!(
                            "exp(-rate n^2) underflows f64 at n = {horizon}; \
                             keep rate * horizon^2 <= 700"
                        ),
                    });
                }
            }
        }
        let seq = FunctionSequence {
            name: name.into(),
            kind,
            horizon,
        };
        for n in 1..=horizon {
            let d = seq.member(n)?.d_star();
            let k = seq.weight(n);
            if k < d - 1e-9 {
                return Err(CoreError::InvalidDescriptor {
                    field: "kind",
                    message: format!(
                        "weight invariant violated at n = {n}: k_n = {k} < d* = {d}"
                    ),
                });
            }
        }
        Ok(seq)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// The trailing window [ceil(N/2), N] used by all surrogates.
    pub fn window(&self) -> (usize, usize) {
        (self.horizon.div_ceil(2), self.horizon)
    }

    /// The n-th member P_n.
    pub fn member(&self, n: usize) -> Result<GenusZeroFunction> {
        assert!(n >= 1 && n <= self.horizon, "index {n} outside horizon");
        let one = Complex64::new(1.0, 0.0);
        match &self.kind {
            FamilyKind::Binomial => GenusZeroFunction::new(
                one,
                0,
                vec![Zero::new(Complex64::new(n as f64, 0.0), n as u32)],
                None,
            ),
            FamilyKind::RayGrowth { gamma } => {
                let m = (gamma * n as f64).floor() as u32;
                let zeros = if m == 0 {
                    vec![]
                } else {
                    vec![Zero::new(Complex64::new(-1.0, 0.0), m)]
                };
                GenusZeroFunction::new(one, 0, zeros, None)
            }
            FamilyKind::ChebyshevOnSegment { length } => chebyshev_member(n, *length),
            FamilyKind::PowerLawZeros { scale, exponent } => {
                let zeros: Vec<Zero> = (1..=n)
                    .map(|j| {
                        Zero::simple(Complex64::new(scale * (j as f64).powf(*exponent), 0.0))
                    })
                    .collect();
                GenusZeroFunction::new(one, 0, zeros, None)
            }
            FamilyKind::RandomDiskZeros { radius, seed } => {
                let zeros = random_disk_zeros(n, *radius, *seed);
                GenusZeroFunction::new(one, 0, zeros, None)
            }
            FamilyKind::CoeffDecay { rate } => {
                let a = (-rate * (n as f64).powi(2)).exp();
                GenusZeroFunction::constant(Complex64::new(a, 0.0))
            }
        }
    }

    /// The weight k_n.
    pub fn weight(&self, n: usize) -> f64 {
        match &self.kind {
            FamilyKind::Binomial | FamilyKind::CoeffDecay { .. } => n as f64,
            FamilyKind::RayGrowth { gamma } => {
                if *gamma <= 1.0 {
                    n as f64
                } else {
                    gamma.ceil() * n as f64
                }
            }
            FamilyKind::ChebyshevOnSegment { .. } => n as f64,
            FamilyKind::PowerLawZeros { .. } | FamilyKind::RandomDiskZeros { .. } => {
                let d = self
                    .member(n)
                    .expect("validated member")
                    .d_star();
                match self.kind {
                    FamilyKind::PowerLawZeros { .. } => d.max(1.0),
                    _ => d,
                }
            }
        }
    }

    /// For ray_growth: the largest m_n / k_n over the window. `None` for
    /// other families.
    pub fn effective_exponent(&self) -> Option<f64> {
        match &self.kind {
            FamilyKind::RayGrowth { gamma } => {
                let (lo, hi) = self.window();
                let mut best = 0.0f64;
                for n in lo..=hi {
                    let m = (gamma * n as f64).floor();
                    best = best.max(m / self.weight(n));
                }
                Some(best)
            }
            _ => None,
        }
    }
}

/// Zeros of the sup-normalized Chebyshev polynomial of degree n on
/// [-length/2, length/2]. Zeros at the origin (odd n) fold into the origin
/// order; the leading coefficient keeps sup = 1 on the segment.
fn chebyshev_member(n: usize, length: f64) -> Result<GenusZeroFunction> {
    let half = length / 2.0;
    let quarter = length / 4.0;
    let mut zeros = Vec::with_capacity(n);
    let mut alpha = 0u32;
    // a = prod_{x_j != 0} (-x_j) / (2 (L/4)^n), accumulated in a balanced
    // form to avoid overflow: each factor is (-x_j) / (L/4).
    let mut coeff = 1.0f64;
    for j in 1..=n {
        let x = half * ((2 * j - 1) as f64 * std::f64::consts::PI / (2 * n as f64)).cos();
        if x.abs() < 1e-12 * length {
            alpha += 1;
            coeff /= quarter;
        } else {
            zeros.push(Zero::simple(Complex64::new(x, 0.0)));
            coeff *= -x / quarter;
        }
    }
    coeff /= 2.0;
    GenusZeroFunction::new(Complex64::new(coeff, 0.0), alpha, zeros, None)
}

fn random_disk_zeros(n: usize, radius: f64, seed: u64) -> Vec<Zero> {
    // per-index stream so that members are independent of one another
    let mixed = seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut rng = ChaCha8Rng::seed_from_u64(mixed);
    let mut zeros = Vec::with_capacity(n);
    while zeros.len() < n {
        let r = radius * rng.gen::<f64>().sqrt();
        let t = std::f64::consts::TAU * rng.gen::<f64>();
        if r < 1e-9 * radius {
            continue;
        }
        zeros.push(Zero::simple(Complex64::from_polar(r, t)));
    }
    zeros
}

fn window_stat<F>(seq: &FunctionSequence, take_max: bool, mut stat: F) -> Result<SurrogateStat>
where
    F: FnMut(&FunctionSequence, usize) -> Result<f64>,
{
    let (lo, hi) = seq.window();
    let mut best = if take_max {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    };
    let mut attained = lo;
    let mut xs = Vec::with_capacity(hi - lo + 1);
    let mut ys = Vec::with_capacity(hi - lo + 1);
    for n in lo..=hi {
        let v = stat(seq, n)?;
        if (take_max && v > best) || (!take_max && v < best) {
            best = v;
            attained = n;
        }
        xs.push(1.0 / n as f64);
        ys.push(v);
    }
    Ok(SurrogateStat {
        value: best,
        attained_at: attained,
        trend_slope: least_squares_slope(&xs, &ys),
        window: (lo, hi),
    })
}

pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return 0.0;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        var += (x - mx) * (x - mx);
    }
    if var == 0.0 {
        0.0
    } else {
        cov / var
    }
}

/// C_0 surrogate: max over the window of C(P_n, 1)^{1/k_n}.
pub fn estimate_c0(seq: &FunctionSequence) -> Result<SurrogateStat> {
    window_stat(seq, true, |s, n| {
        Ok((s.member(n)?.log_jensen_mean_closed(1.0)? / s.weight(n)).exp())
    })
}

/// C_0* surrogate: min over the window of C(P_n, 1)^{1/k_n}.
pub fn estimate_c0_star(seq: &FunctionSequence) -> Result<SurrogateStat> {
    window_stat(seq, false, |s, n| {
        Ok((s.member(n)?.log_jensen_mean_closed(1.0)? / s.weight(n)).exp())
    })
}

/// eta(R) surrogate: max over the window of eta(P_n, R) / k_n.
pub fn estimate_eta_r(seq: &FunctionSequence, r: f64) -> Result<SurrogateStat> {
    window_stat(seq, true, |s, n| {
        Ok(s.member(n)?.zero_count(r) as f64 / s.weight(n))
    })
}

/// Table of ||P_n||_R^{1/k_n} over the window and the radius grid.
pub fn growth_profile(
    seq: &FunctionSequence,
    r_grid: &[f64],
    sup: &SupNormOptions,
) -> Result<ProfileTable> {
    let (lo, hi) = seq.window();
    let mut rows = Vec::with_capacity((hi - lo + 1) * r_grid.len());
    for n in lo..=hi {
        let p = seq.member(n)?;
        let k = seq.weight(n);
        for &r in r_grid {
            let log_sup = p.log_sup_norm(r, sup)?;
            rows.push(ProfileRow {
                n,
                weight: k,
                radius: r,
                value: (log_sup / k).exp(),
            });
        }
    }
    Ok(ProfileTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn binomial_member_shape() {
        let seq = FunctionSequence::make(FamilyKind::Binomial, 8, "binomial").unwrap();
        let p = seq.member(4).unwrap();
        assert_eq!(p.zeros().len(), 1);
        assert_eq!(p.zeros()[0].multiplicity, 4);
        assert_eq!(p.zeros()[0].position.re, 4.0);
        assert_eq!(seq.weight(4), 4.0);
        assert_relative_eq!(p.d_star(), 1.0);
    }

    #[test]
    fn ray_growth_adjusts_weights_above_one() {
        let seq =
            FunctionSequence::make(FamilyKind::RayGrowth { gamma: 2.0 }, 8, "ray2").unwrap();
        let p = seq.member(3).unwrap();
        assert_eq!(p.zeros()[0].multiplicity, 6);
        assert_eq!(seq.weight(3), 6.0); // ceil(2) * 3
        assert!(p.d_star() <= seq.weight(3));
        assert_relative_eq!(seq.effective_exponent().unwrap(), 1.0);
    }

    #[test]
    fn ray_growth_fractional_gamma() {
        let seq =
            FunctionSequence::make(FamilyKind::RayGrowth { gamma: 0.5 }, 16, "ray.5").unwrap();
        assert_eq!(seq.weight(7), 7.0);
        assert_eq!(seq.member(7).unwrap().zeros()[0].multiplicity, 3);
        let eff = seq.effective_exponent().unwrap();
        assert!(eff <= 0.5 && eff > 0.4, "effective exponent {eff}");
    }

    #[test]
    fn chebyshev_zeros_and_sup_normalization() {
        let seq = FunctionSequence::make(
            FamilyKind::ChebyshevOnSegment { length: 4.0 },
            8,
            "cheb4",
        )
        .unwrap();
        let p = seq.member(2).unwrap();
        let mut xs: Vec<f64> = p.zeros().iter().map(|z| z.position.re).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_relative_eq!(xs[0], -(2f64.sqrt()), epsilon = 1e-12);
        assert_relative_eq!(xs[1], 2f64.sqrt(), epsilon = 1e-12);

        // brute-force sup over the segment on a 10^4 grid
        for n in [2usize, 5, 8] {
            let p = seq.member(n).unwrap();
            let mut sup = 0.0f64;
            for i in 0..=10_000 {
                let x = -2.0 + 4.0 * i as f64 / 10_000.0;
                let v = p
                    .log_abs_eval(Complex64::new(x, 0.0))
                    .unwrap()
                    .exp();
                sup = sup.max(v);
            }
            assert_relative_eq!(sup, 1.0, max_relative = 1e-6);
        }
    }

    #[test]
    fn chebyshev_odd_degree_origin_zero() {
        let seq = FunctionSequence::make(
            FamilyKind::ChebyshevOnSegment { length: 4.0 },
            5,
            "cheb",
        )
        .unwrap();
        let p = seq.member(5).unwrap();
        assert_eq!(p.origin_order(), 1);
        assert_eq!(p.zeros().len(), 4);
    }

    #[test]
    fn c0_surrogates() {
        let binom = FunctionSequence::make(FamilyKind::Binomial, 64, "binomial").unwrap();
        let c0 = estimate_c0(&binom).unwrap();
        assert_relative_eq!(c0.value, 1.0);
        assert_eq!(c0.window, (32, 64));

        let ray = FunctionSequence::make(FamilyKind::RayGrowth { gamma: 2.0 }, 64, "ray").unwrap();
        assert_relative_eq!(estimate_c0(&ray).unwrap().value, 1.0);
        assert_relative_eq!(estimate_c0_star(&ray).unwrap().value, 1.0);

        // chebyshev window values from the closed form; the window max sits
        // at n = 64 and the min at n = 32 (oracle values recomputed below)
        let cheb = FunctionSequence::make(
            FamilyKind::ChebyshevOnSegment { length: 4.0 },
            64,
            "cheb",
        )
        .unwrap();
        let c0 = estimate_c0(&cheb).unwrap();
        let c0s = estimate_c0_star(&cheb).unwrap();
        assert!(c0.value >= c0s.value);
        // oracle: C(P_n,1) = prod_{|x_j|>=1} |x_j| / 2 for L = 4
        let oracle = |n: usize| -> f64 {
            let mut acc = -(2f64.ln());
            for j in 1..=n {
                let x = 2.0 * ((2 * j - 1) as f64 * std::f64::consts::PI / (2.0 * n as f64)).cos();
                if x.abs() >= 1.0 {
                    acc += x.abs().ln();
                }
            }
            (acc / n as f64).exp()
        };
        let mut omax = 0.0f64;
        let mut omin = f64::INFINITY;
        for n in 32..=64 {
            omax = omax.max(oracle(n));
            omin = omin.min(oracle(n));
        }
        assert_relative_eq!(c0.value, omax, epsilon = 1e-12);
        assert_relative_eq!(c0s.value, omin, epsilon = 1e-12);
        assert!(c0.value > 1.35 && c0.value < 1.37, "{}", c0.value);
    }

    #[test]
    fn eta_surrogates() {
        let binom = FunctionSequence::make(FamilyKind::Binomial, 64, "binomial").unwrap();
        assert_eq!(estimate_eta_r(&binom, 10.0).unwrap().value, 0.0);

        let ray = FunctionSequence::make(FamilyKind::RayGrowth { gamma: 2.0 }, 64, "ray").unwrap();
        let eta = estimate_eta_r(&ray, 1.0).unwrap();
        assert_relative_eq!(eta.value, ray.effective_exponent().unwrap());

        let cheb = FunctionSequence::make(
            FamilyKind::ChebyshevOnSegment { length: 4.0 },
            64,
            "cheb",
        )
        .unwrap();
        assert_relative_eq!(estimate_eta_r(&cheb, 2.0).unwrap().value, 1.0);
    }

    #[test]
    fn growth_profile_closed_forms() {
        let binom = FunctionSequence::make(FamilyKind::Binomial, 32, "binomial").unwrap();
        let table = growth_profile(&binom, &[2.0], &SupNormOptions::default()).unwrap();
        let row = table.rows.iter().find(|r| r.n == 32).unwrap();
        assert_relative_eq!(row.value, 1.0625, epsilon = 1e-12);
        // exact identity (1 + R/n) across the window
        for row in &table.rows {
            assert_relative_eq!(row.value, 1.0 + 2.0 / row.n as f64, epsilon = 1e-12);
        }

        let ray = FunctionSequence::make(FamilyKind::RayGrowth { gamma: 1.0 }, 16, "ray").unwrap();
        let table = growth_profile(&ray, &[3.0], &SupNormOptions::default()).unwrap();
        let row = table.rows.iter().find(|r| r.n == 16).unwrap();
        assert_relative_eq!(row.value, 4.0, epsilon = 1e-11);
    }

    #[test]
    fn random_family_is_deterministic() {
        let a = FunctionSequence::make(
            FamilyKind::RandomDiskZeros { radius: 2.0, seed: 7 },
            24,
            "rand",
        )
        .unwrap();
        let b = FunctionSequence::make(
            FamilyKind::RandomDiskZeros { radius: 2.0, seed: 7 },
            24,
            "rand",
        )
        .unwrap();
        for n in 1..=24 {
            assert_eq!(a.member(n).unwrap(), b.member(n).unwrap());
            assert_eq!(a.weight(n), b.weight(n));
        }
        let c = FunctionSequence::make(
            FamilyKind::RandomDiskZeros { radius: 2.0, seed: 8 },
            24,
            "rand",
        )
        .unwrap();
        assert_ne!(a.member(5).unwrap(), c.member(5).unwrap());
    }

    #[test]
    fn invalid_descriptors_name_the_field() {
        let err = FunctionSequence::make(FamilyKind::RayGrowth { gamma: -1.0 }, 8, "x")
            .unwrap_err();
        match err {
            CoreError::InvalidDescriptor { field, .. } => assert_eq!(field, "gamma"),
            other => panic!("unexpected error {other:?}"),
        }
        let err = FunctionSequence::make(
            FamilyKind::PowerLawZeros { scale: 1.0, exponent: 0.9 },
            8,
            "x",
        )
        .unwrap_err();
        match err {
            CoreError::InvalidDescriptor { field, .. } => assert_eq!(field, "exponent"),
            other => panic!("unexpected error {other:?}"),
        }
        // coeff_decay underflow guard
        assert!(FunctionSequence::make(FamilyKind::CoeffDecay { rate: 1.0 }, 64, "x").is_err());
    }

    #[test]
    fn coeff_decay_c0_tends_to_zero() {
        let seq = FunctionSequence::make(FamilyKind::CoeffDecay { rate: 1.0 }, 24, "decay").unwrap();
        let c0 = estimate_c0(&seq).unwrap();
        assert!(c0.value < 1e-4, "{}", c0.value);
        assert!(c0.trend_slope >= 0.0);
    }
}
