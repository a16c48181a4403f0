//! Closed-form scaled limits: Marchenko–Pastur and Wachter global densities,
//! the hard-edge Bessel density, the limiting dip-ramp-plateau curves with
//! their small-k / large-k / near-transition expansions, and the sine-kernel
//! slope approximation.
//!
//! Scaling conventions. With the Laguerre parameter growing as a = αN, the
//! limiting structure function per eigenvalue is
//! `s_inf(k, α) = ∫_{1/(1+k²)}^1 wachter_density(x, α) dx`, which reaches its
//! plateau value 1 at `k_c = sqrt((1-c)/c)`, `c = (α/(2+α))²`. At α = 0 this
//! collapses to (2/π) Arctan k and the plateau recedes to infinity.

use crate::hypergeom::{bessel_j, hyp0f1};
use crate::kernels::{density, KernelSpec};
use crate::orthopoly::PolySystem;
use crate::quadrature::{adaptive, AdaptiveOpts};
use crate::{Error, Result};
use num_complex::Complex64;

/// Derived constants of the a = αN scaling regime.
#[derive(Clone, Copy, Debug)]
pub struct ScalingParams {
    pub alpha: f64,
    /// c = (α/(2+α))², the lower edge of the limiting Jacobi support.
    pub c: f64,
    /// Plateau onset 1/(1+k_c²) = c; `None` at α = 0 where k_c = ∞.
    pub k_c: Option<f64>,
}

impl ScalingParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "scaling rate alpha = {alpha} must be finite and >= 0"
            )));
        }
        let r = alpha / (2.0 + alpha);
        let c = r * r;
        let k_c = if alpha > 0.0 {
            Some(((1.0 - c) / c).sqrt())
        } else {
            None
        };
        Ok(ScalingParams { alpha, c, k_c })
    }
}

/// Marchenko–Pastur density on (c_-², c_+²), c_± = (sqrt(α+1) ± 1)/2.
pub fn mp_density(x: f64, alpha: f64) -> f64 {
    let cp = 0.5 * ((alpha + 1.0).sqrt() + 1.0);
    let cm = 0.5 * ((alpha + 1.0).sqrt() - 1.0);
    let (lo, hi) = (cm * cm, cp * cp);
    if x <= lo || x >= hi {
        return 0.0;
    }
    2.0 / (std::f64::consts::PI * x) * ((hi - x) * (x - lo)).sqrt()
}

/// Wachter global density of the b = 0 Jacobi ensemble on (c, 1); reduces to
/// the arcsine density at α = 0.
pub fn wachter_density(x: f64, alpha: f64) -> f64 {
    let c = {
        let r = alpha / (2.0 + alpha);
        r * r
    };
    if x <= c || x >= 1.0 {
        return 0.0;
    }
    1.0 / (std::f64::consts::PI * (1.0 - c.sqrt())) / x * ((x - c) / (1.0 - x)).sqrt()
}

/// Plateau onset wavenumber k_c for α > 0.
pub fn kc(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "k_c is infinite at alpha = {alpha}; only alpha > 0 has a plateau"
        )));
    }
    Ok(ScalingParams::new(alpha)?.k_c.unwrap())
}

/// Limiting structure function per eigenvalue in the a = αN regime.
/// Continuous, nondecreasing, equal to 1 for k >= k_c.
pub fn s_inf(k: f64, alpha: f64) -> f64 {
    let k = k.abs();
    if k == 0.0 {
        return 0.0;
    }
    if alpha == 0.0 {
        return 2.0 / std::f64::consts::PI * k.atan();
    }
    let sp = ScalingParams::new(alpha).expect("alpha validated above");
    let c = sp.c;
    let d = 1.0 / (1.0 + k * k);
    // below d - c ~ 1e-11 the closed form is dominated by sqrt-of-rounding
    // noise while the true residual 1 - s is under 1e-16
    if d - c <= 1e-11 {
        return 1.0;
    }
    // rounding can push the ratio arguments just past their endpoints
    let arct = ((c * (1.0 - d)) / (d - c)).max(0.0).sqrt().atan();
    let arcs = ((1.0 - d) / (1.0 - c)).clamp(0.0, 1.0).sqrt().asin();
    2.0 / (std::f64::consts::PI * (1.0 - c.sqrt())) * (-c.sqrt() * arct + arcs)
}

/// Expansion regimes of [`s_inf`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    SmallK,
    LargeK,
    NearKc,
}

/// Leading expansions of the limiting structure function. `LargeK` applies
/// only at α = 0 (no plateau); `NearKc` only at α > 0.
pub fn s_inf_expansion(k: f64, alpha: f64, regime: Regime) -> Result<f64> {
    use std::f64::consts::PI;
    match regime {
        Regime::SmallK => {
            if alpha == 0.0 {
                Ok(2.0 * k / PI - 2.0 * k * k * k / (3.0 * PI))
            } else {
                Ok(2.0 * (1.0 + alpha).sqrt() / PI * k)
            }
        }
        Regime::LargeK => {
            if alpha != 0.0 {
                return Err(Error::InvalidParameter(
                    "the large-k expansion applies at alpha = 0 only; use NearKc".into(),
                ));
            }
            Ok(1.0 - 2.0 / (PI * k) + 2.0 / (3.0 * PI * k * k * k))
        }
        Regime::NearKc => {
            if alpha <= 0.0 {
                return Err(Error::InvalidParameter(
                    "the plateau transition exists for alpha > 0 only".into(),
                ));
            }
            let sp = ScalingParams::new(alpha)?;
            let c = sp.c;
            let k_c = sp.k_c.unwrap();
            let x = ((k_c * k_c - k * k) / ((1.0 + k * k) * (1.0 + k_c * k_c))).max(0.0);
            Ok(1.0
                - 2.0 / (3.0 * PI * (1.0 - c.sqrt())) / (c * (1.0 - c).sqrt())
                    * x.powf(1.5))
        }
    }
}

/// Hard-edge scaled density (unitary symmetry, parameter 0):
/// ρ(x) = (J0(√x)² + J1(√x)²)/4.
pub fn hard_edge_density(x: f64) -> f64 {
    assert!(x >= 0.0);
    let v = x.sqrt();
    let j0 = bessel_j(0, v);
    let j1 = bessel_j(1, v);
    0.25 * (j0 * j0 + j1 * j1)
}

/// d/dx of [`hard_edge_density`]: -J1(√x)²/(4x).
pub fn hard_edge_density_deriv(x: f64) -> f64 {
    assert!(x > 0.0);
    let j1 = bessel_j(1, x.sqrt());
    -j1 * j1 / (4.0 * x)
}

/// Global-scaling limit of the structure function: ∫_0^{k²} ρ_hard(x) dx,
/// which grows like k/π (the ramp).
pub fn s_global_inf(k: f64) -> f64 {
    let k = k.abs();
    if k == 0.0 {
        return 0.0;
    }
    // substitute x = v²: ∫_0^k (v/2)(J0(v)² + J1(v)²) dv, uniform oscillation
    let depth = ((k / 2.0).max(2.0).log2().ceil() as u32 + 4).clamp(4, 12);
    adaptive(
        |v: f64| {
            let j0 = bessel_j(0, v);
            let j1 = bessel_j(1, v);
            0.5 * v * (j0 * j0 + j1 * j1)
        },
        0.0,
        k,
        AdaptiveOpts {
            rel_tol: 1e-11,
            abs_tol: 1e-15,
            min_depth: depth,
            ..Default::default()
        },
    )
    .expect("finite interval, smooth integrand")
    .value
}

/// Limiting scaled mean of the exponential-weighted first-moment statistic:
/// ((1+α)/4) e^{(s/2)(1+α/2)} 0F1(2; (1+α)(s/4)²).
///
/// Equals both the Marchenko–Pastur integral (2/π)∫ e^{sx} sqrt((c₊²-x)(x-c₋²)) dx
/// and the N → ∞ limit of the finite-N density transform at wavenumber s/(4N).
pub fn global_mean_0f1(s: f64, alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha = {alpha} must be >= 0"
        )));
    }
    let q = (1.0 + alpha) * (s / 4.0) * (s / 4.0);
    Ok((1.0 + alpha) / 4.0 * ((s / 2.0) * (1.0 + alpha / 2.0)).exp() * hyp0f1(2.0, q)?)
}

/// Leading asymptotic of the mean of the exponential statistic.
///
/// At α = 0 the hard edge dominates and the full complex amplitude
/// sqrt(N/(iπk)) is returned. At α > 0 both soft edges contribute
/// oscillatory terms whose constant prefactors have no closed form here;
/// only the positive envelope N^{-1/2} k^{-3/2} is returned, with the two
/// rapid phases available from [`dip_phases`]. Asymptotic: no error bound.
pub fn dip_amplitude(n: usize, k: f64, alpha: f64) -> Result<Complex64> {
    if !(k > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "stationary-phase regime needs k > 0, got {k}"
        )));
    }
    if alpha == 0.0 {
        let z = Complex64::new(n as f64, 0.0)
            / (Complex64::new(0.0, 1.0) * std::f64::consts::PI * k);
        Ok(z.sqrt())
    } else {
        Ok(Complex64::new(
            1.0 / (n as f64).sqrt() / k.powf(1.5),
            0.0,
        ))
    }
}

/// The two rapid phases 4Nk c_±² carried by the α > 0 edge contributions.
pub fn dip_phases(n: usize, k: f64, alpha: f64) -> (f64, f64) {
    let cp = 0.5 * ((alpha + 1.0).sqrt() + 1.0);
    let cm = 0.5 * ((alpha + 1.0).sqrt() - 1.0);
    let base = 4.0 * n as f64 * k;
    (base * cp * cp, base * cm * cm)
}

/// Sine-kernel approximation to the slope of the scaled structure function
/// at α = 0: (2/π)/(1+k²), in exact agreement with d/dk s_inf(k, 0).
pub fn sine_kernel_slope(k: f64) -> f64 {
    2.0 / std::f64::consts::PI / (1.0 + k * k)
}

/// Hard-edge convergence-rate probe for the b ≠ 0 Jacobi ensemble: returns
/// the finite-N residual of the scaled density against ρ_hard, and the
/// first-order prediction (b/N) x ρ_hard'(x).
pub fn hard_edge_rate_check(n: usize, x: f64, b: f64) -> Result<(f64, f64)> {
    if n < 10 {
        return Err(Error::InvalidParameter(format!(
            "rate check needs N >= 10, got {n}"
        )));
    }
    if !(x > 0.0 && x < 50.0) {
        return Err(Error::InvalidParameter(format!(
            "rate check domain is 0 < x < 50, got {x}"
        )));
    }
    let sys = PolySystem::jacobi(0.0, b)?;
    let ks = KernelSpec::new(sys, n)?;
    let scale = 4.0 * (n as f64) * (n as f64);
    let residual = density(&ks, x / scale) / scale - hard_edge_density(x);
    let predicted = b / (n as f64) * x * hard_edge_density_deriv(x);
    Ok((residual, predicted))
}
