//! Terminating and convergent hypergeometric series, plus the Bessel
//! functions J0/J1 needed by the hard-edge limit.
//!
//! The terminating Gauss series Σ_{n=0}^{m} (-m)_n (b)_n / ((c)_n n!) x^n is
//! the workhorse: for the structure-function sums it is evaluated at large
//! negative arguments where the terms alternate and overflow a double, so
//! the evaluation tracks sign and log-magnitude per term, rescales to the
//! largest term, and sums with compensated accumulation. A double-double
//! path is available for the cancellation-heavy regime.

use crate::orthopoly::PolyValue;
use crate::special::{ln_factorial, ln_gamma, ln_pochhammer, Dd};
use crate::{Error, Result};
use num_complex::Complex64;

/// A complex number stored as `value * exp(log_scale)`.
#[derive(Clone, Copy, Debug)]
pub struct ScaledComplex {
    pub value: Complex64,
    pub log_scale: f64,
}

impl ScaledComplex {
    pub const ONE: ScaledComplex = ScaledComplex {
        value: Complex64::new(1.0, 0.0),
        log_scale: 0.0,
    };

    pub fn ln_abs(&self) -> f64 {
        if self.value == Complex64::new(0.0, 0.0) {
            f64::NEG_INFINITY
        } else {
            self.value.norm().ln() + self.log_scale
        }
    }

    pub fn arg(&self) -> f64 {
        self.value.arg()
    }

    /// Collapse to a plain complex number (may overflow to infinity).
    pub fn to_complex(&self) -> Complex64 {
        self.value * self.log_scale.exp()
    }
}

/// Result of a terminating-series evaluation together with its cancellation
/// condition number (sum of term magnitudes over magnitude of the sum).
#[derive(Clone, Copy, Debug)]
pub(crate) struct TerminatingSum {
    pub value: ScaledComplex,
    pub condition: f64,
}

fn check_c_pole(m: usize, c: f64) -> Result<()> {
    if c <= 0.0 && c.fract() == 0.0 && c > -(m as f64) {
        return Err(Error::InvalidParameter(format!(
            "hypergeometric denominator parameter c = {c} hits a pole inside a {m}-term sum"
        )));
    }
    Ok(())
}

/// Terminating Gauss series with sign/log-magnitude term tracking and a
/// two-pass max-rescaled compensated sum. Handles real or complex x.
pub(crate) fn hyp2f1_terminating_scaled(
    m: usize,
    b: f64,
    c: f64,
    x: Complex64,
) -> Result<TerminatingSum> {
    check_c_pole(m, c)?;
    if m == 0 || b == 0.0 || x == Complex64::new(0.0, 0.0) {
        return Ok(TerminatingSum {
            value: ScaledComplex::ONE,
            condition: 1.0,
        });
    }
    let ln_x = x.norm().ln();
    let dir_x = x / x.norm();
    // pass 1: term log-magnitudes and unit directions
    let mut ln_terms = Vec::with_capacity(m + 1);
    let mut dirs = Vec::with_capacity(m + 1);
    let mut ln_t = 0.0f64;
    let mut dir = Complex64::new(1.0, 0.0);
    ln_terms.push(ln_t);
    dirs.push(dir);
    for n in 1..=m {
        let nf = n as f64;
        let num = (nf - 1.0 - m as f64) * (b + nf - 1.0);
        if num == 0.0 {
            break; // (b)_n vanished: every later term is zero
        }
        let den = (c + nf - 1.0) * nf;
        let r = num / den;
        ln_t += r.abs().ln() + ln_x;
        dir *= r.signum() * dir_x;
        if n % 16 == 0 {
            dir /= dir.norm();
        }
        ln_terms.push(ln_t);
        dirs.push(dir);
    }
    // pass 2: rescale to the max term, Kahan per component
    let max_ln = ln_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (mut sr, mut cr) = (0.0f64, 0.0f64);
    let (mut si, mut ci) = (0.0f64, 0.0f64);
    let mut abs_sum = 0.0f64;
    for (ln_t, d) in ln_terms.iter().zip(dirs.iter()) {
        let mag = (ln_t - max_ln).exp();
        abs_sum += mag;
        let tr = mag * d.re;
        let y = tr - cr;
        let t = sr + y;
        cr = (t - sr) - y;
        sr = t;
        let ti = mag * d.im;
        let y = ti - ci;
        let t = si + y;
        ci = (t - si) - y;
        si = t;
    }
    let value = Complex64::new(sr, si);
    let condition = if value.norm() > 0.0 {
        abs_sum / value.norm()
    } else {
        f64::INFINITY
    };
    Ok(TerminatingSum {
        value: ScaledComplex {
            value,
            log_scale: max_ln,
        },
        condition,
    })
}

/// Extended-precision (double-double) evaluation for real argument. The
/// whole cancellation happens in ~32-digit arithmetic with exact power-of-two
/// rescaling, so the result is reliable far beyond the m <= 60 certification
/// of the double path.
pub(crate) fn hyp2f1_terminating_dd(m: usize, b: f64, c: f64, x: f64) -> Result<PolyValue> {
    check_c_pole(m, c)?;
    if m == 0 || b == 0.0 || x == 0.0 {
        return Ok(PolyValue::from_f64(1.0));
    }
    const LIM: f64 = 1e150;
    const SHIFT: i32 = 512;
    let mut term = Dd::from_f64(1.0);
    let mut term_e: i64 = 0;
    let mut sum = Dd::from_f64(1.0);
    let mut sum_e: i64 = 0;
    for n in 1..=m {
        let nf = n as f64;
        // each recurrence factor enters the double-double product exactly:
        // rounding b+n-1 in plain f64 perturbs the parameter by ~1 ulp, which
        // the cancellation condition then amplifies
        let b_shift = Dd::from_sum(b, nf - 1.0);
        if b_shift.hi == 0.0 && b_shift.lo == 0.0 {
            break;
        }
        term = term
            .mul_f64(nf - 1.0 - m as f64)
            .mul(b_shift)
            .div(Dd::from_sum(c, nf - 1.0))
            .div_f64(nf)
            .mul_f64(x);
        while term.abs_hi() > LIM {
            term = term.ldexp(-SHIFT);
            term_e += SHIFT as i64;
        }
        while term.abs_hi() != 0.0 && term.abs_hi() < 1.0 / LIM {
            term = term.ldexp(SHIFT);
            term_e -= SHIFT as i64;
        }
        // align exponents before accumulating
        let common = term_e.max(sum_e);
        let ds = sum_e - common;
        let dt = term_e - common;
        let sum_aligned = if ds < -1060 { Dd::ZERO } else { sum.ldexp(ds as i32) };
        let term_aligned = if dt < -1060 { Dd::ZERO } else { term.ldexp(dt as i32) };
        sum = sum_aligned.add(term_aligned);
        sum_e = common;
        while sum.abs_hi() > LIM {
            sum = sum.ldexp(-SHIFT);
            sum_e += SHIFT as i64;
        }
    }
    Ok(PolyValue::new(
        sum.to_f64(),
        sum_e as f64 * std::f64::consts::LN_2,
    ))
}

/// Terminating Gauss hypergeometric sum 2F1(-m, b, c; x) for real argument,
/// collapsed to f64 (overflows to infinity when the value exceeds the double
/// range; use the scaled interfaces in that regime).
pub fn hyp2f1_terminating(m: usize, b: f64, c: f64, x: f64) -> Result<f64> {
    let t = hyp2f1_terminating_scaled(m, b, c, Complex64::new(x, 0.0))?;
    Ok(t.value.to_complex().re)
}

/// Confluent limit series 0F1(c; x) = Σ x^n / ((c)_n n!).
pub fn hyp0f1(c: f64, x: f64) -> Result<f64> {
    if c <= 0.0 && c.fract() == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "0F1 parameter c = {c} is a non-positive integer"
        )));
    }
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    for n in 0..10_000 {
        let nf = n as f64;
        term *= x / ((c + nf) * (nf + 1.0));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence(format!("0F1({c}; {x})")))
}

/// Bessel function J0 or J1 for x >= 0: power series below the crossover,
/// Hankel amplitude/phase asymptotics above. Absolute accuracy ~1e-13.
///
/// The crossover sits at x = 12: the optimally-truncated amplitude/phase
/// series bottoms out near 5e-8 at x = 7 and only reaches the target
/// accuracy beyond x ≈ 11, while the power series holds to ~4e-13 up to
/// x = 12 (cancellation grows like e^x).
pub fn bessel_j(order: u8, x: f64) -> f64 {
    assert!(order <= 1, "only orders 0 and 1 are supported");
    assert!(x >= 0.0, "bessel_j requires x >= 0");
    const CROSSOVER: f64 = 12.5;
    if x <= CROSSOVER {
        bessel_series(order, x)
    } else {
        bessel_asymptotic(order, x)
    }
}

fn bessel_series(order: u8, x: f64) -> f64 {
    let nu = order as f64;
    let q = 0.25 * x * x;
    let mut term = if order == 0 { 1.0 } else { 0.5 * x };
    let mut sum = term;
    for m in 1..60 {
        let mf = m as f64;
        term *= -q / (mf * (mf + nu));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-30) {
            break;
        }
    }
    sum
}

fn bessel_asymptotic(order: u8, x: f64) -> f64 {
    let mu = 4.0 * (order as f64) * (order as f64);
    let chi = x - (0.5 * order as f64 + 0.25) * std::f64::consts::PI;
    let mut p = 1.0f64;
    let mut q = 0.0f64;
    let mut t = 1.0f64;
    let mut prev = f64::INFINITY;
    for m in 1..=30usize {
        let mf = m as f64;
        let odd = 2.0 * mf - 1.0;
        t *= (mu - odd * odd) / (mf * 8.0 * x);
        if t.abs() >= prev {
            break; // asymptotic tail started growing
        }
        prev = t.abs();
        let sign = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if m % 2 == 0 {
            p += sign * t;
        } else {
            q += sign * t;
        }
        if t.abs() < 1e-18 {
            break;
        }
    }
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Evaluate both sides of the Pfaff–Kummer transformation
/// 2F1(α,β,γ;z) = (1-z)^{-α} 2F1(α,γ-β,γ;z/(z-1)) for terminating α = -m.
///
/// A self-test, not a hot path: both sides run through the double-double
/// accumulator, since the transformed side can cancel catastrophically even
/// when the original side is benign.
pub fn pfaff_kummer_check(alpha: f64, beta: f64, gamma: f64, z: f64) -> Result<(f64, f64)> {
    if alpha > 0.0 || alpha.fract() != 0.0 {
        return Err(Error::InvalidParameter(format!(
            "alpha = {alpha} must be a non-positive integer so both sides terminate"
        )));
    }
    if z == 1.0 {
        return Err(Error::InvalidParameter("z = 1 is excluded".into()));
    }
    let m = (-alpha) as usize;
    let lhs = hyp2f1_terminating_dd(m, beta, gamma, z)?.to_f64();
    let rhs_f = hyp2f1_terminating_dd(m, gamma - beta, gamma, z / (z - 1.0))?;
    // (1-z)^{-alpha} = (1-z)^m combined in log magnitude
    let prefactor_ln = (m as f64) * (1.0 - z).abs().ln();
    let prefactor_sign = if (1.0 - z) < 0.0 && m % 2 == 1 { -1.0 } else { 1.0 };
    let rhs = prefactor_sign * rhs_f.signum() * (prefactor_ln + rhs_f.ln_abs()).exp();
    Ok((lhs, rhs))
}

/// Evaluate both sides of the index-swap identity
/// 2F1(-j,-k,a+1;1/s^2) = k!/((k-j)! (a+1)_j) s^{-2j} 2F1(-j-a,-j,1+k-j;s^2),
/// valid for integers 0 <= j <= k.
pub fn poly_identity_y6_check(j: usize, k: usize, a: f64, s: f64) -> Result<(f64, f64)> {
    if j > k {
        return Err(Error::InvalidParameter(format!("need j <= k, got j={j}, k={k}")));
    }
    if s == 0.0 {
        return Err(Error::InvalidParameter("s must be nonzero".into()));
    }
    let lhs_f = hyp2f1_terminating_dd(j, -(k as f64), a + 1.0, 1.0 / (s * s))?;
    let lhs = lhs_f.to_f64();
    let f = hyp2f1_terminating_dd(j, -(j as f64) - a, 1.0 + (k - j) as f64, s * s)?;
    let ln_coef = ln_factorial(k) - ln_factorial(k - j) - ln_pochhammer(a + 1.0, j)
        - 2.0 * (j as f64) * s.abs().ln();
    let rhs = f.signum() * (ln_coef + f.ln_abs()).exp();
    Ok((lhs, rhs))
}

/// ln Γ for positive arguments (re-export for sibling modules and oracles).
pub fn ln_gamma_pub(x: f64) -> f64 {
    ln_gamma(x)
}
