//! Laplace–Fourier transforms of Laguerre polynomial products and of the
//! spectral density: the closed forms that power the exact structure-function
//! sum, plus the quadrature oracles that certify them.
//!
//! `I_jk(s) = ∫_0^∞ L_j^{(a)} L_k^{(a)} x^a e^{(s-1)x} dx` converges for
//! Re s < 1 and evaluates in closed form as a prefactor times a terminating
//! Gauss hypergeometric sum in 1/s². On the structure-function path s = ik
//! the argument is real negative and every factor is combined in the
//! sign/log-magnitude representation.

use crate::hypergeom::{hyp2f1_terminating_dd, hyp2f1_terminating_scaled, ScaledComplex};
use crate::kernels::{density, KernelSpec};
use crate::orthopoly::{self, PolySystem};
use crate::quadrature::{self, adaptive, AdaptiveOpts};
use crate::special::{ln_factorial, ln_gamma, ln_pochhammer, Dd, DdComplex};
use crate::{Error, Result};
use num_complex::Complex64;

/// A complex transform value with its log-magnitude companion, so callers can
/// keep multiplying transforms without leaving the representable range.
#[derive(Clone, Copy, Debug)]
pub struct TransformValue {
    pub value: Complex64,
    pub log_mag: f64,
    pub phase: f64,
}

impl TransformValue {
    pub const ZERO: TransformValue = TransformValue {
        value: Complex64::new(0.0, 0.0),
        log_mag: f64::NEG_INFINITY,
        phase: 0.0,
    };

    fn from_polar_log(log_mag: f64, phase: f64) -> Self {
        if log_mag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let value = if log_mag < 709.0 {
            Complex64::from_polar(log_mag.exp(), phase)
        } else {
            Complex64::from_polar(f64::INFINITY, phase)
        };
        TransformValue {
            value,
            log_mag,
            phase,
        }
    }

    fn from_scaled(prefactor_ln: f64, prefactor_arg: f64, f: ScaledComplex) -> Self {
        if f.value == Complex64::new(0.0, 0.0) {
            return Self::ZERO;
        }
        Self::from_polar_log(prefactor_ln + f.ln_abs(), prefactor_arg + f.arg())
    }
}

fn check_re_s(s: Complex64) -> Result<()> {
    if s.re >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "transform requires Re s < 1, got s = {s}"
        )));
    }
    Ok(())
}

fn check_a(a: f64) -> Result<()> {
    if !(a > -1.0) || !a.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Laguerre parameter a = {a} must satisfy a > -1"
        )));
    }
    Ok(())
}

/// Closed form of I_jk(s), together with a relative error bound driven by the
/// cancellation condition of the terminating hypergeometric sum.
pub(crate) fn laguerre_transform_impl(
    j: usize,
    k: usize,
    a: f64,
    s: Complex64,
    extended: bool,
) -> Result<(TransformValue, f64)> {
    check_a(a)?;
    check_re_s(s)?;
    if s == Complex64::new(0.0, 0.0) {
        // orthogonality limit: ∫ L_j L_k x^a e^{-x} = δ_{jk} Γ(a+j+1)/j!
        if j == k {
            let v =
                TransformValue::from_polar_log(ln_gamma(a + j as f64 + 1.0) - ln_factorial(j), 0.0);
            return Ok((v, 1e-15));
        }
        return Ok((TransformValue::ZERO, 0.0));
    }
    let one_minus = Complex64::new(1.0, 0.0) - s;
    let ratio = -s / one_minus;
    let prefactor_ln = ln_gamma(a + 1.0) + ln_pochhammer(a + 1.0, j) - ln_factorial(j)
        + ln_pochhammer(a + 1.0, k)
        - ln_factorial(k)
        - (a + 1.0) * one_minus.norm().ln()
        + ((j + k) as f64) * ratio.norm().ln();
    let prefactor_arg = -(a + 1.0) * one_minus.arg() + ((j + k) as f64) * ratio.arg();
    let x = 1.0 / (s * s);
    let (m, b) = (j.min(k), -(j.max(k) as f64));
    if extended && x.im == 0.0 {
        let fd = hyp2f1_terminating_dd(m, b, a + 1.0, x.re)?;
        if fd.is_zero() {
            return Ok((TransformValue::ZERO, 0.0));
        }
        let phase = if fd.signum() < 0.0 { std::f64::consts::PI } else { 0.0 };
        let v = TransformValue::from_polar_log(prefactor_ln + fd.ln_abs(), prefactor_arg + phase);
        return Ok((v, 1e-15));
    }
    let f = hyp2f1_terminating_scaled(m, b, a + 1.0, x)?;
    let rel = (f.condition * 4.0 * f64::EPSILON).max(1e-15);
    Ok((
        TransformValue::from_scaled(prefactor_ln, prefactor_arg, f.value),
        rel,
    ))
}

/// Laplace–Fourier transform of L_j^{(a)} L_k^{(a)} w^{(L)} in closed form.
/// Requires Re s < 1; s = 0 returns the orthogonality value.
pub fn laguerre_transform(j: usize, k: usize, a: f64, s: Complex64) -> Result<TransformValue> {
    Ok(laguerre_transform_impl(j, k, a, s, false)?.0)
}

/// Brute-force evaluation of the defining integral of I_jk(s): the product
/// L_j^{(a)} L_k^{(a)} is expanded into its exact monomial coefficients in
/// double-double arithmetic, and every monomial is integrated termwise
/// through ∫ x^{p+a} e^{(s-1)x} dx = Γ(p+a+1)/(1-s)^{p+a+1}.
///
/// The coefficient sum cancels down to (|s|/|1-s|)^{j+k} of its term size,
/// far below what float64 quadrature of the oscillating integrand can
/// resolve, which is why the whole sum lives in extended precision; the only
/// float64-level inputs are the global factors Γ(a+1) and (1-s)^{-(a+1)}.
/// Certified for j, k <= 40. Test oracle, not a production path.
pub fn laguerre_transform_oracle(
    j: usize,
    k: usize,
    a: f64,
    s: Complex64,
) -> Result<TransformValue> {
    check_a(a)?;
    check_re_s(s)?;
    if j > 40 || k > 40 {
        return Err(Error::InvalidParameter(format!(
            "oracle certified for j, k <= 40, got ({j}, {k})"
        )));
    }
    // exact monomial coefficients of L_n^{(a)}: c_0 = C(n+a, n),
    // c_m = -c_{m-1} (n-m+1)/(m (a+m))
    let coeffs = |n: usize| -> Vec<Dd> {
        let mut c = Vec::with_capacity(n + 1);
        let mut c0 = Dd::from_f64(1.0);
        for i in 1..=n {
            c0 = c0.mul(Dd::from_sum(a, i as f64)).div_f64(i as f64);
        }
        c.push(c0);
        for m in 1..=n {
            let prev = c[m - 1];
            let next = prev
                .mul_f64(-((n - m + 1) as f64))
                .div(Dd::from_sum(a, m as f64).mul_f64(m as f64));
            c.push(next);
        }
        c
    };
    let cj = coeffs(j);
    let ck = coeffs(k);
    // convolution: d_p = Σ cj_m ck_{p-m}
    let deg = j + k;
    let mut d = vec![Dd::ZERO; deg + 1];
    for (m, cm) in cj.iter().enumerate() {
        for (l, cl) in ck.iter().enumerate() {
            d[m + l] = d[m + l].add(cm.mul(*cl));
        }
    }
    // Σ_p d_p Γ(p+a+1)/(1-s)^p relative to the global Γ(a+1)(1-s)^{-(a+1)};
    // Γ(p+a+1)/Γ(a+1) = Π (a+i) is exact in dd, R = 1/(1-s) likewise
    let one_minus = DdComplex::from_f64(1.0 - s.re, -s.im);
    let r = DdComplex::from_f64(1.0, 0.0).div(one_minus);
    let mut acc = DdComplex::ZERO;
    let mut rp = DdComplex::from_f64(1.0, 0.0);
    let mut gamma_ratio = Dd::from_f64(1.0);
    for (p, dp) in d.iter().enumerate() {
        if p > 0 {
            rp = rp.mul(r);
            gamma_ratio = gamma_ratio.mul(Dd::from_sum(a, p as f64));
        }
        acc = acc.add(rp.mul_dd(dp.mul(gamma_ratio)));
    }
    let sum = Complex64::new(acc.re.to_f64(), acc.im.to_f64());
    if sum == Complex64::new(0.0, 0.0) {
        return Ok(TransformValue::ZERO);
    }
    // global factor Γ(a+1) (1-s)^{-(a+1)}
    let om = Complex64::new(1.0, 0.0) - s;
    let ln_mag = ln_gamma(a + 1.0) - (a + 1.0) * om.norm().ln() + sum.norm().ln();
    let phase = -(a + 1.0) * om.arg() + sum.arg();
    Ok(TransformValue::from_polar_log(ln_mag, phase))
}

/// Fourier–Laplace transform of the density-weighted first moment:
/// ∫_0^∞ t ρ_1(t) e^{st} dt in closed form for the LUE.
pub fn density_fl_transform(n: usize, a: f64, s: Complex64) -> Result<TransformValue> {
    check_a(a)?;
    check_re_s(s)?;
    if n < 1 {
        return Err(Error::InvalidParameter("need N >= 1".into()));
    }
    let nf = n as f64;
    let one_minus = Complex64::new(1.0, 0.0) - s;
    let prefactor_ln = (nf * (nf + a)).ln() - (2.0 * nf + a) * one_minus.norm().ln();
    let prefactor_arg = -(2.0 * nf + a) * one_minus.arg();
    // terminating through the second parameter: 2F1(-N+1-a, -N+1, 2; s^2)
    let f = hyp2f1_terminating_scaled(n - 1, -nf + 1.0 - a, 2.0, s * s)?;
    Ok(TransformValue::from_scaled(
        prefactor_ln,
        prefactor_arg,
        f.value,
    ))
}

/// Gauss–Hermite quadrature of ∫ e^{sx} H_j(x) H_k(x) e^{-x^2} dx, the GUE
/// companion transform; certified for j, k <= 40. Test oracle.
pub fn hermite_transform_oracle(j: usize, k: usize, s: Complex64) -> Result<TransformValue> {
    if j > 40 || k > 40 {
        return Err(Error::InvalidParameter(format!(
            "oracle certified for j, k <= 40, got ({j}, {k})"
        )));
    }
    let sys = PolySystem::hermite();
    let rule = quadrature::gauss_hermite(2 * (j + k) + 200)?;
    // H_n = 2^n p_n
    let ln2jk = ((j + k) as f64) * std::f64::consts::LN_2;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for (x, lw) in rule.nodes.iter().zip(rule.ln_weights.iter()) {
        let pj = orthopoly::eval_monic(&sys, j, *x);
        let pk = orthopoly::eval_monic(&sys, k, *x);
        let prod = pj.mul(&pk);
        if prod.is_zero() {
            continue;
        }
        let mag = (lw + prod.ln_abs() + ln2jk + s.re * x).exp();
        let term = Complex64::from_polar(mag, s.im * x) * prod.signum();
        let y = term - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    if acc == Complex64::new(0.0, 0.0) {
        return Ok(TransformValue::ZERO);
    }
    Ok(TransformValue::from_polar_log(acc.norm().ln(), acc.arg()))
}

/// Quadrature of t ρ_1(t) e^{st} over the spectral support; consistency
/// oracle for [`density_fl_transform`].
pub fn density_moment_quadrature(n: usize, a: f64, s: Complex64) -> Result<Complex64> {
    check_a(a)?;
    check_re_s(s)?;
    let sys = PolySystem::laguerre(a)?;
    let ks = KernelSpec::new(sys, n)?;
    let upper = 4.0 * n as f64 + 2.0 * a.max(0.0) + 80.0;
    let depth = (((n as f64 + s.im.abs() * upper / 6.0).log2().ceil()) as u32 + 1).clamp(4, 13);
    let r = adaptive(
        |t: f64| {
            let rho = density(&ks, t);
            Complex64::from_polar(t * rho * (s.re * t).exp(), s.im * t)
        },
        0.0,
        upper,
        AdaptiveOpts {
            rel_tol: 1e-12,
            min_depth: depth,
            ..Default::default()
        },
    )?;
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn transform_low_order_closed_forms() {
        // I_00(0.5) at a=0: ∫ e^{-x/2} = 2
        let t = laguerre_transform(0, 0, 0.0, c(0.5, 0.0)).unwrap();
        assert_relative_eq!(t.value.re, 2.0, max_relative = 1e-13);
        assert!(t.value.im.abs() < 1e-14);
        // I_10(s) at a=0 is -s/(1-s)^2; at s=0.5 -> -2
        let t = laguerre_transform(1, 0, 0.0, c(0.5, 0.0)).unwrap();
        assert_relative_eq!(t.value.re, -2.0, max_relative = 1e-13);
    }

    #[test]
    fn transform_s_zero_is_orthogonality() {
        for &a in &[0.0, 1.5] {
            let t = laguerre_transform(0, 0, a, c(0.0, 0.0)).unwrap();
            assert_relative_eq!(t.value.re, ln_gamma(a + 1.0).exp(), max_relative = 1e-13);
            let t = laguerre_transform(2, 2, a, c(0.0, 0.0)).unwrap();
            assert_relative_eq!(
                t.value.re,
                (ln_gamma(a + 3.0) - ln_factorial(2)).exp(),
                max_relative = 1e-12
            );
            let t = laguerre_transform(1, 3, a, c(0.0, 0.0)).unwrap();
            assert_eq!(t.value, c(0.0, 0.0));
        }
    }

    #[test]
    fn transform_rejects_divergent_s() {
        assert!(laguerre_transform(0, 0, 0.0, c(1.0, 0.3)).is_err());
        assert!(laguerre_transform_oracle(0, 0, 0.0, c(1.5, 0.0)).is_err());
        assert!(laguerre_transform(0, 0, -1.0, c(0.0, 0.0)).is_err());
        assert!(laguerre_transform_oracle(41, 0, 0.0, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn closed_form_matches_oracle() {
        let ss = [c(0.3, 0.0), c(-0.7, 0.0), c(0.0, 0.5), c(0.2, 0.4)];
        for &(j, k) in &[(0usize, 0usize), (1, 0), (3, 5), (2, 2), (7, 11)] {
            for &a in &[0.0, 0.5, 2.0] {
                for &s in &ss {
                    let cf = laguerre_transform(j, k, a, s).unwrap();
                    let or = laguerre_transform_oracle(j, k, a, s).unwrap();
                    assert!(
                        (cf.value - or.value).norm() <= 1e-9 * or.value.norm().max(1e-12),
                        "({j},{k}) a={a} s={s}: {} vs {}",
                        cf.value,
                        or.value
                    );
                }
            }
        }
        // extended path agrees on real negative arguments (s = ik)
        let (cf, _) = laguerre_transform_impl(6, 9, 0.5, c(0.0, 0.8), true).unwrap();
        let or = laguerre_transform_oracle(6, 9, 0.5, c(0.0, 0.8)).unwrap();
        assert!((cf.value - or.value).norm() <= 1e-10 * or.value.norm());
    }

    #[test]
    fn transform_index_symmetry() {
        for &s in &[c(0.3, 0.0), c(0.0, 1.7), c(-0.2, 0.9)] {
            for (j, k) in [(2usize, 5usize), (0, 7), (4, 4)] {
                let a = laguerre_transform(j, k, 1.0, s).unwrap();
                let b = laguerre_transform(k, j, 1.0, s).unwrap();
                assert!((a.value - b.value).norm() <= 1e-12 * a.value.norm().max(1e-300));
            }
        }
    }

    #[test]
    fn transform_hermitian_symmetry() {
        for (j, k) in [(1usize, 4usize), (3, 3)] {
            let s = c(0.2, 0.6);
            let a = laguerre_transform(j, k, 0.5, s).unwrap();
            let b = laguerre_transform(j, k, 0.5, s.conj()).unwrap();
            assert!((a.value - b.value.conj()).norm() <= 1e-12 * a.value.norm());
        }
    }

    #[test]
    fn density_transform_n1() {
        // N=1, a=0: ∫ t e^{-t} e^{st} = 1/(1-s)^2
        let t = density_fl_transform(1, 0.0, c(0.0, 0.0)).unwrap();
        assert_relative_eq!(t.value.re, 1.0, max_relative = 1e-14);
        let t = density_fl_transform(1, 0.0, c(0.0, 1.0)).unwrap();
        // 1/(1-i)^2 = i/2
        assert!(t.value.re.abs() < 1e-14);
        assert_relative_eq!(t.value.im, 0.5, max_relative = 1e-13);
    }

    #[test]
    fn density_transform_matches_quadrature() {
        for (n, a, s) in [
            (2usize, 1.0, c(0.2, 0.0)),
            (5, 0.5, c(0.1, 0.8)),
            (10, 0.0, c(0.0, 2.0)),
        ] {
            let cf = density_fl_transform(n, a, s).unwrap();
            let q = density_moment_quadrature(n, a, s).unwrap();
            assert!(
                (cf.value - q).norm() <= 1e-8 * q.norm(),
                "N={n} a={a} s={s}: {} vs {q}",
                cf.value
            );
        }
    }

    #[test]
    fn hermite_oracle_values() {
        let t = hermite_transform_oracle(0, 0, c(0.0, 0.0)).unwrap();
        assert_relative_eq!(t.value.re, std::f64::consts::PI.sqrt(), max_relative = 1e-12);
        // odd integrand: zero up to the (asymmetric-roundoff) node noise
        let t = hermite_transform_oracle(0, 1, c(0.0, 0.0)).unwrap();
        assert!(t.value.norm() < 1e-13);
        // complete the square: ∫ e^{ikx} e^{-x^2} = sqrt(pi) e^{-k^2/4} at k=2
        let t = hermite_transform_oracle(0, 0, c(0.0, 2.0)).unwrap();
        assert_relative_eq!(
            t.value.re,
            std::f64::consts::PI.sqrt() * (-1.0f64).exp(),
            max_relative = 1e-11
        );
        assert!(t.value.im.abs() < 1e-12);
        assert!(hermite_transform_oracle(41, 0, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn transform_value_log_consistency() {
        let t = laguerre_transform(5, 3, 0.5, c(0.0, 2.0)).unwrap();
        assert_relative_eq!(t.value.norm(), t.log_mag.exp(), max_relative = 1e-12);
        let dir = Complex64::from_polar(1.0, t.phase);
        assert!((t.value / t.value.norm() - dir).norm() < 1e-12);
    }
}
