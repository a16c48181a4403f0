//! Exact finite-N structure functions.
//!
//! The LUE structure function S_N(k) = Var Σ_j e^{i k λ_j} is computed by two
//! independent exact routes:
//!
//! * [`s_lue_kernel_sum`]: S_N = N - Σ_{j,l<N} (j! l!)^2 |I_jl(ik)|^2 / (h_j h_l),
//!   a double sum over closed-form transforms, every factor combined in log
//!   space;
//! * [`s_lue_jue`]: a single integral of the Jacobi (b = 0) spectral density
//!   over (1/(1+k²), 1).
//!
//! Their agreement is the central cross-check of the library. The GUE analogue
//! is the one-dimensional integral [`s_gue_brezin_hikami`] over the diagonal of
//! the a = 0 Laguerre kernel in squared variables, cross-checked by the
//! Hermite transform double sum [`s_gue_direct_oracle`].

use crate::kernels::{self, density, KernelSpec};
use crate::orthopoly::PolySystem;
use crate::quadrature::{adaptive, gauss_hermite, gauss_laguerre, AdaptiveOpts};
use crate::special::{ln_factorial, ln_gamma};
use crate::transforms::laguerre_transform_impl;
use crate::{Error, Result};
use num_complex::Complex64;

/// How a structure-function value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    KernelSum,
    JueQuadrature,
    /// Tensor quadrature of the double-integral form; this route computes the
    /// complement N - S_N and exists as a verification oracle.
    LhsQuadrature,
    BrezinHikami,
    HermiteOracle,
}

/// Floating-point precision regime for the kernel-sum route.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Double,
    /// Double-double accumulation of the hypergeometric sums; required beyond
    /// the N <= 60 double-precision certification.
    Extended,
}

/// Double-precision certification bound for the kernel-sum route.
pub const KERNEL_SUM_DOUBLE_LIMIT: usize = 60;

/// A structure-function request: matrix size, Laguerre parameter, Fourier
/// variable and optional exponential regularizer.
#[derive(Clone, Copy, Debug)]
pub struct StructureQuery {
    pub n: usize,
    pub a: f64,
    pub k: f64,
    pub gamma: f64,
}

impl StructureQuery {
    /// Negative k is folded to |k| (S_N(k) = S_N(-k) by conjugation).
    pub fn new(n: usize, a: f64, k: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter(format!("N = {n} must be >= 1")));
        }
        if !(a > -1.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Laguerre parameter a = {a} must satisfy a > -1"
            )));
        }
        if !k.is_finite() {
            return Err(Error::InvalidParameter(format!("k = {k} must be finite")));
        }
        Ok(StructureQuery {
            n,
            a,
            k: k.abs(),
            gamma: 0.0,
        })
    }

    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        if !(gamma >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "regularizer gamma = {gamma} must be >= 0"
            )));
        }
        self.gamma = gamma;
        Ok(self)
    }
}

/// A structure-function value with its provenance and error bound.
#[derive(Clone, Copy, Debug)]
pub struct StructureResult {
    pub value: f64,
    pub method: Method,
    pub est_error: f64,
}

impl StructureResult {
    fn new(value: f64, method: Method, est_error: f64, n: usize) -> Self {
        // variance of a bounded linear statistic: 0 <= S_N <= N
        debug_assert!(
            value >= -est_error - 1e-9 && value <= n as f64 + est_error + 1e-9,
            "structure value {value} outside [0, {n}] by more than {est_error}"
        );
        StructureResult {
            value,
            method,
            est_error,
        }
    }
}

/// LUE structure function through the transform double sum.
///
/// Double precision is certified for N <= 60; beyond that the extended
/// (double-double) accumulation must be requested explicitly.
pub fn s_lue_kernel_sum(q: &StructureQuery, precision: Precision) -> Result<StructureResult> {
    if precision == Precision::Double && q.n > KERNEL_SUM_DOUBLE_LIMIT {
        return Err(Error::PrecisionLimit(q.n, KERNEL_SUM_DOUBLE_LIMIT));
    }
    if q.k == 0.0 {
        return Ok(StructureResult::new(0.0, Method::KernelSum, 0.0, q.n));
    }
    let s = Complex64::new(0.0, q.k);
    let extended = precision == Precision::Extended;
    let mut ln_fact = vec![0.0f64; q.n];
    let mut ln_h = vec![0.0f64; q.n];
    for j in 0..q.n {
        ln_fact[j] = ln_factorial(j);
        ln_h[j] = ln_gamma(j as f64 + 1.0) + ln_gamma(j as f64 + q.a + 1.0);
    }
    let mut total = 0.0f64;
    let mut comp = 0.0f64;
    let mut err = 1e-16 * q.n as f64;
    for j in 0..q.n {
        for l in j..q.n {
            let (t, rel) = laguerre_transform_impl(j, l, q.a, s, extended)?;
            if t.log_mag == f64::NEG_INFINITY {
                continue;
            }
            let ln_term =
                2.0 * (ln_fact[j] + ln_fact[l]) + 2.0 * t.log_mag - ln_h[j] - ln_h[l];
            let mult = if j == l { 1.0 } else { 2.0 };
            let term = mult * ln_term.exp();
            err += term * 2.0 * rel;
            let y = term - comp;
            let tt = total + y;
            comp = (tt - total) - y;
            total = tt;
        }
    }
    Ok(StructureResult::new(
        q.n as f64 - total,
        Method::KernelSum,
        err,
        q.n,
    ))
}

fn jue_depth(n: usize) -> u32 {
    (((n as f64).log2().ceil()) as u32 + 2).clamp(4, 12)
}

/// LUE structure function as the single integral of the Jacobi (b = 0)
/// spectral density over (1/(1+k²), 1). The default production route: one
/// 1-D quadrature that scales to N in the thousands.
pub fn s_lue_jue(q: &StructureQuery) -> Result<StructureResult> {
    if q.k == 0.0 {
        return Ok(StructureResult::new(0.0, Method::JueQuadrature, 0.0, q.n));
    }
    let lo = 1.0 / (1.0 + q.k * q.k);
    let sys = PolySystem::jacobi(q.a, 0.0)?;
    let ks = KernelSpec::new(sys, q.n)?;
    let r = adaptive(
        |x| density(&ks, x),
        lo,
        1.0,
        AdaptiveOpts {
            rel_tol: 1e-11,
            abs_tol: 1e-14 * q.n as f64,
            min_depth: jue_depth(q.n),
            ..Default::default()
        },
    )?;
    Ok(StructureResult::new(
        r.value,
        Method::JueQuadrature,
        r.est_error.max(1e-13 * q.n as f64),
        q.n,
    ))
}

/// Tensor Gauss–Laguerre quadrature of the complementary double integral
/// ∬ e^{ik(x-y)} K_N(x,y)² dx dy = N - S_N(k). Verification oracle, N <= 15.
pub fn s_lue_lhs_quadrature(q: &StructureQuery) -> Result<StructureResult> {
    if q.n > 15 {
        return Err(Error::InvalidParameter(format!(
            "2-D quadrature oracle restricted to N <= 15, got {}",
            q.n
        )));
    }
    let base = 260 + 12 * q.n + 20 * (q.k.ceil() as usize);
    let v1 = lhs_tensor(q, base)?;
    let v2 = lhs_tensor(q, base + 64)?;
    Ok(StructureResult::new(
        v2,
        Method::LhsQuadrature,
        (v1 - v2).abs().max(1e-12 * q.n as f64),
        q.n,
    ))
}

fn lhs_tensor(q: &StructureQuery, m: usize) -> Result<f64> {
    let sys = PolySystem::laguerre(q.a)?;
    let rule = gauss_laguerre(m, q.a)?;
    let ln_h = sys.ln_norm(q.n - 1);
    // precompute scaled (p_N, p_{N-1}) and the diagonal Wronskian per node
    let mut pairs = Vec::with_capacity(m);
    let mut diag = Vec::with_capacity(m);
    for &x in &rule.nodes {
        pairs.push(crate::orthopoly::eval_pair(&sys, q.n, x));
        let pd = crate::orthopoly::eval_pair_deriv(&sys, q.n, x);
        diag.push((pd.dp * pd.pm1 - pd.p * pd.dpm1, 2.0 * pd.log_scale));
    }
    let mut total = 0.0f64;
    let mut comp = 0.0f64;
    for i in 0..m {
        for jdx in 0..m {
            let (ln_d2, _sgn) = if i == jdx {
                let (w, ls) = diag[i];
                if w == 0.0 {
                    continue;
                }
                (2.0 * (w.abs().ln() + ls), 1.0)
            } else {
                let (pi, pj) = (&pairs[i], &pairs[jdx]);
                let d = pi.p * pj.pm1 - pj.p * pi.pm1;
                if d == 0.0 {
                    continue;
                }
                let dx = rule.nodes[i] - rule.nodes[jdx];
                (
                    2.0 * (d.abs().ln() + pi.log_scale + pj.log_scale - dx.abs().ln()),
                    1.0,
                )
            };
            // K² = w(x) w(y) D²; the rule weights carry w already
            let ln_term = rule.ln_weights[i] + rule.ln_weights[jdx] + ln_d2 - 2.0 * ln_h;
            let term = ln_term.exp() * (q.k * (rule.nodes[i] - rule.nodes[jdx])).cos();
            let y = term - comp;
            let t = total + y;
            comp = (t - total) - y;
            total = t;
        }
    }
    Ok(total)
}

fn bh_depth(n: usize, k: f64) -> u32 {
    let osc = k * (2.0 * n as f64).sqrt() / 3.0;
    ((osc.max(2.0).log2().ceil()) as u32 + 4).clamp(5, 13)
}

/// GUE structure function via the one-dimensional integral of the a = 0
/// Laguerre kernel diagonal in squared variables.
pub fn s_gue_brezin_hikami(n: usize, k: f64) -> Result<StructureResult> {
    if n < 1 {
        return Err(Error::InvalidParameter("need N >= 1".into()));
    }
    let k = k.abs();
    if k == 0.0 {
        return Ok(StructureResult::new(0.0, Method::BrezinHikami, 0.0, n));
    }
    let sys = PolySystem::laguerre(0.0)?;
    let ks = KernelSpec::new(sys, n)?;
    let r = adaptive(
        |t| t * density(&ks, 0.5 * t * t),
        0.0,
        k,
        AdaptiveOpts {
            rel_tol: 1e-11,
            abs_tol: 1e-14 * n as f64,
            min_depth: bh_depth(n, k),
            ..Default::default()
        },
    )?;
    Ok(StructureResult::new(
        r.value,
        Method::BrezinHikami,
        r.est_error.max(1e-13 * n as f64),
        n,
    ))
}

/// GUE structure function as the Hermite-transform double sum; test oracle,
/// N <= 40.
pub fn s_gue_direct_oracle(n: usize, k: f64) -> Result<StructureResult> {
    if n > 40 {
        return Err(Error::InvalidParameter(format!(
            "Hermite oracle restricted to N <= 40, got {n}"
        )));
    }
    if n < 1 {
        return Err(Error::InvalidParameter("need N >= 1".into()));
    }
    let k = k.abs();
    if k == 0.0 {
        return Ok(StructureResult::new(0.0, Method::HermiteOracle, 0.0, n));
    }
    let sys = PolySystem::hermite();
    let m = 4 * n + 200;
    let rule = gauss_hermite(m)?;
    // tables of sign/ln|p_j(x_i)| for j < N
    let mut ln_p = vec![0.0f64; n * m];
    let mut sg_p = vec![0.0f64; n * m];
    for (i, &x) in rule.nodes.iter().enumerate() {
        let mut pm1 = 0.0f64;
        let mut p = 1.0f64;
        let mut ls = 0.0f64;
        for j in 0..n {
            ln_p[j * m + i] = if p == 0.0 { f64::NEG_INFINITY } else { p.abs().ln() + ls };
            sg_p[j * m + i] = p.signum();
            let (alpha, beta) = sys.recurrence(j);
            let next = (x - alpha) * p - beta * pm1;
            pm1 = p;
            p = next;
            if p.abs().max(pm1.abs()) > 1e120 {
                p /= 1e120;
                pm1 /= 1e120;
                ls += 1e120f64.ln();
            }
        }
    }
    let mut total = 0.0f64;
    for j in 0..n {
        for l in j..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..m {
                let ln_mag = rule.ln_weights[i] + ln_p[j * m + i] + ln_p[l * m + i];
                if ln_mag == f64::NEG_INFINITY {
                    continue;
                }
                let sgn = sg_p[j * m + i] * sg_p[l * m + i];
                acc += Complex64::from_polar(ln_mag.exp(), k * rule.nodes[i]) * sgn;
            }
            let ln_hh = sys.ln_norm(j) + sys.ln_norm(l);
            let term = (acc.norm_sqr().ln() - ln_hh).exp();
            total += if j == l { term } else { 2.0 * term };
        }
    }
    Ok(StructureResult::new(
        n as f64 - total,
        Method::HermiteOracle,
        1e-10 * n as f64,
        n,
    ))
}

/// GUE covariance of the pair of exponential statistics with wavenumbers
/// (k1, -k2), as a path integral over the complexified a = 0 Laguerre kernel.
///
/// When (k1, k2) form a conjugate pair k1 = iΓ + k, k2 = -iΓ + k the
/// regularizer Γ must be nonnegative; other complex pairs are accepted as
/// the finite path integral converges for all of them.
pub fn cov_gue(n: usize, k1: Complex64, k2: Complex64) -> Result<Complex64> {
    if n < 1 {
        return Err(Error::InvalidParameter("need N >= 1".into()));
    }
    let pair_tol = 1e-12 * (k1.norm() + k2.norm() + 1.0);
    if (k1 - k2.conj()).norm() <= pair_tol && k1.im < -pair_tol {
        return Err(Error::InvalidParameter(format!(
            "conjugate pair with negative regularizer (gamma = {}) diverges",
            k1.im
        )));
    }
    if k2 == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let dk = k1 - k2;
    let scale_k = k2.norm() + dk.norm();
    let depth = bh_depth(n, scale_k);
    let h = |t1: Complex64, t2: Complex64| -> Complex64 {
        0.5 * (t1 + t2) * kernels::lue_kernel_complex(n, 0.5 * t1 * t1, 0.5 * t2 * t2)
    };
    let r = adaptive(
        |u: f64| {
            let s = k2 * u;
            h(dk + s, s) * k2
        },
        0.0,
        1.0,
        AdaptiveOpts {
            rel_tol: 1e-11,
            abs_tol: 1e-14 * n as f64,
            min_depth: depth,
            ..Default::default()
        },
    )?;
    Ok(r.value)
}

/// The disconnected ("dip") term |∫ e^{(-Γ+ik)λ} ρ_1(λ) dλ|² of the full
/// moment decomposition, by direct quadrature of the density transform.
pub fn dip_term(q: &StructureQuery) -> Result<f64> {
    let sys = PolySystem::laguerre(q.a)?;
    let ks = KernelSpec::new(sys, q.n)?;
    let upper = 4.0 * q.n as f64 + 2.0 * q.a.max(0.0) + 80.0;
    let depth = (((q.n as f64 + q.k * upper / 6.0).log2().ceil()) as u32 + 1).clamp(4, 14);
    let r = adaptive(
        |t: f64| {
            let rho = density(&ks, t);
            Complex64::from_polar(rho * (-q.gamma * t).exp(), q.k * t)
        },
        0.0,
        upper,
        AdaptiveOpts {
            rel_tol: 1e-11,
            abs_tol: 1e-14 * q.n as f64,
            min_depth: depth,
            ..Default::default()
        },
    )?;
    Ok(r.value.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn q(n: usize, a: f64, k: f64) -> StructureQuery {
        StructureQuery::new(n, a, k).unwrap()
    }

    #[test]
    fn n1_closed_form_both_routes() {
        // single Exp(1) eigenvalue: S_1(k) = k²/(1+k²)
        for &k in &[0.4, 1.0, 3.0] {
            let want = k * k / (1.0 + k * k);
            let ks = s_lue_kernel_sum(&q(1, 0.0, k), Precision::Double).unwrap();
            assert_relative_eq!(ks.value, want, max_relative = 1e-12);
            let jq = s_lue_jue(&q(1, 0.0, k)).unwrap();
            assert_relative_eq!(jq.value, want, max_relative = 1e-10);
        }
    }

    #[test]
    fn zero_k_is_exactly_zero() {
        assert_eq!(s_lue_kernel_sum(&q(5, 1.0, 0.0), Precision::Double).unwrap().value, 0.0);
        assert_eq!(s_lue_jue(&q(5, 1.0, 0.0)).unwrap().value, 0.0);
        assert_eq!(s_gue_brezin_hikami(4, 0.0).unwrap().value, 0.0);
        assert_eq!(s_gue_direct_oracle(4, 0.0).unwrap().value, 0.0);
    }

    #[test]
    fn negative_k_is_folded() {
        let a = s_lue_jue(&q(3, 0.5, -2.0)).unwrap().value;
        let b = s_lue_jue(&q(3, 0.5, 2.0)).unwrap().value;
        assert_eq!(a, b);
    }

    #[test]
    fn cross_route_identity_small_cases() {
        for (n, a, k) in [(2usize, 0.0, 1.0), (5, 1.0, 0.5), (8, 2.5, 3.0)] {
            let ks = s_lue_kernel_sum(&q(n, a, k), Precision::Double).unwrap();
            let jq = s_lue_jue(&q(n, a, k)).unwrap();
            assert_relative_eq!(ks.value, jq.value, max_relative = 1e-9);
        }
    }

    #[test]
    fn kernel_sum_precision_gate() {
        let e = s_lue_kernel_sum(&q(61, 0.0, 1.0), Precision::Double);
        assert!(matches!(e, Err(Error::PrecisionLimit(61, 60))));
        // extended path crosses the gate and still matches the JUE route
        let ks = s_lue_kernel_sum(&q(70, 0.0, 0.5), Precision::Extended).unwrap();
        let jq = s_lue_jue(&q(70, 0.0, 0.5)).unwrap();
        assert_relative_eq!(ks.value, jq.value, max_relative = 1e-9);
    }

    #[test]
    fn lhs_quadrature_complementarity() {
        // N=1, a=0, k=1: the double integral equals 1/(1+k²) = 0.5
        let r = s_lue_lhs_quadrature(&q(1, 0.0, 1.0)).unwrap();
        assert_relative_eq!(r.value, 0.5, max_relative = 1e-9);
        // k=0: reproducing property gives exactly N
        let r = s_lue_lhs_quadrature(&q(3, 1.0, 0.0)).unwrap();
        assert_relative_eq!(r.value, 3.0, max_relative = 1e-10);
        // identity: complement of the JUE route
        let r = s_lue_lhs_quadrature(&q(3, 1.0, 2.0)).unwrap();
        let s = s_lue_jue(&q(3, 1.0, 2.0)).unwrap();
        assert!((r.value + s.value - 3.0).abs() < 1e-7);
        assert!(s_lue_lhs_quadrature(&q(16, 0.0, 1.0)).is_err());
    }

    #[test]
    fn gue_n1_closed_form() {
        let r = s_gue_brezin_hikami(1, 1.0).unwrap();
        assert_relative_eq!(r.value, 1.0 - (-0.5f64).exp(), max_relative = 1e-11);
        let r = s_gue_direct_oracle(1, 1.0).unwrap();
        assert_relative_eq!(r.value, 1.0 - (-0.5f64).exp(), max_relative = 1e-10);
    }

    #[test]
    fn gue_routes_agree() {
        for (n, k) in [(2usize, 1.0), (4, 2.0), (12, 0.7)] {
            let bh = s_gue_brezin_hikami(n, k).unwrap();
            let or = s_gue_direct_oracle(n, k).unwrap();
            assert!(
                (bh.value - or.value).abs() <= 1e-8 * n as f64,
                "N={n} k={k}: {} vs {}",
                bh.value,
                or.value
            );
        }
    }

    #[test]
    fn cov_reduces_to_variance_on_the_diagonal() {
        for (n, k) in [(1usize, 0.8), (3, 1.5)] {
            let c = cov_gue(n, Complex64::new(k, 0.0), Complex64::new(k, 0.0)).unwrap();
            let s = s_gue_brezin_hikami(n, k).unwrap();
            assert!((c.re - s.value).abs() < 1e-9 * n as f64, "{c} vs {}", s.value);
            assert!(c.im.abs() < 1e-10);
        }
    }

    #[test]
    fn cov_regularized_pair_is_real() {
        let gamma = 0.5;
        let k = 1.0;
        let k1 = Complex64::new(k, gamma);
        let k2 = Complex64::new(k, -gamma);
        let c = cov_gue(2, k1, k2).unwrap();
        assert!(c.im.abs() <= 1e-10, "imaginary part {}", c.im);
        assert!(c.re > 0.0);
        // empty integration range
        assert_eq!(
            cov_gue(2, k1, Complex64::new(0.0, 0.0)).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        // negative regularizer rejected
        assert!(cov_gue(2, Complex64::new(k, -gamma), Complex64::new(k, gamma)).is_err());
    }

    #[test]
    fn dip_term_values() {
        // k=0, gamma=0: |∫rho|² = N²
        let d = dip_term(&q(4, 1.0, 0.0)).unwrap();
        assert_relative_eq!(d, 16.0, max_relative = 1e-9);
        // N=1, a=0, gamma=0: 1/(1+k²)
        let d = dip_term(&q(1, 0.0, 1.0)).unwrap();
        assert_relative_eq!(d, 0.5, max_relative = 1e-9);
        // N=1, a=0, gamma=1, k=0: |∫e^{-2t}|² = 1/4
        let d = dip_term(&q(1, 0.0, 0.0).with_gamma(1.0).unwrap()).unwrap();
        assert_relative_eq!(d, 0.25, max_relative = 1e-9);
    }

    #[test]
    fn query_validation() {
        assert!(StructureQuery::new(0, 0.0, 1.0).is_err());
        assert!(StructureQuery::new(2, -1.0, 1.0).is_err());
        assert!(StructureQuery::new(2, 0.0, f64::NAN).is_err());
        assert!(q(2, 0.0, 1.0).with_gamma(-0.1).is_err());
    }
}
