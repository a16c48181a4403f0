//! Christoffel–Darboux correlation kernels, spectral densities and the
//! truncated two-point function for the LUE, JUE and GUE at finite N.
//!
//! The kernel is evaluated through the two-term Christoffel–Darboux ratio
//! (O(N) per point) rather than the N-term sum; the confluent derivative
//! form takes over near the diagonal where the ratio is 0/0. The N-term sum
//! survives as a test oracle.

use crate::orthopoly::{self, Family, PolySystem};
use crate::{Error, Result};
use num_complex::Complex64;

/// Ensemble + matrix size.
#[derive(Clone, Copy, Debug)]
pub struct KernelSpec {
    pub sys: PolySystem,
    pub n: usize,
}

impl KernelSpec {
    pub fn new(sys: PolySystem, n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter(format!(
                "matrix size N = {n} must be >= 1"
            )));
        }
        Ok(KernelSpec { sys, n })
    }
}

/// Near-diagonal threshold below which the confluent form is used.
fn eps_cd(x: f64, y: f64) -> f64 {
    1e-6 * x.abs().max(y.abs()).max(1.0)
}

fn in_open_support(sys: &PolySystem, x: f64) -> bool {
    sys.ln_weight(x) != f64::NEG_INFINITY
}

/// Correlation kernel K_N(x, y). Symmetric in (x, y) by construction and
/// exactly zero when either argument leaves the support of the weight.
pub fn cd_kernel(ks: &KernelSpec, x: f64, y: f64) -> f64 {
    if !in_open_support(&ks.sys, x) || !in_open_support(&ks.sys, y) {
        return 0.0;
    }
    let ln_g = 0.5 * (ks.sys.ln_weight(x) + ks.sys.ln_weight(y));
    let ln_h = ks.sys.ln_norm(ks.n - 1);
    if (x - y).abs() <= eps_cd(x, y) {
        // confluent (L'Hopital) form at the midpoint
        let z = 0.5 * (x + y);
        let pd = orthopoly::eval_pair_deriv(&ks.sys, ks.n, z);
        let wr = pd.dp * pd.pm1 - pd.p * pd.dpm1;
        if wr == 0.0 {
            return 0.0;
        }
        wr.signum() * (wr.abs().ln() + 2.0 * pd.log_scale + ln_g - ln_h).exp()
    } else {
        let px = orthopoly::eval_pair(&ks.sys, ks.n, x);
        let py = orthopoly::eval_pair(&ks.sys, ks.n, y);
        let diff = px.p * py.pm1 - py.p * px.pm1;
        if diff == 0.0 {
            return 0.0;
        }
        let sign = diff.signum() * (x - y).signum();
        sign * (diff.abs().ln() + px.log_scale + py.log_scale + ln_g - ln_h - (x - y).abs().ln())
            .exp()
    }
}

/// Spectral density rho_1(x) = K_N(x, x).
pub fn density(ks: &KernelSpec, x: f64) -> f64 {
    cd_kernel(ks, x, x)
}

/// Truncated two-point correlation: rho_2^T(x, y) = -K_N(x, y)^2 <= 0.
pub fn rho2_truncated(ks: &KernelSpec, x: f64, y: f64) -> f64 {
    let k = cd_kernel(ks, x, y);
    -k * k
}

/// Both sides of the Laguerre kernel differential identity
/// (x d/dx + y d/dy) (xy)^{1/2} K_N(x,y)
///    = -(xy)^{1/2} / (2 h_{N-1}) (psi_N(x) psi_{N-1}(y) + psi_{N-1}(x) psi_N(y)).
/// The left side is formed by central differences with step h, the right side
/// exactly.
pub fn verify_prop2(ks: &KernelSpec, x: f64, y: f64, h: f64) -> Result<(f64, f64)> {
    if ks.sys.family != Family::Laguerre {
        return Err(Error::InvalidParameter(
            "the differential identity holds for the Laguerre kernel".into(),
        ));
    }
    if x <= 0.0 || y <= 0.0 {
        return Err(Error::InvalidParameter("need x, y > 0".into()));
    }
    let g = |u: f64, v: f64| (u * v).sqrt() * cd_kernel(ks, u, v);
    let lhs = x * (g(x + h, y) - g(x - h, y)) / (2.0 * h)
        + y * (g(x, y + h) - g(x, y - h)) / (2.0 * h);
    let n = ks.n;
    let pa = orthopoly::psi(&ks.sys, n, x);
    let pb = orthopoly::psi(&ks.sys, n - 1, y);
    let pc = orthopoly::psi(&ks.sys, n - 1, x);
    let pd = orthopoly::psi(&ks.sys, n, y);
    let cross = pa.mul(&pb).to_f64() + pc.mul(&pd).to_f64();
    let rhs = -(x * y).sqrt() / (2.0 * ks.sys.ln_norm(n - 1).exp()) * cross;
    Ok((lhs, rhs))
}

/// Both sides of the Jacobi (b = 0) diagonal differential identity
/// d/ds [ s(1-s) K_N(s,s) ] = -((2N+a+b)/h_{N-1}) w(s) p_N(s) p_{N-1}(s).
pub fn verify_prop4(a: f64, n: usize, s: f64, h: f64) -> Result<(f64, f64)> {
    if !(0.0 < s && s < 1.0) {
        return Err(Error::InvalidParameter(format!("need 0 < s < 1, got {s}")));
    }
    let sys = PolySystem::jacobi(a, 0.0)?;
    let ks = KernelSpec::new(sys, n)?;
    let phi = |u: f64| u * (1.0 - u) * density(&ks, u);
    let lhs = (phi(s + h) - phi(s - h)) / (2.0 * h);
    let pair = orthopoly::eval_pair(&sys, n, s);
    let prod = pair.p * pair.pm1;
    let rhs = if prod == 0.0 {
        0.0
    } else {
        -prod.signum()
            * (2.0 * n as f64 + a)
            * (prod.abs().ln() + 2.0 * pair.log_scale + sys.ln_weight(s) - sys.ln_norm(n - 1))
                .exp()
    };
    Ok((lhs, rhs))
}

/// Laguerre a = 0 kernel continued to complex arguments (the weight becomes
/// the entire function e^{-z}), used by the GUE covariance path integral.
pub(crate) fn lue_kernel_complex(n: usize, z: Complex64, w: Complex64) -> Complex64 {
    let sys = PolySystem {
        family: Family::Laguerre,
        a: 0.0,
        b: 0.0,
    };
    let ln_h = sys.ln_norm(n - 1);
    let exp_part = -(z + w) * 0.5; // complex ln of sqrt(w(z) w(w)) at a = 0
    let near = (z - w).norm() <= 1e-6 * z.norm().max(w.norm()).max(1.0);
    let (q, ln_mag_q) = if near {
        let mid = (z + w) * 0.5;
        let (p, dp, pm1, dpm1, ls) = eval_pair_deriv_complex(&sys, n, mid);
        let wr = dp * pm1 - p * dpm1;
        if wr == Complex64::new(0.0, 0.0) {
            return Complex64::new(0.0, 0.0);
        }
        (wr / wr.norm(), wr.norm().ln() + 2.0 * ls)
    } else {
        let (pz, pz1, lsz) = eval_pair_complex(&sys, n, z);
        let (pw, pw1, lsw) = eval_pair_complex(&sys, n, w);
        let diff = pz * pw1 - pw * pz1;
        if diff == Complex64::new(0.0, 0.0) {
            return Complex64::new(0.0, 0.0);
        }
        let q = diff / (z - w);
        (q / q.norm(), q.norm().ln() + lsz + lsw)
    };
    let total_re = ln_mag_q + exp_part.re - ln_h;
    let dir = q * Complex64::new(0.0, exp_part.im).exp();
    dir * total_re.exp()
}

const RESCALE_LIMIT: f64 = 1e120;

fn eval_pair_complex(sys: &PolySystem, n: usize, x: Complex64) -> (Complex64, Complex64, f64) {
    let mut pm1 = Complex64::new(0.0, 0.0);
    let mut p = Complex64::new(1.0, 0.0);
    let mut ls = 0.0f64;
    for m in 0..n {
        let (alpha, beta) = sys.recurrence(m);
        let next = (x - alpha) * p - beta * pm1;
        pm1 = p;
        p = next;
        let mag = p.norm().max(pm1.norm());
        if mag > RESCALE_LIMIT {
            p /= RESCALE_LIMIT;
            pm1 /= RESCALE_LIMIT;
            ls += RESCALE_LIMIT.ln();
        } else if mag > 0.0 && mag < 1.0 / RESCALE_LIMIT {
            p *= RESCALE_LIMIT;
            pm1 *= RESCALE_LIMIT;
            ls -= RESCALE_LIMIT.ln();
        }
    }
    (p, pm1, ls)
}

fn eval_pair_deriv_complex(
    sys: &PolySystem,
    n: usize,
    x: Complex64,
) -> (Complex64, Complex64, Complex64, Complex64, f64) {
    let (mut pm1, mut dpm1) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let (mut p, mut dp) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    let mut ls = 0.0f64;
    for m in 0..n {
        let (alpha, beta) = sys.recurrence(m);
        let next = (x - alpha) * p - beta * pm1;
        let dnext = p + (x - alpha) * dp - beta * dpm1;
        pm1 = p;
        dpm1 = dp;
        p = next;
        dp = dnext;
        let mag = p.norm().max(pm1.norm()).max(dp.norm()).max(dpm1.norm());
        if mag > RESCALE_LIMIT {
            p /= RESCALE_LIMIT;
            pm1 /= RESCALE_LIMIT;
            dp /= RESCALE_LIMIT;
            dpm1 /= RESCALE_LIMIT;
            ls += RESCALE_LIMIT.ln();
        } else if mag > 0.0 && mag < 1.0 / RESCALE_LIMIT {
            p *= RESCALE_LIMIT;
            pm1 *= RESCALE_LIMIT;
            dp *= RESCALE_LIMIT;
            dpm1 *= RESCALE_LIMIT;
            ls -= RESCALE_LIMIT.ln();
        }
    }
    (p, dp, pm1, dpm1, ls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{adaptive, gauss_laguerre, gauss_hermite, AdaptiveOpts, GaussLegendre};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn lue(a: f64, n: usize) -> KernelSpec {
        KernelSpec::new(PolySystem::laguerre(a).unwrap(), n).unwrap()
    }

    fn jue(a: f64, b: f64, n: usize) -> KernelSpec {
        KernelSpec::new(PolySystem::jacobi(a, b).unwrap(), n).unwrap()
    }

    #[test]
    fn lue_n1_kernel_is_exponential() {
        let ks = lue(0.0, 1);
        assert_relative_eq!(cd_kernel(&ks, 1.0, 1.0), (-1.0f64).exp(), max_relative = 1e-13);
        assert_relative_eq!(cd_kernel(&ks, 1.0, 2.0), (-1.5f64).exp(), max_relative = 1e-13);
        assert_eq!(cd_kernel(&ks, -1.0, 2.0), 0.0);
    }

    #[test]
    fn jue_n1_kernel_is_flat() {
        let ks = jue(0.0, 0.0, 1);
        assert_relative_eq!(cd_kernel(&ks, 0.3, 0.8), 1.0, max_relative = 1e-13);
        assert_relative_eq!(density(&ks, 0.5), 1.0, max_relative = 1e-13);
        assert_eq!(cd_kernel(&ks, 0.3, 1.2), 0.0);
    }

    #[test]
    fn rho2_truncated_values() {
        let ks = lue(0.0, 1);
        let d = density(&ks, 1.3);
        assert_relative_eq!(rho2_truncated(&ks, 1.3, 1.3), -d * d, max_relative = 1e-12);
        assert_relative_eq!(rho2_truncated(&ks, 1.0, 2.0), -(-3.0f64).exp(), max_relative = 1e-12);
        assert_eq!(rho2_truncated(&ks, 1.0, -0.5), 0.0);
    }

    // N-term sum of the kernel definition, kept as an oracle
    fn kernel_sum_oracle(ks: &KernelSpec, x: f64, y: f64) -> f64 {
        let ln_g = 0.5 * (ks.sys.ln_weight(x) + ks.sys.ln_weight(y));
        let mut acc = 0.0;
        for j in 0..ks.n {
            let px = orthopoly::eval_monic(&ks.sys, j, x);
            let py = orthopoly::eval_monic(&ks.sys, j, y);
            let term = px.mul(&py);
            if term.is_zero() {
                continue;
            }
            acc += term.signum() * (term.ln_abs() + ln_g - ks.sys.ln_norm(j)).exp();
        }
        acc
    }

    #[test]
    fn cd_ratio_matches_direct_sum() {
        for ks in [lue(0.0, 6), lue(1.5, 10), jue(0.5, 1.0, 8)] {
            let pts: &[(f64, f64)] = if ks.sys.family == Family::Laguerre {
                &[(0.5, 3.0), (2.0, 2.000001), (7.3, 0.1)]
            } else {
                &[(0.2, 0.7), (0.4, 0.400001), (0.9, 0.05)]
            };
            for &(x, y) in pts {
                let a = cd_kernel(&ks, x, y);
                let b = kernel_sum_oracle(&ks, x, y);
                assert_relative_eq!(a, b, max_relative = 1e-9, epsilon = 1e-12);
            }
        }
        let h = KernelSpec::new(PolySystem::hermite(), 7).unwrap();
        for &(x, y) in &[(0.0, 1.0), (-2.0, 2.0), (1.5, 1.5000001)] {
            assert_relative_eq!(
                cd_kernel(&h, x, y),
                kernel_sum_oracle(&h, x, y),
                max_relative = 1e-9,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn density_normalizes_to_n() {
        // LUE: Gauss-Laguerre quadrature of the density (weight factored out
        // would need the polynomial part; use the plain adaptive rule instead)
        for (a, n) in [(0.0, 5usize), (1.5, 8)] {
            let ks = lue(a, n);
            let r = adaptive(
                |x| density(&ks, x),
                0.0,
                4.0 * n as f64 + 2.0 * a + 60.0,
                AdaptiveOpts {
                    rel_tol: 1e-12,
                    min_depth: 6,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_relative_eq!(r.value, n as f64, max_relative = 1e-9);
        }
        for (a, b, n) in [(0.0, 0.0, 5usize), (2.5, 0.0, 12), (200.0, 0.0, 50)] {
            let ks = jue(a, b, n);
            let r = adaptive(|x| density(&ks, x), 0.0, 1.0, AdaptiveOpts {
                rel_tol: 1e-12,
                min_depth: 6,
                ..Default::default()
            })
            .unwrap();
            assert_relative_eq!(r.value, n as f64, max_relative = 1e-9);
        }
        // density normalization up to N = 50 for the LUE
        let ks = lue(0.0, 50);
        let r = adaptive(|x| density(&ks, x), 0.0, 280.0, AdaptiveOpts {
            rel_tol: 1e-12,
            min_depth: 7,
            ..Default::default()
        })
        .unwrap();
        assert_relative_eq!(r.value, 50.0, max_relative = 1e-9);
    }

    #[test]
    fn reproducing_property() {
        // ∫ K(x,z) K(z,y) dz = K(x,y), all three families, N <= 10
        let ks = lue(0.5, 6);
        let (x, y) = (1.0, 4.0);
        let r = adaptive(
            |z| cd_kernel(&ks, x, z) * cd_kernel(&ks, z, y),
            0.0,
            120.0,
            AdaptiveOpts {
                rel_tol: 1e-12,
                min_depth: 6,
                ..Default::default()
            },
        )
        .unwrap();
        assert_relative_eq!(r.value, cd_kernel(&ks, x, y), max_relative = 1e-8);

        let kj = jue(1.0, 0.0, 10);
        let (x, y) = (0.3, 0.6);
        let r = adaptive(
            |z| cd_kernel(&kj, x, z) * cd_kernel(&kj, z, y),
            0.0,
            1.0,
            AdaptiveOpts {
                rel_tol: 1e-12,
                min_depth: 6,
                ..Default::default()
            },
        )
        .unwrap();
        assert_relative_eq!(r.value, cd_kernel(&kj, x, y), max_relative = 1e-8);

        let kh = KernelSpec::new(PolySystem::hermite(), 9).unwrap();
        let (x, y) = (-0.7, 1.1);
        let r = adaptive(
            |z| cd_kernel(&kh, x, z) * cd_kernel(&kh, z, y),
            -30.0,
            30.0,
            AdaptiveOpts {
                rel_tol: 1e-12,
                min_depth: 6,
                ..Default::default()
            },
        )
        .unwrap();
        assert_relative_eq!(r.value, cd_kernel(&kh, x, y), max_relative = 1e-8);
    }

    #[test]
    fn prop2_identity_examples() {
        let (l, r) = verify_prop2(&lue(0.0, 1), 1.0, 2.0, 1e-5).unwrap();
        assert!((l - r).abs() < 1e-7, "{l} vs {r}");
        let (l, r) = verify_prop2(&lue(1.0, 5), 3.0, 7.0, 1e-5).unwrap();
        assert!((l - r).abs() < 1e-6, "{l} vs {r}");
        // near-diagonal
        let (l, r) = verify_prop2(&lue(0.0, 2), 1.5, 1.5 + 1e-3, 1e-5).unwrap();
        assert!((l - r).abs() < 1e-5, "{l} vs {r}");
        assert!(verify_prop2(&jue(0.0, 0.0, 2), 0.3, 0.5, 1e-5).is_err());
    }

    #[test]
    fn prop4_identity_examples() {
        // N=1, a=0, s=1/2: both sides vanish
        let (l, r) = verify_prop4(0.0, 1, 0.5, 1e-6).unwrap();
        assert!(l.abs() < 1e-9 && r.abs() < 1e-12, "{l} {r}");
        let (l, r) = verify_prop4(0.0, 3, 0.3, 1e-5).unwrap();
        assert!((l - r).abs() < 1e-6, "{l} vs {r}");
        let (l, r) = verify_prop4(2.0, 2, 0.8, 1e-5).unwrap();
        assert!((l - r).abs() < 1e-6, "{l} vs {r}");
    }

    #[test]
    fn diagonal_derivative_identity() {
        // d/dt [t K_N(t,t)] = -psi_N psi_{N-1} / h_{N-1} for the LUE
        for (a, n) in [(0.0, 4usize), (1.5, 10)] {
            let ks = lue(a, n);
            let h = 1e-6;
            for &t in &[0.8, 3.0, 11.0] {
                let f = |u: f64| u * density(&ks, u);
                let lhs = (f(t + h) - f(t - h)) / (2.0 * h);
                let rhs = -orthopoly::psi(&ks.sys, n, t)
                    .mul(&orthopoly::psi(&ks.sys, n - 1, t))
                    .to_f64()
                    / ks.sys.ln_norm(n - 1).exp();
                assert!((lhs - rhs).abs() < 1e-6, "a={a} n={n} t={t}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn complex_kernel_reduces_to_real() {
        for n in [1usize, 4, 9] {
            let ks = lue(0.0, n);
            for &(x, y) in &[(0.5, 2.0), (3.0, 3.0), (1.0, 1.0000001)] {
                let zc = lue_kernel_complex(n, Complex64::new(x, 0.0), Complex64::new(y, 0.0));
                let zr = cd_kernel(&ks, x, y);
                assert_relative_eq!(zc.re, zr, max_relative = 1e-10, epsilon = 1e-14);
                assert!(zc.im.abs() <= 1e-12 * zr.abs().max(1.0));
            }
        }
    }

    #[test]
    fn orthogonality_against_quadrature() {
        // ∫ w p_n p_m = h_n δ_{nm} with 200-point rules, n,m <= 20
        let check = |sys: &PolySystem, nodes: &[f64], lnw: &[f64]| {
            for n in 0..=20usize {
                for m in n..=20usize {
                    let mut acc = 0.0f64;
                    for (x, l) in nodes.iter().zip(lnw.iter()) {
                        let pn = orthopoly::eval_monic(sys, n, *x);
                        let pm = orthopoly::eval_monic(sys, m, *x);
                        let t = pn.mul(&pm);
                        if !t.is_zero() {
                            acc += t.signum() * (t.ln_abs() + l).exp();
                        }
                    }
                    if n == m {
                        let h = sys.ln_norm(n).exp();
                        assert_relative_eq!(acc, h, max_relative = 1e-10);
                    } else {
                        let scale = (0.5 * (sys.ln_norm(n) + sys.ln_norm(m))).exp();
                        assert!(
                            (acc / scale).abs() < 1e-10,
                            "cross term n={n} m={m}: {acc}"
                        );
                    }
                }
            }
        };
        for &a in &[0.0, 2.0] {
            let sys = PolySystem::laguerre(a).unwrap();
            let rule = gauss_laguerre(200, a).unwrap();
            check(&sys, &rule.nodes, &rule.ln_weights);
        }
        {
            let sys = PolySystem::hermite();
            let rule = gauss_hermite(200).unwrap();
            check(&sys, &rule.nodes, &rule.ln_weights);
        }
        {
            // Jacobi via a 200-point Gauss-Legendre rule on (0,1), a=1, b=2
            let sys = PolySystem::jacobi(1.0, 2.0).unwrap();
            let gl = GaussLegendre::new(200);
            let nodes: Vec<f64> = gl.nodes.iter().map(|t| 0.5 * (t + 1.0)).collect();
            let lnw: Vec<f64> = gl
                .weights
                .iter()
                .zip(nodes.iter())
                .map(|(w, x)| (0.5 * w).ln() + sys.ln_weight(*x))
                .collect();
            check(&sys, &nodes, &lnw);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn kernel_symmetry_is_exact(x in 0.01f64..40.0, y in 0.01f64..40.0) {
            let ks = lue(0.5, 6);
            prop_assert_eq!(cd_kernel(&ks, x, y), cd_kernel(&ks, y, x));
        }
    }
}
