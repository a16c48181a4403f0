//! Gaussian quadrature rules and an adaptive panel integrator.
//!
//! The Laguerre and Hermite rules carry `ln`-weights: for several hundred
//! nodes the raw weights underflow while the integrand factors overflow, so
//! callers combine everything in log space before exponentiating.

use crate::eigen::tridiagonal_eigenvalues;
use crate::orthopoly::{self, PolySystem};
use crate::{Error, Result};
use num_complex::Complex64;

/// Gauss–Legendre rule on [-1, 1].
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes and weights by Newton iteration on the Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0f64; n];
        let mut weights = vec![0.0f64; n];
        let nf = n as f64;
        for i in 0..(n + 1) / 2 {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut pp = 0.0;
            for _ in 0..100 {
                let mut p1 = 1.0f64;
                let mut p2 = 0.0f64;
                for j in 0..n {
                    let jf = j as f64;
                    let p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
                }
                pp = nf * (z * p1 - p2) / (z * z - 1.0);
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() < 1e-15 {
                    break;
                }
            }
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            let w = 2.0 / ((1.0 - z * z) * pp * pp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Integrate f over [a, b].
    pub fn integrate<T: IntegrandValue>(&self, a: f64, b: f64, f: impl Fn(f64) -> T) -> T {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = T::ZERO;
        for (x, w) in self.nodes.iter().zip(self.weights.iter()) {
            acc = acc.add(f(mid + half * x).scale(*w));
        }
        acc.scale(half)
    }
}

/// A quadrature rule whose weights are stored as logarithms (all Gaussian
/// weights are positive).
#[derive(Clone, Debug)]
pub struct LogWeightRule {
    pub nodes: Vec<f64>,
    pub ln_weights: Vec<f64>,
}

/// Nodes from the spectral factorization of the Jacobi matrix, polished by
/// Newton steps on the monic recurrence; weights from
/// w_i = h_{n-1} / (p_{n-1}(x_i) p_n'(x_i)) assembled in log space.
fn golub_welsch_log(sys: &PolySystem, n: usize) -> Result<LogWeightRule> {
    assert!(n >= 1);
    let mut diag = vec![0.0f64; n];
    let mut off = vec![0.0f64; n.max(1) - 1];
    for i in 0..n {
        let (alpha, beta) = sys.recurrence(i);
        diag[i] = alpha;
        if i > 0 {
            off[i - 1] = beta.sqrt();
        }
    }
    let mut nodes = tridiagonal_eigenvalues(diag, &off)?;
    let ln_h = sys.ln_norm(n - 1);
    let mut ln_weights = vec![0.0f64; n];
    for (i, x) in nodes.iter_mut().enumerate() {
        // Newton polish
        for _ in 0..3 {
            let pd = orthopoly::eval_pair_deriv(sys, n, *x);
            if pd.dp == 0.0 {
                break;
            }
            let step = pd.p / pd.dp;
            *x -= step;
            if step.abs() <= 1e-15 * x.abs().max(1e-300) {
                break;
            }
        }
        let pd = orthopoly::eval_pair_deriv(sys, n, *x);
        let prod_sign = (pd.dp * pd.pm1).signum();
        if prod_sign <= 0.0 {
            return Err(Error::NoConvergence(format!(
                "quadrature weight sign failure at node {i} (x = {x})"
            )));
        }
        ln_weights[i] =
            ln_h - (pd.dp.abs().ln() + pd.pm1.abs().ln() + 2.0 * pd.log_scale);
    }
    Ok(LogWeightRule { nodes, ln_weights })
}

/// Generalized Gauss–Laguerre rule for the weight x^alpha e^{-x} on (0, ∞).
pub fn gauss_laguerre(n: usize, alpha: f64) -> Result<LogWeightRule> {
    let sys = PolySystem::laguerre(alpha)?;
    golub_welsch_log(&sys, n)
}

/// Gauss–Hermite rule for the weight e^{-x^2} on ℝ.
pub fn gauss_hermite(n: usize) -> Result<LogWeightRule> {
    let sys = PolySystem::hermite();
    golub_welsch_log(&sys, n)
}

/// Value types the adaptive integrator can accumulate.
pub trait IntegrandValue: Copy {
    const ZERO: Self;
    fn add(self, o: Self) -> Self;
    fn sub(self, o: Self) -> Self;
    fn scale(self, s: f64) -> Self;
    fn norm(self) -> f64;
}

impl IntegrandValue for f64 {
    const ZERO: f64 = 0.0;
    fn add(self, o: f64) -> f64 {
        self + o
    }
    fn sub(self, o: f64) -> f64 {
        self - o
    }
    fn scale(self, s: f64) -> f64 {
        self * s
    }
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl IntegrandValue for Complex64 {
    const ZERO: Complex64 = Complex64::new(0.0, 0.0);
    fn add(self, o: Complex64) -> Complex64 {
        self + o
    }
    fn sub(self, o: Complex64) -> Complex64 {
        self - o
    }
    fn scale(self, s: f64) -> Complex64 {
        self * s
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
}

/// Options for [`adaptive`].
#[derive(Clone, Copy, Debug)]
pub struct AdaptiveOpts {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// panels are pre-split to 2^min_depth before acceptance is considered,
    /// guarding against aliased oscillatory integrands
    pub min_depth: u32,
    pub max_depth: u32,
}

impl Default for AdaptiveOpts {
    fn default() -> Self {
        AdaptiveOpts {
            rel_tol: 1e-11,
            abs_tol: 1e-300,
            min_depth: 4,
            max_depth: 44,
        }
    }
}

/// Integration result with the accumulated refinement error estimate.
#[derive(Clone, Copy, Debug)]
pub struct Integral<T> {
    pub value: T,
    pub est_error: f64,
    pub panels: usize,
}

/// Adaptive bisection with a fixed-order Gauss–Legendre panel rule. Panels
/// are processed in deterministic order (left before right), so the reduction
/// order, so the floating-point result does not depend on any
/// parallel scheduling.
pub fn adaptive<T: IntegrandValue>(
    f: impl Fn(f64) -> T,
    a: f64,
    b: f64,
    opts: AdaptiveOpts,
) -> Result<Integral<T>> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        if a == b {
            return Ok(Integral {
                value: T::ZERO,
                est_error: 0.0,
                panels: 0,
            });
        }
        return Err(Error::InvalidParameter(format!(
            "bad integration interval [{a}, {b}]"
        )));
    }
    let rule = GaussLegendre::new(15);
    let whole = rule.integrate(a, b, &f);
    // running magnitude scale: the whole-interval estimate alone can alias
    // an oscillatory integrand to ~0, so panel magnitudes feed back into it
    let mut scale = whole.norm().max(opts.abs_tol);
    let total_len = b - a;

    struct Frame<T> {
        a: f64,
        b: f64,
        coarse: T,
        depth: u32,
    }
    let mut stack = vec![Frame {
        a,
        b,
        coarse: whole,
        depth: 0,
    }];
    let mut value = T::ZERO;
    let mut est_error = 0.0f64;
    let mut panels = 0usize;
    // left-first depth-first traversal accumulates panels left-to-right
    while let Some(fr) = stack.pop() {
        let mid = 0.5 * (fr.a + fr.b);
        let left = rule.integrate(fr.a, mid, &f);
        let right = rule.integrate(mid, fr.b, &f);
        let fine = left.add(right);
        let err = fine.sub(fr.coarse).norm();
        scale = scale.max(left.norm() + right.norm());
        let local_tol = opts.rel_tol * scale * ((fr.b - fr.a) / total_len).max(1e-6);
        if fr.depth >= opts.min_depth && (err <= local_tol || fr.depth >= opts.max_depth) {
            // at max depth the panel is accepted and its defect recorded
            value = value.add(fine);
            est_error += err;
            panels += 2;
            continue;
        }
        // push right first so the left panel is processed first
        stack.push(Frame {
            a: mid,
            b: fr.b,
            coarse: right,
            depth: fr.depth + 1,
        });
        stack.push(Frame {
            a: fr.a,
            b: mid,
            coarse: left,
            depth: fr.depth + 1,
        });
    }
    Ok(Integral {
        value,
        est_error,
        panels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::ln_gamma;
    use approx::assert_relative_eq;

    #[test]
    fn legendre_exactness() {
        let rule = GaussLegendre::new(8);
        // exact for degree <= 15
        for k in 0..=15u32 {
            let got = rule.integrate(0.0, 2.0, |x| x.powi(k as i32));
            let want = 2.0f64.powi(k as i32 + 1) / (k as f64 + 1.0);
            assert_relative_eq!(got, want, max_relative = 1e-13);
        }
        let w: f64 = rule.weights.iter().sum();
        assert_relative_eq!(w, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn laguerre_rule_moments() {
        // ∫ x^a e^{-x} x^m dx = Γ(a+m+1)
        for &alpha in &[0.0, 0.5, 2.0] {
            let rule = gauss_laguerre(40, alpha).unwrap();
            for m in 0..10u32 {
                let mut acc = 0.0;
                for (x, lw) in rule.nodes.iter().zip(rule.ln_weights.iter()) {
                    acc += (lw + (m as f64) * x.ln()).exp();
                }
                let want = ln_gamma(alpha + m as f64 + 1.0).exp();
                assert_relative_eq!(acc, want, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn laguerre_rule_large_n_stays_finite() {
        let rule = gauss_laguerre(520, 1.5).unwrap();
        assert!(rule.nodes.iter().all(|x| x.is_finite() && *x > 0.0));
        assert!(rule.ln_weights.iter().all(|w| w.is_finite()));
        // zeroth moment still Γ(a+1)
        let mut acc = 0.0;
        for lw in &rule.ln_weights {
            acc += lw.exp();
        }
        assert_relative_eq!(acc, ln_gamma(2.5).exp(), max_relative = 1e-10);
        // nodes strictly increasing
        for w in rule.nodes.windows(2) {
            assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn hermite_rule_moments() {
        let rule = gauss_hermite(30).unwrap();
        let m0: f64 = rule.ln_weights.iter().map(|w| w.exp()).sum();
        assert_relative_eq!(m0, std::f64::consts::PI.sqrt(), max_relative = 1e-12);
        // ∫ x^2 e^{-x^2} = sqrt(pi)/2
        let mut m2 = 0.0;
        for (x, lw) in rule.nodes.iter().zip(rule.ln_weights.iter()) {
            m2 += x * x * lw.exp();
        }
        assert_relative_eq!(m2, 0.5 * std::f64::consts::PI.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn adaptive_known_integrals() {
        let r = adaptive(|x: f64| 4.0 / (1.0 + x * x), 0.0, 1.0, AdaptiveOpts::default()).unwrap();
        assert_relative_eq!(r.value, std::f64::consts::PI, max_relative = 1e-13);
        // oscillatory
        let r = adaptive(|x: f64| (20.0 * x).sin(), 0.0, std::f64::consts::PI, AdaptiveOpts::default()).unwrap();
        assert!(r.value.abs() < 1e-12);
        // complex-valued
        let r = adaptive(
            |x: f64| Complex64::new(0.0, x).exp(),
            0.0,
            1.0,
            AdaptiveOpts::default(),
        )
        .unwrap();
        assert_relative_eq!(r.value.re, 1.0f64.sin(), max_relative = 1e-12);
        assert_relative_eq!(r.value.im, 1.0 - 1.0f64.cos(), max_relative = 1e-12);
    }

    #[test]
    fn adaptive_endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2, integrable singularity handled by bisection
        let r = adaptive(
            |x: f64| x.powf(-0.5),
            0.0,
            1.0,
            AdaptiveOpts {
                rel_tol: 1e-10,
                ..Default::default()
            },
        )
        .unwrap();
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-8);
    }

    #[test]
    fn adaptive_empty_and_bad_intervals() {
        let r = adaptive(|_| 1.0f64, 2.0, 2.0, AdaptiveOpts::default()).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(adaptive(|_| 1.0f64, 3.0, 2.0, AdaptiveOpts::default()).is_err());
    }
}


