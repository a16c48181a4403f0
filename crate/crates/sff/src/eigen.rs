//! Eigenvalues of complex Hermitian matrices: Householder reduction to real
//! symmetric tridiagonal form followed by implicit-shift QL. Eigenvalues
//! only; no eigenvectors are accumulated.

use crate::{Error, Result};
use num_complex::Complex64;

/// Dense Hermitian matrix in row-major order. Only the values on and below
/// the diagonal are trusted; the strict upper triangle is reconstructed by
/// conjugate symmetry.
pub(crate) struct Hermitian {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl Hermitian {
    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex64 {
        if i >= j {
            self.data[i * self.n + j]
        } else {
            self.data[j * self.n + i].conj()
        }
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: Complex64) {
        debug_assert!(i >= j);
        let n = self.n;
        self.data[i * n + j] = v;
    }
}

/// Reduce to real symmetric tridiagonal form (diagonal d, subdiagonal e) by
/// unitary Householder similarity transforms. The complex subdiagonal phases
/// are dropped: a diagonal unitary similarity makes them real without
/// changing the spectrum.
fn tridiagonalize(a: &mut Hermitian) -> (Vec<f64>, Vec<f64>) {
    let n = a.n;
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n.max(1) - 1];
    if n == 1 {
        d[0] = a.at(0, 0).re;
        return (d, e);
    }
    let mut u = vec![Complex64::new(0.0, 0.0); n];
    let mut p = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n - 2 {
        // annihilate column j below the first subdiagonal
        let mut norm2 = 0.0f64;
        for i in j + 1..n {
            norm2 += a.at(i, j).norm_sqr();
        }
        let x0 = a.at(j + 1, j);
        let beta = norm2.sqrt();
        if beta == 0.0 {
            e[j] = 0.0;
            continue;
        }
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * beta;
        // Householder vector u = x - alpha e1, |u|^2 = 2 beta (beta + |x0|)
        let unorm2 = 2.0 * beta * (beta + x0.norm());
        if unorm2 == 0.0 {
            e[j] = beta;
            continue;
        }
        let tau = 2.0 / unorm2;
        for i in j + 1..n {
            u[i] = a.at(i, j);
        }
        u[j + 1] -= alpha;
        // p = tau * B u on the trailing block B = A[j+1.., j+1..]
        for i in j + 1..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in j + 1..n {
                acc += a.at(i, l) * u[l];
            }
            p[i] = tau * acc;
        }
        // w = p - (tau/2)(u^H p) u ; B -= u w^H + w u^H
        let mut uhp = Complex64::new(0.0, 0.0);
        for i in j + 1..n {
            uhp += u[i].conj() * p[i];
        }
        let kk = 0.5 * tau * uhp.re; // u^H B u is real for Hermitian B
        for i in j + 1..n {
            p[i] -= kk * u[i];
        }
        for i in j + 1..n {
            for l in j + 1..=i {
                let v = a.at(i, l) - u[i] * p[l].conj() - p[i] * u[l].conj();
                a.set(i, l, v);
            }
        }
        a.set(j + 1, j, alpha);
        e[j] = alpha.norm();
    }
    e[n - 2] = a.at(n - 1, n - 2).norm();
    for i in 0..n {
        d[i] = a.at(i, i).re;
    }
    (d, e)
}

/// All eigenvalues of a symmetric tridiagonal matrix by the implicit-shift
/// QL iteration. `d` is the diagonal, `e` the subdiagonal (length n-1).
/// Returns eigenvalues in ascending order.
pub(crate) fn tridiagonal_eigenvalues(mut d: Vec<f64>, e: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    if n == 0 {
        return Ok(d);
    }
    let mut e: Vec<f64> = {
        let mut v = e.to_vec();
        v.push(0.0);
        v
    };
    for l in 0..n {
        let mut iter = 0;
        loop {
            // find the active block end
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::EigenFailure);
            }
            // implicit shift from the 2x2 at the start of the block
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut i = m;
            while i > l {
                let f = s * e[i - 1];
                let b = c * e[i - 1];
                r = f.hypot(g);
                e[i] = r;
                if r == 0.0 {
                    d[i] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i] - p;
                r = (d[i - 1] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i] = g + p;
                g = c * r - b;
                i -= 1;
            }
            if r == 0.0 && i > l {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(d)
}

/// Eigenvalues of a dense complex Hermitian matrix, ascending.
pub(crate) fn hermitian_eigenvalues(n: usize, data: Vec<Complex64>) -> Result<Vec<f64>> {
    debug_assert_eq!(data.len(), n * n);
    let mut a = Hermitian { n, data };
    let (d, e) = tridiagonalize(&mut a);
    tridiagonal_eigenvalues(d, &e)
}
