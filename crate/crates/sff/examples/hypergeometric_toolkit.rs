//! The special-function layer on its own: terminating Gauss sums, the
//! Laplace-Fourier transform closed form against its brute-force oracle, the
//! two transformation identities used by the exact routes, and the Bessel
//! functions behind the hard edge.
//!
//!     cargo run --example hypergeometric_toolkit

use num_complex::Complex64;
use sff::hypergeom::{bessel_j, hyp0f1, hyp2f1_terminating, pfaff_kummer_check, poly_identity_y6_check};
use sff::transforms::{density_fl_transform, laguerre_transform, laguerre_transform_oracle};

fn main() -> sff::Result<()> {
    // terminating Gauss sums evaluate exactly, no convergence test needed
    println!("2F1(-3, 2.5, 1.5; -0.8)   = {:.12}", hyp2f1_terminating(3, 2.5, 1.5, -0.8)?);
    println!("0F1(2; 1)                 = {:.12}", hyp0f1(2.0, 1.0)?);

    // transform closed form vs termwise-exact oracle
    println!();
    println!("Laplace-Fourier transform I_jk(s) of L_j L_k x^a e^{{-x}}:");
    for (j, k, a, s) in [
        (2usize, 5usize, 0.5, Complex64::new(0.3, 0.0)),
        (0, 15, 0.0, Complex64::new(-0.7, 0.0)),
        (4, 4, 2.0, Complex64::new(0.2, 0.4)),
    ] {
        let cf = laguerre_transform(j, k, a, s)?;
        let or = laguerre_transform_oracle(j, k, a, s)?;
        println!(
            "  ({j:>2},{k:>2}) a={a} s={s}: closed {:+.9e}, oracle {:+.9e}, rel {:.1e}",
            cf.value,
            or.value,
            (cf.value - or.value).norm() / or.value.norm()
        );
    }

    // density transform: first moment at s = 0 is N(N + a)
    let t = density_fl_transform(6, 1.5, Complex64::new(0.0, 0.0))?;
    println!();
    println!("density first moment N(N+a) at N=6, a=1.5: {:.10}", t.value.re);

    // the two identities exercised by the verification suite
    println!();
    let (l, r) = pfaff_kummer_check(-7.0, -9.0, 1.5, -4.0)?;
    println!("pfaff-kummer:  lhs {l:+.12e}  rhs {r:+.12e}");
    let (l, r) = poly_identity_y6_check(3, 11, 0.5, 0.8)?;
    println!("index swap:    lhs {l:+.12e}  rhs {r:+.12e}");

    // Bessel J0/J1 power the hard-edge density
    println!();
    println!("{:>6}  {:>14}  {:>14}", "x", "J0", "J1");
    for &x in &[0.0f64, 1.0, 2.404825557695773, 10.0, 50.0] {
        println!("{:6.2}  {:14.10}  {:14.10}", x, bessel_j(0, x), bessel_j(1, x));
    }
    Ok(())
}
