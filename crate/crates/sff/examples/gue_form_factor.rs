//! GUE structure function: the one-dimensional kernel-integral route, the
//! Hermite-transform oracle, the regularized covariance, and the global
//! scaling limit.
//!
//!     cargo run --example gue_form_factor

use num_complex::Complex64;
use sff::structure::{cov_gue, s_gue_brezin_hikami, s_gue_direct_oracle};

fn main() -> sff::Result<()> {
    let n = 8usize;
    println!("GUE structure function S_N(k), N = {n}");
    println!();
    println!("{:>5}  {:>16}  {:>16}  {:>9}", "k", "kernel integral", "hermite oracle", "abs diff");
    for i in 1..=8 {
        let k = 0.5 * i as f64;
        let bh = s_gue_brezin_hikami(n, k)?;
        let or = s_gue_direct_oracle(n, k)?;
        println!(
            "{:5.2}  {:16.10}  {:16.10}  {:9.2e}",
            k,
            bh.value,
            or.value,
            (bh.value - or.value).abs()
        );
    }

    // regularized covariance of the conjugate pair k1 = k + i gamma,
    // k2 = k - i gamma: real by symmetry, reduces to S_N at gamma = 0
    println!();
    let k = 1.0;
    for gamma in [0.0, 0.25, 0.5, 1.0] {
        let c = cov_gue(n, Complex64::new(k, gamma), Complex64::new(k, -gamma))?;
        println!("cov at k = {k}, gamma = {gamma}: {:.10} (im {:.1e})", c.re, c.im.abs());
    }

    // global limit: (1/N) S_N(2 sqrt(2N) tau) approaches the closed form
    // (2/pi)(tau sqrt(1-tau^2) + Arcsin tau), saturating at 1 for tau >= 1
    println!();
    let n = 200usize;
    let scale = 2.0 * (2.0 * n as f64).sqrt();
    println!("global limit at N = {n}:");
    println!("{:>5}  {:>12}  {:>12}", "tau", "finite N", "closed form");
    for tau in [0.25f64, 0.5, 0.75, 0.9, 1.0, 1.25] {
        let got = s_gue_brezin_hikami(n, scale * tau)?.value / n as f64;
        let want = if tau >= 1.0 {
            1.0
        } else {
            2.0 / std::f64::consts::PI * (tau * (1.0 - tau * tau).sqrt() + tau.asin())
        };
        println!("{:5.2}  {:12.6}  {:12.6}", tau, got, want);
    }
    Ok(())
}
