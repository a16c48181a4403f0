//! Spectral densities at finite N and in the scaled limits: correlation
//! kernels on the diagonal, Marchenko-Pastur and Wachter global densities,
//! and the Bessel hard-edge profile with its finite-N convergence rate.
//!
//!     cargo run --example spectral_densities

use sff::asymptotics::{hard_edge_density, hard_edge_rate_check, mp_density, wachter_density};
use sff::kernels::{density, KernelSpec};
use sff::orthopoly::PolySystem;

fn main() -> sff::Result<()> {
    // finite-N LUE density against its global limit
    let n = 50usize;
    let ks = KernelSpec::new(PolySystem::laguerre(0.0)?, n)?;
    println!("LUE eigenvalue density at N = {n} vs the Marchenko-Pastur limit");
    println!("{:>6}  {:>12}  {:>12}", "x", "4 rho(4Nx)", "mp(x)");
    for i in 1..=9 {
        let x = 0.1 * i as f64;
        let finite = 4.0 * density(&ks, 4.0 * n as f64 * x);
        println!("{:6.2}  {:12.6}  {:12.6}", x, finite / n as f64, mp_density(x, 0.0));
    }

    println!();
    println!("Wachter density of the b = 0 Jacobi ensemble (alpha = 2: support ({}, 1))", 0.25);
    println!("{:>6}  {:>12}  {:>12}", "x", "alpha=0", "alpha=2");
    for i in 1..=9 {
        let x = 0.1 * i as f64;
        println!(
            "{:6.2}  {:12.6}  {:12.6}",
            x,
            wachter_density(x, 0.0),
            wachter_density(x, 2.0)
        );
    }

    // hard edge: the scaled JUE density converges to the Bessel profile
    println!();
    println!("hard-edge profile rho(x) = (J0(sqrt x)^2 + J1(sqrt x)^2)/4");
    println!("{:>6}  {:>12}  {:>14}  {:>14}", "x", "limit", "N=50 scaled", "N=100 scaled");
    for &x in &[0.5f64, 2.0, 5.0, 10.0, 20.0] {
        let scaled = |n: usize| -> sff::Result<f64> {
            let ks = KernelSpec::new(PolySystem::jacobi(0.0, 0.0)?, n)?;
            let scale = 4.0 * (n as f64) * (n as f64);
            Ok(density(&ks, x / scale) / scale)
        };
        println!(
            "{:6.2}  {:12.8}  {:14.8}  {:14.8}",
            x,
            hard_edge_density(x),
            scaled(50)?,
            scaled(100)?
        );
    }

    // with b != 0 the convergence slows to O(1/N); the probe returns the
    // residual and the predicted first-order term
    println!();
    println!("convergence-rate probe at x = 5, b = 1:");
    for n in [50usize, 100, 200] {
        let (residual, predicted) = hard_edge_rate_check(n, 5.0, 1.0)?;
        println!("  N = {n:>3}: residual {residual:+.3e}, first-order prediction {predicted:+.3e}");
    }
    Ok(())
}
