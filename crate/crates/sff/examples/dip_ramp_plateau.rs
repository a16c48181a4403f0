//! The limiting dip-ramp-plateau curves: with the Laguerre parameter scaled
//! as a = alpha N the structure function per eigenvalue develops a plateau at
//! k_c = sqrt((1-c)/c), while at fixed a (alpha = 0) it is (2/pi) Arctan k
//! and the plateau never arrives.
//!
//!     cargo run --example dip_ramp_plateau

use sff::asymptotics::{kc, s_inf, s_inf_expansion, Regime, ScalingParams};
use sff::structure::{s_lue_jue, StructureQuery};

fn main() -> sff::Result<()> {
    println!("limiting curves s_inf(k; alpha) = lim (1/N) S_N(k) |_{{a = alpha N}}");
    println!();
    print!("{:>5}", "k");
    let alphas = [0.0, 0.5, 2.0, 8.0];
    for alpha in alphas {
        print!("  {:>12}", format!("alpha={alpha}"));
    }
    println!();
    for i in 0..=16 {
        let k = 0.25 * i as f64;
        print!("{:5.2}", k);
        for alpha in alphas {
            print!("  {:12.8}", s_inf(k, alpha));
        }
        println!();
    }

    println!();
    for alpha in [0.5, 2.0, 8.0] {
        let sp = ScalingParams::new(alpha)?;
        println!(
            "alpha = {alpha}: c = {:.6}, plateau onset k_c = {:.6}",
            sp.c,
            kc(alpha)?
        );
    }
    println!("alpha = 0: no plateau; s_inf(k, 0) = (2/pi) Arctan k");

    // expansions around the interesting regimes
    println!();
    let k = 0.05;
    println!(
        "small-k, alpha=0:   s_inf = {:.8}, expansion = {:.8}",
        s_inf(k, 0.0),
        s_inf_expansion(k, 0.0, Regime::SmallK)?
    );
    let k = 40.0;
    println!(
        "large-k, alpha=0:   s_inf = {:.8}, expansion = {:.8}",
        s_inf(k, 0.0),
        s_inf_expansion(k, 0.0, Regime::LargeK)?
    );
    let k_c = kc(2.0)?;
    let k = k_c - 0.05;
    println!(
        "near k_c, alpha=2:  s_inf = {:.8}, expansion = {:.8}",
        s_inf(k, 2.0),
        s_inf_expansion(k, 2.0, Regime::NearKc)?
    );

    // finite-N convergence towards the alpha = 1 curve
    println!();
    println!("finite-N convergence at alpha = 1, k = 1 (target {:.8}):", s_inf(1.0, 1.0));
    for n in [25usize, 50, 100, 200] {
        let q = StructureQuery::new(n, n as f64, 1.0)?;
        let v = s_lue_jue(&q)?.value / n as f64;
        println!("  N = {n:>3}: (1/N) S_N = {v:.8}  (gap {:+.2e})", v - s_inf(1.0, 1.0));
    }
    Ok(())
}
