//! Command surface behind the `sff` binary: structure-function tables,
//! asymptotic curves, the cross-module verification suite and Monte Carlo
//! comparisons, all emitted as CSV with LF line endings and shortest
//! round-trip float formatting.

use crate::asymptotics::{kc, s_inf, s_inf_expansion, sine_kernel_slope, Regime};
use crate::hypergeom::{pfaff_kummer_check, poly_identity_y6_check};
use crate::kernels::{verify_prop2, verify_prop4, KernelSpec};
use crate::montecarlo::{estimate_structure_mc, McConfig};
use crate::orthopoly::PolySystem;
use crate::structure::{
    s_gue_brezin_hikami, s_gue_direct_oracle, s_lue_jue, s_lue_kernel_sum, s_lue_lhs_quadrature,
    Precision, StructureQuery,
};
use crate::transforms::{
    density_fl_transform, density_moment_quadrature, laguerre_transform, laguerre_transform_oracle,
};
use crate::Error;
use num_complex::Complex64;
use std::io::Write;

/// Failures surfaced by the command layer, mapped to process exit codes by
/// the binary: invalid parameters -> 2, numerical/runtime failures -> 3.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::PrecisionLimit(..) => CliError::Invalid(e.to_string()),
            Error::NoConvergence(_) | Error::EigenFailure => CliError::Numerical(e.to_string()),
        }
    }
}

/// Grid spacing selector for `min:max:points:spacing`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// A k-grid specification.
#[derive(Clone, Copy, Debug)]
pub struct KGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl KGrid {
    /// Parse the `min:max:points:spacing` syntax.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(CliError::Invalid(format!(
                "k-grid '{s}' must have the form min:max:points:spacing"
            )));
        }
        let min: f64 = parts[0]
            .parse()
            .map_err(|_| CliError::Invalid(format!("bad k-grid minimum '{}'", parts[0])))?;
        let max: f64 = parts[1]
            .parse()
            .map_err(|_| CliError::Invalid(format!("bad k-grid maximum '{}'", parts[1])))?;
        let points: usize = parts[2]
            .parse()
            .map_err(|_| CliError::Invalid(format!("bad k-grid point count '{}'", parts[2])))?;
        let spacing = match parts[3] {
            "linear" => Spacing::Linear,
            "log" => Spacing::Log,
            other => {
                return Err(CliError::Invalid(format!(
                    "k-grid spacing must be 'linear' or 'log', got '{other}'"
                )))
            }
        };
        let grid = KGrid {
            min,
            max,
            points,
            spacing,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.min >= 0.0) || !self.min.is_finite() || !self.max.is_finite() {
            return Err(CliError::Invalid(format!(
                "k-grid bounds must be finite with min >= 0, got {}:{}",
                self.min, self.max
            )));
        }
        if self.max <= self.min {
            return Err(CliError::Invalid(format!(
                "k-grid needs max > min, got {}:{}",
                self.min, self.max
            )));
        }
        if self.points < 2 {
            return Err(CliError::Invalid(format!(
                "k-grid needs at least 2 points, got {}",
                self.points
            )));
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return Err(CliError::Invalid(
                "log spacing requires k_min > 0".to_string(),
            ));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.min + t * (self.max - self.min),
                    Spacing::Log => (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }
}

/// Route selector for the `structure` command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodArg {
    Jue,
    Kernel,
    Mc,
    All,
}

impl MethodArg {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "jue" => Ok(MethodArg::Jue),
            "kernel" => Ok(MethodArg::Kernel),
            "mc" => Ok(MethodArg::Mc),
            "all" => Ok(MethodArg::All),
            other => Err(CliError::Invalid(format!(
                "method must be one of jue|kernel|mc|all, got '{other}'"
            ))),
        }
    }
}

/// Precision selector (`--precision double|extended`).
pub fn parse_precision(s: &str) -> Result<Precision, CliError> {
    match s {
        "double" => Ok(Precision::Double),
        "extended" => Ok(Precision::Extended),
        other => Err(CliError::Invalid(format!(
            "precision must be 'double' or 'extended', got '{other}'"
        ))),
    }
}

/// Parameters of the `structure` command.
#[derive(Clone, Debug)]
pub struct StructureArgs {
    pub n: usize,
    pub a: f64,
    pub grid: KGrid,
    pub method: MethodArg,
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
    pub precision: Precision,
}

/// Parameters of the `asymptotic` command.
#[derive(Clone, Debug)]
pub struct AsymptoticArgs {
    pub alpha: f64,
    pub grid: KGrid,
}

/// Parameters of the `montecarlo` command.
#[derive(Clone, Debug)]
pub struct MontecarloArgs {
    pub size: usize,
    pub rows: usize,
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
    pub grid: KGrid,
}

fn mc_rows_for(n: usize, a: f64) -> Option<usize> {
    if a >= 0.0 && a.fract() == 0.0 {
        Some(n + a as usize)
    } else {
        None
    }
}

/// Write the structure-function table: header `k,value,method,est_error`,
/// one row per requested route per grid point.
pub fn cmd_structure(args: &StructureArgs, out: &mut dyn Write) -> Result<(), CliError> {
    args.grid.validate()?;
    // validate (N, a) before any work
    StructureQuery::new(args.n, args.a, 0.0)?;
    let want_jue = matches!(args.method, MethodArg::Jue | MethodArg::All);
    let want_kernel = matches!(args.method, MethodArg::Kernel | MethodArg::All);
    let want_mc = matches!(args.method, MethodArg::Mc | MethodArg::All);
    let mc_rows = mc_rows_for(args.n, args.a);
    if args.method == MethodArg::Mc && mc_rows.is_none() {
        return Err(CliError::Invalid(format!(
            "the Monte Carlo route needs an integer Laguerre parameter a >= 0, got a = {}",
            args.a
        )));
    }
    writeln!(out, "k,value,method,est_error")?;
    for k in args.grid.values() {
        let q = StructureQuery::new(args.n, args.a, k)?;
        if want_jue {
            let r = s_lue_jue(&q)?;
            writeln!(out, "{},{},jue,{}", k, r.value, r.est_error)?;
        }
        if want_kernel {
            let r = s_lue_kernel_sum(&q, args.precision)?;
            writeln!(out, "{},{},kernel,{}", k, r.value, r.est_error)?;
        }
        if want_mc {
            if let Some(rows) = mc_rows {
                let cfg = McConfig::new(args.n, rows, args.samples, args.seed)?
                    .with_workers(args.workers)?;
                let est = estimate_structure_mc(&cfg, k)?;
                writeln!(out, "{},{},mc,{}", k, est.mean, est.std_error)?;
            }
        }
    }
    Ok(())
}

/// Write the limiting-curve table: header `k,s_inf,regime` with the regime
/// flipping from ramp to plateau at the first grid point >= k_c.
pub fn cmd_asymptotic(args: &AsymptoticArgs, out: &mut dyn Write) -> Result<(), CliError> {
    args.grid.validate()?;
    if !(args.alpha >= 0.0) || !args.alpha.is_finite() {
        return Err(CliError::Invalid(format!(
            "alpha = {} must be finite and >= 0",
            args.alpha
        )));
    }
    let k_c = if args.alpha > 0.0 {
        Some(kc(args.alpha)?)
    } else {
        None
    };
    writeln!(out, "k,s_inf,regime")?;
    for k in args.grid.values() {
        let regime = match k_c {
            Some(kc) if k >= kc => "plateau",
            _ => "ramp",
        };
        writeln!(out, "{},{},{}", k, s_inf(k, args.alpha), regime)?;
    }
    Ok(())
}

/// Write the Monte Carlo comparison table:
/// header `k,mc_mean,mc_std_error,exact_jue,z_score`.
pub fn cmd_montecarlo(args: &MontecarloArgs, out: &mut dyn Write) -> Result<(), CliError> {
    args.grid.validate()?;
    let cfg = McConfig::new(args.size, args.rows, args.samples, args.seed)?
        .with_workers(args.workers)?;
    let a = cfg.laguerre_a();
    writeln!(out, "k,mc_mean,mc_std_error,exact_jue,z_score")?;
    for k in args.grid.values() {
        let est = estimate_structure_mc(&cfg, k)?;
        let exact = s_lue_jue(&StructureQuery::new(args.size, a, k)?)?;
        let z = if est.std_error > 0.0 {
            (est.mean - exact.value) / est.std_error
        } else if (est.mean - exact.value).abs() <= 1e-12 {
            0.0
        } else {
            f64::INFINITY
        };
        writeln!(
            out,
            "{},{},{},{},{}",
            k, est.mean, est.std_error, exact.value, z
        )?;
    }
    Ok(())
}

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn check(name: &'static str, pass: bool, detail: String) -> Check {
    Check { name, pass, detail }
}

fn xorshift(state: &mut u64) -> f64 {
    *state ^= *state << 13;
    *state ^= *state >> 7;
    *state ^= *state << 17;
    (*state >> 11) as f64 / (1u64 << 53) as f64
}

/// Run the cross-module verification suite, printing one PASS/FAIL line per
/// item. Returns true iff every item passed.
pub fn cmd_verify(quick: bool, out: &mut dyn Write) -> Result<bool, CliError> {
    let mut checks: Vec<Check> = Vec::new();

    // exact-route equality: transform double sum vs Jacobi-density integral
    {
        let (ns, aas, ks): (&[usize], &[f64], &[f64]) = if quick {
            (&[2, 5], &[0.0, 1.0], &[0.5, 2.0])
        } else {
            (&[2, 5, 10, 20], &[0.0, 1.0, 2.5], &[0.1, 0.5, 1.0, 2.0, 5.0, 20.0])
        };
        let mut worst = 0.0f64;
        for &n in ns {
            for &a in aas {
                for &k in ks {
                    let q = StructureQuery::new(n, a, k)?;
                    let s1 = s_lue_kernel_sum(&q, Precision::Double)?;
                    let s2 = s_lue_jue(&q)?;
                    worst = worst.max((s1.value - s2.value).abs() / s2.value.abs().max(1e-30));
                }
            }
        }
        checks.push(check(
            "route-equality kernel-sum vs jue-quadrature",
            worst <= 1e-8,
            format!("worst relative deviation {worst:.3e} (tolerance 1e-8)"),
        ));
    }

    // complementarity: double-integral route + single-integral route = N
    {
        let (ns, ks): (&[usize], &[f64]) = if quick {
            (&[1, 2, 3], &[1.0])
        } else {
            (&[1, 2, 3, 4, 5, 6, 7, 8, 9, 10], &[0.5, 1.0, 2.0])
        };
        let mut worst = 0.0f64;
        for &n in ns {
            for &k in ks {
                let q = StructureQuery::new(n, 1.0, k)?;
                let lhs = s_lue_lhs_quadrature(&q)?;
                let jue = s_lue_jue(&q)?;
                worst = worst.max((lhs.value + jue.value - n as f64).abs());
            }
        }
        checks.push(check(
            "complementarity double-integral + single-integral = N",
            worst <= 1e-7,
            format!("worst absolute defect {worst:.3e} (tolerance 1e-7)"),
        ));
    }

    // kernel differential identities by central differences
    {
        let trials = if quick { 10 } else { 50 };
        let mut state = 0xdeadbeefu64;
        let mut worst2 = 0.0f64;
        let mut worst4 = 0.0f64;
        for _ in 0..trials {
            let n = 1 + (xorshift(&mut state) * 10.0) as usize;
            let a = xorshift(&mut state) * 2.0;
            let sys = PolySystem::laguerre(a)?;
            let ks = KernelSpec::new(sys, n)?;
            let x = 0.5 + xorshift(&mut state) * 8.0;
            let y = 0.5 + xorshift(&mut state) * 8.0 + 1e-3;
            let (l, r) = verify_prop2(&ks, x, y, 1e-5)?;
            worst2 = worst2.max((l - r).abs());
            let s = 0.05 + xorshift(&mut state) * 0.9;
            let (l, r) = verify_prop4(a, n, s, 1e-5)?;
            worst4 = worst4.max((l - r).abs());
        }
        checks.push(check(
            "kernel differential identity (Laguerre, off-diagonal)",
            worst2 <= 1e-6,
            format!("worst absolute defect {worst2:.3e} (tolerance 1e-6)"),
        ));
        checks.push(check(
            "kernel differential identity (Jacobi diagonal)",
            worst4 <= 1e-6,
            format!("worst absolute defect {worst4:.3e} (tolerance 1e-6)"),
        ));
    }

    // transform closed form vs direct quadrature
    {
        let jk_max = if quick { 6 } else { 15 };
        let aas: &[f64] = if quick { &[0.0, 2.0] } else { &[0.0, 0.5, 2.0] };
        let ss: &[Complex64] = if quick {
            &[Complex64::new(0.3, 0.0), Complex64::new(0.0, 0.5)]
        } else {
            &[
                Complex64::new(0.3, 0.0),
                Complex64::new(-0.7, 0.0),
                Complex64::new(0.0, 0.5),
                Complex64::new(0.2, 0.4),
            ]
        };
        let mut worst = 0.0f64;
        for j in 0..=jk_max {
            for k in j..=jk_max {
                for &a in aas {
                    for &s in ss {
                        let cf = laguerre_transform(j, k, a, s)?;
                        let or = laguerre_transform_oracle(j, k, a, s)?;
                        let scale = or.value.norm().max(1e-12);
                        worst = worst.max((cf.value - or.value).norm() / scale);
                    }
                }
            }
        }
        checks.push(check(
            "polynomial-product transform closed form vs quadrature",
            worst <= 1e-9,
            format!("worst relative deviation {worst:.3e} (tolerance 1e-9)"),
        ));
    }

    // density transform closed form vs quadrature
    {
        let ns: &[usize] = if quick { &[1, 3] } else { &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10] };
        let mut worst = 0.0f64;
        for &n in ns {
            for &s in &[Complex64::new(0.2, 0.0), Complex64::new(0.0, 1.1)] {
                let cf = density_fl_transform(n, 0.5, s)?;
                let q = density_moment_quadrature(n, 0.5, s)?;
                worst = worst.max((cf.value - q).norm() / q.norm().max(1e-30));
            }
        }
        checks.push(check(
            "density transform closed form vs quadrature",
            worst <= 1e-8,
            format!("worst relative deviation {worst:.3e} (tolerance 1e-8)"),
        ));
    }

    // GUE: kernel-integral route vs Hermite transform double sum
    {
        let ns: &[usize] = if quick { &[1, 4] } else { &[1, 2, 5, 10, 20] };
        let ks: &[f64] = if quick { &[1.0] } else { &[0.5, 2.0] };
        let mut worst = 0.0f64;
        for &n in ns {
            for &k in ks {
                let bh = s_gue_brezin_hikami(n, k)?;
                let or = s_gue_direct_oracle(n, k)?;
                worst = worst.max((bh.value - or.value).abs());
            }
        }
        checks.push(check(
            "gue kernel-integral route vs hermite-transform oracle",
            worst <= 1e-8,
            format!("worst absolute deviation {worst:.3e} (tolerance 1e-8)"),
        ));
    }

    // hypergeometric identities
    {
        let trials = if quick { 20 } else { 100 };
        let mut state = 0x12345u64;
        let mut worst = 0.0f64;
        for _ in 0..trials {
            let j = (xorshift(&mut state) * 16.0).min(15.0) as usize;
            let k = j + (xorshift(&mut state) * 16.0) as usize % (16 - j).max(1);
            let a = xorshift(&mut state) * 5.0;
            let s = 0.1 + xorshift(&mut state) * 2.9;
            let (l, r) = poly_identity_y6_check(j, k.min(15), a, s)?;
            if l != 0.0 {
                worst = worst.max(((l - r) / l).abs());
            }
            let (l, r) = pfaff_kummer_check(-(j as f64), -(k.min(15) as f64), a + 1.0, -1.0 / (s * s))?;
            let scale = l.abs().max(r.abs()).max(1e-300);
            worst = worst.max(((l - r) / scale).abs());
        }
        checks.push(check(
            "hypergeometric transformation identities",
            worst <= 1e-11,
            format!("worst relative deviation {worst:.3e} (tolerance 1e-11)"),
        ));
    }

    // finite-N convergence to the limiting curve
    {
        let cases: &[(f64, f64)] = if quick { &[(0.0, 1.0)] } else { &[(0.0, 0.3), (0.0, 1.0), (1.0, 0.3), (1.0, 1.0), (1.0, 3.0)] };
        let (n_lo, n_hi) = if quick { (25usize, 50usize) } else { (50, 200) };
        let mut ok = true;
        let mut detail = String::new();
        for &(alpha, k) in cases {
            let target = s_inf(k, alpha);
            let e_lo = {
                let q = StructureQuery::new(n_lo, alpha * n_lo as f64, k)?;
                (s_lue_jue(&q)?.value / n_lo as f64 - target).abs()
            };
            let e_hi = {
                let q = StructureQuery::new(n_hi, alpha * n_hi as f64, k)?;
                (s_lue_jue(&q)?.value / n_hi as f64 - target).abs()
            };
            // the error can vanish identically at symmetry points; allow a
            // quadrature-noise floor
            if !(e_hi <= e_lo + 1e-9 && e_hi < 0.02) {
                ok = false;
            }
            detail = format!("last case alpha={alpha} k={k}: err({n_lo})={e_lo:.2e} err({n_hi})={e_hi:.2e}");
        }
        checks.push(check("finite-N convergence to the limiting curve", ok, detail));
    }

    // sine-kernel slope agreement
    {
        let mut state = 0xabcdefu64;
        let mut worst = 0.0f64;
        let h = 1e-5;
        for _ in 0..20 {
            let k = 0.01 + xorshift(&mut state) * 8.0;
            let fd = (s_inf(k + h, 0.0) - s_inf(k - h, 0.0)) / (2.0 * h);
            worst = worst.max((fd - sine_kernel_slope(k)).abs());
        }
        checks.push(check(
            "sine-kernel slope equals the limiting-curve derivative",
            worst <= 1e-8,
            format!("worst absolute deviation {worst:.3e} (tolerance 1e-8)"),
        ));
    }
    // plateau expansion self-check (cheap, keeps the regime wiring honest)
    {
        let k_c = kc(2.0)?;
        let k = k_c - 1e-3;
        let lhs = 1.0 - s_inf(k, 2.0);
        let rhs = 1.0 - s_inf_expansion(k, 2.0, Regime::NearKc)?;
        let rel = ((lhs - rhs) / lhs.abs().max(1e-30)).abs();
        checks.push(check(
            "plateau-transition expansion",
            rel <= 2e-2,
            format!("relative deviation {rel:.3e} at k_c - 1e-3 (tolerance 2e-2)"),
        ));
    }

    let mut all = true;
    for c in &checks {
        all &= c.pass;
        writeln!(
            out,
            "{}: {} ({})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        )?;
    }
    writeln!(
        out,
        "{} of {} checks passed",
        checks.iter().filter(|c| c.pass).count(),
        checks.len()
    )?;
    Ok(all)
}
