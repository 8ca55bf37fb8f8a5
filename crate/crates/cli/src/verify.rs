//! Cross-checks between independent evaluation paths, printed as a table.

use std::f64::consts::TAU;

use catoverlap::fockcheck::{displacement_matrix, oracle_overlap_with};
use catoverlap::overlap::exact_overlap;
use catoverlap::phasespace::{husimi_q_with, wigner_overlap_integral_with, GridSpec, COVERAGE_MARGIN};
use catoverlap::specfun::{bessel_j0, j0_root, MAX_ROOT_INDEX};
use catoverlap::{CatState, Displacement, Execution};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::Suite;
use crate::error::CliError;

const ORACLE_CUTOFF: usize = 140;
const J0_FIRST_ROOT: f64 = 2.404825557695773;

struct Check {
    suite: &'static str,
    name: &'static str,
    instances: usize,
    worst: f64,
    tolerance: f64,
    failure: Option<String>,
}

impl Check {
    fn new(suite: &'static str, name: &'static str, tolerance: f64) -> Self {
        Self {
            suite,
            name,
            instances: 0,
            worst: 0.0,
            tolerance,
            failure: None,
        }
    }

    fn record(&mut self, err: f64, instance: impl FnOnce() -> String) {
        self.instances += 1;
        let bad = err.is_nan() || err > self.tolerance;
        if bad && self.failure.is_none() {
            self.failure = Some(format!("{} (error {err:.3e})", instance()));
        }
        if err > self.worst || err.is_nan() {
            self.worst = err;
        }
    }

    fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

struct Instance {
    n: usize,
    alpha: Complex64,
    delta: Complex64,
}

impl Instance {
    /// `|α|` is drawn from `alpha_range` clipped below at `n/4`, which keeps
    /// adjacent components apart and the norm free of cancellation.
    fn random(rng: &mut ChaCha8Rng, n_max: usize, alpha_range: (f64, f64), delta_max: f64) -> Self {
        let n = rng.random_range(2..=n_max);
        let lo = alpha_range.0.max(n as f64 / 4.0);
        let alpha = Complex64::from_polar(rng.random_range(lo..alpha_range.1), rng.random_range(0.0..TAU));
        let delta = Complex64::from_polar(rng.random_range(0.0..delta_max), rng.random_range(0.0..TAU));
        Self { n, alpha, delta }
    }

    fn cat(&self) -> CatState {
        CatState::new(self.n, self.alpha).expect("random instances are valid")
    }

    fn displacement(&self) -> Displacement {
        Displacement::new(self.delta).expect("random displacements are finite")
    }

    fn describe(&self) -> String {
        format!(
            "n={} alpha={:.6}:{:.6} delta={:.6}:{:.6}",
            self.n,
            self.alpha.norm(),
            self.alpha.arg(),
            self.delta.norm(),
            self.delta.arg()
        )
    }
}

fn overlap(cat: &CatState, delta: Complex64) -> Result<Complex64, CliError> {
    Ok(exact_overlap(cat, Displacement::new(delta)?)?)
}

fn identities(seed: u64, exec: Execution) -> Result<Vec<Check>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut norm = Check::new("identities", "unit overlap at zero displacement", 1e-12);
    let mut herm = Check::new("identities", "hermitian under delta -> -delta", 1e-12);
    let mut sym = Check::new("identities", "n-fold rotational symmetry", 1e-10);
    let mut bound = Check::new("identities", "overlap modulus at most one", 1e-12);
    for _ in 0..24 {
        let inst = Instance::random(&mut rng, 64, (0.5, 50.0), 1.0);
        let cat = inst.cat();
        norm.record((overlap(&cat, Complex64::new(0.0, 0.0))? - 1.0).norm(), || inst.describe());
        let v = overlap(&cat, inst.delta)?;
        herm.record((overlap(&cat, -inst.delta)? - v.conj()).norm(), || inst.describe());
        let rotated = inst.delta * Complex64::from_polar(1.0, TAU / inst.n as f64);
        sym.record((overlap(&cat, rotated)? - v).norm(), || inst.describe());
        bound.record((v.norm() - 1.0).max(0.0), || inst.describe());
    }
    let mut wig = Check::new("identities", "wigner product integral equals |overlap|^2", 1e-3);
    for _ in 0..3 {
        let inst = Instance::random(&mut rng, 6, (0.5, 4.0), 0.5);
        let cat = inst.cat();
        let mut points = cat.components();
        points.extend(cat.components().iter().map(|p| p + inst.delta));
        let spec = GridSpec::covering(&points, COVERAGE_MARGIN + 0.5, 256, 256)?;
        let lhs = wigner_overlap_integral_with(&cat, inst.displacement(), &spec, exec)?;
        let rhs = overlap(&cat, inst.delta)?.norm_sqr();
        wig.record((lhs - rhs).abs(), || inst.describe());
    }
    Ok(vec![norm, herm, sym, bound, wig])
}

fn oracle(seed: u64) -> Result<Vec<Check>, CliError> {
    let mut matrix = Check::new("oracle", "number-basis matrix, fixed grid", 1e-8);
    for &mag in &[0.0, 0.05, 0.2, 0.5] {
        let directions = if mag == 0.0 { 1 } else { 8 };
        for d in 0..directions {
            let delta = Complex64::from_polar(mag, TAU * d as f64 / 8.0);
            let dm = displacement_matrix(delta, ORACLE_CUTOFF)?;
            for &n in &[2, 3, 4, 6, 8] {
                for &a in &[1.0, 3.0, 6.0] {
                    let cat = CatState::from_polar(n, a, 0.4)?;
                    let err = (oracle_overlap_with(&cat, &dm)? - overlap(&cat, delta)?).norm();
                    matrix.record(err, || format!("n={n} alpha={a}:0.4 delta={mag}:{}", TAU * d as f64 / 8.0));
                }
            }
        }
    }
    let mut random = Check::new("oracle", "number-basis matrix, random instances", 1e-8);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for _ in 0..8 {
        let inst = Instance::random(&mut rng, 8, (0.5, 6.0), 0.5);
        let cat = inst.cat();
        let dm = displacement_matrix(inst.delta, ORACLE_CUTOFF)?;
        let err = (oracle_overlap_with(&cat, &dm)? - overlap(&cat, inst.delta)?).norm();
        random.record(err, || inst.describe());
    }
    Ok(vec![matrix, random])
}

/// `J₀(x)` as the mean of `cos(x cos θ)` over 4096 equally spaced angles.
fn j0_trapezoid(x: f64) -> f64 {
    const NODES: usize = 4096;
    (0..NODES).map(|k| (x * (TAU * k as f64 / NODES as f64).cos()).cos()).sum::<f64>() / NODES as f64
}

fn quadrature(seed: u64, exec: Execution) -> Result<Vec<Check>, CliError> {
    let mut j0 = Check::new("quadrature", "J0 series/asymptotic vs angular trapezoid", 1e-10);
    for i in 0..=600 {
        let x = 0.1 * i as f64;
        j0.record((bessel_j0(x) - j0_trapezoid(x)).abs(), || format!("x={x}"));
    }
    let mut root1 = Check::new("quadrature", "first J0 zero", 1e-10);
    root1.record((j0_root(1)?.value - J0_FIRST_ROOT).abs(), || "k=1".into());
    let mut roots = Check::new("quadrature", "J0 zero residuals", 1e-10);
    for k in 1..=MAX_ROOT_INDEX {
        let r = j0_root(k)?;
        roots.record(j0_trapezoid(r.value).abs(), || format!("k={k}"));
    }
    let mut q = Check::new("quadrature", "husimi normalization", 1e-3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9a55);
    for _ in 0..3 {
        let inst = Instance::random(&mut rng, 12, (0.5, 6.0), 0.0001);
        let cat = inst.cat();
        let spec = GridSpec::for_cat(&cat, 192, 192)?;
        let field = husimi_q_with(&cat, &spec, exec)?;
        q.record((field.norm_estimate - 1.0).abs(), || inst.describe());
    }
    Ok(vec![j0, root1, roots, q])
}

pub fn run(suite: Suite, seed: u64, exec: Execution) -> Result<(), CliError> {
    let mut checks = Vec::new();
    if matches!(suite, Suite::Identities | Suite::All) {
        checks.extend(identities(seed, exec)?);
    }
    if matches!(suite, Suite::Oracle | Suite::All) {
        checks.extend(oracle(seed)?);
    }
    if matches!(suite, Suite::Quadrature | Suite::All) {
        checks.extend(quadrature(seed, exec)?);
    }
    println!("seed {seed}");
    println!("{:<12} {:<46} {:>9} {:>11} {:>9}  result", "suite", "check", "instances", "worst", "tolerance");
    for c in &checks {
        println!(
            "{:<12} {:<46} {:>9} {:>11.3e} {:>9.0e}  {}",
            c.suite,
            c.name,
            c.instances,
            c.worst,
            c.tolerance,
            if c.passed() { "PASS" } else { "FAIL" }
        );
        if let Some(f) = &c.failure {
            println!("    first failing instance: {f}");
        }
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    if failed == 0 {
        println!("all {} checks passed", checks.len());
        Ok(())
    } else {
        Err(CliError::Failure(format!("{failed} of {} checks failed", checks.len())))
    }
}
