//! Acceptance suite: one test and one PASS/FAIL line per criterion.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::path::Path;
use std::process::Command;

use catoverlap::distinguish::{min_alpha, nu_summary, DistinguishabilityCriterion, TABLE_I};
use catoverlap::fockcheck::{displacement_matrix, oracle_overlap_with};
use catoverlap::overlap::{deviation_scan, exact_overlap, first_orthogonality_displacement, DeviationKind};
use catoverlap::phasespace::{husimi_q, ring_lobe_analysis, wigner_overlap_integral, GridSpec, COVERAGE_MARGIN};
use catoverlap::specfun::{bessel_j0, j0_root};
use catoverlap::{CatState, Displacement};
use num_complex::Complex64;

fn report(id: u32, name: &str, pass: bool, detail: String) {
    println!("acceptance {id:>2} {} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

#[test]
fn criterion_01_normalization_identity() {
    let mut worst = 0.0f64;
    for &n in &[2, 4, 8, 16, 30, 64] {
        for &a in &[3.0, 15.0, 50.0] {
            let cat = CatState::from_polar(n, a, 0.0).unwrap();
            let v = exact_overlap(&cat, Displacement::zero()).unwrap();
            worst = worst.max((v - 1.0).norm());
        }
    }
    report(1, "normalization identity", worst <= 1e-12, format!("worst |overlap(0) - 1| = {worst:.3e} (tol 1e-12)"));
}

#[test]
fn criterion_02_oracle_equivalence() {
    const CUTOFF: usize = 140;
    let mut worst = 0.0f64;
    let mut cases = 0;
    for &mag in &[0.0, 0.05, 0.2, 0.35, 0.5] {
        let directions = if mag == 0.0 { 1 } else { 8 };
        for d in 0..directions {
            let delta = Displacement::from_polar(mag, TAU * d as f64 / 8.0).unwrap();
            let matrix = displacement_matrix(delta.value(), CUTOFF).unwrap();
            for n in 2..=8 {
                for &a in &[0.5, 1.0, 3.0, 4.5, 6.0] {
                    for &phase in &[0.0, 0.4] {
                        let cat = CatState::from_polar(n, a, phase).unwrap();
                        let err = (oracle_overlap_with(&cat, &matrix).unwrap() - exact_overlap(&cat, delta).unwrap()).norm();
                        worst = worst.max(err);
                        cases += 1;
                    }
                }
            }
        }
    }
    report(
        2,
        "oracle equivalence",
        worst <= 1e-8,
        format!("worst |exact - oracle| = {worst:.3e} over {cases} cases at cutoff {CUTOFF} (tol 1e-8)"),
    );
}

#[test]
fn criterion_03_two_component_fringe() {
    let alpha = Complex64::new(15.0, 0.0);
    let cat = CatState::new(2, alpha).unwrap();
    let (mut raw, mut corrected) = (0.0f64, 0.0f64);
    let mut raw_at = 0.0;
    for i in 0..=3000 {
        let m = 0.3 * i as f64 / 3000.0;
        let delta = Displacement::from_polar(m, FRAC_PI_2).unwrap();
        let sq = exact_overlap(&cat, delta).unwrap().norm_sqr();
        let formula = (30.0 * delta.perp(alpha)).cos().powi(2);
        if (sq - formula).abs() > raw {
            raw = (sq - formula).abs();
            raw_at = m;
        }
        corrected = corrected.max((sq * (m * m).exp() - formula).abs());
    }
    let pass = raw <= 5e-3 && corrected <= 1e-6;
    report(
        3,
        "two-component fringe",
        pass,
        format!(
            "raw max gap {raw:.4e} at |delta| = {raw_at:.4} (tol 5e-3); envelope-corrected max gap {corrected:.3e} (tol 1e-6)"
        ),
    );
}

#[test]
fn criterion_04_bessel_convergence() {
    let sups: Vec<f64> = [8, 16, 30]
        .iter()
        .map(|&n| {
            let cat = CatState::from_polar(n, 15.0, 0.0).unwrap();
            deviation_scan(&cat, 0.0, 0.4, 801, DeviationKind::Re).unwrap().sup_deviation()
        })
        .collect();
    let pass = sups[0] > sups[1] && sups[1] > sups[2] && sups[2] <= 0.02;
    report(
        4,
        "bessel convergence",
        pass,
        format!("sup deviation n=8 {:.4e}, n=16 {:.4e}, n=30 {:.4e} (strictly decreasing, n=30 tol 0.02)", sups[0], sups[1], sups[2]),
    );
}

#[test]
fn criterion_05_first_orthogonality() {
    let cat = CatState::from_polar(30, 15.0, 0.0).unwrap();
    let below = |m: f64| exact_overlap(&cat, Displacement::from_polar(m, 0.0).unwrap()).unwrap().norm() < 0.02;
    let step = 1e-4;
    let mut hi = step;
    while !below(hi) && hi < 1.0 {
        hi += step;
    }
    let mut lo = hi - step;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if below(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let target = first_orthogonality_displacement(15.0);
    let rel = (hi - target).abs() / target;
    report(
        5,
        "first orthogonality",
        rel <= 0.05,
        format!("first |overlap| < 0.02 at |delta| = {hi:.6}, C/(2|alpha|) = {target:.6}, relative gap {rel:.4} (tol 0.05)"),
    );
}

#[test]
fn criterion_06_table_regression() {
    let criterion = DistinguishabilityCriterion::table_fit();
    let worst = TABLE_I
        .iter()
        .map(|&(n, alpha)| (min_alpha(n, criterion).unwrap().alpha_min - alpha).abs())
        .fold(0.0, f64::max);
    let ns: Vec<usize> = TABLE_I.iter().map(|&(n, _)| n).collect();
    let nu = nu_summary(&ns, criterion).unwrap();
    let pass = worst <= 0.3 && (1.9..=2.1).contains(&nu.mean);
    report(
        6,
        "table regression",
        pass,
        format!("tau {:.6}, worst row gap {worst:.4} (tol 0.3), nu mean {:.4} max {:.4} (range [1.9, 2.1])", criterion.tau(), nu.mean, nu.max),
    );
}

#[test]
fn criterion_07_wigner_identity() {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in 1..=6 {
        for &a in &[1.0, 2.5, 4.0] {
            for &(mag, dir) in &[(0.0, 0.0), (0.25, 0.0), (0.25, 1.1), (0.5, 0.0), (0.5, 2.3)] {
                let cat = CatState::from_polar(n, a, 0.3).unwrap();
                let delta = Displacement::from_polar(mag, dir).unwrap();
                let mut points = cat.components();
                points.extend(cat.components().iter().map(|p| p + delta.value()));
                let spec = GridSpec::covering(&points, COVERAGE_MARGIN + 0.5, 512, 512).unwrap();
                let lhs = wigner_overlap_integral(&cat, delta, &spec).unwrap();
                let rhs = exact_overlap(&cat, delta).unwrap().norm_sqr();
                worst = worst.max((lhs - rhs).abs());
                cases += 1;
            }
        }
    }
    report(
        7,
        "wigner overlap identity",
        worst <= 1e-3,
        format!("worst |pi*int(W W') - |overlap|^2| = {worst:.3e} over {cases} cases on 512x512 (tol 1e-3)"),
    );
}

#[test]
fn criterion_08_j0_kernel() {
    const NODES: usize = 4096;
    let quad = |x: f64| {
        (0..NODES)
            .map(|k| Complex64::new(0.0, x * (TAU * k as f64 / NODES as f64).cos()).exp())
            .sum::<Complex64>()
            .re
            / NODES as f64
    };
    let worst = (0..=6000)
        .map(|i| {
            let x = 0.01 * i as f64;
            (bessel_j0(x) - quad(x)).abs()
        })
        .fold(0.0, f64::max);
    let root = j0_root(1).unwrap().value;
    let root_err = (root - 2.404825557695773).abs();
    report(
        8,
        "J0 kernel",
        worst <= 1e-10 && root_err <= 1e-10,
        format!("worst |J0 - quadrature| on [0, 60] = {worst:.3e}, first root {root:.15} error {root_err:.3e} (tol 1e-10)"),
    );
}

#[test]
fn criterion_09_husimi_frontier() {
    let mut lines = Vec::new();
    let mut pass = true;
    for &(n, a) in &[(20usize, 9.9), (32, 15.9), (40, 19.9)] {
        let cat = CatState::from_polar(n, a, 0.0).unwrap();
        let spec = GridSpec::for_cat(&cat, 512, 512).unwrap();
        let q = husimi_q(&cat, &spec).unwrap();
        let lobes = ring_lobe_analysis(&cat, 4096).unwrap();
        let ok = q.min() >= 0.0 && (q.norm_estimate - 1.0).abs() <= 1e-3 && lobes.maxima == n;
        pass &= ok;
        lines.push(format!(
            "n={n} alpha={a}: min Q {:.2e}, norm {:.8}, {} maxima at radius {:.3}, contrast {:.3}",
            q.min(),
            q.norm_estimate,
            lobes.maxima,
            lobes.radius,
            lobes.contrast
        ));
    }
    report(9, "husimi at the frontier", pass, lines.join("; "));
}

fn run_into(dir: &Path, args: &[&str]) -> Vec<u8> {
    let out = dir.join("data");
    let status = Command::new(env!("CARGO_BIN_EXE_catoverlap"))
        .args(args)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "{args:?}");
    std::fs::read(out).unwrap()
}

#[test]
fn criterion_10_determinism() {
    let commands: Vec<Vec<&str>> = vec![
        vec!["overlap-scan", "--n", "30", "--alpha", "15:0", "--samples", "200"],
        vec!["overlap-scan", "--n", "8", "--alpha", "15:0.2", "--deviation-kind", "sq", "--format", "json"],
        vec!["surface", "--n", "10", "--alpha", "15:0", "--resolution", "41"],
        vec!["qfunc", "--n", "20", "--critical", "--grid", "-20:20:-20:20:96:96"],
        vec!["wigner", "--n", "4", "--alpha", "2:0", "--grid", "-8:8:-8:8:80:80", "--format", "json"],
        vec!["table1"],
        vec!["table1", "--n-list", "2,3,5", "--tau", "3.1", "--format", "json"],
        vec!["vcz", "--ring-radius", "1", "--wavelength", "0.5", "--screen-distance", "2"],
        vec!["vcz", "--from-cat", "--n", "30", "--alpha", "15:0"],
        vec!["fringe", "--kind", "rotated", "--alpha", "5:0", "--phi", "1.2"],
        vec!["literal-sum", "--n", "6", "--alpha", "3:0"],
    ];
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let mut differing = Vec::new();
    for args in &commands {
        if run_into(a.path(), args) != run_into(b.path(), args) {
            differing.push(args.join(" "));
        }
    }
    let verify = |_: ()| {
        Command::new(env!("CARGO_BIN_EXE_catoverlap"))
            .args(["verify", "--seed", "3"])
            .output()
            .unwrap()
            .stdout
    };
    if verify(()) != verify(()) {
        differing.push("verify --seed 3".into());
    }
    report(
        10,
        "determinism",
        differing.is_empty(),
        format!("{} commands run twice, differing: {:?}", commands.len() + 1, differing),
    );
}
