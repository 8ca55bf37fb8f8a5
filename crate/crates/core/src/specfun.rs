//! Bessel `J₀`, its positive zeros, and `ln(m!)`.

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sum::NeumaierSum;

/// Power series below this argument, Hankel asymptotic expansion above.
pub const SERIES_CROSSOVER: f64 = 12.0;

/// Largest supported root index for [`j0_root`].
pub const MAX_ROOT_INDEX: usize = 40;

/// Zeroth-order Bessel function of the first kind.
///
/// Absolute error is below `1e-12` on `|x| ≤ 60`.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_CROSSOVER {
        j0_series(x)
    } else {
        j0_asymptotic(x)
    }
}

fn j0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut acc = NeumaierSum::new();
    acc.add(term);
    for k in 1..200 {
        let kf = k as f64;
        term *= -q / (kf * kf);
        acc.add(term);
        if term.abs() < 1e-18 {
            break;
        }
    }
    acc.value()
}

// J0(x) = sqrt(2/(πx)) (P cos χ − Q sin χ), χ = x − π/4, with the P and Q
// series truncated just before their terms start growing.
fn j0_asymptotic(x: f64) -> f64 {
    let eight_x = 8.0 * x;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0f64;
    let mut prev = f64::INFINITY;
    for k in 0..100usize {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            a *= -(odd * odd) / (k as f64 * eight_x);
        }
        if a.abs() > prev {
            break;
        }
        prev = a.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// A bracketed positive zero of `J₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootResult {
    pub index: usize,
    pub value: f64,
    /// `|J₀(value)|`.
    pub residual: f64,
    pub bracket_width: f64,
}

/// The `k`-th positive zero of `J₀`, `1 ≤ k ≤ 40`.
///
/// Sign changes are located on a π-spaced scan starting at 2 and refined by
/// bisection.
pub fn j0_root(k: usize) -> Result<RootResult> {
    if k == 0 || k > MAX_ROOT_INDEX {
        return Err(Error::RootIndex(k));
    }
    let mut found = 0;
    let mut lo = 2.0;
    let mut f_lo = bessel_j0(lo);
    loop {
        let hi = lo + PI;
        let f_hi = bessel_j0(hi);
        if f_lo.signum() != f_hi.signum() {
            found += 1;
            if found == k {
                return Ok(bisect(k, lo, hi, f_lo));
            }
        }
        lo = hi;
        f_lo = f_hi;
    }
}

fn bisect(index: usize, mut lo: f64, mut hi: f64, mut f_lo: f64) -> RootResult {
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = bessel_j0(mid);
        if f_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let value = 0.5 * (lo + hi);
    RootResult {
        index,
        value,
        residual: bessel_j0(value).abs(),
        bracket_width: hi - lo,
    }
}

const LOG_FACTORIAL_TABLE: usize = 5000;

fn log_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut acc = NeumaierSum::new();
        let mut table = Vec::with_capacity(LOG_FACTORIAL_TABLE + 1);
        table.push(0.0);
        for m in 1..=LOG_FACTORIAL_TABLE {
            acc.add((m as f64).ln());
            table.push(acc.value());
        }
        table
    })
}

/// `ln(m!)`. Tabulated by compensated cumulative summation up to 5000,
/// Stirling series beyond.
pub fn log_factorial(m: usize) -> f64 {
    let table = log_factorial_table();
    if m <= LOG_FACTORIAL_TABLE {
        return table[m];
    }
    let x = (m + 1) as f64;
    // ln Γ(x) for large x
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3))
        + 1.0 / (1260.0 * x.powi(5))
}
