//! Distinguishability frontier for `n` coherent states on a circle.
//!
//! Adjacent components of a uniform cat sit a chord `d = 2|α| sin(π/n)` apart
//! and overlap with magnitude `e^{−d²/2}`. A cat counts as distinguishable when
//! that chord reaches a threshold `τ`; the minimum `|α|` meeting it is the
//! frontier.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::state::CatState;

/// Frontier amplitudes reproduced by the published table, `(n, |α|_min)`.
pub const TABLE_I: [(usize, f64); 13] = [
    (4, 2.1),
    (12, 5.8),
    (20, 9.9),
    (28, 13.8),
    (36, 17.7),
    (44, 21.7),
    (52, 25.7),
    (60, 29.7),
    (68, 33.7),
    (76, 37.7),
    (84, 41.7),
    (92, 45.7),
    (100, 49.7),
];

pub const DEFAULT_CHORD_THRESHOLD: f64 = 3.1;

/// Amplitude slack in [`is_distinguishable`]: half the one-decimal resolution
/// of tabulated frontier values.
pub const FRONTIER_RESOLUTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum DistinguishabilityCriterion {
    /// Adjacent chord distance must reach `τ`.
    ChordThreshold(f64),
    /// Adjacent coherent overlap magnitude must fall to `ε`.
    OverlapThreshold(f64),
}

impl Default for DistinguishabilityCriterion {
    fn default() -> Self {
        DistinguishabilityCriterion::ChordThreshold(DEFAULT_CHORD_THRESHOLD)
    }
}

impl DistinguishabilityCriterion {
    pub fn chord(tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(invalid(format!("chord threshold must be positive, got {tau}")));
        }
        Ok(Self::ChordThreshold(tau))
    }

    pub fn overlap(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(invalid(format!("overlap threshold must lie in (0, 1), got {epsilon}")));
        }
        Ok(Self::OverlapThreshold(epsilon))
    }

    /// Chord threshold fitted to [`TABLE_I`].
    pub fn table_fit() -> Self {
        calibrate_criterion(&TABLE_I).expect("built-in table is valid").criterion
    }

    /// Equivalent chord threshold `τ` (`ε = e^{−τ²/2}`).
    pub fn tau(&self) -> f64 {
        match *self {
            Self::ChordThreshold(tau) => tau,
            Self::OverlapThreshold(eps) => (-2.0 * eps.ln()).sqrt(),
        }
    }

    /// Equivalent overlap threshold `ε`.
    pub fn epsilon(&self) -> f64 {
        match *self {
            Self::ChordThreshold(tau) => (-0.5 * tau * tau).exp(),
            Self::OverlapThreshold(eps) => eps,
        }
    }

    fn met_by_chord(&self, chord: f64) -> bool {
        match *self {
            Self::ChordThreshold(tau) => chord >= tau,
            Self::OverlapThreshold(eps) => (-0.5 * chord * chord).exp() <= eps,
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        Err(invalid(format!("distinguishability needs at least 2 components, got {n}")))
    } else {
        Ok(())
    }
}

/// Adjacent-component chord `2|α| sin(π/n)`.
pub fn adjacent_chord(n: usize, alpha_mag: f64) -> f64 {
    2.0 * alpha_mag * (PI / n as f64).sin()
}

/// Whether the `n` components at radius `alpha_mag` are resolvable. The
/// amplitude is credited [`FRONTIER_RESOLUTION`] of slack before the chord
/// test.
pub fn is_distinguishable(n: usize, alpha_mag: f64, criterion: DistinguishabilityCriterion) -> Result<bool> {
    check_n(n)?;
    if !(alpha_mag > 0.0 && alpha_mag.is_finite()) {
        return Err(invalid(format!("|alpha| must be positive, got {alpha_mag}")));
    }
    Ok(criterion.met_by_chord(adjacent_chord(n, alpha_mag + FRONTIER_RESOLUTION)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrontierRecord {
    pub n: usize,
    pub alpha_min: f64,
    pub chord: f64,
    pub ratio: f64,
}

impl FrontierRecord {
    /// `alpha_min` at one decimal, the resolution of the published table.
    pub fn alpha_rounded(&self) -> f64 {
        (self.alpha_min * 10.0).round() / 10.0
    }
}

/// `τ / (2 sin(π/n))` at full precision.
pub fn min_alpha(n: usize, criterion: DistinguishabilityCriterion) -> Result<FrontierRecord> {
    check_n(n)?;
    let alpha_min = criterion.tau() / (2.0 * (PI / n as f64).sin());
    Ok(FrontierRecord {
        n,
        alpha_min,
        chord: adjacent_chord(n, alpha_min),
        ratio: n as f64 / alpha_min,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuSummary {
    pub mean: f64,
    pub max: f64,
}

/// Mean of `n / alpha_min(n)` over `n_values`.
pub fn nu_estimate(n_values: &[usize], criterion: DistinguishabilityCriterion) -> Result<f64> {
    Ok(nu_summary(n_values, criterion)?.mean)
}

/// Mean and maximum of `n / alpha_min(n)`.
pub fn nu_summary(n_values: &[usize], criterion: DistinguishabilityCriterion) -> Result<NuSummary> {
    if n_values.is_empty() {
        return Err(invalid("need at least one n"));
    }
    let ratios = n_values
        .iter()
        .map(|&n| min_alpha(n, criterion).map(|r| r.ratio))
        .collect::<Result<Vec<_>>>()?;
    Ok(NuSummary {
        mean: ratios.iter().sum::<f64>() / ratios.len() as f64,
        max: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalCat {
    pub cat: CatState,
    pub frontier: FrontierRecord,
    /// `√2·alpha_min`, the lobe radius in x/p units.
    pub ring_radius: f64,
}

/// Uniform cat sitting exactly on the frontier.
pub fn critical_cat(n: usize, criterion: DistinguishabilityCriterion) -> Result<CriticalCat> {
    let frontier = min_alpha(n, criterion)?;
    Ok(CriticalCat {
        cat: CatState::new(n, Complex64::new(frontier.alpha_min, 0.0))?,
        frontier,
        ring_radius: SQRT_2 * frontier.alpha_min,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    pub criterion: DistinguishabilityCriterion,
    pub tau: f64,
    /// `τ/(2 sin(π/n)) − alpha` per input pair.
    pub residuals: Vec<f64>,
}

/// Least-squares chord threshold for tabulated `(n, alpha_min)` pairs.
///
/// The fit minimizes the amplitude residuals `τ/(2 sin(π/n)) − alpha`, which
/// gives `τ = Σ(alpha/s) / Σ(1/s²)` with `s = 2 sin(π/n)`.
pub fn calibrate_criterion(table: &[(usize, f64)]) -> Result<Calibration> {
    if table.is_empty() {
        return Err(Error::Calibration("no (n, alpha) pairs".into()));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for &(n, alpha) in table {
        if n < 2 {
            return Err(Error::Calibration(format!("n must be at least 2, got {n}")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Calibration(format!("alpha must be positive, got {alpha}")));
        }
        let s = 2.0 * (PI / n as f64).sin();
        num += alpha / s;
        den += 1.0 / (s * s);
    }
    let tau = num / den;
    let residuals = table
        .iter()
        .map(|&(n, alpha)| tau / (2.0 * (PI / n as f64).sin()) - alpha)
        .collect();
    Ok(Calibration {
        criterion: DistinguishabilityCriterion::ChordThreshold(tau),
        tau,
        residuals,
    })
}
