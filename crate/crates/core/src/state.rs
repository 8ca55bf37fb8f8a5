//! Cat states, displacements and elementary coherent-state algebra.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sum::ComplexSum;

/// Phase-space amplitude `re + i·im` in dimensionless units.
pub type ComplexValue = Complex64;

/// Builds a complex value, rejecting NaN and infinities.
pub fn complex(re: f64, im: f64) -> Result<ComplexValue> {
    let z = Complex64::new(re, im);
    ensure_finite(z, "complex value")?;
    Ok(z)
}

pub(crate) fn ensure_finite(z: ComplexValue, what: &str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{what} must be finite, got {z}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Unit normalization constant, i.e. components treated as orthogonal.
    PaperApprox,
    /// Normalization constant computed from the full Gram sum.
    #[default]
    Exact,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::PaperApprox => "paper_approx",
            Normalization::Exact => "exact",
        }
    }
}

/// Equal-weight superposition of `n` coherent states on a circle of radius `|α|`.
///
/// Component `j` (for `j = 1..=n`) sits at `α·e^{i2πj/n}` unless explicit
/// angular positions are supplied, and carries the coefficient `e^{iφ_j}`
/// where `φ_j` are the optional relative phases.
#[derive(Debug, Clone, PartialEq)]
pub struct CatState {
    n: usize,
    alpha: ComplexValue,
    phases: Option<Vec<f64>>,
    angles: Option<Vec<f64>>,
    normalization: Normalization,
}

impl CatState {
    pub fn new(n: usize, alpha: ComplexValue) -> Result<Self> {
        if n == 0 {
            return Err(invalid("a cat state needs at least one component"));
        }
        ensure_finite(alpha, "alpha")?;
        if alpha.norm() <= 0.0 {
            return Err(invalid("|alpha| must be positive"));
        }
        Ok(Self {
            n,
            alpha,
            phases: None,
            angles: None,
            normalization: Normalization::Exact,
        })
    }

    pub fn from_polar(n: usize, magnitude: f64, phase: f64) -> Result<Self> {
        Self::new(n, Complex64::from_polar(magnitude, phase))
    }

    /// Relative coefficient phases `φ_j` (radians), one per component.
    pub fn with_phases(mut self, phases: Vec<f64>) -> Result<Self> {
        self.check_len(&phases, "component phases")?;
        self.phases = Some(phases);
        Ok(self)
    }

    /// Absolute angular positions (radians, relative to `θ_α`) replacing the
    /// uniform `2πj/n` grid, one per component.
    pub fn with_angles(mut self, angles: Vec<f64>) -> Result<Self> {
        self.check_len(&angles, "component angles")?;
        self.angles = Some(angles);
        Ok(self)
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    fn check_len(&self, values: &[f64], what: &str) -> Result<()> {
        if values.len() != self.n {
            return Err(invalid(format!(
                "{what}: expected {} values, got {}",
                self.n,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid(format!("{what} must be finite")));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> ComplexValue {
        self.alpha
    }

    pub fn alpha_mag(&self) -> f64 {
        self.alpha.norm()
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn phases(&self) -> Option<&[f64]> {
        self.phases.as_deref()
    }

    pub fn angles(&self) -> Option<&[f64]> {
        self.angles.as_deref()
    }

    /// True for the plain uniform cat: no coefficient phases (or all zero)
    /// and no angle overrides.
    pub fn is_uniform(&self) -> bool {
        self.angles.is_none() && self.phases.as_ref().is_none_or(|p| p.iter().all(|&v| v == 0.0))
    }

    /// Coherent amplitudes of the components, in index order `j = 1..=n`.
    pub fn components(&self) -> Vec<ComplexValue> {
        match &self.angles {
            Some(angles) => angles
                .iter()
                .map(|&a| self.alpha * Complex64::from_polar(1.0, a))
                .collect(),
            None => (1..=self.n)
                .map(|j| {
                    let angle = TAU * j as f64 / self.n as f64;
                    self.alpha * Complex64::from_polar(1.0, angle)
                })
                .collect(),
        }
    }

    /// Unnormalized coefficients `e^{iφ_j}`.
    pub fn coefficients(&self) -> Vec<ComplexValue> {
        match &self.phases {
            Some(p) => p.iter().map(|&phi| Complex64::from_polar(1.0, phi)).collect(),
            None => vec![Complex64::new(1.0, 0.0); self.n],
        }
    }

    /// `N` such that the state `(1/(√n·N)) Σ_j e^{iφ_j}|α_j⟩` has unit norm.
    /// Always 1 under [`Normalization::PaperApprox`].
    pub fn normalization_constant(&self) -> Result<f64> {
        Ok(self.norm_squared()?.sqrt())
    }

    pub(crate) fn norm_squared(&self) -> Result<f64> {
        match self.normalization {
            Normalization::PaperApprox => Ok(1.0),
            Normalization::Exact => {
                let s = displaced_double_sum(&self.components(), &self.coefficients(), Complex64::new(0.0, 0.0));
                if s.re > 0.0 && s.re.is_finite() {
                    Ok(s.re)
                } else {
                    Err(Error::DegenerateNorm(s.re))
                }
            }
        }
    }

    /// The state as explicit normalized amplitudes over coherent components.
    pub fn superposition(&self) -> Result<CoherentSuperposition> {
        let scale = 1.0 / ((self.n as f64) * self.norm_squared()?).sqrt();
        Ok(CoherentSuperposition {
            points: self.components(),
            amplitudes: self.coefficients().into_iter().map(|c| c * scale).collect(),
        })
    }
}

/// `Σ_j a_j |p_j⟩` with explicit complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentSuperposition {
    pub points: Vec<ComplexValue>,
    pub amplitudes: Vec<ComplexValue>,
}

impl CoherentSuperposition {
    /// Applies `D(δ)`: `D(δ)|p⟩ = e^{i Im(δ p*)} |p + δ⟩`.
    pub fn displaced(&self, delta: ComplexValue) -> Self {
        let (points, amplitudes) = self
            .points
            .iter()
            .zip(&self.amplitudes)
            .map(|(&p, &a)| {
                let phase = (delta * p.conj()).im;
                (p + delta, a * Complex64::from_polar(1.0, phase))
            })
            .unzip();
        Self { points, amplitudes }
    }

    /// `⟨γ|ψ⟩`.
    pub fn amplitude_at(&self, gamma: ComplexValue) -> ComplexValue {
        self.points
            .iter()
            .zip(&self.amplitudes)
            .map(|(&p, &a)| a * coherent_overlap(gamma, p))
            .collect::<ComplexSum>()
            .value()
    }
}

/// Phase-space displacement `δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Displacement {
    delta: ComplexValue,
}

impl Displacement {
    pub fn new(delta: ComplexValue) -> Result<Self> {
        ensure_finite(delta, "delta")?;
        Ok(Self { delta })
    }

    pub fn from_polar(magnitude: f64, direction: f64) -> Result<Self> {
        Self::new(Complex64::from_polar(magnitude, direction))
    }

    pub fn zero() -> Self {
        Self {
            delta: Complex64::new(0.0, 0.0),
        }
    }

    pub fn value(&self) -> ComplexValue {
        self.delta
    }

    pub fn magnitude(&self) -> f64 {
        self.delta.norm()
    }

    pub fn direction(&self) -> f64 {
        self.delta.arg()
    }

    /// `|δ| sin(θ_δ − θ_α)`.
    pub fn perp(&self, alpha: ComplexValue) -> f64 {
        self.magnitude() * (self.direction() - alpha.arg()).sin()
    }

    /// `|δ| cos(θ_δ − θ_α)`.
    pub fn par(&self, alpha: ComplexValue) -> f64 {
        self.magnitude() * (self.direction() - alpha.arg()).cos()
    }
}

impl From<Displacement> for ComplexValue {
    fn from(d: Displacement) -> Self {
        d.delta
    }
}

/// `⟨a|b⟩ = exp(−|a|²/2 − |b|²/2 + a*·b)`.
///
/// The real part of the exponent is evaluated as `−|a−b|²/2` so large
/// amplitudes do not cancel; far-apart states underflow to exactly 0.
pub fn coherent_overlap(a: ComplexValue, b: ComplexValue) -> ComplexValue {
    let d = a - b;
    let exponent = Complex64::new(-0.5 * d.norm_sqr(), (a.conj() * b).im);
    exponent.exp()
}

/// `(1/n) Σ_j Σ_k c_j* c_k ⟨p_j|D(δ)|p_k⟩`, j outer and k inner, both ascending.
///
/// Each term is formed in the log domain with phase and Gaussian exponent
/// combined before one exponentiation, and terms are accumulated with
/// compensated summation.
pub(crate) fn displaced_double_sum(
    points: &[ComplexValue],
    coeffs: &[ComplexValue],
    delta: ComplexValue,
) -> ComplexValue {
    let n = points.len();
    let mut acc = ComplexSum::new();
    for (&pj, &cj) in points.iter().zip(coeffs) {
        let phase_j = cj.arg();
        let mag_j = cj.norm();
        for (&pk, &ck) in points.iter().zip(coeffs) {
            let shifted = pk + delta;
            let gauss = -0.5 * (pj - shifted).norm_sqr();
            let phase = (ck.arg() - phase_j) + (pj.conj() * shifted).im + (delta * pk.conj()).im;
            let term = Complex64::new(gauss, phase).exp() * (mag_j * ck.norm());
            acc.add(term);
        }
    }
    acc.value() / n as f64
}
