//! Truncated number-basis oracle.
//!
//! States are expanded as `c_m = e^{−|α|²/2} α^m/√(m!)` and displaced with a
//! matrix exponential of the raw truncated generator `δA† − δ*A`. Nothing here
//! uses the analytic displacement-composition rule, so agreement with
//! [`crate::overlap::exact_overlap`] is an independent check.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::specfun::log_factorial;
use crate::state::{CatState, ComplexValue, Displacement};
use crate::sum::{ComplexSum, NeumaierSum};

/// Tail mass below which a vector counts as converged.
pub const TAIL_TOLERANCE: f64 = 1e-12;

const TAYLOR_ORDER: usize = 24;

/// Heuristic cutoff `m² + 6m + 20` for a coherent amplitude of magnitude `m`.
pub fn required_cutoff(magnitude: f64) -> usize {
    (magnitude * magnitude + 6.0 * magnitude + 20.0).ceil() as usize
}

/// Width `3√M` of the band near the truncation edge where a truncated
/// exponential is not trusted.
pub fn edge_buffer(cutoff: usize) -> f64 {
    3.0 * (cutoff as f64).sqrt()
}

/// True when amplitudes of magnitude up to `magnitude` stay clear of the edge
/// buffer of a `cutoff`-dimensional space.
pub fn edge_safe(magnitude: f64, cutoff: usize) -> bool {
    required_cutoff(magnitude) as f64 <= cutoff as f64 - edge_buffer(cutoff)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub amplitudes: Vec<ComplexValue>,
    /// Probability mass beyond the cutoff (exact for coherent states, `1 − ‖v‖²`
    /// for everything else).
    pub tail_mass: f64,
    pub converged: bool,
}

impl FockVector {
    pub fn cutoff(&self) -> usize {
        self.amplitudes.len()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockVector) -> ComplexValue {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .collect::<ComplexSum>()
            .value()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .collect::<NeumaierSum>()
            .value()
            .sqrt()
    }

    fn from_amplitudes(amplitudes: Vec<ComplexValue>, converged: bool) -> Self {
        let mut v = Self {
            amplitudes,
            tail_mass: 0.0,
            converged,
        };
        v.tail_mass = (1.0 - v.norm().powi(2)).max(0.0);
        v
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self::from_amplitudes(self.amplitudes.iter().map(|a| a / n).collect(), self.converged)
    }
}

fn coherent_amplitude(alpha: ComplexValue, m: usize) -> ComplexValue {
    let r = alpha.norm();
    if r == 0.0 {
        return if m == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
    }
    let log_mag = -0.5 * r * r + m as f64 * r.ln() - 0.5 * log_factorial(m);
    Complex64::from_polar(log_mag.exp(), m as f64 * alpha.arg())
}

/// Coherent state `|α⟩` truncated to `cutoff` number states.
pub fn coherent_fock_vector(alpha: ComplexValue, cutoff: usize) -> Result<FockVector> {
    if cutoff < 1 {
        return Err(invalid("cutoff must be at least 1"));
    }
    let amplitudes: Vec<_> = (0..cutoff).map(|m| coherent_amplitude(alpha, m)).collect();
    // sum the discarded Poisson tail directly
    let r2 = alpha.norm_sqr();
    let mut tail = NeumaierSum::new();
    let mut m = cutoff;
    loop {
        let p = coherent_amplitude(alpha, m).norm_sqr();
        tail.add(p);
        if (m as f64 > r2 && p < 1e-300) || m > cutoff + 100_000 {
            break;
        }
        m += 1;
    }
    let tail_mass = tail.value();
    Ok(FockVector {
        amplitudes,
        tail_mass,
        converged: cutoff >= required_cutoff(alpha.norm()) && tail_mass <= TAIL_TOLERANCE,
    })
}

/// Truncated `exp(δA† − δ*A)` together with its edge-safety flag.
#[derive(Debug, Clone)]
pub struct DisplacementMatrix {
    pub delta: ComplexValue,
    pub matrix: DMatrix<ComplexValue>,
    /// Whether the vacuum displaced by `δ` stays clear of the edge buffer.
    pub edge_safe: bool,
}

impl DisplacementMatrix {
    pub fn cutoff(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, v: &FockVector) -> FockVector {
        let x = DVector::from_column_slice(&v.amplitudes);
        let y = &self.matrix * x;
        FockVector::from_amplitudes(y.iter().copied().collect(), v.converged)
    }
}

/// `exp(δA† − δ*A)` with `A[m−1, m] = √m`, by scaling and squaring a
/// fixed-order Taylor series of the tridiagonal generator.
pub fn displacement_matrix(delta: ComplexValue, cutoff: usize) -> Result<DisplacementMatrix> {
    if cutoff < 2 {
        return Err(invalid("cutoff must be at least 2"));
    }
    // generator bands: lower[m] = G[m+1, m] = δ√(m+1), upper[m] = G[m, m+1] = −δ*√(m+1)
    let lower: Vec<_> = (1..cutoff).map(|m| delta * (m as f64).sqrt()).collect();
    let upper: Vec<_> = (1..cutoff).map(|m| -delta.conj() * (m as f64).sqrt()).collect();

    let norm1 = (0..cutoff)
        .map(|col| {
            let above = if col > 0 { upper[col - 1].norm() } else { 0.0 };
            let below = if col + 1 < cutoff { lower[col].norm() } else { 0.0 };
            above + below
        })
        .fold(0.0, f64::max);
    let mut squarings = 0u32;
    while norm1 / 2f64.powi(squarings as i32) > 0.5 {
        squarings += 1;
    }
    let scale = 2f64.powi(-(squarings as i32));
    let lower: Vec<_> = lower.into_iter().map(|z| z * scale).collect();
    let upper: Vec<_> = upper.into_iter().map(|z| z * scale).collect();

    // Horner: P ← I + X·P/k, k = K..1
    let identity = DMatrix::<ComplexValue>::identity(cutoff, cutoff);
    let mut p = identity.clone();
    for k in (1..=TAYLOR_ORDER).rev() {
        let xp = tridiagonal_mul(&lower, &upper, &p);
        p = &identity + xp / Complex64::new(k as f64, 0.0);
    }
    for _ in 0..squarings {
        p = &p * &p;
    }
    Ok(DisplacementMatrix {
        delta,
        matrix: p,
        edge_safe: edge_safe(delta.norm(), cutoff),
    })
}

fn tridiagonal_mul(lower: &[ComplexValue], upper: &[ComplexValue], p: &DMatrix<ComplexValue>) -> DMatrix<ComplexValue> {
    let n = p.nrows();
    DMatrix::from_fn(n, p.ncols(), |row, col| {
        let mut acc = Complex64::new(0.0, 0.0);
        if row > 0 {
            acc += lower[row - 1] * p[(row - 1, col)];
        }
        if row + 1 < n {
            acc += upper[row] * p[(row + 1, col)];
        }
        acc
    })
}

/// Unnormalized `Σ_j e^{iφ_j}|α_j⟩` for the cat's components.
pub fn cat_fock_vector(cat: &CatState, cutoff: usize) -> Result<FockVector> {
    let parts = cat
        .components()
        .into_iter()
        .map(|p| coherent_fock_vector(p, cutoff))
        .collect::<Result<Vec<_>>>()?;
    let coeffs = cat.coefficients();
    let amplitudes = (0..cutoff)
        .map(|m| {
            parts
                .iter()
                .zip(&coeffs)
                .map(|(v, c)| c * v.amplitudes[m])
                .collect::<ComplexSum>()
                .value()
        })
        .collect();
    let converged = parts.iter().all(|v| v.converged);
    Ok(FockVector {
        amplitudes,
        tail_mass: parts.iter().map(|v| v.tail_mass).sum(),
        converged,
    })
}

fn certify(magnitude: f64, cutoff: usize) -> Result<()> {
    if edge_safe(magnitude, cutoff) {
        Ok(())
    } else {
        let required = (1..)
            .find(|&m| edge_safe(magnitude, m))
            .expect("some cutoff is always edge safe");
        Err(Error::NotConverged {
            cutoff,
            magnitude,
            required,
        })
    }
}

/// `⟨cat|D(δ)|cat⟩` from the number-basis representation of the unit-norm cat.
pub fn oracle_overlap(cat: &CatState, delta: Displacement, cutoff: usize) -> Result<ComplexValue> {
    let d = displacement_matrix(delta.value(), cutoff)?;
    oracle_overlap_with(cat, &d)
}

/// [`oracle_overlap`] with a prebuilt displacement matrix.
pub fn oracle_overlap_with(cat: &CatState, displacement: &DisplacementMatrix) -> Result<ComplexValue> {
    let cutoff = displacement.cutoff();
    certify(cat.alpha_mag() + displacement.delta.norm(), cutoff)?;
    let v = cat_fock_vector(cat, cutoff)?.normalized();
    Ok(v.inner(&displacement.apply(&v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::overlap::exact_overlap;
    use crate::state::coherent_overlap;

    fn c(re: f64, im: f64) -> ComplexValue {
        Complex64::new(re, im)
    }

    #[test]
    fn vacuum() {
        let v = coherent_fock_vector(c(0.0, 0.0), 5).unwrap();
        assert_eq!(v.amplitudes[0], c(1.0, 0.0));
        assert!(v.amplitudes[1..].iter().all(|z| *z == c(0.0, 0.0)));
        assert_eq!(v.tail_mass, 0.0);
        assert!(coherent_fock_vector(c(0.0, 0.0), 0).is_err());
    }

    #[test]
    fn coherent_vector_converges() {
        let v = coherent_fock_vector(c(3.0, 0.0), 60).unwrap();
        assert!(v.tail_mass <= 1e-12);
        assert!(v.converged);
        assert!((v.inner(&v) - c(1.0, 0.0)).norm() < 1e-12);
        let short = coherent_fock_vector(c(3.0, 0.0), 20).unwrap();
        assert!(!short.converged);
        assert!(short.tail_mass > 1e-3);
    }

    #[test]
    fn inner_products_match_closed_form() {
        let pts = [c(0.0, 0.0), c(3.0, 0.0), c(-3.0, 0.0), c(1.0, 4.0), c(-2.5, -2.5), c(0.3, -5.0)];
        for &a in &pts {
            for &b in &pts {
                let va = coherent_fock_vector(a, 80).unwrap();
                let vb = coherent_fock_vector(b, 80).unwrap();
                let got = va.inner(&vb);
                assert!((got - coherent_overlap(a, b)).norm() < 1e-10, "{a} {b}");
            }
        }
        let far = coherent_fock_vector(c(3.0, 0.0), 80)
            .unwrap()
            .inner(&coherent_fock_vector(c(-3.0, 0.0), 80).unwrap());
        assert!((far.norm() - 1.523e-8).abs() < 1e-11);
    }

    #[test]
    fn identity_at_zero_displacement() {
        let d = displacement_matrix(c(0.0, 0.0), 30).unwrap();
        assert_eq!(d.matrix, DMatrix::identity(30, 30));
        assert!(displacement_matrix(c(0.1, 0.0), 1).is_err());
    }

    #[test]
    fn group_inverse_on_interior() {
        let m = 60;
        let interior = m - edge_buffer(m).ceil() as usize;
        for delta in [c(1.0, 0.0), c(0.3, -0.7), c(0.0, 0.5)] {
            let a = displacement_matrix(delta, m).unwrap();
            let b = displacement_matrix(-delta, m).unwrap();
            let prod = &a.matrix * &b.matrix;
            for i in 0..interior {
                for j in 0..interior {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((prod[(i, j)] - c(expected, 0.0)).norm() < 1e-10, "{i},{j}");
                }
            }
        }
    }

    #[test]
    fn composition_law() {
        let alpha = c(3.0, 0.0);
        let delta = c(0.2, 0.0);
        let d = displacement_matrix(delta, 80).unwrap();
        let moved = d.apply(&coherent_fock_vector(alpha, 80).unwrap());
        let target = coherent_fock_vector(alpha + delta, 80).unwrap();
        let phase = Complex64::from_polar(1.0, (delta * alpha.conj()).im);
        for m in 0..50 {
            assert!((moved.amplitudes[m] - phase * target.amplitudes[m]).norm() < 1e-8);
        }
        let delta = c(-0.15, 0.25);
        let alpha = c(1.0, 2.0);
        let moved = displacement_matrix(delta, 80)
            .unwrap()
            .apply(&coherent_fock_vector(alpha, 80).unwrap());
        let target = coherent_fock_vector(alpha + delta, 80).unwrap();
        let phase = Complex64::from_polar(1.0, (delta * alpha.conj()).im);
        for m in 0..50 {
            assert!((moved.amplitudes[m] - phase * target.amplitudes[m]).norm() < 1e-8);
        }
    }

    #[test]
    fn norm_preserved() {
        let v = coherent_fock_vector(c(2.0, -1.0), 100).unwrap();
        for delta in [c(0.5, 0.5), c(-1.0, 0.2)] {
            let w = displacement_matrix(delta, 100).unwrap().apply(&v);
            assert!((w.norm() - v.norm()).abs() < 1e-10);
        }
    }

    #[test]
    fn oracle_examples() {
        let cat = CatState::new(4, c(3.0, 0.0)).unwrap();
        let zero = oracle_overlap(&cat, Displacement::zero(), 80).unwrap();
        assert!((zero - c(1.0, 0.0)).norm() < 1e-10);
        let d = Displacement::new(c(0.1, 0.05)).unwrap();
        let oracle = oracle_overlap(&cat, d, 80).unwrap();
        let exact = exact_overlap(&cat, d).unwrap();
        assert!((oracle - exact).norm() < 1e-8, "{oracle} vs {exact}");

        let cat2 = CatState::new(2, c(6.0, 0.0)).unwrap();
        let v = oracle_overlap(&cat2, Displacement::new(c(0.0, 0.1)).unwrap(), 140).unwrap();
        let fringe = (1.2f64).cos().powi(2);
        assert!((v.norm_sqr() - fringe).abs() <= 0.015);
    }

    #[test]
    fn oracle_rejects_uncertified_cutoff() {
        let cat = CatState::new(2, c(6.0, 0.0)).unwrap();
        let err = oracle_overlap(&cat, Displacement::zero(), 60).unwrap_err();
        assert!(matches!(err, Error::NotConverged { cutoff: 60, .. }));
    }

    #[test]
    fn exact_norm_matches_fock_norm() {
        for n in [1, 2, 3, 5, 8] {
            for a in [0.5, 2.0, 6.0] {
                let cat = CatState::new(n, Complex64::from_polar(a, 0.3)).unwrap();
                let v = cat_fock_vector(&cat, 140).unwrap();
                let fock = v.norm() / (n as f64).sqrt();
                assert!((fock - cat.normalization_constant().unwrap()).abs() < 1e-8, "n={n} a={a}");
            }
        }
    }

    #[test]
    fn phased_cat_agrees_with_exact() {
        let cat = CatState::new(3, c(2.0, 1.0)).unwrap().with_phases(vec![0.3, -1.0, 2.0]).unwrap();
        let d = Displacement::new(c(0.2, -0.3)).unwrap();
        let o = oracle_overlap(&cat, d, 100).unwrap();
        let e = exact_overlap(&cat, d).unwrap();
        assert!((o - e).norm() < 1e-8);
    }

    #[test]
    fn cutoff_doubling_is_stable() {
        let cat = CatState::new(3, c(2.0, 0.0)).unwrap();
        let d = Displacement::new(c(0.2, 0.1)).unwrap();
        let a = oracle_overlap(&cat, d, 70).unwrap();
        let b = oracle_overlap(&cat, d, 140).unwrap();
        assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn difference_only_dependence() {
        let cat = CatState::new(3, c(2.0, 0.5)).unwrap();
        let cutoff = 100;
        let v = cat_fock_vector(&cat, cutoff).unwrap().normalized();
        let (d1, d2) = (c(0.3, -0.1), c(-0.2, 0.25));
        let s1 = displacement_matrix(d1, cutoff).unwrap().apply(&v);
        let s2 = displacement_matrix(d2, cutoff).unwrap().apply(&v);
        let lhs = s2.inner(&s1).norm();
        let rhs = oracle_overlap(&cat, Displacement::new(d1 - d2).unwrap(), cutoff).unwrap().norm();
        assert!((lhs - rhs).abs() < 1e-10);
    }
}
