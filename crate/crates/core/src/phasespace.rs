//! Husimi-Q and Wigner fields on phase-space grids.
//!
//! Grid node `(i, j)` sits at `γ = (x_i + i·p_j)/√2`, so `d²γ = dx dp / 2`.
//! Values are stored x-major: index `i·np + j`.

use std::f64::consts::{FRAC_1_PI, PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::overlap::linspace_point;
use crate::par::Execution;
use crate::state::{CatState, CoherentSuperposition, ComplexValue, Displacement};
use crate::sum::{ComplexSum, NeumaierSum};

/// Margin (in x/p units) a grid must leave around every coherent component.
pub const COVERAGE_MARGIN: f64 = 5.0;

/// Default grid resolution per axis.
pub const DEFAULT_RESOLUTION: usize = 512;

/// Largest tolerated imaginary part of a Wigner value.
pub const IMAGINARY_RESIDUE_LIMIT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub x_range: (f64, f64),
    pub p_range: (f64, f64),
    pub nx: usize,
    pub np: usize,
}

impl GridSpec {
    pub fn new(x_range: (f64, f64), p_range: (f64, f64), nx: usize, np: usize) -> Result<Self> {
        if nx < 2 || np < 2 {
            return Err(invalid(format!("grid needs at least 2 nodes per axis, got {nx}x{np}")));
        }
        for (name, (lo, hi)) in [("x", x_range), ("p", p_range)] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(invalid(format!("{name} range must satisfy lo < hi, got {lo}:{hi}")));
            }
        }
        Ok(Self {
            x_range,
            p_range,
            nx,
            np,
        })
    }

    /// Bounding box of `points` (given as `γ`) widened by `margin` in x/p units.
    pub fn covering(points: &[ComplexValue], margin: f64, nx: usize, np: usize) -> Result<Self> {
        let xs = points.iter().map(|z| SQRT_2 * z.re);
        let ps = points.iter().map(|z| SQRT_2 * z.im);
        let (x0, x1) = bounds(xs);
        let (p0, p1) = bounds(ps);
        Self::new((x0 - margin, x1 + margin), (p0 - margin, p1 + margin), nx, np)
    }

    /// Default grid for a cat: symmetric square `±(√2|α| + margin)`.
    pub fn for_cat(cat: &CatState, nx: usize, np: usize) -> Result<Self> {
        let half = SQRT_2 * cat.alpha_mag() + COVERAGE_MARGIN;
        Self::new((-half, half), (-half, half), nx, np)
    }

    pub fn x(&self, i: usize) -> f64 {
        linspace_point(self.x_range.0, self.x_range.1, i, self.nx)
    }

    pub fn p(&self, j: usize) -> f64 {
        linspace_point(self.p_range.0, self.p_range.1, j, self.np)
    }

    pub fn dx(&self) -> f64 {
        (self.x_range.1 - self.x_range.0) / (self.nx - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_range.1 - self.p_range.0) / (self.np - 1) as f64
    }

    pub fn gamma(&self, i: usize, j: usize) -> ComplexValue {
        Complex64::new(self.x(i), self.p(j)) / SQRT_2
    }

    pub fn len(&self) -> usize {
        self.nx * self.np
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Smallest distance (x/p units) from any point to the grid boundary;
    /// negative when a point lies outside.
    pub fn margin_for(&self, points: &[ComplexValue]) -> f64 {
        points
            .iter()
            .map(|z| {
                let (x, p) = (SQRT_2 * z.re, SQRT_2 * z.im);
                (x - self.x_range.0)
                    .min(self.x_range.1 - x)
                    .min(p - self.p_range.0)
                    .min(self.p_range.1 - p)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Trapezoid weight of node `(i, j)` in the `d²γ` measure.
    fn weight(&self, i: usize, j: usize) -> f64 {
        let wx = if i == 0 || i == self.nx - 1 { 0.5 } else { 1.0 };
        let wp = if j == 0 || j == self.np - 1 { 0.5 } else { 1.0 };
        0.5 * wx * wp * self.dx() * self.dp()
    }

    /// `∬ f d²γ` by the trapezoid rule over node values stored x-major.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        let mut s = NeumaierSum::new();
        for i in 0..self.nx {
            for j in 0..self.np {
                s.add(self.weight(i, j) * values[i * self.np + j]);
            }
        }
        s.value()
    }
}

fn bounds(it: impl Iterator<Item = f64>) -> (f64, f64) {
    it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    HusimiQ,
    Wigner,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceField {
    pub spec: GridSpec,
    pub kind: FieldKind,
    /// x-major node values.
    pub values: Vec<f64>,
    /// Trapezoid estimate of `∬ field d²γ`.
    pub norm_estimate: f64,
}

impl PhaseSpaceField {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.spec.np + j]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `Q(γ) = |⟨γ|cat⟩|²/π`.
pub fn husimi_q(cat: &CatState, spec: &GridSpec) -> Result<PhaseSpaceField> {
    husimi_q_with(cat, spec, Execution::default())
}

pub fn husimi_q_with(cat: &CatState, spec: &GridSpec, exec: Execution) -> Result<PhaseSpaceField> {
    let state = cat.superposition()?;
    Ok(husimi_of(&state, spec, exec))
}

pub fn husimi_of(state: &CoherentSuperposition, spec: &GridSpec, exec: Execution) -> PhaseSpaceField {
    let values = exec.map_range(spec.len(), |idx| {
        let gamma = spec.gamma(idx / spec.np, idx % spec.np);
        state.amplitude_at(gamma).norm_sqr() * FRAC_1_PI
    });
    let norm_estimate = spec.integrate(&values);
    PhaseSpaceField {
        spec: *spec,
        kind: FieldKind::HusimiQ,
        values,
        norm_estimate,
    }
}

/// Wigner function of `|a⟩⟨b|`:
/// `(2/π) exp(−2|γ|² + 2γ*a + 2γb* − ab* − |a|²/2 − |b|²/2)`.
///
/// The real part of the exponent is formed as `−2|γ − (a+b)/2|²`.
pub fn cross_wigner_kernel(gamma: ComplexValue, a: ComplexValue, b: ComplexValue) -> ComplexValue {
    let mid = 0.5 * (a + b);
    let re = -2.0 * (gamma - mid).norm_sqr();
    let im = (2.0 * gamma.conj() * a + 2.0 * gamma * b.conj() - a * b.conj()).im;
    Complex64::new(re, im).exp() * (2.0 * FRAC_1_PI)
}

/// Complex Wigner sum at one point, `Σ_jk a_j a_k* K(γ; p_j, p_k)`.
fn wigner_point(state: &CoherentSuperposition, gamma: ComplexValue) -> ComplexValue {
    let mut acc = ComplexSum::new();
    for (&pj, &aj) in state.points.iter().zip(&state.amplitudes) {
        for (&pk, &ak) in state.points.iter().zip(&state.amplitudes) {
            acc.add(aj * ak.conj() * cross_wigner_kernel(gamma, pj, pk));
        }
    }
    acc.value()
}

/// Wigner field of the cat. Cost grows as `n²` per node.
pub fn wigner(cat: &CatState, spec: &GridSpec) -> Result<PhaseSpaceField> {
    wigner_with(cat, spec, Execution::default())
}

pub fn wigner_with(cat: &CatState, spec: &GridSpec, exec: Execution) -> Result<PhaseSpaceField> {
    wigner_of(&cat.superposition()?, spec, exec)
}

pub fn wigner_of(state: &CoherentSuperposition, spec: &GridSpec, exec: Execution) -> Result<PhaseSpaceField> {
    let complex = exec.map_range(spec.len(), |idx| wigner_point(state, spec.gamma(idx / spec.np, idx % spec.np)));
    let residue = complex.iter().map(|w| w.im.abs()).fold(0.0, f64::max);
    if residue > IMAGINARY_RESIDUE_LIMIT {
        return Err(Error::ImaginaryResidue(residue));
    }
    let values: Vec<f64> = complex.into_iter().map(|w| w.re).collect();
    let norm_estimate = spec.integrate(&values);
    Ok(PhaseSpaceField {
        spec: *spec,
        kind: FieldKind::Wigner,
        values,
        norm_estimate,
    })
}

/// `π ∬ W_cat W_{D(δ)cat} d²γ`, which equals `|⟨cat|D(δ)|cat⟩|²`.
pub fn wigner_overlap_integral(cat: &CatState, delta: Displacement, spec: &GridSpec) -> Result<f64> {
    wigner_overlap_integral_with(cat, delta, spec, Execution::default())
}

pub fn wigner_overlap_integral_with(
    cat: &CatState,
    delta: Displacement,
    spec: &GridSpec,
    exec: Execution,
) -> Result<f64> {
    let state = cat.superposition()?;
    let shifted = state.displaced(delta.value());
    for (label, s) in [("cat", &state), ("displaced cat", &shifted)] {
        let margin = spec.margin_for(&s.points);
        if margin < COVERAGE_MARGIN {
            return Err(Error::Coverage(format!(
                "{label} components lie {margin:.3} from the grid edge (need {COVERAGE_MARGIN})"
            )));
        }
    }
    let rows = exec.map_range(spec.nx, |i| {
        let mut row = NeumaierSum::new();
        let mut residue = 0.0f64;
        for j in 0..spec.np {
            let gamma = spec.gamma(i, j);
            let w1 = wigner_point(&state, gamma);
            let w2 = wigner_point(&shifted, gamma);
            residue = residue.max(w1.im.abs()).max(w2.im.abs());
            row.add(spec.weight(i, j) * w1.re * w2.re);
        }
        (row.value(), residue)
    });
    let mut total = NeumaierSum::new();
    for (row, residue) in rows {
        if residue > IMAGINARY_RESIDUE_LIMIT {
            return Err(Error::ImaginaryResidue(residue));
        }
        total.add(row);
    }
    Ok(PI * total.value())
}

/// Angular structure of the Husimi function around the component ring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RingLobes {
    /// Radius (x/p units) of the circle with the largest mean `Q`.
    pub radius: f64,
    /// Strict local maxima of the angular profile, counted circularly.
    pub maxima: usize,
    /// `min Q / max Q` along the profile.
    pub contrast: f64,
}

/// Locates the radius of peak angular-mean `Q` near `√2|α|` and counts the
/// lobes of the angular profile there.
pub fn ring_lobe_analysis(cat: &CatState, angular_samples: usize) -> Result<RingLobes> {
    if angular_samples < 3 {
        return Err(invalid("need at least 3 angular samples"));
    }
    let state = cat.superposition()?;
    let profile = |radius: f64| -> Vec<f64> {
        (0..angular_samples)
            .map(|k| {
                let theta = std::f64::consts::TAU * k as f64 / angular_samples as f64;
                let gamma = Complex64::from_polar(radius / SQRT_2, theta + cat.alpha().arg());
                state.amplitude_at(gamma).norm_sqr() * FRAC_1_PI
            })
            .collect()
    };
    let nominal = SQRT_2 * cat.alpha_mag();
    let steps = 160;
    let radius = (0..=steps)
        .map(|i| nominal * (0.8 + 0.4 * i as f64 / steps as f64))
        .map(|r| (r, profile(r).iter().sum::<f64>()))
        .fold((nominal, f64::NEG_INFINITY), |best, (r, m)| if m > best.1 { (r, m) } else { best })
        .0;
    let values = profile(radius);
    let len = values.len();
    let maxima = (0..len)
        .filter(|&k| {
            let v = values[k];
            v > values[(k + len - 1) % len] && v > values[(k + 1) % len]
        })
        .count();
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(RingLobes {
        radius,
        maxima,
        contrast: lo / hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::overlap::exact_overlap;
    use crate::state::coherent_overlap;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new((0.0, 1.0), (0.0, 1.0), 1, 4).is_err());
        assert!(GridSpec::new((1.0, 0.0), (0.0, 1.0), 4, 4).is_err());
        assert!(GridSpec::new((0.0, 1.0), (0.0, f64::NAN), 4, 4).is_err());
        let g = GridSpec::new((-1.0, 1.0), (-2.0, 2.0), 3, 5).unwrap();
        assert_eq!(g.gamma(1, 2), c(0.0, 0.0));
        assert_eq!(g.gamma(2, 4), c(1.0, 2.0) / SQRT_2);
    }

    #[test]
    fn trapezoid_of_constant_is_area() {
        let g = GridSpec::new((-1.0, 3.0), (0.0, 2.0), 7, 9).unwrap();
        let area = g.integrate(&vec![1.0; g.len()]);
        assert!((area - 4.0).abs() < 1e-14); // 4·2 in dx dp, halved for d²γ
    }

    #[test]
    fn single_coherent_state_q() {
        let alpha = c(1.5, -0.5);
        let cat = CatState::new(1, alpha).unwrap();
        let spec = GridSpec::covering(&[alpha], COVERAGE_MARGIN, 128, 128).unwrap();
        let q = husimi_q(&cat, &spec).unwrap();
        for i in (0..128).step_by(9) {
            for j in (0..128).step_by(7) {
                let g = spec.gamma(i, j);
                let expected = (-(g - alpha).norm_sqr()).exp() / PI;
                assert!((q.at(i, j) - expected).abs() < 1e-15);
            }
        }
        let peak = husimi_q(&cat, &GridSpec::new((-1.0, 1.0), (-1.0, 1.0), 2, 2).unwrap())
            .unwrap()
            .values[0];
        assert!(peak < FRAC_1_PI);
        let at_alpha = CoherentSuperposition {
            points: vec![alpha],
            amplitudes: vec![c(1.0, 0.0)],
        }
        .amplitude_at(alpha)
        .norm_sqr()
            / PI;
        assert!((at_alpha - FRAC_1_PI).abs() < 1e-15);
        assert!((q.norm_estimate - 1.0).abs() < 1e-3);
    }

    #[test]
    fn q_positive_bounded_and_normalized() {
        for (n, a) in [(2, 3.0), (4, 3.0), (6, 1.0), (8, 4.0)] {
            let cat = CatState::new(n, c(a, 0.0)).unwrap();
            let spec = GridSpec::for_cat(&cat, 256, 256).unwrap();
            let q = husimi_q(&cat, &spec).unwrap();
            assert!(q.min() >= -1e-14);
            assert!(q.max() <= FRAC_1_PI + 1e-12);
            assert!((q.norm_estimate - 1.0).abs() < 1e-3, "n={n}: {}", q.norm_estimate);
        }
    }

    #[test]
    fn single_coherent_state_wigner() {
        let alpha = c(-0.8, 2.0);
        let cat = CatState::new(1, alpha).unwrap();
        let spec = GridSpec::covering(&[alpha], COVERAGE_MARGIN, 200, 200).unwrap();
        let w = wigner(&cat, &spec).unwrap();
        for i in (0..200).step_by(13) {
            for j in (0..200).step_by(11) {
                let g = spec.gamma(i, j);
                let expected = 2.0 / PI * (-2.0 * (g - alpha).norm_sqr()).exp();
                assert!((w.at(i, j) - expected).abs() < 1e-14);
            }
        }
        assert!((w.norm_estimate - 1.0).abs() < 1e-3);
    }

    #[test]
    fn two_component_wigner_has_negative_fringes() {
        let cat = CatState::new(2, c(3.0, 0.0)).unwrap();
        let spec = GridSpec::for_cat(&cat, 256, 256).unwrap();
        let w = wigner(&cat, &spec).unwrap();
        assert!(w.min() < -0.1);
        assert!((w.norm_estimate - 1.0).abs() < 1e-3);
        // lobes at x = ±3√2, p = 0
        let lobe = husimi_q(&cat, &spec).unwrap();
        assert!((lobe.max() - 0.5 * FRAC_1_PI).abs() < 1e-3);
    }

    #[test]
    fn four_component_wigner_central_pattern() {
        let cat = CatState::new(4, c(3.0, 0.0)).unwrap();
        let spec = GridSpec::new((-1.5, 1.5), (-1.5, 1.5), 61, 61).unwrap();
        let w = wigner(&cat, &spec).unwrap();
        let positive = w.values.iter().filter(|&&v| v > 0.05).count();
        let negative = w.values.iter().filter(|&&v| v < -0.05).count();
        // an oscillating chessboard near the origin, both signs well represented
        assert!(positive > 200 && negative > 200, "{positive} {negative}");
    }

    #[test]
    fn overlap_identity_and_purity() {
        let cat = CatState::new(4, c(3.0, 0.0)).unwrap();
        let spec = GridSpec::new((-10.0, 10.0), (-10.0, 10.0), 512, 512).unwrap();
        let purity = wigner_overlap_integral(&cat, Displacement::zero(), &spec).unwrap();
        assert!((purity - 1.0).abs() < 1e-3);
        let d = Displacement::new(c(0.1, 0.0)).unwrap();
        let lhs = wigner_overlap_integral(&cat, d, &spec).unwrap();
        let rhs = exact_overlap(&cat, d).unwrap().norm_sqr();
        assert!((lhs - rhs).abs() < 1e-3, "{lhs} vs {rhs}");
    }

    #[test]
    fn overlap_identity_at_fringe_minimum() {
        let cat = CatState::new(2, c(3.0, 0.0)).unwrap();
        let d = Displacement::new(c(0.0, PI / 12.0)).unwrap();
        let spec = GridSpec::for_cat(&cat, 256, 256).unwrap();
        let spec = GridSpec::new(spec.x_range, (spec.p_range.0 - 1.0, spec.p_range.1 + 1.0), 256, 256).unwrap();
        let v = wigner_overlap_integral(&cat, d, &spec).unwrap();
        assert!(v.abs() < 1e-3, "{v}");
    }

    #[test]
    fn coverage_violation() {
        let cat = CatState::new(2, c(3.0, 0.0)).unwrap();
        let spec = GridSpec::new((-6.0, 6.0), (-6.0, 6.0), 32, 32).unwrap();
        assert!(matches!(
            wigner_overlap_integral(&cat, Displacement::zero(), &spec),
            Err(Error::Coverage(_))
        ));
    }

    #[test]
    fn kernel_trace_matches_coherent_overlap() {
        for (a, b) in [(c(1.0, 0.5), c(-0.5, 2.0)), (c(3.0, -1.0), c(2.0, 0.0)), (c(0.0, 0.0), c(0.7, 0.7))] {
            let spec = GridSpec::covering(&[a, b], 6.0, 400, 400).unwrap();
            let (mut re, mut im) = (Vec::new(), Vec::new());
            for i in 0..spec.nx {
                for j in 0..spec.np {
                    let k = cross_wigner_kernel(spec.gamma(i, j), a, b);
                    re.push(k.re);
                    im.push(k.im);
                }
            }
            let trace = c(spec.integrate(&re), spec.integrate(&im));
            assert!((trace - coherent_overlap(b, a)).norm() < 1e-6, "{trace}");
        }
    }

    #[test]
    fn q_is_smoothed_wigner() {
        let alpha = c(0.9, -0.4);
        let cat = CatState::new(1, alpha).unwrap();
        let spec = GridSpec::covering(&[alpha], 6.0, 300, 300).unwrap();
        let w = wigner(&cat, &spec).unwrap();
        for target in [alpha, c(0.0, 0.0), c(1.5, 0.3)] {
            let smoothed: Vec<f64> = (0..spec.len())
                .map(|idx| {
                    let g = spec.gamma(idx / spec.np, idx % spec.np);
                    w.values[idx] * 2.0 / PI * (-2.0 * (target - g).norm_sqr()).exp()
                })
                .collect();
            let q = (-(target - alpha).norm_sqr()).exp() / PI;
            assert!((spec.integrate(&smoothed) - q).abs() < 1e-4);
        }
    }

    #[test]
    fn parallel_fields_match_sequential() {
        let cat = CatState::new(3, c(2.0, 0.5)).unwrap();
        let spec = GridSpec::for_cat(&cat, 40, 33).unwrap();
        assert_eq!(
            wigner_with(&cat, &spec, Execution::Sequential).unwrap(),
            wigner_with(&cat, &spec, Execution::Parallel).unwrap()
        );
        assert_eq!(
            husimi_q_with(&cat, &spec, Execution::Sequential).unwrap(),
            husimi_q_with(&cat, &spec, Execution::Parallel).unwrap()
        );
    }

    #[test]
    fn ring_lobes_at_frontier() {
        let lobes = ring_lobe_analysis(&CatState::new(20, c(9.9, 0.0)).unwrap(), 4096).unwrap();
        assert_eq!(lobes.maxima, 20);
        assert!((lobes.radius - SQRT_2 * 9.9).abs() < 0.5);
        assert!(lobes.contrast > 0.0 && lobes.contrast < 1.0);
        // well separated lobes: deep valleys
        let sparse = ring_lobe_analysis(&CatState::new(6, c(6.0, 0.0)).unwrap(), 2048).unwrap();
        assert_eq!(sparse.maxima, 6);
        assert!(sparse.contrast < 1e-3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn diagonal_kernel_is_gaussian(gr in -5.0..5.0f64, gi in -5.0..5.0f64, ar in -5.0..5.0f64, ai in -5.0..5.0f64) {
            let g = c(gr, gi);
            let a = c(ar, ai);
            let k = cross_wigner_kernel(g, a, a);
            let expected = 2.0 / PI * (-2.0 * (g - a).norm_sqr()).exp();
            prop_assert!((k - c(expected, 0.0)).norm() < 1e-12);
        }
    }
}
