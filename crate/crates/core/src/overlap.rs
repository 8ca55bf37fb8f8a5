//! Overlap-function kernels: exact double sum, diagonal approximation, the
//! two-component closed forms, the Bessel limit and the ring-source coherence
//! function, plus ray and grid scans.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::par::Execution;
use crate::specfun::{bessel_j0, j0_root};
use crate::state::{displaced_double_sum, CatState, ComplexValue, Displacement};
use crate::sum::NeumaierSum;

/// Displacements beyond this magnitude leave the small-parameter regime the
/// closed forms assume; scans record a warning.
pub const SMALL_DELTA_LIMIT: f64 = 1.0;

/// Precomputed components, coefficients and `N²` for repeated overlap
/// evaluation on one cat.
#[derive(Debug, Clone)]
pub struct OverlapKernel {
    points: Vec<ComplexValue>,
    coeffs: Vec<ComplexValue>,
    norm_sq: f64,
}

impl OverlapKernel {
    pub fn new(cat: &CatState) -> Result<Self> {
        Ok(Self {
            points: cat.components(),
            coeffs: cat.coefficients(),
            norm_sq: cat.norm_squared()?,
        })
    }

    pub fn eval(&self, delta: ComplexValue) -> ComplexValue {
        displaced_double_sum(&self.points, &self.coeffs, delta) / self.norm_sq
    }
}

/// `⟨cat|D(δ)|cat⟩` by the full `n×n` double sum, divided by `N²` in exact
/// normalization.
///
/// When the components overlap heavily (`n` large against `|α|²`) `N²` is
/// itself the result of cancellation and the relative error grows like
/// `ε/N²`.
pub fn exact_overlap(cat: &CatState, delta: Displacement) -> Result<ComplexValue> {
    Ok(OverlapKernel::new(cat)?.eval(delta.value()))
}

/// Diagonal (`j = k`) reduction `(1/n) Σ_j cos[2r sin(θ − 2πj/n)]` with
/// `r = |α||δ|`, `θ = θ_δ − θ_α`, optionally times the envelope `e^{−|δ|²/2}`.
pub fn diagonal_approx_overlap(cat: &CatState, delta: Displacement, envelope: bool) -> Result<f64> {
    if !cat.is_uniform() {
        return Err(Error::NonUniformCat);
    }
    let n = cat.n();
    let r = cat.alpha_mag() * delta.magnitude();
    if r == 0.0 {
        return Ok(1.0);
    }
    let theta = delta.direction() - cat.alpha().arg();
    let s: NeumaierSum = (1..=n)
        .map(|j| (2.0 * r * (theta - TAU * j as f64 / n as f64).sin()).cos())
        .collect();
    let mut value = s.value() / n as f64;
    if envelope {
        value *= (-0.5 * delta.magnitude().powi(2)).exp();
    }
    Ok(value)
}

/// Large-`n` limit `J₀(2|α||δ|)`.
pub fn asymptotic_overlap(alpha_mag: f64, delta_mag: f64) -> f64 {
    bessel_j0(2.0 * alpha_mag * delta_mag)
}

/// Two-component fringe `cos²(2|α|δ⊥)`, or `cos²(2|α|δ⊥π/λ)` in optical units
/// where the commutator is rescaled to `π/λ`.
pub fn cat2_fringe(alpha: ComplexValue, delta: Displacement, wavelength: Option<f64>) -> f64 {
    let scale = wavelength.map_or(1.0, |lambda| PI / lambda);
    (2.0 * alpha.norm() * delta.perp(alpha) * scale).cos().powi(2)
}

/// Fringe of the pair `{α, αe^{iφ}}`:
/// `cos²(2|α| sin(φ/2) (δ⊥ sin(φ/2) + δ∥ cos(φ/2)))`.
pub fn cat2_rotated_fringe(alpha: ComplexValue, phi: f64, delta: Displacement) -> Result<f64> {
    if !(phi > 0.0 && phi <= TAU) {
        return Err(invalid(format!("rotation angle must lie in (0, 2π], got {phi}")));
    }
    let (s, c) = (0.5 * phi).sin_cos();
    let arg = 2.0 * alpha.norm() * s * (delta.perp(alpha) * s + delta.par(alpha) * c);
    Ok(arg.cos().powi(2))
}

/// Literal fringe-shift formula `cos²(2|α|δ⊥ − φ)` for `|α⟩ + e^{iφ}|−α⟩`.
///
/// Kept as published; the exact overlap of that state does not carry the
/// shift in its dominant terms, and the CLI prints both side by side.
pub fn cat2_phase_shifted_fringe(alpha: ComplexValue, phi: f64, delta: Displacement) -> f64 {
    (2.0 * alpha.norm() * delta.perp(alpha) - phi).cos().powi(2)
}

/// Degree of spatial coherence behind a uniform ring source,
/// `J₀(2π r₀ s / (λ R))`.
pub fn vcz_mutual_coherence(ring_radius: f64, separation: f64, wavelength: f64, screen_distance: f64) -> Result<f64> {
    for (name, v) in [
        ("ring radius", ring_radius),
        ("wavelength", wavelength),
        ("screen distance", screen_distance),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(invalid(format!("{name} must be positive, got {v}")));
        }
    }
    if !(separation >= 0.0 && separation.is_finite()) {
        return Err(invalid(format!("separation must be non-negative, got {separation}")));
    }
    Ok(bessel_j0(TAU * ring_radius * separation / (wavelength * screen_distance)))
}

fn first_j0_zero() -> f64 {
    static C: OnceLock<f64> = OnceLock::new();
    *C.get_or_init(|| j0_root(1).expect("first root is in range").value)
}

/// Smallest displacement at which the large-`n` overlap vanishes, `C/(2|α|)`
/// with `C` the first zero of `J₀`.
pub fn first_orthogonality_displacement(alpha_mag: f64) -> f64 {
    first_j0_zero() / (2.0 * alpha_mag)
}

/// Which quantity is compared to `J₀` in the deviation column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviationKind {
    /// `Re(overlap) − J₀`.
    #[default]
    Re,
    /// `|overlap| − |J₀|`.
    Abs,
    /// `|overlap|² − J₀²`.
    Sq,
}

impl DeviationKind {
    pub fn deviation(self, exact: ComplexValue, bessel: f64) -> f64 {
        match self {
            DeviationKind::Re => exact.re - bessel,
            DeviationKind::Abs => exact.norm() - bessel.abs(),
            DeviationKind::Sq => exact.norm_sqr() - bessel * bessel,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DeviationKind::Re => "re",
            DeviationKind::Abs => "abs",
            DeviationKind::Sq => "sq",
        }
    }
}

impl std::str::FromStr for DeviationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "re" => Ok(DeviationKind::Re),
            "abs" => Ok(DeviationKind::Abs),
            "sq" => Ok(DeviationKind::Sq),
            other => Err(invalid(format!("unknown deviation kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Parameterization {
    Ray {
        direction: f64,
        delta_max: f64,
        samples: usize,
    },
    Grid {
        re_range: (f64, f64),
        im_range: (f64, f64),
        resolution: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapRecord {
    pub delta: ComplexValue,
    pub exact: ComplexValue,
    pub exact_sq: f64,
    /// Diagonal approximation without envelope; `None` for non-uniform cats.
    pub diagonal: Option<f64>,
    pub bessel: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapSeries {
    pub parameterization: Parameterization,
    pub deviation_kind: DeviationKind,
    pub records: Vec<OverlapRecord>,
    pub warnings: Vec<String>,
}

impl OverlapSeries {
    /// `max |deviation|` over the records.
    pub fn sup_deviation(&self) -> f64 {
        self.records.iter().map(|r| r.deviation.abs()).fold(0.0, f64::max)
    }
}

/// `lo + (hi − lo)·i/(count − 1)`, written so a symmetric range hits 0 exactly.
pub(crate) fn linspace_point(lo: f64, hi: f64, i: usize, count: usize) -> f64 {
    let t = i as f64 / (count - 1) as f64;
    lo * (1.0 - t) + hi * t
}

fn record(kernel: &OverlapKernel, cat: &CatState, delta: ComplexValue, kind: DeviationKind) -> OverlapRecord {
    let exact = kernel.eval(delta);
    let d = Displacement::new(delta).expect("grid points are finite");
    let bessel = asymptotic_overlap(cat.alpha_mag(), d.magnitude());
    OverlapRecord {
        delta,
        exact,
        exact_sq: exact.norm_sqr(),
        diagonal: diagonal_approx_overlap(cat, d, false).ok(),
        bessel,
        deviation: kind.deviation(exact, bessel),
    }
}

fn small_delta_warnings(max_mag: f64) -> Vec<String> {
    if max_mag > SMALL_DELTA_LIMIT {
        vec![format!(
            "max |delta| = {max_mag} exceeds {SMALL_DELTA_LIMIT}; closed-form approximations assume small displacements"
        )]
    } else {
        Vec::new()
    }
}

/// Samples `|δ| ∈ [0, delta_max]` at fixed direction `θ_δ`.
pub fn deviation_scan(
    cat: &CatState,
    direction: f64,
    delta_max: f64,
    samples: usize,
    kind: DeviationKind,
) -> Result<OverlapSeries> {
    deviation_scan_with(cat, direction, delta_max, samples, kind, Execution::default())
}

pub fn deviation_scan_with(
    cat: &CatState,
    direction: f64,
    delta_max: f64,
    samples: usize,
    kind: DeviationKind,
    exec: Execution,
) -> Result<OverlapSeries> {
    if samples < 2 {
        return Err(invalid(format!("a scan needs at least 2 samples, got {samples}")));
    }
    if !(delta_max > 0.0 && delta_max.is_finite()) {
        return Err(invalid(format!("delta_max must be positive, got {delta_max}")));
    }
    if !direction.is_finite() {
        return Err(invalid("direction must be finite"));
    }
    let kernel = OverlapKernel::new(cat)?;
    let unit = Complex64::from_polar(1.0, direction);
    let records = exec.map_range(samples, |i| {
        let mag = linspace_point(0.0, delta_max, i, samples);
        record(&kernel, cat, unit * mag, kind)
    });
    Ok(OverlapSeries {
        parameterization: Parameterization::Ray {
            direction,
            delta_max,
            samples,
        },
        deviation_kind: kind,
        records,
        warnings: small_delta_warnings(delta_max),
    })
}

/// Overlap over the `δ = x + iy` grid, real part outer and imaginary part inner.
pub fn surface_scan(
    cat: &CatState,
    re_range: (f64, f64),
    im_range: (f64, f64),
    resolution: usize,
    kind: DeviationKind,
) -> Result<OverlapSeries> {
    surface_scan_with(cat, re_range, im_range, resolution, kind, Execution::default())
}

pub fn surface_scan_with(
    cat: &CatState,
    re_range: (f64, f64),
    im_range: (f64, f64),
    resolution: usize,
    kind: DeviationKind,
    exec: Execution,
) -> Result<OverlapSeries> {
    if resolution < 2 {
        return Err(invalid(format!("resolution must be at least 2, got {resolution}")));
    }
    for (name, (lo, hi)) in [("re", re_range), ("im", im_range)] {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(invalid(format!("{name} range must satisfy lo < hi, got {lo}:{hi}")));
        }
    }
    let kernel = OverlapKernel::new(cat)?;
    let records = exec.map_range(resolution * resolution, |idx| {
        let (i, j) = (idx / resolution, idx % resolution);
        let delta = Complex64::new(
            linspace_point(re_range.0, re_range.1, i, resolution),
            linspace_point(im_range.0, im_range.1, j, resolution),
        );
        record(&kernel, cat, delta, kind)
    });
    let corner = re_range.0.abs().max(re_range.1.abs()).hypot(im_range.0.abs().max(im_range.1.abs()));
    Ok(OverlapSeries {
        parameterization: Parameterization::Grid {
            re_range,
            im_range,
            resolution,
        },
        deviation_kind: kind,
        records,
        warnings: small_delta_warnings(corner),
    })
}

/// The printed pre-reduction double sum
/// `(e^{−|δ|²/2}/n) Σ_j Σ_k cos[2r sin(θ − π(j+k)/n)]`, taken literally.
///
/// It evaluates to `n` at `δ = 0`; it exists only to document that
/// discrepancy and is not used by any kernel.
pub fn literal_pre_diagonal_sum(cat: &CatState, delta: Displacement) -> f64 {
    let n = cat.n();
    let r = cat.alpha_mag() * delta.magnitude();
    let theta = delta.direction() - cat.alpha().arg();
    let mut s = NeumaierSum::new();
    for j in 1..=n {
        for k in 1..=n {
            s.add((2.0 * r * (theta - PI * (j + k) as f64 / n as f64).sin()).cos());
        }
    }
    (-0.5 * delta.magnitude().powi(2)).exp() * s.value() / n as f64
}
