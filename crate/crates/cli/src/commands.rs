//! Subcommand implementations.

use std::f64::consts::{FRAC_PI_2, PI};

use catoverlap::distinguish::{self, DistinguishabilityCriterion, TABLE_I};
use catoverlap::overlap::{self, OverlapSeries};
use catoverlap::phasespace::{self, GridSpec, PhaseSpaceField, COVERAGE_MARGIN, DEFAULT_RESOLUTION};
use catoverlap::specfun::{bessel_j0, j0_root};
use catoverlap::{CatState, Displacement, Execution, Normalization};
use num_complex::Complex64;

use crate::args::{
    CatArgs, Command, FieldArgs, FringeArgs, FringeKind, LiteralSumArgs, OutputArgs, OverlapScanArgs, ReplayArgs,
    SurfaceArgs, Table1Args, VczArgs,
};
use crate::error::CliError;
use crate::output::{emit, CommandOutput, RunManifest, Table};
use crate::parse::format_complex;
use crate::verify;

const SERIES_COLUMNS: [&str; 9] = [
    "delta_re",
    "delta_im",
    "delta_abs",
    "exact_re",
    "exact_im",
    "exact_sq",
    "diagonal",
    "bessel",
    "deviation",
];

/// Angular samples for the ring-lobe count reported by `qfunc`.
const RING_SAMPLES: usize = 2048;

pub fn dispatch(command: Command, argv: &[String], exec: Execution) -> Result<(), CliError> {
    let (name, output, out) = match command {
        Command::OverlapScan(a) => ("overlap-scan", overlap_scan(&a, exec)?, a.output),
        Command::Surface(a) => ("surface", surface(&a, exec)?, a.output),
        Command::Qfunc(a) => ("qfunc", field(&a, false, exec)?, a.output),
        Command::Wigner(a) => ("wigner", field(&a, true, exec)?, a.output),
        Command::Table1(a) => ("table1", table1(&a)?, a.output),
        Command::Vcz(a) => ("vcz", vcz(&a)?, a.output),
        Command::Fringe(a) => ("fringe", fringe(&a)?, a.output),
        Command::LiteralSum(a) => ("literal-sum", literal_sum(&a)?, a.output),
        Command::Verify(a) => return verify::run(a.suite, a.seed, exec),
        Command::Replay(_) => unreachable!("replay is resolved before dispatch"),
    };
    let OutputArgs { out, format } = out;
    emit(name, argv, out.as_deref(), format, &output)
}

/// Recorded arguments with `--out` swapped when an override is given.
pub fn replay_argv(args: &ReplayArgs) -> Result<Vec<String>, CliError> {
    let text = std::fs::read_to_string(&args.manifest)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", args.manifest.display())))?;
    let manifest: RunManifest =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("not a run manifest: {e}")))?;
    if manifest.argv.first().is_some_and(|a| a == "replay") {
        return Err(CliError::Usage("manifest records a replay".into()));
    }
    let Some(out) = &args.out else {
        return Ok(manifest.argv);
    };
    let mut argv = Vec::with_capacity(manifest.argv.len() + 2);
    let mut it = manifest.argv.into_iter();
    while let Some(a) = it.next() {
        if a == "--out" {
            it.next();
        } else if !a.starts_with("--out=") {
            argv.push(a);
        }
    }
    argv.push("--out".into());
    argv.push(out.to_string_lossy().into_owned());
    Ok(argv)
}

fn build_cat(args: &CatArgs) -> Result<CatState, CliError> {
    Ok(CatState::new(args.n, args.alpha)?.with_normalization(args.normalization.into()))
}

fn cat_params(output: &mut CommandOutput, cat: &CatState) {
    output
        .param("n", cat.n())
        .param("alpha", format_complex(cat.alpha()))
        .param("normalization", cat.normalization().as_str());
    output.normalization_mode = cat.normalization().as_str().into();
}

fn series_output(series: OverlapSeries) -> CommandOutput {
    let mut table = Table::new(SERIES_COLUMNS.to_vec());
    for r in &series.records {
        table.push(vec![
            r.delta.re.into(),
            r.delta.im.into(),
            r.delta.norm().into(),
            r.exact.re.into(),
            r.exact.im.into(),
            r.exact_sq.into(),
            r.diagonal.into(),
            r.bessel.into(),
            r.deviation.into(),
        ]);
    }
    let mut output = CommandOutput::new(table);
    output.summarize("sup_deviation", series.sup_deviation());
    output.summarize("deviation_kind", series.deviation_kind.as_str());
    output.warnings = series.warnings;
    output
}

fn overlap_scan(a: &OverlapScanArgs, exec: Execution) -> Result<CommandOutput, CliError> {
    let cat = build_cat(&a.cat)?;
    let series = overlap::deviation_scan_with(&cat, a.direction, a.delta_max, a.samples, a.deviation_kind.into(), exec)?;
    let mut output = series_output(series);
    cat_params(&mut output, &cat);
    output
        .param("direction", a.direction)
        .param("delta_max", a.delta_max)
        .param("samples", a.samples)
        .param("deviation_kind", overlap::DeviationKind::from(a.deviation_kind).as_str());
    output.summarize(
        "first_orthogonality_displacement",
        overlap::first_orthogonality_displacement(cat.alpha_mag()),
    );
    Ok(output)
}

fn surface(a: &SurfaceArgs, exec: Execution) -> Result<CommandOutput, CliError> {
    let cat = build_cat(&a.cat)?;
    let series =
        overlap::surface_scan_with(&cat, a.re_range, a.im_range, a.resolution, a.deviation_kind.into(), exec)?;
    let mut output = series_output(series);
    cat_params(&mut output, &cat);
    output
        .param("re_range", format!("{}:{}", a.re_range.0, a.re_range.1))
        .param("im_range", format!("{}:{}", a.im_range.0, a.im_range.1))
        .param("resolution", a.resolution)
        .param("deviation_kind", overlap::DeviationKind::from(a.deviation_kind).as_str());
    output.summarize("layout", "delta_re outer, delta_im inner");
    Ok(output)
}

fn criterion_for(tau: Option<f64>) -> Result<DistinguishabilityCriterion, CliError> {
    Ok(match tau {
        Some(t) => DistinguishabilityCriterion::chord(t)?,
        None => DistinguishabilityCriterion::table_fit(),
    })
}

fn field(a: &FieldArgs, wigner: bool, exec: Execution) -> Result<CommandOutput, CliError> {
    let mut critical = None;
    let cat = match (a.alpha, a.critical) {
        (Some(alpha), _) => CatState::new(a.n, alpha)?,
        (None, _) => {
            let c = distinguish::critical_cat(a.n, criterion_for(a.tau)?)?;
            let cat = c.cat.clone();
            critical = Some(c);
            cat
        }
    }
    .with_normalization(a.normalization.into());
    let spec = match a.grid {
        Some(g) => GridSpec::new(g.x, g.p, g.nx, g.np)?,
        None => GridSpec::for_cat(&cat, DEFAULT_RESOLUTION, DEFAULT_RESOLUTION)?,
    };
    let field: PhaseSpaceField = if wigner {
        phasespace::wigner_with(&cat, &spec, exec)?
    } else {
        phasespace::husimi_q_with(&cat, &spec, exec)?
    };
    let mut table = Table::new(vec!["x", "p", "value"]);
    for i in 0..spec.nx {
        for j in 0..spec.np {
            table.push(vec![spec.x(i).into(), spec.p(j).into(), field.at(i, j).into()]);
        }
    }
    let mut output = CommandOutput::new(table);
    cat_params(&mut output, &cat);
    output
        .param("grid", format!("{}:{}:{}:{}:{}:{}", spec.x_range.0, spec.x_range.1, spec.p_range.0, spec.p_range.1, spec.nx, spec.np))
        .param("critical", a.critical);
    if let Some(t) = a.tau {
        output.param("tau", t);
    }
    let margin = spec.margin_for(&cat.components());
    if margin < COVERAGE_MARGIN {
        output.warnings.push(format!(
            "grid margin {margin:.3} is below {COVERAGE_MARGIN} units; the field is truncated"
        ));
    }
    output
        .summarize("norm_estimate", field.norm_estimate)
        .summarize("min", field.min())
        .summarize("max", field.max())
        .summarize("grid_margin", margin)
        .summarize("layout", "x outer, p inner");
    if let Some(c) = critical {
        output
            .summarize("frontier", c.frontier)
            .summarize("alpha_rounded", c.frontier.alpha_rounded())
            .summarize("ring_radius", c.ring_radius);
    }
    if !wigner && cat.n() >= 2 {
        output.summarize("ring_lobes", phasespace::ring_lobe_analysis(&cat, RING_SAMPLES)?);
    }
    Ok(output)
}

fn table1(a: &Table1Args) -> Result<CommandOutput, CliError> {
    let (criterion, source) = match a.tau {
        Some(t) => (DistinguishabilityCriterion::chord(t)?, "tau"),
        None => (distinguish::calibrate_criterion(&TABLE_I)?.criterion, "table_fit"),
    };
    let n_list: Vec<usize> = a.n_list.clone().map(|l| l.0).unwrap_or_else(|| TABLE_I.iter().map(|&(n, _)| n).collect());
    let mut table = Table::new(vec!["n", "alpha_min", "alpha_rounded", "chord", "ratio", "table_alpha"]);
    for &n in &n_list {
        let r = distinguish::min_alpha(n, criterion)?;
        let tabulated = TABLE_I.iter().find(|&&(m, _)| m == n).map(|&(_, alpha)| alpha);
        table.push(vec![
            n.into(),
            r.alpha_min.into(),
            r.alpha_rounded().into(),
            r.chord.into(),
            r.ratio.into(),
            tabulated.into(),
        ]);
    }
    let nu = distinguish::nu_summary(&n_list, criterion)?;
    let mut output = CommandOutput::new(table);
    output
        .param("n_list", n_list.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","))
        .param("criterion", source)
        .param("tau", criterion.tau());
    output.summarize("nu_mean", nu.mean).summarize("nu_max", nu.max).summarize("tau", criterion.tau());
    Ok(output)
}

fn sample_points(max: f64, samples: usize, what: &str) -> Result<Vec<f64>, CliError> {
    if samples < 2 {
        return Err(CliError::Usage(format!("--samples must be at least 2, got {samples}")));
    }
    if !(max > 0.0 && max.is_finite()) {
        return Err(CliError::Usage(format!("--{what} must be positive, got {max}")));
    }
    Ok((0..samples).map(|i| max * i as f64 / (samples - 1) as f64).collect())
}

fn vcz(a: &VczArgs) -> Result<CommandOutput, CliError> {
    let separations = sample_points(a.separation_max, a.samples, "separation-max")?;
    let c1 = j0_root(1)?.value;
    let mut output;
    if a.from_cat {
        let (n, alpha) = (a.n.expect("clap enforces --n"), a.alpha.expect("clap enforces --alpha"));
        let cat = CatState::new(n, alpha)?;
        let kernel = overlap::OverlapKernel::new(&cat)?;
        let r0 = cat.alpha_mag();
        let mut table = Table::new(vec!["separation", "gamma12", "overlap_limit", "exact_re", "exact_abs"]);
        let mut gap: f64 = 0.0;
        for &s in &separations {
            let gamma12 = overlap::vcz_mutual_coherence(r0, s, PI, 1.0)?;
            let limit = overlap::asymptotic_overlap(r0, s);
            let exact = kernel.eval(Complex64::from_polar(s, a.direction));
            gap = gap.max((exact.re - gamma12).abs());
            table.push(vec![s.into(), gamma12.into(), limit.into(), exact.re.into(), exact.norm().into()]);
        }
        output = CommandOutput::new(table);
        cat_params(&mut output, &cat);
        output
            .param("from_cat", true)
            .param("direction", a.direction)
            .param("ring_radius", r0)
            .param("wavelength", PI)
            .param("screen_distance", 1.0);
        output
            .summarize("first_zero_separation", c1 / (2.0 * r0))
            .summarize("max_exact_gap", gap);
    } else {
        let r0 = a.ring_radius.expect("clap enforces --ring-radius");
        let lambda = a.wavelength.expect("clap enforces --wavelength");
        let big_r = a.screen_distance.expect("clap enforces --screen-distance");
        let mut table = Table::new(vec!["separation", "gamma12"]);
        for &s in &separations {
            table.push(vec![s.into(), overlap::vcz_mutual_coherence(r0, s, lambda, big_r)?.into()]);
        }
        output = CommandOutput::new(table);
        output
            .param("ring_radius", r0)
            .param("wavelength", lambda)
            .param("screen_distance", big_r);
        output.summarize("first_zero_separation", c1 * lambda * big_r / (2.0 * PI * r0));
    }
    output
        .param("separation_max", a.separation_max)
        .param("samples", a.samples);
    Ok(output)
}

fn fringe(a: &FringeArgs) -> Result<CommandOutput, CliError> {
    let deltas = sample_points(a.delta_max, a.samples, "delta-max")?;
    let direction = a.direction.unwrap_or(a.alpha.arg() + FRAC_PI_2);
    let base = CatState::new(2, a.alpha)?;
    // Component order is j = 1 (−α) then j = 2 (α).
    let cat = match a.kind {
        FringeKind::Plain => base,
        FringeKind::Rotated => base.with_angles(vec![0.0, a.phi])?,
        FringeKind::Shifted => base.with_phases(vec![a.phi, 0.0])?,
    };
    let kernel = overlap::OverlapKernel::new(&cat)?;
    let mut table = Table::new(vec!["delta_abs", "formula", "exact_sq", "exact_sq_envelope_corrected"]);
    for &m in &deltas {
        let d = Displacement::from_polar(m, direction)?;
        let formula = match a.kind {
            FringeKind::Plain => overlap::cat2_fringe(a.alpha, d, a.wavelength),
            FringeKind::Rotated => overlap::cat2_rotated_fringe(a.alpha, a.phi, d)?,
            FringeKind::Shifted => overlap::cat2_phase_shifted_fringe(a.alpha, a.phi, d),
        };
        let sq = kernel.eval(d.value()).norm_sqr();
        table.push(vec![m.into(), formula.into(), sq.into(), (sq * (m * m).exp()).into()]);
    }
    let mut output = CommandOutput::new(table);
    output.normalization_mode = Normalization::Exact.as_str().into();
    output
        .param("kind", a.kind.as_str())
        .param("alpha", format_complex(a.alpha))
        .param("phi", a.phi)
        .param("direction", direction)
        .param("delta_max", a.delta_max)
        .param("samples", a.samples);
    if let Some(w) = a.wavelength {
        output.param("wavelength", w);
    }
    output.summarize("formula", "paper formula");
    if a.kind == FringeKind::Shifted {
        output
            .warnings
            .push("the shifted formula is printed as published; compare with exact_sq".into());
    }
    Ok(output)
}

fn literal_sum(a: &LiteralSumArgs) -> Result<CommandOutput, CliError> {
    let cat = build_cat(&a.cat)?;
    let deltas = sample_points(a.delta_max, a.samples, "delta-max")?;
    let kernel = overlap::OverlapKernel::new(&cat)?;
    let mut table = Table::new(vec!["delta_abs", "literal", "exact_re", "bessel"]);
    for &m in &deltas {
        let d = Displacement::from_polar(m, a.direction)?;
        table.push(vec![
            m.into(),
            overlap::literal_pre_diagonal_sum(&cat, d).into(),
            kernel.eval(d.value()).re.into(),
            bessel_j0(2.0 * cat.alpha_mag() * m).into(),
        ]);
    }
    let mut output = CommandOutput::new(table);
    cat_params(&mut output, &cat);
    output
        .param("direction", a.direction)
        .param("delta_max", a.delta_max)
        .param("samples", a.samples);
    output.warnings.push("diagnostic only: the literal sum is not normalized".into());
    Ok(output)
}

