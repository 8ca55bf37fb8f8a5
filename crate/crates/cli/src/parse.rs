//! Flag value parsers.

use num_complex::Complex64;

/// `mag:phase` (radians, canonical) or `re,im`.
pub fn complex(s: &str) -> Result<Complex64, String> {
    let parts = |sep: char| -> Result<(f64, f64), String> {
        let (a, b) = s.split_once(sep).ok_or_else(|| format!("expected two values separated by '{sep}'"))?;
        Ok((number(a)?, number(b)?))
    };
    if s.contains(':') {
        let (mag, phase) = parts(':')?;
        if mag < 0.0 {
            return Err(format!("magnitude must be non-negative in {s:?}"));
        }
        Ok(Complex64::from_polar(mag, phase))
    } else if s.contains(',') {
        let (re, im) = parts(',')?;
        Ok(Complex64::new(re, im))
    } else {
        Ok(Complex64::new(number(s)?, 0.0))
    }
}

/// Canonical `mag:phase` rendering used in manifests.
pub fn format_complex(z: Complex64) -> String {
    format!("{}:{}", z.norm(), z.arg())
}

pub fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not a finite number: {s:?}"))
    }
}

/// `lo:hi`. Ordering is checked by the command so it can exit with a usage error.
pub fn range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    Ok((number(a)?, number(b)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridArg {
    pub x: (f64, f64),
    pub p: (f64, f64),
    pub nx: usize,
    pub np: usize,
}

/// `x0:x1:p0:p1:nx:np`.
pub fn grid(s: &str) -> Result<GridArg, String> {
    let fields: Vec<&str> = s.split(':').collect();
    if fields.len() != 6 {
        return Err(format!("expected x0:x1:p0:p1:nx:np, got {s:?}"));
    }
    let count = |f: &str| f.trim().parse::<usize>().map_err(|_| format!("not a node count: {f:?}"));
    Ok(GridArg {
        x: (number(fields[0])?, number(fields[1])?),
        p: (number(fields[2])?, number(fields[3])?),
        nx: count(fields[4])?,
        np: count(fields[5])?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NList(pub Vec<usize>);

/// Comma-separated component counts.
pub fn n_list(s: &str) -> Result<NList, String> {
    s.split(',')
        .map(|f| f.trim().parse::<usize>().map_err(|_| format!("not an integer: {f:?}")))
        .collect::<Result<_, _>>()
        .map(NList)
}
