//! Plain-text spectrum files.
//!
//! ```text
//! # comments start with '#'
//! <kind> <p> <T>
//! <line n = 0>
//! ...
//! <line n = p>
//! ```
//!
//! `kind` is `equally-spaced`, `rational` or `rationalized:<epsilon>`.
//! Rational files list `E_n/E_1` as `C_n/B_n` (exact decimal integers); the
//! other kinds list `E_n`. Floats are written in shortest round-trip form.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{ClockError, Result};
use crate::units::ConstantsSet;

use super::{
    build_equally_spaced, build_rational_with_period, build_rationalized, ClockSpectrum,
    RationalRatio, SpectrumKind, DEFAULT_CAPACITY_BITS,
};

pub fn render_spectrum(spec: &ClockSpectrum) -> String {
    let mut out = String::new();
    let kind = match spec.kind() {
        SpectrumKind::EquallySpaced => "equally-spaced".to_string(),
        SpectrumKind::Rational => "rational".to_string(),
        SpectrumKind::RationalizedApprox { epsilon } => format!("rationalized:{epsilon:e}"),
    };
    let _ = writeln!(out, "# qclock spectrum ({} units)", spec.mode());
    let r: Vec<String> = spec.r().iter().map(|x| x.to_string()).collect();
    let _ = writeln!(out, "# r = {}", r.join(" "));
    let _ = writeln!(out, "{kind} {} {:e}", spec.p(), spec.period());
    match spec.kind() {
        SpectrumKind::Rational => {
            for q in spec.ratios() {
                let _ = writeln!(out, "{q}");
            }
        }
        _ => {
            for e in spec.levels() {
                let _ = writeln!(out, "{e:e}");
            }
        }
    }
    out
}

pub fn write_spectrum(path: &Path, spec: &ClockSpectrum) -> Result<()> {
    std::fs::write(path, render_spectrum(spec))
        .map_err(|e| ClockError::Io(format!("{}: {e}", path.display())))
}

pub fn read_spectrum(path: &Path, consts: &ConstantsSet) -> Result<ClockSpectrum> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ClockError::Io(format!("{}: {e}", path.display())))?;
    parse_spectrum(&text, consts)
}

fn perr(msg: impl Into<String>) -> ClockError {
    ClockError::Parse(msg.into())
}

fn parse_f64(tok: &str, what: &str) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| perr(format!("bad {what} {tok:?}")))
}

pub fn parse_spectrum(text: &str, consts: &ConstantsSet) -> Result<ClockSpectrum> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| perr("empty spectrum file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [kind, p, period] = fields[..] else {
        return Err(perr(format!("header must be `kind p T`, got {header:?}")));
    };
    let p: usize = p.parse().map_err(|_| perr(format!("bad p {p:?}")))?;
    let period = parse_f64(period, "period")?;
    let body: Vec<&str> = lines.collect();
    if body.len() != p + 1 {
        return Err(perr(format!(
            "expected {} level lines for p = {p}, found {}",
            p + 1,
            body.len()
        )));
    }

    let spec = if kind == "rational" {
        let ratios = body
            .iter()
            .map(|l| l.parse::<RationalRatio>())
            .collect::<Result<Vec<_>>>()?;
        if ratios.len() < 2
            || ratios[0] != RationalRatio::integer(0)
            || ratios[1] != RationalRatio::integer(1)
        {
            return Err(perr("rational spectrum must start with 0/1 and 1/1"));
        }
        build_rational_with_period(&ratios[2..], period, consts, DEFAULT_CAPACITY_BITS)?
    } else {
        let levels = body
            .iter()
            .map(|l| parse_f64(l, "level"))
            .collect::<Result<Vec<_>>>()?;
        let spec = if kind == "equally-spaced" {
            build_equally_spaced(p, period, consts)?
        } else if let Some(eps) = kind.strip_prefix("rationalized:") {
            build_rationalized(&levels, parse_f64(eps, "epsilon")?, consts)?
        } else {
            return Err(perr(format!("unknown spectrum kind {kind:?}")));
        };
        for (n, (a, b)) in levels.iter().zip(spec.levels()).enumerate() {
            if (a - b).abs() > 1e-12 * b.abs().max(spec.levels()[1]) {
                return Err(perr(format!(
                    "level E_{n} = {a:e} is inconsistent with the header (expected {b:e})"
                )));
            }
        }
        spec
    };
    if (spec.period() - period).abs() > 1e-15 * period {
        return Err(perr(format!(
            "period {period:e} is inconsistent with the levels ({:e})",
            spec.period()
        )));
    }
    Ok(spec)
}
