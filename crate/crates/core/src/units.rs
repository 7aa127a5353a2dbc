//! Physical constants and Planck-scale quantities.
//!
//! Two unit modes are supported. In SI mode the constants come from a
//! key=value file (CODATA 2018 by default); in natural mode ħ = c = G = 1
//! exactly, so the Planck length and time are both 1.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ClockError, Result};

/// Environment variable that may point at an alternate constants file.
pub const CONSTANTS_ENV: &str = "QCLOCK_CONSTANTS";

/// The pinned CODATA 2018 constants file shipped with the crate.
pub const CODATA_2018: &str = include_str!("../data/codata2018.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    Si,
    Natural,
}

impl fmt::Display for UnitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitMode::Si => f.write_str("si"),
            UnitMode::Natural => f.write_str("natural"),
        }
    }
}

impl FromStr for UnitMode {
    type Err = ClockError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "si" => Ok(UnitMode::Si),
            "natural" => Ok(UnitMode::Natural),
            other => Err(ClockError::Parse(format!("unknown unit mode {other:?}"))),
        }
    }
}

/// ħ (J·s), c (m/s) and G (m³·kg⁻¹·s⁻²) together with the unit mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsSet {
    hbar: f64,
    c: f64,
    #[serde(rename = "G")]
    g: f64,
    mode: UnitMode,
}

impl ConstantsSet {
    /// Validated constructor. Natural mode only accepts (1, 1, 1).
    pub fn new(hbar: f64, c: f64, g: f64, mode: UnitMode) -> Result<Self> {
        for (name, v) in [("hbar", hbar), ("c", c), ("G", g)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ClockError::InvalidConstants(format!(
                    "{name} must be finite and strictly positive, got {v}"
                )));
            }
        }
        if mode == UnitMode::Natural && (hbar != 1.0 || c != 1.0 || g != 1.0) {
            return Err(ClockError::InvalidConstants(
                "natural mode requires hbar = c = G = 1".into(),
            ));
        }
        Ok(Self { hbar, c, g, mode })
    }

    pub fn natural() -> Self {
        Self {
            hbar: 1.0,
            c: 1.0,
            g: 1.0,
            mode: UnitMode::Natural,
        }
    }

    pub fn codata2018() -> Self {
        Self::parse(CODATA_2018).expect("shipped constants file is valid")
    }

    /// Parses `key = value` lines (`hbar`, `c`, `G`); `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let (mut hbar, mut c, mut g) = (None, None, None);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ClockError::Parse(format!(
                    "constants line {}: expected key = value",
                    lineno + 1
                ))
            })?;
            let value: f64 = value.trim().parse().map_err(|_| {
                ClockError::Parse(format!(
                    "constants line {}: bad number {:?}",
                    lineno + 1,
                    value.trim()
                ))
            })?;
            let slot = match key.trim() {
                "hbar" => &mut hbar,
                "c" => &mut c,
                "G" => &mut g,
                other => {
                    return Err(ClockError::Parse(format!(
                        "constants line {}: unknown key {other:?}",
                        lineno + 1
                    )))
                }
            };
            *slot = Some(value);
        }
        match (hbar, c, g) {
            (Some(hbar), Some(c), Some(g)) => Self::new(hbar, c, g, UnitMode::Si),
            _ => Err(ClockError::InvalidConstants(
                "constants file must define hbar, c and G".into(),
            )),
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ClockError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Resolves the SI constants: explicit file, then `$QCLOCK_CONSTANTS`,
    /// then the shipped CODATA 2018 values.
    pub fn resolve_si(explicit: Option<&Path>) -> Result<Self> {
        if let Some(p) = explicit {
            return Self::from_file(p);
        }
        match std::env::var_os(CONSTANTS_ENV) {
            Some(p) if !p.is_empty() => Self::from_file(Path::new(&p)),
            _ => Ok(Self::codata2018()),
        }
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn mode(&self) -> UnitMode {
        self.mode
    }

    pub fn planck(&self) -> PlanckScale {
        derive_planck_scale(self)
    }
}

/// Planck length (m) and Planck time (s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanckScale {
    pub l_p: f64,
    pub t_p: f64,
}

/// `l_p = sqrt(ħG/c³)`, `t_p = sqrt(ħG/c⁵)`; exactly (1, 1) in natural mode.
pub fn derive_planck_scale(consts: &ConstantsSet) -> PlanckScale {
    if consts.mode == UnitMode::Natural {
        return PlanckScale { l_p: 1.0, t_p: 1.0 };
    }
    let hg = consts.hbar * consts.g;
    let c3 = consts.c * consts.c * consts.c;
    let c5 = c3 * consts.c * consts.c;
    PlanckScale {
        l_p: (hg / c3).sqrt(),
        t_p: (hg / c5).sqrt(),
    }
}
