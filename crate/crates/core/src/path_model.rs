//! Core value types: models, observation grids, sampled paths and count series.
//!
//! Zeros are stored exactly. The sticky point carries an atom, the statistics
//! are defined through exact `x == 0` indicator events, and the samplers
//! produce literal `0.0` values when the process sits on the atom. No
//! tolerance-based comparison appears anywhere in this crate.

use crate::error::{Error, Result, Violation};
use std::io::{BufRead, Write};

/// Drift / diffusion coefficient descriptor for sticky Ito models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coefficient {
    Constant(f64),
    /// `intercept + slope * x`
    Affine {
        intercept: f64,
        slope: f64,
    },
}

impl Coefficient {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Coefficient::Constant(c) => c,
            Coefficient::Affine { intercept, slope } => intercept + slope * x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    StickyBm,
    StickyReflectedBm,
    StickyIto,
}

/// A sticky diffusion model: stickiness parameter, initial value and kind.
#[derive(Debug, Clone, PartialEq)]
pub struct StickyModel {
    pub rho: f64,
    pub x0: f64,
    pub kind: ModelKind,
    pub mu: Option<Coefficient>,
    pub sigma: Option<Coefficient>,
}

impl StickyModel {
    pub fn brownian(rho: f64, x0: f64) -> Result<Self> {
        if !(rho > 0.0) {
            return Err(Error::Model(format!(
                "stickiness parameter must be > 0, got {rho}"
            )));
        }
        Ok(StickyModel {
            rho,
            x0,
            kind: ModelKind::StickyBm,
            mu: None,
            sigma: None,
        })
    }

    pub fn reflected(rho: f64, x0: f64) -> Result<Self> {
        if !(rho > 0.0) {
            return Err(Error::Model(format!(
                "stickiness parameter must be > 0, got {rho}"
            )));
        }
        if x0 < 0.0 {
            return Err(Error::Model(format!(
                "sticky-reflected model needs x0 >= 0, got {x0}"
            )));
        }
        Ok(StickyModel {
            rho,
            x0,
            kind: ModelKind::StickyReflectedBm,
            mu: None,
            sigma: None,
        })
    }

    pub fn ito(rho: f64, x0: f64, mu: Coefficient, sigma: Coefficient) -> Result<Self> {
        if !(rho > 0.0) {
            return Err(Error::Model(format!(
                "stickiness parameter must be > 0, got {rho}"
            )));
        }
        if sigma.eval(0.0) <= 0.0 {
            return Err(Error::Model(format!(
                "diffusion coefficient must be positive at 0, got {}",
                sigma.eval(0.0)
            )));
        }
        Ok(StickyModel {
            rho,
            x0,
            kind: ModelKind::StickyIto,
            mu: Some(mu),
            sigma: Some(sigma),
        })
    }

    pub fn sigma0(&self) -> f64 {
        match self.kind {
            ModelKind::StickyIto => self.sigma.as_ref().map(|s| s.eval(0.0)).unwrap_or(1.0),
            _ => 1.0,
        }
    }
}

/// Equally spaced observation times i/n, i = 0..floor(n * horizon).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservationGrid {
    n: u64,
    horizon: f64,
}

impl ObservationGrid {
    pub fn new(n: u64, horizon: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("sampling frequency n must be >= 1".into()));
        }
        if !(horizon > 0.0) {
            return Err(Error::Config(format!("horizon must be > 0, got {horizon}")));
        }
        Ok(ObservationGrid { n, horizon })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Number of observation intervals, floor(n * horizon).
    pub fn intervals(&self) -> usize {
        (self.n as f64 * self.horizon).floor() as usize
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Grid time i/n; bit-identical across calls by construction.
    pub fn time(&self, i: usize) -> f64 {
        i as f64 / self.n as f64
    }
}

/// Discrete observations of a sticky path plus the per-interval hit events.
///
/// The hit flags are produced by the simulators together with the values;
/// they are not measurable from the discrete samples alone and cannot be
/// reconstructed afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    pub grid: ObservationGrid,
    pub values: Vec<f64>,
    /// `hit_flags[i]` is true iff the path touches 0 inside [i/n, (i+1)/n].
    pub hit_flags: Vec<bool>,
    pub seed: u64,
}

impl SamplePath {
    pub fn new(
        grid: ObservationGrid,
        values: Vec<f64>,
        hit_flags: Vec<bool>,
        seed: u64,
    ) -> Result<Self> {
        let path = SamplePath {
            grid,
            values,
            hit_flags,
            seed,
        };
        let violations = path.validate();
        if violations.is_empty() {
            Ok(path)
        } else {
            Err(Error::Validation(violations))
        }
    }

    /// Diagnostic check of every structural invariant; empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.values.len() != self.hit_flags.len() + 1 {
            out.push(Violation {
                index: 0,
                message: format!(
                    "len(values) = {} must equal len(hit_flags) + 1 = {}",
                    self.values.len(),
                    self.hit_flags.len() + 1
                ),
            });
            return out;
        }
        for i in 1..self.values.len() {
            let prev = self.values[i - 1];
            let cur = self.values[i];
            let forced = prev == 0.0 || cur == 0.0 || prev * cur < 0.0;
            if forced && !self.hit_flags[i - 1] {
                out.push(Violation {
                    index: i,
                    message: "interval endpoints force a zero hit but the flag is false".into(),
                });
            }
        }
        out
    }

    pub fn intervals(&self) -> usize {
        self.hit_flags.len()
    }

    /// CSV serialization: header `t,x,hit`, first row hit = 0 by convention.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "t,x,hit")?;
        for (i, &x) in self.values.iter().enumerate() {
            let hit = if i == 0 {
                0
            } else {
                u8::from(self.hit_flags[i - 1])
            };
            writeln!(w, "{},{},{}", fmt_f64(self.grid.time(i)), fmt_f64(x), hit)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: &mut R, seed: u64) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Config("empty path CSV".into()))??;
        if header.trim() != "t,x,hit" {
            return Err(Error::Config(format!("bad path CSV header: {header}")));
        }
        let mut times = Vec::new();
        let mut values = Vec::new();
        let mut flags = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::Config(format!(
                    "bad path CSV row {}: {line}",
                    lineno + 2
                )));
            }
            let t: f64 = parts[0]
                .parse()
                .map_err(|_| Error::Config(format!("bad t in row {}", lineno + 2)))?;
            let x: f64 = parts[1]
                .parse()
                .map_err(|_| Error::Config(format!("bad x in row {}", lineno + 2)))?;
            let hit: u8 = parts[2]
                .parse()
                .map_err(|_| Error::Config(format!("bad hit in row {}", lineno + 2)))?;
            times.push(t);
            values.push(x);
            if lineno > 0 {
                flags.push(hit != 0);
            }
        }
        if values.len() < 2 {
            return Err(Error::Config("path CSV needs at least two rows".into()));
        }
        // Recover (n, horizon) from the time column.
        let dt = times[1] - times[0];
        if !(dt > 0.0) {
            return Err(Error::Config(
                "grid times must be strictly increasing".into(),
            ));
        }
        let n = (1.0 / dt).round() as u64;
        let horizon = times[times.len() - 1];
        let grid = ObservationGrid::new(n.max(1), horizon)?;
        SamplePath::new(grid, values, flags, seed)
    }
}

/// Fixed 17-significant-digit float formatting for byte-identical CSV output.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StatKind {
    C0,
    C1,
    C2,
    B0,
    B1,
    B2,
    D1,
    D2,
    Occ,
}

impl std::fmt::Display for StatKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StatKind::C0 => "C0",
            StatKind::C1 => "C1",
            StatKind::C2 => "C2",
            StatKind::B0 => "B0",
            StatKind::B1 => "B1",
            StatKind::B2 => "B2",
            StatKind::D1 => "D1",
            StatKind::D2 => "D2",
            StatKind::Occ => "OCC",
        };
        f.write_str(s)
    }
}

/// Running counts of one statistic over observation intervals.
///
/// `counts[k]` is the statistic over the first k intervals, so `counts[0] = 0`
/// and increments are 0 or 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CountSeries {
    pub kind: StatKind,
    pub counts: Vec<u64>,
}

impl CountSeries {
    pub fn from_increments(kind: StatKind, increments: impl Iterator<Item = bool>) -> Self {
        let mut counts = vec![0u64];
        let mut acc = 0u64;
        for inc in increments {
            acc += u64::from(inc);
            counts.push(acc);
        }
        CountSeries { kind, counts }
    }

    pub fn terminal(&self) -> u64 {
        *self.counts.last().unwrap_or(&0)
    }

    /// Count over the first k intervals.
    pub fn at(&self, k: usize) -> u64 {
        self.counts[k]
    }
}
