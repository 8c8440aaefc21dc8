//! Stickiness parameter estimators.
//!
//! Every estimator is consistent only conditionally on the hit event (the
//! path having visited 0), so a missing value is a legitimate outcome and is
//! reported as `None`, never as NaN: the Monte Carlo harness must count and
//! exclude no-hit replicas explicitly.

use crate::error::{Error, Result};
use crate::path_model::SamplePath;
use crate::statistics::{bouncings, crossings, differences};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMethod {
    CrossingRatio,
    OccupationRatio,
    CrossingRatioIto,
}

impl std::fmt::Display for EstimateMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EstimateMethod::CrossingRatio => "crossing",
            EstimateMethod::OccupationRatio => "occupation",
            EstimateMethod::CrossingRatioIto => "crossing-ito",
        };
        f.write_str(s)
    }
}

/// Which count pair feeds the crossing-ratio estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingVariant {
    /// (C1, C2)
    C,
    /// (B1, B2)
    B,
    /// (D1, D2)
    D,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateResult {
    pub method: EstimateMethod,
    /// None exactly when the denominator count is 0 (includes no-hit paths).
    pub value: Option<f64>,
    /// Whether the path visibly hit 0: a zero value or a set hit flag.
    pub hit_event: bool,
    /// Denominator diagnostic (type-1 count, or the occupation denominator).
    pub n1: f64,
    /// Numerator diagnostic (type-2 count, or the zero-occupation count).
    pub n2: f64,
}

fn hit_event(path: &SamplePath) -> bool {
    path.values.iter().any(|&v| v == 0.0) || path.hit_flags.iter().any(|&f| f)
}

fn ratio_value(factor: f64, n: u64, n1: f64, n2: f64) -> Option<f64> {
    if n1 > 0.0 {
        Some(factor / (n as f64).sqrt() * (n2 / n1))
    } else {
        None
    }
}

const FOUR_ROOT_2_OVER_PI: f64 = 3.1915382432114616; // 4 sqrt(2/pi)

fn crossing_counts(path: &SamplePath, variant: CrossingVariant) -> Result<(f64, f64)> {
    let (n1, n2) = match variant {
        CrossingVariant::C => (crossings(path, 1)?, crossings(path, 2)?),
        CrossingVariant::B => (bouncings(path, 1)?, bouncings(path, 2)?),
        CrossingVariant::D => (differences(path, 1)?, differences(path, 2)?),
    };
    Ok((n1.terminal() as f64, n2.terminal() as f64))
}

/// Crossing-ratio estimator: 4 sqrt(2/pi) (1/sqrt(n)) N2/N1 with the chosen
/// count pair.
pub fn estimate_rho_crossing(
    path: &SamplePath,
    variant: CrossingVariant,
) -> Result<EstimateResult> {
    let (n1, n2) = crossing_counts(path, variant)?;
    Ok(EstimateResult {
        method: EstimateMethod::CrossingRatio,
        value: ratio_value(FOUR_ROOT_2_OVER_PI, path.grid.n(), n1, n2),
        hit_event: hit_event(path),
        n1,
        n2,
    })
}

/// The test function of the occupation estimator's reference configuration:
/// g(x) = 1{0 < |x| < 5} / 10, with integral 1.
pub fn default_g(x: f64) -> f64 {
    if x != 0.0 && x.abs() < 5.0 {
        0.1
    } else {
        0.0
    }
}

/// Occupation-ratio estimator:
/// g_integral (1/n^alpha) sum 1{X_{(i-1)/n} = 0} / sum g(n^alpha X_{(i-1)/n}).
pub fn estimate_rho_occupation<G: Fn(f64) -> f64>(
    path: &SamplePath,
    g: &G,
    alpha: f64,
    g_integral: f64,
) -> Result<EstimateResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Argument(format!(
            "alpha must be in (0, 1), got {alpha}"
        )));
    }
    if g(0.0) != 0.0 {
        return Err(Error::Argument(
            "the occupation test function must vanish at 0".into(),
        ));
    }
    let violations = path.validate();
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    let un = (path.grid.n() as f64).powf(alpha);
    let mut zeros = 0.0f64;
    let mut denom = 0.0f64;
    for &x in &path.values[..path.values.len() - 1] {
        if x == 0.0 {
            zeros += 1.0;
        }
        denom += g(un * x);
    }
    let value = if denom > 0.0 {
        Some(g_integral / un * (zeros / denom))
    } else {
        None
    };
    Ok(EstimateResult {
        method: EstimateMethod::OccupationRatio,
        value,
        hit_event: hit_event(path),
        n1: denom,
        n2: zeros,
    })
}

/// Crossing-ratio estimator for sticky Ito paths: the factor carries 1/sigma(0).
pub fn estimate_rho_ito(
    path: &SamplePath,
    sigma0: f64,
    variant: CrossingVariant,
) -> Result<EstimateResult> {
    if !(sigma0 > 0.0) {
        return Err(Error::Argument(format!(
            "sigma(0) must be > 0, got {sigma0}"
        )));
    }
    if variant == CrossingVariant::B {
        return Err(Error::Argument(
            "the Ito crossing estimator supports the C and D count pairs".into(),
        ));
    }
    let (n1, n2) = crossing_counts(path, variant)?;
    Ok(EstimateResult {
        method: EstimateMethod::CrossingRatioIto,
        value: ratio_value(FOUR_ROOT_2_OVER_PI / sigma0, path.grid.n(), n1, n2),
        hit_event: hit_event(path),
        n1,
        n2,
    })
}
