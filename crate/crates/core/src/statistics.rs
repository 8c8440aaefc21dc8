//! Crossing, bouncing, difference and occupation statistics plus local-time
//! estimators.
//!
//! All zero tests are exact equality; sign conditions are evaluated on the
//! signs themselves rather than on products, so that underflowing products of
//! tiny same-sign values cannot masquerade as zeros.

use crate::error::{Error, Result};
use crate::kernel::{asymptotic_fn, AsymKind};
use crate::path_model::{CountSeries, SamplePath, StatKind};

fn validated(path: &SamplePath) -> Result<()> {
    let violations = path.validate();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(violations))
    }
}

fn strict_cross(a: f64, b: f64) -> bool {
    (a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0)
}

fn strict_same(a: f64, b: f64) -> bool {
    (a > 0.0 && b > 0.0) || (a < 0.0 && b < 0.0)
}

/// Number-of-crossings statistic of type j in {0, 1, 2}, cumulative.
pub fn crossings(path: &SamplePath, j: u8) -> Result<CountSeries> {
    validated(path)?;
    let (kind, f): (StatKind, fn(f64, f64) -> bool) = match j {
        0 => (StatKind::C0, |a, b| strict_cross(a, b)),
        1 => (StatKind::C1, |a, b| {
            !strict_same(a, b) && !(a == 0.0 && b == 0.0)
        }),
        2 => (StatKind::C2, |a, b| !strict_same(a, b)),
        _ => {
            return Err(Error::Argument(format!(
                "crossing type must be 0, 1 or 2, got {j}"
            )))
        }
    };
    Ok(CountSeries::from_increments(
        kind,
        path.values.windows(2).map(|w| f(w[0], w[1])),
    ))
}

/// Number-of-bouncings statistic of type j in {0, 1, 2}: the crossing-type
/// condition with the inequality reversed, gated by the interval-hit event.
pub fn bouncings(path: &SamplePath, j: u8) -> Result<CountSeries> {
    validated(path)?;
    let (kind, f): (StatKind, fn(f64, f64) -> bool) = match j {
        0 => (StatKind::B0, |a, b| strict_same(a, b)),
        1 => (StatKind::B1, |a, b| {
            !strict_cross(a, b) && !(a == 0.0 && b == 0.0)
        }),
        2 => (StatKind::B2, |a, b| !strict_cross(a, b)),
        _ => {
            return Err(Error::Argument(format!(
                "bouncing type must be 0, 1 or 2, got {j}"
            )))
        }
    };
    Ok(CountSeries::from_increments(
        kind,
        path.values
            .windows(2)
            .zip(&path.hit_flags)
            .map(|(w, &hit)| hit && f(w[0], w[1])),
    ))
}

/// Difference statistic of type j in {1, 2}, counted directly from the
/// defining indicators (not by subtracting crossing counts).
pub fn differences(path: &SamplePath, j: u8) -> Result<CountSeries> {
    validated(path)?;
    let (kind, f): (StatKind, fn(f64, f64) -> bool) = match j {
        1 => (StatKind::D1, |a, b| (a == 0.0) != (b == 0.0)),
        2 => (StatKind::D2, |a, b| a == 0.0 && b == 0.0),
        _ => {
            return Err(Error::Argument(format!(
                "difference type must be 1 or 2, got {j}"
            )))
        }
    };
    Ok(CountSeries::from_increments(
        kind,
        path.values.windows(2).map(|w| f(w[0], w[1])),
    ))
}

/// Where the occupation statistic looks: a singleton, an interval, or all of R.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Point(f64),
    /// Closed interval [lo, hi].
    Interval(f64, f64),
    All,
}

impl Region {
    pub fn contains(&self, x: f64) -> bool {
        match *self {
            Region::Point(p) => x == p,
            Region::Interval(lo, hi) => lo <= x && x <= hi,
            Region::All => true,
        }
    }
}

/// counts[k] = #{i <= k : X_{(i-1)/n} in region}; counts[k]/n estimates the
/// occupation time of the region.
pub fn occupation_stat(path: &SamplePath, region: Region) -> Result<CountSeries> {
    validated(path)?;
    Ok(CountSeries::from_increments(
        StatKind::Occ,
        path.values[..path.values.len() - 1]
            .iter()
            .map(|&x| region.contains(x)),
    ))
}

/// Conditional crossing statistics: cumulative sums of the one-step kernel
/// expectations of the crossing indicators given the left endpoint.
pub fn conditional_crossings(path: &SamplePath, j: u8, rho: f64) -> Result<Vec<f64>> {
    validated(path)?;
    if j > 2 {
        return Err(Error::Argument(format!(
            "crossing type must be 0, 1 or 2, got {j}"
        )));
    }
    let n = path.grid.n();
    let fn0 = asymptotic_fn(AsymKind::F, n, 0.0, rho)?;
    let mut out = Vec::with_capacity(path.values.len());
    out.push(0.0);
    let mut acc = 0.0;
    for &x in &path.values[..path.values.len() - 1] {
        // Type 0: probability of a strict sign change from x.
        acc += asymptotic_fn(AsymKind::G, n, x, rho)?;
        if j >= 1 {
            // exactly-one-zero transition probability
            acc += if x == 0.0 {
                1.0 - fn0
            } else {
                asymptotic_fn(AsymKind::F, n, x, rho)?
            };
        }
        if j == 2 && x == 0.0 {
            acc += fn0;
        }
        out.push(acc);
    }
    Ok(out)
}

/// How a terminal count is normalized in the limit theorems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalizer {
    /// sqrt(n)
    SqrtN,
    /// n
    N,
    /// caller-supplied diverging sequence value u_n
    Custom(f64),
}

impl Normalizer {
    pub fn value(&self, n: u64) -> f64 {
        match *self {
            Normalizer::SqrtN => (n as f64).sqrt(),
            Normalizer::N => n as f64,
            Normalizer::Custom(u) => u,
        }
    }
}

/// A count series together with its theoretically normalized terminal value.
#[derive(Debug, Clone, PartialEq)]
pub struct StatReport {
    pub series: CountSeries,
    pub normalizer: Normalizer,
    pub normalized_terminal: f64,
}

impl StatReport {
    pub fn new(series: CountSeries, normalizer: Normalizer, n: u64) -> Self {
        let normalized_terminal = series.terminal() as f64 / normalizer.value(n);
        StatReport {
            series,
            normalizer,
            normalized_terminal,
        }
    }
}

/// Local-time estimates at the horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalTimeEstimates {
    /// occupation of {0} / (n rho); needs the stickiness parameter.
    pub via_occupation: Option<f64>,
    /// D1 / (4 sqrt(2/pi) sqrt(n))
    pub via_d1: f64,
    /// C0 / (sqrt(2/pi) sqrt(n)); the standard-Brownian normalization.
    pub via_c0: f64,
}

pub fn local_time_estimates(path: &SamplePath, rho: Option<f64>) -> Result<LocalTimeEstimates> {
    validated(path)?;
    if let Some(r) = rho {
        if !(r > 0.0) {
            return Err(Error::Argument(format!("stickiness must be > 0, got {r}")));
        }
    }
    let n = path.grid.n() as f64;
    let occ = occupation_stat(path, Region::Point(0.0))?.terminal() as f64;
    let d1 = differences(path, 1)?.terminal() as f64;
    let c0 = crossings(path, 0)?.terminal() as f64;
    let root_2_pi = (2.0 / std::f64::consts::PI).sqrt();
    Ok(LocalTimeEstimates {
        via_occupation: rho.map(|r| occ / (n * r)),
        via_d1: d1 / (4.0 * root_2_pi * n.sqrt()),
        via_c0: c0 / (root_2_pi * n.sqrt()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path_model::ObservationGrid;

    fn path(values: Vec<f64>, flags: Vec<bool>) -> SamplePath {
        let grid = ObservationGrid::new(flags.len() as u64, 1.0).unwrap();
        SamplePath::new(grid, values, flags, 0).unwrap()
    }

    fn worked_example() -> SamplePath {
        path(vec![1.0, -1.0, 0.0, 0.0, 2.0], vec![true, true, true, true])
    }

    #[test]
    fn worked_example_counts() {
        let p = worked_example();
        assert_eq!(crossings(&p, 0).unwrap().terminal(), 1);
        assert_eq!(crossings(&p, 1).unwrap().terminal(), 3);
        assert_eq!(crossings(&p, 2).unwrap().terminal(), 4);
        assert_eq!(differences(&p, 1).unwrap().terminal(), 2);
        assert_eq!(differences(&p, 2).unwrap().terminal(), 1);
    }

    #[test]
    fn no_zero_no_sign_change_counts_nothing() {
        let p = path(vec![1.0, 2.0, 0.5], vec![false, false]);
        for j in 0..=2 {
            assert_eq!(crossings(&p, j).unwrap().terminal(), 0);
            assert_eq!(bouncings(&p, j).unwrap().terminal(), 0);
        }
        assert_eq!(differences(&p, 1).unwrap().terminal(), 0);
        assert_eq!(differences(&p, 2).unwrap().terminal(), 0);
    }

    #[test]
    fn all_zero_path_counts() {
        let p = path(vec![0.0; 5], vec![true; 4]);
        assert_eq!(crossings(&p, 0).unwrap().terminal(), 0);
        assert_eq!(crossings(&p, 1).unwrap().terminal(), 0);
        assert_eq!(crossings(&p, 2).unwrap().terminal(), 4);
        assert_eq!(bouncings(&p, 2).unwrap().terminal(), 4);
        assert_eq!(differences(&p, 2).unwrap().terminal(), 4);
    }

    #[test]
    fn bouncing_gate_and_sign_conditions() {
        // same-sign pair: counted by every type exactly when the hit flag is set
        let p = path(vec![1.0, 2.0], vec![false]);
        for j in 0..=2 {
            assert_eq!(bouncings(&p, j).unwrap().terminal(), 0);
        }
        let p = path(vec![1.0, 2.0], vec![true]);
        for j in 0..=2 {
            assert_eq!(bouncings(&p, j).unwrap().terminal(), 1);
        }
        // strict sign change: no bouncing of any type
        let p = path(vec![1.0, -1.0], vec![true]);
        for j in 0..=2 {
            assert_eq!(bouncings(&p, j).unwrap().terminal(), 0);
        }
        // one endpoint at zero: types 1 and 2 only
        let p = path(vec![1.0, 0.0], vec![true]);
        assert_eq!(bouncings(&p, 0).unwrap().terminal(), 0);
        assert_eq!(bouncings(&p, 1).unwrap().terminal(), 1);
        assert_eq!(bouncings(&p, 2).unwrap().terminal(), 1);
    }

    #[test]
    fn difference_identities_on_worked_example() {
        let p = worked_example();
        let c: Vec<u64> = (0..=2)
            .map(|j| crossings(&p, j).unwrap().terminal())
            .collect();
        let b: Vec<u64> = (0..=2)
            .map(|j| bouncings(&p, j).unwrap().terminal())
            .collect();
        assert_eq!(c[1] - c[0], differences(&p, 1).unwrap().terminal());
        assert_eq!(b[1] - b[0], differences(&p, 1).unwrap().terminal());
        assert_eq!(c[2] - c[1], differences(&p, 2).unwrap().terminal());
        assert_eq!(b[2] - b[1], differences(&p, 2).unwrap().terminal());
    }

    #[test]
    fn tiny_same_sign_values_do_not_underflow_into_crossings() {
        let p = path(vec![1e-200, 1e-200, -1e-200], vec![true, true]);
        assert_eq!(crossings(&p, 2).unwrap().terminal(), 1);
        assert_eq!(differences(&p, 2).unwrap().terminal(), 0);
        assert_eq!(bouncings(&p, 0).unwrap().terminal(), 1);
    }

    #[test]
    fn occupation_regions() {
        let p = worked_example();
        assert_eq!(occupation_stat(&p, Region::All).unwrap().terminal(), 4);
        assert_eq!(
            occupation_stat(&p, Region::Point(0.0)).unwrap().terminal(),
            2
        );
        assert_eq!(
            occupation_stat(&p, Region::Interval(-1.0, 0.5))
                .unwrap()
                .terminal(),
            3
        );
        // counts use left endpoints only
        assert_eq!(
            occupation_stat(&p, Region::Point(2.0)).unwrap().terminal(),
            0
        );
    }

    #[test]
    fn conditional_crossings_formula_pieces() {
        let rho = 1.0;
        let p = path(vec![0.0, 0.0, 0.0], vec![true, true]);
        let n = p.grid.n();
        let fn0 = asymptotic_fn(AsymKind::F, n, 0.0, rho).unwrap();
        let c0 = conditional_crossings(&p, 0, rho).unwrap();
        let c1 = conditional_crossings(&p, 1, rho).unwrap();
        let c2 = conditional_crossings(&p, 2, rho).unwrap();
        assert_eq!(c0, vec![0.0, 0.0, 0.0]);
        assert!((c1[2] - 2.0 * (1.0 - fn0)).abs() < 1e-15);
        // all-zero skeleton: conditional type-2 minus type-1 is k * f_n(0)
        assert!((c2[2] - c1[2] - 2.0 * fn0).abs() < 1e-15);
    }

    #[test]
    fn conditional_type0_vanishes_far_from_zero() {
        let p = path(vec![5.0, 6.0, 5.5, 6.5], vec![false, false, false]);
        let c0 = conditional_crossings(&p, 0, 1.0).unwrap();
        assert!(c0[3] < 1e-6, "got {}", c0[3]);
    }

    #[test]
    fn conditional_terms_are_probabilities() {
        let p = worked_example();
        let c0 = conditional_crossings(&p, 0, 1.0).unwrap();
        for w in c0.windows(2) {
            let inc = w[1] - w[0];
            assert!((0.0..=1.0).contains(&inc));
        }
        assert!(c0.last().unwrap() <= &(p.intervals() as f64));
    }

    #[test]
    fn local_time_estimate_formulas() {
        let p = path(vec![0.0; 5], vec![true; 4]);
        let est = local_time_estimates(&p, Some(2.0)).unwrap();
        // all-zero path: occupation = T/rho, d1 = 0
        assert_eq!(est.via_occupation, Some(1.0 / 2.0));
        assert_eq!(est.via_d1, 0.0);
        assert!(local_time_estimates(&p, Some(-1.0)).is_err());
        assert_eq!(local_time_estimates(&p, None).unwrap().via_occupation, None);
    }

    #[test]
    fn stat_report_normalizes_terminal() {
        let p = worked_example();
        let s = crossings(&p, 2).unwrap();
        let r = StatReport::new(s, Normalizer::N, p.grid.n());
        assert_eq!(r.normalized_terminal, 1.0);
        let s = crossings(&p, 0).unwrap();
        let r = StatReport::new(s, Normalizer::SqrtN, p.grid.n());
        assert_eq!(r.normalized_terminal, 0.5);
    }

    #[test]
    fn invalid_path_is_rejected() {
        let grid = ObservationGrid::new(1, 1.0).unwrap();
        let bad = SamplePath {
            grid,
            values: vec![1.0, -1.0],
            hit_flags: vec![false],
            seed: 0,
        };
        assert!(matches!(crossings(&bad, 0), Err(Error::Validation(_))));
    }
}
