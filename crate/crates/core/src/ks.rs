//! Two-sample Kolmogorov-Smirnov test.
//!
//! The statistic is the sup-distance between empirical CDFs, evaluated with
//! ties handled exactly (both samples may carry atoms). The p-value uses the
//! asymptotic Kolmogorov distribution, which is conservative in the presence
//! of atoms.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Survival function of the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        let signed = if k % 2 == 1 { term } else { -term };
        sum += signed;
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

pub fn two_sample_ks(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.len() < 8 || b.len() < 8 {
        return Err(Error::Argument(format!(
            "two-sample KS needs at least 8 points per sample, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|p, q| p.total_cmp(q));
    ys.sort_by(|p, q| p.total_cmp(q));
    let (n, m) = (xs.len(), ys.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let t = xs[i].min(ys[j]);
        while i < n && xs[i] <= t {
            i += 1;
        }
        while j < m && ys[j] <= t {
            j += 1;
        }
        let fa = i as f64 / n as f64;
        let fb = j as f64 / m as f64;
        d = d.max((fa - fb).abs());
    }
    let effective = ((n * m) as f64 / (n + m) as f64).sqrt();
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_survival(effective * d),
    })
}
