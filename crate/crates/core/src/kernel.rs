//! Closed-form sticky Brownian transition kernel and derived probabilities.
//!
//! All tail quantities are computed through the scaled complementary error
//! function, so nothing here overflows for large arguments. The CDF is fully
//! closed-form: the half-line crossing mass
//!
//!   M(t, m) = (1/2) e^{-m^2/2t} (erfcx(m/sqrt(2t)) - erfcx(m/sqrt(2t) + sqrt(2t)/rho))
//!
//! doubles as the partial integral of the crossing tail, which makes both the
//! CDF and its inverse (used by the exact sampler) cheap and monotone.

use crate::error::{Error, Result};
use crate::quad::{adaptive_simpson, Quadrature};
use crate::special::{erfc, erfcx, norm_cdf, SQRT_PI};

const SQRT_2PI: f64 = 2.5066282746310002;

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("time must be > 0, got {t}")));
    }
    Ok(())
}

fn check_t_rho(t: f64, rho: f64) -> Result<()> {
    check_t(t)?;
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("stickiness must be > 0, got {rho}")));
    }
    Ok(())
}

/// Atom mass started from |x| = m: erfcx(m/sqrt(2t) + sqrt(2t)/rho) e^{-m^2/2t}.
pub(crate) fn raw_atom(t: f64, m: f64, rho: f64) -> f64 {
    let s2t = (2.0 * t).sqrt();
    erfcx(m / s2t + s2t / rho) * (-m * m / (2.0 * t)).exp()
}

/// Mass on the far side of 0 at time t, started from |x| = m.
///
/// Also equals the tail integral int_v^inf raw_atom(t, m', rho)/rho dm'
/// evaluated at m' = m, which is what the CDF branches below rely on.
pub(crate) fn raw_half_mass(t: f64, m: f64, rho: f64) -> f64 {
    let s2t = (2.0 * t).sqrt();
    let a = m / s2t;
    0.5 * (-m * m / (2.0 * t)).exp() * (erfcx(a) - erfcx(a + s2t / rho))
}

/// Brownian kernel killed at 0, for 0 <= ax, ay (same-side magnitudes).
pub(crate) fn raw_absorbed(t: f64, ax: f64, ay: f64) -> f64 {
    let d = ax - ay;
    let s = ax + ay;
    ((-d * d / (2.0 * t)).exp() - (-s * s / (2.0 * t)).exp()) / (t.sqrt() * SQRT_2PI)
}

/// CDF of the absorbed (killed at 0) kernel from x > 0, evaluated at w >= 0.
pub(crate) fn raw_absorbed_cdf(t: f64, x: f64, w: f64) -> f64 {
    let s = t.sqrt();
    norm_cdf((w - x) / s) - norm_cdf(-x / s) - norm_cdf((w + x) / s) + norm_cdf(x / s)
}

/// CDF branch for x >= 0 (see sticky_cdf).
fn cdf_from_nonneg(t: f64, x: f64, rho: f64, y: f64) -> f64 {
    let s2t = (2.0 * t).sqrt();
    if y < 0.0 {
        raw_half_mass(t, x - y, rho)
    } else if y == 0.0 {
        raw_half_mass(t, x, rho) + raw_atom(t, x, rho)
    } else {
        erfc(x / s2t) - raw_half_mass(t, x + y, rho) + raw_absorbed_cdf(t, x, y)
    }
}

/// Killed-at-zero Brownian transition density; the no-hit part of the kernel.
pub fn absorbed_density(t: f64, x: f64, y: f64) -> Result<f64> {
    check_t(t)?;
    if x * y <= 0.0 {
        return Ok(0.0);
    }
    Ok(raw_absorbed(t, x.abs(), y.abs()).max(0.0))
}

/// Lebesgue density p_rho(t, x, y) of the sticky kernel at y != 0.
pub fn sticky_density(t: f64, x: f64, y: f64, rho: f64) -> Result<f64> {
    check_t_rho(t, rho)?;
    if y == 0.0 {
        return Err(Error::Domain(
            "sticky_density needs y != 0; the mass at 0 is sticky_atom_mass".into(),
        ));
    }
    let absorbed = if x * y > 0.0 {
        raw_absorbed(t, x.abs(), y.abs())
    } else {
        0.0
    };
    Ok((absorbed + raw_atom(t, x.abs() + y.abs(), rho) / rho).max(0.0))
}

/// P_x(X_t = 0), the atom mass of the sticky kernel.
pub fn sticky_atom_mass(t: f64, x: f64, rho: f64) -> Result<f64> {
    check_t_rho(t, rho)?;
    Ok(raw_atom(t, x.abs(), rho).clamp(0.0, 1.0))
}

/// P_x(X_t <= y); right-continuous with a jump of sticky_atom_mass at y = 0.
pub fn sticky_cdf(t: f64, x: f64, rho: f64, y: f64) -> Result<f64> {
    check_t_rho(t, rho)?;
    let v = if x >= 0.0 {
        cdf_from_nonneg(t, x, rho, y)
    } else if y == 0.0 {
        1.0 - raw_half_mass(t, -x, rho)
    } else {
        // P_x(X <= y) = 1 - P_{-x}(X < -y); the reflected CDF is continuous
        // at -y because y != 0.
        1.0 - cdf_from_nonneg(t, -x, rho, -y)
    };
    Ok(v.clamp(0.0, 1.0))
}

/// P(the path hits 0 in [0, t] | X_0 = x, X_t = y).
pub fn hit_probability(t: f64, x: f64, y: f64, rho: f64) -> Result<f64> {
    check_t_rho(t, rho)?;
    if x * y <= 0.0 {
        return Ok(1.0);
    }
    let absorbed = raw_absorbed(t, x.abs(), y.abs());
    let crossing = raw_atom(t, x.abs() + y.abs(), rho) / rho;
    Ok((crossing / (absorbed + crossing)).clamp(0.0, 1.0))
}

/// The four small-time functions attached to the kernel at step 1/n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymKind {
    /// f_n(x) = P_x(X_{1/n} = 0)
    F,
    /// g_n(x) = P_x(x X_{1/n} < 0)
    G,
    /// h_n(x) = sqrt(n) g_n(x / sqrt(n))
    H,
    /// k_n(x) = 1{x != 0} f_n(x / sqrt(n))
    K,
}

pub fn asymptotic_fn(kind: AsymKind, n: u64, x: f64, rho: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("stickiness must be > 0, got {rho}")));
    }
    let t = 1.0 / n as f64;
    let rn = (n as f64).sqrt();
    Ok(match kind {
        AsymKind::F => raw_atom(t, x.abs(), rho),
        AsymKind::G => {
            if x == 0.0 {
                0.0
            } else {
                raw_half_mass(t, x.abs(), rho)
            }
        }
        AsymKind::K => {
            if x == 0.0 {
                0.0
            } else {
                raw_atom(t, x.abs() / rn, rho)
            }
        }
        AsymKind::H => {
            if x == 0.0 {
                0.0
            } else {
                rn * raw_half_mass(t, x.abs() / rn, rho)
            }
        }
    })
}

/// Speed-measure functional m_{sqrt(n) rho}(g) = int g dx + sqrt(n) rho g(0).
///
/// The integral runs over `window` (default [-20, 20]); the integrand is
/// sampled one-sidedly around the possible discontinuity at 0 so that
/// indicator factors at the origin do not slow the quadrature down.
pub fn m_functional<G: Fn(f64) -> f64>(
    g: &G,
    n: u64,
    rho: f64,
    window: Option<(f64, f64)>,
) -> Result<Quadrature> {
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("stickiness must be > 0, got {rho}")));
    }
    let (a, b) = window.unwrap_or((-20.0, 20.0));
    if !(a < b) {
        return Err(Error::Argument(format!(
            "bad integration window [{a}, {b}]"
        )));
    }
    let tol = 1e-10;
    let (value, err) = if a < 0.0 && b > 0.0 {
        let left = adaptive_simpson(&|x: f64| g(if x == 0.0 { -1e-300 } else { x }), a, 0.0, tol)?;
        let right = adaptive_simpson(&|x: f64| g(if x == 0.0 { 1e-300 } else { x }), 0.0, b, tol)?;
        (
            left.value + right.value,
            left.error_estimate + right.error_estimate,
        )
    } else {
        let q = adaptive_simpson(g, a, b, tol)?;
        (q.value, q.error_estimate)
    };
    Ok(Quadrature {
        value: value + (n as f64).sqrt() * rho * g(0.0),
        error_estimate: err,
    })
}

/// Laplace transform (in t) of the limiting crossing-count law:
/// A/(1/rho^2 + A) (1/rho^2 / (1/rho^2 + A))^k with A = sqrt(l)(sqrt(l) + sqrt(2)/rho).
pub fn limit_law_transform(lambda: f64, k: u64, rho: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
    }
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("stickiness must be > 0, got {rho}")));
    }
    let a = lambda.sqrt() * (lambda.sqrt() + std::f64::consts::SQRT_2 / rho);
    let b = 1.0 / (rho * rho);
    Ok(a / (b + a) * (b / (b + a)).powi(k as i32))
}

/// Stability tolerance for the two-order Gaver-Stehfest cross-check.
const PMF_STABILITY_TOL: f64 = 1e-4;

/// pmf b_k(t) of the limit law, by numerical Laplace inversion.
pub fn limit_law_pmf(t: f64, k: u64, rho: f64, inversion_order: usize) -> Result<f64> {
    check_t_rho(t, rho)?;
    let transform = |l: f64| limit_law_transform(l, k, rho).unwrap_or(0.0) / l;
    let v1 = crate::laplace::gaver_stehfest(&transform, t, inversion_order)?;
    let other = if inversion_order + 2 <= 18 {
        inversion_order + 2
    } else {
        inversion_order - 2
    };
    let v2 = crate::laplace::gaver_stehfest(&transform, t, other)?;
    if (v1 - v2).abs() > PMF_STABILITY_TOL {
        return Err(Error::Numeric(format!(
            "unstable Laplace inversion for b_{k}({t}): order {inversion_order} gives {v1}, order {other} gives {v2}"
        )));
    }
    Ok(v1.clamp(0.0, 1.0))
}

/// Limit of sqrt(n)(1 - f_n(0)): 2 sqrt(2) / (rho sqrt(pi)).
pub fn atom_deficit_limit(rho: f64) -> f64 {
    2.0 * std::f64::consts::SQRT_2 / (rho * SQRT_PI)
}
