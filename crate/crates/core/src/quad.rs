//! Adaptive Simpson quadrature with an error estimate.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
}

/// Integrate `f` on `[a, b]` to the requested absolute tolerance.
///
/// Returns a numeric error when the recursion depth is exhausted before the
/// tolerance is met, carrying the achieved tolerance in the message.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<Quadrature> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::Argument(format!(
            "bad quadrature interval [{a}, {b}]"
        )));
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let mut err_acc = 0.0;
    let value = recurse(f, a, b, fa, fm, fb, whole, tol, 50, &mut err_acc)?;
    Ok(Quadrature {
        value,
        error_estimate: err_acc,
    })
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    err_acc: &mut f64,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        *err_acc += delta.abs() / 15.0;
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Numeric(format!(
            "quadrature did not converge on [{a}, {b}]: achieved {:.3e}, wanted {:.3e}",
            delta.abs() / 15.0,
            tol
        )));
    }
    let half = 0.5 * tol;
    let l = recurse(f, a, m, fa, flm, fm, left, half, depth - 1, err_acc)?;
    let r = recurse(f, m, b, fm, frm, fb, right, half, depth - 1, err_acc)?;
    Ok(l + r)
}
