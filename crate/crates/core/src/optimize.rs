//! Scalar minimization and root bracketing used by the classical and
//! mean-field solvers.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a minimum of `f` on `[a, b]`.
///
/// Stops when the bracket is narrower than `rel_tol · max(|x|, scale)`.
/// Returns `(x_min, f(x_min), evaluations)`.
pub fn golden_section<F>(mut f: F, mut a: f64, mut b: f64, rel_tol: f64, scale: f64) -> (f64, f64, usize)
where
    F: FnMut(f64) -> f64,
{
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut evals = 2;
    while (b - a).abs() > rel_tol * c.abs().max(scale) && evals < 500 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        evals += 1;
    }
    if fc < fd {
        (c, fc, evals)
    } else {
        (d, fd, evals)
    }
}

/// Bisection for a sign change of `f` on `[a, b]`. `fa` and `fb` are the
/// endpoint values and must have opposite signs (or one of them be zero).
pub fn bisect<F>(mut f: F, mut a: f64, mut b: f64, mut fa: f64, fb: f64, max_iter: usize) -> Result<(f64, usize)>
where
    F: FnMut(f64) -> f64,
{
    if fa == 0.0 {
        return Ok((a, 0));
    }
    if fb == 0.0 {
        return Ok((b, 0));
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{a:.6e}, {b:.6e}] ({fa:.3e}, {fb:.3e})"
        )));
    }
    let mut evals = 0;
    while evals < max_iter {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        evals += 1;
        if fm == 0.0 {
            return Ok((m, evals));
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok((0.5 * (a + b), evals))
}
