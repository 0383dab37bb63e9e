//! Bracketed bisection for the one-parameter hinge problems.

/// Shared settings of the hinge solvers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BisectConfig {
    /// Distance kept from the degenerate ends of the hinge interval.
    pub shrink: f64,
    pub max_iter: usize,
    pub x_tol: f64,
    pub f_tol: f64,
}

impl Default for BisectConfig {
    fn default() -> Self {
        BisectConfig {
            shrink: 1e-9,
            max_iter: 200,
            x_tol: 1e-13,
            f_tol: 1e-12,
        }
    }
}

/// Values of the function at the bracket ends when the target is not between them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoBracket {
    pub f_lo: f64,
    pub f_hi: f64,
}

/// Find `x ∈ [lo, hi]` with `f(x) = target` for monotone `f` (either direction).
pub fn bisect_monotone<F>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    target: f64,
    cfg: &BisectConfig,
) -> Result<f64, NoBracket>
where
    F: Fn(f64) -> f64,
{
    let f_lo = f(lo) - target;
    let f_hi = f(hi) - target;
    if !(f_lo.is_finite() && f_hi.is_finite()) || f_lo * f_hi > 0.0 {
        return Err(NoBracket {
            f_lo: f_lo + target,
            f_hi: f_hi + target,
        });
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    let rising = f_hi > 0.0;
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..cfg.max_iter {
        mid = 0.5 * (lo + hi);
        let r = f(mid) - target;
        if r.abs() < cfg.f_tol || hi - lo < cfg.x_tol {
            break;
        }
        if (r > 0.0) == rising {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(mid)
}
