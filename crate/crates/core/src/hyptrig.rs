//! Closed-form hyperbolic trigonometry (curvature −1).
//!
//! Every formula is the classical cosine rule rearranged into half-angle
//! form, so that small sides and small angles keep full relative precision:
//!
//! * `sinh²(c/2) = sinh²((a−b)/2) + sinh a·sinh b·sin²(γ/2)` (side from SAS)
//! * `tan²(γ/2) = sinh(s−a)·sinh(s−b) / (sinh s·sinh(s−c))` (angle from SSS)
//! * `sinh²(b/2) = cos S·cos(S−β) / (sin α·sin γ)`, `S = (α+β+γ)/2` (side from AAA)
//!
//! Angles are always recovered with `atan2` from both half-angle factors,
//! never with `arcsin`, so obtuse angles come out on the right branch.

use std::cmp::Ordering;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::real::Real;

/// Arguments this close to the edge of an inverse function's domain are
/// roundoff, not invalid data.
pub const CLAMP_TOL: f64 = 1e-12;

/// A solved hyperbolic triangle; `alpha` is opposite `a`, and so on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Triangle {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Triangle {
    /// Solve from three sides.
    pub fn from_sides(a: f64, b: f64, c: f64) -> Result<Triangle> {
        Ok(Triangle {
            a,
            b,
            c,
            alpha: angle_from_sss(b, c, a)?,
            beta: angle_from_sss(c, a, b)?,
            gamma: angle_from_sss(a, b, c)?,
        })
    }

    pub fn angle_sum(&self) -> f64 {
        self.alpha + self.beta + self.gamma
    }

    /// Area, equal to the angle defect.
    pub fn area(&self) -> f64 {
        PI - self.angle_sum()
    }

    /// Largest relative deviation between the three ratios `sinh(side)/sin(angle)`.
    pub fn sine_rule_residual(&self) -> f64 {
        let r = [
            self.a.sinh() / self.alpha.sin(),
            self.b.sinh() / self.beta.sin(),
            self.c.sinh() / self.gamma.sin(),
        ];
        let scale = r[0].abs().max(r[1].abs()).max(r[2].abs());
        let spread = (r[0] - r[1])
            .abs()
            .max((r[1] - r[2]).abs())
            .max((r[0] - r[2]).abs());
        spread / scale
    }

    /// Largest relative residual of the three cosine rules `cosh c = cosh a cosh b − sinh a sinh b cos γ`.
    pub fn cosine_rule_residual(&self) -> f64 {
        let rule = |x: f64, y: f64, z: f64, ang: f64| {
            let rhs = x.cosh() * y.cosh() - x.sinh() * y.sinh() * ang.cos();
            (z.cosh() - rhs).abs() / z.cosh()
        };
        rule(self.a, self.b, self.c, self.gamma)
            .max(rule(self.b, self.c, self.a, self.alpha))
            .max(rule(self.c, self.a, self.b, self.beta))
    }
}

fn check_nan<R: Real>(xs: &[&R]) -> Result<()> {
    if xs.iter().any(|x| x.to_f64().is_nan()) {
        Err(Error::MalformedInput("NaN argument".into()))
    } else {
        Ok(())
    }
}

fn lit<R: Real>(x: f64) -> R {
    R::from_f64(x)
}

/// `2·atan2(√s, √c)` for the half-angle factors `s = sin²(γ/2)`, `c = cos²(γ/2)`.
fn from_half_factors<R: Real>(sin2: R, cos2: R) -> R {
    lit::<R>(2.0) * sin2.max0().sqrt().atan2(&cos2.max0().sqrt())
}

/// Third side of the triangle with sides `a`, `b` enclosing `gamma`.
pub fn side_from_sas<R: Real>(a: R, b: R, gamma: R) -> Result<R> {
    check_nan(&[&a, &b, &gamma])?;
    Ok(sas_side(a, b, gamma))
}

fn sas_side<R: Real>(a: R, b: R, gamma: R) -> R {
    let h = (a.clone() - b.clone()).half().sinh();
    let s = gamma.half().sin();
    let q = h.sq() + a.sinh() * b.sinh() * s.sq();
    lit::<R>(2.0) * q.max0().sqrt().asinh()
}

/// Angle between sides `a` and `b` opposite side `c`.
pub fn angle_from_sss<R: Real>(a: R, b: R, c: R) -> Result<R> {
    check_nan(&[&a, &b, &c])?;
    let s = (a.clone() + b.clone() + c.clone()).half();
    let sa = (s.clone() - a.clone()).sinh();
    let sb = (s.clone() - b.clone()).sinh();
    let sc = (s.clone() - c.clone()).sinh();
    let ss = s.sinh();
    let denom = a.sinh() * b.sinh();
    // sin²(γ/2) and cos²(γ/2)
    let sin2 = sa * sb / denom.clone();
    let cos2 = ss * sc / denom.clone();
    if !(denom.to_f64() > 0.0)
        || sin2.to_f64() < -CLAMP_TOL / 2.0
        || cos2.to_f64() < -CLAMP_TOL / 2.0
    {
        let (a, b, c) = (a.to_f64(), b.to_f64(), c.to_f64());
        let cos = (a.cosh() * b.cosh() - c.cosh()) / (a.sinh() * b.sinh());
        return Err(Error::TriangleInequalityViolated { a, b, c, cos });
    }
    Ok(from_half_factors(sin2, cos2))
}

/// `ψ(α, c, β)`: the third angle of the triangle whose side `c` lies between angles `alpha` and `beta`.
pub fn angle_psi<R: Real>(alpha: R, c: R, beta: R) -> Result<R> {
    check_nan(&[&alpha, &c, &beta])?;
    let k = alpha.sin() * beta.sin() * c.half().sinh().sq();
    let mid = (alpha + beta).half();
    // cos γ = −cos(α+β) + 2 sin α sin β sinh²(c/2)
    let sin2 = mid.cos().sq() - k.clone();
    let cos2 = mid.sin().sq() + k;
    if sin2.to_f64() < -CLAMP_TOL / 2.0 {
        return Err(Error::NotRealizable {
            cos: 1.0 - 2.0 * sin2.to_f64(),
        });
    }
    Ok(from_half_factors(sin2, cos2))
}

/// `g(α, β, γ)`: the side opposite `beta`, lying between the vertices carrying `alpha` and `gamma`.
pub fn side_from_aaa<R: Real>(alpha: R, beta: R, gamma: R) -> Result<R> {
    check_nan(&[&alpha, &beta, &gamma])?;
    let sum = alpha.clone() + beta.clone() + gamma.clone();
    let in_range = |x: &R| x.to_f64() > 0.0 && x.to_f64() < PI;
    if !(in_range(&alpha) && in_range(&beta) && in_range(&gamma)) || sum.to_f64() >= PI - CLAMP_TOL
    {
        return Err(Error::AngleSumNotHyperbolic { sum: sum.to_f64() });
    }
    let half = sum.half();
    let q = half.cos() * (half - beta).cos() / (alpha.sin() * gamma.sin());
    Ok(lit::<R>(2.0) * q.max0().sqrt().asinh())
}

/// `f(c, β, a)`: the angle opposite `c` in the triangle with sides `a`, `c` enclosing `beta`.
///
/// Evaluated as SAS followed by SSS, so the obtuse branch is handled.
pub fn angle_f<R: Real>(c: R, beta: R, a: R) -> Result<R> {
    let b = side_from_sas(a.clone(), c.clone(), beta)?;
    angle_from_sss(b, a, c)
}

/// `h(β₁, β₂, γ, δ₂, δ₁)`: apex angle of a quadrilateral glued from two
/// triangles along a diagonal of length `g(β₂, γ, δ₂)`.
pub fn angle_h<R: Real>(beta1: R, beta2: R, gamma: R, delta2: R, delta1: R) -> Result<R> {
    angle_psi(beta1, side_from_aaa(beta2, gamma, delta2)?, delta1)
}

/// Solve the triangle with sides `a`, `b` enclosing `gamma`; `gamma` is kept bit-exact.
pub fn solve_sas(a: f64, gamma: f64, b: f64) -> Triangle {
    let c = sas_side(a, b, gamma);
    // SSS on a consistent triple only fails by roundoff, which clamps.
    let alpha = angle_from_sss(b, c, a).unwrap_or(0.0);
    let beta = angle_from_sss(c, a, b).unwrap_or(0.0);
    Triangle {
        a,
        b,
        c,
        alpha,
        beta,
        gamma,
    }
}

/// Order of the sides opposite `gamma1` and `gamma2` for fixed enclosing sides.
/// Always the same as the order of the angles.
pub fn schmutz_compare(a: f64, b: f64, gamma1: f64, gamma2: f64) -> Ordering {
    let c1 = sas_side(a, b, gamma1);
    let c2 = sas_side(a, b, gamma2);
    c1.partial_cmp(&c2).unwrap_or(Ordering::Equal)
}
