//! The 6g−5 angle chart of Teichmüller space (g ≥ 3).
//!
//! Parameter layout (1-based):
//!
//! * `θ_i = α_i` for `i = 1..4g−4`, except `θ_{2g+1} = φ_1` (`α_{2g+1} = α_1` anyway);
//! * `θ_{4g−4+i} = β_i` for `i = 1..2g−1`.
//!
//! Reconstruction runs the fan from `Q_4g` triangle by triangle and ends in
//! the quadrilateral `S = Q_4g Q_{4g−3} Q_{4g−2} Q_{4g−1}` whose four sides
//! are then known. `S` has one hinge degree of freedom. Its angles must meet
//! two linear constraints coming from the angle sum and from condition (v);
//! the alternating one is solved on the hinge and the other is checked,
//! because the chart has one more coordinate than `dim T_g = 6g − 6`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hyptrig::{angle_f, angle_from_sss, angle_h, angle_psi, side_from_aaa};
use crate::polygon::{alternating_sign, fan_triangulate, validate_canonical, CanonicalPolygon};
use crate::real::{Real, Wide};
use crate::solve::{bisect_monotone, BisectConfig};

/// Reconstructed polygons must pass validation at this tolerance.
pub const VALIDATE_TOL: f64 = 1e-8;
/// Allowed mismatch of the checked (not solved) quadrilateral constraint.
pub const CONSISTENCY_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub struct TeichParams {
    pub genus: usize,
    pub theta: Vec<f64>,
}

impl TeichParams {
    pub fn new(genus: usize, theta: Vec<f64>) -> Result<Self> {
        if genus < 3 {
            return Err(Error::GenusTooSmall { genus, min: 3 });
        }
        if theta.len() != 6 * genus - 5 {
            return Err(Error::MalformedInput(format!(
                "genus {genus} needs {} angles, got {}",
                6 * genus - 5,
                theta.len()
            )));
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::MalformedInput("non-finite entry".into()));
        }
        Ok(TeichParams { genus, theta })
    }

    /// `θ_k`, 1-based.
    pub fn get(&self, k: usize) -> f64 {
        self.theta[k - 1]
    }

    /// `α_i` for `i = 1..4g−4`.
    pub fn alpha(&self, i: usize) -> f64 {
        if i == 2 * self.genus + 1 {
            self.get(1)
        } else {
            self.get(i)
        }
    }

    pub fn phi1(&self) -> f64 {
        self.get(2 * self.genus + 1)
    }

    /// `β_i` for `i = 1..2g−1`.
    pub fn beta(&self, i: usize) -> f64 {
        self.get(4 * self.genus - 4 + i)
    }
}

/// Angles of a quadrilateral `ABCD` in natural order, plus the length of the
/// diagonal the hinge solver moved along.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub diag: f64,
}

impl QuadAngles {
    pub fn angle_sum(&self) -> f64 {
        self.alpha + self.beta + self.gamma + self.delta
    }

    pub fn alt_sum(&self) -> f64 {
        self.alpha - self.beta + self.gamma - self.delta
    }
}

/// Quadrilateral `ABCD` with sides `[AB, BC, CD, DA]`, hinged on the diagonal `BD`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadHinge {
    pub sides: [f64; 4],
}

impl QuadHinge {
    /// Open interval of admissible `BD`, shrunk by `eps` at both ends.
    pub fn interval(&self, eps: f64) -> Option<(f64, f64)> {
        let [ab, bc, cd, da] = self.sides;
        let lo = (ab - da).abs().max((bc - cd).abs()) + eps;
        let hi = (ab + da).min(bc + cd) - eps;
        (lo < hi).then_some((lo, hi))
    }

    /// Angles at `A, B, C, D` when `BD = d`, with `A` and `C` on opposite sides of `BD`.
    pub fn angles(&self, d: f64) -> Result<QuadAngles> {
        let [ab, bc, cd, da] = self.sides;
        let a = angle_from_sss(ab, da, d)?;
        let b_up = angle_from_sss(ab, d, da)?;
        let d_up = angle_from_sss(da, d, ab)?;
        let c = angle_from_sss(bc, cd, d)?;
        let b_low = angle_from_sss(bc, d, cd)?;
        let d_low = angle_from_sss(cd, d, bc)?;
        Ok(QuadAngles {
            alpha: a,
            beta: b_up + b_low,
            gamma: c,
            delta: d_up + d_low,
            diag: d,
        })
    }

    fn alt(&self, d: f64) -> f64 {
        self.angles(d).map(|q| q.alt_sum()).unwrap_or(f64::NAN)
    }
}

/// Determine the quadrilateral with the given four sides (`[AB, BC, CD, DA]`)
/// from its angle sum and its alternating sum `α − β + γ − δ`.
///
/// The alternating sum is strictly increasing in `BD`: `α` and `γ` sit
/// opposite `BD`, `β` and `δ` opposite `AC`, which shrinks as `BD` grows. It
/// is solved by bisection; the angle sum is then checked against `tol_consistency`.
pub fn solve_quad_teich(
    sides: [f64; 4],
    angle_sum: f64,
    alt_sum: f64,
    tol_consistency: f64,
) -> Result<QuadAngles> {
    if sides.iter().any(|s| !(*s > 0.0)) || !angle_sum.is_finite() || !alt_sum.is_finite() {
        return Err(Error::ParameterDomainError(format!(
            "quadrilateral data {sides:?}"
        )));
    }
    if !(angle_sum > 0.0 && angle_sum < 2.0 * PI) {
        return Err(Error::NoBracket {
            target: angle_sum,
            lo: 0.0,
            hi: 2.0 * PI,
        });
    }
    let cfg = BisectConfig::default();
    let hinge = QuadHinge { sides };
    let (lo, hi) = hinge.interval(cfg.shrink).ok_or_else(|| {
        Error::ParameterDomainError(format!("sides {sides:?} admit no quadrilateral"))
    })?;
    let d =
        bisect_monotone(|d| hinge.alt(d), lo, hi, alt_sum, &cfg).map_err(|e| Error::NoBracket {
            target: alt_sum,
            lo: e.f_lo,
            hi: e.f_hi,
        })?;
    let q = hinge.angles(d)?;
    let miss = (q.angle_sum() - angle_sum).abs();
    if miss > tol_consistency {
        return Err(Error::ImageConsistencyError(format!(
            "quadrilateral angle sum {} misses target {} by {miss:.3e}",
            q.angle_sum(),
            angle_sum
        )));
    }
    Ok(q)
}

/// Read off `θ` from the fan at `Q_4g`.
pub fn extract_theta(p: &CanonicalPolygon) -> Result<TeichParams> {
    let g = p.genus;
    if g < 3 {
        return Err(Error::GenusTooSmall { genus: g, min: 3 });
    }
    let fan = fan_triangulate(p)?;
    let mut theta = Vec::with_capacity(6 * g - 5);
    for i in 1..=4 * g - 4 {
        theta.push(if i == 2 * g + 1 {
            fan.phi(1)
        } else {
            p.angles[i - 1]
        });
    }
    theta.extend((1..2 * g).map(|i| fan.beta(i)));
    TeichParams::new(g, theta)
}

fn domain<T>(what: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::ParameterDomainError(format!("{what}: {e}")))
}

fn open_angle<R: Real>(what: &str, x: R) -> Result<R> {
    let v = x.to_f64();
    if v > 0.0 && v < PI {
        Ok(x)
    } else {
        Err(Error::ParameterDomainError(format!(
            "{what} = {v} not in (0, π)"
        )))
    }
}

/// What the fan chain hands to the quadrilateral step, rounded to `f64`.
#[derive(Clone, Debug, PartialEq)]
struct ChainData {
    /// `a_1..a_2g`.
    half_sides: Vec<f64>,
    /// Sides `[AB, BC, CD, DA]` of `S`.
    quad_sides: [f64; 4],
    sum_target: f64,
    alt_target: f64,
    phi_last: f64,
    apex_fan: f64,
}

/// The triangle chain of the reconstruction, in the order the recurrences are stated.
fn fan_chain<R: Real>(params: &TeichParams) -> Result<ChainData> {
    let g = params.genus;
    let n = 4 * g;
    let w = |x: f64| R::from_f64(x);
    let al = |i: usize| w(params.alpha(i));
    let nan = || w(f64::NAN);

    // 1-based scratch arrays
    let mut phi = vec![nan(); n];
    let mut beta = vec![nan(); n];
    let mut b = vec![nan(); n];
    let mut a = vec![nan(); 2 * g + 1];
    for i in 1..2 * g {
        beta[i] = w(params.beta(i));
    }
    phi[1] = w(params.phi1());

    // T_1 = (Q_4g, Q_1, Q_2) from its three angles β_1, α_1, φ_1.
    a[1] = domain("a_1", side_from_aaa(beta[1].clone(), phi[1].clone(), al(1)))?;
    a[2] = domain("a_2", side_from_aaa(al(1), beta[1].clone(), phi[1].clone()))?;
    b[1] = domain("b_1", side_from_aaa(phi[1].clone(), al(1), beta[1].clone()))?;

    // φ_2 = h(α_2 − φ_1, φ_1, α_1, β_1, β_2); φ_i likewise up to i = 2g−1.
    let mut prev_rem = al(1);
    for i in 2..2 * g {
        let rem = open_angle(&format!("α_{i} − φ_{}", i - 1), al(i) - phi[i - 1].clone())?;
        phi[i] = domain(
            &format!("φ_{i}"),
            angle_h(
                rem.clone(),
                phi[i - 1].clone(),
                prev_rem,
                beta[i - 1].clone(),
                beta[i].clone(),
            ),
        )?;
        a[i + 1] = domain(
            &format!("a_{}", i + 1),
            side_from_aaa(rem.clone(), beta[i].clone(), phi[i].clone()),
        )?;
        prev_rem = rem;
    }
    let rem = al(2 * g - 1) - phi[2 * g - 2].clone();
    b[2 * g - 1] = domain(
        "b_{2g−1}",
        side_from_aaa(phi[2 * g - 1].clone(), rem, beta[2 * g - 1].clone()),
    )?;
    b[2 * g] = b[1].clone();

    // T_{2g+1} = (Q_4g, Q_2g, Q_{2g+2}).
    let at_q2g = open_angle(
        "α_2g − φ_{2g−1} − β_1",
        al(2 * g) - phi[2 * g - 1].clone() - beta[1].clone(),
    )?;
    let gamma = domain(
        "γ",
        angle_f(b[2 * g].clone(), at_q2g.clone(), b[2 * g - 1].clone()),
    )?;
    let corner = domain(
        "φ_{2g+1}",
        angle_psi(at_q2g.clone(), b[2 * g - 1].clone(), gamma.clone()),
    )?;
    phi[2 * g + 1] = phi[1].clone() + corner.clone();
    b[2 * g + 1] = domain("b_{2g+1}", side_from_aaa(corner, at_q2g, gamma.clone()))?;

    // T_k = (Q_4g, Q_k, Q_{k+1}) for k = 2g+2..4g−4, outer side a_{k+1} = a_{k+1−2g}.
    for k in 2 * g + 2..=n - 4 {
        let rem = open_angle(&format!("α_{k} − φ_{}", k - 1), al(k) - phi[k - 1].clone())?;
        beta[k] = domain(
            &format!("β_{k}"),
            angle_f(a[k + 1 - 2 * g].clone(), rem.clone(), b[k - 1].clone()),
        )?;
        phi[k] = domain(
            &format!("φ_{k}"),
            angle_psi(rem.clone(), b[k - 1].clone(), beta[k].clone()),
        )?;
        b[k] = domain(
            &format!("b_{k}"),
            side_from_aaa(phi[k].clone(), rem, beta[k].clone()),
        )?;
    }

    // Quadrilateral S: A = Q_4g, B = Q_{4g−3}, C = Q_{4g−2}, D = Q_{4g−1}.
    let mut apex_fan = gamma;
    for i in (1..2 * g).chain(2 * g + 2..=n - 4) {
        apex_fan = apex_fan + beta[i].clone();
    }
    let mut known_sum = w(0.0);
    let mut known_alt = w(0.0);
    for i in 1..=n - 4 {
        known_sum = known_sum + al(i);
        known_alt = known_alt + w(alternating_sign(i, g)) * al(i);
    }
    let phi_last = phi[n - 4].clone();
    // Σα = 2π and condition (v), rewritten in the angles of S:
    //   ω + η + α_{4g−2} + α_{4g−1} = 2π − Σ_{i≤4g−4} α_i − φ_{4g−4} − F
    //   ω − η + α_{4g−2} − α_{4g−1} = −Σ_{i≤4g−4} s_i α_i + φ_{4g−4} − F
    // with ω = α_4g − F (F the fan angles at Q_4g) and η = α_{4g−3} − φ_{4g−4}.
    let sum_target = w(2.0) * R::pi() - known_sum - phi_last.clone() - apex_fan.clone();
    let alt_target = -known_alt + phi_last.clone() - apex_fan.clone();
    Ok(ChainData {
        half_sides: a[1..].iter().map(Real::to_f64).collect(),
        quad_sides: [
            b[n - 4].to_f64(),
            a[2 * g - 2].to_f64(),
            a[2 * g - 1].to_f64(),
            a[2 * g].to_f64(),
        ],
        sum_target: sum_target.to_f64(),
        alt_target: alt_target.to_f64(),
        phi_last: phi_last.to_f64(),
        apex_fan: apex_fan.to_f64(),
    })
}

/// Rebuild the canonical polygon from `θ`, with the defaults [`CONSISTENCY_TOL`] and [`VALIDATE_TOL`].
pub fn reconstruct_teich(params: &TeichParams) -> Result<CanonicalPolygon> {
    reconstruct_teich_with(params, CONSISTENCY_TOL, VALIDATE_TOL)
}

pub fn reconstruct_teich_with(
    params: &TeichParams,
    tol_consistency: f64,
    tol_validate: f64,
) -> Result<CanonicalPolygon> {
    let params = TeichParams::new(params.genus, params.theta.clone())?;
    let g = params.genus;
    for (k, t) in params.theta.iter().enumerate() {
        open_angle(&format!("θ_{}", k + 1), *t)?;
    }
    let chain = fan_chain::<Wide>(&params)?;
    let quad = solve_quad_teich(
        chain.quad_sides,
        chain.sum_target,
        chain.alt_target,
        tol_consistency,
    )?;

    let mut angles: Vec<f64> = (1..=4 * g - 4).map(|i| params.alpha(i)).collect();
    angles.push(quad.beta + chain.phi_last);
    angles.push(quad.gamma);
    angles.push(quad.delta);
    angles.push(quad.alpha + chain.apex_fan);
    let sides = chain
        .half_sides
        .iter()
        .chain(chain.half_sides.iter())
        .copied()
        .collect();
    let p = CanonicalPolygon::new(g, sides, angles)?;
    let report = validate_canonical(&p, tol_validate)?;
    if !report.check("iii").map_or(false, |c| c.pass) {
        return Err(Error::ParameterDomainError(format!(
            "reconstructed angles leave (0, π): {:?}",
            p.angles
        )));
    }
    if !report.pass() {
        return Err(Error::ImageConsistencyError(format!(
            "reconstruction fails {:?}",
            report.failures()
        )));
    }
    Ok(p)
}
