//! The 4g−2 angle chart of hyperelliptic canonical polygons (g ≥ 2).
//!
//! A canonical polygon is hyperelliptic exactly when opposite angles agree.
//! Its main diagonals `k_i = Q_i Q_{2g+i}` then share their midpoint `O`,
//! and the point reflection through `O` maps the polygon to itself.
//!
//! The central fan consists of the triangles
//! `T_1 = (O, Q_4g, Q_1)` and `T_i = (O, Q_{i−1}, Q_i)`:
//!
//! * `δ_i` is the angle of `T_i` at `O`;
//! * `β = ∠O Q_4g Q_1` and `φ_1 = ∠Q_4g Q_1 O`;
//! * `φ_i = ∠Q_{i−1} Q_i O`, so `T_i` has angle `α_{i−1} − φ_{i−1}` at `Q_{i−1}`.
//!
//! Parameter layout (1-based): `θ_i = α_i` for `i = 1..2g−3`,
//! `θ_{2g−3+i} = δ_i` for `i = 1..2g−1`, `θ_{4g−3} = β`, `θ_{4g−2} = φ_1`.

use std::f64::consts::PI;

use crate::embed::{self, hp_angle_at, hp_distance, hp_midpoint, C64};
use crate::error::{Error, Result};
use crate::hyptrig::{angle_h, side_from_aaa, side_from_sas, solve_sas, Triangle};
use crate::polygon::{self, opposite_angle_residual, validate_canonical, CanonicalPolygon};
use crate::real::{Real, Wide};
use crate::solve::{bisect_monotone, BisectConfig};
use crate::teich::QuadAngles;

/// Reconstructed polygons must pass validation at this tolerance.
pub const VALIDATE_TOL: f64 = 1e-8;
/// Default tolerance for opposite angles and diagonal midpoints.
pub const FAN_TOL: f64 = 1e-8;
/// Upper end of the hinge interval for `t = AC`.
pub const HINGE_MAX: f64 = 30.0;

#[derive(Clone, Debug, PartialEq)]
pub struct HyperParams {
    pub genus: usize,
    pub theta: Vec<f64>,
}

impl HyperParams {
    pub fn new(genus: usize, theta: Vec<f64>) -> Result<Self> {
        if genus < 2 {
            return Err(Error::GenusTooSmall { genus, min: 2 });
        }
        if theta.len() != 4 * genus - 2 {
            return Err(Error::MalformedInput(format!(
                "genus {genus} needs {} angles, got {}",
                4 * genus - 2,
                theta.len()
            )));
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::MalformedInput("non-finite entry".into()));
        }
        Ok(HyperParams { genus, theta })
    }

    /// `α_i` for `i = 1..2g−3`.
    pub fn alpha(&self, i: usize) -> f64 {
        self.theta[i - 1]
    }

    /// `δ_i` for `i = 1..2g`; `δ_2g = π − Σ_{i<2g} δ_i` is derived.
    pub fn delta(&self, i: usize) -> f64 {
        let g = self.genus;
        if i == 2 * g {
            PI - (1..2 * g).map(|k| self.delta(k)).sum::<f64>()
        } else {
            self.theta[2 * g - 4 + i]
        }
    }

    pub fn beta(&self) -> f64 {
        self.theta[4 * self.genus - 4]
    }

    pub fn phi1(&self) -> f64 {
        self.theta[4 * self.genus - 3]
    }

    /// Check every entry lies in `(0, π)` and `δ_2g > 0`.
    pub fn check_domain(&self) -> Result<()> {
        for (k, t) in self.theta.iter().enumerate() {
            if !(*t > 0.0 && *t < PI) {
                return Err(Error::ParameterDomainError(format!(
                    "θ_{} = {t} not in (0, π)",
                    k + 1
                )));
            }
        }
        let last = self.delta(2 * self.genus);
        if !(last > 0.0) {
            return Err(Error::ParameterDomainError(format!(
                "central angles leave δ_2g = {last} ≤ 0"
            )));
        }
        Ok(())
    }
}

/// The fan from the centre `O` of a realized hyperelliptic polygon.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralFan {
    pub genus: usize,
    /// `O` in the half-plane coordinates of [`embed::realize`].
    pub center: C64,
    /// `|O Q_j|` for `j = 1..4g` (`rays[j − 1]`).
    pub rays: Vec<f64>,
    /// `δ_1..δ_2g`.
    pub delta: Vec<f64>,
    /// `φ_1..φ_2g`.
    pub phi: Vec<f64>,
    pub beta: f64,
    /// `T_1..T_2g`, each with `alpha` at `O`, `beta` at the earlier polygon
    /// vertex and `gamma` at the later one.
    pub triangles: Vec<Triangle>,
    /// Largest distance between `O` and a main-diagonal midpoint.
    pub scatter: f64,
}

impl CentralFan {
    /// `|O Q_j|`, 1-based and cyclic.
    pub fn ray(&self, j: usize) -> f64 {
        self.rays[(j + self.rays.len() - 1) % self.rays.len()]
    }
}

/// Realize `p` and measure its central fan.
pub fn central_fan(p: &CanonicalPolygon, tol: f64) -> Result<CentralFan> {
    let residual = opposite_angle_residual(p);
    if !(residual <= tol) {
        return Err(Error::NotHyperelliptic { residual });
    }
    let g = p.genus;
    let pp = embed::realize(p, tol)?;
    let q = |k: usize| pp.q(k as isize);
    let mids: Vec<C64> = (1..=2 * g)
        .map(|i| hp_midpoint(q(i), q(i + 2 * g)))
        .collect();
    let center = mids[0];
    let scatter = mids
        .iter()
        .map(|m| hp_distance(*m, center))
        .fold(0.0, f64::max);
    if !(scatter <= tol) {
        return Err(Error::MidpointMismatch { scatter });
    }
    let rays: Vec<f64> = (1..=4 * g).map(|j| hp_distance(center, q(j))).collect();
    let mut delta = Vec::with_capacity(2 * g);
    let mut phi = Vec::with_capacity(2 * g);
    let mut triangles = Vec::with_capacity(2 * g);
    for i in 1..=2 * g {
        let (prev, cur) = (q(i + 4 * g - 1), q(i));
        let d = hp_angle_at(prev, center, cur);
        let at_prev = hp_angle_at(center, prev, cur);
        let at_cur = hp_angle_at(prev, cur, center);
        delta.push(d);
        phi.push(at_cur);
        triangles.push(Triangle {
            a: hp_distance(prev, cur),
            b: hp_distance(center, cur),
            c: hp_distance(center, prev),
            alpha: d,
            beta: at_prev,
            gamma: at_cur,
        });
    }
    let beta = triangles[0].beta;
    Ok(CentralFan {
        genus: g,
        center,
        rays,
        delta,
        phi,
        beta,
        triangles,
        scatter,
    })
}

/// Read off `θ` from the central fan, with the default [`FAN_TOL`].
pub fn extract_theta_h(p: &CanonicalPolygon) -> Result<HyperParams> {
    extract_theta_h_with(p, FAN_TOL)
}

pub fn extract_theta_h_with(p: &CanonicalPolygon, tol: f64) -> Result<HyperParams> {
    let fan = central_fan(p, tol)?;
    let g = p.genus;
    let mut theta: Vec<f64> = p.angles[..2 * g - 3].to_vec();
    theta.extend_from_slice(&fan.delta[..2 * g - 1]);
    theta.push(fan.beta);
    theta.push(fan.phi[0]);
    HyperParams::new(g, theta)
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

/// Quadrilateral `ABCD` with `AB`, `AD`, `∠BAC`, `∠CAD` fixed, as a function of `t = AC`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KiteHinge {
    pub ab: f64,
    pub ad: f64,
    pub angle_bac: f64,
    pub angle_cad: f64,
}

impl KiteHinge {
    /// All four angles at `t`; `diag` is `t`.
    pub fn angles(&self, t: f64) -> QuadAngles {
        let abc = solve_sas(self.ab, self.angle_bac, t);
        let acd = solve_sas(self.ad, self.angle_cad, t);
        QuadAngles {
            alpha: self.angle_bac + self.angle_cad,
            beta: abc.beta,
            gamma: abc.alpha + acd.alpha,
            delta: acd.beta,
            diag: t,
        }
    }

    /// `∠ABC + ∠BCD + ∠CDA`.
    pub fn three_angle_sum(&self, t: f64) -> f64 {
        let q = self.angles(t);
        q.beta + q.gamma + q.delta
    }

    /// Sides `BC` and `CD` at `t`.
    pub fn outer_sides(&self, t: f64) -> (f64, f64) {
        (
            sas(self.ab, t, self.angle_bac),
            sas(t, self.ad, self.angle_cad),
        )
    }
}

fn sas(a: f64, b: f64, gamma: f64) -> f64 {
    side_from_sas(a, b, gamma).unwrap_or(f64::NAN)
}

/// Determine the quadrilateral from `AB`, `AD`, `∠BAC`, `∠CAD` and `∠ABC + ∠BCD + ∠CDA`.
///
/// The three-angle sum strictly decreases in `t = AC`, so bisection on
/// `t ∈ (ε, HINGE_MAX)` finds the unique solution.
pub fn solve_quad_hinge(
    ab: f64,
    ad: f64,
    angle_bac: f64,
    angle_cad: f64,
    three_angle_sum: f64,
) -> Result<QuadAngles> {
    let ok_len = |x: f64| x > 0.0 && x.is_finite();
    let ok_ang = |x: f64| x > 0.0 && x < PI;
    if !(ok_len(ab)
        && ok_len(ad)
        && ok_ang(angle_bac)
        && ok_ang(angle_cad)
        && three_angle_sum.is_finite())
    {
        return Err(Error::ParameterDomainError(format!(
            "hinge data ({ab}, {ad}, {angle_bac}, {angle_cad}, {three_angle_sum})"
        )));
    }
    let hinge = KiteHinge {
        ab,
        ad,
        angle_bac,
        angle_cad,
    };
    let cfg = BisectConfig::default();
    let t = bisect_monotone(
        |t| hinge.three_angle_sum(t),
        cfg.shrink,
        HINGE_MAX,
        three_angle_sum,
        &cfg,
    )
    .map_err(|e| Error::HingeNoBracket {
        target: three_angle_sum,
        lo: e.f_hi,
        hi: e.f_lo,
    })?;
    Ok(hinge.angles(t))
}

/// Output of the triangle chain `T_1..T_{2g−2}`, rounded to `f64`.
#[derive(Clone, Debug, PartialEq)]
struct HyperChain {
    /// `a_1..a_{2g−2}`.
    sides: Vec<f64>,
    /// `|O Q_{2g−2}|`.
    ray_before: f64,
    /// `|O Q_4g| = |O Q_2g|`.
    ray_last: f64,
    phi_last: f64,
    /// `∠ABC + ∠BCD + ∠CDA` of the quadrilateral `O Q_{2g−2} Q_{2g−1} Q_{2g}`.
    target: f64,
}

fn central_chain<R: Real>(params: &HyperParams) -> Result<HyperChain> {
    let g = params.genus;
    let w = |x: f64| R::from_f64(x);
    let al = |i: usize| w(params.alpha(i));
    let de = |i: usize| w(params.delta(i));
    let beta = w(params.beta());
    let nan = || w(f64::NAN);

    // 1-based: rays r_j = |O Q_j|, sides a_i, fan angles φ_i
    let mut phi = vec![nan(); 2 * g];
    let mut rays = vec![nan(); 2 * g];
    let mut sides = vec![nan(); 2 * g - 1];
    phi[1] = w(params.phi1());

    // T_1 = (O, Q_4g, Q_1) with angles δ_1, β, φ_1.
    let ray_last = domain(
        "|OQ_4g|",
        side_from_aaa(de(1), phi[1].clone(), beta.clone()),
    )?;
    rays[1] = domain("|OQ_1|", side_from_aaa(de(1), beta.clone(), phi[1].clone()))?;
    sides[1] = domain("a_1", side_from_aaa(beta.clone(), de(1), phi[1].clone()))?;

    // φ_2 = h(α_1 − φ_1, φ_1, β, δ_1, δ_2), then φ_i for i = 3..2g−2.
    let mut prev = beta.clone();
    for i in 2..=2 * g - 2 {
        let rem = open_angle(
            &format!("α_{} − φ_{}", i - 1, i - 1),
            al(i - 1) - phi[i - 1].clone(),
        )?;
        phi[i] = domain(
            &format!("φ_{i}"),
            angle_h(rem.clone(), phi[i - 1].clone(), prev, de(i - 1), de(i)),
        )?;
        rays[i] = domain(
            &format!("|OQ_{i}|"),
            side_from_aaa(de(i), rem.clone(), phi[i].clone()),
        )?;
        sides[i] = domain(
            &format!("a_{i}"),
            side_from_aaa(rem.clone(), de(i), phi[i].clone()),
        )?;
        prev = rem;
    }

    // Σ_{i≤2g} α_i = π, so the quadrilateral's angles at Q_{2g−2}, Q_{2g−1}, Q_{2g}
    // add up to π − Σ_{i≤2g−3} α_i − φ_{2g−2} − β.
    let mut target = R::pi() - phi[2 * g - 2].clone() - beta;
    for i in 1..=2 * g - 3 {
        target = target - al(i);
    }
    Ok(HyperChain {
        sides: sides[1..].iter().map(Real::to_f64).collect(),
        ray_before: rays[2 * g - 2].to_f64(),
        ray_last: ray_last.to_f64(),
        phi_last: phi[2 * g - 2].to_f64(),
        target: target.to_f64(),
    })
}

/// Rebuild the hyperelliptic polygon from `θ`, validated at [`VALIDATE_TOL`].
pub fn reconstruct_hyperelliptic(params: &HyperParams) -> Result<CanonicalPolygon> {
    reconstruct_hyperelliptic_with(params, VALIDATE_TOL)
}

pub fn reconstruct_hyperelliptic_with(
    params: &HyperParams,
    tol_validate: f64,
) -> Result<CanonicalPolygon> {
    let params = HyperParams::new(params.genus, params.theta.clone())?;
    params.check_domain()?;
    let g = params.genus;
    let chain = central_chain::<Wide>(&params)?;
    let beta = params.beta();
    let hinge = KiteHinge {
        ab: chain.ray_before,
        ad: chain.ray_last,
        angle_bac: params.delta(2 * g - 1),
        angle_cad: params.delta(2 * g),
    };
    let quad = solve_quad_hinge(
        hinge.ab,
        hinge.ad,
        hinge.angle_bac,
        hinge.angle_cad,
        chain.target,
    )?;
    let (bc, cd) = hinge.outer_sides(quad.diag);
    let mut sides = chain.sides;
    sides.push(bc);
    sides.push(cd);

    let mut angles: Vec<f64> = (1..=2 * g - 3).map(|i| params.alpha(i)).collect();
    angles.push(chain.phi_last + quad.beta);
    angles.push(quad.gamma);
    angles.push(quad.delta + beta);
    // the point reflection through O copies the first half onto the second
    let half_angles = angles.clone();
    angles.extend(half_angles);
    let all_sides: Vec<f64> = sides.iter().chain(sides.iter()).copied().collect();
    let p = CanonicalPolygon::new(g, all_sides, angles)?;
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
    debug_assert!(polygon::is_hyperelliptic(&p, 0.0));
    Ok(p)
}
