//! Brute-force verifiers for the closed-form code paths.
//!
//! Everything here is built from coordinates in the half-plane and the
//! distance/angle primitives of [`crate::embed`]. Triangles are laid out by
//! isometries, quadrilaterals by intersecting Euclidean images of
//! hyperbolic circles, and polygon fleets are produced by projecting
//! perturbed data back onto the constraint set with Gauss–Newton.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::embed::{self, hp_angle_at, hp_distance, Isometry, C64};
use crate::error::{Error, Result};
use crate::hyperelliptic::{extract_theta_h, reconstruct_hyperelliptic, HyperParams, HINGE_MAX};
use crate::hyptrig::{solve_sas, Triangle};
use crate::polygon::{alternating_sum, validate_canonical, CanonicalPolygon};
use crate::teich::{extract_theta, reconstruct_teich, TeichParams};

const I: C64 = C64::new(0.0, 1.0);

/// Grid size of the quadrilateral scans.
pub const SCAN_POINTS: usize = 100_000;
/// Gauss–Bonnet area tolerance.
pub const AREA_TOL: f64 = 1e-8;
/// Bound on the group relation defect.
pub const RELATION_TOL: f64 = 1e-6;
/// Largest closure gap accepted for fleet polygons.
pub const CLOSURE_TOL: f64 = 1e-9;
/// Allowed shortfall of a success rate (or excess of an acceptance rate).
pub const RATE_SLACK: f64 = 0.01;

/// One oracle-versus-closed-form comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub quantity: String,
    pub oracle: f64,
    pub closed_form: f64,
    pub abs_dev: f64,
    pub rel_dev: f64,
    /// Largest acceptable `abs_dev`.
    pub tolerance: f64,
}

impl OracleReport {
    pub fn new(quantity: impl Into<String>, oracle: f64, closed_form: f64, tolerance: f64) -> Self {
        let abs_dev = (oracle - closed_form).abs();
        let rel_dev = abs_dev / closed_form.abs().max(1.0);
        OracleReport {
            quantity: quantity.into(),
            oracle,
            closed_form,
            abs_dev,
            rel_dev,
            tolerance,
        }
    }

    pub fn pass(&self) -> bool {
        self.abs_dev <= self.tolerance
    }
}

impl std::fmt::Display for OracleReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:<40} oracle {:>14.6e}  closed form {:>14.6e}  |Δ| {:.3e}",
            self.quantity, self.oracle, self.closed_form, self.abs_dev
        )
    }
}

/// The point at distance `r` from `i` in direction `heading` (counterclockwise from ↑).
fn polar(r: f64, heading: f64) -> C64 {
    (Isometry::rotation(heading) * Isometry::axial(r)).apply(I)
}

/// Build the SAS triangle in coordinates and measure it.
///
/// The `γ` corner sits at `i`, side `b` runs straight up and side `a`
/// leaves at angle `γ` from it.
pub fn triangle_oracle(a: f64, gamma: f64, b: f64) -> Triangle {
    let c_pt = I;
    let a_pt = polar(b, 0.0);
    let b_pt = polar(a, gamma);
    Triangle {
        a,
        b,
        c: hp_distance(a_pt, b_pt),
        alpha: hp_angle_at(c_pt, a_pt, b_pt),
        beta: hp_angle_at(a_pt, b_pt, c_pt),
        gamma: hp_angle_at(a_pt, c_pt, b_pt),
    }
}

/// Worst deviations between [`triangle_oracle`] and [`solve_sas`] over `n`
/// random triangles with sides in `[0.05, 5]`.
pub fn triangle_sweep(n: usize, seed: u64, tol: f64) -> Vec<OracleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<(f64, f64, f64)> = (0..n)
        .map(|_| {
            (
                rng.gen_range(0.05..5.0),
                rng.gen_range(0.01..PI - 0.01),
                rng.gen_range(0.05..5.0),
            )
        })
        .collect();
    let worst = |pick: fn(&Triangle) -> f64, name: &str| {
        samples
            .par_iter()
            .map(|&(a, g, b)| {
                OracleReport::new(
                    name,
                    pick(&triangle_oracle(a, g, b)),
                    pick(&solve_sas(a, g, b)),
                    tol,
                )
            })
            .max_by(|x, y| x.rel_dev.total_cmp(&y.rel_dev))
            .unwrap_or_else(|| OracleReport::new(name, 0.0, 0.0, tol))
    };
    vec![
        worst(|t| t.c, "sas third side"),
        worst(|t| t.alpha, "sas angle opposite a"),
        worst(|t| t.beta, "sas angle opposite b"),
    ]
}

/// Outcome of a grid scan over a hinge interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanResult {
    /// Diagonal minimising the residual.
    pub diag: f64,
    pub residual: f64,
    /// Grid steps where the monotone quantity moved the wrong way by more than roundoff.
    pub violations: usize,
}

/// Slack granted to a monotone quantity between neighbouring grid points.
const ROUNDOFF: f64 = 1e-12;

/// Scan `eval` on `n` points of `[lo, hi]`, then rescan a window of two
/// cells around the best point. `eval` returns `(residual, monotone)`;
/// `rising` gives the expected direction of `monotone`.
fn scan<F>(lo: f64, hi: f64, n: usize, rising: bool, eval: F) -> Option<ScanResult>
where
    F: Fn(f64) -> Option<(f64, f64)> + Sync,
{
    let grid = |lo: f64, hi: f64| -> Vec<(f64, Option<(f64, f64)>)> {
        (0..n)
            .into_par_iter()
            .map(|k| {
                let x = lo + (hi - lo) * k as f64 / (n - 1) as f64;
                (x, eval(x))
            })
            .collect()
    };
    let coarse = grid(lo, hi);
    let mut violations = 0;
    let mut last: Option<f64> = None;
    for (_, v) in &coarse {
        if let Some((_, m)) = v {
            if let Some(prev) = last {
                let step = m - prev;
                if (rising && step < -ROUNDOFF) || (!rising && step > ROUNDOFF) {
                    violations += 1;
                }
            }
            last = Some(*m);
        }
    }
    let best = |pts: &[(f64, Option<(f64, f64)>)]| {
        pts.iter()
            .filter_map(|(x, v)| v.map(|(r, _)| (*x, r)))
            .filter(|(_, r)| r.is_finite())
            .min_by(|a, b| a.1.total_cmp(&b.1))
    };
    let (x0, _) = best(&coarse)?;
    let cell = (hi - lo) / (n - 1) as f64;
    let fine = grid((x0 - 2.0 * cell).max(lo), (x0 + 2.0 * cell).min(hi));
    let (diag, residual) = best(&fine)?;
    Some(ScanResult {
        diag,
        residual,
        violations,
    })
}

/// Euclidean centre height and radius of the hyperbolic circle of radius `r`
/// about `i·h`.
fn circle(h: f64, r: f64) -> (f64, f64) {
    (h * r.cosh(), h * r.sinh())
}

/// Intersections of the hyperbolic circles of radius `r1` about `i` and `r2`
/// about `i·eᵈ`, as `(left, right)`.
fn circle_meet(d: f64, r1: f64, r2: f64) -> Option<(C64, C64)> {
    let (k1, s1) = circle(1.0, r1);
    let (k2, s2) = circle(d.exp(), r2);
    if k2 == k1 {
        return None;
    }
    let y = 0.5 * (k1 + k2) + (s1 * s1 - s2 * s2) / (2.0 * (k2 - k1));
    let x2 = s1 * s1 - (y - k1).powi(2);
    if !(x2 >= 0.0) || !(y > 0.0) {
        return None;
    }
    let x = x2.sqrt();
    Some((C64::new(-x, y), C64::new(x, y)))
}

/// Angles of the quadrilateral `ABCD` (sides `[AB, BC, CD, DA]`) at diagonal
/// `BD = d`, from coordinates: `B = i`, `D = i·eᵈ`, `A` left, `C` right.
pub fn quad_by_coordinates(sides: [f64; 4], d: f64) -> Option<[f64; 4]> {
    let [ab, bc, cd, da] = sides;
    let (b, dd) = (I, I * d.exp());
    let (a, _) = circle_meet(d, ab, da)?;
    let (_, c) = circle_meet(d, bc, cd)?;
    Some([
        hp_angle_at(dd, a, b),
        hp_angle_at(a, b, dd) + hp_angle_at(dd, b, c),
        hp_angle_at(b, c, dd),
        hp_angle_at(c, dd, b) + hp_angle_at(b, dd, a),
    ])
}

/// Grid-scan stand-in for [`crate::teich::solve_quad_teich`]. The residual
/// is the combined miss of both sums; violations count steps where the
/// alternating sum fails to increase with `BD`.
pub fn scan_quad_teich(
    sides: [f64; 4],
    angle_sum: f64,
    alt_sum: f64,
    n: usize,
) -> Option<ScanResult> {
    let [ab, bc, cd, da] = sides;
    let lo = (ab - da).abs().max((bc - cd).abs());
    let hi = (ab + da).min(bc + cd);
    if !(lo < hi) {
        return None;
    }
    let pad = (hi - lo) * 1e-9;
    scan(lo + pad, hi - pad, n, true, |d| {
        let [a, b, c, dd] = quad_by_coordinates(sides, d)?;
        let alt = a - b + c - dd;
        Some((
            (a + b + c + dd - angle_sum).abs() + (alt - alt_sum).abs(),
            alt,
        ))
    })
}

/// Angles `∠ABC, ∠BCD, ∠CDA` of the hinge quadrilateral at `AC = t`, from
/// coordinates: `A = i`, `C = i·eᵗ`, `B` and `D` on either side.
pub fn hinge_by_coordinates(ab: f64, ad: f64, angle_bac: f64, angle_cad: f64, t: f64) -> [f64; 3] {
    let (a, c) = (I, polar(t, 0.0));
    let b = polar(ab, angle_bac);
    let d = polar(ad, -angle_cad);
    [
        hp_angle_at(a, b, c),
        hp_angle_at(b, c, a) + hp_angle_at(a, c, d),
        hp_angle_at(c, d, a),
    ]
}

/// Grid-scan stand-in for [`crate::hyperelliptic::solve_quad_hinge`] over
/// `t ∈ (0, HINGE_MAX]`; violations count steps where the three-angle sum
/// fails to decrease.
pub fn scan_quad_hinge(
    ab: f64,
    ad: f64,
    angle_bac: f64,
    angle_cad: f64,
    target: f64,
    n: usize,
) -> Option<ScanResult> {
    scan(1e-9, HINGE_MAX, n, false, |t| {
        let s: f64 = hinge_by_coordinates(ab, ad, angle_bac, angle_cad, t)
            .iter()
            .sum();
        Some(((s - target).abs(), s))
    })
}

/// Count grid steps where the three-angle sum fails to decrease in `t`.
pub fn hinge_monotonicity(ab: f64, ad: f64, angle_bac: f64, angle_cad: f64, n: usize) -> usize {
    scan_quad_hinge(ab, ad, angle_bac, angle_cad, 0.0, n).map_or(0, |s| s.violations)
}

/// Final frame of the boundary walk, normalized to the `+I` side.
fn walk_matrix(sides: &[f64], angles: &[f64]) -> Isometry {
    let mut m = Isometry::IDENTITY;
    for (s, a) in sides.iter().zip(angles) {
        m = m * Isometry::axial(*s) * Isometry::rotation(-(PI - a));
    }
    m.normalized()
}

/// Gauss–Newton on `residual` from `x0`: forward-difference Jacobian and
/// minimum-norm SVD steps. Returns `None` unless the residual drops below `tol`.
pub fn gauss_newton<F>(x0: Vec<f64>, residual: F, tol: f64, max_iter: usize) -> Option<Vec<f64>>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let mut x = x0;
    for _ in 0..max_iter {
        let r = residual(&x);
        let norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !norm.is_finite() {
            return None;
        }
        if norm < tol {
            return Some(x);
        }
        let h = 1e-7;
        let mut jac = DMatrix::zeros(r.len(), x.len());
        for j in 0..x.len() {
            let mut xp = x.clone();
            xp[j] += h;
            let rp = residual(&xp);
            for i in 0..r.len() {
                jac[(i, j)] = (rp[i] - r[i]) / h;
            }
        }
        let step = jac
            .svd(true, true)
            .solve(&DVector::from_vec(r), 1e-10)
            .ok()?;
        for (xi, s) in x.iter_mut().zip(step.iter()) {
            *xi -= s;
        }
    }
    let r = residual(&x);
    (r.iter().map(|v| v * v).sum::<f64>().sqrt() < tol).then_some(x)
}

/// Perturb the regular polygon of genus `g` by up to `eps` in every side and
/// angle and project back onto the canonical polygons (pairing, angle sum,
/// conditions on the angles, closure).
pub fn perturbed_canonical<R: Rng>(
    genus: usize,
    eps: f64,
    rng: &mut R,
) -> Result<CanonicalPolygon> {
    let reg = CanonicalPolygon::regular(genus);
    let h = 2 * genus;
    let mut x: Vec<f64> = reg.sides[..h].to_vec();
    x.extend(&reg.angles);
    for v in x.iter_mut() {
        *v += rng.gen_range(-eps..eps);
    }
    let expand = |x: &[f64]| -> (Vec<f64>, Vec<f64>) {
        let sides: Vec<f64> = x[..h].iter().chain(&x[..h]).copied().collect();
        (sides, x[h..].to_vec())
    };
    let residual = |x: &[f64]| {
        let (sides, angles) = expand(x);
        let m = walk_matrix(&sides, &angles);
        vec![
            angles.iter().sum::<f64>() - 2.0 * PI,
            angles[0] - angles[h],
            alternating_sum(&angles, genus),
            m.m11 - 1.0,
            m.m12,
            m.m21,
        ]
    };
    let x = project_near(x, residual, 1e-13, eps)?;
    let (sides, angles) = expand(&x);
    checked(CanonicalPolygon::new(genus, sides, angles)?)
}

/// Perturb the regular polygon of genus `g` inside the hyperelliptic locus:
/// `a_1..a_2g` and `α_1..α_2g` move by up to `eps`, the second half copies
/// the first, and the projection enforces `Σα = 2π` and that the half-walk
/// is a half-turn.
pub fn perturbed_hyperelliptic<R: Rng>(
    genus: usize,
    eps: f64,
    rng: &mut R,
) -> Result<CanonicalPolygon> {
    let reg = CanonicalPolygon::regular(genus);
    let h = 2 * genus;
    let mut x: Vec<f64> = reg.sides[..h].to_vec();
    x.extend(&reg.angles[..h]);
    for v in x.iter_mut() {
        *v += rng.gen_range(-eps..eps);
    }
    let residual = |x: &[f64]| {
        let half_turn = walk_matrix(&x[..h], &x[h..]);
        vec![x[h..].iter().sum::<f64>() - PI, half_turn.trace()]
    };
    let x = project_near(x, residual, 1e-14, eps)?;
    let sides: Vec<f64> = x[..h].iter().chain(&x[..h]).copied().collect();
    let angles: Vec<f64> = x[h..].iter().chain(&x[h..]).copied().collect();
    checked(CanonicalPolygon::new(genus, sides, angles)?)
}

/// Gauss–Newton projection that must stay within `10·eps` of the start;
/// near-singular steps can otherwise land on a distant branch.
fn project_near<F>(x0: Vec<f64>, residual: F, tol: f64, eps: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let x = gauss_newton(x0.clone(), residual, tol, 50)
        .ok_or(Error::ClosureFailure { gap: f64::NAN })?;
    let drift = x
        .iter()
        .zip(&x0)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if drift > 10.0 * eps {
        return Err(Error::ImageConsistencyError(format!(
            "projection drifted by {drift:.3e}"
        )));
    }
    Ok(x)
}

fn checked(p: CanonicalPolygon) -> Result<CanonicalPolygon> {
    let report = validate_canonical(&p, 1e-10)?;
    if report.pass() && p.sides.iter().all(|s| *s > 0.0) {
        Ok(p)
    } else {
        Err(Error::ImageConsistencyError(format!(
            "projection fails {:?}",
            report.failures()
        )))
    }
}

/// Largest side (relative) or angle (absolute) difference.
pub fn polygon_deviation(p: &CanonicalPolygon, q: &CanonicalPolygon) -> f64 {
    let sides = p
        .sides
        .iter()
        .zip(&q.sides)
        .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(1.0));
    let angles = p.angles.iter().zip(&q.angles).map(|(a, b)| (a - b).abs());
    sides.chain(angles).fold(0.0, f64::max)
}

/// Which polygons the harness runs and how many.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FleetSpec {
    pub genera: Vec<usize>,
    /// Perturbed polygons per genus and chart.
    pub perturbed: usize,
    /// Uniform random θ vectors per genus for the Teichmüller chart.
    pub random_theta: usize,
    /// Perturbed hyperelliptic θ vectors per genus.
    pub perturbed_theta: usize,
    pub eps: f64,
    pub theta_eps: f64,
    pub seed: u64,
    /// Round-trip tolerance.
    pub tol: f64,
}

impl Default for FleetSpec {
    fn default() -> Self {
        FleetSpec {
            genera: vec![2, 3, 4, 5],
            perturbed: 25,
            random_theta: 250,
            perturbed_theta: 250,
            eps: 1e-2,
            theta_eps: 1e-3,
            seed: 7,
            tol: 1e-7,
        }
    }
}

/// Both charts plus the planar checks on one polygon.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolygonAudit {
    pub genus: usize,
    /// `None` where the chart does not apply (genus 2 for the Teichmüller chart).
    pub teich: Option<std::result::Result<f64, String>>,
    pub hyper: Option<std::result::Result<f64, String>>,
    pub area_dev: f64,
    pub relation_defect: f64,
    pub min_abs_trace: f64,
    pub closure_gap: f64,
}

fn round_trip<P, E, C>(
    p: &CanonicalPolygon,
    extract: E,
    rebuild: C,
) -> std::result::Result<f64, String>
where
    E: Fn(&CanonicalPolygon) -> Result<P>,
    C: Fn(&P) -> Result<CanonicalPolygon>,
{
    let q = extract(p)
        .and_then(|t| rebuild(&t))
        .map_err(|e| e.to_string())?;
    Ok(polygon_deviation(p, &q))
}

/// Round-trip both charts on `p` and measure its realization.
pub fn audit_polygon(p: &CanonicalPolygon, hyperelliptic: bool) -> PolygonAudit {
    let g = p.genus;
    let teich = (g >= 3).then(|| round_trip(p, extract_theta, reconstruct_teich));
    let hyper = hyperelliptic.then(|| round_trip(p, extract_theta_h, reconstruct_hyperelliptic));
    let (pp, gap) = embed::walk(p);
    let gens = embed::side_pairings(&pp).unwrap_or_default();
    PolygonAudit {
        genus: g,
        teich,
        hyper,
        area_dev: (embed::polygon_area(&pp) - 4.0 * PI * (g as f64 - 1.0)).abs(),
        relation_defect: embed::relation_defect(&gens),
        min_abs_trace: gens
            .iter()
            .map(|m| m.trace().abs())
            .fold(f64::INFINITY, f64::min),
        closure_gap: gap.magnitude(),
    }
}

/// The polygons of a fleet: regular ones, then perturbed hyperelliptic
/// ones, then perturbed canonical ones, tagged with hyperellipticity.
pub fn build_fleet(spec: &FleetSpec) -> Vec<(CanonicalPolygon, bool)> {
    let mut out = Vec::new();
    for &g in &spec.genera {
        out.push((CanonicalPolygon::regular(g), true));
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ (g as u64) << 32);
        let mut made = 0;
        for _ in 0..spec.perturbed * 4 {
            if made == spec.perturbed {
                break;
            }
            if let Ok(p) = perturbed_hyperelliptic(g, spec.eps, &mut rng) {
                out.push((p, true));
                made += 1;
            }
        }
        let mut made = 0;
        for _ in 0..spec.perturbed * 4 {
            if made == spec.perturbed {
                break;
            }
            if let Ok(p) = perturbed_canonical(g, spec.eps, &mut rng) {
                out.push((p, false));
                made += 1;
            }
        }
    }
    out
}

/// Outcome of reconstructing from uniform random Teichmüller θ.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct RandomThetaTally {
    pub rejected: usize,
    pub accepted: usize,
    /// Failures outside the two documented rejection kinds.
    pub other: usize,
}

pub fn random_teich_theta(genus: usize, n: usize, seed: u64) -> RandomThetaTally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let thetas: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..6 * genus - 5).map(|_| rng.gen_range(0.0..PI)).collect())
        .collect();
    thetas
        .par_iter()
        .map(|t| {
            let params = TeichParams {
                genus,
                theta: t.clone(),
            };
            match reconstruct_teich(&params) {
                Ok(_) => RandomThetaTally {
                    accepted: 1,
                    ..Default::default()
                },
                Err(Error::ImageConsistencyError(_) | Error::ParameterDomainError(_)) => {
                    RandomThetaTally {
                        rejected: 1,
                        ..Default::default()
                    }
                }
                Err(_) => RandomThetaTally {
                    other: 1,
                    ..Default::default()
                },
            }
        })
        .reduce(RandomThetaTally::default, |a, b| RandomThetaTally {
            rejected: a.rejected + b.rejected,
            accepted: a.accepted + b.accepted,
            other: a.other + b.other,
        })
}

/// Fraction of `n` perturbations of `θ` (each coordinate moved by up to
/// `eps`) that reconstruct to a hyperelliptic polygon.
pub fn perturbed_theta_success(base: &HyperParams, n: usize, eps: f64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let thetas: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            base.theta
                .iter()
                .map(|t| t + rng.gen_range(-eps..eps))
                .collect()
        })
        .collect();
    let ok = thetas
        .par_iter()
        .filter(|t| {
            HyperParams::new(base.genus, t.to_vec())
                .and_then(|p| reconstruct_hyperelliptic(&p))
                .map_or(false, |q| crate::polygon::is_hyperelliptic(&q, 0.0))
        })
        .count();
    ok as f64 / n.max(1) as f64
}

/// Run the fleet through both charts and the planar checks; every failure
/// becomes a report entry.
pub fn roundtrip_harness(spec: &FleetSpec) -> Vec<OracleReport> {
    let fleet = build_fleet(spec);
    let audits: Vec<PolygonAudit> = fleet
        .par_iter()
        .map(|(p, h)| audit_polygon(p, *h))
        .collect();
    let mut out = Vec::new();
    for &g in &spec.genera {
        let of_g: Vec<&PolygonAudit> = audits.iter().filter(|a| a.genus == g).collect();
        for (chart, pick) in [
            (
                "teich",
                (|a: &PolygonAudit| a.teich.clone()) as fn(&PolygonAudit) -> _,
            ),
            ("hyper", |a: &PolygonAudit| a.hyper.clone()),
        ] {
            let runs: Vec<_> = of_g.iter().filter_map(|a| pick(a)).collect();
            if runs.is_empty() {
                continue;
            }
            let worst = runs
                .iter()
                .filter_map(|r| r.as_ref().ok())
                .fold(0.0, |m: f64, v| m.max(*v));
            let failed = runs.iter().filter(|r| r.is_err()).count();
            out.push(OracleReport::new(
                format!("{chart} round trip g{g} max deviation"),
                worst,
                0.0,
                spec.tol,
            ));
            out.push(OracleReport::new(
                format!("{chart} round trip g{g} failures"),
                failed as f64,
                0.0,
                0.0,
            ));
        }
        let max = |f: fn(&PolygonAudit) -> f64| of_g.iter().map(|a| f(a)).fold(0.0, f64::max);
        out.push(OracleReport::new(
            format!("area g{g} max deviation"),
            max(|a| a.area_dev),
            0.0,
            AREA_TOL,
        ));
        out.push(OracleReport::new(
            format!("relation defect g{g} max"),
            max(|a| a.relation_defect),
            0.0,
            RELATION_TOL,
        ));
        out.push(OracleReport::new(
            format!("closure gap g{g} max"),
            max(|a| a.closure_gap),
            0.0,
            CLOSURE_TOL,
        ));
        if g >= 3 && spec.random_theta > 0 {
            let tally = random_teich_theta(g, spec.random_theta, spec.seed + g as u64);
            let frac = tally.accepted as f64 / spec.random_theta as f64;
            out.push(OracleReport::new(
                format!("random teich θ g{g} accepted fraction"),
                frac,
                0.0,
                RATE_SLACK,
            ));
        }
        if spec.perturbed_theta > 0 {
            if let Ok(base) = extract_theta_h(&CanonicalPolygon::regular(g)) {
                let rate = perturbed_theta_success(
                    &base,
                    spec.perturbed_theta,
                    spec.theta_eps,
                    spec.seed + g as u64,
                );
                out.push(OracleReport::new(
                    format!("perturbed hyper θ g{g} success rate"),
                    rate,
                    1.0,
                    RATE_SLACK,
                ));
            }
        }
    }
    out
}
