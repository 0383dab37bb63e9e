//! Canonical 4g-gons as abstract metric data.
//!
//! A polygon is its side lengths `a_1..a_4g` (clockwise) and the interior
//! angles `α_1..α_4g`, `α_i` sitting at `Q_i = a_i ∩ a_{i+1}`. Indices in
//! doc comments are 1-based and taken mod 4g; the vectors are 0-based.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::embed;
use crate::error::{Error, Result};
use crate::hyptrig::{self, Triangle};
use crate::teich::QuadAngles;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolygonDoc", into = "PolygonDoc")]
pub struct CanonicalPolygon {
    pub genus: usize,
    pub sides: Vec<f64>,
    pub angles: Vec<f64>,
}

/// Wire shape of the polygon JSON document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolygonDoc {
    pub genus: usize,
    pub sides: Vec<f64>,
    pub angles: Vec<f64>,
}

impl TryFrom<PolygonDoc> for CanonicalPolygon {
    type Error = Error;

    fn try_from(d: PolygonDoc) -> Result<Self> {
        CanonicalPolygon::new(d.genus, d.sides, d.angles)
    }
}

impl From<CanonicalPolygon> for PolygonDoc {
    fn from(p: CanonicalPolygon) -> Self {
        PolygonDoc {
            genus: p.genus,
            sides: p.sides,
            angles: p.angles,
        }
    }
}

impl CanonicalPolygon {
    pub fn new(genus: usize, sides: Vec<f64>, angles: Vec<f64>) -> Result<Self> {
        if genus < 2 {
            return Err(Error::MalformedInput(format!(
                "genus must be at least 2, got {genus}"
            )));
        }
        let n = 4 * genus;
        if sides.len() != n || angles.len() != n {
            return Err(Error::MalformedInput(format!(
                "genus {genus} needs {n} sides and angles, got {} and {}",
                sides.len(),
                angles.len()
            )));
        }
        if sides.iter().chain(angles.iter()).any(|v| !v.is_finite()) {
            return Err(Error::MalformedInput("non-finite entry".into()));
        }
        Ok(CanonicalPolygon {
            genus,
            sides,
            angles,
        })
    }

    /// The regular 4g-gon with all angles `π/2g`; its side `s` satisfies
    /// `cosh(s/2) = cot(π/4g)`.
    pub fn regular(genus: usize) -> Self {
        let n = 4 * genus;
        let t = PI / n as f64;
        let s = 2.0 * (t.cos() / t.sin()).acosh();
        CanonicalPolygon {
            genus,
            sides: vec![s; n],
            angles: vec![PI / (2 * genus) as f64; n],
        }
    }

    pub fn n(&self) -> usize {
        4 * self.genus
    }

    /// `a_k`, 1-based mod 4g.
    pub fn a(&self, k: isize) -> f64 {
        self.sides[(k - 1).rem_euclid(self.n() as isize) as usize]
    }

    /// `α_k`, 1-based mod 4g.
    pub fn alpha(&self, k: isize) -> f64 {
        self.angles[(k - 1).rem_euclid(self.n() as isize) as usize]
    }

    /// Signed sum whose vanishing is condition (v):
    /// `Σ_{i≤g} α_{2i−1} + Σ_{i>g} α_{2i} − Σ_{i≤g} α_{2i} − Σ_{i>g} α_{2i−1}`.
    pub fn alternating_sum(&self) -> f64 {
        alternating_sum(&self.angles, self.genus)
    }
}

/// Sign carried by `α_k` (1-based) in condition (v).
pub fn alternating_sign(k: usize, genus: usize) -> f64 {
    let odd = k % 2 == 1;
    if (k <= 2 * genus) == odd {
        1.0
    } else {
        -1.0
    }
}

pub fn alternating_sum(angles: &[f64], genus: usize) -> f64 {
    angles
        .iter()
        .enumerate()
        .map(|(k, a)| alternating_sign(k + 1, genus) * a)
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<ConditionCheck>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&ConditionCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name)
            .collect()
    }
}

/// Check conditions (i)–(v) and realizability. Side residuals are relative,
/// angle residuals absolute.
pub fn validate_canonical(p: &CanonicalPolygon, tol: f64) -> Result<ValidationReport> {
    let p = CanonicalPolygon::new(p.genus, p.sides.clone(), p.angles.clone())?;
    let g2 = 2 * p.genus as isize;
    let mut checks = Vec::with_capacity(6);
    let mut push = |name, residual: f64| {
        checks.push(ConditionCheck {
            name,
            residual,
            pass: residual <= tol,
        });
    };

    let side_res = (1..=g2)
        .map(|i| {
            let (x, y) = (p.a(i), p.a(i + g2));
            (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max);
    push("i", side_res);
    push("ii", (p.angles.iter().sum::<f64>() - 2.0 * PI).abs());
    let range_res = p
        .angles
        .iter()
        .map(|&a| {
            if a <= 0.0 {
                -a
            } else if a >= PI {
                a - PI
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max);
    let strictly_inside = p.angles.iter().all(|&a| a > 0.0 && a < PI);
    checks.push(ConditionCheck {
        name: "iii",
        residual: range_res,
        pass: strictly_inside,
    });
    let mut push = |name, residual: f64| {
        checks.push(ConditionCheck {
            name,
            residual,
            pass: residual <= tol,
        });
    };
    push("iv", (p.alpha(1) - p.alpha(g2 + 1)).abs());
    push("v", p.alternating_sum().abs());
    let (_, gap) = embed::walk(&p);
    push("closure", gap.magnitude());
    Ok(ValidationReport { checks })
}

/// Largest `|α_i − α_{i+2g}|`.
pub fn opposite_angle_residual(p: &CanonicalPolygon) -> f64 {
    let g2 = 2 * p.genus as isize;
    (1..=g2)
        .map(|i| (p.alpha(i) - p.alpha(i + g2)).abs())
        .fold(0.0, f64::max)
}

/// Canonical polygons with equal opposite angles are exactly the hyperelliptic ones.
pub fn is_hyperelliptic(p: &CanonicalPolygon, tol: f64) -> bool {
    opposite_angle_residual(p) <= tol
}

/// Marked equivalence: all sides (relative) and angles (absolute) agree within `tol`.
pub fn equivalent(p: &CanonicalPolygon, q: &CanonicalPolygon, tol: f64) -> Result<bool> {
    if p.genus != q.genus {
        return Err(Error::GenusMismatch(p.genus, q.genus));
    }
    let sides = p
        .sides
        .iter()
        .zip(&q.sides)
        .all(|(a, b)| (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0));
    let angles = p
        .angles
        .iter()
        .zip(&q.angles)
        .all(|(a, b)| (a - b).abs() <= tol);
    Ok(sides && angles)
}

/// A triangle of a fan, with the polygon vertex labels (1-based) of its corners.
/// `tri.alpha` sits at `vertices[0]`, `tri.beta` at `vertices[1]`, `tri.gamma` at `vertices[2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FanTriangle {
    pub vertices: [usize; 3],
    pub tri: Triangle,
}

/// Decomposition of a canonical polygon by diagonals from `Q_4g`.
///
/// `b_i = Q_4g Q_{i+1}` for `i ≠ 2g`, `b_2g = Q_2g Q_{2g+2}`. The polygon
/// splits into `T_1..T_{4g−4}` and the quadrilateral
/// `S = Q_4g Q_{4g−3} Q_{4g−2} Q_{4g−1}` cut off by `b_{4g−4}`. All vectors
/// are indexed by `i − 1`; `φ_2g`, `β_2g`, `β_{2g+1}` are not defined and are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct FanDecomposition {
    pub genus: usize,
    pub diagonals: Vec<f64>,
    pub phi: Vec<Option<f64>>,
    pub beta: Vec<Option<f64>>,
    pub gamma: f64,
    pub triangles: Vec<FanTriangle>,
    pub quad: QuadAngles,
}

impl FanDecomposition {
    pub fn b(&self, i: usize) -> f64 {
        self.diagonals[i - 1]
    }

    pub fn phi(&self, i: usize) -> f64 {
        self.phi[i - 1].expect("φ index defined")
    }

    pub fn beta(&self, i: usize) -> f64 {
        self.beta[i - 1].expect("β index defined")
    }

    /// Sum of fan angles at `Q_4g`, the quadrilateral's angle there included.
    pub fn angle_at_apex(&self) -> f64 {
        self.beta.iter().flatten().sum::<f64>() + self.gamma + self.quad.alpha
    }

    /// Sum of every angle of every piece; equals the polygon's angle sum.
    pub fn total_angle(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| t.tri.angle_sum())
            .sum::<f64>()
            + self.quad.angle_sum()
    }
}

fn remaining(vertex: usize, angle: f64) -> Result<f64> {
    if angle > 0.0 && angle < PI {
        Ok(angle)
    } else {
        Err(Error::FanNotInterior { vertex, angle })
    }
}

/// Triangulate from `Q_4g` with an iterated side-angle-side chain.
pub fn fan_triangulate(p: &CanonicalPolygon) -> Result<FanDecomposition> {
    let g = p.genus;
    if g < 3 {
        return Err(Error::GenusTooSmall { genus: g, min: 3 });
    }
    let n = 4 * g;
    let apex = n;
    let mut b = vec![0.0; n - 4];
    let mut phi: Vec<Option<f64>> = vec![None; n - 4];
    let mut beta: Vec<Option<f64>> = vec![None; n - 4];
    let mut triangles = Vec::with_capacity(n - 4);
    let a = |k: usize| p.a(k as isize);
    let al = |k: usize| p.alpha(k as isize);

    // T_1 = (Q_4g, Q_1, Q_2): sides a_1, a_2 around α_1.
    let t1 = hyptrig::solve_sas(a(1), al(1), a(2));
    b[0] = t1.c;
    phi[0] = Some(t1.alpha);
    beta[0] = Some(t1.beta);
    triangles.push(FanTriangle {
        vertices: [2, apex, 1],
        tri: t1,
    });

    // T_i = (Q_4g, Q_i, Q_{i+1}) for i = 2..2g−1.
    for i in 2..=2 * g - 1 {
        let at = remaining(i, al(i) - phi[i - 2].unwrap())?;
        let t = hyptrig::solve_sas(b[i - 2], at, a(i + 1));
        b[i - 1] = t.c;
        phi[i - 1] = Some(t.alpha);
        beta[i - 1] = Some(t.beta);
        triangles.push(FanTriangle {
            vertices: [i + 1, apex, i],
            tri: t,
        });
    }

    // T_2g = (Q_2g, Q_{2g+1}, Q_{2g+2}), congruent to T_1 by (i) and (iv).
    let t2g = hyptrig::solve_sas(a(2 * g + 1), al(2 * g + 1), a(2 * g + 2));
    b[2 * g - 1] = t2g.c;
    triangles.push(FanTriangle {
        vertices: [2 * g + 2, 2 * g, 2 * g + 1],
        tri: t2g,
    });

    // T_{2g+1} = (Q_4g, Q_2g, Q_{2g+2}): sides b_{2g−1}, b_2g around the rest of α_2g.
    let at = remaining(2 * g, al(2 * g) - phi[2 * g - 2].unwrap() - t2g.beta)?;
    let t = hyptrig::solve_sas(b[2 * g - 2], at, b[2 * g - 1]);
    let gamma = t.beta;
    b[2 * g] = t.c;
    phi[2 * g] = Some(t2g.alpha + t.alpha);
    triangles.push(FanTriangle {
        vertices: [2 * g + 2, apex, 2 * g],
        tri: t,
    });

    // T_i = (Q_4g, Q_i, Q_{i+1}) for i = 2g+2..4g−4.
    for i in 2 * g + 2..=n - 4 {
        let at = remaining(i, al(i) - phi[i - 2].unwrap())?;
        let t = hyptrig::solve_sas(b[i - 2], at, a(i + 1));
        b[i - 1] = t.c;
        phi[i - 1] = Some(t.alpha);
        beta[i - 1] = Some(t.beta);
        triangles.push(FanTriangle {
            vertices: [i + 1, apex, i],
            tri: t,
        });
    }

    // S = (Q_4g, Q_{4g−3}, Q_{4g−2}, Q_{4g−1}), split by its diagonal Q_{4g−3}Q_{4g−1}.
    let lower = hyptrig::solve_sas(a(n - 2), al(n - 2), a(n - 1));
    let upper = Triangle::from_sides(b[n - 5], a(n), lower.c)?;
    let quad = QuadAngles {
        alpha: upper.gamma,
        beta: upper.beta + lower.beta,
        gamma: al(n - 2),
        delta: upper.alpha + lower.alpha,
        diag: lower.c,
    };
    remaining(n - 3, al(n - 3) - phi[n - 5].unwrap())?;
    let fan_at_apex: f64 = beta.iter().flatten().sum::<f64>() + gamma;
    remaining(n, al(n) - fan_at_apex)?;

    Ok(FanDecomposition {
        genus: g,
        diagonals: b,
        phi,
        beta,
        gamma,
        triangles,
        quad,
    })
}
