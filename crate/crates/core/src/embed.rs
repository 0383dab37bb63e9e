//! Coordinates for canonical polygons.
//!
//! All numerics happen in the upper half-plane ℍ, where orientation
//! preserving isometries are real 2×2 matrices of determinant one acting by
//! Möbius transformations. The Poincaré disk is reached through the Cayley
//! map `w = (z − i)/(z + i)` and is only used for presentation.
//!
//! The "frame" of a point `p` and a unit direction is the isometry taking
//! `(i, ↑)` to it. Realization walks the polygon boundary by composing
//! frames with axial translations and rotations about `i`, so no nonlinear
//! equation is ever solved to place a vertex.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygon::CanonicalPolygon;

pub type C64 = Complex<f64>;

const I: C64 = C64::new(0.0, 1.0);

/// Hyperbolic plane model a point is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    #[serde(rename = "halfplane")]
    HalfPlane,
    Disk,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::HalfPlane => f.write_str("halfplane"),
            Model::Disk => f.write_str("disk"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanePoint {
    pub model: Model,
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub fn halfplane(x: f64, y: f64) -> Self {
        PlanePoint {
            model: Model::HalfPlane,
            x,
            y,
        }
    }

    pub fn disk(x: f64, y: f64) -> Self {
        PlanePoint {
            model: Model::Disk,
            x,
            y,
        }
    }

    pub fn from_complex(z: C64) -> Self {
        Self::halfplane(z.re, z.im)
    }

    pub fn is_valid(&self) -> bool {
        match self.model {
            Model::HalfPlane => self.x.is_finite() && self.y > 0.0,
            Model::Disk => self.x.is_finite() && self.x * self.x + self.y * self.y < 1.0,
        }
    }

    /// Half-plane coordinate as a complex number, converting from the disk if needed.
    pub fn to_complex(&self) -> C64 {
        match self.model {
            Model::HalfPlane => C64::new(self.x, self.y),
            Model::Disk => disk_to_halfplane(C64::new(self.x, self.y)),
        }
    }

    pub fn to_model(&self, model: Model) -> PlanePoint {
        match (self.model, model) {
            (a, b) if a == b => *self,
            (Model::HalfPlane, Model::Disk) => {
                let w = halfplane_to_disk(self.to_complex());
                PlanePoint::disk(w.re, w.im)
            }
            _ => PlanePoint::from_complex(self.to_complex()),
        }
    }
}

/// Cayley map ℍ → 𝔻 sending `i` to the origin.
pub fn halfplane_to_disk(z: C64) -> C64 {
    (z - I) / (z + I)
}

pub fn disk_to_halfplane(w: C64) -> C64 {
    I * (C64::new(1.0, 0.0) + w) / (C64::new(1.0, 0.0) - w)
}

/// Beltrami–Klein image of a disk point; geodesics become chords.
pub fn disk_to_klein(w: C64) -> C64 {
    w * (2.0 / (1.0 + w.norm_sqr()))
}

/// Hyperboloid coordinates `(t, u, v)` with `t² − u² − v² = 1`.
pub fn halfplane_to_hyperboloid(z: C64) -> [f64; 3] {
    let r2 = z.norm_sqr();
    [
        (r2 + 1.0) / (2.0 * z.im),
        z.re / z.im,
        (r2 - 1.0) / (2.0 * z.im),
    ]
}

pub fn hyperboloid_to_halfplane(p: [f64; 3]) -> C64 {
    let y = 1.0 / (p[0] - p[2]);
    C64::new(p[1] * y, y)
}

/// An element of PSL(2, ℝ), stored as a representative matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isometry {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        m11: 1.0,
        m12: 0.0,
        m21: 0.0,
        m22: 1.0,
    };

    pub fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        Isometry { m11, m12, m21, m22 }
    }

    pub fn from_array(m: [f64; 4]) -> Self {
        Self::new(m[0], m[1], m[2], m[3])
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.m11, self.m12, self.m21, self.m22]
    }

    /// Translation by hyperbolic distance `d` along the imaginary axis (`i ↦ i·eᵈ`).
    pub fn axial(d: f64) -> Self {
        let e = (d / 2.0).exp();
        Self::new(e, 0.0, 0.0, 1.0 / e)
    }

    /// Counterclockwise rotation by `theta` about `i`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self::new(c, s, -s, c)
    }

    /// The affine map `z ↦ y·z + x` taking `i` to `x + iy` without rotating.
    pub fn lift(z: C64) -> Self {
        let r = z.im.sqrt();
        Self::new(r, z.re / r, 0.0, 1.0 / r)
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.m22, -self.m12, -self.m21, self.m11)
    }

    pub fn apply(&self, z: C64) -> C64 {
        (z * self.m11 + self.m12) / (z * self.m21 + self.m22)
    }

    pub fn apply_point(&self, p: &PlanePoint) -> PlanePoint {
        PlanePoint::from_complex(self.apply(p.to_complex())).to_model(p.model)
    }

    /// Canonical representative of `±A`: trace ≥ 0, ties broken by `m12 ≥ 0`.
    pub fn normalized(&self) -> Self {
        let t = self.trace();
        let flip = if t.abs() <= 1e-12 {
            self.m12 < 0.0
        } else {
            t < 0.0
        };
        if flip {
            Self::new(-self.m11, -self.m12, -self.m21, -self.m22)
        } else {
            *self
        }
    }

    /// Frobenius distance between normalized representatives.
    pub fn distance_to(&self, other: &Isometry) -> f64 {
        let a = self.normalized();
        let b = other.normalized();
        ((a.m11 - b.m11).powi(2)
            + (a.m12 - b.m12).powi(2)
            + (a.m21 - b.m21).powi(2)
            + (a.m22 - b.m22).powi(2))
        .sqrt()
    }
}

impl Mul for Isometry {
    type Output = Isometry;

    fn mul(self, r: Isometry) -> Isometry {
        Isometry::new(
            self.m11 * r.m11 + self.m12 * r.m21,
            self.m11 * r.m12 + self.m12 * r.m22,
            self.m21 * r.m11 + self.m22 * r.m21,
            self.m21 * r.m12 + self.m22 * r.m22,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IsometryClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl fmt::Display for IsometryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IsometryClass::Identity => "identity",
            IsometryClass::Elliptic => "elliptic",
            IsometryClass::Parabolic => "parabolic",
            IsometryClass::Hyperbolic => "hyperbolic",
        };
        f.write_str(s)
    }
}

pub fn classify(t: &Isometry) -> IsometryClass {
    if t.distance_to(&Isometry::IDENTITY) <= 1e-9 {
        return IsometryClass::Identity;
    }
    let tr = t.trace().abs();
    if (tr - 2.0).abs() <= 1e-9 {
        IsometryClass::Parabolic
    } else if tr < 2.0 {
        IsometryClass::Elliptic
    } else {
        IsometryClass::Hyperbolic
    }
}

/// Distance in ℍ, via `d = 2·asinh(|z − w| / (2√(Im z·Im w)))`.
pub fn hp_distance(z: C64, w: C64) -> f64 {
    2.0 * ((z - w).norm() / (2.0 * (z.im * w.im).sqrt())).asinh()
}

pub fn distance(p: &PlanePoint, q: &PlanePoint) -> Result<f64> {
    if p.model != q.model {
        return Err(Error::ModelMismatch);
    }
    Ok(hp_distance(p.to_complex(), q.to_complex()))
}

/// Direction at `i` (counterclockwise from ↑) of the geodesic towards `z`.
fn heading_at_i(z: C64) -> f64 {
    halfplane_to_disk(z).arg()
}

/// Isometry taking `i` to `p` and ↑ to the direction of the geodesic from `p` to `q`.
pub fn frame(p: C64, q: C64) -> Isometry {
    let lift = Isometry::lift(p);
    let q0 = lift.inverse().apply(q);
    lift * Isometry::rotation(heading_at_i(q0))
}

pub fn hp_angle_at(p: C64, q: C64, r: C64) -> f64 {
    let back = Isometry::lift(q).inverse();
    let a = heading_at_i(back.apply(p));
    let b = heading_at_i(back.apply(r));
    let mut d = (a - b).abs();
    if d > PI {
        d = 2.0 * PI - d;
    }
    d
}

/// Interior angle at `q` of the geodesic triangle `p, q, r`.
pub fn angle_at(p: &PlanePoint, q: &PlanePoint, r: &PlanePoint) -> Result<f64> {
    if p.model != q.model || q.model != r.model {
        return Err(Error::ModelMismatch);
    }
    Ok(hp_angle_at(p.to_complex(), q.to_complex(), r.to_complex()))
}

pub fn hp_midpoint(p: C64, q: C64) -> C64 {
    let d = hp_distance(p, q);
    (frame(p, q) * Isometry::axial(d / 2.0)).apply(I)
}

/// A canonical polygon laid out in a plane model; `vertices[k]` is `Q_{k+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanePolygon {
    pub genus: usize,
    pub model: Model,
    pub vertices: Vec<PlanePoint>,
}

impl PlanePolygon {
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    /// `Q_k` with 1-based index taken mod 4g.
    pub fn q(&self, k: isize) -> C64 {
        let n = self.n() as isize;
        self.vertices[((k - 1).rem_euclid(n)) as usize].to_complex()
    }

    pub fn side_lengths(&self) -> Vec<f64> {
        (1..=self.n() as isize)
            .map(|i| hp_distance(self.q(i - 1), self.q(i)))
            .collect()
    }

    pub fn angles(&self) -> Vec<f64> {
        (1..=self.n() as isize)
            .map(|i| hp_angle_at(self.q(i - 1), self.q(i), self.q(i + 1)))
            .collect()
    }

    pub fn to_model(&self, model: Model) -> PlanePolygon {
        PlanePolygon {
            genus: self.genus,
            model,
            vertices: self.vertices.iter().map(|v| v.to_model(model)).collect(),
        }
    }

    /// Centre of mass of the vertices on the hyperboloid, projected back to ℍ.
    pub fn vertex_centroid(&self) -> C64 {
        let mut s = [0.0; 3];
        for v in &self.vertices {
            let h = halfplane_to_hyperboloid(v.to_complex());
            for k in 0..3 {
                s[k] += h[k];
            }
        }
        let norm = (s[0] * s[0] - s[1] * s[1] - s[2] * s[2]).sqrt();
        hyperboloid_to_halfplane([s[0] / norm, s[1] / norm, s[2] / norm])
    }

    /// Point-in-polygon test, done with chords in the Klein model centred on
    /// the vertex centroid.
    pub fn contains(&self, z: C64) -> bool {
        let to_center = Isometry::lift(self.vertex_centroid()).inverse();
        let klein = |w: C64| disk_to_klein(halfplane_to_disk(to_center.apply(w)));
        let poly: Vec<C64> = self
            .vertices
            .iter()
            .map(|v| klein(v.to_complex()))
            .collect();
        let p = klein(z);
        let mut inside = false;
        let n = poly.len();
        let mut j = n - 1;
        for i in 0..n {
            let (a, b) = (poly[i], poly[j]);
            if (a.im > p.im) != (b.im > p.im) {
                let x = (b.re - a.re) * (p.im - a.im) / (b.im - a.im) + a.re;
                if p.re < x {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }
}

/// Residual of a boundary walk: how far the final frame is from the start frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosureGap {
    pub position: f64,
    pub direction: f64,
}

impl ClosureGap {
    pub fn magnitude(&self) -> f64 {
        self.position.max(self.direction)
    }
}

/// Walk the boundary of `p` without judging closure.
///
/// `Q_4g` sits at `i`, `a_1` leaves it straight up, and each vertex is a
/// clockwise turn by the exterior angle `π − α_k`.
pub fn walk(p: &CanonicalPolygon) -> (PlanePolygon, ClosureGap) {
    let mut m = Isometry::IDENTITY;
    let mut vertices = Vec::with_capacity(p.n());
    for k in 0..p.n() {
        m = m * Isometry::axial(p.sides[k]);
        vertices.push(PlanePoint::from_complex(m.apply(I)));
        m = m * Isometry::rotation(-(PI - p.angles[k]));
    }
    let end = m.apply(I);
    let spin = (Isometry::lift(end).inverse() * m).normalized();
    let mut turn = 2.0 * spin.m12.atan2(spin.m11);
    turn = (turn + PI).rem_euclid(2.0 * PI) - PI;
    let gap = ClosureGap {
        position: hp_distance(end, I),
        direction: turn.abs(),
    };
    // walk ends at Q_4g, which is also the starting point
    let last = vertices.len() - 1;
    vertices[last] = PlanePoint::from_complex(I);
    (
        PlanePolygon {
            genus: p.genus,
            model: Model::HalfPlane,
            vertices,
        },
        gap,
    )
}

/// Realize `p` in the half-plane, failing if the boundary walk does not close within `tol`.
pub fn realize(p: &CanonicalPolygon, tol: f64) -> Result<PlanePolygon> {
    let (pp, gap) = walk(p);
    if !(gap.magnitude() <= tol) {
        return Err(Error::ClosureFailure {
            gap: gap.magnitude(),
        });
    }
    Ok(pp)
}

/// The 2g generators `γ_1..γ_2g`: for odd `i`, `γ_i(a_i) = a_{i+2g}`; for even
/// `i`, `γ_i(a_{i+2g}) = a_i`. Each reverses the side so the image of the
/// polygon lies across the partner side.
pub fn side_pairings(pp: &PlanePolygon) -> Result<Vec<Isometry>> {
    let half = pp.n() as isize / 2;
    for (k, len) in pp.side_lengths().into_iter().enumerate() {
        if len < 1e-12 {
            return Err(Error::DegenerateSide {
                index: k + 1,
                length: len,
            });
        }
    }
    let gens = (1..=half)
        .map(|i| {
            let (from, to) = if i % 2 == 1 {
                ((i - 1, i), (i + half, i + half - 1))
            } else {
                ((i + half - 1, i + half), (i, i - 1))
            };
            let src = frame(pp.q(from.0), pp.q(from.1));
            let dst = frame(pp.q(to.0), pp.q(to.1));
            dst * src.inverse()
        })
        .collect();
    Ok(gens)
}

/// Product `γ_1γ_2…γ_2g γ_1⁻¹γ_2⁻¹…γ_2g⁻¹` as printed for the group relation.
pub fn relation_word(gens: &[Isometry]) -> Isometry {
    let fwd = gens.iter().fold(Isometry::IDENTITY, |acc, g| acc * *g);
    gens.iter().fold(fwd, |acc, g| acc * g.inverse())
}

/// Frobenius distance of the relation word from the identity.
pub fn relation_defect(gens: &[Isometry]) -> f64 {
    relation_word(gens).distance_to(&Isometry::IDENTITY)
}

/// Gauss–Bonnet area `(n − 2)π − Σα` from the measured vertex angles.
pub fn polygon_area(pp: &PlanePolygon) -> f64 {
    (pp.n() as f64 - 2.0) * PI - pp.angles().iter().sum::<f64>()
}
