//! Reference solids: exact metrics, canonical placement, point containment
//! and uniform interior sampling.
//!
//! Every solid is centred at the origin. The polyhedra use fixed placements
//! shared by the whole crate:
//!
//! * tetrahedron: vertices `λ(1,1,1)`, `λ(1,−1,−1)`, `λ(−1,1,−1)`, `λ(−1,−1,1)`
//!   with `λ = edge / (2√2)`;
//! * octahedron: `|x| + |y| + |z| ≤ edge / √2`;
//! * cube: axis aligned, half-width `edge / 2`;
//! * cylinder: axis along `z`, diameter and height both equal to `edge`.
//!
//! For the sphere `edge` is the diameter.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use rand::Rng;

use crate::error::{Error, Result};
use crate::mc::{self, McConfig, McEstimate};

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const SQRT_3: f64 = 1.732_050_807_568_877_2;
const PI: f64 = std::f64::consts::PI;

/// Relative slack applied by [`contains`] so that points produced by exact
/// convex combinations of boundary vertices test as inside.
const BOUNDARY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolidKind {
    Tetrahedron,
    Octahedron,
    Sphere,
    Cube,
    Cylinder,
}

impl SolidKind {
    pub const ALL: [SolidKind; 5] = [
        SolidKind::Tetrahedron,
        SolidKind::Octahedron,
        SolidKind::Cube,
        SolidKind::Cylinder,
        SolidKind::Sphere,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolidKind::Tetrahedron => "tetrahedron",
            SolidKind::Octahedron => "octahedron",
            SolidKind::Sphere => "sphere",
            SolidKind::Cube => "cube",
            SolidKind::Cylinder => "cylinder",
        }
    }

    /// Whether a closed-form correlation function is available.
    pub fn has_analytic_cf(self) -> bool {
        matches!(
            self,
            SolidKind::Tetrahedron | SolidKind::Octahedron | SolidKind::Sphere
        )
    }
}

impl fmt::Display for SolidKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolidKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tetrahedron" | "tet" => Ok(SolidKind::Tetrahedron),
            "octahedron" | "oct" => Ok(SolidKind::Octahedron),
            "sphere" => Ok(SolidKind::Sphere),
            "cube" => Ok(SolidKind::Cube),
            "cylinder" => Ok(SolidKind::Cylinder),
            _ => Err(Error::Parse {
                what: "solid kind",
                input: s.to_string(),
                reason: "expected tetrahedron, octahedron, sphere, cube or cylinder".into(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn dot(self, other: Point3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Where a solid's squared gyration radius came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rg2Source {
    ClosedForm,
    /// Monte-Carlo second moment, already rescaled to the solid's size.
    MonteCarlo(McEstimate),
}

impl Rg2Source {
    pub fn stderr(&self) -> f64 {
        match self {
            Rg2Source::ClosedForm => 0.0,
            Rg2Source::MonteCarlo(est) => est.stderr,
        }
    }
}

/// A reference solid with its exact metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolidSpec {
    pub kind: SolidKind,
    /// Edge length for polyhedra, diameter for sphere and cylinder.
    pub edge: f64,
    pub surface: f64,
    pub volume: f64,
    pub dmax: f64,
    /// Squared gyration radius.
    pub rg2: f64,
    pub rg2_source: Rg2Source,
}

impl SolidSpec {
    /// Uniformly rescales every length by `factor`.
    pub fn scaled(&self, factor: f64) -> SolidSpec {
        let f2 = factor * factor;
        let rg2_source = match self.rg2_source {
            Rg2Source::ClosedForm => Rg2Source::ClosedForm,
            Rg2Source::MonteCarlo(est) => Rg2Source::MonteCarlo(McEstimate {
                mean: est.mean * f2,
                stderr: est.stderr * f2,
                ..est
            }),
        };
        SolidSpec {
            kind: self.kind,
            edge: self.edge * factor,
            surface: self.surface * f2,
            volume: self.volume * f2 * factor,
            dmax: self.dmax * factor,
            rg2: self.rg2 * f2,
            rg2_source,
        }
    }

    /// `S / V`, the quantity fixing the Porod plateau `2π S / V`.
    pub fn surface_to_volume(&self) -> f64 {
        self.surface / self.volume
    }

    /// Distance between opposite parallel faces, when the solid has them.
    pub fn face_separation(&self) -> Option<f64> {
        match self.kind {
            SolidKind::Octahedron => Some(self.edge * (2.0f64 / 3.0).sqrt()),
            SolidKind::Cube | SolidKind::Cylinder => Some(self.edge),
            SolidKind::Tetrahedron | SolidKind::Sphere => None,
        }
    }

    /// Canonical vertex set of a polyhedron; empty for curved solids.
    pub fn vertices(&self) -> Vec<Point3> {
        match self.kind {
            SolidKind::Tetrahedron => {
                let l = self.edge / (2.0 * SQRT_2);
                TETRA_SIGNS
                    .iter()
                    .map(|s| Point3::new(s[0], s[1], s[2]) * l)
                    .collect()
            }
            SolidKind::Octahedron => {
                let a = self.edge / SQRT_2;
                vec![
                    Point3::new(a, 0.0, 0.0),
                    Point3::new(-a, 0.0, 0.0),
                    Point3::new(0.0, a, 0.0),
                    Point3::new(0.0, -a, 0.0),
                    Point3::new(0.0, 0.0, a),
                    Point3::new(0.0, 0.0, -a),
                ]
            }
            SolidKind::Cube => {
                let h = self.edge / 2.0;
                let mut v = Vec::with_capacity(8);
                for sx in [-1.0, 1.0] {
                    for sy in [-1.0, 1.0] {
                        for sz in [-1.0, 1.0] {
                            v.push(Point3::new(sx * h, sy * h, sz * h));
                        }
                    }
                }
                v
            }
            SolidKind::Sphere | SolidKind::Cylinder => Vec::new(),
        }
    }
}

const TETRA_SIGNS: [[f64; 3]; 4] = [
    [1.0, 1.0, 1.0],
    [1.0, -1.0, -1.0],
    [-1.0, 1.0, -1.0],
    [-1.0, -1.0, 1.0],
];

/// Samples used for the cached gyration radius of the polyhedra.
pub const RG2_SAMPLES: u64 = 10_000_000;
/// Seed used for the cached gyration radius of the polyhedra.
pub const RG2_SEED: u64 = 0x5eed_0002;

fn closed_form(kind: SolidKind, edge: f64) -> (f64, f64, f64) {
    let e2 = edge * edge;
    let e3 = e2 * edge;
    match kind {
        SolidKind::Tetrahedron => (SQRT_3 * e2, e3 / (6.0 * SQRT_2), edge),
        SolidKind::Octahedron => (2.0 * SQRT_3 * e2, SQRT_2 * e3 / 3.0, SQRT_2 * edge),
        SolidKind::Sphere => (PI * e2, PI * e3 / 6.0, edge),
        SolidKind::Cube => (6.0 * e2, e3, SQRT_3 * edge),
        SolidKind::Cylinder => (1.5 * PI * e2, PI * e3 / 4.0, SQRT_2 * edge),
    }
}

/// Gyration radius of the unit-size solid; Monte-Carlo for the polyhedra
/// without a trivial closed form, computed once per process.
fn unit_rg2(kind: SolidKind) -> (f64, Rg2Source) {
    static TETRA: OnceLock<McEstimate> = OnceLock::new();
    static OCTA: OnceLock<McEstimate> = OnceLock::new();

    let cached = |cell: &OnceLock<McEstimate>| {
        let est = *cell.get_or_init(|| {
            let unit = unit_solid_without_rg2(kind);
            mc::estimate_rg2(&unit, &McConfig::new(RG2_SAMPLES, RG2_SEED))
                .expect("cached gyration estimate uses a valid sample count")
        });
        (est.mean, Rg2Source::MonteCarlo(est))
    };

    match kind {
        SolidKind::Sphere => (0.15, Rg2Source::ClosedForm),
        SolidKind::Cube => (0.25, Rg2Source::ClosedForm),
        SolidKind::Cylinder => (5.0 / 24.0, Rg2Source::ClosedForm),
        SolidKind::Tetrahedron => cached(&TETRA),
        SolidKind::Octahedron => cached(&OCTA),
    }
}

/// Unit-size solid whose `rg2` is not yet known; enough for sampling.
pub(crate) fn unit_solid_without_rg2(kind: SolidKind) -> SolidSpec {
    let (surface, volume, dmax) = closed_form(kind, 1.0);
    SolidSpec {
        kind,
        edge: 1.0,
        surface,
        volume,
        dmax,
        rg2: f64::NAN,
        rg2_source: Rg2Source::ClosedForm,
    }
}

/// Exact metrics of `kind` at the given edge (diameter for the sphere).
pub fn solid_metrics(kind: SolidKind, edge: f64) -> Result<SolidSpec> {
    if !(edge > 0.0 && edge.is_finite()) {
        return Err(Error::Domain {
            what: "edge",
            requirement: "finite and positive",
            value: edge,
        });
    }
    let (surface, volume, dmax) = closed_form(kind, edge);
    let (unit_rg2, unit_source) = unit_rg2(kind);
    let e2 = edge * edge;
    let rg2_source = match unit_source {
        Rg2Source::ClosedForm => Rg2Source::ClosedForm,
        Rg2Source::MonteCarlo(est) => Rg2Source::MonteCarlo(McEstimate {
            mean: est.mean * e2,
            stderr: est.stderr * e2,
            ..est
        }),
    };
    Ok(SolidSpec {
        kind,
        edge,
        surface,
        volume,
        dmax,
        rg2: unit_rg2 * e2,
        rg2_source,
    })
}

/// Rescales `solid` so that its maximal chord is exactly one.
pub fn scale_to_unit_dmax(solid: &SolidSpec) -> SolidSpec {
    let mut scaled = solid.scaled(1.0 / solid.dmax);
    scaled.dmax = 1.0;
    scaled
}

/// Whether `p` lies in the closed solid.
pub fn contains(solid: &SolidSpec, p: Point3) -> bool {
    let e = solid.edge;
    let slack = BOUNDARY_SLACK * e;
    match solid.kind {
        SolidKind::Tetrahedron => {
            let l = e / (2.0 * SQRT_2);
            let (x, y, z) = (p.x, p.y, p.z);
            -(x + y + z) <= l + slack
                && -(x - y - z) <= l + slack
                && -(-x + y - z) <= l + slack
                && -(-x - y + z) <= l + slack
        }
        SolidKind::Octahedron => p.x.abs() + p.y.abs() + p.z.abs() <= e / SQRT_2 + slack,
        SolidKind::Sphere => {
            let r = 0.5 * e + slack;
            p.norm_squared() <= r * r
        }
        SolidKind::Cube => {
            let h = 0.5 * e + slack;
            p.x.abs() <= h && p.y.abs() <= h && p.z.abs() <= h
        }
        SolidKind::Cylinder => {
            let r = 0.5 * e + slack;
            p.x * p.x + p.y * p.y <= r * r && p.z.abs() <= 0.5 * e + slack
        }
    }
}

/// Draws a point uniformly distributed over the solid's interior.
pub fn sample_point<R: Rng + ?Sized>(solid: &SolidSpec, rng: &mut R) -> Point3 {
    let e = solid.edge;
    match solid.kind {
        SolidKind::Tetrahedron => {
            // sorted uniform spacings are uniform on the 3-simplex
            let mut u = [
                rng.random::<f64>(),
                rng.random::<f64>(),
                rng.random::<f64>(),
            ];
            sort3(&mut u);
            let w = [u[0], u[1] - u[0], u[2] - u[1], 1.0 - u[2]];
            let l = e / (2.0 * SQRT_2);
            let mut p = Point3::ORIGIN;
            for (wi, s) in w.iter().zip(TETRA_SIGNS.iter()) {
                p = p + Point3::new(s[0], s[1], s[2]) * (wi * l);
            }
            p
        }
        SolidKind::Octahedron => {
            let a = e / SQRT_2;
            loop {
                let p = uniform_in_box(rng, a);
                if p.x.abs() + p.y.abs() + p.z.abs() <= a {
                    return p;
                }
            }
        }
        SolidKind::Sphere => {
            let r = 0.5 * e;
            loop {
                let p = uniform_in_box(rng, r);
                if p.norm_squared() <= r * r {
                    return p;
                }
            }
        }
        SolidKind::Cube => uniform_in_box(rng, 0.5 * e),
        SolidKind::Cylinder => {
            let radius = 0.5 * e * rng.random::<f64>().sqrt();
            let phi = 2.0 * PI * rng.random::<f64>();
            let z = e * (rng.random::<f64>() - 0.5);
            Point3::new(radius * phi.cos(), radius * phi.sin(), z)
        }
    }
}

fn uniform_in_box<R: Rng + ?Sized>(rng: &mut R, half: f64) -> Point3 {
    Point3::new(
        half * (2.0 * rng.random::<f64>() - 1.0),
        half * (2.0 * rng.random::<f64>() - 1.0),
        half * (2.0 * rng.random::<f64>() - 1.0),
    )
}

fn sort3(u: &mut [f64; 3]) {
    if u[0] > u[1] {
        u.swap(0, 1);
    }
    if u[1] > u[2] {
        u.swap(1, 2);
    }
    if u[0] > u[1] {
        u.swap(0, 1);
    }
}

/// Isotropic unit vector from the `cos θ`/azimuth parameterisation.
pub fn sample_direction<R: Rng + ?Sized>(rng: &mut R) -> Point3 {
    let cos_theta = 2.0 * rng.random::<f64>() - 1.0;
    let phi = 2.0 * PI * rng.random::<f64>();
    let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
    Point3::new(sin_theta * phi.cos(), sin_theta * phi.sin(), cos_theta)
}
