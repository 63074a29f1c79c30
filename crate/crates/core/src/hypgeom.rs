//! Upper half-plane primitives: points, the point-pair invariant, hyperbolic
//! distance and the Möbius action of integer matrices.
//!
//! Group elements are PSL(2,Z) classes: a matrix and its negative are the same
//! element, and every [`GroupElement`] is stored in the canonical sign
//! `c > 0`, or `c = 0` and `d > 0`. Counting over SL(2,Z) instead would give
//! exactly twice every count produced by this crate.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default relative tolerance for floating-point comparisons.
pub const REL_TOL: f64 = 1e-12;

/// A point `x + iy` of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    x: f64,
    y: f64,
}

impl Point {
    /// The point `i`.
    pub const I: Point = Point { x: 0.0, y: 1.0 };

    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::domain(format!("non-finite point ({x}, {y})")));
        }
        if y <= 0.0 {
            return Err(Error::domain(format!("height must be positive, got y = {y}")));
        }
        Ok(Point { x, y })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// True when this is exactly the point `i`.
    pub fn is_i(&self) -> bool {
        self.x == 0.0 && self.y == 1.0
    }

    /// Shift by a real translation, `z + s`.
    pub fn translate(&self, s: f64) -> Point {
        Point { x: self.x + s, y: self.y }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

impl FromStr for Point {
    type Err = Error;

    /// Parses the CLI form `"x,y"`.
    fn from_str(s: &str) -> Result<Self> {
        let (xs, ys) = s
            .split_once(',')
            .ok_or_else(|| Error::domain(format!("expected \"x,y\", got {s:?}")))?;
        let x: f64 = xs
            .trim()
            .parse()
            .map_err(|_| Error::domain(format!("bad x coordinate {xs:?}")))?;
        let y: f64 = ys
            .trim()
            .parse()
            .map_err(|_| Error::domain(format!("bad y coordinate {ys:?}")))?;
        Point::new(x, y)
    }
}

/// A determinant-one integer matrix `(a b; c d)` taken up to sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { a: 1, b: 0, c: 0, d: 1 };
    /// `S = (0 1; -1 0)`, stored canonically as `(0 -1; 1 0)`.
    pub const S: GroupElement = GroupElement { a: 0, b: -1, c: 1, d: 0 };
    pub const T: GroupElement = GroupElement { a: 1, b: 1, c: 0, d: 1 };

    /// Builds the canonical representative of `±(a b; c d)`.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(Error::domain(format!(
                "determinant of ({a} {b}; {c} {d}) is {det}, expected 1"
            )));
        }
        Ok(Self::canonical_unchecked(a, b, c, d))
    }

    pub(crate) fn canonical_unchecked(a: i64, b: i64, c: i64, d: i64) -> Self {
        if c < 0 || (c == 0 && d < 0) {
            GroupElement { a: -a, b: -b, c: -c, d: -d }
        } else {
            GroupElement { a, b, c, d }
        }
    }

    /// Re-applies the sign normalization; the identity on canonical values.
    pub fn canonicalize(&self) -> Self {
        Self::canonical_unchecked(self.a, self.b, self.c, self.d)
    }

    pub fn a(&self) -> i64 {
        self.a
    }
    pub fn b(&self) -> i64 {
        self.b
    }
    pub fn c(&self) -> i64 {
        self.c
    }
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn inverse(&self) -> Self {
        Self::canonical_unchecked(self.d, -self.b, -self.c, self.a)
    }

    /// Matrix product `self * other`, canonicalized.
    pub fn compose(&self, other: &GroupElement) -> Self {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let (e, f, g, h) = (other.a, other.b, other.c, other.d);
        Self::canonical_unchecked(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }

    /// `a² + b² + c² + d²`, computed exactly.
    pub fn frobenius_norm_squared(&self) -> u128 {
        self.entries().iter().map(|&v| (v as i128 * v as i128) as u128).sum()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// `u(z,w) = |z − w|² / (4 Im z Im w)`.
pub fn pair_invariant(z: Point, w: Point) -> f64 {
    let dx = z.x - w.x;
    let dy = z.y - w.y;
    (dx * dx + dy * dy) / (4.0 * z.y * w.y)
}

/// `cosh ρ(z,w) = 2u(z,w) + 1`.
pub fn cosh_distance(z: Point, w: Point) -> f64 {
    2.0 * pair_invariant(z, w) + 1.0
}

/// Hyperbolic distance `ρ(z,w)`.
pub fn distance(z: Point, w: Point) -> f64 {
    cosh_distance(z, w).acosh()
}

/// `(a z + b) / (c z + d)`.
pub fn mobius(g: &GroupElement, z: Point) -> Point {
    let (a, b, c, d) = (g.a as f64, g.b as f64, g.c as f64, g.d as f64);
    let den_re = c * z.x + d;
    let den_im = c * z.y;
    let den = den_re * den_re + den_im * den_im;
    let num_re = a * z.x + b;
    let num_im = a * z.y;
    // (num_re + i num_im)(den_re - i den_im) / |den|²; Im simplifies by det = 1.
    let x = (num_re * den_re + num_im * den_im) / den;
    let y = z.y / den;
    Point { x, y }
}

/// `4u(z, g·w) + 2 = 2 cosh ρ(z, g·w)`.
///
/// Equal to the squared Frobenius norm of `σ_z⁻¹ g σ_w`, where `σ_p` is the
/// upper-triangular scaling sending `i` to `p`. At `z = w = i` this is
/// `a² + b² + c² + d²`, and that case is evaluated in integer arithmetic.
pub fn frobenius_value(g: &GroupElement, z: Point, w: Point) -> f64 {
    if z.is_i() && w.is_i() {
        return g.frobenius_norm_squared() as f64;
    }
    let [a, b, c, d] = g.entries().map(|v| v as f64);
    scaled_norm_squared(a, b, c, d, z, w)
}

/// Squared Frobenius norm of `σ_z⁻¹ (a b; c d) σ_w` for real entries.
pub(crate) fn scaled_norm_squared(a: f64, b: f64, c: f64, d: f64, z: Point, w: Point) -> f64 {
    let (r1, r2) = scaled_rows(a, b, c, d, z, w);
    r1[0] * r1[0] + r1[1] * r1[1] + r2[0] * r2[0] + r2[1] * r2[1]
}

/// Rows of `σ_z⁻¹ (a b; c d) σ_w`.
pub(crate) fn scaled_rows(a: f64, b: f64, c: f64, d: f64, z: Point, w: Point) -> ([f64; 2], [f64; 2]) {
    let syz = z.y.sqrt();
    let syw = w.y.sqrt();
    let cw = c * w.x + d;
    let row1 = [
        (a - z.x * c) * syw / syz,
        ((a * w.x + b) - z.x * cw) / (syw * syz),
    ];
    let row2 = [syz * syw * c, syz * cw / syw];
    (row1, row2)
}
