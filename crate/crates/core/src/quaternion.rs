//! The quaternion value type, imaginary units and boundary points `e^{It}`.

use std::fmt;
use std::iter::Sum;
use std::str::FromStr;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Moduli below this are treated as zero divisors by [`Quaternion::inv`].
pub const ZERO_DIVISOR_EPS: f64 = 1e-12;

/// `w + x i + y j + z k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    #[inline]
    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    #[inline]
    pub const fn pure(x: f64, y: f64, z: f64) -> Self {
        Self::new(0.0, x, y, z)
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Imaginary part as a pure quaternion.
    #[inline]
    pub fn imag(self) -> Self {
        Self::pure(self.x, self.y, self.z)
    }

    /// `conj(a) / |a|^2`. Fails when `|a| < ZERO_DIVISOR_EPS`.
    pub fn inv(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2.sqrt() < ZERO_DIVISOR_EPS {
            return Err(Error::ZeroDivisor(self.to_string()));
        }
        Ok(self.conj() / n2)
    }

    /// Euclidean inner product of the four real components; equals `Re(conj(a) b)`.
    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn components(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn from_components(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let a = self;
        Self::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl MulAssign for Quaternion {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl MulAssign<f64> for Quaternion {
    #[inline]
    fn mul_assign(&mut self, s: f64) {
        *self = *self * s;
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        Self::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        Self::new(self.w + b.w, self.x + b.x, self.y + b.y, self.z + b.z)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        Self::new(self.w - b.w, self.x - b.x, self.y - b.y, self.z - b.z)
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, b: Self) {
        *self = *self - b;
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Sum for Quaternion {
    fn sum<It: Iterator<Item = Self>>(iter: It) -> Self {
        iter.fold(Self::ZERO, |acc, q| acc + q)
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Self::real(w)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i{:+}j{:+}k", self.w, self.x, self.y, self.z)
    }
}

/// A point of the sphere `S = { q : q^2 = -1 }` of imaginary units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImaginaryUnit {
    x: f64,
    y: f64,
    z: f64,
}

impl ImaginaryUnit {
    pub const I: Self = Self { x: 1.0, y: 0.0, z: 0.0 };
    pub const J: Self = Self { x: 0.0, y: 1.0, z: 0.0 };
    pub const K: Self = Self { x: 0.0, y: 0.0, z: 1.0 };

    /// Normalizes `(x, y, z)` onto the unit sphere.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if !(n > ZERO_DIVISOR_EPS) || !n.is_finite() {
            return Err(Error::DegenerateAxis(x, y, z));
        }
        Ok(Self { x: x / n, y: y / n, z: z / n })
    }

    /// Unit vector with polar angle `theta` from `k` and azimuth `phi`.
    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self { x: st * cp, y: st * sp, z: ct }
    }

    /// Imaginary part of `q`, normalized.
    pub fn from_quaternion(q: Quaternion) -> Result<Self> {
        Self::new(q.x, q.y, q.z)
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }
    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }
    #[inline]
    pub fn z(&self) -> f64 {
        self.z
    }

    #[inline]
    pub fn coords(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn as_quaternion(&self) -> Quaternion {
        Quaternion::pure(self.x, self.y, self.z)
    }

    #[inline]
    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Rotation by the unit quaternion `u`: `u I u*`.
    pub fn rotated(&self, u: Quaternion) -> Self {
        let v = u * self.as_quaternion() * u.conj();
        let n = (v.x * v.x + v.y * v.y + v.z * v.z).sqrt();
        Self { x: v.x / n, y: v.y / n, z: v.z / n }
    }
}

/// `i`, `j`, `k` (optionally signed) or `x,y,z`, normalized.
impl FromStr for ImaginaryUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (-1.0, rest.trim()),
            None => (1.0, s.strip_prefix('+').unwrap_or(s).trim()),
        };
        let named = match body {
            "i" => Some(Self::I),
            "j" => Some(Self::J),
            "k" => Some(Self::K),
            _ => None,
        };
        if let Some(u) = named {
            return Ok(if sign < 0.0 { -u } else { u });
        }
        let parts: Vec<f64> = s
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse(format!("imaginary unit `{s}`: expected i, j, k or x,y,z")))?;
        match parts[..] {
            [x, y, z] => Self::new(x, y, z),
            _ => Err(Error::Parse(format!("imaginary unit `{s}`: expected three components"))),
        }
    }
}

impl Neg for ImaginaryUnit {
    type Output = Self;
    fn neg(self) -> Self {
        Self { x: -self.x, y: -self.y, z: -self.z }
    }
}

impl From<ImaginaryUnit> for Quaternion {
    fn from(u: ImaginaryUnit) -> Self {
        u.as_quaternion()
    }
}

/// `e^{It} = cos t + I sin t`.
#[inline]
pub fn exp_unit(axis: &ImaginaryUnit, t: f64) -> Quaternion {
    let (s, c) = t.sin_cos();
    Quaternion::new(c, axis.x * s, axis.y * s, axis.z * s)
}

/// A point `e^{It}` of the unit sphere of quaternions, kept as its parametrization.
///
/// `(I, t)` and `(-I, 2π - t)` name the same point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryPoint {
    pub axis: ImaginaryUnit,
    pub angle: f64,
}

impl BoundaryPoint {
    pub fn new(axis: ImaginaryUnit, angle: f64) -> Self {
        Self { axis, angle: angle.rem_euclid(std::f64::consts::TAU) }
    }

    /// Canonical representative of a unit quaternion: `t = arccos(Re q)` in `[0, π]`.
    /// Real points (`q = ±1`) get the axis `k` and are reported by [`Self::is_real`].
    pub fn from_quaternion(q: Quaternion) -> Result<Self> {
        let n = q.norm();
        if n < ZERO_DIVISOR_EPS {
            return Err(Error::ZeroDivisor(q.to_string()));
        }
        let q = q / n;
        let angle = q.w.clamp(-1.0, 1.0).acos();
        let axis = ImaginaryUnit::from_quaternion(q).unwrap_or(ImaginaryUnit::K);
        Ok(Self { axis, angle })
    }

    pub fn to_quaternion(&self) -> Quaternion {
        exp_unit(&self.axis, self.angle)
    }

    /// The other parametrization `(-I, 2π - t)` of the same point.
    pub fn mirrored(&self) -> Self {
        Self::new(-self.axis, std::f64::consts::TAU - self.angle)
    }

    /// True on the two real points `±1`, where the axis carries no information.
    pub fn is_real(&self) -> bool {
        self.angle.sin().abs() < ZERO_DIVISOR_EPS
    }
}
