//! Quaternion arithmetic, slice decomposition and eigensphere geometry.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Relative cutoff below which the imaginary part of a quaternion is
/// treated as zero (the quaternion is then considered real).
pub const REAL_DETECTION_TOL: f64 = 1e-13;

/// A quaternion `w + x i + y j + z k` over f64.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);

impl Quaternion {
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    pub const fn i() -> Self {
        Quaternion::new(0.0, 1.0, 0.0, 0.0)
    }

    pub const fn j() -> Self {
        Quaternion::new(0.0, 0.0, 1.0, 0.0)
    }

    pub const fn k() -> Self {
        Quaternion::new(0.0, 0.0, 0.0, 1.0)
    }

    pub fn re(&self) -> f64 {
        self.w
    }

    /// Norm of the imaginary part `x i + y j + z k`.
    pub fn im_norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sq(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Multiplicative inverse `q̄ / |q|²`.
    pub fn inverse(&self) -> Result<Self, Error> {
        let n2 = self.norm_sq();
        if n2 == 0.0 {
            return Err(Error::ZeroDivision);
        }
        Ok(self.conj() / n2)
    }

    pub fn is_zero(&self) -> bool {
        self.norm_sq() == 0.0
    }

    /// Whether the quaternion counts as real under the detection cutoff.
    pub fn is_real(&self) -> bool {
        self.im_norm() <= REAL_DETECTION_TOL * self.norm().max(1.0)
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = ONE;
        for _ in 0..n {
            acc = acc * *self;
        }
        acc
    }

    /// Unique decomposition `q = x + yI` with `y > 0` and `I ∈ S` for a
    /// non-real quaternion; real inputs yield `y = 0` and no axis.
    pub fn slice_decompose(&self) -> (f64, f64, Option<ImaginaryUnit>) {
        if self.is_real() {
            return (self.w, 0.0, None);
        }
        let y = self.im_norm();
        let axis = ImaginaryUnit {
            x: self.x / y,
            y: self.y / y,
            z: self.z / y,
        };
        (self.w, y, Some(axis))
    }

    /// The axially symmetric sphere `[q] = {Re q + |Im q| I : I ∈ S}`.
    pub fn sphere(&self) -> EigenSphere {
        EigenSphere {
            re: self.w,
            im: if self.is_real() { 0.0 } else { self.im_norm() },
        }
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w + rhs.w, self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, rhs: Quaternion) {
        *self = *self + rhs;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w - rhs.w, self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, rhs: Quaternion) {
        *self = *self - rhs;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    /// Hamilton product with `ij = k = -ji`, `jk = i`, `ki = j`.
    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Quaternion::real(w)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, unit) in [(self.w, ""), (self.x, "i"), (self.y, "j"), (self.z, "k")] {
            if v == 0.0 {
                continue;
            }
            if first {
                write!(f, "{v}{unit}")?;
                first = false;
            } else if v < 0.0 {
                write!(f, "-{}{unit}", -v)?;
            } else {
                write!(f, "+{v}{unit}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Parses the CLI literal form `w+xi+yj+zk` with optional terms,
/// e.g. `0.5+0.5i`, `-j`, `1-2k`.
impl FromStr for Quaternion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty quaternion literal".into()));
        }
        let mut q = ZERO;
        let bytes = s.as_bytes();
        let mut pos = 0;
        let mut seen = [false; 4];
        while pos < bytes.len() {
            let start = pos;
            // sign
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                pos += 1;
            }
            // mantissa and exponent
            let digits_start = pos;
            while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'.') {
                pos += 1;
            }
            if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
                let mut p = pos + 1;
                if p < bytes.len() && (bytes[p] == b'+' || bytes[p] == b'-') {
                    p += 1;
                }
                if p < bytes.len() && bytes[p].is_ascii_digit() {
                    pos = p;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                }
            }
            // unit suffix
            let (axis, has_unit) = match bytes.get(pos) {
                Some(b'i') => (1, true),
                Some(b'j') => (2, true),
                Some(b'k') => (3, true),
                _ => (0, false),
            };
            let num = &s[start..pos];
            let value: f64 = if pos == digits_start && has_unit {
                // bare unit like "i" or "-j"
                match num {
                    "" | "+" => 1.0,
                    "-" => -1.0,
                    _ => return Err(Error::Parse(format!("bad quaternion term in '{s}'"))),
                }
            } else {
                num.parse()
                    .map_err(|_| Error::Parse(format!("bad quaternion term in '{s}'")))?
            };
            if has_unit {
                pos += 1;
            }
            if seen[axis] {
                return Err(Error::Parse(format!("repeated component in '{s}'")));
            }
            seen[axis] = true;
            match axis {
                0 => q.w = value,
                1 => q.x = value,
                2 => q.y = value,
                _ => q.z = value,
            }
        }
        Ok(q)
    }
}

/// A point `I` of the unit sphere `S` of imaginary quaternions, `I² = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImaginaryUnit {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ImaginaryUnit {
    /// Normalizes `(x, y, z)`; errors on the zero vector.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, Error> {
        let n = (x * x + y * y + z * z).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Parse("imaginary unit must be a nonzero finite vector".into()));
        }
        Ok(ImaginaryUnit { x: x / n, y: y / n, z: z / n })
    }

    pub const I: ImaginaryUnit = ImaginaryUnit { x: 1.0, y: 0.0, z: 0.0 };
    pub const J: ImaginaryUnit = ImaginaryUnit { x: 0.0, y: 1.0, z: 0.0 };
    pub const K: ImaginaryUnit = ImaginaryUnit { x: 0.0, y: 0.0, z: 1.0 };

    pub fn as_quaternion(&self) -> Quaternion {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    /// The point `x + yI` of the slice plane `L_I`.
    pub fn slice_point(&self, x: f64, y: f64) -> Quaternion {
        Quaternion::new(x, y * self.x, y * self.y, y * self.z)
    }
}

/// The axially symmetric set `{re + im·I : I ∈ S}`; a single real point
/// when `im = 0`, a 2-sphere otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenSphere {
    pub re: f64,
    pub im: f64,
}

impl EigenSphere {
    pub fn new(re: f64, im: f64) -> Self {
        assert!(im >= 0.0, "eigensphere imaginary radius must be nonnegative");
        EigenSphere { re, im }
    }

    /// Distance from the origin, constant across the sphere.
    pub fn radius(&self) -> f64 {
        (self.re * self.re + self.im * self.im).sqrt()
    }

    pub fn contains(&self, q: &Quaternion, tol: f64) -> bool {
        (q.re() - self.re).abs() <= tol && (q.im_norm() - self.im).abs() <= tol
    }

    /// A canonical representative `re + im·i` on the slice `L_i`.
    pub fn representative(&self) -> Quaternion {
        Quaternion::new(self.re, self.im, 0.0, 0.0)
    }

    /// Euclidean distance in `(re, im)` coordinates; the distance from any
    /// point of one sphere to the nearest point of the other.
    pub fn distance(&self, other: &EigenSphere) -> f64 {
        ((self.re - other.re).powi(2) + (self.im - other.im).powi(2)).sqrt()
    }

    /// Distance of the quaternion `p` from the sphere, in `(re, im)` coordinates.
    pub fn distance_to(&self, p: &Quaternion) -> f64 {
        ((p.re() - self.re).powi(2) + (p.im_norm() - self.im).powi(2)).sqrt()
    }
}

/// The scalar bound `β(q) = |Re q| + √(Re(q)² + |q|²)` controlling
/// semi-regularity persistence of the pseudo-resolvent.
///
/// This is the value produced by the equivalence
/// `γ² - 2|q₀|γ - |q|² > 0  ⟺  γ > |q₀| + √(q₀² + |q|²)`.
pub fn beta(q: &Quaternion) -> f64 {
    let q0 = q.re().abs();
    q0 + (q0 * q0 + q.norm_sq()).sqrt()
}

/// The power-scaled bound `β_n(M,q) = (2|Re(qⁿ)| Mⁿ + |q|^{2n})^{1/(2n)}`.
pub fn beta_n(m: f64, q: &Quaternion, n: u32) -> f64 {
    assert!(m > 0.0, "beta_n requires M > 0");
    assert!(n >= 1, "beta_n requires n >= 1");
    let qn = q.powi(n);
    let val = 2.0 * qn.re().abs() * m.powi(n as i32) + q.norm().powi(2 * n as i32);
    val.powf(1.0 / (2.0 * n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hamilton_sign_table() {
        let (i, j, k) = (Quaternion::i(), Quaternion::j(), Quaternion::k());
        assert_eq!(i * j, k);
        assert_eq!(j * i, -k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(i * i, -ONE);
        assert_eq!(j * j, -ONE);
        assert_eq!(k * k, -ONE);
    }

    #[test]
    fn identity_and_expansion() {
        let q = Quaternion::new(0.3, -1.2, 0.7, 2.0);
        assert_eq!(q * ONE, q);
        // (1+i)(1-i) = 2
        let p = ONE + Quaternion::i();
        let r = ONE - Quaternion::i();
        assert_eq!(p * r, Quaternion::real(2.0));
    }

    #[test]
    fn inverse_cases() {
        assert_eq!(Quaternion::i().inverse().unwrap(), -Quaternion::i());
        assert_eq!(Quaternion::real(2.0).inverse().unwrap(), Quaternion::real(0.5));
        let q = Quaternion::new(1.0, 1.0, 1.0, 1.0);
        let inv = q.inverse().unwrap();
        assert_eq!(inv, Quaternion::new(0.25, -0.25, -0.25, -0.25));
        let prod = q * inv;
        assert_relative_eq!(prod.w, 1.0, epsilon = 1e-15);
        assert!(prod.im_norm() < 1e-15);
        assert!(ZERO.inverse().is_err());
    }

    #[test]
    fn slice_decomposition() {
        let q = Quaternion::new(3.0, 4.0, 0.0, 0.0);
        let (x, y, axis) = q.slice_decompose();
        assert_eq!((x, y), (3.0, 4.0));
        assert_eq!(axis.unwrap(), ImaginaryUnit::I);

        let (x, y, axis) = Quaternion::real(2.0).slice_decompose();
        assert_eq!((x, y), (2.0, 0.0));
        assert!(axis.is_none());

        let q = Quaternion::new(1.0, 1.0, 1.0, 1.0);
        let (x, y, axis) = q.slice_decompose();
        assert_eq!(x, 1.0);
        assert_relative_eq!(y, 3f64.sqrt(), epsilon = 1e-15);
        let i = axis.unwrap();
        // I² = -1 and reassembly q = x + yI
        let isq = i.as_quaternion() * i.as_quaternion();
        assert_relative_eq!(isq.w, -1.0, epsilon = 1e-15);
        let back = Quaternion::real(x) + i.as_quaternion() * y;
        assert_relative_eq!((back - q).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn sphere_membership() {
        let s = Quaternion::i().sphere();
        assert_eq!(s, EigenSphere::new(0.0, 1.0));
        assert!(s.contains(&Quaternion::j(), 0.0));
        let s5 = Quaternion::real(5.0).sphere();
        assert_eq!(s5, EigenSphere::new(5.0, 0.0));
        assert!(s5.contains(&Quaternion::real(5.0), 0.0));
        assert!(!s5.contains(&Quaternion::real(5.1), 1e-3));
        let q = Quaternion::new(0.2, -0.4, 1.0, 0.3);
        assert_eq!(q.sphere(), q.conj().sphere());
    }

    #[test]
    fn beta_values() {
        assert_eq!(beta(&ZERO), 0.0);
        assert_relative_eq!(beta(&Quaternion::i()), 1.0, epsilon = 1e-15);
        assert_relative_eq!(beta(&ONE), 1.0 + 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn beta_n_values() {
        assert_eq!(beta_n(1.0, &ZERO, 3), 0.0);
        assert_relative_eq!(beta_n(1.0, &ONE, 1), 3f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn parse_literals() {
        let q: Quaternion = "0.5+0.5i".parse().unwrap();
        assert_eq!(q, Quaternion::new(0.5, 0.5, 0.0, 0.0));
        let q: Quaternion = "1-2k".parse().unwrap();
        assert_eq!(q, Quaternion::new(1.0, 0.0, 0.0, -2.0));
        let q: Quaternion = "-j".parse().unwrap();
        assert_eq!(q, Quaternion::new(0.0, 0.0, -1.0, 0.0));
        let q: Quaternion = "1e-2i".parse().unwrap();
        assert_eq!(q, Quaternion::new(0.0, 0.01, 0.0, 0.0));
        assert!("".parse::<Quaternion>().is_err());
        assert!("1+1".parse::<Quaternion>().is_err());
        assert!("abc".parse::<Quaternion>().is_err());
    }
}
