//! Plane lattice primitives: checked 2x2 determinants, primitivity, lattice
//! point counts on segments, and the inverse of a unimodular pair.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of Z^2. Plain data; all arithmetic on it is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticeVector {
    pub x: i64,
    pub y: i64,
}

impl LatticeVector {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    pub fn try_add(self, other: Self) -> Result<Self> {
        Ok(Self::new(
            self.x
                .checked_add(other.x)
                .ok_or(Error::Overflow("vector addition"))?,
            self.y
                .checked_add(other.y)
                .ok_or(Error::Overflow("vector addition"))?,
        ))
    }

    pub fn try_sub(self, other: Self) -> Result<Self> {
        Ok(Self::new(
            self.x
                .checked_sub(other.x)
                .ok_or(Error::Overflow("vector subtraction"))?,
            self.y
                .checked_sub(other.y)
                .ok_or(Error::Overflow("vector subtraction"))?,
        ))
    }

    pub fn try_scale(self, k: i64) -> Result<Self> {
        Ok(Self::new(
            self.x
                .checked_mul(k)
                .ok_or(Error::Overflow("vector scaling"))?,
            self.y
                .checked_mul(k)
                .ok_or(Error::Overflow("vector scaling"))?,
        ))
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub(crate) const E1: LatticeVector = LatticeVector::new(1, 0);
pub(crate) const E2: LatticeVector = LatticeVector::new(0, 1);

/// det(u, v) = u.x * v.y - u.y * v.x. Positive iff (u, v) is counterclockwise.
pub fn det2(u: LatticeVector, v: LatticeVector) -> Result<i64> {
    let a = u.x.checked_mul(v.y).ok_or(Error::Overflow("determinant"))?;
    let b = u.y.checked_mul(v.x).ok_or(Error::Overflow("determinant"))?;
    a.checked_sub(b).ok_or(Error::Overflow("determinant"))
}

/// Pairing <m, u> = m.x * u.x + m.y * u.y.
pub fn dot(m: LatticeVector, u: LatticeVector) -> Result<i64> {
    let a = m.x.checked_mul(u.x).ok_or(Error::Overflow("pairing"))?;
    let b = m.y.checked_mul(u.y).ok_or(Error::Overflow("pairing"))?;
    a.checked_add(b).ok_or(Error::Overflow("pairing"))
}

/// A vector is primitive when its coordinates are coprime. The zero vector
/// is not primitive (gcd 0).
pub fn is_primitive(u: LatticeVector) -> bool {
    u.x.unsigned_abs().gcd(&u.y.unsigned_abs()) == 1
}

/// Number of lattice points on the closed segment [p, q] minus one, i.e.
/// gcd(|dx|, |dy|). Zero when p = q. Total: `abs_diff` cannot overflow, so
/// the result is exact even across the full i64 range.
pub fn segment_lattice_count(p: LatticeVector, q: LatticeVector) -> u64 {
    p.x.abs_diff(q.x).gcd(&p.y.abs_diff(q.y))
}

/// For a positively oriented basis (u, v), the unique m with <m, u> = -a and
/// <m, v> = -b, namely m = (b*u.y - a*v.y, -b*u.x + a*v.x).
pub fn solve_unimodular_pair(
    u: LatticeVector,
    a: i64,
    v: LatticeVector,
    b: i64,
) -> Result<LatticeVector> {
    let det = det2(u, v)?;
    if det != 1 {
        return Err(Error::NotUnimodular { det });
    }
    let mul = |p: i64, q: i64| p.checked_mul(q).ok_or(Error::Overflow("unimodular solve"));
    let x = mul(b, u.y)?
        .checked_sub(mul(a, v.y)?)
        .ok_or(Error::Overflow("unimodular solve"))?;
    let y = mul(a, v.x)?
        .checked_sub(mul(b, u.x)?)
        .ok_or(Error::Overflow("unimodular solve"))?;
    Ok(LatticeVector::new(x, y))
}
