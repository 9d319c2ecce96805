//! Invariant divisors on a fan and their intersection theory.
//!
//! A divisor is a coefficient vector (a_0, ..., a_{n-1}) against the boundary
//! curves D_0, ..., D_{n-1} attached to the rays. The whole theory is linear
//! algebra over the gamma cycle: D_i.D_i = -gamma_i, adjacent curves meet
//! once, everything else is disjoint, and L.D_i = a_{i-1} + a_{i+1} -
//! gamma_i * a_i. Ampleness is exactly positivity of all n of these numbers,
//! so every verdict carries the full vector and, when negative, the index of
//! a failing curve as a certificate.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::CompleteSmoothFan;
use crate::lattice::{dot, solve_unimodular_pair, LatticeVector};

/// A torus-invariant divisor: one integer coefficient per ray of its fan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantDivisor<'f> {
    fan: &'f CompleteSmoothFan,
    coeffs: Vec<i64>,
}

impl<'f> InvariantDivisor<'f> {
    pub fn new(fan: &'f CompleteSmoothFan, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != fan.ray_count() {
            return Err(Error::CoefficientCount {
                got: coeffs.len(),
                expected: fan.ray_count(),
            });
        }
        Ok(Self { fan, coeffs })
    }

    pub fn zero(fan: &'f CompleteSmoothFan) -> Self {
        Self {
            fan,
            coeffs: vec![0; fan.ray_count()],
        }
    }

    /// The canonical divisor: every coefficient -1.
    pub fn canonical(fan: &'f CompleteSmoothFan) -> Self {
        Self {
            fan,
            coeffs: vec![-1; fan.ray_count()],
        }
    }

    /// The full anticanonical divisor: every coefficient 1.
    pub fn anticanonical(fan: &'f CompleteSmoothFan) -> Self {
        Self {
            fan,
            coeffs: vec![1; fan.ray_count()],
        }
    }

    pub fn fan(&self) -> &'f CompleteSmoothFan {
        self.fan
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs[i]
    }

    /// Componentwise difference; both divisors must live on the same fan.
    pub fn try_sub(&self, other: &InvariantDivisor<'f>) -> Result<InvariantDivisor<'f>> {
        if self.fan != other.fan {
            return Err(Error::FanMismatch);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| {
                a.checked_sub(*b)
                    .ok_or(Error::Overflow("divisor subtraction"))
            })
            .collect::<Result<_>>()?;
        Ok(InvariantDivisor {
            fan: self.fan,
            coeffs,
        })
    }

    /// The intersection number L.D_i = a_{i-1} + a_{i+1} - gamma_i * a_i.
    pub fn intersect_curve(&self, i: usize) -> Result<i64> {
        let n = self.fan.ray_count();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, rays: n });
        }
        let wrap = self.coeffs[(i + n - 1) % n]
            .checked_add(self.coeffs[(i + 1) % n])
            .ok_or(Error::Overflow("intersection number"))?;
        let diag = self
            .fan
            .gamma(i)
            .checked_mul(self.coeffs[i])
            .ok_or(Error::Overflow("intersection number"))?;
        wrap.checked_sub(diag)
            .ok_or(Error::Overflow("intersection number"))
    }

    /// All n intersection numbers L.D_i.
    pub fn kleiman_vector(&self) -> Result<Vec<i64>> {
        (0..self.fan.ray_count())
            .map(|i| self.intersect_curve(i))
            .collect()
    }

    /// Ample iff L.D_i > 0 for every boundary curve. The verdict carries the
    /// full vector; when not ample, also the first failing index.
    pub fn ampleness(&self) -> Result<Ampleness> {
        let kleiman = self.kleiman_vector()?;
        let witness = kleiman.iter().position(|&k| k <= 0);
        Ok(Ampleness { kleiman, witness })
    }
}

/// Outcome of an ampleness test, with the evidence that decided it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ampleness {
    kleiman: Vec<i64>,
    witness: Option<usize>,
}

impl Ampleness {
    pub fn is_ample(&self) -> bool {
        self.witness.is_none()
    }

    pub fn kleiman(&self) -> &[i64] {
        &self.kleiman
    }

    /// Index of the first curve with L.D_i <= 0, present iff not ample.
    pub fn witness(&self) -> Option<usize> {
        self.witness
    }
}

/// The n x n matrix of D_i.D_j: diagonal -gamma_i, 1 for neighbouring rays
/// (indices mod n, so for n = 3 every off-diagonal entry is 1), 0 elsewhere.
pub fn intersection_matrix(fan: &CompleteSmoothFan) -> Vec<Vec<i64>> {
    let n = fan.ray_count();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        -fan.gamma(i)
                    } else if j == (i + 1) % n || j == (i + n - 1) % n {
                        1
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect()
}

/// The divisor of the character with exponent m: coefficients <m, u_i>.
pub fn principal_divisor(
    fan: &CompleteSmoothFan,
    m: LatticeVector,
) -> Result<InvariantDivisor<'_>> {
    let coeffs = fan
        .rays()
        .iter()
        .map(|&u| dot(m, u))
        .collect::<Result<Vec<_>>>()?;
    InvariantDivisor::new(fan, coeffs)
}

/// Decides whether a - b is principal. The difference determines a candidate
/// exponent m on the unimodular pair (u_0, u_1); the divisors are equivalent
/// iff m matches the remaining coordinates too. Returns the witness exponent.
pub fn linearly_equivalent(
    a: &InvariantDivisor<'_>,
    b: &InvariantDivisor<'_>,
) -> Result<Option<LatticeVector>> {
    let d = a.try_sub(b)?;
    let fan = a.fan();
    let neg = |x: i64| x.checked_neg().ok_or(Error::Overflow("equivalence test"));
    let m = solve_unimodular_pair(fan.ray(0), neg(d.coeff(0))?, fan.ray(1), neg(d.coeff(1))?)?;
    for i in 2..fan.ray_count() {
        if dot(m, fan.ray(i))? != d.coeff(i) {
            return Ok(None);
        }
    }
    Ok(Some(m))
}

/// A set of ray indices marking which boundary curves belong to the pair's
/// reduced boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportSet {
    rays: usize,
    indices: BTreeSet<usize>,
}

impl SupportSet {
    pub fn new(fan: &CompleteSmoothFan, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let rays = fan.ray_count();
        let indices: BTreeSet<usize> = indices.into_iter().collect();
        if let Some(&index) = indices.iter().find(|&&i| i >= rays) {
            return Err(Error::IndexOutOfRange { index, rays });
        }
        Ok(Self { rays, indices })
    }

    /// Subset from a bitmask: bit i marks ray i. Requires at most 32 rays.
    pub fn from_mask(fan: &CompleteSmoothFan, mask: u32) -> Result<Self> {
        let rays = fan.ray_count();
        if rays > 32 {
            return Err(Error::InvalidArgument(format!(
                "bitmask subsets support at most 32 rays, fan has {rays}"
            )));
        }
        if rays < 32 && mask >= 1 << rays {
            let index = (31 - mask.leading_zeros()) as usize;
            return Err(Error::IndexOutOfRange { index, rays });
        }
        Ok(Self {
            rays,
            indices: (0..rays).filter(|i| mask & (1 << i) != 0).collect(),
        })
    }

    pub fn mask(&self) -> u32 {
        self.indices.iter().fold(0, |m, &i| m | (1 << i))
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.contains(&i)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn ray_count(&self) -> usize {
        self.rays
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// The log anticanonical divisor of the pair with reduced boundary `delta`:
/// coefficient 0 on the boundary curves in delta, 1 on the rest.
pub fn log_anticanonical<'f>(
    fan: &'f CompleteSmoothFan,
    delta: &SupportSet,
) -> Result<InvariantDivisor<'f>> {
    if delta.ray_count() != fan.ray_count() {
        return Err(Error::FanMismatch);
    }
    let coeffs = (0..fan.ray_count())
        .map(|i| i64::from(!delta.contains(i)))
        .collect();
    InvariantDivisor::new(fan, coeffs)
}

/// JSON interchange fragment for a divisor: `{"coeffs": [a0, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorDocument {
    pub coeffs: Vec<i64>,
}

/// JSON interchange fragment for a support set: `{"delta": [i, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportDocument {
    pub delta: Vec<usize>,
}
