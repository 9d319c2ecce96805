//! Complete smooth fans in Z^2.
//!
//! A fan is a cyclic list of primitive rays u_0, ..., u_{n-1} in
//! counterclockwise order with det(u_i, u_{i+1}) = 1 for every adjacent pair
//! and total winding number 1 around the origin. Each ray carries the integer
//! gamma_i = det(u_{i-1}, u_{i+1}), the unique coefficient with
//! u_{i-1} - gamma_i * u_i + u_{i+1} = 0; gamma_i is the negative
//! self-intersection of the boundary curve attached to u_i. The gamma cycle
//! determines the fan up to a lattice automorphism, which makes it both a
//! reconstruction recipe and a canonical key for enumeration.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{det2, is_primitive, LatticeVector, E1, E2};

/// Cyclic integer sequence of length >= 3: the gamma values of a fan, or a
/// candidate to rebuild one from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaSequence(Vec<i64>);

impl GammaSequence {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.len() < 3 {
            return Err(Error::GammaTooShort(entries.len()));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for GammaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

/// True for the upper half plane plus the positive x-axis. A ray cycle in
/// counterclockwise order crosses from outside this region into it exactly
/// once per revolution, which turns the winding number into a count.
fn in_upper(u: LatticeVector) -> bool {
    u.y > 0 || (u.y == 0 && u.x > 0)
}

fn upward_crossing(from: LatticeVector, to: LatticeVector) -> usize {
    usize::from(!in_upper(from) && in_upper(to))
}

fn winding_count(rays: &[LatticeVector]) -> usize {
    (0..rays.len())
        .map(|i| upward_crossing(rays[i], rays[(i + 1) % rays.len()]))
        .sum()
}

/// A validated fan of a complete smooth toric surface. Construction goes
/// through [`CompleteSmoothFan::validate`], so every value of this type
/// satisfies all cycle invariants; the gamma values are computed once there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteSmoothFan {
    rays: Vec<LatticeVector>,
    gammas: Vec<i64>,
}

impl CompleteSmoothFan {
    /// Checks, in order: ray count, primitivity, unit determinants of
    /// adjacent pairs, winding number 1, pairwise distinctness. Distinctness
    /// is implied by the determinant and winding invariants but asserted
    /// independently. The first violated invariant is reported.
    pub fn validate(rays: Vec<LatticeVector>) -> Result<Self> {
        let n = rays.len();
        if n < 3 {
            return Err(Error::TooFewRays(n));
        }
        for (index, &ray) in rays.iter().enumerate() {
            if !is_primitive(ray) {
                return Err(Error::NonPrimitiveRay { index, ray });
            }
        }
        for index in 0..n {
            let det = det2(rays[index], rays[(index + 1) % n])?;
            if det != 1 {
                return Err(Error::NonUnitDeterminant { index, det });
            }
        }
        let winding = winding_count(&rays);
        if winding != 1 {
            return Err(Error::WrongWinding(winding));
        }
        for first in 0..n {
            for second in first + 1..n {
                if rays[first] == rays[second] {
                    return Err(Error::DuplicateRay { first, second });
                }
            }
        }
        let mut gammas = Vec::with_capacity(n);
        for i in 0..n {
            let g = det2(rays[(i + n - 1) % n], rays[(i + 1) % n])?;
            if g == i64::MIN {
                // Keep -gamma representable so intersection numbers never trap.
                return Err(Error::Overflow("gamma computation"));
            }
            gammas.push(g);
        }
        Ok(Self { rays, gammas })
    }

    /// Rebuilds rays from a gamma cycle via u_{i+1} = gamma_i * u_i - u_{i-1},
    /// seeded with u_0 = (1, 0), u_1 = (0, 1). Succeeds iff the recurrence
    /// returns to u_0, the unused first entry matches the rays it produced,
    /// and the result validates. The resulting fan's gamma cycle equals the
    /// input, and any fan with this gamma cycle is lattice-equivalent to it.
    pub fn from_gamma_sequence(g: &GammaSequence) -> Result<Self> {
        let gs = g.entries();
        let n = gs.len();
        let mut rays = Vec::with_capacity(n + 1);
        rays.push(E1);
        rays.push(E2);
        for i in 1..n {
            let next = rays[i].try_scale(gs[i])?.try_sub(rays[i - 1])?;
            rays.push(next);
        }
        let endpoint = rays.pop().expect("recurrence produced n+1 rays");
        if endpoint != rays[0] {
            return Err(Error::NotClosed { endpoint });
        }
        let seed = rays[0].try_scale(gs[0])?.try_sub(rays[n - 1])?;
        if seed != rays[1] {
            let forced = det2(rays[n - 1], rays[1])?;
            return Err(Error::GammaMismatch {
                index: 0,
                given: gs[0],
                forced,
            });
        }
        let fan = Self::validate(rays)?;
        debug_assert_eq!(fan.gammas, gs);
        Ok(fan)
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> LatticeVector {
        self.rays[i]
    }

    pub fn gamma(&self, i: usize) -> i64 {
        self.gammas[i]
    }

    pub fn gamma_sequence(&self) -> GammaSequence {
        GammaSequence(self.gammas.clone())
    }

    /// Rank of the divisor class group: n - 2.
    pub fn picard_rank(&self) -> usize {
        self.rays.len() - 2
    }

    /// Inserts u_i + u_{i+1} between positions i and i+1 (indices mod n);
    /// the new ray lands at index i+1 and has gamma 1.
    pub fn blowup(&self, i: usize) -> Result<Self> {
        let n = self.rays.len();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, rays: n });
        }
        let inserted = self.rays[i].try_add(self.rays[(i + 1) % n])?;
        let mut rays = self.rays.clone();
        rays.insert(i + 1, inserted);
        Self::validate(rays)
    }

    /// Removes ray i; requires gamma_i = 1 (so u_i = u_{i-1} + u_{i+1} and
    /// the neighbours close up smoothly) and at least 4 rays.
    pub fn blowdown(&self, i: usize) -> Result<Self> {
        let n = self.rays.len();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, rays: n });
        }
        if n == 3 {
            return Err(Error::BlowdownMinimal);
        }
        if self.gammas[i] != 1 {
            return Err(Error::BlowdownObstructed {
                index: i,
                gamma: self.gammas[i],
            });
        }
        let mut rays = self.rays.clone();
        rays.remove(i);
        Self::validate(rays)
    }

    /// Lexicographically smallest cyclic rotation of the gamma cycle or of
    /// its reversal. Two fans have equal keys iff a lattice automorphism
    /// maps one onto the other: rotations come from relabelling the starting
    /// ray, the reversal from orientation-reversing maps.
    pub fn canonical_key(&self) -> GammaSequence {
        let n = self.gammas.len();
        let reversed: Vec<i64> = self.gammas.iter().rev().copied().collect();
        let mut best: Option<Vec<i64>> = None;
        for seq in [&self.gammas, &reversed] {
            for start in 0..n {
                let candidate: Vec<i64> = (0..n).map(|k| seq[(start + k) % n]).collect();
                if best.as_ref().is_none_or(|b| candidate < *b) {
                    best = Some(candidate);
                }
            }
        }
        GammaSequence(best.expect("fan has at least 3 rays"))
    }
}

/// The fan of the projective plane: rays (-1,-1), (1,0), (0,1); every gamma
/// is -1.
pub fn projective_plane() -> CompleteSmoothFan {
    CompleteSmoothFan::validate(vec![LatticeVector::new(-1, -1), E1, E2])
        .expect("the projective plane fan is valid")
}

/// The fan of the Hirzebruch surface with parameter r: rays (0,-1), (1,0),
/// (0,1), (-1,r); gamma cycle (-r, 0, r, 0).
pub fn hirzebruch(r: u32) -> CompleteSmoothFan {
    CompleteSmoothFan::validate(vec![
        LatticeVector::new(0, -1),
        E1,
        E2,
        LatticeVector::new(-1, i64::from(r)),
    ])
    .expect("the Hirzebruch fan is valid for every parameter")
}

/// All complete smooth fans with exactly `n` rays and every |gamma_i| <=
/// `gamma_bound`, as canonical keys, sorted. The bound makes the search
/// finite (the Hirzebruch family alone is unbounded); results are complete
/// within the bound.
///
/// The search walks ray chains seeded with (1,0), (0,1), choosing the gamma
/// value at each step. Any fan within the bound shows up for the seed pair
/// placed at each of its edges, so deduplication by canonical key yields
/// every lattice-equivalence class exactly once.
pub fn enumerate_fans(n: usize, gamma_bound: i64) -> Result<Vec<GammaSequence>> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "enumeration needs at least 3 rays, got {n}"
        )));
    }
    if gamma_bound < 0 {
        return Err(Error::InvalidArgument(format!(
            "gamma bound must be nonnegative, got {gamma_bound}"
        )));
    }
    let mut keys = BTreeSet::new();
    let mut rays = vec![E1, E2];
    search(n, gamma_bound, 0, 0, &mut rays, &mut keys);
    Ok(keys.into_iter().collect())
}

fn search(
    n: usize,
    bound: i64,
    winding: usize,
    gamma_sum: i64,
    rays: &mut Vec<LatticeVector>,
    keys: &mut BTreeSet<GammaSequence>,
) {
    if rays.len() == n {
        finalize(bound, rays, keys);
        return;
    }
    // Realizable fans satisfy sum(gamma) = 3n - 12; prune branches that
    // cannot bridge the gap with the remaining entries (the two entries at
    // the seam are determined later but still bounded).
    let target = 3 * (n as i64) - 12;
    let open_slots = (n - rays.len()) as i64 + 2;
    if (target - gamma_sum).abs() > open_slots * bound {
        return;
    }
    let prev = rays[rays.len() - 2];
    let cur = rays[rays.len() - 1];
    for g in -bound..=bound {
        // Overflow means the branch left any realizable range: prune it.
        let Ok(scaled) = cur.try_scale(g) else {
            continue;
        };
        let Ok(next) = scaled.try_sub(prev) else {
            continue;
        };
        // A repeated direction can never close with winding number 1.
        if rays.contains(&next) {
            continue;
        }
        let winding = winding + upward_crossing(cur, next);
        if winding > 1 {
            continue;
        }
        rays.push(next);
        search(n, bound, winding, gamma_sum + g, rays, keys);
        rays.pop();
    }
}

fn finalize(bound: i64, rays: &[LatticeVector], keys: &mut BTreeSet<GammaSequence>) {
    let n = rays.len();
    // Cheap seam check before the full validation.
    if det2(rays[n - 1], rays[0]) != Ok(1) {
        return;
    }
    let Ok(fan) = CompleteSmoothFan::validate(rays.to_vec()) else {
        return;
    };
    // Chosen entries respect the bound by construction; the two seam
    // entries must be checked.
    if fan.gammas[0].abs() > bound || fan.gammas[n - 1].abs() > bound {
        return;
    }
    keys.insert(fan.canonical_key());
}

/// JSON interchange form of a fan: `{"rays": [[x, y], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanDocument {
    pub rays: Vec<[i64; 2]>,
}

impl FanDocument {
    pub fn from_fan(fan: &CompleteSmoothFan) -> Self {
        Self {
            rays: fan.rays().iter().map(|u| [u.x, u.y]).collect(),
        }
    }

    pub fn into_fan(self) -> Result<CompleteSmoothFan> {
        CompleteSmoothFan::validate(
            self.rays
                .into_iter()
                .map(|[x, y]| LatticeVector::new(x, y))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64, y: i64) -> LatticeVector {
        LatticeVector::new(x, y)
    }

    fn fan(rays: &[(i64, i64)]) -> CompleteSmoothFan {
        CompleteSmoothFan::validate(rays.iter().map(|&(x, y)| v(x, y)).collect()).unwrap()
    }

    fn gamma(entries: &[i64]) -> GammaSequence {
        GammaSequence::new(entries.to_vec()).unwrap()
    }

    #[test]
    fn validates_projective_plane_and_hirzebruch() {
        assert_eq!(projective_plane().gamma_sequence(), gamma(&[-1, -1, -1]));
        assert_eq!(projective_plane().picard_rank(), 1);
        for r in 0..6 {
            let f = hirzebruch(r);
            let r = i64::from(r);
            assert_eq!(f.gamma_sequence(), gamma(&[-r, 0, r, 0]));
            assert_eq!(f.picard_rank(), 2);
        }
    }

    #[test]
    fn rejects_too_few_rays() {
        let err = CompleteSmoothFan::validate(vec![v(1, 0), v(0, 1)]).unwrap_err();
        assert_eq!(err, Error::TooFewRays(2));
    }

    #[test]
    fn rejects_non_primitive_ray() {
        let err = CompleteSmoothFan::validate(vec![v(2, 4), v(0, 1), v(-1, -1)]).unwrap_err();
        assert_eq!(
            err,
            Error::NonPrimitiveRay {
                index: 0,
                ray: v(2, 4)
            }
        );
    }

    #[test]
    fn rejects_clockwise_listing() {
        // The projective plane fan listed clockwise: adjacent determinants -1.
        let err = CompleteSmoothFan::validate(vec![v(0, 1), v(1, 0), v(-1, -1)]).unwrap_err();
        assert_eq!(err, Error::NonUnitDeterminant { index: 0, det: -1 });
    }

    #[test]
    fn rejects_doubled_cover_by_winding() {
        let square = [v(1, 0), v(0, 1), v(-1, -1), v(0, -1)];
        let doubled: Vec<_> = square.iter().chain(square.iter()).copied().collect();
        let err = CompleteSmoothFan::validate(doubled).unwrap_err();
        assert_eq!(err, Error::WrongWinding(2));
    }

    #[test]
    fn gamma_of_blown_up_plane() {
        let f = fan(&[(-1, -1), (1, 0), (1, 1), (0, 1)]);
        assert_eq!(f.gamma_sequence(), gamma(&[-1, 0, 1, 0]));
    }

    #[test]
    fn gamma_relation_holds_componentwise() {
        for f in [
            projective_plane(),
            hirzebruch(3),
            fan(&[(-1, -1), (1, 0), (1, 1), (0, 1)]),
        ] {
            let n = f.ray_count();
            for i in 0..n {
                let rebuilt = f
                    .ray(i)
                    .try_scale(f.gamma(i))
                    .unwrap()
                    .try_sub(f.ray((i + n - 1) % n))
                    .unwrap();
                assert_eq!(rebuilt, f.ray((i + 1) % n));
            }
        }
    }

    #[test]
    fn reconstruction_round_trips() {
        for g in [
            gamma(&[-1, -1, -1]),
            gamma(&[0, 0, 0, 0]),
            gamma(&[-2, 0, 2, 0]),
            gamma(&[1, 1, 1, 0, 0]),
        ] {
            let f = CompleteSmoothFan::from_gamma_sequence(&g).unwrap();
            assert_eq!(f.gamma_sequence(), g);
        }
    }

    #[test]
    fn reconstruction_of_all_zero_gamma_is_the_product_of_lines() {
        let f = CompleteSmoothFan::from_gamma_sequence(&gamma(&[0, 0, 0, 0])).unwrap();
        assert_eq!(f.rays(), [v(1, 0), v(0, 1), v(-1, 0), v(0, -1)]);
        assert_eq!(f.canonical_key(), hirzebruch(0).canonical_key());
    }

    #[test]
    fn reconstruction_detects_open_cycles() {
        assert_eq!(
            CompleteSmoothFan::from_gamma_sequence(&gamma(&[0, 0, 0])).unwrap_err(),
            Error::NotClosed { endpoint: v(0, -1) }
        );
        assert_eq!(
            CompleteSmoothFan::from_gamma_sequence(&gamma(&[1, 1, 1])).unwrap_err(),
            Error::NotClosed { endpoint: v(-1, 0) }
        );
    }

    #[test]
    fn reconstruction_detects_inconsistent_first_entry() {
        assert_eq!(
            CompleteSmoothFan::from_gamma_sequence(&gamma(&[5, -1, -1])).unwrap_err(),
            Error::GammaMismatch {
                index: 0,
                given: 5,
                forced: -1
            }
        );
    }

    #[test]
    fn reconstruction_rejects_consistent_double_cover() {
        let err =
            CompleteSmoothFan::from_gamma_sequence(&gamma(&[0, 0, 0, 0, 0, 0, 0, 0])).unwrap_err();
        assert_eq!(err, Error::WrongWinding(2));
    }

    #[test]
    fn blowup_of_plane_gives_first_hirzebruch() {
        let f = projective_plane().blowup(1).unwrap();
        assert_eq!(f.ray_count(), 4);
        assert_eq!(f.gamma(2), 1);
        assert_eq!(f.canonical_key(), hirzebruch(1).canonical_key());
    }

    #[test]
    fn blowup_positions_are_cyclic() {
        let f = hirzebruch(0);
        let g = f.blowup(3).unwrap();
        assert_eq!(g.ray_count(), 5);
        assert_eq!(g.ray(4), v(-1, -1));
        assert_eq!(g.gamma(4), 1);
    }

    #[test]
    fn blowdown_restores_plane() {
        let f = fan(&[(-1, -1), (1, 0), (1, 1), (0, 1)]);
        let g = f.blowdown(2).unwrap();
        assert_eq!(g.rays(), projective_plane().rays());
    }

    #[test]
    fn blowdown_rejections() {
        assert_eq!(
            projective_plane().blowdown(0).unwrap_err(),
            Error::BlowdownMinimal
        );
        assert_eq!(
            hirzebruch(2).blowdown(1).unwrap_err(),
            Error::BlowdownObstructed { index: 1, gamma: 0 }
        );
    }

    #[test]
    fn blowdown_undoes_blowup() {
        let f = hirzebruch(3);
        for i in 0..f.ray_count() {
            let g = f.blowup(i).unwrap();
            assert_eq!(g.blowdown(i + 1).unwrap().rays(), f.rays());
        }
    }

    #[test]
    fn canonical_key_ignores_rotation_and_reflection() {
        let f2 = hirzebruch(2);
        let rotated = fan(&[(0, 1), (-1, 2), (0, -1), (1, 0)]);
        assert_eq!(rotated.gamma_sequence(), gamma(&[2, 0, -2, 0]));
        assert_eq!(rotated.canonical_key(), f2.canonical_key());
        assert_eq!(f2.canonical_key(), gamma(&[-2, 0, 2, 0]));
        // Blowing up the plane at any edge gives the same surface.
        let keys: BTreeSet<_> = (0..3)
            .map(|i| projective_plane().blowup(i).unwrap().canonical_key())
            .collect();
        assert_eq!(keys.len(), 1);
    }

    #[test]
    fn enumerate_smallest_cases() {
        assert_eq!(enumerate_fans(3, 3).unwrap(), vec![gamma(&[-1, -1, -1])]);
        assert_eq!(
            enumerate_fans(4, 3).unwrap(),
            vec![
                gamma(&[-3, 0, 3, 0]),
                gamma(&[-2, 0, 2, 0]),
                gamma(&[-1, 0, 1, 0]),
                gamma(&[0, 0, 0, 0]),
            ]
        );
        assert_eq!(enumerate_fans(4, 0).unwrap(), vec![gamma(&[0, 0, 0, 0])]);
        assert_eq!(enumerate_fans(5, 1).unwrap(), vec![gamma(&[0, 0, 1, 1, 1])]);
    }

    #[test]
    fn enumerate_rejects_bad_arguments() {
        assert!(matches!(
            enumerate_fans(2, 3),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            enumerate_fans(4, -1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn enumerated_keys_reconstruct_to_themselves() {
        for n in 3..=6 {
            for key in enumerate_fans(n, 3).unwrap() {
                let f = CompleteSmoothFan::from_gamma_sequence(&key).unwrap();
                assert_eq!(f.ray_count(), n);
                assert_eq!(f.canonical_key(), key);
                assert_eq!(key.sum(), 3 * (n as i64) - 12);
            }
        }
    }

    #[test]
    fn fan_document_round_trip() {
        let f = hirzebruch(2);
        let doc = FanDocument::from_fan(&f);
        let json = serde_json::to_string(&doc).unwrap();
        assert_eq!(json, r#"{"rays":[[0,-1],[1,0],[0,1],[-1,2]]}"#);
        let back: FanDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_fan().unwrap(), f);
    }
}
