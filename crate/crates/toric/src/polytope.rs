//! The lattice polytope of an ample invariant divisor.
//!
//! P = { m : <m, u_i> >= -a_i for all i } is bounded for every complete fan.
//! When the divisor is ample, its vertices are the integral solutions of the
//! adjacent-pair systems, one per two-dimensional cone, and the edge between
//! m_{i-1} and m_i lies on the line <m, u_i> = -a_i. The normalized length
//! of that edge (its lattice point count minus one) equals the intersection
//! number with curve i; the module computes it independently from the vertex
//! coordinates and from the closed form and insists they agree.

use serde::{Deserialize, Serialize};

use crate::divisor::InvariantDivisor;
use crate::error::{Error, Result};
use crate::fan::CompleteSmoothFan;
use crate::lattice::{det2, dot, segment_lattice_count, solve_unimodular_pair, LatticeVector};

/// Polytope of an ample divisor: n integral vertices in counterclockwise
/// order, vertex i cut out by rays i and i+1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorPolytope<'f> {
    divisor: InvariantDivisor<'f>,
    vertices: Vec<LatticeVector>,
    facet_volumes: Vec<i64>,
}

/// Builds the polytope of an ample divisor; rejects non-ample input with the
/// failing curve as witness.
pub fn polytope_of<'f>(l: &InvariantDivisor<'f>) -> Result<DivisorPolytope<'f>> {
    let ampleness = l.ampleness()?;
    if let Some(witness) = ampleness.witness() {
        return Err(Error::NotAmple {
            witness,
            value: ampleness.kleiman()[witness],
        });
    }
    let fan = l.fan();
    let n = fan.ray_count();
    let mut vertices = Vec::with_capacity(n);
    for i in 0..n {
        let j = (i + 1) % n;
        vertices.push(solve_unimodular_pair(
            fan.ray(i),
            l.coeff(i),
            fan.ray(j),
            l.coeff(j),
        )?);
    }
    for &m in &vertices {
        for k in 0..n {
            let slack = dot(m, fan.ray(k))?
                .checked_add(l.coeff(k))
                .ok_or(Error::Overflow("half-plane check"))?;
            assert!(
                slack >= 0,
                "polytope vertex {m} violates half-plane {k} of an ample divisor"
            );
        }
    }
    // Strict convexity of the counterclockwise vertex cycle.
    for i in 0..n {
        let a = vertices[i].try_sub(vertices[(i + n - 1) % n])?;
        let b = vertices[(i + 1) % n].try_sub(vertices[i])?;
        assert!(
            det2(a, b)? > 0,
            "polytope vertex cycle of an ample divisor is not strictly convex at {i}"
        );
    }
    let facet_volumes = (0..n)
        .map(|i| {
            let count = segment_lattice_count(vertices[(i + n - 1) % n], vertices[i]);
            i64::try_from(count).map_err(|_| Error::Overflow("facet volume"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DivisorPolytope {
        divisor: l.clone(),
        vertices,
        facet_volumes,
    })
}

impl<'f> DivisorPolytope<'f> {
    pub fn divisor(&self) -> &InvariantDivisor<'f> {
        &self.divisor
    }

    pub fn vertices(&self) -> &[LatticeVector] {
        &self.vertices
    }

    /// Normalized lengths of the edges; entry i is the edge from vertex i-1
    /// to vertex i, counted from the vertex coordinates.
    pub fn facet_volumes(&self) -> &[i64] {
        &self.facet_volumes
    }

    /// Normalized length of facet i, computed from the closed form
    /// |a_{i+1} + a_{i-1} - gamma_i * a_i| and cross-checked against the
    /// lattice count stored at construction. Disagreement would mean a bug
    /// in this crate and aborts.
    pub fn facet_volume(&self, i: usize) -> Result<i64> {
        let n = self.vertices.len();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, rays: n });
        }
        let closed_form = self
            .divisor
            .intersect_curve(i)?
            .checked_abs()
            .ok_or(Error::Overflow("facet volume"))?;
        assert_eq!(
            closed_form, self.facet_volumes[i],
            "facet {i}: closed-form volume and vertex lattice count disagree"
        );
        Ok(closed_form)
    }
}

fn contains(fan: &CompleteSmoothFan, coeffs: &[i64], m: LatticeVector) -> Result<bool> {
    for (k, &a) in coeffs.iter().enumerate() {
        let slack = dot(m, fan.ray(k))?
            .checked_add(a)
            .ok_or(Error::Overflow("half-plane check"))?;
        if slack < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All lattice points of the polytope of an ample divisor, in lexicographic
/// order. Scans the bounding box of the vertices and keeps the points inside
/// every half-plane.
pub fn lattice_points(l: &InvariantDivisor<'_>) -> Result<Vec<LatticeVector>> {
    let polytope = polytope_of(l)?;
    let minx = polytope
        .vertices
        .iter()
        .map(|v| v.x)
        .min()
        .expect("nonempty");
    let maxx = polytope
        .vertices
        .iter()
        .map(|v| v.x)
        .max()
        .expect("nonempty");
    let miny = polytope
        .vertices
        .iter()
        .map(|v| v.y)
        .min()
        .expect("nonempty");
    let maxy = polytope
        .vertices
        .iter()
        .map(|v| v.y)
        .max()
        .expect("nonempty");
    let mut points = Vec::new();
    for x in minx..=maxx {
        for y in miny..=maxy {
            let m = LatticeVector::new(x, y);
            if contains(l.fan(), l.coeffs(), m)? {
                points.push(m);
            }
        }
    }
    Ok(points)
}

/// Diagnostic for arbitrary (not necessarily ample) divisors: for each i,
/// whether some lattice point of P attains <m, u_i> = -a_i. The polytope may
/// be lower-dimensional or empty here, so candidate bounds come from the
/// feasible rational intersections of pairs of facet lines, which cover all
/// vertices of P.
pub fn facet_has_lattice_point(l: &InvariantDivisor<'_>) -> Result<Vec<bool>> {
    let fan = l.fan();
    let n = fan.ray_count();
    let mut bounds: Option<(i128, i128, i128, i128)> = None;
    for i in 0..n {
        for j in i + 1..n {
            let (ui, uj) = (fan.ray(i), fan.ray(j));
            let d = i128::from(ui.x) * i128::from(uj.y) - i128::from(ui.y) * i128::from(uj.x);
            if d == 0 {
                continue;
            }
            // Cramer for <m, u_i> = -a_i, <m, u_j> = -a_j, times d.
            let (ai, aj) = (i128::from(l.coeff(i)), i128::from(l.coeff(j)));
            let px = aj * i128::from(ui.y) - ai * i128::from(uj.y);
            let py = ai * i128::from(uj.x) - aj * i128::from(ui.x);
            if !rational_point_feasible(fan, l.coeffs(), px, py, d)? {
                continue;
            }
            let xs = (div_floor(px, d), div_ceil(px, d));
            let ys = (div_floor(py, d), div_ceil(py, d));
            bounds = Some(match bounds {
                None => (xs.0, xs.1, ys.0, ys.1),
                Some((x0, x1, y0, y1)) => (x0.min(xs.0), x1.max(xs.1), y0.min(ys.0), y1.max(ys.1)),
            });
        }
    }
    // No feasible corner means P is empty.
    let Some((minx, maxx, miny, maxy)) = bounds else {
        return Ok(vec![false; n]);
    };
    let as_i64 = |v: i128| i64::try_from(v).map_err(|_| Error::Overflow("facet scan bounds"));
    let (minx, maxx, miny, maxy) = (as_i64(minx)?, as_i64(maxx)?, as_i64(miny)?, as_i64(maxy)?);
    let mut attained = vec![false; n];
    for x in minx..=maxx {
        for y in miny..=maxy {
            let m = LatticeVector::new(x, y);
            if !contains(fan, l.coeffs(), m)? {
                continue;
            }
            for (k, hit) in attained.iter_mut().enumerate() {
                if dot(m, fan.ray(k))?
                    .checked_add(l.coeff(k))
                    .ok_or(Error::Overflow("half-plane check"))?
                    == 0
                {
                    *hit = true;
                }
            }
        }
    }
    Ok(attained)
}

/// Whether the rational point (px/d, py/d) satisfies every half-plane.
fn rational_point_feasible(
    fan: &CompleteSmoothFan,
    coeffs: &[i64],
    px: i128,
    py: i128,
    d: i128,
) -> Result<bool> {
    for (k, &a_k) in coeffs.iter().enumerate() {
        let uk = fan.ray(k);
        let lhs = px
            .checked_mul(i128::from(uk.x))
            .and_then(|a| {
                py.checked_mul(i128::from(uk.y))
                    .and_then(|b| a.checked_add(b))
            })
            .ok_or(Error::Overflow("facet diagnostic"))?;
        let rhs = -i128::from(a_k) * d;
        let ok = if d > 0 { lhs >= rhs } else { lhs <= rhs };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

fn div_floor(a: i128, b: i128) -> i128 {
    num_integer::Integer::div_floor(&a, &b)
}

fn div_ceil(a: i128, b: i128) -> i128 {
    num_integer::Integer::div_ceil(&a, &b)
}

/// Brute-force normalized length of the segment [p, q]: scans the bounding
/// box for collinear points between the endpoints and counts them minus one.
/// Independent of the gcd route; quadratic in the extent, for checks only.
pub(crate) fn segment_points_brute(p: LatticeVector, q: LatticeVector) -> u64 {
    if p == q {
        return 0;
    }
    let (dx, dy) = (
        i128::from(q.x) - i128::from(p.x),
        i128::from(q.y) - i128::from(p.y),
    );
    let len2 = dx * dx + dy * dy;
    let mut count: u64 = 0;
    for x in p.x.min(q.x)..=p.x.max(q.x) {
        for y in p.y.min(q.y)..=p.y.max(q.y) {
            let (ex, ey) = (
                i128::from(x) - i128::from(p.x),
                i128::from(y) - i128::from(p.y),
            );
            let collinear = dx * ey - dy * ex == 0;
            let along = dx * ex + dy * ey;
            if collinear && 0 <= along && along <= len2 {
                count += 1;
            }
        }
    }
    count - 1
}

/// JSON interchange form: `{"vertices": [[x, y], ...], "facet_volumes": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeDocument {
    pub vertices: Vec<[i64; 2]>,
    pub facet_volumes: Vec<i64>,
}

impl From<&DivisorPolytope<'_>> for PolytopeDocument {
    fn from(p: &DivisorPolytope<'_>) -> Self {
        Self {
            vertices: p.vertices().iter().map(|v| [v.x, v.y]).collect(),
            facet_volumes: p.facet_volumes().to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::{log_anticanonical, InvariantDivisor, SupportSet};
    use crate::fan::{hirzebruch, projective_plane};

    fn v(x: i64, y: i64) -> LatticeVector {
        LatticeVector::new(x, y)
    }

    #[test]
    fn plane_anticanonical_triangle() {
        let p2 = projective_plane();
        let l = InvariantDivisor::anticanonical(&p2);
        let p = polytope_of(&l).unwrap();
        assert_eq!(p.vertices(), [v(-1, 2), v(-1, -1), v(2, -1)]);
        assert_eq!(p.facet_volumes(), [3, 3, 3]);
        for i in 0..3 {
            assert_eq!(p.facet_volume(i).unwrap(), 3);
            assert_eq!(p.facet_volume(i).unwrap(), l.intersect_curve(i).unwrap());
        }
    }

    #[test]
    fn hirzebruch_trapezoid() {
        let f1 = hirzebruch(1);
        let l = InvariantDivisor::new(&f1, vec![1, 2, 0, 1]).unwrap();
        let p = polytope_of(&l).unwrap();
        assert_eq!(p.vertices(), [v(-2, 1), v(-2, 0), v(1, 0), v(2, 1)]);
        assert_eq!(p.facet_volumes(), [4, 1, 3, 1]);
        assert_eq!(l.kleiman_vector().unwrap(), vec![4, 1, 3, 1]);
    }

    #[test]
    fn non_ample_divisor_is_rejected() {
        let p2 = projective_plane();
        let l = InvariantDivisor::zero(&p2);
        assert_eq!(
            polytope_of(&l).unwrap_err(),
            Error::NotAmple {
                witness: 0,
                value: 0
            }
        );
    }

    #[test]
    fn lattice_point_counts() {
        let p2 = projective_plane();
        let points = lattice_points(&InvariantDivisor::anticanonical(&p2)).unwrap();
        assert_eq!(points.len(), 10);

        let f0 = hirzebruch(0);
        let points = lattice_points(&InvariantDivisor::anticanonical(&f0)).unwrap();
        assert_eq!(points.len(), 9);
        // The unit square scaled by one in each direction: [-1,1]^2.
        assert!(points.iter().all(|m| m.x.abs() <= 1 && m.y.abs() <= 1));
    }

    #[test]
    fn facet_boundary_counts_match_volumes() {
        let f1 = hirzebruch(1);
        let l = InvariantDivisor::new(&f1, vec![1, 2, 0, 1]).unwrap();
        let p = polytope_of(&l).unwrap();
        let points = lattice_points(&l).unwrap();
        for i in 0..4 {
            let on_facet = points
                .iter()
                .filter(|m| dot(**m, f1.ray(i)).unwrap() == -l.coeff(i))
                .count() as i64;
            assert_eq!(on_facet, p.facet_volumes()[i] + 1);
        }
    }

    #[test]
    fn facet_diagnostic_on_degenerate_polytopes() {
        let p2 = projective_plane();
        // Zero divisor: P = {0}, every facet attains there.
        let l = InvariantDivisor::zero(&p2);
        assert_eq!(facet_has_lattice_point(&l).unwrap(), vec![true; 3]);
        // Infeasible constraints: P is empty.
        let l = InvariantDivisor::new(&p2, vec![-1, 0, 0]).unwrap();
        assert_eq!(facet_has_lattice_point(&l).unwrap(), vec![false; 3]);
        // Ample: every facet is a genuine edge.
        let l = InvariantDivisor::anticanonical(&p2);
        assert_eq!(facet_has_lattice_point(&l).unwrap(), vec![true; 3]);
    }

    #[test]
    fn facet_diagnostic_spots_a_slack_constraint() {
        let f = hirzebruch(0).blowup(0).unwrap();
        let delta = SupportSet::new(&f, [1, 3]).unwrap();
        let l = log_anticanonical(&f, &delta).unwrap();
        assert_eq!(
            facet_has_lattice_point(&l).unwrap(),
            vec![true, true, false, true, true]
        );
    }

    #[test]
    fn brute_segment_count_agrees_with_gcd() {
        let cases = [
            (v(0, 0), v(2, 4)),
            (v(-1, 2), v(-1, -1)),
            (v(3, 3), v(3, 3)),
            (v(-5, -2), v(7, 4)),
        ];
        for (p, q) in cases {
            assert_eq!(segment_points_brute(p, q), segment_lattice_count(p, q));
        }
    }

    #[test]
    fn polytope_document_round_trip() {
        let p2 = projective_plane();
        let l = InvariantDivisor::anticanonical(&p2);
        let p = polytope_of(&l).unwrap();
        let doc = PolytopeDocument::from(&p);
        let json = serde_json::to_string(&doc).unwrap();
        assert_eq!(
            json,
            r#"{"vertices":[[-1,2],[-1,-1],[2,-1]],"facet_volumes":[3,3,3]}"#
        );
        let back: PolytopeDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);
    }
}
