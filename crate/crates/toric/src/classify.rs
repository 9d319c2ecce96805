//! Classification of boundary pairs and the executable verification suites.
//!
//! A pair is a fan together with a subset of its boundary curves; the pair is
//! del Pezzo when its log anticanonical divisor is ample. [`classify_pairs`]
//! decides this for every subset of a fan from the Kleiman vector alone, one
//! verdict per subset with no shortcuts, and the `verify_*` suites replay the
//! known classification facts against those verdicts: the seven ample subsets
//! on the projective plane, the per-parameter case table on the Hirzebruch
//! surfaces, the emptiness of the ample locus over nonempty subsets once the
//! Picard rank reaches three, and the identity between facet volumes and
//! intersection numbers on random ample divisors.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::divisor::{log_anticanonical, InvariantDivisor, SupportSet};
use crate::error::{Error, Result};
use crate::fan::{enumerate_fans, hirzebruch, projective_plane, CompleteSmoothFan, GammaSequence};
use crate::polytope::{polytope_of, segment_points_brute};

/// Verdict for one boundary subset: the subset, the Kleiman vector of its log
/// anticanonical divisor, and whether every entry is positive. `witness` is
/// the first non-positive index, present exactly when not ample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationRecord {
    pub delta: SupportSet,
    pub ample: bool,
    pub kleiman: Vec<i64>,
    pub witness: Option<usize>,
}

/// One record per subset of the boundary curves, in bitmask order (bit i
/// marks ray i), so the output is a deterministic function of the ray
/// sequence. The empty subset comes first and is the bare del Pezzo case.
/// Refuses fans with more than 20 rays: the table has 2^n rows.
pub fn classify_pairs(fan: &CompleteSmoothFan) -> Result<Vec<ClassificationRecord>> {
    let n = fan.ray_count();
    if n > 20 {
        return Err(Error::TooManyRays(n));
    }
    let mut records = Vec::with_capacity(1 << n);
    for mask in 0..(1u32 << n) {
        let delta = SupportSet::from_mask(fan, mask)?;
        let ampleness = log_anticanonical(fan, &delta)?.ampleness()?;
        records.push(ClassificationRecord {
            delta,
            ample: ampleness.is_ample(),
            kleiman: ampleness.kleiman().to_vec(),
            witness: ampleness.witness(),
        });
    }
    Ok(records)
}

/// A counterexample found by a verification suite, with everything needed to
/// replay it: the fan key, the subset (when the check was about one), the
/// divisor coefficients, its Kleiman vector, and the failing curve if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationFailure {
    pub fan_key: GammaSequence,
    pub delta: Option<SupportSet>,
    pub coeffs: Vec<i64>,
    pub kleiman: Vec<i64>,
    pub witness: Option<usize>,
    pub detail: String,
}

/// Outcome of a verification suite: what was checked, how much of it, and
/// every counterexample (none on PASS).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub name: String,
    pub scope: String,
    pub fans_examined: Option<u64>,
    pub verdicts_checked: u64,
    pub failures: Vec<VerificationFailure>,
}

impl VerificationReport {
    fn new(name: impl Into<String>, scope: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            scope: scope.into(),
            fans_examined: None,
            verdicts_checked: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite: {}", self.name)?;
        writeln!(f, "scope: {}", self.scope)?;
        if let Some(fans) = self.fans_examined {
            writeln!(f, "fans examined: {fans}")?;
        }
        writeln!(f, "verdicts checked: {}", self.verdicts_checked)?;
        if self.passed() {
            write!(f, "result: PASS")
        } else {
            writeln!(f, "result: FAIL (counterexamples: {})", self.failures.len())?;
            let c = &self.failures[0];
            writeln!(f, "first counterexample:")?;
            writeln!(f, "  fan: {}", c.fan_key)?;
            if let Some(delta) = &c.delta {
                writeln!(f, "  delta: {delta}")?;
            }
            writeln!(f, "  coeffs: {:?}", c.coeffs)?;
            writeln!(f, "  kleiman: {:?}", c.kleiman)?;
            if let Some(witness) = c.witness {
                writeln!(f, "  witness: {witness}")?;
            }
            write!(f, "  detail: {}", c.detail)
        }
    }
}

/// Classifies `fan` and compares every verdict against an expected set of
/// ample bitmasks, recording one failure per mismatch.
fn check_expected_masks(
    fan: &CompleteSmoothFan,
    label: &str,
    expected_ample: &BTreeSet<u32>,
    report: &mut VerificationReport,
) -> Result<()> {
    let key = fan.canonical_key();
    for record in classify_pairs(fan)? {
        report.verdicts_checked += 1;
        let expected = expected_ample.contains(&record.delta.mask());
        if record.ample != expected {
            let verdict = |ample| if ample { "ample" } else { "not ample" };
            let detail = format!(
                "{label}: delta {} expected {}, classified {}",
                record.delta,
                verdict(expected),
                verdict(record.ample)
            );
            report.failures.push(VerificationFailure {
                fan_key: key.clone(),
                coeffs: log_anticanonical(fan, &record.delta)?.coeffs().to_vec(),
                delta: Some(record.delta),
                kleiman: record.kleiman,
                witness: record.witness,
                detail,
            });
        }
    }
    Ok(())
}

fn check_projective_plane_against(expected_ample: &BTreeSet<u32>) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(
        "projective plane boundary pairs",
        "all 8 boundary subsets on the projective plane",
    );
    check_expected_masks(
        &projective_plane(),
        "projective plane",
        expected_ample,
        &mut report,
    )?;
    report.fans_examined = Some(1);
    Ok(report)
}

/// The del Pezzo subsets on the projective plane are exactly those with at
/// most two of the three boundary lines; removing all three leaves the zero
/// divisor. Checks all 8 subsets against that list.
pub fn verify_projective_plane() -> Result<VerificationReport> {
    let expected: BTreeSet<u32> = [0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110]
        .into_iter()
        .collect();
    check_projective_plane_against(&expected)
}

/// Expected verdict for the boundary subset `mask` on F_r, from the Kleiman
/// numbers k_0 = a_1 + a_3 + r*a_0, k_1 = k_3 = a_0 + a_2, and
/// k_2 = a_1 + a_3 - r*a_2 (rays 0 and 2 are the sections with
/// self-intersection +r and -r, rays 1 and 3 the fibres).
fn hirzebruch_expected_ample(r: u32, mask: u32) -> bool {
    match mask {
        // Full boundary, or the positive section removed: needs k_2 = 2 - r > 0.
        0b0000 | 0b0001 => r <= 1,
        // One fibre removed, possibly with the positive section: k_2 = 1 - r.
        0b0010 | 0b1000 | 0b0011 | 0b1001 => r == 0,
        // Negative section removed, possibly with one fibre: ample for all r.
        0b0100 | 0b0110 | 0b1100 => true,
        // Both sections (k_1 = 0), both fibres (k_0*k_2 = -r^2, k_0 = r*a_0),
        // or three and more curves: never ample.
        _ => false,
    }
}

/// Replays the Hirzebruch case table: for every r up to `r_max`, all 16
/// boundary subsets of F_r against the expected per-case verdicts. Requires
/// r_max >= 2 so each qualitative case appears.
pub fn verify_hirzebruch(r_max: u32) -> Result<VerificationReport> {
    if r_max < 2 {
        return Err(Error::InvalidArgument(format!(
            "the Hirzebruch suite needs r_max >= 2 to exercise every case, got {r_max}"
        )));
    }
    let mut report = VerificationReport::new(
        "Hirzebruch surface boundary pairs",
        format!("all 16 boundary subsets on F_r for every r in 0..={r_max}"),
    );
    for r in 0..=r_max {
        let expected: BTreeSet<u32> = (0..16)
            .filter(|&m| hirzebruch_expected_ample(r, m))
            .collect();
        check_expected_masks(&hirzebruch(r), &format!("F_{r}"), &expected, &mut report)?;
    }
    report.fans_examined = Some(u64::from(r_max) + 1);
    Ok(report)
}

/// Exhaustively checks that once the Picard rank reaches three (five or more
/// rays), no nonempty boundary subset gives a del Pezzo pair, over every
/// canonical fan within the gamma bound. The empty subset is excluded on
/// purpose: bare del Pezzo surfaces of higher rank exist. Independently, on
/// the rank-one and rank-two fans (3 and 4 rays) at the same bound, subsets
/// of three or more curves are checked to never be ample.
pub fn verify_higher_rank(ray_counts: &[usize], gamma_bound: i64) -> Result<VerificationReport> {
    if ray_counts.is_empty() {
        return Err(Error::InvalidArgument(
            "the higher-rank suite needs at least one ray count".into(),
        ));
    }
    let mut counts: Vec<usize> = ray_counts.to_vec();
    counts.sort_unstable();
    counts.dedup();
    if counts[0] < 5 {
        return Err(Error::InvalidArgument(format!(
            "the higher-rank suite covers fans with at least 5 rays, got {}",
            counts[0]
        )));
    }
    let mut report = VerificationReport::new(
        "higher Picard rank boundary pairs",
        format!(
            "every nonempty boundary subset on all canonical fans with {counts:?} rays and \
             |gamma| <= {gamma_bound} (the empty subset is excluded: bare higher-rank del Pezzo \
             surfaces exist); subsets of 3 or more curves also checked on the 3- and 4-ray fans \
             at the same bound"
        ),
    );
    let mut fans_examined = 0u64;
    for &n in &counts {
        for key in enumerate_fans(n, gamma_bound)? {
            fans_examined += 1;
            let fan = CompleteSmoothFan::from_gamma_sequence(&key)?;
            for record in classify_pairs(&fan)? {
                if record.delta.is_empty() {
                    continue;
                }
                report.verdicts_checked += 1;
                if record.ample || record.witness.is_none() {
                    let detail = if record.ample {
                        "nonempty boundary subset classified ample on a higher-rank fan"
                    } else {
                        "not ample but no witness curve reported"
                    };
                    report.failures.push(VerificationFailure {
                        fan_key: key.clone(),
                        coeffs: log_anticanonical(&fan, &record.delta)?.coeffs().to_vec(),
                        delta: Some(record.delta),
                        kleiman: record.kleiman,
                        witness: record.witness,
                        detail: detail.into(),
                    });
                }
            }
        }
    }
    for n in [3usize, 4] {
        for key in enumerate_fans(n, gamma_bound)? {
            fans_examined += 1;
            let fan = CompleteSmoothFan::from_gamma_sequence(&key)?;
            for record in classify_pairs(&fan)? {
                if record.delta.len() < 3 {
                    continue;
                }
                report.verdicts_checked += 1;
                if record.ample {
                    report.failures.push(VerificationFailure {
                        fan_key: key.clone(),
                        coeffs: log_anticanonical(&fan, &record.delta)?.coeffs().to_vec(),
                        delta: Some(record.delta),
                        kleiman: record.kleiman,
                        witness: record.witness,
                        detail: "boundary subset with 3 or more curves classified ample".into(),
                    });
                }
            }
        }
    }
    report.fans_examined = Some(fans_examined);
    Ok(report)
}

/// Samples random ample divisors on enumerated fans and checks, facet by
/// facet, that four independent volume computations agree: the closed form
/// |a_{i-1} + a_{i+1} - gamma_i * a_i| evaluated here, the gcd of the vertex
/// differences stored by the polytope, a brute-force lattice scan of the
/// edge, and the intersection number with curve i. Coefficients are drawn
/// uniformly from [-4, 4] and rejection-sampled for ampleness under a
/// deterministic seed.
pub fn verify_volume_identity(
    ray_counts: &[usize],
    gamma_bound: i64,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    if ray_counts.is_empty() || samples == 0 {
        return Err(Error::InvalidArgument(
            "the volume suite needs at least one ray count and one sample".into(),
        ));
    }
    let mut counts: Vec<usize> = ray_counts.to_vec();
    counts.sort_unstable();
    counts.dedup();
    let mut pool: Vec<(GammaSequence, CompleteSmoothFan)> = Vec::new();
    for &n in &counts {
        for key in enumerate_fans(n, gamma_bound)? {
            let fan = CompleteSmoothFan::from_gamma_sequence(&key)?;
            pool.push((key, fan));
        }
    }
    if pool.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no fans with {counts:?} rays exist within |gamma| <= {gamma_bound}"
        )));
    }
    let mut report = VerificationReport::new(
        "facet volume identity",
        format!(
            "{samples} random ample divisors with |a_i| <= 4 on canonical fans with {counts:?} \
             rays and |gamma| <= {gamma_bound}, seed {seed}"
        ),
    );
    report.fans_examined = Some(pool.len() as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = (samples as u64).saturating_mul(1000);
    let mut accepted = 0u64;
    let mut attempts = 0u64;
    while accepted < samples as u64 {
        attempts += 1;
        if attempts > budget {
            let (key, fan) = &pool[0];
            report.failures.push(VerificationFailure {
                fan_key: key.clone(),
                delta: None,
                coeffs: Vec::new(),
                kleiman: Vec::new(),
                witness: None,
                detail: format!(
                    "sampling budget exhausted: {accepted} ample divisors after {budget} draws \
                     on {} fans",
                    fan.ray_count()
                ),
            });
            break;
        }
        let (key, fan) = &pool[rng.random_range(0..pool.len())];
        let n = fan.ray_count();
        let coeffs: Vec<i64> = (0..n).map(|_| rng.random_range(-4i64..=4)).collect();
        let divisor = InvariantDivisor::new(fan, coeffs)?;
        let ampleness = divisor.ampleness()?;
        if !ampleness.is_ample() {
            continue;
        }
        accepted += 1;
        let polytope = polytope_of(&divisor)?;
        for i in 0..n {
            report.verdicts_checked += 1;
            let a = divisor.coeffs();
            let closed_form = (i128::from(a[(i + n - 1) % n]) + i128::from(a[(i + 1) % n])
                - i128::from(fan.gamma(i)) * i128::from(a[i]))
            .unsigned_abs();
            let gcd_route = polytope.facet_volumes()[i];
            let cross_checked = polytope.facet_volume(i)?;
            let brute =
                segment_points_brute(polytope.vertices()[(i + n - 1) % n], polytope.vertices()[i]);
            let kleiman = divisor.intersect_curve(i)?;
            let all_agree = closed_form == u128::from(brute)
                && i64::try_from(brute) == Ok(gcd_route)
                && gcd_route == cross_checked
                && cross_checked == kleiman;
            if !all_agree {
                report.failures.push(VerificationFailure {
                    fan_key: key.clone(),
                    delta: None,
                    coeffs: a.to_vec(),
                    kleiman: ampleness.kleiman().to_vec(),
                    witness: None,
                    detail: format!(
                        "facet {i}: closed form {closed_form}, vertex gcd {gcd_route}, \
                         cross-check {cross_checked}, brute count {brute}, \
                         intersection number {kleiman}"
                    ),
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::hirzebruch;

    fn ample_masks(fan: &CompleteSmoothFan) -> BTreeSet<u32> {
        classify_pairs(fan)
            .unwrap()
            .into_iter()
            .filter(|r| r.ample)
            .map(|r| r.delta.mask())
            .collect()
    }

    #[test]
    fn plane_table_has_seven_ample_subsets() {
        let records = classify_pairs(&projective_plane()).unwrap();
        assert_eq!(records.len(), 8);
        for (mask, record) in records.iter().enumerate() {
            assert_eq!(record.delta.mask(), mask as u32);
            assert_eq!(record.ample, record.witness.is_none());
        }
        let expected: BTreeSet<u32> = (0..=6).collect();
        assert_eq!(ample_masks(&projective_plane()), expected);
    }

    #[test]
    fn split_quadric_table_has_nine_ample_subsets() {
        let expected: BTreeSet<u32> = [
            0b0000, 0b0001, 0b0010, 0b0100, 0b1000, 0b0011, 0b1001, 0b0110, 0b1100,
        ]
        .into_iter()
        .collect();
        assert_eq!(ample_masks(&hirzebruch(0)), expected);
    }

    #[test]
    fn first_hirzebruch_table_has_five_ample_subsets() {
        let expected: BTreeSet<u32> = [0b0000, 0b0001, 0b0100, 0b0110, 0b1100]
            .into_iter()
            .collect();
        assert_eq!(ample_masks(&hirzebruch(1)), expected);
    }

    #[test]
    fn classification_refuses_more_than_twenty_rays() {
        let mut fan = projective_plane();
        for _ in 0..18 {
            fan = fan.blowup(0).unwrap();
        }
        assert_eq!(fan.ray_count(), 21);
        assert_eq!(classify_pairs(&fan).unwrap_err(), Error::TooManyRays(21));
    }

    #[test]
    fn plane_suite_passes() {
        let report = verify_projective_plane().unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.verdicts_checked, 8);
        assert_eq!(report.fans_examined, Some(1));
        let text = report.to_string();
        assert!(text.contains("result: PASS"));
        assert!(text.contains("verdicts checked: 8"));
    }

    #[test]
    fn mutated_expectation_fails_with_the_offending_subset() {
        // Self-test of the harness: drop one genuine del Pezzo subset from
        // the expected set and demand the suite pinpoints it.
        let mut expected: BTreeSet<u32> = (0..=6).collect();
        expected.remove(&0b010);
        let report = check_projective_plane_against(&expected).unwrap();
        assert!(!report.passed());
        assert_eq!(report.failures.len(), 1);
        let failure = &report.failures[0];
        assert_eq!(failure.delta.as_ref().unwrap().mask(), 0b010);
        assert_eq!(failure.coeffs, vec![1, 0, 1]);
        assert!(failure
            .detail
            .contains("expected not ample, classified ample"));
        assert!(report.to_string().contains("result: FAIL"));
    }

    #[test]
    fn hirzebruch_suite_passes_to_twenty() {
        let report = verify_hirzebruch(20).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.verdicts_checked, 21 * 16);
        assert_eq!(report.fans_examined, Some(21));
    }

    #[test]
    fn hirzebruch_suite_needs_r_max_two() {
        assert!(matches!(
            verify_hirzebruch(1).unwrap_err(),
            Error::InvalidArgument(_)
        ));
    }

    #[test]
    fn hirzebruch_spot_checks() {
        // r = 0, both sections removed with one fibre kept on each side.
        assert!(hirzebruch_expected_ample(0, 0b1001));
        assert!(!hirzebruch_expected_ample(5, 0b1010));
        assert!(!hirzebruch_expected_ample(0, 0b0101));
        assert!(hirzebruch_expected_ample(7, 0b1100));
    }

    #[test]
    fn higher_rank_suite_passes_on_five_rays() {
        let report = verify_higher_rank(&[5], 2).unwrap();
        assert!(report.passed(), "{report}");
        assert!(report.fans_examined.unwrap() >= 1);
        assert!(report.scope.contains("empty subset is excluded"));
    }

    #[test]
    fn higher_rank_suite_rejects_low_ray_counts() {
        assert!(matches!(
            verify_higher_rank(&[4, 5], 6).unwrap_err(),
            Error::InvalidArgument(_)
        ));
        assert!(matches!(
            verify_higher_rank(&[], 6).unwrap_err(),
            Error::InvalidArgument(_)
        ));
    }

    #[test]
    fn bare_higher_rank_del_pezzo_surfaces_exist() {
        // The five-ray fan with key (0, 0, 1, 1, 1) is a del Pezzo surface of
        // degree 7: its full anticanonical divisor is ample. This is why the
        // higher-rank suite only speaks about nonempty subsets.
        let key = GammaSequence::new(vec![0, 0, 1, 1, 1]).unwrap();
        let fan = CompleteSmoothFan::from_gamma_sequence(&key).unwrap();
        let records = classify_pairs(&fan).unwrap();
        assert!(records[0].delta.is_empty());
        assert!(records[0].ample);
        assert!(records[1..].iter().all(|r| !r.ample));
    }

    #[test]
    fn volume_suite_small_run_is_deterministic() {
        let a = verify_volume_identity(&[3, 4], 2, 25, 7).unwrap();
        assert!(a.passed(), "{a}");
        assert!(a.verdicts_checked >= 25 * 3);
        let b = verify_volume_identity(&[3, 4], 2, 25, 7).unwrap();
        assert_eq!(a, b);
        let c = verify_volume_identity(&[3, 4], 2, 25, 8).unwrap();
        assert!(c.passed(), "{c}");
    }

    #[test]
    fn volume_suite_rejects_empty_scope() {
        assert!(matches!(
            verify_volume_identity(&[], 3, 10, 0).unwrap_err(),
            Error::InvalidArgument(_)
        ));
        assert!(matches!(
            verify_volume_identity(&[3], 3, 0, 0).unwrap_err(),
            Error::InvalidArgument(_)
        ));
        // Within bound 0 there is no 3-ray fan at all.
        assert!(matches!(
            verify_volume_identity(&[3], 0, 10, 0).unwrap_err(),
            Error::InvalidArgument(_)
        ));
    }
}
