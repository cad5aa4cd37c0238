//! Attack constructors. Each returns the faked claim, the ranging corruption,
//! and the predicted set of blind verifiers — the correct sensors that will
//! see the fake as consistent — so simulations can be cross-checked against
//! the geometry that motivated the attack.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{circle_circle_intersections, distance, GeometryError};
use crate::{Circle, Corruption, LocusRss, Line, Point2D, RadioParams, Tolerances};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdversaryError {
    #[error("claimed position coincides with the true position")]
    SamePosition,
    #[error("power ratio must be positive and different from one")]
    InvalidRatio,
    #[error("distance shift must be nonzero")]
    InvalidShift,
    #[error("the two anchor circles do not intersect")]
    NoIntersection,
    #[error("attack plan has the wrong corruption kind for this operation")]
    WrongCorruptionKind,
    #[error(
        "claimed position lies within the shift distance of the true position; \
         at most one sensor can stay blind"
    )]
    DegenerateAttack { predicted_blind: Vec<Point2D> },
    #[error("mirror construction requires n - f - 2 <= f, n >= 4, f >= 1 (got n={n}, f={f})")]
    InvalidCounts { n: usize, f: usize },
    #[error("could not sample a general-position mirror placement")]
    SamplingExhausted,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// How a faker fills its round-2 accusation array. The protocol never
/// constrains faker messages, so the simulator makes the choice explicit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AccusationPolicy {
    /// Accuse every present correct sensor — the worst case for the honest
    /// side, since it maximizes tallies against them.
    AccuseAllCorrect,
    /// Send an all-false array.
    AccuseNone,
    /// Send the row an honest sensor at the claimed position would compute in
    /// the world mirrored across `axis` (roles swapped, true positions
    /// reflected). Realizes the indistinguishability construction.
    Mimic { axis: Line },
    /// A fixed caller-supplied row; padded with false and diagonal-cleared.
    Custom { row: Vec<bool> },
}

impl Default for AccusationPolicy {
    fn default() -> Self {
        AccusationPolicy::AccuseAllCorrect
    }
}

/// An omniscient participant's knowledge of one roster entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorView {
    pub claimed: Point2D,
    pub true_pos: Point2D,
    pub correct: bool,
    pub absent: bool,
}

/// The faker's round-2 array under `policy`. Entry `t` is whether the faker
/// at `faker_ordinal` accuses ordinal `t`; the self entry is always false.
pub fn faker_accusations(
    policy: &AccusationPolicy,
    faker_ordinal: usize,
    roster: &[SensorView],
    tol: &Tolerances,
) -> Vec<bool> {
    let n = roster.len();
    let mut row = vec![false; n];
    match policy {
        AccusationPolicy::AccuseNone => {}
        AccusationPolicy::AccuseAllCorrect => {
            for (t, view) in roster.iter().enumerate() {
                row[t] = t != faker_ordinal && view.correct && !view.absent;
            }
        }
        AccusationPolicy::Mimic { axis } => {
            let my_claim = roster[faker_ordinal].claimed;
            for (t, view) in roster.iter().enumerate() {
                if t == faker_ordinal || view.absent {
                    continue;
                }
                let d_hat = distance(my_claim, axis.reflect(view.true_pos));
                let d_claim = distance(my_claim, view.claimed);
                row[t] = (d_hat - d_claim).abs() > tol.eps_distance;
            }
        }
        AccusationPolicy::Custom { row: fixed } => {
            for (t, entry) in row.iter_mut().enumerate() {
                *entry = t != faker_ordinal && fixed.get(t).copied().unwrap_or(false);
            }
        }
    }
    row
}

/// Everything the simulator needs to run one faker, plus the attack's
/// predicted blind set for cross-checking against simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackPlan {
    pub faker_true: Point2D,
    pub claimed: Point2D,
    pub corruption: Corruption,
    /// Correct sensors predicted NOT to notice the inconsistency in round 1.
    pub predicted_blind: Vec<Point2D>,
    pub accusation_policy: AccusationPolicy,
}

/// Residual of the blind condition for a naive fake: zero iff `p` is
/// equidistant from the claimed and true positions.
fn naive_residual(p: Point2D, faker: Point2D, claimed: Point2D) -> f64 {
    (distance(p, claimed) - distance(p, faker)).abs()
}

/// Residual of the blind condition for a power-scaling fake: zero iff
/// `|p - claimed| = lambda * |p - faker|` — the defining equation of the
/// consistent-verifier circle.
pub fn rss_blind_residual(p: Point2D, faker: Point2D, claimed: Point2D, lambda: f64) -> f64 {
    (distance(p, claimed) - lambda * distance(p, faker)).abs()
}

/// Residual of the blind condition for a time-shifting fake: zero iff
/// `|p - claimed| = |p - faker| + b` — membership on the enlargement locus.
pub fn tof_blind_residual(p: Point2D, faker: Point2D, claimed: Point2D, b: f64) -> f64 {
    (distance(p, claimed) - distance(p, faker) - b).abs()
}

/// A position-only fake: the sender lies about its coordinates but transmits
/// honestly, so only verifiers equidistant from the true and claimed
/// positions (the perpendicular bisector) stay blind.
pub fn naive_fake(
    faker: Point2D,
    claimed: Point2D,
    correct: &[Point2D],
    tol: &Tolerances,
) -> Result<AttackPlan, AdversaryError> {
    if distance(faker, claimed) <= tol.eps_distance {
        return Err(AdversaryError::SamePosition);
    }
    let predicted_blind = correct
        .iter()
        .copied()
        .filter(|&p| naive_residual(p, faker, claimed) <= tol.eps_distance)
        .collect();
    Ok(AttackPlan {
        faker_true: faker,
        claimed,
        corruption: Corruption::None,
        predicted_blind,
        accusation_policy: AccusationPolicy::default(),
    })
}

/// Deterministic pick among candidate claim positions: farthest from the
/// faker's true position, ties broken by larger y, then larger x.
fn pick_intersection(faker: Point2D, candidates: &[Point2D]) -> Option<Point2D> {
    candidates.iter().copied().reduce(|best, p| {
        let (db, dp) = (distance(best, faker), distance(p, faker));
        if dp > db || (dp == db && (p.y > best.y || (p.y == best.y && p.x > best.x))) {
            p
        } else {
            best
        }
    })
}

/// A power-scaling fake consistent with two chosen verifiers: the claim is an
/// intersection of the circles around `p1`, `p2` with radii scaled by
/// `lambda`, and the transmit power is scaled so every receiver's estimate
/// grows by the same factor. `p1`, `p2` — and everything else on the
/// consistent-verifier circle through them — stays blind.
pub fn rss_fake_from_two(
    faker: Point2D,
    p1: Point2D,
    p2: Point2D,
    lambda: f64,
    correct: &[Point2D],
    params: &RadioParams,
    tol: &Tolerances,
) -> Result<AttackPlan, AdversaryError> {
    if !(lambda > 0.0) || !lambda.is_finite() || lambda == 1.0 {
        return Err(AdversaryError::InvalidRatio);
    }
    if distance(faker, p1) <= tol.eps_distance
        || distance(faker, p2) <= tol.eps_distance
        || distance(p1, p2) <= tol.eps_distance
    {
        return Err(AdversaryError::SamePosition);
    }
    let c1 = Circle {
        center: p1,
        radius: lambda * distance(p1, faker),
    };
    let c2 = Circle {
        center: p2,
        radius: lambda * distance(p2, faker),
    };
    let candidates = circle_circle_intersections(&c1, &c2);
    let claimed = pick_intersection(faker, &candidates).ok_or(AdversaryError::NoIntersection)?;
    let predicted_blind = correct
        .iter()
        .copied()
        .filter(|&p| rss_blind_residual(p, faker, claimed, lambda) <= tol.eps_distance)
        .collect();
    Ok(AttackPlan {
        faker_true: faker,
        claimed,
        corruption: Corruption::PowerScale {
            s_fake: params.s_common / (lambda * lambda),
        },
        predicted_blind,
        accusation_policy: AccusationPolicy::default(),
    })
}

/// The full locus of verifiers blind to a power-scaling plan: an Apollonius
/// circle (or bisector) with respect to the true and claimed positions.
pub fn rss_blind_circle(
    plan: &AttackPlan,
    params: &RadioParams,
) -> Result<LocusRss, AdversaryError> {
    let Corruption::PowerScale { s_fake } = plan.corruption else {
        return Err(AdversaryError::WrongCorruptionKind);
    };
    let lambda = (params.s_common / s_fake).sqrt();
    Ok(crate::geometry::consistent_verifier_circle(
        plan.faker_true,
        plan.claimed,
        lambda,
    )?)
}

/// A time-shifting fake toward a chosen claim: every receiver's estimate
/// moves by `b`, so the blind verifiers are exactly the enlargement-locus
/// branch. When the claim sits within `|b|` of the true position the locus
/// collapses (triangle inequality) and at most one sensor can stay blind;
/// that case is reported as `DegenerateAttack` carrying the residual blind
/// set.
pub fn tof_fake(
    faker: Point2D,
    b: f64,
    claimed: Point2D,
    correct: &[Point2D],
    tol: &Tolerances,
) -> Result<AttackPlan, AdversaryError> {
    if b == 0.0 || !b.is_finite() {
        return Err(AdversaryError::InvalidShift);
    }
    let c = distance(claimed, faker);
    if c <= tol.eps_distance {
        return Err(AdversaryError::SamePosition);
    }
    let predicted_blind: Vec<Point2D> = correct
        .iter()
        .copied()
        .filter(|&p| tof_blind_residual(p, faker, claimed, b) <= tol.eps_distance)
        .collect();
    if c <= b.abs() {
        return Err(AdversaryError::DegenerateAttack { predicted_blind });
    }
    Ok(AttackPlan {
        faker_true: faker,
        claimed,
        corruption: Corruption::TimeShift { b },
        predicted_blind,
        accusation_policy: AccusationPolicy::default(),
    })
}

/// A time-shifting fake consistent with two chosen verifiers: the claim is an
/// intersection of the circles around `p1`, `p2` with radii enlarged by `b`,
/// putting both anchors on the blind locus.
pub fn tof_fake_from_two(
    faker: Point2D,
    p1: Point2D,
    p2: Point2D,
    b: f64,
    correct: &[Point2D],
    tol: &Tolerances,
) -> Result<AttackPlan, AdversaryError> {
    if b == 0.0 || !b.is_finite() {
        return Err(AdversaryError::InvalidShift);
    }
    let (d1, d2) = (distance(p1, faker), distance(p2, faker));
    if d1 + b <= 0.0 || d2 + b <= 0.0 {
        return Err(AdversaryError::NoIntersection);
    }
    let c1 = Circle {
        center: p1,
        radius: d1 + b,
    };
    let c2 = Circle {
        center: p2,
        radius: d2 + b,
    };
    let candidates = circle_circle_intersections(&c1, &c2);
    let claimed = pick_intersection(faker, &candidates).ok_or(AdversaryError::NoIntersection)?;
    tof_fake(faker, b, claimed, correct, tol)
}

/// The reflection-symmetric placement that defeats any deterministic verdict:
/// observers `v`, `u` on the axis, correct sensors `C` and fakers at `Gamma`
/// on one side, and the fakers' claimed positions `Gamma'` mirrored across
/// the axis. Swapping which side is honest produces a second execution whose
/// transcripts at `v` and `u` are identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MirrorConstruction {
    pub axis: Line,
    pub v: Point2D,
    pub u: Point2D,
    /// True positions of the genuinely correct off-axis sensors (C).
    pub correct_set: Vec<Point2D>,
    /// True positions of the faking sensors (Gamma).
    pub faking_set: Vec<Point2D>,
    /// The fakers' claimed positions (Gamma'): the exact reflection of
    /// `faking_set` across `axis`.
    pub virtual_set: Vec<Point2D>,
    /// For odd n, one extra faker that never transmits.
    pub silent_faker: Option<Point2D>,
}

impl MirrorConstruction {
    /// Total number of sensors in either execution.
    pub fn n(&self) -> usize {
        2 + self.correct_set.len() + self.faking_set.len() + usize::from(self.silent_faker.is_some())
    }
}

// Margins used while sampling mirror placements, in meters (the layout spans
// roughly a kilometer).
const MIRROR_MIN_SEPARATION: f64 = 1.0;
const MIRROR_MIN_TRIPLE_AREA: f64 = 1.0e3;

fn general_position(points: &[Point2D]) -> bool {
    for (i, &a) in points.iter().enumerate() {
        for (j, &b) in points.iter().enumerate().skip(i + 1) {
            if distance(a, b) < MIRROR_MIN_SEPARATION {
                return false;
            }
            for &c in points.iter().skip(j + 1) {
                if b.sub(a).cross(c.sub(a)).abs() < MIRROR_MIN_TRIPLE_AREA {
                    return false;
                }
            }
        }
    }
    true
}

/// Sample a mirror construction for `n` sensors of which `f` may fake.
/// Requires the impossibility regime `n - f - 2 <= f`; the placement is
/// rejection-sampled into general position with respect to everything except
/// the deliberate mirror symmetry.
pub fn mirror_construction(
    n: usize,
    f: usize,
    axis: Line,
    seed: u64,
) -> Result<MirrorConstruction, AdversaryError> {
    if n < 4 || f == 0 || n.saturating_sub(f + 2) > f || f > n - 2 {
        return Err(AdversaryError::InvalidCounts { n, f });
    }
    let odd = n % 2 == 1;
    let m = (n - 2 - usize::from(odd)) / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = axis.direction.perp();
    let place = |rng: &mut ChaCha8Rng| {
        let along: f64 = rng.gen_range(0.0..1000.0);
        let off: f64 = rng.gen_range(40.0..460.0);
        axis.point
            .add(axis.direction.scale(along))
            .add(normal.scale(off))
    };
    for _ in 0..10_000 {
        let v = axis.point.add(axis.direction.scale(rng.gen_range(50.0..350.0)));
        let u = axis.point.add(axis.direction.scale(rng.gen_range(650.0..950.0)));
        let correct_set: Vec<Point2D> = (0..m).map(|_| place(&mut rng)).collect();
        let faking_set: Vec<Point2D> = (0..m).map(|_| place(&mut rng)).collect();
        let silent_faker = odd.then(|| place(&mut rng));
        let virtual_set: Vec<Point2D> = faking_set.iter().map(|&p| axis.reflect(p)).collect();

        let mut all = vec![v, u];
        all.extend(&correct_set);
        all.extend(&faking_set);
        all.extend(&virtual_set);
        all.extend(&silent_faker);
        if general_position(&all) {
            return Ok(MirrorConstruction {
                axis,
                v,
                u,
                correct_set,
                faking_set,
                virtual_set,
                silent_faker,
            });
        }
    }
    Err(AdversaryError::SamplingExhausted)
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Point2D;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn naive_fake_blind_set() {
        // (5,1) is equidistant from (0,0) and (0,2): sqrt(26) both ways.
        let correct = [P::new(5.0, 1.0), P::new(0.0, 5.0), P::new(-3.0, 1.0)];
        let plan = naive_fake(P::new(0.0, 0.0), P::new(0.0, 2.0), &correct, &tol()).unwrap();
        assert_eq!(plan.corruption, Corruption::None);
        assert_eq!(plan.predicted_blind, vec![P::new(5.0, 1.0), P::new(-3.0, 1.0)]);
        assert_eq!(
            naive_fake(P::new(1.0, 1.0), P::new(1.0, 1.0), &correct, &tol()),
            Err(AdversaryError::SamePosition)
        );
    }

    #[test]
    fn naive_fake_triple_always_has_accuser() {
        // Any non-collinear triple of correct sensors contains at least one
        // sensor off the bisector.
        let correct = [P::new(5.0, 1.0), P::new(-3.0, 1.0), P::new(2.0, 7.0)];
        let plan = naive_fake(P::new(0.0, 0.0), P::new(0.0, 2.0), &correct, &tol()).unwrap();
        assert!(plan.predicted_blind.len() < 3);
    }

    #[test]
    fn rss_fake_symmetric_case() {
        let (faker, p1, p2) = (P::new(0.0, 0.0), P::new(-2.0, 1.0), P::new(2.0, 1.0));
        let third = P::new(0.0, -5.0);
        let correct = [p1, p2, third, P::new(7.0, 7.0)];
        let plan =
            rss_fake_from_two(faker, p1, p2, 2.0, &correct, &RadioParams::default(), &tol())
                .unwrap();
        // Circle intersections are (0,5) and (0,-3); the farther one wins and
        // sits on the opposite side of line p1-p2 from the faker.
        assert!((plan.claimed.x - 0.0).abs() < 1e-9);
        assert!((plan.claimed.y - 5.0).abs() < 1e-9);
        for &p in &[p1, p2] {
            assert!((distance(plan.claimed, p) - 2.0 * distance(faker, p)).abs() < 1e-9);
        }
        // s_fake = s_common / lambda^2.
        assert_eq!(plan.corruption, Corruption::PowerScale { s_fake: 0.25 });
        // The two anchors and the implied third verifier are blind; the
        // off-circle sensor is not.
        assert_eq!(plan.predicted_blind, vec![p1, p2, third]);
        // And the closed-form third verifier matches.
        let implied = crate::geometry::third_blind_sensor(faker, plan.claimed, 2.0).unwrap();
        assert!(distance(implied, third) < 1e-9);
    }

    #[test]
    fn rss_fake_rejects_unit_ratio() {
        let r = rss_fake_from_two(
            P::new(0.0, 0.0),
            P::new(-2.0, 1.0),
            P::new(2.0, 1.0),
            1.0,
            &[],
            &RadioParams::default(),
            &tol(),
        );
        assert_eq!(r, Err(AdversaryError::InvalidRatio));
    }

    #[test]
    fn rss_blind_circle_contains_anchors() {
        let (faker, p1, p2) = (P::new(3.0, 2.0), P::new(-1.0, 6.0), P::new(8.0, -1.0));
        let correct = [p1, p2];
        let plan =
            rss_fake_from_two(faker, p1, p2, 1.7, &correct, &RadioParams::default(), &tol())
                .unwrap();
        let locus = rss_blind_circle(&plan, &RadioParams::default()).unwrap();
        assert!(locus.distance_to(p1) < 1e-7);
        assert!(locus.distance_to(p2) < 1e-7);
        let naive = naive_fake(faker, P::new(0.0, 0.0), &correct, &tol()).unwrap();
        assert_eq!(
            rss_blind_circle(&naive, &RadioParams::default()),
            Err(AdversaryError::WrongCorruptionKind)
        );
    }

    #[test]
    fn tof_fake_vertex_is_blind() {
        let correct = [P::new(0.0, 0.5), P::new(4.0, 4.0)];
        let plan = tof_fake(P::new(0.0, 0.0), 1.0, P::new(0.0, 2.0), &correct, &tol()).unwrap();
        assert_eq!(plan.corruption, Corruption::TimeShift { b: 1.0 });
        assert_eq!(plan.predicted_blind, vec![P::new(0.0, 0.5)]);
    }

    #[test]
    fn tof_fake_too_close_is_degenerate() {
        let correct = [P::new(5.0, 5.0), P::new(-3.0, 2.0)];
        match tof_fake(P::new(0.0, 0.0), 2.0, P::new(0.0, 1.0), &correct, &tol()) {
            Err(AdversaryError::DegenerateAttack { predicted_blind }) => {
                assert!(predicted_blind.len() <= 1);
            }
            other => panic!("expected DegenerateAttack, got {other:?}"),
        }
    }

    #[test]
    fn tof_fake_from_two_hits_both_anchors() {
        let (faker, p1, p2) = (P::new(0.0, 0.0), P::new(-2.0, 1.0), P::new(2.0, 1.0));
        let correct = [p1, p2, P::new(9.0, -4.0)];
        let plan = tof_fake_from_two(faker, p1, p2, 1.5, &correct, &tol()).unwrap();
        for &p in &[p1, p2] {
            assert!((distance(plan.claimed, p) - distance(faker, p) - 1.5).abs() < 1e-9);
        }
        assert_eq!(plan.predicted_blind, vec![p1, p2]);
        // Shrink attacks work symmetrically, though the shrunken circles only
        // meet when the anchors sit close enough together.
        let (q1, q2) = (P::new(-0.7, 1.0), P::new(0.7, 1.0));
        let shrunk = tof_fake_from_two(faker, q1, q2, -0.5, &[q1, q2], &tol()).unwrap();
        assert_eq!(shrunk.corruption, Corruption::TimeShift { b: -0.5 });
        assert_eq!(shrunk.predicted_blind, vec![q1, q2]);
        assert_eq!(
            tof_fake_from_two(faker, p1, p2, -0.5, &correct, &tol()),
            Err(AdversaryError::NoIntersection)
        );
    }

    #[test]
    fn accusation_policies() {
        let mk = |x: f64, y: f64, correct: bool| SensorView {
            claimed: P::new(x, y),
            true_pos: P::new(x, y),
            correct,
            absent: false,
        };
        let roster = [
            mk(0.0, 0.0, true),
            mk(1.0, 0.0, true),
            mk(2.0, 0.0, true),
            mk(3.0, 0.0, false),
            mk(4.0, 0.0, false),
        ];
        let all = faker_accusations(&AccusationPolicy::AccuseAllCorrect, 3, &roster, &tol());
        assert_eq!(all, vec![true, true, true, false, false]);
        let none = faker_accusations(&AccusationPolicy::AccuseNone, 3, &roster, &tol());
        assert_eq!(none, vec![false; 5]);
        let custom = faker_accusations(
            &AccusationPolicy::Custom { row: vec![true, false, true, true] },
            3,
            &roster,
            &tol(),
        );
        assert_eq!(custom, vec![true, false, true, false, false]);
    }

    #[test]
    fn mimic_reproduces_reflected_view() {
        let axis = Line::horizontal();
        let view = |claimed: P, true_pos: P, correct: bool| SensorView {
            claimed,
            true_pos,
            correct,
            absent: false,
        };
        // Ordinals: 0 = on-axis observer, 1 = correct sensor, 2 = this faker
        // (true (3,2), claiming the reflection), 3 = fellow faker.
        let roster = [
            view(P::new(0.0, 0.0), P::new(0.0, 0.0), true),
            view(P::new(1.0, 1.0), P::new(1.0, 1.0), true),
            view(P::new(3.0, -2.0), P::new(3.0, 2.0), false),
            view(P::new(6.0, -3.0), P::new(6.0, 3.0), false),
        ];
        let row = faker_accusations(&AccusationPolicy::Mimic { axis }, 2, &roster, &tol());
        // Accuses the correct off-axis sensor, spares the on-axis observer
        // and the fellow faker (whose claim equals its own reflection).
        assert_eq!(row, vec![false, true, false, false]);
    }

    #[test]
    fn mirror_construction_even() {
        let mc = mirror_construction(6, 2, Line::horizontal(), 7).unwrap();
        assert_eq!(mc.correct_set.len(), 2);
        assert_eq!(mc.faking_set.len(), 2);
        assert_eq!(mc.silent_faker, None);
        assert_eq!(mc.n(), 6);
        assert_eq!(mc.v.y, 0.0);
        assert_eq!(mc.u.y, 0.0);
        // The virtual set is the bit-exact reflection.
        for (g, g2) in mc.faking_set.iter().zip(&mc.virtual_set) {
            assert_eq!(g2.x, g.x);
            assert_eq!(g2.y, -g.y);
        }
    }

    #[test]
    fn mirror_construction_odd_has_silent_faker() {
        let mc = mirror_construction(7, 3, Line::horizontal(), 11).unwrap();
        assert_eq!(mc.correct_set.len(), 2);
        assert_eq!(mc.faking_set.len(), 2);
        assert!(mc.silent_faker.is_some());
        assert_eq!(mc.n(), 7);
    }

    #[test]
    fn mirror_construction_rejects_detectable_regime() {
        // n=10, f=3 satisfies n-f-2 > f: detection is possible, no mirror.
        assert_eq!(
            mirror_construction(10, 3, Line::horizontal(), 1),
            Err(AdversaryError::InvalidCounts { n: 10, f: 3 })
        );
    }

    #[test]
    fn mirror_construction_deterministic() {
        let a = mirror_construction(8, 3, Line::horizontal(), 42).unwrap();
        let b = mirror_construction(8, 3, Line::horizontal(), 42).unwrap();
        assert_eq!(a, b);
        let c = mirror_construction(8, 3, Line::horizontal(), 43).unwrap();
        assert_ne!(a, c);
    }
}
