//! Scenario files, general-position generation, independent oracles, and
//! parameter sweeps.
//!
//! A [`Scenario`] is the complete, serializable input to one protocol
//! execution: positions, roles, attack specifications, radio constants, and
//! tolerances. Generation rejection-samples positions until every
//! general-position predicate the model relies on holds with a wide margin,
//! so detection never hinges on a knife-edge comparison. The oracles
//! re-derive blind sets and detection facts by brute-force simulation,
//! independent of the closed-form geometry used by the attack constructors.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::adversary::{
    naive_fake, rss_fake_from_two, tof_fake, tof_fake_from_two, AccusationPolicy, AdversaryError,
    AttackPlan, MirrorConstruction,
};
use crate::geometry::{circle_through_three, distance, six_point_conic_determinant};
use crate::protocol::{max_tolerable_fakers, run_findmap, Model, ProtocolError};
use crate::ranging::{observe, RangingError};
use crate::{Corruption, Point2D, RadioParams, RangingModel, Tolerances, Transmission};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("f = {f} leaves fewer than 3 correct sensors for n = {n}")]
    TooManyFakers { n: usize, f: usize },
    #[error("could not sample an admissible placement within the rejection budget")]
    SamplingExhausted,
    #[error("sensor {ordinal} does not exist")]
    NoSuchSensor { ordinal: usize },
    #[error("sensor {ordinal} has no active attack")]
    NoAttack { ordinal: usize },
    #[error("{0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
}

/// Axis-aligned deployment rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Default for Region {
    fn default() -> Self {
        Region {
            x0: 0.0,
            y0: 0.0,
            x1: 1000.0,
            y1: 1000.0,
        }
    }
}

impl Region {
    pub fn is_valid(&self) -> bool {
        self.x0.is_finite()
            && self.y0.is_finite()
            && self.x1.is_finite()
            && self.y1.is_finite()
            && self.x1 > self.x0
            && self.y1 > self.y0
    }

    /// Diagonal length; the scale all generation margins derive from.
    pub fn diagonal(&self) -> f64 {
        (self.x1 - self.x0).hypot(self.y1 - self.y0)
    }

    pub fn contains(&self, p: Point2D) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Point2D {
        Point2D::new(
            rng.gen_range(self.x0..self.x1),
            rng.gen_range(self.y0..self.y1),
        )
    }
}

/// Ground-truth role of a sensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Correct,
    Faking,
}

/// Kind of attack a faking sensor mounts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackKind {
    /// Lie about coordinates, transmit honestly.
    Naive,
    /// Lie and scale transmit power by `1/lambda²`.
    RssPowerScale,
    /// Lie and shift the send time by `b` meters of apparent range.
    TofShift,
    /// Never transmit at all.
    Silent,
}

/// Kind-specific attack parameters as stored in scenario files. `lambda` is
/// the power-scale range ratio, `b` the time-shift range offset in meters.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AttackParams {
    pub claimed_x: f64,
    pub claimed_y: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub b: Option<f64>,
    #[serde(default)]
    pub policy: AccusationPolicy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackSpec {
    pub kind: AttackKind,
    pub params: AttackParams,
}

/// One roster line of a scenario file: true position, role, and (for fakers)
/// the attack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensorSpec {
    pub x: f64,
    pub y: f64,
    pub role: Role,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub attack: Option<AttackSpec>,
}

impl SensorSpec {
    pub fn true_pos(&self) -> Point2D {
        Point2D::new(self.x, self.y)
    }

    /// The position this sensor broadcasts: the attack's claim if it has one,
    /// its true position otherwise.
    pub fn claimed(&self) -> Point2D {
        match &self.attack {
            Some(a) => Point2D::new(a.params.claimed_x, a.params.claimed_y),
            None => self.true_pos(),
        }
    }

    pub fn is_absent(&self) -> bool {
        matches!(&self.attack, Some(a) if a.kind == AttackKind::Silent)
    }
}

/// Complete input to one protocol execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    /// File format version; currently always 1.
    pub version: u32,
    pub n: usize,
    pub f: usize,
    pub model: Model,
    pub radio_params: RadioParams,
    pub region: Region,
    /// Seed the scenario was generated from (0 for hand-built scenarios).
    pub seed: u64,
    pub sensors: Vec<SensorSpec>,
    pub tolerances: Tolerances,
}

impl Scenario {
    /// The ranging pipeline this scenario's model runs.
    pub fn ranging_model(&self) -> RangingModel {
        RangingModel::new(self.model.ranging_kind(), self.radio_params)
    }

    pub fn correct_positions(&self) -> Vec<Point2D> {
        self.sensors
            .iter()
            .filter(|s| s.role == Role::Correct)
            .map(|s| s.true_pos())
            .collect()
    }

    pub fn faker_ordinals(&self) -> Vec<usize> {
        (0..self.sensors.len())
            .filter(|&i| self.sensors[i].role == Role::Faking)
            .collect()
    }

    /// Reconstructs the attack plan of one faker from the stored spec,
    /// including its predicted blind set among the correct sensors.
    pub fn attack_plan(&self, ordinal: usize) -> Result<AttackPlan, HarnessError> {
        let spec = self
            .sensors
            .get(ordinal)
            .ok_or(HarnessError::NoSuchSensor { ordinal })?;
        let attack = match &spec.attack {
            Some(a) if a.kind != AttackKind::Silent => a,
            _ => return Err(HarnessError::NoAttack { ordinal }),
        };
        let faker = spec.true_pos();
        let claimed = spec.claimed();
        let eps = self.tolerances.eps_distance;
        let corrects = self.correct_positions();

        let (corruption, blind): (Corruption, Vec<Point2D>) = match attack.kind {
            AttackKind::Naive => (
                Corruption::None,
                corrects
                    .into_iter()
                    .filter(|&p| (distance(p, claimed) - distance(p, faker)).abs() <= eps)
                    .collect(),
            ),
            AttackKind::RssPowerScale => {
                let lambda = attack
                    .params
                    .lambda
                    .ok_or_else(|| missing_param(ordinal, "lambda"))?;
                (
                    Corruption::PowerScale {
                        s_fake: self.radio_params.s_common / (lambda * lambda),
                    },
                    corrects
                        .into_iter()
                        .filter(|&p| {
                            (distance(p, claimed) - lambda * distance(p, faker)).abs() <= eps
                        })
                        .collect(),
                )
            }
            AttackKind::TofShift => {
                let b = attack.params.b.ok_or_else(|| missing_param(ordinal, "b"))?;
                (
                    Corruption::TimeShift { b },
                    corrects
                        .into_iter()
                        .filter(|&p| (distance(p, claimed) - distance(p, faker) - b).abs() <= eps)
                        .collect(),
                )
            }
            AttackKind::Silent => unreachable!("filtered above"),
        };
        Ok(AttackPlan {
            faker_true: faker,
            claimed,
            corruption,
            predicted_blind: blind,
            accusation_policy: attack.params.policy.clone(),
        })
    }
}

fn missing_param(ordinal: usize, name: &str) -> HarnessError {
    HarnessError::PreconditionViolated(format!("sensor {ordinal}: attack lacks {name}"))
}

/// Hex SHA-256 of the scenario's canonical (compact) JSON.
pub fn digest(scenario: &Scenario) -> String {
    let json = serde_json::to_string(scenario).expect("scenario serializes");
    let hash = Sha256::digest(json.as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

/// Margins the rejection sampler enforces, derived from the region diagonal.
/// They sit many orders of magnitude above the detection tolerances, so a
/// generated scenario can never flip a verdict on float noise.
struct Margins {
    separation: f64,
    area: f64,
    circle: f64,
    conic: f64,
}

impl Margins {
    fn for_region(region: &Region) -> Margins {
        let scale = region.diagonal();
        Margins {
            separation: 1e-3 * scale,
            area: 1e-3 * scale * scale,
            circle: 1e-3 * scale,
            conic: 1e-6,
        }
    }
}

/// Maps a point into the unit square over `region`. The conic-degeneracy
/// determinant is evaluated in these coordinates: affine maps preserve
/// conics, and unit-scale rows make the determinant a dimensionless
/// degeneracy measure a fixed margin can bound.
fn unit_coords(region: &Region, p: Point2D) -> Point2D {
    Point2D::new(
        (p.x - region.x0) / (region.x1 - region.x0),
        (p.y - region.y0) / (region.y1 - region.y0),
    )
}

/// True when `candidate` keeps the accepted prefix in general position for
/// `model`: separated, no collinear triple, and — per model — no concyclic
/// quadruple (RSS) or co-conic sextuple (ToF) within the margins.
fn admissible(
    model: Model,
    region: &Region,
    accepted: &[Point2D],
    candidate: Point2D,
    margins: &Margins,
) -> bool {
    let k = accepted.len();
    for &p in accepted {
        if distance(p, candidate) < margins.separation {
            return false;
        }
    }
    for i in 0..k {
        for j in (i + 1)..k {
            let cross = accepted[j]
                .sub(accepted[i])
                .cross(candidate.sub(accepted[i]));
            if cross.abs() < margins.area {
                return false;
            }
        }
    }
    match model {
        Model::Basic => {}
        Model::Rss => {
            let tol = Tolerances::default();
            for i in 0..k {
                for j in (i + 1)..k {
                    for l in (j + 1)..k {
                        if let Ok(c) = circle_through_three(accepted[i], accepted[j], accepted[l], &tol)
                        {
                            if (distance(candidate, c.center) - c.radius).abs() < margins.circle {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        Model::Tof => {
            let unit: Vec<Point2D> = accepted.iter().map(|&p| unit_coords(region, p)).collect();
            let cand = unit_coords(region, candidate);
            for a in 0..k {
                for b in (a + 1)..k {
                    for c in (b + 1)..k {
                        for d in (c + 1)..k {
                            for e in (d + 1)..k {
                                let pts = [unit[a], unit[b], unit[c], unit[d], unit[e], cand];
                                if six_point_conic_determinant(&pts).abs() < margins.conic {
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

/// The two correct sensors nearest to `from`, by true position.
fn two_nearest_correct(scenario: &Scenario, from: Point2D) -> Result<(Point2D, Point2D), HarnessError> {
    let mut corrects = scenario.correct_positions();
    if corrects.len() < 2 {
        return Err(HarnessError::PreconditionViolated(
            "need at least two correct sensors to anchor an attack".into(),
        ));
    }
    corrects.sort_by(|a, b| {
        distance(*a, from)
            .partial_cmp(&distance(*b, from))
            .expect("finite distances")
    });
    Ok((corrects[0], corrects[1]))
}

const REJECTION_BUDGET: usize = 10_000;

/// Samples a random scenario: `n` uniform positions in `region` kept in
/// general position for `model`, the last `f` of them faking with default
/// attacks anchored on their two nearest correct neighbors. Deterministic in
/// `seed`.
pub fn generate_scenario(
    model: Model,
    n: usize,
    f: usize,
    seed: u64,
    region: Region,
    tolerances: Tolerances,
) -> Result<Scenario, HarnessError> {
    // Surfaces TooFewSensors for undersized n.
    let _ = max_tolerable_fakers(model, n)?;
    if !region.is_valid() {
        return Err(HarnessError::PreconditionViolated("degenerate region".into()));
    }
    if !tolerances.is_valid() {
        return Err(HarnessError::PreconditionViolated("invalid tolerances".into()));
    }
    if f + 3 > n {
        return Err(HarnessError::TooManyFakers { n, f });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let margins = Margins::for_region(&region);
    let scale = region.diagonal();

    let mut positions: Vec<Point2D> = Vec::with_capacity(n);
    let mut rejections = 0usize;
    while positions.len() < n {
        let candidate = region.sample(&mut rng);
        if admissible(model, &region, &positions, candidate, &margins) {
            positions.push(candidate);
        } else {
            rejections += 1;
            if rejections > REJECTION_BUDGET {
                return Err(HarnessError::SamplingExhausted);
            }
        }
    }

    let mut sensors: Vec<SensorSpec> = positions
        .iter()
        .map(|p| SensorSpec {
            x: p.x,
            y: p.y,
            role: Role::Correct,
            attack: None,
        })
        .collect();
    for spec in sensors.iter_mut().skip(n - f) {
        spec.role = Role::Faking;
    }

    let mut scenario = Scenario {
        version: 1,
        n,
        f,
        model,
        radio_params: RadioParams::default(),
        region,
        seed,
        sensors,
        tolerances,
    };

    for ordinal in (n - f)..n {
        let faker = positions[ordinal];
        let (p1, p2) = two_nearest_correct(&scenario, faker)?;
        let corrects = scenario.correct_positions();
        let mut attached = false;
        for _ in 0..100 {
            let outcome = match model {
                Model::Basic => {
                    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
                    let r = rng.gen_range(0.05..0.25) * scale;
                    let claimed = faker.add(Point2D::new(theta.cos(), theta.sin()).scale(r));
                    naive_fake(faker, claimed, &corrects, &tolerances)
                }
                Model::Rss => {
                    // Keep the ratio below the largest one for which the two
                    // anchor circles still intersect.
                    let (d1, d2) = (distance(p1, faker), distance(p2, faker));
                    let gap = (d1 - d2).abs();
                    let lambda_max = if gap < 1e-12 {
                        f64::INFINITY
                    } else {
                        distance(p1, p2) / gap
                    };
                    let lambda =
                        rng.gen_range(1.25_f64..2.0).min(1.0 + 0.9 * (lambda_max - 1.0));
                    rss_fake_from_two(
                        faker,
                        p1,
                        p2,
                        lambda,
                        &corrects,
                        &scenario.radio_params,
                        &tolerances,
                    )
                }
                Model::Tof => {
                    let b = rng.gen_range(0.02..0.12) * scale;
                    tof_fake_from_two(faker, p1, p2, b, &corrects, &tolerances)
                }
            };
            match outcome {
                Ok(plan) => {
                    scenario.sensors[ordinal].attack = Some(spec_from_plan(&scenario, &plan));
                    attached = true;
                    break;
                }
                Err(_) => {
                    rejections += 1;
                    if rejections > REJECTION_BUDGET {
                        return Err(HarnessError::SamplingExhausted);
                    }
                }
            }
        }
        if !attached {
            return Err(HarnessError::SamplingExhausted);
        }
    }
    Ok(scenario)
}

/// Translates a constructed plan into the stored file form.
fn spec_from_plan(scenario: &Scenario, plan: &AttackPlan) -> AttackSpec {
    let (kind, lambda, b) = match plan.corruption {
        Corruption::None => (AttackKind::Naive, None, None),
        Corruption::PowerScale { s_fake } => (
            AttackKind::RssPowerScale,
            Some((scenario.radio_params.s_common / s_fake).sqrt()),
            None,
        ),
        Corruption::TimeShift { b } => (AttackKind::TofShift, None, Some(b)),
    };
    AttackSpec {
        kind,
        params: AttackParams {
            claimed_x: plan.claimed.x,
            claimed_y: plan.claimed.y,
            lambda,
            b,
            policy: plan.accusation_policy.clone(),
        },
    }
}

/// Kind-specific inputs for [`attach_attack`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AttackRequest {
    /// Claim the true position plus `offset`, transmitting honestly.
    Naive { offset: Point2D },
    /// Scale power by `1/lambda²`; the claim is derived from the two nearest
    /// correct sensors so both anchors stay blind.
    RssPowerScale { lambda: f64 },
    /// Shift apparent range by `b` meters toward `claimed`, or toward a claim
    /// derived from the two nearest correct sensors when `claimed` is `None`.
    TofShift { b: f64, claimed: Option<Point2D> },
}

/// Returns `scenario` with the attack of faker `ordinal` replaced by one
/// built through the matching adversary constructor. The accusation policy
/// resets to the default.
pub fn attach_attack(
    scenario: &Scenario,
    ordinal: usize,
    request: AttackRequest,
) -> Result<Scenario, HarnessError> {
    let spec = scenario
        .sensors
        .get(ordinal)
        .ok_or(HarnessError::NoSuchSensor { ordinal })?;
    if spec.role != Role::Faking {
        return Err(HarnessError::PreconditionViolated(format!(
            "sensor {ordinal} is not faking"
        )));
    }
    let legal = match request {
        AttackRequest::Naive { .. } => true,
        AttackRequest::RssPowerScale { .. } => scenario.model == Model::Rss,
        AttackRequest::TofShift { .. } => scenario.model == Model::Tof,
    };
    if !legal {
        return Err(HarnessError::PreconditionViolated(format!(
            "attack kind is not physical under the {} model",
            scenario.model
        )));
    }

    let faker = spec.true_pos();
    let corrects = scenario.correct_positions();
    let tol = &scenario.tolerances;
    let plan = match request {
        AttackRequest::Naive { offset } => naive_fake(faker, faker.add(offset), &corrects, tol)?,
        AttackRequest::RssPowerScale { lambda } => {
            let (p1, p2) = two_nearest_correct(scenario, faker)?;
            rss_fake_from_two(faker, p1, p2, lambda, &corrects, &scenario.radio_params, tol)?
        }
        AttackRequest::TofShift { b, claimed: Some(c) } => tof_fake(faker, b, c, &corrects, tol)?,
        AttackRequest::TofShift { b, claimed: None } => {
            let (p1, p2) = two_nearest_correct(scenario, faker)?;
            tof_fake_from_two(faker, p1, p2, b, &corrects, tol)?
        }
    };
    let mut out = scenario.clone();
    out.sensors[ordinal].attack = Some(spec_from_plan(scenario, &plan));
    Ok(out)
}

/// Brute-force check of the basic detection fact: with one naive faker, does
/// every non-collinear triple of correct sensors contain at least one
/// accuser? Collinear triples are skipped — a triple on the claim's
/// perpendicular bisector genuinely cannot see the lie. Vacuously true with
/// no faker; errors on scenarios with several fakers or a non-naive one.
pub fn oracle_fact1(scenario: &Scenario) -> Result<bool, HarnessError> {
    let fakers = scenario.faker_ordinals();
    if fakers.is_empty() {
        return Ok(true);
    }
    if fakers.len() > 1 {
        return Err(HarnessError::PreconditionViolated(
            "oracle_fact1 needs exactly one faker".into(),
        ));
    }
    let ordinal = fakers[0];
    let kind = scenario.sensors[ordinal]
        .attack
        .as_ref()
        .map(|a| a.kind)
        .ok_or(HarnessError::NoAttack { ordinal })?;
    if kind != AttackKind::Naive {
        return Err(HarnessError::PreconditionViolated(
            "oracle_fact1 applies to naive fakes only".into(),
        ));
    }

    let faker = &scenario.sensors[ordinal];
    let ranging = scenario.ranging_model();
    let transmission = Transmission::honest(faker.true_pos());
    let claimed = faker.claimed();
    let eps = scenario.tolerances.eps_distance;
    let corrects = scenario.correct_positions();
    let accuses: Vec<bool> = corrects
        .iter()
        .map(|&p| match observe(&ranging, &transmission, p) {
            Ok(est) => (est.value - distance(p, claimed)).abs() > eps,
            Err(_) => true,
        })
        .collect();

    for i in 0..corrects.len() {
        for j in (i + 1)..corrects.len() {
            for k in (j + 1)..corrects.len() {
                if crate::geometry::collinear(corrects[i], corrects[j], corrects[k], &scenario.tolerances)
                {
                    continue;
                }
                if !accuses[i] && !accuses[j] && !accuses[k] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The blind set of one faker by direct simulation: the correct sensors whose
/// physical estimate matches the faked claim within tolerance. Independent of
/// the locus geometry the constructors use.
pub fn oracle_blind_set(scenario: &Scenario, ordinal: usize) -> Result<BTreeSet<usize>, HarnessError> {
    let plan = scenario.attack_plan(ordinal)?;
    let ranging = scenario.ranging_model();
    let transmission = Transmission {
        sender_true_pos: plan.faker_true,
        corruption: plan.corruption,
    };
    let eps = scenario.tolerances.eps_distance;
    let mut blind = BTreeSet::new();
    for (i, spec) in scenario.sensors.iter().enumerate() {
        if spec.role != Role::Correct {
            continue;
        }
        let p = spec.true_pos();
        let convinced = match observe(&ranging, &transmission, p) {
            Ok(est) => (est.value - distance(p, plan.claimed)).abs() <= eps,
            Err(RangingError::NegativeDelay | RangingError::ZeroDistance) => false,
            Err(e) => return Err(ProtocolError::InvalidScenario(e.to_string()).into()),
        };
        if convinced {
            blind.insert(i);
        }
    }
    Ok(blind)
}

/// Faker counts to visit per network size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FSpec {
    /// The inclusive range `lo..=hi`, clipped to what is generable.
    Range { lo: usize, hi: usize },
    /// `0..=max_tolerable_fakers(n) + delta`, clipped to what is generable —
    /// `delta > 0` deliberately visits cells beyond the guarantee.
    MaxTolerablePlus { delta: usize },
}

/// A full sweep: one cell per (n, f) pair, `trials` scenarios per cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub model: Model,
    pub n_min: usize,
    pub n_max: usize,
    pub f_spec: FSpec,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub region: Region,
    #[serde(default)]
    pub tolerances: Tolerances,
}

/// Aggregated outcome of one sweep cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub f: usize,
    pub model: Model,
    pub trials: usize,
    /// Fraction of trials in which every present sensor was classified
    /// correctly.
    pub exact_rate: f64,
    /// Mean accusations drawn per faker per trial; 0 when f = 0.
    pub mean_accusers: f64,
}

/// Decorrelates per-trial seeds from the sweep seed and cell coordinates
/// (splitmix64 finalizer).
fn mix_seed(seed: u64, n: usize, f: usize, trial: usize) -> u64 {
    let mut x = seed
        ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (f as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9)
        ^ (trial as u64).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^= x >> 30;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^= x >> 31;
    x
}

/// Runs every cell of the sweep. Cells whose f is not generable for their n
/// (fewer than 3 correct sensors would remain) are skipped rather than
/// failed, so range specs can span mixed network sizes.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, HarnessError> {
    if spec.n_min > spec.n_max || spec.trials == 0 {
        return Err(HarnessError::PreconditionViolated(
            "sweep needs n_min <= n_max and at least one trial".into(),
        ));
    }
    if let FSpec::Range { lo, hi } = spec.f_spec {
        if lo > hi {
            return Err(HarnessError::PreconditionViolated("empty f range".into()));
        }
    }
    let mut rows = Vec::new();
    for n in spec.n_min..=spec.n_max {
        let (lo, hi) = match spec.f_spec {
            FSpec::Range { lo, hi } => (lo, hi),
            FSpec::MaxTolerablePlus { delta } => {
                (0, max_tolerable_fakers(spec.model, n)? + delta)
            }
        };
        for f in lo..=hi {
            if f + 3 > n {
                continue;
            }
            let mut exact = 0usize;
            let mut accusations = 0usize;
            for trial in 0..spec.trials {
                let scenario = generate_scenario(
                    spec.model,
                    n,
                    f,
                    mix_seed(spec.seed, n, f, trial),
                    spec.region,
                    spec.tolerances,
                )?;
                let report = run_findmap(&scenario)?;
                if report.metrics.exact() {
                    exact += 1;
                }
                for ordinal in scenario.faker_ordinals() {
                    accusations += report.tallies[ordinal];
                }
            }
            let denom = (spec.trials * f.max(1)) as f64;
            rows.push(SweepRow {
                n,
                f,
                model: spec.model,
                trials: spec.trials,
                exact_rate: exact as f64 / spec.trials as f64,
                mean_accusers: if f == 0 { 0.0 } else { accusations as f64 / denom },
            });
        }
    }
    Ok(rows)
}

/// Renders sweep rows as CSV.
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("n,f,model,trials,exact_rate,mean_accusers\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n, r.f, r.model, r.trials, r.exact_rate, r.mean_accusers
        ));
    }
    out
}

/// The two executions of a mirror construction as concrete scenarios. They
/// share every broadcast claim; the roles and true positions swap sides of
/// the axis, the fakers mimic honest behavior from the mirrored world, and
/// the resulting transcripts at the on-axis observers are identical — so any
/// deterministic verdict is wrong in one of the two.
pub fn mirror_scenarios(mc: &MirrorConstruction, seed: u64) -> (Scenario, Scenario) {
    let n = mc.n();
    let m = mc.correct_set.len();
    let mimic = AccusationPolicy::Mimic { axis: mc.axis };

    let honest = |p: Point2D| SensorSpec {
        x: p.x,
        y: p.y,
        role: Role::Correct,
        attack: None,
    };
    let naive_mimic = |true_pos: Point2D, claimed: Point2D| SensorSpec {
        x: true_pos.x,
        y: true_pos.y,
        role: Role::Faking,
        attack: Some(AttackSpec {
            kind: AttackKind::Naive,
            params: AttackParams {
                claimed_x: claimed.x,
                claimed_y: claimed.y,
                lambda: None,
                b: None,
                policy: mimic.clone(),
            },
        }),
    };
    let silent = |p: Point2D| SensorSpec {
        x: p.x,
        y: p.y,
        role: Role::Faking,
        attack: Some(AttackSpec {
            kind: AttackKind::Silent,
            params: AttackParams {
                claimed_x: p.x,
                claimed_y: p.y,
                ..Default::default()
            },
        }),
    };

    let mut first = vec![honest(mc.v), honest(mc.u)];
    let mut second = vec![honest(mc.v), honest(mc.u)];
    // Slots 2..2+m broadcast the correct-set positions in both executions:
    // genuinely there in the first, mimicked from across the axis in the
    // second.
    for i in 0..m {
        first.push(honest(mc.correct_set[i]));
        second.push(naive_mimic(mc.axis.reflect(mc.correct_set[i]), mc.correct_set[i]));
    }
    // Slots 2+m..2+2m broadcast the virtual-set positions: faked in the
    // first execution, genuine in the second.
    for i in 0..m {
        first.push(naive_mimic(mc.faking_set[i], mc.virtual_set[i]));
        second.push(honest(mc.virtual_set[i]));
    }
    if let Some(p) = mc.silent_faker {
        first.push(silent(p));
        second.push(silent(mc.axis.reflect(p)));
    }

    let scenario = |sensors: Vec<SensorSpec>| {
        let f = sensors.iter().filter(|s| s.role == Role::Faking).count();
        Scenario {
            version: 1,
            n,
            f,
            model: Model::Basic,
            radio_params: RadioParams::default(),
            region: Region::default(),
            seed,
            sensors,
            tolerances: Tolerances::default(),
        }
    };
    (scenario(first), scenario(second))
}
