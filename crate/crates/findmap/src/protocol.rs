//! The two-round accusation protocol: coordinate exchange with consistency
//! checks against physical distance estimates, then a vote whose threshold
//! depends on the ranging technique.
//!
//! Round 1: every sensor broadcasts its (possibly faked) coordinates. Each
//! correct receiver estimates the sender's range from the physical signal and
//! accuses the sender when the estimate disagrees with the claimed position by
//! more than the distance tolerance. Faking sensors fill their accusation rows
//! however their policy dictates — the protocol assumes nothing about them.
//!
//! Round 2: the rows are exchanged and tallied; a sensor accused by at least
//! the model's threshold is flagged as faking. The thresholds are chosen so
//! that, in general position and with few enough fakers, every faker draws
//! strictly more accusations than any honest sensor possibly can.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adversary::{faker_accusations, AccusationPolicy, SensorView};
use crate::geometry::distance;
use crate::harness::{digest, AttackKind, Role, Scenario, SensorSpec};
use crate::ranging::{observe, RangingError, RangingKind};
use crate::{Corruption, Point2D, Transmission};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProtocolError {
    #[error("the {model} model needs at least {minimum} sensors, got {n}")]
    TooFewSensors {
        model: Model,
        n: usize,
        minimum: usize,
    },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

/// Protocol variant. Fixes which ranging pipeline runs, which corruptions are
/// physically available to fakers, and the accusation threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Idealized exact ranging; fakers can only lie about coordinates, so
    /// only the perpendicular bisector of the lie stays blind.
    Basic,
    /// Received-signal-strength ranging; fakers may also scale their transmit
    /// power, blinding a whole circle of verifiers.
    Rss,
    /// Time-of-flight ranging; fakers may also shift their send time,
    /// blinding a hyperbola branch.
    Tof,
}

impl Model {
    /// Smallest network the variant's threshold is defined for.
    pub fn min_sensors(self) -> usize {
        match self {
            Model::Basic => 3,
            Model::Rss => 4,
            Model::Tof => 6,
        }
    }

    /// The pipeline the simulator runs under this variant. The basic model's
    /// exact ranging is realized by the honest synchronous time-of-flight
    /// pipeline, whose only error is float rounding; the differential
    /// variant would behave identically.
    pub fn ranging_kind(self) -> RangingKind {
        match self {
            Model::Basic | Model::Tof => RangingKind::Stof,
            Model::Rss => RangingKind::Rss,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Basic => "basic",
            Model::Rss => "rss",
            Model::Tof => "tof",
        })
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "basic" => Ok(Model::Basic),
            "rss" => Ok(Model::Rss),
            "tof" => Ok(Model::Tof),
            other => Err(format!("unknown model {other:?} (expected basic, rss, or tof)")),
        }
    }
}

/// Accusation count at which a sensor is flagged as faking.
///
/// The weaker the fakers' blinding power, the lower the count can safely be:
/// `floor(n/2)` for the basic model, `ceil(n/2) - 1` under RSS, and
/// `ceil(n/2) - 2` under time of flight.
pub fn threshold_for(model: Model, n: usize) -> Result<usize, ProtocolError> {
    let minimum = model.min_sensors();
    if n < minimum {
        return Err(ProtocolError::TooFewSensors { model, n, minimum });
    }
    Ok(match model {
        Model::Basic => n / 2,
        Model::Rss => n.div_ceil(2) - 1,
        Model::Tof => n.div_ceil(2) - 2,
    })
}

/// Largest faker count for which detection is guaranteed in general position:
/// every faker's accusers (the non-blind correct sensors) then outnumber the
/// threshold, while honest sensors stay strictly below it no matter how the
/// fakers vote.
pub fn max_tolerable_fakers(model: Model, n: usize) -> Result<usize, ProtocolError> {
    let minimum = model.min_sensors();
    if n < minimum {
        return Err(ProtocolError::TooFewSensors { model, n, minimum });
    }
    Ok(match model {
        Model::Basic => n.div_ceil(2) - 2,
        Model::Rss => n / 2 - 2,
        Model::Tof => n / 2 - 3,
    })
}

/// Who-accuses-whom for one execution: entry `(accuser, target)` is true when
/// `accuser`'s round-2 row named `target`. The diagonal is always false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccusationMatrix {
    n: usize,
    bits: Vec<bool>,
}

impl AccusationMatrix {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, accuser: usize, target: usize) -> bool {
        self.bits[accuser * self.n + target]
    }

    /// Sets one entry; self-accusations are ignored.
    pub fn set(&mut self, accuser: usize, target: usize, accuse: bool) {
        if accuser != target {
            self.bits[accuser * self.n + target] = accuse;
        }
    }

    pub fn row(&self, accuser: usize) -> &[bool] {
        &self.bits[accuser * self.n..(accuser + 1) * self.n]
    }

    /// Replaces one accuser's row, padding with false and keeping the
    /// diagonal clear.
    pub fn set_row(&mut self, accuser: usize, row: &[bool]) {
        for target in 0..self.n {
            self.set(accuser, target, row.get(target).copied().unwrap_or(false));
        }
    }

    /// Number of accusers naming `target`.
    pub fn tally(&self, target: usize) -> usize {
        (0..self.n).filter(|&a| self.get(a, target)).count()
    }

    /// Row-major rendering as a string of `0`/`1`, accuser by accuser.
    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// Verdict for one sensor after round 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SensorStatus {
    Correct,
    Faking,
    /// Never transmitted; the protocol has nothing to judge.
    Absent,
}

/// Estimate recorded in the transcript when the physical pipeline yields no
/// distance at all (zero range or an impossible negative delay). A real
/// receiver would see garbage; the log needs a finite marker because JSON
/// cannot carry NaN.
pub const IMPOSSIBLE_ESTIMATE: f64 = -1.0;

/// One message as heard by one receiver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TranscriptEntry {
    /// Round 1: `receiver` hears `sender` claim `claimed` and estimates its
    /// range from the physical signal.
    Init {
        receiver: usize,
        sender: usize,
        claimed: Point2D,
        estimate: f64,
    },
    /// Round 2: `receiver` hears `sender` broadcast its accusation row.
    Accusation {
        receiver: usize,
        sender: usize,
        row: Vec<bool>,
    },
}

impl TranscriptEntry {
    pub fn receiver(&self) -> usize {
        match *self {
            TranscriptEntry::Init { receiver, .. } => receiver,
            TranscriptEntry::Accusation { receiver, .. } => receiver,
        }
    }
}

/// Everything every sensor heard, in broadcast order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub entries: Vec<TranscriptEntry>,
}

impl Transcript {
    /// The entries one receiver heard, in order.
    pub fn receiver_view(&self, receiver: usize) -> Vec<&TranscriptEntry> {
        self.entries.iter().filter(|e| e.receiver() == receiver).collect()
    }

    /// Largest numeric difference between two receivers' ordered views, or
    /// `None` when they differ structurally (length, entry kinds, senders, or
    /// accusation rows). Receiver ordinals are deliberately not compared, so
    /// views from different executions line up.
    pub fn max_view_difference(a: &[&TranscriptEntry], b: &[&TranscriptEntry]) -> Option<f64> {
        if a.len() != b.len() {
            return None;
        }
        let mut worst = 0.0_f64;
        for (ea, eb) in a.iter().zip(b) {
            match (ea, eb) {
                (
                    TranscriptEntry::Init {
                        sender: sa,
                        claimed: ca,
                        estimate: xa,
                        ..
                    },
                    TranscriptEntry::Init {
                        sender: sb,
                        claimed: cb,
                        estimate: xb,
                        ..
                    },
                ) => {
                    if sa != sb {
                        return None;
                    }
                    worst = worst
                        .max((ca.x - cb.x).abs())
                        .max((ca.y - cb.y).abs())
                        .max((xa - xb).abs());
                }
                (
                    TranscriptEntry::Accusation {
                        sender: sa, row: ra, ..
                    },
                    TranscriptEntry::Accusation {
                        sender: sb, row: rb, ..
                    },
                ) => {
                    if sa != sb || ra != rb {
                        return None;
                    }
                }
                _ => return None,
            }
        }
        Some(worst)
    }
}

/// Binary confusion counts over the non-absent sensors: flagging a faker is a
/// true positive, flagging an honest sensor a false positive.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Metrics {
    pub fn from_comparison(sensors: &[SensorSpec], verdicts: &[SensorStatus]) -> Metrics {
        let mut m = Metrics::default();
        for (spec, &verdict) in sensors.iter().zip(verdicts) {
            match (spec.role, verdict) {
                (_, SensorStatus::Absent) => {}
                (Role::Faking, SensorStatus::Faking) => m.tp += 1,
                (Role::Faking, SensorStatus::Correct) => m.fn_ += 1,
                (Role::Correct, SensorStatus::Faking) => m.fp += 1,
                (Role::Correct, SensorStatus::Correct) => m.tn += 1,
            }
        }
        m
    }

    /// True when every present sensor was classified correctly.
    pub fn exact(&self) -> bool {
        self.fp == 0 && self.fn_ == 0
    }
}

/// Outcome of one full protocol execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// SHA-256 of the scenario's canonical JSON, tying the report to its
    /// input.
    pub scenario_digest: String,
    pub verdicts: Vec<SensorStatus>,
    /// Accusations received per sensor.
    pub tallies: Vec<usize>,
    /// Row-major accusation matrix as a `0`/`1` string.
    pub matrix: String,
    pub metrics: Metrics,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub transcript: Option<Transcript>,
    /// Pairs of present sensors whose claimed positions coincide within the
    /// distance tolerance. The protocol still runs; the collision is recorded
    /// because position-dependent services would break.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub claim_collisions: Vec<(usize, usize)>,
    /// Wall-clock runtime in seconds; excluded from serialization so that
    /// identical executions produce identical bytes.
    #[serde(skip)]
    pub wall_time_s: f64,
}

/// A validated roster entry.
struct Participant {
    true_pos: Point2D,
    claimed: Point2D,
    correct: bool,
    absent: bool,
    corruption: Corruption,
    policy: AccusationPolicy,
}

struct Roster {
    participants: Vec<Participant>,
    claim_collisions: Vec<(usize, usize)>,
}

fn invalid(msg: impl Into<String>) -> ProtocolError {
    ProtocolError::InvalidScenario(msg.into())
}

fn build_roster(scenario: &Scenario) -> Result<Roster, ProtocolError> {
    if scenario.version != 1 {
        return Err(invalid(format!("unsupported version {}", scenario.version)));
    }
    if scenario.sensors.len() != scenario.n {
        return Err(invalid(format!(
            "n is {} but {} sensors are listed",
            scenario.n,
            scenario.sensors.len()
        )));
    }
    let fakers = scenario.sensors.iter().filter(|s| s.role == Role::Faking).count();
    if fakers != scenario.f {
        return Err(invalid(format!(
            "f is {} but {} sensors have the faking role",
            scenario.f, fakers
        )));
    }
    if !scenario.radio_params.is_valid() {
        return Err(invalid("radio parameters must be positive with s_u < s_r"));
    }
    if !scenario.tolerances.is_valid() {
        return Err(invalid("tolerances must be positive and finite"));
    }

    let mut participants = Vec::with_capacity(scenario.n);
    for (i, spec) in scenario.sensors.iter().enumerate() {
        let true_pos = spec.true_pos();
        let claimed = spec.claimed();
        if !true_pos.is_finite() || !claimed.is_finite() {
            return Err(invalid(format!("sensor {i} has non-finite coordinates")));
        }
        let (corruption, policy, absent) = match (spec.role, &spec.attack) {
            (Role::Correct, None) => (Corruption::None, AccusationPolicy::AccuseAllCorrect, false),
            (Role::Correct, Some(_)) => {
                return Err(invalid(format!("sensor {i} is correct but carries an attack")));
            }
            (Role::Faking, None) => {
                return Err(invalid(format!("sensor {i} is faking but has no attack")));
            }
            (Role::Faking, Some(attack)) => {
                let corruption = match attack.kind {
                    AttackKind::Naive | AttackKind::Silent => Corruption::None,
                    AttackKind::RssPowerScale => {
                        if scenario.model != Model::Rss {
                            return Err(invalid(format!(
                                "sensor {i}: power scaling requires the rss model"
                            )));
                        }
                        let lambda = attack
                            .params
                            .lambda
                            .ok_or_else(|| invalid(format!("sensor {i}: missing lambda")))?;
                        if !(lambda > 0.0) || !lambda.is_finite() {
                            return Err(invalid(format!("sensor {i}: lambda must be positive")));
                        }
                        Corruption::PowerScale {
                            s_fake: scenario.radio_params.s_common / (lambda * lambda),
                        }
                    }
                    AttackKind::TofShift => {
                        if scenario.model != Model::Tof {
                            return Err(invalid(format!(
                                "sensor {i}: time shifting requires the tof model"
                            )));
                        }
                        let b = attack
                            .params
                            .b
                            .ok_or_else(|| invalid(format!("sensor {i}: missing b")))?;
                        if !b.is_finite() {
                            return Err(invalid(format!("sensor {i}: b must be finite")));
                        }
                        Corruption::TimeShift { b }
                    }
                };
                (
                    corruption,
                    attack.params.policy.clone(),
                    attack.kind == AttackKind::Silent,
                )
            }
        };
        participants.push(Participant {
            true_pos,
            claimed,
            correct: spec.role == Role::Correct,
            absent,
            corruption,
            policy,
        });
    }

    let mut claim_collisions = Vec::new();
    for i in 0..participants.len() {
        if participants[i].absent {
            continue;
        }
        for j in (i + 1)..participants.len() {
            if participants[j].absent {
                continue;
            }
            let gap = distance(participants[i].claimed, participants[j].claimed);
            if gap <= scenario.tolerances.eps_distance {
                claim_collisions.push((i, j));
            }
        }
    }

    Ok(Roster {
        participants,
        claim_collisions,
    })
}

/// Round 1: broadcast claims, estimate ranges, and form accusation rows.
/// Correct sensors accuse on estimate/claim disagreement beyond the distance
/// tolerance — or when the signal was physically impossible; fakers fill
/// their rows from their accusation policies.
pub fn round1(scenario: &Scenario) -> Result<(AccusationMatrix, Transcript), ProtocolError> {
    let roster = build_roster(scenario)?;
    round1_on(scenario, &roster)
}

fn round1_on(
    scenario: &Scenario,
    roster: &Roster,
) -> Result<(AccusationMatrix, Transcript), ProtocolError> {
    let n = roster.participants.len();
    let ranging = scenario.ranging_model();
    let eps = scenario.tolerances.eps_distance;
    let mut matrix = AccusationMatrix::new(n);
    let mut transcript = Transcript::default();

    for (v, rx) in roster.participants.iter().enumerate() {
        if rx.absent {
            continue;
        }
        for (u, tx) in roster.participants.iter().enumerate() {
            if u == v || tx.absent {
                continue;
            }
            let transmission = Transmission {
                sender_true_pos: tx.true_pos,
                corruption: tx.corruption,
            };
            let estimate = match observe(&ranging, &transmission, rx.true_pos) {
                Ok(est) => {
                    if rx.correct {
                        let mismatch = (est.value - distance(rx.true_pos, tx.claimed)).abs() > eps;
                        matrix.set(v, u, mismatch);
                    }
                    est.value
                }
                Err(RangingError::NegativeDelay | RangingError::ZeroDistance) => {
                    // No honest sender this close to the claim could have
                    // produced the signal; accuse outright.
                    if rx.correct {
                        matrix.set(v, u, true);
                    }
                    IMPOSSIBLE_ESTIMATE
                }
                Err(e) => return Err(invalid(e.to_string())),
            };
            transcript.entries.push(TranscriptEntry::Init {
                receiver: v,
                sender: u,
                claimed: tx.claimed,
                estimate,
            });
        }
    }

    let views: Vec<SensorView> = roster
        .participants
        .iter()
        .map(|p| SensorView {
            claimed: p.claimed,
            true_pos: p.true_pos,
            correct: p.correct,
            absent: p.absent,
        })
        .collect();
    for (v, p) in roster.participants.iter().enumerate() {
        if p.correct || p.absent {
            continue;
        }
        let row = faker_accusations(&p.policy, v, &views, &scenario.tolerances);
        matrix.set_row(v, &row);
    }

    Ok((matrix, transcript))
}

/// Round 2: flag every sensor accused by at least `threshold` voters.
pub fn round2(matrix: &AccusationMatrix, threshold: usize) -> Vec<SensorStatus> {
    (0..matrix.n())
        .map(|target| {
            if matrix.tally(target) >= threshold {
                SensorStatus::Faking
            } else {
                SensorStatus::Correct
            }
        })
        .collect()
}

/// Runs both rounds and assembles the report: verdicts, tallies, the raw
/// matrix, confusion metrics against the scenario's ground truth, and the
/// full per-receiver transcript.
pub fn run_findmap(scenario: &Scenario) -> Result<Report, ProtocolError> {
    let start = Instant::now();
    let threshold = threshold_for(scenario.model, scenario.n)?;
    let roster = build_roster(scenario)?;
    let (matrix, mut transcript) = round1_on(scenario, &roster)?;

    for (v, rx) in roster.participants.iter().enumerate() {
        if rx.absent {
            continue;
        }
        for (w, tx) in roster.participants.iter().enumerate() {
            if w == v || tx.absent {
                continue;
            }
            transcript.entries.push(TranscriptEntry::Accusation {
                receiver: v,
                sender: w,
                row: matrix.row(w).to_vec(),
            });
        }
    }

    let mut verdicts = round2(&matrix, threshold);
    for (v, p) in roster.participants.iter().enumerate() {
        if p.absent {
            verdicts[v] = SensorStatus::Absent;
        }
    }
    let tallies: Vec<usize> = (0..matrix.n()).map(|t| matrix.tally(t)).collect();
    let metrics = Metrics::from_comparison(&scenario.sensors, &verdicts);

    Ok(Report {
        scenario_digest: digest(scenario),
        verdicts,
        tallies,
        matrix: matrix.to_bit_string(),
        metrics,
        transcript: Some(transcript),
        claim_collisions: roster.claim_collisions,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{AttackParams, AttackSpec, Region};
    use crate::{RadioParams, Tolerances};

    fn scenario(model: Model, sensors: Vec<SensorSpec>) -> Scenario {
        let n = sensors.len();
        let f = sensors.iter().filter(|s| s.role == Role::Faking).count();
        Scenario {
            version: 1,
            n,
            f,
            model,
            radio_params: RadioParams::default(),
            region: Region::default(),
            seed: 0,
            sensors,
            tolerances: Tolerances::default(),
        }
    }

    fn honest(x: f64, y: f64) -> SensorSpec {
        SensorSpec {
            x,
            y,
            role: Role::Correct,
            attack: None,
        }
    }

    fn attacker(x: f64, y: f64, kind: AttackKind, params: AttackParams) -> SensorSpec {
        SensorSpec {
            x,
            y,
            role: Role::Faking,
            attack: Some(AttackSpec { kind, params }),
        }
    }

    fn naive(x: f64, y: f64, cx: f64, cy: f64) -> SensorSpec {
        attacker(
            x,
            y,
            AttackKind::Naive,
            AttackParams {
                claimed_x: cx,
                claimed_y: cy,
                ..Default::default()
            },
        )
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(threshold_for(Model::Basic, 10), Ok(5));
        assert_eq!(threshold_for(Model::Rss, 10), Ok(4));
        assert_eq!(threshold_for(Model::Tof, 12), Ok(4));
        assert_eq!(max_tolerable_fakers(Model::Basic, 10), Ok(3));
        assert_eq!(max_tolerable_fakers(Model::Rss, 10), Ok(3));
        assert_eq!(max_tolerable_fakers(Model::Tof, 12), Ok(3));
        assert!(matches!(
            threshold_for(Model::Basic, 2),
            Err(ProtocolError::TooFewSensors { minimum: 3, .. })
        ));
        assert!(matches!(
            threshold_for(Model::Rss, 3),
            Err(ProtocolError::TooFewSensors { minimum: 4, .. })
        ));
        assert!(matches!(
            max_tolerable_fakers(Model::Tof, 5),
            Err(ProtocolError::TooFewSensors { minimum: 6, .. })
        ));
    }

    #[test]
    fn capacity_is_tight() {
        // At f = max_tolerable_fakers the non-blind accusers of any faker
        // still outnumber it; at f + 1 they no longer do. The blind-set slack
        // is 2 sensors in the basic model, 3 under RSS, 5 under ToF.
        for (model, slack) in [(Model::Basic, 2i64), (Model::Rss, 3), (Model::Tof, 5)] {
            for n in model.min_sensors()..=40 {
                let f = max_tolerable_fakers(model, n).unwrap() as i64;
                let n = n as i64;
                assert!(n - f - slack > f, "{model} n={n} f={f}");
                assert!(n - (f + 1) - slack <= f + 1, "{model} n={n} f={f}");
            }
        }
    }

    #[test]
    fn matrix_ops() {
        let mut m = AccusationMatrix::new(4);
        m.set(0, 2, true);
        m.set(2, 2, true); // diagonal: ignored
        m.set(3, 2, true);
        m.set(1, 0, true);
        assert!(m.get(0, 2));
        assert!(!m.get(2, 2));
        assert_eq!(m.tally(2), 2);
        assert_eq!(m.tally(0), 1);
        assert_eq!(m.row(1), &[true, false, false, false]);
        m.set_row(1, &[true, true, true]); // short row pads with false
        assert_eq!(m.row(1), &[true, false, true, false]);
        assert_eq!(m.to_bit_string(), "0010101000000010");
    }

    #[test]
    fn round2_applies_threshold() {
        let mut m = AccusationMatrix::new(4);
        m.set(0, 3, true);
        m.set(1, 3, true);
        m.set(2, 3, true);
        m.set(3, 0, true);
        m.set(1, 0, true);
        let verdicts = round2(&m, 2);
        assert_eq!(
            verdicts,
            vec![
                SensorStatus::Faking,
                SensorStatus::Correct,
                SensorStatus::Correct,
                SensorStatus::Faking
            ]
        );
        assert_eq!(round2(&m, 3), vec![
            SensorStatus::Correct,
            SensorStatus::Correct,
            SensorStatus::Correct,
            SensorStatus::Faking
        ]);
    }

    #[test]
    fn all_honest_unanimous() {
        let s = scenario(
            Model::Basic,
            vec![
                honest(100.0, 100.0),
                honest(900.0, 150.0),
                honest(500.0, 800.0),
                honest(120.0, 700.0),
                honest(650.0, 420.0),
            ],
        );
        let report = run_findmap(&s).unwrap();
        assert!(report.verdicts.iter().all(|&v| v == SensorStatus::Correct));
        assert!(report.matrix.chars().all(|c| c == '0'));
        assert_eq!(report.tallies, vec![0; 5]);
        assert_eq!(report.metrics, Metrics { tp: 0, fp: 0, tn: 5, fn_: 0 });
        assert!(report.metrics.exact());
        assert_eq!(report.scenario_digest.len(), 64);
        // 5 * 4 init entries plus 5 * 4 accusation broadcasts.
        assert_eq!(report.transcript.as_ref().unwrap().entries.len(), 40);
        assert!(report.claim_collisions.is_empty());
    }

    #[test]
    fn naive_faker_detected() {
        let s = scenario(
            Model::Basic,
            vec![
                honest(100.0, 100.0),
                honest(900.0, 150.0),
                honest(500.0, 800.0),
                honest(120.0, 700.0),
                naive(600.0, 600.0, 650.0, 680.0),
            ],
        );
        let report = run_findmap(&s).unwrap();
        assert_eq!(report.verdicts[4], SensorStatus::Faking);
        assert_eq!(report.tallies[4], 4);
        // The faker accuses every honest sensor, but one vote is below the
        // threshold of two.
        assert_eq!(&report.tallies[..4], &[1, 1, 1, 1]);
        assert_eq!(report.metrics, Metrics { tp: 1, fp: 0, tn: 4, fn_: 0 });
        assert!(report.metrics.exact());
    }

    #[test]
    fn bisector_sensor_stays_blind() {
        // The faker at the origin claims (0, 2); (5, 1) is equidistant from
        // both positions and must not accuse, while the other three do.
        let s = scenario(
            Model::Basic,
            vec![
                honest(5.0, 1.0),
                honest(0.0, 5.0),
                honest(4.0, 4.0),
                honest(-2.0, 3.0),
                naive(0.0, 0.0, 0.0, 2.0),
            ],
        );
        let report = run_findmap(&s).unwrap();
        let m: Vec<char> = report.matrix.chars().collect();
        let accused_by = |v: usize| m[v * 5 + 4] == '1';
        assert!(!accused_by(0));
        assert!(accused_by(1));
        assert!(accused_by(2));
        assert!(accused_by(3));
        assert_eq!(report.tallies[4], 3);
        assert_eq!(report.verdicts[4], SensorStatus::Faking);
        assert!(report.metrics.exact());
    }

    #[test]
    fn impossible_delay_is_accused() {
        // A shrink shift larger than every true range makes each receiver see
        // the ultrasound pulse before the radio one; everyone accuses.
        let faker = attacker(
            500.0,
            500.0,
            AttackKind::TofShift,
            AttackParams {
                claimed_x: 480.0,
                claimed_y: 520.0,
                b: Some(-200.0),
                ..Default::default()
            },
        );
        let s = scenario(
            Model::Tof,
            vec![
                honest(450.0, 500.0),
                honest(550.0, 500.0),
                honest(500.0, 450.0),
                honest(500.0, 550.0),
                honest(400.0, 400.0),
                faker,
            ],
        );
        let report = run_findmap(&s).unwrap();
        assert_eq!(report.tallies[5], 5);
        assert_eq!(report.verdicts[5], SensorStatus::Faking);
        let transcript = report.transcript.unwrap();
        let sentinel = transcript.entries.iter().any(|e| {
            matches!(e, TranscriptEntry::Init { sender: 5, estimate, .. }
                if *estimate == IMPOSSIBLE_ESTIMATE)
        });
        assert!(sentinel);
    }

    #[test]
    fn claim_collision_recorded() {
        let s = scenario(
            Model::Basic,
            vec![
                honest(100.0, 100.0),
                honest(900.0, 150.0),
                honest(500.0, 800.0),
                honest(120.0, 700.0),
                naive(600.0, 600.0, 100.0, 100.0),
            ],
        );
        let report = run_findmap(&s).unwrap();
        assert_eq!(report.claim_collisions, vec![(0, 4)]);
        assert_eq!(report.verdicts[4], SensorStatus::Faking);
    }

    #[test]
    fn silent_faker_is_absent() {
        let silent = attacker(
            640.0,
            640.0,
            AttackKind::Silent,
            AttackParams {
                claimed_x: 640.0,
                claimed_y: 640.0,
                ..Default::default()
            },
        );
        let s = scenario(
            Model::Basic,
            vec![
                honest(100.0, 100.0),
                honest(900.0, 150.0),
                honest(500.0, 800.0),
                honest(120.0, 700.0),
                silent,
            ],
        );
        let report = run_findmap(&s).unwrap();
        assert_eq!(report.verdicts[4], SensorStatus::Absent);
        assert_eq!(report.tallies, vec![0; 5]);
        assert_eq!(report.metrics, Metrics { tp: 0, fp: 0, tn: 4, fn_: 0 });
        let transcript = report.transcript.unwrap();
        assert!(transcript.entries.iter().all(|e| {
            e.receiver() != 4
                && !matches!(e, TranscriptEntry::Init { sender: 4, .. })
                && !matches!(e, TranscriptEntry::Accusation { sender: 4, .. })
        }));
    }

    #[test]
    fn invalid_scenarios_are_rejected() {
        let base = || {
            vec![
                honest(100.0, 100.0),
                honest(900.0, 150.0),
                honest(500.0, 800.0),
                naive(600.0, 600.0, 650.0, 680.0),
            ]
        };
        let expect_invalid = |s: &Scenario| {
            assert!(matches!(
                run_findmap(s),
                Err(ProtocolError::InvalidScenario(_))
            ));
        };

        let mut s = scenario(Model::Basic, base());
        s.f = 0;
        expect_invalid(&s);

        let mut s = scenario(Model::Basic, base());
        s.n = 7;
        expect_invalid(&s);

        let mut s = scenario(Model::Basic, base());
        s.version = 2;
        expect_invalid(&s);

        // A correct sensor must not carry an attack.
        let mut sensors = base();
        sensors[0].attack = Some(AttackSpec {
            kind: AttackKind::Naive,
            params: AttackParams::default(),
        });
        expect_invalid(&scenario(Model::Basic, sensors));

        // Power scaling is physically meaningless outside the rss model.
        let mut sensors = base();
        sensors[3] = attacker(
            600.0,
            600.0,
            AttackKind::RssPowerScale,
            AttackParams {
                claimed_x: 650.0,
                claimed_y: 680.0,
                lambda: Some(2.0),
                ..Default::default()
            },
        );
        expect_invalid(&scenario(Model::Basic, sensors));

        // A power-scale attack needs its ratio.
        let mut sensors = base();
        sensors.push(honest(650.0, 420.0));
        sensors[3] = attacker(
            600.0,
            600.0,
            AttackKind::RssPowerScale,
            AttackParams {
                claimed_x: 650.0,
                claimed_y: 680.0,
                ..Default::default()
            },
        );
        expect_invalid(&scenario(Model::Rss, sensors));

        // Model minimums apply to the full roster.
        let small = scenario(Model::Tof, base());
        assert!(matches!(
            run_findmap(&small),
            Err(ProtocolError::TooFewSensors { .. })
        ));
    }

    #[test]
    fn reports_are_deterministic() {
        let s = scenario(
            Model::Basic,
            vec![
                honest(100.0, 100.0),
                honest(900.0, 150.0),
                honest(500.0, 800.0),
                honest(120.0, 700.0),
                naive(600.0, 600.0, 650.0, 680.0),
            ],
        );
        let a = serde_json::to_string(&run_findmap(&s).unwrap()).unwrap();
        let b = serde_json::to_string(&run_findmap(&s).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn transcript_views_compare() {
        let entry = |receiver, sender, estimate| TranscriptEntry::Init {
            receiver,
            sender,
            claimed: Point2D::new(1.0, 2.0),
            estimate,
        };
        let t = Transcript {
            entries: vec![
                entry(0, 1, 5.0),
                entry(1, 0, 5.0),
                entry(0, 2, 7.0),
                entry(1, 2, 7.25),
            ],
        };
        let v0 = t.receiver_view(0);
        let v1 = t.receiver_view(1);
        assert_eq!(v0.len(), 2);
        // Senders 1 vs 0 differ in the first slot: structural mismatch.
        assert_eq!(Transcript::max_view_difference(&v0, &v1), None);

        let t2 = Transcript {
            entries: vec![entry(3, 1, 5.0), entry(3, 2, 7.125)],
        };
        let v3 = t2.receiver_view(3);
        let same = Transcript {
            entries: vec![entry(9, 1, 5.0), entry(9, 2, 7.0)],
        };
        let v9 = same.receiver_view(9);
        // Receiver ordinals differ but senders line up: numeric comparison.
        assert_eq!(Transcript::max_view_difference(&v3, &v9), Some(0.125));
    }
}
