//! The three distance-estimation techniques — received signal strength via the
//! Friis equation, synchronous time of flight, and differential arrival time —
//! in honest and adversary-corrupted forms.
//!
//! [`observe`] simulates the full physical pipeline (transmit power or pulse
//! times, propagation, receiver-side inversion), so corrupted estimates come
//! out of the same code path as honest ones.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{distance, Point};
use crate::scalar::{cast, Scalar};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum RangingError {
    #[error("sender and receiver positions coincide")]
    ZeroDistance,
    #[error("received power must be positive")]
    NonPositivePower,
    #[error("signal arrived before it was sent")]
    NegativeDelay,
    #[error("corruption kind is not legal under this ranging technique")]
    CorruptionModelMismatch,
    #[error("radio parameters violate their invariants")]
    InvalidRadioParams,
}

/// Physical constants shared by every sensor: the common transmit power, the
/// carrier wavelength, and the two propagation speeds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioParams<S> {
    /// Common transmit power in watts. Correct sensors always send at this
    /// power; receivers assume it when inverting the Friis equation.
    pub s_common: S,
    /// Carrier wavelength in meters.
    pub lambda: S,
    /// Radio propagation speed in m/s.
    pub s_r: S,
    /// Ultrasound propagation speed in m/s.
    pub s_u: S,
}

impl<S: Scalar> Default for RadioParams<S> {
    /// Typical 2.4 GHz radio paired with an ultrasound secondary channel.
    fn default() -> Self {
        Self {
            s_common: S::one(),
            lambda: cast(0.125),
            s_r: cast(3.0e8),
            s_u: cast(340.0),
        }
    }
}

impl<S: Scalar> RadioParams<S> {
    pub fn is_valid(&self) -> bool {
        self.s_common > S::zero()
            && self.lambda > S::zero()
            && self.s_r > S::zero()
            && self.s_u > S::zero()
            && self.s_u < self.s_r
    }
}

/// Which estimation technique the network runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RangingKind {
    /// Received signal strength: invert the Friis equation at the assumed
    /// common power.
    Rss,
    /// Synchronous time of flight of a timestamped radio pulse.
    Stof,
    /// Differential arrival time of simultaneous radio and ultrasound pulses.
    Dat,
}

/// A ranging technique plus its physical parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangingModel<S> {
    pub kind: RangingKind,
    pub params: RadioParams<S>,
}

impl<S: Scalar> RangingModel<S> {
    pub fn new(kind: RangingKind, params: RadioParams<S>) -> Self {
        Self { kind, params }
    }
}

/// How a faking sender corrupts its transmission. The legality of a kind
/// depends on the technique: power scaling only affects RSS, time shifting
/// only affects the time-of-flight techniques.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Corruption<S> {
    /// Honest transmission at the common power and true times.
    None,
    /// Transmit at power `s_fake` instead of the common power; every receiver
    /// then estimates `sqrt(s_common/s_fake) * d`.
    PowerScale { s_fake: S },
    /// Shift the pulse times so every receiver estimates `d + b`. The shift is
    /// stored as the induced distance bias in meters (signed: negative b
    /// shrinks); each pipeline converts it to its own time offset.
    TimeShift { b: S },
}

/// One physical transmission: where the sender really is and how (if at all)
/// it corrupts the signal. The claimed position travels separately in the
/// message payload and plays no role here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transmission<S> {
    pub sender_true_pos: Point<S>,
    pub corruption: Corruption<S>,
}

impl<S: Scalar> Transmission<S> {
    pub fn honest(sender_true_pos: Point<S>) -> Self {
        Self {
            sender_true_pos,
            corruption: Corruption::None,
        }
    }
}

/// A receiver-side distance estimate in meters.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct DistanceEstimate<S> {
    pub value: S,
}

/// Received power at range `d` for transmit power `s_s` and wavelength
/// `lambda`: the Friis free-space equation with unit antenna gains,
/// `s_s * (lambda / (4 pi d))^2`.
pub fn friis_receive_power<S: Scalar>(s_s: S, lambda: S, d: S) -> Result<S, RangingError> {
    if !(d > S::zero()) {
        return Err(RangingError::ZeroDistance);
    }
    let four_pi = cast::<S>(4.0) * S::PI();
    let ratio = lambda / (four_pi * d);
    Ok(s_s * ratio * ratio)
}

/// Invert the Friis equation assuming the sender used the common power:
/// `d = (lambda / 4 pi) * sqrt(s_common / s_received)`.
pub fn rss_estimate<S: Scalar>(
    s_received: S,
    params: &RadioParams<S>,
) -> Result<DistanceEstimate<S>, RangingError> {
    if !(s_received > S::zero()) {
        return Err(RangingError::NonPositivePower);
    }
    let four_pi = cast::<S>(4.0) * S::PI();
    let value = params.lambda / four_pi * (params.s_common / s_received).sqrt();
    Ok(DistanceEstimate { value })
}

/// Synchronous time of flight: distance from a timestamped radio pulse,
/// `d = s_r * (t_recv - t_send)`.
pub fn stof_estimate<S: Scalar>(
    t_send: S,
    t_recv: S,
    s_r: S,
) -> Result<DistanceEstimate<S>, RangingError> {
    if t_recv < t_send {
        return Err(RangingError::NegativeDelay);
    }
    Ok(DistanceEstimate {
        value: s_r * (t_recv - t_send),
    })
}

/// Differential arrival time: distance from the gap between the radio and
/// ultrasound arrivals of one transmission. The gap is taken ultrasound-minus-
/// radio, `t_diff = d/s_u - d/s_r >= 0` (the slower pulse arrives later), so
/// `d = t_diff * s_r * s_u / (s_r - s_u)`.
pub fn dat_estimate<S: Scalar>(
    t_diff: S,
    params: &RadioParams<S>,
) -> Result<DistanceEstimate<S>, RangingError> {
    if t_diff < S::zero() {
        return Err(RangingError::NegativeDelay);
    }
    let value = t_diff * params.s_r * params.s_u / (params.s_r - params.s_u);
    Ok(DistanceEstimate { value })
}

/// Simulate the full pipeline: what distance does `receiver` estimate for
/// `tx` under the given technique?
///
/// Corruptions move every receiver's estimate in lockstep: a power-scaling
/// sender is seen at `sqrt(s_common/s_fake) * d`, a time-shifting sender at
/// `d + b`. A shift that drives the estimate below zero surfaces as
/// `NegativeDelay` (the pulse would have to arrive before it was sent).
pub fn observe<S: Scalar>(
    model: &RangingModel<S>,
    tx: &Transmission<S>,
    receiver: Point<S>,
) -> Result<DistanceEstimate<S>, RangingError> {
    if !model.params.is_valid() {
        return Err(RangingError::InvalidRadioParams);
    }
    let d = distance(tx.sender_true_pos, receiver);
    if !(d > S::zero()) {
        return Err(RangingError::ZeroDistance);
    }
    let p = &model.params;
    match model.kind {
        RangingKind::Rss => {
            let s_tx = match tx.corruption {
                Corruption::None => p.s_common,
                Corruption::PowerScale { s_fake } => {
                    if !(s_fake > S::zero()) {
                        return Err(RangingError::NonPositivePower);
                    }
                    s_fake
                }
                Corruption::TimeShift { .. } => return Err(RangingError::CorruptionModelMismatch),
            };
            let s_received = friis_receive_power(s_tx, p.lambda, d)?;
            rss_estimate(s_received, p)
        }
        RangingKind::Stof => {
            let t_shift = match tx.corruption {
                Corruption::None => S::zero(),
                Corruption::TimeShift { b } => b / p.s_r,
                Corruption::PowerScale { .. } => return Err(RangingError::CorruptionModelMismatch),
            };
            let t_send = S::zero();
            let t_recv = t_send + d / p.s_r + t_shift;
            stof_estimate(t_send, t_recv, p.s_r)
        }
        RangingKind::Dat => {
            let t_shift = match tx.corruption {
                Corruption::None => S::zero(),
                Corruption::TimeShift { b } => b * (S::one() / p.s_u - S::one() / p.s_r),
                Corruption::PowerScale { .. } => return Err(RangingError::CorruptionModelMismatch),
            };
            let t_radio = d / p.s_r;
            let t_sound = d / p.s_u + t_shift;
            dat_estimate(t_sound - t_radio, p)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Point<f64>;

    fn params() -> RadioParams<f64> {
        RadioParams::default()
    }

    fn model(kind: RangingKind) -> RangingModel<f64> {
        RangingModel::new(kind, params())
    }

    #[test]
    fn default_params_valid() {
        assert!(params().is_valid());
        let bad = RadioParams::<f64> {
            s_u: 4.0e8,
            ..params()
        };
        assert!(!bad.is_valid());
    }

    #[test]
    fn friis_unit_cases() {
        let four_pi = 4.0 * std::f64::consts::PI;
        assert_eq!(friis_receive_power(1.0, four_pi, 1.0).unwrap(), 1.0);
        assert_eq!(friis_receive_power(1.0, four_pi, 2.0).unwrap(), 0.25);
        assert_eq!(friis_receive_power(1.0, 0.125, 0.0), Err(RangingError::ZeroDistance));
    }

    #[test]
    fn friis_at_ten_meters() {
        // (0.125 / (40 pi))^2, evaluated by hand.
        let got = friis_receive_power(1.0_f64, 0.125, 10.0).unwrap();
        assert!((got - 9.894646840072e-7).abs() < 1e-15);
        // The inversion pins it exactly.
        let back = rss_estimate(got, &params()).unwrap();
        assert!((back.value - 10.0).abs() < 1e-12);
    }

    #[test]
    fn rss_round_trip() {
        for &d in &[0.1, 0.5, 10.0, 987.3, 1000.0] {
            let s = friis_receive_power(1.0, 0.125, d).unwrap();
            let est = rss_estimate(s, &params()).unwrap();
            assert!((est.value - d).abs() < 1e-9 * d, "d={d}");
        }
        assert_eq!(rss_estimate(0.0, &params()), Err(RangingError::NonPositivePower));
    }

    #[test]
    fn rss_quarter_power_doubles_distance() {
        // A sender at true distance 1 transmitting at a quarter of the common
        // power is estimated at distance 2.
        let s = friis_receive_power(0.25, 0.125, 1.0).unwrap();
        let est = rss_estimate(s, &params()).unwrap();
        assert!((est.value - 2.0).abs() < 1e-12);
        // Full power: no bias.
        let s = friis_receive_power(1.0, 0.125, 1.0).unwrap();
        let est = rss_estimate(s, &params()).unwrap();
        assert!((est.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stof_cases() {
        assert_eq!(stof_estimate(0.0, 1.0e-6, 3.0e8).unwrap().value, 300.0);
        assert_eq!(stof_estimate(2.0, 2.0, 3.0e8).unwrap().value, 0.0);
        assert_eq!(stof_estimate(0.0, 5.0e-7, 3.0e8).unwrap().value, 150.0);
        assert_eq!(stof_estimate(1.0, 0.5, 3.0e8), Err(RangingError::NegativeDelay));
    }

    #[test]
    fn dat_cases() {
        let p = params();
        assert_eq!(dat_estimate(0.0, &p).unwrap().value, 0.0);
        // Forward-simulate a sender at 340 m and invert.
        let d = 340.0;
        let t_diff = d / p.s_u - d / p.s_r;
        let est = dat_estimate(t_diff, &p).unwrap();
        assert!((est.value - 340.0).abs() < 1e-9);
        // Linearity.
        let twice = dat_estimate(2.0 * t_diff, &p).unwrap();
        assert!((twice.value - 2.0 * est.value).abs() < 1e-9);
        assert_eq!(dat_estimate(-1.0e-9, &p), Err(RangingError::NegativeDelay));
    }

    #[test]
    fn observe_honest_matches_geometry() {
        let tx = Transmission::honest(P::new(3.0, 4.0));
        let rx = P::new(0.0, 0.0);
        for kind in [RangingKind::Rss, RangingKind::Stof, RangingKind::Dat] {
            let est = observe(&model(kind), &tx, rx).unwrap();
            assert!((est.value - 5.0).abs() < 1e-9, "{kind:?}");
        }
        let seven = Transmission::honest(P::new(7.0, 0.0));
        let est = observe(&model(RangingKind::Stof), &seven, rx).unwrap();
        assert!((est.value - 7.0).abs() < 1e-9);
    }

    #[test]
    fn observe_power_scale_quadruple_ratio() {
        // s_common / s_fake = 4 makes a sender at distance 3 look like 6.
        let tx = Transmission {
            sender_true_pos: P::new(3.0, 0.0),
            corruption: Corruption::PowerScale { s_fake: 0.25 },
        };
        let est = observe(&model(RangingKind::Rss), &tx, P::new(0.0, 0.0)).unwrap();
        assert!((est.value - 6.0).abs() < 1e-9);
    }

    #[test]
    fn observe_time_shift_is_additive() {
        let tx = Transmission {
            sender_true_pos: P::new(0.0, 0.0),
            corruption: Corruption::TimeShift { b: 2.0 },
        };
        for kind in [RangingKind::Stof, RangingKind::Dat] {
            let at5 = observe(&model(kind), &tx, P::new(5.0, 0.0)).unwrap();
            let at9 = observe(&model(kind), &tx, P::new(9.0, 0.0)).unwrap();
            assert!((at5.value - 7.0).abs() < 1e-9, "{kind:?}");
            assert!((at9.value - 11.0).abs() < 1e-9, "{kind:?}");
        }
    }

    #[test]
    fn observe_shift_below_zero_is_negative_delay() {
        let tx = Transmission {
            sender_true_pos: P::new(0.0, 0.0),
            corruption: Corruption::TimeShift { b: -10.0 },
        };
        for kind in [RangingKind::Stof, RangingKind::Dat] {
            assert_eq!(
                observe(&model(kind), &tx, P::new(7.0, 0.0)),
                Err(RangingError::NegativeDelay),
                "{kind:?}"
            );
        }
        // A mild shrink is fine.
        let tx = Transmission {
            sender_true_pos: P::new(0.0, 0.0),
            corruption: Corruption::TimeShift { b: -2.0 },
        };
        let est = observe(&model(RangingKind::Stof), &tx, P::new(7.0, 0.0)).unwrap();
        assert!((est.value - 5.0).abs() < 1e-9);
    }

    #[test]
    fn observe_rejects_mismatched_corruption() {
        let shift = Transmission {
            sender_true_pos: P::new(1.0, 0.0),
            corruption: Corruption::TimeShift { b: 1.0 },
        };
        assert_eq!(
            observe(&model(RangingKind::Rss), &shift, P::new(0.0, 0.0)),
            Err(RangingError::CorruptionModelMismatch)
        );
        let scale = Transmission {
            sender_true_pos: P::new(1.0, 0.0),
            corruption: Corruption::PowerScale { s_fake: 0.5 },
        };
        for kind in [RangingKind::Stof, RangingKind::Dat] {
            assert_eq!(
                observe(&model(kind), &scale, P::new(0.0, 0.0)),
                Err(RangingError::CorruptionModelMismatch),
                "{kind:?}"
            );
        }
    }

    #[test]
    fn observe_zero_distance_errors() {
        let tx = Transmission::honest(P::new(1.0, 1.0));
        assert_eq!(
            observe(&model(RangingKind::Rss), &tx, P::new(1.0, 1.0)),
            Err(RangingError::ZeroDistance)
        );
    }

    #[test]
    fn bias_is_receiver_independent_smoke() {
        let receivers = [
            P::new(10.0, 0.0),
            P::new(-3.0, 40.0),
            P::new(7.7, -2.2),
            P::new(100.0, 55.0),
        ];
        let scale = Transmission {
            sender_true_pos: P::new(1.0, 2.0),
            corruption: Corruption::PowerScale { s_fake: 0.3 },
        };
        let tof = Transmission {
            sender_true_pos: P::new(1.0, 2.0),
            corruption: Corruption::TimeShift { b: 4.5 },
        };
        let want_ratio = (1.0f64 / 0.3).sqrt();
        for rx in receivers {
            let d = distance(P::new(1.0, 2.0), rx);
            let est = observe(&model(RangingKind::Rss), &scale, rx).unwrap();
            assert!((est.value / d - want_ratio).abs() < 1e-12);
            for kind in [RangingKind::Stof, RangingKind::Dat] {
                let est = observe(&model(kind), &tof, rx).unwrap();
                assert!((est.value - d - 4.5).abs() < 1e-9, "{kind:?}");
            }
        }
    }

    #[test]
    fn stof_and_dat_agree_for_equal_shift() {
        let tx = Transmission {
            sender_true_pos: P::new(12.0, -7.0),
            corruption: Corruption::TimeShift { b: 3.25 },
        };
        for rx in [P::new(0.0, 0.0), P::new(500.0, 300.0), P::new(-40.0, 8.0)] {
            let a = observe(&model(RangingKind::Stof), &tx, rx).unwrap();
            let b = observe(&model(RangingKind::Dat), &tx, rx).unwrap();
            assert!((a.value - b.value).abs() < 1e-9);
        }
    }

    #[test]
    fn works_in_f32() {
        let p = RadioParams::<f32>::default();
        let m = RangingModel::new(RangingKind::Stof, p);
        let tx = Transmission::honest(Point::new(3.0f32, 4.0));
        let est = observe(&m, &tx, Point::new(0.0, 0.0)).unwrap();
        assert!((est.value - 5.0).abs() < 1e-3);
    }
}
