//! Piecewise linear charging curve.
//!
//! Fast chargers fill the battery quickly up to a first threshold, slower up
//! to a second, and at a trickle rate beyond it. The curve is linear within
//! each segment, so charge durations and the inverse (state of charge after
//! a dwell) are closed-form.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ChargingError {
    #[error("state of charge {soc} kWh already at or above the charge target {target} kWh")]
    AlreadyCharged { soc: f64, target: f64 },
    #[error("state of charge {soc} kWh below the minimum threshold {floor} kWh")]
    BelowThreshold { soc: f64, floor: f64 },
    #[error("charge ceiling coefficient {0} outside (0.2, 1]")]
    BadCeiling(f64),
    #[error("charging curve invalid: {0}")]
    BadCurve(&'static str),
}

/// Three-segment charging curve. Rates are kWh per minute; the breakpoints
/// are fractions of battery capacity where the rate drops.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargingCurve {
    pub rates_kwh_per_min: [f64; 3],
    pub break_fractions: [f64; 2],
}

impl Default for ChargingCurve {
    fn default() -> Self {
        ChargingCurve {
            rates_kwh_per_min: [2.5, 1.5, 0.325],
            break_fractions: [0.84, 0.95],
        }
    }
}

impl ChargingCurve {
    pub fn validate(&self) -> Result<(), ChargingError> {
        let [r1, r2, r3] = self.rates_kwh_per_min;
        if !(r1 > r2 && r2 > r3 && r3 > 0.0) {
            return Err(ChargingError::BadCurve(
                "rates must be strictly decreasing and positive",
            ));
        }
        let [b1, b2] = self.break_fractions;
        if !(0.0 < b1 && b1 < b2 && b2 < 1.0) {
            return Err(ChargingError::BadCurve(
                "breakpoints must satisfy 0 < b1 < b2 < 1",
            ));
        }
        Ok(())
    }

    /// Segment boundaries in kWh for a battery of `capacity` kWh:
    /// [0, b1), [b1, b2), [b2, capacity].
    fn segment_bounds(&self, capacity: f64) -> [(f64, f64, f64); 3] {
        let b1 = self.break_fractions[0] * capacity;
        let b2 = self.break_fractions[1] * capacity;
        [
            (0.0, b1, self.rates_kwh_per_min[0]),
            (b1, b2, self.rates_kwh_per_min[1]),
            (b2, capacity, self.rates_kwh_per_min[2]),
        ]
    }

    /// Minutes to raise the state of charge from `from_kwh` to `to_kwh`,
    /// crossing rate segments as needed. No domain checks.
    pub(crate) fn minutes_between(&self, from_kwh: f64, to_kwh: f64, capacity: f64) -> f64 {
        let mut minutes = 0.0;
        for (lo, hi, rate) in self.segment_bounds(capacity) {
            let span = (to_kwh.min(hi) - from_kwh.max(lo)).max(0.0);
            minutes += span / rate;
        }
        minutes
    }
}

/// One recharge stop in a route trace.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeEvent {
    pub station_node: usize,
    pub soc_before_kwh: f64,
    pub soc_after_kwh: f64,
    pub duration_min: f64,
}

impl ChargeEvent {
    pub fn top_up_kwh(&self) -> f64 {
        self.soc_after_kwh - self.soc_before_kwh
    }
}

/// Minutes to charge from `soc_kwh` up to `ceiling * capacity`.
///
/// The start level must respect the operational floor of 0.2 * capacity and
/// may sit in any rate segment; segments below it contribute nothing.
pub fn charging_time(
    soc_kwh: f64,
    ceiling: f64,
    capacity_kwh: f64,
    curve: &ChargingCurve,
) -> Result<f64, ChargingError> {
    if !(ceiling > 0.2 && ceiling <= 1.0) {
        return Err(ChargingError::BadCeiling(ceiling));
    }
    let floor = 0.2 * capacity_kwh;
    let target = ceiling * capacity_kwh;
    if soc_kwh < floor - 1e-9 {
        return Err(ChargingError::BelowThreshold {
            soc: soc_kwh,
            floor,
        });
    }
    if soc_kwh > target + 1e-9 {
        return Err(ChargingError::AlreadyCharged {
            soc: soc_kwh,
            target,
        });
    }
    Ok(curve.minutes_between(soc_kwh, target, capacity_kwh))
}

/// State of charge (kWh) after charging for `elapsed_min` minutes starting
/// from `soc_kwh`, capped at the battery capacity. Exact inverse of
/// [`charging_time`] on its domain.
pub fn soc_after(soc_kwh: f64, elapsed_min: f64, capacity_kwh: f64, curve: &ChargingCurve) -> f64 {
    let mut soc = soc_kwh.max(0.0).min(capacity_kwh);
    let mut remaining = elapsed_min.max(0.0);
    for (lo, hi, rate) in curve.segment_bounds(capacity_kwh) {
        if soc >= hi || remaining <= 0.0 {
            continue;
        }
        let start = soc.max(lo);
        let minutes_in_segment = (hi - start) / rate;
        if remaining >= minutes_in_segment {
            remaining -= minutes_in_segment;
            soc = hi;
        } else {
            soc = start + remaining * rate;
            remaining = 0.0;
        }
    }
    soc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const CAPACITY: f64 = 150.0;

    fn curve() -> ChargingCurve {
        ChargingCurve::default()
    }

    #[test]
    fn default_curve_is_valid() {
        curve().validate().unwrap();
    }

    #[test]
    fn nothing_to_charge_takes_zero_minutes() {
        let t = charging_time(120.0, 0.8, CAPACITY, &curve()).unwrap();
        assert_eq!(t, 0.0);
    }

    #[test]
    fn low_ceiling_single_segment() {
        let t = charging_time(30.0, 0.8, CAPACITY, &curve()).unwrap();
        assert!((t - 36.0).abs() < 1e-9, "got {t}");
    }

    #[test]
    fn mid_ceiling_two_segments() {
        // (135 - 126) / 1.5 + (126 - 30) / 2.5
        let t = charging_time(30.0, 0.9, CAPACITY, &curve()).unwrap();
        assert!((t - 44.4).abs() < 1e-9, "got {t}");
    }

    #[test]
    fn full_ceiling_three_segments() {
        // (150 - 142.5) / 0.325 + (142.5 - 126) / 1.5 + (126 - 30) / 2.5
        let t = charging_time(30.0, 1.0, CAPACITY, &curve()).unwrap();
        assert!((t - 72.47692307692308).abs() < 1e-9, "got {t}");
    }

    #[test]
    fn start_level_inside_higher_segment() {
        // From 130 kWh only the tail of segment 2 and segment 3 remain.
        let t = charging_time(130.0, 1.0, CAPACITY, &curve()).unwrap();
        let expect = (142.5 - 130.0) / 1.5 + (150.0 - 142.5) / 0.325;
        assert!((t - expect).abs() < 1e-9);
    }

    #[test]
    fn rejects_out_of_domain_inputs() {
        assert!(matches!(
            charging_time(125.0, 0.8, CAPACITY, &curve()),
            Err(ChargingError::AlreadyCharged { .. })
        ));
        assert!(matches!(
            charging_time(10.0, 0.8, CAPACITY, &curve()),
            Err(ChargingError::BelowThreshold { .. })
        ));
        assert!(matches!(
            charging_time(30.0, 0.1, CAPACITY, &curve()),
            Err(ChargingError::BadCeiling(_))
        ));
        assert!(matches!(
            charging_time(30.0, 1.2, CAPACITY, &curve()),
            Err(ChargingError::BadCeiling(_))
        ));
    }

    #[test]
    fn continuous_in_ceiling_at_breakpoints() {
        let c = curve();
        for brk in [0.84, 0.95] {
            let below = charging_time(30.0, brk - 1e-12, CAPACITY, &c).unwrap();
            let at = charging_time(30.0, brk, CAPACITY, &c).unwrap();
            let above = charging_time(30.0, brk + 1e-12, CAPACITY, &c).unwrap();
            assert!((at - below).abs() < 1e-9, "break {brk}");
            assert!((above - at).abs() < 1e-9, "break {brk}");
        }
    }

    #[test]
    fn marginal_minutes_per_kwh_step_at_breakpoints() {
        let c = curve();
        let eps = 1e-6;
        for (frac, rate) in [(0.5, 2.5), (0.9, 1.5), (0.97, 0.325)] {
            let lo = charging_time(30.0, frac, CAPACITY, &c).unwrap();
            let hi = charging_time(30.0, frac + eps, CAPACITY, &c).unwrap();
            let marginal = (hi - lo) / (eps * CAPACITY);
            assert!(
                (marginal - 1.0 / rate).abs() < 1e-6,
                "gamma {frac}: marginal {marginal}"
            );
        }
    }

    #[test]
    fn monotone_in_ceiling_and_start() {
        let c = curve();
        let mut prev = -1.0;
        for gamma in [0.3, 0.5, 0.8, 0.9, 1.0] {
            let t = charging_time(30.0, gamma, CAPACITY, &c).unwrap();
            assert!(t > prev);
            prev = t;
        }
        let mut prev = f64::MAX;
        for soc in [30.0, 60.0, 90.0, 119.0] {
            let t = charging_time(soc, 0.8, CAPACITY, &c).unwrap();
            assert!(t < prev);
            prev = t;
        }
    }

    #[test]
    fn soc_after_identity_and_cap() {
        let c = curve();
        assert_eq!(soc_after(42.0, 0.0, CAPACITY, &c), 42.0);
        assert_eq!(soc_after(42.0, 1e6, CAPACITY, &c), CAPACITY);
    }

    #[test]
    fn soc_after_inverts_branch_one() {
        let soc = soc_after(30.0, 36.0, CAPACITY, &curve());
        assert!((soc - 120.0).abs() < 1e-9, "got {soc}");
    }

    #[test]
    fn full_charge_from_floor_matches_curve_tail() {
        // From 0.2 * B the full charge takes 72.477 min; from empty the head
        // adds 30 kWh at the fast rate, 12 more minutes.
        let c = curve();
        let from_floor = charging_time(30.0, 1.0, CAPACITY, &c).unwrap();
        let from_empty = c.minutes_between(0.0, CAPACITY, CAPACITY);
        assert!((from_empty - from_floor - 12.0).abs() < 1e-9);
        assert!((from_empty - 84.47692307692308).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn charge_then_wait_round_trips(
            soc in 30.0_f64..150.0,
            gamma in 0.21_f64..1.0,
        ) {
            let c = curve();
            let target = gamma * CAPACITY;
            prop_assume!(soc <= target);
            let minutes = charging_time(soc, gamma, CAPACITY, &c).unwrap();
            let reached = soc_after(soc, minutes, CAPACITY, &c);
            prop_assert!((reached - target).abs() < 1e-9);
        }

        #[test]
        fn soc_after_never_decreases(
            soc in 0.0_f64..150.0,
            wait in 0.0_f64..200.0,
        ) {
            let reached = soc_after(soc, wait, CAPACITY, &curve());
            prop_assert!(reached >= soc - 1e-12);
            prop_assert!(reached <= CAPACITY + 1e-12);
        }
    }
}
