//! Start-stop energy model for electric ground-service tractors.
//!
//! A tractor leg is modeled as three phases: uniform acceleration from rest
//! to the cruise speed, constant-speed cruise, and uniform deceleration back
//! to rest. Acceleration draws extra power to change the motion state;
//! deceleration runs the motor in reverse and recuperates part of the
//! mechanical energy into the battery. The constant-speed baseline model
//! (no start-stop phases) is kept alongside for comparison runs.
//!
//! Energies are in kWh, powers in watts, distances in meters, speeds in m/s,
//! and model-level times in minutes.

use thiserror::Error;

/// Joule to kilowatt-hour conversion, applied exactly once per energy term.
pub const JOULE_TO_KWH: f64 = 1.0 / 3_600_000.0;

/// Fraction of battery capacity below which a tractor must not drop.
pub const MIN_SOC_FRACTION: f64 = 0.2;

#[derive(Debug, Error, PartialEq)]
pub enum EnergyError {
    #[error("speed must be nonnegative, got {0}")]
    NegativeSpeed(f64),
    #[error("distance must be positive, got {0}")]
    NonPositiveDistance(f64),
    #[error("speed must be positive, got {0}")]
    NonPositiveSpeed(f64),
    #[error("distance {0} outside the supported [0, 100] m profile range")]
    ProfileRange(f64),
    #[error("speed {speed} needs {needed:.1} m to reach cruise; profile segment is only 100 m")]
    ProfileSpeedTooHigh { speed: f64, needed: f64 },
    #[error("towing distance {distance} m leaves no cruise phase (needs more than {needed:.1} m)")]
    DegenerateTowing { distance: f64, needed: f64 },
    #[error("vehicle parameter {0} must be strictly positive")]
    NonPositiveParam(&'static str),
    #[error("efficiency chains must satisfy recuperation < 1 < discharge, got discharge {discharge} and recuperation {recuperation}")]
    EfficiencyChain { discharge: f64, recuperation: f64 },
}

/// Physical and electrical constants of one tractor model.
///
/// All tractors in a fleet share one parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct VehicleParams {
    /// Rolling friction coefficient (dimensionless).
    pub rolling_friction: f64,
    /// Tractor mass (kg).
    pub mass_kg: f64,
    /// Gravitational acceleration (N/kg).
    pub gravity: f64,
    /// Air density (kg/m^3).
    pub air_density: f64,
    /// Frontal area (m^2).
    pub frontal_area_m2: f64,
    /// Aerodynamic drag coefficient (dimensionless).
    pub drag_coeff: f64,
    /// Acceleration magnitude during travel (m/s^2).
    pub travel_accel: f64,
    /// Acceleration magnitude during towing (m/s^2).
    pub towing_accel: f64,
    /// Towing speed (m/s).
    pub towing_speed: f64,
    /// Towing distance per service (m).
    pub towing_distance_m: f64,
    /// Drive motor output efficiency when discharging.
    pub motor_out_eff: f64,
    /// Drive motor input efficiency when recuperating.
    pub motor_in_eff: f64,
    /// Battery output efficiency when discharging.
    pub battery_out_eff: f64,
    /// Battery input efficiency when recuperating.
    pub battery_in_eff: f64,
    /// Battery capacity (kWh).
    pub battery_capacity_kwh: f64,
}

impl VehicleParams {
    /// Stock electric tractor data set used throughout the tool.
    pub fn default_tractor() -> Self {
        VehicleParams {
            rolling_friction: 0.03,
            mass_kg: 15_300.0,
            gravity: 9.81,
            air_density: 1.2041,
            frontal_area_m2: 3.912,
            drag_coeff: 0.7,
            travel_accel: 0.8,
            towing_accel: 0.6,
            towing_speed: 10.0 / 3.6,
            towing_distance_m: 50.0,
            motor_out_eff: 1.184692,
            motor_in_eff: 0.846055,
            battery_out_eff: 1.112434,
            battery_in_eff: 0.928465,
            battery_capacity_kwh: 150.0,
        }
    }

    /// Combined discharge chain: one mechanical joule costs this many battery joules.
    pub fn discharge_chain(&self) -> f64 {
        self.motor_out_eff * self.battery_out_eff
    }

    /// Combined recuperation chain: one recovered mechanical joule returns this
    /// many battery joules.
    pub fn recuperation_chain(&self) -> f64 {
        self.motor_in_eff * self.battery_in_eff
    }

    /// Minimum admissible state of charge (kWh).
    pub fn soc_floor_kwh(&self) -> f64 {
        MIN_SOC_FRACTION * self.battery_capacity_kwh
    }

    pub fn validate(&self) -> Result<(), EnergyError> {
        let fields = [
            ("rolling_friction", self.rolling_friction),
            ("mass_kg", self.mass_kg),
            ("gravity", self.gravity),
            ("air_density", self.air_density),
            ("frontal_area_m2", self.frontal_area_m2),
            ("drag_coeff", self.drag_coeff),
            ("travel_accel", self.travel_accel),
            ("towing_accel", self.towing_accel),
            ("towing_speed", self.towing_speed),
            ("towing_distance_m", self.towing_distance_m),
            ("motor_out_eff", self.motor_out_eff),
            ("motor_in_eff", self.motor_in_eff),
            ("battery_out_eff", self.battery_out_eff),
            ("battery_in_eff", self.battery_in_eff),
            ("battery_capacity_kwh", self.battery_capacity_kwh),
        ];
        for (name, value) in fields {
            if !(value > 0.0) {
                return Err(EnergyError::NonPositiveParam(name));
            }
        }
        let discharge = self.discharge_chain();
        let recuperation = self.recuperation_chain();
        if !(recuperation < 1.0 && 1.0 < discharge) {
            return Err(EnergyError::EfficiencyChain {
                discharge,
                recuperation,
            });
        }
        Ok(())
    }

    fn rolling_force(&self, mass_kg: f64) -> f64 {
        self.rolling_friction * mass_kg * self.gravity
    }

    fn drag_factor(&self) -> f64 {
        0.5 * self.air_density * self.frontal_area_m2 * self.drag_coeff
    }
}

/// Aircraft size class, determining towed mass and power-supply demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AircraftClass {
    Medium,
    Heavy,
    SuperHeavy,
}

impl AircraftClass {
    pub const ALL: [AircraftClass; 3] = [
        AircraftClass::Medium,
        AircraftClass::Heavy,
        AircraftClass::SuperHeavy,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            AircraftClass::Medium => "medium",
            AircraftClass::Heavy => "heavy",
            AircraftClass::SuperHeavy => "super_heavy",
        }
    }

    pub fn parse(s: &str) -> Option<AircraftClass> {
        match s {
            "medium" => Some(AircraftClass::Medium),
            "heavy" => Some(AircraftClass::Heavy),
            "super_heavy" => Some(AircraftClass::SuperHeavy),
            _ => None,
        }
    }
}

/// Per-aircraft service demand: towed mass plus the power-supply rates and
/// durations the tractor covers while the aircraft is on stand (air
/// conditioning, lighting, engine launch).
#[derive(Debug, Clone, PartialEq)]
pub struct AircraftServiceProfile {
    pub class: AircraftClass,
    /// Towed aircraft mass (kg). Class defaults are representative, not measured.
    pub mass_kg: f64,
    /// Air-conditioning supply rate (kW) and duration (min).
    pub air_kw: f64,
    pub air_min: f64,
    /// Lighting supply rate (kW) and duration (min).
    pub lighting_kw: f64,
    pub lighting_min: f64,
    /// Engine-launch supply rate (kW) and duration (min).
    pub launch_kw: f64,
    pub launch_min: f64,
}

impl AircraftServiceProfile {
    pub fn for_class(class: AircraftClass) -> Self {
        match class {
            AircraftClass::Medium => AircraftServiceProfile {
                class,
                mass_kg: 75_000.0,
                air_kw: 175.0,
                air_min: 2.0,
                lighting_kw: 3.7,
                lighting_min: 2.0,
                launch_kw: 384.0,
                launch_min: 0.75,
            },
            AircraftClass::Heavy => AircraftServiceProfile {
                class,
                mass_kg: 180_000.0,
                air_kw: 300.0,
                air_min: 2.0,
                lighting_kw: 14.1,
                lighting_min: 2.0,
                launch_kw: 783.0,
                launch_min: 0.75,
            },
            AircraftClass::SuperHeavy => AircraftServiceProfile {
                class,
                mass_kg: 350_000.0,
                air_kw: 350.0,
                air_min: 2.0,
                lighting_kw: 33.9,
                lighting_min: 2.0,
                launch_kw: 783.0,
                launch_min: 0.75,
            },
        }
    }
}

/// Instantaneous mechanical power (W) at a given speed and acceleration.
///
/// Road gradients on aprons are below 1%, so the gravity component is zero.
/// Negative when braking hard enough that the motion resists dominate.
pub fn mech_power(speed: f64, accel: f64, p: &VehicleParams) -> Result<f64, EnergyError> {
    if speed < 0.0 {
        return Err(EnergyError::NegativeSpeed(speed));
    }
    Ok(p.rolling_force(p.mass_kg) * speed
        + p.drag_factor() * speed.powi(3)
        + p.mass_kg * accel * speed)
}

/// Battery-side power (W) for a mechanical power demand.
///
/// Positive demand is amplified through the discharge chain; negative
/// (recuperating) power is attenuated on its way back into the battery.
pub fn battery_power(mech_watts: f64, p: &VehicleParams) -> f64 {
    if mech_watts >= 0.0 {
        mech_watts * p.discharge_chain()
    } else {
        mech_watts * p.recuperation_chain()
    }
}

/// Acceleration-phase battery energy (kWh): 0 -> `speed` at `accel` over a
/// distance of speed^2 / (2 accel), for an effective mass.
fn accel_phase_kwh(mass_kg: f64, speed: f64, accel: f64, p: &VehicleParams) -> f64 {
    let force = p.rolling_force(mass_kg) + p.drag_factor() * speed * speed / 2.0 + mass_kg * accel;
    force * (speed * speed / (2.0 * accel)) * p.discharge_chain() * JOULE_TO_KWH
}

/// Cruise-phase battery energy (kWh) over `distance` meters at `speed`.
fn cruise_phase_kwh(mass_kg: f64, speed: f64, distance: f64, p: &VehicleParams) -> f64 {
    let force = p.rolling_force(mass_kg) + p.drag_factor() * speed * speed;
    force * distance * p.discharge_chain() * JOULE_TO_KWH
}

/// Deceleration-phase battery energy (kWh); negative when the recuperated
/// braking energy exceeds the resistive losses.
fn decel_phase_kwh(mass_kg: f64, speed: f64, accel: f64, p: &VehicleParams) -> f64 {
    let force = p.rolling_force(mass_kg) + p.drag_factor() * speed * speed / 2.0 - mass_kg * accel;
    force * (speed * speed / (2.0 * accel)) * p.recuperation_chain() * JOULE_TO_KWH
}

/// Battery energy (kWh) for one travel leg of `distance_m` meters with a
/// full stop at both ends and cruise speed `speed`.
///
/// Short legs that cannot reach the cruise speed use a triangular profile
/// with peak sqrt(accel * distance) and no cruise phase.
pub fn travel_segment_energy(
    distance_m: f64,
    speed: f64,
    p: &VehicleParams,
) -> Result<f64, EnergyError> {
    if !(distance_m > 0.0) {
        return Err(EnergyError::NonPositiveDistance(distance_m));
    }
    if !(speed > 0.0) {
        return Err(EnergyError::NonPositiveSpeed(speed));
    }
    let a = p.travel_accel;
    let ramp_distance = speed * speed / a;
    if distance_m < ramp_distance {
        let peak = (a * distance_m).sqrt();
        return Ok(accel_phase_kwh(p.mass_kg, peak, a, p) + decel_phase_kwh(p.mass_kg, peak, a, p));
    }
    Ok(accel_phase_kwh(p.mass_kg, speed, a, p)
        + cruise_phase_kwh(p.mass_kg, speed, distance_m - ramp_distance, p)
        + decel_phase_kwh(p.mass_kg, speed, a, p))
}

/// Cumulative start-stop energy (kWh) after `l_partial` meters of a 100 m
/// segment driven at cruise speed `speed`.
///
/// Piecewise over the acceleration, cruise, and deceleration sections of
/// the segment; continuous at both section boundaries. The final section's
/// slope is negative whenever braking recuperation beats the resistive
/// losses.
pub fn cumulative_profile(
    l_partial: f64,
    speed: f64,
    p: &VehicleParams,
) -> Result<f64, EnergyError> {
    if !(0.0..=100.0).contains(&l_partial) {
        return Err(EnergyError::ProfileRange(l_partial));
    }
    if !(speed > 0.0) {
        return Err(EnergyError::NonPositiveSpeed(speed));
    }
    let a = p.travel_accel;
    let half_ramp = speed * speed / (2.0 * a);
    if 2.0 * half_ramp > 100.0 {
        return Err(EnergyError::ProfileSpeedTooHigh {
            speed,
            needed: 2.0 * half_ramp,
        });
    }
    let accel_force =
        p.rolling_force(p.mass_kg) + p.drag_factor() * speed * speed / 2.0 + p.mass_kg * a;
    let cruise_force = p.rolling_force(p.mass_kg) + p.drag_factor() * speed * speed;
    let decel_force =
        p.rolling_force(p.mass_kg) + p.drag_factor() * speed * speed / 2.0 - p.mass_kg * a;
    let full_accel = accel_phase_kwh(p.mass_kg, speed, a, p);
    if l_partial < half_ramp {
        Ok(accel_force * l_partial * p.discharge_chain() * JOULE_TO_KWH)
    } else if l_partial < 100.0 - half_ramp {
        Ok(
            full_accel
                + cruise_force * (l_partial - half_ramp) * p.discharge_chain() * JOULE_TO_KWH,
        )
    } else {
        let full_cruise = cruise_phase_kwh(p.mass_kg, speed, 100.0 - 2.0 * half_ramp, p);
        Ok(full_accel
            + full_cruise
            + decel_force
                * (l_partial - (100.0 - half_ramp))
                * p.recuperation_chain()
                * JOULE_TO_KWH)
    }
}

/// Constant-speed baseline energy (kWh): linear in distance, no start-stop
/// phases and no recuperation.
pub fn traditional_energy(
    distance_m: f64,
    speed: f64,
    p: &VehicleParams,
) -> Result<f64, EnergyError> {
    if distance_m < 0.0 {
        return Err(EnergyError::NonPositiveDistance(distance_m));
    }
    if !(speed > 0.0) {
        return Err(EnergyError::NonPositiveSpeed(speed));
    }
    let force = p.rolling_force(p.mass_kg) + p.drag_factor() * speed * speed;
    Ok(force * distance_m * p.discharge_chain() * JOULE_TO_KWH)
}

/// Towing energy (kWh) for one aircraft: the tractor plus towed mass runs
/// the fixed towing distance at towing speed with start-stop phases.
pub fn towing_energy(
    profile: &AircraftServiceProfile,
    p: &VehicleParams,
) -> Result<f64, EnergyError> {
    let u = p.towing_speed;
    let eps = p.towing_accel;
    let w = p.towing_distance_m;
    let ramp_distance = u * u / eps;
    if w <= ramp_distance {
        return Err(EnergyError::DegenerateTowing {
            distance: w,
            needed: ramp_distance,
        });
    }
    let mass = p.mass_kg + profile.mass_kg;
    Ok(accel_phase_kwh(mass, u, eps, p)
        + cruise_phase_kwh(mass, u, w - ramp_distance, p)
        + decel_phase_kwh(mass, u, eps, p))
}

/// Power-supply energy (kWh) while the aircraft is on stand, replacing its
/// auxiliary power unit. Rates are kW, durations minutes.
pub fn apu_energy(profile: &AircraftServiceProfile) -> f64 {
    (profile.air_kw * profile.air_min
        + profile.lighting_kw * profile.lighting_min
        + profile.launch_kw * profile.launch_min)
        / 60.0
}

/// Total service energy (kWh) at a stand: towing plus power supply.
pub fn service_energy(
    profile: &AircraftServiceProfile,
    p: &VehicleParams,
) -> Result<f64, EnergyError> {
    Ok(towing_energy(profile, p)? + apu_energy(profile))
}

/// Service time (min) at a stand: towing kinematics plus supply durations.
///
/// Independent of the towed mass; only the supply durations vary by class.
pub fn service_time(profile: &AircraftServiceProfile, p: &VehicleParams) -> f64 {
    (p.towing_distance_m / p.towing_speed + p.towing_speed / p.towing_accel) / 60.0
        + profile.air_min
        + profile.lighting_min
        + profile.launch_min
}

/// Travel time (min) for one leg: cruise time plus one start-stop overhead.
pub fn travel_time(distance_m: f64, speed: f64, p: &VehicleParams) -> f64 {
    (distance_m / speed + speed / p.travel_accel) / 60.0
}

/// Which travel-energy law the route simulator applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyModel {
    /// Three-phase start-stop model.
    StartStop,
    /// Constant-speed baseline.
    Traditional,
}

impl EnergyModel {
    /// Leg energy (kWh) under this model.
    pub fn leg_energy(
        &self,
        distance_m: f64,
        speed: f64,
        p: &VehicleParams,
    ) -> Result<f64, EnergyError> {
        if distance_m == 0.0 {
            return Ok(0.0);
        }
        match self {
            EnergyModel::StartStop => travel_segment_energy(distance_m, speed, p),
            EnergyModel::Traditional => traditional_energy(distance_m, speed, p),
        }
    }

    /// Lowest state of charge reached within a leg, relative to the
    /// departure SoC. Under the start-stop model the trough sits at the end
    /// of the cruise phase, before braking recuperates energy back.
    pub fn leg_trough_drop(
        &self,
        distance_m: f64,
        speed: f64,
        p: &VehicleParams,
    ) -> Result<f64, EnergyError> {
        if distance_m == 0.0 {
            return Ok(0.0);
        }
        match self {
            EnergyModel::Traditional => traditional_energy(distance_m, speed, p),
            EnergyModel::StartStop => {
                let a = p.travel_accel;
                let ramp_distance = speed * speed / a;
                let (peak, cruise) = if distance_m < ramp_distance {
                    ((a * distance_m).sqrt(), 0.0)
                } else {
                    (speed, distance_m - ramp_distance)
                };
                let pre_brake = accel_phase_kwh(p.mass_kg, peak, a, p)
                    + cruise_phase_kwh(p.mass_kg, peak, cruise, p);
                let total = pre_brake + decel_phase_kwh(p.mass_kg, peak, a, p);
                Ok(pre_brake.max(total))
            }
        }
    }
}
