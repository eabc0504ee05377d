//! Waveguide-to-bus coupling as a function of lateral position, and the
//! coupling schedules that drive each device.
//!
//! The bus is a standing wave across the slab, so a waveguide at lateral
//! position `x` couples with `omega_max * sin(beta0 * x)`. Nodes sit at
//! `k * pi / beta0`; crossing a node flips the sign of the coupling.
//!
//! Units are dimensionless: `omega_max` sets the rate scale and `z` is
//! measured in `1 / omega_max`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlabParams {
    /// Transverse wavenumber of the bus mode.
    pub beta0: f64,
    /// Peak waveguide-bus coupling rate.
    pub omega_max: f64,
}

impl SlabParams {
    pub fn new(beta0: f64, omega_max: f64) -> Result<Self> {
        positive("beta0", beta0)?;
        positive("omega_max", omega_max)?;
        Ok(Self { beta0, omega_max })
    }

    /// Propagation distance of one coupling length, `pi / omega_max`.
    pub fn coupling_length(&self) -> f64 {
        PI / self.omega_max
    }
}

impl Default for SlabParams {
    fn default() -> Self {
        Self { beta0: 1.0, omega_max: 1.0 }
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive { name, value })
    }
}

pub fn coupling_from_position(x: f64, slab: &SlabParams) -> f64 {
    slab.omega_max * (slab.beta0 * x).sin()
}

/// Lateral position producing `target` inside the window centred on node
/// `period * pi / beta0`. The window spans half a lobe either side of the
/// node, so every coupling in `[-omega_max, omega_max]` is reachable and
/// the map is monotone within it. Odd windows mirror the sign.
pub fn position_for_coupling(target: f64, slab: &SlabParams, period: i32) -> Result<f64> {
    let ratio = target / slab.omega_max;
    if ratio.is_nan() || ratio.abs() > 1.0 {
        return Err(Error::UnreachableCoupling { target, omega_max: slab.omega_max });
    }
    let parity = if period.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok((f64::from(period) * PI + parity * ratio.asin()) / slab.beta0)
}

/// Closed-form coupling profile of one waveguide.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Profile {
    Constant { value: f64 },
    /// `amplitude * sin(rate * z)`
    Sin { amplitude: f64, rate: f64 },
    /// `amplitude * cos(rate * z)`
    Cos { amplitude: f64, rate: f64 },
}

impl Profile {
    pub const ZERO: Profile = Profile::Constant { value: 0.0 };

    pub fn at(&self, z: f64) -> f64 {
        match *self {
            Profile::Constant { value } => value,
            Profile::Sin { amplitude, rate } => amplitude * (rate * z).sin(),
            Profile::Cos { amplitude, rate } => amplitude * (rate * z).cos(),
        }
    }

    /// Upper bound on `|at(z)|`.
    pub fn peak(&self) -> f64 {
        match *self {
            Profile::Constant { value } => value.abs(),
            Profile::Sin { amplitude, .. } | Profile::Cos { amplitude, .. } => amplitude.abs(),
        }
    }

    fn scaled(self, factor: f64) -> Self {
        match self {
            Profile::Constant { value } => Profile::Constant { value: value * factor },
            Profile::Sin { amplitude, rate } => Profile::Sin { amplitude: amplitude * factor, rate },
            Profile::Cos { amplitude, rate } => Profile::Cos { amplitude: amplitude * factor, rate },
        }
    }
}

/// Signed couplings of waveguides `1..=n` over `z` in `[0, z_max]`.
/// `profiles[k]` drives waveguide `k + 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingSchedule {
    z_max: f64,
    profiles: Vec<Profile>,
}

impl CouplingSchedule {
    pub fn new(z_max: f64, profiles: Vec<Profile>) -> Result<Self> {
        positive("z_max", z_max)?;
        Ok(Self { z_max, profiles })
    }

    pub fn zero(waveguides: usize, z_max: f64) -> Result<Self> {
        Self::new(z_max, vec![Profile::ZERO; waveguides])
    }

    /// Three-waveguide power divider: waveguides 1 and 2 start at full
    /// coupling and fall as a cosine while waveguide 3 rises as a sine over
    /// a quarter period.
    pub fn divider(z_max: f64, slab: &SlabParams) -> Result<Self> {
        positive("z_max", z_max)?;
        let rate = PI / (2.0 * z_max);
        let falling = Profile::Cos { amplitude: slab.omega_max, rate };
        let rising = Profile::Sin { amplitude: slab.omega_max, rate };
        Self::new(z_max, vec![falling, falling, rising])
    }

    /// Double adiabatic passage for a USB gate on waveguides 1 and 2 with
    /// waveguide 3 as the auxiliary. Waveguide 3 follows a full half cosine
    /// and so changes sign at `z_max / 2`; waveguide 2 tracks waveguide 1
    /// at the fixed ratio `sign * alpha`.
    pub fn usb_gate(alpha: f64, sign: f64, z_max: f64, slab: &SlabParams) -> Result<Self> {
        positive("alpha", alpha)?;
        positive("z_max", z_max)?;
        let rate = PI / z_max;
        let first = Profile::Sin { amplitude: slab.omega_max, rate };
        let second = first.scaled(sign.signum() * alpha);
        let aux = Profile::Cos { amplitude: slab.omega_max, rate };
        Self::new(z_max, vec![first, second, aux])
    }

    pub fn z_max(&self) -> f64 {
        self.z_max
    }

    pub fn waveguide_count(&self) -> usize {
        self.profiles.len()
    }

    pub fn profiles(&self) -> &[Profile] {
        &self.profiles
    }

    /// Coupling of waveguide `waveguide` (1-based) at `z`.
    pub fn coupling(&self, waveguide: usize, z: f64) -> f64 {
        self.profiles[waveguide - 1].at(z)
    }

    pub fn couplings_at(&self, z: f64) -> Vec<f64> {
        self.profiles.iter().map(|p| p.at(z)).collect()
    }

    pub fn peak_coupling(&self) -> f64 {
        self.profiles.iter().map(Profile::peak).fold(0.0, f64::max)
    }

    /// Place waveguide `k + 1` of this schedule onto mode `targets[k]` of a
    /// `mode_count`-mode system (mode 0 is the bus). Every other waveguide
    /// is decoupled.
    pub fn embed(&self, mode_count: usize, targets: &[usize]) -> Result<Self> {
        if targets.len() != self.profiles.len() {
            return Err(Error::DimensionMismatch {
                expected: self.profiles.len(),
                found: targets.len(),
            });
        }
        let mut profiles = vec![Profile::ZERO; mode_count.saturating_sub(1)];
        for (&mode, &profile) in targets.iter().zip(&self.profiles) {
            if mode == 0 || mode >= mode_count {
                return Err(Error::ModeOutOfRange { index: mode, mode_count });
            }
            if profiles[mode - 1] != Profile::ZERO {
                return Err(Error::SameMode(mode));
            }
            profiles[mode - 1] = profile;
        }
        Self::new(self.z_max, profiles)
    }

    /// Evenly spaced sample points including both ends.
    pub fn grid(&self, samples: usize) -> Vec<f64> {
        let n = samples.max(2) - 1;
        (0..=n).map(|k| self.z_max * k as f64 / n as f64).collect()
    }
}

/// Lateral centre `x(z)` of one waveguide.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveguidePath {
    /// Node-centred window the path lives in.
    pub window: i32,
    pub z: Vec<f64>,
    pub x: Vec<f64>,
}

impl WaveguidePath {
    pub fn couplings(&self, slab: &SlabParams) -> Vec<f64> {
        self.x.iter().map(|&x| coupling_from_position(x, slab)).collect()
    }
}

/// Default samples per exported device.
pub const DEFAULT_PATH_SAMPLES: usize = 1001;

/// Invert a schedule into waveguide trajectories. Waveguide `i` is placed
/// in window `2 (i - 1)`, so neighbours sit one full standing-wave
/// wavelength apart and every window has positive parity. A sign change in
/// the schedule moves the waveguide continuously through the window's node.
pub fn schedule_to_paths(
    schedule: &CouplingSchedule,
    slab: &SlabParams,
    samples: usize,
) -> Result<Vec<WaveguidePath>> {
    if schedule.peak_coupling() > slab.omega_max * (1.0 + 1e-12) {
        return Err(Error::UnreachableCoupling {
            target: schedule.peak_coupling(),
            omega_max: slab.omega_max,
        });
    }
    let z = schedule.grid(samples);
    (1..=schedule.waveguide_count())
        .map(|wg| {
            let window = 2 * (wg as i32 - 1);
            let x = z
                .iter()
                .map(|&zz| {
                    let target = schedule.coupling(wg, zz).clamp(-slab.omega_max, slab.omega_max);
                    position_for_coupling(target, slab, window)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(WaveguidePath { window, z: z.clone(), x })
        })
        .collect()
}

/// Antinode position closest to `window`'s node on the positive side.
pub fn antinode(slab: &SlabParams, window: i32) -> f64 {
    (f64::from(window) * PI + FRAC_PI_2) / slab.beta0
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8};

    fn slab() -> SlabParams {
        SlabParams::new(2.5, 1.3).unwrap()
    }

    #[test]
    fn coupling_at_node_peak_and_adjacent_lobe() {
        let s = slab();
        assert_eq!(coupling_from_position(0.0, &s), 0.0);
        assert!((coupling_from_position(PI / (2.0 * s.beta0), &s) - s.omega_max).abs() < 1e-14);
        assert!((coupling_from_position(3.0 * PI / (2.0 * s.beta0), &s) + s.omega_max).abs() < 1e-14);
    }

    #[test]
    fn inverse_examples() {
        let s = SlabParams::default();
        assert_eq!(position_for_coupling(0.0, &s, 0).unwrap(), 0.0);
        let x = position_for_coupling(0.4142, &s, 0).unwrap();
        assert!((x - 0.4142f64.asin()).abs() < 1e-15);
        assert!(matches!(
            position_for_coupling(1.5, &s, 0),
            Err(Error::UnreachableCoupling { .. })
        ));
    }

    #[test]
    fn inverse_round_trips_in_any_window() {
        let s = slab();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let t = rng.random_range(-s.omega_max..s.omega_max);
            let period = rng.random_range(-3..4);
            let x = position_for_coupling(t, &s, period).unwrap();
            assert!((coupling_from_position(x, &s) - t).abs() < 1e-12);
            let node = f64::from(period) * PI / s.beta0;
            assert!((x - node).abs() <= FRAC_PI_2 / s.beta0 + 1e-12);
        }
    }

    #[test]
    fn invalid_slab_rejected() {
        assert!(SlabParams::new(0.0, 1.0).is_err());
        assert!(SlabParams::new(1.0, -1.0).is_err());
        assert!(CouplingSchedule::divider(0.0, &SlabParams::default()).is_err());
        assert!(CouplingSchedule::usb_gate(0.0, 1.0, 10.0, &SlabParams::default()).is_err());
    }

    #[test]
    fn divider_endpoints_and_midpoint() {
        let s = SlabParams::default();
        let d = CouplingSchedule::divider(50.0, &s).unwrap();
        let c0 = d.couplings_at(0.0);
        assert_eq!(c0, vec![1.0, 1.0, 0.0]);
        let c1 = d.couplings_at(50.0);
        assert!(c1[0].abs() < 1e-15 && c1[1].abs() < 1e-15 && (c1[2] - 1.0).abs() < 1e-15);
        for c in d.couplings_at(25.0) {
            assert!((c - FRAC_1_SQRT_2).abs() < 1e-15);
        }
    }

    #[test]
    fn divider_keeps_total_coupling_constant() {
        let s = slab();
        let d = CouplingSchedule::divider(17.0, &s).unwrap();
        for z in d.grid(200) {
            let c = d.couplings_at(z);
            assert!((c[0] * c[0] + c[2] * c[2] - s.omega_max * s.omega_max).abs() < 1e-12);
        }
    }

    #[test]
    fn usb_schedule_examples() {
        let s = SlabParams::default();
        let g = CouplingSchedule::usb_gate(1.0, 1.0, 40.0, &s).unwrap();
        for c in g.couplings_at(10.0) {
            assert!((c - FRAC_1_SQRT_2).abs() < 1e-15);
        }
        assert!(g.coupling(3, 20.0).abs() < 1e-15);
        assert!(g.coupling(3, 30.0) < 0.0);
    }

    #[test]
    fn usb_ratio_constant_and_single_sign_change() {
        let s = slab();
        let alpha = FRAC_PI_8.tan();
        let g = CouplingSchedule::usb_gate(alpha, -1.0, 33.0, &s).unwrap();
        let mut crossings = 0;
        let grid = g.grid(1001);
        for w in grid.windows(2) {
            let (a, b) = (w[0], w[1]);
            let o1 = g.coupling(1, b);
            if o1.abs() > 1e-9 {
                assert!((g.coupling(2, b) / o1 + alpha).abs() < 1e-12);
            }
            if g.coupling(3, a).signum() != g.coupling(3, b).signum() {
                crossings += 1;
            }
        }
        assert_eq!(crossings, 1);
    }

    #[test]
    fn embed_places_profiles() {
        let s = SlabParams::default();
        let g = CouplingSchedule::usb_gate(0.5, 1.0, 10.0, &s).unwrap();
        let e = g.embed(8, &[4, 5, 7]).unwrap();
        assert_eq!(e.waveguide_count(), 7);
        assert_eq!(e.coupling(4, 2.5), g.coupling(1, 2.5));
        assert_eq!(e.coupling(5, 2.5), g.coupling(2, 2.5));
        assert_eq!(e.coupling(7, 2.5), g.coupling(3, 2.5));
        assert_eq!(e.coupling(1, 2.5), 0.0);
        assert!(g.embed(8, &[0, 5, 7]).is_err());
        assert!(g.embed(8, &[4, 4, 7]).is_err());
    }

    #[test]
    fn paths_reproduce_schedule() {
        let s = slab();
        for sched in [
            CouplingSchedule::divider(20.0, &s).unwrap(),
            CouplingSchedule::usb_gate(0.5176, -1.0, 20.0, &s).unwrap(),
        ] {
            let paths = schedule_to_paths(&sched, &s, DEFAULT_PATH_SAMPLES).unwrap();
            for (k, p) in paths.iter().enumerate() {
                for (z, omega) in p.z.iter().zip(p.couplings(&s)) {
                    let want = sched.coupling(k + 1, *z);
                    assert!((omega - want).abs() <= 1e-9 * s.omega_max);
                }
                for w in p.x.windows(2) {
                    assert!((w[1] - w[0]).abs() < 0.05 / s.beta0, "path jumps");
                }
            }
        }
    }

    #[test]
    fn divider_paths_move_between_nodes_and_antinodes() {
        let s = SlabParams::default();
        let paths = schedule_to_paths(&CouplingSchedule::divider(10.0, &s).unwrap(), &s, 101).unwrap();
        let first = &paths[0];
        let third = &paths[2];
        assert!((first.x[0] - antinode(&s, first.window)).abs() < 1e-12);
        assert!((first.x[100] - 0.0).abs() < 1e-6);
        let node3 = f64::from(third.window) * PI;
        assert!((third.x[0] - node3).abs() < 1e-12);
        assert!((third.x[100] - antinode(&s, third.window)).abs() < 1e-6);
    }

    #[test]
    fn zero_schedule_sits_on_nodes() {
        let s = SlabParams::default();
        let paths = schedule_to_paths(&CouplingSchedule::zero(2, 5.0).unwrap(), &s, 11).unwrap();
        for p in paths {
            let node = f64::from(p.window) * PI;
            assert!(p.x.iter().all(|&x| x == node));
        }
    }

    #[test]
    fn x_gate_aux_ends_at_negative_peak() {
        let s = SlabParams::default();
        let g = CouplingSchedule::usb_gate(1.0, 1.0, 30.0, &s).unwrap();
        let paths = schedule_to_paths(&g, &s, 301).unwrap();
        let end = *paths[2].x.last().unwrap();
        assert!((coupling_from_position(end, &s) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn unreachable_schedule_rejected() {
        let s = SlabParams::default();
        let sched = CouplingSchedule::new(1.0, vec![Profile::Constant { value: 2.0 }]).unwrap();
        assert!(schedule_to_paths(&sched, &s, 10).is_err());
    }
}
