//! Swing-up, heading and cart regulation control.
//!
//! The longitudinal force has three parts: a feedforward that places the
//! robot's acceleration at the value `a_d` shaping the pendulum's swing-up
//! energy toward zero, a linearising term `nu1`, and a PD term on the
//! projected position and velocity. The yaw moment cancels the gyroscopic
//! coupling and tracks a heading that points away from the origin, so that
//! pushing the robot forward or backward moves it radially.

use thiserror::Error;

use crate::angle;
use crate::dynamics;
use crate::model::{ControlInput, Gains, Params, ReducedState};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ControlError {
    #[error("desired heading rates are undefined within {eps_origin} m of the origin")]
    OriginSingularity { eps_origin: f64 },
}

/// Which desired-acceleration law drives the swing-up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SwingUpLaw {
    /// `a_d = l psi_dot^2 sin(th) + k_E th_dot cos(th) E`. With the pendulum
    /// equation this gives `E_dot = -m l k_E th_dot^2 cos^2(th) E`.
    #[default]
    Corrected,
    /// `a_d = l psi_dot^2 sin(th) cos(th) - k_E th_dot cos(th) E`, the
    /// sign-flipped variant. Kept for comparison runs; it does not produce
    /// the exponential energy decay.
    Printed,
}

/// Everything the control law computes on the way to `(F, tau)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControlDiagnostics {
    /// Swing-up energy.
    pub energy: f64,
    pub a_d: f64,
    pub nu1: f64,
    pub psi_d: f64,
    pub psi_d_dot: f64,
    pub psi_d_ddot: f64,
    pub e_psi: f64,
    pub e_psi_dot: f64,
    pub e_v: f64,
    pub e_p: f64,
    pub v_e: f64,
    pub v_psi: f64,
    /// The robot was inside the origin disk and the heading target was held.
    pub heading_frozen: bool,
}

/// Pendulum energy relative to upright rest, `1/2 m l^2 th_dot^2 - m g l (1 - cos th)`.
pub fn swing_up_energy(theta: f64, theta_dot: f64, p: &Params) -> f64 {
    let (_, ct) = angle::sin_cos(theta);
    0.5 * p.m * p.l * p.l * theta_dot * theta_dot - p.m * p.g * p.l * (1.0 - ct)
}

pub fn desired_accel(s: &ReducedState, energy: f64, k_e: f64, p: &Params, form: SwingUpLaw) -> f64 {
    let (st, ct) = angle::sin_cos(s.theta);
    let centripetal = p.l * s.psi_dot * s.psi_dot * st;
    let shaping = k_e * s.theta_dot * ct * energy;
    match form {
        SwingUpLaw::Corrected => centripetal + shaping,
        SwingUpLaw::Printed => centripetal * ct - shaping,
    }
}

/// `m g sin cos + m l psi_dot^2 sin cos^2 - m l th_dot^2 sin`.
pub fn nu1(s: &ReducedState, p: &Params) -> f64 {
    let (st, ct) = angle::sin_cos(s.theta);
    p.m * p.g * st * ct + p.m * p.l * s.psi_dot * s.psi_dot * st * ct * ct
        - p.m * p.l * s.theta_dot * s.theta_dot * st
}

/// Force that makes the longitudinal acceleration equal `a_d`.
pub fn feedforward_force(s: &ReducedState, a_d: f64, p: &Params) -> f64 {
    let (st, _) = angle::sin_cos(s.theta);
    (p.big_m + p.m * st * st) * a_d + nu1(s, p)
}

/// Heading pointing away from the origin. Inside the `eps_origin` disk the
/// previous target `frozen` is returned instead.
pub fn desired_heading(x: f64, y: f64, eps_origin: f64, frozen: f64) -> f64 {
    if x.hypot(y) > eps_origin {
        y.atan2(x)
    } else {
        frozen
    }
}

/// First and second time derivatives of the desired heading.
pub fn desired_heading_rates(
    x: f64,
    y: f64,
    x_dot: f64,
    y_dot: f64,
    x_ddot: f64,
    y_ddot: f64,
    eps_origin: f64,
) -> Result<(f64, f64), ControlError> {
    let r2 = x * x + y * y;
    if r2 <= eps_origin * eps_origin || r2 == 0.0 {
        return Err(ControlError::OriginSingularity { eps_origin });
    }
    let cross = x * y_dot - y * x_dot;
    let rate = cross / r2;
    let accel =
        (r2 * (x * y_ddot - y * x_ddot) - cross * (2.0 * x * x_dot + 2.0 * y * y_dot)) / (r2 * r2);
    Ok((rate, accel))
}

/// `(wrap(psi - psi_d), psi_dot - psi_d_dot)` with the wrap into `(-pi, pi]`.
pub fn heading_errors(psi: f64, psi_dot: f64, psi_d: f64, psi_d_dot: f64) -> (f64, f64) {
    (angle::wrap(psi - psi_d), psi_dot - psi_d_dot)
}

/// Yaw moment that cancels the gyroscopic term and imposes
/// `psi_ddot = -k_psi e_psi - k_psi_dot e_psi_dot`.
pub fn heading_torque(
    s: &ReducedState,
    e_psi: f64,
    e_psi_dot: f64,
    gains: &Gains,
    p: &Params,
) -> f64 {
    let (st, ct) = angle::sin_cos(s.theta);
    let ml2 = p.m * p.l * p.l;
    ml2 * s.theta_dot * s.psi_dot * 2.0 * st * ct
        + dynamics::yaw_inertia(s.theta, p) * (-gains.k_psi * e_psi - gains.k_psi_dot * e_psi_dot)
}

/// Velocity- and position-like errors projected on the heading.
pub fn regulation_errors(s: &ReducedState) -> (f64, f64) {
    let (sp, cp) = angle::sin_cos(s.psi);
    (s.v, s.x * cp + s.y * sp)
}

/// `1/2 E^2`.
pub fn energy_lyapunov(energy: f64) -> f64 {
    0.5 * energy * energy
}

/// `1/2 k_psi e_psi^2 + 1/2 k_psi_dot e_psi_dot^2`.
pub fn heading_lyapunov(e_psi: f64, e_psi_dot: f64, gains: &Gains) -> f64 {
    0.5 * gains.k_psi * e_psi * e_psi + 0.5 * gains.k_psi_dot * e_psi_dot * e_psi_dot
}

/// Per-run controller memory: the last desired heading computed outside the
/// origin disk. One context belongs to one simulation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeadingMemory {
    frozen: f64,
}

impl HeadingMemory {
    /// Starts from the current heading target, or from the robot's own
    /// heading when it starts inside the origin disk.
    pub fn new(s: &ReducedState, eps_origin: f64) -> Self {
        HeadingMemory {
            frozen: desired_heading(s.x, s.y, eps_origin, s.psi),
        }
    }

    pub fn frozen(&self) -> f64 {
        self.frozen
    }

    pub fn update(&mut self, s: &ReducedState, eps_origin: f64) {
        self.frozen = desired_heading(s.x, s.y, eps_origin, self.frozen);
    }
}

/// Full control law. Always returns finite outputs for finite states; near
/// the origin the heading target is held and its rates are reported as zero.
pub fn control_law(
    s: &ReducedState,
    gains: &Gains,
    p: &Params,
    form: SwingUpLaw,
    memory: &HeadingMemory,
) -> (ControlInput, ControlDiagnostics) {
    let energy = swing_up_energy(s.theta, s.theta_dot, p);
    let a_d = desired_accel(s, energy, gains.k_e, p, form);
    let nu = nu1(s, p);
    let (e_v, e_p) = regulation_errors(s);
    let force = feedforward_force(s, a_d, p) - gains.k_v * e_v - gains.k_p * e_p;

    let psi_d = desired_heading(s.x, s.y, gains.eps_origin, memory.frozen);
    let (x_dot, y_dot) = crate::model::reduced_to_cartesian_velocity(s);
    // the desired heading acceleration needs the Cartesian acceleration,
    // which only depends on F through a_l
    let (psi_d_dot, frozen) =
        match desired_heading_rates(s.x, s.y, x_dot, y_dot, 0.0, 0.0, gains.eps_origin) {
            Ok((rate, _)) => (rate, false),
            Err(_) => (0.0, true),
        };
    let (e_psi, e_psi_dot) = heading_errors(s.psi, s.psi_dot, psi_d, psi_d_dot);
    let torque = heading_torque(s, e_psi, e_psi_dot, gains, p);
    let input = ControlInput { force, torque };

    let psi_d_ddot = if frozen {
        0.0
    } else {
        let a_l = dynamics::accelerations(s, &input, p)
            .map(|a| a.a_l)
            .unwrap_or(f64::NAN);
        let (sp, cp) = angle::sin_cos(s.psi);
        let x_ddot = a_l * cp - s.v * s.psi_dot * sp;
        let y_ddot = a_l * sp + s.v * s.psi_dot * cp;
        desired_heading_rates(s.x, s.y, x_dot, y_dot, x_ddot, y_ddot, gains.eps_origin)
            .map(|(_, acc)| acc)
            .unwrap_or(0.0)
    };

    let diag = ControlDiagnostics {
        energy,
        a_d,
        nu1: nu,
        psi_d,
        psi_d_dot,
        psi_d_ddot,
        e_psi,
        e_psi_dot,
        e_v,
        e_p,
        v_e: energy_lyapunov(energy),
        v_psi: heading_lyapunov(e_psi, e_psi_dot, gains),
        heading_frozen: frozen,
    };
    (input, diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FullVelocityState;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn random_state(rng: &mut impl Rng) -> ReducedState {
        ReducedState {
            x: rng.gen_range(-50.0..50.0),
            y: rng.gen_range(-50.0..50.0),
            psi: rng.gen_range(-10.0..10.0),
            theta: rng.gen_range(-10.0..10.0),
            v: rng.gen_range(-10.0..10.0),
            psi_dot: rng.gen_range(-5.0..5.0),
            theta_dot: rng.gen_range(-10.0..10.0),
        }
    }

    /// Energy rate along the open-loop vector field, from the pendulum
    /// acceleration returned by the dynamics.
    fn energy_rate(s: &ReducedState, u: &ControlInput, p: &Params) -> f64 {
        let a = dynamics::accelerations(s, u, p).unwrap();
        p.m * p.l * p.l * s.theta_dot * a.theta_ddot - p.m * p.g * p.l * s.theta.sin() * s.theta_dot
    }

    #[test]
    fn swing_up_energy_examples() {
        let p = Params::reference();
        assert_eq!(swing_up_energy(0.0, 0.0, &p), 0.0);
        assert_relative_eq!(swing_up_energy(PI, 0.0, &p), -1.962, epsilon = 1e-12);
        assert_relative_eq!(swing_up_energy(FRAC_PI_2, 2.0, &p), -0.781, epsilon = 1e-12);
    }

    #[test]
    fn desired_accel_examples() {
        let p = Params::reference();
        let rest = ReducedState::default();
        assert_eq!(
            desired_accel(&rest, 0.3, 1.0, &p, SwingUpLaw::Corrected),
            0.0
        );
        let spinning = ReducedState {
            theta: FRAC_PI_2,
            psi_dot: 1.0,
            theta_dot: 3.0,
            ..Default::default()
        };
        assert_relative_eq!(
            desired_accel(&spinning, 0.4, 1.0, &p, SwingUpLaw::Corrected),
            1.0,
            epsilon = 1e-15
        );
        let swinging = ReducedState {
            theta_dot: 1.0,
            ..Default::default()
        };
        assert_relative_eq!(
            desired_accel(&swinging, 0.05, 1.0, &p, SwingUpLaw::Corrected),
            0.05
        );
        assert_relative_eq!(
            desired_accel(&swinging, 0.05, 1.0, &p, SwingUpLaw::Printed),
            -0.05
        );
    }

    /// Evaluates the energy rate under both candidate laws. Only the corrected
    /// one yields `E_dot = -m l k_E th_dot^2 cos^2 E` for the actual dynamics.
    #[test]
    fn corrected_law_gives_exponential_energy_decay() {
        let p = Params::reference();
        let k_e = 1.3;
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut printed_worst: f64 = 0.0;
        for _ in 0..10_000 {
            let s = random_state(&mut rng);
            let e = swing_up_energy(s.theta, s.theta_dot, &p);
            let target = -p.m * p.l * k_e * s.theta_dot.powi(2) * s.theta.cos().powi(2) * e;
            let scale = target.abs().max(1.0);
            for (form, must_match) in [(SwingUpLaw::Corrected, true), (SwingUpLaw::Printed, false)]
            {
                let a_d = desired_accel(&s, e, k_e, &p, form);
                let u = ControlInput::new(feedforward_force(&s, a_d, &p), 0.0);
                let miss = (energy_rate(&s, &u, &p) - target).abs();
                if must_match {
                    assert!(miss < 1e-9 * scale, "{s:?}: {miss}");
                } else {
                    printed_worst = printed_worst.max(miss / scale);
                }
            }
        }
        assert!(printed_worst > 1.0);
    }

    #[test]
    fn nu1_examples() {
        let p = Params::reference();
        let upright = ReducedState {
            theta_dot: 2.0,
            psi_dot: -1.0,
            ..Default::default()
        };
        assert_eq!(nu1(&upright, &p), 0.0);
        assert_relative_eq!(feedforward_force(&upright, 0.7, &p), 0.7);
        let tilted = ReducedState {
            theta: FRAC_PI_4,
            ..Default::default()
        };
        assert_relative_eq!(nu1(&tilted, &p), 0.4905, epsilon = 1e-12);
        let horizontal = ReducedState {
            theta: FRAC_PI_2,
            theta_dot: 1.0,
            ..Default::default()
        };
        assert_relative_eq!(nu1(&horizontal, &p), -0.1, epsilon = 1e-12);
    }

    #[test]
    fn feedforward_closes_through_dynamics() {
        let p = Params::reference();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10_000 {
            let s = random_state(&mut rng);
            let a_d = rng.gen_range(-20.0..20.0);
            let u = ControlInput::new(feedforward_force(&s, a_d, &p), rng.gen_range(-1.0..1.0));
            let a = dynamics::accelerations(&s, &u, &p).unwrap();
            assert!((a.a_l - a_d).abs() < 1e-9, "{} vs {a_d}", a.a_l);
        }
    }

    #[test]
    fn desired_heading_examples() {
        assert_eq!(desired_heading(1.0, 0.0, 1e-3, 5.0), 0.0);
        assert_eq!(desired_heading(0.0, 1.0, 1e-3, 5.0), FRAC_PI_2);
        assert_relative_eq!(
            desired_heading(20.0, 30.0, 1e-3, 5.0),
            0.982793723247329,
            epsilon = 1e-12
        );
        assert_eq!(desired_heading(1e-4, 1e-4, 1e-3, 5.0), 5.0);
        assert_eq!(desired_heading(0.0, 0.0, 0.0, -1.0), -1.0);
    }

    #[test]
    fn desired_heading_rate_examples() {
        let (rate, _) = desired_heading_rates(1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1e-3).unwrap();
        assert_eq!(rate, 1.0);
        let (rate, _) = desired_heading_rates(3.0, -4.0, 1.5, -2.0, 0.0, 0.0, 1e-3).unwrap();
        assert_eq!(rate, 0.0);
        let (_, accel) = desired_heading_rates(1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1e-3).unwrap();
        assert_eq!(accel, 1.0);
        assert_eq!(
            desired_heading_rates(1e-4, 0.0, 1.0, 1.0, 0.0, 0.0, 1e-3),
            Err(ControlError::OriginSingularity { eps_origin: 1e-3 })
        );
    }

    #[test]
    fn heading_rates_match_finite_differences_of_atan2() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = 1e-5;
        for _ in 0..1000 {
            let (x, y): (f64, f64) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            if x.hypot(y) < 0.5 {
                continue;
            }
            let (xd, yd, xdd, ydd) = (
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            );
            let at = |t: f64| {
                let px = x + xd * t + 0.5 * xdd * t * t;
                let py = y + yd * t + 0.5 * ydd * t * t;
                py.atan2(px)
            };
            let unwrap_diff = |a: f64, b: f64| angle::wrap(a - b);
            let rate_fd = unwrap_diff(at(h), at(-h)) / (2.0 * h);
            let accel_fd = (unwrap_diff(at(h), at(0.0)) - unwrap_diff(at(0.0), at(-h))) / (h * h);
            let (rate, accel) = desired_heading_rates(x, y, xd, yd, xdd, ydd, 1e-3).unwrap();
            assert!((rate - rate_fd).abs() < 1e-6, "{rate} vs {rate_fd}");
            assert!(
                (accel - accel_fd).abs() < 1e-3 * accel.abs().max(1.0),
                "{accel} vs {accel_fd}"
            );
        }
    }

    #[test]
    fn heading_error_examples() {
        assert_eq!(heading_errors(0.4, 1.0, 0.4, 0.25), (0.0, 0.75));
        let (e, _) = heading_errors(PI, 0.0, -FRAC_PI_2, 0.0);
        assert_relative_eq!(e, -FRAC_PI_2, epsilon = 1e-15);
        let (e, _) = heading_errors(PI, 0.0, 0.982793723247329, 0.0);
        assert_relative_eq!(e, 2.158798930342464, epsilon = 1e-12);
    }

    #[test]
    fn heading_torque_examples() {
        let p = Params::reference();
        let g = Gains::reference();
        assert_eq!(
            heading_torque(&ReducedState::default(), 0.0, 0.0, &g, &p),
            0.0
        );
        let still_pendulum = ReducedState {
            theta: 0.3,
            psi_dot: 2.0,
            ..Default::default()
        };
        assert_eq!(heading_torque(&still_pendulum, 0.0, 0.0, &g, &p), 0.0);
        assert_relative_eq!(
            heading_torque(&ReducedState::default(), 0.1, 0.0, &g, &p),
            -0.001,
            epsilon = 1e-15
        );
        let gyro = ReducedState {
            theta: FRAC_PI_4,
            theta_dot: 1.0,
            psi_dot: 1.0,
            ..Default::default()
        };
        assert_relative_eq!(
            heading_torque(&gyro, 0.0, 0.0, &g, &p),
            0.1,
            epsilon = 1e-15
        );
    }

    #[test]
    fn heading_torque_imposes_error_dynamics() {
        let p = Params::reference();
        let g = Gains::reference();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10_000 {
            let s = random_state(&mut rng);
            let (e, ed) = (rng.gen_range(-PI..PI), rng.gen_range(-5.0..5.0));
            let tau = heading_torque(&s, e, ed, &g, &p);
            let a = dynamics::accelerations(&s, &ControlInput::new(0.0, tau), &p).unwrap();
            assert!((a.psi_ddot - (-g.k_psi * e - g.k_psi_dot * ed)).abs() < 1e-10);
        }
    }

    #[test]
    fn regulation_error_examples() {
        assert_eq!(regulation_errors(&ReducedState::default()), (0.0, 0.0));
        let start = ReducedState {
            x: 20.0,
            y: 30.0,
            psi: PI,
            v: -0.5,
            ..Default::default()
        };
        assert_eq!(regulation_errors(&start), (-0.5, -20.0));
        let diag = ReducedState {
            x: 1.0,
            y: 1.0,
            psi: FRAC_PI_4,
            ..Default::default()
        };
        let (ev, ep) = regulation_errors(&diag);
        assert_eq!(ev, 0.0);
        assert_relative_eq!(ep, 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn lyapunov_values() {
        let g = Gains::reference();
        assert_eq!(energy_lyapunov(0.0), 0.0);
        assert_eq!(heading_lyapunov(0.0, 0.0, &g), 0.0);
        assert_relative_eq!(energy_lyapunov(-1.962), 1.924722, epsilon = 1e-12);
        assert_relative_eq!(
            heading_lyapunov(2.158799, 0.0, &g),
            2.330206560,
            epsilon = 1e-8
        );
    }

    #[test]
    fn control_law_at_rest_at_origin() {
        let p = Params::reference();
        let g = Gains::reference();
        let s = ReducedState {
            psi: 0.3,
            ..Default::default()
        };
        let mem = HeadingMemory::new(&s, g.eps_origin);
        let (u, d) = control_law(&s, &g, &p, SwingUpLaw::Corrected, &mem);
        assert_eq!((u.force, u.torque), (0.0, 0.0));
        assert!(d.heading_frozen);
        assert_eq!(d.psi_d, 0.3);
        assert_eq!((d.psi_d_dot, d.psi_d_ddot), (0.0, 0.0));
    }

    #[test]
    fn control_law_tilted_at_origin_is_pure_nu1() {
        let p = Params::reference();
        let g = Gains::reference();
        let s = ReducedState {
            theta: FRAC_PI_4,
            ..Default::default()
        };
        let mem = HeadingMemory::new(&s, g.eps_origin);
        let (u, d) = control_law(&s, &g, &p, SwingUpLaw::Corrected, &mem);
        assert_relative_eq!(u.force, 0.4905, epsilon = 1e-12);
        assert_eq!(u.torque, 0.0);
        assert_eq!((d.e_v, d.e_p), (0.0, 0.0));
    }

    #[test]
    fn control_law_at_reference_initial_state() {
        let p = Params::reference();
        let g = Gains::reference();
        let s = crate::model::full_to_reduced(&FullVelocityState::reference(), 1e-9).unwrap();
        let mem = HeadingMemory::new(&s, g.eps_origin);
        let (u, d) = control_law(&s, &g, &p, SwingUpLaw::Corrected, &mem);
        // a_d = 1.5^2 sin(pi/4) ~ 1.59099, F = 1.05 a_d + nu1 + 0.8 * 0.5 + 0.16 * 20
        assert_relative_eq!(d.energy, -0.28732824765599685, epsilon = 1e-12);
        assert_relative_eq!(d.a_d, 2.25 * FRAC_PI_4.sin(), epsilon = 1e-12);
        assert_relative_eq!(
            d.nu1,
            0.4905 + 0.1 * 2.25 * 0.5 * FRAC_PI_4.sin(),
            epsilon = 1e-12
        );
        assert_relative_eq!(u.force, 1.05 * d.a_d + d.nu1 + 0.4 + 3.2, epsilon = 1e-12);
        assert_relative_eq!(d.e_psi, 2.158798930342464, epsilon = 1e-12);
        assert_relative_eq!(d.psi_d_dot, -15.0 / 1300.0, epsilon = 1e-15);
        let expected_tau = (0.01 + 0.1 * 0.5) * (-d.e_psi - 2.0 * (-1.5 + 15.0 / 1300.0));
        assert_relative_eq!(u.torque, expected_tau, epsilon = 1e-12);
        assert!(!d.heading_frozen);
    }

    #[test]
    fn control_outputs_finite_everywhere() {
        let p = Params::reference();
        let g = Gains::reference();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for i in 0..10_000 {
            let mut s = random_state(&mut rng);
            if i % 3 == 0 {
                s.x = 0.0;
                s.y = 0.0;
            }
            let mem = HeadingMemory::new(&s, g.eps_origin);
            let (u, d) = control_law(&s, &g, &p, SwingUpLaw::Corrected, &mem);
            assert!(u.force.is_finite() && u.torque.is_finite());
            assert!(d.e_psi > -PI && d.e_psi <= PI);
            assert!(d.v_e >= 0.0 && d.v_psi >= 0.0);
        }
    }

    #[test]
    fn memory_holds_last_outside_value() {
        let eps = 1e-3;
        let far = ReducedState {
            x: 1.0,
            y: 1.0,
            ..Default::default()
        };
        let mut mem = HeadingMemory::new(&far, eps);
        assert_relative_eq!(mem.frozen(), FRAC_PI_4);
        mem.update(&ReducedState::default(), eps);
        assert_relative_eq!(mem.frozen(), FRAC_PI_4);
        mem.update(
            &ReducedState {
                x: -1.0,
                ..Default::default()
            },
            eps,
        );
        assert_eq!(mem.frozen(), PI);
    }
}
