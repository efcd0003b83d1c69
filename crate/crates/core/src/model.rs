//! Domain types for the pendulum-carrying differential-drive robot.
//!
//! The simulator works in a reduced state where the no-side-slip constraint
//! holds by construction: the robot velocity is stored as a signed speed `v`
//! along the heading instead of a Cartesian pair. Conversions to and from
//! the Cartesian description live here, together with the wheel-level
//! reconstructions, which are reporting-only.

use thiserror::Error;

use crate::angle;

/// Default relative tolerance for the no-side-slip check in [`full_to_reduced`].
pub const DEFAULT_CONSTRAINT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("parameter `{name}` must be {requirement}, got {value}")]
    InvalidParameter {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },
    #[error("lateral velocity {residual:e} violates the no-slip constraint (allowed {allowed:e})")]
    ConstraintViolation { residual: f64, allowed: f64 },
    #[error("state component `{0}` is not finite")]
    NonFinite(&'static str),
}

fn require(
    name: &'static str,
    value: f64,
    ok: bool,
    requirement: &'static str,
) -> Result<(), ModelError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter {
            name,
            requirement,
            value,
        })
    }
}

/// Physical constants of the robot and the pendulum (SI units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    /// Total robot mass.
    pub big_m: f64,
    /// Pendulum bob mass.
    pub m: f64,
    /// Effective yaw inertia of the robot.
    pub j: f64,
    /// Pendulum length.
    pub l: f64,
    pub g: f64,
    /// Half the wheel separation. Only used for wheel reconstructions.
    pub d: f64,
    /// Wheel radius. Only used for wheel reconstructions.
    pub r: f64,
}

impl Params {
    /// Wheel geometry used when none is given. The values are arbitrary;
    /// neither enters the equations of motion.
    pub const DEFAULT_HALF_TRACK: f64 = 0.2;
    pub const DEFAULT_WHEEL_RADIUS: f64 = 0.1;

    /// `[M, m, J, l, g] = [1, 0.1, 0.01, 1, 9.81]` with default wheel geometry.
    pub fn reference() -> Self {
        Params {
            big_m: 1.0,
            m: 0.1,
            j: 0.01,
            l: 1.0,
            g: 9.81,
            d: Self::DEFAULT_HALF_TRACK,
            r: Self::DEFAULT_WHEEL_RADIUS,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        require("M", self.big_m, self.big_m > 0.0, "positive")?;
        require("m", self.m, self.m > 0.0, "positive")?;
        require("J", self.j, self.j > 0.0, "positive")?;
        require("l", self.l, self.l > 0.0, "positive")?;
        require("g", self.g, self.g > 0.0, "positive")?;
        require("d", self.d, self.d > 0.0, "positive")?;
        require("R", self.r, self.r > 0.0, "positive")
    }
}

/// Controller constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gains {
    pub k_e: f64,
    pub k_p: f64,
    pub k_v: f64,
    pub k_psi: f64,
    pub k_psi_dot: f64,
    /// Radius around the origin inside which the desired heading is frozen.
    pub eps_origin: f64,
}

impl Gains {
    pub const DEFAULT_EPS_ORIGIN: f64 = 1e-3;

    /// The reference gain vector `[1, 0.8, 0.16, 1, 2]`, read with `0.8` as the
    /// velocity gain and `0.16` as the position gain. That ordering makes the
    /// cart loop critically damped for the upright effective mass `M = 1`.
    pub fn reference() -> Self {
        Gains {
            k_e: 1.0,
            k_p: 0.16,
            k_v: 0.8,
            k_psi: 1.0,
            k_psi_dot: 2.0,
            eps_origin: Self::DEFAULT_EPS_ORIGIN,
        }
    }

    /// Validates signs. `k_e = 0` is allowed and disables swing-up.
    pub fn validate(&self) -> Result<(), ModelError> {
        require("k_E", self.k_e, self.k_e >= 0.0, "non-negative")?;
        require("k_p", self.k_p, self.k_p >= 0.0, "non-negative")?;
        require("k_v", self.k_v, self.k_v >= 0.0, "non-negative")?;
        require("k_psi", self.k_psi, self.k_psi > 0.0, "positive")?;
        require(
            "k_psi_dot",
            self.k_psi_dot,
            self.k_psi_dot > 0.0,
            "positive",
        )?;
        require(
            "eps_origin",
            self.eps_origin,
            self.eps_origin >= 0.0,
            "non-negative",
        )
    }

    /// Whether the cart regulation loop is critically or over damped for the
    /// upright effective mass `M`, i.e. `k_v^2 >= 4 M k_p`. Underdamped gains
    /// are accepted but let the robot overshoot the origin, where the desired
    /// heading rate is unbounded.
    pub fn cart_loop_damped(&self, p: &Params) -> bool {
        self.k_v * self.k_v >= 4.0 * p.big_m * self.k_p * (1.0 - 1e-12)
    }
}

/// State of the reduced system on `SE(2) x S^1` plus velocities.
///
/// Angles are stored unwrapped.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReducedState {
    pub x: f64,
    pub y: f64,
    pub psi: f64,
    pub theta: f64,
    /// Signed speed along the heading.
    pub v: f64,
    pub psi_dot: f64,
    pub theta_dot: f64,
}

impl ReducedState {
    pub const DIM: usize = 7;

    pub fn to_array(&self) -> [f64; 7] {
        [
            self.x,
            self.y,
            self.psi,
            self.theta,
            self.v,
            self.psi_dot,
            self.theta_dot,
        ]
    }

    pub fn from_array(a: [f64; 7]) -> Self {
        ReducedState {
            x: a[0],
            y: a[1],
            psi: a[2],
            theta: a[3],
            v: a[4],
            psi_dot: a[5],
            theta_dot: a[6],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    /// Distance of the robot from the origin.
    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// Effective longitudinal force and yaw moment.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControlInput {
    pub force: f64,
    pub torque: f64,
}

impl ControlInput {
    pub fn new(force: f64, torque: f64) -> Self {
        ControlInput { force, torque }
    }
}

/// State with Cartesian robot velocity, as initial conditions are usually given.
/// May violate the no-slip constraint.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FullVelocityState {
    pub x: f64,
    pub y: f64,
    pub psi: f64,
    pub theta: f64,
    pub x_dot: f64,
    pub y_dot: f64,
    pub psi_dot: f64,
    pub theta_dot: f64,
}

impl FullVelocityState {
    /// `[x, y, psi, x_dot, y_dot, psi_dot, theta, theta_dot] = [20, 30, pi, 0.5, 0, -1.5, pi/4, 0]`.
    pub fn reference() -> Self {
        use std::f64::consts::{FRAC_PI_4, PI};
        FullVelocityState {
            x: 20.0,
            y: 30.0,
            psi: PI,
            theta: FRAC_PI_4,
            x_dot: 0.5,
            y_dot: 0.0,
            psi_dot: -1.5,
            theta_dot: 0.0,
        }
    }

    /// Lateral velocity `-x_dot sin(psi) + y_dot cos(psi)`, which the robot cannot have.
    pub fn lateral_velocity(&self) -> f64 {
        let (s, c) = angle::sin_cos(self.psi);
        -self.x_dot * s + self.y_dot * c
    }
}

/// Converts to the reduced state.
///
/// Rejects the input when the lateral velocity exceeds
/// `tol * max(1, |x_dot|, |y_dot|)`.
pub fn full_to_reduced(s: &FullVelocityState, tol: f64) -> Result<ReducedState, ModelError> {
    let fields = [
        ("x", s.x),
        ("y", s.y),
        ("psi", s.psi),
        ("theta", s.theta),
        ("x_dot", s.x_dot),
        ("y_dot", s.y_dot),
        ("psi_dot", s.psi_dot),
        ("theta_dot", s.theta_dot),
    ];
    if let Some((name, _)) = fields.iter().find(|(_, v)| !v.is_finite()) {
        return Err(ModelError::NonFinite(name));
    }
    let residual = s.lateral_velocity();
    let allowed = tol * 1f64.max(s.x_dot.abs()).max(s.y_dot.abs());
    if residual.abs() > allowed {
        return Err(ModelError::ConstraintViolation { residual, allowed });
    }
    let (sp, cp) = angle::sin_cos(s.psi);
    Ok(ReducedState {
        x: s.x,
        y: s.y,
        psi: s.psi,
        theta: s.theta,
        v: s.x_dot * cp + s.y_dot * sp,
        psi_dot: s.psi_dot,
        theta_dot: s.theta_dot,
    })
}

/// `(v cos psi, v sin psi)`.
pub fn reduced_to_cartesian_velocity(s: &ReducedState) -> (f64, f64) {
    let (sp, cp) = angle::sin_cos(s.psi);
    (s.v * cp, s.v * sp)
}

/// Residual of the no-side-slip constraint for the reconstructed velocity.
/// Zero up to the rounding of the reconstruction.
pub fn constraint_residual(s: &ReducedState) -> f64 {
    let (x_dot, y_dot) = reduced_to_cartesian_velocity(s);
    let (sp, cp) = angle::sin_cos(s.psi);
    -x_dot * sp + y_dot * cp
}

/// Right and left wheel spin rates from rolling without slipping.
pub fn wheel_rates(s: &ReducedState, p: &Params) -> (f64, f64) {
    let right = (s.v + p.d * s.psi_dot) / p.r;
    let left = (s.v - p.d * s.psi_dot) / p.r;
    (right, left)
}

/// Left and right wheel torques realising `(F, tau)` under the mapping
/// `F = (tau_l + tau_r) / 2d`, `tau = tau_r - tau_l`.
///
/// The force relation is dimensionally odd (a conventional drive divides by
/// the wheel radius); it is kept as the drive convention and the torques are
/// reported only, never fed back into the dynamics.
pub fn wheel_torques(u: &ControlInput, p: &Params) -> (f64, f64) {
    let left = p.d * u.force - 0.5 * u.torque;
    let right = p.d * u.force + 0.5 * u.torque;
    (left, right)
}
