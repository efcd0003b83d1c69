//! Reduced equations of motion.
//!
//! The two Cartesian force balances carry the unknown lateral constraint
//! force. Projecting them onto the heading removes it and leaves, with the
//! pendulum equation, a 2x2 linear system in the longitudinal acceleration
//! `a_l` and `theta_ddot`:
//!
//! ```text
//! | M+m         m l cos(th) | | a_l      |   | F + m l th_dot^2 sin(th)                       |
//! | m l cos(th) m l^2       | | th_ddot  | = | m l^2 psi_dot^2 sin(th) cos(th) + m g l sin(th) |
//! ```
//!
//! The determinant `m l^2 (M + m sin^2 th)` is bounded below by `m l^2 M`,
//! so the system is solved in closed form. Yaw decouples:
//! `(J + m l^2 sin^2 th) psi_ddot + m l^2 th_dot psi_dot sin(2 th) = tau`.

use thiserror::Error;

use crate::angle;
use crate::model::{ControlInput, Params, ReducedState};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("non-finite state or input passed to the dynamics")]
    NonFiniteInput,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Accelerations {
    /// Acceleration along the heading.
    pub a_l: f64,
    pub theta_ddot: f64,
    pub psi_ddot: f64,
}

/// Time derivative of a [`ReducedState`], component for component.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StateDerivative {
    pub x_dot: f64,
    pub y_dot: f64,
    pub psi_dot: f64,
    pub theta_dot: f64,
    pub v_dot: f64,
    pub psi_ddot: f64,
    pub theta_ddot: f64,
}

impl StateDerivative {
    pub fn to_array(&self) -> [f64; 7] {
        [
            self.x_dot,
            self.y_dot,
            self.psi_dot,
            self.theta_dot,
            self.v_dot,
            self.psi_ddot,
            self.theta_ddot,
        ]
    }
}

/// Longitudinal mass matrix determinant, `m l^2 (M + m sin^2 theta)`.
pub fn mass_matrix_det(theta: f64, p: &Params) -> f64 {
    let (s, _) = angle::sin_cos(theta);
    p.m * p.l * p.l * (p.big_m + p.m * s * s)
}

/// Effective yaw inertia `J + m l^2 sin^2 theta`.
pub fn yaw_inertia(theta: f64, p: &Params) -> f64 {
    let (s, _) = angle::sin_cos(theta);
    p.j + p.m * p.l * p.l * s * s
}

pub fn accelerations(
    s: &ReducedState,
    u: &ControlInput,
    p: &Params,
) -> Result<Accelerations, DynamicsError> {
    if !s.is_finite() || !u.force.is_finite() || !u.torque.is_finite() {
        return Err(DynamicsError::NonFiniteInput);
    }
    let (st, ct) = angle::sin_cos(s.theta);
    let ml = p.m * p.l;

    let a11 = p.big_m + p.m;
    let a12 = ml * ct;
    let a22 = ml * p.l;
    let b1 = u.force + ml * s.theta_dot * s.theta_dot * st;
    let b2 = ml * p.l * s.psi_dot * s.psi_dot * st * ct + ml * p.g * st;
    let det = a11 * a22 - a12 * a12;

    let a_l = (b1 * a22 - a12 * b2) / det;
    let theta_ddot = (a11 * b2 - a12 * b1) / det;
    // sin(2 th) = 2 sin cos
    let psi_ddot =
        (u.torque - 2.0 * ml * p.l * s.theta_dot * s.psi_dot * st * ct) / yaw_inertia(s.theta, p);

    Ok(Accelerations {
        a_l,
        theta_ddot,
        psi_ddot,
    })
}

pub fn state_derivative(
    s: &ReducedState,
    u: &ControlInput,
    p: &Params,
) -> Result<StateDerivative, DynamicsError> {
    let acc = accelerations(s, u, p)?;
    let (sp, cp) = angle::sin_cos(s.psi);
    Ok(StateDerivative {
        x_dot: s.v * cp,
        y_dot: s.v * sp,
        psi_dot: s.psi_dot,
        theta_dot: s.theta_dot,
        v_dot: acc.a_l,
        psi_ddot: acc.psi_ddot,
        theta_ddot: acc.theta_ddot,
    })
}

/// Lateral friction force that keeps the wheels from side-slipping,
/// `M (2 psi_dot v + l theta_dot psi_dot cos theta)`.
pub fn lambda_force(s: &ReducedState, p: &Params) -> f64 {
    let (_, ct) = angle::sin_cos(s.theta);
    p.big_m * (2.0 * s.psi_dot * s.v + p.l * s.theta_dot * s.psi_dot * ct)
}

/// Total mechanical energy with the datum at upright rest. The constant
/// potential of the robot body is dropped.
pub fn total_energy(s: &ReducedState, p: &Params) -> f64 {
    let (st, ct) = angle::sin_cos(s.theta);
    let l2 = p.l * p.l;
    0.5 * (p.big_m + p.m) * s.v * s.v
        + 0.5 * p.j * s.psi_dot * s.psi_dot
        + 0.5
            * p.m
            * (l2 * s.theta_dot * s.theta_dot
                + l2 * s.psi_dot * s.psi_dot * st * st
                + 2.0 * s.v * p.l * s.theta_dot * ct)
        + p.m * p.g * p.l * (ct - 1.0)
}

/// Mechanical power delivered by the inputs, `F v + tau psi_dot`.
pub fn input_power(s: &ReducedState, u: &ControlInput) -> f64 {
    u.force * s.v + u.torque * s.psi_dot
}
