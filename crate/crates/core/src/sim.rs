//! Closed-loop simulation with a fixed-step classical Runge-Kutta scheme.

use thiserror::Error;

use crate::angle;
use crate::control::{self, ControlDiagnostics, HeadingMemory, SwingUpLaw};
use crate::dynamics::{self, DynamicsError, StateDerivative};
use crate::model::{
    self, ControlInput, FullVelocityState, Gains, ModelError, Params, ReducedState,
};

/// Any state component beyond this magnitude counts as divergence.
pub const DIVERGENCE_LIMIT: f64 = 1e9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("initial state rejected: {0}")]
    ConstraintViolation(#[source] ModelError),
    #[error("state diverged at t = {t} s")]
    NonFiniteState { t: f64 },
}

impl From<DynamicsError> for SimError {
    fn from(_: DynamicsError) -> Self {
        SimError::NonFiniteState { t: f64::NAN }
    }
}

/// How the input is produced during integration.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ControlMode {
    /// The control law is evaluated at every integrator stage.
    #[default]
    Continuous,
    /// The input is computed every `period` seconds and held in between.
    Sampled { period: f64 },
    /// No actuation at all: `F = 0`, `tau = 0`.
    Passive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub params: Params,
    pub gains: Gains,
    pub initial: FullVelocityState,
    pub dt: f64,
    pub t_final: f64,
    pub mode: ControlMode,
    pub swing_up_law: SwingUpLaw,
    /// Relative tolerance on the initial lateral velocity.
    pub constraint_tol: f64,
}

impl Scenario {
    pub const DEFAULT_DT: f64 = 1e-3;
    pub const DEFAULT_T_FINAL: f64 = 60.0;

    /// Initial condition, gains and parameters of the reference experiment.
    pub fn reference() -> Self {
        Scenario {
            params: Params::reference(),
            gains: Gains::reference(),
            initial: FullVelocityState::reference(),
            dt: Self::DEFAULT_DT,
            t_final: Self::DEFAULT_T_FINAL,
            mode: ControlMode::Continuous,
            swing_up_law: SwingUpLaw::Corrected,
            constraint_tol: model::DEFAULT_CONSTRAINT_TOL,
        }
    }

    /// Number of integration steps; the trajectory has one more record.
    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    fn sample_stride(&self) -> Result<Option<usize>, SimError> {
        match self.mode {
            ControlMode::Sampled { period } => {
                let ratio = period / self.dt;
                let stride = ratio.round();
                if period.is_nan() || period < self.dt || (ratio - stride).abs() > 1e-9 * ratio {
                    return Err(SimError::InvalidScenario(format!(
                        "sample period {period} must be an integer multiple of dt {}",
                        self.dt
                    )));
                }
                Ok(Some(stride as usize))
            }
            _ => Ok(None),
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let invalid = |e: ModelError| SimError::InvalidScenario(e.to_string());
        self.params.validate().map_err(invalid)?;
        self.gains.validate().map_err(invalid)?;
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(SimError::InvalidScenario(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !self.t_final.is_finite() || self.t_final < self.dt {
            return Err(SimError::InvalidScenario(format!(
                "t_final must be at least dt, got {}",
                self.t_final
            )));
        }
        let ratio = self.t_final / self.dt;
        if (ratio - ratio.round()).abs() > 1e-6 * ratio {
            return Err(SimError::InvalidScenario(format!(
                "t_final {} is not a whole number of steps of {}",
                self.t_final, self.dt
            )));
        }
        if self.constraint_tol.is_nan() || self.constraint_tol < 0.0 {
            return Err(SimError::InvalidScenario(
                "constraint tolerance must be non-negative".into(),
            ));
        }
        self.sample_stride()?;
        Ok(())
    }
}

/// One sample of a simulated run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Record {
    pub t: f64,
    pub state: ReducedState,
    /// Input applied from this sample on.
    pub input: ControlInput,
    pub control: ControlDiagnostics,
    pub total_energy: f64,
    pub lambda: f64,
    /// No-slip residual of the reconstructed Cartesian velocity.
    pub constraint_residual: f64,
    /// `x_dot y - y_dot x`; zero when the robot moves radially.
    pub collinearity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dt: f64,
    pub records: Vec<Record>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&Record> {
        self.records.last()
    }

    /// Index of the first sample at or after time `t`.
    pub fn index_at(&self, t: f64) -> usize {
        ((t / self.dt).ceil().max(0.0) as usize).min(self.records.len().saturating_sub(1))
    }
}

fn add_scaled(base: &[f64; 7], k: &[f64; 7], h: f64) -> [f64; 7] {
    let mut out = *base;
    for (o, ki) in out.iter_mut().zip(k) {
        *o += h * ki;
    }
    out
}

/// One classical fourth-order Runge-Kutta step of size `dt` from `(t, s)`.
pub fn rk4_step<F>(mut f: F, s: &ReducedState, t: f64, dt: f64) -> Result<ReducedState, SimError>
where
    F: FnMut(f64, &ReducedState) -> Result<StateDerivative, SimError>,
{
    let y0 = s.to_array();
    let k1 = f(t, s)?.to_array();
    let k2 = f(
        t + 0.5 * dt,
        &ReducedState::from_array(add_scaled(&y0, &k1, 0.5 * dt)),
    )?
    .to_array();
    let k3 = f(
        t + 0.5 * dt,
        &ReducedState::from_array(add_scaled(&y0, &k2, 0.5 * dt)),
    )?
    .to_array();
    let k4 = f(t + dt, &ReducedState::from_array(add_scaled(&y0, &k3, dt)))?.to_array();
    let mut y = y0;
    for i in 0..ReducedState::DIM {
        y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    let next = ReducedState::from_array(y);
    if y.iter()
        .any(|c| !c.is_finite() || c.abs() > DIVERGENCE_LIMIT)
    {
        return Err(SimError::NonFiniteState { t: t + dt });
    }
    Ok(next)
}

fn record(
    t: f64,
    state: ReducedState,
    input: ControlInput,
    control: ControlDiagnostics,
    p: &Params,
) -> Record {
    let (x_dot, y_dot) = model::reduced_to_cartesian_velocity(&state);
    Record {
        t,
        state,
        input,
        control,
        total_energy: dynamics::total_energy(&state, p),
        lambda: dynamics::lambda_force(&state, p),
        constraint_residual: model::constraint_residual(&state),
        collinearity: x_dot * state.y - y_dot * state.x,
    }
}

/// Runs a scenario over `[0, t_final]`, one record per step.
pub fn simulate(sc: &Scenario) -> Result<Trajectory, SimError> {
    sc.validate()?;
    let stride = sc.sample_stride()?;
    let p = sc.params;
    let gains = sc.gains;
    let mut state = model::full_to_reduced(&sc.initial, sc.constraint_tol)
        .map_err(SimError::ConstraintViolation)?;
    let mut memory = HeadingMemory::new(&state, gains.eps_origin);
    let steps = sc.steps();
    let mut records = Vec::with_capacity(steps + 1);
    let mut held = ControlInput::default();

    for k in 0..=steps {
        let t = k as f64 * sc.dt;
        let (law_input, diag) = control::control_law(&state, &gains, &p, sc.swing_up_law, &memory);
        let input = match sc.mode {
            ControlMode::Continuous => law_input,
            ControlMode::Passive => ControlInput::default(),
            ControlMode::Sampled { .. } => {
                if k % stride.unwrap_or(1) == 0 {
                    held = law_input;
                }
                held
            }
        };
        records.push(record(t, state, input, diag, &p));
        if k == steps {
            break;
        }
        let mem = memory;
        state = match sc.mode {
            ControlMode::Continuous => rk4_step(
                |_, s| {
                    let (u, _) = control::control_law(s, &gains, &p, sc.swing_up_law, &mem);
                    Ok(dynamics::state_derivative(s, &u, &p)?)
                },
                &state,
                t,
                sc.dt,
            ),
            _ => rk4_step(
                |_, s| Ok(dynamics::state_derivative(s, &input, &p)?),
                &state,
                t,
                sc.dt,
            ),
        }
        .map_err(|e| match e {
            SimError::NonFiniteState { .. } => SimError::NonFiniteState { t: t + sc.dt },
            other => other,
        })?;
        memory.update(&state, gains.eps_origin);
    }
    Ok(Trajectory { dt: sc.dt, records })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventTolerances {
    /// `|E|` below this counts as captured on the homoclinic orbit.
    pub energy: f64,
    /// `|wrap(theta)|` below this counts as a pass near upright.
    pub upright: f64,
    /// Distance below which the robot has reached the origin.
    pub origin: f64,
}

impl Default for EventTolerances {
    fn default() -> Self {
        EventTolerances {
            energy: 1e-2,
            upright: 0.1,
            origin: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventKind {
    /// `|E|` fell below tolerance and stayed there until the end of the run.
    EnergyCaptured,
    /// The pendulum entered the near-upright band.
    NearUpright,
    /// The robot came within the origin radius.
    OriginReached,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
}

pub fn detect_events(tr: &Trajectory, tol: &EventTolerances) -> Vec<Event> {
    let mut events = Vec::new();
    let recs = &tr.records;

    let captured_from = recs
        .iter()
        .rposition(|r| r.control.energy.abs() >= tol.energy)
        .map_or(0, |i| i + 1);
    if captured_from < recs.len() {
        events.push(Event {
            t: recs[captured_from].t,
            kind: EventKind::EnergyCaptured,
        });
    }

    let mut inside = false;
    for r in recs {
        let now = angle::wrap(r.state.theta).abs() < tol.upright;
        if now && !inside {
            events.push(Event {
                t: r.t,
                kind: EventKind::NearUpright,
            });
        }
        inside = now;
    }

    if let Some(r) = recs.iter().find(|r| r.state.radius() < tol.origin) {
        events.push(Event {
            t: r.t,
            kind: EventKind::OriginReached,
        });
    }

    events.sort_by(|a, b| a.t.total_cmp(&b.t));
    events
}
