//! Simulation and control of a pendulum carried by a differential-drive robot.
//!
//! The robot cannot slide sideways, so its state is kept in reduced form with a
//! signed speed along the heading. On top of the reduced dynamics sit an
//! energy-shaping swing-up law for the pendulum, a heading controller that
//! keeps the robot pointed away from the origin, and a PD term that drives the
//! robot to the origin. [`diagnostics`] turns each stability claim into a
//! residual that can be checked on a recorded run.

pub mod angle;
pub mod control;
pub mod diagnostics;
pub mod dynamics;
pub mod model;
pub mod sim;

pub use control::{control_law, ControlDiagnostics, HeadingMemory, SwingUpLaw};
pub use diagnostics::ResidualReport;
pub use dynamics::{Accelerations, StateDerivative};
pub use model::{ControlInput, FullVelocityState, Gains, Params, ReducedState};
pub use sim::{simulate, ControlMode, Scenario, Trajectory};
