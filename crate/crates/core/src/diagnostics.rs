//! Residual checks of the closed-loop claims, evaluated on recorded runs.
//!
//! Time derivatives are taken by central differences in the interior and
//! second-order one-sided differences at the two ends, so every residual
//! carries an `O(dt^2)` truncation error.

use thiserror::Error;

use crate::angle;
use crate::control;
use crate::dynamics;
use crate::model::{Gains, Params};
use crate::sim::Trajectory;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticsError {
    #[error("the energy decay law only holds without cart regulation (k_p = {k_p}, k_v = {k_v})")]
    WrongMode { k_p: f64, k_v: f64 },
    #[error("heading error never stayed below {tol} rad for {hold} s")]
    NeverConverged { tol: f64, hold: f64 },
    #[error("trajectory has {0} samples; at least 3 are needed")]
    TooShort(usize),
}

/// Derivative of uniformly sampled values: fourth-order five-point stencils
/// (off-centre at the two samples nearest each end), second-order for fewer
/// than five samples.
pub fn time_derivative(values: &[f64], dt: f64) -> Vec<f64> {
    let f = values;
    let n = f.len();
    if n < 3 {
        return vec![0.0; n];
    }
    if n < 5 {
        let mut out = Vec::with_capacity(n);
        out.push((-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dt));
        for w in f.windows(3) {
            out.push((w[2] - w[0]) / (2.0 * dt));
        }
        out.push((3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dt));
        return out;
    }
    let h = 12.0 * dt;
    let mut out = Vec::with_capacity(n);
    out.push((-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / h);
    out.push((-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / h);
    for w in f.windows(5) {
        out.push((w[0] - 8.0 * w[1] + 8.0 * w[3] - w[4]) / h);
    }
    out.push((3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / h);
    out.push(
        (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5])
            / h,
    );
    out
}

fn require_len(tr: &Trajectory) -> Result<(), DiagnosticsError> {
    if tr.len() < 3 {
        Err(DiagnosticsError::TooShort(tr.len()))
    } else {
        Ok(())
    }
}

/// `dE/dt + m l k_E th_dot^2 cos^2(th) E` per sample, zero along runs
/// without cart regulation up to differencing error.
pub fn energy_law_residual(
    tr: &Trajectory,
    p: &Params,
    gains: &Gains,
) -> Result<Vec<f64>, DiagnosticsError> {
    if gains.k_p != 0.0 || gains.k_v != 0.0 {
        return Err(DiagnosticsError::WrongMode {
            k_p: gains.k_p,
            k_v: gains.k_v,
        });
    }
    require_len(tr)?;
    let energy: Vec<f64> = tr.records.iter().map(|r| r.control.energy).collect();
    let rate = time_derivative(&energy, tr.dt);
    Ok(tr
        .records
        .iter()
        .zip(rate)
        .map(|(r, de)| {
            let (_, ct) = angle::sin_cos(r.state.theta);
            let th_dot = r.state.theta_dot;
            de + p.m * p.l * gains.k_e * th_dot * th_dot * ct * ct * r.control.energy
        })
        .collect())
}

/// `dE_total/dt - (F v + tau psi_dot)` per sample. The lateral force does
/// no work, so it has no term here.
pub fn power_balance_residual(tr: &Trajectory) -> Result<Vec<f64>, DiagnosticsError> {
    require_len(tr)?;
    let energy: Vec<f64> = tr.records.iter().map(|r| r.total_energy).collect();
    let rate = time_derivative(&energy, tr.dt);
    Ok(tr
        .records
        .iter()
        .zip(rate)
        .map(|(r, de)| de - dynamics::input_power(&r.state, &r.input))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LyapunovTraces {
    pub v_e: Vec<f64>,
    pub v_psi: Vec<f64>,
}

pub fn lyapunov_traces(tr: &Trajectory, gains: &Gains) -> LyapunovTraces {
    LyapunovTraces {
        v_e: tr
            .records
            .iter()
            .map(|r| control::energy_lyapunov(r.control.energy))
            .collect(),
        v_psi: tr
            .records
            .iter()
            .map(|r| control::heading_lyapunov(r.control.e_psi, r.control.e_psi_dot, gains))
            .collect(),
    }
}

/// Largest sample-to-sample increase, or zero when the series never rises.
pub fn max_increase(series: &[f64]) -> f64 {
    series.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

/// First index from which `|psi_d_dot| < tol` holds for every later sample.
pub fn heading_target_settled(tr: &Trajectory, tol: f64) -> Option<usize> {
    let start = tr
        .records
        .iter()
        .rposition(|r| r.control.psi_d_dot.abs() >= tol)
        .map_or(0, |i| i + 1);
    (start < tr.len()).then_some(start)
}

/// Criterion for the post-convergence tail: `|e_psi| < tol` held for `hold` seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailCriterion {
    pub tol: f64,
    pub hold: f64,
}

impl Default for TailCriterion {
    fn default() -> Self {
        TailCriterion {
            tol: 0.01,
            hold: 1.0,
        }
    }
}

/// First sample after which the heading error stays below `tol` for `hold` seconds.
pub fn converged_tail_start(tr: &Trajectory, crit: &TailCriterion) -> Option<usize> {
    let need = (crit.hold / tr.dt).round() as usize;
    let mut run = 0;
    for (i, r) in tr.records.iter().enumerate() {
        if r.control.e_psi.abs() < crit.tol {
            run += 1;
            if run > need {
                return Some(i - need);
            }
        } else {
            run = 0;
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailResidual {
    pub start: usize,
    /// One value per sample from `start` to the end.
    pub residual: Vec<f64>,
}

/// Residual of the one-dimensional cart-pole reduction on the converged tail,
/// `(x_ddot + k_v x_dot + k_p x) sqrt(k^2 + 1) + E th_dot cos(th) / (M + m sin^2 th)`
/// with `k = tan(psi)`. Reported in the relation's own units.
pub fn steady_state_cartpole_residual(
    tr: &Trajectory,
    p: &Params,
    gains: &Gains,
    crit: &TailCriterion,
) -> Result<TailResidual, DiagnosticsError> {
    require_len(tr)?;
    let start = converged_tail_start(tr, crit).ok_or(DiagnosticsError::NeverConverged {
        tol: crit.tol,
        hold: crit.hold,
    })?;
    let x_dot: Vec<f64> = tr
        .records
        .iter()
        .map(|r| crate::model::reduced_to_cartesian_velocity(&r.state).0)
        .collect();
    let x_ddot = time_derivative(&x_dot, tr.dt);
    let residual = tr.records[start..]
        .iter()
        .zip(&x_dot[start..])
        .zip(&x_ddot[start..])
        .map(|((r, &xd), &xdd)| {
            let k = r.state.psi.tan();
            let (st, ct) = angle::sin_cos(r.state.theta);
            let lhs = (xdd + gains.k_v * xd + gains.k_p * r.state.x) * (k * k + 1.0).sqrt();
            let rhs = -r.control.energy * r.state.theta_dot * ct / (p.big_m + p.m * st * st);
            lhs - rhs
        })
        .collect();
    Ok(TailResidual { start, residual })
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Every residual for one run. Checks that do not apply to the run's
/// configuration are `None`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResidualReport {
    pub energy_law: Option<Vec<f64>>,
    pub energy_law_max: Option<f64>,
    pub v_e_max_increase: f64,
    /// Largest increase of `V_psi` once the heading target has settled.
    pub v_psi_max_increase: Option<f64>,
    pub power_balance: Vec<f64>,
    pub power_balance_max: f64,
    pub collinearity: Vec<f64>,
    pub collinearity_max: f64,
    pub cartpole: Option<TailResidual>,
    pub cartpole_max: Option<f64>,
    pub constraint: Vec<f64>,
    pub constraint_max: f64,
}

/// Threshold on `|psi_d_dot|` for treating the heading target as constant.
pub const SETTLED_HEADING_RATE: f64 = 1e-3;

impl ResidualReport {
    pub fn compute(tr: &Trajectory, p: &Params, gains: &Gains) -> Result<Self, DiagnosticsError> {
        require_len(tr)?;
        let energy_law = energy_law_residual(tr, p, gains).ok();
        let traces = lyapunov_traces(tr, gains);
        let v_psi_max_increase = heading_target_settled(tr, SETTLED_HEADING_RATE)
            .map(|i| max_increase(&traces.v_psi[i..]));
        let power_balance = power_balance_residual(tr)?;
        let collinearity: Vec<f64> = tr.records.iter().map(|r| r.collinearity).collect();
        let constraint: Vec<f64> = tr.records.iter().map(|r| r.constraint_residual).collect();
        let cartpole = steady_state_cartpole_residual(tr, p, gains, &TailCriterion::default()).ok();
        Ok(ResidualReport {
            energy_law_max: energy_law.as_deref().map(max_abs),
            energy_law,
            v_e_max_increase: max_increase(&traces.v_e),
            v_psi_max_increase,
            power_balance_max: max_abs(&power_balance),
            power_balance,
            collinearity_max: max_abs(&collinearity),
            collinearity,
            cartpole_max: cartpole.as_ref().map(|c| max_abs(&c.residual)),
            cartpole,
            constraint_max: max_abs(&constraint),
            constraint,
        })
    }
}
