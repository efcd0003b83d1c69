//! Trajectory CSV and run summary writers.

use std::fmt::Write as _;
use std::io::{self, Write};

use wmr_pendulum::sim::{Event, EventKind, Record};
use wmr_pendulum::{ResidualReport, Scenario, Trajectory};

/// One trajectory column, listed in file order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    T,
    X,
    Y,
    Psi,
    Theta,
    V,
    PsiDot,
    ThetaDot,
    F,
    Tau,
    E,
    ETotal,
    VE,
    VPsi,
    PsiD,
    EPsi,
    EV,
    EP,
    Lambda,
}

impl Column {
    pub const ALL: [Column; 19] = [
        Column::T,
        Column::X,
        Column::Y,
        Column::Psi,
        Column::Theta,
        Column::V,
        Column::PsiDot,
        Column::ThetaDot,
        Column::F,
        Column::Tau,
        Column::E,
        Column::ETotal,
        Column::VE,
        Column::VPsi,
        Column::PsiD,
        Column::EPsi,
        Column::EV,
        Column::EP,
        Column::Lambda,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Column::T => "t",
            Column::X => "x",
            Column::Y => "y",
            Column::Psi => "psi",
            Column::Theta => "theta",
            Column::V => "v",
            Column::PsiDot => "psi_dot",
            Column::ThetaDot => "theta_dot",
            Column::F => "F",
            Column::Tau => "tau",
            Column::E => "E",
            Column::ETotal => "E_total",
            Column::VE => "V_E",
            Column::VPsi => "V_psi",
            Column::PsiD => "psi_d",
            Column::EPsi => "e_psi",
            Column::EV => "e_v",
            Column::EP => "e_p",
            Column::Lambda => "lambda",
        }
    }

    pub fn from_name(name: &str) -> Option<Column> {
        Column::ALL.iter().copied().find(|c| c.name() == name)
    }

    pub fn value(self, r: &Record) -> f64 {
        let s = &r.state;
        let c = &r.control;
        match self {
            Column::T => r.t,
            Column::X => s.x,
            Column::Y => s.y,
            Column::Psi => s.psi,
            Column::Theta => s.theta,
            Column::V => s.v,
            Column::PsiDot => s.psi_dot,
            Column::ThetaDot => s.theta_dot,
            Column::F => r.input.force,
            Column::Tau => r.input.torque,
            Column::E => c.energy,
            Column::ETotal => r.total_energy,
            Column::VE => c.v_e,
            Column::VPsi => c.v_psi,
            Column::PsiD => c.psi_d,
            Column::EPsi => c.e_psi,
            Column::EV => c.e_v,
            Column::EP => c.e_p,
            Column::Lambda => r.lambda,
        }
    }
}

/// Fixed-width scientific notation that round-trips every `f64`; negative
/// zero is written as positive zero.
pub fn format_float(v: f64) -> String {
    format!("{:.16e}", v + 0.0)
}

pub fn write_csv<W: Write>(tr: &Trajectory, columns: &[Column], out: W) -> io::Result<()> {
    let mut out = io::BufWriter::new(out);
    let header: Vec<&str> = columns.iter().map(|c| c.name()).collect();
    out.write_all(header.join(",").as_bytes())?;
    out.write_all(b"\n")?;
    let mut line = String::new();
    for r in &tr.records {
        line.clear();
        for (i, c) in columns.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&format_float(c.value(r)));
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    out.flush()
}

/// What the summary reports about a finished run.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub name: String,
    pub scenario: Scenario,
    pub final_record: Record,
    pub events: Vec<Event>,
    pub report: Option<ResidualReport>,
    /// The run starts hanging at rest, where the swing-up law exerts nothing.
    pub excluded_initial_condition: bool,
    /// For an excluded start: whether the pendulum stayed exactly at its start angle.
    pub stayed_at_start: bool,
    /// Energy-law residual maximum of the companion run with the corrected law,
    /// present when this run used the printed law.
    pub corrected_energy_law_max: Option<f64>,
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "none".to_string(), format_float)
}

impl Summary {
    fn first(&self, kind: EventKind) -> Option<f64> {
        self.events.iter().find(|e| e.kind == kind).map(|e| e.t)
    }

    fn upright_passes(&self) -> usize {
        self.events
            .iter()
            .filter(|e| e.kind == EventKind::NearUpright)
            .count()
    }

    fn energy_law_max(&self) -> Option<f64> {
        self.report.as_ref().and_then(|r| r.energy_law_max)
    }

    /// Printed-law residual over corrected-law residual.
    pub fn printed_to_corrected_ratio(&self) -> Option<f64> {
        match (self.energy_law_max(), self.corrected_energy_law_max) {
            (Some(p), Some(c)) if c > 0.0 => Some(p / c),
            _ => None,
        }
    }

    pub fn render(&self) -> String {
        let sc = &self.scenario;
        let fr = &self.final_record;
        let s = &fr.state;
        let damped = sc.gains.cart_loop_damped(&sc.params);
        let mut o = String::new();
        let _ = writeln!(o, "run: {}", self.name);
        let _ = writeln!(
            o,
            "integrator: RK4, dt = {} s, t_final = {} s, mode = {:?}, swing-up law = {:?}",
            sc.dt, sc.t_final, sc.mode, sc.swing_up_law
        );
        let _ = writeln!(
            o,
            "final state at t = {:.3} s: x = {:.6}, y = {:.6}, psi = {:.6}, theta = {:.6}, v = {:.6}, psi_dot = {:.6}, theta_dot = {:.6}",
            fr.t, s.x, s.y, s.psi, s.theta, s.v, s.psi_dot, s.theta_dot
        );
        let _ = writeln!(
            o,
            "final swing-up energy E = {:.3e} J, distance to origin = {:.3e} m, heading error = {:.3e} rad",
            fr.control.energy,
            s.radius(),
            fr.control.e_psi
        );
        match self.first(EventKind::EnergyCaptured) {
            Some(t) => {
                let _ = writeln!(
                    o,
                    "energy captured (|E| stays below tolerance) from t = {t:.3} s"
                );
            }
            None => {
                let _ = writeln!(o, "energy never captured");
            }
        }
        let _ = writeln!(o, "passes near upright: {}", self.upright_passes());
        match self.first(EventKind::OriginReached) {
            Some(t) => {
                let _ = writeln!(o, "origin reached at t = {t:.3} s");
            }
            None => {
                let _ = writeln!(o, "origin not reached");
            }
        }
        if self.excluded_initial_condition {
            let _ = writeln!(
                o,
                "excluded initial condition: no swing-up (pendulum hanging at rest; {})",
                if self.stayed_at_start {
                    "it stayed there"
                } else {
                    "it was moved by the cart"
                }
            );
        }
        if !damped {
            let _ = writeln!(
                o,
                "warning: cart loop is underdamped (k_v^2 < 4 M k_p); the robot may overshoot the origin"
            );
        }
        if let Some(r) = &self.report {
            let _ = writeln!(o, "residuals (max |.|):");
            if let Some(m) = r.energy_law_max {
                let _ = writeln!(o, "  swing-up energy decay law: {m:.3e}");
            }
            let _ = writeln!(o, "  power balance: {:.3e}", r.power_balance_max);
            let _ = writeln!(o, "  V_E largest rise per step: {:.3e}", r.v_e_max_increase);
            if let Some(m) = r.v_psi_max_increase {
                let _ = writeln!(
                    o,
                    "  V_psi largest rise per step after target settles: {m:.3e}"
                );
            }
            let _ = writeln!(o, "  collinearity: {:.3e}", r.collinearity_max);
            if let Some(m) = r.cartpole_max {
                let _ = writeln!(o, "  reduced cart-pole relation on converged tail: {m:.3e}");
            }
            let _ = writeln!(o, "  no-slip constraint: {:.3e}", r.constraint_max);
        }
        if let Some(ratio) = self.printed_to_corrected_ratio() {
            let _ = writeln!(
                o,
                "printed swing-up law violates the energy law {ratio:.3e} times more than the corrected law"
            );
        }

        let _ = writeln!(o);
        let _ = writeln!(o, "[results]");
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(o, "{k} = {v}");
        };
        kv("t_final", format_float(fr.t));
        for (k, v) in [
            ("final_x", s.x),
            ("final_y", s.y),
            ("final_psi", s.psi),
            ("final_theta", s.theta),
            ("final_v", s.v),
            ("final_psi_dot", s.psi_dot),
            ("final_theta_dot", s.theta_dot),
            ("final_E", fr.control.energy),
            ("final_radius", s.radius()),
            ("final_e_psi", fr.control.e_psi),
        ] {
            kv(k, format_float(v));
        }
        kv(
            "energy_captured_t",
            opt(self.first(EventKind::EnergyCaptured)),
        );
        kv("near_upright_passes", self.upright_passes().to_string());
        kv(
            "origin_reached_t",
            opt(self.first(EventKind::OriginReached)),
        );
        kv(
            "excluded_initial_condition",
            self.excluded_initial_condition.to_string(),
        );
        kv("cart_loop_damped", damped.to_string());
        if let Some(r) = &self.report {
            kv("energy_law_residual_max", opt(r.energy_law_max));
            kv(
                "power_balance_residual_max",
                format_float(r.power_balance_max),
            );
            kv("v_e_max_increase", format_float(r.v_e_max_increase));
            kv("v_psi_max_increase", opt(r.v_psi_max_increase));
            kv(
                "collinearity_residual_max",
                format_float(r.collinearity_max),
            );
            kv("cartpole_residual_max", opt(r.cartpole_max));
            kv("constraint_residual_max", format_float(r.constraint_max));
        }
        if self.corrected_energy_law_max.is_some() {
            kv(
                "corrected_energy_law_residual_max",
                opt(self.corrected_energy_law_max),
            );
            kv(
                "printed_to_corrected_ratio",
                opt(self.printed_to_corrected_ratio()),
            );
        }
        o
    }
}

/// Reads `key = value` pairs from the `[results]` block of a rendered summary.
pub fn parse_results(summary: &str) -> Vec<(String, String)> {
    summary
        .lines()
        .skip_while(|l| l.trim() != "[results]")
        .skip(1)
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}
