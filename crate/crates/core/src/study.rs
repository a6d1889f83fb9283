//! Exact-evolution runs from a coherent pump, with conservation diagnostics.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::criteria::CriterionReport;
use crate::error::{Error, Result};
use crate::evolution::{
    charge_drift, energy_drift, evolve, EvolutionMethod, EvolutionPlan, Trajectory,
};
use crate::fock::{
    factorial_moments, make_coherent_vacuum, suggest_pump_cutoff, FockCutoffs, Mode,
    MAX_MOMENT_ORDER,
};
use crate::process::{build_hamiltonian, ProcessSpec};

/// Signal conversions budgeted by [`auto_cutoffs`].
pub const SIGNAL_CONVERSIONS: usize = 4;

/// Pump cutoff with `m` quanta of interaction headroom; signal cutoff
/// `n * 4 + 10`.
pub fn auto_cutoffs(spec: &ProcessSpec, alpha_sq: f64) -> Result<FockCutoffs> {
    if !alpha_sq.is_finite() || alpha_sq < 0.0 {
        return Err(Error::OutOfRange {
            name: "alpha_sq",
            value: alpha_sq,
            reason: "must be finite and nonnegative",
        });
    }
    FockCutoffs::new(
        suggest_pump_cutoff(alpha_sq) + spec.m as usize,
        spec.n as usize * SIGNAL_CONVERSIONS + 10,
    )
}

#[derive(Debug, Clone)]
pub struct RunRequest {
    pub spec: ProcessSpec,
    pub alpha_sq: f64,
    pub times: Vec<f64>,
    /// `None` resolves through [`auto_cutoffs`].
    pub cutoffs: Option<FockCutoffs>,
    pub l_max: usize,
    pub modes: Vec<Mode>,
    pub method: EvolutionMethod,
    pub tolerance: f64,
}

impl RunRequest {
    pub fn new(spec: ProcessSpec, alpha_sq: f64, times: Vec<f64>) -> Self {
        Self {
            spec,
            alpha_sq,
            times,
            cutoffs: None,
            l_max: 3,
            modes: vec![Mode::A, Mode::B],
            method: EvolutionMethod::EigenDecomposition,
            tolerance: 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExactRun {
    pub cutoffs: FockCutoffs,
    pub tail_mass: f64,
    pub trajectory: Trajectory,
    pub reports: BTreeMap<Mode, Vec<CriterionReport>>,
    /// Largest `|norm^2 - 1|` over the trajectory.
    pub norm_drift: f64,
    /// Largest `|<H>(t) - <H>(0)|`, relative to `max(|<H>(0)|, 1)`.
    pub energy_drift: f64,
    /// Largest `|<Q>(t) - <Q>(0)|`, relative to `max(<Q>(0), 1)`.
    pub charge_drift: f64,
    pub warnings: Vec<String>,
}

impl ExactRun {
    pub fn reports(&self, mode: Mode) -> &[CriterionReport] {
        self.reports.get(&mode).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Evolves `|sqrt(alpha_sq), 0>` and evaluates the criteria at every time.
pub fn run_exact(request: &RunRequest) -> Result<ExactRun> {
    if request.l_max == 0 || request.l_max + 1 > MAX_MOMENT_ORDER {
        return Err(Error::MomentOrderTooLarge {
            requested: request.l_max + 1,
            bound: MAX_MOMENT_ORDER,
        });
    }
    let cutoffs = match request.cutoffs {
        Some(c) => c,
        None => auto_cutoffs(&request.spec, request.alpha_sq)?,
    };
    let h = build_hamiltonian(&request.spec, cutoffs)?;
    let initial = make_coherent_vacuum(Complex64::new(request.alpha_sq.sqrt(), 0.0), cutoffs)?;
    let plan = EvolutionPlan::new(&h, request.times.clone())?
        .with_method(request.method)
        .with_tolerance(request.tolerance)?;
    let trajectory = evolve(&initial.state, &plan)?;

    let mut reports = BTreeMap::new();
    for &mode in &request.modes {
        let per_time = trajectory
            .states
            .iter()
            .zip(&trajectory.times)
            .zip(&trajectory.leakage)
            .map(|((state, &t), &leak)| {
                let m = factorial_moments(state, mode, request.l_max + 1)?;
                CriterionReport::from_moments(&m, t, request.l_max, leak)
            })
            .collect::<Result<Vec<_>>>()?;
        reports.insert(mode, per_time);
    }

    let e0 = h.expectation(&initial.state)?;
    let energy = energy_drift(&trajectory.states, &h)?
        .into_iter()
        .fold(0.0, f64::max)
        / e0.abs().max(1.0);
    let q = crate::process::conserved_charge(&request.spec, cutoffs).expectation(&initial.state);
    let charge = charge_drift(&trajectory.states, &request.spec)
        .into_iter()
        .fold(0.0, f64::max)
        / q.max(1.0);

    let mut warnings = h.warnings();
    if trajectory.flagged {
        warnings.push(format!(
            "truncation leakage {:.3e} exceeds the ceiling; enlarge the cutoffs",
            trajectory.max_leakage()
        ));
    }
    Ok(ExactRun {
        cutoffs,
        tail_mass: initial.tail_mass,
        norm_drift: trajectory.norm_drift(),
        energy_drift: energy,
        charge_drift: charge,
        trajectory,
        reports,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auto_cutoffs_follow_heuristic() {
        let fwm = ProcessSpec::five_wave_mixing(1e-3).unwrap();
        let c = auto_cutoffs(&fwm, 1.0).unwrap();
        assert_eq!(c.as_pair(), (26 + 3, 18));
        let thg = ProcessSpec::third_harmonic(1e-3).unwrap();
        assert_eq!(auto_cutoffs(&thg, 4.0).unwrap().as_pair(), (39 + 3, 14));
        assert!(auto_cutoffs(&fwm, -1.0).is_err());
    }

    #[test]
    fn pump_criteria_turn_negative() {
        let req = RunRequest::new(
            ProcessSpec::five_wave_mixing(1e-3).unwrap(),
            1.0,
            vec![0.0, 0.5, 1.0],
        );
        let run = run_exact(&req).unwrap();
        let a = run.reports(Mode::A);
        assert!(a[0].hoa.values().all(|v| v.abs() < 1e-12));
        for r in &a[1..] {
            assert!(r.d(1).unwrap() < 0.0);
            assert!(r.d(2).unwrap() < 0.0);
            assert!(r.big_d(2).unwrap() < 0.0);
        }
        assert!(run.norm_drift < 1e-12);
        assert!(run.energy_drift < 1e-12);
        assert!(run.charge_drift < 1e-12);
        assert!(run.warnings.is_empty());
    }
}
