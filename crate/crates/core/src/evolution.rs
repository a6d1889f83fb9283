//! Exact unitary evolution `|psi(t)> = exp(-iHt) |psi(0)>` on the truncated basis.
//!
//! The default route diagonalizes `H` one conserved-charge block at a time
//! and evaluates the propagator as `psi0 + U (exp(-i E t) - 1) U^T psi0`,
//! which keeps the small change of the state accurate to relative machine
//! precision even when `g t` is tiny.

use std::io::{self, Write};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{factorial_moments, FactorialMoments, Mode, TwoModeState};
use crate::process::{conserved_charge, HamiltonianMatrix, ProcessSpec};

/// Wall-band probability above which a trajectory is flagged.
pub const LEAKAGE_CEILING: f64 = 1e-6;

/// Basis dimension above which eigendecomposition falls back to the ODE route.
pub const DEFAULT_ODE_THRESHOLD: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvolutionMethod {
    EigenDecomposition,
    /// Scaled truncated Taylor series of the propagator applied to the state.
    ScaledExpm,
    /// Dormand–Prince 5(4) with adaptive steps.
    OdeAdaptive,
}

impl EvolutionMethod {
    pub fn name(self) -> &'static str {
        match self {
            EvolutionMethod::EigenDecomposition => "eigen",
            EvolutionMethod::ScaledExpm => "expm",
            EvolutionMethod::OdeAdaptive => "ode",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "eigen" | "eigendecomposition" => Some(EvolutionMethod::EigenDecomposition),
            "expm" | "scaled-expm" => Some(EvolutionMethod::ScaledExpm),
            "ode" | "ode-adaptive" => Some(EvolutionMethod::OdeAdaptive),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvolutionPlan<'a> {
    pub hamiltonian: &'a HamiltonianMatrix,
    times: Vec<f64>,
    pub method: EvolutionMethod,
    pub tolerance: f64,
    pub ode_threshold: usize,
}

impl<'a> EvolutionPlan<'a> {
    pub fn new(hamiltonian: &'a HamiltonianMatrix, times: Vec<f64>) -> Result<Self> {
        validate_times(&times)?;
        Ok(Self {
            hamiltonian,
            times,
            method: EvolutionMethod::EigenDecomposition,
            tolerance: 1e-10,
            ode_threshold: DEFAULT_ODE_THRESHOLD,
        })
    }

    pub fn with_method(mut self, method: EvolutionMethod) -> Self {
        self.method = method;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::OutOfRange {
                name: "tolerance",
                value: tolerance,
                reason: "must be positive",
            });
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// The method actually used once the dimension threshold is applied.
    pub fn effective_method(&self) -> EvolutionMethod {
        match self.method {
            EvolutionMethod::EigenDecomposition if self.hamiltonian.dim() > self.ode_threshold => {
                EvolutionMethod::OdeAdaptive
            }
            m => m,
        }
    }
}

fn validate_times(times: &[f64]) -> Result<()> {
    let ok =
        times.iter().all(|t| t.is_finite() && *t >= 0.0) && times.windows(2).all(|w| w[0] < w[1]);
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidTimes)
    }
}

/// States at the requested times plus boundary diagnostics.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<TwoModeState>,
    /// Probability inside the truncation wall band at each time.
    pub leakage: Vec<f64>,
    /// Set when any leakage value exceeds [`LEAKAGE_CEILING`].
    pub flagged: bool,
    pub method: EvolutionMethod,
}

impl Trajectory {
    pub fn max_leakage(&self) -> f64 {
        self.leakage.iter().copied().fold(0.0, f64::max)
    }

    pub fn norm_drift(&self) -> f64 {
        self.states
            .iter()
            .map(|s| (s.norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Probability within reach of the hard wall: `n_a` within `m` of the pump
/// cutoff or `n_b` within `n` of the signal cutoff.
pub fn wall_mass(state: &TwoModeState, spec: &ProcessSpec) -> f64 {
    state.boundary_mass(spec.m as usize, spec.n as usize)
}

pub fn evolve(state0: &TwoModeState, plan: &EvolutionPlan<'_>) -> Result<Trajectory> {
    let h = plan.hamiltonian;
    h.check_cutoffs(state0)?;
    let method = plan.effective_method();
    let states = match method {
        EvolutionMethod::EigenDecomposition => {
            let prop = SpectralPropagator::new(h)?;
            crate::sweep::map(&plan.times, |&t| prop.apply(state0, t))
        }
        EvolutionMethod::ScaledExpm => stepwise(state0, &plan.times, |psi, dt| {
            taylor_step(h, psi, dt);
            Ok(())
        })?,
        EvolutionMethod::OdeAdaptive => {
            let tol = plan.tolerance * 1e-3;
            stepwise(state0, &plan.times, |psi, dt| dopri5(h, psi, dt, tol))?
        }
    };
    let spec = h.spec();
    let leakage: Vec<f64> = states.iter().map(|s| wall_mass(s, spec)).collect();
    let flagged = leakage.iter().any(|&l| l > LEAKAGE_CEILING);
    Ok(Trajectory {
        times: plan.times.clone(),
        states,
        leakage,
        flagged,
        method,
    })
}

fn stepwise<F>(state0: &TwoModeState, times: &[f64], mut advance: F) -> Result<Vec<TwoModeState>>
where
    F: FnMut(&mut [Complex64], f64) -> Result<()>,
{
    let mut psi = state0.amplitudes().to_vec();
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        if t > now {
            advance(&mut psi, t - now)?;
            now = t;
        }
        out.push(TwoModeState::from_evolved(
            psi.clone(),
            state0.cutoffs(),
            state0.truncation_deficit(),
        ));
    }
    Ok(out)
}

struct Block {
    indices: Vec<usize>,
    shift: f64,
    energies: Vec<f64>,
    vectors: DMatrix<f64>,
}

/// Block-diagonal eigendecomposition of `H`, reusable for any time.
pub struct SpectralPropagator {
    blocks: Vec<Block>,
    dim: usize,
}

impl SpectralPropagator {
    pub fn new(h: &HamiltonianMatrix) -> Result<Self> {
        let charge = conserved_charge(h.spec(), h.cutoffs());
        let mut blocks = Vec::new();
        for indices in charge.blocks() {
            let size = indices.len();
            let shift = h.get(indices[0], indices[0]);
            let mut sub = DMatrix::<f64>::zeros(size, size);
            for (r, &i) in indices.iter().enumerate() {
                for (c, &j) in indices.iter().enumerate() {
                    sub[(r, c)] = h.get(i, j);
                }
                sub[(r, r)] -= shift;
            }
            let eig = SymmetricEigen::try_new(sub, f64::EPSILON, 0).ok_or_else(|| {
                Error::Numerical(format!(
                    "eigendecomposition of a block of size {size} did not converge"
                ))
            })?;
            blocks.push(Block {
                indices,
                shift,
                energies: eig.eigenvalues.iter().copied().collect(),
                vectors: eig.eigenvectors,
            });
        }
        Ok(Self {
            blocks,
            dim: h.dim(),
        })
    }

    /// All eigenvalues of `H`, unsorted.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.blocks
            .iter()
            .flat_map(|b| b.energies.iter().map(move |e| e + b.shift))
            .collect()
    }

    pub fn apply(&self, state: &TwoModeState, t: f64) -> TwoModeState {
        debug_assert_eq!(state.amplitudes().len(), self.dim);
        let psi0 = state.amplitudes();
        let mut out = psi0.to_vec();
        for block in &self.blocks {
            let size = block.indices.len();
            let local: Vec<Complex64> = block.indices.iter().map(|&i| psi0[i]).collect();
            if local.iter().all(|z| *z == Complex64::default()) {
                continue;
            }
            // d_k = (exp(-i E_k t) - 1) <v_k|psi0>
            let weights: Vec<Complex64> = (0..size)
                .map(|k| {
                    let overlap: Complex64 =
                        (0..size).map(|r| local[r] * block.vectors[(r, k)]).sum();
                    overlap * expm1_i(-block.energies[k] * t)
                })
                .collect();
            let phase = Complex64::from_polar(1.0, -block.shift * t);
            for (r, &i) in block.indices.iter().enumerate() {
                let delta: Complex64 = (0..size).map(|k| weights[k] * block.vectors[(r, k)]).sum();
                out[i] = (local[r] + delta) * phase;
            }
        }
        TwoModeState::from_evolved(out, state.cutoffs(), state.truncation_deficit())
    }
}

/// `exp(i theta) - 1` without cancellation for small `theta`.
fn expm1_i(theta: f64) -> Complex64 {
    let half = (0.5 * theta).sin();
    Complex64::new(-2.0 * half * half, theta.sin())
}

fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Advances `psi` by `dt` with a scaled Taylor expansion of `exp(-i (H - mu) dt)`.
fn taylor_step(h: &HamiltonianMatrix, psi: &mut [Complex64], dt: f64) {
    let dim = h.dim();
    let diag: Vec<f64> = (0..dim).map(|i| h.get(i, i)).collect();
    let (lo, hi) = diag
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &d| {
            (lo.min(d), hi.max(d))
        });
    let mu = 0.5 * (lo + hi);
    let bound = (h.norm_inf() + mu.abs()) * dt;
    let substeps = bound.ceil().max(1.0) as usize;
    let tau = dt / substeps as f64;
    let phase = Complex64::from_polar(1.0, -mu * tau);
    let minus_i = Complex64::new(0.0, -1.0);
    let mut term = vec![Complex64::default(); dim];
    let mut scratch = vec![Complex64::default(); dim];
    for _ in 0..substeps {
        term.copy_from_slice(psi);
        for k in 1..=60 {
            h.apply(&term, &mut scratch);
            let factor = minus_i * (tau / k as f64);
            for (s, t) in scratch.iter_mut().zip(&term) {
                *s = (*s - t * mu) * factor;
            }
            std::mem::swap(&mut term, &mut scratch);
            for (p, t) in psi.iter_mut().zip(&term) {
                *p += t;
            }
            if max_abs(&term) <= 1e-18 * max_abs(psi) {
                break;
            }
        }
        psi.iter_mut().for_each(|p| *p *= phase);
    }
}

/// Adaptive Dormand–Prince integration of `psi' = -i H psi` over `dt`.
///
/// Integrates in the frame rotating with the diagonal of `H`, so the step
/// size is set by the interaction alone: with `psi = exp(-i D s) phi`,
/// `phi' = -i exp(i D s) V exp(-i D s) phi` where `V = H - D`.
fn dopri5(h: &HamiltonianMatrix, psi: &mut [Complex64], dt: f64, tol: f64) -> Result<()> {
    const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    const B5: [f64; 7] = [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
        0.0,
    ];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let dim = h.dim();
    let diag: Vec<f64> = (0..dim).map(|i| h.get(i, i)).collect();
    let coupling: f64 = {
        let mut rows = vec![0.0; dim];
        for (r, c, v) in h.entries() {
            if r != c {
                rows[r] += v.abs();
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    };
    if coupling == 0.0 {
        for (p, d) in psi.iter_mut().zip(&diag) {
            *p *= Complex64::from_polar(1.0, -d * dt);
        }
        return Ok(());
    }
    let mut rotated = vec![Complex64::default(); dim];
    let mut product = vec![Complex64::default(); dim];
    let mut rhs = |s: f64, phi: &[Complex64], out: &mut [Complex64]| {
        for ((r, p), d) in rotated.iter_mut().zip(phi).zip(&diag) {
            *r = p * Complex64::from_polar(1.0, -d * s);
        }
        h.apply(&rotated, &mut product);
        for (((o, y), r), d) in out.iter_mut().zip(&product).zip(&rotated).zip(&diag) {
            // drop the diagonal part of H r
            let v = y - r * d;
            *o = Complex64::new(v.im, -v.re) * Complex64::from_polar(1.0, d * s);
        }
    };
    let mut k = vec![vec![Complex64::default(); dim]; 7];
    let mut stage = vec![Complex64::default(); dim];
    let mut candidate = vec![Complex64::default(); dim];
    let mut phi = psi.to_vec();
    let mut elapsed = 0.0;
    let mut step = (0.1 / coupling).min(dt);
    let mut accepted_steps = 0usize;
    rhs(0.0, &phi, &mut k[0]);
    while elapsed < dt {
        if dt - elapsed < step {
            step = dt - elapsed;
        }
        for s in 1..7 {
            for (j, out) in stage.iter_mut().enumerate() {
                let mut acc = phi[j];
                for (prev, a) in k.iter().zip(&A[s]).take(s) {
                    acc += prev[j] * (a * step);
                }
                *out = acc;
            }
            rhs(elapsed + C[s] * step, &stage, &mut k[s]);
        }
        let mut err: f64 = 0.0;
        for j in 0..dim {
            let mut hi = phi[j];
            let mut diff = Complex64::default();
            for s in 0..7 {
                hi += k[s][j] * (B5[s] * step);
                diff += k[s][j] * ((B5[s] - B4[s]) * step);
            }
            candidate[j] = hi;
            let scale = tol * (1.0 + phi[j].norm().max(hi.norm()));
            err = err.max(diff.norm() / scale);
        }
        if err <= 1.0 {
            elapsed += step;
            phi.copy_from_slice(&candidate);
            // first-same-as-last: the final stage is the derivative at the new point
            k.swap(0, 6);
            accepted_steps += 1;
            if accepted_steps > 10_000_000 {
                return Err(Error::Numerical(
                    "ODE integration exceeded its step budget".into(),
                ));
            }
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        step *= factor;
        if step < 1e-14 * dt.max(1.0) {
            return Err(Error::Numerical("ODE step size underflow".into()));
        }
    }
    for ((p, f), d) in psi.iter_mut().zip(&phi).zip(&diag) {
        *p = f * Complex64::from_polar(1.0, -d * dt);
    }
    Ok(())
}

/// Factorial moments of one mode along a trajectory.
pub fn moments_at(
    states: &[TwoModeState],
    mode: Mode,
    k_max: usize,
) -> Result<Vec<FactorialMoments>> {
    states
        .iter()
        .map(|s| factorial_moments(s, mode, k_max))
        .collect()
}

/// `|<Q>(t) - <Q>(0)|` for `Q = n N_A + m N_B`.
pub fn charge_drift(states: &[TwoModeState], spec: &ProcessSpec) -> Vec<f64> {
    let Some(first) = states.first() else {
        return Vec::new();
    };
    let q = conserved_charge(spec, first.cutoffs());
    let q0 = q.expectation(first);
    states
        .iter()
        .map(|s| (q.expectation(s) - q0).abs())
        .collect()
}

/// `|<H>(t) - <H>(0)|` along a trajectory.
pub fn energy_drift(states: &[TwoModeState], h: &HamiltonianMatrix) -> Result<Vec<f64>> {
    let Some(first) = states.first() else {
        return Ok(Vec::new());
    };
    let e0 = h.expectation(first)?;
    states
        .iter()
        .map(|s| h.expectation(s).map(|e| (e - e0).abs()))
        .collect()
}

/// Trajectory CSV: `time,mode,n1,n2,n3,n4,norm,leakage,charge_drift`.
pub fn write_trajectory_csv<W: Write>(
    mut out: W,
    trajectory: &Trajectory,
    spec: &ProcessSpec,
    modes: &[Mode],
) -> io::Result<()> {
    writeln!(out, "time,mode,n1,n2,n3,n4,norm,leakage,charge_drift")?;
    let drift = charge_drift(&trajectory.states, spec);
    for (idx, (t, state)) in trajectory.times.iter().zip(&trajectory.states).enumerate() {
        for &mode in modes {
            let m = factorial_moments(state, mode, 4)
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?;
            let v = m.values();
            writeln!(
                out,
                "{t:.17e},{mode},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                v[0],
                v[1],
                v[2],
                v[3],
                state.norm_sqr(),
                trajectory.leakage[idx],
                drift[idx]
            )?;
        }
    }
    Ok(())
}
