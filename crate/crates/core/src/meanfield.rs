//! Thermodynamic-limit mean-field solver.
//!
//! For a real coherent amplitude α the photon is replaced by the flux
//! `φ = sqrt(2ħZ_c0) α/√N`, and every atom sees the effective Hamiltonian
//! `H_eff(φ) = H_atom − (φ/L_g) ψ`. The action per atom is
//!
//! ```text
//! S(φ, T)/N = K φ²/2 − k_B T ln Tr e^{−H_eff(φ)/k_B T},   K = 1/L_g + 1/L_R0,
//! ```
//!
//! where `K φ²/2 = ħω_c (α/√N)²`. By Hellmann-Feynman its derivative is
//! `K φ − ⟨ψ⟩/L_g`, the self-consistency residual. Only `φ ≥ 0` is explored;
//! the physical solutions are the pair `±φ_th`.

use crate::circuit::{derive_linear, CircuitParams};
use crate::error::{Error, Result};
use crate::fock::{atom_hamiltonian_with, build_operators, AtomModel, AtomSpectrum, FockOperatorSet};
use crate::optimize::{bisect, golden_section};
use crate::units::{nh, Temperature, FLUX_QUANTUM, HBAR};
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

/// Intervals of the coarse scan over `[0, φ_max]`.
pub const SCAN_INTERVALS: usize = 256;

/// Order parameters below `ORDER_FLOOR · Φ0` are reported as exactly zero.
pub const ORDER_FLOOR: f64 = 1e-6;

/// Stationarity tolerance in units of `Φ0/L_J`.
pub const STATIONARITY_TOL: f64 = 1e-8;

const EVALUATION_BUDGET: usize = 2000;

/// Atom state at one value of the photon flux.
#[derive(Debug, Clone, Copy)]
pub struct AtomResponse {
    /// `−k_B T ln Z_atom`, or the ground energy at `T = 0`.
    pub free_energy: f64,
    /// Thermal `⟨ψ⟩`.
    pub psi_mean: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanFieldSolution {
    /// Non-negative representative of `±φ_th` (weber).
    pub phi_th: f64,
    /// `⟨ψ⟩` at `φ_th` (weber).
    pub psi_th: f64,
    pub alpha_over_sqrt_n: f64,
    /// Action per atom at the minimum (joule), without the `ħω_c/(2N)` constant.
    pub action_per_atom: f64,
    pub temperature: Temperature,
    pub superradiant: bool,
    /// Self-consistency residual at `φ_th` (ampere).
    pub residual: f64,
    pub evaluations: usize,
}

impl MeanFieldSolution {
    /// Both degenerate solutions, `(−φ_th, +φ_th)`.
    pub fn phi_pair(&self) -> (f64, f64) {
        (-self.phi_th, self.phi_th)
    }
}

/// Mean-field problem for one parameter set. The operator matrices depend
/// only on the atom, so [`MeanField::with_l_r0`] reuses them.
#[derive(Debug, Clone)]
pub struct MeanField {
    params: CircuitParams,
    ops: FockOperatorSet,
    h_atom: DMatrix<f64>,
    model: AtomModel,
}

impl MeanField {
    pub fn new(params: &CircuitParams, dim: usize) -> Result<Self> {
        Self::with_model(params, dim, AtomModel::Cosine)
    }

    pub fn with_model(params: &CircuitParams, dim: usize, model: AtomModel) -> Result<Self> {
        let ops = build_operators(&derive_linear(params), dim)?;
        let h_atom = atom_hamiltonian_with(&ops, params, model)?;
        Ok(MeanField { params: *params, ops, h_atom, model })
    }

    pub fn with_l_r0(&self, l_r0: f64) -> Result<Self> {
        Ok(MeanField { params: self.params.with_l_r0(l_r0)?, ..self.clone() })
    }

    pub fn params(&self) -> &CircuitParams {
        &self.params
    }

    pub fn ops(&self) -> &FockOperatorSet {
        &self.ops
    }

    pub fn model(&self) -> AtomModel {
        self.model
    }

    /// `H_eff(φ)` for the configured atom model.
    pub fn effective_hamiltonian(&self, phi: f64) -> DMatrix<f64> {
        let mut h = self.h_atom.clone();
        if phi != 0.0 {
            h -= &self.ops.psi * (phi / self.params.l_g());
        }
        h
    }

    pub fn spectrum(&self, phi: f64) -> AtomSpectrum {
        AtomSpectrum::new(&self.effective_hamiltonian(phi))
    }

    pub fn respond(&self, phi: f64, t: Temperature) -> Result<AtomResponse> {
        let spec = self.spectrum(phi);
        Ok(AtomResponse {
            free_energy: spec.free_energy(t)?,
            psi_mean: spec.thermal_expectation(&self.ops.psi, t)?,
        })
    }

    fn stiffness(&self) -> f64 {
        self.params.photon_stiffness()
    }

    /// `(1/L_R0 + 1/L_g) φ − ⟨ψ⟩/L_g`, equal to `d(S/N)/dφ`.
    pub fn residual(&self, phi: f64, t: Temperature) -> Result<f64> {
        let r = self.respond(phi, t)?;
        Ok(self.stiffness() * phi - r.psi_mean / self.params.l_g())
    }

    pub fn action_per_atom(&self, phi: f64, t: Temperature) -> Result<f64> {
        let r = self.respond(phi, t)?;
        Ok(0.5 * self.stiffness() * phi * phi + r.free_energy)
    }

    /// Full action `S(α, T)` for `n_atoms` atoms, including `ħω_c/2`.
    pub fn action(&self, phi: f64, t: Temperature, n_atoms: usize) -> Result<f64> {
        let omega_c = derive_linear(&self.params).omega_c;
        Ok(n_atoms as f64 * self.action_per_atom(phi, t)? + 0.5 * HBAR * omega_c)
    }

    /// `α/√N = φ/sqrt(2ħZ_c0)`.
    pub fn amplitude(&self, phi: f64) -> f64 {
        phi / (2.0 * HBAR * derive_linear(&self.params).z_c0).sqrt()
    }

    /// Upper end of the scan: 1.5 times the flux that maps onto `ψ = Φ0/2`.
    pub fn phi_max(&self) -> f64 {
        1.5 * 0.5 * FLUX_QUANTUM / self.params.constraint_ratio()
    }

    fn scan(&self, t: Temperature) -> Result<(f64, Vec<f64>)> {
        let step = self.phi_max() / SCAN_INTERVALS as f64;
        let actions = (0..=SCAN_INTERVALS)
            .into_par_iter()
            .map(|i| self.action_per_atom(i as f64 * step, t))
            .collect::<Result<Vec<_>>>()?;
        Ok((step, actions))
    }

    /// Whether the normal phase is unstable at `t`: either some scan point
    /// lies below `S(0)` or the action decreases just right of zero.
    pub fn is_ordered(&self, t: Temperature) -> Result<bool> {
        let (_, s) = self.scan(t)?;
        let below = s[1..].iter().any(|&v| v < s[0]);
        Ok(below || self.residual(ORDER_FLOOR * FLUX_QUANTUM, t)? < 0.0)
    }

    /// Global minimizer of the action per atom over `[0, φ_max]`.
    pub fn solve(&self, t: Temperature) -> Result<MeanFieldSolution> {
        if !(t.thermal_energy() >= 0.0) || !t.thermal_energy().is_finite() {
            return Err(Error::InvalidTemperature("finite and non-negative"));
        }
        let (step, s) = self.scan(t)?;
        let mut evals = s.len();
        let best = (0..s.len()).fold(0, |b, i| if s[i] < s[b] { i } else { b });
        let floor = ORDER_FLOOR * FLUX_QUANTUM;
        let normal = |evals| -> Result<MeanFieldSolution> {
            Ok(MeanFieldSolution {
                phi_th: 0.0,
                psi_th: 0.0,
                alpha_over_sqrt_n: 0.0,
                action_per_atom: s[0],
                temperature: t,
                superradiant: false,
                residual: 0.0,
                evaluations: evals,
            })
        };

        let (lo, hi) = if best == 0 {
            evals += 1;
            if self.residual(floor, t)? >= 0.0 {
                return normal(evals);
            }
            (floor, step)
        } else if best == SCAN_INTERVALS {
            evals += 1;
            let r = self.residual(self.phi_max(), t)?;
            if r < 0.0 {
                return Err(Error::NotConverged { what: "mean-field minimum lies beyond the scan range", evaluations: evals, residual: r });
            }
            ((best - 1) as f64 * step, self.phi_max())
        } else {
            ((best - 1) as f64 * step, (best + 1) as f64 * step)
        };

        let mut failure = None;
        let (x_g, _, n) = golden_section(
            |phi| match self.action_per_atom(phi, t) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            },
            lo,
            hi,
            1e-7,
            0.0,
        );
        evals += n;
        if let Some(e) = failure {
            return Err(e);
        }

        let (phi_th, n) = self.polish(x_g, lo, hi, t)?;
        evals += n;
        let response = self.respond(phi_th, t)?;
        let residual = self.stiffness() * phi_th - response.psi_mean / self.params.l_g();
        let action = 0.5 * self.stiffness() * phi_th * phi_th + response.free_energy;
        evals += 1;
        let tol = STATIONARITY_TOL * FLUX_QUANTUM / self.params.l_j();
        if residual.abs() >= tol || evals > EVALUATION_BUDGET {
            return Err(Error::NotConverged { what: "mean-field stationarity", evaluations: evals, residual });
        }
        if phi_th < floor || action > s[0] {
            return normal(evals);
        }
        Ok(MeanFieldSolution {
            phi_th,
            psi_th: response.psi_mean,
            alpha_over_sqrt_n: self.amplitude(phi_th),
            action_per_atom: action,
            temperature: t,
            superradiant: true,
            residual,
            evaluations: evals,
        })
    }

    /// Refines the golden-section estimate on the sign change of the exact
    /// gradient, widening a window around it until the residual changes sign.
    fn polish(&self, x_g: f64, lo: f64, hi: f64, t: Temperature) -> Result<(f64, usize)> {
        let mut evals = 0;
        let mut w = 1e-6 * (hi - lo);
        loop {
            let a = (x_g - w).max(lo);
            let b = (x_g + w).min(hi);
            let (ra, rb) = (self.residual(a, t)?, self.residual(b, t)?);
            evals += 2;
            if ra < 0.0 && rb >= 0.0 {
                let mut failure = None;
                let (root, n) = bisect(
                    |phi| match self.residual(phi, t) {
                        Ok(v) => v,
                        Err(e) => {
                            failure.get_or_insert(e);
                            0.0
                        }
                    },
                    a,
                    b,
                    ra,
                    rb,
                    200,
                )?;
                if let Some(e) = failure {
                    return Err(e);
                }
                return Ok((root, evals + n));
            }
            if a == lo && b == hi {
                return Err(Error::NotConverged { what: "mean-field gradient bracket", evaluations: evals, residual: ra });
            }
            w *= 8.0;
        }
    }
}

pub fn selfconsistency_residual(phi: f64, t: Temperature, params: &CircuitParams, dim: usize) -> Result<f64> {
    MeanField::new(params, dim)?.residual(phi, t)
}

pub fn action_per_atom(phi: f64, t: Temperature, params: &CircuitParams, dim: usize) -> Result<f64> {
    MeanField::new(params, dim)?.action_per_atom(phi, t)
}

pub fn solve(params: &CircuitParams, t: Temperature, dim: usize) -> Result<MeanFieldSolution> {
    MeanField::new(params, dim)?.solve(t)
}

/// Onset resolution of [`critical_inductance_at_zero_t`].
pub const CRITICAL_TOL: f64 = 1e-13;

/// Smallest `L_R0` with an ordered ground state at `T = 0`, by bisection
/// to [`CRITICAL_TOL`] (0.1 pH).
pub fn critical_inductance_at_zero_t(params: &CircuitParams, dim: usize) -> Result<f64> {
    critical_inductance_with(params, dim, AtomModel::Cosine)
}

pub fn critical_inductance_with(params: &CircuitParams, dim: usize, model: AtomModel) -> Result<f64> {
    let base = MeanField::with_model(params, dim, model)?;
    let ordered = |l: f64| base.with_l_r0(l)?.is_ordered(Temperature::ZERO);
    let guess = params.l_j() - params.l_g();
    let mut lo = 0.5 * guess;
    let mut hi = 2.0 * guess;
    if ordered(lo)? {
        return Err(Error::Bracket(format!("ordered already at L_R0 = {:.4} nH", lo / nh(1.0))));
    }
    let mut grow = 0;
    while !ordered(hi)? {
        grow += 1;
        if grow > 6 {
            return Err(Error::Bracket(format!("no ordered phase up to L_R0 = {:.4} nH", hi / nh(1.0))));
        }
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > CRITICAL_TOL {
        let mid = 0.5 * (lo + hi);
        if ordered(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Mean-field solutions over an `(L_R0, T)` grid. Index as `[i_lr0][i_t]`.
#[derive(Debug, Clone, Serialize)]
pub struct PhaseDiagramGrid {
    pub lr0_axis: Vec<f64>,
    pub temp_axis: Vec<Temperature>,
    /// `α_th/√N`; NaN where the solver failed.
    pub amplitude: Vec<Vec<f64>>,
    /// `φ_th` (weber); NaN where the solver failed.
    pub phi_th: Vec<Vec<f64>>,
    /// `(L_R0, T_c)` for every column whose amplitude vanishes inside the
    /// temperature range.
    pub boundary: Vec<(f64, Temperature)>,
}

impl PhaseDiagramGrid {
    pub fn failures(&self) -> usize {
        self.amplitude.iter().flatten().filter(|a| a.is_nan()).count()
    }
}

/// Solves every grid cell in parallel. Failed cells are recorded as NaN.
pub fn phase_boundary(
    params: &CircuitParams,
    lr0_axis: &[f64],
    temp_axis: &[Temperature],
    dim: usize,
) -> Result<PhaseDiagramGrid> {
    let sorted = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]);
    let temps: Vec<f64> = temp_axis.iter().map(|t| t.as_kelvin()).collect();
    if !sorted(lr0_axis) || !sorted(&temps) {
        return Err(Error::InvalidParameter("phase-diagram axes must be strictly ascending".into()));
    }
    let base = MeanField::new(params, dim)?;
    let cells: Vec<Option<MeanFieldSolution>> = lr0_axis
        .iter()
        .flat_map(|&l| temp_axis.iter().map(move |&t| (l, t)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(l, t)| base.with_l_r0(l).and_then(|mf| mf.solve(t)).ok())
        .collect();
    let nt = temp_axis.len();
    let pick = |f: fn(&MeanFieldSolution) -> f64| -> Vec<Vec<f64>> {
        cells.chunks(nt).map(|col| col.iter().map(|c| c.as_ref().map_or(f64::NAN, f)).collect()).collect()
    };
    let amplitude = pick(|s| s.alpha_over_sqrt_n);
    let phi_th = pick(|s| s.phi_th);
    let boundary = lr0_axis
        .iter()
        .zip(&amplitude)
        .filter_map(|(&l, col)| critical_temperature(temp_axis, col).map(|t| (l, t)))
        .collect();
    Ok(PhaseDiagramGrid { lr0_axis: lr0_axis.to_vec(), temp_axis: temp_axis.to_vec(), amplitude, phi_th, boundary })
}

/// Temperature at which an amplitude column first vanishes. Near the
/// transition `α²` is linear in `T`, so the last two ordered points are
/// extrapolated to `α² = 0` and the result is clamped into the bracketing
/// interval. With a single ordered point the interval midpoint is used.
pub fn critical_temperature(temps: &[Temperature], amplitude: &[f64]) -> Option<Temperature> {
    let first_zero = amplitude.iter().position(|&a| a == 0.0)?;
    if first_zero == 0 {
        return None;
    }
    let i = first_zero - 1;
    let (t_i, t_z) = (temps[i].as_kelvin(), temps[first_zero].as_kelvin());
    let a2 = |k: usize| amplitude[k] * amplitude[k];
    let t_c = if i >= 1 && a2(i - 1) > a2(i) && a2(i).is_finite() {
        let t_prev = temps[i - 1].as_kelvin();
        t_i + a2(i) * (t_i - t_prev) / (a2(i - 1) - a2(i))
    } else {
        0.5 * (t_i + t_z)
    };
    Some(Temperature::kelvin(t_c.clamp(t_i, t_z)))
}

/// Per-atom free energies `−k_B T ln Z_atom(φ, T)` for increasing truncations.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub dims: Vec<usize>,
    pub free_energies: Vec<f64>,
    /// Successive increments shrink (down to rounding) and the last one is
    /// below `1e-8 E_J`.
    pub converged: bool,
}

impl ConvergenceReport {
    pub fn last_increment(&self) -> Option<f64> {
        let n = self.free_energies.len();
        (n >= 2).then(|| (self.free_energies[n - 1] - self.free_energies[n - 2]).abs())
    }
}

pub fn free_energy_convergence_check(
    params: &CircuitParams,
    phi: f64,
    t: Temperature,
    dims: &[usize],
) -> Result<ConvergenceReport> {
    if !(t.thermal_energy() > 0.0) {
        return Err(Error::InvalidTemperature("positive for a partition function"));
    }
    if !dims.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidParameter("truncations must be strictly ascending".into()));
    }
    let free_energies = dims
        .iter()
        .map(|&m| MeanField::new(params, m)?.respond(phi, t).map(|r| r.free_energy))
        .collect::<Result<Vec<_>>>()?;
    let e_j = params.e_j();
    let noise = 1e-12 * e_j;
    let steps: Vec<f64> = free_energies.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let shrinking = steps.windows(2).all(|w| w[1] <= w[0] || w[1] < noise);
    let converged = shrinking && steps.last().is_some_and(|&d| d < 1e-8 * e_j);
    Ok(ConvergenceReport { dims: dims.to_vec(), free_energies, converged })
}
