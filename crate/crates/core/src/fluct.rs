//! Quadratic fluctuations around the zero-temperature mean-field solution.
//!
//! Expanding the junction cosine about `ψ_th` to second order leaves a
//! bosonic problem of the same form as the linearized circuit, with the
//! Josephson energy replaced by `Ē_J = E_J ⟨cos(2πψ/Φ0)⟩` taken in the ground
//! state of `H_eff(φ_th)`. The polariton formula then gives `ω̄_±`.

use crate::circuit::{derive_linear, polariton_frequencies, CircuitParams, DerivedLinear};
use crate::error::{Error, Result};
use crate::meanfield::{MeanField, MeanFieldSolution, ORDER_FLOOR};
use crate::units::{Temperature, FLUX_QUANTUM, PHASE_PER_FLUX};
use rayon::prelude::*;
use serde::Serialize;

/// Relative tolerance for `ψ_th` recomputed from the effective ground state.
pub const STALE_TOL: f64 = 1e-8;

/// Number of points in the default `L_R0` scan over [0.1, 1.0] nH.
pub const SCAN_POINTS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RenormalizedParams {
    pub e_j_bar: f64,
    pub l_j_bar: f64,
    pub omega_a_bar: f64,
    pub z_a_bar: f64,
    pub g_bar: f64,
    pub phi_th: f64,
    pub psi_th: f64,
    /// Ground-state `⟨cos(2πψ/Φ0)⟩`.
    pub cos_mean: f64,
    /// Ground-state `⟨sin(2πψ/Φ0)⟩`.
    pub sin_mean: f64,
}

impl RenormalizedParams {
    /// Renormalized atom for a given ground-state cosine expectation.
    ///
    /// Deep in the ordered phase the displaced state sits near `2πψ/Φ0 = π/2`
    /// and `⟨cos⟩` can turn negative; `L̄_J` is then negative (infinite at
    /// `⟨cos⟩ = 0`) while the atom stiffness stays positive.
    pub fn from_cos_mean(params: &CircuitParams, cos_mean: f64) -> Result<Self> {
        let e_j_bar = params.e_j() * cos_mean;
        let inv_l_j_bar = e_j_bar * PHASE_PER_FLUX * PHASE_PER_FLUX;
        let l_j_bar = inv_l_j_bar.recip();
        let k = 1.0 / params.l_g() - inv_l_j_bar;
        if !(k > 0.0) {
            return Err(Error::ImaginaryFrequency(format!(
                "1/L_g − 1/L̄_J = {k:.4e} H⁻¹ ≤ 0 (L̄_J = {l_j_bar:.4e} H)"
            )));
        }
        let z_a_bar = (1.0 / (k * params.c_j())).sqrt();
        let z_c0 = derive_linear(params).z_c0;
        Ok(RenormalizedParams {
            e_j_bar,
            l_j_bar,
            omega_a_bar: (k / params.c_j()).sqrt(),
            z_a_bar,
            g_bar: (z_c0 * z_a_bar).sqrt() / (2.0 * params.l_g()),
            phi_th: 0.0,
            psi_th: 0.0,
            cos_mean,
            sin_mean: 0.0,
        })
    }
}

fn require_ground_state(solution: &MeanFieldSolution) -> Result<()> {
    if !solution.temperature.is_zero() {
        return Err(Error::InvalidTemperature("zero for the fluctuation expansion"));
    }
    Ok(())
}

/// Renormalized parameters at a `T = 0` mean-field solution. The solution is
/// rejected as stale when `⟨ψ⟩` in the effective ground state disagrees with
/// its `ψ_th`.
pub fn renormalize_with(mf: &MeanField, solution: &MeanFieldSolution) -> Result<RenormalizedParams> {
    require_ground_state(solution)?;
    let spec = mf.spectrum(solution.phi_th);
    let ops = mf.ops();
    let psi = spec.thermal_expectation(&ops.psi, Temperature::ZERO)?;
    let tol = STALE_TOL * solution.psi_th.abs().max(ORDER_FLOOR * FLUX_QUANTUM);
    if (psi - solution.psi_th).abs() > tol {
        return Err(Error::StaleSolution(format!(
            "ground-state <ψ> = {psi:.10e} Wb, solution carries {:.10e} Wb",
            solution.psi_th
        )));
    }
    let cos_mean = spec.thermal_expectation(&ops.cos, Temperature::ZERO)?;
    let sin_mean = spec.thermal_expectation(&ops.sin, Temperature::ZERO)?;
    Ok(RenormalizedParams {
        phi_th: solution.phi_th,
        psi_th: solution.psi_th,
        sin_mean,
        ..RenormalizedParams::from_cos_mean(mf.params(), cos_mean)?
    })
}

pub fn renormalize(params: &CircuitParams, solution: &MeanFieldSolution, dim: usize) -> Result<RenormalizedParams> {
    renormalize_with(&MeanField::new(params, dim)?, solution)
}

/// Photon and atom stationarity residuals (ampere) of a `T = 0` solution:
///
/// ```text
/// (1/L_R0 + 1/L_g) φ_th − ψ_th/L_g
/// (ψ_th − φ_th)/L_g − (2π/Φ0) E_J ⟨sin(2πψ/Φ0)⟩
/// ```
///
/// Both vanish when the linear terms of the fluctuation expansion cancel.
pub fn stationarity_check_with(mf: &MeanField, solution: &MeanFieldSolution) -> Result<(f64, f64)> {
    require_ground_state(solution)?;
    let p = mf.params();
    let sin_mean = mf.spectrum(solution.phi_th).thermal_expectation(&mf.ops().sin, Temperature::ZERO)?;
    let (phi, psi) = (solution.phi_th, solution.psi_th);
    let photon = p.photon_stiffness() * phi - psi / p.l_g();
    let atom = (psi - phi) / p.l_g() - PHASE_PER_FLUX * p.e_j() * sin_mean;
    Ok((photon, atom))
}

pub fn stationarity_check(params: &CircuitParams, solution: &MeanFieldSolution, dim: usize) -> Result<(f64, f64)> {
    stationarity_check_with(&MeanField::new(params, dim)?, solution)
}

/// Current scale `Φ0/L_J` used to express stationarity residuals.
pub fn residual_scale(params: &CircuitParams) -> f64 {
    FLUX_QUANTUM / params.l_j()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluctuationSpectrum {
    pub omega_plus: f64,
    pub omega_minus: f64,
    /// Unclamped `ω̄_−²`.
    pub omega_minus_sq: f64,
}

/// `ω̄_±` from the polariton formula with `(ω_c, ω̄_a, ḡ)`. Slightly negative
/// `ω̄_−²` (above `−1e-8 ω_c²`) is rounding and clamped to zero.
pub fn fluctuation_spectrum(renorm: &RenormalizedParams, derived: &DerivedLinear) -> Result<FluctuationSpectrum> {
    let pf = polariton_frequencies(derived.omega_c, renorm.omega_a_bar, renorm.g_bar);
    let wc2 = derived.omega_c * derived.omega_c;
    if pf.omega_minus_sq < -1e-8 * wc2 {
        return Err(Error::ImaginaryFrequency(format!(
            "ω̄_−² = {:.4e} rad²/s², input is not an equilibrium",
            pf.omega_minus_sq
        )));
    }
    Ok(FluctuationSpectrum {
        omega_plus: pf.omega_plus,
        omega_minus: pf.omega_minus_sq.max(0.0).sqrt(),
        omega_minus_sq: pf.omega_minus_sq,
    })
}

/// Zero-point energy shift per atom,
/// `δε = φ_th²/(2L_R0) + (φ_th − ψ_th)²/(2L_g) + Ē_J − E_J`.
pub fn zero_point_shift(params: &CircuitParams, solution: &MeanFieldSolution, renorm: &RenormalizedParams) -> f64 {
    let (phi, psi) = (solution.phi_th, solution.psi_th);
    phi * phi / (2.0 * params.l_r0()) + (phi - psi).powi(2) / (2.0 * params.l_g()) + renorm.e_j_bar - params.e_j()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluctuationPoint {
    pub l_r0: f64,
    pub solution: MeanFieldSolution,
    pub renorm: RenormalizedParams,
    pub spectrum: FluctuationSpectrum,
    /// `ω_c` at this `L_R0`.
    pub omega_c: f64,
    pub delta_eps: f64,
    /// Stationarity residuals in units of `Φ0/L_J`.
    pub stationarity: (f64, f64),
}

impl FluctuationPoint {
    /// `sqrt(ω̄_a ω_c)/2`, the coupling at which `ω̄_−` would vanish.
    pub fn critical_coupling(&self) -> f64 {
        0.5 * (self.renorm.omega_a_bar * self.omega_c).sqrt()
    }
}

/// Mean-field solution, renormalization and spectrum at every `L_R0`.
pub fn fluctuation_scan(params: &CircuitParams, lr0_axis: &[f64], dim: usize) -> Result<Vec<FluctuationPoint>> {
    let base = MeanField::new(params, dim)?;
    lr0_axis
        .par_iter()
        .map(|&l| {
            let mf = base.with_l_r0(l)?;
            let solution = mf.solve(Temperature::ZERO)?;
            let renorm = renormalize_with(&mf, &solution)?;
            let derived = derive_linear(mf.params());
            let spectrum = fluctuation_spectrum(&renorm, &derived)?;
            let (rp, ra) = stationarity_check_with(&mf, &solution)?;
            let scale = residual_scale(mf.params());
            Ok(FluctuationPoint {
                l_r0: l,
                solution,
                renorm,
                spectrum,
                omega_c: derived.omega_c,
                delta_eps: zero_point_shift(mf.params(), &solution, &renorm),
                stationarity: (rp / scale, ra / scale),
            })
        })
        .collect()
}

/// Uniform axis of `n` points on `[lo, hi]`.
pub fn uniform_axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cusp {
    pub index: usize,
    pub l_r0: f64,
    pub value: f64,
    /// One-sided slopes on either side of the minimum.
    pub slope_left: f64,
    pub slope_right: f64,
}

/// Locates a single V-shaped minimum of `y(x)` on a uniform grid.
///
/// The first difference must change sign exactly once (from negative to
/// positive), and the jump in slope at the minimum must dominate the
/// second differences of the neighbouring points, which is what separates
/// a cusp from a smooth minimum.
pub fn find_cusp(x: &[f64], y: &[f64]) -> Option<Cusp> {
    if x.len() != y.len() || x.len() < 5 {
        return None;
    }
    let d: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    let signs: Vec<f64> = d.iter().filter(|v| **v != 0.0).map(|v| v.signum()).collect();
    let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
    if changes != 1 || signs[0] > 0.0 {
        return None;
    }
    let i = (0..y.len()).fold(0, |b, k| if y[k] < y[b] { k } else { b });
    if i == 0 || i == y.len() - 1 {
        return None;
    }
    let jump = d[i] - d[i - 1];
    let neighbours = [i.checked_sub(2), i.checked_add(2)]
        .into_iter()
        .flatten()
        .filter(|&k| k >= 1 && k + 1 < y.len())
        .map(|k| (d[k] - d[k - 1]).abs())
        .fold(0.0, f64::max);
    if !(jump > 0.0 && jump > 2.0 * neighbours) {
        return None;
    }
    Some(Cusp {
        index: i,
        l_r0: x[i],
        value: y[i],
        slope_left: d[i - 1] / (x[i] - x[i - 1]),
        slope_right: d[i] / (x[i + 1] - x[i]),
    })
}
