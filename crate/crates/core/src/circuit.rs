//! Circuit parameters, linearized (bosonized) quantities and the classical
//! inductive-energy analysis.
//!
//! The resonator inductance and capacitance are scaled with the number of
//! junction branches, `L_R = L_R0/N` and `C_R = N·C_R0`, so every quantity in
//! this module is N-independent. The external flux bias is fixed at Φ0/2,
//! which shows up as the `+E_J cos(2πψ/Φ0)` sign of the junction energy.

use crate::error::{Error, Result};
use crate::optimize::{bisect, golden_section};
use crate::units::{self, josephson_energy, PHASE_PER_FLUX};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Lumped-element parameters of the circuit, SI units.
///
/// `l_j` may be `+∞` (no junction, `E_J = 0`) and `l_r0` may be `+∞`
/// (resonator inductance removed); all other values must be finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    l_j: f64,
    l_g: f64,
    c_j: f64,
    c_r0: f64,
    l_r0: f64,
}

impl CircuitParams {
    pub fn new(l_j: f64, l_g: f64, c_j: f64, c_r0: f64, l_r0: f64) -> Result<Self> {
        let positive = |name: &str, v: f64, allow_inf: bool| -> Result<()> {
            if v.is_nan() || v <= 0.0 || (!allow_inf && v.is_infinite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")));
            }
            Ok(())
        };
        positive("L_J", l_j, true)?;
        positive("L_g", l_g, false)?;
        positive("C_J", c_j, false)?;
        positive("C_R0", c_r0, false)?;
        positive("L_R0", l_r0, true)?;
        if l_g >= l_j {
            return Err(Error::InvalidParameter(format!(
                "L_g ({l_g:e} H) must be smaller than L_J ({l_j:e} H), otherwise the atom frequency is imaginary"
            )));
        }
        Ok(CircuitParams { l_j, l_g, c_j, c_r0, l_r0 })
    }

    /// Parameters specified through the Josephson energy instead of `L_J`.
    pub fn from_josephson_energy(e_j: f64, l_g: f64, c_j: f64, c_r0: f64, l_r0: f64) -> Result<Self> {
        if e_j.is_nan() || e_j < 0.0 {
            return Err(Error::InvalidParameter(format!("E_J must be non-negative, got {e_j}")));
        }
        let l_j = if e_j == 0.0 { f64::INFINITY } else { units::josephson_inductance(e_j) };
        Self::new(l_j, l_g, c_j, c_r0, l_r0)
    }

    /// `L_J = 0.75 nH`, `L_g = 0.6 L_J`, `C_J = 24 fF`, `C_R0 = 2 fF` with the
    /// given resonator inductance `L_R0`.
    pub fn reference(l_r0: f64) -> Result<Self> {
        Self::new(units::nh(0.75), units::nh(0.45), units::ff(24.0), units::ff(2.0), l_r0)
    }

    pub fn with_l_r0(&self, l_r0: f64) -> Result<Self> {
        Self::new(self.l_j, self.l_g, self.c_j, self.c_r0, l_r0)
    }

    pub fn with_l_j(&self, l_j: f64) -> Result<Self> {
        Self::new(l_j, self.l_g, self.c_j, self.c_r0, self.l_r0)
    }

    pub fn l_j(&self) -> f64 {
        self.l_j
    }
    pub fn l_g(&self) -> f64 {
        self.l_g
    }
    pub fn c_j(&self) -> f64 {
        self.c_j
    }
    pub fn c_r0(&self) -> f64 {
        self.c_r0
    }
    pub fn l_r0(&self) -> f64 {
        self.l_r0
    }

    pub fn e_j(&self) -> f64 {
        if self.l_j.is_infinite() {
            0.0
        } else {
            josephson_energy(self.l_j)
        }
    }

    /// `1/L_g + 1/L_R0`, the stiffness of the photonic flux.
    pub fn photon_stiffness(&self) -> f64 {
        1.0 / self.l_g + 1.0 / self.l_r0
    }

    /// `1/L_g − 1/L_J`, the linearized stiffness of the atomic flux.
    pub fn atom_stiffness(&self) -> f64 {
        1.0 / self.l_g - 1.0 / self.l_j
    }

    /// Ratio ψ/φ on the classical constraint line, `1 + L_g/L_R0`.
    pub fn constraint_ratio(&self) -> f64 {
        1.0 + self.l_g / self.l_r0
    }
}

/// Frequencies and impedances of the linearized circuit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedLinear {
    pub omega_c: f64,
    pub omega_a: f64,
    pub z_c0: f64,
    pub z_a: f64,
    pub g: f64,
    pub e_j: f64,
}

impl DerivedLinear {
    /// Coupling at which the bosonized lower polariton softens, `sqrt(ω_a ω_c)/2`.
    pub fn critical_coupling(&self) -> f64 {
        (self.omega_a * self.omega_c).sqrt() / 2.0
    }
}

pub fn derive_linear(params: &CircuitParams) -> DerivedLinear {
    let k_c = params.photon_stiffness();
    let k_a = params.atom_stiffness();
    let z_c0 = (1.0 / (k_c * params.c_r0)).sqrt();
    let z_a = (1.0 / (k_a * params.c_j)).sqrt();
    DerivedLinear {
        omega_c: (k_c / params.c_r0).sqrt(),
        omega_a: (k_a / params.c_j).sqrt(),
        z_c0,
        z_a,
        g: (z_c0 * z_a).sqrt() / (2.0 * params.l_g),
        e_j: params.e_j(),
    }
}

/// Resonator frequency assembled with an explicit atom count,
/// `sqrt((N/L_g + 1/L_R)/C_R)` with `L_R = L_R0/N`, `C_R = N·C_R0`.
pub fn resonator_frequency_with_atoms(params: &CircuitParams, n_atoms: usize) -> f64 {
    let n = n_atoms as f64;
    let l_r = params.l_r0 / n;
    let c_r = n * params.c_r0;
    ((n / params.l_g + 1.0 / l_r) / c_r).sqrt()
}

/// Classical inductive energy `U(φ, {ψ_j})` of `psis.len()` branches.
pub fn inductive_energy(phi: f64, psis: &[f64], params: &CircuitParams) -> Result<f64> {
    if psis.is_empty() {
        return Err(Error::InvalidParameter("at least one junction branch is required".into()));
    }
    let l_r = params.l_r0 / psis.len() as f64;
    let e_j = params.e_j();
    let branches: f64 = psis
        .iter()
        .map(|&psi| (psi - phi).powi(2) / (2.0 * params.l_g) + e_j * (PHASE_PER_FLUX * psi).cos())
        .sum();
    Ok(phi * phi / (2.0 * l_r) + branches)
}

/// U/N on the line `ψ_j = (1 + L_g/L_R0)φ` where `∂U/∂φ = 0`.
pub fn constrained_potential(phi: f64, params: &CircuitParams) -> f64 {
    let psi = params.constraint_ratio() * phi;
    phi * phi / (2.0 * params.l_r0)
        + (psi - phi).powi(2) / (2.0 * params.l_g)
        + params.e_j() * (PHASE_PER_FLUX * psi).cos()
}

/// [`constrained_potential`] in units of `E_J` (NaN when `E_J = 0`).
pub fn constrained_potential_normalized(phi: f64, params: &CircuitParams) -> f64 {
    constrained_potential(phi, params) / params.e_j()
}

/// d(U/N)/dφ along the constraint line.
fn constrained_slope(phi: f64, params: &CircuitParams) -> f64 {
    let r = params.constraint_ratio();
    r * (phi / params.l_r0 - params.e_j() * PHASE_PER_FLUX * (PHASE_PER_FLUX * r * phi).sin())
}

pub fn classical_critical_inductance(params: &CircuitParams) -> f64 {
    params.l_j - params.l_g
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalMinimum {
    pub phi0: f64,
    pub psi0: f64,
    pub energy_per_atom: f64,
    pub superradiant: bool,
}

const CLASSICAL_GRID: usize = 4096;

/// Global minimizer (φ ≥ 0 branch) of [`constrained_potential`].
///
/// At `L_R0 ≤ L_J − L_g` the normal phase is returned exactly. Otherwise a
/// uniform grid over `2πψ/Φ0 ∈ [0, 2π]` locates the well, golden-section
/// search narrows it, and the result is polished on the sign change of the
/// analytic slope.
pub fn classical_minimum(params: &CircuitParams) -> ClassicalMinimum {
    let normal = ClassicalMinimum {
        phi0: 0.0,
        psi0: 0.0,
        energy_per_atom: constrained_potential(0.0, params),
        superradiant: false,
    };
    if !(params.l_r0 > classical_critical_inductance(params)) {
        return normal;
    }
    let r = params.constraint_ratio();
    let phi_hi = 2.0 * PI / (r * PHASE_PER_FLUX);
    let step = phi_hi / (CLASSICAL_GRID - 1) as f64;
    let u = |phi: f64| constrained_potential(phi, params);
    let best = (0..CLASSICAL_GRID)
        .map(|i| (i, u(i as f64 * step)))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc })
        .0;
    let lo = best.saturating_sub(1) as f64 * step;
    let hi = (best + 1).min(CLASSICAL_GRID - 1) as f64 * step;
    let (mut phi0, _, _) = golden_section(u, lo, hi, 1e-10, step);

    // The slope is negative just right of 0 above threshold, so a bracket
    // [tiny, hi] always exists when the golden search lands in the first cell.
    let slope = |phi: f64| constrained_slope(phi, params);
    let a = if best == 0 { step * 1e-9 } else { lo };
    let (sa, sb) = (slope(a), slope(hi));
    if sa < 0.0 && sb > 0.0 {
        if let Ok((root, _)) = bisect(slope, a, hi, sa, sb, 200) {
            phi0 = root;
        }
    }
    if phi0 <= 0.0 {
        return normal;
    }
    ClassicalMinimum {
        phi0,
        psi0: r * phi0,
        energy_per_atom: u(phi0),
        superradiant: true,
    }
}

/// Squared polariton frequencies of the bosonized Hamiltonian.
///
/// The lower branch is kept as a signed square: a negative value marks the
/// instability of the normal ground state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolaritonFrequencies {
    pub omega_plus: f64,
    pub omega_minus_sq: f64,
}

impl PolaritonFrequencies {
    /// Real lower frequency, or `None` when `ω_−² < 0`.
    pub fn omega_minus(&self) -> Option<f64> {
        (self.omega_minus_sq >= 0.0).then(|| self.omega_minus_sq.sqrt())
    }
}

pub fn polariton_frequencies(omega_c: f64, omega_a: f64, g: f64) -> PolaritonFrequencies {
    let wc2 = omega_c * omega_c;
    let wa2 = omega_a * omega_a;
    let disc = ((wc2 - wa2).powi(2) + 16.0 * g * g * omega_c * omega_a).sqrt();
    let plus_sq = 0.5 * (wc2 + wa2 + disc);
    // Vieta: ω_+²·ω_−² = ω_c ω_a (ω_c ω_a − 4g²); avoids cancellation in (S − D)/2.
    let product = omega_c * omega_a * (omega_c * omega_a - 4.0 * g * g);
    PolaritonFrequencies {
        omega_plus: plus_sq.sqrt(),
        omega_minus_sq: product / plus_sq,
    }
}

pub fn bosonic_srpt_condition(derived: &DerivedLinear) -> bool {
    4.0 * derived.g * derived.g > derived.omega_c * derived.omega_a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{angular_to_ghz, ff, nh, FLUX_QUANTUM};

    fn scaled(l_r0_over_lj: f64, l_g_over_lj: f64) -> CircuitParams {
        let l_j = nh(0.75);
        CircuitParams::new(l_j, l_g_over_lj * l_j, ff(24.0), ff(2.0), l_r0_over_lj * l_j).unwrap()
    }

    // Frozen from a 50-digit mpmath evaluation of the closed forms.
    #[test]
    fn derived_values_at_reference_parameters() {
        let d = derive_linear(&CircuitParams::reference(nh(0.45)).unwrap());
        assert!((angular_to_ghz(d.omega_a) - 30.629_383_078_988_45).abs() < 1e-9);
        assert!((d.z_a - 216.506_350_946_109_66).abs() < 1e-9);
        assert!((angular_to_ghz(d.omega_c) - 237.254_181_139_059_06).abs() < 1e-8);
        assert!((angular_to_ghz(d.g) - 47.654_187_910_140_54).abs() < 1e-9);
    }

    #[test]
    fn no_junction_limit() {
        let p = CircuitParams::new(f64::INFINITY, nh(0.45), ff(24.0), ff(2.0), nh(0.45)).unwrap();
        let d = derive_linear(&p);
        assert_eq!(d.e_j, 0.0);
        let w0 = 1.0 / (nh(0.45) * ff(24.0)).sqrt();
        assert!((d.omega_a / w0 - 1.0).abs() < 1e-14);
        assert!((d.z_a / (nh(0.45) / ff(24.0)).sqrt() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn no_resonator_inductance_limit() {
        let p = CircuitParams::reference(f64::INFINITY).unwrap();
        let d = derive_linear(&p);
        assert!((d.omega_c * (nh(0.45) * ff(2.0)).sqrt() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_invalid_elements() {
        assert!(CircuitParams::new(nh(0.4), nh(0.45), ff(24.0), ff(2.0), nh(0.3)).is_err());
        assert!(CircuitParams::new(nh(0.45), nh(0.45), ff(24.0), ff(2.0), nh(0.3)).is_err());
        assert!(CircuitParams::new(nh(0.75), -1.0, ff(24.0), ff(2.0), nh(0.3)).is_err());
        assert!(CircuitParams::new(nh(0.75), nh(0.45), 0.0, ff(2.0), nh(0.3)).is_err());
        assert!(CircuitParams::new(nh(0.75), nh(0.45), ff(24.0), f64::NAN, nh(0.3)).is_err());
    }

    #[test]
    fn inductive_energy_at_origin_and_half_flux() {
        let p = CircuitParams::reference(nh(0.45)).unwrap();
        let e_j = p.e_j();
        let u0 = inductive_energy(0.0, &[0.0; 3], &p).unwrap();
        assert!((u0 / (3.0 * e_j) - 1.0).abs() < 1e-15);
        let half = FLUX_QUANTUM / 2.0;
        let u1 = inductive_energy(0.0, &[half; 3], &p).unwrap();
        let expected = 3.0 * (FLUX_QUANTUM * FLUX_QUANTUM / (8.0 * p.l_g()) - e_j);
        assert!((u1 / expected - 1.0).abs() < 1e-14);
        assert!(inductive_energy(0.0, &[], &p).is_err());
    }

    #[test]
    fn single_branch_energy_has_displaced_global_minimum() {
        // N = 1 with L_R0 = L_g = 0.6 L_J; brute force over 10⁴ points.
        let p = scaled(0.6, 0.6);
        let r = p.constraint_ratio();
        let n = 10_000;
        let (mut best_theta, mut best_u) = (0.0, f64::INFINITY);
        for i in 0..n {
            let theta = -PI + 2.0 * PI * i as f64 / (n - 1) as f64;
            let phi = theta / PHASE_PER_FLUX;
            let u = inductive_energy(phi, &[r * phi], &p).unwrap();
            if u < best_u {
                best_u = u;
                best_theta = theta;
            }
        }
        assert!(best_theta.abs() > 0.1, "minimum at {best_theta}");
    }

    #[test]
    fn constrained_potential_family() {
        let p = scaled(0.2, 0.6);
        assert!((constrained_potential_normalized(0.0, &p) - 1.0).abs() < 1e-15);
        let m = classical_minimum(&p);
        assert!(!m.superradiant);
        assert_eq!(m.phi0, 0.0);

        let p = scaled(1.0, 0.6);
        let m = classical_minimum(&p);
        assert!(m.superradiant);
        assert!(m.energy_per_atom < constrained_potential(0.0, &p));
        assert_eq!(constrained_potential(m.phi0, &p), constrained_potential(-m.phi0, &p));
    }

    #[test]
    fn critical_inductance_values() {
        let p = CircuitParams::reference(nh(0.45)).unwrap();
        assert!((classical_critical_inductance(&p) - nh(0.30)).abs() < 1e-22);
        let p = CircuitParams::new(1.0, 0.6, 1.0, 1.0, 1.0).unwrap();
        assert!((classical_critical_inductance(&p) - 0.4).abs() < 1e-15);
        let p = CircuitParams::new(1.0, 1.0 - 1e-12, 1.0, 1.0, 1.0).unwrap();
        assert!(classical_critical_inductance(&p) < 1e-11);
    }

    #[test]
    fn classical_minimum_below_threshold_and_at_tie() {
        assert_eq!(classical_minimum(&scaled(0.25, 0.6)).phi0, 0.0);
        let p = CircuitParams::new(1.0, 0.5, 1.0, 1.0, 0.5).unwrap();
        let m = classical_minimum(&p);
        assert!(!m.superradiant && m.phi0 == 0.0);
    }

    #[test]
    fn polariton_limits() {
        let f = polariton_frequencies(3.0, 2.0, 0.0);
        assert!((f.omega_plus - 3.0).abs() < 1e-15);
        assert!((f.omega_minus_sq - 4.0).abs() < 1e-14);

        let (wc, wa) = (5.0_f64, 2.0_f64);
        let g = (wc * wa).sqrt() / 2.0;
        let f = polariton_frequencies(wc, wa, g);
        assert!(f.omega_minus_sq.abs() < 1e-14 * wc * wc);

        let (w, g) = (4.0, 0.7);
        let f = polariton_frequencies(w, w, g);
        assert!((f.omega_plus.powi(2) - (w * w + 2.0 * g * w)).abs() < 1e-13);
        assert!((f.omega_minus_sq - (w * w - 2.0 * g * w)).abs() < 1e-13);
    }

    #[test]
    fn bosonic_condition_examples() {
        let on = derive_linear(&CircuitParams::reference(nh(0.45)).unwrap());
        assert!(bosonic_srpt_condition(&on));
        let off = derive_linear(&CircuitParams::reference(nh(0.1)).unwrap());
        assert!(!bosonic_srpt_condition(&off));
        // Exactly at threshold the two sides agree to rounding; strict
        // inequality means it is not reported as superradiant on the classical side.
        let tie = CircuitParams::reference(nh(0.75) - nh(0.45)).unwrap();
        assert!(!classical_minimum(&tie).superradiant);
        let d = derive_linear(&tie);
        let rel = (4.0 * d.g * d.g - d.omega_c * d.omega_a) / (d.omega_c * d.omega_a);
        assert!(rel.abs() < 1e-14);
    }
}
