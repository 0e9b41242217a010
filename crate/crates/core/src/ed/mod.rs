//! Exact diagonalization for a finite number of atoms.
//!
//! The Hamiltonian conserves the parity of the total boson number, so even
//! and odd sectors are assembled and solved separately. Atoms default to the
//! quartic expansion of the junction cosine, which keeps every atomic block
//! pentadiagonal; the full cosine is available for validation at small N.

pub mod basis;
pub mod hamiltonian;
pub mod lanczos;
pub mod sparse;

pub use basis::{BasisIndex, Parity};
pub use hamiltonian::{assemble, ModeBlocks};
pub use lanczos::{lowest_eigenpairs, Eigenpairs, LanczosOptions, LinearOperator};
pub use sparse::CsrMatrix;

use crate::circuit::{derive_linear, CircuitParams};
use crate::error::{Error, Result};
use crate::fock::{atomic_zero_point_energy, build_operators, atom_hamiltonian_with, AtomModel, AtomSpectrum, DEFAULT_ATOM_DIM};
use crate::units::{energy_to_ghz, ghz_to_energy, HBAR};
use serde::Serialize;

/// Relative tolerance for the even-sector ground-state check.
pub const GROUND_PARITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdConfig {
    pub n_atoms: usize,
    pub per_mode_cutoff: usize,
    pub total_cutoff: usize,
    /// Eigenvalues requested in the even sector (at least 2).
    pub n_eigenvalues: usize,
    pub quartic: bool,
    /// Largest sector dimension accepted.
    pub max_dim: usize,
    pub seed: u64,
}

impl Default for EdConfig {
    fn default() -> Self {
        EdConfig {
            n_atoms: 1,
            per_mode_cutoff: 24,
            total_cutoff: 48,
            n_eigenvalues: 2,
            quartic: true,
            max_dim: 2_000_000,
            seed: 0x5eed,
        }
    }
}

impl EdConfig {
    pub fn new(n_atoms: usize, per_mode_cutoff: usize, total_cutoff: usize) -> Self {
        EdConfig { n_atoms, per_mode_cutoff, total_cutoff, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_atoms == 0 || self.n_atoms + 1 > basis::MAX_MODES {
            return Err(Error::InvalidParameter(format!("atom count must be 1..={}", basis::MAX_MODES - 1)));
        }
        if self.per_mode_cutoff == 0 || self.per_mode_cutoff > self.total_cutoff {
            return Err(Error::InvalidParameter("need 0 < per-mode cutoff ≤ total cutoff".into()));
        }
        if self.n_eigenvalues == 0 {
            return Err(Error::InvalidParameter("need at least one eigenvalue".into()));
        }
        Ok(())
    }

    pub fn model(&self) -> AtomModel {
        if self.quartic {
            AtomModel::Quartic
        } else {
            AtomModel::Cosine
        }
    }

    pub fn basis(&self, parity: Parity) -> Result<BasisIndex> {
        self.validate()?;
        BasisIndex::new(self.n_atoms + 1, self.per_mode_cutoff, self.total_cutoff, parity, self.max_dim)
    }

    fn lanczos(&self) -> LanczosOptions {
        LanczosOptions { seed: self.seed, ..Default::default() }
    }
}

pub fn build_basis(config: &EdConfig, parity: Parity) -> Result<BasisIndex> {
    config.basis(parity)
}

/// Sector Hamiltonian in h·GHz.
pub fn build_hamiltonian(config: &EdConfig, params: &CircuitParams, basis: &BasisIndex) -> Result<CsrMatrix> {
    let blocks = ModeBlocks::new(params, config.n_atoms, config.per_mode_cutoff, config.model())?;
    assemble(basis, &blocks)
}

/// Lowest eigenpairs of one sector, energies in h·GHz.
#[derive(Debug, Clone)]
pub struct SectorSolution {
    pub parity: Parity,
    pub dim: usize,
    pub pairs: Eigenpairs,
    pub basis: BasisIndex,
}

pub fn solve_sector(config: &EdConfig, params: &CircuitParams, parity: Parity, k: usize) -> Result<SectorSolution> {
    let basis = config.basis(parity)?;
    let h = build_hamiltonian(config, params, &basis)?;
    let pairs = lowest_eigenpairs(&h, k.min(basis.len()), &config.lanczos())?;
    Ok(SectorSolution { parity, dim: basis.len(), pairs, basis })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdResult {
    pub n_atoms: usize,
    pub l_r0: f64,
    pub dims: (usize, usize),
    /// Even-sector eigenvalues, ascending (joule).
    pub eigenvalues: Vec<f64>,
    pub ground_energy: f64,
    pub odd_ground_energy: f64,
    pub photon_number_per_atom: f64,
    pub transition_even: f64,
    pub transition_odd: f64,
    /// `(E_g − ħω_c/2)/N − ε_a0`.
    pub delta_eps: f64,
    /// `E_even,0 ≤ E_odd,0` within [`GROUND_PARITY_TOL`].
    pub ground_in_even: bool,
}

/// Finite-N observables from the solved sectors. `epsilon_a0` is the bare
/// atomic zero-point energy (joule).
pub fn observables(
    config: &EdConfig,
    params: &CircuitParams,
    even: &SectorSolution,
    odd: &SectorSolution,
    epsilon_a0: f64,
) -> Result<EdResult> {
    if even.parity != Parity::Even || odd.parity != Parity::Odd {
        return Err(Error::InvalidParameter("observables need an even and an odd sector".into()));
    }
    if even.pairs.values.len() < 2 {
        return Err(Error::InvalidParameter("even sector needs at least two eigenvalues".into()));
    }
    let n = config.n_atoms as f64;
    let eigenvalues: Vec<f64> = even.pairs.values.iter().map(|&e| ghz_to_energy(e)).collect();
    let e_g = eigenvalues[0];
    let e_odd = ghz_to_energy(odd.pairs.values[0]);
    let g = &even.pairs.vectors[0];
    let photons: f64 = (0..even.basis.len()).map(|i| g[i] * g[i] * even.basis.occupation(even.basis.key(i), 0) as f64).sum();
    let omega_c = derive_linear(params).omega_c;
    Ok(EdResult {
        n_atoms: config.n_atoms,
        l_r0: params.l_r0(),
        dims: (even.dim, odd.dim),
        ground_energy: e_g,
        odd_ground_energy: e_odd,
        photon_number_per_atom: photons / n,
        transition_even: eigenvalues[1] - e_g,
        transition_odd: e_odd - e_g,
        delta_eps: (e_g - 0.5 * HBAR * omega_c) / n - epsilon_a0,
        ground_in_even: e_g <= e_odd + GROUND_PARITY_TOL * e_g.abs(),
        eigenvalues,
    })
}

/// Both sectors and the observables at one parameter point. The atomic
/// reference `ε_a0` is the cosine atom at the default single-atom truncation.
pub fn run(config: &EdConfig, params: &CircuitParams) -> Result<EdResult> {
    config.validate()?;
    let even = solve_sector(config, params, Parity::Even, config.n_eigenvalues.max(2))?;
    let odd = solve_sector(config, params, Parity::Odd, 1)?;
    let eps = atomic_zero_point_energy(params, DEFAULT_ATOM_DIM)?;
    observables(config, params, &even, &odd, eps)
}

/// Lowest `count` eigenvalues over both sectors (h·GHz), ascending.
pub fn merged_spectrum(config: &EdConfig, params: &CircuitParams, count: usize) -> Result<Vec<f64>> {
    let mut all = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        all.extend(solve_sector(config, params, parity, count)?.pairs.values);
    }
    all.sort_by(f64::total_cmp);
    all.truncate(count);
    Ok(all)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationComparison {
    /// Transition frequencies from the ground state (GHz).
    pub quartic_ghz: Vec<f64>,
    pub cosine_ghz: Vec<f64>,
    pub relative_difference: Vec<f64>,
}

impl TruncationComparison {
    fn new(quartic: &[f64], cosine: &[f64], transitions: usize) -> Self {
        let tr = |e: &[f64]| e[1..=transitions].iter().map(|x| x - e[0]).collect::<Vec<f64>>();
        let (q, c) = (tr(quartic), tr(cosine));
        let relative_difference = q.iter().zip(&c).map(|(a, b)| ((a - b) / b).abs()).collect();
        TruncationComparison { quartic_ghz: q, cosine_ghz: c, relative_difference }
    }

    pub fn max_relative_difference(&self) -> f64 {
        self.relative_difference.iter().fold(0.0, |m, &d| f64::max(m, d))
    }
}

/// Lowest transitions of the bare atom with the quartic and the cosine
/// junction energy, both on `dim` Fock states.
pub fn atom_truncation_study(params: &CircuitParams, dim: usize, transitions: usize) -> Result<TruncationComparison> {
    let ops = build_operators(&derive_linear(params), dim)?;
    let levels = |model| -> Result<Vec<f64>> {
        Ok(AtomSpectrum::new(&atom_hamiltonian_with(&ops, params, model)?).energies.iter().map(|&e| energy_to_ghz(e)).collect())
    };
    if transitions + 1 > dim {
        return Err(Error::InvalidParameter("more transitions than Fock states".into()));
    }
    Ok(TruncationComparison::new(&levels(AtomModel::Quartic)?, &levels(AtomModel::Cosine)?, transitions))
}

/// Lowest transitions of the coupled system (both parity sectors merged)
/// with quartic and cosine atoms.
pub fn truncation_error_study(
    params: &CircuitParams,
    n_atoms: usize,
    per_mode: usize,
    total: usize,
    transitions: usize,
) -> Result<TruncationComparison> {
    if !(1..=2).contains(&n_atoms) {
        return Err(Error::InvalidParameter("truncation study is limited to one or two atoms".into()));
    }
    let mut cfg = EdConfig::new(n_atoms, per_mode, total);
    let quartic = merged_spectrum(&cfg, params, transitions + 1)?;
    cfg.quartic = false;
    let cosine = merged_spectrum(&cfg, params, transitions + 1)?;
    Ok(TruncationComparison::new(&quartic, &cosine, transitions))
}

/// Location and depth of the even-transition minimum along an `L_R0` scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dip {
    pub l_r0: f64,
    pub transition_even: f64,
}

/// Grid minimum refined by a parabola through its neighbours.
pub fn locate_dip(results: &[EdResult]) -> Option<Dip> {
    let i = (0..results.len()).min_by(|&a, &b| results[a].transition_even.total_cmp(&results[b].transition_even))?;
    let y = |k: usize| results[k].transition_even;
    let x = |k: usize| results[k].l_r0;
    if i == 0 || i + 1 == results.len() {
        return Some(Dip { l_r0: x(i), transition_even: y(i) });
    }
    let (x0, x1, x2) = (x(i - 1), x(i), x(i + 1));
    let (y0, y1, y2) = (y(i - 1), y(i), y(i + 1));
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let a = (d12 - d01) / (x2 - x0);
    if !(a > 0.0) {
        return Some(Dip { l_r0: x1, transition_even: y1 });
    }
    let b = d01 - a * (x0 + x1);
    let xm = (-b / (2.0 * a)).clamp(x0, x2);
    let ym = y1 + d01 * (xm - x1) + a * (xm - x0) * (xm - x1);
    Some(Dip { l_r0: xm, transition_even: ym.min(y1) })
}

/// `run` over an `L_R0` axis.
pub fn scan(config: &EdConfig, params: &CircuitParams, lr0_axis: &[f64]) -> Result<Vec<EdResult>> {
    lr0_axis.iter().map(|&l| run(config, &params.with_l_r0(l)?)).collect()
}

/// Writes a sector Hamiltonian (h·GHz) in Matrix Market format.
pub fn export_matrix_market<W: std::io::Write>(config: &EdConfig, params: &CircuitParams, parity: Parity, w: W) -> Result<()> {
    let basis = config.basis(parity)?;
    let h = build_hamiltonian(config, params, &basis)?;
    h.write_matrix_market(w).map_err(|e| Error::InvalidParameter(format!("matrix export failed: {e}")))
}
