//! Sparse assembly of the finite-N Hamiltonian
//!
//! ```text
//! H = ħω_c(a†a + 1/2) + Σ_j H_atom(b_j) − (ħg/√N)(a + a†) Σ_j (b_j + b_j†)
//! ```
//!
//! in one parity sector. Matrix entries are in units of h·GHz.

use super::basis::{BasisIndex, Parity};
use super::sparse::CsrMatrix;
use crate::circuit::{derive_linear, CircuitParams};
use crate::error::{Error, Result};
use crate::fock::{atom_hamiltonian_with, build_operators, AtomModel};
use crate::units::{angular_to_ghz, energy_to_ghz};
use nalgebra::DMatrix;
use rayon::prelude::*;

/// Single-mode blocks shared by every basis state.
#[derive(Debug, Clone)]
pub struct ModeBlocks {
    pub photon_ghz: f64,
    /// Single-atom Hamiltonian on `per_mode + 1` Fock states (h·GHz).
    pub atom: DMatrix<f64>,
    /// `ħg/√N` in h·GHz, entering with a minus sign.
    pub coupling_ghz: f64,
}

impl ModeBlocks {
    pub fn new(params: &CircuitParams, n_atoms: usize, per_mode: usize, model: AtomModel) -> Result<Self> {
        if model == AtomModel::Harmonic {
            return Err(Error::InvalidParameter("exact diagonalization needs an anharmonic atom".into()));
        }
        let derived = derive_linear(params);
        let ops = build_operators(&derived, per_mode + 1)?;
        let atom = atom_hamiltonian_with(&ops, params, model)?.map(energy_to_ghz);
        Ok(ModeBlocks {
            photon_ghz: angular_to_ghz(derived.omega_c),
            atom,
            coupling_ghz: angular_to_ghz(derived.g) / (n_atoms as f64).sqrt(),
        })
    }

    /// Drops the light-matter coupling.
    pub fn decoupled(mut self) -> Self {
        self.coupling_ghz = 0.0;
        self
    }
}

/// Assembles the sector Hamiltonian. Every generated element is checked to
/// connect states of the sector's parity.
pub fn assemble(basis: &BasisIndex, blocks: &ModeBlocks) -> Result<CsrMatrix> {
    let n_modes = basis.n_modes();
    let per_mode = basis.per_mode();
    let n_atoms = n_modes - 1;
    let sector = basis.parity();
    let atom = &blocks.atom;
    let rows: Vec<Result<Vec<(usize, f64)>>> = (0..basis.len())
        .into_par_iter()
        .map(|row| {
            let key = basis.key(row);
            let mut out = Vec::with_capacity(1 + 8 * n_atoms);
            let mut push = |target: u64, value: f64| -> Result<()> {
                if Parity::of(basis.total_of(target)) != sector {
                    return Err(Error::ParityViolation(format!("element connects {key:#x} to {target:#x}")));
                }
                if let Some(col) = basis.index_of_key(target) {
                    out.push((col, value));
                }
                Ok(())
            };
            let n_ph = basis.occupation(key, 0);
            let mut diag = blocks.photon_ghz * (n_ph as f64 + 0.5);
            for j in 1..=n_atoms {
                let n = basis.occupation(key, j);
                diag += atom[(n, n)];
                for m in 0..=per_mode {
                    let v = atom[(n, m)];
                    if m != n && v != 0.0 {
                        push(basis.with_occupation(key, j, m), v)?;
                    }
                }
                if blocks.coupling_ghz != 0.0 {
                    for (dp, da) in [(1i32, 1i32), (1, -1), (-1, 1), (-1, -1)] {
                        let (p2, a2) = (n_ph as i32 + dp, n as i32 + da);
                        if p2 < 0 || a2 < 0 || p2 as usize > per_mode || a2 as usize > per_mode {
                            continue;
                        }
                        let sp = (n_ph.max(p2 as usize) as f64).sqrt();
                        let sa = (n.max(a2 as usize) as f64).sqrt();
                        let target = basis.with_occupation(basis.with_occupation(key, 0, p2 as usize), j, a2 as usize);
                        push(target, -blocks.coupling_ghz * (sp * sa))?;
                    }
                }
            }
            out.push((row, diag));
            Ok(out)
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(CsrMatrix::from_rows(basis.len(), rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::quadrature_fourth;
    use crate::units::{nh, HBAR, PHASE_PER_FLUX};

    fn params() -> CircuitParams {
        CircuitParams::reference(nh(0.4)).unwrap()
    }

    #[test]
    fn symmetric_and_parity_preserving() {
        for parity in [Parity::Even, Parity::Odd] {
            let b = BasisIndex::new(3, 6, 10, parity, usize::MAX).unwrap();
            let h = assemble(&b, &ModeBlocks::new(&params(), 2, 6, AtomModel::Quartic).unwrap()).unwrap();
            assert!(h.is_symmetric());
            let hc = assemble(&b, &ModeBlocks::new(&params(), 2, 6, AtomModel::Cosine).unwrap()).unwrap();
            assert!(hc.is_symmetric());
        }
    }

    #[test]
    fn parity_violation_is_reported() {
        let b = BasisIndex::new(2, 4, 8, Parity::Even, usize::MAX).unwrap();
        let mut blocks = ModeBlocks::new(&params(), 1, 4, AtomModel::Quartic).unwrap();
        blocks.atom[(0, 1)] = 1.0;
        blocks.atom[(1, 0)] = 1.0;
        assert!(matches!(assemble(&b, &blocks), Err(Error::ParityViolation(_))));
    }

    #[test]
    fn vacuum_diagonal_closed_form() {
        let p = params();
        let d = derive_linear(&p);
        for n_atoms in [1usize, 2, 3] {
            let b = BasisIndex::new(n_atoms + 1, 4, 8, Parity::Even, usize::MAX).unwrap();
            let h = assemble(&b, &ModeBlocks::new(&p, n_atoms, 4, AtomModel::Quartic).unwrap()).unwrap();
            // ⟨0|x⁴|0⟩ = 3 s⁴ for x = s(b + b†).
            let s2 = PHASE_PER_FLUX * PHASE_PER_FLUX * HBAR * d.z_a / 2.0;
            let atom = HBAR * d.omega_a / 2.0 + d.e_j + d.e_j / 24.0 * 3.0 * s2 * s2;
            let expect = energy_to_ghz(HBAR * d.omega_c / 2.0 + n_atoms as f64 * atom);
            let got = h.get(0, 0);
            assert!((got - expect).abs() < 1e-12 * expect, "{got} vs {expect}");
        }
    }

    #[test]
    fn quartic_block_two_path_assembly() {
        let p = params();
        let d = derive_linear(&p);
        let blocks = ModeBlocks::new(&p, 1, 10, AtomModel::Quartic).unwrap();
        // Independent route: x⁴ as the fourth power of the quadrature matrix
        // on a larger space, projected back.
        let big = 20;
        let b = crate::fock::lowering(big);
        let x = &b + b.transpose();
        let x4 = &x * &x * &x * &x;
        let s = PHASE_PER_FLUX * (HBAR * d.z_a / 2.0).sqrt();
        for i in 0..=10 {
            for j in 0..=10 {
                let mut v = d.e_j * s.powi(4) / 24.0 * x4[(i, j)];
                if i == j {
                    v += HBAR * d.omega_a * (i as f64 + 0.5) + d.e_j;
                }
                let got = blocks.atom[(i, j)];
                assert!((got - energy_to_ghz(v)).abs() < 1e-11 * got.abs().max(1.0));
            }
        }
        assert_eq!(quadrature_fourth(3)[(0, 0)], 3.0);
    }
}
