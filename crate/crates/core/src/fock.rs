//! Truncated Fock-space description of a single artificial atom.
//!
//! The atomic flux is expanded in the ladder operators of the linearized
//! atom, `ψ = sqrt(ħZ_a/2)(b + b†)`, `ρ = i sqrt(ħ/(2Z_a))(b† − b)`. The
//! junction cosine is evaluated by spectral calculus on the truncated `ψ`
//! matrix, which is exact within the truncated space. Squares of `ψ` and
//! `ρ` are the projections of the untruncated operators, so the harmonic
//! part of the atom is diagonal without edge artifacts.

use crate::circuit::{derive_linear, CircuitParams, DerivedLinear};
use crate::error::{Error, Result};
use crate::units::{Temperature, HBAR, PHASE_PER_FLUX};
use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Single-atom truncation used by the mean-field and fluctuation solvers.
pub const DEFAULT_ATOM_DIM: usize = 60;

/// How the junction energy `E_J cos(2πψ/Φ0)` enters the atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomModel {
    /// Full cosine.
    Cosine,
    /// `E_J [1 − x²/2 + x⁴/24]`, x = 2πψ/Φ0.
    Quartic,
    /// `E_J [1 − x²/2]`: the bosonized atom.
    Harmonic,
}

#[derive(Debug, Clone)]
pub struct FockOperatorSet {
    dim: usize,
    z_a: f64,
    /// ψ (weber), tridiagonal.
    pub psi: DMatrix<f64>,
    /// ρ = i·`rho_imag`; `rho_imag` is real antisymmetric.
    pub rho_imag: DMatrix<f64>,
    /// Diagonal of b†b.
    pub number: DVector<f64>,
    pub cos: DMatrix<f64>,
    pub sin: DMatrix<f64>,
    /// Projection of the exact ψ².
    pub psi_sq: DMatrix<f64>,
    /// Projection of the exact ρ².
    pub rho_sq: DMatrix<f64>,
}

/// Lowering matrix with `sqrt(n)` on the first superdiagonal.
pub fn lowering(dim: usize) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        b[(n - 1, n)] = (n as f64).sqrt();
    }
    b
}

/// Projection of `(b + b†)²` onto the lowest `dim` Fock states.
pub fn quadrature_squared(dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |i, j| {
        let (lo, hi) = (i.min(j), i.max(j));
        match hi - lo {
            0 => 2.0 * lo as f64 + 1.0,
            2 => (((lo + 1) * (lo + 2)) as f64).sqrt(),
            _ => 0.0,
        }
    })
}

/// Projection of `(b + b†)⁴` onto the lowest `dim` Fock states (closed form).
pub fn quadrature_fourth(dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |i, j| {
        let (lo, hi) = (i.min(j), i.max(j));
        let n = lo as f64;
        match hi - lo {
            0 => 6.0 * n * n + 6.0 * n + 3.0,
            2 => (4.0 * n + 6.0) * ((n + 1.0) * (n + 2.0)).sqrt(),
            4 => ((n + 1.0) * (n + 2.0) * (n + 3.0) * (n + 4.0)).sqrt(),
            _ => 0.0,
        }
    })
}

/// Applies `f` to the eigenvalues of the symmetric matrix `m`.
pub fn spectral_map(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(m.clone());
    let mapped = DMatrix::from_diagonal(&eig.eigenvalues.map(f));
    let out = &eig.eigenvectors * mapped * eig.eigenvectors.transpose();
    // Restore exact symmetry lost to rounding in the product.
    (&out + out.transpose()) * 0.5
}

impl FockOperatorSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn z_a(&self) -> f64 {
        self.z_a
    }

    /// Zero-point flux spread `sqrt(ħZ_a/2)`.
    pub fn flux_scale(&self) -> f64 {
        (HBAR * self.z_a / 2.0).sqrt()
    }
}

pub fn build_operators(derived: &DerivedLinear, dim: usize) -> Result<FockOperatorSet> {
    if dim == 0 {
        return Err(Error::InvalidParameter("Fock dimension must be at least 1".into()));
    }
    let z_a = derived.z_a;
    let flux = (HBAR * z_a / 2.0).sqrt();
    let charge = (HBAR / (2.0 * z_a)).sqrt();
    let b = lowering(dim);
    let bt = b.transpose();
    let psi = (&b + &bt) * flux;
    let rho_imag = (&bt - &b) * charge;
    let x2 = quadrature_squared(dim);
    // ρ² = (ħ/2Z_a)(2n+1 − b² − b†²): same diagonal as x², opposite off-diagonal.
    let rho_sq = DMatrix::from_fn(dim, dim, |i, j| if i == j { x2[(i, j)] } else { -x2[(i, j)] }) * (charge * charge);
    let psi_sq = x2 * (flux * flux);
    let eig = SymmetricEigen::new(psi.clone());
    // `keep` is the parity of i + j allowed by the function; the rest is rounding noise.
    let rotate = |f: fn(f64) -> f64, keep: usize| {
        let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| f(PHASE_PER_FLUX * x)));
        let m = &eig.eigenvectors * d * eig.eigenvectors.transpose();
        DMatrix::from_fn(dim, dim, |i, j| {
            if (i + j) % 2 == keep {
                0.5 * (m[(i, j)] + m[(j, i)])
            } else {
                0.0
            }
        })
    };
    Ok(FockOperatorSet {
        dim,
        z_a,
        cos: rotate(f64::cos, 0),
        sin: rotate(f64::sin, 1),
        psi,
        rho_imag,
        number: DVector::from_fn(dim, |n, _| n as f64),
        psi_sq,
        rho_sq,
    })
}

fn check_compatible(ops: &FockOperatorSet, params: &CircuitParams) -> Result<DerivedLinear> {
    let derived = derive_linear(params);
    if ((ops.z_a - derived.z_a) / derived.z_a).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "operator set built for Z_a = {:.6} Ω, parameters give {:.6} Ω",
            ops.z_a, derived.z_a
        )));
    }
    Ok(derived)
}

/// Atom Hamiltonian `ρ²/(2C_J) + ψ²/(2L_g) + E_J cos(2πψ/Φ0)`.
///
/// Assembled as `ħω_a(n + 1/2) + E_J [cos + x²/2]`, which is identical to
/// the charge/flux assembly because the squares are exact projections.
pub fn atom_hamiltonian(ops: &FockOperatorSet, params: &CircuitParams) -> Result<DMatrix<f64>> {
    atom_hamiltonian_with(ops, params, AtomModel::Cosine)
}

pub fn atom_hamiltonian_with(ops: &FockOperatorSet, params: &CircuitParams, model: AtomModel) -> Result<DMatrix<f64>> {
    let derived = check_compatible(ops, params)?;
    let dim = ops.dim;
    let e_j = derived.e_j;
    let mut h = DMatrix::from_diagonal(&ops.number.map(|n| HBAR * derived.omega_a * (n + 0.5)));
    match model {
        AtomModel::Cosine => {
            let x_sq = &ops.psi_sq * (PHASE_PER_FLUX * PHASE_PER_FLUX);
            h += (&ops.cos + x_sq * 0.5) * e_j;
        }
        AtomModel::Quartic => {
            let s = PHASE_PER_FLUX * ops.flux_scale();
            h += quadrature_fourth(dim) * (e_j * s.powi(4) / 24.0);
            h += DMatrix::identity(dim, dim) * e_j;
        }
        AtomModel::Harmonic => {
            h += DMatrix::identity(dim, dim) * e_j;
        }
    }
    Ok(h)
}

/// Charge/flux assembly of the cosine atom, used to cross-check
/// [`atom_hamiltonian`].
pub fn atom_hamiltonian_charge_flux(ops: &FockOperatorSet, params: &CircuitParams) -> Result<DMatrix<f64>> {
    let derived = check_compatible(ops, params)?;
    Ok(&ops.rho_sq / (2.0 * params.c_j()) + &ops.psi_sq / (2.0 * params.l_g()) + &ops.cos * derived.e_j)
}

/// `H_eff(φ) = H_atom − (φ/L_g) ψ`.
pub fn effective_hamiltonian(ops: &FockOperatorSet, params: &CircuitParams, phi: f64) -> Result<DMatrix<f64>> {
    effective_hamiltonian_with(ops, params, phi, AtomModel::Cosine)
}

pub fn effective_hamiltonian_with(
    ops: &FockOperatorSet,
    params: &CircuitParams,
    phi: f64,
    model: AtomModel,
) -> Result<DMatrix<f64>> {
    let mut h = atom_hamiltonian_with(ops, params, model)?;
    if phi != 0.0 {
        h -= &ops.psi * (phi / params.l_g());
    }
    Ok(h)
}

/// Eigen-decomposition of a single-atom Hamiltonian, ascending energies.
#[derive(Debug, Clone)]
pub struct AtomSpectrum {
    pub energies: Vec<f64>,
    /// Columns are the eigenvectors in the Fock basis.
    pub vectors: DMatrix<f64>,
}

impl AtomSpectrum {
    pub fn new(h: &DMatrix<f64>) -> Self {
        let eig = SymmetricEigen::new(h.clone());
        let mut order: Vec<usize> = (0..h.nrows()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let energies = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DMatrix::from_fn(h.nrows(), h.nrows(), |i, j| eig.eigenvectors[(i, order[j])]);
        AtomSpectrum { energies, vectors }
    }

    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    /// `⟨k|A|k⟩`.
    pub fn diagonal_element(&self, k: usize, a: &DMatrix<f64>) -> f64 {
        let v = self.vectors.column(k);
        (a * v).dot(&v)
    }

    fn ground_multiplicity(&self) -> usize {
        let e0 = self.energies[0];
        let width = self.energies.last().map_or(0.0, |e| e - e0);
        let tol = 1e-12 * e0.abs().max(width);
        self.energies.iter().take_while(|&&e| e - e0 <= tol).count()
    }

    /// Thermal average of `A`; at `T = 0` the average over the (possibly
    /// degenerate) ground manifold.
    pub fn thermal_expectation(&self, a: &DMatrix<f64>, t: Temperature) -> Result<f64> {
        check_dim(a, self.energies.len())?;
        let kbt = validate_temperature(t)?;
        if kbt == 0.0 {
            let g = self.ground_multiplicity();
            return Ok((0..g).map(|k| self.diagonal_element(k, a)).sum::<f64>() / g as f64);
        }
        let e0 = self.energies[0];
        let (mut num, mut den) = (0.0, 0.0);
        for (k, &e) in self.energies.iter().enumerate() {
            let w = (-(e - e0) / kbt).exp();
            if w == 0.0 {
                continue;
            }
            num += w * self.diagonal_element(k, a);
            den += w;
        }
        Ok(num / den)
    }

    /// `−k_B T ln Σ exp(−E_k/k_B T)`, evaluated relative to the ground energy.
    /// At `T = 0` this is the ground energy.
    pub fn free_energy(&self, t: Temperature) -> Result<f64> {
        let kbt = validate_temperature(t)?;
        let e0 = self.energies[0];
        if kbt == 0.0 {
            return Ok(e0);
        }
        let z: f64 = self.energies.iter().map(|&e| (-(e - e0) / kbt).exp()).sum();
        Ok(e0 - kbt * z.ln())
    }
}

fn validate_temperature(t: Temperature) -> Result<f64> {
    let kbt = t.thermal_energy();
    if !(kbt >= 0.0) || kbt.is_infinite() {
        return Err(Error::InvalidTemperature("finite and non-negative"));
    }
    Ok(kbt)
}

fn check_dim(a: &DMatrix<f64>, dim: usize) -> Result<()> {
    if a.nrows() != dim || a.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: a.nrows() });
    }
    Ok(())
}

/// Thermal expectation `Tr[A e^{−H/k_BT}]/Z`, or the ground-state value at `T = 0`.
pub fn thermal_expectation(h: &DMatrix<f64>, a: &DMatrix<f64>, t: Temperature) -> Result<f64> {
    check_dim(a, h.nrows())?;
    AtomSpectrum::new(h).thermal_expectation(a, t)
}

/// `−k_B T ln Z_atom(φ, T)` for the cosine atom. `T = 0` is rejected; use
/// the ground energy of [`effective_hamiltonian`] instead.
pub fn atom_partition_free_energy(ops: &FockOperatorSet, params: &CircuitParams, phi: f64, t: Temperature) -> Result<f64> {
    if validate_temperature(t)? == 0.0 {
        return Err(Error::InvalidTemperature("positive for a partition function"));
    }
    AtomSpectrum::new(&effective_hamiltonian(ops, params, phi)?).free_energy(t)
}

/// Ground (zero-point) energy ε_a0 of the bare cosine atom.
pub fn atomic_zero_point_energy(params: &CircuitParams, dim: usize) -> Result<f64> {
    let ops = build_operators(&derive_linear(params), dim)?;
    Ok(AtomSpectrum::new(&atom_hamiltonian(&ops, params)?).ground_energy())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{ff, nh};

    fn reference() -> (CircuitParams, FockOperatorSet) {
        let p = CircuitParams::reference(nh(0.45)).unwrap();
        let ops = build_operators(&derive_linear(&p), DEFAULT_ATOM_DIM).unwrap();
        (p, ops)
    }

    fn parity(dim: usize) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_fn(dim, |n, _| if n % 2 == 0 { 1.0 } else { -1.0 }))
    }

    #[test]
    fn single_level_space() {
        let ops = build_operators(&derive_linear(&CircuitParams::reference(nh(0.45)).unwrap()), 1).unwrap();
        assert_eq!(ops.psi[(0, 0)], 0.0);
        assert_eq!(ops.cos[(0, 0)], 1.0);
        assert!(build_operators(&derive_linear(&CircuitParams::reference(nh(0.45)).unwrap()), 0).is_err());
    }

    #[test]
    fn canonical_commutator_on_interior() {
        let (_, ops) = reference();
        let comm = &ops.psi * &ops.rho_imag - &ops.rho_imag * &ops.psi;
        let m = ops.dim() - 1;
        for i in 0..m {
            for j in 0..m {
                let expected = if i == j { HBAR } else { 0.0 };
                assert!((comm[(i, j)] - expected).abs() < 1e-12 * HBAR, "({i},{j})");
            }
        }
        // Known truncation artifact at the last level.
        assert!((comm[(m, m)] - HBAR).abs() > 1.0 * HBAR);
    }

    #[test]
    fn vacuum_cosine_matches_gaussian_identity() {
        let (_, ops) = reference();
        let expected = (-PHASE_PER_FLUX.powi(2) * HBAR * ops.z_a() / 4.0).exp();
        assert!((ops.cos[(0, 0)] / expected - 1.0).abs() < 1e-8);
    }

    #[test]
    fn cos_and_sin_are_bounded_and_complementary() {
        let (_, ops) = reference();
        let cos_eigs = SymmetricEigen::new(ops.cos.clone()).eigenvalues;
        assert!(cos_eigs.iter().all(|&e| (-1.0 - 1e-12..=1.0 + 1e-12).contains(&e)));
        let id = &ops.cos * &ops.cos + &ops.sin * &ops.sin;
        assert!((id - DMatrix::identity(60, 60)).amax() < 1e-10);
    }

    #[test]
    fn quartic_closed_form_matches_matrix_power() {
        let dim = 12;
        let x = {
            let b = lowering(dim + 4);
            &b + b.transpose()
        };
        let x4 = (&x * &x * &x * &x).view((0, 0), (dim, dim)).into_owned();
        assert!((x4 - quadrature_fourth(dim)).amax() < 1e-12);
        let x2 = (&x * &x).view((0, 0), (dim, dim)).into_owned();
        assert!((x2 - quadrature_squared(dim)).amax() < 1e-12);
    }

    #[test]
    fn both_assemblies_agree() {
        let (p, ops) = reference();
        let a = atom_hamiltonian(&ops, &p).unwrap();
        let b = atom_hamiltonian_charge_flux(&ops, &p).unwrap();
        assert!((&a - &b).amax() < 1e-10 * a.amax());
    }

    #[test]
    fn harmonic_limit_without_junction() {
        let p = CircuitParams::new(f64::INFINITY, nh(0.45), ff(24.0), ff(2.0), nh(0.45)).unwrap();
        let ops = build_operators(&derive_linear(&p), 60).unwrap();
        let spec = AtomSpectrum::new(&atom_hamiltonian(&ops, &p).unwrap());
        let w0 = 1.0 / (nh(0.45) * ff(24.0)).sqrt();
        for n in 0..=10 {
            let e = HBAR * w0 * (n as f64 + 0.5);
            assert!((spec.energies[n] / e - 1.0).abs() < 1e-8, "level {n}");
        }
    }

    #[test]
    fn reference_anharmonicity_is_about_three_percent() {
        let (p, ops) = reference();
        let e = AtomSpectrum::new(&atom_hamiltonian(&ops, &p).unwrap()).energies;
        let (d1, d2) = (e[1] - e[0], e[2] - e[1]);
        let rel = (d2 - d1).abs() / d1;
        assert!((rel - 0.03).abs() <= 0.01, "anharmonicity {rel}");
    }

    #[test]
    fn eigenvalues_converge_in_truncation() {
        let p = CircuitParams::reference(nh(0.45)).unwrap();
        let spec = |m| {
            let ops = build_operators(&derive_linear(&p), m).unwrap();
            AtomSpectrum::new(&atom_hamiltonian(&ops, &p).unwrap()).energies
        };
        let (a, b) = (spec(48), spec(64));
        for k in 0..8 {
            assert!((a[k] / b[k] - 1.0).abs() < 1e-8, "level {k}");
        }
        let (a, b) = (spec(40), spec(60));
        assert!((a[0] / b[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn parity_symmetry() {
        let (p, ops) = reference();
        let par = parity(ops.dim());
        let h = atom_hamiltonian(&ops, &p).unwrap();
        assert_eq!(&par * &h * &par, h);
        let phi = 2e-17;
        let hp = effective_hamiltonian(&ops, &p, phi).unwrap();
        let hm = effective_hamiltonian(&ops, &p, -phi).unwrap();
        assert!((&par * &hp * &par - &hm).amax() < 1e-12 * h.amax());
        let (sp, sm) = (AtomSpectrum::new(&hp), AtomSpectrum::new(&hm));
        for k in 0..10 {
            assert!((sp.energies[k] / sm.energies[k] - 1.0).abs() < 1e-12);
        }
        assert_eq!(effective_hamiltonian(&ops, &p, 0.0).unwrap(), h);
    }

    #[test]
    fn strong_drive_approaches_classical_minimum() {
        // Leading term of the ground energy at large φ is the classical
        // minimum over ψ of −φψ/L_g + ψ²/(2L_g) + E_J cos(2πψ/Φ0).
        let (p, ops) = reference();
        let phi = 0.4 * crate::units::FLUX_QUANTUM;
        let e0 = AtomSpectrum::new(&effective_hamiltonian(&ops, &p, phi).unwrap()).ground_energy();
        let classical = (0..20_001)
            .map(|i| {
                let psi = -crate::units::FLUX_QUANTUM + 2.0 * crate::units::FLUX_QUANTUM * i as f64 / 20_000.0;
                -phi * psi / p.l_g() + psi * psi / (2.0 * p.l_g()) + p.e_j() * (PHASE_PER_FLUX * psi).cos()
            })
            .fold(f64::INFINITY, f64::min);
        // The remainder is a zero-point energy of order ħω_a/2.
        let zero_point = e0 - classical;
        let w = derive_linear(&p).omega_a;
        assert!(zero_point > 0.0 && zero_point < 2.0 * HBAR * w, "{}", zero_point / (HBAR * w));
    }

    #[test]
    fn thermal_expectation_limits() {
        let (p, ops) = reference();
        let h = atom_hamiltonian(&ops, &p).unwrap();
        let id = DMatrix::identity(60, 60);
        for ghz in [0.0, 5.0, 100.0] {
            let t = Temperature::from_ghz(ghz);
            assert!((thermal_expectation(&h, &id, t).unwrap() - 1.0).abs() < 1e-12);
            assert!(thermal_expectation(&h, &ops.psi, t).unwrap().abs() < 1e-14 * ops.flux_scale());
        }
        assert!(thermal_expectation(&h, &id, Temperature::kelvin(-1.0)).is_err());
        assert!(matches!(
            thermal_expectation(&h, &DMatrix::identity(3, 3), Temperature::ZERO),
            Err(Error::DimensionMismatch { .. })
        ));

        // Very hot: unweighted average of the diagonal elements (direct sum).
        let spec = AtomSpectrum::new(&h);
        let t = Temperature::kelvin(1e9);
        let hot = spec.thermal_expectation(&ops.psi_sq, t).unwrap();
        let flat = (0..60).map(|k| spec.diagonal_element(k, &ops.psi_sq)).sum::<f64>() / 60.0;
        assert!((hot / flat - 1.0).abs() < 1e-4);
    }

    #[test]
    fn thermal_expectation_continuous_at_zero() {
        let (p, ops) = reference();
        let spec = AtomSpectrum::new(&effective_hamiltonian(&ops, &p, 3e-17).unwrap());
        let gap = spec.energies[1] - spec.energies[0];
        let zero = spec.thermal_expectation(&ops.psi, Temperature::ZERO).unwrap();
        let cold = Temperature::kelvin(1e-3 * gap / crate::units::BOLTZMANN);
        let near = spec.thermal_expectation(&ops.psi, cold).unwrap();
        assert!(((near - zero) / zero).abs() < 1e-12);
    }

    #[test]
    fn degenerate_ground_is_averaged() {
        let h = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, 3.0]));
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 4.0, 100.0]));
        assert!((thermal_expectation(&h, &a, Temperature::ZERO).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn free_energy_limits() {
        let (p, ops1) = {
            let p = CircuitParams::reference(nh(0.45)).unwrap();
            (p, build_operators(&derive_linear(&p), 1).unwrap())
        };
        let t = Temperature::from_ghz(20.0);
        let h1 = effective_hamiltonian(&ops1, &p, 0.0).unwrap();
        assert_eq!(atom_partition_free_energy(&ops1, &p, 0.0, t).unwrap(), h1[(0, 0)]);
        assert!(atom_partition_free_energy(&ops1, &p, 0.0, Temperature::ZERO).is_err());

        // Harmonic atom: E_0 + k_B T ln(1 − e^{−ħω0/k_B T}).
        let q = CircuitParams::new(f64::INFINITY, nh(0.45), ff(24.0), ff(2.0), nh(0.45)).unwrap();
        let ops = build_operators(&derive_linear(&q), 120).unwrap();
        let w0 = 1.0 / (nh(0.45) * ff(24.0)).sqrt();
        let t = Temperature::from_ghz(50.0);
        let kbt = t.thermal_energy();
        let exact = HBAR * w0 / 2.0 + kbt * (1.0 - (-HBAR * w0 / kbt).exp()).ln();
        let f = atom_partition_free_energy(&ops, &q, 0.0, t).unwrap();
        assert!(((f - exact) / exact).abs() < 1e-12);

        // Convergence between M = 50 and 60 up to 80 GHz. At 100 GHz the
        // same step moves by about 1.8e-8 E_J and needs M = 60 -> 70.
        let f = |m, t| {
            let ops = build_operators(&derive_linear(&p), m).unwrap();
            atom_partition_free_energy(&ops, &p, 0.0, Temperature::from_ghz(t)).unwrap()
        };
        for t in [20.0, 50.0, 80.0] {
            assert!((f(50, t) - f(60, t)).abs() < 1e-8 * p.e_j(), "T = {t} GHz");
        }
        assert!((f(60, 100.0) - f(70, 100.0)).abs() < 1e-8 * p.e_j());
    }
}
