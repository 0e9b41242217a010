//! Invariant checks behind `srpt validate`.

use crate::commands::Output;
use crate::config::RunConfig;
use crate::output::Table;
use crate::CliError;
use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use srpt_core::circuit::{bosonic_srpt_condition, classical_critical_inductance, derive_linear};
use srpt_core::ed::{self, lowest_eigenpairs, CsrMatrix, EdConfig, LanczosOptions, Parity};
use srpt_core::fluct::{residual_scale, stationarity_check_with};
use srpt_core::fock::build_operators;
use srpt_core::meanfield::{critical_inductance_at_zero_t, free_energy_convergence_check, MeanField, STATIONARITY_TOL};
use srpt_core::units::{ff, nh, HBAR, PHASE_PER_FLUX};
use srpt_core::{CircuitParams, Temperature};

pub const CHECKS: [&str; 6] = ["equivalence", "gaussian-cosine", "lanczos-dense", "free-energy", "stationarity", "truncation"];

struct Report {
    metric: &'static str,
    value: f64,
    limit: f64,
}

impl Report {
    fn passed(&self) -> bool {
        self.value <= self.limit
    }
}

fn equivalence(cfg: &RunConfig, fault: bool) -> Result<Report, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut disagreements = 0usize;
    for _ in 0..10_000 {
        let l_j = nh(rng.random_range(0.05..10.0));
        let l_g = l_j * rng.random_range(0.01..0.99);
        let l_r0 = l_j * rng.random_range(0.01..5.0);
        let p = CircuitParams::new(l_j, l_g, ff(rng.random_range(0.5..200.0)), ff(rng.random_range(0.1..50.0)), l_r0)?;
        let lc = classical_critical_inductance(&p);
        if ((l_r0 - lc) / lc).abs() <= 1e-9 {
            continue;
        }
        // Fault: compare against the wrong threshold L_J.
        let threshold = if fault { p.l_j() } else { lc };
        if bosonic_srpt_condition(&derive_linear(&p)) != (l_r0 > threshold) {
            disagreements += 1;
        }
    }
    Ok(Report { metric: "disagreements", value: disagreements as f64, limit: 0.0 })
}

fn gaussian_cosine(cfg: &RunConfig, fault: bool) -> Result<Report, CliError> {
    let d = derive_linear(&cfg.circuit(cfg.l_j)?);
    let ops = build_operators(&d, cfg.atom_dim)?;
    let z = if fault { 1.001 * d.z_a } else { d.z_a };
    let expected = (-PHASE_PER_FLUX.powi(2) * HBAR * z / 4.0).exp();
    Ok(Report { metric: "relative error", value: (ops.cos[(0, 0)] / expected - 1.0).abs(), limit: 1e-8 })
}

fn lanczos_dense(cfg: &RunConfig, fault: bool) -> Result<Report, CliError> {
    let p = cfg.circuit(nh(0.5))?;
    let ec = EdConfig { seed: cfg.seed, ..EdConfig::new(1, 8, 16) };
    let mut worst: f64 = 0.0;
    for parity in [Parity::Even, Parity::Odd] {
        let basis = ec.basis(parity)?;
        let h = ed::build_hamiltonian(&ec, &p, &basis)?;
        let mut dense = SymmetricEigen::new(h.to_dense()).eigenvalues.as_slice().to_vec();
        dense.sort_by(f64::total_cmp);
        let probe = if fault {
            let mut m = h.to_dense();
            m[(0, 0)] += 1e-3;
            CsrMatrix::from_dense(&m)
        } else {
            h
        };
        let pairs = lowest_eigenpairs(&probe, 6, &LanczosOptions { seed: cfg.seed, ..Default::default() })?;
        for (a, b) in pairs.values.iter().zip(&dense) {
            worst = worst.max(((a - b) / b).abs());
        }
    }
    Ok(Report { metric: "relative error", value: worst, limit: 1e-10 })
}

fn free_energy(cfg: &RunConfig, fault: bool) -> Result<Report, CliError> {
    let p = cfg.circuit(cfg.l_j)?;
    let dims: Vec<usize> = if fault { vec![4, 6] } else { vec![10, 20, 40, cfg.atom_dim.max(41)] };
    let r = free_energy_convergence_check(&p, 0.0, Temperature::from_ghz(20.0), &dims)?;
    let last = r.last_increment().unwrap_or(f64::INFINITY) / p.e_j();
    Ok(Report { metric: "final increment / E_J", value: if r.converged { last } else { f64::INFINITY }, limit: 1e-8 })
}

fn stationarity(cfg: &RunConfig, fault: bool) -> Result<Report, CliError> {
    let p = cfg.circuit(cfg.l_j)?;
    let lc = critical_inductance_at_zero_t(&p, cfg.atom_dim)?;
    let base = MeanField::new(&p, cfg.atom_dim)?;
    let mut worst: f64 = 0.0;
    for k in 1..=6 {
        let mf = base.with_l_r0(lc * (1.0 + 0.25 * k as f64))?;
        let mut s = mf.solve(Temperature::ZERO)?;
        if !s.superradiant {
            continue;
        }
        if fault {
            s.phi_th *= 1.01;
        }
        let (rp, ra) = stationarity_check_with(&mf, &s)?;
        worst = worst.max(rp.abs().max(ra.abs()) / residual_scale(&p));
    }
    Ok(Report { metric: "residual / (Phi0/L_J)", value: worst, limit: STATIONARITY_TOL })
}

fn truncation(cfg: &RunConfig, _fault: bool) -> Result<Report, CliError> {
    let study = ed::atom_truncation_study(&cfg.circuit(cfg.l_j)?, cfg.per_mode + 1, 8)?;
    Ok(Report { metric: "max relative difference", value: study.max_relative_difference(), limit: 0.03 })
}

pub fn run(cfg: &RunConfig, out: Output, only: Option<&[String]>, fault: Option<&str>) -> Result<(), CliError> {
    let selected: Vec<&str> = match only {
        Some(names) => names.iter().map(String::as_str).collect(),
        None => CHECKS.to_vec(),
    };
    for name in selected.iter().chain(fault.iter()) {
        if !CHECKS.contains(name) {
            return Err(CliError::Config(format!("unknown check `{name}`; available: {}", CHECKS.join(", "))));
        }
    }
    let mut table = Table::new(out, cfg.format, &["check", "passed", "metric", "value", "limit"])?;
    let mut failed = Vec::new();
    for name in CHECKS.iter().filter(|c| selected.contains(c)) {
        let f = fault == Some(*name);
        let result = match *name {
            "equivalence" => equivalence(cfg, f),
            "gaussian-cosine" => gaussian_cosine(cfg, f),
            "lanczos-dense" => lanczos_dense(cfg, f),
            "free-energy" => free_energy(cfg, f),
            "stationarity" => stationarity(cfg, f),
            _ => truncation(cfg, f),
        };
        let (passed, metric, value, limit) = match result {
            Ok(r) => (r.passed(), r.metric.to_string(), r.value, r.limit),
            Err(e) => (false, e.to_string(), f64::NAN, f64::NAN),
        };
        if !passed {
            failed.push(*name);
        }
        eprintln!("{} {name}: {metric} {value:.3e} (limit {limit:.1e})", if passed { "PASS" } else { "FAIL" });
        table.row(vec![(*name).into(), passed.into(), metric.into(), value.into(), limit.into()])?;
    }
    table.finish()?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("failed checks: {}", failed.join(", "))))
    }
}
