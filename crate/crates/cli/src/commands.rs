use crate::config::{Range, RunConfig};
use crate::output::{Cell, Table};
use crate::CliError;
use rayon::prelude::*;
use srpt_core::circuit::{
    classical_critical_inductance, classical_minimum, constrained_potential_normalized, derive_linear,
    polariton_frequencies,
};
use srpt_core::ed::{self, EdConfig, Parity};
use srpt_core::fluct::{self, find_cusp, fluctuation_scan};
use srpt_core::meanfield::{critical_temperature, MeanField};
use srpt_core::units::{angular_to_ghz, energy_to_ghz, nh, to_nh, PHASE_PER_FLUX};
use srpt_core::Temperature;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

pub type Output = Box<dyn Write>;

pub fn open_output(path: Option<&str>) -> Result<Output, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Config(format!("cannot create {p}: {e}")))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn nh_range(min: f64, max: f64, steps: usize) -> Range {
    Range { min: nh(min), max: nh(max), steps }
}

/// Rows are computed in parallel within a batch and written in order after
/// it, which keeps output deterministic while still flushing long scans.
fn batch_size() -> usize {
    4 * rayon::current_num_threads()
}

pub fn classical(cfg: &RunConfig, out: Output) -> Result<(), CliError> {
    let base = cfg.circuit(cfg.l_j)?;
    let l_values: Vec<f64> = match &cfg.ratios {
        Some(r) => r.iter().map(|x| x * cfg.l_j).collect(),
        None if cfg.has_l_r0_axis() => cfg.l_r0_axis(Range { min: 0.2 * cfg.l_j, max: cfg.l_j, steps: 5 })?,
        None => [0.2, 0.4, 0.6, 0.8, 1.0].iter().map(|x| x * cfg.l_j).collect(),
    };
    if l_values.iter().any(|&l| !(l > 0.0)) {
        return Err(CliError::Config("L_R0/L_J values must be positive".into()));
    }
    let phases = fluct::uniform_axis(-cfg.phase_max, cfg.phase_max, cfg.phase_points);
    let phases = if cfg.phase_points == 1 { vec![0.0] } else { phases };
    let mut table = Table::new(out, cfg.format, &["L_R0_nH", "L_R0_over_L_J", "two_pi_phi_over_Phi0_rad", "U_over_N_E_J"])?;
    for &l in &l_values {
        let p = base.with_l_r0(l)?;
        for &x in &phases {
            let u = constrained_potential_normalized(x / PHASE_PER_FLUX, &p);
            table.row(vec![to_nh(l).into(), (l / cfg.l_j).into(), x.into(), u.into()])?;
        }
        let wells = if classical_minimum(&p).superradiant { "double" } else { "single" };
        eprintln!("L_R0 = {:.4} nH ({:.3} L_J): {wells} well", to_nh(l), l / cfg.l_j);
    }
    table.finish()?;
    eprintln!("classical threshold L_J - L_g = {:.4} nH", to_nh(classical_critical_inductance(&base)));
    Ok(())
}

pub fn linear(cfg: &RunConfig, out: Output) -> Result<(), CliError> {
    let axis = cfg.l_r0_axis(nh_range(0.1, 1.0, 91))?;
    let mut table = Table::new(
        out,
        cfg.format,
        &[
            "L_R0_nH",
            "omega_c_GHz",
            "omega_a_GHz",
            "g_GHz",
            "critical_coupling_GHz",
            "omega_plus_GHz",
            "omega_minus_sq_GHz2",
            "unstable",
        ],
    )?;
    let ghz2 = |w2: f64| angular_to_ghz(1.0).powi(2) * w2;
    let mut previous: Option<(f64, bool)> = None;
    for &l in &axis {
        let d = derive_linear(&cfg.circuit(l)?);
        let f = polariton_frequencies(d.omega_c, d.omega_a, d.g);
        let unstable = f.omega_minus_sq < 0.0;
        table.row(vec![
            to_nh(l).into(),
            angular_to_ghz(d.omega_c).into(),
            angular_to_ghz(d.omega_a).into(),
            angular_to_ghz(d.g).into(),
            angular_to_ghz(d.critical_coupling()).into(),
            angular_to_ghz(f.omega_plus).into(),
            ghz2(f.omega_minus_sq).into(),
            unstable.into(),
        ])?;
        if let Some((lp, up)) = previous {
            if up != unstable {
                eprintln!("omega_minus^2 changes sign between {:.4} and {:.4} nH", to_nh(lp), to_nh(l));
            }
        }
        previous = Some((l, unstable));
    }
    table.finish()?;
    Ok(())
}

pub fn meanfield(cfg: &RunConfig, out: Output, boundary: Option<&Path>) -> Result<(), CliError> {
    let axis = cfg.l_r0_axis(nh_range(0.30, 1.0, 20))?;
    let temps_ghz = cfg.temperature_axis(Range { min: 0.0, max: 200.0, steps: 20 })?;
    let temps: Vec<Temperature> = temps_ghz.iter().map(|&t| Temperature::from_ghz(t)).collect();
    let base = MeanField::new(&cfg.circuit(axis[0])?, cfg.atom_dim)?;
    let mut table = Table::new(
        out,
        cfg.format,
        &["L_R0_nH", "kBT_over_h_GHz", "alpha_over_sqrtN", "phi_th_Wb", "superradiant"],
    )?;
    let mut curve = Vec::new();
    let mut failures = Vec::new();
    for &l in &axis {
        let mf = base.with_l_r0(l)?;
        let column: Vec<_> = temps.par_iter().map(|&t| mf.solve(t)).collect();
        let mut amplitude = Vec::with_capacity(temps.len());
        for (res, &t) in column.into_iter().zip(&temps_ghz) {
            let (a, phi, sr) = match res {
                Ok(s) => (s.alpha_over_sqrt_n, s.phi_th, s.superradiant),
                Err(e) => {
                    failures.push(format!("L_R0 = {:.4} nH, kBT/h = {t} GHz: {e}", to_nh(l)));
                    (f64::NAN, f64::NAN, false)
                }
            };
            amplitude.push(a);
            table.row(vec![to_nh(l).into(), t.into(), a.into(), phi.into(), sr.into()])?;
        }
        curve.push((l, critical_temperature(&temps, &amplitude), amplitude[0]));
    }
    table.finish()?;

    let write_boundary = |w: Output| -> io::Result<()> {
        let mut t = Table::new(w, cfg.format, &["L_R0_nH", "Tc_kBT_over_h_GHz", "bounded"])?;
        for &(l, tc, a0) in &curve {
            // A column ordered at every temperature reports the top of the
            // axis with `bounded = false`.
            let (v, bounded) = match tc {
                Some(tc) => (tc.as_ghz(), true),
                None if a0 == 0.0 => (0.0, true),
                None if a0 > 0.0 => (*temps_ghz.last().unwrap(), false),
                None => (f64::NAN, false),
            };
            t.row(vec![to_nh(l).into(), v.into(), bounded.into()])?;
        }
        t.finish().map(|_| ())
    };
    match boundary {
        Some(p) => write_boundary(open_output(Some(&p.display().to_string()))?)?,
        None => {
            for &(l, tc, _) in &curve {
                if let Some(tc) = tc {
                    eprintln!("T_c(L_R0 = {:.4} nH) = {:.3} GHz", to_nh(l), tc.as_ghz());
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("{} grid cells failed; first: {}", failures.len(), failures[0])))
    }
}

pub fn fluct(cfg: &RunConfig, out: Output) -> Result<(), CliError> {
    let axis = cfg.l_r0_axis(nh_range(0.1, 1.0, fluct::SCAN_POINTS))?;
    let p = cfg.circuit(axis[0])?;
    let mut table = Table::new(
        out,
        cfg.format,
        &[
            "L_R0_nH",
            "omega_bar_minus_GHz",
            "omega_bar_plus_GHz",
            "delta_eps_over_h_GHz",
            "phase",
            "omega_bar_a_GHz",
            "g_bar_GHz",
            "critical_coupling_GHz",
            "E_J_bar_over_h_GHz",
            "phi_th_Wb",
        ],
    )?;
    let (mut w_minus, mut gap) = (Vec::new(), Vec::new());
    for chunk in axis.chunks(batch_size()) {
        for q in fluctuation_scan(&p, chunk, cfg.atom_dim)? {
            let phase = if q.solution.superradiant { "superradiant" } else { "normal" };
            table.row(vec![
                to_nh(q.l_r0).into(),
                angular_to_ghz(q.spectrum.omega_minus).into(),
                angular_to_ghz(q.spectrum.omega_plus).into(),
                energy_to_ghz(q.delta_eps).into(),
                phase.into(),
                angular_to_ghz(q.renorm.omega_a_bar).into(),
                angular_to_ghz(q.renorm.g_bar).into(),
                angular_to_ghz(q.critical_coupling()).into(),
                energy_to_ghz(q.renorm.e_j_bar).into(),
                q.solution.phi_th.into(),
            ])?;
            w_minus.push(angular_to_ghz(q.spectrum.omega_minus));
            gap.push(q.critical_coupling() - q.renorm.g_bar);
        }
    }
    table.finish()?;
    match find_cusp(&axis, &w_minus) {
        Some(c) => eprintln!("omega_bar_minus cusp at {:.4} nH ({:.4} GHz)", to_nh(c.l_r0), c.value),
        None => eprintln!("no single cusp in omega_bar_minus on this axis"),
    }
    if let Some(i) = (0..gap.len()).min_by(|&a, &b| gap[a].total_cmp(&gap[b])) {
        eprintln!("g_bar closest to sqrt(omega_bar_a omega_c)/2 at {:.4} nH", to_nh(axis[i]));
    }
    Ok(())
}

pub fn ed(cfg: &RunConfig, out: Output, compare: bool, dump: Option<&Path>) -> Result<(), CliError> {
    let axis = cfg.l_r0_axis(nh_range(0.30, 0.70, 21))?;
    let counts = cfg.atom_counts(&[1, 2, 3])?;
    let mut columns = vec![
        "N",
        "L_R0_nH",
        "sector_dims",
        "E_g_over_h_GHz",
        "photons_per_atom",
        "transition_even_GHz",
        "transition_odd_GHz",
        "delta_eps_over_h_GHz",
    ];
    if compare {
        columns.extend(["mf_photons_per_atom", "mf_omega_bar_minus_GHz", "mf_delta_eps_over_h_GHz"]);
    }
    let reference = if compare { Some(fluctuation_scan(&cfg.circuit(axis[0])?, &axis, cfg.atom_dim)?) } else { None };
    if let Some(dir) = dump {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))?;
    }
    let mut table = Table::new(out, cfg.format, &columns)?;
    for &n in &counts {
        let ec = EdConfig {
            n_atoms: n,
            per_mode_cutoff: cfg.per_mode,
            total_cutoff: cfg.total,
            n_eigenvalues: cfg.eigenvalues.max(2),
            quartic: cfg.quartic,
            seed: cfg.seed,
            ..EdConfig::default()
        };
        ec.validate()?;
        for (i, &l) in axis.iter().enumerate() {
            let p = cfg.circuit(l)?;
            if let Some(dir) = dump {
                for parity in [Parity::Even, Parity::Odd] {
                    let path = dir.join(format!("H_N{n}_LR0_{:.6}nH_{parity}.mtx", to_nh(l)));
                    let f = File::create(&path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
                    ed::export_matrix_market(&ec, &p, parity, BufWriter::new(f))?;
                }
            }
            let r = ed::run(&ec, &p)?;
            let mut row: Vec<Cell> = vec![
                n.into(),
                to_nh(l).into(),
                format!("{}/{}", r.dims.0, r.dims.1).into(),
                energy_to_ghz(r.ground_energy).into(),
                r.photon_number_per_atom.into(),
                energy_to_ghz(r.transition_even).into(),
                energy_to_ghz(r.transition_odd).into(),
                energy_to_ghz(r.delta_eps).into(),
            ];
            if let Some(mf) = &reference {
                let q = &mf[i];
                row.extend([
                    (q.solution.alpha_over_sqrt_n * q.solution.alpha_over_sqrt_n).into(),
                    angular_to_ghz(q.spectrum.omega_minus).into(),
                    energy_to_ghz(q.delta_eps).into(),
                ]);
            }
            table.row(row)?;
        }
    }
    table.finish()?;
    Ok(())
}
