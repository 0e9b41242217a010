use srpt_core::circuit::derive_linear;
use srpt_core::units::{angular_to_ghz, nh};
use srpt_core::CircuitParams;
use std::path::Path;
use std::process::{Command, Output};

fn srpt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srpt")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn rows(csv: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = csv.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    (header, lines.map(|l| l.split(',').map(str::to_string).collect()).collect())
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn classical_origin_is_one() {
    let o = srpt(&["classical", "--points", "1", "--ratios", "0.3"]);
    assert!(o.status.success());
    let (header, data) = rows(&stdout(&o));
    assert_eq!(header, ["L_R0_nH", "L_R0_over_L_J", "two_pi_phi_over_Phi0_rad", "U_over_N_E_J"]);
    assert_eq!(data.len(), 1);
    assert_eq!(num(&data[0][3]), 1.0);
}

#[test]
fn classical_default_family() {
    let o = srpt(&["classical", "--points", "101"]);
    assert!(o.status.success());
    let (_, data) = rows(&stdout(&o));
    assert_eq!(data.len(), 5 * 101);
    let err = stderr(&o);
    let wells: Vec<&str> = err.lines().filter(|l| l.contains("well")).map(|l| l.rsplit(' ').nth(1).unwrap()).collect();
    assert_eq!(wells, ["single", "single", "double", "double", "double"]);
}

#[test]
fn malformed_range_is_a_configuration_error() {
    let o = srpt(&["linear", "--lr0-min", "1.0", "--lr0-max", "0.5", "--lr0-steps", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("must exceed"));
}

#[test]
fn bad_config_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, "L_J = 0.75 nF\n").unwrap();
    let o = srpt(&["linear", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1"));
}

#[test]
fn linear_sign_change_and_library_agreement() {
    let o = srpt(&["linear", "--lr0-min", "0.25", "--lr0-max", "0.35", "--lr0-steps", "51"]);
    assert!(o.status.success());
    let (header, data) = rows(&stdout(&o));
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let first_unstable = data.iter().position(|r| r[col("unstable")] == "true").unwrap();
    let step = 0.1 / 50.0;
    assert!((num(&data[first_unstable][0]) - 0.30).abs() <= step + 1e-12);
    let row = &data[10];
    let d = derive_linear(&CircuitParams::reference(nh(num(&row[0]))).unwrap());
    assert!((num(&row[col("g_GHz")]) - angular_to_ghz(d.g)).abs() < 1e-12 * angular_to_ghz(d.g));
    assert!((num(&row[col("omega_c_GHz")]) - angular_to_ghz(d.omega_c)).abs() < 1e-12 * angular_to_ghz(d.omega_c));
}

#[test]
fn meanfield_grid_and_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("grid.csv");
    let boundary = dir.path().join("boundary.csv");
    let o = srpt(&[
        "meanfield",
        "--lr0-min",
        "0.2",
        "--lr0-max",
        "0.8",
        "--lr0-steps",
        "4",
        "--t-max",
        "150",
        "--t-steps",
        "4",
        "--out",
        out.to_str().unwrap(),
        "--boundary",
        boundary.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, data) = rows(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(header, ["L_R0_nH", "kBT_over_h_GHz", "alpha_over_sqrtN", "phi_th_Wb", "superradiant"]);
    assert_eq!(data.len(), 16);
    // Below the threshold the whole column is normal.
    assert!(data[..4].iter().all(|r| num(&r[2]) == 0.0 && r[4] == "false"));
    // Amplitude never grows with temperature.
    for col in data.chunks(4) {
        assert!(col.windows(2).all(|w| num(&w[1][2]) <= num(&w[0][2])));
    }
    let (_, b) = rows(&std::fs::read_to_string(&boundary).unwrap());
    let tc: Vec<f64> = b.iter().map(|r| num(&r[1])).collect();
    assert!(tc.windows(2).all(|w| w[1] >= w[0]), "{tc:?}");
}

#[test]
fn fluct_normal_phase_shift() {
    let o = srpt(&["fluct", "--lr0-min", "0.2", "--lr0-max", "0.25", "--lr0-steps", "2"]);
    assert!(o.status.success());
    let (header, data) = rows(&stdout(&o));
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let e_j = srpt_core::units::energy_to_ghz(CircuitParams::reference(nh(0.2)).unwrap().e_j());
    for r in &data {
        assert_eq!(r[col("phase")], "normal");
        let shift = num(&r[col("E_J_bar_over_h_GHz")]) - e_j;
        assert!((num(&r[col("delta_eps_over_h_GHz")]) - shift).abs() < 1e-9);
        assert!(num(&r[col("omega_bar_minus_GHz")]) > 0.0);
    }
}

fn ed_run(seed: &str, out: &Path) -> Output {
    srpt(&[
        "ed",
        "--n-atoms",
        "1,2",
        "--per-mode",
        "8",
        "--total",
        "16",
        "--lr0-min",
        "0.4",
        "--lr0-max",
        "0.5",
        "--lr0-steps",
        "2",
        "--seed",
        seed,
        "--out",
        out.to_str().unwrap(),
    ])
}

#[test]
fn ed_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    assert!(ed_run("7", &a).status.success());
    assert!(ed_run("7", &b).status.success());
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let (header, data) = rows(&String::from_utf8(ta).unwrap());
    assert_eq!(
        header,
        [
            "N",
            "L_R0_nH",
            "sector_dims",
            "E_g_over_h_GHz",
            "photons_per_atom",
            "transition_even_GHz",
            "transition_odd_GHz",
            "delta_eps_over_h_GHz"
        ]
    );
    assert_eq!(data.len(), 4);
    // 9 × 9 occupations, split by parity.
    assert_eq!(data[0][2], "41/40");
}

#[test]
fn ed_json_mirrors_csv() {
    let o = srpt(&["ed", "--n-atoms", "1", "--per-mode", "6", "--total", "12", "--lr0-min", "0.4", "--lr0-steps", "1", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["N"], 1);
    assert!(v[0]["transition_even_GHz"].as_f64().unwrap() > 0.0);
}

#[test]
fn validate_subset_passes() {
    let o = srpt(&["validate", "--only", "gaussian-cosine,lanczos-dense"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (_, data) = rows(&stdout(&o));
    assert_eq!(data.len(), 2);
    assert!(data.iter().all(|r| r[1] == "true"));
}

#[test]
fn injected_fault_fails_by_name() {
    let o = srpt(&["validate", "--only", "lanczos-dense", "--inject-fault", "lanczos-dense"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("FAIL lanczos-dense"));
    let o = srpt(&["validate", "--only", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn overrides_take_precedence_over_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "L_g = 0.3 nH\nL_R0 = 0.5 nH\n").unwrap();
    let o = srpt(&["linear", "--config", path.to_str().unwrap(), "--set", "L_g = 0.45 nH"]);
    assert!(o.status.success());
    let (_, data) = rows(&stdout(&o));
    let d = derive_linear(&CircuitParams::reference(nh(0.5)).unwrap());
    assert!((num(&data[0][3]) - angular_to_ghz(d.g)).abs() < 1e-12 * angular_to_ghz(d.g));
}
